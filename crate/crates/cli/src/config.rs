//! Experiment configuration: a flat `key=value` file overlaid with flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use aqs_core::{Attack, MessageSpec, PauliString, Qubit, Scheme, SingleQubitGate, TestMode, Variant};
use serde::Serialize;

/// Keys accepted in config files and as `--key value` flags.
pub const KEYS: [&str; 9] = ["n", "trials", "seed", "scheme", "variant", "test_mode", "attack", "message", "shots"];

/// Largest supported message size; the swap test holds `2n + 1` qubits.
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("config file line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("cannot read config file {path}: {reason}")]
    Io { path: String, reason: String },
}

impl ConfigError {
    fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Self::Invalid { key: key.to_string(), reason: reason.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SchemeSpec {
    Pauli,
    Ih,
    /// Named single-qubit gates `U`, `V`.
    Uv(String, String),
}

impl SchemeSpec {
    pub fn build(&self) -> Scheme {
        match self {
            Self::Pauli => Scheme::Pauli,
            Self::Ih => Scheme::ih(),
            Self::Uv(u, v) => Scheme::UV {
                u: SingleQubitGate::named(u).expect("validated gate name"),
                v: SingleQubitGate::named(v).expect("validated gate name"),
            },
        }
    }
}

impl FromStr for SchemeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pauli" => Ok(Self::Pauli),
            "ih" => Ok(Self::Ih),
            _ => {
                let body = s.strip_prefix("uv:").ok_or_else(|| format!("`{s}` is not one of pauli, ih, uv:U,V"))?;
                let (u, v) = body.split_once(',').ok_or_else(|| format!("`{s}` needs two gates, e.g. uv:I,H"))?;
                for g in [u, v] {
                    if SingleQubitGate::<f64>::named(g).is_none() {
                        return Err(format!("unknown gate `{g}` (expected one of I X Y Z H S T)"));
                    }
                }
                Ok(Self::Uv(u.to_string(), v.to_string()))
            }
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pauli => f.write_str("pauli"),
            Self::Ih => f.write_str("ih"),
            Self::Uv(u, v) => write!(f, "uv:{u},{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AttackSpec {
    Forgery(Attack),
    /// Swap tests on an exchange-symmetric entangled pair; no protocol run.
    SymmetricDemo,
}

fn parse_indices(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a qubit index"))).collect()
}

impl FromStr for AttackSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "none" {
            return Ok(Self::Forgery(Attack::None));
        }
        if s == "symmetric-demo" {
            return Ok(Self::SymmetricDemo);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(|| {
            format!("`{s}` is not one of none, pauli:LETTERS, ma-exchange:I,J, ma-exchange-z:I,J, permutation:P, symmetric-demo")
        })?;
        let attack = match kind {
            "pauli" => Attack::Pauli(arg.parse::<PauliString>().map_err(|e| e.to_string())?),
            "ma-exchange" => Attack::MaExchange(parse_indices(arg)?),
            "ma-exchange-z" => Attack::MaExchangePhase(parse_indices(arg)?),
            "permutation" => Attack::Permutation(parse_indices(arg)?),
            _ => return Err(format!("unknown attack `{kind}`")),
        };
        Ok(Self::Forgery(attack))
    }
}

impl fmt::Display for AttackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Forgery(a) => a.fmt(f),
            Self::SymmetricDemo => f.write_str("symmetric-demo"),
        }
    }
}

/// Message preparation per trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MessageKind {
    Haar,
    Zero,
    One,
    Plus,
    Minus,
}

impl MessageKind {
    pub fn spec(self, n: usize) -> MessageSpec<f64> {
        let q = match self {
            Self::Haar => return MessageSpec::RandomUnknown,
            Self::Zero => Qubit::zero(),
            Self::One => Qubit::one(),
            Self::Plus => Qubit::plus(),
            Self::Minus => Qubit::minus(),
        };
        MessageSpec::Known(vec![q; n])
    }
}

impl FromStr for MessageKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "haar" => Self::Haar,
            "zero" => Self::Zero,
            "one" => Self::One,
            "plus" => Self::Plus,
            "minus" => Self::Minus,
            _ => return Err(format!("`{s}` is not one of haar, zero, one, plus, minus")),
        })
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Haar => "haar",
            Self::Zero => "zero",
            Self::One => "one",
            Self::Plus => "plus",
            Self::Minus => "minus",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub scheme: SchemeSpec,
    pub variant: Variant,
    pub test_mode: TestMode,
    pub attack: AttackSpec,
    pub message: MessageKind,
    /// Swap tests per equality check in swap mode.
    pub shots: usize,
}

/// Stable, serializable echo of an [`ExperimentConfig`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub scheme: String,
    pub variant: Variant,
    pub test_mode: TestMode,
    pub attack: String,
    pub message: String,
    pub shots: usize,
}

fn parse_with<V>(
    map: &BTreeMap<String, String>,
    key: &'static str,
    f: impl Fn(&str) -> Result<V, String>,
) -> Result<Option<V>, ConfigError> {
    map.get(key).map(|raw| f(raw.trim()).map_err(|r| ConfigError::invalid(key, r))).transpose()
}

fn number<V: FromStr>(s: &str) -> Result<V, String> {
    s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))
}

impl ExperimentConfig {
    /// Builds and validates a config from raw key/value pairs.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(ConfigError::UnknownKey(k.clone()));
        }
        let n: usize = parse_with(map, "n", number)?.ok_or(ConfigError::Missing("n"))?;
        let trials: usize = parse_with(map, "trials", number)?.ok_or(ConfigError::Missing("trials"))?;
        let scheme = parse_with(map, "scheme", str::parse)?.ok_or(ConfigError::Missing("scheme"))?;
        let seed = parse_with(map, "seed", number)?.unwrap_or(0);
        let variant = parse_with(map, "variant", |s| match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            _ => Err(format!("`{s}` is not one of A, B")),
        })?
        .unwrap_or(Variant::A);
        let test_mode = parse_with(map, "test_mode", |s| match s {
            "projective" => Ok(TestMode::Projective),
            "swap" => Ok(TestMode::Swap),
            _ => Err(format!("`{s}` is not one of projective, swap")),
        })?
        .unwrap_or(TestMode::Projective);
        let attack = parse_with(map, "attack", str::parse)?.unwrap_or(AttackSpec::Forgery(Attack::None));
        let message = parse_with(map, "message", str::parse)?.unwrap_or(MessageKind::Haar);
        let shots = parse_with(map, "shots", number)?.unwrap_or(1);

        if !(1..=MAX_QUBITS).contains(&n) {
            return Err(ConfigError::invalid("n", format!("must be between 1 and {MAX_QUBITS}")));
        }
        if trials == 0 {
            return Err(ConfigError::invalid("trials", "must be at least 1"));
        }
        if shots == 0 {
            return Err(ConfigError::invalid("shots", "must be at least 1"));
        }
        let config = Self { n, trials, seed, scheme, variant, test_mode, attack, message, shots };
        config.check_attack()?;
        Ok(config)
    }

    fn check_attack(&self) -> Result<(), ConfigError> {
        let n = self.n;
        let bad = |r: String| Err(ConfigError::invalid("attack", r));
        match &self.attack {
            AttackSpec::Forgery(Attack::Pauli(q)) if q.len() != n => bad(format!("{} letters for {n} qubits", q.len())),
            AttackSpec::Forgery(Attack::MaExchange(idx) | Attack::MaExchangePhase(idx)) => {
                match idx.iter().find(|&&i| i >= n) {
                    Some(i) => bad(format!("qubit {i} out of range for {n} qubits")),
                    None => Ok(()),
                }
            }
            AttackSpec::Forgery(Attack::Permutation(p)) => {
                let mut seen = p.clone();
                seen.sort_unstable();
                if seen != (0..n).collect::<Vec<_>>() {
                    bad(format!("{p:?} is not a permutation of 0..{n}"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            n: self.n,
            trials: self.trials,
            seed: self.seed,
            scheme: self.scheme.to_string(),
            variant: self.variant,
            test_mode: self.test_mode,
            attack: self.attack.to_string(),
            message: self.message.to_string(),
            shots: self.shots,
        }
    }
}

/// Parses flat `key=value` text. Blank lines and `#` comments are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Malformed {
            line: i + 1,
            reason: format!("expected key=value, got `{line}`"),
        })?;
        let key = k.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        map.insert(key.to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Merges an optional config file with flag values; flags win.
pub fn parse_config(flags: &BTreeMap<String, String>, file: Option<&Path>) -> Result<ExperimentConfig, ConfigError> {
    let mut map = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    map.extend(flags.iter().map(|(k, v)| (k.clone(), v.clone())));
    ExperimentConfig::from_map(&map)
}
