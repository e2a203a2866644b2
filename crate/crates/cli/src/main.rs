use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use aqs_cli::{emit_report, parse_config, render_demo, render_report, run, run_demo, Format, SchemeSpec};
use aqs_core::validate_encryption_set;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "aqs", version, about = "Arbitrated quantum signature forgery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded batch of trials.
    Run(Box<RunArgs>),
    /// Run the four headline experiments with a fixed seed.
    Demo(DemoArgs),
    /// Check that a scheme's operators form a quantum encryption set.
    ValidateScheme(ValidateArgs),
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include one record per trial.
    #[arg(long)]
    per_trial: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// pauli | ih | uv:U,V
    #[arg(long)]
    scheme: Option<String>,
    /// A | B
    #[arg(long)]
    variant: Option<String>,
    /// projective | swap
    #[arg(long = "test-mode", alias = "test_mode")]
    test_mode: Option<String>,
    /// none | pauli:LETTERS | ma-exchange:I,J | ma-exchange-z:I,J | permutation:P | symmetric-demo
    #[arg(long)]
    attack: Option<String>,
    /// haar | zero | one | plus | minus
    #[arg(long)]
    message: Option<String>,
    /// Swap tests per equality check
    #[arg(long)]
    shots: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 2012)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ValidateArgs {
    /// pauli | ih | uv:U,V
    #[arg(long)]
    scheme: String,
    /// Comma-separated probabilities, one per operator (default uniform).
    #[arg(long)]
    probs: Option<String>,
    #[arg(long)]
    json: bool,
}

impl RunArgs {
    fn flags(&self) -> BTreeMap<String, String> {
        [
            ("n", &self.n),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("scheme", &self.scheme),
            ("variant", &self.variant),
            ("test_mode", &self.test_mode),
            ("attack", &self.attack),
            ("message", &self.message),
            ("shots", &self.shots),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect()
    }
}

#[derive(Serialize)]
struct ValidationOutput {
    scheme: String,
    valid: bool,
    dimension: usize,
    violations: Vec<String>,
    gram: Vec<Vec<[f64; 2]>>,
}

enum Failure {
    Config(String),
    Runtime(String),
}

fn validate(args: &ValidateArgs) -> Result<String, Failure> {
    let spec: SchemeSpec =
        args.scheme.parse().map_err(|e| Failure::Config(format!("invalid value for `scheme`: {e}")))?;
    let ops = spec.build().operator_set();
    let probs: Vec<f64> = match &args.probs {
        None => vec![1.0 / ops.len() as f64; ops.len()],
        Some(list) => list
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::Config(format!("invalid value for `probs`: `{list}`")))?,
    };
    let report = validate_encryption_set(&ops, &probs);
    let out = ValidationOutput {
        scheme: spec.to_string(),
        valid: report.valid,
        dimension: report.dimension,
        violations: report.violations.iter().map(ToString::to_string).collect(),
        gram: report.gram.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect(),
    };
    if args.json {
        return Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n");
    }
    let mut text = format!(
        "scheme {}: {}\n",
        out.scheme,
        if out.valid { "valid encryption set" } else { "NOT an encryption set" }
    );
    for v in &out.violations {
        text.push_str(&format!("  - {v}\n"));
    }
    text.push_str("Tr(U_j^dagger U_k):\n");
    for row in &out.gram {
        let cells: Vec<String> = row.iter().map(|[re, im]| format!("{re:>6.3}{im:+.3}i")).collect();
        text.push_str(&format!("  {}\n", cells.join("  ")));
    }
    Ok(text)
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let runtime = |e: aqs_core::AqsError| Failure::Runtime(e.to_string());
    let (text, out) = match cli.command {
        Command::Run(args) => {
            let config =
                parse_config(&args.flags(), args.config.as_deref()).map_err(|e| Failure::Config(e.to_string()))?;
            let report = run(&config, args.output.per_trial).map_err(runtime)?;
            (render_report(&report, args.output.format), args.output.out)
        }
        Command::Demo(args) => {
            let demo = run_demo(args.seed, args.output.per_trial).map_err(runtime)?;
            (render_demo(&demo, args.output.format), args.output.out)
        }
        Command::ValidateScheme(args) => (validate(&args)?, None),
    };
    emit_report(&text, out.as_deref()).map_err(|e| Failure::Runtime(format!("cannot write report: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
