//! Ordered session event log, exported as JSON lines.

use serde::Serialize;

use crate::protocol::{TestMode, Variant};
use crate::state::BellOutcome;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TranscriptEvent {
    Initialized {
        qubits: usize,
        k_at_bits: usize,
        k_bt_bits: usize,
    },
    /// Alice's Bell outcomes as transmitted, i.e. under the classical pad.
    Signed {
        m_a: String,
    },
    Forged {
        attack: String,
    },
    BobMeasured {
        m_b: String,
    },
    TrentVerdict {
        variant: Variant,
        test_mode: TestMode,
        passed: bool,
        pass_probability: f64,
    },
    Returned {
        verdict: bool,
    },
    BobVerdict {
        accepted: bool,
        bob_test_passed: bool,
        recovered_fidelity: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Transcript {
    events: Vec<TranscriptEvent>,
}

impl Transcript {
    pub fn push(&mut self, event: TranscriptEvent) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[TranscriptEvent] {
        &self.events
    }

    /// One JSON object per line, in event order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("transcript events serialize"));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn render_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub(crate) fn render_outcomes(outcomes: &[BellOutcome]) -> String {
    outcomes.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
