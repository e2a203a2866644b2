//! Experiment harness for the `aqs` binary: configuration, seeded trial
//! batches and report rendering.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{parse_config, parse_config_text, AttackSpec, ConfigError, ExperimentConfig, MessageKind, SchemeSpec};
pub use report::{emit_report, render_demo, render_report, Format};
pub use runner::{demo_configs, run, run_demo, trial_rng, DemoReport, ExperimentReport, TrialRecord};
