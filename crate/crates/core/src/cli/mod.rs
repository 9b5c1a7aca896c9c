//! Configuration, reports and subcommands of the `margulis` binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{cmd_domain, cmd_holonomy, cmd_invariants};
pub use config::{CocycleSpec, SceneConfig, VerifyConfig};
pub use report::Report;
