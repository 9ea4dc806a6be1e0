pub mod project;
pub mod rmatrix;
pub mod simulate;
pub mod verify;

use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::report::{self, Outcome, EXIT_ABORT};

/// Runs the command; library errors become an aborted report with exit 3.
pub fn execute(cfg: &RunConfig) -> Outcome {
    let result = match cfg.command {
        Command::Verify => verify::run(cfg),
        Command::Simulate => simulate::run(cfg),
        Command::Project => project::run(cfg),
        Command::Rmatrix => rmatrix::run(cfg),
    };
    result.unwrap_or_else(|e| {
        let mut m = report::header(cfg.command.as_str());
        m.insert("status".into(), json!("aborted"));
        m.insert("error".into(), json!(e.to_string()));
        Outcome {
            exit: EXIT_ABORT,
            report: Value::Object(m),
            table: None,
        }
    })
}
