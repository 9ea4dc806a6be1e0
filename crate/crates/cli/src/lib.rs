//! Command-line front end for the `suther_lax` library.
//!
//! `verify` runs the property suite over seeded points, `simulate` integrates
//! one trajectory with diagnostics, `project` compares the projection solver
//! with direct integration and `rmatrix` dumps `r₁₂(q)`.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::execute;
pub use config::{Cli, Command, ConfigError, Format, RunConfig};
pub use report::{Outcome, SCHEMA};

/// Text destined for the primary output (`--out` or stdout) and for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub primary: String,
    pub secondary: Option<String>,
}

/// With `--format csv` the table is primary and the JSON summary goes to
/// stderr; otherwise the JSON report is primary.
pub fn render(cfg: &RunConfig, outcome: &Outcome) -> Result<Rendered, csv::Error> {
    let json = report::to_json(&outcome.report);
    Ok(match (cfg.format, &outcome.table) {
        (Format::Csv, Some(t)) => Rendered {
            primary: t.to_csv()?,
            secondary: Some(json),
        },
        _ => Rendered {
            primary: json,
            secondary: None,
        },
    })
}
