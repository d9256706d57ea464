//! Experiment front end for the relay HARQ simulator: TOML experiment
//! specifications, contour and report runners, and provenance-stamped
//! output.

pub mod config;
mod error;
pub mod output;
pub mod report;

pub use config::{ExperimentKind, ExperimentSpec};
pub use error::{CliError, Result};
pub use output::Provenance;

use std::io::Write;

/// Runs `kind` on `spec` and writes the result to `out`.
pub fn run_experiment<W: Write>(kind: ExperimentKind, spec: &ExperimentSpec, out: W) -> Result<()> {
    let prov = Provenance::new(kind, spec);
    match kind {
        ExperimentKind::OutageContour => {
            output::write_csv(out, &prov, &report::run_outage_contour(spec)?)
        }
        ExperimentKind::SeContour => output::write_csv(out, &prov, &report::run_se_contour(spec)?),
        ExperimentKind::DiversityReport => {
            output::write_json(out, &prov, &report::run_diversity_report(spec)?)
        }
        ExperimentKind::MiTableDump => output::write_csv(out, &prov, &report::run_mi_table(spec)?),
    }
}
