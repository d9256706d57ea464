//! CSV and JSON writers with a provenance header.

use std::io::Write;

use serde::Serialize;

use crate::config::{ExperimentKind, ExperimentSpec};
use crate::error::Result;

pub const TOOL: &str = concat!("ddfsim ", env!("CARGO_PKG_VERSION"));

/// What produced an output file.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance<'a> {
    pub tool: &'static str,
    pub experiment: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub config: &'a ExperimentSpec,
}

impl<'a> Provenance<'a> {
    pub fn new(kind: ExperimentKind, spec: &'a ExperimentSpec) -> Self {
        let mut p = Self {
            tool: TOOL,
            experiment: kind.command(),
            seed: spec.experiment.seed,
            trials: spec.experiment.trials,
            config: spec,
        };
        if matches!(
            kind,
            ExperimentKind::DiversityReport | ExperimentKind::MiTableDump
        ) {
            p.trials = 0;
        }
        p
    }
}

/// Writes `#` provenance lines followed by the rows as CSV.
pub fn write_csv<W: Write, T: Serialize>(mut w: W, prov: &Provenance, rows: &[T]) -> Result<()> {
    writeln!(w, "# tool: {}", prov.tool)?;
    writeln!(w, "# experiment: {}", prov.experiment)?;
    writeln!(w, "# seed: {}", prov.seed)?;
    writeln!(w, "# trials: {}", prov.trials)?;
    writeln!(w, "# config: {}", serde_json::to_string(prov.config)?)?;
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a, T: Serialize> {
    provenance: &'a Provenance<'a>,
    entries: &'a [T],
}

/// Writes `{"provenance": ..., "entries": [...]}` as pretty JSON.
pub fn write_json<W: Write, T: Serialize>(
    mut w: W,
    prov: &Provenance,
    entries: &[T],
) -> Result<()> {
    serde_json::to_writer_pretty(
        &mut w,
        &JsonReport {
            provenance: prov,
            entries,
        },
    )?;
    writeln!(w)?;
    Ok(())
}
