//! Experiment runners. Each returns plain rows; writing them is left to
//! [`crate::output`]. Rows are evaluated one after another, each spreading
//! its trials over the rayon pool.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use ddf_core::diversity::{
    family, full_macro, full_micro, macro_diversity_order, min_mr_for_full_diversity,
    minimal_use_params, scheme_channel, MuChoice,
};
use ddf_core::engine::{
    bisect_snr, find_snr_for_target, slow_link_adaptation, RelayMode, Scenario, SearchOutcome,
    SnrAxis, Target,
};
use ddf_core::mi::{Constellation, MiTable};
use ddf_core::schemes::Scheme;
use serde::Serialize;

use crate::config::{Conditioning, ContourAxis, ExperimentKind, ExperimentSpec};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageRow {
    pub snr_sd_db: f64,
    /// `inf` when the target cannot be met in the search range.
    pub snr_rd_db_required: f64,
    pub relay_decode: String,
    pub scheme: String,
    pub stderr_db: Option<f64>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeRow {
    pub snr_sd_db: f64,
    pub snr_rd_db_required: f64,
    pub target_se: f64,
    pub scheme: String,
    pub chosen_rate: Option<f64>,
    pub stderr_db: Option<f64>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiRow {
    pub order: u32,
    pub snr_db: f64,
    pub mi_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityEntry {
    pub scheme: String,
    /// Sub-frame after which the relay decodes, `None` if it never does.
    pub relay_decode: Option<usize>,
    pub start: Option<usize>,
    pub diversities: Vec<u32>,
    pub bits: Vec<u64>,
    pub macro_order: u32,
    pub full_macro: bool,
    pub full_micro: bool,
    /// Phase 2 carries exactly `K` bits, the edge of full macro diversity.
    pub boundary: bool,
    /// Smallest relay order giving full micro diversity at this start.
    pub min_m_r: Option<u32>,
    pub minimal_use: Option<MuChoice>,
}

static PROGRESS: AtomicBool = AtomicBool::new(false);

/// Turns per-row progress lines on standard error on or off.
pub fn set_progress(on: bool) {
    PROGRESS.store(on, Ordering::Relaxed);
}

fn progress(kind: ExperimentKind, done: &AtomicUsize, total: usize) {
    let d = done.fetch_add(1, Ordering::Relaxed) + 1;
    if PROGRESS.load(Ordering::Relaxed) {
        eprintln!("{}: {d}/{total}", kind.command());
    }
}

fn mode_for(c: Conditioning) -> RelayMode {
    match c {
        Conditioning::DecodedAfter(d) => RelayMode::Forced(Some(d + 1)),
        Conditioning::Never => RelayMode::Forced(None),
        Conditioning::Marginal => RelayMode::Dynamic,
    }
}

/// Required `SNR_RD` (or common SNR) for an outage target, per scheme and
/// relay conditioning.
pub fn run_outage_contour(spec: &ExperimentSpec) -> Result<Vec<OutageRow>> {
    spec.validate(ExperimentKind::OutageContour)?;
    let frame = spec.frame.frame()?;
    let base = spec.base_budget()?;
    let conds = spec.conditionings(&frame)?;
    let sd_points: Vec<Option<f64>> = match spec.outage.axis {
        ContourAxis::Rd => spec.outage.snr_sd_db.iter().copied().map(Some).collect(),
        ContourAxis::Common => vec![None],
    };
    let mut tasks = Vec::new();
    for &sd in &sd_points {
        for &c in &conds {
            for entry in &spec.schemes {
                tasks.push((sd, c, entry));
            }
        }
    }
    let done = AtomicUsize::new(0);
    let target = Target::OutageAtMost(spec.outage.target);
    tasks
        .iter()
        .map(|&(sd, c, entry)| {
            let mut budget = base;
            let axis = match sd {
                Some(db) => {
                    budget.snr_sd_db = db;
                    SnrAxis::Rd
                }
                None => SnrAxis::Common,
            };
            let scenario = Scenario {
                scheme: entry.scheme()?,
                frame: frame.clone(),
                budget,
            };
            let out = find_snr_for_target(
                &scenario,
                mode_for(c),
                axis,
                target,
                spec.search.range(),
                spec.experiment.trials,
                spec.experiment.seed,
                entry.tables(),
            )?;
            progress(ExperimentKind::OutageContour, &done, tasks.len());
            let (required, stderr_db, feasible) = match out {
                SearchOutcome::Found { snr_db, stderr_db } => (snr_db, Some(stderr_db), true),
                SearchOutcome::Infeasible => (f64::INFINITY, None, false),
            };
            Ok(OutageRow {
                snr_sd_db: sd.unwrap_or(required),
                snr_rd_db_required: required,
                relay_decode: c.label(),
                scheme: entry.label()?,
                stderr_db,
                feasible,
            })
        })
        .collect()
}

/// Required `SNR_RD` for a spectral-efficiency target under slow link
/// adaptation over the closed-loop rate set.
pub fn run_se_contour(spec: &ExperimentSpec) -> Result<Vec<SeRow>> {
    spec.validate(ExperimentKind::SeContour)?;
    let family = spec.frame.family()?;
    let base = spec.base_budget()?;
    let target_se = spec.se.target;
    let mut top_rate = f64::NEG_INFINITY;
    for (_, f) in &family {
        top_rate = top_rate.max(f.rate_after(1)?);
    }
    let mut tasks = Vec::new();
    for &sd in &spec.se.snr_sd_db {
        for entry in &spec.schemes {
            tasks.push((sd, entry));
        }
    }
    let (trials, seed) = (spec.experiment.trials, spec.experiment.seed);
    let done = AtomicUsize::new(0);
    tasks
        .iter()
        .map(|&(sd, entry)| {
            let scheme = entry.scheme()?;
            let tables = entry.tables();
            let mut budget = base;
            budget.snr_sd_db = sd;
            let adapt = |rd: f64| {
                let b = SnrAxis::Rd.apply(&budget, rd);
                slow_link_adaptation(
                    &scheme,
                    &family,
                    &b,
                    RelayMode::Dynamic,
                    trials,
                    seed,
                    tables,
                )
            };
            // The efficiency never exceeds the first-sub-frame rate.
            let out = if target_se > top_rate {
                SearchOutcome::Infeasible
            } else {
                bisect_snr(
                    |rd| adapt(rd).map(|c| c.estimate),
                    Target::SeAtLeast(target_se),
                    spec.search.range(),
                )?
            };
            let row = match out {
                SearchOutcome::Found { snr_db, stderr_db } => SeRow {
                    snr_sd_db: sd,
                    snr_rd_db_required: snr_db,
                    target_se,
                    scheme: entry.label()?,
                    chosen_rate: Some(adapt(snr_db)?.rate),
                    stderr_db: Some(stderr_db),
                    feasible: true,
                },
                SearchOutcome::Infeasible => SeRow {
                    snr_sd_db: sd,
                    snr_rd_db_required: f64::INFINITY,
                    target_se,
                    scheme: entry.label()?,
                    chosen_rate: None,
                    stderr_db: None,
                    feasible: false,
                },
            };
            progress(ExperimentKind::SeContour, &done, tasks.len());
            Ok(row)
        })
        .collect()
}

/// Diversity bookkeeping of every scheme for every relay decoding instant.
pub fn run_diversity_report(spec: &ExperimentSpec) -> Result<Vec<DiversityEntry>> {
    spec.validate(ExperimentKind::DiversityReport)?;
    let frame = spec.frame.frame()?;
    let n = frame.n_max();
    let m_s = frame.m_s();
    let mut entries = Vec::new();
    for entry in &spec.schemes {
        let scheme = entry.scheme()?;
        for d in 1..=n {
            let start = (d < n).then_some(d + 1);
            let ch = scheme_channel(&scheme, &frame, start)?;
            let (min_m_r, minimal_use) = match start {
                Some(m) => {
                    let l2 = frame.symbols_between(m, n) * m_s as u64;
                    let min_m_r = family(&scheme)
                        .and_then(|f| min_mr_for_full_diversity(f, frame.k(), l2, m_s));
                    let mu = match scheme {
                        Scheme::PatchedMonostreamMu => minimal_use_params(&frame, m).ok(),
                        _ => None,
                    };
                    (min_m_r, mu)
                }
                None => (None, None),
            };
            entries.push(DiversityEntry {
                scheme: entry.label()?,
                relay_decode: start.map(|m| m - 1),
                start,
                diversities: ch.diversities().to_vec(),
                bits: ch.bits().to_vec(),
                macro_order: macro_diversity_order(&scheme, &frame, start)?,
                full_macro: full_macro(&scheme, &frame, start)?,
                full_micro: full_micro(&scheme, &frame, start)?,
                boundary: ch.bits().len() == 2 && ch.top_bits() == frame.k(),
                min_m_r,
                minimal_use,
            });
        }
    }
    Ok(entries)
}

/// Mutual information tables of the configured QAM orders.
pub fn run_mi_table(spec: &ExperimentSpec) -> Result<Vec<MiRow>> {
    spec.validate(ExperimentKind::MiTableDump)?;
    let grid = spec.mi_table.grid();
    let tables: Vec<MiTable> = spec
        .mi_table
        .orders
        .iter()
        .map(|&m| Ok(MiTable::build(&Constellation::qam(m)?, &grid)?))
        .collect::<Result<_>>()?;
    Ok(tables
        .iter()
        .flat_map(|t| {
            t.snr_grid_db()
                .iter()
                .zip(t.mi_bits())
                .map(|(&snr_db, &mi_bits)| MiRow {
                    order: t.order_bits(),
                    snr_db,
                    mi_bits,
                })
        })
        .collect())
}
