//! Bisection search for the SNR meeting an outage or spectral-efficiency
//! target.

use serde::Serialize;

use super::{estimate_metric, Estimate, Metric, RelayMode, Scenario};
use crate::channel::LinkBudget;
use crate::mi::MiTables;
use crate::{error::param, Error, Result};

/// Long-term SNR varied by the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SnrAxis {
    Sd,
    Rd,
    Sr,
    /// `SNR_SD` and `SNR_RD` moved together.
    Common,
}

impl SnrAxis {
    pub fn apply(&self, budget: &LinkBudget, db: f64) -> LinkBudget {
        let mut b = *budget;
        match self {
            SnrAxis::Sd => b.snr_sd_db = db,
            SnrAxis::Rd => b.snr_rd_db = db,
            SnrAxis::Sr => b.snr_sr_db = db,
            SnrAxis::Common => {
                b.snr_sd_db = db;
                b.snr_rd_db = db;
            }
        }
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Target {
    OutageAtMost(f64),
    SeAtLeast(f64),
}

impl Target {
    pub fn met(&self, e: &Estimate) -> bool {
        match *self {
            Target::OutageAtMost(v) => e.value <= v,
            Target::SeAtLeast(v) => e.value >= v,
        }
    }

    pub fn metric(&self) -> Metric {
        match self {
            Target::OutageAtMost(_) => Metric::Outage,
            Target::SeAtLeast(_) => Metric::SpectralEfficiency,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchRange {
    pub lo_db: f64,
    pub hi_db: f64,
    pub tol_db: f64,
}

impl Default for SearchRange {
    fn default() -> Self {
        Self {
            lo_db: -20.0,
            hi_db: 40.0,
            tol_db: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SearchOutcome {
    /// Smallest SNR meeting the target, within the tolerance, and its
    /// standard error.
    Found { snr_db: f64, stderr_db: f64 },
    /// The target is not met at the top of the range.
    Infeasible,
}

impl SearchOutcome {
    pub fn snr_db(&self) -> Option<f64> {
        match self {
            SearchOutcome::Found { snr_db, .. } => Some(*snr_db),
            SearchOutcome::Infeasible => None,
        }
    }
}

/// Step used to estimate the metric slope around the solution.
const SLOPE_PROBE_DB: f64 = 0.5;

/// Bisects `metric` over `range` for the smallest SNR meeting `target`.
///
/// The standard error combines the metric's sampling error, mapped through
/// the local slope, with the uniform error of the final bracket.
pub fn bisect_snr<F>(mut metric: F, target: Target, range: SearchRange) -> Result<SearchOutcome>
where
    F: FnMut(f64) -> Result<Estimate>,
{
    let SearchRange {
        lo_db,
        hi_db,
        tol_db,
    } = range;
    if !(lo_db.is_finite() && hi_db.is_finite() && lo_db < hi_db && tol_db > 0.0) {
        return param(format!(
            "search range [{lo_db}, {hi_db}] dB with tolerance {tol_db} dB is invalid"
        ));
    }
    let at_hi = metric(hi_db)?;
    let at_lo = metric(lo_db)?;
    match (target.met(&at_lo), target.met(&at_hi)) {
        (true, false) => {
            return Err(Error::Ordering(format!(
                "target met at {lo_db} dB but not at {hi_db} dB"
            )))
        }
        (false, false) => return Ok(SearchOutcome::Infeasible),
        (true, true) => {
            return Ok(SearchOutcome::Found {
                snr_db: lo_db,
                stderr_db: 0.0,
            })
        }
        (false, true) => {}
    }
    let (mut lo, mut hi) = (lo_db, hi_db);
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if target.met(&metric(mid)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let centre = metric(x)?;
    let up = metric(x + SLOPE_PROBE_DB)?;
    let down = metric(x - SLOPE_PROBE_DB)?;
    let slope = (up.value - down.value) / (2.0 * SLOPE_PROBE_DB);
    let sampling = if slope != 0.0 {
        centre.stderr / slope.abs()
    } else {
        f64::INFINITY
    };
    let bracket = (hi - lo) / 12f64.sqrt();
    Ok(SearchOutcome::Found {
        snr_db: x,
        stderr_db: (sampling * sampling + bracket * bracket).sqrt(),
    })
}

/// Searches the SNR on `axis` at which a scenario meets `target`, reusing
/// the same trial streams at every probed SNR.
#[allow(clippy::too_many_arguments)]
pub fn find_snr_for_target(
    scenario: &Scenario,
    mode: RelayMode,
    axis: SnrAxis,
    target: Target,
    range: SearchRange,
    n_trials: u64,
    seed: u64,
    tables: &MiTables,
) -> Result<SearchOutcome> {
    let metric = |db: f64| {
        let s = Scenario {
            budget: axis.apply(&scenario.budget, db),
            ..scenario.clone()
        };
        estimate_metric(&s, mode, target.metric(), n_trials, seed, tables)
    };
    bisect_snr(metric, target, range)
}
