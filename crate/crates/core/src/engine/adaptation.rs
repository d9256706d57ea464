//! Slow link adaptation over a family of frame layouts.

use serde::Serialize;

use super::{estimate_metric, Estimate, Metric, RelayMode, Scenario};
use crate::channel::LinkBudget;
use crate::frame::FrameConfig;
use crate::mi::MiTables;
use crate::schemes::Scheme;
use crate::{error::param, Result};

/// Closed-loop frames for each first-sub-frame coding rate.
pub fn closed_loop_family(rates: &[f64], t_i: u64, m_s: u32) -> Result<Vec<(f64, FrameConfig)>> {
    rates
        .iter()
        .map(|&r| FrameConfig::closed_loop(r, t_i, m_s).map(|f| (r, f)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateChoice {
    pub rate: f64,
    pub estimate: Estimate,
    /// Spectral efficiency of every candidate, by ascending rate.
    pub per_rate: Vec<(f64, Estimate)>,
}

/// Picks the coding rate with the highest estimated spectral efficiency;
/// ties go to the lower rate.
#[allow(clippy::too_many_arguments)]
pub fn slow_link_adaptation(
    scheme: &Scheme,
    family: &[(f64, FrameConfig)],
    budget: &LinkBudget,
    mode: RelayMode,
    n_trials: u64,
    seed: u64,
    tables: &MiTables,
) -> Result<RateChoice> {
    if family.is_empty() {
        return param("the rate set is empty");
    }
    let mut sorted: Vec<&(f64, FrameConfig)> = family.iter().collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut per_rate = Vec::with_capacity(sorted.len());
    for (rate, frame) in sorted {
        let s = Scenario {
            scheme: *scheme,
            frame: frame.clone(),
            budget: *budget,
        };
        let e = estimate_metric(&s, mode, Metric::SpectralEfficiency, n_trials, seed, tables)?;
        per_rate.push((*rate, e));
    }
    let (rate, estimate) = per_rate
        .iter()
        .copied()
        .reduce(|best, cand| {
            if cand.1.value > best.1.value {
                cand
            } else {
                best
            }
        })
        .expect("non-empty");
    Ok(RateChoice {
        rate,
        estimate,
        per_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_single_rate_sets() {
        let t = MiTables::standard();
        let b = LinkBudget::new(5.0, 5.0, 10.0, 2).unwrap();
        assert!(
            slow_link_adaptation(&Scheme::Monostream, &[], &b, RelayMode::Dynamic, 1000, 0, t)
                .is_err()
        );
        let fam = closed_loop_family(&[0.7], 10, 2).unwrap();
        let c = slow_link_adaptation(
            &Scheme::Monostream,
            &fam,
            &b,
            RelayMode::Dynamic,
            1000,
            0,
            t,
        )
        .unwrap();
        assert_eq!(c.rate, 0.7);
    }

    #[test]
    fn saturation_selects_the_highest_rate() {
        let t = MiTables::standard();
        let b = LinkBudget::new(60.0, 0.0, 10.0, 2).unwrap();
        let fam = closed_loop_family(&[0.5, 0.6, 0.7, 0.8, 0.9, 1.0], 10, 2).unwrap();
        let c = slow_link_adaptation(
            &Scheme::Monostream,
            &fam,
            &b,
            RelayMode::Dynamic,
            1000,
            0,
            t,
        )
        .unwrap();
        assert_eq!(c.rate, 1.0);
    }
}
