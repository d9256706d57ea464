//! Monte Carlo engine for the DDF protocol: per-trial timeline, outage
//! probability, HARQ spectral efficiency, slow link adaptation and SNR
//! threshold search.

mod adaptation;
mod search;

pub use adaptation::{closed_loop_family, slow_link_adaptation, RateChoice};
pub use search::{bisect_snr, find_snr_for_target, SearchOutcome, SearchRange, SnrAxis, Target};

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{draw_fading, trial_stream, LinkBudget};
use crate::frame::FrameConfig;
use crate::mi::MiTables;
use crate::schemes::{block_profile_for_plan, relay_plan, BlockProfile, Scheme};
use crate::{error::param, Result};

/// Smallest number of trials accepted by the estimators.
pub const MIN_TRIALS: u64 = 1_000;

/// Relative slack when comparing accumulated MI with a rate, so that rates
/// equal to the alphabet entropy remain reachable despite round-off.
const RATE_SLACK: f64 = 1e-12;

/// One operating point: scheme, frame layout and link budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub scheme: Scheme,
    pub frame: FrameConfig,
    pub budget: LinkBudget,
}

/// How the relay start sub-frame is chosen in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelayMode {
    /// From the source-relay mutual information of the trial.
    Dynamic,
    /// Fixed start sub-frame (`None`: the relay never transmits); the
    /// source-relay fading is ignored.
    Forced(Option<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    /// Sub-frame from which the relay transmits.
    pub start: Option<usize>,
    /// First sub-frame after which the destination decodes.
    pub dest_first_decode: Option<usize>,
    /// `R_n` at the first decoding, zero if the destination never decodes.
    pub rate_credited: f64,
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub n_trials: u64,
    pub seed: u64,
}

pub fn rate_after_n(frame: &FrameConfig, n: usize) -> Result<f64> {
    frame.rate_after(n)
}

fn reaches(mi: f64, rate: f64) -> bool {
    mi >= rate * (1.0 - RATE_SLACK)
}

/// Start sub-frame of a relay whose source-relay link carries `i_sr` bits
/// per channel use: one past the first sub-frame `m <= N_max - 1` with
/// `i_sr >= R_m`.
pub fn relay_activation(frame: &FrameConfig, i_sr: f64) -> Option<usize> {
    (1..frame.n_max())
        .find(|&m| reaches(i_sr, frame.rate_after(m).expect("index in range")))
        .map(|m| m + 1)
}

/// Mutual information per channel use accumulated over the first `n`
/// sub-frames.
pub fn accumulated_mi(
    profile: &BlockProfile,
    frame: &FrameConfig,
    n: usize,
    tables: &MiTables,
) -> Result<f64> {
    if profile.horizon != n {
        return param(format!(
            "profile horizon {} differs from sub-frame {n}",
            profile.horizon
        ));
    }
    let mut bits = 0.0;
    for b in &profile.blocks {
        bits += b.symbols() as f64 * tables.lookup(b.order, b.snr)?;
    }
    Ok(bits / frame.symbols_through(n) as f64)
}

fn check_mode(frame: &FrameConfig, mode: RelayMode) -> Result<()> {
    if let RelayMode::Forced(start) = mode {
        frame.check_start(start, frame.n_max())?;
    }
    Ok(())
}

/// Runs trial `trial_index` of the stream keyed by `seed`.
pub fn simulate_trial(
    scenario: &Scenario,
    mode: RelayMode,
    trial_index: u64,
    seed: u64,
    tables: &MiTables,
) -> Result<TrialOutcome> {
    let Scenario {
        scheme,
        frame,
        budget,
    } = scenario;
    let draw = draw_fading(budget.n_rx, &mut trial_stream(seed, trial_index))?;
    let start = match mode {
        RelayMode::Dynamic => {
            let i_sr = tables.lookup(frame.m_s(), draw.h_sr.norm_sqr() * budget.sr())?;
            relay_activation(frame, i_sr)
        }
        RelayMode::Forced(start) => start,
    };
    if let Scheme::PatchedGolden { .. } | Scheme::PatchedSilver { .. } = scheme {
        return Err(crate::Error::Unsupported(format!(
            "{} is not evaluated by the outage engine",
            scheme.name()
        )));
    }
    let plan = relay_plan(scheme, frame, start)?;
    for n in 1..=frame.n_max() {
        let s = start.filter(|&m| m <= n);
        let profile = block_profile_for_plan(plan, frame, s, n, &draw, budget)?;
        let rate = frame.rate_after(n)?;
        if reaches(accumulated_mi(&profile, frame, n, tables)?, rate) {
            return Ok(TrialOutcome {
                start,
                dest_first_decode: Some(n),
                rate_credited: rate,
            });
        }
    }
    Ok(TrialOutcome {
        start,
        dest_first_decode: None,
        rate_credited: 0.0,
    })
}

/// Joint counts of (relay start, destination first decoding) over a batch
/// of trials. Index 0 stands for "never" on both axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally {
    n_max: usize,
    counts: Vec<u64>,
    seed: u64,
}

impl Tally {
    fn new(n_max: usize, seed: u64) -> Self {
        Self {
            n_max,
            counts: vec![0; (n_max + 1) * (n_max + 1)],
            seed,
        }
    }

    fn idx(&self, start: Option<usize>, decode: Option<usize>) -> usize {
        start.unwrap_or(0) * (self.n_max + 1) + decode.unwrap_or(0)
    }

    fn add(mut self, o: &TrialOutcome) -> Self {
        let i = self.idx(o.start, o.dest_first_decode);
        self.counts[i] += 1;
        self
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn trials(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Trials with the given relay start and first decoding.
    pub fn count(&self, start: Option<usize>, decode: Option<usize>) -> u64 {
        self.counts[self.idx(start, decode)]
    }

    /// Every start value that can be recorded, "never" first.
    pub fn starts(&self) -> impl Iterator<Item = Option<usize>> {
        std::iter::once(None).chain((2..=self.n_max).map(Some))
    }

    /// Every first-decoding value, "never" first.
    pub fn decodes(&self) -> impl Iterator<Item = Option<usize>> {
        std::iter::once(None).chain((1..=self.n_max).map(Some))
    }

    pub fn start_count(&self, start: Option<usize>) -> u64 {
        self.decodes().map(|d| self.count(start, d)).sum()
    }

    pub fn outage(&self) -> Estimate {
        let failures: u64 = self.starts().map(|s| self.count(s, None)).sum();
        binomial(failures, self.trials(), self.seed)
    }

    /// Mean credited rate with its standard error.
    pub fn spectral_efficiency(&self, frame: &FrameConfig) -> Estimate {
        let n = self.trials() as f64;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for d in 1..=self.n_max {
            let c: u64 = self.starts().map(|s| self.count(s, Some(d))).sum();
            let r = frame.rate_after(d).expect("index in range");
            sum += c as f64 * r;
            sum_sq += c as f64 * r * r;
        }
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0);
        Estimate {
            value: mean,
            stderr: (var / n).sqrt(),
            n_trials: self.trials(),
            seed: self.seed,
        }
    }

    /// Outage regrouped by relay start: `Σ_M P(M) P(out | M)`.
    pub fn outage_by_start(&self) -> f64 {
        let n = self.trials() as f64;
        self.starts()
            .filter(|&s| self.start_count(s) > 0)
            .map(|s| {
                let ns = self.start_count(s) as f64;
                (ns / n) * (self.count(s, None) as f64 / ns)
            })
            .sum()
    }

    /// Spectral efficiency regrouped by relay start and first decoding:
    /// `Σ_M Σ_n P(M) P(first decode n | M) R_n`.
    pub fn spectral_efficiency_by_start(&self, frame: &FrameConfig) -> f64 {
        let n = self.trials() as f64;
        let mut total = 0.0;
        for s in self.starts() {
            let ns = self.start_count(s) as f64;
            if ns == 0.0 {
                continue;
            }
            for d in 1..=self.n_max {
                let r = frame.rate_after(d).expect("index in range");
                total += (ns / n) * (self.count(s, Some(d)) as f64 / ns) * r;
            }
        }
        total
    }
}

fn binomial(successes: u64, n: u64, seed: u64) -> Estimate {
    let p = successes as f64 / n as f64;
    Estimate {
        value: p,
        stderr: (p * (1.0 - p) / n as f64).sqrt(),
        n_trials: n,
        seed,
    }
}

/// Runs trials `0..n_trials` in parallel. Counts are integers, so the result
/// does not depend on the number of threads or the scheduling.
pub fn run_trials(
    scenario: &Scenario,
    mode: RelayMode,
    n_trials: u64,
    seed: u64,
    tables: &MiTables,
) -> Result<Tally> {
    if n_trials < MIN_TRIALS {
        return param(format!(
            "at least {MIN_TRIALS} trials are needed, got {n_trials}"
        ));
    }
    scenario.budget.validate()?;
    scenario.scheme.validate(scenario.frame.m_s())?;
    check_mode(&scenario.frame, mode)?;
    let n_max = scenario.frame.n_max();
    (0..n_trials)
        .into_par_iter()
        .try_fold(
            || Tally::new(n_max, seed),
            |t, i| simulate_trial(scenario, mode, i, seed, tables).map(|o| t.add(&o)),
        )
        .try_reduce(|| Tally::new(n_max, seed), |a, b| Ok(a.merge(b)))
}

/// Probability that the destination has not decoded after the last
/// sub-frame, with the relay start drawn per trial.
pub fn estimate_outage(
    scenario: &Scenario,
    n_trials: u64,
    seed: u64,
    tables: &MiTables,
) -> Result<Estimate> {
    Ok(run_trials(scenario, RelayMode::Dynamic, n_trials, seed, tables)?.outage())
}

/// Outage with the relay start forced to `start`.
pub fn conditioned_outage(
    scenario: &Scenario,
    start: Option<usize>,
    n_trials: u64,
    seed: u64,
    tables: &MiTables,
) -> Result<Estimate> {
    Ok(run_trials(scenario, RelayMode::Forced(start), n_trials, seed, tables)?.outage())
}

/// HARQ spectral efficiency: mean rate credited at the first decoding.
pub fn estimate_spectral_efficiency(
    scenario: &Scenario,
    n_trials: u64,
    seed: u64,
    tables: &MiTables,
) -> Result<Estimate> {
    let tally = run_trials(scenario, RelayMode::Dynamic, n_trials, seed, tables)?;
    Ok(tally.spectral_efficiency(&scenario.frame))
}

/// Outage or spectral efficiency of a scenario under a relay mode.
pub fn estimate_metric(
    scenario: &Scenario,
    mode: RelayMode,
    metric: Metric,
    n_trials: u64,
    seed: u64,
    tables: &MiTables,
) -> Result<Estimate> {
    let tally = run_trials(scenario, mode, n_trials, seed, tables)?;
    Ok(match metric {
        Metric::Outage => tally.outage(),
        Metric::SpectralEfficiency => tally.spectral_efficiency(&scenario.frame),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Metric {
    Outage,
    SpectralEfficiency,
}
