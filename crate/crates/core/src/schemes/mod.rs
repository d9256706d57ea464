//! Relaying schemes: effective channels, Patching algebra, distributed
//! space-time codes, and the per-realization block decomposition of the
//! codeword consumed by the engine.

mod alamouti;
mod dstbc;
mod patching;

pub use alamouti::{
    alamouti_relay_symbols, patched_alamouti_combine, patched_alamouti_encode,
    patched_alamouti_hyper_symbols,
};
pub use dstbc::{
    dstbc_codeword, dstbc_hyper_symbols, dstbc_tilde_y1, patched_dstbc_combine,
    patched_dstbc_encode, DstbcCode, DSTBC_SCALE,
};
pub use patching::{
    patch_coefficients, patch_combine_rx, patch_ratio, patch_symbol, PatchCoefficients,
};

use serde::{Deserialize, Serialize};

use crate::channel::{norm_sqr, post_mrc_snr, FadingDraw, LinkBudget};
use crate::diversity::{min_mr_for_full_diversity, minimal_use_params, DiversityFamily};
use crate::frame::FrameConfig;
use crate::{error::param, Complex64, Error, Result};

/// Largest constellation order the relay may use.
pub const MAX_RELAY_ORDER: u32 = 6;

/// How many phase-2 slots a Patched Monostream relay patches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatchSlots {
    /// Every phase-2 slot (as far as phase-1 symbols allow).
    Full,
    /// The first `p` phase-2 slots.
    Count(u64),
}

/// Relay constellation order of a patched scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelayOrder {
    Fixed(u32),
    /// Smallest order giving full diversity for the actual start sub-frame.
    Adaptive,
}

/// Relaying scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// No relay.
    Direct,
    Monostream,
    /// Monostream where both transmitters raise their phase-2 order so that
    /// phase 2 carries at least `K` bits.
    MonostreamAdaptedMod,
    PatchedMonostream {
        m_r: u32,
        slots: PatchSlots,
    },
    /// Patched Monostream with the minimal relay order and slot count that
    /// reach `K` bits in phase 2.
    PatchedMonostreamMu,
    DistributedAlamouti,
    AlamoutiAdaptedMod,
    PatchedAlamouti {
        m_r: RelayOrder,
    },
    PatchedGolden {
        m_r: u32,
    },
    PatchedSilver {
        m_r: u32,
    },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Direct => "direct",
            Scheme::Monostream => "monostream",
            Scheme::MonostreamAdaptedMod => "monostream_adapted_mod",
            Scheme::PatchedMonostream { .. } => "patched_monostream",
            Scheme::PatchedMonostreamMu => "patched_monostream_mu",
            Scheme::DistributedAlamouti => "distributed_alamouti",
            Scheme::AlamoutiAdaptedMod => "alamouti_adapted_mod",
            Scheme::PatchedAlamouti { .. } => "patched_alamouti",
            Scheme::PatchedGolden { .. } => "patched_golden",
            Scheme::PatchedSilver { .. } => "patched_silver",
        }
    }

    /// Checks relay orders against the source order.
    pub fn validate(&self, m_s: u32) -> Result<()> {
        let fixed = match *self {
            Scheme::PatchedMonostream { m_r, .. }
            | Scheme::PatchedGolden { m_r }
            | Scheme::PatchedSilver { m_r }
            | Scheme::PatchedAlamouti {
                m_r: RelayOrder::Fixed(m_r),
            } => Some(m_r),
            _ => None,
        };
        let patched = !matches!(
            self,
            Scheme::Direct
                | Scheme::Monostream
                | Scheme::MonostreamAdaptedMod
                | Scheme::DistributedAlamouti
                | Scheme::AlamoutiAdaptedMod
        );
        if patched {
            patch_ratio(m_s, m_s)?;
        }
        if let Some(m_r) = fixed {
            if ![2, 4, 6].contains(&m_r) {
                return param(format!("relay order must be 2, 4 or 6, got {m_r}"));
            }
            patch_ratio(m_s, m_r)?;
        }
        Ok(())
    }
}

/// Relay behaviour once the start sub-frame is known, over the whole frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayPlan {
    /// The relay never transmits.
    Silent,
    Monostream,
    /// Both transmitters switch to `order` bits per symbol in phase 2.
    AdaptedMonostream {
        order: u32,
    },
    /// The first `slots` phase-2 slots carry order-`m_r` hyper-symbols.
    PatchedMonostream {
        m_r: u32,
        slots: u64,
    },
    Alamouti,
    AdaptedAlamouti {
        order: u32,
    },
    PatchedAlamouti {
        m_r: u32,
    },
    PatchedDstbc {
        code: DstbcCode,
        m_r: u32,
    },
}

/// Smallest even order `>= m_s` for which `symbols * order >= K`, capped at
/// [`MAX_RELAY_ORDER`].
fn adapted_order(frame: &FrameConfig, phase2_symbols: u64) -> u32 {
    let k = frame.k();
    (frame.m_s()..=MAX_RELAY_ORDER)
        .step_by(2)
        .find(|&m| phase2_symbols * m as u64 >= k)
        .unwrap_or(MAX_RELAY_ORDER)
        .max(frame.m_s())
}

/// Resolves data-dependent scheme choices (adapted orders, patch counts)
/// for a relay that transmits from sub-frame `start` on.
pub fn relay_plan(scheme: &Scheme, frame: &FrameConfig, start: Option<usize>) -> Result<RelayPlan> {
    scheme.validate(frame.m_s())?;
    let Some(m) = start else {
        return Ok(RelayPlan::Silent);
    };
    frame.check_start(Some(m), frame.n_max())?;
    let m_s = frame.m_s();
    let s2_total = frame.symbols_between(m, frame.n_max());
    let l2_total = s2_total * m_s as u64;
    let plan = match *scheme {
        Scheme::Direct => RelayPlan::Silent,
        Scheme::Monostream => RelayPlan::Monostream,
        Scheme::MonostreamAdaptedMod => RelayPlan::AdaptedMonostream {
            order: adapted_order(frame, s2_total),
        },
        Scheme::PatchedMonostream { m_r, slots } => RelayPlan::PatchedMonostream {
            m_r,
            slots: match slots {
                PatchSlots::Full => s2_total,
                PatchSlots::Count(p) => p,
            },
        },
        Scheme::PatchedMonostreamMu => {
            let mu = minimal_use_params(frame, m)?;
            if mu.m_r == m_s || mu.p == 0 {
                RelayPlan::Monostream
            } else {
                RelayPlan::PatchedMonostream {
                    m_r: mu.m_r,
                    slots: mu.p,
                }
            }
        }
        Scheme::DistributedAlamouti => RelayPlan::Alamouti,
        Scheme::AlamoutiAdaptedMod => RelayPlan::AdaptedAlamouti {
            order: adapted_order(frame, s2_total),
        },
        Scheme::PatchedAlamouti { m_r } => {
            let m_r = match m_r {
                RelayOrder::Fixed(v) => v,
                RelayOrder::Adaptive => {
                    min_mr_for_full_diversity(DiversityFamily::Alamouti, frame.k(), l2_total, m_s)
                        .unwrap_or(MAX_RELAY_ORDER)
                }
            };
            RelayPlan::PatchedAlamouti { m_r }
        }
        Scheme::PatchedGolden { m_r } => RelayPlan::PatchedDstbc {
            code: DstbcCode::Golden,
            m_r,
        },
        Scheme::PatchedSilver { m_r } => RelayPlan::PatchedDstbc {
            code: DstbcCode::Silver,
            m_r,
        },
    };
    Ok(plan)
}

/// Transmitter of a coherent Monostream sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transmitter {
    Source,
    Relay,
}

/// Coherent sum `Σ sqrt(snr_j) h_j` over arbitrary links, element-wise over
/// the receive antennas.
pub fn coherent_sum(links: &[(f64, &[Complex64])], n_rx: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n_rx];
    for &(snr, h) in links {
        let g = snr.sqrt();
        for (o, &v) in out.iter_mut().zip(h) {
            *o += v * g;
        }
    }
    out
}

/// Effective Monostream channel of the active transmitters.
pub fn compose_monostream(
    draw: &FadingDraw,
    budget: &LinkBudget,
    active: &[Transmitter],
) -> Vec<Complex64> {
    let links: Vec<(f64, &[Complex64])> = active
        .iter()
        .map(|t| match t {
            Transmitter::Source => (budget.sd(), draw.h_sd.as_slice()),
            Transmitter::Relay => (budget.rd(), draw.h_rd.as_slice()),
        })
        .collect();
    coherent_sum(&links, draw.h_sd.len())
}

/// Per-symbol SNR after Alamouti combining, `snr_sd ‖h_sd‖² + snr_rd ‖h_rd‖²`.
pub fn compose_alamouti_snr(draw: &FadingDraw, budget: &LinkBudget) -> f64 {
    post_mrc_snr(&draw.h_sd, budget.sd()) + post_mrc_snr(&draw.h_rd, budget.rd())
}

/// One homogeneous codeword segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub bits: u64,
    pub order: u32,
    pub snr: f64,
}

impl Block {
    pub fn symbols(&self) -> u64 {
        self.bits / self.order as u64
    }
}

/// Block decomposition of the codeword received up to sub-frame `horizon`
/// for one fading realization.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockProfile {
    pub horizon: usize,
    pub blocks: Vec<Block>,
}

impl BlockProfile {
    fn new(horizon: usize) -> Self {
        Self {
            horizon,
            blocks: Vec::with_capacity(3),
        }
    }

    fn push(&mut self, bits: u64, order: u32, snr: f64) {
        if bits > 0 {
            self.blocks.push(Block { bits, order, snr });
        }
    }

    pub fn total_bits(&self) -> u64 {
        self.blocks.iter().map(|b| b.bits).sum()
    }
}

/// Splits the codeword received after `n` sub-frames into blocks of equal
/// constellation order and post-processing SNR. The relay transmits from
/// sub-frame `start` on; `None` means it stays silent.
pub fn block_profile(
    scheme: &Scheme,
    frame: &FrameConfig,
    start: Option<usize>,
    n: usize,
    draw: &FadingDraw,
    budget: &LinkBudget,
) -> Result<BlockProfile> {
    frame.check_start(start, n)?;
    if let Scheme::PatchedGolden { .. } | Scheme::PatchedSilver { .. } = scheme {
        return Err(Error::Unsupported(format!(
            "{} is not evaluated by the outage engine",
            scheme.name()
        )));
    }
    let plan = relay_plan(scheme, frame, start)?;
    block_profile_for_plan(plan, frame, start, n, draw, budget)
}

/// [`block_profile`] for an already resolved relay plan.
pub fn block_profile_for_plan(
    plan: RelayPlan,
    frame: &FrameConfig,
    start: Option<usize>,
    n: usize,
    draw: &FadingDraw,
    budget: &LinkBudget,
) -> Result<BlockProfile> {
    frame.check_start(start, n)?;
    let m_s = frame.m_s();
    let direct = post_mrc_snr(&draw.h_sd, budget.sd());
    let mut profile = BlockProfile::new(n);
    let start = match (start, plan) {
        (Some(m), p) if p != RelayPlan::Silent && budget.rd() > 0.0 => m,
        _ => {
            profile.push(frame.symbols_through(n) * m_s as u64, m_s, direct);
            return Ok(profile);
        }
    };
    let s1 = frame.symbols_through(start - 1);
    let s2 = frame.symbols_between(start, n);
    let coherent = || {
        norm_sqr(&compose_monostream(
            draw,
            budget,
            &[Transmitter::Source, Transmitter::Relay],
        ))
    };
    let alamouti = || compose_alamouti_snr(draw, budget);
    let ms = m_s as u64;
    match plan {
        RelayPlan::Silent => unreachable!("handled above"),
        RelayPlan::Monostream => {
            profile.push(s1 * ms, m_s, direct);
            profile.push(s2 * ms, m_s, coherent());
        }
        RelayPlan::AdaptedMonostream { order } => {
            profile.push(s1 * ms, m_s, direct);
            profile.push(s2 * order as u64, order, coherent());
        }
        RelayPlan::Alamouti => {
            profile.push(s1 * ms, m_s, direct);
            profile.push(s2 * ms, m_s, alamouti());
        }
        RelayPlan::AdaptedAlamouti { order } => {
            profile.push(s1 * ms, m_s, direct);
            profile.push(s2 * order as u64, order, alamouti());
        }
        RelayPlan::PatchedMonostream { m_r, slots } => {
            let a = patch_coefficients(m_s, m_r)?;
            let r = a.ratio() as u64;
            let p = patched_slots(slots, s1, s2, r);
            let patched_channel = coherent_sum(
                &[
                    (budget.sd(), draw.h_sd.as_slice()),
                    (a.last() * a.last() * budget.rd(), draw.h_rd.as_slice()),
                ],
                draw.h_sd.len(),
            );
            profile.push((s1 - p * (r - 1)) * ms, m_s, direct);
            profile.push(p * m_r as u64, m_r, norm_sqr(&patched_channel));
            profile.push((s2 - p) * ms, m_s, coherent());
        }
        RelayPlan::PatchedAlamouti { m_r } => {
            let a = patch_coefficients(m_s, m_r)?;
            let r = a.ratio() as u64;
            let q = patched_slots(s2, s1, s2, r);
            let patched_snr = direct + a.last() * a.last() * post_mrc_snr(&draw.h_rd, budget.rd());
            profile.push((s1 - q * (r - 1)) * ms, m_s, direct);
            profile.push(q * m_r as u64, m_r, patched_snr);
            profile.push((s2 - q) * ms, m_s, alamouti());
        }
        RelayPlan::PatchedDstbc { code, .. } => {
            return Err(Error::Unsupported(format!(
                "patched {code:?} code is not evaluated by the outage engine"
            )));
        }
    }
    Ok(profile)
}

/// Patched slots received so far: at most the requested count, the phase-2
/// slots already sent, and what the phase-1 symbols can feed (`r - 1` per
/// slot).
fn patched_slots(requested: u64, s1: u64, s2: u64, r: u64) -> u64 {
    if r <= 1 {
        return 0;
    }
    requested.min(s2).min(s1 / (r - 1))
}
