//! Matryoshka block channels, the macro-diversity bound and the
//! micro/macro diversity predicates of each scheme.

use serde::Serialize;

use crate::frame::FrameConfig;
use crate::schemes::{patch_ratio, relay_plan, RelayPlan, Scheme, MAX_RELAY_ORDER};
use crate::{error::param, Result};

/// Nested block channel: block `i` has diversity `d[i]` and carries `l[i]`
/// bits, highest diversity first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatryoshkaChannel {
    d: Vec<u32>,
    l: Vec<u64>,
}

impl MatryoshkaChannel {
    pub fn new(d: Vec<u32>, l: Vec<u64>) -> Result<Self> {
        if d.len() != l.len() || d.is_empty() {
            return param("diversity and bit vectors must be non-empty and equally long");
        }
        if d.windows(2).any(|w| w[1] >= w[0]) {
            return param(format!(
                "diversity orders {d:?} must be strictly decreasing"
            ));
        }
        Ok(Self { d, l })
    }

    pub fn diversities(&self) -> &[u32] {
        &self.d
    }

    pub fn bits(&self) -> &[u64] {
        &self.l
    }

    pub fn total_bits(&self) -> u64 {
        self.l.iter().sum()
    }

    /// Bits of the highest-diversity block.
    pub fn top_bits(&self) -> u64 {
        self.l[0]
    }

    /// Same channel without its zero-bit blocks.
    pub fn pruned(&self) -> Self {
        let (d, l) = self
            .d
            .iter()
            .zip(&self.l)
            .filter(|(_, &l)| l > 0)
            .map(|(&d, &l)| (d, l))
            .unzip();
        Self { d, l }
    }
}

/// Diversity bound: `d_i` for the first block `i` whose cumulative bit count
/// (from the top) reaches `r_c Σ L`.
pub fn matryoshka_bound(ch: &MatryoshkaChannel, r_c: f64) -> Result<u32> {
    if !(r_c > 0.0 && r_c <= 1.0) {
        return param(format!("coding rate must be in (0, 1], got {r_c}"));
    }
    let ch = ch.pruned();
    let total = ch.total_bits() as f64;
    if total == 0.0 {
        return param("the channel carries no bits");
    }
    let need = r_c * total * (1.0 - 1e-9);
    let mut acc = 0.0;
    for (&d, &l) in ch.d.iter().zip(&ch.l) {
        acc += l as f64;
        if acc >= need {
            return Ok(d);
        }
    }
    Ok(*ch.d.last().expect("non-empty after the total check"))
}

/// Monostream channel with one relay per entry of `starts`. Starts beyond
/// the horizon are ignored.
pub fn monostream_snr_channel(
    frame: &FrameConfig,
    starts: &[usize],
    n: usize,
) -> Result<MatryoshkaChannel> {
    frame.check_start(None, n)?;
    if starts.windows(2).any(|w| w[1] < w[0]) {
        return param("relay start sub-frames must be sorted");
    }
    if let Some(&s) = starts.iter().find(|&&s| s < 2) {
        return param(format!("relay start sub-frame {s} must be at least 2"));
    }
    let ms = frame.m_s() as u64;
    let active: Vec<usize> = starts.iter().copied().filter(|&s| s <= n).collect();
    let mut edges = vec![1];
    edges.extend(&active);
    edges.push(n + 1);
    let mut d = Vec::new();
    let mut l = Vec::new();
    for (j, w) in edges.windows(2).enumerate().rev() {
        d.push(j as u32 + 1);
        l.push(frame.symbols_between(w[0], w[1] - 1) * ms);
    }
    MatryoshkaChannel::new(d, l)
}

/// Patched Monostream blocks `(L'1, L'2)` after patching `p` phase-2 slots.
pub fn patched_blocks(l1: u64, l2: u64, p: u64, m_s: u32, m_r: u32) -> Result<(u64, u64)> {
    if m_r < m_s {
        return param(format!("relay order {m_r} below source order {m_s}"));
    }
    let ms = m_s as u64;
    let mr = m_r as u64;
    if p * ms > l2 {
        return param(format!(
            "{p} patched slots exceed the {} phase-2 slots",
            l2 / ms
        ));
    }
    let l1p = l1.saturating_sub(p * (mr - ms));
    let l2p = p * mr + (l2 - p * ms);
    Ok((l1p, l2p))
}

/// Family of a relaying scheme with respect to the diversity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiversityFamily {
    /// Monostream, with or without adaptation or Patching.
    Monostream,
    /// Distributed Alamouti, with or without adaptation or Patching.
    Alamouti,
    /// Patched Golden and Silver codes.
    GoldenSilver,
}

/// Block sizes `(L'1, L'2)` of patched distributed space-time codes.
pub fn dstbc_blocks(
    family: DiversityFamily,
    l1: u64,
    l2: u64,
    m_s: u32,
    m_r: u32,
) -> Result<(u64, u64)> {
    let r = patch_ratio(m_s, m_r)? as u64;
    let ms = m_s as u64;
    let mr = m_r as u64;
    match family {
        DiversityFamily::Alamouti => Ok((l1.saturating_sub(l2 * (r - 1)), (l1 + l2).min(l2 * r))),
        DiversityFamily::GoldenSilver => Ok((
            l1.saturating_sub(l2 / ms * mr),
            (l1 + l2).min(l2 / ms * (mr + ms)),
        )),
        DiversityFamily::Monostream => param("Monostream is not a space-time code"),
    }
}

/// Smallest even relay order `>= m_s` (at most 6) giving full diversity with
/// `l2` phase-2 bits, or `None` if no such order exists.
pub fn min_mr_for_full_diversity(
    family: DiversityFamily,
    k: u64,
    l2: u64,
    m_s: u32,
) -> Option<u32> {
    if l2 == 0 {
        return None;
    }
    let (k, l2, ms) = (k as f64, l2 as f64, m_s as f64);
    let threshold = match family {
        DiversityFamily::Monostream | DiversityFamily::Alamouti => k * ms / l2,
        DiversityFamily::GoldenSilver => ms * (k / l2 - 1.0),
    };
    (m_s..=MAX_RELAY_ORDER)
        .step_by(2)
        .find(|&m| m as f64 >= threshold * (1.0 - 1e-12))
}

/// Relay order and patched slot count chosen by Minimal Use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MuChoice {
    pub m_r: u32,
    pub p: u64,
    /// False when no order up to 6 lets phase 2 reach `K` bits; the choice
    /// is then the largest order with as many slots as possible.
    pub feasible: bool,
}

/// Smallest `(m_r, p)`, ordered by `m_r` then `p`, with `L'2 >= K` for a
/// relay transmitting from sub-frame `start`.
pub fn minimal_use_params(frame: &FrameConfig, start: usize) -> Result<MuChoice> {
    frame.check_start(Some(start), frame.n_max())?;
    let m_s = frame.m_s();
    patch_ratio(m_s, m_s)?;
    let k = frame.k();
    let s1 = frame.symbols_through(start - 1);
    let s2 = frame.symbols_between(start, frame.n_max());
    let l2 = s2 * m_s as u64;
    if l2 >= k {
        return Ok(MuChoice {
            m_r: m_s,
            p: 0,
            feasible: true,
        });
    }
    let orders = (m_s + 2..=MAX_RELAY_ORDER).step_by(2);
    for m_r in orders.clone() {
        let gain = (m_r - m_s) as u64;
        let p = (k - l2).div_ceil(gain);
        let r = (m_r / m_s) as u64;
        if p <= s2 && p * (r - 1) <= s1 {
            return Ok(MuChoice {
                m_r,
                p,
                feasible: true,
            });
        }
    }
    let m_r = orders.last().unwrap_or(m_s);
    let r = (m_r / m_s) as u64;
    let p = if r > 1 { s2.min(s1 / (r - 1)) } else { 0 };
    Ok(MuChoice {
        m_r,
        p,
        feasible: false,
    })
}

/// Whole-frame SNR channel of a scheme whose relay transmits from `start`.
pub fn scheme_channel(
    scheme: &Scheme,
    frame: &FrameConfig,
    start: Option<usize>,
) -> Result<MatryoshkaChannel> {
    let plan = relay_plan(scheme, frame, start)?;
    let n = frame.n_max();
    let ms = frame.m_s() as u64;
    let Some(m) = start.filter(|_| plan != RelayPlan::Silent) else {
        return MatryoshkaChannel::new(vec![1], vec![frame.symbols_through(n) * ms]);
    };
    let s1 = frame.symbols_through(m - 1);
    let s2 = frame.symbols_between(m, n);
    let (l1, l2) = (s1 * ms, s2 * ms);
    let (l1p, l2p) = match plan {
        RelayPlan::Silent => unreachable!("handled above"),
        RelayPlan::Monostream | RelayPlan::Alamouti => (l1, l2),
        RelayPlan::AdaptedMonostream { order } | RelayPlan::AdaptedAlamouti { order } => {
            (l1, s2 * order as u64)
        }
        RelayPlan::PatchedMonostream { m_r, slots } => {
            let r = patch_ratio(frame.m_s(), m_r)? as u64;
            let p = if r > 1 {
                slots.min(s2).min(s1 / (r - 1))
            } else {
                0
            };
            patched_blocks(l1, l2, p, frame.m_s(), m_r)?
        }
        RelayPlan::PatchedAlamouti { m_r } => {
            dstbc_blocks(DiversityFamily::Alamouti, l1, l2, frame.m_s(), m_r)?
        }
        RelayPlan::PatchedDstbc { m_r, .. } => {
            dstbc_blocks(DiversityFamily::GoldenSilver, l1, l2, frame.m_s(), m_r)?
        }
    };
    MatryoshkaChannel::new(vec![2, 1], vec![l2p, l1p])
}

pub fn family(scheme: &Scheme) -> Option<DiversityFamily> {
    match scheme {
        Scheme::Direct => None,
        Scheme::Monostream
        | Scheme::MonostreamAdaptedMod
        | Scheme::PatchedMonostream { .. }
        | Scheme::PatchedMonostreamMu => Some(DiversityFamily::Monostream),
        Scheme::DistributedAlamouti
        | Scheme::AlamoutiAdaptedMod
        | Scheme::PatchedAlamouti { .. } => Some(DiversityFamily::Alamouti),
        Scheme::PatchedGolden { .. } | Scheme::PatchedSilver { .. } => {
            Some(DiversityFamily::GoldenSilver)
        }
    }
}

/// Macro-diversity order of a scheme for a fixed start sub-frame, evaluated
/// at the rate `K / Σ L` of its SNR channel.
pub fn macro_diversity_order(
    scheme: &Scheme,
    frame: &FrameConfig,
    start: Option<usize>,
) -> Result<u32> {
    let ch = scheme_channel(scheme, frame, start)?;
    matryoshka_bound(&ch, frame.k() as f64 / ch.total_bits() as f64)
}

/// Full macro diversity: phase 2 carries at least `K` bits.
pub fn full_macro(scheme: &Scheme, frame: &FrameConfig, start: Option<usize>) -> Result<bool> {
    let ch = scheme_channel(scheme, frame, start)?;
    Ok(ch.diversities().len() == 2 && ch.top_bits() >= frame.k())
}

/// Full micro diversity. Monostream-type schemes need both blocks to carry
/// `K` bits; space-time codes only need phase 2 to.
pub fn full_micro(scheme: &Scheme, frame: &FrameConfig, start: Option<usize>) -> Result<bool> {
    let ch = scheme_channel(scheme, frame, start)?;
    if ch.diversities().len() < 2 {
        return Ok(false);
    }
    let k = frame.k();
    Ok(match family(scheme) {
        None => false,
        Some(DiversityFamily::Monostream) => ch.bits().iter().all(|&l| l >= k),
        Some(_) => ch.top_bits() >= k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::PatchSlots;

    const K: u64 = 240;

    fn frame() -> FrameConfig {
        FrameConfig::open_loop(K, 2).unwrap()
    }

    #[test]
    fn bound_examples() {
        let r_c = 1.0 / 3.0;
        let ch = |l2, l1| MatryoshkaChannel::new(vec![2, 1], vec![l2, l1]).unwrap();
        assert_eq!(matryoshka_bound(&ch(2 * K / 3, 7 * K / 3), r_c).unwrap(), 1);
        assert_eq!(matryoshka_bound(&ch(4 * K / 3, 5 * K / 3), r_c).unwrap(), 2);
        assert_eq!(matryoshka_bound(&ch(K, 2 * K), r_c).unwrap(), 2);
        assert!(matryoshka_bound(&ch(0, 0), r_c).is_err());
        assert!(matryoshka_bound(&ch(1, 1), 0.0).is_err());
    }

    #[test]
    fn channel_validation() {
        assert!(MatryoshkaChannel::new(vec![1, 2], vec![1, 1]).is_err());
        assert!(MatryoshkaChannel::new(vec![2], vec![1, 1]).is_err());
    }

    #[test]
    fn monostream_channels() {
        let f = frame();
        let c6 = monostream_snr_channel(&f, &[6], 7).unwrap();
        assert_eq!(c6.bits(), &[2 * K / 3, 7 * K / 3]);
        let c7 = monostream_snr_channel(&f, &[7], 7).unwrap();
        assert_eq!(c7.bits(), &[K / 3, 8 * K / 3]);
        let two = monostream_snr_channel(&f, &[3, 5], 7).unwrap();
        assert_eq!(two.diversities(), &[3, 2, 1]);
        assert_eq!(two.total_bits(), 3 * K);
        let none = monostream_snr_channel(&f, &[8], 7).unwrap();
        assert_eq!(none.diversities(), &[1]);
    }

    #[test]
    fn patched_block_examples() {
        assert_eq!(
            patched_blocks(7 * K / 3, 2 * K / 3, K / 3, 2, 4).unwrap(),
            (5 * K / 3, 4 * K / 3)
        );
        assert_eq!(patched_blocks(100, 40, 0, 2, 4).unwrap(), (100, 40));
        assert_eq!(
            patched_blocks(8 * K / 3, K / 3, K / 6, 2, 6).unwrap(),
            (2 * K, K)
        );
        assert!(patched_blocks(100, 40, 21, 2, 4).is_err());
    }

    #[test]
    fn dstbc_block_examples() {
        assert_eq!(
            dstbc_blocks(DiversityFamily::Alamouti, 7 * K / 3, 2 * K / 3, 2, 2).unwrap(),
            (7 * K / 3, 2 * K / 3)
        );
        assert_eq!(
            dstbc_blocks(DiversityFamily::Alamouti, 7 * K / 3, 2 * K / 3, 2, 4).unwrap(),
            (5 * K / 3, 4 * K / 3)
        );
        assert_eq!(
            dstbc_blocks(DiversityFamily::GoldenSilver, 40, 40, 2, 4).unwrap(),
            (0, 80)
        );
    }

    #[test]
    fn minimal_orders() {
        let fam = DiversityFamily::Alamouti;
        assert_eq!(min_mr_for_full_diversity(fam, K, 2 * K / 3, 2), Some(4));
        assert_eq!(
            min_mr_for_full_diversity(DiversityFamily::GoldenSilver, K, K / 2, 2),
            Some(2)
        );
        assert_eq!(min_mr_for_full_diversity(fam, K, K, 2), Some(2));
        assert_eq!(min_mr_for_full_diversity(fam, K, K / 10, 2), None);
        assert_eq!(min_mr_for_full_diversity(fam, K, 0, 2), None);
    }

    #[test]
    fn minimal_use_choices() {
        let f = frame();
        assert_eq!(
            minimal_use_params(&f, 6).unwrap(),
            MuChoice {
                m_r: 4,
                p: K / 6,
                feasible: true
            }
        );
        assert_eq!(
            minimal_use_params(&f, 7).unwrap(),
            MuChoice {
                m_r: 6,
                p: K / 6,
                feasible: true
            }
        );
        assert_eq!(minimal_use_params(&f, 4).unwrap().p, 0);
        let ch = scheme_channel(&Scheme::PatchedMonostreamMu, &f, Some(6)).unwrap();
        assert_eq!(ch.bits(), &[K, 2 * K]);
    }

    #[test]
    fn predicates() {
        let f = frame();
        assert!(full_macro(&Scheme::Monostream, &f, Some(5)).unwrap());
        assert!(!full_macro(&Scheme::Monostream, &f, Some(6)).unwrap());
        assert!(!full_macro(&Scheme::Direct, &f, Some(3)).unwrap());
        assert!(full_micro(&Scheme::Monostream, &f, Some(5)).unwrap());
        assert!(full_micro(&Scheme::DistributedAlamouti, &f, Some(5)).unwrap());
        assert!(!full_micro(&Scheme::DistributedAlamouti, &f, Some(6)).unwrap());
        let full = Scheme::PatchedMonostream {
            m_r: 4,
            slots: PatchSlots::Full,
        };
        assert_eq!(macro_diversity_order(&full, &f, Some(6)).unwrap(), 2);
        assert_eq!(macro_diversity_order(&Scheme::Direct, &f, None).unwrap(), 1);
    }
}
