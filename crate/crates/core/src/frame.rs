//! Sub-frame segmentation of the HARQ codeword.

use serde::{Deserialize, Serialize};

use crate::{error::param, Error, Result};

/// Message size, sub-frame lengths (in symbols) and source modulation order.
///
/// Sub-frame indices are 1-based throughout the crate: sub-frame `n` is
/// `sub_frames()[n - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameConfig {
    k: u64,
    t: Vec<u64>,
    m_s: u32,
}

impl FrameConfig {
    pub fn new(k: u64, t: Vec<u64>, m_s: u32) -> Result<Self> {
        if k == 0 {
            return param("the message must carry at least one information bit");
        }
        if t.is_empty() {
            return param("a frame needs at least one sub-frame");
        }
        if t.contains(&0) {
            return param("every sub-frame must carry at least one symbol");
        }
        if m_s == 0 || !m_s.is_multiple_of(2) {
            return Err(Error::Unsupported(format!(
                "source modulation must be square QAM (even bits per symbol), got {m_s}"
            )));
        }
        if k > t[0] * m_s as u64 {
            return param(format!(
                "the first sub-frame ({} symbols of {m_s} bits) cannot carry K = {k} bits",
                t[0]
            ));
        }
        Ok(Self { k, t, m_s })
    }

    /// Seven sub-frames: the first holds `K/m_s` symbols (information bits
    /// only), the six others a third of that each.
    pub fn open_loop(k: u64, m_s: u32) -> Result<Self> {
        let t1 = k / m_s.max(1) as u64;
        if m_s == 0 || !k.is_multiple_of(m_s as u64) || !t1.is_multiple_of(3) {
            return param(format!(
                "open-loop frame needs K/m_s divisible by 3, got K = {k}, m_s = {m_s}"
            ));
        }
        let mut t = vec![t1];
        t.extend(std::iter::repeat_n(t1 / 3, 6));
        Self::new(k, t, m_s)
    }

    /// Three sub-frames, the first four times longer than the others, with
    /// `K = rate * T_1 * m_s` for a first-sub-frame coding rate `rate`.
    pub fn closed_loop(rate: f64, t_i: u64, m_s: u32) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return param(format!("coding rate must be in (0, 1], got {rate}"));
        }
        let t1 = 4 * t_i;
        let k = rate * (t1 * m_s as u64) as f64;
        let k_int = k.round();
        if (k - k_int).abs() > 1e-9 || k_int < 1.0 {
            return param(format!(
                "rate {rate} with T_1 = {t1} and m_s = {m_s} gives a non-integer K"
            ));
        }
        Self::new(k_int as u64, vec![t1, t_i, t_i], m_s)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m_s(&self) -> u32 {
        self.m_s
    }

    pub fn n_max(&self) -> usize {
        self.t.len()
    }

    pub fn sub_frames(&self) -> &[u64] {
        &self.t
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.n_max() {
            return param(format!("sub-frame index {n} outside 1..={}", self.n_max()));
        }
        Ok(())
    }

    /// Symbols in sub-frames `1..=n` (zero for `n = 0`).
    pub fn symbols_through(&self, n: usize) -> u64 {
        self.t.iter().take(n).sum()
    }

    /// Symbols in sub-frames `from..=to` (zero when `from > to`).
    pub fn symbols_between(&self, from: usize, to: usize) -> u64 {
        if from > to {
            return 0;
        }
        self.symbols_through(to) - self.symbols_through(from.saturating_sub(1))
    }

    /// Data rate after `n` sub-frames, `K / Σ_{i≤n} T_i`, in bits per
    /// channel use.
    pub fn rate_after(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        Ok(self.k as f64 / self.symbols_through(n) as f64)
    }

    /// Overall coding rate `K / (m_s Σ T_i)`.
    pub fn coding_rate(&self) -> f64 {
        self.k as f64 / (self.m_s as u64 * self.symbols_through(self.n_max())) as f64
    }

    /// Validates a relay start index: the relay transmits from sub-frame
    /// `start`, which lies in `2..=n`.
    pub fn check_start(&self, start: Option<usize>, n: usize) -> Result<()> {
        self.check_index(n)?;
        match start {
            Some(m) if m < 2 || m > n => {
                param(format!("relay start sub-frame {m} outside 2..={n}"))
            }
            _ => Ok(()),
        }
    }
}
