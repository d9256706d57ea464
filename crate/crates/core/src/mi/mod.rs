//! Finite-alphabet mutual information on the effective scalar Gaussian
//! channel `y = sqrt(snr)·x + n`, with `x` uniform on a QAM alphabet and
//! `n ~ CN(0, 1)`.

mod constellation;
mod hermite;
mod table;

pub use constellation::{Constellation, POINT_TOLERANCE};
pub use hermite::GaussHermite;
pub use table::{MiTable, MiTables, SnrGrid};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{error::param, Complex64, Error, Result};

/// Gauss-Hermite order per real dimension used for tabulation.
pub const DEFAULT_QUADRATURE_ORDER: usize = 16;

/// Estimator for [`mi_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MiMethod {
    /// Product Gauss-Hermite rule over the two noise dimensions.
    Quadrature { order: usize },
    /// Plain Monte Carlo over (input, noise) pairs.
    MonteCarlo { samples: u64, seed: u64 },
}

impl Default for MiMethod {
    fn default() -> Self {
        MiMethod::Quadrature {
            order: DEFAULT_QUADRATURE_ORDER,
        }
    }
}

/// Mutual information in bits per channel use.
pub fn mi_estimate(c: &Constellation, snr_linear: f64, method: MiMethod) -> Result<f64> {
    check_snr(snr_linear)?;
    match method {
        MiMethod::Quadrature { order } => {
            if order < 8 {
                return param(format!("quadrature order must be at least 8, got {order}"));
            }
            let rule = GaussHermite::new(order)?;
            Ok(mi_quadrature(c, snr_linear, &rule))
        }
        MiMethod::MonteCarlo { samples, seed } => {
            mi_monte_carlo(c, snr_linear, samples, seed).map(|(mi, _)| mi)
        }
    }
}

/// Capacity of the Gaussian-input channel, `log2(1 + snr)`.
pub fn gaussian_mi(snr_linear: f64) -> f64 {
    snr_linear.max(0.0).ln_1p() / std::f64::consts::LN_2
}

fn check_snr(snr: f64) -> Result<()> {
    if !snr.is_finite() {
        return Err(Error::Domain(format!("SNR must be finite, got {snr}")));
    }
    if snr < 0.0 {
        return Err(Error::Domain(format!(
            "SNR must be non-negative, got {snr}"
        )));
    }
    Ok(())
}

/// I(X;Y) = m - E_x E_n[ log2 Σ_x' exp(-|d + n|² + |n|²) ], d = sqrt(snr)(x - x').
pub(crate) fn mi_quadrature(c: &Constellation, snr: f64, rule: &GaussHermite) -> f64 {
    if snr == 0.0 {
        return 0.0;
    }
    let sr = snr.sqrt();
    let inv_pi = std::f64::consts::FRAC_1_PI;
    let mut grid = Vec::with_capacity(rule.order() * rule.order());
    for (&u, &wu) in rule.nodes().iter().zip(rule.weights()) {
        for (&v, &wv) in rule.nodes().iter().zip(rule.weights()) {
            grid.push((Complex64::new(u, v), wu * wv * inv_pi));
        }
    }
    let inputs = c.quadrant_representatives();
    let mut acc = 0.0;
    let mut diffs = Vec::with_capacity(c.len());
    for &x in &inputs {
        diffs.clear();
        diffs.extend(c.points().iter().map(|&xp| {
            let d = (x - xp) * sr;
            (d, d.norm_sqr())
        }));
        for &(n, w) in &grid {
            let s: f64 = diffs
                .iter()
                .map(|&(d, d2)| (-(d2 + 2.0 * (d.re * n.re + d.im * n.im))).exp())
                .sum();
            acc += w * s.log2();
        }
    }
    let mi = c.order_bits() as f64 - acc / inputs.len() as f64;
    mi.clamp(0.0, c.order_bits() as f64)
}

/// Monte Carlo estimate with its standard error.
pub fn mi_monte_carlo(c: &Constellation, snr: f64, samples: u64, seed: u64) -> Result<(f64, f64)> {
    check_snr(snr)?;
    if samples < 10_000 {
        return param(format!(
            "Monte Carlo MI needs at least 1e4 samples, got {samples}"
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sr = snr.sqrt();
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let m = c.order_bits() as f64;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let x = c.points()[rng.random_range(0..c.len())];
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let n = Complex64::new(re, im) * scale;
        let s: f64 = c
            .points()
            .iter()
            .map(|&xp| {
                let d = (x - xp) * sr;
                (-(d.norm_sqr() + 2.0 * (d.re * n.re + d.im * n.im))).exp()
            })
            .sum();
        let density = m - s.log2();
        sum += density;
        sum_sq += density * density;
    }
    let nf = samples as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean).max(0.0);
    Ok((mean, (var / nf).sqrt()))
}
