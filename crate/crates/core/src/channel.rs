//! Quasi-static Rayleigh fading, link budgets and reproducible per-trial
//! random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{error::param, Complex64, Result};

/// Long-term SNRs of the three links and the number of destination antennas.
///
/// An SNR of `f64::NEG_INFINITY` dB switches the link off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub snr_sd_db: f64,
    pub snr_rd_db: f64,
    pub snr_sr_db: f64,
    pub n_rx: usize,
}

impl LinkBudget {
    pub fn new(snr_sd_db: f64, snr_rd_db: f64, snr_sr_db: f64, n_rx: usize) -> Result<Self> {
        let b = Self {
            snr_sd_db,
            snr_rd_db,
            snr_sr_db,
            n_rx,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rx == 0 {
            return param("the destination needs at least one antenna");
        }
        for (name, v) in [
            ("SNR_SD", self.snr_sd_db),
            ("SNR_RD", self.snr_rd_db),
            ("SNR_SR", self.snr_sr_db),
        ] {
            if v.is_nan() || v == f64::INFINITY {
                return param(format!("{name} must be finite or -inf (link off), got {v}"));
            }
        }
        Ok(())
    }

    pub fn sd(&self) -> f64 {
        db_to_linear(self.snr_sd_db)
    }

    pub fn rd(&self) -> f64 {
        db_to_linear(self.snr_rd_db)
    }

    pub fn sr(&self) -> f64 {
        db_to_linear(self.snr_sr_db)
    }
}

/// dB to linear power ratio; `-inf` maps to exactly zero.
pub fn db_to_linear(db: f64) -> f64 {
    if db == f64::NEG_INFINITY {
        0.0
    } else {
        10f64.powf(db / 10.0)
    }
}

/// One frame's fading coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingDraw {
    pub h_sd: Vec<Complex64>,
    pub h_rd: Vec<Complex64>,
    pub h_sr: Complex64,
}

/// Independent random stream of one trial, keyed by `(seed, trial_index)`.
///
/// The stream does not depend on which thread runs the trial or in which
/// order trials execute.
pub fn trial_stream(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// Circularly-symmetric complex Gaussian sample with unit total variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws `h_sd`, then `h_rd`, then `h_sr`, all i.i.d. CN(0, 1).
pub fn draw_fading<R: Rng + ?Sized>(n_rx: usize, rng: &mut R) -> Result<FadingDraw> {
    if n_rx == 0 {
        return param("the destination needs at least one antenna");
    }
    let h_sd = (0..n_rx).map(|_| complex_gaussian(rng)).collect();
    let h_rd = (0..n_rx).map(|_| complex_gaussian(rng)).collect();
    let h_sr = complex_gaussian(rng);
    Ok(FadingDraw { h_sd, h_rd, h_sr })
}

pub fn norm_sqr(h: &[Complex64]) -> f64 {
    h.iter().map(|z| z.norm_sqr()).sum()
}

/// Per-symbol SNR after maximum-ratio combining over the receive antennas.
pub fn post_mrc_snr(h: &[Complex64], snr_linear: f64) -> f64 {
    snr_linear * norm_sqr(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mrc_examples() {
        let zero = [Complex64::new(0.0, 0.0); 2];
        assert_eq!(post_mrc_snr(&zero, 7.0), 0.0);
        assert_eq!(post_mrc_snr(&[Complex64::new(0.0, 1.0)], 3.5), 3.5);
        let h = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        assert_eq!(post_mrc_snr(&h, 5.0), 10.0);
    }

    #[test]
    fn streams_are_keyed_by_seed_and_trial() {
        let a = draw_fading(2, &mut trial_stream(5, 11)).unwrap();
        let b = draw_fading(2, &mut trial_stream(5, 11)).unwrap();
        let c = draw_fading(2, &mut trial_stream(5, 12)).unwrap();
        let d = draw_fading(2, &mut trial_stream(6, 11)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn link_off_is_zero_power() {
        assert_eq!(db_to_linear(f64::NEG_INFINITY), 0.0);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn budget_validation() {
        assert!(LinkBudget::new(0.0, f64::NEG_INFINITY, 3.0, 2).is_ok());
        assert!(LinkBudget::new(0.0, 0.0, 0.0, 0).is_err());
        assert!(LinkBudget::new(f64::NAN, 0.0, 0.0, 1).is_err());
        assert!(LinkBudget::new(f64::INFINITY, 0.0, 0.0, 1).is_err());
    }
}
