//! Patched Golden and Silver codes: relay symbols and destination
//! recombination.
//!
//! Received matrices are stored one row per receive antenna, one column per
//! time slot.

use super::patching::{weighted_sum, PatchCoefficients};
use crate::{error::param, Complex64, Result};

/// Distributed space-time code built by the relay and the destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DstbcCode {
    Golden,
    Silver,
}

/// Scaling constant `c` in `Y = c [h_sd h_rd] X + B`.
pub const DSTBC_SCALE: f64 = std::f64::consts::FRAC_1_SQRT_2;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn golden_constants() -> (f64, f64, Complex64, Complex64) {
    let s5 = 5f64.sqrt();
    let alpha = (1.0 + s5) / 2.0;
    let alpha_bar = (1.0 - s5) / 2.0;
    let phi = Complex64::new(1.0, 1.0 - alpha);
    let phi_bar = Complex64::new(1.0, 1.0 - alpha_bar);
    (alpha, alpha_bar, phi, phi_bar)
}

/// The two hyper-symbols the relay builds from `2 m_r/m_s` phase-1 symbols.
pub fn dstbc_hyper_symbols(
    x_phase1: &[Complex64],
    a: &PatchCoefficients,
) -> Result<(Complex64, Complex64)> {
    let r = a.ratio();
    if x_phase1.len() != 2 * r {
        return param(format!(
            "patched DSTBC needs {} phase-1 symbols, got {}",
            2 * r,
            x_phase1.len()
        ));
    }
    Ok((
        weighted_sum(x_phase1[..r].iter().copied(), a.as_slice()),
        weighted_sum(x_phase1[r..].iter().copied(), a.as_slice()),
    ))
}

/// Relay symbols for the two phase-2 slots.
pub fn patched_dstbc_encode(
    code: DstbcCode,
    z1: Complex64,
    z2: Complex64,
    x21: Complex64,
    x22: Complex64,
) -> (Complex64, Complex64) {
    match code {
        DstbcCode::Golden => {
            let (_, alpha_bar, phi, phi_bar) = golden_constants();
            let q = phi_bar / phi;
            (I * q * (x22 + z2 * alpha_bar), q * (x21 + z1 * alpha_bar))
        }
        DstbcCode::Silver => {
            let s7 = 7f64.sqrt();
            let r1 = -x22.conj()
                - (Complex64::new(1.0, -2.0) * z1.conj() + Complex64::new(1.0, 1.0) * z2.conj())
                    / s7;
            let r2 = x21.conj()
                + (Complex64::new(-1.0, 1.0) * z1.conj() + Complex64::new(1.0, 2.0) * z2.conj())
                    / s7;
            (r1, r2)
        }
    }
}

/// Phase-1 observations recombined into the reception of `(z1, z2)` sent by
/// the source, one row per antenna.
pub fn dstbc_tilde_y1(
    y_phase1: &[Vec<Complex64>],
    a: &PatchCoefficients,
) -> Result<Vec<[Complex64; 2]>> {
    let r = a.ratio();
    if y_phase1.len() != 2 * r {
        return param(format!(
            "patched DSTBC needs {} phase-1 observations, got {}",
            2 * r,
            y_phase1.len()
        ));
    }
    let n_rx = y_phase1[0].len();
    if y_phase1.iter().any(|y| y.len() != n_rx) {
        return param("phase-1 observations differ in antenna count");
    }
    Ok((0..n_rx)
        .map(|j| {
            [
                weighted_sum(y_phase1[..r].iter().map(|y| y[j]), a.as_slice()),
                weighted_sum(y_phase1[r..].iter().map(|y| y[j]), a.as_slice()),
            ]
        })
        .collect())
}

/// Builds `Y = c [g_sd g_rd] X + B` from the recombined phase-1 matrix and
/// the phase-2 matrix. Returns `Y` and `c`; `B` has unit-variance entries
/// when the inputs do.
pub fn patched_dstbc_combine(
    code: DstbcCode,
    y1: &[[Complex64; 2]],
    y2: &[[Complex64; 2]],
) -> Result<(Vec<[Complex64; 2]>, f64)> {
    if y1.is_empty() || y1.len() != y2.len() {
        return param(format!(
            "received matrices need the same non-zero row count, got {} and {}",
            y1.len(),
            y2.len()
        ));
    }
    let y = match code {
        DstbcCode::Golden => {
            let (alpha, _, phi, _) = golden_constants();
            let norm = (phi * phi * (1.0 + alpha * alpha)).norm().sqrt();
            y1.iter()
                .zip(y2)
                .map(|(a, b)| {
                    [
                        phi * (a[0] * alpha + b[0]) / norm,
                        phi * (a[1] * alpha + b[1]) / norm,
                    ]
                })
                .collect()
        }
        DstbcCode::Silver => {
            let s7 = 7f64.sqrt();
            let s2 = 2f64.sqrt();
            let q = [
                [Complex64::new(1.0, 1.0), Complex64::new(-1.0, 2.0)],
                [Complex64::new(-1.0, -2.0), Complex64::new(-1.0, 1.0)],
            ];
            y1.iter()
                .zip(y2)
                .map(|(a, b)| {
                    [
                        ((a[0] * q[0][0] + a[1] * q[0][1]) / s7 + b[0]) / s2,
                        ((a[0] * q[1][0] + a[1] * q[1][1]) / s7 + b[1]) / s2,
                    ]
                })
                .collect()
        }
    };
    Ok((y, DSTBC_SCALE))
}

/// Codeword `X` (rows: source, relay; columns: time slots) produced by the
/// combination, so that noiseless `Y = c [g_sd g_rd] X`.
pub fn dstbc_codeword(
    code: DstbcCode,
    z1: Complex64,
    z2: Complex64,
    x21: Complex64,
    x22: Complex64,
) -> [[Complex64; 2]; 2] {
    match code {
        DstbcCode::Golden => {
            let (alpha, alpha_bar, phi, phi_bar) = golden_constants();
            let k = 2f64.sqrt() / 5f64.sqrt();
            [
                [phi * (x21 + z1 * alpha) * k, phi * (x22 + z2 * alpha) * k],
                [
                    I * phi_bar * (x22 + z2 * alpha_bar) * k,
                    phi_bar * (x21 + z1 * alpha_bar) * k,
                ],
            ]
        }
        DstbcCode::Silver => {
            let s7 = 7f64.sqrt();
            let u1 = (Complex64::new(1.0, 1.0) * z1 + Complex64::new(-1.0, 2.0) * z2) / s7;
            let u2 = (Complex64::new(1.0, 2.0) * z1 + Complex64::new(1.0, -1.0) * z2) / s7;
            [
                [x21 + u1, x22 - u2],
                [-x22.conj() - u2.conj(), x21.conj() - u1.conj()],
            ]
        }
    }
}
