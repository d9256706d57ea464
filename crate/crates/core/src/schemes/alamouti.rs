//! Distributed Alamouti relaying, plain and patched.

use super::patching::{combine_vectors, weighted_sum, PatchCoefficients};
use crate::{error::param, Complex64, Error, Result};

/// Symbol the relay sends in phase-2 slot `k` (1-based) when phase 2 starts
/// after source symbol `m`: `-x*_{m+k+1}` for odd `k`, `x*_{m+k-1}` for even
/// `k`. `x` is the 1-based source stream stored from index 0.
pub fn alamouti_relay_symbols(x: &[Complex64], m: usize, k: usize) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::Range("phase-2 slot indices start at 1".into()));
    }
    let (idx, sign) = if k % 2 == 1 {
        (m + k + 1, -1.0)
    } else {
        (m + k - 1, 1.0)
    };
    x.get(idx - 1)
        .map(|s| s.conj() * sign)
        .ok_or_else(|| Error::Range(format!("symbol {idx} beyond a stream of {}", x.len())))
}

/// Hyper-symbols `(Z1, Z2)` carried by one patched Alamouti slot pair:
/// `Z1 = Σ a_k x_{1,k} + a_r x_{2,2}`, `Z2 = Σ a_k x_{1,k+r-1} + a_r x_{2,1}`.
pub fn patched_alamouti_hyper_symbols(
    x_phase1: &[Complex64],
    x_phase2: (Complex64, Complex64),
    a: &PatchCoefficients,
) -> Result<(Complex64, Complex64)> {
    let h = a.ratio() - 1;
    if x_phase1.len() != 2 * h {
        return param(format!(
            "patched Alamouti needs {} phase-1 symbols, got {}",
            2 * h,
            x_phase1.len()
        ));
    }
    let z1 = weighted_sum(x_phase1[..h].iter().copied(), a.head()) + x_phase2.1 * a.last();
    let z2 = weighted_sum(x_phase1[h..].iter().copied(), a.head()) + x_phase2.0 * a.last();
    Ok((z1, z2))
}

/// Relay symbols of one patched Alamouti slot pair: `(Z1*, -Z2*)`.
pub fn patched_alamouti_encode(
    x_phase1: &[Complex64],
    x_phase2: (Complex64, Complex64),
    a: &PatchCoefficients,
) -> Result<(Complex64, Complex64)> {
    let (z1, z2) = patched_alamouti_hyper_symbols(x_phase1, x_phase2, a)?;
    Ok((z1.conj(), -z2.conj()))
}

/// Destination recombination of one patched Alamouti slot pair.
///
/// Returns `(ỹ1, ỹ2)` with `ỹ1 = Σ a_k y_{1,k+r-1} + a_r y_{2,1}` and
/// `ỹ2 = Σ a_k y_{1,k} + a_r y_{2,2}`. Without noise
/// `[ỹ1 ỹ2] = [g1 g2] [[Z2, Z1], [Z1*, -Z2*]]` with `g1 = sqrt(snr_sd) h_sd`
/// and `g2 = a_r sqrt(snr_rd) h_rd`.
pub fn patched_alamouti_combine(
    y_phase1: &[Vec<Complex64>],
    y_phase2: (&[Complex64], &[Complex64]),
    a: &PatchCoefficients,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let h = a.ratio() - 1;
    if y_phase1.len() != 2 * h {
        return param(format!(
            "patched Alamouti needs {} phase-1 observations, got {}",
            2 * h,
            y_phase1.len()
        ));
    }
    let first: Vec<&[Complex64]> = y_phase1[h..]
        .iter()
        .map(Vec::as_slice)
        .chain(std::iter::once(y_phase2.0))
        .collect();
    let second: Vec<&[Complex64]> = y_phase1[..h]
        .iter()
        .map(Vec::as_slice)
        .chain(std::iter::once(y_phase2.1))
        .collect();
    Ok((
        combine_vectors(&first, a.as_slice())?,
        combine_vectors(&second, a.as_slice())?,
    ))
}
