//! Hyper-symbol construction at the relay and the matching linear
//! recombination at the destination.

use crate::mi::Constellation;
use crate::{error::param, Complex64, Error, Result};

/// Real weights `a_i = sqrt(3 / (2^m_r - 1)) 2^(i-1)`, `i = 1..=m_r/m_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchCoefficients {
    a: Vec<f64>,
}

impl PatchCoefficients {
    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    /// Number of source symbols merged into one hyper-symbol.
    pub fn ratio(&self) -> usize {
        self.a.len()
    }

    /// Weight of the symbol the source sends in the same time slot.
    pub fn last(&self) -> f64 {
        self.a[self.a.len() - 1]
    }

    /// Weights of the phase-1 symbols.
    pub fn head(&self) -> &[f64] {
        &self.a[..self.a.len() - 1]
    }
}

/// Checks a relay order against the source order and returns `m_r / m_s`.
pub fn patch_ratio(m_s: u32, m_r: u32) -> Result<usize> {
    if m_s != 2 {
        return Err(Error::Unsupported(format!(
            "patching is defined for a QPSK source only, got m_s = {m_s}"
        )));
    }
    if m_r < m_s || !m_r.is_multiple_of(m_s) {
        return param(format!(
            "relay order {m_r} must be a multiple of the source order {m_s}"
        ));
    }
    if m_r > 16 {
        return param(format!("relay order {m_r} exceeds 16 bits per symbol"));
    }
    Ok((m_r / m_s) as usize)
}

pub fn patch_coefficients(m_s: u32, m_r: u32) -> Result<PatchCoefficients> {
    let r = patch_ratio(m_s, m_r)?;
    let scale = (3.0 / ((1u64 << m_r) - 1) as f64).sqrt();
    let a = (0..r).map(|i| scale * (1u64 << i) as f64).collect();
    Ok(PatchCoefficients { a })
}

/// `z = Σ a_i x_i` for QPSK symbols `x`.
pub fn patch_symbol(x: &[Complex64], a: &PatchCoefficients) -> Result<Complex64> {
    if x.len() != a.ratio() {
        return param(format!(
            "a hyper-symbol merges {} symbols, got {}",
            a.ratio(),
            x.len()
        ));
    }
    let qpsk = Constellation::qpsk();
    if let Some(bad) = x.iter().find(|&&s| !qpsk.contains(s)) {
        return Err(Error::Domain(format!("{bad} is not a QPSK symbol")));
    }
    Ok(weighted_sum(x.iter().copied(), a.as_slice()))
}

pub(crate) fn weighted_sum(x: impl Iterator<Item = Complex64>, a: &[f64]) -> Complex64 {
    x.zip(a).map(|(s, &w)| s * w).sum()
}

/// Weighted sum of received vectors, `Σ a_i y_i`.
pub(crate) fn combine_vectors(y: &[&[Complex64]], a: &[f64]) -> Result<Vec<Complex64>> {
    let len = y.first().map_or(0, |v| v.len());
    if y.iter().any(|v| v.len() != len) {
        return param("received vectors must have the same number of antennas");
    }
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (v, &w) in y.iter().zip(a) {
        for (o, &s) in out.iter_mut().zip(v.iter()) {
            *o += s * w;
        }
    }
    Ok(out)
}

/// Destination recombination `Σ_{i<r} a_i y1_i + a_r y2`.
///
/// `y1` holds the phase-1 observations of the symbols merged into the
/// hyper-symbol, `y2` the phase-2 observation of the patched slot.
pub fn patch_combine_rx(
    y1: &[Vec<Complex64>],
    y2: &[Complex64],
    a: &PatchCoefficients,
) -> Result<Vec<Complex64>> {
    if y1.len() + 1 != a.ratio() {
        return param(format!(
            "expected {} phase-1 observations, got {}",
            a.ratio() - 1,
            y1.len()
        ));
    }
    let rows: Vec<&[Complex64]> = y1
        .iter()
        .map(Vec::as_slice)
        .chain(std::iter::once(y2))
        .collect();
    combine_vectors(&rows, a.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_values() {
        let a = patch_coefficients(2, 4).unwrap();
        let s = (1.0f64 / 5.0).sqrt();
        assert!((a.as_slice()[0] - s).abs() < 1e-15);
        assert!((a.as_slice()[1] - 2.0 * s).abs() < 1e-15);
        let b = patch_coefficients(2, 6).unwrap();
        let s = (3.0f64 / 63.0).sqrt();
        for (i, v) in b.as_slice().iter().enumerate() {
            assert!((v - s * (1 << i) as f64).abs() < 1e-15);
        }
        assert_eq!(patch_coefficients(2, 2).unwrap().as_slice(), &[1.0]);
    }

    #[test]
    fn unit_sum_of_squares_for_qpsk_source() {
        for m_r in [2, 4, 6, 8] {
            let a = patch_coefficients(2, m_r).unwrap();
            let s: f64 = a.as_slice().iter().map(|v| v * v).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_orders() {
        assert!(matches!(patch_coefficients(2, 5), Err(Error::Parameter(_))));
        assert!(matches!(patch_coefficients(2, 0), Err(Error::Parameter(_))));
        assert!(matches!(
            patch_coefficients(4, 8),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn corner_point() {
        let a = patch_coefficients(2, 4).unwrap();
        let x = Complex64::new(1.0, 1.0) / 2f64.sqrt();
        let z = patch_symbol(&[x, x], &a).unwrap();
        let c16 = Constellation::qam(4).unwrap();
        let max = c16.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
        assert!((z.norm() - max).abs() < 1e-12);
        assert!(c16.contains(z));
    }

    #[test]
    fn rejects_foreign_symbols_and_lengths() {
        let a = patch_coefficients(2, 4).unwrap();
        let x = Constellation::qpsk().points()[0];
        assert!(matches!(
            patch_symbol(&[x, Complex64::new(0.3, 0.0)], &a),
            Err(Error::Domain(_))
        ));
        assert!(matches!(patch_symbol(&[x], &a), Err(Error::Parameter(_))));
        assert!(patch_combine_rx(&[], &[x], &a).is_err());
    }
}
