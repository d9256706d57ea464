use crate::{Complex64, Error, Result};

/// Square 2^m-QAM alphabet with unit average energy and Gray labeling.
///
/// `points[label]` is the point carrying the `m`-bit `label`. The upper
/// `m/2` bits select the in-phase level and the lower `m/2` bits the
/// quadrature level, each through a binary-reflected Gray code.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    order_bits: u32,
    points: Vec<Complex64>,
}

/// Tolerance used when matching a complex value to an alphabet point.
pub const POINT_TOLERANCE: f64 = 1e-9;

impl Constellation {
    /// Square QAM with `2^order_bits` points. Only even orders up to 16 bits
    /// are accepted.
    pub fn qam(order_bits: u32) -> Result<Self> {
        if order_bits == 0 || !order_bits.is_multiple_of(2) || order_bits > 16 {
            return Err(Error::Unsupported(format!(
                "square QAM needs an even number of bits per symbol, got {order_bits}"
            )));
        }
        let half = order_bits / 2;
        let side = 1usize << half;
        let mask = side - 1;
        let scale = (2.0 * (side * side - 1) as f64 / 3.0).sqrt();
        let level = |gray: usize| {
            let idx = gray_decode(gray);
            (2 * idx) as f64 - (side - 1) as f64
        };
        let points = (0..side * side)
            .map(|label| {
                let i = level(label >> half);
                let q = level(label & mask);
                Complex64::new(i / scale, q / scale)
            })
            .collect();
        Ok(Self { order_bits, points })
    }

    pub fn qpsk() -> Self {
        Self::qam(2).expect("QPSK is a valid order")
    }

    pub fn order_bits(&self) -> u32 {
        self.order_bits
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, label: usize) -> Option<Complex64> {
        self.points.get(label).copied()
    }

    /// Label of the point equal to `z` within [`POINT_TOLERANCE`].
    pub fn label_of(&self, z: Complex64) -> Option<usize> {
        self.points
            .iter()
            .position(|p| (p - z).norm() < POINT_TOLERANCE)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.label_of(z).is_some()
    }

    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }

    /// One representative per orbit of the rotation by `i`. Square QAM is
    /// invariant under that rotation, so averages over the alphabet of
    /// rotation-invariant quantities only need these points.
    pub(crate) fn quadrant_representatives(&self) -> Vec<Complex64> {
        self.points
            .iter()
            .copied()
            .filter(|p| p.re > 0.0 && p.im > 0.0)
            .collect()
    }
}

fn gray_decode(mut g: usize) -> usize {
    let mut b = g;
    while g > 0 {
        g >>= 1;
        b ^= g;
    }
    b
}
