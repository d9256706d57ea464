//! Gauss-Hermite nodes and weights for integrands of the form `e^(-x^2) f(x)`.

use crate::{error::param, Result};

/// Gauss-Hermite rule of a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Nodes are the roots of the orthonormal Hermite polynomial of degree
    /// `order`, located by Newton iteration from asymptotic initial guesses.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return param("Gauss-Hermite order must be positive");
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let pim4 = std::f64::consts::PI.powf(-0.25);
        let nf = n as f64;
        let mut z = 0.0f64;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.166_67),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut converged = false;
            for _ in 0..100 {
                let (p1, p2) = hermite_pair(n, z, pim4);
                let step = p1 / ((2.0 * nf).sqrt() * p2);
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return param(format!(
                    "Gauss-Hermite root {i} of order {n} did not converge"
                ));
            }
            let (_, p2) = hermite_pair(n, z, pim4);
            let pp = (2.0 * nf).sqrt() * p2;
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Approximates the integral of `e^(-x^2) f(x)` over the real line.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Orthonormal Hermite values (p_n(z), p_{n-1}(z)).
fn hermite_pair(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn moments_are_exact() {
        for order in [8, 16, 32] {
            let gh = GaussHermite::new(order).unwrap();
            let sp = PI.sqrt();
            assert!((gh.integrate(|_| 1.0) - sp).abs() < 1e-13);
            assert!((gh.integrate(|x| x * x) - sp / 2.0).abs() < 1e-13);
            assert!((gh.integrate(|x| x.powi(4)) - 3.0 * sp / 4.0).abs() < 1e-12);
            assert!(gh.integrate(|x| x.powi(3)).abs() < 1e-13);
        }
    }

    #[test]
    fn cosine_integral() {
        // ∫ e^{-x²} cos x dx = √π e^{-1/4}
        let gh = GaussHermite::new(20).unwrap();
        let exact = PI.sqrt() * (-0.25f64).exp();
        assert!((gh.integrate(f64::cos) - exact).abs() < 1e-14);
    }

    #[test]
    fn nodes_are_sorted_descending_and_symmetric() {
        let gh = GaussHermite::new(16).unwrap();
        for w in gh.nodes().windows(2) {
            assert!(w[0] > w[1]);
        }
        for (a, b) in gh.nodes().iter().zip(gh.nodes().iter().rev()) {
            assert!((a + b).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(GaussHermite::new(0).is_err());
    }
}
