//! One-dimensional Gauss rules for Jacobi-type weights `(1−x)^α` on `[0, 1]`
//! and the Laguerre weight `e^{−t}` on `[0, ∞)`, normalized to probability
//! measures.
//!
//! Nodes come from the symmetric Jacobi matrix (Golub–Welsch) and are then
//! polished by Newton steps on the three-term recurrence. Weights use the
//! Christoffel form `wᵢ = 1 / Σ_{k<n} p̃_k(xᵢ)²` with orthonormal `p̃_k`,
//! summed in a scaled log domain so large Laguerre nodes do not overflow.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result};

/// Orthogonal family of a probability weight on the half line or unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `(α+1)(1−x)^α` on `[0, 1]`, `α > −1`.
    Jacobi { alpha: f64 },
    /// `e^{−t}` on `[0, ∞)`.
    Laguerre,
}

/// Gauss nodes and weights for a [`Family`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Family {
    /// Monic recurrence `p_{k+1} = (x − a_k) p_k − b_k p_{k−1}`; `b_0` unused.
    pub fn recurrence(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        match *self {
            Family::Laguerre => {
                for k in 0..n {
                    let kf = k as f64;
                    a[k] = 2.0 * kf + 1.0;
                    b[k] = kf * kf;
                }
            }
            Family::Jacobi { alpha } => {
                // Jacobi on [−1, 1] with (1−y)^α (1+y)^0, then y = 2x − 1.
                let (al, be) = (alpha, 0.0f64);
                let s = al + be;
                for k in 0..n {
                    let kf = k as f64;
                    let ak = if k == 0 {
                        (be - al) / (s + 2.0)
                    } else {
                        (be * be - al * al) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
                    };
                    let bk = match k {
                        0 => 0.0,
                        1 => 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s).powi(2) * (3.0 + s)),
                        _ => {
                            let t = 2.0 * kf + s;
                            4.0 * kf * (kf + al) * (kf + be) * (kf + s)
                                / (t * t * (t + 1.0) * (t - 1.0))
                        }
                    };
                    a[k] = (ak + 1.0) / 2.0;
                    b[k] = bk / 4.0;
                }
            }
        }
        (a, b)
    }

    /// `n`-point Gauss rule: exact for polynomials of degree `≤ 2n − 1`.
    pub fn gauss(&self, n: usize) -> Result<GaussRule> {
        if n == 0 {
            return Err(Error::config("a Gauss rule needs at least one node"));
        }
        if let Family::Jacobi { alpha } = *self {
            if !(alpha > -1.0 && alpha.is_finite()) {
                return Err(Error::config(format!(
                    "Jacobi exponent {alpha} must exceed −1"
                )));
            }
        }
        let (a, b) = self.recurrence(n);
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jac[(k, k)] = a[k];
            if k + 1 < n {
                let off = b[k + 1].sqrt();
                jac[(k, k + 1)] = off;
                jac[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::try_new(jac, f64::EPSILON, 10_000).ok_or_else(|| {
            Error::numeric(format!("Jacobi-matrix eigensolve failed for n = {n}"))
        })?;
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        for x in nodes.iter_mut() {
            *x = newton_polish(*x, &a, &b);
        }
        let mut weights = Vec::with_capacity(n);
        for &x in &nodes {
            weights.push(christoffel_weight(x, &a, &b));
        }
        if nodes.iter().chain(&weights).any(|v| !v.is_finite()) || weights.iter().any(|&w| w <= 0.0)
        {
            return Err(Error::numeric(format!(
                "Gauss rule construction for {self:?}, n = {n} produced invalid data"
            )));
        }
        // The Christoffel weights carry independent rounding errors; pin their
        // total to the exact mass.
        let scale = self.moment(0) / weights.iter().sum::<f64>();
        for w in weights.iter_mut() {
            *w *= scale;
        }
        Ok(GaussRule { nodes, weights })
    }

    /// `∫ x^k dμ` in closed form.
    pub fn moment(&self, k: u32) -> f64 {
        self.ln_moment(k).exp()
    }

    pub fn ln_moment(&self, k: u32) -> f64 {
        use crate::special::{ln_factorial, ln_gamma};
        match *self {
            Family::Laguerre => ln_factorial(k),
            Family::Jacobi { alpha } => {
                // (α+1) B(k+1, α+1) = k! Γ(α+2) / Γ(k+α+2)
                ln_factorial(k) + ln_gamma(alpha + 2.0) - ln_gamma(f64::from(k) + alpha + 2.0)
            }
        }
    }
}

/// Monic `p_n(x)` and `p_n'(x)` up to a common positive scale.
fn monic_with_derivative(x: f64, a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len();
    let (mut p_prev, mut p) = (0.0f64, 1.0f64);
    let (mut d_prev, mut d) = (0.0f64, 0.0f64);
    for k in 0..n {
        let p_next = (x - a[k]) * p - b[k] * p_prev;
        let d_next = p + (x - a[k]) * d - b[k] * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let m = p.abs().max(d.abs());
        if m > 1e150 {
            p /= m;
            p_prev /= m;
            d /= m;
            d_prev /= m;
        }
    }
    (p, d)
}

fn newton_polish(x0: f64, a: &[f64], b: &[f64]) -> f64 {
    let mut x = x0;
    let scale = x0.abs().max(1e-3);
    for _ in 0..3 {
        let (p, d) = monic_with_derivative(x, a, b);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = p / d;
        if !step.is_finite() || step.abs() > 1e-6 * scale {
            break;
        }
        x -= step;
        if step.abs() <= 1e-17 * scale {
            break;
        }
    }
    x
}

/// `1 / Σ_{k<n} p̃_k(x)²` for the orthonormal polynomials of the recurrence.
fn christoffel_weight(x: f64, a: &[f64], b: &[f64]) -> f64 {
    const RESCALE: f64 = 1e150;
    let ln_rescale = RESCALE.ln();
    let n = a.len();
    // p̃_0 = 1; √b_{k+1} p̃_{k+1} = (x − a_k) p̃_k − √b_k p̃_{k−1}.
    let (mut q_prev, mut q) = (0.0f64, 1.0f64);
    let mut log_scale = 0.0f64;
    // Running Σ p̃_k² expressed as sum · exp(2 · sum_scale).
    let mut sum = 1.0f64;
    let mut sum_scale = 0.0f64;
    for k in 0..n.saturating_sub(1) {
        let next = ((x - a[k]) * q - b[k].sqrt() * q_prev) / b[k + 1].sqrt();
        q_prev = q;
        q = next;
        if q.abs() > RESCALE {
            q /= RESCALE;
            q_prev /= RESCALE;
            log_scale += ln_rescale;
        }
        if log_scale > sum_scale {
            sum *= (-2.0 * (log_scale - sum_scale)).exp();
            sum_scale = log_scale;
        }
        sum += q * q * (2.0 * (log_scale - sum_scale)).exp();
    }
    (-(sum.ln() + 2.0 * sum_scale)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_node_rules() {
        let r = Family::Laguerre.gauss(1).unwrap();
        assert_relative_eq!(r.nodes[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(r.weights[0], 1.0, max_relative = 1e-15);
        // Mean of (α+1)(1−x)^α on [0,1] is 1/(α+2).
        let r = Family::Jacobi { alpha: 3.0 }.gauss(1).unwrap();
        assert_relative_eq!(r.nodes[0], 0.2, max_relative = 1e-15);
    }

    #[test]
    fn two_point_legendre() {
        let r = Family::Jacobi { alpha: 0.0 }.gauss(2).unwrap();
        let h = 0.5 / 3f64.sqrt();
        assert_relative_eq!(r.nodes[0], 0.5 - h, max_relative = 1e-14);
        assert_relative_eq!(r.nodes[1], 0.5 + h, max_relative = 1e-14);
        assert_relative_eq!(r.weights[0], 0.5, max_relative = 1e-14);
    }

    #[test]
    fn moments_exact_up_to_2n_minus_1() {
        for fam in [
            Family::Laguerre,
            Family::Jacobi { alpha: -0.5 },
            Family::Jacobi { alpha: 0.0 },
            Family::Jacobi { alpha: 7.3 },
            Family::Jacobi { alpha: 150.0 },
        ] {
            for n in [1usize, 4, 17, 60] {
                let r = fam.gauss(n).unwrap();
                for k in 0..(2 * n as u32) {
                    let q: f64 = r
                        .nodes
                        .iter()
                        .zip(&r.weights)
                        .map(|(x, w)| w * x.powi(k as i32))
                        .sum();
                    let exact = fam.moment(k);
                    assert!(
                        (q - exact).abs() <= 1e-12 * exact,
                        "{fam:?} n={n} k={k}: {q} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn large_laguerre_rule_keeps_tiny_weights() {
        let r = Family::Laguerre.gauss(150).unwrap();
        assert!(r.weights.iter().all(|w| *w > 0.0 && w.is_finite()));
        assert!(*r.nodes.last().unwrap() > 400.0);
        let sum: f64 = r.weights.iter().sum();
        assert_relative_eq!(sum, 1.0, max_relative = 1e-13);
        let k = 200u32;
        let q: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(x, w)| w * (f64::from(k) * x.ln() - crate::special::ln_factorial(k)).exp())
            .sum();
        assert!((q - 1.0).abs() < 1e-12, "{q}");
    }

    #[test]
    fn invalid_requests() {
        assert!(Family::Laguerre.gauss(0).is_err());
        assert!(Family::Jacobi { alpha: -1.0 }.gauss(3).is_err());
    }
}
