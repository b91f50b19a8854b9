//! Gauss–Jacobi rules and integrals with algebraic endpoint behavior.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::gamma::gamma;

/// Gauss–Jacobi rule for `∫_{-1}^{1} (1-x)^a (1+x)^b f(x) dx`.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussJacobi {
    /// Golub–Welsch: eigen-decomposition of the Jacobi matrix of the
    /// orthonormal Jacobi polynomials. Requires `a, b > -1`, `n >= 1`.
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
        let ab = a + b;
        let mut jm = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let fi = i as f64;
            let diag = if i == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / ((2.0 * fi + ab) * (2.0 * fi + ab + 2.0))
            };
            jm[(i, i)] = diag;
            if i + 1 < n {
                let off2 = if i == 0 {
                    4.0 * (a + 1.0) * (b + 1.0) / ((ab + 2.0).powi(2) * (ab + 3.0))
                } else {
                    let k = fi + 1.0;
                    let s = 2.0 * fi + ab + 2.0;
                    4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s - 1.0) * (s + 1.0))
                };
                let off = off2.sqrt();
                jm[(i, i + 1)] = off;
                jm[(i + 1, i)] = off;
            }
        }
        let mu0 = 2f64.powf(ab + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(ab + 2.0);
        let eig = SymmetricEigen::new(jm);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Self { nodes, weights }
    }

    pub fn legendre(n: usize) -> Self {
        Self::new(n, 0.0, 0.0)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∑ w_i f(x_i)` on the reference interval.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

const RULE_POINTS: usize = 24;

/// Integrals `∫_0^T r^{p-1} (d + r)^mu dr` for a fixed `p`, reused across
/// many `(d, T)` pairs.
///
/// The `r^{p-1}` end is absorbed into a Gauss–Jacobi weight on `[0, d]`;
/// beyond `d` the range is split geometrically so the near-singular
/// `(d + r)^mu` factor is resolved at every scale. With `d = 0` the integrand
/// is a pure power and is integrated in closed form.
#[derive(Debug, Clone)]
pub struct AlgebraicPairIntegrator {
    p: f64,
    jacobi: GaussJacobi,
    legendre: GaussJacobi,
}

impl AlgebraicPairIntegrator {
    pub fn new(p: f64) -> Self {
        assert!(p > 0.0, "kernel exponent p - 1 must exceed -1");
        Self {
            p,
            jacobi: GaussJacobi::new(RULE_POINTS, 0.0, p - 1.0),
            legendre: GaussJacobi::legendre(RULE_POINTS),
        }
    }

    /// Returns `+inf` when `d = 0` and `p + mu <= 0` (non-integrable).
    pub fn integrate(&self, mu: f64, d: f64, upper: f64) -> f64 {
        assert!(d >= 0.0 && upper >= 0.0);
        if upper == 0.0 {
            return 0.0;
        }
        let p = self.p;
        if d == 0.0 {
            let s = p + mu;
            return if s > 0.0 {
                upper.powf(s) / s
            } else {
                f64::INFINITY
            };
        }
        let g = |r: f64| (d + r).powf(mu);
        // [0, min(d, T)] with the r^{p-1} weight
        let l = d.min(upper);
        let half = 0.5 * l;
        let mut total = half.powf(p) * self.jacobi.integrate(|x| g(half * (1.0 + x)));
        // geometric pieces [R, 2R]
        let mut lo = l;
        while lo < upper {
            let hi = (2.0 * lo).min(upper);
            let (c, h) = (0.5 * (hi + lo), 0.5 * (hi - lo));
            total += h * self.legendre.integrate(|x| {
                let r = c + h * x;
                r.powf(p - 1.0) * g(r)
            });
            lo = hi;
        }
        total
    }
}
