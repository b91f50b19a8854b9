//! Grid discretizations of the Riemann–Liouville and Caputo operators.
//!
//! Integrals use the product-trapezoidal rule (exact for piecewise-linear
//! data), Caputo derivatives use the L1-2 scheme. Right-sided operators are
//! the left-sided ones conjugated by `t -> a + b - t`, so mirror symmetry
//! holds bit for bit.

use rayon::prelude::*;

use super::FracError;
use crate::gamma::gamma;
use crate::grid::{FracOrder, Grid, SampledFunction, Scalar};
use crate::quadrature::GaussJacobi;

const PAR_MIN_LEN: usize = 64;

/// `(1 + x)^p - 1` without cancellation for small `x`.
#[inline]
fn pow1p_m1(x: f64, p: f64) -> f64 {
    (p * x.ln_1p()).exp_m1()
}

/// Weights of the product-trapezoidal rule for `aI^alpha`.
///
/// With `f` sampled at `t_0..t_k`,
/// `I(t_k) = h^alpha / Γ(alpha + 2) * (first[k] f_0 + sum_{j=1}^{k-1} inner[k-j] f_j + f_k)`.
struct IntegralWeights {
    scale: f64,
    first: Vec<f64>,
    inner: Vec<f64>,
}

impl IntegralWeights {
    fn new(grid: &Grid, alpha: f64) -> Self {
        let n = grid.n();
        let p = alpha + 1.0;
        let scale = grid.step().powf(alpha) / gamma(alpha + 2.0);
        // first[k] = (k-1)^{p} - (k-1-alpha) k^alpha
        let first = (0..=n)
            .map(|k| {
                if k == 0 {
                    return 0.0;
                }
                let kf = k as f64;
                kf.powf(p) * (pow1p_m1(-1.0 / kf, p) + p / kf)
            })
            .collect();
        // inner[m] = (m+1)^p - 2 m^p + (m-1)^p
        let inner = (0..=n)
            .map(|m| {
                if m == 0 {
                    return 0.0;
                }
                let mf = m as f64;
                mf.powf(p) * (pow1p_m1(1.0 / mf, p) + pow1p_m1(-1.0 / mf, p))
            })
            .collect();
        Self {
            scale,
            first,
            inner,
        }
    }

    fn apply<T: Scalar>(&self, f: &[T]) -> Vec<T> {
        let n = f.len() - 1;
        (0..n + 1)
            .into_par_iter()
            .with_min_len(PAR_MIN_LEN)
            .map(|k| {
                if k == 0 {
                    return T::zero();
                }
                let mut acc = f[0] * self.first[k];
                for (j, &fj) in f.iter().enumerate().take(k).skip(1) {
                    acc = acc + fj * self.inner[k - j];
                }
                (acc + f[k]) * self.scale
            })
            .collect()
    }
}

fn cumulative_trapezoid<T: Scalar>(f: &[T], h: f64) -> Vec<T> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = T::zero();
    out.push(acc);
    for w in f.windows(2) {
        acc = acc + (w[0] + w[1]) * (0.5 * h);
        out.push(acc);
    }
    out
}

/// Left Riemann–Liouville integral `aI^alpha f` at every node.
pub fn left_rl_integral<T: Scalar>(f: &SampledFunction<T>, ord: FracOrder) -> SampledFunction<T> {
    let grid = *f.grid();
    let values = if ord.is_classical() {
        cumulative_trapezoid(f.values(), grid.step())
    } else {
        IntegralWeights::new(&grid, ord.alpha()).apply(f.values())
    };
    SampledFunction::new(grid, values).expect("length preserved")
}

/// Right Riemann–Liouville integral `tI_b^alpha f`.
pub fn right_rl_integral<T: Scalar>(f: &SampledFunction<T>, ord: FracOrder) -> SampledFunction<T> {
    left_rl_integral(&f.reversed(), ord).reversed()
}

/// `tD_b^{alpha-1} f`, i.e. the right integral of order `1 - alpha`.
///
/// `alpha = 1` gives the order-zero integral, the identity.
pub fn right_rl_integral_frac<T: Scalar>(
    f: &SampledFunction<T>,
    ord: FracOrder,
) -> SampledFunction<T> {
    match ord.complement() {
        Some(c) => right_rl_integral(f, c),
        None => f.clone(),
    }
}

/// Second-order central differences, one-sided second order at the ends.
fn classical_derivative<T: Scalar>(f: &[T], h: f64) -> Vec<T> {
    let n = f.len() - 1;
    let inv = 0.5 / h;
    (0..=n)
        .map(|k| {
            if k == 0 {
                (f[0] * -3.0 + f[1] * 4.0 - f[2]) * inv
            } else if k == n {
                (f[n] * 3.0 - f[n - 1] * 4.0 + f[n - 2]) * inv
            } else {
                (f[k + 1] - f[k - 1]) * inv
            }
        })
        .collect()
}

/// Moments of the Caputo kernel over one cell at lag `m`:
/// `A_m = ∫_0^1 (m+1-u)^{-alpha} du`, `B_m = ∫_0^1 u (m+1-u)^{-alpha} du`.
fn caputo_moments(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let q = 1.0 - alpha;
    let legendre = GaussJacobi::legendre(24);
    let a = (0..n)
        .map(|m| {
            if m == 0 {
                1.0 / q
            } else {
                let mf = m as f64;
                mf.powf(q) * pow1p_m1(1.0 / mf, q) / q
            }
        })
        .collect();
    let b = (0..n)
        .map(|m| {
            if m == 0 {
                1.0 / (q * (q + 1.0))
            } else {
                let top = m as f64 + 1.0;
                0.5 * legendre.integrate(|x| {
                    let u = 0.5 * (1.0 + x);
                    u * (top - u).powf(-alpha)
                })
            }
        })
        .collect();
    (a, b)
}

/// L1-2 scheme: the derivative of the linear interpolant on the first cell
/// and of the backward quadratic interpolant on every later cell, integrated
/// exactly against `(t_k - s)^{-alpha}`.
fn l12_caputo<T: Scalar>(f: &[T], h: f64, alpha: f64) -> Vec<T> {
    let n = f.len() - 1;
    let scale = h.powf(-alpha) / gamma(1.0 - alpha);
    let (a, b) = caputo_moments(n, alpha);
    let first = f[1] - f[0];
    // per cell j >= 1: half central difference and second difference
    let central: Vec<T> = (1..n).map(|j| (f[j + 1] - f[j - 1]) * 0.5).collect();
    let second: Vec<T> = (1..n).map(|j| f[j + 1] - f[j] * 2.0 + f[j - 1]).collect();
    (0..n + 1)
        .into_par_iter()
        .with_min_len(PAR_MIN_LEN)
        .map(|k| {
            if k == 0 {
                return T::zero();
            }
            let mut acc = first * a[k - 1];
            for j in 1..k {
                let m = k - 1 - j;
                acc = acc + central[j - 1] * a[m] + second[j - 1] * b[m];
            }
            acc * scale
        })
        .collect()
}

/// Left Caputo derivative `aCD^alpha f` by the L1-2 scheme, `O(h^{3-alpha})`
/// for smooth data.
///
/// The value at `t_0` is zero. At `alpha = 1` this is the classical first
/// derivative by second-order finite differences.
pub fn left_caputo<T: Scalar>(f: &SampledFunction<T>, ord: FracOrder) -> SampledFunction<T> {
    let grid = *f.grid();
    let values = if ord.is_classical() {
        classical_derivative(f.values(), grid.step())
    } else {
        l12_caputo(f.values(), grid.step(), ord.alpha())
    };
    SampledFunction::new(grid, values).expect("length preserved")
}

/// Right Caputo derivative `tCD_b^alpha f`, carrying the `(-d/dt)` sign.
pub fn right_caputo<T: Scalar>(f: &SampledFunction<T>, ord: FracOrder) -> SampledFunction<T> {
    left_caputo(&f.reversed(), ord).reversed()
}

fn rl_correction<T: Scalar>(
    caputo: SampledFunction<T>,
    boundary_value: T,
    alpha: f64,
    distance: impl Fn(usize) -> f64,
) -> SampledFunction<T> {
    if boundary_value == T::zero() {
        return caputo;
    }
    let c = 1.0 / gamma(1.0 - alpha);
    let grid = *caputo.grid();
    let values = caputo
        .values()
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let d = distance(k);
            if d == 0.0 {
                T::non_finite()
            } else {
                v + boundary_value * (c * d.powf(-alpha))
            }
        })
        .collect();
    SampledFunction::new(grid, values).expect("length preserved")
}

fn require_fractional(ord: FracOrder) -> Result<f64, FracError> {
    if ord.is_classical() {
        Err(FracError::Domain(
            "Riemann-Liouville derivative needs 0 < alpha < 1; use the Caputo path for alpha = 1"
                .into(),
        ))
    } else {
        Ok(ord.alpha())
    }
}

/// Left Riemann–Liouville derivative, via `aCD^alpha f + f(a) (t-a)^{-alpha} / Γ(1-alpha)`.
///
/// When `f(a) != 0` the value at `t_0` is the non-finite marker.
pub fn left_rl_derivative<T: Scalar>(
    f: &SampledFunction<T>,
    ord: FracOrder,
) -> Result<SampledFunction<T>, FracError> {
    let alpha = require_fractional(ord)?;
    let grid = *f.grid();
    Ok(rl_correction(left_caputo(f, ord), f.first(), alpha, |k| {
        grid.from_left(k)
    }))
}

/// Right Riemann–Liouville derivative, `tCD_b^alpha f + f(b) (b-t)^{-alpha} / Γ(1-alpha)`.
pub fn right_rl_derivative<T: Scalar>(
    f: &SampledFunction<T>,
    ord: FracOrder,
) -> Result<SampledFunction<T>, FracError> {
    let alpha = require_fractional(ord)?;
    let grid = *f.grid();
    Ok(rl_correction(right_caputo(f, ord), f.last(), alpha, |k| {
        grid.from_right(k)
    }))
}

/// `tD_b^alpha`, falling back to `-d/dt` in the classical limit.
pub(crate) fn right_rl_derivative_or_classical<T: Scalar>(
    f: &SampledFunction<T>,
    ord: FracOrder,
) -> SampledFunction<T> {
    if ord.is_classical() {
        right_caputo(f, ord)
    } else {
        right_rl_derivative(f, ord).expect("fractional order")
    }
}

/// `aD^alpha`, falling back to `d/dt` in the classical limit.
pub(crate) fn left_rl_derivative_or_classical<T: Scalar>(
    f: &SampledFunction<T>,
    ord: FracOrder,
) -> SampledFunction<T> {
    if ord.is_classical() {
        left_caputo(f, ord)
    } else {
        left_rl_derivative(f, ord).expect("fractional order")
    }
}
