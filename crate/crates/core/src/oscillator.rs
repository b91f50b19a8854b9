//! The fractional oscillator in a uniform field: Euler–Lagrange residual,
//! transversality, the Volterra reformulation and its Neumann-series
//! solution, plus residual checks for the dissipative variant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::fracops::{
    left_caputo, left_rl_derivative_or_classical, left_rl_integral, right_caputo,
    right_rl_derivative_or_classical, right_rl_integral, right_rl_integral_frac,
};
use crate::gamma::gamma;
use crate::grid::{FracOrder, Grid, SampledFunction};
use crate::quadrature::AlgebraicPairIntegrator;

/// Fraction of nodes dropped at each end when judging residuals.
pub const RESIDUAL_BAND: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OscError {
    #[error("invalid parameter {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error(
        "contraction estimate {rho} exceeds 1; the Neumann series is not guaranteed to converge"
    )]
    NonContractive { rho: f64 },
    #[error("forcing term diverges at t = b (alpha <= 0.5 with e1 != 0)")]
    DivergentForcing,
    #[error("no convergence after {} iterations", .0.iterations)]
    MaxIterExceeded(Box<SolveReport>),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> OscError {
    OscError::Invalid {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub m_alpha: f64,
    pub k: f64,
    pub charge: f64,
    pub field_e: f64,
    pub order: FracOrder,
    pub grid: Grid,
    pub e0: f64,
    pub e1: f64,
}

impl OscillatorParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m_alpha: f64,
        k: f64,
        charge: f64,
        field_e: f64,
        order: FracOrder,
        grid: Grid,
        e0: f64,
        e1: f64,
    ) -> Result<Self, OscError> {
        if !(m_alpha.is_finite() && m_alpha > 0.0) {
            return Err(invalid(
                "m_alpha",
                format!("must be finite and > 0, got {m_alpha}"),
            ));
        }
        if !(k.is_finite() && k >= 0.0) {
            return Err(invalid("k", format!("must be finite and >= 0, got {k}")));
        }
        for (field, v) in [
            ("charge", charge),
            ("field_E", field_e),
            ("e0", e0),
            ("e1", e1),
        ] {
            if !v.is_finite() {
                return Err(invalid(field, format!("must be finite, got {v}")));
            }
        }
        Ok(Self {
            m_alpha,
            k,
            charge,
            field_e,
            order,
            grid,
            e0,
            e1,
        })
    }

    pub fn omega_sq(&self) -> f64 {
        self.k / self.m_alpha
    }

    /// `qE / m_α`
    pub fn gamma_f(&self) -> f64 {
        self.charge * self.field_e / self.m_alpha
    }

    /// `ω² ((b − a)^α / Γ(α + 1))²`, a bound on the sup-norm of the
    /// composite operator `ω² aI^α tI^α`.
    pub fn contraction_estimate(&self) -> f64 {
        let a = self.order.alpha();
        let len = self.grid.b() - self.grid.a();
        let s = len.powf(a) / gamma(a + 1.0);
        self.omega_sq() * s * s
    }

    fn forcing_diverges(&self) -> bool {
        self.order.alpha() <= 0.5 && self.e1 != 0.0
    }
}

/// `−qE − k x + m_α tD^α aCD^α x`, nodewise. Nodes where the outer
/// derivative is singular carry non-finite values.
pub fn el_residual(x: &SampledFunction, p: &OscillatorParams) -> SampledFunction {
    let op = operator_term(x, p.order).scale(p.m_alpha);
    let qe = p.charge * p.field_e;
    op.zip_with(x, |o, xv| o - p.k * xv - qe)
}

fn operator_term(x: &SampledFunction, ord: FracOrder) -> SampledFunction {
    right_rl_derivative_or_classical(&left_caputo(x, ord), ord)
}

const TRANSVERSALITY_WINDOW: (f64, f64) = (0.025, 0.15);

/// Least-squares fit of `Σ c_i (d/len)^{e_i}`, `d = b − t`, over the nodes
/// in [`TRANSVERSALITY_WINDOW`] (fractions of `n` counted back from `b`).
fn fit_near_b(values: &[f64], grid: &Grid, exps: &[f64]) -> Vec<f64> {
    let n = grid.n();
    let lo = ((TRANSVERSALITY_WINDOW.0 * n as f64).ceil() as usize).max(1);
    let hi = ((TRANSVERSALITY_WINDOW.1 * n as f64).ceil() as usize)
        .max(lo + exps.len() + 2)
        .min(n);
    let rows: Vec<usize> = (lo..=hi).map(|j| n - j).collect();
    let len = grid.b() - grid.a();
    let design = DMatrix::from_fn(rows.len(), exps.len(), |r, c| {
        (grid.from_right(rows[r]) / len).powf(exps[c])
    });
    let rhs = DVector::from_iterator(rows.len(), rows.iter().map(|&k| values[k]));
    design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .expect("SVD with both factors")
        .iter()
        .copied()
        .collect()
}

/// `|tD^{α−1} aCD^α x |_{t=b} − e₁|`.
///
/// The right integral vanishes identically at the node `t = b`, so the
/// boundary value is the limit `t → b⁻`. With `y = aCD^α x` behaving like
/// `c d^{α−1} + B + …` near `b`, the limit is `Γ(α) c`. `c` is fitted from
/// `y`; the remainder `y − c d^{α−1}` goes through the numeric right
/// integral and its limit is extrapolated, which absorbs the error in `c`.
/// In the classical limit this is `|x′(b) − e₁|`.
pub fn transversality_check(x: &SampledFunction, p: &OscillatorParams) -> f64 {
    let ord = p.order;
    let y = left_caputo(x, ord);
    if ord.is_classical() {
        return (y.last() - p.e1).abs();
    }
    let grid = *x.grid();
    let a = ord.alpha();
    let n = grid.n();
    let len = grid.b() - grid.a();
    let sing = fit_near_b(y.values(), &grid, &[a - 1.0, 0.0, a, 1.0]);
    let rest: Vec<f64> = (0..grid.len())
        .map(|k| {
            if k == n {
                sing[1]
            } else {
                y.values()[k] - sing[0] * (grid.from_right(k) / len).powf(a - 1.0)
            }
        })
        .collect();
    let rest = SampledFunction::new(grid, rest).expect("one value per node");
    let h = right_rl_integral_frac(&rest, ord);
    let tail = fit_near_b(h.values(), &grid, &[0.0, 1.0 - a, 1.0, 1.0 + a]);
    let limit = gamma(a) * sing[0] * len.powf(1.0 - a) + tail[0];
    (limit - p.e1).abs()
}

/// `F₀(t) = e₀ + aI^α[ e₁/Γ(α)·(b−s)^{α−1} + γ_f/Γ(α+1)·(b−s)^α ](t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forcing {
    pub function: SampledFunction,
    /// Set when `α ≤ 0.5` and `e₁ ≠ 0`; the value at `t = b` is then infinite.
    pub divergent: bool,
}

pub fn forcing_term(p: &OscillatorParams) -> Forcing {
    let grid = p.grid;
    let a = p.order.alpha();
    let gf = p.gamma_f();
    let ig = AlgebraicPairIntegrator::new(a);
    let ga = gamma(a);
    let values = (0..grid.len())
        .map(|k| {
            let (upper, d) = (grid.from_left(k), grid.from_right(k));
            let mut acc = 0.0;
            if p.e1 != 0.0 {
                acc += p.e1 / ga * ig.integrate(a - 1.0, d, upper);
            }
            if gf != 0.0 {
                acc += gf / gamma(a + 1.0) * ig.integrate(a, d, upper);
            }
            p.e0 + acc / ga
        })
        .collect();
    Forcing {
        function: SampledFunction::new(grid, values).expect("one value per node"),
        divergent: p.forcing_diverges(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: SampledFunction,
    pub iterations: usize,
    pub contraction_estimate: f64,
    /// Sup-norm increment of each iteration.
    pub increments: Vec<f64>,
    /// Interior sup-norm of [`el_residual`].
    pub residual_sup: f64,
    /// `m_α · max |tD^α aCD^α x|` over the same nodes.
    pub residual_scale: f64,
    pub transversality_error: f64,
}

/// The composite operator `ω² aI^α tI^α x`.
pub fn apply_volterra(x: &SampledFunction, p: &OscillatorParams) -> SampledFunction {
    left_rl_integral(&right_rl_integral(x, p.order), p.order).scale(p.omega_sq())
}

/// Neumann iteration `x_{m+1} = F₀ + ω² aI^α tI^α x_m` from `x₀ = F₀`,
/// stopping once the sup-norm increment is at most `tol`.
pub fn solve_fo(p: &OscillatorParams, tol: f64, max_iter: usize) -> Result<SolveReport, OscError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(invalid("tol", format!("must be finite and > 0, got {tol}")));
    }
    if max_iter == 0 {
        return Err(invalid("max_iter", "must be at least 1"));
    }
    let rho = p.contraction_estimate();
    if rho > 1.0 {
        return Err(OscError::NonContractive { rho });
    }
    let forcing = forcing_term(p);
    if forcing.divergent {
        return Err(OscError::DivergentForcing);
    }
    let f0 = forcing.function;
    let mut x = f0.clone();
    let mut increments = Vec::new();
    for _ in 0..max_iter {
        let next = f0.add(&apply_volterra(&x, p));
        let inc = next.sub(&x).sup_norm();
        increments.push(inc);
        x = next;
        if inc <= tol {
            return Ok(report(x, increments, rho, p));
        }
    }
    Err(OscError::MaxIterExceeded(Box::new(report(
        x, increments, rho, p,
    ))))
}

fn report(x: SampledFunction, increments: Vec<f64>, rho: f64, p: &OscillatorParams) -> SolveReport {
    let band = x.grid().interior(RESIDUAL_BAND);
    let residual_sup = el_residual(&x, p).sup_norm_on(band.clone());
    let residual_scale = p.m_alpha * operator_term(&x, p.order).sup_norm_on(band);
    let transversality_error = transversality_check(&x, p);
    SolveReport {
        iterations: increments.len(),
        solution: x,
        contraction_estimate: rho,
        increments,
        residual_sup,
        residual_scale,
        transversality_error,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativeParams {
    pub base: OscillatorParams,
    pub damping_gamma: f64,
    pub damping_order: FracOrder,
}

impl DissipativeParams {
    pub fn new(
        base: OscillatorParams,
        damping_gamma: f64,
        damping_order: FracOrder,
    ) -> Result<Self, OscError> {
        if base.charge * base.field_e != 0.0 {
            return Err(invalid(
                "field_E",
                "the dissipative model has no field term",
            ));
        }
        if !(damping_gamma.is_finite() && damping_gamma >= 0.0) {
            return Err(invalid(
                "damping_gamma",
                format!("must be finite and >= 0, got {damping_gamma}"),
            ));
        }
        if damping_order.is_classical() {
            return Err(invalid("damping_order", "must lie in (0, 1)"));
        }
        Ok(Self {
            base,
            damping_gamma,
            damping_order,
        })
    }

    /// β/2, the order appearing in the Lagrangian.
    pub fn half_order(&self) -> FracOrder {
        FracOrder::new(self.damping_order.alpha() / 2.0).expect("half of an order in (0,1)")
    }

    /// `−iγ / (−1)^{β/2}` with `(−1)^{β/2} = e^{iπβ/2}`.
    pub fn coupling(&self) -> Complex64 {
        let half = self.damping_order.alpha() / 2.0;
        Complex64::new(0.0, -self.damping_gamma)
            * Complex64::from_polar(1.0, -std::f64::consts::PI * half)
    }
}

/// `−k x + m_α tD^α aCD^α x − iγ/(−1)^{β/2} · aD^{β/2} tCD^{β/2} x`.
pub fn dissipative_el_residual(
    x: &SampledFunction<Complex64>,
    d: &DissipativeParams,
) -> SampledFunction<Complex64> {
    let b = &d.base;
    let main = right_rl_derivative_or_classical(&left_caputo(x, b.order), b.order);
    let half = d.half_order();
    let c = d.coupling();
    let damp = left_rl_derivative_or_classical(&right_caputo(x, half), half);
    let partial = main.zip_with(x, |o, xv| o * b.m_alpha - xv * b.k);
    partial.zip_with(&damp, |u, v| u + c * v)
}

/// `(p_α, p_{β/2}) = (m_α aCD^α x, −iγ/(−1)^{β/2} · tCD^{β/2} x)`.
pub fn dissipative_momenta(
    x: &SampledFunction,
    d: &DissipativeParams,
) -> (SampledFunction, SampledFunction<Complex64>) {
    let pa = left_caputo(x, d.base.order).scale(d.base.m_alpha);
    let c = d.coupling();
    let pb = right_caputo(&x.to_complex(), d.half_order()).map(|v| c * v);
    (pa, pb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(b: f64, n: usize) -> Grid {
        Grid::new(0.0, b, n).unwrap()
    }

    fn params(alpha: f64, b: f64, n: usize, k: f64, qe: f64, e0: f64, e1: f64) -> OscillatorParams {
        OscillatorParams::new(
            1.0,
            k,
            qe,
            1.0,
            FracOrder::new(alpha).unwrap(),
            grid(b, n),
            e0,
            e1,
        )
        .unwrap()
    }

    /// Adaptive Simpson on `[lo, hi]`, absolute tolerance `eps`.
    fn simpson(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, eps: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            eps: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * eps {
                left + right + delta / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
                    + rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
            }
        }
        let (fa, fb, fm) = (f(lo), f(hi), f(0.5 * (lo + hi)));
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, lo, hi, fa, fm, fb, whole, eps, 40)
    }

    #[test]
    fn forcing_is_constant_without_data() {
        let p = params(0.7, 1.0, 64, 1.0, 0.0, 2.5, 0.0);
        let f = forcing_term(&p);
        assert!(!f.divergent);
        assert!(f.function.values().iter().all(|&v| v == 2.5));
    }

    #[test]
    fn classical_forcing_is_elementary() {
        let p = params(1.0, 2.0, 50, 1.0, 0.3, 1.0, 0.0);
        let f = forcing_term(&p);
        for (k, t) in p.grid.nodes().enumerate() {
            let want = 1.0 + 0.3 * (2.0 * t - t * t / 2.0);
            assert!((f.function.values()[k] - want).abs() < 1e-13);
        }
    }

    #[test]
    fn fractional_forcing_against_brute_force() {
        // e1 term only: (1/Γ(α)²) ∫_0^t (t−s)^{α−1} (1−s)^{α−1} ds, with s = t − u^{1/α}
        let a = 0.75;
        let p = params(a, 1.0, 128, 1.0, 0.0, 0.0, 1.0);
        let f = forcing_term(&p);
        let ga = gamma(a);
        for k in p.grid.interior(RESIDUAL_BAND) {
            let t = p.grid.node(k);
            let g = |u: f64| (1.0 - t + u.powf(1.0 / a)).powf(a - 1.0) / a;
            let want = simpson(&g, 0.0, t.powf(a), 1e-12) / (ga * ga);
            let got = f.function.values()[k];
            assert!(
                (got - want).abs() <= 1e-3 * want.abs(),
                "t={t}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn divergent_forcing_is_flagged() {
        let p = params(0.5, 1.0, 32, 0.5, 0.0, 0.0, 1.0);
        let f = forcing_term(&p);
        assert!(f.divergent);
        assert!(!f.function.last().is_finite());
        assert!(f.function.values()[..32].iter().all(|v| v.is_finite()));
        assert_eq!(solve_fo(&p, 1e-8, 10), Err(OscError::DivergentForcing));
    }

    #[test]
    fn free_oscillator_terminates_immediately() {
        let p = params(0.6, 1.0, 128, 0.0, 0.4, 1.0, 0.5);
        let r = solve_fo(&p, 1e-10, 5).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.solution, forcing_term(&p).function);
        assert_eq!(r.contraction_estimate, 0.0);
    }

    #[test]
    fn classical_boundary_value_problem() {
        let p = params(1.0, 1.0, 1024, 1.0, 0.0, 1.0, 0.0);
        let r = solve_fo(&p, 1e-10, 200).unwrap();
        let tan1 = 1f64.tan();
        for (x, t) in r.solution.values().iter().zip(p.grid.nodes()) {
            assert!((x - (t.cos() + tan1 * t.sin())).abs() < 1e-5);
        }
        assert!(r.residual_sup <= 1e-3 * r.residual_scale);
        assert!(r.transversality_error < 1e-5);
    }

    #[test]
    fn refuses_non_contractive_setup() {
        let p = params(0.8, 1.0, 64, 1.0, 0.1, 1.0, 0.0);
        match solve_fo(&p, 1e-10, 100) {
            Err(OscError::NonContractive { rho }) => {
                assert!((rho - 1.152_770_004_678_995).abs() < 1e-12, "{rho}")
            }
            other => panic!("{other:?}"),
        }
        let p = params(0.8, 0.5, 64, 1.0, 0.1, 1.0, 0.0);
        assert!((p.contraction_estimate() - 0.380_272_285_118_910).abs() < 1e-12);
    }

    #[test]
    fn iteration_cap_keeps_partial_report() {
        let p = params(0.8, 0.5, 128, 1.0, 0.1, 1.0, 0.0);
        match solve_fo(&p, 1e-14, 3) {
            Err(OscError::MaxIterExceeded(r)) => {
                assert_eq!(r.iterations, 3);
                assert_eq!(r.increments.len(), 3);
                assert!(r.contraction_estimate > 0.38);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = grid(1.0, 8);
        let o = FracOrder::new(0.5).unwrap();
        assert!(OscillatorParams::new(0.0, 1.0, 0.0, 0.0, o, g, 0.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 0.0, 0.0, o, g, 0.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, f64::NAN, 0.0, o, g, 0.0, 0.0).is_err());
        let p = params(0.5, 1.0, 8, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            solve_fo(&p, 0.0, 10),
            Err(OscError::Invalid { field: "tol", .. })
        ));
        assert!(matches!(
            solve_fo(&p, 1e-8, 0),
            Err(OscError::Invalid {
                field: "max_iter",
                ..
            })
        ));
    }

    #[test]
    fn residual_of_constant_without_forces() {
        let p = params(0.6, 1.0, 256, 0.0, 0.0, 3.0, 0.0);
        let x = SampledFunction::constant(p.grid, 3.0);
        let r = el_residual(&x, &p);
        assert!(r.sup_norm_on(p.grid.interior(RESIDUAL_BAND)) < 1e-12);
        assert_eq!(transversality_check(&x, &p), 0.0);
    }

    #[test]
    fn classical_residual_converges() {
        let tan1 = 1f64.tan();
        let mut errs = Vec::new();
        for n in [64, 256] {
            let p = params(1.0, 1.0, n, 1.0, 0.0, 1.0, 0.0);
            let x = SampledFunction::from_fn(p.grid, |t| t.cos() + tan1 * t.sin());
            errs.push(el_residual(&x, &p).sup_norm_on(p.grid.interior(RESIDUAL_BAND)));
        }
        assert!(errs[1] < errs[0] / 8.0, "{errs:?}");
    }

    #[test]
    fn fractional_solves_are_self_consistent() {
        for (alpha, e1, qe) in [
            (0.6, 1.0, 0.2),
            (0.8, 0.0, 0.1),
            (0.8, -2.0, 0.5),
            (0.95, 1.0, 0.0),
        ] {
            let p = params(alpha, 0.5, 1024, 1.0, qe, 1.0, e1);
            let tol = 1e-10;
            let r = solve_fo(&p, tol, 200).unwrap();
            let defect = r
                .solution
                .sub(
                    &forcing_term(&p)
                        .function
                        .add(&apply_volterra(&r.solution, &p)),
                )
                .sup_norm();
            assert!(defect <= 2.0 * tol);
            assert_eq!(r.solution.first(), 1.0);
            assert!(
                r.transversality_error <= 1e-2 * e1.abs().max(1.0),
                "alpha {alpha}: {}",
                r.transversality_error
            );
            for w in r.increments.windows(2).skip(1) {
                assert!(w[1] <= (r.contraction_estimate + 0.1) * w[0]);
            }
        }
    }

    #[test]
    fn hamilton_relation_along_solution() {
        // p_α = m aCD^α x, tD^α p_α = kx + qE
        let p = OscillatorParams::new(
            1.5,
            2.0,
            0.4,
            0.5,
            FracOrder::new(0.8).unwrap(),
            grid(0.5, 1024),
            1.0,
            0.0,
        )
        .unwrap();
        let r = solve_fo(&p, 1e-11, 200).unwrap();
        let pa = left_caputo(&r.solution, p.order).scale(p.m_alpha);
        let lhs = crate::fracops::right_rl_derivative(&pa, p.order).unwrap();
        let rhs = r.solution.map(|x| p.k * x + p.charge * p.field_e);
        let band = p.grid.interior(RESIDUAL_BAND);
        assert!(lhs.sub(&rhs).sup_norm_on(band.clone()) <= 5e-3 * lhs.sup_norm_on(band));
    }

    fn dissipative(alpha: f64, beta: f64, k: f64, gamma_d: f64, n: usize) -> DissipativeParams {
        let base = params(alpha, 1.0, n, k, 0.0, 0.0, 0.0);
        DissipativeParams::new(base, gamma_d, FracOrder::new(beta).unwrap()).unwrap()
    }

    #[test]
    fn dissipative_without_damping_matches_el_residual() {
        let d = dissipative(0.7, 0.6, 2.0, 0.0, 128);
        let x = SampledFunction::from_fn(d.base.grid, |t| 1.0 + t * t - t.powi(3));
        let a = dissipative_el_residual(&x.to_complex(), &d);
        let b = el_residual(&x, &d.base);
        for (u, v) in a.values().iter().zip(b.values()).skip(1).take(127) {
            assert!((u.re - v).abs() <= 1e-12 * v.abs().max(1.0) && u.im == 0.0);
        }
    }

    #[test]
    fn dissipative_constant_has_no_residual() {
        let d = dissipative(0.7, 0.6, 0.0, 1.3, 256);
        let x = SampledFunction::constant(d.base.grid, Complex64::new(2.0, 0.0));
        let r = dissipative_el_residual(&x, &d);
        assert!(r.sup_norm_on(d.base.grid.interior(RESIDUAL_BAND)) < 1e-12);
    }

    #[test]
    fn dissipative_damping_term_on_quadratic() {
        // x = (1−t)²: the damping term is c·aD^μ g, g = Γ(3)/Γ(3−μ)(1−t)^{2−μ}, μ = β/2.
        let (beta, gamma_d) = (0.8, 0.7);
        let d = dissipative(0.6, beta, 0.0, gamma_d, 1024);
        let mu = beta / 2.0;
        let x = SampledFunction::from_fn(d.base.grid, |t| Complex64::new((1.0 - t).powi(2), 0.0));
        let main = right_rl_derivative_or_classical(&left_caputo(&x, d.base.order), d.base.order)
            .scale(d.base.m_alpha);
        let damp = dissipative_el_residual(&x, &d).sub(&main);
        let c0 = gamma(3.0) / gamma(3.0 - mu);
        let e = 2.0 - mu;
        // aD^μ g(t) = [g(0) t^{−μ} + ∫_0^t (t−s)^{−μ} g′(s) ds] / Γ(1−μ), with (t−s) = u^{1/(1−μ)}
        let oracle = |t: f64| {
            let gp = |s: f64| -c0 * e * (1.0 - s).powf(e - 1.0);
            let q = 1.0 - mu;
            let integrand = |u: f64| gp(t - u.powf(1.0 / q)) / q;
            (c0 * t.powf(-mu) + simpson(&integrand, 0.0, t.powf(q), 1e-12)) / gamma(1.0 - mu)
        };
        let c = d.coupling();
        let want_coupling =
            Complex64::new(0.0, -gamma_d) * Complex64::from_polar(1.0, -std::f64::consts::PI * mu);
        assert!((c - want_coupling).norm() < 1e-15);
        let g = d.base.grid;
        for k in g.interior(RESIDUAL_BAND).step_by(37) {
            let want = c * oracle(g.node(k));
            let got = damp.values()[k];
            assert!(
                (got - want).norm() <= 1e-3 * want.norm(),
                "t={}: {got} vs {want}",
                g.node(k)
            );
        }
    }

    #[test]
    fn dissipative_momenta_cases() {
        let d = dissipative(0.6, 0.5, 1.0, 2.0, 512);
        let g = d.base.grid;
        let (pa, pb) = dissipative_momenta(&SampledFunction::constant(g, 4.0), &d);
        assert!(pa.sup_norm() < 1e-12 && pb.sup_norm() < 1e-12);
        let (pa, _) = dissipative_momenta(&SampledFunction::from_fn(g, |t| t), &d);
        for k in g.interior(RESIDUAL_BAND) {
            let t = g.node(k);
            let want = t.powf(0.4) / gamma(1.4);
            assert!((pa.values()[k] - want).abs() <= 1e-3 * want);
        }
        let d1 = DissipativeParams {
            base: params(1.0, 1.0, 512, 1.0, 0.0, 0.0, 0.0),
            ..d
        };
        let (pa, _) = dissipative_momenta(&SampledFunction::from_fn(g, |t| t * t), &d1);
        for (k, t) in g.nodes().enumerate() {
            assert!((pa.values()[k] - 2.0 * t).abs() < 1e-10);
        }
    }
}
