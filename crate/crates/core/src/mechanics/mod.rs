//! Fractional Poisson bracket, fractional Hamiltonians and generating
//! functions over [`PhasePoly`].

mod axioms;
pub mod models;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::symexpr::{GaussianRational, PhasePoly, PhaseVar};

pub use axioms::{check_axioms, AxiomOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MechError {
    #[error("[p_alpha, H] and [p_beta, H] differ")]
    InconsistentSystem,
    #[error("momenta cannot be inverted: {0}")]
    NonInvertibleMomenta(String),
    #[error("variable {var} is not allowed in {context}")]
    VariableOutOfScope {
        var: PhaseVar,
        context: &'static str,
    },
}

fn check_scope(
    p: &PhasePoly,
    allowed: &[PhaseVar],
    context: &'static str,
) -> Result<(), MechError> {
    match p.variables().into_iter().find(|v| !allowed.contains(v)) {
        Some(var) => Err(MechError::VariableOutOfScope { var, context }),
        None => Ok(()),
    }
}

/// `[F, G] = ∂F/∂q·(∂G/∂p_α + ∂G/∂p_β) − ∂G/∂q·(∂F/∂p_α + ∂F/∂p_β)`.
pub fn fp_bracket(f: &PhasePoly, g: &PhasePoly) -> PhasePoly {
    let dp = |h: &PhasePoly| &h.partial(PhaseVar::PAlpha) + &h.partial(PhaseVar::PBeta);
    &(&f.partial(PhaseVar::Q) * &dp(g)) - &(&g.partial(PhaseVar::Q) * &dp(f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianSystem {
    h: PhasePoly,
    label: String,
}

impl HamiltonianSystem {
    /// `h` may use only `q`, `p_alpha`, `p_beta`, `t`.
    pub fn new(h: PhasePoly, label: impl Into<String>) -> Result<Self, MechError> {
        check_scope(&h, &PhaseVar::CORE, "a Hamiltonian")?;
        Ok(Self {
            h,
            label: label.into(),
        })
    }

    pub fn hamiltonian(&self) -> &PhasePoly {
        &self.h
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Right-hand sides of the canonical equations in bracket form:
/// `(dq, dp) = ([q, H], [p_α, H])`.
pub fn canonical_rhs(sys: &HamiltonianSystem) -> Result<(PhasePoly, PhasePoly), MechError> {
    let q = PhasePoly::var(PhaseVar::Q);
    let dq = fp_bracket(&q, &sys.h);
    let dpa = fp_bracket(&PhasePoly::var(PhaseVar::PAlpha), &sys.h);
    let dpb = fp_bracket(&PhasePoly::var(PhaseVar::PBeta), &sys.h);
    if dpa != dpb {
        return Err(MechError::InconsistentSystem);
    }
    Ok((dq, dpa))
}

/// The four partials of `H`. Along a trajectory, `dh_dp_alpha` pairs with
/// the left Caputo derivative of `q`, `dh_dp_beta` with the right Caputo
/// derivative, and `dh_dq` with `aD^β p_β + tD^α p_α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonRelations {
    pub dh_dt: PhasePoly,
    pub dh_dp_alpha: PhasePoly,
    pub dh_dp_beta: PhasePoly,
    pub dh_dq: PhasePoly,
}

pub fn direct_hamilton_relations(sys: &HamiltonianSystem) -> HamiltonRelations {
    HamiltonRelations {
        dh_dt: sys.h.partial(PhaseVar::T),
        dh_dp_alpha: sys.h.partial(PhaseVar::PAlpha),
        dh_dp_beta: sys.h.partial(PhaseVar::PBeta),
        dh_dq: sys.h.partial(PhaseVar::Q),
    }
}

const LAGRANGIAN_VARS: [PhaseVar; 4] =
    [PhaseVar::Q, PhaseVar::T, PhaseVar::VAlpha, PhaseVar::VBeta];

/// Legendre transform of `L(q, v_α, v_β, t)` with `p = ∂L/∂v`.
///
/// Only the velocities that occur in `L` are transformed. Their Hessian
/// block must be constant and nonsingular.
pub fn legendre_hamiltonian(
    l: &PhasePoly,
    label: impl Into<String>,
) -> Result<HamiltonianSystem, MechError> {
    check_scope(l, &LAGRANGIAN_VARS, "a Lagrangian")?;
    let pairs: Vec<(PhaseVar, PhaseVar)> = [
        (PhaseVar::VAlpha, PhaseVar::PAlpha),
        (PhaseVar::VBeta, PhaseVar::PBeta),
    ]
    .into_iter()
    .filter(|(v, _)| l.uses(*v))
    .collect();
    if pairs.is_empty() {
        return Err(MechError::NonInvertibleMomenta(
            "the Lagrangian has no velocity dependence".into(),
        ));
    }
    let n = pairs.len();
    let momenta: Vec<PhasePoly> = pairs.iter().map(|(v, _)| l.partial(*v)).collect();
    let mut hess = vec![vec![GaussianRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            hess[i][j] = momenta[i]
                .partial(pairs[j].0)
                .as_constant()
                .ok_or_else(|| {
                    MechError::NonInvertibleMomenta(format!(
                        "p for {} is not linear in the velocities",
                        pairs[i].0
                    ))
                })?;
        }
    }
    let inv = invert(&hess)
        .ok_or_else(|| MechError::NonInvertibleMomenta("singular velocity Hessian".into()))?;
    // p = M v + b with b = p(v = 0)  ⇒  v = M⁻¹ (P − b)
    let at_rest: Vec<(PhaseVar, PhasePoly)> =
        pairs.iter().map(|(v, _)| (*v, PhasePoly::zero())).collect();
    let shifted: Vec<PhasePoly> = pairs
        .iter()
        .zip(&momenta)
        .map(|((_, p), pi)| &PhasePoly::var(*p) - &pi.substitute(&at_rest))
        .collect();
    let velocity: Vec<(PhaseVar, PhasePoly)> = (0..n)
        .map(|i| {
            let mut vi = PhasePoly::zero();
            for (j, s) in shifted.iter().enumerate() {
                vi = &vi + &s.scale(&inv[i][j]);
            }
            (pairs[i].0, vi)
        })
        .collect();
    let mut h = -&l.substitute(&velocity);
    for ((_, p), (_, v)) in pairs.iter().zip(&velocity) {
        h = &h + &(&PhasePoly::var(*p) * v);
    }
    HamiltonianSystem::new(h, label)
}

fn invert(m: &[Vec<GaussianRational>]) -> Option<Vec<Vec<GaussianRational>>> {
    match m.len() {
        1 => Some(vec![vec![m[0][0].recip()?]]),
        2 => {
            let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
            let r = det.recip()?;
            Some(vec![
                vec![&m[1][1] * &r, -(&m[0][1] * &r)],
                vec![-(&m[1][0] * &r), &m[0][0] * &r],
            ])
        }
        _ => unreachable!("at most two velocities"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratingKind {
    /// `G(q̄_α, q̄_β, Q̄_α, Q̄_β, t)`
    FirstKind,
    /// `𝒮(q̄_α, q̄_β, P_α, P_β, t)`
    SecondKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingFunction {
    kind: GeneratingKind,
    body: PhasePoly,
}

impl GeneratingFunction {
    pub fn new(kind: GeneratingKind, body: PhasePoly) -> Result<Self, MechError> {
        check_scope(&body, kind.variables(), kind.context())?;
        Ok(Self { kind, body })
    }

    pub fn kind(&self) -> GeneratingKind {
        self.kind
    }

    pub fn body(&self) -> &PhasePoly {
        &self.body
    }
}

impl GeneratingKind {
    fn variables(self) -> &'static [PhaseVar] {
        match self {
            GeneratingKind::FirstKind => &[
                PhaseVar::QBarAlpha,
                PhaseVar::QBarBeta,
                PhaseVar::BigQBarAlpha,
                PhaseVar::BigQBarBeta,
                PhaseVar::T,
            ],
            GeneratingKind::SecondKind => &[
                PhaseVar::QBarAlpha,
                PhaseVar::QBarBeta,
                PhaseVar::BigPAlpha,
                PhaseVar::BigPBeta,
                PhaseVar::T,
            ],
        }
    }

    fn context(self) -> &'static str {
        match self {
            GeneratingKind::FirstKind => "a first-kind generating function",
            GeneratingKind::SecondKind => "a second-kind generating function",
        }
    }
}

/// The transformation encoded by a generating function. `conj_*` are the new
/// momenta `P` for the first kind and the new coordinates `Q̄` for the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformParts {
    pub p_alpha: PhasePoly,
    pub p_beta: PhasePoly,
    pub conj_alpha: PhasePoly,
    pub conj_beta: PhasePoly,
    /// `𝓗 − H`
    pub hamiltonian_shift: PhasePoly,
}

pub fn generating_partials(g: &GeneratingFunction) -> TransformParts {
    let b = &g.body;
    let (ca, cb) = match g.kind {
        GeneratingKind::FirstKind => (
            -&b.partial(PhaseVar::BigQBarAlpha),
            -&b.partial(PhaseVar::BigQBarBeta),
        ),
        GeneratingKind::SecondKind => (
            b.partial(PhaseVar::BigPAlpha),
            b.partial(PhaseVar::BigPBeta),
        ),
    };
    TransformParts {
        p_alpha: b.partial(PhaseVar::QBarAlpha),
        p_beta: b.partial(PhaseVar::QBarBeta),
        conj_alpha: ca,
        conj_beta: cb,
        hamiltonian_shift: b.partial(PhaseVar::T),
    }
}

/// Consistency between a first-kind `G` and the second-kind function
/// `𝒮 = G + P_α Q̄_α + P_β Q̄_β`.
///
/// `p_*` give the new momenta, `qbar_*` the new coordinates `Q̄` (possibly in
/// terms of `P`). True iff the momenta equal `−∂G/∂Q̄` and, with `Q̄`
/// replaced by `qbar_*` in `𝒮`, `∂𝒮/∂P_α = qbar_alpha` and
/// `∂𝒮/∂P_β = qbar_beta`.
pub fn legendre_link_check(
    g: &GeneratingFunction,
    p_alpha: &PhasePoly,
    p_beta: &PhasePoly,
    qbar_alpha: &PhasePoly,
    qbar_beta: &PhasePoly,
) -> bool {
    if g.kind != GeneratingKind::FirstKind {
        return false;
    }
    let parts = generating_partials(g);
    if &parts.conj_alpha != p_alpha || &parts.conj_beta != p_beta {
        return false;
    }
    let big_p = |v| PhasePoly::var(v);
    let s = &(&g.body + &(&big_p(PhaseVar::BigPAlpha) * &PhasePoly::var(PhaseVar::BigQBarAlpha)))
        + &(&big_p(PhaseVar::BigPBeta) * &PhasePoly::var(PhaseVar::BigQBarBeta));
    let s = s.substitute(&[
        (PhaseVar::BigQBarAlpha, qbar_alpha.clone()),
        (PhaseVar::BigQBarBeta, qbar_beta.clone()),
    ]);
    &s.partial(PhaseVar::BigPAlpha) == qbar_alpha && &s.partial(PhaseVar::BigPBeta) == qbar_beta
}

/// Exact `e^{iπx}` for the values where it is a Gaussian rational
/// (`x` a multiple of 1/2); otherwise the exact value of its double-precision
/// approximation.
pub fn neg_one_pow(x: f64) -> GaussianRational {
    let twice = 2.0 * x;
    if twice == twice.round() {
        return match (twice as i64).rem_euclid(4) {
            0 => GaussianRational::one(),
            1 => GaussianRational::i(),
            2 => -GaussianRational::one(),
            _ => -GaussianRational::i(),
        };
    }
    let angle = std::f64::consts::PI * x;
    GaussianRational::from_complex(num_complex::Complex64::new(angle.cos(), angle.sin()))
        .expect("finite angle")
}
