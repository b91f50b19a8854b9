//! The oscillator Lagrangians and Hamiltonians, with physical constants
//! folded into exact coefficients. `v_beta` / `p_beta` carry the order-β/2
//! velocity and momentum of the dissipative model.

use num_traits::Zero;

use super::{HamiltonianSystem, MechError};
use crate::symexpr::{GaussianRational, PhasePoly, PhaseVar};

fn var(v: PhaseVar) -> PhasePoly {
    PhasePoly::var(v)
}

fn recip(c: &GaussianRational, what: &str) -> Result<GaussianRational, MechError> {
    c.recip()
        .ok_or_else(|| MechError::NonInvertibleMomenta(format!("{what} is zero")))
}

fn half() -> GaussianRational {
    GaussianRational::ratio(1, 2)
}

/// `½k q² + qE·q`
fn potential(k: &GaussianRational, qe: &GaussianRational) -> PhasePoly {
    let q = var(PhaseVar::Q);
    &(&q * &q).scale(&(&half() * k)) + &q.scale(qe)
}

/// `L = ½m v_α² − ½k q² − qE·q`
pub fn fo_lagrangian(
    m: &GaussianRational,
    k: &GaussianRational,
    qe: &GaussianRational,
) -> PhasePoly {
    let v = var(PhaseVar::VAlpha);
    &(&v * &v).scale(&(&half() * m)) - &potential(k, qe)
}

/// `H = p_α²/(2m) + ½k q² + qE·q`
pub fn fo_hamiltonian(
    m: &GaussianRational,
    k: &GaussianRational,
    qe: &GaussianRational,
) -> Result<HamiltonianSystem, MechError> {
    let p = var(PhaseVar::PAlpha);
    let inv2m = recip(&(m.clone() + m.clone()), "m_alpha")?;
    HamiltonianSystem::new(
        &(&p * &p).scale(&inv2m) + &potential(k, qe),
        "fractional oscillator",
    )
}

/// `−iγ/(−1)^{β/2}` with the principal branch; the damping coupling.
pub fn damping_coefficient(gamma: &GaussianRational, beta: f64) -> GaussianRational {
    let branch = super::neg_one_pow(beta / 2.0);
    let inv = branch.recip().expect("unit modulus");
    -(&(&GaussianRational::i() * gamma) * &inv)
}

/// `L = ½m v_α² − ½k q² − iγ/(2(−1)^{β/2}) v_β²`
pub fn dissipative_lagrangian(
    m: &GaussianRational,
    k: &GaussianRational,
    gamma: &GaussianRational,
    beta: f64,
) -> PhasePoly {
    let vb = var(PhaseVar::VBeta);
    let c = &half() * &damping_coefficient(gamma, beta);
    &fo_lagrangian(m, k, &GaussianRational::zero()) + &(&vb * &vb).scale(&c)
}

/// The dissipative Hamiltonian in the printed form
/// `p_α²/(2m) + ½k q² + p_β²/(2iγ(−1)^{β/2})`.
pub fn dissipative_hamiltonian(
    m: &GaussianRational,
    k: &GaussianRational,
    gamma: &GaussianRational,
    beta: f64,
) -> Result<HamiltonianSystem, MechError> {
    let base = fo_hamiltonian(m, k, &GaussianRational::zero())?;
    let pb = var(PhaseVar::PBeta);
    let two_i_gamma = &GaussianRational::from_int(2) * &(&GaussianRational::i() * gamma);
    let denom = &two_i_gamma * &super::neg_one_pow(beta / 2.0);
    let c = recip(&denom, "gamma")?;
    HamiltonianSystem::new(
        base.hamiltonian() + &(&pb * &pb).scale(&c),
        "dissipative oscillator",
    )
}
