use rand::Rng;

use super::fp_bracket;
use crate::symexpr::{PhasePoly, PhaseVar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomOutcome {
    pub label: &'static str,
    pub passed: bool,
}

const MAX_DEGREE: u32 = 3;
const MAX_TERMS: usize = 5;

/// Runs the bracket properties on `trials` random triples of degree ≤ 3
/// polynomials in `(q, p_alpha, p_beta, t)`. Equality is exact.
pub fn check_axioms<R: Rng + ?Sized>(rng: &mut R, trials: usize) -> Vec<AxiomOutcome> {
    let q = PhasePoly::var(PhaseVar::Q);
    let pa = PhasePoly::var(PhaseVar::PAlpha);
    let pb = PhasePoly::var(PhaseVar::PBeta);
    let mut ok = [true; 6];
    for _ in 0..trials {
        let mut draw = || PhasePoly::random(rng, &PhaseVar::CORE, MAX_DEGREE, MAX_TERMS);
        let (f1, f2, f3) = (draw(), draw(), draw());
        let g = &f2;

        ok[0] &= fp_bracket(&f1, g) == -fp_bracket(g, &f1);
        ok[1] &= fp_bracket(&(&f1 + &f3), g) == &fp_bracket(&f1, g) + &fp_bracket(&f3, g);
        let jacobi = &(&fp_bracket(&f1, &fp_bracket(&f2, &f3))
            + &fp_bracket(&f2, &fp_bracket(&f3, &f1)))
            + &fp_bracket(&f3, &fp_bracket(&f1, &f2));
        ok[2] &= jacobi.is_zero();
        let dp = &f1.partial(PhaseVar::PAlpha) + &f1.partial(PhaseVar::PBeta);
        ok[3] &= fp_bracket(&f1, &q) == -dp;
        let dq = f1.partial(PhaseVar::Q);
        ok[4] &= fp_bracket(&f1, &pa) == dq && fp_bracket(&f1, &pb) == dq;
        let dh = -f1.partial(PhaseVar::Q);
        ok[5] &= fp_bracket(&pa, &f1) == dh && fp_bracket(&pb, &f1) == dh;
    }
    let minus_one = PhasePoly::int(-1);
    let fundamental = fp_bracket(&q, &q).is_zero()
        && fp_bracket(&pa, &pa).is_zero()
        && fp_bracket(&pa, &pb).is_zero()
        && fp_bracket(&pa, &q) == minus_one
        && fp_bracket(&pb, &q) == minus_one;
    vec![
        AxiomOutcome {
            label: "(a) antisymmetry",
            passed: ok[0],
        },
        AxiomOutcome {
            label: "(b) left linearity",
            passed: ok[1],
        },
        AxiomOutcome {
            label: "(c) Jacobi identity",
            passed: ok[2],
        },
        AxiomOutcome {
            label: "(d) [F,q] = -(dF/dp_alpha + dF/dp_beta)",
            passed: ok[3],
        },
        AxiomOutcome {
            label: "(f) [F,p_alpha] = [F,p_beta] = dF/dq",
            passed: ok[4],
        },
        AxiomOutcome {
            label: "(g) fundamental brackets",
            passed: fundamental,
        },
        AxiomOutcome {
            label: "canonical [p_alpha,H] = [p_beta,H] = -dH/dq",
            passed: ok[5],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_axioms_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let out = check_axioms(&mut rng, 100);
        assert_eq!(out.len(), 7);
        assert!(out.iter().all(|o| o.passed), "{out:?}");
    }
}
