//! Exact multivariate polynomials over the phase-space variables.

mod coeff;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

pub use coeff::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("no value assigned to variable {0}")]
    MissingVariable(PhaseVar),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// The fixed, ordered variable universe. The last eight form the auxiliary
/// bank used by generating functions and Lagrangians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PhaseVar {
    Q,
    PAlpha,
    PBeta,
    T,
    QBarAlpha,
    QBarBeta,
    BigQBarAlpha,
    BigQBarBeta,
    BigPAlpha,
    BigPBeta,
    VAlpha,
    VBeta,
}

pub const NVARS: usize = 12;

impl PhaseVar {
    pub const ALL: [PhaseVar; NVARS] = [
        PhaseVar::Q,
        PhaseVar::PAlpha,
        PhaseVar::PBeta,
        PhaseVar::T,
        PhaseVar::QBarAlpha,
        PhaseVar::QBarBeta,
        PhaseVar::BigQBarAlpha,
        PhaseVar::BigQBarBeta,
        PhaseVar::BigPAlpha,
        PhaseVar::BigPBeta,
        PhaseVar::VAlpha,
        PhaseVar::VBeta,
    ];

    pub const CORE: [PhaseVar; 4] = [PhaseVar::Q, PhaseVar::PAlpha, PhaseVar::PBeta, PhaseVar::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PhaseVar::Q => "q",
            PhaseVar::PAlpha => "p_alpha",
            PhaseVar::PBeta => "p_beta",
            PhaseVar::T => "t",
            PhaseVar::QBarAlpha => "qbar_alpha",
            PhaseVar::QBarBeta => "qbar_beta",
            PhaseVar::BigQBarAlpha => "Qbar_alpha",
            PhaseVar::BigQBarBeta => "Qbar_beta",
            PhaseVar::BigPAlpha => "P_alpha",
            PhaseVar::BigPBeta => "P_beta",
            PhaseVar::VAlpha => "v_alpha",
            PhaseVar::VBeta => "v_beta",
        }
    }

    /// `x` is accepted as an alias for `q`.
    pub fn from_name(s: &str) -> Option<PhaseVar> {
        if s == "x" {
            return Some(PhaseVar::Q);
        }
        PhaseVar::ALL.into_iter().find(|v| v.name() == s)
    }

    pub fn is_core(self) -> bool {
        self.index() < 4
    }
}

impl fmt::Display for PhaseVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector indexed by [`PhaseVar::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: PhaseVar) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn exponent(&self, v: PhaseVar) -> u32 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (PhaseVar, u32)> + '_ {
        PhaseVar::ALL
            .into_iter()
            .filter_map(|v| match self.exponent(v) {
                0 => None,
                e => Some((v, e)),
            })
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }
}

// Graded order: total degree first, then lexicographic with q the most
// significant variable. The map iterates ascending; rendering reverses.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhasePoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl PhasePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(GaussianRational::ratio(num, den))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn var(v: PhaseVar) -> Self {
        Self::term(GaussianRational::one(), Monomial::var(v))
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, v: PhaseVar) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// The constant coefficient when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn uses(&self, v: PhaseVar) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn variables(&self) -> Vec<PhaseVar> {
        PhaseVar::ALL
            .into_iter()
            .filter(|&v| self.uses(v))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> PhasePoly {
        if c.is_zero() {
            return PhasePoly::zero();
        }
        PhasePoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> PhasePoly {
        let mut acc = PhasePoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, v: PhaseVar) -> PhasePoly {
        let i = v.index();
        let mut out = PhasePoly::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[i] -= 1;
            out.add_term(dm, c * &GaussianRational::from_int(e as i64));
        }
        out
    }

    /// Simultaneous substitution: every listed variable is replaced by its
    /// polynomial in one pass, so replacements never see each other.
    pub fn substitute(&self, subs: &[(PhaseVar, PhasePoly)]) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut factor = PhasePoly::one();
            for (v, p) in subs {
                let e = rest.0[v.index()];
                if e > 0 {
                    rest.0[v.index()] = 0;
                    factor = &factor * &p.pow(e);
                }
            }
            let piece = factor.scale(c);
            for (fm, fc) in piece.terms {
                out.add_term(fm.mul(&rest), fc);
            }
        }
        out
    }

    /// Exact evaluation; every variable occurring in `self` must be assigned.
    pub fn eval_exact(
        &self,
        assignment: &BTreeMap<PhaseVar, GaussianRational>,
    ) -> Result<GaussianRational, SymError> {
        let mut total = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.vars() {
                let x = assignment.get(&v).ok_or(SymError::MissingVariable(v))?;
                for _ in 0..e {
                    term = &term * x;
                }
            }
            total = total + term;
        }
        Ok(total)
    }

    /// Floating-point evaluation.
    pub fn eval(&self, assignment: &BTreeMap<PhaseVar, Complex64>) -> Result<Complex64, SymError> {
        let mut total = Complex64::zero();
        for (m, c) in &self.terms {
            let mut term = c.to_complex();
            for (v, e) in m.vars() {
                let x = assignment.get(&v).ok_or(SymError::MissingVariable(v))?;
                term *= x.powu(e);
            }
            total += term;
        }
        Ok(total)
    }

    /// Random polynomial in `vars` with at most `max_terms` terms, total
    /// degree ≤ `max_degree`, and small rational coefficients.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        vars: &[PhaseVar],
        max_degree: u32,
        max_terms: usize,
    ) -> PhasePoly {
        let mut p = PhasePoly::zero();
        let nterms = rng.random_range(0..=max_terms);
        for _ in 0..nterms {
            let mut m = Monomial::one();
            let deg = rng.random_range(0..=max_degree);
            for _ in 0..deg {
                if vars.is_empty() {
                    break;
                }
                let v = vars[rng.random_range(0..vars.len())];
                m.0[v.index()] += 1;
            }
            let num = rng.random_range(-9i64..=9);
            let den = rng.random_range(1i64..=6);
            p.add_term(m, GaussianRational::ratio(num, den));
        }
        p
    }
}

impl From<PhaseVar> for PhasePoly {
    fn from(v: PhaseVar) -> Self {
        PhasePoly::var(v)
    }
}

impl<'a> Add<&'a PhasePoly> for &'a PhasePoly {
    type Output = PhasePoly;
    fn add(self, rhs: &PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a PhasePoly> for &'a PhasePoly {
    type Output = PhasePoly;
    fn sub(self, rhs: &PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a PhasePoly> for &'a PhasePoly {
    type Output = PhasePoly;
    fn mul(self, rhs: &PhasePoly) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &PhasePoly {
    type Output = PhasePoly;
    fn neg(self) -> PhasePoly {
        PhasePoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for PhasePoly {
            type Output = PhasePoly;
            fn $method(self, rhs: PhasePoly) -> PhasePoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PhasePoly {
    type Output = PhasePoly;
    fn neg(self) -> PhasePoly {
        -&self
    }
}

fn fmt_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (v, e) in m.vars() {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "{v}^{e}")?;
    }
    Ok(())
}

/// Terms in descending graded order, explicit exponents (`q^1`), unit
/// coefficients dropped on non-constant terms, e.g. `1/2*p_alpha^2 - q^1 + 3`.
impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative_real = c.is_real() && c.re < num_rational::BigRational::zero();
            let c = if negative_real { -c.clone() } else { c.clone() };
            match (idx, negative_real) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_constant() {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}*")?;
                }
                fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl FromStr for PhasePoly {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Self, SymError> {
        parse::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PhasePoly {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation_is_canonical() {
        let q2 = p("q^2");
        assert!((&q2 + &-&q2).is_zero());
        assert_eq!(&q2 + &PhasePoly::zero(), q2);
        assert_eq!(&q2 * &PhasePoly::one(), q2);
    }

    #[test]
    fn potential_part_of_fo_hamiltonian() {
        // ½k q² + qE q with k = 3, qE = 2/5
        let sum = &p("3/2*q^2") + &p("2/5*q");
        assert_eq!(sum, p("3/2*q^2 + 0.4*q"));
        assert_eq!(sum.to_string(), "3/2*q^2 + 2/5*q^1");
    }

    #[test]
    fn i_squared() {
        assert_eq!(&PhasePoly::i() * &PhasePoly::i(), PhasePoly::int(-1));
        assert_eq!(p("i*i"), PhasePoly::int(-1));
    }

    #[test]
    fn partials() {
        let h = p("p_alpha^2/4");
        assert_eq!(h.partial(PhaseVar::PAlpha), p("p_alpha/2"));
        assert!(PhasePoly::int(7).partial(PhaseVar::Q).is_zero());
        assert_eq!(p("q*p_beta").partial(PhaseVar::Q), p("p_beta"));
    }

    #[test]
    fn evaluation() {
        let mut a = BTreeMap::new();
        a.insert(PhaseVar::Q, GaussianRational::from_int(3));
        assert_eq!(
            p("q^2").eval_exact(&a).unwrap(),
            GaussianRational::from_int(9)
        );
        assert_eq!(
            PhasePoly::zero().eval_exact(&a).unwrap(),
            GaussianRational::zero()
        );
        let mut b = BTreeMap::new();
        b.insert(PhaseVar::PAlpha, GaussianRational::from_int(4));
        assert_eq!(
            p("1/2*p_alpha").eval_exact(&b).unwrap(),
            GaussianRational::from_int(2)
        );
        assert_eq!(
            p("q + t").eval_exact(&a),
            Err(SymError::MissingVariable(PhaseVar::T))
        );
        let mut c = BTreeMap::new();
        c.insert(PhaseVar::Q, Complex64::new(0.5, 0.0));
        assert_eq!(p("4*q^3 - i").eval(&c).unwrap(), Complex64::new(0.5, -1.0));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let f = p("q*p_alpha");
        let swapped = f.substitute(&[
            (PhaseVar::Q, PhasePoly::var(PhaseVar::PAlpha)),
            (PhaseVar::PAlpha, PhasePoly::var(PhaseVar::Q)),
        ]);
        assert_eq!(swapped, f);
        let g = p("q^2 + t").substitute(&[(PhaseVar::Q, p("t + 1"))]);
        assert_eq!(g, p("t^2 + 3*t + 1"));
    }

    #[test]
    fn rendering() {
        assert_eq!(PhasePoly::zero().to_string(), "0");
        assert_eq!(PhasePoly::int(-1).to_string(), "-1");
        assert_eq!(
            p("-q + 3 + q*p_alpha^2").to_string(),
            "q^1*p_alpha^2 - q^1 + 3"
        );
        assert_eq!(p("(1+2*i)*t").to_string(), "(1+2*i)*t^1");
        assert_eq!(p("-i*t").to_string(), "-1*i*t^1");
    }

    #[test]
    fn render_parse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = PhasePoly::random(&mut rng, &PhaseVar::ALL, 4, 6);
            let b = &a * &PhasePoly::i();
            let s = &a + &b;
            assert_eq!(s.to_string().parse::<PhasePoly>().unwrap(), s);
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = p("q + 2*p_alpha - 1/3");
        assert_eq!(a.pow(3), &(&a * &a) * &a);
        assert_eq!(a.pow(0), PhasePoly::one());
    }
}
