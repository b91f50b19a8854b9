//! Closed-form action of the fractional operators on power functions.
//!
//! A [`PowerExpansion`] is a finite sum of `c (t-a)^beta` and `c (b-t)^beta`
//! terms. Same-sided operators map each term to another power through a
//! ratio of Gamma functions, which gives an exact oracle for the grid
//! discretizations.

use std::fmt;
use std::str::FromStr;

use super::{FracError, OperatorKind};
use crate::gamma::gamma;
use crate::grid::{FracOrder, Grid, SampledFunction};

/// One term `coeff * base^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

/// `sum c_i (t-a)^{beta_i} + sum d_j (b-t)^{gamma_j}` in canonical form:
/// exponents strictly increasing per side, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerExpansion {
    left: Vec<PowerTerm>,
    right: Vec<PowerTerm>,
}

fn canonicalize(mut terms: Vec<PowerTerm>) -> Result<Vec<PowerTerm>, FracError> {
    for t in &terms {
        if !(t.exponent.is_finite() && t.exponent > -1.0) {
            return Err(FracError::Domain(format!(
                "power exponent {} must be finite and > -1",
                t.exponent
            )));
        }
        if !t.coeff.is_finite() {
            return Err(FracError::Domain(format!(
                "power coefficient {} is not finite",
                t.coeff
            )));
        }
    }
    terms.sort_by(|x, y| x.exponent.total_cmp(&y.exponent));
    let mut out: Vec<PowerTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.exponent == t.exponent => last.coeff += t.coeff,
            _ => out.push(t),
        }
    }
    out.retain(|t| t.coeff != 0.0);
    Ok(out)
}

impl PowerExpansion {
    pub fn new(left: Vec<PowerTerm>, right: Vec<PowerTerm>) -> Result<Self, FracError> {
        Ok(Self {
            left: canonicalize(left)?,
            right: canonicalize(right)?,
        })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `coeff * (t-a)^exponent`.
    pub fn left_power(coeff: f64, exponent: f64) -> Result<Self, FracError> {
        Self::new(vec![PowerTerm { coeff, exponent }], vec![])
    }

    /// `coeff * (b-t)^exponent`.
    pub fn right_power(coeff: f64, exponent: f64) -> Result<Self, FracError> {
        Self::new(vec![], vec![PowerTerm { coeff, exponent }])
    }

    pub fn left_terms(&self) -> &[PowerTerm] {
        &self.left
    }

    pub fn right_terms(&self) -> &[PowerTerm] {
        &self.right
    }

    pub fn is_zero(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// Pointwise values on `grid`. Negative powers at their singular
    /// endpoint produce a non-finite value.
    pub fn evaluate(&self, grid: &Grid) -> SampledFunction<f64> {
        let values = (0..grid.len())
            .map(|k| {
                let (l, r) = (grid.from_left(k), grid.from_right(k));
                let left: f64 = self.left.iter().map(|t| t.coeff * l.powf(t.exponent)).sum();
                let right: f64 = self
                    .right
                    .iter()
                    .map(|t| t.coeff * r.powf(t.exponent))
                    .sum();
                left + right
            })
            .collect();
        SampledFunction::new(*grid, values).expect("one value per node")
    }
}

/// Pointwise evaluation of an expansion on a grid.
pub fn evaluate(expr: &PowerExpansion, grid: &Grid) -> SampledFunction<f64> {
    expr.evaluate(grid)
}

fn map_terms(
    terms: &[PowerTerm],
    f: impl Fn(PowerTerm) -> Result<Option<PowerTerm>, FracError>,
) -> Result<Vec<PowerTerm>, FracError> {
    let mut out = Vec::with_capacity(terms.len());
    for &t in terms {
        if let Some(m) = f(t)? {
            out.push(m);
        }
    }
    Ok(out)
}

fn integral_term(t: PowerTerm, alpha: f64) -> Result<Option<PowerTerm>, FracError> {
    let b = t.exponent;
    Ok(Some(PowerTerm {
        coeff: t.coeff * gamma(b + 1.0) / gamma(b + 1.0 + alpha),
        exponent: b + alpha,
    }))
}

fn rl_derivative_term(t: PowerTerm, alpha: f64) -> Result<Option<PowerTerm>, FracError> {
    let b = t.exponent;
    if b <= alpha {
        return Err(FracError::Domain(format!(
            "power rule for the Riemann-Liouville derivative needs exponent {b} > order {alpha}"
        )));
    }
    Ok(Some(PowerTerm {
        coeff: t.coeff * gamma(b + 1.0) / gamma(b + 1.0 - alpha),
        exponent: b - alpha,
    }))
}

fn caputo_term(t: PowerTerm, alpha: f64) -> Result<Option<PowerTerm>, FracError> {
    let b = t.exponent;
    if b == 0.0 {
        return Ok(None);
    }
    if b < 0.0 {
        return Err(FracError::Domain(format!(
            "Caputo derivative of a power needs exponent {b} >= 0"
        )));
    }
    Ok(Some(PowerTerm {
        coeff: t.coeff * gamma(b + 1.0) / gamma(b + 1.0 - alpha),
        exponent: b - alpha,
    }))
}

/// Exact image of `expr` under the operator `kind` of order `ord`.
///
/// Left operators accept only `(t-a)` terms and right operators only
/// `(b-t)` terms; anything else is [`FracError::MixedSide`].
pub fn power_oracle(
    expr: &PowerExpansion,
    kind: OperatorKind,
    ord: FracOrder,
) -> Result<PowerExpansion, FracError> {
    let alpha = ord.alpha();
    let (same, other) = if kind.is_left() {
        (&expr.left, &expr.right)
    } else {
        (&expr.right, &expr.left)
    };
    if !other.is_empty() {
        return Err(FracError::MixedSide { op: kind });
    }
    let mapped = match kind {
        OperatorKind::LeftIntegral | OperatorKind::RightIntegral => {
            map_terms(same, |t| integral_term(t, alpha))?
        }
        OperatorKind::LeftRlDerivative | OperatorKind::RightRlDerivative => {
            if ord.is_classical() {
                return Err(FracError::Domain(
                    "Riemann-Liouville derivative needs 0 < alpha < 1".into(),
                ));
            }
            map_terms(same, |t| rl_derivative_term(t, alpha))?
        }
        OperatorKind::LeftCaputo | OperatorKind::RightCaputo => {
            map_terms(same, |t| caputo_term(t, alpha))?
        }
    };
    if kind.is_left() {
        PowerExpansion::new(mapped, vec![])
    } else {
        PowerExpansion::new(vec![], mapped)
    }
}

impl fmt::Display for PowerExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let terms = self
            .left
            .iter()
            .map(|t| (t, "t-a"))
            .chain(self.right.iter().map(|t| (t, "b-t")));
        for (t, base) in terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*({})^{}", t.coeff, base, t.exponent)?;
        }
        Ok(())
    }
}

/// Parses literals such as `1*(t-a)^2 + 3*(b-t)^0.5 - 2`.
///
/// A bare number is a constant, `(t-a)` without `^` has exponent 1 and a
/// missing coefficient is 1.
impl FromStr for PowerExpansion {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(FracError::Parse("empty power expansion".into()));
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut rest = src.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = 1.0;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1.0;
                rest = r;
            } else if !first {
                return Err(FracError::Parse(format!("expected '+' or '-' at '{rest}'")));
            }
            first = false;
            let (coeff, r) = take_number(rest);
            rest = r;
            let coeff = match coeff {
                Some(c) => c?,
                None => 1.0,
            };
            let base = if let Some(r) = rest.strip_prefix('*') {
                rest = r;
                None
            } else {
                Some(())
            };
            let side = if let Some(r) = rest.strip_prefix("(t-a)") {
                rest = r;
                Some(true)
            } else if let Some(r) = rest.strip_prefix("(b-t)") {
                rest = r;
                Some(false)
            } else {
                None
            };
            let side = match (base, side) {
                (_, Some(s)) => s,
                (Some(()), None) => {
                    // bare constant
                    left.push(PowerTerm {
                        coeff: sign * coeff,
                        exponent: 0.0,
                    });
                    continue;
                }
                (None, None) => {
                    return Err(FracError::Parse(format!(
                        "expected '(t-a)' or '(b-t)' at '{rest}'"
                    )))
                }
            };
            let exponent = if let Some(r) = rest.strip_prefix('^') {
                let (e, r) = take_number(r);
                rest = r;
                match e {
                    Some(e) => e?,
                    None => return Err(FracError::Parse("missing exponent after '^'".into())),
                }
            } else {
                1.0
            };
            let term = PowerTerm {
                coeff: sign * coeff,
                exponent,
            };
            if side {
                left.push(term);
            } else {
                right.push(term);
            }
        }
        PowerExpansion::new(left, right)
    }
}

/// Splits a leading unsigned decimal number (with optional exponent part).
fn take_number(s: &str) -> (Option<Result<f64, FracError>>, &str) {
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
        i += 1;
    }
    if i == 0 {
        // allow a parenthesized negative exponent such as ^(-0.5)
        if let Some(inner) = s.strip_prefix("(-") {
            if let Some(end) = inner.find(')') {
                let v = inner[..end]
                    .parse::<f64>()
                    .map(|v| -v)
                    .map_err(|_| FracError::Parse(format!("bad number '-{}'", &inner[..end])));
                return (Some(v), &inner[end + 1..]);
            }
        }
        return (None, s);
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let digits_start = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j > digits_start {
            i = j;
        }
    }
    let text = &s[..i];
    let v = text
        .parse::<f64>()
        .map_err(|_| FracError::Parse(format!("bad number '{text}'")));
    (Some(v), &s[i..])
}
