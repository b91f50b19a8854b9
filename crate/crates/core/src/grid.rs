//! Uniform grids, fractional orders and sampled functions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("fractional order must lie in (0, 1], got {0}")]
    Order(f64),
    #[error("grid requires b > a with finite endpoints, got [{a}, {b}]")]
    Interval { a: f64, b: f64 },
    #[error("grid requires at least 2 intervals, got {0}")]
    TooFewIntervals(usize),
    #[error("expected {expected} samples, got {got}")]
    Length { expected: usize, got: usize },
}

/// Order of a fractional integral or derivative, `0 < alpha <= 1`.
///
/// `alpha = 1` is the classical limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, GridError> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(GridError::Order(alpha))
        }
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }

    /// The complementary order `1 - alpha`, or `None` when it is zero.
    pub fn complement(self) -> Option<FracOrder> {
        let c = 1.0 - self.0;
        (c > 0.0).then_some(Self(c))
    }
}

impl fmt::Display for FracOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Uniform discretization `t_k = a + k (b - a) / n`, `k = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self, GridError> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(GridError::Interval { a, b });
        }
        if n < 2 {
            return Err(GridError::TooFewIntervals(n));
        }
        Ok(Self { a, b, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals; there are `n + 1` nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Node `t_k`; the last node is exactly `b`.
    pub fn node(&self, k: usize) -> f64 {
        if k == self.n {
            self.b
        } else {
            self.a + k as f64 * self.step()
        }
    }

    /// `t_k - a`, computed from the index so left and right offsets mirror exactly.
    pub fn from_left(&self, k: usize) -> f64 {
        k as f64 * self.step()
    }

    /// `b - t_k`, computed from the index.
    pub fn from_right(&self, k: usize) -> f64 {
        (self.n - k) as f64 * self.step()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|k| self.node(k))
    }

    /// Indices excluding `frac` of the nodes at each end (at least one node).
    pub fn interior(&self, frac: f64) -> std::ops::Range<usize> {
        let band = ((frac * self.n as f64).ceil() as usize).max(1);
        band..(self.n + 1).saturating_sub(band)
    }
}

/// Values that sampled functions can carry: `f64` and `Complex64`.
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Mul<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn from_real(x: f64) -> Self;
    fn is_finite(self) -> bool;
    fn norm(self) -> f64;
    /// Marker for values that do not exist at a singular endpoint.
    fn non_finite() -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn non_finite() -> Self {
        f64::INFINITY
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn non_finite() -> Self {
        Complex64::new(f64::INFINITY, f64::NAN)
    }
}

/// Function values on every node of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<T: Scalar = f64> {
    grid: Grid,
    values: Vec<T>,
}

impl<T: Scalar> SampledFunction<T> {
    pub fn new(grid: Grid, values: Vec<T>) -> Result<Self, GridError> {
        if values.len() != grid.len() {
            return Err(GridError::Length {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> T) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Grid, c: T) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, T::zero())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn first(&self) -> T {
        self.values[0]
    }

    pub fn last(&self) -> T {
        self.values[self.grid.n]
    }

    /// `g(t) = f(a + b - t)`.
    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(
            self.grid, other.grid,
            "sampled functions on different grids"
        );
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    /// Sup norm over the given index range, ignoring non-finite markers.
    pub fn sup_norm_on(&self, range: std::ops::Range<usize>) -> f64 {
        self.values[range]
            .iter()
            .filter(|v| v.is_finite())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_on(0..self.values.len())
    }
}

impl SampledFunction<f64> {
    pub fn to_complex(&self) -> SampledFunction<Complex64> {
        SampledFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
        }
    }

    /// Composite trapezoid rule over the whole grid.
    pub fn trapezoid(&self) -> f64 {
        let h = self.grid.step();
        let n = self.grid.n;
        let inner: f64 = self.values[1..n].iter().sum();
        h * (inner + 0.5 * (self.values[0] + self.values[n]))
    }
}
