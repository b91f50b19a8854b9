//! Fractional calculus on uniform grids, an exact polynomial engine for the
//! fractional Poisson bracket, fractional Hamiltonian mechanics and the
//! fractional oscillator boundary-value problem.

pub mod cli;
pub mod fracops;
pub mod gamma;
pub mod grid;
pub mod hamjacobi;
pub mod mechanics;
pub mod oscillator;
pub mod quadrature;
pub mod selftest;
pub mod symexpr;

pub use grid::{FracOrder, Grid, GridError, SampledFunction, Scalar};
