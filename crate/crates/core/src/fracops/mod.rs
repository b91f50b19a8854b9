//! Fractional integrals and derivatives of order `0 < alpha <= 1`.

mod numeric;
mod power;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use numeric::{
    left_caputo, left_rl_derivative, left_rl_integral, right_caputo, right_rl_derivative,
    right_rl_integral, right_rl_integral_frac,
};
pub(crate) use numeric::{left_rl_derivative_or_classical, right_rl_derivative_or_classical};
pub use power::{evaluate, power_oracle, PowerExpansion, PowerTerm};

use crate::grid::{FracOrder, SampledFunction, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{op} has no closed form on terms of the opposite side")]
    MixedSide { op: OperatorKind },
    #[error("parse error: {0}")]
    Parse(String),
}

/// The six operators, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    LeftIntegral,
    RightIntegral,
    LeftRlDerivative,
    RightRlDerivative,
    LeftCaputo,
    RightCaputo,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 6] = [
        OperatorKind::LeftIntegral,
        OperatorKind::RightIntegral,
        OperatorKind::LeftRlDerivative,
        OperatorKind::RightRlDerivative,
        OperatorKind::LeftCaputo,
        OperatorKind::RightCaputo,
    ];

    pub fn is_left(self) -> bool {
        matches!(
            self,
            OperatorKind::LeftIntegral | OperatorKind::LeftRlDerivative | OperatorKind::LeftCaputo
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::LeftIntegral => "rl-int-left",
            OperatorKind::RightIntegral => "rl-int-right",
            OperatorKind::LeftRlDerivative => "rl-deriv-left",
            OperatorKind::RightRlDerivative => "rl-deriv-right",
            OperatorKind::LeftCaputo => "caputo-left",
            OperatorKind::RightCaputo => "caputo-right",
        }
    }

    /// The same operator on the other side.
    pub fn mirror(self) -> Self {
        match self {
            OperatorKind::LeftIntegral => OperatorKind::RightIntegral,
            OperatorKind::RightIntegral => OperatorKind::LeftIntegral,
            OperatorKind::LeftRlDerivative => OperatorKind::RightRlDerivative,
            OperatorKind::RightRlDerivative => OperatorKind::LeftRlDerivative,
            OperatorKind::LeftCaputo => OperatorKind::RightCaputo,
            OperatorKind::RightCaputo => OperatorKind::LeftCaputo,
        }
    }

    /// Applies the grid discretization of this operator.
    pub fn apply<T: Scalar>(
        self,
        f: &SampledFunction<T>,
        ord: FracOrder,
    ) -> Result<SampledFunction<T>, FracError> {
        Ok(match self {
            OperatorKind::LeftIntegral => left_rl_integral(f, ord),
            OperatorKind::RightIntegral => right_rl_integral(f, ord),
            OperatorKind::LeftRlDerivative => left_rl_derivative(f, ord)?,
            OperatorKind::RightRlDerivative => right_rl_derivative(f, ord)?,
            OperatorKind::LeftCaputo => left_caputo(f, ord),
            OperatorKind::RightCaputo => right_caputo(f, ord),
        })
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FracError::Parse(format!("unknown operator '{s}'")))
    }
}
