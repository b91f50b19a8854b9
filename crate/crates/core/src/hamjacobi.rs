//! Residual checks for the fractional Hamilton–Jacobi equation of the
//! oscillator, its separated action and the wavefunction ansatz.
//!
//! `x` and `x̄_α` are independent coordinates of the action. Derivatives of
//! the amplitude and of `ψ` are central differences with steps
//! `FD_RELATIVE_STEP × (coordinate range)`.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HjError {
    #[error("invalid parameter {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
}

pub const FD_RELATIVE_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HjParams {
    pub m_alpha: f64,
    pub k: f64,
    pub charge: f64,
    pub field_e: f64,
    /// Separation constant of `−∂S/∂t = β`.
    pub beta_sep: f64,
}

impl HjParams {
    pub fn new(
        m_alpha: f64,
        k: f64,
        charge: f64,
        field_e: f64,
        beta_sep: f64,
    ) -> Result<Self, HjError> {
        if !(m_alpha.is_finite() && m_alpha > 0.0) {
            return Err(HjError::Invalid {
                field: "m_alpha",
                reason: format!("must be finite and > 0, got {m_alpha}"),
            });
        }
        for (field, v) in [
            ("k", k),
            ("charge", charge),
            ("field_E", field_e),
            ("beta_sep", beta_sep),
        ] {
            if !v.is_finite() {
                return Err(HjError::Invalid {
                    field,
                    reason: format!("must be finite, got {v}"),
                });
            }
        }
        Ok(Self {
            m_alpha,
            k,
            charge,
            field_e,
            beta_sep,
        })
    }

    /// `½k x² + qE x`
    pub fn potential(&self, x: f64) -> f64 {
        0.5 * self.k * x * x + self.charge * self.field_e * x
    }

    /// `2m_α(β − ½k x² − qE x)`, nonnegative on the root domain.
    pub fn radicand(&self, x: f64) -> f64 {
        2.0 * self.m_alpha * (self.beta_sep - self.potential(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub xbar: f64,
    pub t: f64,
}

/// An action `S(x, x̄_α, t)` with analytic partials.
pub trait ActionField {
    fn params(&self) -> &HjParams;
    fn value(&self, s: Sample) -> Result<f64, HjError>;
    fn d_xbar(&self, s: Sample) -> Result<f64, HjError>;
    fn d_t(&self, s: Sample) -> Result<f64, HjError>;
}

/// `S_FO = x̄_α √(2m_α(β − ½kx² − qEx)) − β_t t`, normally with `β_t = β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatedAction {
    params: HjParams,
    time_beta: f64,
}

impl SeparatedAction {
    pub fn new(params: HjParams) -> Self {
        Self {
            params,
            time_beta: params.beta_sep,
        }
    }

    /// Replaces `β` in the `−βt` term only.
    pub fn with_time_beta(mut self, beta: f64) -> Self {
        self.time_beta = beta;
        self
    }

    fn root(&self, x: f64) -> Result<f64, HjError> {
        let r = self.params.radicand(x);
        if r < 0.0 {
            return Err(HjError::Domain(format!(
                "x = {x} is outside the root domain (radicand {r})"
            )));
        }
        Ok(r.sqrt())
    }
}

impl ActionField for SeparatedAction {
    fn params(&self) -> &HjParams {
        &self.params
    }

    fn value(&self, s: Sample) -> Result<f64, HjError> {
        Ok(s.xbar * self.root(s.x)? - self.time_beta * s.t)
    }

    fn d_xbar(&self, s: Sample) -> Result<f64, HjError> {
        self.root(s.x)
    }

    fn d_t(&self, s: Sample) -> Result<f64, HjError> {
        self.root(s.x)?;
        Ok(-self.time_beta)
    }
}

/// `∂S/∂t + (1/2m_α)(∂S/∂x̄_α)² + ½kx² + qEx`.
pub fn hj_residual<S: ActionField + ?Sized>(action: &S, s: Sample) -> Result<f64, HjError> {
    let p = action.params();
    let sx = action.d_xbar(s)?;
    Ok(action.d_t(s)? + sx * sx / (2.0 * p.m_alpha) + p.potential(s.x))
}

/// `∂S/∂β = m_α x̄_α / √(2m_α(β − ½kx² − qEx)) − t`, the new coordinate.
pub fn new_coordinate_q(action: &SeparatedAction, s: Sample) -> Result<f64, HjError> {
    let r = action.params.radicand(s.x);
    if r <= 0.0 {
        return Err(HjError::Domain(format!(
            "x = {} is not in the interior of the root domain",
            s.x
        )));
    }
    Ok(action.params.m_alpha * s.xbar / r.sqrt() - s.t)
}

/// Central-difference steps for `x̄_α` and `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub xbar: f64,
    pub t: f64,
}

impl FdSteps {
    /// `FD_RELATIVE_STEP` times the width of each coordinate range.
    pub fn for_box(b: &SampleBox) -> Self {
        Self {
            xbar: FD_RELATIVE_STEP * (b.xbar.1 - b.xbar.0),
            t: FD_RELATIVE_STEP * (b.t.1 - b.t.0),
        }
    }
}

impl Default for FdSteps {
    fn default() -> Self {
        Self {
            xbar: FD_RELATIVE_STEP,
            t: FD_RELATIVE_STEP,
        }
    }
}

/// `ψ = A · e^{iS/ħ}`.
pub struct WaveAnsatz<A, S> {
    pub amplitude: A,
    pub phase: S,
    pub hbar: f64,
    pub steps: FdSteps,
}

impl<A, S> WaveAnsatz<A, S>
where
    A: Fn(Sample) -> f64,
    S: ActionField,
{
    pub fn new(amplitude: A, phase: S, hbar: f64) -> Result<Self, HjError> {
        if !(hbar.is_finite() && hbar >= 0.0) {
            return Err(HjError::Invalid {
                field: "hbar",
                reason: format!("must be finite and >= 0, got {hbar}"),
            });
        }
        Ok(Self {
            amplitude,
            phase,
            hbar,
            steps: FdSteps::default(),
        })
    }

    pub fn with_steps(mut self, steps: FdSteps) -> Self {
        self.steps = steps;
        self
    }

    fn shifted(s: Sample, dxbar: f64, dt: f64) -> Sample {
        Sample {
            x: s.x,
            xbar: s.xbar + dxbar,
            t: s.t + dt,
        }
    }

    fn psi(&self, s: Sample) -> Result<Complex64, HjError> {
        let a = (self.amplitude)(s);
        Ok(a * Complex64::from_polar(1.0, self.phase.value(s)? / self.hbar))
    }
}

/// Residuals of the real/imaginary split as written:
/// `(1/2m)(S_x̄)² + S_t + ½kx² + qEx − (ħ²/2m)(A_x̄)²` and `A_t`.
pub fn madelung_split_residuals<A, S>(
    w: &WaveAnsatz<A, S>,
    s: Sample,
) -> Result<(f64, f64), HjError>
where
    A: Fn(Sample) -> f64,
    S: ActionField,
{
    let p = w.phase.params();
    let (hx, ht) = (w.steps.xbar, w.steps.t);
    let amp = &w.amplitude;
    let a_x = (amp(WaveAnsatz::<A, S>::shifted(s, hx, 0.0))
        - amp(WaveAnsatz::<A, S>::shifted(s, -hx, 0.0)))
        / (2.0 * hx);
    let a_t = (amp(WaveAnsatz::<A, S>::shifted(s, 0.0, ht))
        - amp(WaveAnsatz::<A, S>::shifted(s, 0.0, -ht)))
        / (2.0 * ht);
    let quantum = w.hbar * w.hbar / (2.0 * p.m_alpha) * a_x * a_x;
    Ok((hj_residual(&w.phase, s)? - quantum, a_t))
}

/// Wave-equation residual and the magnitude it should be judged against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveResidual {
    /// `−(ħ²/2m)ψ_x̄x̄ + (½kx² + qEx)ψ − iħψ_t`
    pub value: Complex64,
    /// `(ħ²/2m)|ψ_x̄x̄| + |½kx² + qEx||ψ| + ħ|ψ_t|`
    pub scale: f64,
}

pub fn wave_equation_residual<A, S>(
    w: &WaveAnsatz<A, S>,
    s: Sample,
) -> Result<WaveResidual, HjError>
where
    A: Fn(Sample) -> f64,
    S: ActionField,
{
    if w.hbar == 0.0 {
        return Err(HjError::Domain("the wave equation needs hbar > 0".into()));
    }
    let p = w.phase.params();
    let (hx, ht) = (w.steps.xbar, w.steps.t);
    let sh = WaveAnsatz::<A, S>::shifted;
    let c = w.psi(s)?;
    let psi_xx = (w.psi(sh(s, hx, 0.0))? - 2.0 * c + w.psi(sh(s, -hx, 0.0))?) / (hx * hx);
    let psi_t = (w.psi(sh(s, 0.0, ht))? - w.psi(sh(s, 0.0, -ht))?) / (2.0 * ht);
    let kin = w.hbar * w.hbar / (2.0 * p.m_alpha);
    let v = p.potential(s.x);
    let i_hbar = Complex64::new(0.0, w.hbar);
    Ok(WaveResidual {
        value: -kin * psi_xx + v * c - i_hbar * psi_t,
        scale: kin * psi_xx.norm() + v.abs() * c.norm() + w.hbar * psi_t.norm(),
    })
}

/// Axis-aligned sampling region for `(x, x̄_α, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleBox {
    pub x: (f64, f64),
    pub xbar: (f64, f64),
    pub t: (f64, f64),
}

impl Default for SampleBox {
    fn default() -> Self {
        Self {
            x: (-1.0, 1.0),
            xbar: (-1.0, 1.0),
            t: (0.0, 1.0),
        }
    }
}

pub const MAX_REJECTIONS: usize = 100;

/// Uniform sample from `bx` with `x` strictly inside the root domain, by
/// rejection; fails after [`MAX_REJECTIONS`] attempts.
pub fn sample_admissible<R: Rng + ?Sized>(
    rng: &mut R,
    params: &HjParams,
    bx: &SampleBox,
) -> Result<Sample, HjError> {
    let mut draw = |(lo, hi): (f64, f64)| lo + (hi - lo) * rng.random::<f64>();
    for _ in 0..MAX_REJECTIONS {
        let s = Sample {
            x: draw(bx.x),
            xbar: draw(bx.xbar),
            t: draw(bx.t),
        };
        if params.radicand(s.x) > 0.0 {
            return Ok(s);
        }
    }
    Err(HjError::Domain(format!(
        "no admissible sample after {MAX_REJECTIONS} attempts; beta_sep too small for the x range"
    )))
}
