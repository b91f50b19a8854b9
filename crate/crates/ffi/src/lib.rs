//! C interface to `fracmech`.
//!
//! Every fallible function returns an [`FmStatus`]; on failure the message
//! is available from [`fm_last_error`] on the same thread. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracmech::fracops::{FracError, OperatorKind};
use fracmech::hamjacobi::{hj_residual, HjError, HjParams, Sample, SeparatedAction};
use fracmech::mechanics::fp_bracket;
use fracmech::oscillator::{solve_fo, OscError, OscillatorParams, SolveReport};
use fracmech::symexpr::PhasePoly;
use fracmech::{FracOrder, Grid, SampledFunction};

/// Status codes; the nonzero values match the `fracmech` exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmStatus {
    Ok = 0,
    CheckFailed = 1,
    InvalidArgument = 2,
    Domain = 3,
    NonContractive = 4,
    MaxIter = 5,
    Internal = 70,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: FmStatus, msg: impl Into<String>) -> FmStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), (FmStatus, String)>) -> FmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FmStatus::Ok,
        Ok(Err((status, msg))) => fail(status, msg),
        Err(_) => fail(FmStatus::Internal, "internal panic"),
    }
}

type FfiResult<T> = Result<T, (FmStatus, String)>;

fn invalid<T>(msg: impl Into<String>) -> FfiResult<T> {
    Err((FmStatus::InvalidArgument, msg.into()))
}

fn frac_err(e: FracError) -> (FmStatus, String) {
    let status = match e {
        FracError::Parse(_) => FmStatus::InvalidArgument,
        _ => FmStatus::Domain,
    };
    (status, e.to_string())
}

fn hj_err(e: HjError) -> (FmStatus, String) {
    let status = match e {
        HjError::Invalid { .. } => FmStatus::InvalidArgument,
        HjError::Domain(_) => FmStatus::Domain,
    };
    (status, e.to_string())
}

fn osc_status(e: &OscError) -> FmStatus {
    match e {
        OscError::Invalid { .. } => FmStatus::InvalidArgument,
        OscError::DivergentForcing => FmStatus::Domain,
        OscError::NonContractive { .. } => FmStatus::NonContractive,
        OscError::MaxIterExceeded(_) => FmStatus::MaxIter,
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return invalid(format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| invalid(format!("{what} is not UTF-8")))
}

fn order(alpha: f64) -> FfiResult<FracOrder> {
    FracOrder::new(alpha).or_else(|e| invalid(format!("alpha: {e}")))
}

fn grid(a: f64, b: f64, n: usize) -> FfiResult<Grid> {
    Grid::new(a, b, n).or_else(|e| invalid(format!("grid: {e}")))
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn fm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Gamma function.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fm_gamma(x: f64, out: *mut f64) -> FmStatus {
    guard(|| {
        if out.is_null() {
            return invalid("out is null");
        }
        *out = fracmech::gamma::gamma(x);
        Ok(())
    })
}

/// Applies operator `op` ("rl-int-left", "caputo-right", ...) of order
/// `alpha` to `n + 1` samples on the uniform grid over `[a, b]`.
///
/// # Safety
/// `op` must be a NUL-terminated string; `values` and `out` must each hold
/// `n + 1` doubles.
#[no_mangle]
pub unsafe extern "C" fn fm_frac_apply(
    op: *const c_char,
    alpha: f64,
    a: f64,
    b: f64,
    n: usize,
    values: *const f64,
    out: *mut f64,
) -> FmStatus {
    guard(|| {
        let kind: OperatorKind = c_str(op, "op")?.parse().map_err(frac_err)?;
        let ord = order(alpha)?;
        let g = grid(a, b, n)?;
        if values.is_null() || out.is_null() {
            return invalid("values and out must not be null");
        }
        let input = std::slice::from_raw_parts(values, n + 1).to_vec();
        let f = SampledFunction::new(g, input).or_else(|e| invalid(e.to_string()))?;
        let r = kind.apply(&f, ord).map_err(frac_err)?;
        std::slice::from_raw_parts_mut(out, n + 1).copy_from_slice(r.values());
        Ok(())
    })
}

pub struct FmOscillator {
    params: OscillatorParams,
    report: Option<SolveReport>,
}

/// Creates an oscillator problem on `[a, b]` with `n` intervals.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fm_oscillator_new(
    m_alpha: f64,
    k: f64,
    charge: f64,
    field_e: f64,
    alpha: f64,
    a: f64,
    b: f64,
    n: usize,
    e0: f64,
    e1: f64,
    out: *mut *mut FmOscillator,
) -> FmStatus {
    guard(|| {
        if out.is_null() {
            return invalid("out is null");
        }
        let params = OscillatorParams::new(
            m_alpha,
            k,
            charge,
            field_e,
            order(alpha)?,
            grid(a, b, n)?,
            e0,
            e1,
        )
        .or_else(|e| invalid(e.to_string()))?;
        *out = Box::into_raw(Box::new(FmOscillator {
            params,
            report: None,
        }));
        Ok(())
    })
}

/// The contraction estimate `rho`; NaN for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fm_oscillator_contraction(h: *const FmOscillator) -> f64 {
    h.as_ref()
        .map_or(f64::NAN, |h| h.params.contraction_estimate())
}

/// Runs the fixed-point solver. On `FM_STATUS_MAX_ITER` the last iterate is
/// kept and can still be read.
///
/// # Safety
/// `h` must be a live handle; `iterations` may be null.
#[no_mangle]
pub unsafe extern "C" fn fm_oscillator_solve(
    h: *mut FmOscillator,
    tol: f64,
    max_iter: usize,
    iterations: *mut usize,
) -> FmStatus {
    guard(|| {
        let Some(h) = h.as_mut() else {
            return invalid("handle is null");
        };
        h.report = None;
        let (report, err) = match solve_fo(&h.params, tol, max_iter) {
            Ok(r) => (Some(r), None),
            Err(OscError::MaxIterExceeded(r)) => {
                let e = OscError::MaxIterExceeded(r.clone());
                (Some(*r), Some(e))
            }
            Err(e) => (None, Some(e)),
        };
        if let (Some(r), false) = (&report, iterations.is_null()) {
            *iterations = r.iterations;
        }
        h.report = report;
        match err {
            Some(e) => Err((osc_status(&e), e.to_string())),
            None => Ok(()),
        }
    })
}

/// Copies the last solution into `out`, which must hold `len = n + 1`
/// doubles.
///
/// # Safety
/// `h` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn fm_oscillator_solution(
    h: *const FmOscillator,
    out: *mut f64,
    len: usize,
) -> FmStatus {
    guard(|| {
        let Some(h) = h.as_ref() else {
            return invalid("handle is null");
        };
        let Some(r) = &h.report else {
            return Err((
                FmStatus::Domain,
                "no solution; call fm_oscillator_solve first".into(),
            ));
        };
        let v = r.solution.values();
        if out.is_null() || len != v.len() {
            return invalid(format!("out must hold {} values", v.len()));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(v);
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`fm_oscillator_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn fm_oscillator_free(h: *mut FmOscillator) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

pub struct FmPoly(PhasePoly);

/// Parses a polynomial such as `"p_alpha^2/2 + q"`.
///
/// # Safety
/// `text` must be NUL-terminated and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fm_poly_parse(text: *const c_char, out: *mut *mut FmPoly) -> FmStatus {
    guard(|| {
        if out.is_null() {
            return invalid("out is null");
        }
        let p: PhasePoly = c_str(text, "text")?
            .parse()
            .or_else(|e| invalid(format!("{e}")))?;
        *out = Box::into_raw(Box::new(FmPoly(p)));
        Ok(())
    })
}

/// The fractional Poisson bracket `[f, g]`.
///
/// # Safety
/// `f` and `g` must be live handles and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fm_poly_bracket(
    f: *const FmPoly,
    g: *const FmPoly,
    out: *mut *mut FmPoly,
) -> FmStatus {
    guard(|| {
        let (Some(f), Some(g)) = (f.as_ref(), g.as_ref()) else {
            return invalid("handle is null");
        };
        if out.is_null() {
            return invalid("out is null");
        }
        if let Some(v) =
            f.0.variables()
                .into_iter()
                .chain(g.0.variables())
                .find(|v| !v.is_core())
        {
            return invalid(format!("variable {v} is not a phase-space variable"));
        }
        *out = Box::into_raw(Box::new(FmPoly(fp_bracket(&f.0, &g.0))));
        Ok(())
    })
}

/// Canonical text of `p`; release with [`fm_string_free`]. Null on a null
/// handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fm_poly_render(p: *const FmPoly) -> *mut c_char {
    match p.as_ref() {
        Some(p) => CString::new(p.0.to_string()).map_or(ptr::null_mut(), CString::into_raw),
        None => {
            set_error("handle is null");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `p` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn fm_poly_free(p: *mut FmPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Hamilton–Jacobi residual of the separated action at `(x, xbar, t)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fm_hj_residual(
    m_alpha: f64,
    k: f64,
    charge: f64,
    field_e: f64,
    beta_sep: f64,
    x: f64,
    xbar: f64,
    t: f64,
    out: *mut f64,
) -> FmStatus {
    guard(|| {
        if out.is_null() {
            return invalid("out is null");
        }
        let params = HjParams::new(m_alpha, k, charge, field_e, beta_sep).map_err(hj_err)?;
        *out = hj_residual(&SeparatedAction::new(params), Sample { x, xbar, t }).map_err(hj_err)?;
        Ok(())
    })
}
