//! The `fracmech` command line.
//!
//! Exit codes: 0 ok, 1 failed check or I/O error, 2 config/parse error,
//! 3 domain error, 4 non-contractive setup, 5 iteration cap.

mod config;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::fracops::{evaluate, power_oracle, FracError, OperatorKind, PowerExpansion};
use crate::grid::{FracOrder, Grid, SampledFunction};
use crate::hamjacobi::{
    hj_residual, madelung_split_residuals, sample_admissible, wave_equation_residual, FdSteps,
    HjError, HjParams, Sample, SampleBox, SeparatedAction, WaveAnsatz,
};
use crate::mechanics::{check_axioms, fp_bracket};
use crate::oscillator::{solve_fo, OscError, OscillatorParams, SolveReport};
use crate::symexpr::PhasePoly;

pub use config::KvConfig;

pub const DEFAULT_SEED: u64 = 42;
pub const THREADS_ENV: &str = "FRACMECH_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-contractive: {0}")]
    NonContractive(String),
    #[error("iteration cap reached: {0}")]
    MaxIter(String),
    #[error("{0}")]
    CheckFailed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) | CliError::Io(_) => 1,
            CliError::Config(_) | CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::NonContractive(_) => 4,
            CliError::MaxIter(_) => 5,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<FracError> for CliError {
    fn from(e: FracError) -> Self {
        match e {
            FracError::Parse(m) => CliError::Parse(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<HjError> for CliError {
    fn from(e: HjError) -> Self {
        match e {
            HjError::Invalid { .. } => CliError::Config(e.to_string()),
            HjError::Domain(m) => CliError::Domain(m),
        }
    }
}

/// Exit code of a failed solve.
pub fn osc_exit_code(e: &OscError) -> i32 {
    match e {
        OscError::Invalid { .. } => 2,
        OscError::DivergentForcing => 3,
        OscError::NonContractive { .. } => 4,
        OscError::MaxIterExceeded(_) => 5,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fracmech",
    version,
    about = "Fractional calculus, fractional mechanics and the fractional oscillator"
)]
pub struct Cli {
    /// Directory for output files
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the ChaCha8 random generator
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Suppress informational output
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a fractional operator to a power expansion or a CSV of samples
    Frac(FracArgs),
    /// Solve the fractional oscillator from a config file
    Oscillator { config: PathBuf },
    /// Fractional Poisson bracket of two polynomials
    Bracket(BracketArgs),
    /// Check the Hamilton–Jacobi and wave-equation residuals at random samples
    VerifyHj {
        config: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Run the acceptance criteria
    Selftest,
}

#[derive(Debug, Args)]
pub struct FracArgs {
    /// rl-int-left, rl-int-right, rl-deriv-left, rl-deriv-right, caputo-left, caputo-right
    pub op: String,
    /// Power expansion such as "1*(t-a)^2 + 3*(b-t)^0.5", or a CSV file with t,value
    /// (or t,value_re,value_im) columns
    pub function: String,
    pub alpha: String,
    /// Grid as a:b:n
    pub grid: String,
    /// Add the closed-form result as an `oracle` column
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct BracketArgs {
    #[arg(requires = "g")]
    pub f: Option<String>,
    pub g: Option<String>,
    /// Check the bracket properties on random polynomials
    #[arg(long)]
    pub check_axioms: bool,
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "{THREADS_ENV}: expected a positive integer, got '{v}'"
        ))
    })?;
    // a second call in the same process keeps the existing pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Frac(args) => cmd_frac(cli, args, out),
        Command::Oscillator { config } => cmd_oscillator(cli, config, out),
        Command::Bracket(args) => cmd_bracket(cli, args, out),
        Command::VerifyHj { config, samples } => cmd_verify_hj(cli, config, *samples, out),
        Command::Selftest => cmd_selftest(cli, out),
    }
}

/// Writes to `DIR/name` under `--out`, else to `out`.
fn emit(cli: &Cli, name: &str, body: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.out {
        Some(dir) => write_file(dir, name, body),
        None => Ok(out.write_all(body.as_bytes())?),
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), body)?;
    Ok(())
}

/// 17 significant digits, round-trips exactly.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

fn parse_grid(text: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Parse(format!("grid '{text}': expected a:b:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    Grid::new(a, b, n).map_err(|e| CliError::Config(format!("grid: {e}")))
}

fn parse_order(s: &str, field: &str) -> Result<FracOrder, CliError> {
    let a: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("{field}: cannot parse '{s}'")))?;
    FracOrder::new(a).map_err(|e| CliError::Config(format!("{field}: {e}")))
}

enum Samples {
    Real(SampledFunction),
    Complex(SampledFunction<Complex64>),
}

fn read_samples(path: &Path, grid: Grid) -> Result<Samples, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let header = rdr
        .headers()
        .map_err(|e| CliError::Parse(e.to_string()))?
        .clone();
    let cols: Vec<&str> = header.iter().collect();
    let complex = match cols.as_slice() {
        ["t", "value"] => false,
        ["t", "value_re", "value_im"] => true,
        _ => {
            return Err(CliError::Parse(format!(
                "{}: header must be t,value or t,value_re,value_im",
                path.display()
            )))
        }
    };
    let mut re = Vec::new();
    let mut im = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
        let num = |j: usize| -> Result<f64, CliError> {
            rec.get(j).and_then(|s| s.parse().ok()).ok_or_else(|| {
                CliError::Parse(format!("{} row {}: bad number", path.display(), i + 2))
            })
        };
        num(0)?;
        re.push(num(1)?);
        if complex {
            im.push(num(2)?);
        }
    }
    let len_err = |e| CliError::Config(format!("{}: {e}", path.display()));
    if complex {
        let v = re
            .into_iter()
            .zip(im)
            .map(|(a, b)| Complex64::new(a, b))
            .collect();
        Ok(Samples::Complex(
            SampledFunction::new(grid, v).map_err(len_err)?,
        ))
    } else {
        Ok(Samples::Real(
            SampledFunction::new(grid, re).map_err(len_err)?,
        ))
    }
}

fn cmd_frac(cli: &Cli, args: &FracArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let kind: OperatorKind = args.op.parse()?;
    let ord = parse_order(&args.alpha, "alpha")?;
    let grid = parse_grid(&args.grid)?;
    let path = Path::new(&args.function);
    let nodes: Vec<f64> = grid.nodes().collect();
    let body = if path.is_file() {
        if args.oracle {
            return Err(CliError::Config(
                "--oracle needs a power-expansion function".into(),
            ));
        }
        match read_samples(path, grid)? {
            Samples::Real(f) => {
                let r = kind.apply(&f, ord)?;
                csv_text(
                    &["t", "value"],
                    nodes
                        .iter()
                        .zip(r.values())
                        .map(|(t, v)| vec![fmt_num(*t), fmt_num(*v)]),
                )?
            }
            Samples::Complex(f) => {
                let r = kind.apply(&f, ord)?;
                csv_text(
                    &["t", "value_re", "value_im"],
                    nodes
                        .iter()
                        .zip(r.values())
                        .map(|(t, v)| vec![fmt_num(*t), fmt_num(v.re), fmt_num(v.im)]),
                )?
            }
        }
    } else {
        let expr: PowerExpansion = args.function.parse()?;
        let f = evaluate(&expr, &grid);
        let r = kind.apply(&f, ord)?;
        if args.oracle {
            let o = evaluate(&power_oracle(&expr, kind, ord)?, &grid);
            csv_text(
                &["t", "value", "oracle"],
                (0..grid.len()).map(|k| {
                    vec![
                        fmt_num(nodes[k]),
                        fmt_num(r.values()[k]),
                        fmt_num(o.values()[k]),
                    ]
                }),
            )?
        } else {
            csv_text(
                &["t", "value"],
                nodes
                    .iter()
                    .zip(r.values())
                    .map(|(t, v)| vec![fmt_num(*t), fmt_num(*v)]),
            )?
        }
    };
    emit(cli, "frac.csv", &body, out)
}

/// Solver settings and parameters read from an oscillator config.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorConfig {
    pub params: OscillatorParams,
    pub tol: f64,
    pub max_iter: usize,
}

impl OscillatorConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = KvConfig::parse(text, "oscillator")?;
        let m_alpha = c.get("m_alpha", 1.0)?;
        let k = c.get("k", 1.0)?;
        let charge = c.get("charge", 0.0)?;
        let field_e = c.get("field_E", 0.0)?;
        let alpha: f64 = c.get("alpha", 0.8)?;
        let a = c.get("a", 0.0)?;
        let b = c.get("b", 0.5)?;
        let n = c.get("n", 1024usize)?;
        let e0 = c.get("e0", 1.0)?;
        let e1 = c.get("e1", 0.0)?;
        let tol: f64 = c.get("tol", 1e-10)?;
        let max_iter = c.get("max_iter", 500usize)?;
        let order = FracOrder::new(alpha)
            .map_err(|e| CliError::Config(format!("{}: {e}", c.field("alpha"))))?;
        let grid =
            Grid::new(a, b, n).map_err(|e| CliError::Config(format!("oscillator.a/b/n: {e}")))?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Config(format!("{}: must be > 0", c.field("tol"))));
        }
        if max_iter == 0 {
            return Err(CliError::Config(format!(
                "{}: must be >= 1",
                c.field("max_iter")
            )));
        }
        c.finish()?;
        let params = OscillatorParams::new(m_alpha, k, charge, field_e, order, grid, e0, e1)
            .map_err(|e| match e {
                OscError::Invalid { field, reason } => {
                    CliError::Config(format!("oscillator.{field}: {reason}"))
                }
                other => CliError::Config(other.to_string()),
            })?;
        Ok(Self {
            params,
            tol,
            max_iter,
        })
    }
}

#[derive(Debug, Serialize)]
struct OscReport {
    status: &'static str,
    iterations: usize,
    contraction_estimate: f64,
    residual_sup: Option<f64>,
    residual_scale: Option<f64>,
    transversality_error: Option<f64>,
    final_increment: Option<f64>,
}

impl OscReport {
    fn from_solve(status: &'static str, r: &SolveReport) -> Self {
        Self {
            status,
            iterations: r.iterations,
            contraction_estimate: r.contraction_estimate,
            residual_sup: Some(r.residual_sup),
            residual_scale: Some(r.residual_scale),
            transversality_error: Some(r.transversality_error),
            final_increment: r.increments.last().copied(),
        }
    }

    fn refused(status: &'static str, rho: f64) -> Self {
        Self {
            status,
            iterations: 0,
            contraction_estimate: rho,
            residual_sup: None,
            residual_scale: None,
            transversality_error: None,
            final_increment: None,
        }
    }
}

fn trajectory_csv(x: &SampledFunction) -> Result<String, CliError> {
    csv_text(
        &["t", "x"],
        x.grid()
            .nodes()
            .zip(x.values())
            .map(|(t, v)| vec![fmt_num(t), fmt_num(*v)]),
    )
}

fn cmd_oscillator(cli: &Cli, config: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(config)
        .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
    let cfg = OscillatorConfig::parse(&text)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let p = &cfg.params;
    let (report, trajectory, err) = match solve_fo(p, cfg.tol, cfg.max_iter) {
        Ok(r) => (OscReport::from_solve("ok", &r), Some(r.solution), None),
        Err(OscError::MaxIterExceeded(r)) => {
            let msg = format!(
                "{} iterations, last increment {:e}",
                r.iterations,
                r.increments.last().copied().unwrap_or(f64::NAN)
            );
            (
                OscReport::from_solve("max_iter_exceeded", &r),
                Some(r.solution),
                Some(CliError::MaxIter(msg)),
            )
        }
        Err(OscError::NonContractive { rho }) => (
            OscReport::refused("non_contractive", rho),
            None,
            Some(CliError::NonContractive(format!(
                "contraction estimate {rho} > 1"
            ))),
        ),
        Err(OscError::DivergentForcing) => (
            OscReport::refused("divergent_forcing", p.contraction_estimate()),
            None,
            Some(CliError::Domain(OscError::DivergentForcing.to_string())),
        ),
        Err(e @ OscError::Invalid { .. }) => return Err(CliError::Config(e.to_string())),
    };
    let json = serde_json::to_string_pretty(&report).expect("plain struct") + "\n";
    write_file(&dir, "report.json", &json)?;
    if let Some(x) = &trajectory {
        write_file(&dir, "trajectory.csv", &trajectory_csv(x)?)?;
    }
    if !cli.quiet {
        writeln!(
            out,
            "status {}  iterations {}  contraction {}  residual {}  transversality {}",
            report.status,
            report.iterations,
            fmt_num(report.contraction_estimate),
            report.residual_sup.map_or("-".into(), fmt_num),
            report.transversality_error.map_or("-".into(), fmt_num),
        )?;
    }
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn parse_poly(s: &str) -> Result<PhasePoly, CliError> {
    s.parse()
        .map_err(|e| CliError::Parse(format!("'{s}': {e}")))
}

fn cmd_bracket(cli: &Cli, args: &BracketArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.f.is_none() && !args.check_axioms {
        return Err(CliError::Config(
            "bracket needs F and G, or --check-axioms".into(),
        ));
    }
    if let (Some(f), Some(g)) = (&args.f, &args.g) {
        let (f, g) = (parse_poly(f)?, parse_poly(g)?);
        if let Some(v) = f
            .variables()
            .into_iter()
            .chain(g.variables())
            .find(|v| !v.is_core())
        {
            return Err(CliError::Parse(format!(
                "variable {v} is not a phase-space variable"
            )));
        }
        writeln!(out, "{}", fp_bracket(&f, &g))?;
    }
    if args.check_axioms {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let results = check_axioms(&mut rng, 100);
        for r in &results {
            writeln!(
                out,
                "{} {}",
                if r.passed { "PASS" } else { "FAIL" },
                r.label
            )?;
        }
        if results.iter().any(|r| !r.passed) {
            return Err(CliError::CheckFailed(
                "bracket property check failed".into(),
            ));
        }
    }
    Ok(())
}

/// Parameters of a `verify-hj` run.
#[derive(Debug, Clone, Copy)]
pub struct HjConfig {
    pub params: HjParams,
    pub hbar: f64,
    /// `A = 1 + amplitude_slope · x̄`
    pub amplitude_slope: f64,
    pub sample_box: SampleBox,
    pub hj_tol: f64,
    pub madelung_tol: f64,
    pub wave_tol: f64,
}

impl HjConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = KvConfig::parse(text, "verify-hj")?;
        let params = HjParams::new(
            c.get("m_alpha", 1.0)?,
            c.get("k", 1.0)?,
            c.get("charge", 0.0)?,
            c.get("field_E", 0.0)?,
            c.get("beta_sep", 2.0)?,
        )
        .map_err(|e| CliError::Config(format!("verify-hj: {e}")))?;
        let hbar: f64 = c.get("hbar", 1.0)?;
        if !(hbar.is_finite() && hbar >= 0.0) {
            return Err(CliError::Config(format!(
                "{}: must be >= 0",
                c.field("hbar")
            )));
        }
        let amplitude_slope = c.get("amplitude_slope", 0.0)?;
        let mut range = |lo: &str, hi: &str, d: (f64, f64)| -> Result<(f64, f64), CliError> {
            let r = (c.get(lo, d.0)?, c.get(hi, d.1)?);
            if !(r.0.is_finite() && r.1.is_finite() && r.1 > r.0) {
                return Err(CliError::Config(format!(
                    "verify-hj.{lo}/{hi}: need {lo} < {hi}"
                )));
            }
            Ok(r)
        };
        let def = SampleBox::default();
        let sample_box = SampleBox {
            x: range("x_min", "x_max", def.x)?,
            xbar: range("xbar_min", "xbar_max", def.xbar)?,
            t: range("t_min", "t_max", def.t)?,
        };
        let hj_tol = c.get("hj_tol", 1e-12)?;
        let madelung_tol = c.get("madelung_tol", 1e-12)?;
        let wave_tol = c.get("wave_tol", 1e-6)?;
        c.finish()?;
        Ok(Self {
            params,
            hbar,
            amplitude_slope,
            sample_box,
            hj_tol,
            madelung_tol,
            wave_tol,
        })
    }
}

/// One row of the `verify-hj` output.
#[derive(Debug, Clone, Copy)]
pub struct HjRow {
    pub sample: Sample,
    pub hj: f64,
    pub madelung_re: f64,
    pub madelung_im: f64,
    /// `None` when `hbar = 0`.
    pub wave: Option<(f64, f64)>,
}

impl HjRow {
    pub fn within(&self, c: &HjConfig) -> bool {
        self.hj.abs() <= c.hj_tol
            && self.madelung_re.abs() <= c.madelung_tol
            && self.madelung_im.abs() <= c.madelung_tol
            && self.wave.is_none_or(|(v, s)| v <= c.wave_tol * s)
    }
}

pub fn verify_hj_rows(c: &HjConfig, samples: usize, seed: u64) -> Result<Vec<HjRow>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let action = SeparatedAction::new(c.params);
    let slope = c.amplitude_slope;
    let w = WaveAnsatz::new(move |s: Sample| 1.0 + slope * s.xbar, action, c.hbar)?
        .with_steps(FdSteps::for_box(&c.sample_box));
    (0..samples)
        .map(|_| {
            let s = sample_admissible(&mut rng, &c.params, &c.sample_box)?;
            let (re, im) = madelung_split_residuals(&w, s)?;
            let wave = if c.hbar > 0.0 {
                let r = wave_equation_residual(&w, s)?;
                Some((r.value.norm(), r.scale))
            } else {
                None
            };
            Ok(HjRow {
                sample: s,
                hj: hj_residual(&action, s)?,
                madelung_re: re,
                madelung_im: im,
                wave,
            })
        })
        .collect()
}

fn cmd_verify_hj(
    cli: &Cli,
    config: &Path,
    samples: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = fs::read_to_string(config)
        .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
    let c = HjConfig::parse(&text)?;
    let rows = verify_hj_rows(&c, samples, cli.seed)?;
    let nan = || "NaN".to_string();
    let body = csv_text(
        &[
            "sample",
            "x",
            "xbar",
            "t",
            "hj_residual",
            "madelung_real",
            "madelung_imag",
            "wave_residual",
            "wave_scale",
        ],
        rows.iter().enumerate().map(|(i, r)| {
            vec![
                i.to_string(),
                fmt_num(r.sample.x),
                fmt_num(r.sample.xbar),
                fmt_num(r.sample.t),
                fmt_num(r.hj),
                fmt_num(r.madelung_re),
                fmt_num(r.madelung_im),
                r.wave.map_or_else(nan, |w| fmt_num(w.0)),
                r.wave.map_or_else(nan, |w| fmt_num(w.1)),
            ]
        }),
    )?;
    emit(cli, "verify_hj.csv", &body, out)?;
    let bad = rows.iter().filter(|r| !r.within(&c)).count();
    if bad > 0 {
        return Err(CliError::CheckFailed(format!(
            "{bad} of {} samples exceed the thresholds",
            rows.len()
        )));
    }
    Ok(())
}

fn cmd_selftest(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let report = crate::selftest::run(cli.seed);
    let text = report.render();
    if let Some(dir) = &cli.out {
        write_file(dir, "selftest.txt", &text)?;
    }
    if !cli.quiet || cli.out.is_none() {
        out.write_all(text.as_bytes())?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::CheckFailed("acceptance criteria failed".into()))
    }
}
