//! Acceptance criteria 1–8, one line each.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use fracmech::fracops::{
    left_caputo, left_rl_derivative, left_rl_integral, right_caputo, right_rl_derivative,
    right_rl_integral, OperatorKind,
};
use fracmech::hamjacobi::{
    hj_residual, madelung_split_residuals, sample_admissible, wave_equation_residual, FdSteps,
    HjParams, SampleBox, SeparatedAction, WaveAnsatz,
};
use fracmech::mechanics::fp_bracket;
use fracmech::mechanics::models::{dissipative_hamiltonian, fo_hamiltonian};
use fracmech::oscillator::{apply_volterra, forcing_term, solve_fo, OscError, OscillatorParams};
use fracmech::symexpr::{GaussianRational, PhasePoly, PhaseVar};
use fracmech::{FracOrder, Grid, SampledFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 1024;
const ALPHAS: [f64; 3] = [0.3, 0.5, 0.8];
const BETAS: [f64; 3] = [1.0, 2.0, 2.5];
const INV_GAMMA_1_8_SQ: f64 = 1.152770004678995;

/// Stirling series after shifting the argument above 10.
fn gamma(mut x: f64) -> f64 {
    let mut prod = 1.0;
    while x < 10.0 {
        prod *= x;
        x += 1.0;
    }
    let x2 = x * x;
    let series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2);
    ((x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series).exp() / prod
}

fn ord(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn grid01() -> Grid {
    Grid::new(0.0, 1.0, N).unwrap()
}

fn interior(g: &Grid) -> std::ops::Range<usize> {
    let band = (0.05 * g.n() as f64).ceil() as usize;
    band..g.n() + 1 - band
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

type Outcome = (bool, String);

fn criterion_1_operator_identities() -> Outcome {
    let g = grid01();
    let nodes: Vec<f64> = g.nodes().collect();
    let inner = interior(&g);
    let mut worst_lin: f64 = 0.0;
    let mut worst_const: f64 = 0.0;
    let mut worst_power: f64 = 0.0;
    let mut worst_comp: f64 = 0.0;
    let mut worst_parts: f64 = 0.0;

    let f = SampledFunction::from_fn(g, |t: f64| (7.0 * t).sin() + t * t);
    let h = SampledFunction::from_fn(g, |t: f64| (3.0 * t).exp() - 2.0);
    let mix = f.scale(0.3).add(&h.scale(-1.7));
    for &a in &ALPHAS {
        for kind in OperatorKind::ALL {
            let l = kind.apply(&mix, ord(a)).unwrap();
            let r = kind
                .apply(&f, ord(a))
                .unwrap()
                .scale(0.3)
                .add(&kind.apply(&h, ord(a)).unwrap().scale(-1.7));
            let (l, r) = (&l.values()[1..N], &r.values()[1..N]);
            let scale = 1.0 + r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst_lin = worst_lin.max(max_abs_diff(l, r) / scale);
        }
        let c = SampledFunction::constant(g, -2.25);
        worst_const = worst_const
            .max(left_caputo(&c, ord(a)).sup_norm())
            .max(right_caputo(&c, ord(a)).sup_norm());

        for &b in &BETAS {
            let xl = SampledFunction::from_fn(g, |t: f64| t.powf(b));
            let xr = SampledFunction::from_fn(g, |t: f64| (1.0 - t).powf(b));
            let d_coef = gamma(b + 1.0) / gamma(b + 1.0 - a);
            let i_coef = gamma(b + 1.0) / gamma(b + 1.0 + a);
            let checks = [
                (
                    left_rl_derivative(&xl, ord(a)).unwrap(),
                    d_coef,
                    b - a,
                    false,
                ),
                (left_rl_integral(&xl, ord(a)), i_coef, b + a, false),
                (
                    right_rl_derivative(&xr, ord(a)).unwrap(),
                    d_coef,
                    b - a,
                    true,
                ),
                (right_rl_integral(&xr, ord(a)), i_coef, b + a, true),
            ];
            for (num, coef, p, right) in checks {
                for k in inner.clone() {
                    let s = if right { 1.0 - nodes[k] } else { nodes[k] };
                    let exact = coef * s.powf(p);
                    worst_power = worst_power.max((num.values()[k] - exact).abs() / exact.abs());
                }
            }

            let x = SampledFunction::from_fn(g, |t: f64| t.powf(b) - 0.5 * t + 2.0);
            let back = left_rl_integral(&left_caputo(&x, ord(a)), ord(a));
            let target: Vec<f64> = x.values().iter().map(|v| v - 2.0).collect();
            let back_r = right_rl_integral(&right_caputo(&x, ord(a)), ord(a));
            let target_r: Vec<f64> = x.values().iter().map(|v| v - x.values()[N]).collect();
            for (num, tgt) in [(back.values(), &target), (back_r.values(), &target_r)] {
                let err = max_abs_diff(&num[inner.clone()], &tgt[inner.clone()]);
                let size = tgt[inner.clone()]
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                worst_comp = worst_comp.max(err / size);
            }
        }

        let u = SampledFunction::from_fn(g, |t: f64| (std::f64::consts::PI * t).sin() * (1.0 + t));
        let v = SampledFunction::from_fn(g, |t: f64| t * (1.0 - t).powi(2));
        let lhs = left_caputo(&u, ord(a))
            .zip_with(&v, |p, q| p * q)
            .trapezoid();
        let rhs = u
            .zip_with(&right_caputo(&v, ord(a)), |p, q| p * q)
            .trapezoid();
        worst_parts = worst_parts.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
    }
    let ok = worst_lin <= 1e-12
        && worst_const <= 1e-12
        && worst_power <= 1e-3
        && worst_comp <= 1e-3
        && worst_parts <= 1e-3;
    (
        ok,
        format!(
            "linearity {worst_lin:.2e}, caputo(const) {worst_const:.2e}, power rules {worst_power:.2e}, \
             compositions {worst_comp:.2e}, by parts {worst_parts:.2e}"
        ),
    )
}

fn criterion_2_bracket_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let q = PhasePoly::var(PhaseVar::Q);
    let pa = PhasePoly::var(PhaseVar::PAlpha);
    let pb = PhasePoly::var(PhaseVar::PBeta);
    let b = fp_bracket;
    let mut failures = Vec::new();
    for trial in 0..100 {
        let mut draw = || PhasePoly::random(&mut rng, &PhaseVar::CORE, 3, 5);
        let (f, g, h) = (draw(), draw(), draw());
        let props = [
            ("antisymmetry", b(&f, &g) == -b(&g, &f)),
            ("linearity", b(&(&f + &h), &g) == &b(&f, &g) + &b(&h, &g)),
            (
                "Jacobi",
                (&(&b(&f, &b(&g, &h)) + &b(&g, &b(&h, &f))) + &b(&h, &b(&f, &g))).is_zero(),
            ),
            (
                "[F,q]",
                b(&f, &q) == -(&f.partial(PhaseVar::PAlpha) + &f.partial(PhaseVar::PBeta)),
            ),
            (
                "[F,p]",
                b(&f, &pa) == f.partial(PhaseVar::Q) && b(&f, &pb) == f.partial(PhaseVar::Q),
            ),
        ];
        failures.extend(
            props
                .iter()
                .filter(|p| !p.1)
                .map(|p| format!("{} (trial {trial})", p.0)),
        );
    }
    let one = PhasePoly::int(1);
    let fundamental = b(&q, &q).is_zero()
        && b(&pa, &pb).is_zero()
        && b(&q, &pa) == one
        && b(&q, &pb) == one
        && b(&pa, &q) == -one.clone();
    if !fundamental {
        failures.push("fundamental brackets".into());
    }
    (
        failures.is_empty(),
        if failures.is_empty() {
            "100 triples exact".into()
        } else {
            failures.join(", ")
        },
    )
}

fn criterion_3_hamilton_equations() -> Outcome {
    let r = GaussianRational::ratio;
    let p = |s: &str| s.parse::<PhasePoly>().unwrap();
    let h = fo_hamiltonian(&r(3, 2), &r(5, 4), &r(1, 3)).unwrap();
    let h = h.hamiltonian();
    let printed = p("p_alpha^2/3 + 5/8*q^2 + 1/3*q");
    let hd = dissipative_hamiltonian(&r(3, 2), &r(5, 4), &r(2, 7), 0.5).unwrap();
    let complex = hd.hamiltonian().terms().any(|(_, c)| !c.is_real());
    let checks = [
        *h == printed,
        fp_bracket(&p("x"), h) == p("2/3*p_alpha"),
        fp_bracket(&p("p_alpha"), h) == p("-5/4*q - 1/3"),
        fp_bracket(&p("p_alpha"), hd.hamiltonian()) == p("-5/4*q"),
        complex,
    ];
    (
        checks.iter().all(|&c| c),
        format!(
            "{} of {} identities exact",
            checks.iter().filter(|&&c| c).count(),
            checks.len()
        ),
    )
}

fn criterion_4_classical_limit() -> Outcome {
    let p = OscillatorParams::new(1.0, 1.0, 0.0, 0.0, ord(1.0), grid01(), 1.0, 0.0).unwrap();
    let start = Instant::now();
    let rep = solve_fo(&p, 1e-12, 500).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let err = rep
        .solution
        .grid()
        .nodes()
        .zip(rep.solution.values())
        .map(|(t, x)| (x - (t.cos() + 1f64.tan() * t.sin())).abs())
        .fold(0.0, f64::max);
    (
        err <= 1e-3 && elapsed <= 5.0,
        format!("sup error {err:.2e}, {elapsed:.3} s"),
    )
}

fn criterion_5_fractional_solve() -> Outcome {
    let tol = 1e-10;
    let p = OscillatorParams::new(
        1.0,
        1.0,
        0.1,
        1.0,
        ord(0.8),
        Grid::new(0.0, 0.5, N).unwrap(),
        1.0,
        0.0,
    )
    .unwrap();
    let rep = solve_fo(&p, tol, 500).unwrap();
    let x = &rep.solution;
    let defect = forcing_term(&p)
        .function
        .add(&apply_volterra(x, &p))
        .sub(x)
        .sup_norm();
    let ratio = rep
        .increments
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max);
    let rho = (0.5f64.powf(0.8) / gamma(1.8)).powi(2);
    let rel = rep.residual_sup / rep.residual_scale;
    let ok = rel <= 5e-3
        && rep.transversality_error <= 1e-2
        && defect <= 2.0 * tol
        && ratio <= rho + 0.1
        && (rep.contraction_estimate - rho).abs() < 1e-12;
    (
        ok,
        format!(
            "residual {rel:.2e}*scale, transversality {:.2e}, defect {defect:.2e}, ratio {ratio:.3} <= {:.3}",
            rep.transversality_error,
            rho + 0.1
        ),
    )
}

fn criterion_6_non_contractive_refusal(dir: &Path) -> Outcome {
    let p = OscillatorParams::new(1.0, 1.0, 0.0, 0.0, ord(0.8), grid01(), 1.0, 0.0).unwrap();
    let lib_ok = matches!(solve_fo(&p, 1e-10, 100), Err(OscError::NonContractive { rho }) if (rho - INV_GAMMA_1_8_SQ).abs() <= 1e-3);
    let cfg = dir.join("nc.cfg");
    std::fs::write(&cfg, "alpha = 0.8\na = 0\nb = 1\nm_alpha = 1\nk = 1\n").unwrap();
    let out = dir.join("nc");
    let status = Command::new(env!("CARGO_BIN_EXE_fracmech"))
        .args(["--quiet", "oscillator"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap()
        .status;
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let rho = report["contraction_estimate"].as_f64().unwrap();
    let ok = lib_ok && status.code() == Some(4) && (rho - INV_GAMMA_1_8_SQ).abs() <= 1e-3;
    (
        ok,
        format!("exit {:?}, contraction_estimate {rho:.6}", status.code()),
    )
}

fn criterion_7_hamilton_jacobi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let params = HjParams::new(1.5, 0.8, 0.5, 0.4, 2.0).unwrap();
    let action = SeparatedAction::new(params);
    let w = WaveAnsatz::new(|_| 1.3, action, 0.7)
        .unwrap()
        .with_steps(FdSteps {
            xbar: 1e-5,
            t: 1e-5,
        });
    let (mut hj, mut mad, mut wave) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let s = sample_admissible(&mut rng, &params, &SampleBox::default()).unwrap();
        hj = hj.max(hj_residual(&action, s).unwrap().abs());
        let (re, im) = madelung_split_residuals(&w, s).unwrap();
        mad = mad.max(re.abs()).max(im.abs());
        let r = wave_equation_residual(&w, s).unwrap();
        wave = wave.max(r.value.norm() / r.scale);
    }
    (
        hj <= 1e-12 && mad <= 1e-12 && wave <= 1e-6,
        format!("hj {hj:.2e}, madelung {mad:.2e}, wave {wave:.2e}*scale"),
    )
}

fn criterion_8_determinism(dir: &Path) -> Outcome {
    let run = |sub: &str| {
        let out = dir.join(sub);
        let o = Command::new(env!("CARGO_BIN_EXE_fracmech"))
            .args(["selftest", "--seed", "42", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        (
            o.status.code(),
            o.stdout,
            std::fs::read(out.join("selftest.txt")).unwrap(),
        )
    };
    let (a, b) = (run("st1"), run("st2"));
    let ok = a == b && a.0 == Some(0) && a.1 == a.2;
    (
        ok,
        format!("exit {:?}, {} bytes, identical: {}", a.0, a.1.len(), a == b),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let results = [
        ("1 operator identities", criterion_1_operator_identities()),
        ("2 bracket axioms", criterion_2_bracket_axioms()),
        ("3 Hamilton equations", criterion_3_hamilton_equations()),
        ("4 classical limit", criterion_4_classical_limit()),
        ("5 fractional solve", criterion_5_fractional_solve()),
        (
            "6 non-contractive refusal",
            criterion_6_non_contractive_refusal(dir.path()),
        ),
        ("7 Hamilton-Jacobi", criterion_7_hamilton_jacobi()),
        ("8 determinism", criterion_8_determinism(dir.path())),
    ];
    for (name, (ok, detail)) in &results {
        println!(
            "criterion {name}: {} ({detail})",
            if *ok { "PASS" } else { "FAIL" }
        );
    }
    let failed = results.iter().filter(|r| !r.1 .0).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
