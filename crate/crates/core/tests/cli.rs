use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fracmech"));
    c.env_remove("FRACMECH_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn write_cfg(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn frac_constant_caputo_is_zero() {
    let o = run(&["frac", "caputo-left", "1*(t-a)^0", "0.5", "0:1:256"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header, ["t", "value"]);
    assert_eq!(rows.len(), 257);
    assert!(rows.iter().all(|r| r[1] == 0.0));
}

#[test]
fn frac_integral_matches_oracle_column() {
    let o = run(&[
        "frac",
        "rl-int-left",
        "1*(t-a)^1",
        "0.5",
        "0:1:256",
        "--oracle",
    ]);
    assert_eq!(code(&o), 0);
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header, ["t", "value", "oracle"]);
    for r in &rows {
        // Γ(2)/Γ(2.5) t^1.5
        let exact = r[0].powf(1.5) / 1.329340388179137;
        assert!((r[2] - exact).abs() <= 1e-14, "{r:?}");
        assert!((r[1] - r[2]).abs() <= 1e-12, "{r:?}");
    }
}

#[test]
fn frac_golden() {
    let o = run(&[
        "frac",
        "caputo-right",
        "2*(b-t)^2.5 - 1*(b-t)^1",
        "0.75",
        "0:2:16",
        "--oracle",
    ]);
    assert_eq!(code(&o), 0);
    check_golden("frac_caputo_right.csv", &stdout(&o));
}

#[test]
fn frac_reads_sample_csv() {
    let dir = TempDir::new().unwrap();
    let o = run(&["frac", "rl-int-left", "1*(t-a)^1", "1", "0:1:8"]);
    let input = write_cfg(&dir, "in.csv", &stdout(&o));
    let o = bin()
        .args(["frac", "caputo-left"])
        .arg(&input)
        .args(["1", "0:1:8", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let (_, rows) = parse_csv(&fs::read_to_string(dir.path().join("frac.csv")).unwrap());
    // d/dt (t²/2) = t, exact for the quadratic on the second-order stencil
    for r in rows {
        assert!((r[1] - r[0]).abs() <= 1e-12, "{r:?}");
    }

    let cx = write_cfg(
        &dir,
        "c.csv",
        "t,value_re,value_im\n0,1,2\n0.5,1,2\n1,1,2\n",
    );
    let o = bin()
        .args(["frac", "caputo-left"])
        .arg(&cx)
        .args(["0.5", "0:1:2"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header, ["t", "value_re", "value_im"]);
    assert!(rows.iter().all(|r| r[1] == 0.0 && r[2] == 0.0));

    let short = write_cfg(&dir, "s.csv", "t,value\n0,1\n");
    let o = bin()
        .args(["frac", "caputo-left"])
        .arg(&short)
        .args(["0.5", "0:1:2"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn frac_exit_codes() {
    assert_eq!(
        code(&run(&["frac", "caputo-left", "1*(t-a)^q", "0.5", "0:1:8"])),
        2
    );
    assert_eq!(code(&run(&["frac", "caputo-left", "1", "0.5", "0:1"])), 2);
    assert_eq!(code(&run(&["frac", "caputo-left", "1", "0", "0:1:8"])), 2);
    assert_eq!(
        code(&run(&[
            "frac",
            "rl-deriv-left",
            "1*(t-a)^0.3",
            "0.5",
            "0:1:8",
            "--oracle"
        ])),
        3
    );
    assert_eq!(
        code(&run(&["frac", "rl-deriv-right", "1", "1", "0:1:8"])),
        3
    );
}

#[test]
fn oscillator_classical_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(
        &dir,
        "cl.cfg",
        "# classical limit\nalpha = 1\na = 0\nb = 1\nn = 1024\n",
    );
    let out = dir.path().join("run");
    let o = bin()
        .args(["--quiet", "oscillator"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "ok");
    assert!(report["residual_sup"].as_f64().unwrap() < 1e-5);
    assert_eq!(report["contraction_estimate"], 1.0);
    let (header, rows) = parse_csv(&fs::read_to_string(out.join("trajectory.csv")).unwrap());
    assert_eq!(header, ["t", "x"]);
    let err = rows
        .iter()
        .map(|r| (r[1] - (r[0].cos() + 1f64.tan() * r[0].sin())).abs())
        .fold(0.0, f64::max);
    assert!(err <= 1e-3);
}

#[test]
fn oscillator_golden() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(
        &dir,
        "f.cfg",
        "alpha = 0.7\nb = 0.4\nn = 128\ncharge = 0.5\nfield_E = -0.2\ne1 = 0.3\nk = 2\n",
    );
    let o = bin()
        .args(["--quiet", "oscillator"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    check_golden(
        "oscillator_trajectory.csv",
        &fs::read_to_string(dir.path().join("trajectory.csv")).unwrap(),
    );
    check_golden(
        "oscillator_report.json",
        &fs::read_to_string(dir.path().join("report.json")).unwrap(),
    );
}

#[test]
fn oscillator_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("alpha = 0.8\nb = 1\n", 4, "non_contractive"),
        ("max_iter = 2\n", 5, "max_iter_exceeded"),
        (
            "alpha = 0.5\nb = 1\nk = 0.5\ne1 = 1\n",
            3,
            "divergent_forcing",
        ),
        ("k = 0\n", 0, "ok"),
    ];
    for (i, (body, expect, status)) in cases.iter().enumerate() {
        let cfg = write_cfg(&dir, &format!("c{i}.cfg"), body);
        let out = dir.path().join(format!("o{i}"));
        let o = bin()
            .arg("oscillator")
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        assert_eq!(code(&o), *expect, "{body}");
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
        assert_eq!(report["status"], *status);
        if *status == "ok" {
            assert_eq!(report["iterations"], 1);
        }
    }
    for bad in [
        "m_alpha = 0\n",
        "colour = red\n",
        "alpha 0.5\n",
        "n = -3\n",
        "tol = 0\n",
        "alpha = 1.5\n",
    ] {
        let cfg = write_cfg(&dir, "bad.cfg", bad);
        let o = bin().arg("oscillator").arg(&cfg).output().unwrap();
        assert_eq!(code(&o), 2, "{bad}");
        let msg = String::from_utf8(o.stderr).unwrap();
        assert!(msg.contains("oscillator"), "{bad}: {msg}");
    }
    assert_eq!(code(&run(&["oscillator", "/nonexistent/cfg"])), 2);
}

#[test]
fn bracket_examples() {
    let o = run(&["bracket", "p_alpha", "q"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "-1\n"));
    let o = run(&["bracket", "q", "q"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "0\n"));
    let o = run(&["bracket", "q^2*p_beta", "p_alpha^2 + t"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o)
            .trim()
            .parse::<fracmech::symexpr::PhasePoly>()
            .unwrap(),
        "4*q*p_alpha*p_beta".parse().unwrap()
    );
    assert_eq!(code(&run(&["bracket", "q +", "q"])), 2);
    assert_eq!(code(&run(&["bracket"])), 2);
}

#[test]
fn bracket_axioms() {
    let o = run(&["bracket", "--check-axioms", "--seed", "42"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 7);
    assert!(s.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn verify_hj_default_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "hj.cfg", "");
    let o = bin().arg("verify-hj").arg(&cfg).output().unwrap();
    assert_eq!(code(&o), 0);
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header[4], "hj_residual");
    assert_eq!(rows.len(), 100);
    assert!(rows
        .iter()
        .all(|r| r[4].abs() <= 1e-12 && r[7] <= 1e-6 * r[8]));
}

#[test]
fn verify_hj_classical_limit_and_golden() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(
        &dir,
        "hj.cfg",
        "hbar = 0\namplitude_slope = 0.5\ncharge = 1\nfield_E = 0.3\n",
    );
    let o = bin()
        .args(["verify-hj", "--samples", "8", "--seed", "7"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let (_, rows) = parse_csv(&text);
    assert!(rows.iter().all(|r| r[5].abs() <= 1e-12 && r[7].is_nan()));
    check_golden("verify_hj_hbar0.csv", &text);
}

#[test]
fn verify_hj_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "a.cfg", "beta_sep = 0.01\nx_min = 0.5\n");
    assert_eq!(code(&bin().arg("verify-hj").arg(&cfg).output().unwrap()), 3);
    let cfg = write_cfg(&dir, "b.cfg", "amplitude_slope = 0.5\n");
    assert_eq!(code(&bin().arg("verify-hj").arg(&cfg).output().unwrap()), 1);
    let cfg = write_cfg(&dir, "c.cfg", "hbar = -1\n");
    assert_eq!(code(&bin().arg("verify-hj").arg(&cfg).output().unwrap()), 2);
    let cfg = write_cfg(&dir, "d.cfg", "x_min = 1\nx_max = 0\n");
    assert_eq!(code(&bin().arg("verify-hj").arg(&cfg).output().unwrap()), 2);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_cfg(&dir, "hj.cfg", "");
    let a = bin()
        .args(["verify-hj", "--seed", "3"])
        .arg(&cfg)
        .output()
        .unwrap();
    let b = bin()
        .args(["verify-hj", "--seed", "3"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let c = bin()
        .args(["verify-hj", "--seed", "4"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_ne!(a.stdout, c.stdout);

    let one = bin()
        .args(["selftest", "--seed", "42"])
        .env("FRACMECH_THREADS", "1")
        .output()
        .unwrap();
    let many = bin().args(["selftest", "--seed", "42"]).output().unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(String::from_utf8(one.stdout).unwrap().lines().count(), 8);
}

#[test]
fn global_flags_and_env() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["nonsense"])), 2);
    assert_eq!(code(&run(&["bracket", "q", "q", "--seed", "x"])), 2);
    let o = bin()
        .args(["bracket", "q", "q"])
        .env("FRACMECH_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
