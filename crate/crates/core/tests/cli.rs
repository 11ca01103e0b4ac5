//! End-to-end checks of the command-line front end.

use std::path::{Path, PathBuf};
use std::process::Command;

use ircoop::cli::run;
use ircoop::energy::{optimize_tau0, EnergyQuery};
use ircoop::outage::outage_m1;
use ircoop::spectra::WeightSpectrum;
use ircoop::{from_db, to_db};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ircoop").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_ircoop")).args(args).output().unwrap().status.code().unwrap()
}

/// Parses sweep CSV into `(point, kind, value, half_width)` rows.
fn rows(csv: &str) -> Vec<(f64, String, f64, f64)> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("point,kind,value,half_width,flags"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].to_string(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect()
}

fn tiny_spectrum(dir: &Path, name: &str, rate: f64, samples: &[(f64, f64)]) -> PathBuf {
    let body: Vec<String> = samples.iter().map(|(d, r)| format!("[{d}, {r}]")).collect();
    let text = format!("{{\"label\": \"test\", \"rate\": {rate}, \"samples\": [{}]}}", body.join(", "));
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn rb_samples(rate: f64, n: usize, shift: f64) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|k| {
            let d = k as f64 / n as f64;
            let h = if d < 1.0 { -d * d.ln() - (1.0 - d) * (1.0 - d).ln() } else { 0.0 };
            (d, h - (1.0 - rate) * std::f64::consts::LN_2 + shift)
        })
        .collect()
}

#[test]
fn m1_sweep_matches_golden_file() {
    let scenario = data("direct_m1.json");
    let args = [
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--var",
        "snr_lambda_db",
        "--start",
        "0",
        "--stop",
        "30",
        "--steps",
        "7",
        "--outputs",
        "bound,asymptotic",
    ];
    let (code, first, _) = run_args(&args);
    assert_eq!(code, 0);
    let (_, second, _) = run_args(&args);
    assert_eq!(first, second);
    let golden =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/direct_m1_bound.csv"))
            .unwrap();
    assert_eq!(first, golden);
    for (point, kind, value, _) in rows(&first) {
        if kind == "bound" {
            let want = outage_m1(0.17, from_db(point)).unwrap().value;
            assert!((value - want).abs() <= 1e-15 * want, "{point}: {value} vs {want}");
        }
    }
}

#[test]
fn simulation_rows_are_seed_stable_and_dominated() {
    let scenario = data("symmetric_m5.json");
    let base = [
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--var",
        "snr_lambda_db",
        "--start",
        "-2",
        "--stop",
        "16",
        "--steps",
        "4",
        "--outputs",
        "bound,simulation",
    ];
    let (code, a, _) = run_args(&base);
    assert_eq!(code, 0);
    let mut one_worker = base.to_vec();
    one_worker.extend(["--workers", "1"]);
    let (_, b, _) = run_args(&one_worker);
    assert_eq!(a, b);
    let mut reseeded = base.to_vec();
    reseeded.extend(["--seed", "99"]);
    let (_, c, _) = run_args(&reseeded);
    assert_ne!(a, c);

    let r = rows(&a);
    for pair in r.chunks(2) {
        let (bound, sim) = (&pair[0], &pair[1]);
        assert_eq!((bound.1.as_str(), sim.1.as_str()), ("bound", "simulation"));
        let joint = (bound.3.powi(2) + sim.3.powi(2)).sqrt();
        assert!(sim.2 <= bound.2 + joint, "point {}: {} > {} + {joint}", sim.0, sim.2, bound.2);
    }
}

#[test]
fn db_and_linear_outputs_round_trip() {
    let scenario = data("symmetric_m5.json");
    let sweep = |scale: &str| {
        let (code, out, _) = run_args(&[
            "sweep",
            "--scenario",
            scenario.to_str().unwrap(),
            "--var",
            "snr_rho_db",
            "--start",
            "-3",
            "--stop",
            "9",
            "--steps",
            "5",
            "--outputs",
            "bound,energy",
            scale,
        ]);
        assert_eq!(code, 0);
        rows(&out)
    };
    let db = sweep("--db");
    let lin = sweep("--linear");
    assert_eq!(db.len(), lin.len());
    for (d, l) in db.iter().zip(&lin) {
        assert!((from_db(d.0) - l.0).abs() <= 1e-12 * l.0);
        assert!((to_db(l.0) - d.0).abs() <= 1e-12 * d.0.abs().max(1.0));
        match d.1.as_str() {
            "energy" => assert!((from_db(d.2) - l.2).abs() <= 1e-12 * l.2),
            _ => assert_eq!(d.2, l.2),
        }
    }
}

#[test]
fn kappa_sweep_matches_energy_module() {
    let scenario = data("cluster_hopping_m5.json");
    let (code, out, _) = run_args(&[
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--var",
        "kappa",
        "--start",
        "0.1",
        "--stop",
        "0.9",
        "--steps",
        "5",
        "--outputs",
        "energy",
        "--linear",
    ]);
    assert_eq!(code, 0);
    let q = EnergyQuery::new(0.01, 5, 0.05);
    for (kappa, _, value, _) in rows(&out) {
        let (_, u) = optimize_tau0(&q, kappa).unwrap();
        assert_eq!(value, u);
    }
    let (code, _, err) = run_args(&[
        "sweep",
        "--scenario",
        scenario.to_str().unwrap(),
        "--var",
        "kappa",
        "--start",
        "0.1",
        "--stop",
        "0.9",
        "--steps",
        "5",
        "--outputs",
        "bound",
    ]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn genspectrum_feeds_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rb.json");
    let (code, _, _) =
        run_args(&["genspectrum", "--rate", "0.5", "--samples", "1000", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = run_args(&["threshold", "--spectrum", path.to_str().unwrap(), "--tau", "0.5,0.1"]);
    assert_eq!(code, 0);
    let t = WeightSpectrum::random_binary(0.5, 1000).unwrap().simple_threshold().unwrap();
    let field =
        |key: &str| -> f64 { out.lines().find_map(|l| l.strip_prefix(&format!("{key}\t"))).unwrap().parse().unwrap() };
    assert!((field("c0") - t.c0).abs() < 5e-7);
    assert!((field("c_star") - t.c_star).abs() < 5e-7);
    assert!(out.contains("not-self-decodable"));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut samples = rb_samples(0.5, 32, 0.0);
    samples.swap(3, 4);
    let unsorted = tiny_spectrum(dir.path(), "unsorted.json", 0.5, &samples);
    assert_eq!(binary(&["threshold", "--spectrum", unsorted.to_str().unwrap()]), 2);

    let text = std::fs::read_to_string(data("direct_m1.json")).unwrap().replace("\"coop\"", "\"typo\": 1, \"coop\"");
    let bad = dir.path().join("typo.json");
    std::fs::write(&bad, text).unwrap();
    let args = [
        "sweep",
        "--scenario",
        bad.to_str().unwrap(),
        "--var",
        "snr_lambda_db",
        "--start",
        "0",
        "--stop",
        "1",
        "--steps",
        "2",
    ];
    assert_eq!(binary(&args), 2);

    let m1 = data("direct_m1.json");
    let one_step = [
        "sweep",
        "--scenario",
        m1.to_str().unwrap(),
        "--var",
        "snr_lambda_db",
        "--start",
        "0",
        "--stop",
        "1",
        "--steps",
        "1",
    ];
    assert_eq!(binary(&one_step), 2);
    assert_eq!(binary(&["reproduce", "table2", "--db", "--linear"]), 2);
    assert_eq!(binary(&["frobnicate"]), 2);
}

#[test]
fn rate_bound_violation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let weak = tiny_spectrum(dir.path(), "weak.json", 0.5, &rb_samples(0.5, 64, -0.2));
    assert_eq!(binary(&["threshold", "--spectrum", weak.to_str().unwrap()]), 3);
    let good = tiny_spectrum(dir.path(), "good.json", 0.5, &rb_samples(0.5, 64, 0.0));
    assert_eq!(binary(&["threshold", "--spectrum", good.to_str().unwrap()]), 0);
}

#[test]
fn reproduce_recipes_pass() {
    for recipe in ["table2", "example2", "m2_bound"] {
        let (code, out, _) = run_args(&["reproduce", recipe]);
        assert_eq!(code, 0, "{recipe}:\n{out}");
        assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
    }
}
