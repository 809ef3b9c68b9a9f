mod common;

use std::fs;

use common::{check_golden, run_to, sgq, FIXTURES};
use sgq_cli::commands::{CascadeReport, EvolveReport, MultiplyReport, SweepReport, SynthesizeReport};

fn scratch() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn fixtures_match_golden_copies() {
    let dir = scratch();
    for f in FIXTURES {
        check_golden(f, dir.path()).unwrap();
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = scratch();
    let sampled = ["multiply", "--omega0", "1", "--omega", "2", "--theta", "1", "--t", "1.5", "--a0", "0.6",
        "--a1", "0.8", "--sampling", "--seed", "42", "--particles", "100000"];
    let runs: Vec<(&[&str], &str)> = FIXTURES
        .iter()
        .map(|f| (f.args, f.name))
        .chain([(&sampled[..], "multiply.json")])
        .collect();
    for (args, name) in runs {
        let (_, a) = run_to(args, &dir.path().join(format!("a_{name}")));
        let (_, b) = run_to(args, &dir.path().join(format!("b_{name}")));
        assert!(!a.is_empty(), "{name} wrote nothing");
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let dir = scratch();
    let run = |threads: &str, name: &str| {
        let out = dir.path().join(name);
        let status = sgq()
            .env("RAYON_NUM_THREADS", threads)
            .args(["sweep", "--verify", "--output"])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        fs::read(out).unwrap()
    };
    assert_eq!(run("1", "one.json"), run("4", "four.json"));
}

#[test]
fn json_reports_round_trip() {
    let dir = scratch();
    let out = dir.path().join("r.json");

    let (_, bytes) = run_to(FIXTURES[0].args, &out);
    let sweep: SweepReport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(sweep.rows.len(), 125);
    let again = serde_json::to_vec_pretty(&sweep).unwrap();
    assert_eq!(serde_json::from_slice::<SweepReport>(&again).unwrap(), sweep);

    let (_, bytes) = run_to(FIXTURES[2].args, &out);
    let not: SynthesizeReport = serde_json::from_slice(&bytes).unwrap();
    let mut again = serde_json::to_vec_pretty(&not).unwrap();
    again.push(b'\n');
    assert_eq!(again, bytes, "re-serialized report differs");

    let args = ["evolve", "--omega0", "2", "--omega", "0.7", "--theta", "2", "--t-end", "3", "--points", "7",
        "--a0", "0.6", "--a1", "0.8i"];
    let (_, bytes) = run_to(&args, &out);
    let evolve: EvolveReport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(evolve.rows.len(), 7);
    assert_eq!(evolve.initial.a1.im, 0.8);
    let mut again = serde_json::to_vec_pretty(&evolve).unwrap();
    again.push(b'\n');
    assert_eq!(again, bytes);
}

#[test]
fn evolve_csv_rows_are_normalized() {
    let dir = scratch();
    let path = dir.path().join("e.csv");
    let args = ["evolve", "--omega0", "1", "--omega", "2", "--theta", "1.0471975512", "--t-end", "5", "--points",
        "501", "--format", "csv"];
    let (code, _) = run_to(&args, &path);
    assert_eq!(code, 0);
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["t", "re_c0", "im_c0", "re_c1", "im_c1", "p0", "p1"]
    );
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let p0: f64 = rec[5].parse().unwrap();
        let p1: f64 = rec[6].parse().unwrap();
        assert!((p0 + p1 - 1.0).abs() <= 1e-9);
        rows += 1;
    }
    assert_eq!(rows, 501);
    assert!(!fs::read_to_string(&path).unwrap().contains('\r'));
}

#[test]
fn ode_evolution_tracks_closed_form() {
    let dir = scratch();
    let base = ["evolve", "--omega0", "1.3", "--omega", "0.9", "--theta", "0.8", "--t-end", "12", "--points", "25",
        "--a0", "0.6", "--a1", "0.8"];
    let read = |extra: &[&str], name: &str| -> EvolveReport {
        let args: Vec<&str> = base.iter().chain(extra).copied().collect();
        let (code, bytes) = run_to(&args, &dir.path().join(name));
        assert_eq!(code, 0);
        serde_json::from_slice(&bytes).unwrap()
    };
    let analytic = read(&[], "a.json");
    let ode = read(&["--method", "ode", "--basis", "corotating"], "o.json");
    for (a, o) in analytic.rows.iter().zip(&ode.rows) {
        assert!((a.c0.re - o.c0.re).abs() < 1e-7 && (a.c0.im - o.c0.im).abs() < 1e-7);
        assert!((a.c1.re - o.c1.re).abs() < 1e-7 && (a.c1.im - o.c1.im).abs() < 1e-7);
    }
}

#[test]
fn cascade_of_three_stages_lists_eight_clusters() {
    let dir = scratch();
    let args = ["cascade", "--stages", "3", "--omega0", "1", "--omega", "2", "--theta", "1", "--t", "1.1",
        "--a0", "0.6", "--a1", "0.8"];
    let (code, bytes) = run_to(&args, &dir.path().join("c.json"));
    assert_eq!(code, 0);
    let report: CascadeReport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report.clusters.len(), 8);
    let sum: f64 = report.clusters.iter().map(|c| c.weight).sum();
    assert!((sum - 1.0).abs() < 1e-12);
    assert_eq!(report.clusters[0].path, "UUU");
    assert_eq!(report.clusters[7].path, "DDD");
}

#[test]
fn not_gate_example() {
    let dir = scratch();
    let (code, bytes) = run_to(FIXTURES[2].args, &dir.path().join("n.json"));
    assert_eq!(code, 0);
    let report: SynthesizeReport = serde_json::from_slice(&bytes).unwrap();
    let expected = 2.0 * 0.8f64.asin() / 3f64.sqrt();
    assert!((report.tau.unwrap() - expected).abs() < 1e-6);
    assert!(report.residual.unwrap() <= 1e-9);
    let v = report.verification.unwrap();
    assert!(v.analytic_fidelity >= 1.0 - 1e-9);
    assert!(v.ode_fidelity >= 1.0 - 1e-9);
}

#[test]
fn infeasible_gate_writes_diagnosis_and_exits_3() {
    let dir = scratch();
    let (code, bytes) = run_to(FIXTURES[5].args, &dir.path().join("i.json"));
    assert_eq!(code, 3);
    let report: SynthesizeReport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report.status, "infeasible");
    assert!(report.error.unwrap().contains("not purely imaginary"));
    assert!(report.tau.is_none());
}

#[test]
fn search_miss_writes_partial_report_and_exits_3() {
    let dir = scratch();
    let args = ["synthesize", "--gate", "general", "--a0", "1", "--a1", "0", "--target-a0", "0", "--target-a1", "1",
        "--t-range", "0:0.01", "--no-verify"];
    let (code, bytes) = run_to(&args, &dir.path().join("g.json"));
    assert_eq!(code, 3);
    let report: SynthesizeReport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report.status, "not_found");
    assert!(report.residual.unwrap() > 1e-6);
    assert!(report.params.is_some());
}

#[test]
fn general_search_reaches_target() {
    let dir = scratch();
    let args = ["synthesize", "--gate", "general", "--a0", "1", "--a1", "0", "--target-a0", "0.6", "--target-a1",
        "0.8i"];
    let (code, bytes) = run_to(&args, &dir.path().join("g.json"));
    assert_eq!(code, 0);
    let report: SynthesizeReport = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(report.status, "solved");
    assert!(report.residual.unwrap() <= 1e-6);
    assert!(report.verification.unwrap().analytic_fidelity >= 1.0 - 1e-6);
}

#[test]
fn validation_errors_exit_2_without_output() {
    let dir = scratch();
    let bad: [&[&str]; 5] = [
        &["evolve", "--omega0", "1", "--omega", "2", "--theta", "4", "--t-end", "1"],
        &["evolve", "--omega0", "1", "--omega", "2", "--theta", "1", "--t-end", "1", "--points", "1"],
        &["evolve", "--omega0", "1", "--omega", "2", "--theta", "1", "--t-end", "1", "--a0", "1", "--a1", "1"],
        &["evolve", "--omega0", "1", "--omega", "2", "--t-end", "1"],
        &["synthesize", "--gate", "not", "--omega0", "2", "--omega", "1"],
    ];
    for (k, args) in bad.iter().enumerate() {
        let out = dir.path().join(format!("bad{k}.json"));
        let res = sgq().args(*args).arg("--output").arg(&out).output().unwrap();
        assert_eq!(res.status.code(), Some(2), "{args:?}");
        assert!(!res.stderr.is_empty());
        assert!(!out.exists());
    }
    let res = sgq().args(["evolve", "--bogus"]).output().unwrap();
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn output_directory_from_environment() {
    let dir = scratch();
    let status = sgq()
        .env("SGQ_OUTPUT_DIR", dir.path())
        .args(["swap", "--a", "0.6", "--b", "0.8", "--omega0", "1", "--omega", "2", "--theta", "1", "--t", "0.5"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.path().join("swap.json")).unwrap();
    assert!(text.contains("\"concurrence\": 0.96"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch();
    let conf = dir.path().join("run.conf");
    fs::write(
        &conf,
        "# multiplier run\nomega0 = 1\nomega = 2\ntheta = 1\nt = 1.5\na0 = 0.6\na1 = 0.8\nparticles = 1001\n",
    )
    .unwrap();
    let out = dir.path().join("m.json");
    let status = sgq()
        .arg("multiply")
        .arg("--config")
        .arg(&conf)
        .args(["--particles", "2000", "--output"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let report: MultiplyReport = serde_json::from_slice(&fs::read(out).unwrap()).unwrap();
    assert_eq!(report.particles, 2000);
    assert_eq!(report.branches[0].count + report.branches[1].count, 2000);
    assert_eq!(report.branches[0].count, 720);
    assert_eq!(report.t, 1.5);
}

#[test]
fn slow_drive_warns_on_stderr() {
    let dir = scratch();
    let res = sgq()
        .args(["multiply", "--omega0", "1", "--omega", "0.001", "--theta", "1.5707963267948966", "--t", "1",
            "--output"])
        .arg(dir.path().join("w.json"))
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("warning"));
}

#[test]
fn stdout_output() {
    let res = sgq()
        .args(["adiabaticity", "--omega0", "1", "--omega", "2", "--theta", "1", "--t-end", "1", "--points", "3",
            "--format", "csv", "--output", "-"])
        .output()
        .unwrap();
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("t,ratio,closed_form\n"));
}
