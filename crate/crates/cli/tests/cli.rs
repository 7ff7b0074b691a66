use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hotspots_core::certifier::Certificate;
use hotspots_core::exactq::{rat, RatInterval};
use hotspots_core::proofs::{CaseBundle, ProofReport};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hotspots"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("hotspots-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn certify_exit_codes() {
    let d = scratch("certify");
    let cases = [("x - 1", 0), ("x", 1), ("-1/2 + 0*x", 0), ("y - 1", 0)];
    for (src, want) in cases {
        let f = write(&d, "p.txt", src);
        let o = run(&["certify", &f, "--rect", "0", "1", "0", "1"]);
        assert_eq!(code(&o), want, "{src}: {}", String::from_utf8_lossy(&o.stderr));
        let cert = Certificate::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
        assert_eq!(cert.is_certified(), want == 0);
    }
    // y − 1 on a rectangle of height 2 is false at the top edge
    let f = write(&d, "p.txt", "y - 1");
    assert_eq!(code(&run(&["certify", &f, "--rect", "0", "1", "0", "2"])), 1);
    let bad = write(&d, "bad.txt", "x +* 1");
    assert_eq!(code(&run(&["certify", &bad, "--rect", "0", "1", "0", "1"])), 2);
    assert_eq!(code(&run(&["certify", &f, "--rect", "0", "0", "0", "1"])), 2);
}

#[test]
fn certify_with_constraint_and_check() {
    let d = scratch("constraint");
    // x + y − 3/2 ≤ 0 fails on the unit square but holds inside the disc
    let p = write(&d, "p.txt", "a + b - 3/2");
    let c = write(&d, "c.txt", "a^2 + b^2 - 1");
    let out = d.join("cert.json").display().to_string();
    let plain = run(&["certify", &p, "--vars", "a,b", "--rect", "0", "1", "0", "1"]);
    assert_eq!(code(&plain), 1);
    let o = run(&[
        "certify", &p, "--vars", "a,b", "--rect", "0", "1", "0", "1", "--constraint", &c, "--output", &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let chk = run(&["check-certificate", &out]);
    assert_eq!(code(&chk), 0);
    assert!(String::from_utf8_lossy(&chk.stdout).starts_with("ACCEPT"));
}

#[test]
fn prove_writes_report_and_bundles() {
    let d = scratch("prove");
    let dir = d.display().to_string();
    let o = run(&["prove", "S2", "K4", "--out-dir", &dir]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: ProofReport = serde_json::from_str(&fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    assert!(report.all_certified);
    assert_eq!(report.cases.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(), ["K4", "S2"]);
    let s2 = CaseBundle::from_json(&fs::read_to_string(d.join("certificates/S2.json")).unwrap()).unwrap();
    assert_eq!(s2.certificates.len(), 2);
    let chk = run(&["check-certificate", &d.join("certificates/K4.json").display().to_string()]);
    assert_eq!(code(&chk), 0);

    let sub = run(&["prove", "K4", "--strategy", "subdivide", "--out-dir", &dir]);
    assert_eq!(code(&sub), 0);
    let report: ProofReport = serde_json::from_str(&fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    assert!(report.cases[0].obligations.iter().all(|o| o.strategy != "tactic-script"));

    assert_eq!(code(&run(&["prove", "Z9", "--out-dir", &dir])), 2);
}

#[test]
fn mutated_bundle_is_rejected() {
    let d = scratch("mutate");
    let dir = d.display().to_string();
    assert_eq!(code(&run(&["prove", "S6", "--out-dir", &dir])), 0);
    let path = d.join("certificates/S6.json");
    let mut bundle = CaseBundle::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    {
        let leaves = bundle.certificates[0].certificate.root.leaf_bounds_mut();
        let b = leaves.into_iter().next().unwrap();
        *b = RatInterval::point(b.hi() - rat(1, 1000));
    }
    let bad = write(&d, "bad.json", &bundle.to_json());
    let o = run(&["check-certificate", &bad]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("REJECT"));
}

#[test]
fn config_file_and_flags() {
    let d = scratch("config");
    let p = write(&d, "p.txt", "x - 1");
    let good = write(&d, "run.cfg", "# settings\npi_bits = 64\nmax_depth = 3\n");
    let o = run(&["--config", &good, "certify", &p, "--rect", "0", "1", "0", "1"]);
    assert_eq!(code(&o), 0);
    let unknown = write(&d, "bad.cfg", "colour = red\n");
    let o = run(&["--config", &unknown, "certify", &p, "--rect", "0", "1", "0", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
    assert_eq!(code(&run(&["--set", "max_depth=0", "certify", &p, "--rect", "0", "1", "0", "1"])), 2);
    // a flag overrides the file: depth 0 makes `x − 1/2` on [0,1]² unprovable
    let half = write(&d, "h.txt", "x + y - 3/2");
    let deep = write(&d, "deep.cfg", "max_depth = 10\n");
    let c = write(&d, "c.txt", "x^2 + y^2 - 1");
    let args = |depth: &str| {
        run(&[
            "--config", &deep, "--max-depth", depth, "certify", &half, "--rect", "0", "1", "0", "1", "--constraint", &c,
        ])
    };
    assert_eq!(code(&args("10")), 0);
    assert_eq!(code(&args("1")), 1);
}

#[test]
fn scan_is_deterministic() {
    let a = run(&["scan", "fig1", "--grid", "10"]);
    let b = run(&["scan", "fig1", "--grid", "10"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let csv = String::from_utf8(a.stdout).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("a,b,"));
    assert!(lines.all(|l| l.split(',').count() == 10));
    let bounds = String::from_utf8(run(&["scan", "bounds", "--grid", "6"]).stdout).unwrap();
    assert!(bounds.lines().count() > 3);
    assert!(bounds.lines().skip(1).all(|l| l.ends_with("true,") || l.contains(",true,")), "{bounds}");
    assert_eq!(code(&run(&["scan", "nope"])), 2);
}

#[test]
fn fem_json() {
    let o = run(&["fem", "square:1", "--modes", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mu2 = v["eigen"]["extrapolated"][1].as_f64().unwrap();
    assert!((mu2 - std::f64::consts::PI.powi(2)).abs() < 0.05);
    let k = run(&["fem", "kite:1/4:4/25", "--modes", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&k.stdout).unwrap();
    assert_eq!(v["symmetry"][1], "Symmetric");
    let t = run(&["fem", "triangle:0:3:sym", "--modes", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&t.stdout).unwrap();
    assert!(v["hot_spot_error"].as_str().unwrap().contains("degenerate"));
    assert_eq!(code(&run(&["fem", "hexagon:1"])), 2);
}
