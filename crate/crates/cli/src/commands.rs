//! Command implementations. Each returns its output and an exit code so the
//! binary and the tests share one code path.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hotspots_core::bounds::{
    kite_upper_abc, mu2_upper_lemma, mu2_upper_lemma_exact, mu_a_lower, pi2_over_b2_exact, region_classify,
    strictly_gray, Convention, TriParam,
};
use hotspots_core::certifier::{certify_nonpos, Certificate, CertifyOptions, Rect};
use hotspots_core::check::{check_certificate, CheckSummary};
use hotspots_core::exactq::{format_rational, rat, to_f64, BigRational, Consts, RatInterval};
use hotspots_core::proofs::{build_case, run_cases, CaseBundle, CaseStatus, PathChoice, ProofReport, CASE_IDS};
use hotspots_fem::{
    analyze_hot_spots, classify_symmetry, gap_report, mesh_domain, simplicity_gap, solve_mixed, solve_neumann, DomainSpec,
    EigenSummary, HotSpotReport, Symmetry,
};
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::expr::parse_poly;

pub const EXIT_OK: i32 = 0;
/// Not certified, rejected, or a failing case.
pub const EXIT_FAIL: i32 = 1;
/// Bad arguments or unreadable input.
pub const EXIT_USAGE: i32 = 2;

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// prove

pub struct ProveOutput {
    pub report: ProofReport,
    pub bundles: Vec<CaseBundle>,
    pub exit: i32,
}

/// Runs the named cases (or every case for `all`). With `write`, stores
/// `report.json` and one bundle per case under the output directory.
pub fn cmd_prove(ids: &[String], path: PathChoice, cfg: &RunConfig, write: bool) -> Result<ProveOutput> {
    let ids: Vec<String> = if ids.is_empty() || ids.iter().any(|i| i.eq_ignore_ascii_case("all")) {
        CASE_IDS.iter().map(|s| s.to_string()).collect()
    } else {
        ids.to_vec()
    };
    let cases = ids.iter().map(|id| build_case(id)).collect::<Result<Vec<_>, _>>()?;
    let opts = hotspots_core::proofs::RunOptions { path, ..cfg.run_options() };
    let (mut report, bundles) = run_cases(&cases, &opts);
    if write {
        for (case, bundle) in report.cases.iter_mut().zip(&bundles) {
            let rel = PathBuf::from("certificates").join(format!("{}.json", bundle.id));
            write_atomic(&cfg.out_dir.join(&rel), &bundle.to_json())?;
            case.certificate = Some(rel.display().to_string());
        }
        write_atomic(&cfg.out_dir.join("report.json"), &report.to_json())?;
    }
    let exit = if report.all_certified { EXIT_OK } else { EXIT_FAIL };
    Ok(ProveOutput { report, bundles, exit })
}

pub fn prove_summary(report: &ProofReport) -> String {
    let mut s = String::new();
    for c in &report.cases {
        let status = match c.status {
            CaseStatus::Certified => "certified",
            CaseStatus::Failed => "FAILED",
        };
        let _ = writeln!(s, "{:<3} {:<9} leaves={:<6} {} ms", c.id, status, c.leaves, c.wall_ms);
    }
    let _ = writeln!(s, "total leaves {}; all certified: {}", report.total_leaves, report.all_certified);
    s
}

// ---------------------------------------------------------------------------
// certify

pub struct CertifyOutput {
    pub certified: bool,
    pub certificate: Certificate,
    /// Worst failing leaf and its bound when not certified.
    pub worst: Option<(String, String)>,
    pub exit: i32,
}

/// Certifies `poly ≤ 0` on `[x0, x0+dx] × [y0, y0+dy]`, intersected with
/// `{h ≤ 0}` for every constraint `h`.
pub fn cmd_certify(
    poly: &str,
    vars: [&str; 2],
    rect: [BigRational; 4],
    constraints: &[String],
    cfg: &RunConfig,
) -> Result<CertifyOutput> {
    let consts = Consts::new(cfg.pi_bits);
    let p = parse_poly(poly, vars).context("polynomial")?.collapse(&consts);
    let cs = constraints
        .iter()
        .map(|c| parse_poly(c, vars).map(|q| q.collapse(&consts)))
        .collect::<Result<Vec<_>, _>>()
        .context("constraint")?;
    let [x0, dx, y0, dy] = rect;
    if !dx.is_positive() || !dy.is_positive() {
        bail!("rectangle sides must be positive");
    }
    let r = Rect::new(RatInterval::point(x0), RatInterval::point(y0), dx, dy)?;
    let opts = CertifyOptions {
        max_depth: cfg.max_depth,
        cap_bits: cfg.cap_bits,
        ..CertifyOptions::default()
    }
    .with_constraints(cs);
    Ok(match certify_nonpos(&p, &r, &opts) {
        Ok(certificate) => CertifyOutput {
            certified: true,
            certificate,
            worst: None,
            exit: EXIT_OK,
        },
        Err(u) => CertifyOutput {
            certified: false,
            worst: Some((u.worst_rect.to_string(), u.worst_bound.to_string())),
            certificate: u.attempt,
            exit: EXIT_FAIL,
        },
    })
}

// ---------------------------------------------------------------------------
// check-certificate

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub accepted: bool,
    pub detail: String,
}

pub struct CheckOutput {
    pub lines: Vec<CheckLine>,
    pub exit: i32,
}

fn check_one(name: String, cert: &Certificate) -> CheckLine {
    match check_certificate(cert) {
        Ok(CheckSummary { folds, excluded, splits, tactics }) => CheckLine {
            name,
            accepted: true,
            detail: format!("folds={folds} excluded={excluded} splits={splits} tactics={tactics}"),
        },
        Err(e) => CheckLine {
            name,
            accepted: false,
            detail: e.to_string(),
        },
    }
}

/// Re-verifies a single certificate or a case bundle.
pub fn cmd_check_certificate(json: &str) -> Result<CheckOutput> {
    let lines = if let Ok(bundle) = CaseBundle::from_json(json) {
        if bundle.certificates.is_empty() {
            bail!("bundle {} contains no certificates", bundle.id);
        }
        bundle
            .certificates
            .par_iter()
            .map(|n| check_one(format!("{}/{}#{}", bundle.id, n.obligation, n.rect), &n.certificate))
            .collect()
    } else {
        let cert = Certificate::from_json(json).context("not a certificate or case bundle")?;
        vec![check_one("certificate".into(), &cert)]
    };
    let exit = if lines.iter().all(|l| l.accepted) { EXIT_OK } else { EXIT_FAIL };
    Ok(CheckOutput { lines, exit })
}

// ---------------------------------------------------------------------------
// scan

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Fig1,
    HotSpots,
    Bounds,
}

impl std::str::FromStr for ScanMode {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(ScanMode::Fig1),
            "hotspots" => Ok(ScanMode::HotSpots),
            "bounds" => Ok(ScanMode::Bounds),
            _ => bail!("unknown scan mode {s:?} (fig1, hotspots, bounds)"),
        }
    }
}

/// Unit-base grid: `a = i/(2n)`, `b = j/n`, admissible and nondegenerate.
pub fn unit_grid(n: u32) -> Vec<TriParam> {
    let n = n as i64;
    let mut out = Vec::new();
    for j in 1..=n {
        for i in 0..=n {
            if let Ok(tp) = TriParam::unit(rat(i, 2 * n), rat(j, n)) {
                if tp.admissible() {
                    out.push(tp);
                }
            }
        }
    }
    out
}

fn b_exact(tp: &TriParam) -> String {
    match hotspots_core::exactq::rational_sqrt(tp.b2()) {
        Some(b) => format_rational(&b),
        None => format!("sqrt({})", format_rational(tp.b2())),
    }
}

fn dec(v: f64) -> String {
    format!("{v:.9}")
}

fn scan_fig1(n: u32) -> Result<String> {
    let mut s = String::from("a,b,a_dec,b_dec,kite_sym,mu_cond,acute,small_angle,small_angle_pi4,gray\n");
    for tp in unit_grid(n) {
        let f = region_classify(&tp)?;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            format_rational(tp.a()),
            b_exact(&tp),
            dec(tp.a_f64()),
            dec(tp.b_f64()),
            f.kite_sym,
            f.mu_cond,
            f.acute,
            f.small_angle,
            f.small_angle_pi4,
            strictly_gray(&tp)
        );
    }
    Ok(s)
}

fn scan_bounds(n: u32, consts: &Consts) -> Result<String> {
    let mut s = String::from(
        "a,b,a_dec,b_dec,mu_a_lower,kite_upper,kite_chain,mu2_upper_lemma,pi2_over_b2,lemma_chain\n",
    );
    for tp in unit_grid(n).into_iter().filter(strictly_gray) {
        let lo = mu_a_lower(&tp, consts)?;
        let up = kite_upper_abc(&tp, consts)?;
        let lemma = mu2_upper_lemma(&tp, consts)?;
        let lemma_chain = mu2_upper_lemma_exact(&tp)?.cmp_exact(&pi2_over_b2_exact(&tp)).is_le();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            format_rational(tp.a()),
            b_exact(&tp),
            dec(tp.a_f64()),
            dec(tp.b_f64()),
            dec(to_f64(lo.lo())),
            dec(to_f64(up.hi())),
            lo.lo() > up.hi(),
            dec(to_f64(lemma.hi())),
            dec(to_f64(pi2_over_b2_exact(&tp).enclose(consts).lo())),
            lemma_chain
        );
    }
    Ok(s)
}

/// Smallest interior angle of a triangle given by its corners.
pub fn smallest_angle(v: &[[f64; 2]]) -> f64 {
    (0..3)
        .map(|i| {
            let (p, q, r) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
            let (u, w) = ([q[0] - p[0], q[1] - p[1]], [r[0] - p[0], r[1] - p[1]]);
            let c = (u[0] * w[0] + u[1] * w[1]) / ((u[0] * u[0] + u[1] * u[1]).sqrt() * (w[0] * w[0] + w[1] * w[1]).sqrt());
            c.clamp(-1.0, 1.0).acos()
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, Serialize)]
pub struct HotSpotVerdict {
    pub mu2: f64,
    pub mu3: f64,
    pub gap: f64,
    pub gap_error: f64,
    pub report: Option<HotSpotReport>,
    pub verdict: String,
}

/// FEM verdict for one triangle: simplicity gap and mode-2 extremum
/// locations at the configured levels.
pub fn hot_spot_verdict(spec: &DomainSpec, level: u32) -> Result<HotSpotVerdict> {
    let e = solve_neumann(&mesh_domain(spec, level)?, 3)?;
    let g = gap_report(&e);
    let (report, verdict) = match analyze_hot_spots(&e, 2) {
        Ok(r) => {
            let v = if r.extrema_at_vertices() {
                "extrema at vertices"
            } else if !r.stable {
                "unstable"
            } else if r.interior_extrema() > 0 {
                "interior extremum"
            } else {
                "extremum on an edge"
            };
            (Some(r), v.to_string())
        }
        Err(err) => (None, err.to_string()),
    };
    Ok(HotSpotVerdict {
        mu2: g.mu2,
        mu3: g.mu3,
        gap: g.gap,
        gap_error: g.error,
        report,
        verdict,
    })
}

fn scan_hotspots(n: u32, level: u32) -> Result<String> {
    let grid = unit_grid(n);
    let rows: Vec<Result<String>> = grid
        .par_iter()
        .map(|tp| {
            let spec = DomainSpec::Triangle(tp.clone());
            let v = hot_spot_verdict(&spec, level)?;
            let (amax, amin, stable) = match &v.report {
                Some(r) => (format!("{:?}", r.argmax), format!("{:?}", r.argmin), r.stable.to_string()),
                None => (String::new(), String::new(), String::new()),
            };
            Ok(format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                format_rational(tp.a()),
                b_exact(tp),
                dec(tp.a_f64()),
                dec(tp.b_f64()),
                dec(smallest_angle(&tp.vertices()).to_degrees()),
                dec(v.mu2),
                dec(v.mu3),
                dec(v.gap),
                format!("{:.3e}", v.gap_error),
                amax,
                amin,
                stable,
                v.verdict
            ))
        })
        .collect();
    let mut s = String::from("a,b,a_dec,b_dec,min_angle_deg,mu2,mu3,gap,gap_error,argmax,argmin,stable,verdict\n");
    for r in rows {
        s.push_str(&r?);
        s.push('\n');
    }
    Ok(s)
}

pub fn cmd_scan(mode: ScanMode, cfg: &RunConfig) -> Result<String> {
    match mode {
        ScanMode::Fig1 => scan_fig1(cfg.grid),
        ScanMode::Bounds => scan_bounds(cfg.grid, &Consts::new(cfg.pi_bits)),
        ScanMode::HotSpots => scan_hotspots(cfg.grid, cfg.fem_levels.1),
    }
}

// ---------------------------------------------------------------------------
// fem

#[derive(Clone, Debug, Serialize)]
pub struct FemReport {
    pub eigen: EigenSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<Vec<Symmetry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hot_spots: Option<HotSpotReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hot_spot_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<hotspots_fem::GapReport>,
}

/// Parses `triangle:A:B2[:sym]`, `kite:A:B2`, `rhombus:H` or `square:SIDE`,
/// with rational `A`, `B2` (the squared height) and `H`.
pub fn parse_domain(s: &str) -> Result<DomainSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    let q = |t: &str| hotspots_core::exactq::parse_rational(t).with_context(|| format!("bad rational {t:?}"));
    let tri = |parts: &[&str]| -> Result<TriParam> {
        let conv = match parts.get(2).copied() {
            None | Some("unit") => Convention::UnitBase,
            Some("sym") => Convention::SymBase,
            Some(o) => bail!("unknown convention {o:?}"),
        };
        Ok(TriParam::with_b2(q(parts[0])?, q(parts[1])?, conv)?)
    };
    Ok(match (parts[0], parts.len()) {
        ("triangle", 3 | 4) => DomainSpec::Triangle(tri(&parts[1..])?),
        ("kite", 3) => DomainSpec::Kite(tri(&parts[1..])?),
        ("rhombus", 2) => DomainSpec::Rhombus { h: to_f64(&q(parts[1])?) },
        ("square", 2) => DomainSpec::Square { side: to_f64(&q(parts[1])?) },
        _ => bail!("unrecognised domain {s:?}"),
    })
}

pub fn cmd_fem(spec: &DomainSpec, dirichlet: &[usize], modes: usize, cfg: &RunConfig) -> Result<FemReport> {
    let mesh = mesh_domain(spec, cfg.fem_levels.1)?;
    let e = if dirichlet.is_empty() {
        solve_neumann(&mesh, modes.max(2))?
    } else {
        solve_mixed(&mesh, dirichlet, modes.max(1))?
    };
    let symmetry = spec.mirror_symmetric().then(|| classify_symmetry(&e)).transpose()?;
    let (hot_spots, hot_spot_error) = if dirichlet.is_empty() && e.len() >= 3 {
        match analyze_hot_spots(&e, 2) {
            Ok(r) => (Some(r), None),
            Err(err) => (None, Some(err.to_string())),
        }
    } else {
        (None, None)
    };
    let gap = match spec {
        DomainSpec::Triangle(tp) if dirichlet.is_empty() => Some(simplicity_gap(tp, cfg.fem_levels.1)?),
        _ => None,
    };
    Ok(FemReport {
        eigen: e.summary(),
        symmetry,
        hot_spots,
        hot_spot_error,
        gap,
    })
}

/// Parses a rational command-line argument.
pub fn parse_rat_arg(s: &str) -> Result<BigRational> {
    hotspots_core::exactq::parse_rational(s).with_context(|| format!("bad rational {s:?}"))
}
