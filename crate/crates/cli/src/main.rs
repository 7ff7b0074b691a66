use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hotspots_cli::commands::{
    cmd_certify, cmd_check_certificate, cmd_fem, cmd_prove, cmd_scan, parse_domain, parse_rat_arg, prove_summary,
    write_atomic, ScanMode, EXIT_OK, EXIT_USAGE,
};
use hotspots_cli::RunConfig;
use hotspots_core::proofs::PathChoice;

#[derive(Parser)]
#[command(name = "hotspots", version, about = "Certified polynomial inequalities and FEM checks for triangle eigenvalue bounds")]
struct Cli {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigArgs {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a configuration key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    #[arg(long, global = true)]
    pi_bits: Option<u32>,
    #[arg(long, global = true)]
    max_depth: Option<u32>,
    #[arg(long, global = true)]
    cap_bits: Option<u32>,
    #[arg(long, global = true)]
    grid: Option<u32>,
    /// Coarse and fine FEM levels, e.g. 5,6
    #[arg(long, global = true)]
    fem_levels: Option<String>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            cfg.apply_text(&text).with_context(|| format!("in {}", path.display()))?;
        }
        let mut pairs = self.set.clone();
        let named = [
            ("pi_bits", self.pi_bits.map(|v| v.to_string())),
            ("max_depth", self.max_depth.map(|v| v.to_string())),
            ("cap_bits", self.cap_bits.map(|v| v.to_string())),
            ("grid", self.grid.map(|v| v.to_string())),
            ("fem_levels", self.fem_levels.clone()),
            ("out_dir", self.out_dir.as_ref().map(|p| p.display().to_string())),
        ];
        pairs.extend(named.into_iter().filter_map(|(k, v)| v.map(|v| format!("{k}={v}"))));
        cfg.apply_pairs(&pairs)?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    All,
    Tactic,
    Subdivide,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify catalog cases and write the report and certificate bundles
    Prove {
        /// Case ids, or `all`
        ids: Vec<String>,
        #[arg(long, value_enum, default_value = "all")]
        strategy: StrategyArg,
    },
    /// Certify `P ≤ 0` for a polynomial file on one rectangle
    Certify {
        file: PathBuf,
        #[arg(long, num_args = 4, value_names = ["X0", "DX", "Y0", "DY"], allow_hyphen_values = true)]
        rect: Vec<String>,
        #[arg(long, default_value = "x,y")]
        vars: String,
        /// Restrict to the region where this polynomial is ≤ 0 (repeatable)
        #[arg(long)]
        constraint: Vec<PathBuf>,
        /// Certificate output path (default: stdout)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Grid scans written as CSV: fig1, hotspots or bounds
    Scan {
        mode: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// FEM eigenvalues for triangle:A:B2[:sym], kite:A:B2, rhombus:H or square:S
    Fem {
        domain: String,
        #[arg(long, default_value_t = 4)]
        modes: usize,
        /// Dirichlet sides, comma separated
        #[arg(long, value_delimiter = ',')]
        dirichlet: Vec<usize>,
    },
    /// Re-verify a certificate or case bundle
    CheckCertificate { file: PathBuf },
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = cli.cfg.resolve()?;
    match cli.cmd {
        Cmd::Prove { ids, strategy } => {
            let path = match strategy {
                StrategyArg::All => PathChoice::All,
                StrategyArg::Tactic => PathChoice::Tactic,
                StrategyArg::Subdivide => PathChoice::Subdivide,
            };
            let out = cmd_prove(&ids, path, &cfg, true)?;
            print!("{}", prove_summary(&out.report));
            println!("report: {}", cfg.out_dir.join("report.json").display());
            Ok(out.exit)
        }
        Cmd::Certify { file, rect, vars, constraint, output } => {
            let src = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let names: Vec<&str> = vars.split(',').map(str::trim).collect();
            if names.len() != 2 {
                bail!("--vars takes two names, e.g. x,y");
            }
            let r: Vec<_> = rect.iter().map(|s| parse_rat_arg(s)).collect::<Result<_>>()?;
            let r: [_; 4] = r.try_into().map_err(|_| anyhow::anyhow!("--rect takes four rationals"))?;
            let cs = constraint
                .iter()
                .map(|p| fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
                .collect::<Result<Vec<_>>>()?;
            let out = cmd_certify(&src, [names[0], names[1]], r, &cs, &cfg)?;
            emit(output.as_ref(), &out.certificate.to_json())?;
            if out.certified {
                eprintln!("certified: {} leaves", out.certificate.leaf_count());
            } else if let Some((rect, bound)) = &out.worst {
                eprintln!("not certified; worst leaf {rect} with bound {bound}");
            }
            Ok(out.exit)
        }
        Cmd::Scan { mode, output } => {
            let mode: ScanMode = mode.parse()?;
            emit(output.as_ref(), &cmd_scan(mode, &cfg)?)?;
            Ok(EXIT_OK)
        }
        Cmd::Fem { domain, modes, dirichlet } => {
            let spec = parse_domain(&domain)?;
            let report = cmd_fem(&spec, &dirichlet, modes, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(EXIT_OK)
        }
        Cmd::CheckCertificate { file } => {
            let json = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let out = cmd_check_certificate(&json)?;
            for l in &out.lines {
                println!("{} {} {}", if l.accepted { "ACCEPT" } else { "REJECT" }, l.name, l.detail);
            }
            Ok(out.exit)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
