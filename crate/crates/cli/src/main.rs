//! `qre`: runs the verification suites and prints a JSON report.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
//! 3 an input (expression, R-matrix or presentation file) failed to parse.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qre_core::coeff::ParamSet;
use qre_core::hecke::parse_rmatrix;
use qre_core::ncalg::{parse_presentation, CompletionLimits, RewriteSystem};
use qre_core::report::{self, expression_params, Config, Profile, Report, Selection};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qre", version, about = "Exact checks for RE/RTT algebras, quantum spheres and their forms")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Braid/Hecke identities, Poincaré series, rank
    Hecke(Common),
    /// RE algebra: flatness, quantum trace, Cayley–Hamilton, shift identity
    Re {
        #[command(flatten)]
        common: Common,
        /// check graded dims up to this degree
        #[arg(long, value_name = "D")]
        flatness: Option<u32>,
        #[arg(long)]
        ch: bool,
        #[arg(long)]
        shift_check: bool,
    },
    /// RTT algebra, coaction on the RE algebra, power maps
    Rtt {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        coaction_check: bool,
        /// powers L ↦ L^k to check, e.g. 2,3
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
    },
    /// Quantum sphere: projectors, extended CH, line-bundle modules
    Sphere {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        projectors: bool,
        #[arg(long)]
        ch_plus: bool,
        /// check M/M_ν for this ν
        #[arg(long, value_name = "NU")]
        module_check: Option<String>,
        #[arg(long, value_name = "D")]
        level: Option<u32>,
    },
    /// U_q(sl2) decompositions, form modules, truncated cohomology
    Forms {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        decompose: bool,
        #[arg(long, value_name = "K")]
        omega: Option<u8>,
        #[arg(long, value_name = "D")]
        level: Option<u32>,
        #[arg(long)]
        cohomology: bool,
    },
    /// Every suite
    All(Common),
    /// Complete a presentation file and print its graded dimensions
    Present {
        file: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// completion degree bound (default 6, or QRE_DEGREE)
    #[arg(long, env = "QRE_DEGREE")]
    degree: Option<u32>,
    /// orbit constant, an expression in q and named parameters
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hbar: Option<String>,
    #[arg(long, value_name = "FILE")]
    rmatrix: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// golden-file directory (default: ./golden, else the repository copy)
    #[arg(long, value_name = "DIR")]
    golden: Option<PathBuf>,
    #[arg(long)]
    golden_update: bool,
    #[arg(long, value_enum, default_value_t = ProfileArg::RationalRoots)]
    profile: ProfileArg,
    /// add per-check timings to the report (makes output nondeterministic)
    #[arg(long)]
    timings: bool,
}

#[derive(ValueEnum, Clone, Copy)]
enum ProfileArg {
    RationalRoots,
    ExtRoots,
}

enum Failure {
    Parse(anyhow::Error),
    Other(anyhow::Error),
}

fn default_golden() -> Option<PathBuf> {
    let local = PathBuf::from("golden");
    if local.is_dir() {
        return Some(local);
    }
    let repo = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../golden"));
    Some(repo)
}

fn config(c: &Common, select: Selection) -> Result<Config, Failure> {
    let mut cfg = Config {
        n: c.n,
        degree: c.degree.unwrap_or(6),
        profile: match c.profile {
            ProfileArg::RationalRoots => Profile::RationalRoots,
            ProfileArg::ExtRoots => Profile::ExtRoots,
        },
        golden_dir: c.golden.clone().or_else(default_golden),
        golden_update: c.golden_update,
        timings: c.timings,
        select,
        ..Config::default()
    };
    if let Some(path) = &c.rmatrix {
        let src = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(Failure::Other)?;
        let (m, params) = parse_rmatrix(&src)
            .with_context(|| format!("{}", path.display()))
            .map_err(Failure::Parse)?;
        cfg.n = (2..=m.rows()).find(|n| n * n == m.rows()).unwrap_or(cfg.n);
        cfg.params = params;
        cfg.rmatrix = Some((m, path.display().to_string()));
    } else {
        let mut extra: Vec<String> = Vec::new();
        for e in [&c.c, &c.hbar].into_iter().flatten() {
            for p in expression_params(e) {
                if !extra.contains(&p) {
                    extra.push(p);
                }
            }
        }
        let refs: Vec<&str> = extra.iter().map(|s| s.as_str()).collect();
        cfg.params = ParamSet::new(&refs);
    }
    let parse = |src: &str, what: &str| cfg.params.parse(src).with_context(|| format!("--{what} '{src}'")).map_err(Failure::Parse);
    if let Some(src) = &c.c {
        cfg.c = Some(parse(src, "c")?);
    }
    if let Some(src) = &c.hbar {
        cfg.hbar = Some(parse(src, "hbar")?);
    }
    Ok(cfg)
}

fn emit(json: &str, out: &Option<PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn finish(r: Report, out: &Option<PathBuf>) -> Result<ExitCode, Failure> {
    emit(&r.to_json(), out).map_err(Failure::Other)?;
    for c in r.checks.iter().filter(|c| c.status == report::Status::Fail) {
        eprintln!("FAIL {}: {}", c.id, c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default());
    }
    Ok(if r.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let suite = |name: &str, common: &Common, sel: Selection| -> Result<ExitCode, Failure> {
        let cfg = config(common, sel)?;
        let r = report::run(name, &cfg).map_err(|e| Failure::Other(anyhow::anyhow!(e)))?;
        finish(r, &common.out)
    };
    match cli.cmd {
        Cmd::Hecke(c) => suite("hecke", &c, Selection::default()),
        Cmd::Re { common, flatness, ch, shift_check } => {
            suite("re", &common, Selection { flatness, ch, shift_check, ..Default::default() })
        }
        Cmd::Rtt { common, coaction_check, k } => {
            suite("rtt", &common, Selection { coaction_check, powers: k, ..Default::default() })
        }
        Cmd::Sphere { common, projectors, ch_plus, module_check, level } => suite(
            "sphere",
            &common,
            Selection { projectors, ch_plus, module_check, level, ..Default::default() },
        ),
        Cmd::Forms { common, decompose, omega, level, cohomology } => {
            suite("forms", &common, Selection { decompose, omega, level, cohomology, ..Default::default() })
        }
        Cmd::All(c) => {
            let cfg = config(&c, Selection::default())?;
            finish(report::run_all(&cfg), &c.out)
        }
        Cmd::Present { file, degree, out } => {
            let src = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))
                .map_err(Failure::Other)?;
            let pf = parse_presentation(&src).with_context(|| format!("{}", file.display())).map_err(Failure::Parse)?;
            let d = degree.or(pf.degree).unwrap_or(6);
            let sys = RewriteSystem::complete(&pf.presentation, d, CompletionLimits::default())
                .map_err(|e| Failure::Other(e.into()))?;
            let dims: Vec<usize> = (0..=d)
                .map(|k| sys.graded_dimension(k))
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::Other(e.into()))?;
            let body = json!({
                "schema": report::SCHEMA_VERSION,
                "generators": sys.names(),
                "params": pf.params.names(),
                "degree": d,
                "rules": sys.rule_count(),
                "fully_confluent": sys.is_fully_confluent(),
                "graded_dims": dims,
            });
            emit(&(serde_json::to_string_pretty(&body).expect("json") + "\n"), &out).map_err(Failure::Other)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Parse(e)) => {
            eprintln!("parse error: {e:#}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
