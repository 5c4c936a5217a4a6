//! Command-line driver: single solves, Z scans, the result tables and self-tests.

pub mod config;
pub mod error;
pub mod report;
pub mod selftest;
pub mod tables;
pub mod zscan;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use quasipin_core::ci::{ground_state_of, optimize_screening_with, Problem};

use config::{Format, Overrides, RunConfig};
use error::{CliError, CliResult};
use report::{analyze, ReportDocument};

#[derive(Debug, Parser)]
#[command(name = "quasipin", version, about = "CI ground states of lithium-like ions and their occupation-number analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground state and full analysis for one rank
    Solve(CommonArgs),
    /// Optimized rank-6 runs over a range of nuclear charges
    Zscan(CommonArgs),
    /// All ranks at Z = 3 written as table files into --out (a directory)
    Tables(CommonArgs),
    /// Oracle and invariant checks
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// 3s | 3p | 3d | 5 | 6a | 6b | 7 | 8
    #[arg(long, value_parser = parse_rank)]
    pub rank: Option<quasipin_core::RankId>,
    /// Nuclear charge
    #[arg(long)]
    pub z: Option<u32>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Minimize the energy over (alpha, gamma)
    #[arg(long)]
    pub optimize: bool,
    #[arg(long)]
    pub z_min: Option<u32>,
    #[arg(long)]
    pub z_max: Option<u32>,
    /// json | csv
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
    /// Output file (solve, zscan) or directory (tables)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare every primitive integral with numerical quadrature
    #[arg(long)]
    pub quadrature_check: bool,
    /// Nelder–Mead stopping spread of energies
    #[arg(long)]
    pub f_tolerance: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Run only suites whose name contains this text
    #[arg(long)]
    pub filter: Option<String>,
    /// Perturb the primitive integrals before the quadrature suite
    #[arg(long)]
    pub inject_fault: bool,
}

fn parse_rank(s: &str) -> Result<quasipin_core::RankId, String> {
    s.parse().map_err(|e: quasipin_core::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

impl CommonArgs {
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let o = Overrides {
            rank: self.rank,
            z: self.z,
            alpha: self.alpha,
            gamma: self.gamma,
            optimize: self.optimize,
            out: self.out.clone(),
            format: self.format,
            quadrature_check: self.quadrature_check,
            z_min: self.z_min,
            z_max: self.z_max,
            f_tolerance: self.f_tolerance,
            max_iterations: self.max_iterations,
        };
        RunConfig::resolve(self.config.as_deref(), &o)
    }
}

pub fn cmd_solve(cfg: &RunConfig) -> CliResult<ReportDocument> {
    let state = match cfg.solve_params()? {
        Some(params) => {
            let problem = Problem::build(&params, cfg.quadrature_check)?;
            ground_state_of(&problem, &problem.hamiltonian())?
        }
        None => {
            let solved = optimize_screening_with(cfg.rank, cfg.z, &cfg.nelder_mead()?)?;
            if cfg.quadrature_check {
                Problem::build(&solved.state.params, true)?;
            }
            solved.state
        }
    };
    analyze(&state)
}

/// Rendered rows, or the rendered rows plus a numerical error when any Z failed.
pub fn cmd_zscan(cfg: &RunConfig) -> CliResult<(String, Option<CliError>)> {
    cfg.validate_zscan()?;
    let rows = zscan::scan(cfg.rank, cfg.z_min, cfg.z_max, &cfg.nelder_mead()?);
    let text = zscan::render(&rows, cfg.format)?;
    let failed: Vec<String> = rows.iter().filter_map(|r| r.error.as_ref().map(|e| format!("z = {}: {e}", r.z))).collect();
    let err = (!failed.is_empty()).then(|| CliError::Numerical(failed.join("; ")));
    Ok((text, err))
}

pub fn cmd_tables(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let docs = tables::run_all(&quasipin_core::RankId::ALL, &cfg.nelder_mead()?)?;
    let t = tables::Tables::from_reports(&docs)?;
    t.write(cfg.out.as_deref().unwrap_or(Path::new(".")), cfg.format)
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Executes one command, writing results to `stdout` unless `--out` is given.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Solve(args) => {
            let cfg = args.resolve()?;
            let doc = cmd_solve(&cfg)?;
            emit(&doc.render(cfg.format)?, cfg.out.as_deref(), stdout)
        }
        Command::Zscan(args) => {
            let cfg = args.resolve()?;
            let (text, err) = cmd_zscan(&cfg)?;
            emit(&text, cfg.out.as_deref(), stdout)?;
            err.map_or(Ok(()), Err)
        }
        Command::Tables(args) => {
            let cfg = args.resolve()?;
            for path in cmd_tables(&cfg)? {
                writeln!(stdout, "wrote {}", path.display()).map_err(|e| CliError::io("<stdout>", e))?;
            }
            Ok(())
        }
        Command::Selftest(args) => {
            let suites = selftest::selected(args.filter.as_deref());
            if suites.is_empty() {
                return Err(CliError::Config(format!(
                    "no suite matches '{}' (suites: {})",
                    args.filter.as_deref().unwrap_or(""),
                    selftest::SUITES.join(", ")
                )));
            }
            let checks = selftest::run(&suites, args.inject_fault);
            let io = |e| CliError::io("<stdout>", e);
            for c in &checks {
                writeln!(stdout, "{}", c.line()).map_err(io)?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            writeln!(stdout, "selftest: {} passed, {failed} failed", checks.len() - failed).map_err(io)?;
            if failed > 0 {
                Err(CliError::SelfTest { failed })
            } else {
                Ok(())
            }
        }
    }
}
