//! Command-line front end. `main.rs` only parses arguments and maps errors
//! to exit codes; everything else lives here so it can be tested in-process.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::bench::{self, BenchConfig, BenchError};
use crate::energy::{EnergyError, Evaluator};
use crate::graphio::{parse_edge_list, Graph, GraphError};
use crate::hamiltonian::{Hamiltonian, Problem};
use crate::optimize::{optimize_params, rqaoa_run, OptimizeError, OptimizerConfig, RqaoaConfig};
use crate::simulator::{QaoaParams, SimError, DEFAULT_MAX_WIDTH};
use crate::symmetry::{
    term_orbits, weighted_automorphisms, OrbitPartition, SymmetryConfig, SymmetryError,
};

pub const THREADS_ENV: &str = "QAOA_SYM_THREADS";

pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const RESOURCE: i32 = 3;
    pub const TIMEOUT: i32 = 4;
    pub const INCONSISTENT: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(
    name = "qaoa-sym",
    version,
    about = "Symmetry-reduced QAOA energy evaluation"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Use the weights in the edge list (otherwise every edge has weight 1).
    #[arg(long, global = true)]
    pub weighted: bool,
    #[arg(long, global = true, value_enum, default_value_t = ProblemArg::Maxcut)]
    pub problem: ProblemArg,
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for energy evaluation.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Largest reverse causal cone (in qubits) that will be simulated.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_WIDTH)]
    pub width_guard: usize,
    /// Automorphism search budget in seconds.
    #[arg(long, global = true, default_value_t = 600.0)]
    pub timeout: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Maxcut,
    Ising,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Maxcut => Problem::MaxCut,
            ProblemArg::Ising => Problem::Ising,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the term orbits of the instance.
    Orbits { graph: PathBuf },
    /// Evaluate the QAOA energy at given angles.
    Energy(EnergyArgs),
    /// Maximize the energy over the angles.
    Optimize(OptimizeArgs),
    /// Run recursive QAOA.
    Rqaoa(RqaoaArgs),
    /// Time full against reduced evaluation.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub p: usize,
    /// Comma-separated, one per layer (radians).
    #[arg(long)]
    pub betas: String,
    #[arg(long)]
    pub gammas: String,
    /// Simulate every term.
    #[arg(long, conflicts_with = "reduced")]
    pub full: bool,
    /// Simulate one term per orbit (default).
    #[arg(long)]
    pub reduced: bool,
    /// Orbit partition JSON (as printed by `orbits`) to use instead of
    /// computing one.
    #[arg(long, conflicts_with = "full")]
    pub orbits: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = 8)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 3)]
    pub refine: usize,
}

#[derive(Debug, Args)]
pub struct RqaoaArgs {
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Stop eliminating at this many variables and brute-force the rest.
    #[arg(long, default_value_t = 2)]
    pub cutoff: usize,
    /// Round the first edge with sign +1 when all correlations vanish.
    #[arg(long)]
    pub allow_degenerate: bool,
    /// Start each round's optimizer from the previous round's angles.
    #[arg(long)]
    pub warm_start: bool,
    /// Evaluate every term instead of one per orbit.
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(required = true)]
    pub graphs: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long)]
    pub betas: Option<String>,
    #[arg(long)]
    pub gammas: Option<String>,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Graph { .. } | CliError::Input(_) => exit::INPUT,
            CliError::Output(_) => exit::INCONSISTENT,
            CliError::Sim(e) => sim_code(e),
            CliError::Symmetry(e) => symmetry_code(e),
            CliError::Energy(e) => energy_code(e),
            CliError::Optimize(e) => match e {
                OptimizeError::Energy(e) => energy_code(e),
                OptimizeError::Symmetry(e) => symmetry_code(e),
                OptimizeError::TooManyVariables { .. } => exit::RESOURCE,
                OptimizeError::DegenerateCorrelations => exit::INCONSISTENT,
                _ => exit::INPUT,
            },
            CliError::Bench(e) => match e {
                BenchError::Energy(e) => energy_code(e),
                BenchError::Symmetry(e) => symmetry_code(e),
                BenchError::EnergyMismatch { .. } => exit::INCONSISTENT,
                BenchError::ZeroEvals => exit::INPUT,
            },
        }
    }
}

fn sim_code(e: &SimError) -> i32 {
    match e {
        SimError::ConeTooWide { .. } | SimError::TooManyQubits { .. } => exit::RESOURCE,
        _ => exit::INPUT,
    }
}

fn symmetry_code(e: &SymmetryError) -> i32 {
    match e {
        SymmetryError::Timeout { .. } => exit::TIMEOUT,
        SymmetryError::TooLarge { .. } => exit::RESOURCE,
        SymmetryError::TermNotPreserved { .. } | SymmetryError::InhomogeneousOrbit { .. } => {
            exit::INCONSISTENT
        }
        _ => exit::INPUT,
    }
}

fn energy_code(e: &EnergyError) -> i32 {
    match e {
        EnergyError::Sim(e) => sim_code(e),
        EnergyError::Partition(_) => exit::INPUT,
        EnergyError::NothingProcessed => exit::INPUT,
    }
}

impl GlobalOpts {
    fn timeout(&self) -> Result<Duration, CliError> {
        Duration::try_from_secs_f64(self.timeout)
            .map_err(|_| CliError::Input(format!("invalid --timeout {}", self.timeout)))
    }

    fn symmetry_config(&self) -> Result<SymmetryConfig, CliError> {
        Ok(SymmetryConfig {
            timeout: Some(self.timeout()?),
            use_partial_on_timeout: false,
        })
    }

    fn load(&self, path: &Path) -> Result<Graph, CliError> {
        let text = read(path)?;
        let g = parse_edge_list(&text).map_err(|source| CliError::Graph {
            path: path.into(),
            source,
        })?;
        Ok(if self.weighted { g } else { g.unit_weights() })
    }

    fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            seed: self.seed,
            max_width: self.width_guard,
            ..Default::default()
        }
    }

    /// Term orbits; a solver timeout is an error here, not a silent fallback.
    fn orbits(&self, g: &Graph, h: &Hamiltonian) -> Result<OrbitPartition, CliError> {
        let gens = weighted_automorphisms(g, Some(self.timeout()?))?;
        Ok(term_orbits(&gens, h)?)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

/// Parses a comma-separated angle list of exactly `p` entries.
pub fn parse_angles(text: &str, p: usize, name: &str) -> Result<Vec<f64>, CliError> {
    let angles = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(format!("--{name}: {e}")))?;
    if angles.len() != p {
        return Err(CliError::Input(format!(
            "--{name} has {} values, expected p = {p}",
            angles.len()
        )));
    }
    Ok(angles)
}

fn params_from(p: usize, betas: &str, gammas: &str) -> Result<QaoaParams, CliError> {
    Ok(QaoaParams::new(
        parse_angles(betas, p, "betas")?,
        parse_angles(gammas, p, "gammas")?,
    )?)
}

fn emit(out: &mut impl Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// Configures the global worker pool. Only the first call has an effect.
pub fn init_threads(threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

pub fn run(cli: &Cli, out: &mut impl Write) -> Result<(), CliError> {
    let g = &cli.global;
    if g.width_guard == 0 {
        return Err(CliError::Input("--width-guard must be positive".into()));
    }
    init_threads(g.threads);
    let problem = Problem::from(g.problem);
    match &cli.command {
        Command::Orbits { graph } => {
            let graph = g.load(graph)?;
            let h = problem.build(&graph);
            emit(out, &g.orbits(&graph, &h)?)
        }
        Command::Energy(args) => {
            let graph = g.load(&args.graph)?;
            let h = problem.build(&graph);
            let params = params_from(args.p, &args.betas, &args.gammas)?;
            let report = if args.full {
                Evaluator::full(&h)
                    .with_max_width(g.width_guard)
                    .energy(&params)?
            } else {
                let orbits = match &args.orbits {
                    Some(path) => serde_json::from_str(&read(path)?)
                        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
                    None => g.orbits(&graph, &h)?,
                };
                Evaluator::reduced(&h, &orbits)?
                    .with_max_width(g.width_guard)
                    .energy(&params)?
            };
            emit(out, &report)
        }
        Command::Optimize(args) => {
            let graph = g.load(&args.graph)?;
            let h = problem.build(&graph);
            let orbits = if args.full {
                None
            } else {
                Some(g.orbits(&graph, &h)?)
            };
            let cfg = OptimizerConfig {
                grid_points: args.grid_points,
                n_refine: args.refine,
                ..g.optimizer()
            };
            emit(out, &optimize_params(&h, orbits.as_ref(), args.p, &cfg)?)
        }
        Command::Rqaoa(args) => {
            let graph = g.load(&args.graph)?;
            let h = problem.build(&graph);
            let cfg = RqaoaConfig {
                p: args.p,
                n_cutoff: args.cutoff,
                optimizer: g.optimizer(),
                symmetry: g.symmetry_config()?,
                use_symmetry: !args.no_symmetry,
                allow_degenerate: args.allow_degenerate,
                warm_start: args.warm_start,
            };
            emit(out, &rqaoa_run(&h, &cfg)?)
        }
        Command::Bench(args) => {
            let params = match (&args.betas, &args.gammas) {
                (Some(b), Some(c)) => params_from(args.p, b, c)?,
                (None, None) => QaoaParams::new(vec![0.4; args.p], vec![0.7; args.p])?,
                _ => {
                    return Err(CliError::Input(
                        "give both --betas and --gammas or neither".into(),
                    ))
                }
            };
            let cfg = BenchConfig {
                problem,
                symmetry: g.symmetry_config()?,
                max_width: g.width_guard,
            };
            let mut reports = Vec::new();
            for path in &args.graphs {
                let graph = g.load(path)?;
                let name = path.file_stem().map_or_else(
                    || path.display().to_string(),
                    |s| s.to_string_lossy().into_owned(),
                );
                reports.push(bench::run_bench(&name, &graph, &params, &cfg)?);
            }
            if args.csv {
                out.write_all(bench::to_csv(&reports).as_bytes())?;
                Ok(())
            } else {
                emit(out, &reports)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_lists() {
        assert_eq!(
            parse_angles("0.1, 0.2", 2, "betas").unwrap(),
            vec![0.1, 0.2]
        );
        assert!(matches!(
            parse_angles("0.1", 2, "betas"),
            Err(CliError::Input(_))
        ));
        assert!(matches!(
            parse_angles("x", 1, "betas"),
            Err(CliError::Input(_))
        ));
    }

    #[test]
    fn exit_codes() {
        let wide = CliError::Energy(EnergyError::Sim(SimError::ConeTooWide {
            term: vec![0, 1],
            width: 30,
            max: 26,
        }));
        assert_eq!(wide.exit_code(), exit::RESOURCE);
        assert_eq!(CliError::Input("x".into()).exit_code(), exit::INPUT);
        let mismatch = CliError::Bench(BenchError::EnergyMismatch {
            full: 0.0,
            reduced: 1.0,
        });
        assert_eq!(mismatch.exit_code(), exit::INCONSISTENT);
    }
}
