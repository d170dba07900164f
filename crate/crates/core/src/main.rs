//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use mis_ising::graph::{
    coding_graph, gen_er, gen_regular, gen_sk, parse_dimacs, parse_edge_list, write_coding_fixture, write_dimacs,
    write_edge_list, CodingFamily, Graph, GraphError,
};
use mis_ising::harness::{run_experiment, write_records_csv, write_summary_csv, Experiment, ExperimentConfig, HarnessError};
use mis_ising::ising::{MaxCutInstance, Side};
use mis_ising::oracle::{exact_maxcut, exact_mis, OracleError};
use mis_ising::solvers::{solve_maxcut, solve_mis, Solver, SolverError, SolverOptions};
use mis_ising::{Execution, PruneFilter};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Unsupported { .. } | SolverError::NoRuns => CliError::Usage(e.to_string()),
            SolverError::NotIndependent => CliError::Internal(e.to_string()),
            SolverError::Mis(_) | SolverError::Ising(_) => CliError::Data(e.to_string()),
            SolverError::Anneal(_) | SolverError::Rank2(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) | HarnessError::Domain(_) => CliError::Usage(e.to_string()),
            HarnessError::AboveUpperBound { .. } => CliError::Internal(e.to_string()),
            HarnessError::Solver(s) => s.into(),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => CliError::Usage(e.to_string()),
            OracleError::Ising(_) => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "mis-ising", version, about = "Maximum independent set and Max-Cut via Ising heuristics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a large independent set in a DIMACS or edge-list graph.
    SolveMis {
        file: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        /// Write the set to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Find a heavy cut in a weighted edge-list or DIMACS graph.
    SolveMaxcut {
        file: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Generate a random or coding-theory graph.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output file (stdout when absent).
        #[arg(long, global = true)]
        output: Option<PathBuf>,
    },
    /// Run an experiment grid described by a JSON config.
    Bench {
        experiment: Experiment,
        #[arg(long)]
        config: PathBuf,
        /// Per-run CSV (overrides the config's output_path).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Per-point summary CSV (stdout when absent).
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Add each run's solution to the per-run CSV.
        #[arg(long)]
        store_witness: bool,
    },
    /// Solve a small instance exactly.
    Oracle {
        problem: OracleProblem,
        file: PathBuf,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_parser = parse_solver)]
    solver: Solver,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Annealing sweeps per run.
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    /// Repair step for Ising-based MIS solvers.
    #[arg(long, default_value = "min-filter", value_parser = parse_filter)]
    filter: PruneFilter,
    /// Coordinate-ascent passes for rank2.
    #[arg(long, default_value_t = 500)]
    rank2_iters: usize,
    #[arg(long)]
    sequential: bool,
}

impl SolveArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            runs: self.runs,
            seed: self.seed,
            sweeps: self.sweeps,
            filter: self.filter,
            rank2_iters: self.rank2_iters,
            execution: if self.sequential { Execution::Sequential } else { Execution::Parallel },
        }
    }
}

fn parse_solver(s: &str) -> Result<Solver, String> {
    s.parse()
}

fn parse_filter(s: &str) -> Result<PruneFilter, String> {
    s.parse()
}

fn parse_family(s: &str) -> Result<CodingFamily, String> {
    s.parse()
}

#[derive(Subcommand)]
enum GenKind {
    /// G(n, p), written as DIMACS.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Uniform-ish random d-regular graph, written as DIMACS.
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// SK couplings, written as a weighted edge list.
    Sk {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Coding-theory graph on 2^k words (families 1dc, 2dc, 1tc, 1et, 1zc).
    Coding {
        #[arg(long, value_parser = parse_family)]
        family: CodingFamily,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleProblem {
    Mis,
    Maxcut,
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let is_dimacs = text.lines().map(str::trim_start).any(|l| l.starts_with("p "));
    let parsed = if is_dimacs {
        parse_dimacs(text.as_bytes()).map(|d| d.graph)
    } else {
        parse_edge_list(text.as_bytes())
    };
    parsed.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn output_writer(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_cut(out: &mut dyn Write, weight: f64, sides: &[Side]) -> io::Result<()> {
    writeln!(out, "# cut {weight:?}")?;
    let v2: Vec<String> = sides.iter().enumerate().filter(|(_, s)| **s == Side::V2).map(|(i, _)| i.to_string()).collect();
    writeln!(out, "{}", v2.join(" "))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::SolveMis { file, solve, output } => {
            let g = read_graph(&file)?;
            let r = solve_mis(&g, solve.solver, &solve.options())?;
            eprintln!("best size {} over {} runs ({:.1} ms)", r.best.size(), solve.runs, r.elapsed.as_secs_f64() * 1e3);
            let mut out = output_writer(output.as_deref())?;
            r.best.write(&mut out)?;
            out.flush()?;
        }
        Command::SolveMaxcut { file, solve } => {
            let c = MaxCutInstance::from_graph(read_graph(&file)?);
            let r = solve_maxcut(&c, solve.solver, &solve.options())?;
            let mut out = output_writer(None)?;
            print_cut(&mut out, r.weight, r.partition.sides())?;
            out.flush()?;
        }
        Command::Gen { kind, output } => {
            let mut out = output_writer(output.as_deref())?;
            match kind {
                GenKind::Er { n, p, seed } => write_dimacs(&gen_er(n, p, seed)?, &mut out)?,
                GenKind::Regular { n, d, seed } => write_dimacs(&gen_regular(n, d, seed)?, &mut out)?,
                GenKind::Sk { n, seed } => write_edge_list(&gen_sk(n, seed)?, &mut out)?,
                GenKind::Coding { family, k } => {
                    if !(1..=16).contains(&k) {
                        return Err(CliError::Usage(format!("k must be in 1..=16, got {k}")));
                    }
                    write_coding_fixture(family, k, &mut out)?;
                    eprintln!("{}: {} edges", family.instance_name(k), coding_graph(family, k).num_edges());
                }
            }
            out.flush()?;
        }
        Command::Bench { experiment, config, output, summary, store_witness } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Data(format!("{}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if cfg.experiment != experiment {
                return Err(CliError::Usage(format!(
                    "config describes the {} experiment, not {experiment}",
                    cfg.experiment
                )));
            }
            if output.is_some() {
                cfg.output_path = output;
            }
            cfg.store_witness |= store_witness;
            let result = run_experiment(&cfg)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            if cfg.output_path.is_none() && summary.is_some() {
                write_records_csv(&result.records, cfg.store_witness, io::stdout().lock()).map_err(CliError::from)?;
            }
            let out = output_writer(summary.as_deref())?;
            write_summary_csv(&result.summaries, out)?;
        }
        Command::Oracle { problem, file } => {
            let g = read_graph(&file)?;
            let mut out = output_writer(None)?;
            match problem {
                OracleProblem::Mis => {
                    let r = exact_mis(&g)?;
                    eprintln!("alpha {} ({} nodes)", r.optimum, r.nodes_explored);
                    r.witness.write(&mut out)?;
                }
                OracleProblem::Maxcut => {
                    let r = exact_maxcut(&MaxCutInstance::from_graph(g))?;
                    print_cut(&mut out, r.optimum, r.witness.sides())?;
                }
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
        Err(_) => ExitCode::from(3),
    }
}
