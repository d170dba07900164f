//! Experiment drivers: instance generation, solver grids, per-run CSV rows
//! and per-point summaries next to published reference values.
//!
//! Every instance and solver run draws its seed from the master seed and its
//! grid coordinates, so tables do not depend on execution order.

mod reference;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::graph::{gen_er, gen_regular, gen_sk, parse_dimacs, Graph, GraphError};
use crate::ising::IsingModel;
use crate::mis::PruneFilter;
use crate::rng::{derive_seed, label_tag};
use crate::solvers::{minimize_ising, solve_mis, Solver, SolverError, SolverOptions};

pub use reference::{
    coding_reference, formula_r, formula_sparse_density, pi_sdp, pi_sg, rsb_density, CodingReference, CODING_TABLE,
    PARISI, RSB_TABLE,
};

/// Environment variable naming the directory of coding-theory fixtures.
pub const FIXTURE_ENV: &str = "MIS_ISING_FIXTURES";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("reference formula out of domain: {0}")]
    Domain(String),
    #[error("fixture {path}: {source}")]
    Fixture { path: PathBuf, source: GraphError },
    #[error("{instance}: {solver} reported {found}, above the known upper bound {bound}")]
    AboveUpperBound { instance: String, solver: String, found: usize, bound: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Experiment {
    #[serde(rename = "sk")]
    Sk,
    #[serde(rename = "er-dense")]
    ErDense,
    #[serde(rename = "er-sparse")]
    ErSparse,
    #[serde(rename = "regular-1rsb")]
    Regular1rsb,
    #[serde(rename = "coding")]
    Coding,
}

impl Experiment {
    pub const ALL: [Experiment; 5] =
        [Experiment::Sk, Experiment::ErDense, Experiment::ErSparse, Experiment::Regular1rsb, Experiment::Coding];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Sk => "sk",
            Experiment::ErDense => "er-dense",
            Experiment::ErSparse => "er-sparse",
            Experiment::Regular1rsb => "regular-1rsb",
            Experiment::Coding => "coding",
        }
    }

    fn accepts(self, s: Solver) -> bool {
        match self {
            Experiment::Sk => !s.is_mis_greedy(),
            Experiment::Coding => matches!(s, Solver::Min | Solver::Max | Solver::Rank2 | Solver::Sa),
            _ => true,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}` (sk, er-dense, er-sparse, regular-1rsb, coding)"))
    }
}

fn one() -> usize {
    1
}

fn default_sweeps() -> usize {
    1000
}

fn default_rank2_iters() -> usize {
    500
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub solver: Solver,
    /// Column label; defaults to the solver name.
    #[serde(default)]
    pub label: Option<String>,
    /// Independent runs per instance; the best one is recorded.
    #[serde(default = "one")]
    pub runs: usize,
    #[serde(default = "default_sweeps")]
    pub sweeps: usize,
    #[serde(default)]
    pub filter: PruneFilter,
    #[serde(default = "default_rank2_iters")]
    pub rank2_iters: usize,
}

impl SolverSpec {
    pub fn new(solver: Solver) -> Self {
        SolverSpec {
            solver,
            label: None,
            runs: 1,
            sweeps: default_sweeps(),
            filter: PruneFilter::default(),
            rank2_iters: default_rank2_iters(),
        }
    }

    pub fn runs(mut self, runs: usize) -> Self {
        self.runs = runs;
        self
    }

    pub fn sweeps(mut self, sweeps: usize) -> Self {
        self.sweeps = sweeps;
        self
    }

    pub fn filter(mut self, filter: PruneFilter) -> Self {
        self.filter = filter;
        self
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(self.solver.name())
    }

    fn options(&self, seed: u64, execution: Execution) -> SolverOptions {
        SolverOptions {
            runs: self.runs,
            seed,
            sweeps: self.sweeps,
            filter: self.filter,
            rank2_iters: self.rank2_iters,
            execution,
        }
    }
}

fn default_instances_per_point() -> usize {
    50
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Graph sizes (SK and dense ER).
    #[serde(default)]
    pub sizes: Vec<usize>,
    /// Mean degrees (sparse ER) or regular degrees.
    #[serde(default)]
    pub degrees: Vec<f64>,
    /// Fixture names for the coding experiment.
    #[serde(default)]
    pub instances: Vec<String>,
    #[serde(default = "default_instances_per_point")]
    pub instances_per_point: usize,
    pub solvers: Vec<SolverSpec>,
    #[serde(default)]
    pub master_seed: u64,
    /// Dense ER edge probability.
    #[serde(default = "half")]
    pub edge_probability: f64,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub fixture_dir: Option<PathBuf>,
    #[serde(default)]
    pub execution: Execution,
    /// Keep each run's solution so its objective can be re-evaluated.
    #[serde(default)]
    pub store_witness: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, solvers: Vec<SolverSpec>) -> Self {
        ExperimentConfig {
            experiment,
            sizes: Vec::new(),
            degrees: Vec::new(),
            instances: Vec::new(),
            instances_per_point: default_instances_per_point(),
            solvers,
            master_seed: 0,
            edge_probability: half(),
            output_path: None,
            fixture_dir: None,
            execution: Execution::default(),
            store_witness: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.instances_per_point == 0 {
            return bad("instances_per_point must be positive".into());
        }
        if self.solvers.is_empty() {
            return bad("no solvers configured".into());
        }
        let mut labels: Vec<&str> = Vec::new();
        for s in &self.solvers {
            if !self.experiment.accepts(s.solver) {
                return bad(format!("solver `{}` is not available for the {} experiment", s.solver, self.experiment));
            }
            if s.runs == 0 || s.sweeps == 0 || s.rank2_iters == 0 {
                return bad(format!("solver `{}`: runs, sweeps and rank2_iters must be positive", s.label()));
            }
            if labels.contains(&s.label()) {
                return bad(format!("duplicate solver label `{}`", s.label()));
            }
            labels.push(s.label());
        }
        match self.experiment {
            Experiment::Sk | Experiment::ErDense => {
                if self.sizes.contains(&0) {
                    return bad("sizes must be positive".into());
                }
                if !(0.0..=1.0).contains(&self.edge_probability) {
                    return bad(format!("edge_probability {} outside [0, 1]", self.edge_probability));
                }
            }
            Experiment::ErSparse => {
                if let Some(d) = self.degrees.iter().find(|d| !(d.is_finite() && **d >= 1.0)) {
                    return bad(format!("mean degree {d} must be at least 1"));
                }
            }
            Experiment::Regular1rsb => {
                if let Some(d) = self.degrees.iter().find(|d| !(d.fract() == 0.0 && **d >= 1.0)) {
                    return bad(format!("regular degree {d} must be a positive integer"));
                }
            }
            Experiment::Coding => {}
        }
        Ok(())
    }

    /// Explicit fixture directory, else the environment variable, else the
    /// fixtures shipped with this crate.
    pub fn resolved_fixture_dir(&self) -> PathBuf {
        self.fixture_dir
            .clone()
            .or_else(|| std::env::var_os(FIXTURE_ENV).map(PathBuf::from))
            .unwrap_or_else(default_fixture_dir)
    }
}

pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("coding")
}

/// One solver on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub experiment: String,
    pub point_n: usize,
    pub point_d: Option<f64>,
    pub instance: usize,
    pub solver: String,
    pub seed: u64,
    /// SK: energy per `n^{3/2}`; dense ER and coding: set size; sparse: density.
    pub objective: f64,
    pub elapsed_ms: f64,
    #[serde(skip)]
    pub instance_name: Option<String>,
    /// Spins as `+`/`-` characters, or the independent set as space-separated vertices.
    #[serde(skip)]
    pub witness: Option<String>,
}

const CSV_HEADER: [&str; 8] = ["experiment", "point_n", "point_d", "instance", "solver", "seed", "objective", "elapsed_ms"];

pub fn write_records_csv<W: Write>(records: &[RunRecord], with_witness: bool, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if with_witness {
        header.push("witness");
    }
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.experiment.clone(),
            r.point_n.to_string(),
            r.point_d.map(|d| d.to_string()).unwrap_or_default(),
            r.instance.to_string(),
            r.solver.clone(),
            r.seed.to_string(),
            format!("{:?}", r.objective),
            format!("{:.3}", r.elapsed_ms),
        ];
        if with_witness {
            row.push(r.witness.clone().unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Mean objective of one solver at one grid point, with reference values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub point_n: usize,
    pub point_d: Option<f64>,
    pub instance_name: Option<String>,
    pub solver: String,
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub references: Vec<(String, f64)>,
}

pub fn write_summary_csv<W: Write>(summaries: &[Summary], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point_n", "point_d", "instance", "solver", "count", "mean", "std_dev", "min", "max", "references"])?;
    for s in summaries {
        let refs: Vec<String> = s.references.iter().map(|(k, v)| format!("{k}={v:.6}")).collect();
        w.write_record([
            s.point_n.to_string(),
            s.point_d.map(|d| d.to_string()).unwrap_or_default(),
            s.instance_name.clone().unwrap_or_default(),
            s.solver.clone(),
            s.count.to_string(),
            format!("{:.6}", s.mean),
            format!("{:.6}", s.std_dev),
            format!("{:?}", s.min),
            format!("{:?}", s.max),
            refs.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub records: Vec<RunRecord>,
    pub summaries: Vec<Summary>,
    pub warnings: Vec<String>,
}

impl ExperimentOutput {
    /// Summary row for a solver label at a point (`n`, and `d` when set).
    pub fn summary(&self, solver: &str, point_n: usize) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.solver == solver && s.point_n == point_n)
    }

    pub fn summary_for_instance(&self, solver: &str, instance: &str) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.solver == solver && s.instance_name.as_deref() == Some(instance))
    }
}

/// Seed of instance `instance` at grid point `(n, d)`.
pub fn instance_seed(master: u64, experiment: Experiment, n: usize, d: Option<f64>, instance: usize) -> u64 {
    derive_seed(
        master,
        &[label_tag(experiment.name()), n as u64, d.map_or(0, f64::to_bits), instance as u64],
    )
}

/// Seed of one solver on one instance.
pub fn solver_seed(instance_seed: u64, label: &str) -> u64 {
    derive_seed(instance_seed, &[label_tag(label)])
}

struct Job {
    n: usize,
    d: Option<f64>,
    instance: usize,
    name: Option<String>,
}

/// Run the configured experiment and write per-run rows to `output_path`
/// when it is set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let output = match config.experiment {
        Experiment::Sk => run_sk(config),
        Experiment::ErDense => run_er_dense(config),
        Experiment::ErSparse => run_er_sparse(config),
        Experiment::Regular1rsb => run_regular_1rsb(config),
        Experiment::Coding => run_coding(config),
    }?;
    if let Some(path) = &config.output_path {
        write_records_csv(&output.records, config.store_witness, std::fs::File::create(path)?)?;
    }
    Ok(output)
}

fn spins_text(z: &[i8]) -> String {
    z.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

fn set_text(set: &[usize]) -> String {
    set.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn grid(config: &ExperimentConfig, points: &[(usize, Option<f64>)]) -> Vec<Job> {
    points
        .iter()
        .flat_map(|&(n, d)| (0..config.instances_per_point).map(move |instance| Job { n, d, instance, name: None }))
        .collect()
}

/// Solve MIS on `g` with every configured solver; `objective` maps set size
/// to the recorded value.
fn mis_records(
    config: &ExperimentConfig,
    job: &Job,
    g: &Graph,
    seed: u64,
    suffix: &str,
    objective: impl Fn(usize) -> f64,
) -> Result<Vec<RunRecord>, HarnessError> {
    config
        .solvers
        .iter()
        .map(|spec| {
            let label = format!("{}{suffix}", spec.label());
            let s = solver_seed(seed, &label);
            let start = Instant::now();
            let out = solve_mis(g, spec.solver, &spec.options(s, config.execution))?;
            Ok(RunRecord {
                experiment: config.experiment.name().to_string(),
                point_n: job.n,
                point_d: job.d,
                instance: job.instance,
                solver: label,
                seed: s,
                objective: objective(out.best.size()),
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                instance_name: job.name.clone(),
                witness: config.store_witness.then(|| set_text(out.best.vertices())),
            })
        })
        .collect()
}

fn run_jobs<F>(config: &ExperimentConfig, jobs: Vec<Job>, run: F) -> Result<Vec<RunRecord>, HarnessError>
where
    F: Fn(&Job) -> Result<Vec<RunRecord>, HarnessError> + Sync + Send,
{
    let per_job = config.execution.map(jobs, |job| run(&job));
    let mut records = Vec::new();
    for r in per_job {
        records.extend(r?);
    }
    Ok(records)
}

fn summarize(records: &[RunRecord], references: impl Fn(&RunRecord) -> Vec<(String, f64)>) -> Vec<Summary> {
    let mut groups: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, r) in records.iter().enumerate() {
        match groups.iter_mut().find(|g| same_group(&records[g.0], r)) {
            Some(g) => g.1.push(r.objective),
            None => groups.push((i, vec![r.objective])),
        }
    }
    groups
        .into_iter()
        .map(|(k, values)| {
            let r = &records[k];
            let count = values.len();
            let mean = values.iter().sum::<f64>() / count as f64;
            let var = if count > 1 {
                values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64
            } else {
                0.0
            };
            Summary {
                point_n: r.point_n,
                point_d: r.point_d,
                instance_name: r.instance_name.clone(),
                solver: r.solver.clone(),
                count,
                mean,
                std_dev: var.sqrt(),
                min: values.iter().copied().fold(f64::INFINITY, f64::min),
                max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                references: references(r),
            }
        })
        .collect()
}

fn same_group(a: &RunRecord, b: &RunRecord) -> bool {
    a.point_n == b.point_n && a.point_d == b.point_d && a.instance_name == b.instance_name && a.solver == b.solver
}

/// Minimize SK spin glasses; the objective is `E / n^{3/2}`.
pub fn run_sk(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let points: Vec<(usize, Option<f64>)> = config.sizes.iter().map(|&n| (n, None)).collect();
    let records = run_jobs(config, grid(config, &points), |job| {
        let seed = instance_seed(config.master_seed, Experiment::Sk, job.n, None, job.instance);
        let m = IsingModel::from_couplings_graph(&gen_sk(job.n, seed)?);
        let scale = (job.n as f64).powf(1.5);
        config
            .solvers
            .iter()
            .map(|spec| {
                let s = solver_seed(seed, spec.label());
                let start = Instant::now();
                let out = minimize_ising(&m, spec.solver, &spec.options(s, config.execution))?;
                Ok(RunRecord {
                    experiment: Experiment::Sk.name().to_string(),
                    point_n: job.n,
                    point_d: None,
                    instance: job.instance,
                    solver: spec.label().to_string(),
                    seed: s,
                    objective: out.energy / scale,
                    elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                    instance_name: None,
                    witness: config.store_witness.then(|| spins_text(out.spins.as_slice())),
                })
            })
            .collect()
    })?;
    let summaries = summarize(&records, |_| {
        vec![("parisi".into(), PARISI), ("pi_sg".into(), pi_sg()), ("pi_sdp".into(), pi_sdp())]
    });
    Ok(ExperimentOutput { records, summaries, warnings: Vec::new() })
}

/// Independence numbers of dense `G(n, p)`; the objective is the set size.
pub fn run_er_dense(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let points: Vec<(usize, Option<f64>)> = config.sizes.iter().map(|&n| (n, None)).collect();
    let records = run_jobs(config, grid(config, &points), |job| {
        let seed = instance_seed(config.master_seed, Experiment::ErDense, job.n, None, job.instance);
        let g = gen_er(job.n, config.edge_probability, seed)?;
        mis_records(config, job, &g, seed, "", |size| size as f64)
    })?;
    let summaries = summarize(&records, |r| {
        let l = (r.point_n as f64).log2();
        let mut refs = vec![("2log2n".into(), 2.0 * l), ("log2n".into(), l)];
        if let Ok(v) = formula_r(r.point_n) {
            refs.push(("R".into(), v));
        }
        refs
    });
    Ok(ExperimentOutput { records, summaries, warnings: Vec::new() })
}

fn sparse_size(d: f64) -> usize {
    (d * d).round() as usize
}

/// Independence densities of sparse `G(n, d̄/n)` with `n = d̄²`.
pub fn run_er_sparse(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let mut warnings = Vec::new();
    for &d in &config.degrees {
        if let Err(e) = formula_sparse_density(d) {
            warnings.push(e.to_string());
        }
    }
    let points: Vec<(usize, Option<f64>)> = config.degrees.iter().map(|&d| (sparse_size(d), Some(d))).collect();
    let records = run_jobs(config, grid(config, &points), |job| {
        let d = job.d.expect("sparse points carry a degree");
        let seed = instance_seed(config.master_seed, Experiment::ErSparse, job.n, job.d, job.instance);
        let g = gen_er(job.n, (d / job.n as f64).min(1.0), seed)?;
        mis_records(config, job, &g, seed, "", |size| size as f64 / job.n as f64)
    })?;
    let summaries = summarize(&records, |r| {
        let d = r.point_d.expect("sparse points carry a degree");
        let mut refs = vec![("2lnd/d".into(), 2.0 * d.ln() / d)];
        if let Ok(v) = formula_sparse_density(d) {
            refs.push(("formula".into(), v));
        }
        if d.fract() == 0.0 {
            if let Some(v) = rsb_density(d as usize) {
                refs.push(("1rsb".into(), v));
            }
        }
        refs
    });
    Ok(ExperimentOutput { records, summaries, warnings })
}

/// Random `d`-regular graphs and ER graphs of the same mean degree, both with
/// `n = d²`, against the 1RSB densities.
pub fn run_regular_1rsb(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let mut warnings = Vec::new();
    for &d in &config.degrees {
        if rsb_density(d as usize).is_none() {
            warnings.push(format!("no 1RSB reference for d = {d}; column omitted"));
        }
    }
    let points: Vec<(usize, Option<f64>)> = config.degrees.iter().map(|&d| (sparse_size(d), Some(d))).collect();
    let records = run_jobs(config, grid(config, &points), |job| {
        let d = job.d.expect("regular points carry a degree");
        let seed = instance_seed(config.master_seed, Experiment::Regular1rsb, job.n, job.d, job.instance);
        let density = |size: usize| size as f64 / job.n as f64;
        let regular = gen_regular(job.n, d as usize, derive_seed(seed, &[0]))?;
        let er = gen_er(job.n, (d / job.n as f64).min(1.0), derive_seed(seed, &[1]))?;
        let mut rows = mis_records(config, job, &regular, derive_seed(seed, &[0]), "/regular", density)?;
        rows.extend(mis_records(config, job, &er, derive_seed(seed, &[1]), "/er", density)?);
        Ok(rows)
    })?;
    let summaries = summarize(&records, |r| {
        r.point_d.and_then(|d| rsb_density(d as usize)).map(|v| vec![("1rsb".into(), v)]).unwrap_or_default()
    });
    Ok(ExperimentOutput { records, summaries, warnings })
}

/// Load a DIMACS fixture by instance name from `dir`.
pub fn load_fixture(dir: &Path, name: &str) -> Result<Graph, HarnessError> {
    let path = dir.join(name);
    let file = std::fs::File::open(&path)
        .map_err(|e| HarnessError::Fixture { path: path.clone(), source: GraphError::Io(e.to_string()) })?;
    parse_dimacs(std::io::BufReader::new(file))
        .map(|d| d.graph)
        .map_err(|source| HarnessError::Fixture { path, source })
}

/// Best-of-runs set sizes on coding-theory fixtures. A size above the known
/// upper bound is reported as an error.
pub fn run_coding(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let dir = config.resolved_fixture_dir();
    let mut warnings = Vec::new();
    let mut graphs = Vec::with_capacity(config.instances.len());
    for name in &config.instances {
        if coding_reference(name).is_none() {
            warnings.push(format!("{name}: no reference values"));
        }
        graphs.push(load_fixture(&dir, name)?);
    }
    let jobs: Vec<Job> = config
        .instances
        .iter()
        .zip(&graphs)
        .enumerate()
        .map(|(instance, (name, g))| Job { n: g.num_vertices(), d: None, instance, name: Some(name.clone()) })
        .collect();
    let records = run_jobs(config, jobs, |job| {
        let g = &graphs[job.instance];
        let name = job.name.as_deref().expect("coding jobs are named");
        let seed = derive_seed(config.master_seed, &[label_tag(Experiment::Coding.name()), label_tag(name)]);
        let rows = mis_records(config, job, g, seed, "", |size| size as f64)?;
        if let Some(reference) = coding_reference(name) {
            for r in &rows {
                let found = r.objective as usize;
                if found > reference.alpha.1 {
                    return Err(HarnessError::AboveUpperBound {
                        instance: name.to_string(),
                        solver: r.solver.clone(),
                        found,
                        bound: reference.alpha.1,
                    });
                }
            }
        }
        Ok(rows)
    })?;
    let summaries = summarize(&records, |r| {
        r.instance_name
            .as_deref()
            .and_then(coding_reference)
            .map(|c| {
                vec![
                    ("alpha_lower".into(), c.alpha.0 as f64),
                    ("alpha_upper".into(), c.alpha.1 as f64),
                    ("table_min".into(), c.min as f64),
                    ("table_circut".into(), c.circut as f64),
                    ("table_sa".into(), c.sa as f64),
                ]
            })
            .unwrap_or_default()
    });
    Ok(ExperimentOutput { records, summaries, warnings })
}
