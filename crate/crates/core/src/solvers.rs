//! Uniform front end over the heuristics: minimize an Ising model, solve
//! Max-Cut, or find a large independent set, best of several seeded runs.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anneal::{simulated_annealing, AnnealError, AnnealParams};
use crate::exec::Execution;
use crate::graph::Graph;
use crate::greedy::{maxcut_ec, maxcut_sec, maxcut_sg, maxcut_sg3, mis_max, mis_min};
use crate::ising::{
    cut_from_spins, cut_weight, embed_maxcut, ising_spins_from_embedded_cut, CutPartition, IsingError, IsingModel,
    MaxCutInstance, SpinAssignment,
};
use crate::mis::{decode_and_prune, is_independent, mis_to_ising, IndependentSet, MisError, PruneFilter};
use crate::rank2::{solve_rank2, Rank2Error, Rank2Params};
use crate::rng::derive_seed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("solver `{solver}` cannot be used for {problem}")]
    Unsupported { solver: Solver, problem: &'static str },
    #[error("number of runs must be at least 1")]
    NoRuns,
    #[error(transparent)]
    Anneal(#[from] AnnealError),
    #[error(transparent)]
    Rank2(#[from] Rank2Error),
    #[error(transparent)]
    Mis(#[from] MisError),
    #[error(transparent)]
    Ising(#[from] IsingError),
    #[error("solver produced a set that is not independent")]
    NotIndependent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Min,
    Max,
    Sg,
    Sg3,
    Ec,
    Sec,
    Sa,
    Rank2,
}

impl Solver {
    pub const ALL: [Solver; 8] =
        [Solver::Min, Solver::Max, Solver::Sg, Solver::Sg3, Solver::Ec, Solver::Sec, Solver::Sa, Solver::Rank2];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Min => "min",
            Solver::Max => "max",
            Solver::Sg => "sg",
            Solver::Sg3 => "sg3",
            Solver::Ec => "ec",
            Solver::Sec => "sec",
            Solver::Sa => "sa",
            Solver::Rank2 => "rank2",
        }
    }

    /// Works directly on graphs for MIS, without an Ising encoding.
    pub fn is_mis_greedy(self) -> bool {
        matches!(self, Solver::Min | Solver::Max)
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Solver::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown solver `{s}` (min, max, sg, sg3, ec, sec, sa, rank2)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub runs: usize,
    pub seed: u64,
    /// Annealing sweeps per run.
    pub sweeps: usize,
    pub filter: PruneFilter,
    pub rank2_iters: usize,
    pub execution: Execution,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            runs: 1,
            seed: 0,
            sweeps: 1000,
            filter: PruneFilter::MinFilter,
            rank2_iters: 500,
            execution: Execution::Parallel,
        }
    }
}

impl SolverOptions {
    fn run_seed(&self, run: usize) -> u64 {
        derive_seed(self.seed, &[run as u64])
    }

    fn check(&self) -> Result<(), SolverError> {
        if self.runs == 0 {
            Err(SolverError::NoRuns)
        } else {
            Ok(())
        }
    }
}

fn maxcut_run(c: &MaxCutInstance, solver: Solver, opts: &SolverOptions, seed: u64) -> Result<CutPartition, SolverError> {
    Ok(match solver {
        Solver::Sg => maxcut_sg(c, seed).partition,
        Solver::Sg3 => maxcut_sg3(c, seed).partition,
        Solver::Ec => maxcut_ec(c, seed).partition,
        Solver::Sec => maxcut_sec(c, seed).partition,
        Solver::Rank2 => {
            let p = Rank2Params { max_iters: opts.rank2_iters, seed, execution: Execution::Sequential, ..Default::default() };
            solve_rank2(c, &p)?.partition
        }
        Solver::Min | Solver::Max | Solver::Sa => {
            return Err(SolverError::Unsupported { solver, problem: "direct Max-Cut runs" })
        }
    })
}

/// Final spins of every run, in run order.
pub fn ising_runs(m: &IsingModel, solver: Solver, opts: &SolverOptions) -> Result<Vec<SpinAssignment>, SolverError> {
    opts.check()?;
    match solver {
        Solver::Min | Solver::Max => Err(SolverError::Unsupported { solver, problem: "Ising minimization" }),
        Solver::Sa => {
            let p = AnnealParams {
                num_reads: opts.runs,
                execution: opts.execution,
                ..AnnealParams::with_sweeps(opts.sweeps, opts.seed)
            };
            Ok(simulated_annealing(m, &p)?.per_read_spins)
        }
        _ => {
            let c = embed_maxcut(m);
            let runs: Vec<usize> = (0..opts.runs).collect();
            opts.execution
                .map(runs, |r| maxcut_run(&c, solver, opts, opts.run_seed(r)).map(|p| ising_spins_from_embedded_cut(&p)))
                .into_iter()
                .collect()
        }
    }
}

#[derive(Debug, Clone)]
pub struct IsingOutcome {
    pub spins: SpinAssignment,
    pub energy: f64,
    pub per_run_energies: Vec<f64>,
    pub elapsed: Duration,
}

/// Lowest-energy state found over all runs; ties go to the earliest run.
pub fn minimize_ising(m: &IsingModel, solver: Solver, opts: &SolverOptions) -> Result<IsingOutcome, SolverError> {
    let start = Instant::now();
    let runs = ising_runs(m, solver, opts)?;
    let energies = runs.iter().map(|z| m.energy(z)).collect::<Result<Vec<_>, _>>()?;
    let best = (0..runs.len()).min_by(|&a, &b| energies[a].total_cmp(&energies[b]).then(a.cmp(&b))).expect("runs ≥ 1");
    Ok(IsingOutcome {
        spins: runs[best].clone(),
        energy: energies[best],
        per_run_energies: energies,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone)]
pub struct CutOutcome {
    pub partition: CutPartition,
    pub weight: f64,
    pub per_run_weights: Vec<f64>,
    pub elapsed: Duration,
}

/// Ising form of Max-Cut: `J_ij = −w_ij / 2`, so `H = W/2 − cut`.
fn maxcut_as_ising(c: &MaxCutInstance) -> IsingModel {
    let mut m = IsingModel::new(c.num_vertices());
    for e in c.graph().edges() {
        m.add_coupling(e.u, e.v, -e.w / 2.0).expect("edge endpoints are in range");
    }
    m
}

/// Heaviest cut found over all runs.
pub fn solve_maxcut(c: &MaxCutInstance, solver: Solver, opts: &SolverOptions) -> Result<CutOutcome, SolverError> {
    opts.check()?;
    let start = Instant::now();
    let partitions: Vec<CutPartition> = if solver == Solver::Sa {
        ising_runs(&maxcut_as_ising(c), solver, opts)?.iter().map(cut_from_spins).collect()
    } else {
        let runs: Vec<usize> = (0..opts.runs).collect();
        opts.execution
            .map(runs, |r| maxcut_run(c, solver, opts, opts.run_seed(r)))
            .into_iter()
            .collect::<Result<_, _>>()?
    };
    let weights = partitions.iter().map(|p| cut_weight(c, p)).collect::<Result<Vec<_>, _>>()?;
    let best = (0..weights.len()).min_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b))).expect("runs ≥ 1");
    Ok(CutOutcome {
        partition: partitions[best].clone(),
        weight: weights[best],
        per_run_weights: weights,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone)]
pub struct MisOutcome {
    pub best: IndependentSet,
    pub per_run_sizes: Vec<usize>,
    pub elapsed: Duration,
}

/// Independent sets from every run. Ising-based solvers minimize the MIS
/// Ising model, then decode and prune with `opts.filter`.
pub fn mis_runs(g: &Graph, solver: Solver, opts: &SolverOptions) -> Result<Vec<IndependentSet>, SolverError> {
    opts.check()?;
    let sets: Vec<IndependentSet> = if solver.is_mis_greedy() {
        let runs: Vec<usize> = (0..opts.runs).collect();
        opts.execution.map(runs, |r| {
            let seed = opts.run_seed(r);
            if solver == Solver::Min {
                mis_min(g, seed)
            } else {
                mis_max(g, seed)
            }
        })
    } else {
        let m = mis_to_ising(g)?;
        let spins = ising_runs(&m, solver, opts)?;
        spins
            .iter()
            .enumerate()
            .map(|(r, z)| decode_and_prune(g, z, opts.filter, derive_seed(opts.run_seed(r), &[1])))
            .collect::<Result<_, _>>()?
    };
    for s in &sets {
        if !is_independent(g, s.vertices())? {
            return Err(SolverError::NotIndependent);
        }
    }
    Ok(sets)
}

/// Largest independent set over all runs; ties go to the earliest run.
pub fn solve_mis(g: &Graph, solver: Solver, opts: &SolverOptions) -> Result<MisOutcome, SolverError> {
    let start = Instant::now();
    let sets = mis_runs(g, solver, opts)?;
    let per_run_sizes: Vec<usize> = sets.iter().map(IndependentSet::size).collect();
    let best = (0..sets.len()).max_by(|&a, &b| per_run_sizes[a].cmp(&per_run_sizes[b]).then(b.cmp(&a))).expect("runs ≥ 1");
    Ok(MisOutcome { best: sets[best].clone(), per_run_sizes, elapsed: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{complete, cycle};
    use crate::graph::{gen_er, gen_sk};
    use crate::oracle::{exact_ising_ground, exact_maxcut, exact_mis};

    fn opts(runs: usize) -> SolverOptions {
        SolverOptions { runs, seed: 7, ..Default::default() }
    }

    #[test]
    fn names_round_trip() {
        for s in Solver::ALL {
            assert_eq!(s.name().parse::<Solver>().unwrap(), s);
        }
        assert!("dec".parse::<Solver>().is_err());
    }

    #[test]
    fn every_solver_finds_small_mis() {
        let g = cycle(7);
        for s in Solver::ALL {
            let r = solve_mis(&g, s, &opts(20)).unwrap();
            assert_eq!(r.best.size(), 3, "{s}");
            assert_eq!(r.per_run_sizes.len(), 20);
        }
        assert_eq!(solve_mis(&complete(5), Solver::Sa, &opts(1)).unwrap().best.size(), 1);
    }

    #[test]
    fn two_spin_sk_is_exact() {
        let g = gen_sk(2, 4).unwrap();
        let m = IsingModel::from_couplings_graph(&g);
        let j = g.edges()[0].w;
        for s in [Solver::Sg, Solver::Sg3, Solver::Sec, Solver::Sa, Solver::Rank2] {
            assert_eq!(minimize_ising(&m, s, &opts(1)).unwrap().energy, -j.abs(), "{s}");
        }
    }

    #[test]
    fn heuristics_never_beat_oracles() {
        for seed in 0..4 {
            let g = gen_er(14, 0.3, seed).unwrap();
            let alpha = exact_mis(&g).unwrap().optimum;
            let m = IsingModel::from_couplings_graph(&gen_sk(10, seed).unwrap());
            let ground = exact_ising_ground(&m).unwrap().optimum;
            let c = MaxCutInstance::from_graph(gen_sk(10, seed + 100).unwrap());
            let best_cut = exact_maxcut(&c).unwrap().optimum;
            for s in Solver::ALL {
                assert!(solve_mis(&g, s, &opts(3)).unwrap().best.size() <= alpha);
                if !s.is_mis_greedy() {
                    assert!(minimize_ising(&m, s, &opts(3)).unwrap().energy >= ground - 1e-9);
                    assert!(solve_maxcut(&c, s, &opts(3)).unwrap().weight <= best_cut + 1e-9);
                }
            }
        }
    }

    #[test]
    fn sa_max_cut_reaches_optimum() {
        let c = MaxCutInstance::from_graph(gen_sk(10, 3).unwrap());
        let r = solve_maxcut(&c, Solver::Sa, &opts(8)).unwrap();
        assert!((r.weight - exact_maxcut(&c).unwrap().optimum).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_requests() {
        let m = IsingModel::new(3);
        assert!(matches!(minimize_ising(&m, Solver::Min, &opts(1)), Err(SolverError::Unsupported { .. })));
        assert!(matches!(solve_mis(&cycle(4), Solver::Min, &opts(0)), Err(SolverError::NoRuns)));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = gen_er(40, 0.2, 1).unwrap();
        for s in [Solver::Min, Solver::Sg3, Solver::Sa] {
            let seq = mis_runs(&g, s, &SolverOptions { execution: Execution::Sequential, ..opts(4) }).unwrap();
            let par = mis_runs(&g, s, &SolverOptions { execution: Execution::Parallel, ..opts(4) }).unwrap();
            assert_eq!(seq, par);
        }
    }
}
