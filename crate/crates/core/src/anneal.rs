//! Metropolis simulated annealing on Ising models.
//!
//! Each read starts from uniformly random spins and performs `num_sweeps`
//! sweeps. A sweep proposes one single-spin flip per spin; the flip of spin
//! `i` changes the energy by `ΔE = 2 z_i f_i` where `f_i = h_i + Σ_j J_ij z_j`
//! is its local field, and is accepted when `ΔE ≤ 0` or with probability
//! `exp(−β ΔE)`. `β` moves from `beta_hot` to `beta_cold` over the sweeps.
//!
//! Reads use seeds derived from `(seed, read index)`, so they can run in
//! parallel and the result does not depend on the execution order.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::ising::{CouplingTable, IsingError, IsingModel, SpinAssignment};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnealError {
    #[error("invalid annealing parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Ising(#[from] IsingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaSchedule {
    #[default]
    Geometric,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepOrder {
    /// Spins visited in index order.
    #[default]
    Sequential,
    /// A fresh random permutation every sweep.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealParams {
    pub num_sweeps: usize,
    pub num_reads: usize,
    pub schedule: BetaSchedule,
    /// `(beta_hot, beta_cold)`; derived from the model when absent.
    pub beta_range: Option<(f64, f64)>,
    pub seed: u64,
    pub order: SweepOrder,
    pub execution: Execution,
    /// Record the energy every this many sweeps.
    pub trace_stride: Option<usize>,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            num_sweeps: 1000,
            num_reads: 1,
            schedule: BetaSchedule::Geometric,
            beta_range: None,
            seed: 0,
            order: SweepOrder::Sequential,
            execution: Execution::Parallel,
            trace_stride: None,
        }
    }
}

impl AnnealParams {
    pub fn with_sweeps(num_sweeps: usize, seed: u64) -> Self {
        AnnealParams { num_sweeps, seed, ..Default::default() }
    }

    fn validate(&self) -> Result<(), AnnealError> {
        if self.num_sweeps == 0 {
            return Err(AnnealError::InvalidParams("num_sweeps must be at least 1".into()));
        }
        if self.num_reads == 0 {
            return Err(AnnealError::InvalidParams("num_reads must be at least 1".into()));
        }
        if self.trace_stride == Some(0) {
            return Err(AnnealError::InvalidParams("trace stride must be positive".into()));
        }
        if let Some((hot, cold)) = self.beta_range {
            if !(hot.is_finite() && cold.is_finite() && hot > 0.0 && hot < cold) {
                return Err(AnnealError::InvalidParams(format!(
                    "need 0 < beta_hot < beta_cold, got ({hot}, {cold})"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyCheckpoint {
    pub read: usize,
    pub sweep: usize,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct AnnealResult {
    pub best_spins: SpinAssignment,
    pub best_energy: f64,
    /// Final energy of every read, in read order.
    pub per_read_energies: Vec<f64>,
    /// Final spins of every read, in read order.
    pub per_read_spins: Vec<SpinAssignment>,
    pub trace: Vec<EnergyCheckpoint>,
    pub elapsed: Duration,
}

/// `(beta_hot, beta_cold) = (ln 2 / ΔE_max, ln 1000 / c_min)`, with `ΔE_max`
/// the largest single-flip energy change bound `max_i 2(|h_i| + Σ_j |J_ij|)`
/// and `c_min` the smallest nonzero coefficient magnitude.
pub fn default_beta_range(m: &IsingModel) -> (f64, f64) {
    let mut bound: Vec<f64> = m.fields().iter().map(|h| h.abs()).collect();
    let mut smallest = f64::INFINITY;
    for h in m.fields().iter().filter(|h| **h != 0.0) {
        smallest = smallest.min(h.abs());
    }
    for (i, j, v) in m.couplings() {
        bound[i] += v.abs();
        bound[j] += v.abs();
        smallest = smallest.min(v.abs());
    }
    let max_delta = 2.0 * bound.iter().copied().fold(0.0, f64::max);
    if max_delta == 0.0 || !smallest.is_finite() {
        return (0.1, 1.0);
    }
    ((2.0f64).ln() / max_delta, (1000.0f64).ln() / smallest)
}

/// Inverse temperature of sweep `k` out of `total`.
pub fn beta_at(schedule: BetaSchedule, (hot, cold): (f64, f64), k: usize, total: usize) -> f64 {
    if total <= 1 {
        return cold;
    }
    let t = k as f64 / (total - 1) as f64;
    match schedule {
        BetaSchedule::Geometric => hot * (cold / hot).powf(t),
        BetaSchedule::Linear => hot + (cold - hot) * t,
    }
}

/// Local field `f_i = h_i + Σ_j J_ij z_j`; flipping `z_i` changes the energy
/// by `2 z_i f_i`.
pub fn local_field(m: &IsingModel, z: &SpinAssignment, i: usize) -> Result<f64, IsingError> {
    if z.len() != m.len() {
        return Err(IsingError::DimensionMismatch { expected: m.len(), got: z.len() });
    }
    if i >= m.len() {
        return Err(IsingError::IndexOutOfRange { index: i, n: m.len() });
    }
    let s = z.as_slice();
    let coupled: f64 = m
        .couplings()
        .filter_map(|(a, b, v)| match (a == i, b == i) {
            (true, _) => Some(v * s[b] as f64),
            (_, true) => Some(v * s[a] as f64),
            _ => None,
        })
        .sum();
    Ok(m.fields()[i] + coupled)
}

/// Probability floor below which a flip is rejected without a draw:
/// `exp(−40)` is under the resolution of a uniform `f64`.
const MAX_EXPONENT: f64 = 40.0;

struct ReadOutcome {
    spins: SpinAssignment,
    energy: f64,
    trace: Vec<EnergyCheckpoint>,
}

fn run_read(
    m: &IsingModel,
    table: &CouplingTable,
    params: &AnnealParams,
    betas: &[f64],
    read: usize,
) -> ReadOutcome {
    let n = m.len();
    let mut rng = rng_from_seed(derive_seed(params.seed, &[read as u64]));
    let mut z: Vec<i8> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
    let mut field: Vec<f64> = m.fields().to_vec();
    for (i, f) in field.iter_mut().enumerate() {
        let (nbrs, weights) = table.row(i);
        *f += nbrs.iter().zip(weights).map(|(&j, &w)| w * z[j as usize] as f64).sum::<f64>();
    }
    let mut energy = m.energy(&SpinAssignment::from_raw(z.clone())).expect("dimensions match");
    let mut order: Vec<usize> = (0..n).collect();
    let mut trace = Vec::new();

    for (sweep, &beta) in betas.iter().enumerate() {
        if params.order == SweepOrder::Random {
            order.shuffle(&mut rng);
        }
        for &i in &order {
            let delta = 2.0 * z[i] as f64 * field[i];
            let accept = if delta <= 0.0 {
                true
            } else {
                let x = beta * delta;
                x < MAX_EXPONENT && rng.random::<f64>() < (-x).exp()
            };
            if accept {
                z[i] = -z[i];
                energy += delta;
                let step = 2.0 * z[i] as f64;
                let (nbrs, weights) = table.row(i);
                for (&j, &w) in nbrs.iter().zip(weights) {
                    field[j as usize] += w * step;
                }
            }
        }
        if let Some(stride) = params.trace_stride {
            if (sweep + 1) % stride == 0 {
                trace.push(EnergyCheckpoint { read, sweep: sweep + 1, energy });
            }
        }
    }
    let spins = SpinAssignment::from_raw(z);
    // report the exactly re-evaluated energy, not the running sum
    let energy = m.energy(&spins).expect("dimensions match");
    ReadOutcome { spins, energy, trace }
}

pub fn simulated_annealing(m: &IsingModel, params: &AnnealParams) -> Result<AnnealResult, AnnealError> {
    params.validate()?;
    let start = Instant::now();
    let range = params.beta_range.unwrap_or_else(|| default_beta_range(m));
    let betas: Vec<f64> =
        (0..params.num_sweeps).map(|k| beta_at(params.schedule, range, k, params.num_sweeps)).collect();
    let table = m.coupling_table();
    let reads: Vec<usize> = (0..params.num_reads).collect();
    let outcomes = params.execution.map(reads, |r| run_read(m, &table, params, &betas, r));

    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.energy.total_cmp(&b.energy).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .expect("at least one read");
    let per_read_energies = outcomes.iter().map(|o| o.energy).collect();
    let trace = outcomes.iter().flat_map(|o| o.trace.iter().copied()).collect();
    let best_energy = outcomes[best].energy;
    let best_spins = outcomes[best].spins.clone();
    let per_read_spins = outcomes.into_iter().map(|o| o.spins).collect();
    Ok(AnnealResult {
        best_spins,
        best_energy,
        per_read_energies,
        per_read_spins,
        trace,
        elapsed: start.elapsed(),
    })
}
