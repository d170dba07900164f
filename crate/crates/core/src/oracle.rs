//! Exact solvers for small instances, used to check the heuristics.
//!
//! All three report the lexicographically smallest witness among optimal
//! solutions, so results do not depend on search order.

use thiserror::Error;

use crate::graph::Graph;
use crate::ising::{cut_weight, CutPartition, IsingError, IsingModel, MaxCutInstance, Side, SpinAssignment};
use crate::mis::IndependentSet;

pub const MIS_MAX_VERTICES: usize = 64;
pub const ENUMERATION_MAX_VERTICES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{n} vertices exceed the exact-solver limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Ising(#[from] IsingError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult<W: Witness> {
    pub optimum: W::Value,
    pub witness: W,
    pub nodes_explored: u64,
}

/// Objective type attached to each witness kind.
pub trait Witness {
    type Value: std::fmt::Debug + Clone + PartialEq;
}

impl Witness for IndependentSet {
    type Value = usize;
}

impl Witness for CutPartition {
    type Value = f64;
}

impl Witness for SpinAssignment {
    type Value = f64;
}

fn check_size(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::TooLarge { n, limit })
    } else {
        Ok(())
    }
}

/// Branch and bound over bitmasks with a greedy clique-cover bound.
struct MisSearch {
    adj: Vec<u64>,
    nodes: u64,
}

impl MisSearch {
    fn new(g: &Graph) -> Self {
        let mut adj = vec![0u64; g.num_vertices()];
        for e in g.edges() {
            adj[e.u] |= 1 << e.v;
            adj[e.v] |= 1 << e.u;
        }
        MisSearch { adj, nodes: 0 }
    }

    /// Size of a largest independent set inside `p`.
    fn alpha(&mut self, p: u64) -> usize {
        let mut best = 0;
        self.expand(p, 0, &mut best);
        best
    }

    /// Whether `p` holds an independent set of `target` vertices.
    fn reaches(&mut self, p: u64, target: usize) -> bool {
        if target == 0 {
            return true;
        }
        let mut best = target - 1;
        self.expand(p, 0, &mut best);
        best >= target
    }

    fn expand(&mut self, mut p: u64, size: usize, best: &mut usize) {
        self.nodes += 1;
        if p == 0 {
            *best = (*best).max(size);
            return;
        }
        // partition p into cliques of G; each clique contributes at most one vertex
        let mut order = Vec::with_capacity(p.count_ones() as usize);
        let mut rest = p;
        let mut cliques = 0;
        while rest != 0 {
            cliques += 1;
            let mut cand = rest;
            while cand != 0 {
                let v = cand.trailing_zeros() as usize;
                rest &= !(1 << v);
                cand &= self.adj[v];
                order.push((v, cliques));
            }
        }
        for &(v, bound) in order.iter().rev() {
            if size + bound <= *best {
                return;
            }
            self.expand(p & !self.adj[v] & !(1 << v), size + 1, best);
            p &= !(1 << v);
        }
    }
}

/// Maximum independent set by branch and bound.
pub fn exact_mis(g: &Graph) -> Result<ExactResult<IndependentSet>, OracleError> {
    let n = g.num_vertices();
    check_size(n, MIS_MAX_VERTICES)?;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = MisSearch::new(g);
    let alpha = search.alpha(all);

    // commit to the smallest vertex that still admits an optimal completion
    let mut cand = all;
    let mut need = alpha;
    let mut chosen = Vec::with_capacity(alpha);
    while need > 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= !(1 << v);
        let after = cand & !search.adj[v];
        if search.reaches(after, need - 1) {
            chosen.push(v);
            cand = after;
            need -= 1;
        }
    }
    Ok(ExactResult {
        optimum: alpha,
        witness: IndependentSet::from_vertices(chosen),
        nodes_explored: search.nodes,
    })
}

fn mask_sides(n: usize, mask: u64) -> Vec<Side> {
    (0..n).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { Side::V2 } else { Side::V1 }).collect()
}

/// Orders partitions by their side vectors with `V1` before `V2`.
fn side_key(n: usize, mask: u64) -> Vec<u8> {
    mask_sides(n, mask).into_iter().map(|s| (s == Side::V2) as u8).collect()
}

fn tolerance(weights: impl Iterator<Item = f64>) -> f64 {
    1e-9 * (1.0 + weights.map(f64::abs).sum::<f64>())
}

/// Maximum cut over all `2^(n−1)` partitions with vertex 0 fixed in `V1`.
pub fn exact_maxcut(c: &MaxCutInstance) -> Result<ExactResult<CutPartition>, OracleError> {
    let n = c.num_vertices();
    check_size(n, ENUMERATION_MAX_VERTICES)?;
    let g = c.graph();
    let tol = tolerance(g.edges().iter().map(|e| e.w));
    if n <= 1 {
        let p = CutPartition::new(vec![Side::V1; n]);
        return Ok(ExactResult { optimum: 0.0, witness: p, nodes_explored: 1 });
    }
    let mut sides = vec![Side::V1; n];
    let mut value = 0.0;
    let mut best = (0.0, 0u64);
    let mut mask = 0u64;
    let total = 1u64 << (n - 1);
    for k in 1..total {
        let v = k.trailing_zeros() as usize + 1;
        let mut delta = 0.0;
        for &(u, w) in g.neighbors(v) {
            delta += if sides[u] == sides[v] { w } else { -w };
        }
        value += delta;
        sides[v] = sides[v].opposite();
        mask ^= 1 << (v - 1);
        if value > best.0 + tol || (value >= best.0 - tol && side_key(n, mask) < side_key(n, best.1)) {
            best = (best.0.max(value), mask);
        }
    }
    let witness = CutPartition::new(mask_sides(n, best.1));
    let optimum = cut_weight(c, &witness)?;
    Ok(ExactResult { optimum, witness, nodes_explored: total })
}

/// Ground state of an Ising model over all `2^n` spin assignments.
pub fn exact_ising_ground(m: &IsingModel) -> Result<ExactResult<SpinAssignment>, OracleError> {
    let n = m.len();
    check_size(n, ENUMERATION_MAX_VERTICES)?;
    let table = m.coupling_table();
    let tol = tolerance(m.fields().iter().copied().chain(m.couplings().map(|(_, _, j)| j)));
    let mut z = vec![-1i8; n];
    let spins = |mask: u64| -> Vec<i8> { (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect() };
    let mut energy = m.energy(&SpinAssignment::new(z.clone())?)?;
    let mut best = (energy, 0u64);
    let mut mask = 0u64;
    let total = 1u64 << n;
    for k in 1..total {
        let i = k.trailing_zeros() as usize;
        let (cols, vals) = table.row(i);
        let mut field = m.fields()[i];
        for (&j, &v) in cols.iter().zip(vals) {
            field += v * z[j as usize] as f64;
        }
        energy += 2.0 * z[i] as f64 * field;
        z[i] = -z[i];
        mask ^= 1 << i;
        if energy < best.0 - tol || (energy <= best.0 + tol && spins(mask) < spins(best.1)) {
            best = (best.0.min(energy), mask);
        }
    }
    let witness = SpinAssignment::new(spins(best.1))?;
    let optimum = m.energy(&witness)?;
    Ok(ExactResult { optimum, witness, nodes_explored: total })
}
