//! Rank-2 (circle) relaxation for Max-Cut in the spirit of CirCut.
//!
//! Every vertex gets an angle `θ_i`; the relaxed objective is
//! `f(θ) = Σ_{ij} w_ij (1 − cos(θ_i − θ_j)) / 2`, which upper-bounds the cut
//! of any partition obtained by slicing the circle in half. Angles are
//! improved by exact coordinate maximization, then the best half-circle cut
//! is extracted and polished by single-vertex moves.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::ising::{CutPartition, MaxCutInstance, Side};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Rank2Error {
    #[error("invalid rank-2 parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Rank2Params {
    pub max_iters: usize,
    pub grad_tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for Rank2Params {
    fn default() -> Self {
        Rank2Params { max_iters: 500, grad_tolerance: 1e-6, restarts: 1, seed: 0, execution: Execution::Parallel }
    }
}

impl Rank2Params {
    fn validate(&self) -> Result<(), Rank2Error> {
        if self.max_iters == 0 || self.restarts == 0 {
            return Err(Rank2Error::InvalidParams("max_iters and restarts must be positive".into()));
        }
        if !(self.grad_tolerance > 0.0 && self.grad_tolerance.is_finite()) {
            return Err(Rank2Error::InvalidParams("grad_tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Angles reduced to `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleVector(Vec<f64>);

impl AngleVector {
    pub fn new(theta: Vec<f64>) -> Self {
        AngleVector(theta.into_iter().map(|t| t.rem_euclid(TAU)).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `vertex,theta` rows for debugging.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("vertex,theta\n");
        for (i, t) in self.0.iter().enumerate() {
            s.push_str(&format!("{i},{t:?}\n"));
        }
        s
    }
}

/// `Σ_{ij} w_ij (1 − cos(θ_i − θ_j)) / 2`.
pub fn relaxation_value(c: &MaxCutInstance, theta: &AngleVector) -> f64 {
    let t = theta.as_slice();
    c.graph().edges().iter().map(|e| e.w * (1.0 - (t[e.u] - t[e.v]).cos()) / 2.0).sum()
}

/// Set `θ_i` to its best value with all other angles fixed and return how
/// far it moved along the circle.
pub(crate) fn coordinate_update(c: &MaxCutInstance, theta: &mut [f64], i: usize) -> f64 {
    let (mut a, mut b) = (0.0, 0.0);
    for &(j, w) in c.graph().neighbors(i) {
        a += w * theta[j].cos();
        b += w * theta[j].sin();
    }
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    // maximizing −(a cos θ + b sin θ) puts θ opposite the resultant (a, b)
    let next = (b.atan2(a) + PI).rem_euclid(TAU);
    let current = theta[i];
    let value = |t: f64| -(a * t.cos() + b * t.sin());
    if value(next) <= value(current) {
        return 0.0;
    }
    theta[i] = next;
    let d = (next - current).rem_euclid(TAU);
    d.min(TAU - d)
}

fn relax_from(c: &MaxCutInstance, mut theta: Vec<f64>, max_iters: usize, tol: f64) -> AngleVector {
    for _ in 0..max_iters {
        let mut largest = 0.0f64;
        for i in 0..theta.len() {
            largest = largest.max(coordinate_update(c, &mut theta, i));
        }
        if largest <= tol {
            break;
        }
    }
    AngleVector::new(theta)
}

fn random_angles(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| rng.random_range(0.0..TAU)).collect()
}

/// Locally maximize the circle relaxation from `restarts` random starts and
/// return the angles with the largest relaxed value.
pub fn relax_angles(c: &MaxCutInstance, p: &Rank2Params) -> Result<AngleVector, Rank2Error> {
    p.validate()?;
    let starts: Vec<usize> = (0..p.restarts).collect();
    let runs = p.execution.map(starts, |r| {
        let theta = random_angles(c.num_vertices(), derive_seed(p.seed, &[r as u64]));
        let a = relax_from(c, theta, p.max_iters, p.grad_tolerance);
        (relaxation_value(c, &a), a)
    });
    Ok(runs
        .into_iter()
        .reduce(|best, next| if next.0 > best.0 { next } else { best })
        .map(|(_, a)| a)
        .expect("at least one restart"))
}

/// Cut with incrementally maintained flip gains.
struct LiveCut<'c> {
    c: &'c MaxCutInstance,
    sides: Vec<Side>,
    gain: Vec<f64>,
    value: f64,
}

impl<'c> LiveCut<'c> {
    fn new(c: &'c MaxCutInstance, sides: Vec<Side>) -> Self {
        let mut gain = vec![0.0; sides.len()];
        let mut value = 0.0;
        for e in c.graph().edges() {
            if sides[e.u] != sides[e.v] {
                value += e.w;
                gain[e.u] -= e.w;
                gain[e.v] -= e.w;
            } else {
                gain[e.u] += e.w;
                gain[e.v] += e.w;
            }
        }
        LiveCut { c, sides, gain, value }
    }

    fn flip(&mut self, v: usize) {
        self.value += self.gain[v];
        self.gain[v] = -self.gain[v];
        self.sides[v] = self.sides[v].opposite();
        for &(u, w) in self.c.graph().neighbors(v) {
            if self.sides[u] == self.sides[v] {
                self.gain[u] += 2.0 * w;
            } else {
                self.gain[u] -= 2.0 * w;
            }
        }
    }

    /// Flip single vertices while any flip improves the cut.
    fn polish(&mut self) {
        let eps = 1e-12 * (1.0 + self.c.graph().edges().iter().map(|e| e.w.abs()).sum::<f64>());
        loop {
            let mut improved = false;
            for v in 0..self.sides.len() {
                if self.gain[v] > eps {
                    self.flip(v);
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
    }
}

fn half_circle_side(theta: f64, gamma: f64) -> Side {
    if (theta - gamma).rem_euclid(TAU) < PI {
        Side::V1
    } else {
        Side::V2
    }
}

/// Best cut `[γ, γ+π)` versus the rest over the cutting angles `γ ∈ {θ_i, θ_i+π}`,
/// followed by single-vertex improvement.
pub fn best_angular_cut(c: &MaxCutInstance, a: &AngleVector) -> CutPartition {
    let t = a.as_slice();
    let n = t.len();
    if n == 0 {
        return CutPartition::new(Vec::new());
    }
    let mut gammas: Vec<f64> = t.iter().flat_map(|&x| [x, (x + PI).rem_euclid(TAU)]).collect();
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();

    let mut live = LiveCut::new(c, t.iter().map(|&x| half_circle_side(x, gammas[0])).collect());
    let mut best_value = live.value;
    let mut best_sides = live.sides.clone();
    for &gamma in &gammas[1..] {
        for (v, &theta) in t.iter().enumerate() {
            if half_circle_side(theta, gamma) != live.sides[v] {
                live.flip(v);
            }
        }
        if live.value > best_value {
            best_value = live.value;
            best_sides.clone_from(&live.sides);
        }
    }
    let mut polished = LiveCut::new(c, best_sides);
    polished.polish();
    let p = CutPartition::new(polished.sides);
    if c.has_auxiliary_vertex() {
        p.normalized()
    } else {
        p
    }
}

#[derive(Debug, Clone)]
pub struct Rank2Result {
    pub partition: CutPartition,
    pub cut_value: f64,
    pub relaxation_value: f64,
    pub angles: AngleVector,
}

/// Relax, extract and polish from each restart; keep the best cut.
pub fn solve_rank2(c: &MaxCutInstance, p: &Rank2Params) -> Result<Rank2Result, Rank2Error> {
    p.validate()?;
    let starts: Vec<usize> = (0..p.restarts).collect();
    let runs = p.execution.map(starts, |r| {
        let theta = random_angles(c.num_vertices(), derive_seed(p.seed, &[r as u64]));
        let angles = relax_from(c, theta, p.max_iters, p.grad_tolerance);
        let partition = best_angular_cut(c, &angles);
        let cut_value = crate::ising::cut_weight(c, &partition).expect("partition sized to instance");
        Rank2Result { relaxation_value: relaxation_value(c, &angles), partition, cut_value, angles }
    });
    Ok(runs
        .into_iter()
        .reduce(|best, next| if next.cut_value > best.cut_value { next } else { best })
        .expect("at least one restart"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use crate::graph::{gen_sk, Graph};
    use crate::ising::cut_weight;
    use proptest::prelude::*;

    fn instance(n: usize, edges: &[(usize, usize, f64)]) -> MaxCutInstance {
        MaxCutInstance::from_graph(Graph::from_weighted_edges(n, edges.iter().copied()).unwrap())
    }

    fn gap(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    fn brute_max_cut(c: &MaxCutInstance) -> f64 {
        let n = c.num_vertices();
        (0u32..1 << n.saturating_sub(1))
            .map(|mask| {
                let sides = (0..n).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { Side::V2 } else { Side::V1 }).collect();
                cut_weight(c, &CutPartition::new(sides)).unwrap()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn k2_goes_antipodal_or_aligned() {
        let p = Rank2Params { seed: 3, ..Default::default() };
        let pos = instance(2, &[(0, 1, 2.0)]);
        let a = relax_angles(&pos, &p).unwrap();
        assert!((gap(a.as_slice()[0], a.as_slice()[1]) - PI).abs() < 1e-9);
        assert_eq!(cut_weight(&pos, &best_angular_cut(&pos, &a)).unwrap(), 2.0);
        let neg = instance(2, &[(0, 1, -2.0)]);
        let a = relax_angles(&neg, &p).unwrap();
        assert!(gap(a.as_slice()[0], a.as_slice()[1]) < 1e-9);
    }

    #[test]
    fn triangle_relaxation() {
        let tri = instance(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
        let p = Rank2Params { max_iters: 10_000, grad_tolerance: 1e-12, seed: 1, ..Default::default() };
        let a = relax_angles(&tri, &p).unwrap();
        let t = a.as_slice();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!((gap(t[i], t[j]) - TAU / 3.0).abs() < 1e-5, "gap {}", gap(t[i], t[j]));
        }
        assert!((relaxation_value(&tri, &a) - 2.25).abs() < 1e-9);
        let exact = AngleVector::new(vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0]);
        assert_eq!(cut_weight(&tri, &best_angular_cut(&tri, &exact)).unwrap(), 2.0);
    }

    #[test]
    fn coordinate_updates_never_decrease_objective() {
        let c = MaxCutInstance::from_graph(gen_sk(30, 2).unwrap());
        let mut theta = random_angles(30, 9);
        let mut last = relaxation_value(&c, &AngleVector::new(theta.clone()));
        for _ in 0..20 {
            for i in 0..30 {
                coordinate_update(&c, &mut theta, i);
                let now = relaxation_value(&c, &AngleVector::new(theta.clone()));
                assert!(now >= last - 1e-9, "{now} < {last}");
                last = now;
            }
        }
    }

    #[test]
    fn angle_csv_dump() {
        let a = AngleVector::new(vec![-PI / 2.0, 7.0]);
        assert!(a.as_slice().iter().all(|&t| (0.0..TAU).contains(&t)));
        assert!(a.to_csv().starts_with("vertex,theta\n0,"));
    }

    #[test]
    fn rejects_zero_restarts() {
        let c = instance(2, &[(0, 1, 1.0)]);
        assert!(solve_rank2(&c, &Rank2Params { restarts: 0, ..Default::default() }).is_err());
    }

    proptest! {
        #[test]
        fn extracted_cut_is_bracketed(n in 2usize..=12, seed in any::<u64>(), pseed in any::<u64>()) {
            let c = MaxCutInstance::from_graph(gen_sk(n, seed).unwrap());
            let r = solve_rank2(&c, &Rank2Params { seed: pseed, ..Default::default() }).unwrap();
            let exact = brute_max_cut(&c);
            prop_assert!(r.cut_value <= exact + 1e-9);
            let mut rng = rng_from_seed(pseed);
            let random = CutPartition::new((0..n).map(|_| if rng.random_bool(0.5) { Side::V1 } else { Side::V2 }).collect());
            let random_value = cut_weight(&c, &random).unwrap();
            prop_assert!(r.cut_value >= random_value.min(0.0) - 1e-9);
        }
    }
}
