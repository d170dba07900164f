//! Maximum independent set as a penalty QUBO/Ising problem, plus decoding
//! and repair of solver output into verified independent sets.
//!
//! The penalty Hamiltonian is `β Σ_E x_i x_j − μ Σ_V x_i`. With `λ = β/μ = 1`
//! its minimum is exactly `−α(G)`, and any selection of energy `E0` can be
//! pruned into an independent set of at least `−E0` vertices.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};
use crate::greedy::{mis_max, mis_min};
use crate::ising::{check_binary, IsingError, IsingModel, Qubo, SpinAssignment};
use crate::rng::rng_from_seed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MisError {
    #[error("MIS encoding needs an unweighted graph")]
    WeightedGraph,
    #[error("penalty ratio must be positive and finite, got {0}")]
    InvalidLambda(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ising(#[from] IsingError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Penalty weights `β` (edge penalty) and `μ` (chemical potential).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisEncoding {
    beta: f64,
    mu: f64,
}

impl Default for MisEncoding {
    fn default() -> Self {
        MisEncoding { beta: 1.0, mu: 1.0 }
    }
}

impl MisEncoding {
    /// `μ = 1`, `β = λ`.
    pub fn with_lambda(lambda: f64) -> Result<Self, MisError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(MisError::InvalidLambda(lambda));
        }
        Ok(MisEncoding { beta: lambda, mu: 1.0 })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.beta / self.mu
    }
}

/// Sorted, duplicate-free vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndependentSet {
    vertices: Vec<VertexId>,
}

impl IndependentSet {
    pub fn from_vertices(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        IndependentSet { vertices }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn to_binary(&self, n: usize) -> Vec<u8> {
        let mut x = vec![0u8; n];
        for &v in &self.vertices {
            x[v] = 1;
        }
        x
    }

    /// `# size k` followed by the ids, one per line.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# size {}", self.size())?;
        for v in &self.vertices {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self, MisError> {
        let mut declared = None;
        let mut vertices = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| MisError::Parse { line: idx + 1, message: e.to_string() })?;
            let t = line.trim();
            if let Some(rest) = t.strip_prefix("# size") {
                declared = Some(rest.trim().parse::<usize>().map_err(|_| MisError::Parse {
                    line: idx + 1,
                    message: format!("bad size header `{t}`"),
                })?);
            } else if !t.is_empty() && !t.starts_with('#') {
                vertices.push(t.parse().map_err(|_| MisError::Parse {
                    line: idx + 1,
                    message: format!("bad vertex id `{t}`"),
                })?);
            }
        }
        let set = IndependentSet::from_vertices(vertices);
        match declared {
            Some(k) if k != set.size() => Err(MisError::Parse {
                line: 1,
                message: format!("header says {k} vertices, found {}", set.size()),
            }),
            _ => Ok(set),
        }
    }
}

/// `Q_ij = β/2` per edge, `Q_ii = −μ`, so `xᵀQx = β|E₁| − μ|V₁|`.
pub fn mis_to_qubo(g: &Graph, params: MisEncoding) -> Result<Qubo, MisError> {
    if !g.is_unweighted() {
        return Err(MisError::WeightedGraph);
    }
    let mut q = Qubo::zeros(g.num_vertices());
    for i in 0..g.num_vertices() {
        q.set_symmetric(i, i, -params.mu)?;
    }
    for e in g.edges() {
        q.set_symmetric(e.u, e.v, params.beta / 2.0)?;
    }
    Ok(q)
}

/// The `λ = 1` Ising form: `J_ij = −¼` per edge, `h_i = ¼(d_i − 2)`,
/// `h0 = ¼(m − 2n)`.
pub fn mis_to_ising(g: &Graph) -> Result<IsingModel, MisError> {
    if !g.is_unweighted() {
        return Err(MisError::WeightedGraph);
    }
    let n = g.num_vertices();
    let mut m = IsingModel::new(n);
    m.set_offset(0.25 * (g.num_edges() as f64 - 2.0 * n as f64));
    for (i, d) in g.degrees().into_iter().enumerate() {
        m.set_field(i, 0.25 * (d as f64 - 2.0))?;
    }
    for e in g.edges() {
        m.add_coupling(e.u, e.v, -0.25)?;
    }
    Ok(m)
}

/// `|E₁| − |V₁|` for the subgraph induced by the selection.
pub fn set_energy(g: &Graph, x: &[u8]) -> Result<i64, MisError> {
    check_binary(x, g.num_vertices())?;
    let selected = x.iter().filter(|&&b| b == 1).count() as i64;
    let induced = g.edges().iter().filter(|e| x[e.u] == 1 && x[e.v] == 1).count() as i64;
    Ok(induced - selected)
}

/// `x = (1 − z)/2`; spin `−1` means selected.
pub fn decode_spins(z: &SpinAssignment) -> Vec<u8> {
    z.as_slice().iter().map(|&s| ((1 - s) / 2) as u8).collect()
}

pub fn is_independent(g: &Graph, set: &[VertexId]) -> Result<bool, MisError> {
    let mut member = vec![false; g.num_vertices()];
    for &v in set {
        g.check_vertex(v)?;
        member[v] = true;
    }
    Ok(set.iter().all(|&v| g.neighbors(v).iter().all(|&(u, _)| !member[u])))
}

/// How an infeasible selection is repaired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneFilter {
    /// Drop a random endpoint of a random remaining induced edge.
    Naive,
    /// Run MIN on the induced subgraph.
    #[default]
    MinFilter,
    /// Run MAX on the induced subgraph.
    MaxFilter,
}

impl FromStr for PruneFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(PruneFilter::Naive),
            "min-filter" | "min" => Ok(PruneFilter::MinFilter),
            "max-filter" | "max" => Ok(PruneFilter::MaxFilter),
            _ => Err(format!("unknown filter `{s}` (naive, min-filter, max-filter)")),
        }
    }
}

impl fmt::Display for PruneFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PruneFilter::Naive => "naive",
            PruneFilter::MinFilter => "min-filter",
            PruneFilter::MaxFilter => "max-filter",
        })
    }
}

/// Shrink an arbitrary selection to an independent set of `g`.
///
/// Only selected vertices are kept or dropped; nothing is added. The result
/// always has at least `−set_energy(g, x)` vertices.
pub fn prune_to_independent(
    g: &Graph,
    x: &[u8],
    filter: PruneFilter,
    seed: u64,
) -> Result<IndependentSet, MisError> {
    check_binary(x, g.num_vertices())?;
    let selected: Vec<VertexId> = (0..g.num_vertices()).filter(|&v| x[v] == 1).collect();
    let set = match filter {
        PruneFilter::Naive => {
            let mut rng = rng_from_seed(seed);
            let mut keep = x.to_vec();
            let mut induced: Vec<(VertexId, VertexId)> =
                g.edges().iter().filter(|e| x[e.u] == 1 && x[e.v] == 1).map(|e| (e.u, e.v)).collect();
            // Visiting a uniformly shuffled list and skipping resolved edges
            // is the same as picking a uniform remaining edge each time.
            induced.shuffle(&mut rng);
            for (u, v) in induced {
                if keep[u] == 1 && keep[v] == 1 {
                    let drop = if rng.random_bool(0.5) { u } else { v };
                    keep[drop] = 0;
                }
            }
            IndependentSet::from_vertices((0..g.num_vertices()).filter(|&v| keep[v] == 1).collect())
        }
        PruneFilter::MinFilter | PruneFilter::MaxFilter => {
            let sub = g.induced_subgraph(&selected);
            let local = if filter == PruneFilter::MinFilter { mis_min(&sub, seed) } else { mis_max(&sub, seed) };
            IndependentSet::from_vertices(local.vertices().iter().map(|&i| selected[i]).collect())
        }
    };
    debug_assert!(is_independent(g, set.vertices()).unwrap_or(false));
    Ok(set)
}

/// Decode spins and repair them into an independent set.
pub fn decode_and_prune(
    g: &Graph,
    z: &SpinAssignment,
    filter: PruneFilter,
    seed: u64,
) -> Result<IndependentSet, MisError> {
    prune_to_independent(g, &decode_spins(z), filter, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::gen_er;
    use crate::ising::qubo_to_ising;
    use proptest::prelude::*;

    fn all_binary(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u32..1 << n).map(move |mask| (0..n).map(|i| (mask >> i & 1) as u8).collect())
    }

    fn qubo_minimizers(q: &Qubo) -> (f64, Vec<Vec<u8>>) {
        let mut best = f64::INFINITY;
        let mut argmin = Vec::new();
        for x in all_binary(q.len()) {
            let v = q.value(&x).unwrap();
            if v < best - 1e-12 {
                best = v;
                argmin = vec![x];
            } else if (v - best).abs() <= 1e-12 {
                argmin.push(x);
            }
        }
        (best, argmin)
    }

    #[test]
    fn empty_graph_selects_everything() {
        let q = mis_to_qubo(&Graph::empty(4), MisEncoding::default()).unwrap();
        assert!(q.diagonal().iter().all(|&d| d == -1.0));
        let (best, argmin) = qubo_minimizers(&q);
        assert_eq!(best, -4.0);
        assert_eq!(argmin, vec![vec![1, 1, 1, 1]]);
    }

    #[test]
    fn single_edge_minimizers_are_singletons() {
        let q = mis_to_qubo(&path(2), MisEncoding::default()).unwrap();
        // states: 00 -> 0, 10 -> -1, 01 -> -1, 11 -> 1 - 2 = -1
        // λ = 1 ties the violating state with the singletons; the value is −1.
        let (best, argmin) = qubo_minimizers(&q);
        assert_eq!(best, -1.0);
        assert_eq!(argmin, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn triangle_with_lambda_two() {
        let q = mis_to_qubo(&complete(3), MisEncoding::with_lambda(2.0).unwrap()).unwrap();
        let (best, argmin) = qubo_minimizers(&q);
        assert_eq!(best, -1.0);
        assert_eq!(argmin.len(), 3);
        assert!(argmin.iter().all(|x| x.iter().map(|&b| b as u32).sum::<u32>() == 1));
        assert_eq!(q.value(&[1, 1, 0]).unwrap(), 0.0);
        assert!(MisEncoding::with_lambda(0.0).is_err());
    }

    #[test]
    fn ising_form_examples() {
        let m = mis_to_ising(&Graph::empty(3)).unwrap();
        assert_eq!(m.energy(&SpinAssignment::new(vec![-1, -1, -1]).unwrap()).unwrap(), -3.0);
        let k3 = mis_to_ising(&complete(3)).unwrap();
        assert_eq!(k3.energy(&SpinAssignment::new(vec![-1, 1, 1]).unwrap()).unwrap(), -1.0);
        let p2 = mis_to_ising(&path(2)).unwrap();
        assert_eq!(p2.energy(&SpinAssignment::new(vec![-1, 1]).unwrap()).unwrap(), -1.0);
        assert_eq!(p2.energy(&SpinAssignment::new(vec![-1, -1]).unwrap()).unwrap(), -1.0);
    }

    #[test]
    fn ising_form_matches_converted_qubo() {
        for seed in 0..200u64 {
            let n = 1 + (seed as usize * 7) % 64;
            let g = gen_er(n, 0.3, seed).unwrap();
            let direct = mis_to_ising(&g).unwrap();
            let via = qubo_to_ising(&mis_to_qubo(&g, MisEncoding::default()).unwrap());
            assert_eq!(direct, via, "seed {seed}");
        }
    }

    #[test]
    fn weighted_graph_rejected() {
        let g = Graph::from_weighted_edges(2, [(0, 1, 2.0)]).unwrap();
        assert_eq!(mis_to_qubo(&g, MisEncoding::default()), Err(MisError::WeightedGraph));
        assert_eq!(mis_to_ising(&g), Err(MisError::WeightedGraph));
    }

    #[test]
    fn set_energy_examples() {
        let k3 = complete(3);
        assert_eq!(set_energy(&k3, &[0, 0, 0]).unwrap(), 0);
        assert_eq!(set_energy(&k3, &[1, 1, 1]).unwrap(), 0);
        let c5 = cycle(5);
        assert_eq!(set_energy(&c5, &[1, 0, 1, 0, 0]).unwrap(), -2);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_spins(&SpinAssignment::new(vec![-1, 1]).unwrap()), vec![1, 0]);
        let x = vec![1u8, 0, 0, 1, 1];
        assert_eq!(decode_spins(&SpinAssignment::from_binary(&x).unwrap()), x);
    }

    #[test]
    fn independence_checks() {
        let k3 = complete(3);
        assert!(is_independent(&k3, &[]).unwrap());
        assert!(!is_independent(&k3, &[0, 2]).unwrap());
        assert!(is_independent(&path(3), &[0, 2]).unwrap());
        assert!(is_independent(&k3, &[3]).is_err());
    }

    #[test]
    fn prune_examples() {
        let p3 = path(3);
        for filter in [PruneFilter::Naive, PruneFilter::MinFilter, PruneFilter::MaxFilter] {
            let s = prune_to_independent(&p3, &[1, 0, 1], filter, 1).unwrap();
            assert_eq!(s.vertices(), &[0, 2]);
        }
        let s = prune_to_independent(&p3, &[1, 1, 1], PruneFilter::MaxFilter, 4).unwrap();
        assert_eq!(s.vertices(), &[0, 2]);
        for filter in [PruneFilter::Naive, PruneFilter::MinFilter, PruneFilter::MaxFilter] {
            let s = prune_to_independent(&complete(3), &[1, 1, 1], filter, 2).unwrap();
            assert_eq!(s.size(), 1);
        }
    }

    #[test]
    fn set_serialization() {
        let s = IndependentSet::from_vertices(vec![5, 1, 3]);
        let mut buf = Vec::new();
        s.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "# size 3\n1\n3\n5\n");
        assert_eq!(IndependentSet::read(buf.as_slice()).unwrap(), s);
        assert!(IndependentSet::read("# size 2\n1\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn prune_respects_energy_bound(n in 1usize..=64, p in 0.0f64..0.8, seed in any::<u64>(), bits in any::<u64>()) {
            let g = gen_er(n, p, seed).unwrap();
            let x: Vec<u8> = (0..n).map(|i| (bits >> i & 1) as u8).collect();
            let bound = -set_energy(&g, &x).unwrap();
            for filter in [PruneFilter::Naive, PruneFilter::MinFilter, PruneFilter::MaxFilter] {
                let s = prune_to_independent(&g, &x, filter, seed).unwrap();
                prop_assert!(is_independent(&g, s.vertices()).unwrap());
                prop_assert!(s.size() as i64 >= bound);
                prop_assert!(s.vertices().iter().all(|&v| x[v] == 1));
            }
        }
    }
}
