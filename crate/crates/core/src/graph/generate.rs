use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Edge, Graph, GraphError};
use crate::rng::rng_from_seed;

/// Restart cap for [`gen_regular`].
pub const REGULAR_MAX_RESTARTS: usize = 1000;

/// Random picks tried before falling back to enumerating the admissible
/// stub pairs that are left.
const PAIRING_PICKS: usize = 64;

/// Erdős–Rényi `G(n, p)` with unit weights. Pairs are visited in ascending
/// `(u, v)` order, one Bernoulli draw each.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push(Edge { u, v, w: 1.0 });
            }
        }
    }
    Ok(Graph::assemble(n, edges))
}

/// Sherrington–Kirkpatrick instance: complete graph whose weights are i.i.d.
/// standard normals (ziggurat sampling), drawn in ascending `(u, v)` order.
pub fn gen_sk(n: usize, seed: u64) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(GraphError::TooFewVertices(1));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            let w: f64 = StandardNormal.sample(&mut rng);
            edges.push(Edge { u, v, w });
        }
    }
    Ok(Graph::assemble(n, edges))
}

/// Random `d`-regular graph from the pairing model.
///
/// Stubs are matched one pair at a time; a pair that would close a loop or
/// repeat an edge is redrawn. When no admissible pair remains the whole
/// pairing restarts, up to [`REGULAR_MAX_RESTARTS`] times.
pub fn gen_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if (n * d) % 2 == 1 || (d >= n && !(n == 0 || d == 0)) {
        return Err(GraphError::InfeasibleDegree { n, d });
    }
    let mut rng = rng_from_seed(seed);
    'restart: for _ in 0..REGULAR_MAX_RESTARTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
        let mut edges = Vec::with_capacity(n * d / 2);
        let admissible = |a: usize, b: usize, present: &HashSet<(usize, usize)>| {
            a != b && !present.contains(&(a.min(b), a.max(b)))
        };
        while !stubs.is_empty() {
            let mut chosen = None;
            for _ in 0..PAIRING_PICKS {
                let i = rng.random_range(0..stubs.len());
                let j = rng.random_range(0..stubs.len());
                if i != j && admissible(stubs[i], stubs[j], &present) {
                    chosen = Some((i, j));
                    break;
                }
            }
            if chosen.is_none() {
                let mut options = Vec::new();
                for i in 0..stubs.len() {
                    for j in i + 1..stubs.len() {
                        if admissible(stubs[i], stubs[j], &present) {
                            options.push((i, j));
                        }
                    }
                }
                if options.is_empty() {
                    continue 'restart;
                }
                chosen = Some(options[rng.random_range(0..options.len())]);
            }
            let (i, j) = chosen.expect("pair chosen above");
            let (a, b) = (stubs[i], stubs[j]);
            stubs.swap_remove(i.max(j));
            stubs.swap_remove(i.min(j));
            let (u, v) = (a.min(b), a.max(b));
            present.insert((u, v));
            edges.push(Edge { u, v, w: 1.0 });
        }
        return Ok(Graph::assemble(n, edges));
    }
    Err(GraphError::RestartsExceeded(REGULAR_MAX_RESTARTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};

    fn edge_hash(g: &Graph) -> u64 {
        let mut h = DefaultHasher::new();
        for e in g.edges() {
            (e.u, e.v, e.w.to_bits()).hash(&mut h);
        }
        h.finish()
    }

    fn assert_consistent(g: &Graph) {
        let mut seen = HashSet::new();
        for e in g.edges() {
            assert!(e.u < e.v && e.v < g.num_vertices());
            assert!(seen.insert((e.u, e.v)));
        }
        let adj_total: usize = (0..g.num_vertices()).map(|v| g.neighbors(v).len()).sum();
        assert_eq!(adj_total, 2 * g.num_edges());
        for e in g.edges() {
            assert!(g.neighbors(e.u).contains(&(e.v, e.w)));
            assert!(g.neighbors(e.v).contains(&(e.u, e.w)));
        }
    }

    #[test]
    fn er_extremes() {
        assert_eq!(gen_er(4, 0.0, 9).unwrap().num_edges(), 0);
        assert_eq!(gen_er(4, 1.0, 9).unwrap().num_edges(), 6);
        assert_eq!(gen_er(4, 1.5, 9), Err(GraphError::InvalidProbability(1.5)));
        assert!(gen_er(4, f64::NAN, 9).is_err());
    }

    #[test]
    fn er_edge_count_matches_binomial() {
        // m ~ Binomial(N, 1/2) with N = n(n-1)/2 = 499500: mean 249750, sd ~353.4.
        let n = 1000;
        let pairs = (n * (n - 1) / 2) as f64;
        let sd_single = (pairs * 0.25).sqrt();
        let seeds = 500u64;
        let mean = (0..seeds).map(|s| gen_er(n, 0.5, s).unwrap().num_edges() as f64).sum::<f64>()
            / seeds as f64;
        let sd_mean = sd_single / (seeds as f64).sqrt();
        assert!((mean - 249750.0).abs() < 3.0 * sd_mean, "mean {mean}");
    }

    #[test]
    fn er_avg_degree_near_expectation() {
        let seeds = 100u64;
        let mean = (0..seeds).map(|s| gen_er(400, 0.05, s).unwrap().avg_degree()).sum::<f64>()
            / seeds as f64;
        assert!((mean - 19.95).abs() <= 0.5, "mean degree {mean}");
    }

    #[test]
    fn generators_are_deterministic_and_seed_sensitive() {
        assert_eq!(gen_er(60, 0.3, 5).unwrap(), gen_er(60, 0.3, 5).unwrap());
        assert_eq!(gen_sk(100, 5).unwrap(), gen_sk(100, 5).unwrap());
        assert_eq!(gen_regular(30, 4, 5).unwrap(), gen_regular(30, 4, 5).unwrap());
        let mut differing = 0;
        for s in 0..100u64 {
            if edge_hash(&gen_er(40, 0.5, s).unwrap()) != edge_hash(&gen_er(40, 0.5, s + 1000).unwrap()) {
                differing += 1;
            }
        }
        assert!(differing >= 99);
    }

    #[test]
    fn sk_structure_and_moments() {
        let g = gen_sk(2, 11).unwrap();
        assert_eq!(g.num_edges(), 1);
        let first: f64 = StandardNormal.sample(&mut rng_from_seed(11));
        assert_eq!(g.edges()[0].w, first);

        let weights: Vec<f64> = (0..40u64)
            .flat_map(|s| gen_sk(100, s).unwrap().edges().iter().map(|e| e.w).collect::<Vec<_>>())
            .collect();
        let k = weights.len() as f64;
        let mean = weights.iter().sum::<f64>() / k;
        let var = weights.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (k - 1.0);
        // se(mean) = 1/sqrt(k); se(var) = sqrt(2/(k-1)) for normal data.
        assert!(mean.abs() < 3.0 / k.sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 3.0 * (2.0 / (k - 1.0)).sqrt(), "var {var}");
        assert_eq!(gen_sk(0, 1), Err(GraphError::TooFewVertices(1)));
    }

    #[test]
    fn regular_small_cases() {
        let k4 = gen_regular(4, 3, 2).unwrap();
        assert_eq!(k4.num_edges(), 6);
        for s in 0..20 {
            let g = gen_regular(6, 2, s).unwrap();
            assert_consistent(&g);
            assert!(g.degrees().iter().all(|&d| d == 2));
            assert_eq!(g.num_edges(), 6);
        }
        assert_eq!(gen_regular(5, 3, 0), Err(GraphError::InfeasibleDegree { n: 5, d: 3 }));
        assert!(gen_regular(4, 4, 0).is_err());
    }

    #[test]
    fn regular_dense_case() {
        let g = gen_regular(400, 20, 3).unwrap();
        assert_consistent(&g);
        assert!(g.degrees().iter().all(|&d| d == 20));
    }

    #[test]
    fn generator_outputs_are_consistent() {
        for s in 0..5 {
            assert_consistent(&gen_er(50, 0.2, s).unwrap());
            assert_consistent(&gen_sk(20, s).unwrap());
            assert_consistent(&gen_regular(50, 6 + s as usize % 2, s).unwrap());
        }
    }
}
