//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use mis_ising::graph::{gen_er, Graph};
use mis_ising::harness::{
    formula_r, formula_sparse_density, run_coding, run_er_dense, run_er_sparse, run_sk, Experiment,
    ExperimentConfig, ExperimentOutput, SolverSpec,
};
use mis_ising::ising::{embed_maxcut, ising_spins_from_embedded_cut, qubo_to_ising, IsingModel, Qubo};
use mis_ising::mis::{mis_to_qubo, prune_to_independent, MisEncoding, PruneFilter};
use mis_ising::oracle::{exact_ising_ground, exact_maxcut, exact_mis};
use mis_ising::rng::{derive_seed, rng_from_seed};
use mis_ising::solvers::Solver;
use mis_ising::SpinAssignment;

const MASTER_SEED: u64 = 1;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dense(q: &Qubo) -> Vec<Vec<f64>> {
    let n = q.len();
    (0..n).map(|i| (0..n).map(|j| q.get(i, j)).collect()).collect()
}

fn qubo_direct(q: &[Vec<f64>], x: &[u8]) -> f64 {
    let n = x.len();
    let mut v = 0.0;
    for i in 0..n {
        for j in 0..n {
            v += q[i][j] * (x[i] * x[j]) as f64;
        }
    }
    v
}

fn ising_direct(m: &IsingModel, z: &[i8]) -> f64 {
    let mut e = m.offset();
    for (i, h) in m.fields().iter().enumerate() {
        e -= h * z[i] as f64;
    }
    for (i, j, v) in m.couplings() {
        e -= v * (z[i] * z[j]) as f64;
    }
    e
}

fn random_ising(n: usize, seed: u64) -> IsingModel {
    let mut rng = rng_from_seed(seed);
    let mut m = IsingModel::new(n);
    m.set_offset(rng.random_range(-3.0..3.0));
    for i in 0..n {
        if rng.random_bool(0.8) {
            m.set_field(i, rng.random_range(-2.0..2.0)).unwrap();
        }
        for j in i + 1..n {
            if rng.random_bool(0.5) {
                m.add_coupling(i, j, rng.random_range(-2.0..2.0)).unwrap();
            }
        }
    }
    m
}

fn identities() -> Outcome {
    let mut worst_gap = 0.0f64;
    for k in 0..200u64 {
        let mut rng = rng_from_seed(derive_seed(MASTER_SEED, &[1, k]));
        let n = rng.random_range(1..=64usize);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(-10.0..=10.0)).collect()).collect();
        let q = Qubo::from_dense(&rows).unwrap();
        let qd = dense(&q);
        let m = qubo_to_ising(&q);
        for _ in 0..20 {
            let x: Vec<u8> = (0..n).map(|_| rng.random_bool(0.5) as u8).collect();
            let z: Vec<i8> = x.iter().map(|&b| 1 - 2 * b as i8).collect();
            let lhs = qubo_direct(&qd, &x);
            worst_gap = worst_gap.max((lhs - ising_direct(&m, &z)).abs());
            worst_gap = worst_gap.max((lhs - m.energy(&SpinAssignment::new(z).unwrap()).unwrap()).abs());
        }
    }
    if worst_gap > 1e-9 {
        return Err(format!("QUBO/Ising energy gap {worst_gap:e} exceeds 1e-9"));
    }

    let mut cut_checks = 0u64;
    for k in 0..100u64 {
        let n = 1 + (k as usize % 12);
        let m = random_ising(n, derive_seed(MASTER_SEED, &[2, k]));
        let c = embed_maxcut(&m);
        let w0: f64 = c.graph().edges().iter().map(|e| e.w).sum();
        for mask in 0u32..1 << n {
            let z: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let mut full = vec![1i8];
            full.extend(&z);
            let cut: f64 = c.graph().edges().iter().filter(|e| full[e.u] != full[e.v]).map(|e| e.w).sum();
            let expected = -ising_direct(&m, &z) + m.offset() + w0 / 2.0;
            if (cut - expected).abs() > 1e-9 {
                return Err(format!("cut identity off by {:e} (model {k}, mask {mask})", (cut - expected).abs()));
            }
            cut_checks += 1;
        }
        let ground = exact_ising_ground(&m).unwrap();
        let best_cut = exact_maxcut(&c).unwrap();
        if (best_cut.optimum - (-ground.optimum + m.offset() + w0 / 2.0)).abs() > 1e-9 {
            return Err(format!("max cut {} does not match ground energy {} (model {k})", best_cut.optimum, ground.optimum));
        }
        let decoded = ising_spins_from_embedded_cut(&best_cut.witness);
        if (m.energy(&decoded).unwrap() - ground.optimum).abs() > 1e-9 {
            return Err(format!("max-cut witness does not decode to a ground state (model {k})"));
        }
    }
    Ok(format!("max QUBO/Ising gap {worst_gap:.1e} over 4000 points; {cut_checks} cut identities; 100 ground states"))
}

/// Minimum of `xᵀQx` by Gray-code enumeration.
fn qubo_minimum(q: &[Vec<f64>]) -> f64 {
    let n = q.len();
    let mut x = vec![0u8; n];
    let (mut value, mut best) = (0.0, 0.0f64);
    for k in 1u64..1 << n {
        let i = k.trailing_zeros() as usize;
        let s = if x[i] == 0 { 1.0 } else { -1.0 };
        let coupled: f64 = (0..n).filter(|&j| j != i && x[j] == 1).map(|j| 2.0 * q[i][j]).sum();
        value += s * (q[i][i] + coupled);
        x[i] ^= 1;
        best = best.min(value);
    }
    best
}

fn encoding_equivalence() -> Outcome {
    let mut checked = 0;
    for k in 0..300u64 {
        let mut rng = rng_from_seed(derive_seed(MASTER_SEED, &[3, k]));
        let n = rng.random_range(1..=20usize);
        let p = rng.random_range(0.05..0.9);
        let g = gen_er(n, p, derive_seed(MASTER_SEED, &[3, k, 1])).unwrap();
        let q = mis_to_qubo(&g, MisEncoding::with_lambda(1.0).unwrap()).unwrap();
        let qubo_alpha = -qubo_minimum(&dense(&q));
        let alpha = exact_mis(&g).unwrap().optimum;
        if qubo_alpha != alpha as f64 {
            return Err(format!("graph {k} (n={n}): -min QUBO = {qubo_alpha}, exact MIS = {alpha}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} graphs, all exact"))
}

fn independent(g: &Graph, set: &[usize]) -> bool {
    g.edges().iter().all(|e| !(set.contains(&e.u) && set.contains(&e.v)))
}

fn prune_guarantee() -> Outcome {
    let filters = [PruneFilter::Naive, PruneFilter::MinFilter, PruneFilter::MaxFilter];
    for k in 0..500u64 {
        let mut rng = rng_from_seed(derive_seed(MASTER_SEED, &[4, k]));
        let n = rng.random_range(1..=60usize);
        let g = gen_er(n, rng.random_range(0.0..0.6), derive_seed(MASTER_SEED, &[4, k, 1])).unwrap();
        let density = rng.random_range(0.0..1.0);
        let x: Vec<u8> = (0..n).map(|_| rng.random_bool(density) as u8).collect();
        let selected = x.iter().filter(|&&b| b == 1).count() as i64;
        let induced = g.edges().iter().filter(|e| x[e.u] == 1 && x[e.v] == 1).count() as i64;
        let filter = filters[k as usize % 3];
        let s = prune_to_independent(&g, &x, filter, k).unwrap();
        if !independent(&g, s.vertices()) || s.vertices().iter().any(|&v| x[v] == 0) {
            return Err(format!("pair {k} ({filter}): output is not an independent subset of the selection"));
        }
        if (s.size() as i64) < selected - induced {
            return Err(format!("pair {k} ({filter}): |S| = {} < {}", s.size(), selected - induced));
        }
    }
    Ok("500 pairs across naive, min-filter and max-filter".into())
}

fn mean(out: &ExperimentOutput, solver: &str, n: usize) -> f64 {
    out.summary(solver, n).unwrap_or_else(|| panic!("no summary for {solver} at n={n}")).mean
}

fn sk_experiment() -> Outcome {
    let mut c = ExperimentConfig::new(
        Experiment::Sk,
        vec![
            SolverSpec::new(Solver::Sa).sweeps(300_000),
            SolverSpec::new(Solver::Sg3),
            SolverSpec::new(Solver::Sec),
            SolverSpec::new(Solver::Sg),
        ],
    );
    c.sizes = vec![100];
    c.instances_per_point = 20;
    c.master_seed = MASTER_SEED;
    let out = run_sk(&c).map_err(|e| e.to_string())?;
    let (sa, sg3, sec, sg) = (mean(&out, "sa", 100), mean(&out, "sg3", 100), mean(&out, "sec", 100), mean(&out, "sg", 100));
    check(
        sa <= -0.74 && sg3 <= -0.63 && sec <= -0.63 && (-0.60..=-0.45).contains(&sg),
        format!("SA {sa:.4} (<= -0.74), SG3 {sg3:.4} and SEC {sec:.4} (<= -0.63), SG {sg:.4} (in [-0.60, -0.45])"),
    )
}

fn dense_er() -> Outcome {
    let mut c = ExperimentConfig::new(
        Experiment::ErDense,
        vec![
            SolverSpec::new(Solver::Sa).sweeps(300_000),
            SolverSpec::new(Solver::Min),
            SolverSpec::new(Solver::Max),
            SolverSpec::new(Solver::Sg3),
            SolverSpec::new(Solver::Sec),
        ],
    );
    c.sizes = vec![100, 200];
    c.instances_per_point = 50;
    c.master_seed = MASTER_SEED;
    let out = run_er_dense(&c).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut lines = Vec::new();
    for n in [100, 200] {
        let [sa, min, max, sg3, sec] = ["sa", "min", "max", "sg3", "sec"].map(|s| mean(&out, s, n));
        let spread = max.max(sg3).max(sec) - max.min(sg3).min(sec);
        ok &= sa >= min + 0.5 && min >= max + 0.5 && spread <= 0.5;
        lines.push(format!("n={n}: SA {sa:.2} MIN {min:.2} MAX {max:.2} SG3 {sg3:.2} SEC {sec:.2}"));
    }
    check(ok, lines.join("; "))
}

fn sparse_er() -> Outcome {
    let mut c = ExperimentConfig::new(
        Experiment::ErSparse,
        vec![SolverSpec::new(Solver::Min), SolverSpec::new(Solver::Sa).sweeps(1000)],
    );
    c.degrees = vec![20.0];
    c.instances_per_point = 100;
    c.master_seed = MASTER_SEED;
    let out = run_er_sparse(&c).map_err(|e| e.to_string())?;
    let (min, sa) = (mean(&out, "min", 400), mean(&out, "sa", 400));
    check(min < 0.1948 && 0.1948 < sa, format!("rho(MIN) {min:.4} < 0.1948 < rho(SA) {sa:.4}"))
}

fn coding() -> Outcome {
    let optima = [
        ("1dc.64", 10, 10),
        ("1dc.128", 16, 15),
        ("1tc.8", 4, 4),
        ("1tc.16", 8, 8),
        ("1tc.32", 12, 12),
        ("1tc.64", 20, 20),
        ("1et.64", 18, 18),
        ("2dc.128", 5, 5),
        ("1zc.128", 18, 16),
    ];
    let mut c = ExperimentConfig::new(
        Experiment::Coding,
        vec![
            SolverSpec::new(Solver::Sa).sweeps(400_000).runs(10),
            SolverSpec::new(Solver::Min).runs(50),
        ],
    );
    c.instances = optima.iter().map(|(name, _, _)| name.to_string()).collect();
    c.master_seed = MASTER_SEED;
    let out = run_coding(&c).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, alpha, table_min) in optima {
        let sa = out.summary_for_instance("sa", name).unwrap().max as usize;
        let min = out.summary_for_instance("min", name).unwrap().max as usize;
        ok &= sa == alpha && min.abs_diff(table_min) <= 1;
        lines.push(format!("{name} SA {sa}/{alpha} MIN {min}/{table_min}"));
    }

    let mut r = ExperimentConfig::new(Experiment::Coding, vec![SolverSpec::new(Solver::Rank2).runs(50)]);
    r.instances = vec!["1dc.64".into()];
    r.master_seed = MASTER_SEED;
    let rank2 = run_coding(&r).map_err(|e| e.to_string())?.summary_for_instance("rank2", "1dc.64").unwrap().max;
    ok &= rank2 == 10.0;
    lines.push(format!("1dc.64 rank2 {rank2}/10"));
    check(ok, lines.join(", "))
}

fn formulas() -> Outcome {
    let values = [
        ("R(1024)", formula_r(1024).unwrap(), 15.2416),
        ("R(100)", formula_r(100).unwrap(), 9.709),
        ("rho(20)", formula_sparse_density(20.0).unwrap(), 0.2205),
        ("rho(100)", formula_sparse_density(100.0).unwrap(), 0.0677),
    ];
    let ok = values.iter().all(|(_, got, want)| (got - want).abs() <= 1e-3);
    check(ok, values.iter().map(|(k, got, want)| format!("{k} = {got:.4} (want {want})")).collect::<Vec<_>>().join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact identities", identities),
        ("MIS encoding equivalence", encoding_equivalence),
        ("prune guarantee", prune_guarantee),
        ("SK energies", sk_experiment),
        ("dense ER ordering", dense_er),
        ("sparse ER vs 1RSB", sparse_er),
        ("coding benchmark", coding),
        ("reference formulas", formulas),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({secs:.1}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({secs:.1}s) {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
