//! Maximum independent set via QUBO/Ising encodings, Max-Cut heuristics,
//! simulated annealing and a rank-2 relaxation, with an experiment harness.

pub mod anneal;
pub mod exec;
pub mod graph;
pub mod greedy;
pub mod harness;
pub mod ising;
pub mod mis;
pub mod oracle;
pub mod rank2;
pub mod rng;
pub mod solvers;

pub use exec::Execution;
pub use graph::{Graph, GraphError};
pub use ising::{CutPartition, IsingModel, MaxCutInstance, Qubo, SpinAssignment};
pub use mis::{IndependentSet, PruneFilter};
