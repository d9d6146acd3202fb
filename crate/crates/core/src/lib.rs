//! Coevolutionary Pareto diversity optimization for budget-constrained
//! maximum coverage in graphs.
//!
//! The library evolves a set of up to μ feasible solutions whose
//! coverage value stays at or above a greedy-sampled threshold f_min
//! while maximizing the population's element-frequency entropy. Four
//! algorithms are provided: the elitist baseline DIVEA and the
//! coevolutionary PDO family (plain, with inter-population crossover,
//! and with heavy-tail mutation), all driven by a shared evaluation
//! budget and replayable from a seed.

pub mod algorithms;
pub mod coverage;
pub mod diversity;
pub mod graph;
pub mod greedy;
pub mod operators;
pub mod stats;

pub use algorithms::{run, Algorithm, ParetoArchive, RunConfig, RunRecord};
pub use coverage::{Evaluator, ObjectiveVector, ProblemInstance, Solution};
pub use diversity::DiversityPopulation;
pub use graph::{DimacsError, Graph};
pub use greedy::{gdgs, generalized_greedy, GdgsOutput};
