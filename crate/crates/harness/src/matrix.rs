//! Expansion of an experiment grid into individual seeded runs.
//!
//! Seeds are derived from SHA-256 over a textual key so that every run
//! is reproducible in isolation. The mutation-loop seed hashes
//! `"loop|<base>|<graph>|<B>|<m>|<mu>|<algorithm>|<run>"`; the
//! greedy-sampling seed hashes the same key without the algorithm
//! (`"gdgs|..."`), so within one replicate every algorithm starts from
//! the same sampled population and quality threshold. Each digest's
//! first eight bytes, big-endian, become the u64 seed.

use pdo_core::algorithms::RunConfig;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

/// One grid cell plus run index, ready to execute.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedRun {
    pub run_index: u32,
    pub cfg: RunConfig,
}

fn digest_seed(key: &str) -> u64 {
    let digest = Sha256::digest(key.as_bytes());
    u64::from_be_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

pub fn loop_seed(
    base: u64,
    graph: &str,
    budget: u64,
    margin: u64,
    mu: usize,
    algorithm: &str,
    run_index: u32,
) -> u64 {
    digest_seed(&format!("loop|{base}|{graph}|{budget}|{margin}|{mu}|{algorithm}|{run_index}"))
}

pub fn gdgs_seed(base: u64, graph: &str, budget: u64, margin: u64, mu: usize, run_index: u32) -> u64 {
    digest_seed(&format!("gdgs|{base}|{graph}|{budget}|{margin}|{mu}|{run_index}"))
}

/// Cartesian product graph x budget x margin x mu x algorithm x run
/// index, in that nesting order.
pub fn expand_matrix(cfg: &ExperimentConfig) -> Vec<PlannedRun> {
    let algorithms = cfg.parsed_algorithms();
    let mut runs = Vec::new();
    for graph in &cfg.graphs {
        for &budget in &cfg.budgets {
            for &margin in &cfg.margins {
                for &mu in &cfg.mus {
                    for &algorithm in &algorithms {
                        for run_index in 0..cfg.runs {
                            let mut rc = RunConfig::new(algorithm, graph.clone());
                            rc.budget = budget;
                            rc.margin = margin;
                            rc.mu = mu;
                            rc.t_max = cfg.t_max;
                            rc.p_c = cfg.p_c;
                            rc.beta = cfg.beta;
                            rc.trace_every = cfg.trace_every;
                            rc.seed = loop_seed(
                                cfg.base_seed,
                                graph,
                                budget,
                                margin,
                                mu,
                                algorithm.name(),
                                run_index,
                            );
                            rc.gdgs_seed =
                                gdgs_seed(cfg.base_seed, graph, budget, margin, mu, run_index);
                            runs.push(PlannedRun { run_index, cfg: rc });
                        }
                    }
                }
            }
        }
    }
    runs
}
