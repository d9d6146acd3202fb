//! Generalized greedy construction and generalized diversifying greedy
//! sampling (GDGS), which seeds DIVEA's population and fixes the
//! quality threshold f_min for every algorithm.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::coverage::{Evaluator, ProblemInstance, Solution};
use crate::graph::Graph;

/// Result of greedy sampling: μ feasible individuals, the minimum
/// coverage value among them, and the shared greedy core they extend.
#[derive(Debug, Clone)]
pub struct GdgsOutput {
    pub population: Vec<Solution>,
    pub f_min: u32,
    pub greedy_core: Solution,
}

/// Builds a solution by repeatedly adding the element with the best
/// marginal-coverage-per-cost ratio among those still fitting the
/// budget, stopping when nothing fits or every remaining gain is zero.
/// Ratio ties break toward the lowest element index.
pub fn generalized_greedy(p: &ProblemInstance, budget: u64, ev: &mut Evaluator) -> Solution {
    let graph = p.graph();
    let n = graph.node_count();
    let mut current = ev.evaluate(&FixedBitSet::with_capacity(n));
    loop {
        let mut best: Option<(f64, usize)> = None;
        for v in 0..n {
            if current.contains(v) {
                continue;
            }
            let w = graph.weight(v);
            if current.cost() + w > budget {
                continue;
            }
            let gain = marginal_gain(&current, v, graph);
            if gain == 0 {
                continue;
            }
            let ratio = gain as f64 / w as f64;
            if best.is_none_or(|(r, _)| ratio > r) {
                best = Some((ratio, v));
            }
        }
        match best {
            Some((_, v)) => current = ev.flip_eval(&current, &[v]),
            None => return current,
        }
    }
}

/// Newly covered nodes if `v` were added: `v` itself plus neighbors,
/// counting only nodes not yet covered.
fn marginal_gain(s: &Solution, v: usize, graph: &Graph) -> u32 {
    let mut gain = u32::from(s.cover_count(v) == 0);
    for &nb in graph.neighbors(v) {
        if s.cover_count(nb as usize) == 0 {
            gain += 1;
        }
    }
    gain
}

/// GDGS: one greedy core at budget B−m, then μ individuals that extend
/// the core with uniformly sampled elements (without replacement,
/// non-fitting candidates discarded) until nothing else fits under B.
/// Each individual costs one evaluation on top of the greedy steps.
pub fn gdgs(p: &ProblemInstance, mu: usize, ev: &mut Evaluator, rng: &mut impl Rng) -> GdgsOutput {
    assert!(mu >= 1, "population size must be positive");
    let graph = p.graph();
    let n = graph.node_count();
    let core_budget = p.budget() - p.margin();
    let greedy_core = generalized_greedy(p, core_budget, ev);

    let free: Vec<usize> = (0..n).filter(|&v| !greedy_core.contains(v)).collect();
    let mut population = Vec::with_capacity(mu);
    for _ in 0..mu {
        let mut candidates = free.clone();
        candidates.shuffle(rng);
        let mut cost = greedy_core.cost();
        let mut added = Vec::new();
        for v in candidates {
            let w = graph.weight(v);
            if cost + w <= p.budget() {
                cost += w;
                added.push(v);
            }
        }
        population.push(ev.flip_eval(&greedy_core, &added));
    }
    let f_min = population.iter().map(Solution::coverage).min().expect("mu >= 1");
    GdgsOutput { population, f_min, greedy_core }
}
