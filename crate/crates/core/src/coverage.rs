//! Coverage objective and cost evaluation, including incremental
//! single-flip updates, plus the bi-objective vector and its dominance
//! relations.
//!
//! A selection x covers every selected node and every neighbor of a
//! selected node: f(x) = |Cov({v : x_v = 1})| with Cov(V') = V' ∪ N(V').
//! The cost is the weight sum of the selected nodes. The objective
//! vector is
//!
//! ```text
//! g(x) = (g1, g2),  g1 = f(x) if c(x) ≤ B+1, else −1,  g2 = c(x)
//! ```
//!
//! maximizing g1 while minimizing g2.

use fixedbitset::FixedBitSet;

use crate::graph::Graph;

/// Evaluated node selection with cached coverage value, cost, and the
/// per-node count of selected dominators that keeps single-flip updates
/// cheap. Only [`Evaluator`] methods construct these, so the caches
/// always agree with the bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    bits: FixedBitSet,
    cover: Vec<u32>,
    coverage: u32,
    cost: u64,
}

impl Solution {
    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    /// Coverage value f: number of nodes selected or adjacent to a
    /// selected node.
    pub fn coverage(&self) -> u32 {
        self.coverage
    }

    /// Cost c: weight sum of the selected nodes.
    pub fn cost(&self) -> u64 {
        self.cost
    }

    /// Number of selected nodes covering `v` (`v` itself counts).
    pub fn cover_count(&self, v: usize) -> u32 {
        self.cover[v]
    }

    /// Indices of the selected nodes, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn one_count(&self) -> usize {
        self.bits.count_ones(..)
    }
}

/// Evaluates selections against one graph and counts every evaluation,
/// full or incremental, toward the run's budget.
#[derive(Debug)]
pub struct Evaluator<'g> {
    graph: &'g Graph,
    evaluations: u64,
}

impl<'g> Evaluator<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Evaluator { graph, evaluations: 0 }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Evaluations charged so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Full evaluation of a bit vector. Charges one evaluation.
    pub fn evaluate(&mut self, bits: &FixedBitSet) -> Solution {
        let n = self.graph.node_count();
        assert_eq!(bits.len(), n, "bit vector length {} != node count {n}", bits.len());
        self.evaluations += 1;

        let mut cover = vec![0u32; n];
        let mut cost = 0u64;
        for v in bits.ones() {
            cover[v] += 1;
            for &nb in self.graph.neighbors(v) {
                cover[nb as usize] += 1;
            }
            cost += self.graph.weight(v);
        }
        let coverage = cover.iter().filter(|&&c| c > 0).count() as u32;
        Solution { bits: bits.clone(), cover, coverage, cost }
    }

    /// Evaluation of `base` with the bits in `flips` toggled, updating
    /// the cover counts of the flipped nodes' neighborhoods only.
    /// Charges one evaluation; equals a full evaluation of the flipped
    /// bit vector.
    pub fn flip_eval(&mut self, base: &Solution, flips: &[usize]) -> Solution {
        self.evaluations += 1;
        let mut s = base.clone();
        for &v in flips {
            if s.bits.contains(v) {
                s.bits.set(v, false);
                s.cost -= self.graph.weight(v);
                Self::bump(&mut s, v, -1);
                for &nb in self.graph.neighbors(v) {
                    Self::bump(&mut s, nb as usize, -1);
                }
            } else {
                s.bits.set(v, true);
                s.cost += self.graph.weight(v);
                Self::bump(&mut s, v, 1);
                for &nb in self.graph.neighbors(v) {
                    Self::bump(&mut s, nb as usize, 1);
                }
            }
        }
        s
    }

    fn bump(s: &mut Solution, node: usize, delta: i32) {
        let c = &mut s.cover[node];
        let next = (*c as i64 + delta as i64) as u32;
        match (*c, next) {
            (0, 1) => s.coverage += 1,
            (1, 0) => s.coverage -= 1,
            _ => {}
        }
        *c = next;
    }
}

/// Objective vector of Eq-style bi-objective coverage: `g1` is the
/// coverage value or the −1 infeasibility sentinel, `g2` the cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectiveVector {
    pub g1: i64,
    pub g2: u64,
}

impl ObjectiveVector {
    /// y ⪰ z: at least as good in both objectives.
    pub fn weakly_dominates(&self, other: &ObjectiveVector) -> bool {
        self.g1 >= other.g1 && self.g2 <= other.g2
    }

    /// y ≻ z: weakly dominates with a strictly different vector.
    pub fn strongly_dominates(&self, other: &ObjectiveVector) -> bool {
        self.weakly_dominates(other) && self != other
    }
}

/// A coverage problem: graph, budget B, and the greedy sampling margin m.
#[derive(Debug, Clone, Copy)]
pub struct ProblemInstance<'g> {
    graph: &'g Graph,
    budget: u64,
    margin: u64,
}

impl<'g> ProblemInstance<'g> {
    pub fn new(graph: &'g Graph, budget: u64, margin: u64) -> Self {
        assert!(margin <= budget, "margin {margin} exceeds budget {budget}");
        ProblemInstance { graph, budget, margin }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn margin(&self) -> u64 {
        self.margin
    }

    /// g(x): solutions costing more than B+1 take the −1 sentinel.
    pub fn bi_objective(&self, s: &Solution) -> ObjectiveVector {
        let g1 = if s.cost() <= self.budget + 1 { s.coverage() as i64 } else { -1 };
        ObjectiveVector { g1, g2: s.cost() }
    }
}
