//! Variation operators: standard and heavy-tail bit mutation, uniform
//! crossover, cost repair, and inter-population parent selection.
//!
//! All operators draw from an explicit random stream in a fixed order
//! (gates first, then index choices, then per-bit coins), so runs
//! replay exactly from their seed.

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::algorithms::ParetoArchive;
use crate::coverage::{Evaluator, ProblemInstance, Solution};
use crate::diversity::DiversityPopulation;

/// Flips every bit independently with probability 1/n. Bits are drawn
/// in ascending index order.
pub fn standard_bit_mutation(x: &FixedBitSet, rng: &mut impl Rng) -> FixedBitSet {
    let n = x.len();
    assert!(n >= 1, "mutation needs a nonempty bit vector");
    let rate = 1.0 / n as f64;
    let mut y = x.clone();
    for i in 0..n {
        if rng.gen_bool(rate) {
            y.toggle(i);
        }
    }
    y
}

/// Discrete power-law distribution over flip strengths α ∈ [1..⌊n/2⌋]
/// with Pr[α = i] ∝ i^(−β).
#[derive(Debug, Clone)]
pub struct HeavyTailDistribution {
    beta: f64,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl HeavyTailDistribution {
    pub fn new(beta: f64, support_max: usize) -> Self {
        assert!(beta > 1.0, "power-law exponent must exceed 1");
        assert!(support_max >= 1, "support must be nonempty");
        let weights: Vec<f64> = (1..=support_max).map(|i| (i as f64).powf(-beta)).collect();
        let total: f64 = weights.iter().sum();
        let pmf: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut cdf = Vec::with_capacity(support_max);
        let mut acc = 0.0;
        for &p in &pmf {
            acc += p;
            cdf.push(acc);
        }
        *cdf.last_mut().expect("nonempty support") = 1.0;
        HeavyTailDistribution { beta, pmf, cdf }
    }

    /// Distribution for mutating length-`n` bit vectors: support ⌊n/2⌋.
    pub fn for_bitstring(beta: f64, n: usize) -> Self {
        assert!(n >= 2, "heavy-tail mutation needs n >= 2");
        HeavyTailDistribution::new(beta, n / 2)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn support_max(&self) -> usize {
        self.pmf.len()
    }

    /// Pr[α = alpha] for 1-based `alpha`.
    pub fn pmf(&self, alpha: usize) -> f64 {
        self.pmf[alpha - 1]
    }

    /// Draws α by inverting the precomputed cumulative table; consumes
    /// one uniform draw.
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.gen();
        self.cdf.partition_point(|&c| c <= u) + 1
    }
}

/// Draws α from the power law, then flips every bit independently with
/// probability α/n, bits in ascending index order.
pub fn heavy_tail_mutation(
    x: &FixedBitSet,
    d: &HeavyTailDistribution,
    rng: &mut impl Rng,
) -> FixedBitSet {
    let n = x.len();
    assert!(n >= 2, "heavy-tail mutation needs n >= 2");
    let alpha = d.sample(rng);
    let rate = alpha as f64 / n as f64;
    let mut y = x.clone();
    for i in 0..n {
        if rng.gen_bool(rate) {
            y.toggle(i);
        }
    }
    y
}

/// Each output bit is taken from `s` or `t` with probability ½,
/// independently per position, one coin per bit in ascending order.
/// Positions where the parents agree are always preserved.
pub fn uniform_crossover(s: &FixedBitSet, t: &FixedBitSet, rng: &mut impl Rng) -> FixedBitSet {
    assert_eq!(s.len(), t.len(), "crossover parents differ in length");
    let mut y = FixedBitSet::with_capacity(s.len());
    for i in 0..s.len() {
        let from_s = rng.gen_bool(0.5);
        let bit = if from_s { s.contains(i) } else { t.contains(i) };
        if bit {
            y.insert(i);
        }
    }
    y
}

/// Removes uniformly chosen 1-bits from `bits` until the tracked cost
/// is within budget. `cost` must equal the weight sum of the set bits
/// on entry and is kept in sync.
pub fn repair_bits(
    p: &ProblemInstance,
    bits: &mut FixedBitSet,
    cost: &mut u64,
    rng: &mut impl Rng,
) {
    if *cost <= p.budget() {
        return;
    }
    let mut ones: Vec<usize> = bits.ones().collect();
    while *cost > p.budget() {
        let k = rng.gen_range(0..ones.len());
        let v = ones.swap_remove(k);
        bits.set(v, false);
        *cost -= p.graph().weight(v);
    }
}

/// Repair operator: while the cost exceeds B, a uniformly chosen 1-bit
/// is flipped off. Feasible inputs pass through untouched (and
/// unevaluated); otherwise the repaired selection is re-evaluated,
/// charging one evaluation.
pub fn repair(
    p: &ProblemInstance,
    s: Solution,
    ev: &mut Evaluator,
    rng: &mut impl Rng,
) -> Solution {
    if s.cost() <= p.budget() {
        return s;
    }
    let mut bits = s.bits().clone();
    let mut cost = s.cost();
    repair_bits(p, &mut bits, &mut cost, rng);
    let flips: Vec<usize> = s.bits().symmetric_difference(&bits).collect();
    ev.flip_eval(&s, &flips)
}

/// Inter-population parent selection. The first parent comes from P_D
/// with probability ½ when P_D is nonempty, otherwise from P_O; the
/// optional second parent is drawn per the nested gates below, never
/// aliasing the first parent within its own population.
///
/// Draw order: source coin (only if P_D nonempty), first-parent index,
/// crossover gate (only if |P_D|+|P_O| ≥ 2), second-source coin (only
/// if its guard holds), second-parent index.
pub fn select_parents_interpop<'p>(
    p_o: &'p ParetoArchive,
    p_d: &'p DiversityPopulation,
    p_c: f64,
    rng: &mut impl Rng,
) -> (&'p Solution, Option<&'p Solution>) {
    assert!(!p_o.is_empty(), "archive must hold at least one solution");
    let combined = p_d.len() + p_o.len();

    if !p_d.is_empty() && rng.gen_bool(0.5) {
        let si = rng.gen_range(0..p_d.len());
        let s = p_d.member(si);
        if combined >= 2 && rng.gen_bool(p_c) {
            let t = if p_d.len() >= 2 && rng.gen_bool(0.5) {
                p_d.member(other_index(si, p_d.len(), rng))
            } else {
                p_o.member(rng.gen_range(0..p_o.len()))
            };
            (s, Some(t))
        } else {
            (s, None)
        }
    } else {
        let si = rng.gen_range(0..p_o.len());
        let s = p_o.member(si);
        if combined >= 2 && rng.gen_bool(p_c) {
            if !p_d.is_empty() && rng.gen_bool(0.5) {
                (s, Some(p_d.member(rng.gen_range(0..p_d.len()))))
            } else if p_o.len() >= 2 {
                (s, Some(p_o.member(other_index(si, p_o.len(), rng))))
            } else {
                // no second parent exists; fall through to mutation only
                (s, None)
            }
        } else {
            (s, None)
        }
    }
}

/// Uniform index from 0..len excluding `banned`.
fn other_index(banned: usize, len: usize, rng: &mut impl Rng) -> usize {
    let k = rng.gen_range(0..len - 1);
    if k >= banned {
        k + 1
    } else {
        k
    }
}
