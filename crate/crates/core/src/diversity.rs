//! Entropy diversity over populations of solutions and the
//! elite-protected least-contribution removal rule.
//!
//! With p(v_i) the fraction of members selecting element v_i,
//!
//! ```text
//! H(P) = − Σ_i p(v_i) · log₂ p(v_i),    0 · log₂ 0 = 0
//! ```
//!
//! Removal protects one fittest member x* and evicts the member whose
//! deletion leaves the highest remaining entropy.

use crate::coverage::Solution;

/// Bounded multiset of solutions with incrementally maintained
/// per-element selection counts. The size may exceed the capacity by
/// one between an insertion and the following [`trim`](Self::trim).
#[derive(Debug, Clone)]
pub struct DiversityPopulation {
    members: Vec<Solution>,
    counts: Vec<u32>,
    capacity: usize,
}

impl DiversityPopulation {
    pub fn new(capacity: usize, n: usize) -> Self {
        assert!(capacity >= 1, "capacity must be positive");
        DiversityPopulation { members: Vec::with_capacity(capacity + 1), counts: vec![0; n], capacity }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn members(&self) -> &[Solution] {
        &self.members
    }

    pub fn member(&self, idx: usize) -> &Solution {
        &self.members[idx]
    }

    /// Per-element selection counts, index-aligned with the graph nodes.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn push(&mut self, s: Solution) {
        assert_eq!(s.bits().len(), self.counts.len(), "member length mismatch");
        assert!(
            self.members.len() <= self.capacity,
            "population already holds {} members over capacity {}",
            self.members.len(),
            self.capacity
        );
        for v in s.ones() {
            self.counts[v] += 1;
        }
        self.members.push(s);
    }

    /// Removes and returns the member at `idx`, preserving the order of
    /// the remaining members.
    pub fn remove(&mut self, idx: usize) -> Solution {
        let s = self.members.remove(idx);
        for v in s.ones() {
            self.counts[v] -= 1;
        }
        s
    }

    /// H(P) of the current members.
    pub fn entropy(&self) -> f64 {
        assert!(!self.members.is_empty(), "entropy of an empty population");
        let d = self.members.len() as f64;
        let mut h = 0.0;
        for &c in &self.counts {
            if c > 0 {
                h += entropy_term(c as f64 / d);
            }
        }
        h
    }

    /// H(P ∖ {member idx}), computed from the count vector decremented
    /// by that member's bits; no reduced copy is materialized.
    pub fn leave_one_out_entropy(&self, idx: usize) -> f64 {
        assert!(self.members.len() >= 2, "leave-one-out needs at least two members");
        let member = &self.members[idx];
        let d = (self.members.len() - 1) as f64;
        let mut h = 0.0;
        for (i, &c) in self.counts.iter().enumerate() {
            let c = c - u32::from(member.contains(i));
            if c > 0 {
                h += entropy_term(c as f64 / d);
            }
        }
        h
    }

    /// Index of the fittest member (highest coverage value, lowest
    /// index on ties); this is the member protected from removal.
    pub fn fittest_index(&self) -> Option<usize> {
        self.members
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.coverage().cmp(&b.coverage()).then(j.cmp(i)))
            .map(|(i, _)| i)
    }

    pub fn fittest(&self) -> Option<&Solution> {
        self.fittest_index().map(|i| &self.members[i])
    }

    /// The member x̂ whose removal leaves the highest entropy, excluding
    /// the protected fittest member x*; lowest index on ties.
    ///
    /// Per-candidate scores are termwise identical to
    /// [`leave_one_out_entropy`]; the log terms are shared through a
    /// count-indexed table since all candidates use the same denominator.
    pub fn removal_victim(&self) -> usize {
        assert!(self.members.len() >= 2, "removal needs at least two members");
        let elite = self.fittest_index().expect("nonempty population");
        let d = (self.members.len() - 1) as f64;
        let mut term = vec![0.0; self.members.len()];
        for (c, slot) in term.iter_mut().enumerate().skip(1) {
            *slot = entropy_term(c as f64 / d);
        }

        let mut victim = usize::MAX;
        let mut best = f64::NEG_INFINITY;
        for (idx, member) in self.members.iter().enumerate() {
            if idx == elite {
                continue;
            }
            let mut h = 0.0;
            for (i, &c) in self.counts.iter().enumerate() {
                let c = c - u32::from(member.contains(i));
                if c > 0 {
                    h += term[c as usize];
                }
            }
            if h > best {
                best = h;
                victim = idx;
            }
        }
        victim
    }

    /// Evicts removal victims until the size is back within capacity.
    pub fn trim(&mut self) {
        while self.members.len() > self.capacity {
            let victim = self.removal_victim();
            self.remove(victim);
        }
    }
}

fn entropy_term(p: f64) -> f64 {
    -(p * p.log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::Evaluator;
    use crate::graph::Graph;
    use fixedbitset::FixedBitSet;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn star(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
        Graph::from_edges(n, &edges)
    }

    fn edgeless(n: usize) -> Graph {
        Graph::from_edges(n, &[])
    }

    fn solution(ev: &mut Evaluator, ones: &[usize]) -> Solution {
        let mut b = FixedBitSet::with_capacity(ev.graph().node_count());
        for &i in ones {
            b.insert(i);
        }
        ev.evaluate(&b)
    }

    fn pop_of(ev: &mut Evaluator, capacity: usize, members: &[&[usize]]) -> DiversityPopulation {
        let mut pop = DiversityPopulation::new(capacity, ev.graph().node_count());
        for ones in members {
            pop.push(solution(ev, ones));
        }
        pop
    }

    /// Direct formula evaluation over materialized members.
    fn entropy_oracle(members: &[Solution], n: usize) -> f64 {
        let d = members.len() as f64;
        let mut h = 0.0;
        for i in 0..n {
            let c = members.iter().filter(|m| m.contains(i)).count();
            if c > 0 {
                let p = c as f64 / d;
                h += -(p * p.log2());
            }
        }
        h
    }

    #[test]
    fn identical_members_have_zero_entropy() {
        let g = edgeless(4);
        let mut ev = Evaluator::new(&g);
        let pop = pop_of(&mut ev, 4, &[&[0, 1], &[0, 1], &[0, 1], &[0, 1]]);
        assert_eq!(pop.entropy(), 0.0);
    }

    #[test]
    fn two_overlapping_members_give_one_bit() {
        let g = edgeless(3);
        let mut ev = Evaluator::new(&g);
        let pop = pop_of(&mut ev, 2, &[&[0, 1], &[1, 2]]);
        assert_eq!(pop.entropy(), 1.0);
    }

    #[test]
    fn leave_one_out_of_a_pair_is_zero() {
        let g = edgeless(3);
        let mut ev = Evaluator::new(&g);
        let pop = pop_of(&mut ev, 2, &[&[0, 1], &[1, 2]]);
        assert_eq!(pop.leave_one_out_entropy(0), 0.0);
        assert_eq!(pop.leave_one_out_entropy(1), 0.0);
    }

    #[test]
    fn victim_is_the_majority_duplicate() {
        // members 11, 11, 01 on the 2-star cover both nodes each, so f
        // ties and member 0 becomes the elite; removing the other
        // duplicate leaves {11, 01} with H > 0 while removing 01 leaves
        // H = 0
        let g = star(2);
        let mut ev = Evaluator::new(&g);
        let pop = pop_of(&mut ev, 2, &[&[0, 1], &[0, 1], &[1]]);
        assert!(pop.members().iter().all(|m| m.coverage() == 2));
        assert_eq!(pop.removal_victim(), 1);
    }

    #[test]
    fn elitism_forces_the_only_non_elite() {
        let g = star(3);
        let mut ev = Evaluator::new(&g);
        // 100 covers the whole star, 010 covers two nodes
        let pop = pop_of(&mut ev, 1, &[&[0], &[1]]);
        assert!(pop.member(0).coverage() > pop.member(1).coverage());
        assert_eq!(pop.removal_victim(), 1);
    }

    #[test]
    fn leave_one_out_matches_reduced_copy_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..300 {
            let n = rng.gen_range(1..=16);
            let g = edgeless(n);
            let mut ev = Evaluator::new(&g);
            let size = rng.gen_range(2..=8);
            let mut pop = DiversityPopulation::new(size, n);
            for _ in 0..size {
                let mut b = FixedBitSet::with_capacity(n);
                for i in 0..n {
                    if rng.gen_bool(0.5) {
                        b.insert(i);
                    }
                }
                pop.push(ev.evaluate(&b));
            }
            let oracle_full = entropy_oracle(pop.members(), n);
            assert_eq!(pop.entropy(), oracle_full);
            for idx in 0..size {
                let mut reduced: Vec<Solution> = pop.members().to_vec();
                reduced.remove(idx);
                assert_eq!(pop.leave_one_out_entropy(idx), entropy_oracle(&reduced, n));
            }
        }
    }

    #[test]
    fn victim_matches_brute_force_argmax() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let g = star(n);
            let mut ev = Evaluator::new(&g);
            let size = rng.gen_range(2..=6);
            let mut pop = DiversityPopulation::new(size, n);
            for _ in 0..size {
                let mut b = FixedBitSet::with_capacity(n);
                for i in 0..n {
                    if rng.gen_bool(0.4) {
                        b.insert(i);
                    }
                }
                pop.push(ev.evaluate(&b));
            }

            let elite = (0..size)
                .max_by(|&i, &j| {
                    pop.member(i).coverage().cmp(&pop.member(j).coverage()).then(j.cmp(&i))
                })
                .unwrap();
            let expected = (0..size)
                .filter(|&idx| idx != elite)
                .map(|idx| {
                    let mut reduced: Vec<Solution> = pop.members().to_vec();
                    reduced.remove(idx);
                    (idx, entropy_oracle(&reduced, n))
                })
                .fold((usize::MAX, f64::NEG_INFINITY), |acc, (idx, h)| {
                    if h > acc.1 {
                        (idx, h)
                    } else {
                        acc
                    }
                })
                .0;
            assert_eq!(pop.removal_victim(), expected);
        }
    }

    #[test]
    fn victim_score_equals_leave_one_out_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..200 {
            let n = rng.gen_range(2..=12);
            let g = edgeless(n);
            let mut ev = Evaluator::new(&g);
            let size = rng.gen_range(2..=7);
            let mut pop = DiversityPopulation::new(size, n);
            for _ in 0..size {
                let mut b = FixedBitSet::with_capacity(n);
                for i in 0..n {
                    if rng.gen_bool(0.5) {
                        b.insert(i);
                    }
                }
                pop.push(ev.evaluate(&b));
            }
            let elite = pop.fittest_index().unwrap();
            let inline_argmax = (0..size)
                .filter(|&idx| idx != elite)
                .fold((usize::MAX, f64::NEG_INFINITY), |acc, idx| {
                    let h = pop.leave_one_out_entropy(idx);
                    if h > acc.1 {
                        (idx, h)
                    } else {
                        acc
                    }
                })
                .0;
            assert_eq!(pop.removal_victim(), inline_argmax);
        }
    }

    #[test]
    fn counts_match_recount_after_mixed_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let n = 10;
        let g = edgeless(n);
        let mut ev = Evaluator::new(&g);
        let mut pop = DiversityPopulation::new(6, n);
        for _ in 0..400 {
            if pop.len() < 6 && (pop.is_empty() || rng.gen_bool(0.6)) {
                let mut b = FixedBitSet::with_capacity(n);
                for i in 0..n {
                    if rng.gen_bool(0.3) {
                        b.insert(i);
                    }
                }
                pop.push(ev.evaluate(&b));
            } else {
                let idx = rng.gen_range(0..pop.len());
                pop.remove(idx);
            }
            let mut recount = vec![0u32; n];
            for m in pop.members() {
                for v in m.ones() {
                    recount[v] += 1;
                }
            }
            assert_eq!(pop.counts(), recount.as_slice());
        }
    }

    #[test]
    fn entropy_bounds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let max_per_element = std::f64::consts::E.log2() / std::f64::consts::E;
        for _ in 0..200 {
            let n = rng.gen_range(1..=16);
            let g = edgeless(n);
            let mut ev = Evaluator::new(&g);
            let size = rng.gen_range(1..=8);
            let mut pop = DiversityPopulation::new(size, n);
            for _ in 0..size {
                let mut b = FixedBitSet::with_capacity(n);
                for i in 0..n {
                    if rng.gen_bool(0.5) {
                        b.insert(i);
                    }
                }
                pop.push(ev.evaluate(&b));
            }
            let h = pop.entropy();
            assert!(h >= 0.0);
            assert!(h <= n as f64 * max_per_element + 1e-12);
            let degenerate =
                pop.counts().iter().all(|&c| c == 0 || c as usize == pop.len());
            assert_eq!(h == 0.0, degenerate);
        }
    }

    #[test]
    fn entropy_is_invariant_under_member_and_element_permutation() {
        let g = edgeless(5);
        let mut ev = Evaluator::new(&g);
        let pop = pop_of(&mut ev, 3, &[&[0, 1], &[1, 2, 3], &[4]]);
        let swapped = pop_of(&mut ev, 3, &[&[4], &[0, 1], &[1, 2, 3]]);
        assert_eq!(pop.entropy(), swapped.entropy());
        // relabel elements by i -> 4-i
        let relabeled = pop_of(&mut ev, 3, &[&[4, 3], &[3, 2, 1], &[0]]);
        assert!((pop.entropy() - relabeled.entropy()).abs() < 1e-12);
    }

    #[test]
    #[should_panic(expected = "empty population")]
    fn entropy_of_empty_population_panics() {
        DiversityPopulation::new(2, 3).entropy();
    }

    #[test]
    #[should_panic(expected = "at least two members")]
    fn victim_of_singleton_panics() {
        let g = edgeless(2);
        let mut ev = Evaluator::new(&g);
        let pop = pop_of(&mut ev, 2, &[&[0]]);
        pop.removal_victim();
    }
}
