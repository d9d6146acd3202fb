//! The four evolutionary loops (DIVEA, PDO, PDO-C, PDO-CH) and the
//! Pareto archive they maintain.
//!
//! One loop iteration produces exactly one offspring and charges
//! exactly one evaluation; greedy sampling and the initial random
//! solution are charged to the same budget. Runs are pure functions of
//! their [`RunConfig`], so identical configs replay identically.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coverage::{Evaluator, ObjectiveVector, ProblemInstance, Solution};
use crate::diversity::DiversityPopulation;
use crate::greedy::gdgs;
use crate::operators::{
    heavy_tail_mutation, repair_bits, select_parents_interpop, standard_bit_mutation,
    uniform_crossover, HeavyTailDistribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Divea,
    Pdo,
    PdoC,
    PdoCh,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::Divea, Algorithm::Pdo, Algorithm::PdoC, Algorithm::PdoCh];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Divea => "DIVEA",
            Algorithm::Pdo => "PDO",
            Algorithm::PdoC => "PDO-C",
            Algorithm::PdoCh => "PDO-CH",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "DIVEA" => Ok(Algorithm::Divea),
            "PDO" => Ok(Algorithm::Pdo),
            "PDO-C" => Ok(Algorithm::PdoC),
            "PDO-CH" => Ok(Algorithm::PdoCh),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// Archive of mutually non-dominated solutions (the population P_O).
#[derive(Debug, Clone, Default)]
pub struct ParetoArchive {
    members: Vec<(Solution, ObjectiveVector)>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        ParetoArchive::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, idx: usize) -> &Solution {
        &self.members[idx].0
    }

    pub fn objective(&self, idx: usize) -> ObjectiveVector {
        self.members[idx].1
    }

    pub fn objectives(&self) -> impl Iterator<Item = ObjectiveVector> + '_ {
        self.members.iter().map(|(_, o)| *o)
    }

    /// Dominance update: `y` enters unless some incumbent strongly
    /// dominates it, and on entry evicts every incumbent it weakly
    /// dominates (objective-vector duplicates included). Returns
    /// whether `y` was inserted.
    pub fn insert(&mut self, y: Solution, obj: ObjectiveVector) -> bool {
        if self.members.iter().any(|(_, w)| w.strongly_dominates(&obj)) {
            return false;
        }
        self.members.retain(|(_, z)| !obj.weakly_dominates(z));
        self.members.push((y, obj));
        true
    }
}

/// Everything one run depends on. `seed` drives the loop's random
/// stream; `gdgs_seed` drives greedy sampling separately so replicates
/// can share one f_min across algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub graph_id: String,
    pub budget: u64,
    pub margin: u64,
    pub mu: usize,
    pub t_max: u64,
    pub p_c: f64,
    pub beta: f64,
    pub seed: u64,
    pub gdgs_seed: u64,
    /// Record a trace point every this many evaluations.
    pub trace_every: Option<u64>,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, graph_id: impl Into<String>) -> Self {
        RunConfig {
            algorithm,
            graph_id: graph_id.into(),
            budget: 20_000,
            margin: 2_000,
            mu: 10,
            t_max: 10_000_000,
            p_c: 0.2,
            beta: 1.5,
            seed: 0,
            gdgs_seed: 0,
            trace_every: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub evaluations: u64,
    pub best_f: Option<u32>,
    pub entropy: Option<f64>,
}

/// Final-population outcome of one run. `best_f` and `final_entropy`
/// are absent only when no solution ever met the quality gate.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub f_min: u32,
    pub best_f: Option<u32>,
    pub final_entropy: Option<f64>,
    pub evaluations: u64,
    pub wall_ms: u64,
    pub seed: u64,
    pub trace: Vec<TracePoint>,
}

/// Runs `cfg.algorithm` on `p` to completion.
pub fn run(cfg: &RunConfig, p: &ProblemInstance) -> RunRecord {
    assert_eq!(cfg.budget, p.budget(), "config and instance disagree on B");
    assert_eq!(cfg.margin, p.margin(), "config and instance disagree on m");
    match cfg.algorithm {
        Algorithm::Divea => run_divea(cfg, p),
        Algorithm::Pdo | Algorithm::PdoC | Algorithm::PdoCh => run_pdo_family(cfg, p),
    }
}

/// The best member of a final diversity population, if any solution
/// ever qualified.
pub fn best_feasible(pop: &DiversityPopulation) -> Option<&Solution> {
    pop.fittest()
}

/// DIVEA: GDGS population, then (μ+1) steps of mutate / quality-gate /
/// entropy trim with the fittest member protected.
pub fn run_divea(cfg: &RunConfig, p: &ProblemInstance) -> RunRecord {
    assert_eq!(cfg.algorithm, Algorithm::Divea);
    let start = Instant::now();
    let n = p.graph().node_count();
    let mut ev = Evaluator::new(p.graph());

    let mut gdgs_rng = ChaCha8Rng::seed_from_u64(cfg.gdgs_seed);
    let sample = gdgs(p, cfg.mu, &mut ev, &mut gdgs_rng);
    let f_min = sample.f_min;

    let mut pop = DiversityPopulation::new(cfg.mu, n);
    for x in sample.population {
        pop.push(x);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = Vec::new();
    while ev.evaluations() < cfg.t_max {
        let y = {
            let parent = pop.member(rng.gen_range(0..pop.len()));
            let child_bits = standard_bit_mutation(parent.bits(), &mut rng);
            let flips: Vec<usize> = parent.bits().symmetric_difference(&child_bits).collect();
            ev.flip_eval(parent, &flips)
        };
        if y.coverage() >= f_min && y.cost() <= p.budget() {
            pop.push(y);
            pop.trim();
        }
        record_trace(cfg, &ev, &pop, &mut trace);
    }

    finish(cfg, f_min, &pop, &ev, start, trace)
}

/// PDO and its crossover / heavy-tail variants. The archive P_O starts
/// from one uniform random solution and P_D empty; each offspring is
/// offered to both populations.
fn run_pdo_family(cfg: &RunConfig, p: &ProblemInstance) -> RunRecord {
    let start = Instant::now();
    let n = p.graph().node_count();
    let graph = p.graph();
    let mut ev = Evaluator::new(graph);

    let mut gdgs_rng = ChaCha8Rng::seed_from_u64(cfg.gdgs_seed);
    let f_min = gdgs(p, cfg.mu, &mut ev, &mut gdgs_rng).f_min;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bits = FixedBitSet::with_capacity(n);
    for i in 0..n {
        if rng.gen_bool(0.5) {
            bits.insert(i);
        }
    }
    let x0 = ev.evaluate(&bits);
    let obj0 = p.bi_objective(&x0);
    let mut archive = ParetoArchive::new();
    archive.insert(x0, obj0);

    let mut pop = DiversityPopulation::new(cfg.mu, n);
    let with_crossover = matches!(cfg.algorithm, Algorithm::PdoC | Algorithm::PdoCh);
    let heavy = matches!(cfg.algorithm, Algorithm::PdoCh)
        .then(|| HeavyTailDistribution::for_bitstring(cfg.beta, n));

    let mut trace = Vec::new();
    while ev.evaluations() < cfg.t_max {
        let y = if with_crossover {
            let (parent, child_bits) = {
                let (s, t) = select_parents_interpop(&archive, &pop, cfg.p_c, &mut rng);
                let pre_mutation = match t {
                    Some(t) => uniform_crossover(s.bits(), t.bits(), &mut rng),
                    None => s.bits().clone(),
                };
                let child = match &heavy {
                    Some(d) => heavy_tail_mutation(&pre_mutation, d, &mut rng),
                    None => standard_bit_mutation(&pre_mutation, &mut rng),
                };
                (s, child)
            };
            let mut child_bits = child_bits;
            let mut cost = parent.cost();
            for i in parent.bits().symmetric_difference(&child_bits) {
                if child_bits.contains(i) {
                    cost += graph.weight(i);
                } else {
                    cost -= graph.weight(i);
                }
            }
            repair_bits(p, &mut child_bits, &mut cost, &mut rng);
            let flips: Vec<usize> = parent.bits().symmetric_difference(&child_bits).collect();
            ev.flip_eval(parent, &flips)
        } else {
            let parent = if pop.len() > 1 && rng.gen_bool(0.5) {
                pop.member(rng.gen_range(0..pop.len()))
            } else {
                archive.member(rng.gen_range(0..archive.len()))
            };
            let child_bits = standard_bit_mutation(parent.bits(), &mut rng);
            let flips: Vec<usize> = parent.bits().symmetric_difference(&child_bits).collect();
            ev.flip_eval(parent, &flips)
        };

        let obj = p.bi_objective(&y);
        let qualifies = obj.g1 >= f_min as i64 && obj.g2 <= p.budget();
        if qualifies {
            archive.insert(y.clone(), obj);
            pop.push(y);
            if pop.len() > cfg.mu {
                pop.trim();
            }
        } else {
            archive.insert(y, obj);
        }
        record_trace(cfg, &ev, &pop, &mut trace);
    }

    finish(cfg, f_min, &pop, &ev, start, trace)
}

fn record_trace(
    cfg: &RunConfig,
    ev: &Evaluator,
    pop: &DiversityPopulation,
    trace: &mut Vec<TracePoint>,
) {
    if let Some(every) = cfg.trace_every {
        if every > 0 && ev.evaluations().is_multiple_of(every) {
            trace.push(TracePoint {
                evaluations: ev.evaluations(),
                best_f: pop.fittest().map(Solution::coverage),
                entropy: (!pop.is_empty()).then(|| pop.entropy()),
            });
        }
    }
}

fn finish(
    cfg: &RunConfig,
    f_min: u32,
    pop: &DiversityPopulation,
    ev: &Evaluator,
    start: Instant,
    trace: Vec<TracePoint>,
) -> RunRecord {
    RunRecord {
        f_min,
        best_f: pop.fittest().map(Solution::coverage),
        final_entropy: (!pop.is_empty()).then(|| pop.entropy()),
        evaluations: ev.evaluations(),
        wall_ms: start.elapsed().as_millis() as u64,
        seed: cfg.seed,
        trace,
    }
}
