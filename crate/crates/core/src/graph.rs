//! Undirected benchmark graphs: DIMACS parsing, degree-based node costs,
//! and a seeded generator for clique-blocked random instances.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors raised while reading a DIMACS edge-format file.
#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("missing `p edge <n> <m>` problem line")]
    MissingProblemLine,
    #[error("line {line}: second problem line")]
    DuplicateProblemLine { line: usize },
    #[error("line {line}: node count must be positive")]
    EmptyNodeSet { line: usize },
    #[error("line {line}: edge endpoint {endpoint} outside [1..{n}]")]
    EdgeOutOfRange { line: usize, endpoint: usize, n: usize },
    #[error("line {line}: edge listed before the problem line")]
    EdgeBeforeProblemLine { line: usize },
    #[error("line {line}: malformed token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Immutable undirected graph with per-node integer costs.
///
/// Node indices are 0-based internally; all file I/O uses the 1-based
/// DIMACS convention. Adjacency lists are sorted and deduplicated, with
/// no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<u32>>,
    weights: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an explicit 0-based edge list. Duplicates
    /// (including reversed duplicates) and self-loops are dropped.
    /// All node weights start at 1.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u},{v}) outside 0..{n}");
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                adjacency[u].push(v as u32);
                adjacency[v].push(u as u32);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { n, adjacency, weights: vec![1; n] }
    }

    /// Parses the DIMACS ASCII edge format: one `p edge <n> <m>` line,
    /// `e <u> <v>` lines with 1-based endpoints, `c`-prefixed comments.
    /// Duplicate and reversed-duplicate edges collapse silently.
    pub fn parse_dimacs<R: BufRead>(reader: R) -> Result<Self, DimacsError> {
        let mut n: Option<usize> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();

        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let mut tokens = line.split_ascii_whitespace();
            match tokens.next() {
                None | Some("c") => continue,
                Some("p") => {
                    if n.is_some() {
                        return Err(DimacsError::DuplicateProblemLine { line: line_no });
                    }
                    // format tag ("edge" or "col" in the wild) is not checked
                    let _format = tokens.next();
                    let nodes = parse_token(tokens.next(), line_no)?;
                    let _m: usize = parse_token(tokens.next(), line_no)?;
                    if nodes == 0 {
                        return Err(DimacsError::EmptyNodeSet { line: line_no });
                    }
                    n = Some(nodes);
                }
                Some("e") => {
                    let n = n.ok_or(DimacsError::EdgeBeforeProblemLine { line: line_no })?;
                    let u: usize = parse_token(tokens.next(), line_no)?;
                    let v: usize = parse_token(tokens.next(), line_no)?;
                    for endpoint in [u, v] {
                        if endpoint < 1 || endpoint > n {
                            return Err(DimacsError::EdgeOutOfRange { line: line_no, endpoint, n });
                        }
                    }
                    if u != v {
                        edges.push((u - 1, v - 1));
                    }
                }
                Some(other) => {
                    return Err(DimacsError::BadToken { line: line_no, token: other.to_string() })
                }
            }
        }

        let n = n.ok_or(DimacsError::MissingProblemLine)?;
        Ok(Graph::from_edges(n, &edges))
    }

    /// Parses a DIMACS file from disk.
    pub fn load_dimacs<P: AsRef<Path>>(path: P) -> Result<Self, DimacsError> {
        Graph::parse_dimacs(BufReader::new(File::open(path)?))
    }

    /// Renders the graph back to DIMACS text (edges once each, `u < v`,
    /// 1-based). Inverse of [`Graph::parse_dimacs`] up to comments.
    pub fn to_dimacs(&self) -> String {
        let m = self.edge_count();
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.n, m);
        for u in 0..self.n {
            for &v in &self.adjacency[u] {
                let v = v as usize;
                if u < v {
                    let _ = writeln!(out, "e {} {}", u + 1, v + 1);
                }
            }
        }
        out
    }

    /// Replaces node weights with the degree-based cost `(deg(v)+1)^2`.
    pub fn with_degree_squared_costs(mut self) -> Self {
        for i in 0..self.n {
            let d = self.adjacency[i].len() as u64;
            self.weights[i] = (d + 1) * (d + 1);
        }
        self
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Sum of all node weights (the cost of the all-ones selection).
    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Seeded random graph in the style of the frb MIS benchmark
    /// family: `groups` disjoint cliques of `group_size` nodes, plus
    /// random inter-group edges confined to `constrained_pairs`
    /// randomly chosen group pairs, filled until `target_edges` edges
    /// exist. Fewer constrained pairs concentrate the cross edges and
    /// widen the degree distribution. Keeps experiments runnable when
    /// the published instances are not on disk.
    pub fn random_blocked(
        groups: usize,
        group_size: usize,
        constrained_pairs: usize,
        target_edges: usize,
        seed: u64,
    ) -> Self {
        assert!(groups >= 2 && group_size >= 2, "need at least 2 groups of 2");
        let n = groups * group_size;
        let all_pairs = groups * (groups - 1) / 2;
        assert!(
            (1..=all_pairs).contains(&constrained_pairs),
            "constrained pairs {constrained_pairs} outside 1..={all_pairs}"
        );
        let in_group = groups * group_size * (group_size - 1) / 2;
        assert!(
            target_edges >= in_group,
            "target {target_edges} below the {in_group} in-group edges"
        );
        let cross_capacity = constrained_pairs * group_size * group_size;
        assert!(
            target_edges - in_group <= cross_capacity,
            "target {target_edges} exceeds the {cross_capacity} cross slots"
        );

        let mut edges = Vec::with_capacity(target_edges);
        for g in 0..groups {
            let base = g * group_size;
            for a in 0..group_size {
                for b in (a + 1)..group_size {
                    edges.push((base + a, base + b));
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs: Vec<(usize, usize)> = (0..groups)
            .flat_map(|a| ((a + 1)..groups).map(move |b| (a, b)))
            .collect();
        pairs.shuffle(&mut rng);
        pairs.truncate(constrained_pairs);

        let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(target_edges);
        while edges.len() < target_edges {
            let &(ga, gb) = &pairs[rng.gen_range(0..pairs.len())];
            let u = ga * group_size + rng.gen_range(0..group_size);
            let v = gb * group_size + rng.gen_range(0..group_size);
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                edges.push(key);
            }
        }
        Graph::from_edges(n, &edges)
    }
}

fn parse_token<T: std::str::FromStr>(tok: Option<&str>, line: usize) -> Result<T, DimacsError> {
    let tok = tok.ok_or_else(|| DimacsError::BadToken { line, token: "<missing>".into() })?;
    tok.parse().map_err(|_| DimacsError::BadToken { line, token: tok.to_string() })
}
