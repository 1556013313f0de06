//! Finite simple digraphs on `0..n`, fixture generators and the edge-list format.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

/// A loopless digraph without parallel arcs on the vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Digraph {
    n: usize,
    out: Vec<VertexSet>,
    inn: Vec<VertexSet>,
}

impl Digraph {
    /// The arcless digraph on `n` vertices, `1 <= n <= 64`.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidParams(format!(
                "vertex count must lie in 1..={MAX_VERTICES}, got {n}"
            )));
        }
        Ok(Digraph {
            n,
            out: vec![VertexSet::EMPTY; n],
            inn: vec![VertexSet::EMPTY; n],
        })
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Digraph::empty(n)?;
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        if self.out[u].contains(v) {
            return Err(Error::DuplicateArc(u, v));
        }
        self.out[u].insert(v);
        self.inn[v].insert(u);
        Ok(())
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) -> bool {
        if !self.has_arc(u, v) {
            return false;
        }
        self.out[u].remove(v);
        self.inn[v].remove(u);
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out[u].contains(v)
    }

    pub fn out_neighbors(&self, v: usize) -> VertexSet {
        self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> VertexSet {
        self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    /// Out-neighbourhood of a set, excluding nothing.
    pub fn out_of(&self, set: VertexSet) -> VertexSet {
        set.iter().fold(VertexSet::EMPTY, |acc, v| acc.union(self.out[v]))
    }

    /// Vertices reachable from `sources` by directed paths avoiding `forbidden`.
    /// Sources inside `forbidden` are ignored.
    pub fn reachable(&self, sources: VertexSet, forbidden: VertexSet) -> VertexSet {
        let allowed = self.vertices().difference(forbidden);
        let mut seen = sources.intersection(allowed);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = self.out_of(frontier).intersection(allowed).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    /// True if the underlying undirected graph is connected.
    pub fn is_weakly_connected(&self) -> bool {
        let mut seen = VertexSet::singleton(0);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next.union(self.out[v]).union(self.inn[v]);
            }
            next = next.difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen == self.vertices()
    }

    /// True if the digraph has no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        let mut remaining = self.vertices();
        loop {
            let sources: VertexSet = remaining
                .iter()
                .filter(|&v| self.inn[v].is_disjoint(remaining))
                .collect();
            if sources.is_empty() {
                return remaining.is_empty();
            }
            remaining = remaining.difference(sources);
        }
    }

    /// The subdigraph induced on `keep`, relabelled to `0..keep.len()` in increasing order.
    pub fn induced(&self, keep: VertexSet) -> Result<Digraph> {
        let order = keep.to_vec();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            index[v] = i;
        }
        Digraph::from_arcs(
            order.len(),
            self.arcs()
                .filter(|&(u, v)| keep.contains(u) && keep.contains(v))
                .map(|(u, v)| (index[u], index[v])),
        )
    }

    /// The same digraph with every arc reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph { n: self.n, out: self.inn.clone(), inn: self.out.clone() }
    }

    /// Edge-list text accepted by [`parse_digraph`].
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in self.arcs() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    /// Arcs-only DOT text for visualisation.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 0..self.n {
            writeln!(s, "  {v};").unwrap();
        }
        for (u, v) in self.arcs() {
            writeln!(s, "  {u} -> {v};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// Parses the edge-list format: the first non-comment line holds the vertex
/// count, each further line one arc `u v`; `#` starts a comment.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut graph: Option<Digraph> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let malformed = |why: &str| Error::Parse {
            line: line_no,
            reason: format!("{why}: `{line}`"),
        };
        let number = |f: &str| f.parse::<usize>().map_err(|_| malformed("expected a non-negative integer"));
        match graph.as_mut() {
            None => {
                if fields.len() != 1 {
                    return Err(malformed("expected the vertex count"));
                }
                graph = Some(Digraph::empty(number(fields[0])?).map_err(|e| Error::Parse {
                    line: line_no,
                    reason: e.to_string(),
                })?);
            }
            Some(d) => {
                if fields.len() != 2 {
                    return Err(malformed("expected an arc `u v`"));
                }
                d.add_arc(number(fields[0])?, number(fields[1])?)?;
            }
        }
    }
    graph.ok_or(Error::Parse {
        line: 0,
        reason: "missing vertex count".into(),
    })
}

/// Fixture and random-instance families.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Directed cycle `0 -> 1 -> .. -> n-1 -> 0`.
    Cycle { n: usize },
    BidirectedComplete { n: usize },
    BidirectedPath { n: usize },
    /// Perfect binary tree of the given depth, heap-numbered, every edge in both directions.
    BidirectedTree { depth: usize },
    /// Each ordered pair is an arc independently with probability `p`.
    RandomDigraph { n: usize, p: f64, seed: u64 },
    /// Exactly one arc per unordered pair, direction by coin flip.
    RandomTournament { n: usize, seed: u64 },
    /// Vertex `i > 0` receives one arc from a uniformly chosen `j < i`.
    RandomArborescence { n: usize, seed: u64 },
}

pub fn generate(kind: &Generator) -> Result<Digraph> {
    let n = match *kind {
        Generator::BidirectedTree { depth } => {
            if depth >= 6 {
                return Err(Error::InvalidParams(format!(
                    "tree depth {depth} exceeds the {MAX_VERTICES}-vertex limit"
                )));
            }
            (1usize << (depth + 1)) - 1
        }
        Generator::Cycle { n }
        | Generator::BidirectedComplete { n }
        | Generator::BidirectedPath { n }
        | Generator::RandomDigraph { n, .. }
        | Generator::RandomTournament { n, .. }
        | Generator::RandomArborescence { n, .. } => n,
    };
    let mut d = Digraph::empty(n)?;
    match *kind {
        Generator::Cycle { n } => {
            if n >= 2 {
                for v in 0..n {
                    d.add_arc(v, (v + 1) % n)?;
                }
            }
        }
        Generator::BidirectedComplete { n } => {
            for u in 0..n {
                for v in (0..n).filter(|&v| v != u) {
                    d.add_arc(u, v)?;
                }
            }
        }
        Generator::BidirectedPath { n } => {
            for v in 1..n {
                d.add_arc(v - 1, v)?;
                d.add_arc(v, v - 1)?;
            }
        }
        Generator::BidirectedTree { .. } => {
            for v in 1..n {
                let parent = (v - 1) / 2;
                d.add_arc(parent, v)?;
                d.add_arc(v, parent)?;
            }
        }
        Generator::RandomDigraph { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("probability {p} outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(p) {
                        d.add_arc(u, v)?;
                    }
                }
            }
        }
        Generator::RandomTournament { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        d.add_arc(u, v)?;
                    } else {
                        d.add_arc(v, u)?;
                    }
                }
            }
        }
        Generator::RandomArborescence { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for v in 1..n {
                d.add_arc(rng.gen_range(0..v), v)?;
            }
        }
    }
    Ok(d)
}

/// Every labelled digraph on `n` vertices, indexed by a bitmask over the
/// `n(n-1)` ordered pairs. Intended for `n <= 4`.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    assert!(pairs.len() < 32, "all_digraphs is meant for tiny n");
    (0u32..1 << pairs.len()).map(move |mask| {
        Digraph::from_arcs(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a),
        )
        .expect("pairs are distinct and loop-free")
    })
}
