//! Vertex-disjoint directed paths between vertex sets (Menger), via unit
//! vertex capacities on a split network.

use std::collections::VecDeque;

use crate::digraph::Digraph;
use crate::vertex_set::VertexSet;

/// A maximum family of vertex-disjoint paths together with a minimum vertex cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linkage {
    /// Each path starts in the source set and ends in the sink set; a vertex in
    /// both sets may form a single-vertex path.
    pub paths: Vec<Vec<usize>>,
    /// A minimum set of vertices meeting every source-to-sink path; `|cut| == paths.len()`.
    pub cut: VertexSet,
    /// Vertices reachable from the sources avoiding `cut` (the cut itself excluded).
    pub source_side: VertexSet,
}

impl Linkage {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

struct Network {
    head: Vec<usize>,
    cap: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: usize) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// Residual reachability from `s`, with the BFS parent edge of each node.
    fn search(&self, s: usize) -> (Vec<bool>, Vec<usize>) {
        let mut seen = vec![false; self.adj.len()];
        let mut via = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(x) = queue.pop_front() {
            for &e in &self.adj[x] {
                let y = self.head[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    queue.push_back(y);
                }
            }
        }
        (seen, via)
    }
}

/// Maximum family of vertex-disjoint directed paths from `from` to `to` in the
/// subdigraph induced on `within`.
pub fn disjoint_paths(d: &Digraph, from: VertexSet, to: VertexSet, within: VertexSet) -> Linkage {
    let n = d.n();
    let within = within.intersection(d.vertices());
    let (v_in, v_out) = (|v: usize| 2 * v, |v: usize| 2 * v + 1);
    let (s, t) = (2 * n, 2 * n + 1);
    let big = n + 1;
    let mut net = Network::new(2 * n + 2);
    for v in within {
        net.add_edge(v_in(v), v_out(v), 1);
        for w in d.out_neighbors(v).intersection(within) {
            net.add_edge(v_out(v), v_in(w), big);
        }
    }
    for v in from.intersection(within) {
        net.add_edge(s, v_in(v), big);
    }
    for v in to.intersection(within) {
        net.add_edge(v_out(v), t, big);
    }
    let original = net.cap.clone();

    loop {
        let (seen, via) = net.search(s);
        if !seen[t] {
            break;
        }
        let mut x = t;
        while x != s {
            let e = via[x];
            net.cap[e] -= 1;
            net.cap[e ^ 1] += 1;
            x = net.head[e ^ 1];
        }
    }

    let (seen, _) = net.search(s);
    let mut cut = VertexSet::EMPTY;
    let mut source_side = VertexSet::EMPTY;
    for v in within {
        match (seen[v_in(v)], seen[v_out(v)]) {
            (_, true) => source_side.insert(v),
            (true, false) => cut.insert(v),
            _ => {}
        }
    }

    // peel the flow into paths
    let mut flow: Vec<usize> = original.iter().zip(&net.cap).map(|(&c, &r)| c.saturating_sub(r)).collect();
    let mut paths = Vec::new();
    while let Some(&first) = net.adj[s].iter().find(|&&e| e % 2 == 0 && flow[e] > 0) {
        flow[first] -= 1;
        let mut node = net.head[first];
        let mut path = Vec::new();
        while node != t {
            if node.is_multiple_of(2) {
                path.push(node / 2);
            }
            let e = *net.adj[node]
                .iter()
                .find(|&&e| e % 2 == 0 && flow[e] > 0)
                .expect("flow conservation");
            flow[e] -= 1;
            node = net.head[e];
        }
        paths.push(path);
    }
    debug_assert_eq!(paths.len(), cut.len());
    Linkage {
        paths,
        cut,
        source_side,
    }
}

/// Number of vertex-disjoint paths from `from` to `to` in the whole digraph.
pub fn max_disjoint_paths(d: &Digraph, from: VertexSet, to: VertexSet) -> usize {
    disjoint_paths(d, from, to, d.vertices()).len()
}
