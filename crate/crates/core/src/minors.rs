//! Butterfly-minor operations and arborescence embeddings with checkable certificates.

use std::collections::{BTreeMap, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::flow::disjoint_paths;
use crate::limits::Limits;
use crate::separation::{lambda, DirectedSeparation};
use crate::vertex_set::VertexSet;
use crate::width::{dpw_exact, SPrime};

/// `(u, v)` may be contracted when `d⁻(v) = 1` or `d⁺(u) = 1`.
pub fn is_contractible(d: &Digraph, u: usize, v: usize) -> bool {
    d.has_arc(u, v) && (d.in_degree(v) == 1 || d.out_degree(u) == 1)
}

/// Contracts `(u, v)` into one vertex, dropping loops and parallel arcs.
///
/// The merged vertex takes the smaller label, later vertices shift down by
/// one. Returns the new digraph and the old-to-new vertex map.
pub fn butterfly_contract(d: &Digraph, u: usize, v: usize) -> Result<(Digraph, Vec<usize>)> {
    if !d.has_arc(u, v) {
        return Err(Error::InvalidInput(format!("{u}->{v} is not an arc")));
    }
    if !is_contractible(d, u, v) {
        return Err(Error::Precondition(format!("{u}->{v} is not contractible")));
    }
    let (keep, gone) = (u.min(v), u.max(v));
    let map: Vec<usize> = (0..d.n())
        .map(|x| match x {
            x if x == gone => keep,
            x if x > gone => x - 1,
            x => x,
        })
        .collect();
    Ok((quotient(d, &map, d.n() - 1)?, map))
}

fn quotient(d: &Digraph, map: &[usize], n: usize) -> Result<Digraph> {
    let mut out = Digraph::empty(n)?;
    for (x, y) in d.arcs() {
        let (a, b) = (map[x], map[y]);
        if a != b && !out.has_arc(a, b) {
            out.add_arc(a, b)?;
        }
    }
    Ok(out)
}

/// Removes `v`; later vertices shift down by one. The map sends `v` to `usize::MAX`.
pub fn delete_vertex(d: &Digraph, v: usize) -> Result<(Digraph, Vec<usize>)> {
    if v >= d.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: d.n() });
    }
    let keep = d.vertices().without(v);
    let map = (0..d.n())
        .map(|x| match x {
            x if x == v => usize::MAX,
            x if x > v => x - 1,
            x => x,
        })
        .collect();
    Ok((d.induced(keep)?, map))
}

pub fn delete_arc(d: &Digraph, u: usize, v: usize) -> Result<Digraph> {
    let mut out = d.clone();
    if !out.remove_arc(u, v) {
        return Err(Error::InvalidInput(format!("{u}->{v} is not an arc")));
    }
    Ok(out)
}

/// Root of an arborescence: the unique vertex without in-arcs, from which
/// every vertex is reached along the unique in-arcs of the others.
pub fn arborescence_root(f: &Digraph) -> Option<usize> {
    let mut roots = (0..f.n()).filter(|&v| f.in_degree(v) == 0);
    let root = roots.next()?;
    if roots.next().is_some() || (0..f.n()).any(|v| v != root && f.in_degree(v) != 1) {
        return None;
    }
    (f.reachable(VertexSet::singleton(root), VertexSet::EMPTY) == f.vertices()).then_some(root)
}

/// Canonical string of the rooted tree below `root`; equal strings mean isomorphic trees.
pub fn canonical_form(f: &Digraph, root: usize) -> String {
    let mut children: Vec<String> = f.out_neighbors(root).iter().map(|c| canonical_form(f, c)).collect();
    children.sort();
    format!("({})", children.concat())
}

/// A butterfly-minor model of an arborescence `pattern` in a host digraph:
/// one directed branch path per pattern vertex and one host arc per pattern arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelMap {
    pub pattern: Digraph,
    /// `paths[j]` is the branch path of pattern vertex `j`.
    pub paths: Vec<Vec<usize>>,
    /// Host arcs from a parent's branch path to the first vertex of the child's.
    pub connect: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename = "model")]
struct ModelJson {
    pattern: PatternJson,
    paths: BTreeMap<usize, Vec<usize>>,
    connect: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Serialize for ModelMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModelJson {
            pattern: PatternJson { n: self.pattern.n(), arcs: self.pattern.arcs().collect() },
            paths: self.paths.iter().cloned().enumerate().collect(),
            connect: self.connect.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModelMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ModelJson::deserialize(d)?;
        let pattern = Digraph::from_arcs(raw.pattern.n, raw.pattern.arcs).map_err(D::Error::custom)?;
        if raw.paths.keys().copied().ne(0..pattern.n()) {
            return Err(D::Error::custom("paths must be keyed by every pattern vertex"));
        }
        Ok(ModelMap { pattern, paths: raw.paths.into_values().collect(), connect: raw.connect })
    }
}

/// Why a model fails verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingDefect {
    Malformed(String),
    NotAPath(usize),
    Disjointness(usize),
    MissingArc(usize, usize),
    ConnectEndpoint(usize, usize),
    NotContractible(usize, usize),
    NotIsomorphic,
}

impl EmbeddingDefect {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            EmbeddingDefect::Malformed(_) => "malformed",
            EmbeddingDefect::NotAPath(_) => "not-a-path",
            EmbeddingDefect::Disjointness(_) => "disjointness",
            EmbeddingDefect::MissingArc(..) => "missing-arc",
            EmbeddingDefect::ConnectEndpoint(..) => "connect-endpoint",
            EmbeddingDefect::NotContractible(..) => "not-contractible",
            EmbeddingDefect::NotIsomorphic => "not-isomorphic",
        }
    }
}

impl fmt::Display for EmbeddingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingDefect::Malformed(why) => write!(f, "malformed model: {why}"),
            EmbeddingDefect::NotAPath(j) => write!(f, "branch path {j} is not a directed path"),
            EmbeddingDefect::Disjointness(v) => write!(f, "vertex {v} lies on two branch paths"),
            EmbeddingDefect::MissingArc(u, v) => write!(f, "{u}->{v} is not a host arc"),
            EmbeddingDefect::ConnectEndpoint(u, v) => {
                write!(f, "{u}->{v} does not join a parent branch to the start of a child branch")
            }
            EmbeddingDefect::NotContractible(u, v) => write!(f, "{u}->{v} is not contractible"),
            EmbeddingDefect::NotIsomorphic => write!(f, "contracted model is not isomorphic to the pattern"),
        }
    }
}

pub fn verify_embedding(host: &Digraph, m: &ModelMap) -> bool {
    check_embedding(host, m).is_ok()
}

/// Checks a model against its host, contracting every branch-path arc inside
/// the model subdigraph and comparing the result with the pattern.
pub fn check_embedding(host: &Digraph, m: &ModelMap) -> std::result::Result<(), EmbeddingDefect> {
    let p = &m.pattern;
    let root = arborescence_root(p)
        .ok_or_else(|| EmbeddingDefect::Malformed("pattern is not an arborescence".into()))?;
    if m.paths.len() != p.n() {
        return Err(EmbeddingDefect::Malformed("need one branch path per pattern vertex".into()));
    }
    if m.connect.len() != p.arc_count() {
        return Err(EmbeddingDefect::Malformed("need one connect arc per pattern arc".into()));
    }
    let mut owner = vec![usize::MAX; host.n()];
    for (j, path) in m.paths.iter().enumerate() {
        if path.is_empty() {
            return Err(EmbeddingDefect::NotAPath(j));
        }
        for &v in path {
            if v >= host.n() {
                return Err(EmbeddingDefect::Malformed(format!("vertex {v} is not in the host")));
            }
            if owner[v] != usize::MAX {
                return Err(EmbeddingDefect::Disjointness(v));
            }
            owner[v] = j;
        }
        for w in path.windows(2) {
            if !host.has_arc(w[0], w[1]) {
                return Err(EmbeddingDefect::MissingArc(w[0], w[1]));
            }
        }
    }
    let mut model_arcs: Vec<(usize, usize)> =
        m.paths.iter().flat_map(|path| path.windows(2).map(|w| (w[0], w[1]))).collect();
    for &(u, v) in &m.connect {
        if u >= host.n() || v >= host.n() || !host.has_arc(u, v) {
            return Err(EmbeddingDefect::MissingArc(u, v));
        }
        let (from, to) = (owner[u], owner[v]);
        if from == usize::MAX || to == usize::MAX || from == to || m.paths[to][0] != v {
            return Err(EmbeddingDefect::ConnectEndpoint(u, v));
        }
        model_arcs.push((u, v));
    }

    // relabel the model subdigraph compactly and contract branch arcs one by one
    let used: Vec<usize> = (0..host.n()).filter(|&v| owner[v] != usize::MAX).collect();
    let mut label = vec![usize::MAX; host.n()];
    for (i, &v) in used.iter().enumerate() {
        label[v] = i;
    }
    let mut model = Digraph::from_arcs(used.len(), model_arcs.iter().map(|&(u, v)| (label[u], label[v])))
        .map_err(|e| EmbeddingDefect::Malformed(e.to_string()))?;
    let mut place: Vec<usize> = (0..used.len()).collect();
    for path in &m.paths {
        for w in path.windows(2) {
            let (a, b) = (place[label[w[0]]], place[label[w[1]]]);
            if !is_contractible(&model, a, b) {
                return Err(EmbeddingDefect::NotContractible(w[0], w[1]));
            }
            let (next, map) = butterfly_contract(&model, a, b)
                .map_err(|_| EmbeddingDefect::NotContractible(w[0], w[1]))?;
            for x in place.iter_mut() {
                *x = map[*x];
            }
            model = next;
        }
    }
    let model_root = arborescence_root(&model).ok_or(EmbeddingDefect::NotIsomorphic)?;
    if model.n() != p.n() || canonical_form(&model, model_root) != canonical_form(p, root) {
        return Err(EmbeddingDefect::NotIsomorphic);
    }
    Ok(())
}

/// Pattern vertices with every vertex after its parent, smallest label first among ties.
fn pattern_order(f: &Digraph, root: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(f.n());
    let mut ready = BinaryHeap::from([Reverse(root)]);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        ready.extend(f.out_neighbors(v).iter().map(Reverse));
    }
    order
}

fn internal(msg: String) -> Error {
    Error::Internal(msg)
}

/// Finds the arborescence `f` as a butterfly minor of `d`, which must be weakly
/// connected with directed path-width at least `|V(f)| − 1`.
pub fn embed_arborescence(d: &Digraph, f: &Digraph, limits: &Limits) -> Result<ModelMap> {
    let root = arborescence_root(f)
        .ok_or_else(|| Error::Precondition("pattern is not an arborescence".into()))?;
    if !d.is_weakly_connected() {
        return Err(Error::Precondition("host digraph is not weakly connected".into()));
    }
    let n = f.n() - 1;
    let dpw = dpw_exact(d, limits)?.dpw;
    if dpw < n {
        return Err(Error::Precondition(format!(
            "host has directed path-width {dpw}, below |V(F)| - 1 = {n}"
        )));
    }
    let order = pattern_order(f, root);
    let mut position = vec![0; f.n()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let sprime = SPrime::new(d, n, limits)?;
    let members: Vec<DirectedSeparation> = sprime.members().copied().collect();

    let (mut cur, _) = first_minimal(&members, |s| s.order() == 0)
        .ok_or_else(|| internal("no order-0 separation in S'".into()))?;
    let x00 = cur
        .a
        .difference(cur.b)
        .first()
        .ok_or_else(|| internal("C_0 \\ D_0 is empty".into()))?;
    // labels[j] = x^i_j at the current level i; pieces[j] collects P_j
    let mut labels = vec![x00];
    let mut pieces: Vec<Vec<usize>> = vec![vec![x00]];
    let mut connect = Vec::with_capacity(n);

    for i in 1..=n {
        let newest = labels[i - 1];
        let hi = DirectedSeparation::new(cur.a, cur.b.with(newest));
        let (lo, _) = first_minimal(&members, |s| s.order() == i && s.leq(&hi))
            .ok_or_else(|| internal(format!("no candidate separation at level {i}")))?;
        if lo.order() != i {
            return Err(internal(format!("level {i} separation has order {}", lo.order())));
        }
        let (value, _) = lambda(d, &lo, &hi)?;
        if value != i {
            return Err(internal(format!("lambda at level {i} is {value}, not {i}")));
        }
        let linkage = disjoint_paths(d, hi.separator(), lo.separator(), lo.b.intersection(hi.a));
        if linkage.len() != i {
            return Err(internal(format!("found {} linking paths at level {i}", linkage.len())));
        }
        let mut next = vec![usize::MAX; i];
        for path in &linkage.paths {
            let j = labels
                .iter()
                .position(|&x| x == path[0])
                .ok_or_else(|| internal(format!("linking path at level {i} starts off the boundary")))?;
            next[j] = path[path.len() - 1];
            pieces[j].extend_from_slice(&path[1..]);
        }
        let inside = lo.a.difference(lo.b);
        if let Some(&x) = next.iter().find(|&&x| d.out_neighbors(x).is_disjoint(inside)) {
            return Err(internal(format!("boundary vertex {x} has no out-neighbour in C_{i} \\ D_{i}")));
        }
        let parent = f
            .in_neighbors(order[i])
            .first()
            .ok_or_else(|| internal("non-root pattern vertex without parent".into()))?;
        let tail = next[position[parent]];
        let head = d
            .out_neighbors(tail)
            .intersection(inside)
            .first()
            .ok_or_else(|| internal(format!("no out-neighbour for {tail} at level {i}")))?;
        connect.push((tail, head));
        next.push(head);
        pieces.push(vec![head]);
        labels = next;
        cur = lo;
    }

    let mut paths = vec![Vec::new(); f.n()];
    for (i, piece) in pieces.into_iter().enumerate() {
        paths[order[i]] = piece;
    }
    let model = ModelMap { pattern: f.clone(), paths, connect };
    check_embedding(d, &model).map_err(|why| internal(format!("constructed model rejected: {why}")))?;
    Ok(model)
}

/// The lexicographically first ≤-minimal element among those satisfying `keep`.
fn first_minimal<F>(members: &[DirectedSeparation], keep: F) -> Option<(DirectedSeparation, usize)>
where
    F: Fn(&DirectedSeparation) -> bool,
{
    let candidates: Vec<&DirectedSeparation> = members.iter().filter(|s| keep(s)).collect();
    candidates
        .iter()
        .position(|s| !candidates.iter().any(|t| t.strictly_below(s)))
        .map(|i| (*candidates[i], candidates.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{generate, Generator};

    fn g(kind: Generator) -> Digraph {
        generate(&kind).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn contraction_examples() {
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(is_contractible(&path, 0, 1));
        let (c, map) = butterfly_contract(&path, 0, 1).unwrap();
        assert_eq!((c.n(), c.arcs().collect::<Vec<_>>()), (2, vec![(0, 1)]));
        assert_eq!(map, vec![0, 0, 1]);

        let d = Digraph::from_arcs(4, [(0, 1), (2, 1), (0, 3)]).unwrap();
        assert!(!is_contractible(&d, 0, 1));
        assert!(matches!(butterfly_contract(&d, 0, 1), Err(Error::Precondition(_))));
        let d = Digraph::from_arcs(3, [(0, 1), (2, 1)]).unwrap();
        assert!(is_contractible(&d, 0, 1));

        let c3 = g(Generator::Cycle { n: 3 });
        let (c, _) = butterfly_contract(&c3, 2, 0).unwrap();
        assert_eq!(c.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        let (c, map) = delete_vertex(&c3, 1).unwrap();
        assert_eq!((c.arcs().collect::<Vec<_>>(), map), (vec![(1, 0)], vec![0, usize::MAX, 1]));
        assert_eq!(delete_arc(&c3, 0, 1).unwrap().arc_count(), 2);
        assert!(delete_arc(&c3, 1, 0).is_err());
    }

    #[test]
    fn arborescence_recognition() {
        let star = Digraph::from_arcs(4, [(2, 0), (2, 1), (2, 3)]).unwrap();
        assert_eq!(arborescence_root(&star), Some(2));
        assert_eq!(arborescence_root(&g(Generator::Cycle { n: 3 })), None);
        assert_eq!(arborescence_root(&Digraph::from_arcs(3, [(0, 1)]).unwrap()), None);
        let path = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_ne!(canonical_form(&star, 2), canonical_form(&path, 0));
        let other = Digraph::from_arcs(4, [(0, 3), (0, 1), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&star, 2), canonical_form(&other, 0));
    }

    #[test]
    fn embedding_examples() {
        let c3 = g(Generator::Cycle { n: 3 });
        let single = Digraph::empty(1).unwrap();
        let m = embed_arborescence(&c3, &single, &lim()).unwrap();
        assert_eq!((m.paths.clone(), m.connect.clone()), (vec![vec![0]], vec![]));

        let k2 = g(Generator::BidirectedComplete { n: 2 });
        let edge = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let m = embed_arborescence(&k2, &edge, &lim()).unwrap();
        assert!(m.paths.iter().all(|p| p.len() == 1));
        assert_eq!(m.connect.len(), 1);
        assert!(verify_embedding(&k2, &m));

        let bk3 = g(Generator::BidirectedComplete { n: 3 });
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        let m = embed_arborescence(&bk3, &path, &lim()).unwrap();
        assert_eq!(m.connect.len(), 2);
        assert!(verify_embedding(&bk3, &m));
    }

    #[test]
    fn embedding_preconditions() {
        let c3 = g(Generator::Cycle { n: 3 });
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(embed_arborescence(&c3, &path, &lim()), Err(Error::Precondition(_))));
        assert!(matches!(embed_arborescence(&c3, &c3, &lim()), Err(Error::Precondition(_))));
        let split = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        let single = Digraph::empty(1).unwrap();
        assert!(matches!(embed_arborescence(&split, &single, &lim()), Err(Error::Precondition(_))));
    }

    #[test]
    fn verifier_rejections() {
        let bk3 = g(Generator::BidirectedComplete { n: 3 });
        let edge = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let good = ModelMap { pattern: edge.clone(), paths: vec![vec![0], vec![1]], connect: vec![(0, 1)] };
        assert_eq!(check_embedding(&bk3, &good), Ok(()));

        let shared = ModelMap { pattern: edge.clone(), paths: vec![vec![0, 1], vec![1]], connect: vec![(0, 1)] };
        assert_eq!(check_embedding(&bk3, &shared).unwrap_err().code(), "disjointness");

        let c3 = g(Generator::Cycle { n: 3 });
        let missing = ModelMap { pattern: edge.clone(), paths: vec![vec![1], vec![0]], connect: vec![(1, 0)] };
        assert_eq!(check_embedding(&c3, &missing).unwrap_err().code(), "missing-arc");

        let wrong_end = ModelMap { pattern: edge, paths: vec![vec![0], vec![2, 1]], connect: vec![(0, 1)] };
        assert_eq!(check_embedding(&bk3, &wrong_end).unwrap_err().code(), "connect-endpoint");
    }

    #[test]
    fn model_json() {
        let bk3 = g(Generator::BidirectedComplete { n: 3 });
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        let m = embed_arborescence(&bk3, &path, &lim()).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.starts_with(r#"{"kind":"model","pattern":{"n":3,"arcs":[[0,1],[1,2]]},"paths":{"0":"#), "{text}");
        assert_eq!(serde_json::from_str::<ModelMap>(&text).unwrap(), m);
    }
}
