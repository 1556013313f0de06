//! Directed separations `(A, B)`: `A ∪ B = V` and no arc runs from `B \ A`
//! into `A \ B`. The order of a separation is `|A ∩ B|`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::flow::disjoint_paths;
use crate::limits::Limits;
use crate::vertex_set::VertexSet;

/// An ordered pair of vertex sets; whether it is a separation of a given
/// digraph is checked by [`is_separation`].
///
/// `Ord` is lexicographic on the per-vertex colouring
/// `A \ B < A ∩ B < B \ A`, vertex 0 most significant. This is the order in
/// which [`enumerate_separations`] yields separations and the tie-break used
/// by every deterministic choice in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedSeparation {
    #[serde(rename = "A")]
    pub a: VertexSet,
    #[serde(rename = "B")]
    pub b: VertexSet,
}

impl DirectedSeparation {
    pub const fn new(a: VertexSet, b: VertexSet) -> Self {
        DirectedSeparation { a, b }
    }

    /// `(∅, V)`, the bottom of the separation lattice.
    pub fn bottom(n: usize) -> Self {
        DirectedSeparation::new(VertexSet::EMPTY, VertexSet::full(n))
    }

    /// `(V, ∅)`, the top of the separation lattice.
    pub fn top(n: usize) -> Self {
        DirectedSeparation::new(VertexSet::full(n), VertexSet::EMPTY)
    }

    pub fn order(&self) -> usize {
        self.separator().len()
    }

    /// `A ∩ B`.
    pub fn separator(&self) -> VertexSet {
        self.a.intersection(self.b)
    }

    /// `(A, B) <= (C, D)` iff `A ⊆ C` and `B ⊇ D`.
    pub fn leq(&self, other: &Self) -> bool {
        self.a.is_subset(other.a) && other.b.is_subset(self.b)
    }

    pub fn strictly_below(&self, other: &Self) -> bool {
        self != other && self.leq(other)
    }

    /// `(A ∩ C, B ∪ D)`.
    pub fn meet(&self, other: &Self) -> Self {
        DirectedSeparation::new(self.a.intersection(other.a), self.b.union(other.b))
    }

    /// `(A ∪ C, B ∩ D)`.
    pub fn join(&self, other: &Self) -> Self {
        DirectedSeparation::new(self.a.union(other.a), self.b.intersection(other.b))
    }

    fn color(&self, v: usize) -> u8 {
        match (self.a.contains(v), self.b.contains(v)) {
            (true, false) => 0,
            (true, true) => 1,
            (false, true) => 2,
            (false, false) => 3,
        }
    }
}

impl Ord for DirectedSeparation {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.a.bits() ^ other.a.bits()) | (self.b.bits() ^ other.b.bits());
        if diff == 0 {
            return Ordering::Equal;
        }
        let v = diff.trailing_zeros() as usize;
        self.color(v).cmp(&other.color(v))
    }
}

impl PartialOrd for DirectedSeparation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DirectedSeparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Display for DirectedSeparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn is_separation(d: &Digraph, a: VertexSet, b: VertexSet) -> bool {
    let all = d.vertices();
    if a.union(b) != all || !a.is_subset(all) || !b.is_subset(all) {
        return false;
    }
    let a_only = a.difference(b);
    b.difference(a).iter().all(|x| d.out_neighbors(x).is_disjoint(a_only))
}

impl DirectedSeparation {
    pub fn is_valid(&self, d: &Digraph) -> bool {
        is_separation(d, self.a, self.b)
    }
}

/// All separations of order at most `max_order`, in lexicographic colouring order.
pub fn enumerate_separations(
    d: &Digraph,
    max_order: usize,
    limits: &Limits,
) -> Result<Vec<DirectedSeparation>> {
    Limits::check("enumerate_vertices", limits.enumerate_vertices, d.n())?;
    let mut out = Vec::new();
    extend_colouring(d, 0, VertexSet::EMPTY, VertexSet::EMPTY, max_order, &mut out);
    Ok(out)
}

fn extend_colouring(
    d: &Digraph,
    v: usize,
    a: VertexSet,
    b: VertexSet,
    budget: usize,
    out: &mut Vec<DirectedSeparation>,
) {
    if v == d.n() {
        out.push(DirectedSeparation::new(a, b));
        return;
    }
    let a_only = a.difference(b);
    let b_only = b.difference(a);
    // v in A \ B: nothing already in B \ A may point at v
    if d.in_neighbors(v).is_disjoint(b_only) {
        extend_colouring(d, v + 1, a.with(v), b, budget, out);
    }
    if budget > 0 {
        extend_colouring(d, v + 1, a.with(v), b.with(v), budget - 1, out);
    }
    // v in B \ A: v may not point into A \ B
    if d.out_neighbors(v).is_disjoint(a_only) {
        extend_colouring(d, v + 1, a, b.with(v), budget, out);
    }
}

/// `λ(lo, hi)`: the least order of a separation sandwiched between `lo` and
/// `hi`, with a separation attaining it.
///
/// Computed as the maximum number of vertex-disjoint paths from
/// `hi.A ∩ hi.B` to `lo.A ∩ lo.B` inside `lo.B ∩ hi.A`. The witness is the
/// least minimiser in the `≤` order.
pub fn lambda(
    d: &Digraph,
    lo: &DirectedSeparation,
    hi: &DirectedSeparation,
) -> Result<(usize, DirectedSeparation)> {
    if !lo.leq(hi) {
        return Err(Error::Precondition(format!("lambda needs lo <= hi, got {lo} and {hi}")));
    }
    // Reversing all arcs turns (A, B) into (B, A) and flips the order, so the
    // greatest minimiser over the reversal is the least one here.
    let rev = d.reversed();
    let (value, top) = greatest_minimiser(
        &rev,
        &DirectedSeparation::new(hi.b, hi.a),
        &DirectedSeparation::new(lo.b, lo.a),
    );
    let witness = DirectedSeparation::new(top.b, top.a);
    debug_assert!(witness.is_valid(d));
    debug_assert!(lo.leq(&witness) && witness.leq(hi));
    debug_assert_eq!(witness.order(), value);
    Ok((value, witness))
}

fn greatest_minimiser(
    d: &Digraph,
    lo: &DirectedSeparation,
    hi: &DirectedSeparation,
) -> (usize, DirectedSeparation) {
    let linkage = disjoint_paths(d, hi.separator(), lo.separator(), lo.b.intersection(hi.a));
    let reached = linkage.source_side;
    let witness = DirectedSeparation::new(
        hi.a.difference(reached),
        d.vertices().difference(hi.a).union(reached).union(linkage.cut),
    );
    (linkage.len(), witness)
}

/// `x` is up-linked to `base` if `base <= x` and no separation between them has smaller order.
pub fn is_up_linked(d: &Digraph, x: &DirectedSeparation, base: &DirectedSeparation) -> bool {
    base.leq(x) && lambda(d, base, x).is_ok_and(|(value, _)| value == x.order())
}

/// `x` is down-linked to `base` if `x <= base` and no separation between them has smaller order.
pub fn is_down_linked(d: &Digraph, x: &DirectedSeparation, base: &DirectedSeparation) -> bool {
    x.leq(base) && lambda(d, x, base).is_ok_and(|(value, _)| value == x.order())
}
