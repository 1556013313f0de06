//! Linked S-paths, the improvement loop producing them, the adhesion
//! subdivision, and checkers for the lean and well-linked conditions.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::flow::max_disjoint_paths;
use crate::limits::Limits;
use crate::separation::lambda;
use crate::spath::{BagDecomposition, SPath};
use crate::vertex_set::VertexSet;
use crate::width::min_width_spath;

/// The first pair `i < j` (smallest `i`, then smallest `j`) with
/// `λ(p_i, p_j)` below the least order on `p_i..=p_j`.
pub fn linked_violation(d: &Digraph, p: &SPath) -> Result<Option<(usize, usize)>> {
    let chain = p.chain();
    for i in 0..chain.len() {
        let mut low = chain[i].order();
        for j in i + 1..chain.len() {
            low = low.min(chain[j].order());
            if lambda(d, &chain[i], &chain[j])?.0 < low {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_linked(d: &Digraph, p: &SPath) -> bool {
    matches!(linked_violation(d, p), Ok(None))
}

/// For each `r >= 1`, the number of chain positions of order at least `r`
/// and the number of maximal runs they form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkPotential {
    /// `levels[r - 1] = (e_r, c_r)`.
    pub levels: Vec<(usize, usize)>,
}

impl LinkPotential {
    pub fn of(p: &SPath) -> Self {
        let orders: Vec<usize> = p.chain().iter().map(|s| s.order()).collect();
        let top = orders.iter().copied().max().unwrap_or(0);
        let levels = (1..=top)
            .map(|r| {
                let edges = orders.iter().filter(|&&o| o >= r).count();
                let runs = orders
                    .iter()
                    .enumerate()
                    .filter(|&(i, &o)| o >= r && (i == 0 || orders[i - 1] < r))
                    .count();
                (edges, runs)
            })
            .collect();
        LinkPotential { levels }
    }

    fn level(&self, r: usize) -> (usize, usize) {
        self.levels.get(r - 1).copied().unwrap_or((0, 0))
    }
}

impl PartialOrd for LinkPotential {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compared from the largest `r` down: fewer positions is smaller, and with
/// equal positions more runs is smaller.
impl Ord for LinkPotential {
    fn cmp(&self, other: &Self) -> Ordering {
        let top = self.levels.len().max(other.levels.len());
        for r in (1..=top).rev() {
            let ((e1, c1), (e2, c2)) = (self.level(r), other.level(r));
            let ord = e1.cmp(&e2).then(c2.cmp(&c1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }
}

/// Result of [`make_linked_traced`].
#[derive(Clone, Debug)]
pub struct LinkedRun {
    pub path: SPath,
    /// Potential before the first step and after every step.
    pub potentials: Vec<LinkPotential>,
}

impl LinkedRun {
    pub fn iterations(&self) -> usize {
        self.potentials.len() - 1
    }
}

/// A linked `S_k`-path of width `< ω − 1`.
pub fn make_linked(d: &Digraph, k: usize, omega: usize, limits: &Limits) -> Result<SPath> {
    make_linked_traced(d, k, omega, limits).map(|run| run.path)
}

pub fn make_linked_traced(d: &Digraph, k: usize, omega: usize, limits: &Limits) -> Result<LinkedRun> {
    let start = min_width_spath(d, k, omega, limits)?.ok_or_else(|| {
        Error::Precondition(format!("no S_{k}-path of width below {} exists", omega as i64 - 1))
    })?;
    link_path(d, start, k, omega)
}

/// Repeatedly repairs the first linkedness violation of `start` by shifting
/// both halves onto a λ-minimal separation and splicing them.
pub fn link_path(d: &Digraph, start: SPath, k: usize, omega: usize) -> Result<LinkedRun> {
    let mut path = start.normalized();
    let mut potentials = vec![LinkPotential::of(&path)];
    while let Some((i, j)) = linked_violation(d, &path)? {
        let chain = path.chain();
        let (_, xy) = lambda(d, &chain[i], &chain[j])?;
        let lower = path.down_shift(j, &xy)?;
        let upper = path.up_shift(i, &xy)?;
        let next = lower.splice(&upper)?.normalized();
        next.validate(d).map_err(|e| Error::Internal(format!("improved chain is invalid: {e}")))?;
        if !next.is_sk_path(k) || next.width() + 1 >= omega {
            return Err(Error::Internal(format!("improved chain broke its bounds: {next:?}")));
        }
        let potential = LinkPotential::of(&next);
        let before = potentials.last().expect("nonempty");
        if potential >= *before {
            return Err(Error::Internal(format!(
                "potential did not decrease at pair ({i}, {j}): {:?} -> {:?}",
                before.levels, potential.levels
            )));
        }
        potentials.push(potential);
        path = next;
    }
    Ok(LinkedRun { path, potentials })
}

/// Bags interleaved with the adhesion sets `A_i ∩ B_i`, normalised.
pub fn subdivide_adhesion(d: &Digraph, p: &SPath) -> Result<BagDecomposition> {
    if let Some((i, j)) = linked_violation(d, p)? {
        return Err(Error::Precondition(format!("chain is not linked at ({i}, {j})")));
    }
    let raw = p.raw_bags();
    let mut bags = Vec::with_capacity(2 * raw.len());
    for (t, bag) in raw.iter().enumerate() {
        bags.push(*bag);
        if let Some(s) = p.chain().get(t) {
            bags.push(s.separator());
        }
    }
    Ok(BagDecomposition::from_bags(bags)?.normalized())
}

/// The first `(i, j, t)` with `i < j` where every bag in `i..=j` has at least
/// `t` vertices but fewer than `t` disjoint paths run from `V_j` to `V_i`.
pub fn property_two_violation(d: &Digraph, b: &BagDecomposition) -> Option<(usize, usize, usize)> {
    let bags = b.bags();
    for i in 0..bags.len() {
        let mut t = bags[i].len();
        for j in i + 1..bags.len() {
            t = t.min(bags[j].len());
            if max_disjoint_paths(d, bags[j], bags[i]) < t {
                return Some((i, j, t));
            }
        }
    }
    None
}

/// A failure of the lean condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub k: usize,
    pub t1: usize,
    pub t2: usize,
    #[serde(rename = "Z1")]
    pub z1: VertexSet,
    #[serde(rename = "Z2")]
    pub z2: VertexSet,
}

/// Searches `k <= max_k`, `t1 <= t2`, `Z1 ⊆ V_t1`, `Z2 ⊆ V_t2` with
/// `|Z1| = |Z2| = k` for a tuple with fewer than `k` disjoint `Z2 → Z1`
/// paths although every adhesion in `t1..t2` has at least `k` vertices.
pub fn lean_check(b: &BagDecomposition, d: &Digraph, max_k: usize) -> Option<Violation> {
    let bags = b.bags();
    for k in 1..=max_k {
        for t1 in 0..bags.len() {
            for t2 in t1..bags.len() {
                if (t1..t2).any(|i| bags[i].intersection(bags[i + 1]).len() < k) {
                    break;
                }
                for z1 in bags[t1].subsets_of_size(k) {
                    for z2 in bags[t2].subsets_of_size(k) {
                        if max_disjoint_paths(d, z2, z1) < k {
                            return Some(Violation { k, t1, t2, z1, z2 });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Any two `k`-subsets `Z1, Z2` of `w` with `k <= max_k` are joined by `k`
/// disjoint `Z2 → Z1` paths.
pub fn well_linked_check(d: &Digraph, w: VertexSet, max_k: usize) -> bool {
    (1..=max_k.min(w.len())).all(|k| {
        w.subsets_of_size(k)
            .all(|z1| w.subsets_of_size(k).all(|z2| max_disjoint_paths(d, z2, z1) >= k))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{generate, Generator};
    use crate::separation::DirectedSeparation;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn sep(a: &[usize], b: &[usize]) -> DirectedSeparation {
        DirectedSeparation::new(set(a), set(b))
    }

    fn g(kind: Generator) -> Digraph {
        generate(&kind).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    fn c3_path() -> SPath {
        SPath::from_chain(vec![sep(&[0], &[0, 1, 2]), sep(&[0, 1], &[0, 2])]).unwrap()
    }

    #[test]
    fn linked_examples() {
        let c3 = g(Generator::Cycle { n: 3 });
        assert!(is_linked(&c3, &SPath::single(sep(&[0, 1], &[0, 2]))));
        assert!(is_linked(&c3, &c3_path()));
        let bp3 = g(Generator::BidirectedPath { n: 3 });
        assert!(is_linked(&bp3, &SPath::new(&bp3, vec![sep(&[0], &[0, 1, 2]), sep(&[0, 1, 2], &[2])]).unwrap()));
    }

    #[test]
    fn unlinked_chain_is_repaired() {
        // two vertices joined by 0 -> 1 only: order-2 plateau around an order-0 cut
        let d = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]).unwrap();
        let p = SPath::new(
            &d,
            vec![sep(&[0, 1], &[0, 1, 2, 3]), sep(&[0, 1, 2, 3], &[2, 3])],
        )
        .unwrap();
        assert_eq!(linked_violation(&d, &p).unwrap(), Some((0, 1)));
        let run = link_path(&d, p, 3, 5).unwrap();
        assert!(is_linked(&d, &run.path));
        assert!(run.iterations() >= 1);
        assert!(run.potentials.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn make_linked_examples() {
        let c3 = g(Generator::Cycle { n: 3 });
        let run = make_linked_traced(&c3, 2, 3, &lim()).unwrap();
        assert_eq!(run.iterations(), 0);
        assert!(is_linked(&c3, &run.path) && run.path.width() <= 1);

        let bk3 = g(Generator::BidirectedComplete { n: 3 });
        let p = make_linked(&bk3, 4, 4, &lim()).unwrap();
        assert!(is_linked(&bk3, &p) && p.width() == 2 && p.is_sk_path(4));
        let p = make_linked(&bk3, 3, 4, &lim()).unwrap();
        assert!(is_linked(&bk3, &p) && p.width() == 2 && p.is_sk_path(3));
        assert!(matches!(make_linked(&bk3, 3, 3, &lim()), Err(Error::Precondition(_))));

        let dag = g(Generator::RandomArborescence { n: 6, seed: 1 });
        let p = make_linked(&dag, 1, 2, &lim()).unwrap();
        assert!(is_linked(&dag, &p) && p.width() == 0);
    }

    #[test]
    fn potential_order() {
        let low = LinkPotential { levels: vec![(3, 1), (1, 1)] };
        let high = LinkPotential { levels: vec![(1, 1), (2, 1)] };
        assert!(low < high);
        let more_runs = LinkPotential { levels: vec![(2, 2)] };
        let fewer_runs = LinkPotential { levels: vec![(2, 1)] };
        assert!(more_runs < fewer_runs);
        let p = SPath::from_chain(vec![sep(&[0], &[0, 1]), sep(&[0, 1], &[]), sep(&[0, 1], &[1])]).unwrap();
        assert_eq!(LinkPotential::of(&p).levels, vec![(2, 2)]);
    }

    #[test]
    fn subdivision_examples() {
        let c3 = g(Generator::Cycle { n: 3 });
        let b = subdivide_adhesion(&c3, &c3_path()).unwrap();
        assert_eq!(b.bags(), &[set(&[0]), set(&[0, 1]), set(&[0]), set(&[0, 2])]);
        b.validate(&c3).unwrap();
        assert_eq!(property_two_violation(&c3, &b), None);

        let whole = SPath::single(DirectedSeparation::top(3));
        assert_eq!(subdivide_adhesion(&c3, &whole).unwrap().bags(), &[c3.vertices()]);

        let bk3 = g(Generator::BidirectedComplete { n: 3 });
        let p = make_linked(&bk3, 4, 4, &lim()).unwrap();
        let b = subdivide_adhesion(&bk3, &p).unwrap();
        assert_eq!(property_two_violation(&bk3, &b), None);
    }

    #[test]
    fn lean_examples() {
        let c3 = g(Generator::Cycle { n: 3 });
        let b = BagDecomposition::new(&c3, vec![set(&[0]), set(&[0, 1]), set(&[0, 2])]).unwrap();
        assert_eq!(lean_check(&b, &c3, 0), None);
        // the only 2-subsets sit in single bags, where identity paths suffice
        assert_eq!(lean_check(&b, &c3, 2), None);
        let two = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let split = BagDecomposition::new(&two, vec![set(&[0]), set(&[1])]).unwrap();
        assert_eq!(lean_check(&split, &two, 1), None);
        let whole = BagDecomposition::new(&two, vec![set(&[0, 1])]).unwrap();
        assert_eq!(
            lean_check(&whole, &two, 1),
            Some(Violation { k: 1, t1: 0, t2: 0, z1: set(&[0]), z2: set(&[1]) })
        );
        let text = serde_json::to_string(&Violation { k: 1, t1: 0, t2: 2, z1: set(&[0]), z2: set(&[2]) }).unwrap();
        assert_eq!(text, r#"{"k":1,"t1":0,"t2":2,"Z1":[0],"Z2":[2]}"#);
    }

    #[test]
    fn well_linked_examples() {
        let bk3 = g(Generator::BidirectedComplete { n: 3 });
        assert!(well_linked_check(&bk3, bk3.vertices(), 3));
        let c3 = g(Generator::Cycle { n: 3 });
        assert!(well_linked_check(&c3, set(&[1]), 3));
        let bp3 = g(Generator::BidirectedPath { n: 3 });
        assert!(well_linked_check(&bp3, set(&[0, 2]), 2));
        let two = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert!(!well_linked_check(&two, set(&[0, 1]), 1));
    }
}
