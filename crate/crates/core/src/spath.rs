//! Monotone chains of separations and the bag decompositions they describe.
//!
//! A chain `[(A_1,B_1), …, (A_m,B_m)]` with the implicit ends `B_0 = V` and
//! `A_{m+1} = V` has bags `V_i = A_i ∩ B_{i−1}` for `i = 1..=m+1`. Indices in
//! this module are 0-based: bag `i` is `chain[i].a ∩ chain[i−1].b`.

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::separation::{is_separation, DirectedSeparation};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChainJson")]
pub struct SPath {
    chain: Vec<DirectedSeparation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BagsJson")]
pub struct BagDecomposition {
    bags: Vec<VertexSet>,
}

#[derive(Deserialize)]
struct ChainJson {
    chain: Vec<DirectedSeparation>,
}

impl TryFrom<ChainJson> for SPath {
    type Error = Error;
    fn try_from(raw: ChainJson) -> Result<Self> {
        SPath::from_chain(raw.chain)
    }
}

#[derive(Deserialize)]
struct BagsJson {
    bags: Vec<VertexSet>,
}

impl TryFrom<BagsJson> for BagDecomposition {
    type Error = Error;
    fn try_from(raw: BagsJson) -> Result<Self> {
        BagDecomposition::from_bags(raw.bags)
    }
}

impl SPath {
    /// Builds a chain without checking it against a digraph. It must be nonempty.
    pub fn from_chain(chain: Vec<DirectedSeparation>) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::InvalidInput("an S-path needs at least one separation".into()));
        }
        Ok(SPath { chain })
    }

    /// Builds a chain and checks that it is a monotone chain of separations of `d`.
    pub fn new(d: &Digraph, chain: Vec<DirectedSeparation>) -> Result<Self> {
        let p = SPath::from_chain(chain)?;
        p.validate(d)?;
        Ok(p)
    }

    pub fn single(s: DirectedSeparation) -> Self {
        SPath { chain: vec![s] }
    }

    pub fn chain(&self) -> &[DirectedSeparation] {
        &self.chain
    }

    pub fn into_chain(self) -> Vec<DirectedSeparation> {
        self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn first(&self) -> &DirectedSeparation {
        &self.chain[0]
    }

    pub fn last(&self) -> &DirectedSeparation {
        &self.chain[self.chain.len() - 1]
    }

    /// The ground set, recovered from any element (`A ∪ B = V`).
    pub fn ground(&self) -> VertexSet {
        self.chain[0].a.union(self.chain[0].b)
    }

    pub fn validate(&self, d: &Digraph) -> Result<()> {
        if self.chain.is_empty() {
            return Err(Error::InvalidInput("empty chain".into()));
        }
        for (i, s) in self.chain.iter().enumerate() {
            if !s.is_valid(d) {
                return Err(Error::InvalidInput(format!("chain element {i} {s} is not a separation")));
            }
        }
        for (i, w) in self.chain.windows(2).enumerate() {
            if !w[0].leq(&w[1]) {
                return Err(Error::InvalidInput(format!(
                    "chain is not monotone at {i}: {} is not below {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, d: &Digraph) -> bool {
        self.validate(d).is_ok()
    }

    /// All `len() + 1` bags, without normalisation.
    pub fn raw_bags(&self) -> Vec<VertexSet> {
        let v = self.ground();
        let mut bags = Vec::with_capacity(self.chain.len() + 1);
        let mut prev_b = v;
        for s in &self.chain {
            bags.push(s.a.intersection(prev_b));
            prev_b = s.b;
        }
        bags.push(prev_b);
        bags
    }

    pub fn width(&self) -> usize {
        self.raw_bags().iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Largest order along the chain.
    pub fn adhesion(&self) -> usize {
        self.chain.iter().map(|s| s.order()).max().unwrap_or(0)
    }

    /// Every element has order `< k`.
    pub fn is_sk_path(&self, k: usize) -> bool {
        self.chain.iter().all(|s| s.order() < k)
    }

    /// Collapses repeated consecutive separations.
    pub fn normalized(&self) -> SPath {
        let mut chain = self.chain.clone();
        chain.dedup();
        SPath { chain }
    }

    /// Up-shift onto `xy` from index `i`: `[(A_j ∪ X, B_j ∩ Y) : j ≥ i]`.
    pub fn up_shift(&self, i: usize, xy: &DirectedSeparation) -> Result<SPath> {
        let at = self.chain.get(i).ok_or_else(|| index_error(i, self.len()))?;
        if !at.leq(xy) {
            return Err(Error::Precondition(format!("up-shift needs {at} <= {xy}")));
        }
        Ok(SPath { chain: self.chain[i..].iter().map(|s| s.join(xy)).collect() })
    }

    /// Down-shift onto `xy` up to index `i`: `[(A_j ∩ X, B_j ∪ Y) : j ≤ i]`.
    pub fn down_shift(&self, i: usize, xy: &DirectedSeparation) -> Result<SPath> {
        let at = self.chain.get(i).ok_or_else(|| index_error(i, self.len()))?;
        if !xy.leq(at) {
            return Err(Error::Precondition(format!("down-shift needs {xy} <= {at}")));
        }
        Ok(SPath { chain: self.chain[..=i].iter().map(|s| s.meet(xy)).collect() })
    }

    /// Glues `suffix` after `self`; the shared junction appears once.
    pub fn splice(&self, suffix: &SPath) -> Result<SPath> {
        if self.last() != suffix.first() {
            return Err(Error::Precondition(format!(
                "splice junction mismatch: {} vs {}",
                self.last(),
                suffix.first()
            )));
        }
        let mut chain = self.chain.clone();
        chain.extend_from_slice(&suffix.chain[1..]);
        Ok(SPath { chain })
    }

    pub fn to_bags(&self) -> BagDecomposition {
        spath_to_bags(self)
    }
}

fn index_error(i: usize, len: usize) -> Error {
    Error::InvalidParams(format!("index {i} out of range for a chain of length {len}"))
}

impl BagDecomposition {
    pub fn from_bags(bags: Vec<VertexSet>) -> Result<Self> {
        if bags.is_empty() {
            return Err(Error::InvalidInput("a decomposition needs at least one bag".into()));
        }
        Ok(BagDecomposition { bags })
    }

    pub fn new(d: &Digraph, bags: Vec<VertexSet>) -> Result<Self> {
        let b = BagDecomposition::from_bags(bags)?;
        b.validate(d)?;
        Ok(b)
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn validate(&self, d: &Digraph) -> Result<()> {
        let all = d.vertices();
        let mut cover = VertexSet::EMPTY;
        for (i, b) in self.bags.iter().enumerate() {
            if !b.is_subset(all) {
                return Err(Error::InvalidInput(format!("bag {i} has vertices outside the digraph")));
            }
            cover = cover.union(*b);
        }
        if cover != all {
            return Err(Error::InvalidInput(format!(
                "bags miss vertices {}",
                all.difference(cover)
            )));
        }
        let (first, last) = self.spans(d.n());
        for v in 0..d.n() {
            if let Some(t) = (first[v]..=last[v]).find(|&t| !self.bags[t].contains(v)) {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} is in bags {} and {} but not in bag {t}",
                    first[v], last[v]
                )));
            }
        }
        for (x, y) in d.arcs() {
            if first[x] > last[y] {
                return Err(Error::InvalidInput(format!("arc {x}->{y} points backwards")));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, d: &Digraph) -> bool {
        self.validate(d).is_ok()
    }

    /// First and last bag index of every vertex; vertices in no bag get `(usize::MAX, 0)`.
    fn spans(&self, n: usize) -> (Vec<usize>, Vec<usize>) {
        let mut first = vec![usize::MAX; n];
        let mut last = vec![0; n];
        for (t, b) in self.bags.iter().enumerate() {
            for v in b.iter().filter(|&v| v < n) {
                first[v] = first[v].min(t);
                last[v] = t;
            }
        }
        (first, last)
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn adhesion(&self) -> usize {
        self.bags.windows(2).map(|w| w[0].intersection(w[1]).len()).max().unwrap_or(0)
    }

    /// Drops empty bags at both ends and collapses repeated consecutive bags.
    pub fn normalized(&self) -> BagDecomposition {
        BagDecomposition { bags: normalize_bags(&self.bags) }
    }

    pub fn to_spath(&self, d: &Digraph) -> Result<SPath> {
        bags_to_spath(d, self)
    }
}

fn normalize_bags(bags: &[VertexSet]) -> Vec<VertexSet> {
    let start = bags.iter().position(|b| !b.is_empty());
    let Some(start) = start else {
        return bags.iter().take(1).copied().collect();
    };
    let end = bags.iter().rposition(|b| !b.is_empty()).unwrap_or(start);
    let mut out: Vec<VertexSet> = bags[start..=end].to_vec();
    out.dedup();
    out
}

/// The normalised bag sequence of a chain.
pub fn spath_to_bags(p: &SPath) -> BagDecomposition {
    BagDecomposition { bags: normalize_bags(&p.raw_bags()) }
}

/// Prefix/suffix unions of the bags. A single bag gives the chain `[(V, V)]`.
pub fn bags_to_spath(d: &Digraph, b: &BagDecomposition) -> Result<SPath> {
    b.validate(d)?;
    let bags = &b.bags;
    if bags.len() == 1 {
        let v = d.vertices();
        return Ok(SPath::single(DirectedSeparation::new(v, v)));
    }
    let mut suffix = vec![VertexSet::EMPTY; bags.len() + 1];
    for t in (0..bags.len()).rev() {
        suffix[t] = suffix[t + 1].union(bags[t]);
    }
    let mut prefix = VertexSet::EMPTY;
    let mut chain = Vec::with_capacity(bags.len() - 1);
    for t in 0..bags.len() - 1 {
        prefix = prefix.union(bags[t]);
        let s = DirectedSeparation::new(prefix, suffix[t + 1]);
        debug_assert!(is_separation(d, s.a, s.b));
        chain.push(s);
    }
    Ok(SPath { chain })
}

/// Every element has order `< k` and every `(A_i, B_{i−1})` is a separation of
/// order `< k`. Requires width `< k − 1`.
pub fn check_lemma_prop(d: &Digraph, p: &SPath, k: usize) -> Result<bool> {
    if p.width() + 1 >= k {
        return Err(Error::Precondition(format!(
            "width {} is not below k - 1 = {}",
            p.width(),
            k as i64 - 1
        )));
    }
    if !p.is_sk_path(k) {
        return Ok(false);
    }
    let v = d.vertices();
    let mut prev_b = v;
    for s in p.chain.iter().chain(std::iter::once(&DirectedSeparation::new(v, VertexSet::EMPTY))) {
        let cross = DirectedSeparation::new(s.a, prev_b);
        if !cross.is_valid(d) || cross.order() >= k {
            return Ok(false);
        }
        prev_b = s.b;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{generate, Generator};

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn sep(a: &[usize], b: &[usize]) -> DirectedSeparation {
        DirectedSeparation::new(set(a), set(b))
    }

    fn g(kind: Generator) -> Digraph {
        generate(&kind).unwrap()
    }

    fn c3_path() -> SPath {
        SPath::from_chain(vec![sep(&[0], &[0, 1, 2]), sep(&[0, 1], &[0, 2])]).unwrap()
    }

    #[test]
    fn c3_chain_bags() {
        let d = g(Generator::Cycle { n: 3 });
        let p = c3_path();
        p.validate(&d).unwrap();
        let b = spath_to_bags(&p);
        assert_eq!(b.bags(), &[set(&[0]), set(&[0, 1]), set(&[0, 2])]);
        b.validate(&d).unwrap();
        assert_eq!(bags_to_spath(&d, &b).unwrap(), p);
        assert_eq!((b.width(), b.adhesion()), (1, 1));
        assert_eq!((p.width(), p.adhesion()), (1, 1));
    }

    #[test]
    fn single_separation_chains() {
        let v = [0, 1, 2];
        let top = SPath::single(sep(&v, &[]));
        assert_eq!(top.raw_bags(), vec![set(&v), VertexSet::EMPTY]);
        assert_eq!(spath_to_bags(&top).bags(), &[set(&v)]);
        let bottom = SPath::single(sep(&[], &v));
        assert_eq!(bottom.raw_bags(), vec![VertexSet::EMPTY, set(&v)]);
        assert_eq!(spath_to_bags(&bottom).bags(), &[set(&v)]);
    }

    #[test]
    fn bags_to_spath_examples() {
        let bk3 = g(Generator::BidirectedComplete { n: 3 });
        let whole = BagDecomposition::new(&bk3, vec![bk3.vertices()]).unwrap();
        assert_eq!(bags_to_spath(&bk3, &whole).unwrap().chain(), &[sep(&[0, 1, 2], &[0, 1, 2])]);
        assert_eq!((whole.width(), whole.adhesion()), (2, 0));

        let bp3 = g(Generator::BidirectedPath { n: 3 });
        let b = BagDecomposition::new(&bp3, vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        assert_eq!(bags_to_spath(&bp3, &b).unwrap().chain(), &[sep(&[0, 1], &[1, 2])]);
        assert_eq!((b.width(), b.adhesion()), (1, 1));
    }

    #[test]
    fn invalid_decompositions() {
        let c3 = g(Generator::Cycle { n: 3 });
        // 2 -> 0 runs backwards
        assert!(BagDecomposition::new(&c3, vec![set(&[0, 1]), set(&[1, 2])]).is_err());
        assert!(BagDecomposition::new(&c3, vec![set(&[0, 1])]).is_err());
        assert!(BagDecomposition::new(&c3, vec![set(&[0, 1]), set(&[2]), set(&[0, 2])]).is_err());
        assert!(BagDecomposition::from_bags(vec![]).is_err());
        assert!(SPath::new(&c3, vec![sep(&[0, 1], &[0, 2]), sep(&[0], &[0, 1, 2])]).is_err());
    }

    #[test]
    fn cross_separation_examples() {
        let c3 = g(Generator::Cycle { n: 3 });
        assert!(check_lemma_prop(&c3, &c3_path(), 3).unwrap());
        let s = SPath::single(sep(&[0, 1], &[0, 2]));
        assert!(check_lemma_prop(&c3, &s, 4).unwrap());
        assert!(check_lemma_prop(&c3, &c3_path(), 2).is_err());
    }

    #[test]
    fn shift_examples() {
        let p = c3_path();
        assert_eq!(p.up_shift(1, &p.chain()[1]).unwrap().chain(), &p.chain()[1..]);
        assert_eq!(p.up_shift(0, &p.chain()[0]).unwrap(), p);
        let bottom = sep(&[], &[0, 1, 2]);
        let down = p.down_shift(1, &bottom).unwrap();
        assert_eq!(down.chain(), &[bottom, bottom]);
        assert_eq!(down.normalized().chain(), &[bottom]);

        let bp3 = g(Generator::BidirectedPath { n: 3 });
        let q = SPath::new(&bp3, vec![sep(&[0], &[0, 1, 2]), sep(&[0, 1, 2], &[2])]).unwrap();
        let up = q.up_shift(0, &sep(&[0, 1], &[1, 2])).unwrap();
        assert_eq!(up.chain(), &[sep(&[0, 1], &[1, 2]), sep(&[0, 1, 2], &[2])]);
        up.validate(&bp3).unwrap();

        assert!(q.up_shift(1, &sep(&[0, 1], &[1, 2])).is_err());
        assert!(q.down_shift(0, &sep(&[0, 1], &[1, 2])).is_err());
        assert!(q.up_shift(5, &bottom).is_err());
    }

    #[test]
    fn splice_examples() {
        let v = [0, 1, 2];
        let s = sep(&[0, 1], &[0, 2]);
        let one = SPath::single(s);
        assert_eq!(one.splice(&one).unwrap(), one);
        let pre = SPath::from_chain(vec![sep(&[], &v), s]).unwrap();
        let suf = SPath::from_chain(vec![s, sep(&v, &[])]).unwrap();
        assert_eq!(pre.splice(&suf).unwrap().chain(), &[sep(&[], &v), s, sep(&v, &[])]);
        assert!(suf.splice(&pre).is_err());
    }

    #[test]
    fn json_forms() {
        let p = c3_path();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"chain":[{"A":[0],"B":[0,1,2]},{"A":[0,1],"B":[0,2]}]}"#);
        assert_eq!(serde_json::from_str::<SPath>(&text).unwrap(), p);
        let b = spath_to_bags(&p);
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(text, r#"{"bags":[[0],[0,1],[0,2]]}"#);
        assert_eq!(serde_json::from_str::<BagDecomposition>(&text).unwrap(), b);
        assert!(serde_json::from_str::<SPath>(r#"{"chain":[]}"#).is_err());
        assert!(serde_json::from_str::<BagDecomposition>(r#"{"bags":[]}"#).is_err());
    }
}
