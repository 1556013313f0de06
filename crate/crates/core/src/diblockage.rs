//! Orientations of `S_k`, ω-diblockages and the constructive width/diblockage duality.

use std::collections::{BTreeSet, HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::separation::{lambda, DirectedSeparation};
use crate::spath::SPath;
use crate::system::SeparationSystem;
use crate::width::{check_params, StepGraph};

/// A disjoint pair `(P⁺, P⁻)` of subsets of `S_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialOrientation {
    pub k: usize,
    pub omega: usize,
    pub plus: BTreeSet<DirectedSeparation>,
    pub minus: BTreeSet<DirectedSeparation>,
}

impl PartialOrientation {
    pub fn empty(k: usize, omega: usize) -> Self {
        PartialOrientation { k, omega, plus: BTreeSet::new(), minus: BTreeSet::new() }
    }

    pub fn new(
        k: usize,
        omega: usize,
        plus: impl IntoIterator<Item = DirectedSeparation>,
        minus: impl IntoIterator<Item = DirectedSeparation>,
    ) -> Result<Self> {
        let po = PartialOrientation {
            k,
            omega,
            plus: plus.into_iter().collect(),
            minus: minus.into_iter().collect(),
        };
        po.check_shape()?;
        Ok(po)
    }

    fn check_shape(&self) -> Result<()> {
        if self.k > self.omega {
            return Err(Error::InvalidParams(format!(
                "need k <= omega, got k = {}, omega = {}",
                self.k, self.omega
            )));
        }
        if let Some(s) = self.plus.intersection(&self.minus).next() {
            return Err(Error::InvalidInput(format!("{s} is oriented both ways")));
        }
        Ok(())
    }

    /// Checks shape and that every oriented separation lies in `S_k` of `d`.
    pub fn validate(&self, d: &Digraph) -> Result<()> {
        self.check_shape()?;
        for s in self.plus.iter().chain(&self.minus) {
            if !s.is_valid(d) {
                return Err(Error::InvalidInput(format!("{s} is not a separation")));
            }
            if s.order() >= self.k {
                return Err(Error::InvalidInput(format!("{s} has order at least k = {}", self.k)));
            }
        }
        Ok(())
    }

    pub fn is_total(&self, sys: &SeparationSystem) -> bool {
        self.plus.len() + self.minus.len() == sys.len()
    }
}

/// Either side of the duality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DualityCertificate {
    Path {
        k: usize,
        omega: usize,
        #[serde(flatten)]
        path: SPath,
    },
    Diblockage(PartialOrientation),
}

impl DualityCertificate {
    pub fn is_path(&self) -> bool {
        matches!(self, DualityCertificate::Path { .. })
    }

    pub fn is_diblockage(&self) -> bool {
        matches!(self, DualityCertificate::Diblockage(_))
    }
}

/// `P⁺` down-closed and `P⁻` up-closed within `S_k`.
pub fn is_consistent(d: &Digraph, po: &PartialOrientation, limits: &Limits) -> Result<bool> {
    po.validate(d)?;
    let sys = SeparationSystem::below(d, po.k, limits)?;
    Ok(consistency_violation(&sys, po).is_none())
}

fn consistency_violation(sys: &SeparationSystem, po: &PartialOrientation) -> Option<String> {
    for t in sys.seps() {
        if let Some(s) = po.plus.iter().find(|s| t.leq(s) && !po.plus.contains(t)) {
            return Some(format!("{t} is below {s} in P+ but is not in P+"));
        }
        if let Some(s) = po.minus.iter().find(|s| s.leq(t) && !po.minus.contains(t)) {
            return Some(format!("{t} is above {s} in P- but is not in P-"));
        }
    }
    None
}

/// `P_ω`: `P⁺ = {(A,B) ∈ S_k : |A| < ω}`, `P⁻ = {(A,B) ∈ S_k : |B| < ω}`.
pub fn p_omega(d: &Digraph, k: usize, omega: usize, limits: &Limits) -> Result<PartialOrientation> {
    if k > omega {
        return Err(Error::InvalidParams(format!("need k <= omega, got k = {k}, omega = {omega}")));
    }
    let sys = SeparationSystem::below(d, k, limits)?;
    let plus = sys.seps().iter().filter(|s| s.a.len() < omega).copied();
    let minus = sys.seps().iter().filter(|s| s.b.len() < omega).copied();
    PartialOrientation::new(k, omega, plus, minus)
}

/// True iff `po` is an ω-diblockage of `S_k`.
pub fn is_diblockage(d: &Digraph, po: &PartialOrientation, limits: &Limits) -> Result<bool> {
    Ok(diblockage_violation(d, po, limits)?.is_none())
}

/// Why `po` fails to be an ω-diblockage, or `None` if it is one.
pub fn diblockage_violation(
    d: &Digraph,
    po: &PartialOrientation,
    limits: &Limits,
) -> Result<Option<String>> {
    if let Err(e) = po.validate(d) {
        return Ok(Some(e.to_string()));
    }
    let sys = SeparationSystem::below(d, po.k, limits)?;
    if let Some(s) = sys.seps().iter().find(|s| !po.plus.contains(s) && !po.minus.contains(s)) {
        return Ok(Some(format!("{s} is not oriented")));
    }
    let omega = po.omega;
    for s in sys.seps() {
        if s.a.len() < omega && !po.plus.contains(s) {
            return Ok(Some(format!("{s} has |A| < {omega} but is not in P+")));
        }
        if s.b.len() < omega && !po.minus.contains(s) {
            return Ok(Some(format!("{s} has |B| < {omega} but is not in P-")));
        }
    }
    if let Some(why) = consistency_violation(&sys, po) {
        return Ok(Some(why));
    }
    for s in &po.plus {
        for t in po.minus.iter().filter(|t| s.leq(t)) {
            if s.b.intersection(t.a).len() < omega {
                return Ok(Some(format!("{s} in P+ and {t} in P- have |B ∩ C| < {omega}")));
            }
        }
    }
    Ok(None)
}

/// Interior bags have fewer than ω vertices, the first separation lies in
/// `P⁺ ∪ P_ω⁺` and the last in `P⁻ ∪ P_ω⁻`, and all orders are below `k`.
pub fn is_admissable(d: &Digraph, p: &SPath, po: &PartialOrientation) -> bool {
    admissability_violation(d, p, po).is_none()
}

pub fn admissability_violation(d: &Digraph, p: &SPath, po: &PartialOrientation) -> Option<String> {
    if let Err(e) = p.validate(d) {
        return Some(e.to_string());
    }
    if let Some(s) = p.chain().iter().find(|s| s.order() >= po.k) {
        return Some(format!("{s} has order at least k = {}", po.k));
    }
    let omega = po.omega;
    let bags = p.raw_bags();
    if let Some(i) = (1..bags.len() - 1).find(|&i| bags[i].len() >= omega) {
        return Some(format!("interior bag {} has at least {omega} vertices", bags[i]));
    }
    let first = p.first();
    if !(po.plus.contains(first) || first.a.len() < omega) {
        return Some(format!("initial separation {first} is not in P+ or P_omega+"));
    }
    let last = p.last();
    if !(po.minus.contains(last) || last.b.len() < omega) {
        return Some(format!("terminal separation {last} is not in P- or P_omega-"));
    }
    None
}

/// Given an admissable path and a diblockage extending the same orientation,
/// returns the index `j` with `path[j] ∈ O⁺`, `path[j+1] ∈ O⁻` and a bag
/// `A_{j+1} ∩ B_j` of fewer than ω vertices, so the two cannot coexist.
pub fn find_conflict(d: &Digraph, p: &SPath, o: &PartialOrientation) -> Result<usize> {
    if let Some(why) = admissability_violation(d, p, o) {
        return Err(Error::InvalidInput(format!("path is not admissable: {why}")));
    }
    let chain = p.chain();
    let oriented = |s: &DirectedSeparation| o.plus.contains(s) || o.minus.contains(s);
    if let Some(s) = chain.iter().find(|s| !oriented(s)) {
        return Err(Error::InvalidInput(format!("{s} is not oriented")));
    }
    if !o.plus.contains(&chain[0]) {
        return Err(Error::InvalidInput("the initial separation is not in O+".into()));
    }
    if !o.minus.contains(&chain[chain.len() - 1]) {
        return Err(Error::InvalidInput("the terminal separation is not in O-".into()));
    }
    let j = (0..chain.len()).rev().find(|&t| o.plus.contains(&chain[t])).unwrap_or(0);
    let next = &chain[j + 1];
    debug_assert!(o.minus.contains(next));
    if next.a.intersection(chain[j].b).len() >= o.omega {
        return Err(Error::InvalidInput(format!("bag at {j} is not small, so O is no diblockage")));
    }
    Ok(j)
}

/// Counters from one run of [`duality_decide_with_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DualityStats {
    /// Orientations visited by the branching recursion.
    pub nodes: usize,
    /// Paths assembled by shifting and splicing two child paths.
    pub splices: usize,
    /// Child paths taken from direct search after the branching budget ran out.
    pub searched: usize,
}

const BRANCH_BUDGET: usize = 20_000;

/// Decides whether an `(ω, P)`-admissable `S_k`-path exists for the seed
/// orientation, returning it, or else an ω-diblockage extending the seed.
///
/// An empty seed behaves like `P_ω`. The returned certificate has been
/// checked by [`is_admissable`] or [`is_diblockage`].
pub fn duality_decide(
    d: &Digraph,
    k: usize,
    omega: usize,
    seed: &PartialOrientation,
    limits: &Limits,
) -> Result<DualityCertificate> {
    duality_decide_with_stats(d, k, omega, seed, limits).map(|(c, _)| c)
}

pub fn duality_decide_with_stats(
    d: &Digraph,
    k: usize,
    omega: usize,
    seed: &PartialOrientation,
    limits: &Limits,
) -> Result<(DualityCertificate, DualityStats)> {
    check_params(k, omega)?;
    if omega > d.n() {
        return Err(Error::InvalidParams(format!(
            "need omega <= |V| = {}, got omega = {omega}",
            d.n()
        )));
    }
    if seed.k != k || seed.omega != omega {
        return Err(Error::InvalidParams(format!(
            "seed is for k = {}, omega = {} but k = {k}, omega = {omega} was requested",
            seed.k, seed.omega
        )));
    }
    seed.validate(d)?;
    let sys = SeparationSystem::below(d, k, limits)?;
    if let Some(why) = consistency_violation(&sys, seed) {
        return Err(Error::Precondition(format!("seed orientation is inconsistent: {why}")));
    }
    let mut search = Decider::new(d, &sys, k, omega);
    let outcome = search.run(seed)?;
    let cert = match outcome {
        Outcome::Path(chain) => {
            let path = SPath::from_chain(chain)?.normalized();
            if let Some(why) = admissability_violation(d, &path, seed) {
                return Err(Error::Internal(format!("duality produced a bad path: {why}")));
            }
            DualityCertificate::Path { k, omega, path }
        }
        Outcome::Diblockage(plus, minus) => {
            let po = PartialOrientation::new(
                k,
                omega,
                plus.ones().map(|i| *sys.get(i)),
                minus.ones().map(|i| *sys.get(i)),
            )?;
            if let Some(why) = diblockage_violation(d, &po, &Limits::unbounded())? {
                return Err(Error::Internal(format!("duality produced a bad diblockage: {why}")));
            }
            if !seed.plus.is_subset(&po.plus) || !seed.minus.is_subset(&po.minus) {
                return Err(Error::Internal("diblockage does not extend the seed".into()));
            }
            DualityCertificate::Diblockage(po)
        }
    };
    Ok((cert, search.stats))
}

#[derive(Clone)]
enum Outcome {
    Path(Vec<DirectedSeparation>),
    Diblockage(FixedBitSet, FixedBitSet),
}

struct Decider<'a> {
    d: &'a Digraph,
    sys: &'a SeparationSystem,
    omega: usize,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    memo: HashMap<(FixedBitSet, FixedBitSet), Outcome>,
    stats: DualityStats,
}

impl<'a> Decider<'a> {
    fn new(d: &'a Digraph, sys: &'a SeparationSystem, _k: usize, omega: usize) -> Self {
        let succ = match omega.checked_sub(1) {
            Some(max_bag) => StepGraph::new(sys, max_bag).succ,
            None => vec![Vec::new(); sys.len()],
        };
        let mut pred = vec![Vec::new(); sys.len()];
        for (i, list) in succ.iter().enumerate() {
            for &j in list {
                pred[j].push(i);
            }
        }
        Decider { d, sys, omega, succ, pred, memo: HashMap::new(), stats: DualityStats::default() }
    }

    fn run(&mut self, seed: &PartialOrientation) -> Result<Outcome> {
        let n = self.sys.len();
        let mut plus = FixedBitSet::with_capacity(n);
        let mut minus = FixedBitSet::with_capacity(n);
        for (i, s) in self.sys.seps().iter().enumerate() {
            if seed.plus.contains(s) || s.a.len() < self.omega {
                plus.insert(i);
            }
            if seed.minus.contains(s) || s.b.len() < self.omega {
                minus.insert(i);
            }
        }
        // a separation small on both sides is an admissable path on its own
        if let Some(i) = plus.intersection(&minus).next() {
            return Ok(Outcome::Path(vec![*self.sys.get(i)]));
        }
        self.decide(plus, minus)
    }

    fn decide(&mut self, plus: FixedBitSet, minus: FixedBitSet) -> Result<Outcome> {
        let key = (plus, minus);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        self.stats.nodes += 1;
        let (plus, minus) = key.clone();
        let outcome = if plus.count_ones(..) + minus.count_ones(..) == self.sys.len() {
            match self.violating_pair(&plus, &minus) {
                Some((s, t)) => Outcome::Path(vec![*self.sys.get(s), *self.sys.get(t)]),
                None => Outcome::Diblockage(plus, minus),
            }
        } else if self.reach_from(&plus).is_disjoint(&minus) {
            self.descend(plus, minus)?
        } else {
            self.branch(plus, minus)?
        };
        self.memo.insert(key, outcome.clone());
        Ok(outcome)
    }

    fn violating_pair(&self, plus: &FixedBitSet, minus: &FixedBitSet) -> Option<(usize, usize)> {
        plus.ones().find_map(|s| self.succ[s].iter().find(|&&t| minus.contains(t)).map(|&t| (s, t)))
    }

    /// Lexicographically first unoriented separation with the lexicographically
    /// first ≤-minimal and ≤-maximal unoriented separations below and above it.
    fn pick(&self, plus: &FixedBitSet, minus: &FixedBitSet) -> (usize, usize) {
        let seps = self.sys.seps();
        let free: Vec<usize> =
            (0..seps.len()).filter(|&i| !plus.contains(i) && !minus.contains(i)).collect();
        let ab = seps[free[0]];
        let below: Vec<usize> = free.iter().copied().filter(|&i| seps[i].leq(&ab)).collect();
        let above: Vec<usize> = free.iter().copied().filter(|&i| ab.leq(&seps[i])).collect();
        let cd = *below
            .iter()
            .find(|&&i| !below.iter().any(|&j| seps[j].strictly_below(&seps[i])))
            .expect("a finite poset has minimal elements");
        let ef = *above
            .iter()
            .find(|&&i| !above.iter().any(|&j| seps[i].strictly_below(&seps[j])))
            .expect("a finite poset has maximal elements");
        (cd, ef)
    }

    /// No admissable path exists: keep orienting into a child without one.
    fn descend(&mut self, mut plus: FixedBitSet, mut minus: FixedBitSet) -> Result<Outcome> {
        let total = self.sys.len();
        let mut fwd = self.reach_from(&plus);
        let mut bwd = self.reach_to(&minus);
        while plus.count_ones(..) + minus.count_ones(..) < total {
            self.stats.nodes += 1;
            let (cd, ef) = self.pick(&plus, &minus);
            if !bwd.contains(cd) {
                plus.insert(cd);
                self.grow(&mut fwd, cd, true);
            } else if !fwd.contains(ef) {
                minus.insert(ef);
                self.grow(&mut bwd, ef, false);
            } else {
                return Err(Error::Internal(
                    "both children admit admissable paths but the parent does not".into(),
                ));
            }
        }
        if self.violating_pair(&plus, &minus).is_some() {
            return Err(Error::Internal("descent ended in an orientation with a violating pair".into()));
        }
        Ok(Outcome::Diblockage(plus, minus))
    }

    fn branch(&mut self, plus: FixedBitSet, minus: FixedBitSet) -> Result<Outcome> {
        let (cd, ef) = self.pick(&plus, &minus);
        let mut plus1 = plus.clone();
        plus1.insert(cd);
        let first = match self.succ[cd].iter().find(|&&t| minus.contains(t)) {
            Some(&t) => Outcome::Path(vec![*self.sys.get(cd), *self.sys.get(t)]),
            None => self.child(plus1, minus.clone())?,
        };
        let p1 = match first {
            Outcome::Path(p) if !self.starts_new(&p, &plus) => return Ok(Outcome::Path(p)),
            Outcome::Diblockage(..) => return Ok(first),
            Outcome::Path(p) => p,
        };
        let mut minus2 = minus.clone();
        minus2.insert(ef);
        let second = match self.pred[ef].iter().find(|&&s| plus.contains(s)) {
            Some(&s) => Outcome::Path(vec![*self.sys.get(s), *self.sys.get(ef)]),
            None => self.child(plus.clone(), minus2)?,
        };
        let p2 = match second {
            Outcome::Path(p) if !self.ends_new(&p, &minus) => return Ok(Outcome::Path(p)),
            Outcome::Diblockage(..) => return Ok(second),
            Outcome::Path(p) => p,
        };
        self.stats.splices += 1;
        self.splice(p1, p2, cd, ef).map(Outcome::Path)
    }

    fn child(&mut self, plus: FixedBitSet, minus: FixedBitSet) -> Result<Outcome> {
        if self.stats.nodes < BRANCH_BUDGET {
            return self.decide(plus, minus);
        }
        self.stats.searched += 1;
        match self.shortest_path(&plus, &minus) {
            Some(p) => Ok(Outcome::Path(p)),
            None => self.decide(plus, minus),
        }
    }

    fn starts_new(&self, p: &[DirectedSeparation], plus: &FixedBitSet) -> bool {
        self.sys.index_of(&p[0]).is_none_or(|i| !plus.contains(i))
    }

    fn ends_new(&self, p: &[DirectedSeparation], minus: &FixedBitSet) -> bool {
        self.sys.index_of(&p[p.len() - 1]).is_none_or(|i| !minus.contains(i))
    }

    /// Up-shifts the path starting at `(C,D)` and down-shifts the path ending at
    /// `(E,F)` onto a λ-minimal separation between them, then glues them.
    fn splice(
        &self,
        p1: Vec<DirectedSeparation>,
        p2: Vec<DirectedSeparation>,
        cd: usize,
        ef: usize,
    ) -> Result<Vec<DirectedSeparation>> {
        let (cd, ef) = (self.sys.get(cd), self.sys.get(ef));
        let (_, xy) = lambda(self.d, cd, ef)?;
        let p1 = SPath::from_chain(p1)?;
        let p2 = SPath::from_chain(p2)?;
        if p1.first() != cd || p2.last() != ef {
            return Err(Error::Internal("child paths do not end at the new separations".into()));
        }
        let up = p1.up_shift(0, &xy)?;
        let down = p2.down_shift(p2.len() - 1, &xy)?;
        Ok(down.splice(&up)?.normalized().into_chain())
    }

    fn reach_from(&self, from: &FixedBitSet) -> FixedBitSet {
        let mut seen = from.clone();
        let mut queue: VecDeque<usize> = from.ones().collect();
        while let Some(s) = queue.pop_front() {
            for &t in &self.succ[s] {
                if !seen.put(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    fn reach_to(&self, to: &FixedBitSet) -> FixedBitSet {
        let mut seen = to.clone();
        let mut queue: VecDeque<usize> = to.ones().collect();
        while let Some(t) = queue.pop_front() {
            for &s in &self.pred[t] {
                if !seen.put(s) {
                    queue.push_back(s);
                }
            }
        }
        seen
    }

    fn grow(&self, seen: &mut FixedBitSet, start: usize, forward: bool) {
        if seen.put(start) {
            return;
        }
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let next = if forward { &self.succ[x] } else { &self.pred[x] };
            for &y in next {
                if !seen.put(y) {
                    queue.push_back(y);
                }
            }
        }
    }

    /// Lexicographically first shortest admissable chain, if any.
    fn shortest_path(&self, plus: &FixedBitSet, minus: &FixedBitSet) -> Option<Vec<DirectedSeparation>> {
        let n = self.sys.len();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for t in minus.ones() {
            dist[t] = 0;
            queue.push_back(t);
        }
        while let Some(t) = queue.pop_front() {
            for &s in &self.pred[t] {
                if dist[s] == usize::MAX {
                    dist[s] = dist[t] + 1;
                    queue.push_back(s);
                }
            }
        }
        let best = plus.ones().map(|s| dist[s]).min().filter(|&x| x != usize::MAX)?;
        let mut cur = plus.ones().find(|&s| dist[s] == best)?;
        let mut out = vec![*self.sys.get(cur)];
        while dist[cur] > 0 {
            cur = *self.succ[cur].iter().find(|&&t| dist[t] == dist[cur] - 1)?;
            out.push(*self.sys.get(cur));
        }
        Some(out)
    }
}
