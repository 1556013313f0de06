//! Exact directed path-width, width-bounded S-path search and partial S-path membership.

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::separation::DirectedSeparation;
use crate::spath::{BagDecomposition, SPath};
use crate::system::SeparationSystem;
use crate::vertex_set::VertexSet;

/// Directed path-width with an optimal decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthResult {
    pub dpw: usize,
    #[serde(flatten)]
    pub witness: BagDecomposition,
}

/// `∂⁻(S)`: the vertices of `S` with an in-neighbour outside `S`.
pub fn in_boundary(d: &Digraph, s: VertexSet) -> VertexSet {
    s.iter().filter(|&u| !d.in_neighbors(u).is_subset(s)).collect()
}

/// Directed path-width by dynamic programming over vertex subsets.
///
/// A vertex ordering `v_1..v_n` costs `max_i |∂⁻({v_1..v_{i−1}})|`, and its bags
/// are `{v_i} ∪ ∂⁻({v_1..v_{i−1}})`. The lexicographically first optimal
/// ordering is returned.
pub fn dpw_exact(d: &Digraph, limits: &Limits) -> Result<WidthResult> {
    let n = d.n();
    Limits::check("dpw_vertices", limits.dpw_vertices.min(usize::BITS as usize - 2), n)?;
    let full = d.vertices().bits() as usize;
    let in_masks: Vec<usize> = (0..n).map(|v| d.in_neighbors(v).bits() as usize).collect();
    let boundary = |s: usize| -> u8 {
        let mut count = 0;
        let mut rest = s;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if in_masks[u] & !s != 0 {
                count += 1;
            }
        }
        count
    };
    // best[s]: cheapest cost of completing an ordering whose prefix is s
    let mut best = vec![0u8; full + 1];
    for s in (0..full).rev() {
        let mut low = u8::MAX;
        let mut free = full & !s;
        while free != 0 {
            let v = free.trailing_zeros() as usize;
            free &= free - 1;
            low = low.min(best[s | 1 << v]);
        }
        best[s] = low.max(boundary(s));
    }
    let dpw = best[0] as usize;
    let mut bags = Vec::with_capacity(n);
    let mut s = 0usize;
    while s != full {
        let v = (0..n)
            .find(|&v| s & 1 << v == 0 && best[s | 1 << v] as usize <= dpw)
            .ok_or_else(|| Error::Internal("subset table has no optimal extension".into()))?;
        let prefix = VertexSet::from_bits(s as u64);
        bags.push(in_boundary(d, prefix).with(v));
        s |= 1 << v;
    }
    let witness = BagDecomposition::new(d, bags)
        .map_err(|e| Error::Internal(format!("dpw witness rejected: {e}")))?;
    if witness.width() != dpw {
        return Err(Error::Internal(format!(
            "dpw witness has width {} instead of {dpw}",
            witness.width()
        )));
    }
    Ok(WidthResult { dpw, witness })
}

/// Transitions of the S-path search over a separation system with bag bound
/// `max_bag`: every step `s → t` has `s < t` and `|t.A ∩ s.B| <= max_bag`.
pub(crate) struct StepGraph {
    pub starts: Vec<bool>,
    pub ends: Vec<bool>,
    pub succ: Vec<Vec<usize>>,
    pub by_height: Vec<usize>,
}

impl StepGraph {
    pub fn new(sys: &SeparationSystem, max_bag: usize) -> Self {
        let seps = sys.seps();
        let by_height = sys.by_height();
        let mut succ = vec![Vec::new(); seps.len()];
        for (pos, &i) in by_height.iter().enumerate() {
            let s = &seps[i];
            for &j in &by_height[pos + 1..] {
                let t = &seps[j];
                if s.strictly_below(t) && t.a.intersection(s.b).len() <= max_bag {
                    succ[i].push(j);
                }
            }
            succ[i].sort_unstable();
        }
        StepGraph {
            starts: seps.iter().map(|s| s.a.len() <= max_bag).collect(),
            ends: seps.iter().map(|s| s.b.len() <= max_bag).collect(),
            succ,
            by_height,
        }
    }

    /// Fewest steps from each node to the end sentinel.
    pub fn distances(&self) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.succ.len()];
        for &i in self.by_height.iter().rev() {
            dist[i] = if self.ends[i] {
                Some(0)
            } else {
                self.succ[i].iter().filter_map(|&j| dist[j]).min().map(|x| x + 1)
            };
        }
        dist
    }

    /// The lexicographically first among the shortest chains from `from`
    /// (any start node when `None`) to the end sentinel.
    pub fn shortest_chain(&self, from: Option<usize>) -> Option<Vec<usize>> {
        let dist = self.distances();
        let mut cur = match from {
            Some(i) => {
                dist[i]?;
                i
            }
            None => {
                let best = (0..dist.len()).filter(|&i| self.starts[i]).filter_map(|i| dist[i]).min()?;
                (0..dist.len()).find(|&i| self.starts[i] && dist[i] == Some(best))?
            }
        };
        let mut out = vec![cur];
        while let Some(left) = dist[cur].filter(|&x| x > 0) {
            cur = *self.succ[cur].iter().find(|&&j| dist[j] == Some(left - 1))?;
            out.push(cur);
        }
        Some(out)
    }
}

/// An `S_k`-path whose bags all have at most `ω − 1` vertices, if one exists.
///
/// Among shortest such chains the lexicographically first is returned.
/// Requires `k <= ω`.
pub fn min_width_spath(d: &Digraph, k: usize, omega: usize, limits: &Limits) -> Result<Option<SPath>> {
    check_params(k, omega)?;
    let sys = SeparationSystem::below(d, k, limits)?;
    Ok(width_spath_in(d, &sys, k, omega)?.map(|(p, _)| p))
}

pub(crate) fn check_params(k: usize, omega: usize) -> Result<()> {
    if k > omega {
        return Err(Error::InvalidParams(format!("need k <= omega, got k = {k}, omega = {omega}")));
    }
    Ok(())
}

pub(crate) fn width_spath_in(
    d: &Digraph,
    sys: &SeparationSystem,
    k: usize,
    omega: usize,
) -> Result<Option<(SPath, StepGraph)>> {
    let Some(max_bag) = omega.checked_sub(1) else {
        return Ok(None);
    };
    let graph = StepGraph::new(sys, max_bag);
    let Some(indices) = graph.shortest_chain(None) else {
        return Ok(None);
    };
    let p = SPath::new(d, indices.iter().map(|&i| *sys.get(i)).collect())
        .map_err(|e| Error::Internal(format!("S-path search produced an invalid chain: {e}")))?;
    if !p.is_sk_path(k) || p.width() + 1 >= omega {
        return Err(Error::Internal(format!("S-path search broke its bounds: {p:?}")));
    }
    Ok(Some((p, graph)))
}

/// Membership in `S′_{k+1}`: some chain starting at `s` reaches `(V, ∅)` with
/// every bag after the first of size at most `k`.
pub fn in_sprime(d: &Digraph, s: &DirectedSeparation, k: usize, limits: &Limits) -> Result<bool> {
    SPrime::new(d, k, limits)?.contains(s)
}

/// Precomputed membership in `S′_{k+1}` for all separations of order at most `k`.
pub struct SPrime {
    k: usize,
    sys: SeparationSystem,
    member: Vec<bool>,
}

impl SPrime {
    pub fn new(d: &Digraph, k: usize, limits: &Limits) -> Result<Self> {
        let sys = SeparationSystem::up_to(d, k, limits)?;
        let graph = StepGraph::new(&sys, k);
        let member = graph.distances().iter().map(Option::is_some).collect();
        Ok(SPrime { k, sys, member })
    }

    pub fn contains(&self, s: &DirectedSeparation) -> Result<bool> {
        if s.order() > self.k {
            return Err(Error::Precondition(format!("{s} has order above {}", self.k)));
        }
        match self.sys.index_of(s) {
            Some(i) => Ok(self.member[i]),
            None => Err(Error::InvalidInput(format!("{s} is not a separation"))),
        }
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> impl Iterator<Item = &DirectedSeparation> + '_ {
        self.sys.seps().iter().zip(&self.member).filter(|(_, &m)| m).map(|(s, _)| s)
    }
}
