//! Brute-force reference implementations, kept independent of the fast
//! algorithms so the two can be checked against each other.

use std::collections::HashSet;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::separation::DirectedSeparation;
use crate::vertex_set::VertexSet;

fn guard(d: &Digraph, cap: usize, limits: &Limits) -> Result<()> {
    let limit = cap.min(limits.oracle_vertices);
    if d.n() > limit {
        return Err(Error::SizeGuard { guard: "oracle_vertices", limit, actual: d.n() });
    }
    Ok(())
}

/// Vertices of `prefix` with an in-neighbour outside it.
fn entry_points(d: &Digraph, prefix: VertexSet) -> usize {
    prefix.iter().filter(|&v| !d.in_neighbors(v).is_subset(prefix)).count()
}

/// Minimum over all vertex orderings of the largest prefix in-boundary.
pub fn dpw_bruteforce(d: &Digraph, limits: &Limits) -> Result<usize> {
    guard(d, 8, limits)?;
    let mut order: Vec<usize> = (0..d.n()).collect();
    let mut best = usize::MAX;
    permute(&mut order, 0, &mut |perm| {
        let mut prefix = VertexSet::EMPTY;
        let mut worst = 0;
        for &v in perm {
            prefix.insert(v);
            worst = worst.max(entry_points(d, prefix));
        }
        best = best.min(worst);
    });
    Ok(best)
}

fn permute(items: &mut [usize], at: usize, visit: &mut dyn FnMut(&[usize])) {
    if at == items.len() {
        visit(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, visit);
        items.swap(at, i);
    }
}

/// Every separation of `d`, by trying all `3^n` colourings.
pub fn separations_bruteforce(d: &Digraph, limits: &Limits) -> Result<Vec<DirectedSeparation>> {
    guard(d, 8, limits)?;
    Ok(all_separations(d))
}

fn all_separations(d: &Digraph) -> Vec<DirectedSeparation> {
    let n = d.n();
    let total = 3usize.pow(n as u32);
    (0..total)
        .filter_map(|mut code| {
            let (mut a, mut b) = (VertexSet::EMPTY, VertexSet::EMPTY);
            for v in 0..n {
                match code % 3 {
                    0 => a.insert(v),
                    1 => {
                        a.insert(v);
                        b.insert(v);
                    }
                    _ => b.insert(v),
                }
                code /= 3;
            }
            let left = a.difference(b);
            let right = b.difference(a);
            let ok = d.arcs().all(|(x, y)| !(right.contains(x) && left.contains(y)));
            ok.then(|| DirectedSeparation::new(a, b))
        })
        .collect()
}

/// Least order of a separation `s` with `lo <= s <= hi`.
pub fn lambda_bruteforce(
    d: &Digraph,
    lo: &DirectedSeparation,
    hi: &DirectedSeparation,
    limits: &Limits,
) -> Result<usize> {
    guard(d, 6, limits)?;
    lambda_among(&all_separations(d), lo, hi)
}

/// [`lambda_bruteforce`] over a precomputed list of all separations.
pub fn lambda_among(seps: &[DirectedSeparation], lo: &DirectedSeparation, hi: &DirectedSeparation) -> Result<usize> {
    seps.iter()
        .filter(|s| lo.leq(s) && s.leq(hi))
        .map(|s| s.a.intersection(s.b).len())
        .min()
        .ok_or_else(|| Error::Precondition(format!("no separation between {lo} and {hi}")))
}

/// Whether some chain of separations of order `< k`, increasing strictly in
/// `≤`, has every bag of size at most `ω − 1`.
pub fn exists_spath_bruteforce(d: &Digraph, k: usize, omega: usize, limits: &Limits) -> Result<bool> {
    guard(d, 5, limits)?;
    let bag = omega.saturating_sub(1);
    if omega == 0 {
        return Ok(false);
    }
    let seps: Vec<DirectedSeparation> =
        all_separations(d).into_iter().filter(|s| s.a.intersection(s.b).len() < k).collect();
    let mut seen = HashSet::new();
    let mut stack: Vec<DirectedSeparation> = seps.iter().filter(|s| s.a.len() <= bag).copied().collect();
    while let Some(s) = stack.pop() {
        if !seen.insert(s) {
            continue;
        }
        if s.b.len() <= bag {
            return Ok(true);
        }
        for t in &seps {
            if s != *t && s.leq(t) && t.a.intersection(s.b).len() <= bag {
                stack.push(*t);
            }
        }
    }
    Ok(false)
}

/// One representative per isomorphism class of digraphs on `n` vertices,
/// namely the one whose arc mask is smallest.
pub fn digraphs_up_to_isomorphism(n: usize) -> Vec<Digraph> {
    assert!((1..=5).contains(&n), "isomorphism classes are enumerated for 1 <= n <= 5");
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let slot = |u: usize, v: usize| pairs.iter().position(|&p| p == (u, v)).unwrap();
    let mut order: Vec<usize> = (0..n).collect();
    let mut relabel: Vec<Vec<u32>> = Vec::new();
    permute(&mut order, 0, &mut |p| {
        relabel.push(pairs.iter().map(|&(u, v)| 1u32 << slot(p[u], p[v])).collect());
    });
    (0u32..1 << pairs.len())
        .filter(|&mask| {
            relabel.iter().all(|map| {
                let mut image = 0;
                let mut rest = mask;
                while rest != 0 {
                    image |= map[rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
                image >= mask
            })
        })
        .map(|mask| {
            let arcs = pairs.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a);
            Digraph::from_arcs(n, arcs).expect("pairs are distinct and loop-free")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{generate, Generator};

    fn g(kind: Generator) -> Digraph {
        generate(&kind).unwrap()
    }

    #[test]
    fn dpw_examples() {
        let lim = Limits::default();
        assert_eq!(dpw_bruteforce(&g(Generator::Cycle { n: 3 }), &lim), Ok(1));
        assert_eq!(dpw_bruteforce(&g(Generator::BidirectedComplete { n: 3 }), &lim), Ok(2));
        for seed in 0..20 {
            let dag = g(Generator::RandomArborescence { n: 8, seed });
            assert_eq!(dpw_bruteforce(&dag, &lim), Ok(0));
        }
        let big = Digraph::empty(9).unwrap();
        assert!(matches!(dpw_bruteforce(&big, &lim), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn lambda_examples() {
        let lim = Limits::default();
        let c3 = g(Generator::Cycle { n: 3 });
        let (lo, hi) = (DirectedSeparation::bottom(3), DirectedSeparation::top(3));
        assert_eq!(lambda_bruteforce(&c3, &lo, &hi, &lim), Ok(0));
        let s = DirectedSeparation::new([0, 2].into_iter().collect(), [1, 2].into_iter().collect());
        assert_eq!(lambda_bruteforce(&c3, &s, &s, &lim), Ok(1));
    }

    #[test]
    fn spath_examples() {
        let lim = Limits::default();
        let c3 = g(Generator::Cycle { n: 3 });
        assert_eq!(exists_spath_bruteforce(&c3, 2, 3, &lim), Ok(true));
        assert_eq!(exists_spath_bruteforce(&c3, 2, 2, &lim), Ok(false));
        assert_eq!(exists_spath_bruteforce(&Digraph::empty(1).unwrap(), 1, 1, &lim), Ok(false));
        assert_eq!(exists_spath_bruteforce(&Digraph::empty(2).unwrap(), 1, 2, &lim), Ok(true));
    }

    #[test]
    fn isomorphism_class_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| digraphs_up_to_isomorphism(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 16, 218]);
    }
}
