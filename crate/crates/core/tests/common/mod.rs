#![allow(dead_code)]

use dipath::minors::arborescence_root;
use dipath::width::in_boundary;
use dipath::{generate, BagDecomposition, Digraph, Generator, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random digraph with an arc density that varies with the seed.
pub fn random_digraph(n: usize, seed: u64) -> Digraph {
    const DENSITIES: [f64; 5] = [0.15, 0.3, 0.45, 0.6, 0.8];
    let p = DENSITIES[(seed % DENSITIES.len() as u64) as usize];
    generate(&Generator::RandomDigraph { n, p, seed }).unwrap()
}

/// Bags `{v_i} ∪ ∂⁻({v_1..v_{i−1}})` of a vertex ordering.
pub fn ordering_decomposition(d: &Digraph, order: &[usize]) -> BagDecomposition {
    let mut prefix = VertexSet::EMPTY;
    let mut bags = Vec::with_capacity(order.len());
    for &v in order {
        bags.push(in_boundary(d, prefix).with(v));
        prefix.insert(v);
    }
    BagDecomposition::new(d, bags).unwrap()
}

pub fn random_ordering_decomposition(d: &Digraph, rng: &mut impl Rng) -> BagDecomposition {
    let mut order: Vec<usize> = (0..d.n()).collect();
    order.shuffle(rng);
    ordering_decomposition(d, &order)
}

/// Every labelled arborescence on `1..=max_n` vertices.
pub fn all_arborescences(max_n: usize) -> Vec<Digraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        // parent[v] in 0..=n, where n means "no parent"
        let total = (n + 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let parents: Vec<usize> = (0..n)
                .map(|_| {
                    let p = c % (n + 1);
                    c /= n + 1;
                    p
                })
                .collect();
            if parents.iter().enumerate().any(|(v, &p)| p == v) {
                continue;
            }
            let arcs = parents.iter().enumerate().filter(|&(_, &p)| p < n).map(|(v, &p)| (p, v));
            let f = Digraph::from_arcs(n, arcs).unwrap();
            if arborescence_root(&f).is_some() {
                out.push(f);
            }
        }
    }
    out
}

/// Named fixtures used across the suites.
pub fn fixtures() -> Vec<(String, Digraph)> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push((format!("C{n}"), generate(&Generator::Cycle { n }).unwrap()));
        out.push((format!("BP{n}"), generate(&Generator::BidirectedPath { n }).unwrap()));
    }
    for n in 2..=5 {
        out.push((format!("BK{n}"), generate(&Generator::BidirectedComplete { n }).unwrap()));
    }
    for depth in 1..=2 {
        out.push((format!("BT({depth})"), generate(&Generator::BidirectedTree { depth }).unwrap()));
    }
    for seed in 0..4 {
        out.push((format!("T6#{seed}"), generate(&Generator::RandomTournament { n: 6, seed }).unwrap()));
    }
    out
}
