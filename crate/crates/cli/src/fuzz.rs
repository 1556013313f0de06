//! Differential fuzzing against the brute-force oracles, with greedy
//! counterexample minimisation.

use std::path::PathBuf;

use dipath::diblockage::{admissability_violation, diblockage_violation, DualityCertificate};
use dipath::linked::{link_path, linked_violation, property_two_violation};
use dipath::minors::{delete_arc, delete_vertex};
use dipath::oracle::{dpw_bruteforce, exists_spath_bruteforce};
use dipath::width::in_boundary;
use dipath::{
    bags_to_spath, dpw_exact, duality_decide, make_linked, min_width_spath,
    subdivide_adhesion, BagDecomposition, Digraph, Generator, Limits, PartialOrientation, VertexSet,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{exit, Failure, Outcome};

pub struct Config {
    pub n_max: usize,
    pub iters: u64,
    pub seed: u64,
    pub workers: usize,
    pub out: PathBuf,
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of iteration `i`, independent of how iterations are spread over workers.
fn instance_seed(master: u64, i: u64) -> u64 {
    mix(master ^ mix(i))
}

fn instance(cfg: &Config, i: u64) -> (Digraph, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(cfg.seed, i));
    let n = rng.gen_range(1..=cfg.n_max);
    let p = rng.gen_range(0.1..0.9);
    let d = dipath::generate(&Generator::RandomDigraph { n, p, seed: rng.gen() }).expect("valid parameters");
    (d, rng.gen())
}

fn ordering_decomposition(d: &Digraph, rng: &mut ChaCha8Rng) -> BagDecomposition {
    let mut order: Vec<usize> = (0..d.n()).collect();
    order.shuffle(rng);
    let mut prefix = VertexSet::EMPTY;
    let bags = order
        .iter()
        .map(|&v| {
            let bag = in_boundary(d, prefix).with(v);
            prefix.insert(v);
            bag
        })
        .collect();
    BagDecomposition::new(d, bags).expect("orderings give decompositions")
}

/// The first differential check `d` fails, if any.
pub fn failure(d: &Digraph, seed: u64, limits: &Limits) -> Option<String> {
    failure_inner(d, seed, limits).unwrap_or_else(|e| Some(format!("error: {e}")))
}

fn failure_inner(d: &Digraph, seed: u64, limits: &Limits) -> dipath::Result<Option<String>> {
    let n = d.n();
    let width = dpw_exact(d, limits)?;
    let dpw = width.dpw;
    if let Err(e) = width.witness.validate(d) {
        return Ok(Some(format!("dpw witness invalid: {e}")));
    }
    if width.witness.width() != dpw {
        return Ok(Some(format!("dpw witness has width {}, claimed {dpw}", width.witness.width())));
    }
    let oracle = dpw_bruteforce(d, limits)?;
    if oracle != dpw {
        return Ok(Some(format!("dpw_exact {dpw} but oracle {oracle}")));
    }

    for omega in 0..=n {
        for k in 0..=omega {
            let seed_po = PartialOrientation::empty(k, omega);
            let cert = duality_decide(d, k, omega, &seed_po, limits)?;
            let (path_side, problem) = match &cert {
                DualityCertificate::Path { path, .. } => (true, admissability_violation(d, path, &seed_po)),
                DualityCertificate::Diblockage(o) => (false, diblockage_violation(d, o, limits)?),
            };
            if let Some(why) = problem {
                return Ok(Some(format!("duality k={k} omega={omega}: certificate rejected: {why}")));
            }
            let exists = if n <= 5 {
                exists_spath_bruteforce(d, k, omega, limits)?
            } else {
                min_width_spath(d, k, omega, limits)?.is_some()
            };
            if exists != path_side {
                return Ok(Some(format!("duality k={k} omega={omega}: decided path={path_side}, search says {exists}")));
            }
        }
    }

    let linked = make_linked(d, dpw + 2, dpw + 2, limits)?;
    if let Some((i, j)) = linked_violation(d, &linked)? {
        return Ok(Some(format!("make_linked output not linked at ({i}, {j})")));
    }
    if linked.width() != dpw {
        return Ok(Some(format!("make_linked width {} != dpw {dpw}", linked.width())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = bags_to_spath(d, &ordering_decomposition(d, &mut rng))?;
    let bound = start.width() + 2;
    let repaired = link_path(d, start, bound, bound)?;
    for p in [&linked, &repaired.path] {
        let b = subdivide_adhesion(d, p)?;
        if let Some((i, j, t)) = property_two_violation(d, &b) {
            return Ok(Some(format!("subdivided bags {i}..{j} lack {t} disjoint paths")));
        }
    }
    Ok(None)
}

/// Greedily deletes arcs, then vertices, while `fails` keeps holding.
pub fn minimize(mut d: Digraph, fails: impl Fn(&Digraph) -> bool) -> Digraph {
    loop {
        let smaller_arc = d
            .arcs()
            .map(|(u, v)| delete_arc(&d, u, v).expect("arc exists"))
            .find(|c| fails(c));
        if let Some(c) = smaller_arc {
            d = c;
            continue;
        }
        let smaller_vertex = (0..d.n())
            .filter(|_| d.n() > 1)
            .map(|v| delete_vertex(&d, v).expect("vertex exists").0)
            .find(|c| fails(c));
        match smaller_vertex {
            Some(c) => d = c,
            None => return d,
        }
    }
}

pub fn campaign(cfg: &Config, limits: &Limits) -> Outcome {
    if !(1..=8).contains(&cfg.n_max) {
        return Err(Failure::usage(format!("--n-max must be in 1..=8, got {}", cfg.n_max)));
    }
    if cfg.workers == 0 {
        return Err(Failure::usage("--workers must be positive"));
    }
    let workers = cfg.workers.min(cfg.iters.max(1) as usize);
    let mut results: Vec<Option<String>> = vec![None; cfg.iters as usize];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w as u64..cfg.iters)
                        .step_by(workers)
                        .map(|i| {
                            let (d, seed) = instance(cfg, i);
                            (i, failure(&d, seed, limits))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("fuzz worker panicked") {
                results[i as usize] = r;
            }
        }
    });

    let Some(first) = results.iter().position(Option::is_some) else {
        let mut by_n = vec![0u64; cfg.n_max + 1];
        for i in 0..cfg.iters {
            by_n[instance(cfg, i).0.n()] += 1;
        }
        let report = json!({
            "status": "ok",
            "seed": cfg.seed,
            "iters": cfg.iters,
            "n_max": cfg.n_max,
            "instances_by_n": &by_n[1..],
        });
        println!("{report}");
        return Ok(exit::OK);
    };
    let (d, seed) = instance(cfg, first as u64);
    let small = minimize(d.clone(), |c| failure(c, seed, limits).is_some());
    let why = failure(&small, seed, limits).expect("minimised instance still fails");
    let text = format!(
        "# fuzz counterexample: master seed {}, iteration {first}\n# {why}\n{}",
        cfg.seed,
        small.to_edge_list()
    );
    std::fs::write(&cfg.out, text).map_err(|e| Failure {
        code: "io".into(),
        detail: format!("{}: {e}", cfg.out.display()),
        exit: exit::USAGE,
    })?;
    let report = json!({
        "status": "counterexample",
        "seed": cfg.seed,
        "iteration": first,
        "failure": results[first],
        "minimized_failure": why,
        "original": {"n": d.n(), "arcs": d.arcs().collect::<Vec<_>>()},
        "minimized": {"n": small.n(), "arcs": small.arcs().collect::<Vec<_>>()},
        "file": cfg.out.display().to_string(),
    });
    println!("{report}");
    Ok(exit::COUNTEREXAMPLE)
}
