use std::collections::HashMap;

use crate::digraph::Digraph;
use crate::error::Result;
use crate::limits::Limits;
use crate::separation::{enumerate_separations, DirectedSeparation};

/// The separations of a digraph up to some order, indexed in lexicographic order.
#[derive(Debug, Clone)]
pub struct SeparationSystem {
    max_order: Option<usize>,
    seps: Vec<DirectedSeparation>,
    index: HashMap<DirectedSeparation, usize>,
}

impl SeparationSystem {
    /// Separations of order `< k`, the system `S_k`.
    pub fn below(d: &Digraph, k: usize, limits: &Limits) -> Result<Self> {
        match k.checked_sub(1) {
            Some(max) => SeparationSystem::up_to(d, max, limits),
            None => {
                Limits::check("enumerate_vertices", limits.enumerate_vertices, d.n())?;
                Ok(SeparationSystem { max_order: None, seps: Vec::new(), index: HashMap::new() })
            }
        }
    }

    /// Separations of order `<= max_order`.
    pub fn up_to(d: &Digraph, max_order: usize, limits: &Limits) -> Result<Self> {
        let seps = enumerate_separations(d, max_order, limits)?;
        Limits::check("separations", limits.separations, seps.len())?;
        let index = seps.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Ok(SeparationSystem { max_order: Some(max_order), seps, index })
    }

    /// Largest order present by construction; `None` for the empty system `S_0`.
    pub fn max_order(&self) -> Option<usize> {
        self.max_order
    }

    pub fn seps(&self) -> &[DirectedSeparation] {
        &self.seps
    }

    pub fn get(&self, i: usize) -> &DirectedSeparation {
        &self.seps[i]
    }

    pub fn len(&self) -> usize {
        self.seps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seps.is_empty()
    }

    pub fn index_of(&self, s: &DirectedSeparation) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &DirectedSeparation) -> bool {
        self.index.contains_key(s)
    }

    /// Indices sorted by `|A| − |B|`, ties in lexicographic order. Every strictly
    /// larger separation comes later.
    pub fn by_height(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.seps.len()).collect();
        order.sort_by_key(|&i| height(&self.seps[i]));
        order
    }
}

pub(crate) fn height(s: &DirectedSeparation) -> i64 {
    s.a.len() as i64 - s.b.len() as i64
}
