use crate::error::{Error, Result};

/// Size guards for the exponential procedures.
///
/// Every guarded entry point takes a `&Limits`; exceeding a guard fails fast
/// with [`Error::SizeGuard`] naming it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest vertex count for which separations are enumerated (3^n colorings).
    pub enumerate_vertices: usize,
    /// Largest vertex count for the subset dynamic program behind `dpw_exact`.
    pub dpw_vertices: usize,
    /// Largest separation system the quadratic lattice searches will build.
    pub separations: usize,
    /// Largest vertex count accepted by the brute-force oracles.
    pub oracle_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumerate_vertices: 14,
            dpw_vertices: 20,
            separations: 50_000,
            oracle_vertices: 8,
        }
    }
}

impl Limits {
    /// No guard at all; callers take responsibility for the running time.
    pub fn unbounded() -> Self {
        Limits {
            enumerate_vertices: crate::MAX_VERTICES,
            dpw_vertices: crate::MAX_VERTICES,
            separations: usize::MAX,
            oracle_vertices: crate::MAX_VERTICES,
        }
    }

    pub(crate) fn check(guard: &'static str, limit: usize, actual: usize) -> Result<()> {
        if actual > limit {
            Err(Error::SizeGuard { guard, limit, actual })
        } else {
            Ok(())
        }
    }
}
