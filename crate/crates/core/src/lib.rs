//! Directed path-width and diblockage duality on small digraphs.
//!
//! Vertex sets are 64-bit bitsets, so every digraph has at most
//! [`MAX_VERTICES`] vertices. Exhaustive routines are additionally bounded
//! by [`Limits`].

pub mod diblockage;
pub mod digraph;
pub mod error;
pub mod flow;
pub mod limits;
pub mod linked;
pub mod minors;
pub mod oracle;
pub mod separation;
pub mod spath;
pub mod system;
pub mod width;
pub mod vertex_set;

pub use diblockage::{
    duality_decide, is_admissable, is_consistent, is_diblockage, p_omega, DualityCertificate,
    PartialOrientation,
};
pub use digraph::{generate, parse_digraph, Digraph, Generator};
pub use error::{Error, Result};
pub use limits::Limits;
pub use linked::{
    is_linked, lean_check, make_linked, subdivide_adhesion, well_linked_check, LinkPotential,
    Violation,
};
pub use minors::{embed_arborescence, verify_embedding, ModelMap};
pub use separation::{enumerate_separations, is_separation, lambda, DirectedSeparation};
pub use spath::{bags_to_spath, spath_to_bags, BagDecomposition, SPath};
pub use system::SeparationSystem;
pub use width::{dpw_exact, in_sprime, min_width_spath, WidthResult};
pub use vertex_set::{VertexSet, MAX_VERTICES};
