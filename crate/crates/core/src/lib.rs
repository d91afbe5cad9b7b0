//! Exact computations on C-semigroups: affine semigroups `S ⊆ C ∩ N^p`
//! with finitely many gaps inside a rational cone `C`.
//!
//! The crate builds cones from rays, computes their Hilbert bases, walks the
//! tree of C-semigroups ordered by genus, and checks the extended Wilf
//! inequality. Brute-force references for all incremental steps live in
//! [`oracle`].

pub mod explorer;
pub mod families;
pub mod geometry;
pub mod oracle;
pub mod order;
pub mod semigroup;

pub use geometry::{enumerate_points, hilbert_basis, Cone, GeometryError, LatticePoint};
pub use order::{MatrixOrder, OrderError};
pub use semigroup::{root_semigroup, Ambient, CSemigroup, SemigroupError, SemigroupJson, WilfRecord};
