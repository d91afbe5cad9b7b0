//! Rational cones in the nonnegative orthant and their lattice points.

mod cone;
mod counting;
mod enumerate;
mod hilbert;
pub(crate) mod linalg;
mod point;

pub use cone::Cone;
pub(crate) use cone::for_each_subset;
pub use counting::{count_preceding, count_preceding_by_enumeration, PrecedingCounter};
pub use enumerate::{enumerate_points, for_each_point_in_slice, PointStream};
pub use hilbert::{hilbert_basis, triangulate};
pub use point::{parse_point_list, LatticePoint, MAX_DIM};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("cone has no nonzero ray")]
    EmptyCone,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("points of different dimensions")]
    DimensionMismatch,
    #[error("ray with a negative coordinate; cones must lie in the nonnegative orthant")]
    OutsideOrthant,
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}
