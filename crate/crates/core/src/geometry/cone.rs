use std::collections::HashSet;

use super::linalg::{self, Row};
use super::{GeometryError, LatticePoint};

/// Facet normal entries are kept below this bound so that a dot product with
/// any `i32` point fits in `i64` (`MAX_DIM * 2^24 * 2^31 < 2^63`).
const NORMAL_BOUND: i128 = 1 << 24;

/// A pointed rational cone inside the nonnegative orthant.
///
/// Stored in both representations: primitive extremal rays, and integer
/// inequalities `n . x >= 0` plus equalities `m . x = 0` cutting out the
/// linear span when the cone is not full-dimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    rays: Vec<LatticePoint>,
    facets: Vec<Vec<i64>>,
    equations: Vec<Vec<i64>>,
    dim_span: usize,
}

fn to_row(p: &LatticePoint) -> Row {
    p.coords().iter().map(|&c| c as i128).collect()
}

fn narrow(v: &[i128]) -> Result<Vec<i64>, GeometryError> {
    v.iter()
        .map(|&x| {
            if x.abs() >= NORMAL_BOUND {
                Err(GeometryError::Overflow)
            } else {
                Ok(x as i64)
            }
        })
        .collect()
}

fn primitive(p: &LatticePoint) -> LatticePoint {
    let g = p
        .coords()
        .iter()
        .fold(0i128, |acc, &c| linalg::gcd(acc, c as i128));
    let coords: Vec<i64> = p.coords().iter().map(|&c| c as i64 / g as i64).collect();
    LatticePoint::new(&coords).expect("dividing cannot leave the i32 range")
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(
    n: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> Result<(), GeometryError>,
) -> Result<(), GeometryError> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    'outer: loop {
        f(&idx)?;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return Ok(());
    }
}

impl Cone {
    /// Builds the cone spanned by `rays`.
    ///
    /// Rays are made primitive and deduplicated, zero rays are dropped, and
    /// rays that are nonnegative combinations of the others are removed.
    pub fn new(rays: &[LatticePoint]) -> Result<Cone, GeometryError> {
        let Some(first) = rays.first() else {
            return Err(GeometryError::EmptyCone);
        };
        let dim = first.dim();
        if rays.iter().any(|r| r.dim() != dim) {
            return Err(GeometryError::DimensionMismatch);
        }
        if rays.iter().any(|r| !r.is_nonnegative()) {
            return Err(GeometryError::OutsideOrthant);
        }
        let mut seen = HashSet::new();
        let candidates: Vec<LatticePoint> = rays
            .iter()
            .filter(|r| !r.is_zero())
            .map(primitive)
            .filter(|r| seen.insert(*r))
            .collect();
        if candidates.is_empty() {
            return Err(GeometryError::EmptyCone);
        }

        let ray_rows: Vec<Row> = candidates.iter().map(to_row).collect();
        let dim_span = linalg::rank(&ray_rows, dim)?;
        let eq_rows = linalg::nullspace(&ray_rows, dim)?;

        // A facet normal lies in the span and vanishes on dim_span - 1
        // independent rays; the rays must then all sit on one side of it.
        let mut facet_rows: Vec<Row> = Vec::new();
        for_each_subset(candidates.len(), dim_span - 1, |subset| {
            let mut system: Vec<Row> = subset.iter().map(|&i| ray_rows[i].clone()).collect();
            if linalg::rank(&system, dim)? != dim_span - 1 {
                return Ok(());
            }
            system.extend(eq_rows.iter().cloned());
            let ns = linalg::nullspace(&system, dim)?;
            if ns.len() != 1 {
                return Ok(());
            }
            let mut normal = ns.into_iter().next().unwrap();
            let values = ray_rows
                .iter()
                .map(|r| linalg::dot(&normal, r))
                .collect::<Result<Vec<_>, _>>()?;
            if values.iter().any(|&v| v < 0) {
                if values.iter().any(|&v| v > 0) {
                    return Ok(());
                }
                normal.iter_mut().for_each(|x| *x = -*x);
            }
            if !facet_rows.contains(&normal) {
                facet_rows.push(normal);
            }
            Ok(())
        })?;

        // A ray is extremal when the facets through it, together with the
        // span equations, have rank dim - 1.
        let mut extremal = Vec::new();
        for (ray, row) in candidates.iter().zip(&ray_rows) {
            let mut tight: Vec<Row> = Vec::new();
            for f in &facet_rows {
                if linalg::dot(f, row)? == 0 {
                    tight.push(f.clone());
                }
            }
            tight.extend(eq_rows.iter().cloned());
            if linalg::rank(&tight, dim)? == dim - 1 {
                extremal.push(*ray);
            }
        }

        let mut all: Vec<Row> = facet_rows.clone();
        all.extend(eq_rows.iter().cloned());
        if linalg::rank(&all, dim)? != dim {
            return Err(GeometryError::NotPointed);
        }

        Ok(Cone {
            dim,
            rays: extremal,
            facets: facet_rows.iter().map(|f| narrow(f)).collect::<Result<_, _>>()?,
            equations: eq_rows.iter().map(|f| narrow(f)).collect::<Result<_, _>>()?,
            dim_span,
        })
    }

    /// The nonnegative orthant of dimension `dim`.
    pub fn orthant(dim: usize) -> Cone {
        let rays: Vec<_> = (0..dim).map(|i| LatticePoint::unit(dim, i)).collect();
        Cone::new(&rays).expect("orthant is a valid cone")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticePoint] {
        &self.rays
    }

    pub fn facets(&self) -> &[Vec<i64>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Vec<i64>] {
        &self.equations
    }

    pub fn dim_span(&self) -> usize {
        self.dim_span
    }

    pub fn is_orthant(&self) -> bool {
        self.rays.len() == self.dim
            && (0..self.dim).all(|i| self.rays.contains(&LatticePoint::unit(self.dim, i)))
    }

    /// Membership of an integer point; the sentinel is never a member.
    #[inline]
    pub fn contains(&self, x: &LatticePoint) -> bool {
        if x.is_sentinel() {
            return false;
        }
        self.equations.iter().all(|m| x.dot(m) == 0) && self.facets.iter().all(|n| x.dot(n) >= 0)
    }
}
