//! Hilbert basis of `C ∩ N^p` by zonotope search over a triangulation.
//!
//! Each irreducible element of the monoid lies in the closed zonotope
//! `{Σ λ_i r_i : 0 <= λ_i <= 1}` of some simplicial subcone, so the union of
//! those zonotopes' lattice points is a finite superset of the basis. The
//! reducible ones are then filtered out.

use std::collections::HashSet;

use super::linalg::{self, Row};
use super::{for_each_subset, Cone, GeometryError, LatticePoint, MAX_DIM};

/// Splits the cone into simplicial cones on its own extremal rays.
///
/// Placing triangulation: pick a ray `r`, triangulate every facet not
/// containing `r` recursively, and cone each piece over `r`.
pub fn triangulate(cone: &Cone) -> Result<Vec<Vec<LatticePoint>>, GeometryError> {
    let rays = cone.rays();
    let d = cone.dim_span();
    if rays.len() == d {
        return Ok(vec![rays.to_vec()]);
    }
    let apex = rays[0];
    let mut out = Vec::new();
    for facet in cone.facets() {
        if apex.dot(facet) == 0 {
            continue;
        }
        let face_rays: Vec<LatticePoint> = rays.iter().copied().filter(|r| r.dot(facet) == 0).collect();
        let face = Cone::new(&face_rays)?;
        for mut simplex in triangulate(&face)? {
            simplex.push(apex);
            out.push(simplex);
        }
    }
    Ok(out)
}

/// Lattice points of the closed zonotope spanned by linearly independent
/// `rays`, which live in the span described by `equations`.
fn zonotope_points(rays: &[LatticePoint], equations: &[Vec<i64>]) -> Result<Vec<LatticePoint>, GeometryError> {
    let p = rays[0].dim();
    let d = rays.len();

    // Coordinates x_rows with a nonsingular d x d block of the ray matrix.
    let mut chosen: Option<(Vec<usize>, i128)> = None;
    for_each_subset(p, d, |subset| {
        if chosen.is_some() {
            return Ok(());
        }
        let block: Vec<Row> = subset
            .iter()
            .map(|&k| rays.iter().map(|r| r.coords()[k] as i128).collect())
            .collect();
        let det = linalg::determinant(&block)?;
        if det != 0 {
            chosen = Some((subset.to_vec(), det));
        }
        Ok(())
    })?;
    let (rows, det) = chosen.ok_or(GeometryError::NotPointed)?;
    let block: Vec<Row> = rows
        .iter()
        .map(|&k| rays.iter().map(|r| r.coords()[k] as i128).collect())
        .collect();

    // adj[i][j] = (-1)^(i+j) * det(block without row j and column i)
    let mut adj = vec![vec![0i128; d]; d];
    for (i, adj_row) in adj.iter_mut().enumerate() {
        for (j, slot) in adj_row.iter_mut().enumerate() {
            let minor: Vec<Row> = block
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != i)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let m = linalg::determinant(&minor)?;
            *slot = if (i + j) % 2 == 0 { m } else { -m };
        }
    }

    let mut upper = [0i64; MAX_DIM];
    for r in rays {
        for (k, &c) in r.coords().iter().enumerate() {
            upper[k] = upper[k].checked_add(c as i64).ok_or(GeometryError::Overflow)?;
        }
    }
    let (lo, hi) = if det > 0 { (0, det) } else { (det, 0) };

    let mut out = Vec::new();
    let mut coords = [0i32; MAX_DIM];
    loop {
        let x = LatticePoint::from_array(coords, p);
        if equations.iter().all(|m| x.dot(m) == 0) {
            let sub: Vec<i128> = rows.iter().map(|&k| coords[k] as i128).collect();
            let mut inside = true;
            for adj_row in &adj {
                let v = linalg::dot(adj_row, &sub)?;
                if v < lo || v > hi {
                    inside = false;
                    break;
                }
            }
            if inside {
                out.push(x);
            }
        }
        // odometer over the bounding box
        let mut k = 0;
        while k < p {
            if (coords[k] as i64) < upper[k] {
                coords[k] += 1;
                break;
            }
            coords[k] = 0;
            k += 1;
        }
        if k == p {
            break;
        }
    }
    Ok(out)
}

/// The unique minimal generating set of the monoid `C ∩ N^p`, sorted
/// lexicographically by coordinates.
pub fn hilbert_basis(cone: &Cone) -> Result<Vec<LatticePoint>, GeometryError> {
    let mut candidates: HashSet<LatticePoint> = HashSet::new();
    for simplex in triangulate(cone)? {
        candidates.extend(zonotope_points(&simplex, cone.equations())?);
    }
    candidates.retain(|x| !x.is_zero());
    let pool: Vec<LatticePoint> = candidates.iter().copied().collect();
    // x is reducible iff x - h is a nonzero cone point for some basis element
    // h, and the basis is contained in the pool.
    let mut basis: Vec<LatticePoint> = pool
        .iter()
        .copied()
        .filter(|x| {
            !pool.iter().any(|h| {
                h != x
                    && x.checked_sub_nonneg(h)
                        .is_some_and(|rest| cone.contains(&rest))
            })
        })
        .collect();
    basis.sort_by(|a, b| a.coords().cmp(b.coords()));
    Ok(basis)
}
