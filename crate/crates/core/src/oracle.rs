//! Brute-force reference implementations.
//!
//! Everything here recomputes from definitions: points are found by scanning
//! a coordinate box, membership is a hash lookup in the gap set, and
//! minimality is checked against every lighter generator. Nothing is shared
//! with the incremental machinery in [`crate::semigroup`] beyond the cone's
//! inequality test and the order comparison, so agreement between the two is
//! meaningful. Expect these routines to be orders of magnitude slower.

use std::cmp::Ordering;
use std::collections::HashSet;

use thiserror::Error;

use crate::explorer::GenusReport;
use crate::geometry::{hilbert_basis, Cone, GeometryError, LatticePoint, MAX_DIM};
use crate::order::MatrixOrder;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("gap {gap} is the sum of {left} and {right}, both in the set")]
    NotClosed {
        gap: LatticePoint,
        left: LatticePoint,
        right: LatticePoint,
    },
    #[error("{0} is not a nonzero point of the cone")]
    BadGap(LatticePoint),
    #[error("cone has dimension {cone}, order has dimension {order}")]
    DimensionMismatch { cone: usize, order: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// All cone points with `w.x <= bound`, sorted by weight.
fn points_up_to(cone: &Cone, w: &[i64], bound: i64) -> Vec<LatticePoint> {
    let p = cone.dim();
    let mut out = Vec::new();
    if bound < 0 {
        return out;
    }
    let mut coords = [0i32; MAX_DIM];
    'scan: loop {
        let x = LatticePoint::from_array(coords, p);
        if x.dot(w) <= bound && cone.contains(&x) {
            out.push(x);
        }
        for k in 0..p {
            if (coords[k] as i64 + 1) * w[k] <= bound {
                coords[k] += 1;
                continue 'scan;
            }
            coords[k] = 0;
        }
        break;
    }
    out.sort_by_key(|x| x.dot(w));
    out
}

fn check_gaps(cone: &Cone, gaps: &HashSet<LatticePoint>) -> Result<(), OracleError> {
    for h in gaps {
        if h.dim() != cone.dim() || h.is_zero() || !cone.contains(h) {
            return Err(OracleError::BadGap(*h));
        }
    }
    Ok(())
}

/// The weight bound `2F + B` under which every minimal generator lies.
///
/// `F` is the largest weight of a gap (0 without gaps) and `B` the largest
/// weight of a Hilbert-basis element. A minimal generator `x` outside the
/// basis is a sum of basis elements; cutting the sum at the first prefix of
/// weight above `F` gives `x = u + v` with `u` in the set, so `v` must be a
/// gap, and `w.x <= (F + B) + F`.
pub fn generator_weight_bound(cone: &Cone, order: &MatrixOrder, gaps: &[LatticePoint]) -> Result<i64, OracleError> {
    let w = order.weight_vector();
    let f = gaps.iter().map(|h| h.dot(w)).max().unwrap_or(0);
    let b = hilbert_basis(cone)?.iter().map(|h| h.dot(w)).max().unwrap_or(0);
    Ok(2 * f + b)
}

/// Minimal generators of `(C ∩ N^p) \ gaps` found by definition, scanning
/// every point of weight at most `2F + B`. Sorted by `order`.
pub fn minimal_gens_from_scratch(
    cone: &Cone,
    order: &MatrixOrder,
    gaps: &[LatticePoint],
) -> Result<Vec<LatticePoint>, OracleError> {
    let bound = generator_weight_bound(cone, order, gaps)?;
    minimal_gens_up_to(cone, order, gaps, bound)
}

/// Same as [`minimal_gens_from_scratch`] with an explicit weight bound.
pub fn minimal_gens_up_to(
    cone: &Cone,
    order: &MatrixOrder,
    gaps: &[LatticePoint],
    bound: i64,
) -> Result<Vec<LatticePoint>, OracleError> {
    if cone.dim() != order.dim() {
        return Err(OracleError::DimensionMismatch {
            cone: cone.dim(),
            order: order.dim(),
        });
    }
    let points = points_up_to(cone, order.weight_vector(), bound);
    minimal_gens_among(cone, order, gaps, &points)
}

/// The definitional scan over `points`, which must be every cone point up
/// to some weight, sorted by weight.
fn minimal_gens_among(
    cone: &Cone,
    order: &MatrixOrder,
    gaps: &[LatticePoint],
    points: &[LatticePoint],
) -> Result<Vec<LatticePoint>, OracleError> {
    let gap_set: HashSet<LatticePoint> = gaps.iter().copied().collect();
    check_gaps(cone, &gap_set)?;
    // Any sum of two nonzero members splits off a lighter minimal
    // generator whose complement is again a member, so scanning in weight
    // order against the generators found so far is exhaustive.
    let mut gens: Vec<LatticePoint> = Vec::new();
    for x in points.iter().filter(|x| !x.is_zero()) {
        let is_gap = gap_set.contains(x);
        let split = gens.iter().find_map(|g| {
            let rest = x.checked_sub_nonneg(g)?;
            (!rest.is_zero() && cone.contains(&rest) && !gap_set.contains(&rest)).then_some((*g, rest))
        });
        match (is_gap, split) {
            (true, Some((left, right))) => {
                return Err(OracleError::NotClosed { gap: *x, left, right });
            }
            (false, None) => gens.push(*x),
            _ => {}
        }
    }
    gens.sort_by(|a, b| order.cmp(a, b));
    Ok(gens)
}

/// Cone points sorted by weight, rescanned with a doubled bound whenever a
/// caller asks for more.
struct PointCache<'a> {
    cone: &'a Cone,
    w: &'a [i64],
    bound: i64,
    points: Vec<LatticePoint>,
}

impl<'a> PointCache<'a> {
    fn new(cone: &'a Cone, w: &'a [i64]) -> Self {
        PointCache {
            cone,
            w,
            bound: -1,
            points: Vec::new(),
        }
    }

    fn up_to(&mut self, bound: i64) -> &[LatticePoint] {
        if bound > self.bound {
            self.bound = bound.max(2 * self.bound);
            self.points = points_up_to(self.cone, self.w, self.bound);
        }
        let end = self.points.partition_point(|x| x.dot(self.w) <= bound);
        &self.points[..end]
    }
}

/// True iff no gap splits as a sum of two nonzero non-gaps of the cone.
pub fn verify_closure(cone: &Cone, gaps: &[LatticePoint]) -> bool {
    let gap_set: HashSet<LatticePoint> = gaps.iter().copied().collect();
    if check_gaps(cone, &gap_set).is_err() {
        return false;
    }
    let ones = vec![1i64; cone.dim()];
    let top = gaps.iter().map(|h| h.dot(&ones)).max().unwrap_or(0);
    let points = points_up_to(cone, &ones, top);
    for h in gaps {
        for u in points.iter().filter(|u| !u.is_zero() && !gap_set.contains(u)) {
            if u.dot(&ones) >= h.dot(&ones) {
                break;
            }
            if let Some(v) = h.checked_sub_nonneg(u) {
                if !v.is_zero() && cone.contains(&v) && !gap_set.contains(&v) {
                    return false;
                }
            }
        }
    }
    true
}

/// Cone points of coordinate sum at most `bound` that are not sums of
/// `gens`, sorted by coordinate sum. When `bound` is at least the largest
/// gap's coordinate sum this is the full gap set of the generated monoid.
pub fn gaps_from_generators(cone: &Cone, gens: &[LatticePoint], bound: i64) -> Vec<LatticePoint> {
    let ones = vec![1i64; cone.dim()];
    let points = points_up_to(cone, &ones, bound);
    let mut reached: HashSet<LatticePoint> = HashSet::new();
    let mut gaps = Vec::new();
    for x in &points {
        let hit = x.is_zero()
            || gens
                .iter()
                .any(|g| x.checked_sub_nonneg(g).is_some_and(|rest| reached.contains(&rest)));
        if hit {
            reached.insert(*x);
        } else {
            gaps.push(*x);
        }
    }
    gaps
}

/// A tree node as seen by the oracle: its gaps and recomputed generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveNode {
    /// Sorted by the order.
    pub gaps: Vec<LatticePoint>,
    /// Sorted by the order.
    pub gens: Vec<LatticePoint>,
}

impl NaiveNode {
    fn frobenius(&self) -> Option<&LatticePoint> {
        self.gaps.last()
    }
}

/// Every tree node up to `max_genus`, level by level. Children are obtained
/// by removing a generator above the Frobenius element and recomputing the
/// child's generators from scratch.
pub fn naive_tree_levels(cone: &Cone, order: &MatrixOrder, max_genus: usize) -> Result<Vec<Vec<NaiveNode>>, OracleError> {
    if cone.dim() != order.dim() {
        return Err(OracleError::DimensionMismatch {
            cone: cone.dim(),
            order: order.dim(),
        });
    }
    let w = order.weight_vector();
    let basis_weight = generator_weight_bound(cone, order, &[])?;
    let mut cache = PointCache::new(cone, w);
    let root = NaiveNode {
        gaps: Vec::new(),
        gens: minimal_gens_among(cone, order, &[], cache.up_to(basis_weight))?,
    };
    let mut levels = vec![vec![root]];
    for _ in 0..max_genus {
        let mut next = Vec::new();
        for node in levels.last().expect("at least the root level") {
            for x in &node.gens {
                let above = node.frobenius().is_none_or(|f| order.cmp(x, f) == Ordering::Greater);
                if !above {
                    continue;
                }
                let mut gaps = node.gaps.clone();
                gaps.push(*x);
                let top = gaps.iter().map(|h| h.dot(w)).max().unwrap_or(0);
                let gens = minimal_gens_among(cone, order, &gaps, cache.up_to(2 * top + basis_weight))?;
                next.push(NaiveNode { gaps, gens });
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

/// Recomputes every node's generators with the looser weight bound
/// `3F + 2B` and returns the nodes where that finds anything new. An empty
/// result backs the `2F + B` bound empirically.
pub fn audit_weight_bound(cone: &Cone, order: &MatrixOrder, nodes: &[NaiveNode]) -> Result<Vec<NaiveNode>, OracleError> {
    let w = order.weight_vector();
    let basis_weight = generator_weight_bound(cone, order, &[])?;
    let mut cache = PointCache::new(cone, w);
    let mut bad = Vec::new();
    for node in nodes {
        let top = node.gaps.iter().map(|h| h.dot(w)).max().unwrap_or(0);
        let gens = minimal_gens_among(cone, order, &node.gaps, cache.up_to(3 * top + 2 * basis_weight))?;
        if gens != node.gens {
            bad.push(node.clone());
        }
    }
    Ok(bad)
}

/// Number of tree nodes of each genus `0..=max_genus`.
pub fn naive_tree_count(cone: &Cone, order: &MatrixOrder, max_genus: usize) -> Result<GenusReport, OracleError> {
    let levels = naive_tree_levels(cone, order, max_genus)?;
    let counts: Vec<u64> = levels.iter().map(|l| l.len() as u64).collect();
    Ok(GenusReport::from_counts(&counts, false))
}
