//! C-semigroups represented by their gap set and minimal generators.
//!
//! A semigroup `S ⊆ C ∩ N^p` is stored as its finite gap set `H(S)` together
//! with its minimal generating set, both sorted increasingly in the ambient
//! matrix order. Children in the genus tree are produced incrementally:
//! removing a minimal generator `s` keeps every other generator minimal, and
//! the only new generators can be among `2s`, `3s` and `s + s_j`.

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{hilbert_basis, Cone, GeometryError, LatticePoint, PrecedingCounter};
use crate::order::{MatrixOrder, OrderError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("the root semigroup has no Frobenius element")]
    RootHasNoFrobenius,
    #[error("order has dimension {order} but the cone has dimension {cone}")]
    DimensionMismatch { cone: usize, order: usize },
    #[error("gap {0} is not a point of the cone")]
    GapOutsideCone(LatticePoint),
    #[error("the origin cannot be a gap")]
    ZeroGap,
    #[error("gap set is not the complement of a semigroup (fails at {0})")]
    NotClosed(LatticePoint),
    #[error("stored generators do not match the ones implied by the gaps")]
    GeneratorMismatch,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// The fixed cone and order that every semigroup of one tree shares.
#[derive(Debug)]
pub struct Ambient {
    cone: Cone,
    order: MatrixOrder,
    basis: Vec<LatticePoint>,
    counter: OnceLock<Result<PrecedingCounter, GeometryError>>,
}

impl Ambient {
    pub fn new(cone: Cone, order: MatrixOrder) -> Result<Arc<Ambient>, SemigroupError> {
        if cone.dim() != order.dim() {
            return Err(SemigroupError::DimensionMismatch {
                cone: cone.dim(),
                order: order.dim(),
            });
        }
        let mut basis = hilbert_basis(&cone)?;
        basis.sort_by(|a, b| order.cmp(a, b));
        Ok(Arc::new(Ambient {
            cone,
            order,
            basis,
            counter: OnceLock::new(),
        }))
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn order(&self) -> &MatrixOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// Hilbert basis of the cone, sorted by the order.
    pub fn hilbert_basis(&self) -> &[LatticePoint] {
        &self.basis
    }

    /// Number of cone points strictly preceding `x`.
    pub fn count_preceding(&self, x: &LatticePoint) -> Result<u64, GeometryError> {
        let counter = self
            .counter
            .get_or_init(|| PrecedingCounter::new(&self.cone, &self.order))
            .as_ref()
            .map_err(Clone::clone)?;
        Ok(counter.count(x))
    }

    /// Same cone under a different order.
    pub fn with_order(&self, order: MatrixOrder) -> Result<Arc<Ambient>, SemigroupError> {
        if order.dim() != self.dim() {
            return Err(SemigroupError::DimensionMismatch {
                cone: self.dim(),
                order: order.dim(),
            });
        }
        let mut basis = self.basis.clone();
        basis.sort_by(|a, b| order.cmp(a, b));
        Ok(Arc::new(Ambient {
            cone: self.cone.clone(),
            order,
            basis,
            counter: OnceLock::new(),
        }))
    }

    #[inline]
    pub(crate) fn is_gap(&self, gaps: &[LatticePoint], x: &LatticePoint) -> bool {
        let Some((frobenius, rest)) = gaps.split_last() else {
            return false;
        };
        match self.order.cmp(x, frobenius) {
            Ordering::Greater => false,
            Ordering::Equal => true,
            Ordering::Less => rest.binary_search_by(|g| self.order.cmp(g, x)).is_ok(),
        }
    }

    #[inline]
    pub(crate) fn in_semigroup(&self, gaps: &[LatticePoint], x: &LatticePoint) -> bool {
        self.cone.contains(x) && !self.is_gap(gaps, x)
    }

    /// Index of the first generator that follows the Frobenius element.
    #[inline]
    pub(crate) fn first_effective(&self, gaps: &[LatticePoint], gens: &[LatticePoint]) -> usize {
        match gaps.last() {
            None => 0,
            Some(fb) => gens.partition_point(|g| self.order.cmp(g, fb) == Ordering::Less),
        }
    }

    /// Appends to `out` the generators of `S \ {gens[i]}` that are not
    /// generators of `S`. `child_gaps` must already contain `gens[i]`.
    pub(crate) fn new_generators(
        &self,
        gens: &[LatticePoint],
        i: usize,
        child_gaps: &[LatticePoint],
        out: &mut Vec<LatticePoint>,
    ) {
        let s = gens[i];
        debug_assert!(self.is_gap(child_gaps, &s));
        let start = out.len();
        out.push(s + s);
        out.push(s + s + s);
        for (j, g) in gens.iter().enumerate() {
            if j != i {
                out.push(s + *g);
            }
        }
        let end = out.len();
        // S \ {s} is generated by the old generators plus the candidates, so a
        // candidate c is decomposable iff c - g lies in the child for some
        // other member g of that generating set.
        let decomposes = |c: &LatticePoint, g: &LatticePoint| {
            c.checked_sub_nonneg(g)
                .is_some_and(|rest| !rest.is_zero() && self.in_semigroup(child_gaps, &rest))
        };
        for ci in start..end {
            let c = out[ci];
            let hit = gens
                .iter()
                .enumerate()
                .any(|(j, g)| j != i && decomposes(&c, g))
                || (start..end).any(|k| k != ci && decomposes(&c, &out[k]));
            if !hit {
                out.push(c);
            }
        }
        out.drain(start..end);
    }

    /// Gap and generator lists of `S \ {gens[i]}`. When `gens[i]` follows
    /// the Frobenius element this is an effective son.
    pub(crate) fn son(
        &self,
        gaps: &[LatticePoint],
        gens: &[LatticePoint],
        i: usize,
    ) -> (Vec<LatticePoint>, Vec<LatticePoint>) {
        let mut child_gaps = Vec::with_capacity(gaps.len() + 1);
        child_gaps.extend_from_slice(gaps);
        let at = child_gaps.partition_point(|g| self.order.lt(g, &gens[i]));
        child_gaps.insert(at, gens[i]);
        let mut fresh = Vec::with_capacity(gens.len() + 2);
        self.new_generators(gens, i, &child_gaps, &mut fresh);
        fresh.sort_by(|a, b| self.order.cmp(a, b));
        let mut child_gens = Vec::with_capacity(gens.len() + fresh.len());
        let mut old = gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| *g).peekable();
        let mut new = fresh.into_iter().peekable();
        loop {
            match (old.peek(), new.peek()) {
                (Some(a), Some(b)) => {
                    if self.order.lt(a, b) {
                        child_gens.push(old.next().unwrap());
                    } else {
                        child_gens.push(new.next().unwrap());
                    }
                }
                (Some(_), None) => child_gens.push(old.next().unwrap()),
                (None, Some(_)) => child_gens.push(new.next().unwrap()),
                (None, None) => break,
            }
        }
        (child_gaps, child_gens)
    }

    /// Embedding dimension of the son removing `gens[i]`, without building it.
    pub(crate) fn son_embedding_dimension(
        &self,
        gaps: &[LatticePoint],
        gens: &[LatticePoint],
        i: usize,
        scratch_gaps: &mut Vec<LatticePoint>,
        scratch_gens: &mut Vec<LatticePoint>,
    ) -> usize {
        scratch_gaps.clear();
        scratch_gaps.extend_from_slice(gaps);
        scratch_gaps.push(gens[i]);
        scratch_gens.clear();
        self.new_generators(gens, i, scratch_gaps, scratch_gens);
        gens.len() - 1 + scratch_gens.len()
    }
}

/// `(n, e, g, N(Fb), holds)` for the extended Wilf inequality.
///
/// `n` counts semigroup elements strictly below the Frobenius element and
/// `frobenius_number = n + g - 1` counts all cone points below it, so for
/// numerical semigroups it equals the classical Frobenius number. The
/// inequality is `n·e >= frobenius_number + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WilfRecord {
    pub n: u64,
    pub e: u64,
    pub g: u64,
    pub frobenius_number: u64,
    pub holds: bool,
}

impl WilfRecord {
    pub fn new(n: u64, e: u64, g: u64) -> WilfRecord {
        assert!(g >= 1, "Wilf record needs at least one gap");
        let frobenius_number = n + g - 1;
        WilfRecord {
            n,
            e,
            g,
            frobenius_number,
            holds: n * e > frobenius_number,
        }
    }
}

#[derive(Clone)]
pub struct CSemigroup {
    ambient: Arc<Ambient>,
    gaps: Vec<LatticePoint>,
    gens: Vec<LatticePoint>,
}

impl CSemigroup {
    /// The whole cone `C ∩ N^p`: no gaps, generated by the Hilbert basis.
    pub fn root(ambient: Arc<Ambient>) -> CSemigroup {
        let gens = ambient.basis.clone();
        CSemigroup {
            ambient,
            gaps: Vec::new(),
            gens,
        }
    }

    /// Builds `(C ∩ N^p) \ gaps`, computing generators by walking down the
    /// tree: the gaps are removed one at a time in increasing order, and each
    /// must be a minimal generator of what is left at that point.
    pub fn from_gaps(ambient: Arc<Ambient>, gaps: &[LatticePoint]) -> Result<CSemigroup, SemigroupError> {
        let order = ambient.order();
        let mut sorted = gaps.to_vec();
        for g in &sorted {
            if g.dim() != ambient.dim() {
                return Err(GeometryError::DimensionMismatch.into());
            }
            if g.is_zero() {
                return Err(SemigroupError::ZeroGap);
            }
            if !ambient.cone.contains(g) {
                return Err(SemigroupError::GapOutsideCone(*g));
            }
        }
        sorted.sort_by(|a, b| order.cmp(a, b));
        sorted.dedup();
        let mut current = CSemigroup::root(ambient.clone());
        for h in sorted {
            let Some(i) = current.gens.iter().position(|g| *g == h) else {
                return Err(SemigroupError::NotClosed(h));
            };
            let (gaps, gens) = ambient.son(&current.gaps, &current.gens, i);
            current = CSemigroup {
                ambient: ambient.clone(),
                gaps,
                gens,
            };
        }
        Ok(current)
    }

    /// Assembles a semigroup from lists already known to be consistent.
    pub(crate) fn from_parts(
        ambient: Arc<Ambient>,
        mut gaps: Vec<LatticePoint>,
        mut gens: Vec<LatticePoint>,
    ) -> CSemigroup {
        let order = ambient.order();
        gaps.sort_by(|a, b| order.cmp(a, b));
        gens.sort_by(|a, b| order.cmp(a, b));
        CSemigroup { ambient, gaps, gens }
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn cone(&self) -> &Cone {
        &self.ambient.cone
    }

    pub fn order(&self) -> &MatrixOrder {
        &self.ambient.order
    }

    /// Gaps in increasing order.
    pub fn gaps(&self) -> &[LatticePoint] {
        &self.gaps
    }

    /// Minimal generators in increasing order.
    pub fn generators(&self) -> &[LatticePoint] {
        &self.gens
    }

    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    pub fn embedding_dimension(&self) -> usize {
        self.gens.len()
    }

    /// Largest gap, or `(-1,...,-1)` for the root.
    pub fn frobenius(&self) -> LatticePoint {
        self.gaps
            .last()
            .copied()
            .unwrap_or_else(|| LatticePoint::neg_ones(self.ambient.dim()))
    }

    pub fn is_gap(&self, x: &LatticePoint) -> bool {
        self.ambient.is_gap(&self.gaps, x)
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        !x.is_sentinel() && self.ambient.in_semigroup(&self.gaps, x)
    }

    /// Whether `c` is in `S`, nonzero, and not a sum of two nonzero
    /// elements of `S`.
    pub fn is_minimal_generator(&self, c: &LatticePoint) -> bool {
        if c.is_zero() || !self.contains(c) {
            return false;
        }
        !self.gens.iter().any(|g| {
            g != c
                && c.checked_sub_nonneg(g)
                    .is_some_and(|rest| self.ambient.in_semigroup(&self.gaps, &rest))
        })
    }

    /// Generators removable to obtain an effective son, i.e. those after
    /// the Frobenius element.
    pub fn effective_generators(&self) -> &[LatticePoint] {
        &self.gens[self.ambient.first_effective(&self.gaps, &self.gens)..]
    }

    pub fn effective_sons(&self) -> Vec<CSemigroup> {
        let r = self.ambient.first_effective(&self.gaps, &self.gens);
        (r..self.gens.len()).map(|i| self.son_at(i)).collect()
    }

    /// The effective son removing the `k`-th effective generator.
    pub fn effective_son(&self, k: usize) -> Option<CSemigroup> {
        let r = self.ambient.first_effective(&self.gaps, &self.gens);
        (r + k < self.gens.len()).then(|| self.son_at(r + k))
    }

    /// `S \ {gens[i]}` for any minimal generator, effective or not.
    pub fn remove_generator(&self, i: usize) -> CSemigroup {
        self.son_at(i)
    }

    fn son_at(&self, i: usize) -> CSemigroup {
        let (gaps, gens) = self.ambient.son(&self.gaps, &self.gens, i);
        CSemigroup {
            ambient: self.ambient.clone(),
            gaps,
            gens,
        }
    }

    /// `S ∪ {Fb(S)}`, the parent in the tree.
    pub fn parent(&self) -> Option<CSemigroup> {
        let (_, rest) = self.gaps.split_last()?;
        Some(CSemigroup::from_gaps(self.ambient.clone(), rest).expect("ancestors of a semigroup are semigroups"))
    }

    /// Number of elements of `S` strictly below the Frobenius element.
    pub fn sporadic_count(&self) -> Result<u64, SemigroupError> {
        let fb = self.gaps.last().ok_or(SemigroupError::RootHasNoFrobenius)?;
        let below = self.ambient.count_preceding(fb)?;
        Ok(below - (self.gaps.len() as u64 - 1))
    }

    pub fn wilf_check(&self) -> Result<WilfRecord, SemigroupError> {
        let n = self.sporadic_count()?;
        Ok(WilfRecord::new(n, self.gens.len() as u64, self.gaps.len() as u64))
    }

    pub fn to_json(&self) -> SemigroupJson {
        SemigroupJson {
            rays: self.cone().rays().to_vec(),
            order: self.order().matrix(),
            gaps: self.gaps.clone(),
            gens: self.gens.clone(),
            genus: self.gaps.len(),
            frobenius: self.gaps.last().copied(),
        }
    }

    /// Rebuilds a semigroup from its JSON form; generators are recomputed
    /// from the gaps and must agree with the stored ones.
    pub fn from_json(json: &SemigroupJson) -> Result<CSemigroup, SemigroupError> {
        let cone = Cone::new(&json.rays)?;
        let order = MatrixOrder::new(json.order.clone())?;
        let s = CSemigroup::from_gaps(Ambient::new(cone, order)?, &json.gaps)?;
        let mut stored = json.gens.clone();
        stored.sort_by(|a, b| s.order().cmp(a, b));
        if stored != s.gens {
            return Err(SemigroupError::GeneratorMismatch);
        }
        Ok(s)
    }
}

impl std::fmt::Debug for CSemigroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CSemigroup")
            .field("gaps", &self.gaps)
            .field("gens", &self.gens)
            .finish()
    }
}

/// Wire form of a semigroup. The Frobenius element of the root is `null`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupJson {
    pub rays: Vec<LatticePoint>,
    pub order: Vec<Vec<i64>>,
    pub gaps: Vec<LatticePoint>,
    pub gens: Vec<LatticePoint>,
    pub genus: usize,
    pub frobenius: Option<LatticePoint>,
}

/// Convenience for the root of the tree on `cone` under `order`.
pub fn root_semigroup(cone: Cone, order: MatrixOrder) -> Result<CSemigroup, SemigroupError> {
    Ok(CSemigroup::root(Ambient::new(cone, order)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c).unwrap()
    }

    fn plane() -> Arc<Ambient> {
        Ambient::new(Cone::orthant(2), MatrixOrder::grlex(2)).unwrap()
    }

    fn sorted(mut v: Vec<LatticePoint>) -> Vec<LatticePoint> {
        v.sort_by(|a, b| a.coords().cmp(b.coords()));
        v
    }

    #[test]
    fn roots() {
        let root = CSemigroup::root(plane());
        assert_eq!(root.embedding_dimension(), 2);
        assert_eq!(root.genus(), 0);
        assert!(root.frobenius().is_sentinel());
        let c = Cone::new(&[pt(&[3, 1]), pt(&[1, 2])]).unwrap();
        assert_eq!(root_semigroup(c, MatrixOrder::grlex(2)).unwrap().embedding_dimension(), 4);
        let c = Cone::new(&[pt(&[13, 1]), pt(&[1, 3])]).unwrap();
        assert_eq!(root_semigroup(c, MatrixOrder::grlex(2)).unwrap().embedding_dimension(), 15);
    }

    #[test]
    fn numerical_first_son() {
        let amb = Ambient::new(Cone::orthant(1), MatrixOrder::grlex(1)).unwrap();
        let sons = CSemigroup::root(amb).effective_sons();
        assert_eq!(sons.len(), 1);
        assert_eq!(sons[0].gaps(), &[pt(&[1])]);
        assert_eq!(sons[0].generators(), &[pt(&[2]), pt(&[3])]);
    }

    #[test]
    fn plane_genus_one() {
        let sons = CSemigroup::root(plane()).effective_sons();
        assert_eq!(sons.len(), 2);
        let without_e1 = sons.iter().find(|s| s.gaps() == [pt(&[1, 0])]).unwrap();
        assert_eq!(
            sorted(without_e1.generators().to_vec()),
            sorted(vec![pt(&[0, 1]), pt(&[2, 0]), pt(&[3, 0]), pt(&[1, 1])])
        );
    }

    #[test]
    fn membership_by_gaps() {
        let s = CSemigroup::from_gaps(plane(), &[pt(&[1, 0])]).unwrap();
        assert!(!s.contains(&pt(&[1, 0])));
        assert!(s.contains(&pt(&[2, 0])));
        assert!(s.contains(&pt(&[0, 0])));
        assert!(!s.contains(&LatticePoint::neg_ones(2)));
    }

    #[test]
    fn minimal_generator_tests() {
        let amb = Ambient::new(Cone::orthant(1), MatrixOrder::grlex(1)).unwrap();
        let s = CSemigroup::from_gaps(amb, &[pt(&[1])]).unwrap();
        assert!(!s.is_minimal_generator(&pt(&[5])));
        assert!(s.is_minimal_generator(&pt(&[3])));
        let s = CSemigroup::from_gaps(plane(), &[pt(&[1, 0])]).unwrap();
        assert!(s.is_minimal_generator(&pt(&[2, 0])));
        assert!(!s.is_minimal_generator(&pt(&[1, 2])));
        assert!(!s.is_minimal_generator(&pt(&[1, 0])));
    }

    #[test]
    fn from_gaps_rejects_non_semigroups() {
        assert_eq!(
            CSemigroup::from_gaps(plane(), &[pt(&[1, 1])]).unwrap_err(),
            SemigroupError::NotClosed(pt(&[1, 1]))
        );
        assert_eq!(
            CSemigroup::from_gaps(plane(), &[pt(&[0, 0])]).unwrap_err(),
            SemigroupError::ZeroGap
        );
        let amb = Ambient::new(Cone::new(&[pt(&[3, 1]), pt(&[1, 2])]).unwrap(), MatrixOrder::grlex(2)).unwrap();
        assert_eq!(
            CSemigroup::from_gaps(amb, &[pt(&[0, 1])]).unwrap_err(),
            SemigroupError::GapOutsideCone(pt(&[0, 1]))
        );
    }

    #[test]
    fn sporadic_counts() {
        let amb = Ambient::new(Cone::orthant(1), MatrixOrder::grlex(1)).unwrap();
        let s = CSemigroup::from_gaps(amb.clone(), &[pt(&[1])]).unwrap();
        assert_eq!(s.sporadic_count().unwrap(), 1);
        assert_eq!(
            CSemigroup::root(amb).sporadic_count(),
            Err(SemigroupError::RootHasNoFrobenius)
        );
        let s = CSemigroup::from_gaps(plane(), &[pt(&[1, 0]), pt(&[2, 0]), pt(&[3, 0])]).unwrap();
        assert_eq!(s.frobenius(), pt(&[3, 0]));
        assert_eq!(s.sporadic_count().unwrap(), 7);
    }

    #[test]
    fn wilf_on_two_three() {
        let amb = Ambient::new(Cone::orthant(1), MatrixOrder::grlex(1)).unwrap();
        let s = CSemigroup::from_gaps(amb, &[pt(&[1])]).unwrap();
        let w = s.wilf_check().unwrap();
        assert_eq!((w.n, w.e, w.g, w.frobenius_number), (1, 2, 1, 1));
        assert!(w.holds);
    }

    #[test]
    fn json_round_trip() {
        let s = CSemigroup::from_gaps(plane(), &[pt(&[1, 0]), pt(&[2, 0])]).unwrap();
        let j = s.to_json();
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"frobenius\":[2,0]"));
        let back = CSemigroup::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.to_json(), j);
        let mut tampered = j.clone();
        tampered.gens.pop();
        assert_eq!(CSemigroup::from_json(&tampered).unwrap_err(), SemigroupError::GeneratorMismatch);
        let root = CSemigroup::root(plane()).to_json();
        assert!(serde_json::to_string(&root).unwrap().contains("\"frobenius\":null"));
    }

    #[test]
    fn parent_adds_frobenius_back() {
        let s = CSemigroup::from_gaps(plane(), &[pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        let parent = s.parent().unwrap();
        assert_eq!(parent.gaps(), &[pt(&[0, 1])]);
        assert!(CSemigroup::root(plane()).parent().is_none());
    }
}
