//! Explicit families of semigroups with closed-form invariants.
//!
//! Every constructor writes down the gap set and the minimal generators
//! straight from the family's set description, without walking the tree.
//! Indices of coordinate axes are 0-based.

use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{Cone, LatticePoint};
use crate::order::MatrixOrder;
use crate::semigroup::{Ambient, CSemigroup, SemigroupError};

/// Keeps coordinates and gap counts far from the `i32` range.
const MAX_PARAM: u64 = 1 << 16;
const MAX_GENUS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("the semigroup does not live on a full orthant")]
    NotOrthantCone,
    #[error("embedding dimension is {actual}, expected {expected}")]
    WrongEmbeddingDimension { expected: usize, actual: usize },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

fn bad(msg: impl Into<String>) -> FamilyError {
    FamilyError::BadParams(msg.into())
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Point of `N^p` from `(axis, value)` pairs.
fn point(p: usize, entries: &[(usize, u64)]) -> LatticePoint {
    let mut c = vec![0i64; p];
    for &(k, v) in entries {
        c[k] += v as i64;
    }
    LatticePoint::new(&c).expect("family points are small and nonnegative")
}

fn check_param(name: &str, v: u64) -> Result<(), FamilyError> {
    if v > MAX_PARAM {
        return Err(bad(format!("{name} = {v} exceeds {MAX_PARAM}")));
    }
    Ok(())
}

fn check_coprime_pair(a: u64, b: u64) -> Result<(), FamilyError> {
    if a < 2 || b < 2 {
        return Err(bad(format!("generators {a} and {b} must both be at least 2")));
    }
    check_param("a", a)?;
    check_param("b", b)?;
    if gcd(a, b) != 1 {
        return Err(FamilyError::NotCoprime(a, b));
    }
    Ok(())
}

fn orthant_ambient(p: usize, order: &MatrixOrder) -> Result<Arc<Ambient>, FamilyError> {
    Ok(Ambient::new(Cone::orthant(p), order.clone())?)
}

/// Frobenius number `ab - a - b` of `<a, b>`.
pub fn two_gen_frobenius(a: u64, b: u64) -> Result<u64, FamilyError> {
    check_coprime_pair(a, b)?;
    Ok(a * b - a - b)
}

/// Genus `(ab - a - b + 1) / 2` of `<a, b>`.
pub fn two_gen_genus(a: u64, b: u64) -> Result<u64, FamilyError> {
    check_coprime_pair(a, b)?;
    Ok((a * b - a - b).div_ceil(2))
}

/// Gaps of `<a, b>` in increasing order.
pub fn two_gen_gaps(a: u64, b: u64) -> Result<Vec<u64>, FamilyError> {
    let f = two_gen_frobenius(a, b)?;
    Ok((1..=f).filter(|&n| (0..=n / a).all(|i| !(n - i * a).is_multiple_of(b))).collect())
}

/// Minimal generators `{b+1, ..., 2b+1}` of `N \ {1, ..., b}`.
pub fn interval_gens(b: u64) -> Vec<u64> {
    (b + 1..=2 * b + 1).collect()
}

/// Parameters of one member of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyParams {
    /// `N^p \ {e_i, e_i + e_k, ..., e_i + (h-1) e_k}`, embedding dimension `2p`.
    Easy2P { p: usize, h: u64, i: usize, k: usize },
    /// `N^p \ {e_j, 2 e_j, ..., (q-1) e_j}`.
    AxisGaps { p: usize, q: u64, j: usize },
    /// Gaps `{x : x_1 ∉ <λ1, λ2>, x_i < q_i for i >= 2}`; `p = 1 + sides.len()`.
    TwoGenBox { lambda1: u64, lambda2: u64, sides: Vec<u64> },
    /// `<(1,1)> ∪ (C \ [0,b] x [0,a])` on the cone spanned by `(1,0)` and `(1,1)`.
    ConeStrip { a: u64, b: u64 },
    /// The numerical semigroup `<a, b>`.
    TwoGenNumerical { a: u64, b: u64 },
    /// `N \ {1, ..., b}`.
    Interval { b: u64 },
}

/// Invariants predicted by the family's formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub embedding_dimension: u64,
    pub genus: u64,
    /// `None` when the semigroup has no gaps.
    pub frobenius: Option<LatticePoint>,
}

impl FamilyParams {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyParams::Easy2P { .. } => "easy-2p",
            FamilyParams::AxisGaps { .. } => "axis-gaps",
            FamilyParams::TwoGenBox { .. } => "two-gen-box",
            FamilyParams::ConeStrip { .. } => "cone-strip",
            FamilyParams::TwoGenNumerical { .. } => "two-gen",
            FamilyParams::Interval { .. } => "interval",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FamilyParams::Easy2P { p, .. } | FamilyParams::AxisGaps { p, .. } => *p,
            FamilyParams::TwoGenBox { sides, .. } => sides.len() + 1,
            FamilyParams::ConeStrip { .. } => 2,
            FamilyParams::TwoGenNumerical { .. } | FamilyParams::Interval { .. } => 1,
        }
    }

    /// The cone the family lives on.
    pub fn cone(&self) -> Cone {
        match self {
            FamilyParams::ConeStrip { .. } => strip_cone(),
            other => Cone::orthant(other.dim()),
        }
    }

    pub fn build(&self, order: &MatrixOrder) -> Result<CSemigroup, FamilyError> {
        match *self {
            FamilyParams::Easy2P { p, h, i, k } => build_easy_2p(p, h, i, k, order),
            FamilyParams::AxisGaps { p, q, j } => build_axis_gaps(p, q, j, order),
            FamilyParams::TwoGenBox {
                lambda1,
                lambda2,
                ref sides,
            } => build_two_gen_box(lambda1, lambda2, sides, order),
            FamilyParams::ConeStrip { a, b } => build_cone_strip(a, b, order),
            FamilyParams::TwoGenNumerical { a, b } => build_two_gen_numerical(a, b, order),
            FamilyParams::Interval { b } => build_interval(b, order),
        }
    }

    pub fn closed_form(&self) -> Result<ClosedForm, FamilyError> {
        match *self {
            FamilyParams::Easy2P { p, h, i, k } => {
                check_easy_2p(p, h, i, k)?;
                Ok(ClosedForm {
                    embedding_dimension: 2 * p as u64,
                    genus: h,
                    frobenius: Some(point(p, &[(i, 1), (k, h - 1)])),
                })
            }
            FamilyParams::AxisGaps { p, q, j } => {
                check_axis_gaps(p, q, j)?;
                Ok(ClosedForm {
                    embedding_dimension: p as u64 * q,
                    genus: q - 1,
                    frobenius: (q > 1).then(|| point(p, &[(j, q - 1)])),
                })
            }
            FamilyParams::TwoGenBox {
                lambda1,
                lambda2,
                ref sides,
            } => {
                check_two_gen_box(lambda1, lambda2, sides)?;
                let p = sides.len() + 1;
                let f = two_gen_frobenius(lambda1, lambda2)?;
                let u = two_gen_genus(lambda1, lambda2)?;
                // a gap α of the plane semigroup yields the generators
                // α e1 + q_i e_i only while α is below the smaller generator
                let small = lambda1.min(lambda2) - 1;
                let mut fb = vec![(0, f)];
                fb.extend(sides.iter().enumerate().map(|(t, &q)| (t + 1, q - 1)));
                Ok(ClosedForm {
                    embedding_dimension: p as u64 + 1 + (p as u64 - 1) * small,
                    genus: u * sides.iter().product::<u64>(),
                    frobenius: Some(point(p, &fb)),
                })
            }
            FamilyParams::ConeStrip { a, b } => {
                check_cone_strip(a, b)?;
                Ok(ClosedForm {
                    embedding_dimension: 2 * b + 2,
                    genus: (1 + a) * (2 * b - a) / 2,
                    frobenius: Some(point(2, &[(0, b), (1, a)])),
                })
            }
            FamilyParams::TwoGenNumerical { a, b } => Ok(ClosedForm {
                embedding_dimension: 2,
                genus: two_gen_genus(a, b)?,
                frobenius: Some(point(1, &[(0, two_gen_frobenius(a, b)?)])),
            }),
            FamilyParams::Interval { b } => {
                check_param("b", b)?;
                Ok(ClosedForm {
                    embedding_dimension: b + 1,
                    genus: b,
                    frobenius: (b > 0).then(|| point(1, &[(0, b)])),
                })
            }
        }
    }
}

fn check_easy_2p(p: usize, h: u64, i: usize, k: usize) -> Result<(), FamilyError> {
    if p < 2 || i >= p || k >= p || i == k {
        return Err(bad(format!("need p >= 2 and distinct axes i, k < p (p={p}, i={i}, k={k})")));
    }
    if h == 0 {
        return Err(bad("h must be at least 1"));
    }
    check_param("h", h)
}

/// `N^p \ {e_i, e_i + e_k, ..., e_i + (h-1) e_k}` for `h >= 1` and `i != k`.
///
/// Minimally generated by the `e_j` with `j != i`, `2e_i`, `3e_i`,
/// `e_i + h e_k` and `e_i + e_j` for `j ∉ {i, k}`.
pub fn build_easy_2p(p: usize, h: u64, i: usize, k: usize, order: &MatrixOrder) -> Result<CSemigroup, FamilyError> {
    check_easy_2p(p, h, i, k)?;
    let ambient = orthant_ambient(p, order)?;
    let gaps = (0..h).map(|m| point(p, &[(i, 1), (k, m)])).collect();
    let mut gens = vec![point(p, &[(i, 2)]), point(p, &[(i, 3)]), point(p, &[(i, 1), (k, h)])];
    for j in (0..p).filter(|&j| j != i) {
        gens.push(point(p, &[(j, 1)]));
        if j != k {
            gens.push(point(p, &[(i, 1), (j, 1)]));
        }
    }
    Ok(CSemigroup::from_parts(ambient, gaps, gens))
}

fn check_axis_gaps(p: usize, q: u64, j: usize) -> Result<(), FamilyError> {
    if p < 1 || j >= p || q == 0 {
        return Err(bad(format!("need q >= 1 and axis j < p (p={p}, q={q}, j={j})")));
    }
    check_param("q", q)
}

/// `N^p \ {e_j, ..., (q-1) e_j}`, minimally generated by `i e_j` for
/// `q <= i <= 2q-1`, the other unit vectors, and `e_i + m e_j` for
/// `1 <= m <= q-1`.
pub fn build_axis_gaps(p: usize, q: u64, j: usize, order: &MatrixOrder) -> Result<CSemigroup, FamilyError> {
    check_axis_gaps(p, q, j)?;
    let ambient = orthant_ambient(p, order)?;
    let gaps = (1..q).map(|m| point(p, &[(j, m)])).collect();
    let mut gens: Vec<_> = (q..2 * q).map(|m| point(p, &[(j, m)])).collect();
    for i in (0..p).filter(|&i| i != j) {
        gens.extend((0..q).map(|m| point(p, &[(i, 1), (j, m)])));
    }
    Ok(CSemigroup::from_parts(ambient, gaps, gens))
}

fn check_two_gen_box(lambda1: u64, lambda2: u64, sides: &[u64]) -> Result<(), FamilyError> {
    check_coprime_pair(lambda1, lambda2)?;
    if sides.contains(&0) {
        return Err(bad("box sides must be positive"));
    }
    for &q in sides {
        check_param("q", q)?;
    }
    let u = two_gen_genus(lambda1, lambda2)?;
    let genus = sides.iter().try_fold(u, |acc, &q| acc.checked_mul(q).filter(|&g| g <= MAX_GENUS));
    if genus.is_none() {
        return Err(bad(format!("genus exceeds {MAX_GENUS}")));
    }
    Ok(())
}

/// Gaps `{x : x_1 a gap of <λ1, λ2>, x_i < q_i for i >= 2}` on `N^p` with
/// `p = 1 + sides.len()`.
pub fn build_two_gen_box(
    lambda1: u64,
    lambda2: u64,
    sides: &[u64],
    order: &MatrixOrder,
) -> Result<CSemigroup, FamilyError> {
    check_two_gen_box(lambda1, lambda2, sides)?;
    let p = sides.len() + 1;
    let ambient = orthant_ambient(p, order)?;
    let plane_gaps = two_gen_gaps(lambda1, lambda2)?;

    let mut gaps = Vec::new();
    let mut rest = vec![0u64; sides.len()];
    loop {
        for &alpha in &plane_gaps {
            let mut entries = vec![(0, alpha)];
            entries.extend(rest.iter().enumerate().map(|(t, &v)| (t + 1, v)));
            gaps.push(point(p, &entries));
        }
        let Some(t) = (0..rest.len()).find(|&t| rest[t] + 1 < sides[t]) else {
            break;
        };
        rest[t] += 1;
        rest[..t].fill(0);
    }

    let small = lambda1.min(lambda2);
    let mut gens = vec![point(p, &[(0, lambda1)]), point(p, &[(0, lambda2)])];
    for (t, &q) in sides.iter().enumerate() {
        gens.push(point(p, &[(t + 1, 1)]));
        gens.extend((1..small).map(|alpha| point(p, &[(0, alpha), (t + 1, q)])));
    }
    Ok(CSemigroup::from_parts(ambient, gaps, gens))
}

fn strip_cone() -> Cone {
    Cone::new(&[point(2, &[(0, 1)]), point(2, &[(0, 1), (1, 1)])]).expect("strip cone is valid")
}

fn check_cone_strip(a: u64, b: u64) -> Result<(), FamilyError> {
    if a >= b {
        return Err(bad(format!("need a < b (a={a}, b={b})")));
    }
    check_param("b", b)
}

/// `<(1,1)> ∪ (C \ [0,b] x [0,a])` on the cone spanned by `(1,0)` and
/// `(1,1)`, for `a < b`.
pub fn build_cone_strip(a: u64, b: u64, order: &MatrixOrder) -> Result<CSemigroup, FamilyError> {
    check_cone_strip(a, b)?;
    let ambient = Ambient::new(strip_cone(), order.clone())?;
    let mut gaps = Vec::new();
    for y in 0..=a {
        gaps.extend((y + 1..=b).map(|x| point(2, &[(0, x), (1, y)])));
    }
    let mut gens = vec![point(2, &[(0, 1), (1, 1)])];
    gens.extend((b + 1..=2 * b + 1).map(|x| point(2, &[(0, x)])));
    gens.extend((1..=a).map(|y| point(2, &[(0, b + 1), (1, y)])));
    gens.extend((a + 2..=b + 1).map(|x| point(2, &[(0, x), (1, a + 1)])));
    Ok(CSemigroup::from_parts(ambient, gaps, gens))
}

/// The numerical semigroup `<a, b>` for coprime `a, b >= 2`.
pub fn build_two_gen_numerical(a: u64, b: u64, order: &MatrixOrder) -> Result<CSemigroup, FamilyError> {
    let gaps = two_gen_gaps(a, b)?;
    let ambient = orthant_ambient(1, order)?;
    Ok(CSemigroup::from_parts(
        ambient,
        gaps.into_iter().map(|x| point(1, &[(0, x)])).collect(),
        vec![point(1, &[(0, a)]), point(1, &[(0, b)])],
    ))
}

/// `N \ {1, ..., b}`.
pub fn build_interval(b: u64, order: &MatrixOrder) -> Result<CSemigroup, FamilyError> {
    check_param("b", b)?;
    let ambient = orthant_ambient(1, order)?;
    Ok(CSemigroup::from_parts(
        ambient,
        (1..=b).map(|x| point(1, &[(0, x)])).collect(),
        interval_gens(b).into_iter().map(|x| point(1, &[(0, x)])).collect(),
    ))
}

/// Whether the generators of an `N^p`-semigroup with `e = 2p` have the
/// shape `{e_j : j != i} ∪ {λ1 e_i, λ2 e_i} ∪ {e_i + q_j e_j : j != i}` for
/// some axis `i` and coprime `λ1, λ2`.
pub fn check_mult_2p_shape(s: &CSemigroup) -> Result<bool, FamilyError> {
    if !s.cone().is_orthant() {
        return Err(FamilyError::NotOrthantCone);
    }
    let p = s.cone().dim();
    let e = s.embedding_dimension();
    if e != 2 * p {
        return Err(FamilyError::WrongEmbeddingDimension { expected: 2 * p, actual: e });
    }
    Ok((0..p).any(|i| matches_template(s.generators(), p, i)))
}

fn matches_template(gens: &[LatticePoint], p: usize, i: usize) -> bool {
    let mut units = vec![false; p];
    let mut multiples = Vec::new();
    let mut mixed = vec![0usize; p];
    for g in gens {
        let c = g.coords();
        let support: Vec<usize> = (0..p).filter(|&t| c[t] != 0).collect();
        match support.as_slice() {
            [t] if *t == i => multiples.push(c[i] as u64),
            [t] if c[*t] == 1 => units[*t] = true,
            [a, b] if c[i] == 1 && (*a == i || *b == i) => {
                let other = if *a == i { *b } else { *a };
                mixed[other] += 1;
            }
            _ => return false,
        }
    }
    let coprime = matches!(multiples.as_slice(), [a, b] if gcd(*a, *b) == 1);
    coprime && (0..p).filter(|&j| j != i).all(|j| units[j] && mixed[j] == 1)
}
