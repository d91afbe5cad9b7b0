use std::fmt;
use std::ops::{Add, Sub};

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Largest ambient dimension supported by [`LatticePoint`].
pub const MAX_DIM: usize = 8;

/// An integer vector of dimension `p <= MAX_DIM`.
///
/// Points are `Copy` and stored inline; unused trailing coordinates are
/// always zero so that derived equality and hashing only see the live part.
/// The sentinel [`LatticePoint::neg_ones`] stands for the Frobenius element
/// of a semigroup without gaps and never belongs to a cone.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    coords: [i32; MAX_DIM],
    dim: u8,
}

impl LatticePoint {
    pub fn new(coords: &[i64]) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        if coords.len() > MAX_DIM {
            return Err(GeometryError::DimensionTooLarge(coords.len()));
        }
        let mut out = [0i32; MAX_DIM];
        for (slot, &c) in out.iter_mut().zip(coords) {
            *slot = i32::try_from(c).map_err(|_| GeometryError::Overflow)?;
        }
        Ok(LatticePoint {
            coords: out,
            dim: coords.len() as u8,
        })
    }

    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        LatticePoint {
            coords: [0; MAX_DIM],
            dim: dim as u8,
        }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut p = Self::zero(dim);
        p.coords[i] = 1;
        p
    }

    /// The vector `(-1, ..., -1)`.
    pub fn neg_ones(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        p.coords[..dim].fill(-1);
        p
    }

    pub(crate) fn from_array(coords: [i32; MAX_DIM], dim: usize) -> Self {
        LatticePoint {
            coords,
            dim: dim as u8,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[i32] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn is_sentinel(&self) -> bool {
        self.coords().iter().all(|&c| c == -1)
    }

    #[inline]
    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    /// `self - other` when every coordinate of the difference is nonnegative.
    #[inline]
    pub fn checked_sub_nonneg(&self, other: &LatticePoint) -> Option<LatticePoint> {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = [0i32; MAX_DIM];
        for k in 0..self.dim as usize {
            let d = self.coords[k] - other.coords[k];
            if d < 0 {
                return None;
            }
            out[k] = d;
        }
        Some(LatticePoint {
            coords: out,
            dim: self.dim,
        })
    }

    pub fn checked_add(&self, other: &LatticePoint) -> Option<LatticePoint> {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = [0i32; MAX_DIM];
        for k in 0..self.dim as usize {
            out[k] = self.coords[k].checked_add(other.coords[k])?;
        }
        Some(LatticePoint {
            coords: out,
            dim: self.dim,
        })
    }

    pub fn checked_scale(&self, factor: i32) -> Option<LatticePoint> {
        let mut out = [0i32; MAX_DIM];
        for k in 0..self.dim as usize {
            out[k] = self.coords[k].checked_mul(factor)?;
        }
        Some(LatticePoint {
            coords: out,
            dim: self.dim,
        })
    }

    /// Exact dot product with an integer vector of the same length.
    #[inline]
    pub fn dot(&self, v: &[i64]) -> i64 {
        debug_assert_eq!(v.len(), self.dim as usize);
        self.coords
            .iter()
            .zip(v)
            .map(|(&c, &w)| c as i64 * w)
            .sum()
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.coords().iter().map(|&c| c as i64).collect()
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;

    fn add(self, rhs: LatticePoint) -> LatticePoint {
        self.checked_add(&rhs).expect("lattice point coordinate overflow")
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;

    fn sub(self, rhs: LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = [0i32; MAX_DIM];
        for (k, slot) in out.iter_mut().enumerate().take(self.dim as usize) {
            *slot = self.coords[k]
                .checked_sub(rhs.coords[k])
                .expect("lattice point coordinate overflow");
        }
        LatticePoint {
            coords: out,
            dim: self.dim,
        }
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim()))?;
        for c in self.coords() {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LatticePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = LatticePoint;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of integers")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<LatticePoint, A::Error> {
                let mut coords = Vec::new();
                while let Some(c) = seq.next_element::<i64>()? {
                    coords.push(c);
                }
                LatticePoint::new(&coords).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(PointVisitor)
    }
}

/// Parses `"a1,a2;b1,b2;..."` into a list of points of equal dimension.
pub fn parse_point_list(s: &str) -> Result<Vec<LatticePoint>, GeometryError> {
    let mut out = Vec::new();
    for chunk in s.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let coords = chunk
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| GeometryError::Parse(format!("bad integer {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(LatticePoint::new(&coords)?);
    }
    if let Some(first) = out.first() {
        if out.iter().any(|q| q.dim() != first.dim()) {
            return Err(GeometryError::DimensionMismatch);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_and_zero() {
        let s = LatticePoint::neg_ones(3);
        assert!(s.is_sentinel());
        assert!(!s.is_nonnegative());
        assert!(LatticePoint::zero(3).is_zero());
        assert!(!LatticePoint::zero(3).is_sentinel());
    }

    #[test]
    fn parse_rays() {
        let pts = parse_point_list("3,1;1,2").unwrap();
        assert_eq!(pts, vec![
            LatticePoint::new(&[3, 1]).unwrap(),
            LatticePoint::new(&[1, 2]).unwrap()
        ]);
        assert!(matches!(
            parse_point_list("1,2;3"),
            Err(GeometryError::DimensionMismatch)
        ));
        assert!(matches!(parse_point_list("1,x"), Err(GeometryError::Parse(_))));
    }

    #[test]
    fn nonneg_difference() {
        let a = LatticePoint::new(&[2, 1]).unwrap();
        let b = LatticePoint::new(&[1, 1]).unwrap();
        assert_eq!(a.checked_sub_nonneg(&b), LatticePoint::new(&[1, 0]).ok());
        assert_eq!(b.checked_sub_nonneg(&a), None);
    }

    #[test]
    fn json_shape() {
        let a = LatticePoint::new(&[3, 0, 7]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[3,0,7]");
        let back: LatticePoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
