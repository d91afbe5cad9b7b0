//! Matrix monomial orders on `N^p`.
//!
//! `a ≺ b` iff the first nonzero entry of `M·(b - a)` is positive. A
//! nonsingular `M` makes the order total; a strictly positive first row
//! makes every point have finitely many predecessors and puts `0` first.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{linalg, LatticePoint, MAX_DIM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("order matrix is singular")]
    SingularMatrix,
    #[error("first row of the order matrix must be strictly positive")]
    NonPositiveFirstRow,
    #[error("order matrix must be square with 1..={MAX_DIM} rows, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("order matrix entries must be below 2^24 in absolute value")]
    EntryTooLarge,
    #[error("no nonsingular matrix after {0} random draws")]
    TooManyRedraws(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixOrder {
    dim: usize,
    rows: [[i64; MAX_DIM]; MAX_DIM],
    /// Copy of the first row, sliced to `dim`.
    weight: Vec<i64>,
}

impl MatrixOrder {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self, OrderError> {
        let n = matrix.len();
        let bad_shape = || OrderError::BadShape {
            rows: n,
            cols: matrix.first().map_or(0, Vec::len),
        };
        if n == 0 || n > MAX_DIM || matrix.iter().any(|r| r.len() != n) {
            return Err(bad_shape());
        }
        if matrix[0].iter().any(|&x| x <= 0) {
            return Err(OrderError::NonPositiveFirstRow);
        }
        let wide: Vec<Vec<i128>> = matrix
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        // keeps M·(a - b) inside i64 for any pair of i32 points
        if matrix.iter().flatten().any(|x| x.unsigned_abs() >= 1 << 24) {
            return Err(OrderError::EntryTooLarge);
        }
        if linalg::determinant(&wide).map_err(|_| OrderError::SingularMatrix)? == 0 {
            return Err(OrderError::SingularMatrix);
        }
        let mut rows = [[0i64; MAX_DIM]; MAX_DIM];
        for (dst, src) in rows.iter_mut().zip(&matrix) {
            dst[..n].copy_from_slice(src);
        }
        Ok(MatrixOrder {
            dim: n,
            rows,
            weight: matrix[0].clone(),
        })
    }

    /// Degree order: weight `(1,...,1)`, ties broken by `e_1, ..., e_{p-1}`.
    pub fn grlex(dim: usize) -> Self {
        let mut m = vec![vec![0i64; dim]; dim];
        m[0].fill(1);
        for i in 1..dim {
            m[i][i - 1] = 1;
        }
        MatrixOrder::new(m).expect("grlex matrix is valid")
    }

    /// First row uniform in `1..=10`, other entries uniform in `-10..=10`;
    /// singular draws are redrawn.
    pub fn random(dim: usize, seed: u64) -> Result<Self, OrderError> {
        const MAX_REDRAWS: usize = 1000;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MAX_REDRAWS {
            let mut m = vec![vec![0i64; dim]; dim];
            for (i, row) in m.iter_mut().enumerate() {
                for x in row.iter_mut() {
                    *x = if i == 0 {
                        rng.gen_range(1..=10)
                    } else {
                        rng.gen_range(-10..=10)
                    };
                }
            }
            match MatrixOrder::new(m) {
                Ok(ord) => return Ok(ord),
                Err(OrderError::SingularMatrix) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(OrderError::TooManyRedraws(MAX_REDRAWS))
    }

    /// Parses `"grlex"` or `"r11,r12;r21,r22"`.
    pub fn parse(s: &str, dim: usize) -> Result<Self, OrderError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("grlex") {
            if !(1..=MAX_DIM).contains(&dim) {
                return Err(OrderError::BadShape { rows: dim, cols: dim });
            }
            return Ok(MatrixOrder::grlex(dim));
        }
        let matrix = s
            .split(';')
            .filter(|r| !r.trim().is_empty())
            .map(|row| {
                row.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|_| OrderError::Parse(format!("bad integer {:?}", t.trim())))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ord = MatrixOrder::new(matrix)?;
        if ord.dim != dim {
            return Err(OrderError::BadShape {
                rows: ord.dim,
                cols: ord.dim,
            });
        }
        Ok(ord)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The first row; a strictly positive grading.
    #[inline]
    pub fn weight_vector(&self) -> &[i64] {
        &self.weight
    }

    #[inline]
    pub fn weight(&self, x: &LatticePoint) -> i64 {
        x.dot(&self.weight)
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.rows[..self.dim]
            .iter()
            .map(|r| r[..self.dim].to_vec())
            .collect()
    }

    /// Compares `a` and `b`. The sentinel `(-1,...,-1)` precedes every
    /// point of `N^p`.
    #[inline]
    pub fn cmp(&self, a: &LatticePoint, b: &LatticePoint) -> Ordering {
        match (a.is_sentinel(), b.is_sentinel()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ca, cb) = (a.coords(), b.coords());
        let mut diff = [0i64; MAX_DIM];
        for k in 0..self.dim {
            diff[k] = ca[k] as i64 - cb[k] as i64;
        }
        for row in &self.rows[..self.dim] {
            let s: i64 = row[..self.dim]
                .iter()
                .zip(&diff[..self.dim])
                .map(|(m, d)| m * d)
                .sum();
            if s != 0 {
                return s.cmp(&0);
            }
        }
        Ordering::Equal
    }

    #[inline]
    pub fn lt(&self, a: &LatticePoint, b: &LatticePoint) -> bool {
        self.cmp(a, b) == Ordering::Less
    }
}

impl fmt::Debug for MatrixOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("MatrixOrder").field(&self.matrix()).finish()
    }
}

impl Serialize for MatrixOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.matrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = Vec::<Vec<i64>>::deserialize(d)?;
        MatrixOrder::new(m).map_err(serde::de::Error::custom)
    }
}
