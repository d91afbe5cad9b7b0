//! Exact count of the cone points preceding a given point.
//!
//! A unimodular change of coordinates `y = U t` turns the matrix order into
//! plain lexicographic order on `t`. The points below `x` then split by the
//! first coordinate where they differ from `x`:
//!
//! * differing in the first coordinate means a strictly smaller weight. That
//!   part is counted with a half-open triangulation of the cone: every lattice
//!   point is uniquely a parallelepiped point plus a nonnegative combination
//!   of the simplex rays, so a knapsack table over the ray weights does it.
//! * the remaining terms live in the bounded weight slice of `x`. Their outer
//!   coordinates are enumerated and the last two are counted in closed form
//!   with floor sums.
//!
//! Cones that are not full-dimensional fall back to enumeration.

use std::cmp::Ordering;

use super::linalg::{self, Row};
use super::{triangulate, Cone, GeometryError, LatticePoint, MAX_DIM};
use crate::order::MatrixOrder;

/// Precomputed data for repeated preceding-point counts in one cone and order.
#[derive(Debug, Clone)]
pub struct PrecedingCounter {
    cone: Cone,
    order: MatrixOrder,
    lex: Option<LexData>,
}

#[derive(Debug, Clone)]
struct LexData {
    weight: Vec<i128>,
    order_rows: Vec<Row>,
    /// `U^{-1}` for a unimodular `U` with `M U` lower triangular.
    to_lex: Vec<Row>,
    /// Columns of `U`.
    lex_cols: Vec<Row>,
    pieces: Vec<Piece>,
    /// One per slice term, for `k = 1..p`.
    frames: Vec<Frame>,
}

/// The points agreeing with `x` on the first `k` order rows form a translate
/// of the lattice killed by those rows. A frame holds a reduced basis `B` of
/// that lattice and the constraints in its coordinates `s`: the facets, then
/// row `k` of the order bounded by its value at `x`.
#[derive(Debug, Clone)]
struct Frame {
    coefs: Vec<[i128; MAX_DIM]>,
    /// For each coordinate `j`, the constraint combinations that bound it
    /// once the coordinates after it are projected away.
    projections: Vec<Vec<Projected>>,
}

/// `Σ λ_i (facet_i . t) >= 0`, with zero coefficient on every free
/// coordinate past the one it bounds.
#[derive(Debug, Clone)]
struct Projected {
    coef: i128,
    lambda: Row,
}

/// One half-open simplicial cone of the triangulation.
#[derive(Debug, Clone)]
struct Piece {
    ray_weights: Vec<usize>,
    /// Weights of the half-open fundamental parallelepiped's lattice points.
    base_weights: Vec<usize>,
}

impl PrecedingCounter {
    pub fn new(cone: &Cone, order: &MatrixOrder) -> Result<Self, GeometryError> {
        if cone.dim() != order.dim() {
            return Err(GeometryError::DimensionMismatch);
        }
        let lex = if cone.dim_span() == cone.dim() {
            LexData::new(cone, order)?
        } else {
            None
        };
        Ok(PrecedingCounter {
            cone: cone.clone(),
            order: order.clone(),
            lex,
        })
    }

    /// Number of points of the cone strictly preceding `x`.
    pub fn count(&self, x: &LatticePoint) -> u64 {
        if x.is_sentinel() {
            return 0;
        }
        let total = match &self.lex {
            Some(lex) => lex.count(x, self.cone.facets()),
            None => count_preceding_by_enumeration(&self.cone, &self.order, x) as u128,
        };
        u64::try_from(total).expect("preceding count fits in u64")
    }
}

/// Number of points of the cone that strictly precede `x` in `order`.
///
/// Builds a [`PrecedingCounter`] each call; keep one around for repeated use.
pub fn count_preceding(cone: &Cone, order: &MatrixOrder, x: &LatticePoint) -> u64 {
    PrecedingCounter::new(cone, order)
        .expect("cone and order agree in dimension")
        .count(x)
}

/// Same as [`count_preceding`], by visiting every point of weight at most
/// that of `x`.
pub fn count_preceding_by_enumeration(cone: &Cone, order: &MatrixOrder, x: &LatticePoint) -> u64 {
    if x.is_sentinel() {
        return 0;
    }
    let w = order.weight_vector();
    let top = x.dot(w);
    let mut n = 0u64;
    super::enumerate::for_each_point_up_to(cone, w, top, false, &mut |y, wy| {
        if wy < top || order.cmp(&y, x) == Ordering::Less {
            n += 1;
        }
    });
    n
}

fn to_rows(m: &[Vec<i64>]) -> Vec<Row> {
    m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect()
}

#[cfg(test)]
fn mul(a: &[Row], b: &[Row]) -> Result<Vec<Row>, GeometryError> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let col: Row = b.iter().map(|r| r[j]).collect();
                    linalg::dot(row, &col)
                })
                .collect()
        })
        .collect()
}

fn apply(m: &[Row], v: &[i128]) -> Result<Row, GeometryError> {
    m.iter().map(|row| linalg::dot(row, v)).collect()
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Unimodular `U` with `M U` lower triangular with positive diagonal.
fn lex_basis(matrix: &[Row]) -> Result<Vec<Row>, GeometryError> {
    let p = matrix.len();
    let mut a = matrix.to_vec();
    let mut u: Vec<Row> = (0..p).map(|i| (0..p).map(|j| i128::from(i == j)).collect()).collect();
    let combine = |m: &mut Vec<Row>, i: usize, j: usize, c: [i128; 4]| -> Result<(), GeometryError> {
        for row in m.iter_mut() {
            let (vi, vj) = (row[i], row[j]);
            let ni = c[0].checked_mul(vi).zip(c[1].checked_mul(vj)).and_then(|(s, t)| s.checked_add(t));
            let nj = c[2].checked_mul(vi).zip(c[3].checked_mul(vj)).and_then(|(s, t)| s.checked_add(t));
            row[i] = ni.ok_or(GeometryError::Overflow)?;
            row[j] = nj.ok_or(GeometryError::Overflow)?;
        }
        Ok(())
    };
    for i in 0..p {
        for j in i + 1..p {
            let (aii, aij) = (a[i][i], a[i][j]);
            if aij == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(aii, aij);
            let c = [x, y, -aij / g, aii / g];
            combine(&mut a, i, j, c)?;
            combine(&mut u, i, j, c)?;
        }
        if a[i][i] < 0 {
            for m in [&mut a, &mut u] {
                for row in m.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
        if a[i][i] == 0 {
            return Err(GeometryError::DimensionMismatch);
        }
    }
    Ok(u)
}

/// Inverse of a matrix with determinant `±1`.
fn unimodular_inverse(u: &[Row]) -> Result<Vec<Row>, GeometryError> {
    let det = linalg::determinant(u)?;
    debug_assert!(det.abs() == 1);
    adjugate(u).map(|adj| adj.into_iter().map(|r| r.into_iter().map(|v| v * det).collect()).collect())
}

/// Classical adjugate, so that `adj(A) A = det(A) I`.
fn adjugate(a: &[Row]) -> Result<Vec<Row>, GeometryError> {
    let n = a.len();
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Row> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sign * linalg::determinant(&minor)?;
        }
    }
    Ok(adj)
}

impl LexData {
    fn new(cone: &Cone, order: &MatrixOrder) -> Result<Option<Self>, GeometryError> {
        let p = cone.dim();
        let order_rows = to_rows(&order.matrix());
        let u = lex_basis(&order_rows)?;
        let to_lex = unimodular_inverse(&u)?;
        let lex_cols: Vec<Row> = (0..p).map(|j| u.iter().map(|row| row[j]).collect()).collect();
        let facets = to_rows(cone.facets());
        let weight: Row = order_rows[0].clone();
        let rays = cone
            .rays()
            .iter()
            .map(|r| {
                let v: Row = r.to_vec().into_iter().map(i128::from).collect();
                let wr = linalg::dot(&weight, &v)?;
                Ok((v, wr))
            })
            .collect::<Result<Vec<_>, GeometryError>>()?;

        let metric = SliceMetric::new(&facets, &rays);
        let mut frames = Vec::new();
        for k in 1..p {
            let mut basis = lex_cols[k..].to_vec();
            metric.lll_reduce(&mut basis);
            let mut rows = Vec::with_capacity(facets.len() + 1);
            for f in &facets {
                rows.push(basis.iter().map(|b| linalg::dot(f, b)).collect::<Result<Row, _>>()?);
            }
            rows.push(
                basis
                    .iter()
                    .map(|b| linalg::dot(&order_rows[k], b).map(|v| -v))
                    .collect::<Result<Row, _>>()?,
            );
            let Some(projections) = project(&rows) else {
                return Ok(None);
            };
            let coefs = rows
                .iter()
                .map(|r| {
                    let mut c = [0i128; MAX_DIM];
                    c[..r.len()].copy_from_slice(r);
                    c
                })
                .collect();
            frames.push(Frame { coefs, projections });
        }

        let interior: Row = (0..p).map(|c| rays.iter().map(|(r, _)| r[c]).sum()).collect();
        let mut pieces = Vec::new();
        for simplex in triangulate(cone)? {
            pieces.push(Piece::new(&simplex, &interior, &weight)?);
        }
        Ok(Some(LexData {
            weight,
            order_rows,
            to_lex,
            lex_cols,
            pieces,
            frames,
        }))
    }

    fn count(&self, x: &LatticePoint, facets: &[Vec<i64>]) -> u128 {
        let xv: Row = x.to_vec().into_iter().map(i128::from).collect();
        let top = linalg::dot(&self.weight, &xv).expect("weights fit in i128");
        let mut total = self.count_lighter(top);
        if top < 0 {
            return total;
        }
        let tx = apply(&self.to_lex, &xv).expect("coordinates fit in i128");
        let p = xv.len();
        for (i, frame) in self.frames.iter().enumerate() {
            let k = i + 1;
            // A lattice point sharing the first `k` order values with `x`.
            let base: Row = (0..p).map(|c| (0..k).map(|j| tx[j] * self.lex_cols[j][c]).sum()).collect();
            let mut consts: Row = facets
                .iter()
                .map(|f| f.iter().zip(&base).map(|(&a, b)| a as i128 * b).sum())
                .collect();
            let row = &self.order_rows[k];
            consts.push(linalg::dot(row, &xv).expect("small") - 1 - linalg::dot(row, &base).expect("small"));
            let region = Region {
                coefs: &frame.coefs,
                projections: &frame.projections,
                dim: p - k,
            };
            total += region.count(&mut consts, 0);
        }
        total
    }

    /// Points of weight strictly below `top`.
    fn count_lighter(&self, top: i128) -> u128 {
        if top <= 0 {
            return 0;
        }
        let limit = usize::try_from(top - 1).expect("weight fits in usize");
        let mut total = 0u128;
        let mut table = vec![0u128; limit + 1];
        for piece in &self.pieces {
            table.iter_mut().for_each(|v| *v = 0);
            table[0] = 1;
            for &a in &piece.ray_weights {
                for m in a..=limit {
                    table[m] += table[m - a];
                }
            }
            for m in 1..=limit {
                table[m] += table[m - 1];
            }
            total += piece
                .base_weights
                .iter()
                .filter(|&&b| b <= limit)
                .map(|&b| table[limit - b])
                .sum::<u128>();
        }
        total
    }
}

impl Piece {
    fn new(simplex: &[LatticePoint], interior: &[i128], weight: &[i128]) -> Result<Self, GeometryError> {
        let p = simplex.len();
        // Columns are rays; row `i` of the adjugate is orthogonal to every ray but `i`.
        let cols: Vec<Row> = (0..p)
            .map(|r| simplex.iter().map(|ray| ray.coords()[r] as i128).collect())
            .collect();
        let det = linalg::determinant(&cols)?;
        let scale = det.abs();
        let normals: Vec<Row> = adjugate(&cols)?
            .into_iter()
            .map(|row| row.into_iter().map(|v| v * det.signum()).collect())
            .collect();
        // A facet is kept when a generic interior point lies strictly on its
        // positive side; ties break lexicographically on the normal itself.
        let closed: Vec<bool> = normals
            .iter()
            .map(|n| {
                let s = linalg::dot(n, interior).expect("small");
                let first = if s != 0 { s } else { n.iter().copied().find(|&v| v != 0).unwrap_or(0) };
                first > 0
            })
            .collect();

        let extent: Vec<i64> = (0..p).map(|c| simplex.iter().map(|r| r.coords()[c] as i64).sum()).collect();
        let mut base_weights = Vec::with_capacity(scale as usize);
        let mut coords = [0i32; MAX_DIM];
        'scan: loop {
            let y: Row = coords[..p].iter().map(|&v| v as i128).collect();
            let inside = normals.iter().zip(&closed).all(|(n, &keep)| {
                let v = linalg::dot(n, &y).expect("small");
                if keep {
                    (0..scale).contains(&v)
                } else {
                    v > 0 && v <= scale
                }
            });
            if inside {
                let wy = linalg::dot(weight, &y)?;
                base_weights.push(usize::try_from(wy).map_err(|_| GeometryError::Overflow)?);
            }
            for c in 0..p {
                if (coords[c] as i64) < extent[c] {
                    coords[c] += 1;
                    continue 'scan;
                }
                coords[c] = 0;
            }
            break;
        }
        debug_assert_eq!(base_weights.len() as i128, scale);
        let ray_weights = simplex
            .iter()
            .map(|r| {
                let v: Row = r.to_vec().into_iter().map(i128::from).collect();
                usize::try_from(linalg::dot(weight, &v)?).map_err(|_| GeometryError::Overflow)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Piece {
            ray_weights,
            base_weights,
        })
    }
}

/// Largest number of projected inequalities per coordinate; past it the
/// counter falls back to enumeration.
const PROJECTION_CAP: usize = 4096;

/// Fourier-Motzkin projections of `rows . v >= 0` onto each prefix of `v`.
/// Combinations using more facets than eliminations plus one are redundant
/// and dropped.
fn project(rows: &[Row]) -> Option<Vec<Vec<Projected>>> {
    let d = rows.first().map_or(0, |r| r.len());
    let m = rows.len();
    let mut levels = vec![Vec::new(); d];
    let mut current: Vec<(Row, Row)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), (0..m).map(|j| i128::from(i == j)).collect()))
        .collect();
    for j in (0..d).rev() {
        levels[j] = current
            .iter()
            .map(|(c, l)| Projected {
                coef: c[j],
                lambda: l.clone(),
            })
            .collect();
        if j == 0 {
            break;
        }
        let eliminated = d - j;
        let mut next = Vec::new();
        for (c, l) in current.iter().filter(|(c, _)| c[j] == 0) {
            next.push((c.clone(), l.clone()));
        }
        for (cp, lp) in current.iter().filter(|(c, _)| c[j] > 0) {
            for (cn, ln) in current.iter().filter(|(c, _)| c[j] < 0) {
                let (a, b) = (-cn[j], cp[j]);
                let mut lambda: Row = lp.iter().zip(ln).map(|(x, y)| a * x + b * y).collect();
                if lambda.iter().filter(|&&v| v != 0).count() > eliminated + 1 {
                    continue;
                }
                let mut coefs: Row = cp.iter().zip(cn).map(|(x, y)| a * x + b * y).collect();
                let g = coefs.iter().chain(&lambda).fold(0, |g, &v| linalg::gcd(g, v));
                if g > 1 {
                    coefs.iter_mut().chain(lambda.iter_mut()).for_each(|v| *v /= g);
                }
                next.push((coefs, lambda));
            }
        }
        next.sort();
        next.dedup();
        if next.len() > PROJECTION_CAP {
            return None;
        }
        current = next;
    }
    Some(levels)
}

/// Lattice points `s` with `consts + coefs . s >= 0`, where `consts`
/// already includes the coordinates fixed so far. The region is bounded.
struct Region<'a> {
    coefs: &'a [[i128; MAX_DIM]],
    projections: &'a [Vec<Projected>],
    dim: usize,
}

impl Region<'_> {
    /// Range of coordinate `j` over the projection of the region.
    fn range(&self, consts: &[i128], j: usize) -> Option<(i128, i128)> {
        let (mut a, mut b) = (i128::MIN, i128::MAX);
        for proj in &self.projections[j] {
            let c: i128 = proj.lambda.iter().zip(consts).map(|(l, c)| l * c).sum();
            match proj.coef.cmp(&0) {
                Ordering::Greater => a = a.max(ceil_div(-c, proj.coef)),
                Ordering::Less => b = b.min(c.div_euclid(-proj.coef)),
                Ordering::Equal if c < 0 => return None,
                Ordering::Equal => {}
            }
        }
        assert!(a > i128::MIN && b < i128::MAX, "region is bounded");
        (a <= b).then_some((a, b))
    }

    fn count(&self, consts: &mut [i128], first: usize) -> u128 {
        let coefs = self.coefs;
        let Some((a, b)) = self.range(consts, first) else {
            return 0;
        };
        match self.dim - first {
            1 => (b - a + 1) as u128,
            2 => {
                let lines: Vec<[i128; 3]> = consts.iter().zip(coefs).map(|(&c, k)| [c, k[first], k[first + 1]]).collect();
                count_plane(&lines, [a, b])
            }
            _ => {
                let mut total = 0;
                for t in a..=b {
                    for (c, k) in consts.iter_mut().zip(coefs) {
                        *c += k[first] * t;
                    }
                    total += self.count(consts, first + 1);
                    for (c, k) in consts.iter_mut().zip(coefs) {
                        *c -= k[first] * t;
                    }
                }
                total
            }
        }
    }
}

/// Linear map under which a weight slice of the cone looks roughly like a
/// regular simplex: each facet functional, scaled by its maximum on the
/// slice. Bases reduced in this norm have tight coordinate boxes.
struct SliceMetric {
    rows: Vec<Vec<f64>>,
}

impl SliceMetric {
    fn new(facets: &[Row], rays: &[(Row, i128)]) -> Self {
        let rows = facets
            .iter()
            .map(|f| {
                let reach = rays
                    .iter()
                    .map(|(r, wr)| linalg::dot(f, r).expect("small") as f64 / *wr as f64)
                    .fold(0.0, f64::max);
                f.iter().map(|&v| v as f64 / reach.max(f64::MIN_POSITIVE)).collect()
            })
            .collect();
        SliceMetric { rows }
    }

    fn embed(&self, v: &[i128]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, &b)| a * b as f64).sum())
            .collect()
    }

    fn gram_schmidt(&self, basis: &[Row]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
        for b in basis {
            let mut v = self.embed(b);
            for o in &out {
                let mu = fdot(&v, o) / fdot(o, o);
                v.iter_mut().zip(o).for_each(|(a, b)| *a -= mu * b);
            }
            out.push(v);
        }
        out
    }

    /// Subtracts integer multiples of `basis` from `v` to shorten it. Only
    /// unimodularity matters for correctness, so floating point is fine.
    fn size_reduce(&self, v: &mut Row, basis: &[Row]) {
        let gs = self.gram_schmidt(basis);
        for (b, o) in basis.iter().zip(&gs).rev() {
            let mu = (fdot(&self.embed(v), o) / fdot(o, o)).round() as i128;
            if mu != 0 {
                v.iter_mut().zip(b).for_each(|(a, b)| *a -= mu * b);
            }
        }
    }

    /// LLL reduction with parameter 3/4.
    fn lll_reduce(&self, basis: &mut [Row]) {
        let mut k = 1;
        let mut guard = 0;
        while k < basis.len() && guard < 10_000 {
            guard += 1;
            let (head, rest) = basis.split_at_mut(k);
            self.size_reduce(&mut rest[0], head);
            let gs = self.gram_schmidt(basis);
            let mu = fdot(&self.embed(&basis[k]), &gs[k - 1]) / fdot(&gs[k - 1], &gs[k - 1]);
            if fdot(&gs[k], &gs[k]) >= (0.75 - mu * mu) * fdot(&gs[k - 1], &gs[k - 1]) {
                k += 1;
            } else {
                basis.swap(k, k - 1);
                k = (k - 1).max(1);
            }
        }
    }
}

fn fdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

/// `Σ_{i < n} floor((a i + b) / m)` for `m > 0`.
fn floor_sum(mut n: i128, mut m: i128, mut a: i128, mut b: i128) -> i128 {
    let mut total = 0;
    if a < 0 || a >= m {
        total += a.div_euclid(m) * (n * (n - 1) / 2);
        a = a.rem_euclid(m);
    }
    if b < 0 || b >= m {
        total += b.div_euclid(m) * n;
        b = b.rem_euclid(m);
    }
    loop {
        if a >= m {
            total += n * (n - 1) / 2 * (a / m);
            a %= m;
        }
        if b >= m {
            total += n * (b / m);
            b %= m;
        }
        let y_max = a * n + b;
        if y_max < m {
            break;
        }
        n = y_max / m;
        b = y_max % m;
        std::mem::swap(&mut m, &mut a);
    }
    total
}

/// A bound `v >= (c0 + c1 u) / q` or `v <= (c0 + c1 u) / q`, with `q > 0`.
#[derive(Clone, Copy)]
struct Line {
    c0: i128,
    c1: i128,
    q: i128,
}

impl Line {
    /// Sign of `self(u) - other(u)`.
    fn cmp_at(&self, other: &Line, u: i128) -> Ordering {
        ((self.c0 + self.c1 * u) * other.q).cmp(&((other.c0 + other.c1 * u) * self.q))
    }
}

/// Lattice points `(u, v)` with `u` in `urange` and `c + a u + b v >= 0`
/// for every `[c, a, b]` in `lines`. The region must be bounded in `v`.
fn count_plane(lines: &[[i128; 3]], urange: [i128; 2]) -> u128 {
    let [mut ulo, mut uhi] = urange;
    let mut lower = Vec::with_capacity(lines.len());
    let mut upper = Vec::with_capacity(lines.len());
    for &[c, a, b] in lines {
        match b.cmp(&0) {
            Ordering::Greater => lower.push(Line { c0: -c, c1: -a, q: b }),
            Ordering::Less => upper.push(Line { c0: c, c1: a, q: -b }),
            Ordering::Equal => match a.cmp(&0) {
                Ordering::Greater => ulo = ulo.max(ceil_div(-c, a)),
                Ordering::Less => uhi = uhi.min(c.div_euclid(-a)),
                Ordering::Equal if c < 0 => return 0,
                Ordering::Equal => {}
            },
        }
    }
    if ulo > uhi {
        return 0;
    }

    let mut cuts = vec![ulo];
    let all: Vec<Line> = lower.iter().chain(&upper).copied().collect();
    for (i, l) in all.iter().enumerate() {
        for m in &all[i + 1..] {
            let den = l.c1 * m.q - m.c1 * l.q;
            if den == 0 {
                continue;
            }
            let num = m.c0 * l.q - l.c0 * m.q;
            let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
            let cut = num.div_euclid(den) + 1;
            if cut > ulo && cut <= uhi {
                cuts.push(cut);
            }
        }
    }
    cuts.sort_unstable();
    cuts.dedup();

    let mut total = 0i128;
    for (i, &start) in cuts.iter().enumerate() {
        let end = cuts.get(i + 1).map_or(uhi, |&c| c - 1);
        let low = lower
            .iter()
            .max_by(|a, b| a.cmp_at(b, start))
            .expect("bounded region has a lower bound");
        let up = upper
            .iter()
            .min_by(|a, b| a.cmp_at(b, start))
            .expect("bounded region has an upper bound");
        // Restrict to where the upper bound is at least the lower one.
        let slope = low.q * up.c1 - up.q * low.c1;
        let offset = low.q * up.c0 - up.q * low.c0;
        let (mut a, mut b) = (start, end);
        match slope.cmp(&0) {
            Ordering::Greater => a = a.max(ceil_div(-offset, slope)),
            Ordering::Less => b = b.min(offset.div_euclid(-slope)),
            Ordering::Equal if offset < 0 => continue,
            Ordering::Equal => {}
        }
        if a > b {
            continue;
        }
        let n = b - a + 1;
        total += floor_sum(n, up.q, up.c1, up.c0 + up.c1 * a) + floor_sum(n, low.q, -low.c1, -low.c0 - low.c1 * a) + n;
    }
    total as u128
}
