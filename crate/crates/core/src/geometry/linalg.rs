//! Fraction-free exact linear algebra over `i128`.
//!
//! Every arithmetic step is checked; overflow surfaces as
//! [`GeometryError::Overflow`] instead of wrapping.

use super::GeometryError;

pub(crate) type Row = Vec<i128>;

pub(crate) fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: i128, b: i128) -> Result<i128, GeometryError> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .map(i128::abs)
        .ok_or(GeometryError::Overflow)
}

/// Divides a row by the gcd of its entries.
pub(crate) fn make_primitive(row: &mut [i128]) {
    let g = row.iter().fold(0, |acc, &x| gcd(acc, x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// Reduced row echelon form with primitive integer rows.
///
/// Returns the nonzero rows and their pivot columns. Within each row the
/// pivot entry is positive and every other row is zero in that column.
pub(crate) fn echelon(rows: &[Row], ncols: usize) -> Result<(Vec<Row>, Vec<usize>), GeometryError> {
    let mut m: Vec<Row> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(i) = (r..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(i, r);
        if m[r][col] < 0 {
            m[r].iter_mut().for_each(|x| *x = -*x);
        }
        make_primitive(&mut m[r]);
        for k in 0..m.len() {
            if k == r || m[k][col] == 0 {
                continue;
            }
            let a = m[r][col];
            let b = m[k][col];
            let g = gcd(a, b);
            let (fa, fb) = (a / g, b / g);
            let pivot_row = m[r].clone();
            for (x, &y) in m[k].iter_mut().zip(&pivot_row) {
                *x = x
                    .checked_mul(fa)
                    .and_then(|v| y.checked_mul(fb).and_then(|w| v.checked_sub(w)))
                    .ok_or(GeometryError::Overflow)?;
            }
            make_primitive(&mut m[k]);
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Ok((m, pivots))
}

pub(crate) fn rank(rows: &[Row], ncols: usize) -> Result<usize, GeometryError> {
    Ok(echelon(rows, ncols)?.1.len())
}

/// Integer basis of `{x : row . x = 0 for every row}`, each vector primitive.
pub(crate) fn nullspace(rows: &[Row], ncols: usize) -> Result<Vec<Row>, GeometryError> {
    let (m, pivots) = echelon(rows, ncols)?;
    let mut scale = 1i128;
    for (row, &pc) in m.iter().zip(&pivots) {
        scale = lcm(scale, row[pc])?;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0i128; ncols];
        v[free] = scale;
        for (row, &pc) in m.iter().zip(&pivots) {
            let num = row[free].checked_mul(scale).ok_or(GeometryError::Overflow)?;
            v[pc] = -num / row[pc];
        }
        make_primitive(&mut v);
        basis.push(v);
    }
    Ok(basis)
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub(crate) fn determinant(matrix: &[Row]) -> Result<i128, GeometryError> {
    let n = matrix.len();
    if n == 0 {
        return Ok(1);
    }
    let mut m = matrix.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(i) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(i, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|a| m[i][k].checked_mul(m[k][j]).and_then(|b| a.checked_sub(b)))
                    .ok_or(GeometryError::Overflow)?;
                m[i][j] = v / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

pub(crate) fn dot(a: &[i128], b: &[i128]) -> Result<i128, GeometryError> {
    a.iter().zip(b).try_fold(0i128, |acc, (&x, &y)| {
        x.checked_mul(y)
            .and_then(|v| acc.checked_add(v))
            .ok_or(GeometryError::Overflow)
    })
}
