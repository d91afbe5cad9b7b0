use std::collections::VecDeque;

use super::{Cone, LatticePoint, MAX_DIM};
use crate::order::MatrixOrder;

/// Calls `f(x, w.x)` for every `x` in the cone with `w.x <= max_weight`.
///
/// `w` must be strictly positive, which bounds every coordinate.
pub(super) fn for_each_point_up_to(
    cone: &Cone,
    w: &[i64],
    max_weight: i64,
    exact: bool,
    f: &mut impl FnMut(LatticePoint, i64),
) {
    fn go(
        cone: &Cone,
        w: &[i64],
        k: usize,
        coords: &mut [i32; MAX_DIM],
        used: i64,
        max_weight: i64,
        exact: bool,
        f: &mut impl FnMut(LatticePoint, i64),
    ) {
        let dim = w.len();
        if k + 1 == dim {
            let rem = max_weight - used;
            let wk = w[k];
            let lo = if exact { rem / wk } else { 0 };
            if exact && rem % wk != 0 {
                return;
            }
            for v in lo..=rem / wk {
                coords[k] = v as i32;
                let x = LatticePoint::from_array(*coords, dim);
                if cone.contains(&x) {
                    f(x, used + v * wk);
                }
            }
            coords[k] = 0;
            return;
        }
        let mut v = 0i64;
        while used + v * w[k] <= max_weight {
            coords[k] = v as i32;
            go(cone, w, k + 1, coords, used + v * w[k], max_weight, exact, f);
            v += 1;
        }
        coords[k] = 0;
    }
    if max_weight < 0 {
        return;
    }
    debug_assert!(w.iter().all(|&x| x > 0));
    let mut coords = [0i32; MAX_DIM];
    go(cone, w, 0, &mut coords, 0, max_weight, exact, f);
}

/// Every cone point `x` with `w.x == weight`, in no particular order.
pub fn for_each_point_in_slice(cone: &Cone, w: &[i64], weight: i64, mut f: impl FnMut(LatticePoint)) {
    for_each_point_up_to(cone, w, weight, true, &mut |x, _| f(x));
}

/// Increasing stream of the lattice points of a cone under a matrix order.
///
/// Points are produced one weight slice at a time; the stream is infinite.
pub struct PointStream<'a> {
    cone: &'a Cone,
    order: &'a MatrixOrder,
    next_weight: i64,
    buffer: VecDeque<LatticePoint>,
}

pub fn enumerate_points<'a>(cone: &'a Cone, order: &'a MatrixOrder) -> PointStream<'a> {
    assert_eq!(cone.dim(), order.dim(), "order and cone dimensions differ");
    PointStream {
        cone,
        order,
        next_weight: 0,
        buffer: VecDeque::new(),
    }
}

impl Iterator for PointStream<'_> {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        while self.buffer.is_empty() {
            let mut slice = Vec::new();
            for_each_point_in_slice(self.cone, self.order.weight_vector(), self.next_weight, |x| {
                slice.push(x)
            });
            slice.sort_by(|a, b| self.order.cmp(a, b));
            self.buffer.extend(slice);
            self.next_weight += 1;
        }
        self.buffer.pop_front()
    }
}
