//! Real 4×4 matrices of quaternion multiplication in the basis `(1, i, j, k)`.

use crate::linalg::Mat;
use crate::scalar::Scalar;

/// `e_a e_b = sign · e_c`.
pub fn qmul(a: usize, b: usize) -> (i64, usize) {
    match (a, b) {
        (0, b) => (1, b),
        (a, 0) => (1, a),
        (a, b) if a == b => (-1, 0),
        (a, b) => {
            let c = 6 - a - b;
            let cyclic = matches!((a, b), (1, 2) | (2, 3) | (3, 1));
            (if cyclic { 1 } else { -1 }, c)
        }
    }
}

/// Left multiplication `x ↦ e_a x`.
pub fn left<S: Scalar>(a: usize) -> Mat<S> {
    let mut m = Mat::zeros(4, 4);
    for b in 0..4 {
        let (s, c) = qmul(a, b);
        m[(c, b)] = S::from_i64(s);
    }
    m
}

/// Right multiplication `x ↦ x e_a`.
pub fn right<S: Scalar>(a: usize) -> Mat<S> {
    let mut m = Mat::zeros(4, 4);
    for b in 0..4 {
        let (s, c) = qmul(b, a);
        m[(c, b)] = S::from_i64(s);
    }
    m
}

/// Places `blk` at offset `(r, c)` inside an `n × n` zero matrix.
pub fn embed<S: Scalar>(n: usize, r: usize, c: usize, blk: &Mat<S>, out: &mut Mat<S>) {
    debug_assert!(r + blk.rows() <= n && c + blk.cols() <= n);
    for i in 0..blk.rows() {
        for j in 0..blk.cols() {
            out[(r + i, c + j)] = blk[(i, j)].clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    #[test]
    fn quaternion_relations() {
        let (i, j, k) = (left::<Q>(1), left::<Q>(2), left::<Q>(3));
        assert_eq!(i.mul(&j), k);
        assert_eq!(i.mul(&i), Mat::identity(4).neg());
        let (ri, rj, rk) = (right::<Q>(1), right::<Q>(2), right::<Q>(3));
        assert_eq!(ri.mul(&rj), rk.neg());
        // left and right multiplications commute
        assert_eq!(i.mul(&rj), rj.mul(&i));
        assert!(ri.is_skew() && k.is_skew());
    }
}
