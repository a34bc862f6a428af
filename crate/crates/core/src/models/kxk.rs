//! The family `(K×K)/K` with `K = SU(2)`, `m_t = {((t−1)X, (t+1)X)}`.
//!
//! With `[e_i, e_j] = e_k` on `su(2)` and `X̂ = ((t−1)X, (t+1)X)`:
//! `[X̂, Ŷ] = (1−t²)[X,Y]_h + 2t [X,Y]^`.

use super::ModelBundle;
use crate::error::Result;
use crate::exterior::{pairs, CurvOperator};
use crate::liealg::Residual;
use crate::linalg::Mat;
use crate::reductive::{curvature, torsion, NomizuMap, ReductiveModel, Tensor3};
use crate::scalar::Scalar;

/// Levi-Civita symbol on three indices.
pub fn eps(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// `ad(e_a)` on `su(2)`.
pub fn su2_ad<S: Scalar>(a: usize) -> Mat<S> {
    Mat::from_fn(3, 3, |c, b| S::from_i64(eps(a, b, c)))
}

fn table<S: Scalar>(c: &S) -> Vec<Vec<Vec<S>>> {
    (0..3).map(|i| (0..3).map(|j| (0..3).map(|k| c.mul_ref(&S::from_i64(eps(i, j, k)))).collect()).collect()).collect()
}

pub fn build_kxk<S: Scalar>(t: S) -> Result<ModelBundle<S>> {
    let one = S::one();
    let model = ReductiveModel::from_tables(
        "kxk",
        table(&one),
        (0..3).map(su2_ad).collect(),
        table(&one.sub_ref(&t.mul_ref(&t))),
        table(&S::from_i64(2).mul_ref(&t)),
    );
    let tau = model.canonical_tau()?;
    Ok(ModelBundle::new("kxk", tau)
        .param("t", &t)
        .note("K = su(2) with [e_i, e_j] = e_k and the bi-invariant metric making e_i orthonormal")
        .note("nabla^tau is the canonical connection (Nomizu map 0)")
        .with_model(model, NomizuMap::canonical(3)))
}

/// Residuals of `T^t = −2t[X,Y]` and `R^t = −(1−t²) ad([X,Y])`.
pub fn formula_residuals<S: Scalar>(b: &ModelBundle<S>, t: &S) -> Result<(Residual, Residual)> {
    let m = b.model()?;
    let l = NomizuMap::canonical(3);
    let tt = torsion(m, &l);
    let two_t = S::from_i64(-2).mul_ref(t);
    let expect = Tensor3::from_fn(3, |i, j, k| two_t.mul_ref(&S::from_i64(eps(i, j, k))));
    let rt = Residual::of((0..27).map(|p| tt.get(p / 9, (p / 3) % 3, p % 3).sub_ref(expect.get(p / 9, (p / 3) % 3, p % 3))));
    let c = t.mul_ref(t).sub_ref(&S::one());
    let endos: Vec<Mat<S>> = pairs(3)
        .into_iter()
        .map(|(i, j)| {
            let mut e = Mat::zeros(3, 3);
            for k in 0..3 {
                let s = eps(i, j, k);
                if s != 0 {
                    e.axpy(&c.mul_ref(&S::from_i64(s)), &su2_ad(k));
                }
            }
            e
        })
        .collect();
    let rr = curvature(m, &l).sub(&CurvOperator::from_endos(3, &endos));
    Ok((rt, Residual::of_mat(rr.matrix())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductive::holonomy;
    use crate::scalar::{q, qi, Q};

    #[test]
    fn formulas_and_holonomy() {
        for (t, hol) in [(qi(0), 3), (q(1, 2), 3), (qi(1), 0), (qi(2), 3), (qi(-1), 0)] {
            let b = build_kxk::<Q>(t.clone()).unwrap();
            let m = b.model().unwrap();
            assert!(m.jacobi_residual().exact_zero);
            assert!(m.is_naturally_reductive());
            let (rt, rr) = formula_residuals(&b, &t).unwrap();
            assert!(rt.exact_zero && rr.exact_zero, "t = {t}");
            assert_eq!(holonomy(m, b.nomizu().unwrap()).unwrap().dim(), hol, "t = {t}");
        }
    }

    #[test]
    fn t_zero_is_torsion_free() {
        let b = build_kxk::<Q>(qi(0)).unwrap();
        assert!(b.tau.is_zero());
    }
}
