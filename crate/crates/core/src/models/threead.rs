//! 3-(α,δ)-Sasaki tensors: the algebraic model on `ℝ^{4n+3}` and the
//! homogeneous squashed sphere `S⁷ = Sp(2)/Sp(1)`.
//!
//! Index layout: `ξ₁, ξ₂, ξ₃` first, then `H = ℍⁿ`. The torsion of the
//! compatible connection is `τ^γ = α Σ ξ_i∧Φ_i^H + (γ/2) ξ₁∧ξ₂∧ξ₃`.

use super::quat::{embed, left, right};
use super::{sqrt_in, ModelBundle};
use crate::error::{Error, Result};
use crate::exterior::{wedge_endo, AltForm};
use crate::liealg::Residual;
use crate::linalg::{unit_vec, Mat};
use crate::reductive::{NomizuMap, ReductiveModel, Tensor};
use crate::scalar::Scalar;

/// Even permutations `(i, j, k)` of `(0, 1, 2)`.
pub const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

pub fn canonical_gamma<S: Scalar>(alpha: &S, delta: &S) -> S {
    S::from_i64(2).mul_ref(&delta.sub_ref(&S::from_i64(4).mul_ref(alpha)))
}

fn xi<S: Scalar>(dim: usize, i: usize) -> Vec<S> {
    unit_vec(dim, i)
}

/// `α Σ ξ_i∧Φ_i^H + (γ/2) ξ₁₂₃`.
pub fn tau_gamma<S: Scalar>(phi_h: &[Mat<S>], alpha: &S, gamma: &S) -> Result<AltForm<S>> {
    let dim = phi_h[0].rows();
    let mut tau = AltForm::zero(dim, 3);
    for (i, ph) in phi_h.iter().enumerate() {
        tau = tau.add(&AltForm::one_form(&xi::<S>(dim, i)).wedge(&AltForm::from_endo(ph)?)?.scale(alpha));
    }
    tau.add_term(&[0, 1, 2], &gamma.div_ref(&S::from_i64(2)));
    Ok(tau)
}

/// `Φ_i = Φ_i^H − ξ_j∧ξ_k` and the common tensor list.
fn structure_tensors<S: Scalar>(phi_h: &[Mat<S>]) -> Result<Vec<(String, Tensor<S>)>> {
    let dim = phi_h[0].rows();
    let mut out = Vec::new();
    for (i, j, k) in CYCLIC {
        out.push((format!("xi{}", i + 1), Tensor::Vector(xi(dim, i))));
        let phi = phi_h[i].sub(&wedge_endo(&xi::<S>(dim, j), &xi::<S>(dim, k)));
        out.push((format!("Phi{}", i + 1), Tensor::Endo(phi)));
        out.push((format!("PhiH{}", i + 1), Tensor::Endo(phi_h[i].clone())));
    }
    if dim == 7 {
        out.push(("phi".into(), Tensor::Form(tau_gamma(phi_h, &S::one(), &S::from_i64(2))?)));
    }
    let mut tv = AltForm::zero(dim, 3);
    tv.add_term(&[0, 1, 2], &S::one());
    out.push(("xi123".into(), Tensor::Form(tv)));
    Ok(out)
}

/// Algebraic 3-(α,δ)-Sasaki tensors on `ℝ^{4n+3}`; `Φ_i^H` acts on each
/// quaternionic block by right multiplication with `i, j, k`.
pub fn build_3ad_tensors<S: Scalar>(n: usize, alpha: S, delta: S, gamma: S) -> Result<ModelBundle<S>> {
    if n == 0 {
        return Err(Error::BadParam("threead: n must be at least 1".into()));
    }
    if alpha.is_zero() {
        return Err(Error::BadParam("threead: alpha must be nonzero".into()));
    }
    let dim = 4 * n + 3;
    let phi_h: Vec<Mat<S>> = (1..4)
        .map(|q| {
            let mut m = Mat::zeros(dim, dim);
            for blk in 0..n {
                embed(dim, 3 + 4 * blk, 3 + 4 * blk, &right::<S>(q), &mut m);
            }
            m
        })
        .collect();
    let tau = tau_gamma(&phi_h, &alpha, &gamma)?;
    let mut b = ModelBundle::new("threead", tau).param("n", n).param("alpha", &alpha).param("delta", &delta).param("gamma", &gamma);
    b.tensors = structure_tensors(&phi_h)?;
    Ok(b)
}

/// Residuals of the algebraic relations between `ξ_i`, `Φ_i` and `Φ_i^H`:
/// `Φ_i² = −Id + ξ_i⊗ξ_i`, both forms of `Φ_k X`, `ξ_k = −Φ_i ξ_j = Φ_j ξ_i`,
/// `Φ_i^H Φ_j^H = −Φ_j^H Φ_i^H = −Φ_k^H` with `Φ_i^H ξ_j = 0`.
pub fn structure_residuals<S: Scalar>(b: &ModelBundle<S>) -> Result<[Residual; 5]> {
    let dim = b.dim();
    let x = |i: usize| b.vector(&format!("xi{}", i + 1));
    let p = |i: usize| b.endo(&format!("Phi{}", i + 1));
    let ph = |i: usize| b.endo(&format!("PhiH{}", i + 1));
    let outer = |u: &[S], v: &[S]| Mat::from_fn(dim, dim, |r, c| u[r].mul_ref(&v[c]));
    let mut r = [Residual::zero(), Residual::zero(), Residual::zero(), Residual::zero(), Residual::zero()];
    for (i, j, k) in CYCLIC {
        let (pi, pj, pk) = (p(i)?, p(j)?, p(k)?);
        let (xi_, xj, xk) = (x(i)?, x(j)?, x(k)?);
        r[0] = r[0].clone().merge(Residual::of_mat(&pi.mul(pi).add(&Mat::identity(dim)).sub(&outer(xi_, xi_))));
        let a = pk.add(&pi.mul(pj)).sub(&outer(xi_, xj));
        let c = pk.sub(&pj.mul(pi)).add(&outer(xj, xi_));
        r[1] = r[1].clone().merge(Residual::of_mat(&a)).merge(Residual::of_mat(&c));
        let v1 = pi.mul_vec(xj).iter().zip(xk).map(|(s, t)| s.add_ref(t)).collect::<Vec<_>>();
        let v2 = pj.mul_vec(xi_).iter().zip(xk).map(|(s, t)| s.sub_ref(t)).collect::<Vec<_>>();
        r[2] = r[2].clone().merge(Residual::of(v1)).merge(Residual::of(v2));
        let (hi, hj, hk) = (ph(i)?, ph(j)?, ph(k)?);
        r[3] = r[3]
            .clone()
            .merge(Residual::of_mat(&hi.mul(hj).add(hk)))
            .merge(Residual::of_mat(&hj.mul(hi).sub(hk)));
        for l in 0..3 {
            r[4] = r[4].clone().merge(Residual::of(hi.mul_vec(x(l)?)));
        }
    }
    Ok(r)
}

/// Squashed `S⁷ = Sp(2)/Sp(1)` with `ξ_i = δ P_i` and `a Q_l` orthonormal,
/// `a² = αδ`. `Φ_i^H` is read off from `dξ_i` on `H`. `γ` defaults to `2(δ−4α)`.
pub fn build_3ad_sphere<S: Scalar>(alpha: S, delta: S, gamma: Option<S>) -> Result<ModelBundle<S>> {
    if alpha.is_zero() || delta.is_zero() {
        return Err(Error::BadParam("sphere: alpha and delta must be nonzero".into()));
    }
    let ad = alpha.mul_ref(&delta);
    if ad.signum_i() <= 0 {
        return Err(Error::BadParam("sphere: alpha*delta must be positive".into()));
    }
    let a = sqrt_in(&ad, "sphere")?;
    let b = delta.clone();
    let blk = |ul: Option<Mat<S>>, ur: Option<Mat<S>>, ll: Option<Mat<S>>, lr: Option<Mat<S>>| {
        let mut m = Mat::zeros(8, 8);
        for (x, r, c) in [(ul, 0, 0), (ur, 0, 4), (ll, 4, 0), (lr, 4, 4)] {
            if let Some(x) = x {
                embed(8, r, c, &x, &mut m);
            }
        }
        m
    };
    let h: Vec<Mat<S>> = (1..4).map(|q| blk(None, None, None, Some(left(q)))).collect();
    let mut m: Vec<Mat<S>> = (1..4).map(|q| blk(Some(left::<S>(q).scale(&b)), None, None, None)).collect();
    for l in 0..4 {
        let lq = left::<S>(l);
        m.push(blk(None, Some(lq.scale(&a)), Some(lq.transpose().neg().scale(&a)), None));
    }
    let model = ReductiveModel::from_matrices("sphere", &h, &m)?;
    let dim = 7;
    let two_alpha = S::from_i64(2).mul_ref(&alpha);
    let mut phi_h = Vec::new();
    for i in 0..3 {
        let mut ph = Mat::zeros(dim, dim);
        for p in 3..dim {
            for q in 3..dim {
                let d = model.bracket_mm_m(p, q)[i].neg_ref().div_ref(&two_alpha);
                // 2-form ω(e_p, e_q) = g(Φ e_p, e_q) = Φ[q][p]
                ph[(q, p)] = d;
            }
        }
        phi_h.push(ph);
    }
    let gamma = gamma.unwrap_or_else(|| canonical_gamma(&alpha, &delta));
    let tau = tau_gamma(&phi_h, &alpha, &gamma)?;
    let l = NomizuMap::levi_civita(&model).plus_tau(&tau)?;
    let mut bundle = ModelBundle::new("sphere", tau)
        .param("alpha", &alpha)
        .param("delta", &delta)
        .param("gamma", &gamma)
        .note(format!("xi_i = {b} P_i and {a} Q_l orthonormal (a^2 = alpha delta, b = delta)"));
    bundle.tensors = structure_tensors(&phi_h)?;
    Ok(bundle.with_model(model, l))
}

/// `dξ_i − 2αΦ_i − 2(α−δ) ξ_j∧ξ_k` on a homogeneous bundle.
pub fn dxi_residual<S: Scalar>(b: &ModelBundle<S>, alpha: &S, delta: &S) -> Result<Residual> {
    let m = b.model()?;
    let dim = m.dim_m();
    let mut r = Residual::zero();
    let two = S::from_i64(2);
    for (i, j, k) in CYCLIC {
        let phi = b.endo(&format!("Phi{}", i + 1))?;
        let mut d = AltForm::zero(dim, 2);
        for (p, q) in crate::exterior::pairs(dim) {
            d.add_term(&[p, q], &m.bracket_mm_m(p, q)[i].neg_ref());
        }
        let mut expect = AltForm::from_endo(phi)?.scale(&two.mul_ref(alpha));
        expect.add_term(&[j, k], &two.mul_ref(&alpha.sub_ref(delta)));
        r = r.merge(Residual::of(d.sub(&expect).terms().map(|(_, c)| c.clone())));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::stabilizer;
    use crate::reductive::parallel_residual;
    use crate::scalar::{qi, Q, Q5};

    #[test]
    fn tensor_relations() {
        for n in [1, 2] {
            let b = build_3ad_tensors::<Q>(n, qi(1), qi(3), qi(-2)).unwrap();
            for (idx, r) in structure_residuals(&b).unwrap().iter().enumerate() {
                assert!(r.exact_zero, "n = {n}, relation {idx}: {}", r.max_abs);
            }
        }
        let b = build_3ad_tensors::<Q>(2, qi(1), qi(5), qi(2)).unwrap();
        assert_eq!(stabilizer(&b.tau).dim(), 13);
        let b = build_3ad_tensors::<Q>(1, qi(1), qi(5), qi(2)).unwrap();
        assert_eq!(stabilizer(b.form("phi").unwrap()).dim(), 14);
    }

    #[test]
    fn three_sasaki_sphere() {
        let b = build_3ad_sphere::<Q>(qi(1), qi(1), None).unwrap();
        let m = b.model().unwrap();
        assert!(m.jacobi_residual().exact_zero);
        for (idx, r) in structure_residuals(&b).unwrap().iter().enumerate() {
            assert!(r.exact_zero, "relation {idx}: {}", r.max_abs);
        }
        assert!(dxi_residual(&b, &qi(1), &qi(1)).unwrap().exact_zero);
        let par = parallel_residual(m, b.nomizu().unwrap(), &Tensor::Form(b.tau.clone())).unwrap();
        assert!(par.exact_zero);
    }

    #[test]
    fn nearly_parallel_sphere() {
        let one = Q5::from_i64(1);
        let b = build_3ad_sphere::<Q5>(one.clone(), Q5::from_i64(5), None).unwrap();
        assert!(dxi_residual(&b, &one, &Q5::from_i64(5)).unwrap().exact_zero);
        assert_eq!(b.tau, b.form("phi").unwrap().clone());
        let m = b.model().unwrap();
        let par = parallel_residual(m, b.nomizu().unwrap(), &Tensor::Form(b.tau.clone())).unwrap();
        assert!(par.exact_zero);
        let off = build_3ad_sphere::<Q5>(one.clone(), Q5::from_i64(5), Some(Q5::from_i64(3))).unwrap();
        let par = parallel_residual(off.model().unwrap(), off.nomizu().unwrap(), &Tensor::Form(off.tau.clone())).unwrap();
        assert!(!par.exact_zero);
    }
}
