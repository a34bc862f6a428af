//! The four homogeneous Gray manifolds with their normal metrics.
//!
//! Each model uses a basis of `m` that is orthonormal for a rational multiple
//! `g0` of `−B`; the factor and `scal(g0)` are recorded in the bundle notes.
//! The torsion is the canonical `τ = −½ g([X,Y]_m, ·)`.

use super::forms::g2_form;
use super::quat::embed;
use super::{sqrt_in, ModelBundle};
use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::liealg::{commutant, so_basis_elem, stabilizer, Residual};
use crate::linalg::{nullspace_rows, solve, unit_vec, Mat};
use crate::reductive::{curvature, NomizuMap, ReductiveModel, Tensor};
use crate::scalar::Scalar;

pub const GRAY_NAMES: &[&str] = &["s6", "flag", "cp3", "s3s3"];

fn lin<S: Scalar>(n: usize, c: &[S], basis: &[Mat<S>]) -> Mat<S> {
    let mut m = Mat::zeros(n, n);
    for (ci, b) in c.iter().zip(basis) {
        if !ci.is_zero() {
            m.axpy(ci, b);
        }
    }
    m
}

/// `G₂/SU(3)`: `h` fixes `e₇`; `A_i ∈ h^⊥` with `A_i e₇ = e_i`.
fn s6<S: Scalar>() -> Result<(ReductiveModel<S>, Vec<usize>)> {
    let g2 = stabilizer(&g2_form::<S>());
    let gb = g2.basis();
    let e7 = unit_vec::<S>(7, 6);
    let imgs: Vec<Vec<S>> = gb.iter().map(|b| b.mul_vec(&e7)).collect();
    let hc = nullspace_rows(gb.len(), (0..7).map(|r| imgs.iter().map(|v| v[r].clone()).collect()));
    let h: Vec<Mat<S>> = hc.iter().map(|c| lin(7, c, gb)).collect();
    let mut rows: Vec<Vec<S>> = (0..7).map(|r| imgs.iter().map(|v| v[r].clone()).collect()).collect();
    for hb in &h {
        rows.push(gb.iter().map(|b| b.mul(hb).trace()).collect());
    }
    let a = Mat::from_rows(&rows);
    let mut m = Vec::new();
    for i in 0..6 {
        let mut rhs = unit_vec::<S>(7, i);
        rhs.extend(std::iter::repeat_n(S::zero(), h.len()));
        let c = solve(&a, &rhs).ok_or_else(|| Error::Model("s6: no element of h^perp maps e7 to e_i".into()))?;
        m.push(lin(7, &c, gb));
    }
    Ok((ReductiveModel::from_matrices("s6", &h, &m)?, vec![]))
}

/// Realification `A + iB ↦ [[A, −B], [B, A]]` of a complex 3×3 matrix.
fn realify<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let mut m = Mat::zeros(6, 6);
    embed(6, 0, 0, a, &mut m);
    embed(6, 3, 3, a, &mut m);
    embed(6, 0, 3, &b.neg(), &mut m);
    embed(6, 3, 0, b, &mut m);
    m
}

/// `SU(3)/T²` with `g0 = −½ tr_C`; the first root pair spans the fibre over `CP²`.
fn flag<S: Scalar>() -> Result<(ReductiveModel<S>, Vec<usize>)> {
    let z = Mat::<S>::zeros(3, 3);
    let e = |p: usize, q: usize| {
        let mut m = Mat::<S>::zeros(3, 3);
        m[(p, q)] = S::one();
        m
    };
    let diag = |v: [i64; 3]| Mat::from_fn(3, 3, |i, j| if i == j { S::from_i64(v[i]) } else { S::zero() });
    let h = vec![realify(&z, &diag([1, -1, 0])), realify(&z, &diag([0, 1, -1]))];
    let mut m = Vec::new();
    for (p, q) in [(0, 1), (0, 2), (1, 2)] {
        m.push(realify(&e(p, q).sub(&e(q, p)), &z));
        m.push(realify(&z, &e(p, q).add(&e(q, p))));
    }
    Ok((ReductiveModel::from_matrices("flag", &h, &m)?, vec![0, 1]))
}

/// `SO(5)/U(2)`, `u(2) = R(e12+e34) ⊕ span(e12−e34, e13+e24, e14−e23)`;
/// the fibre over `S⁴` is `span(e13−e24, e14+e23)`.
fn cp3<S: Scalar>() -> Result<(ReductiveModel<S>, Vec<usize>)> {
    let e = |i: usize, j: usize| so_basis_elem::<S>(5, i - 1, j - 1);
    let h = vec![e(1, 2).add(&e(3, 4)), e(1, 2).sub(&e(3, 4)), e(1, 3).add(&e(2, 4)), e(1, 4).sub(&e(2, 3))];
    let m = vec![
        e(1, 3).sub(&e(2, 4)),
        e(1, 4).add(&e(2, 3)),
        e(1, 5).add(&e(2, 5)),
        e(1, 5).sub(&e(2, 5)),
        e(3, 5).add(&e(4, 5)),
        e(3, 5).sub(&e(4, 5)),
    ];
    Ok((ReductiveModel::from_matrices("cp3", &h, &m)?, vec![0, 1]))
}

/// `SU(2)³/ΔSU(2)` with `g0 = ½ Σ` of the standard metrics;
/// `u_a = (E_a, −E_a, 0)`, `w_a = (E_a, E_a, −2E_a)/√3`.
fn s3s3<S: Scalar>() -> Result<(ReductiveModel<S>, Vec<usize>)> {
    let r3 = sqrt_in(&S::from_i64(3), "s3s3")?;
    let so3 = [so_basis_elem::<S>(3, 1, 2), so_basis_elem::<S>(3, 2, 0), so_basis_elem::<S>(3, 0, 1)];
    let blk = |c: [i64; 3], a: usize| {
        let mut m = Mat::zeros(9, 9);
        for (k, ck) in c.iter().enumerate() {
            embed(9, 3 * k, 3 * k, &so3[a].scale(&S::from_i64(*ck)), &mut m);
        }
        m
    };
    let h: Vec<Mat<S>> = (0..3).map(|a| blk([1, 1, 1], a)).collect();
    let mut m: Vec<Mat<S>> = (0..3).map(|a| blk([1, -1, 0], a)).collect();
    m.extend((0..3).map(|a| blk([1, 1, -2], a).scale(&r3.inv())));
    Ok((ReductiveModel::from_matrices("s3s3", &h, &m)?, vec![]))
}

pub fn build_gray<S: Scalar>(name: &str) -> Result<ModelBundle<S>> {
    let (model, vertical): (ReductiveModel<S>, Vec<usize>) = match name {
        "s6" => s6()?,
        "flag" => flag()?,
        "cp3" => cp3()?,
        "s3s3" => s3s3()?,
        _ => return Err(Error::UnknownModel(name.into())),
    };
    let tau = model.canonical_tau()?;
    let stab = stabilizer(&tau);
    let com = commutant(&stab);
    if com.skew.len() != 1 {
        return Err(Error::Model(format!("{name}: skew commutant of stab(tau) has dim {}, expected 1", com.skew.len())));
    }
    let k = &com.skew[0];
    let c = k.mul(k)[(0, 0)].neg_ref();
    let j = k.scale(&sqrt_in(&c, name)?.inv());
    let dm = model.dim_m();
    let killing = model.full_algebra().killing();
    let minus_b = killing.gram[(model.dim_h(), model.dim_h())].neg_ref();
    let scal = curvature(&model, &NomizuMap::levi_civita(&model)).scal();
    let mut b = ModelBundle::new(name, tau.clone())
        .note(format!("g0: listed basis of m orthonormal; -B = {minus_b} g0 on m"))
        .note(format!("scal(g0) = {scal}; scal = 30 after scaling the metric by scal(g0)/30"))
        .param("killing_factor", &minus_b)
        .param("scal_g0", &scal)
        .with_tensor("J", Tensor::Endo(j.clone()))
        .with_tensor("omega", Tensor::Form(AltForm::from_endo(&j)?));
    if !vertical.is_empty() {
        let pv = Mat::from_fn(dm, dm, |r, c| if r == c && vertical.contains(&r) { S::one() } else { S::zero() });
        b = b.with_tensor("Pv", Tensor::Endo(pv));
    }
    Ok(b.with_model(model, NomizuMap::canonical(dm)))
}

/// `J² + Id`, `τ_X J + J τ_X` and `τ_X JY + τ_Y JX` (polarized `τ_X JX = 0`).
pub fn compatibility_residuals<S: Scalar>(b: &ModelBundle<S>) -> Result<[Residual; 3]> {
    let j = b.endo("J")?;
    let n = j.rows();
    let te = b.tau.tau_endos()?;
    let sq = Residual::of_mat(&j.mul(j).add(&Mat::identity(n)));
    let mut anti = Residual::zero();
    let mut pol = Residual::zero();
    for x in 0..n {
        anti = anti.merge(Residual::of_mat(&te[x].mul(j).add(&j.mul(&te[x]))));
        for y in x..n {
            let v = te[x].mul_vec(&j.col(y));
            let w = te[y].mul_vec(&j.col(x));
            pol = pol.merge(Residual::of(v.iter().zip(&w).map(|(a, c)| a.add_ref(c))));
        }
    }
    Ok([sq, anti, pol])
}

fn scale_to_30<S: Scalar>(b: &ModelBundle<S>) -> Result<S> {
    let scal = curvature(b.model()?, &NomizuMap::levi_civita(b.model()?)).scal();
    if scal.is_zero() {
        return Err(Error::Model("scalar curvature vanishes".into()));
    }
    Ok(S::from_i64(30).div_ref(&scal))
}

/// `|τ_X Y|² − ¼` at `scal = 30` over basis pairs with `X ⊥ Y, JY`; returns the pair count.
pub fn norm_identity<S: Scalar>(b: &ModelBundle<S>) -> Result<(Residual, usize)> {
    let f = scale_to_30(b)?;
    let j = b.endo("J")?;
    let n = j.rows();
    let te = b.tau.tau_endos()?;
    let quarter = S::from_ratio(1, 4);
    let mut r = Residual::zero();
    let mut count = 0;
    for x in 0..n {
        for y in 0..n {
            if x == y || !j[(x, y)].is_zero() {
                continue;
            }
            count += 1;
            let v = te[x].col(y);
            let nn = v.iter().fold(S::zero(), |mut a, c| {
                a.add_mul(c, c);
                a
            });
            r.absorb(&nn.mul_ref(&f).sub_ref(&quarter));
        }
    }
    Ok((r, count))
}

/// `−tr((4Jτ_V)²) − 16` at `scal = 30` for the unit vertical vectors.
pub fn twistor_scale<S: Scalar>(b: &ModelBundle<S>) -> Result<(Residual, usize)> {
    let f = scale_to_30(b)?;
    let j = b.endo("J")?;
    let mut r = Residual::zero();
    let mut count = 0;
    let n = j.rows();
    let Ok(pv) = b.endo("Pv") else { return Ok((r, 0)) };
    for v in (0..n).filter(|&i| !pv[(i, i)].is_zero()) {
        count += 1;
        let a = j.mul(&b.tau.tau_x(&unit_vec(n, v))?).scale(&S::from_i64(4));
        let val = a.mul(&a).trace().neg_ref().mul_ref(&f);
        r.absorb(&val.sub_ref(&S::from_i64(16)));
    }
    Ok((r, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductive::holonomy;
    use crate::scalar::{Q, Q3};

    fn check<S: Scalar>(name: &str, hol: usize) {
        let b = build_gray::<S>(name).unwrap();
        let m = b.model().unwrap();
        assert!(m.jacobi_residual().exact_zero, "{name}");
        assert!(m.is_naturally_reductive(), "{name}");
        assert_eq!(stabilizer(&b.tau).dim(), 8, "{name}");
        for r in compatibility_residuals(&b).unwrap() {
            assert!(r.exact_zero, "{name}: {}", r.max_abs);
        }
        assert!(b.invariance_residual().exact_zero, "{name}");
        assert_eq!(holonomy(m, b.nomizu().unwrap()).unwrap().dim(), hol, "{name}");
        let (r, c) = norm_identity(&b).unwrap();
        assert!(c > 0 && r.exact_zero, "{name}: {}", r.max_abs);
    }

    #[test]
    fn gray_models() {
        check::<Q>("s6", 8);
        check::<Q>("flag", 2);
        check::<Q>("cp3", 4);
        check::<Q3>("s3s3", 3);
        assert!(build_gray::<Q>("s3s3").is_err());
    }

    #[test]
    fn twistor_constant() {
        for name in ["flag", "cp3"] {
            let b = build_gray::<Q>(name).unwrap();
            let (r, c) = twistor_scale(&b).unwrap();
            assert!(c == 2 && r.exact_zero, "{name}: {}", r.max_abs);
        }
    }
}
