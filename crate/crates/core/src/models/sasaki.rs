//! Sasaki structure on the Stiefel manifold `SO(n+2)/SO(n)`, a circle bundle
//! over the Grassmannian `SO(n+2)/(SO(2)×SO(n))`.
//!
//! `m = span(ξ, X_j, Y_j)` with `ξ = 2 e₁∧e₂`, `X_j = 2 e₁∧e_{j+2}`,
//! `Y_j = 2 e₂∧e_{j+2}`: the Sasaki metric for which the space is naturally
//! reductive. `Φ` is read off from `∇^g ξ`.

use super::ModelBundle;
use crate::error::{Error, Result};
use crate::exterior::{pairs, wedge_endo, AltForm};
use crate::liealg::{so_basis_elem, LieSubalgebra, Residual};
use crate::linalg::{unit_vec, Mat};
use crate::reductive::{curvature, holonomy, NomizuMap, ReductiveModel, Tensor};
use crate::scalar::Scalar;

fn pieces<S: Scalar>(n: usize) -> (Vec<Mat<S>>, Vec<Mat<S>>) {
    let big = n + 2;
    let mut h = Vec::new();
    for a in 2..big {
        for b in a + 1..big {
            h.push(so_basis_elem(big, a, b));
        }
    }
    let two = S::from_i64(2);
    let xs = (2..big).map(|j| so_basis_elem(big, 0, j).scale(&two)).collect::<Vec<_>>();
    let ys = (2..big).map(|j| so_basis_elem(big, 1, j).scale(&two)).collect::<Vec<_>>();
    (h, xs.into_iter().chain(ys).collect())
}

pub fn build_sasaki_stiefel<S: Scalar>(n: usize) -> Result<ModelBundle<S>> {
    if !(2..=3).contains(&n) {
        return Err(Error::BadParam(format!("stiefel: n must be 2 or 3, got {n}")));
    }
    let big = n + 2;
    let (h, horiz) = pieces::<S>(n);
    let mut m = vec![so_basis_elem::<S>(big, 0, 1).scale(&S::from_i64(2))];
    m.extend(horiz);
    let model = ReductiveModel::from_matrices("stiefel", &h, &m)?;
    let dm = 2 * n + 1;
    let lg = NomizuMap::levi_civita(&model);
    let xi = unit_vec::<S>(dm, 0);
    let phi = Mat::from_cols(dm, &(0..dm).map(|x| lg.maps[x].mul_vec(&xi)).collect::<Vec<_>>());
    let tau = AltForm::one_form(&xi).wedge(&AltForm::from_endo(&phi)?)?;
    let l = lg.plus_tau(&tau)?;
    Ok(ModelBundle::new("stiefel", tau)
        .param("n", n)
        .note("metric: xi = 2 e1^e2, 2 e1^e_j, 2 e2^e_j orthonormal")
        .with_tensor("xi", Tensor::Vector(xi))
        .with_tensor("Phi", Tensor::Endo(phi))
        .with_model(model, l))
}

/// Residuals of `dξ = 2Φ`, `Φ² = −Id + ξ⊗ξ` and `∇^g_X Φ = −X∧ξ`.
pub fn sasaki_residuals<S: Scalar>(b: &ModelBundle<S>) -> Result<[Residual; 3]> {
    let m = b.model()?;
    let dm = m.dim_m();
    let xi = b.vector("xi")?;
    let phi = b.endo("Phi")?;
    let mut dxi = AltForm::zero(dm, 2);
    for (i, j) in pairs(dm) {
        let br = m.bracket_m(&unit_vec(dm, i), &unit_vec(dm, j));
        let c = br.iter().zip(xi).fold(S::zero(), |mut a, (x, y)| {
            a.add_mul(x, y);
            a
        });
        dxi.add_term(&[i, j], &c.neg_ref());
    }
    let d = dxi.sub(&AltForm::from_endo(phi)?.scale(&S::from_i64(2)));
    let xx = Mat::from_fn(dm, dm, |r, c| xi[r].mul_ref(&xi[c]));
    let sq = phi.mul(phi).add(&Mat::identity(dm)).sub(&xx);
    let lg = NomizuMap::levi_civita(m);
    let mut nab = Residual::zero();
    for x in 0..dm {
        let lhs = lg.maps[x].commutator(phi);
        let rhs = wedge_endo(&unit_vec(dm, x), xi).neg();
        nab = nab.merge(Residual::of_mat(&lhs.sub(&rhs)));
    }
    Ok([Residual::of(d.terms().map(|(_, c)| c.clone())), Residual::of_mat(&sq), nab])
}

/// Kähler base `SO(n+2)/(SO(2)×SO(n))` on the horizontal space.
pub fn base_model<S: Scalar>(n: usize) -> Result<ReductiveModel<S>> {
    let (mut h, m) = pieces::<S>(n);
    h.insert(0, so_basis_elem(n + 2, 0, 1));
    ReductiveModel::from_matrices("stiefel-base", &h, &m)
}

fn embed<S: Scalar>(a: &Mat<S>) -> Mat<S> {
    let k = a.rows();
    Mat::from_fn(k + 1, k + 1, |r, c| if r == 0 || c == 0 { S::zero() } else { a[(r - 1, c - 1)].clone() })
}

/// Residual of `R^τ(X̃,Ỹ)Z̃ = (R^{g_N}(X,Y)Z)~ + 4ω(X,Y) J̃Z` over horizontal basis triples.
pub fn curvature_relation_residual<S: Scalar>(b: &ModelBundle<S>, n: usize) -> Result<Residual> {
    let m = b.model()?;
    let base = base_model::<S>(n)?;
    let rn = curvature(&base, &NomizuMap::canonical(2 * n));
    let rt = curvature(m, b.nomizu()?);
    let phi = b.endo("Phi")?;
    let four = S::from_i64(4);
    let mut r = Residual::zero();
    for (p, q) in pairs(2 * n) {
        let omega = phi[(q + 1, p + 1)].mul_ref(&four);
        let expect = embed(&rn.endo(p, q)).add(&phi.scale(&omega));
        r = r.merge(Residual::of_mat(&rt.endo(p + 1, q + 1).sub(&expect)));
    }
    Ok(r)
}

/// `hol(∇^τ) ⊆ hol(∇^{g_N}) + ℝΦ` as subspaces; returns the verdict, `hol(∇^τ)` and `hol(∇^{g_N})`.
pub fn holonomy_inclusion<S: Scalar>(b: &ModelBundle<S>, n: usize) -> Result<(bool, LieSubalgebra<S>, LieSubalgebra<S>)> {
    let m = b.model()?;
    let hol = holonomy(m, b.nomizu()?)?;
    let base = base_model::<S>(n)?;
    let hn = holonomy(&base, &NomizuMap::canonical(2 * n))?;
    let mut gens: Vec<Mat<S>> = hn.basis().iter().map(embed).collect();
    gens.push(b.endo("Phi")?.clone());
    let mut ech = crate::linalg::Echelon::new(m.dim_m() * m.dim_m());
    for g in &gens {
        ech.push(&g.flatten());
    }
    let inside = hol.basis().iter().all(|a| ech.contains(&a.flatten()));
    Ok((inside, hol, hn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::stabilizer;
    use crate::reductive::parallel_residual;
    use crate::scalar::Q;

    #[test]
    fn stiefel_sasaki() {
        for n in [2, 3] {
            let b = build_sasaki_stiefel::<Q>(n).unwrap();
            for r in sasaki_residuals(&b).unwrap() {
                assert!(r.exact_zero, "n = {n}: {}", r.max_abs);
            }
            assert!(b.invariance_residual().exact_zero);
            let m = b.model().unwrap();
            let par = parallel_residual(m, b.nomizu().unwrap(), &Tensor::Form(b.tau.clone())).unwrap();
            assert!(par.exact_zero);
            assert_eq!(stabilizer(&b.tau).dim(), n * n);
            assert!(curvature_relation_residual(&b, n).unwrap().exact_zero);
            let (inside, _, _) = holonomy_inclusion(&b, n).unwrap();
            assert!(inside);
        }
        let b = build_sasaki_stiefel::<Q>(3).unwrap();
        assert!(b.model().unwrap().is_naturally_reductive());
        let (_, hol, _) = holonomy_inclusion(&b, 3).unwrap();
        assert_eq!(hol.dim(), 3);
        assert!(hol.is_subalgebra_of(&stabilizer(&b.tau)));
    }
}
