//! Three-dimensional geometries with `τ = t·vol` on `m = su(2)` (`h = 0`).

use super::ModelBundle;
use crate::error::{Error, Result};
use crate::exterior::{AltForm, CurvOperator};
use crate::liealg::Residual;
use crate::linalg::unit_vec;
use crate::models::kxk::eps;
use crate::reductive::{curvature, parallel_residual, NomizuMap, ReductiveModel, Tensor};
use crate::scalar::Scalar;

fn group_model<S: Scalar>(name: &str, mm_m: Vec<Vec<Vec<S>>>) -> ReductiveModel<S> {
    ReductiveModel::from_tables(name, Vec::new(), Vec::new(), vec![vec![Vec::new(); 3]; 3], mm_m)
}

/// Round `S³ = SU(2)` with `[e_i, e_j] = 2s e_k` and `τ = t·vol`.
/// `∇^τ` is flat iff `t = ±s`.
pub fn build_dim3<S: Scalar>(s: S, t: S) -> Result<ModelBundle<S>> {
    if t.is_zero() {
        return Err(Error::BadParam("dim3: t must be nonzero".into()));
    }
    let two_s = S::from_i64(2).mul_ref(&s);
    let mm = (0..3).map(|i| (0..3).map(|j| (0..3).map(|k| two_s.mul_ref(&S::from_i64(eps(i, j, k)))).collect()).collect()).collect();
    let model = group_model("dim3", mm);
    let tau = AltForm::vol(3).scale(&t);
    let l = NomizuMap::levi_civita(&model).plus_tau(&tau)?;
    Ok(ModelBundle::new("dim3", tau).param("s", &s).param("t", &t).note("left-invariant round metric, e_i orthonormal").with_model(model, l))
}

/// Berger sphere: `X₁ = λE₁, X₂ = E₂, X₃ = E₃` orthonormal, `[E_i, E_j] = 2E_k`,
/// `τ = −vol/λ`. The unit field `ξ = X₁` is `∇^τ`-parallel.
pub fn build_dim3_berger<S: Scalar>(lambda: S) -> Result<ModelBundle<S>> {
    if lambda.is_zero() {
        return Err(Error::BadParam("dim3-berger: lambda must be nonzero".into()));
    }
    let two = S::from_i64(2);
    let tl = two.mul_ref(&lambda);
    let mut mm = vec![vec![vec![S::zero(); 3]; 3]; 3];
    let mut set = |i: usize, j: usize, k: usize, c: S| {
        mm[j][i][k] = c.neg_ref();
        mm[i][j][k] = c;
    };
    set(0, 1, 2, tl.clone());
    set(1, 2, 0, two.div_ref(&lambda));
    set(2, 0, 1, tl);
    let model = group_model("dim3-berger", mm);
    let t = lambda.inv().neg_ref();
    let tau = AltForm::vol(3).scale(&t);
    let l = NomizuMap::levi_civita(&model).plus_tau(&tau)?;
    Ok(ModelBundle::new("dim3-berger", tau)
        .param("lambda", &lambda)
        .param("t", &t)
        .with_tensor("xi", Tensor::Vector(unit_vec(3, 0)))
        .with_model(model, l))
}

/// `R^g − (R^τ − t² X∧Y)`.
pub fn eq8_residual<S: Scalar>(b: &ModelBundle<S>) -> Result<Residual> {
    let m = b.model()?;
    let t = b.tau.get(&[0, 1, 2]);
    let rg = curvature(m, &NomizuMap::levi_civita(m));
    let rt = curvature(m, b.nomizu()?);
    let rhs = rt.sub(&CurvOperator::identity(3).scale(&t.mul_ref(&t)));
    Ok(Residual::of_mat(rg.sub(&rhs).matrix()))
}

/// `(R^τ, R^g + t² Id)`: both vanish in the flat case.
pub fn flat_case_residuals<S: Scalar>(b: &ModelBundle<S>) -> Result<(Residual, Residual)> {
    let m = b.model()?;
    let t = b.tau.get(&[0, 1, 2]);
    let rt = curvature(m, b.nomizu()?);
    let rg = curvature(m, &NomizuMap::levi_civita(m));
    let d = rg.add(&CurvOperator::identity(3).scale(&t.mul_ref(&t)));
    Ok((Residual::of_mat(rt.matrix()), Residual::of_mat(d.matrix())))
}

/// `(∇^τ ξ, dξ − 2 τ_ξ)` on the Berger model.
pub fn parallel_xi_residuals<S: Scalar>(b: &ModelBundle<S>) -> Result<(Residual, Residual)> {
    let m = b.model()?;
    let xi = b.vector("xi")?;
    let par = parallel_residual(m, b.nomizu()?, &Tensor::Vector(xi.clone()))?;
    let mut dxi = AltForm::zero(3, 2);
    for (i, j) in crate::exterior::pairs(3) {
        let c: S = m.bracket_m(&unit_vec(3, i), &unit_vec(3, j)).iter().zip(xi).fold(S::zero(), |mut a, (x, y)| {
            a.add_mul(x, y);
            a
        });
        dxi.add_term(&[i, j], &c.neg_ref());
    }
    let two_tau_xi = b.tau.interior(xi)?.scale(&S::from_i64(2));
    Ok((par, Residual::of(dxi.sub(&two_tau_xi).terms().map(|(_, c)| c.clone()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductive::holonomy;
    use crate::scalar::{qi, Q};

    #[test]
    fn eq8_and_flat_case() {
        for t in [1, 2] {
            let b = build_dim3::<Q>(qi(1), qi(t)).unwrap();
            assert!(eq8_residual(&b).unwrap().exact_zero);
            let b = build_dim3::<Q>(qi(t), qi(t)).unwrap();
            assert!(eq8_residual(&b).unwrap().exact_zero);
            let (a, c) = flat_case_residuals(&b).unwrap();
            assert!(a.exact_zero && c.exact_zero);
        }
        let b = build_dim3::<Q>(qi(1), qi(2)).unwrap();
        assert!(!flat_case_residuals(&b).unwrap().0.exact_zero);
    }

    #[test]
    fn berger_parallel_xi() {
        let b = build_dim3_berger::<Q>(qi(2)).unwrap();
        let (p, d) = parallel_xi_residuals(&b).unwrap();
        assert!(p.exact_zero, "{}", p.max_abs);
        assert!(d.exact_zero, "{}", d.max_abs);
        assert_eq!(holonomy(b.model().unwrap(), b.nomizu().unwrap()).unwrap().dim(), 1);
    }
}
