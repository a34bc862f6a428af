//! `su(3)` in its adjoint representation and the real forms of `so(3)`,
//! `u(3)` used by the splitting examples.

use super::sqrt_in;
use crate::error::Result;
use crate::exterior::AltForm;
use crate::liealg::{so_basis_elem, stabilizer_of_all, LieSubalgebra};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// Complex 3×3 matrix as a real/imaginary pair.
#[derive(Clone)]
struct C3<S> {
    re: Mat<S>,
    im: Mat<S>,
}

impl<S: Scalar> C3<S> {
    fn mul(&self, o: &Self) -> Self {
        C3 { re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)), im: self.re.mul(&o.im).add(&self.im.mul(&o.re)) }
    }
    fn bracket(&self, o: &Self) -> Self {
        let a = self.mul(o);
        let b = o.mul(self);
        C3 { re: a.re.sub(&b.re), im: a.im.sub(&b.im) }
    }
    /// `−½ Re tr(XY)`.
    fn pair(&self, o: &Self) -> S {
        let p = self.mul(o);
        p.re.trace().div_ref(&S::from_i64(-2))
    }
}

/// Basis of `su(3)` orthonormal for `−½ tr(XY)`.
fn su3_basis<S: Scalar>() -> Result<Vec<C3<S>>> {
    let z = || Mat::<S>::zeros(3, 3);
    let mut out = Vec::new();
    for (p, q) in [(0, 1), (0, 2), (1, 2)] {
        out.push(C3 { re: so_basis_elem(3, p, q), im: z() });
        let mut s = z();
        s[(p, q)] = S::one();
        s[(q, p)] = S::one();
        out.push(C3 { re: z(), im: s });
    }
    let mut h1 = z();
    h1[(0, 0)] = S::one();
    h1[(1, 1)] = S::from_i64(-1);
    out.push(C3 { re: z(), im: h1 });
    let r3 = sqrt_in(&S::from_i64(3), "su(3) adjoint")?;
    let mut h2 = z();
    h2[(0, 0)] = r3.inv();
    h2[(1, 1)] = r3.inv();
    h2[(2, 2)] = S::from_i64(-2).div_ref(&r3);
    out.push(C3 { re: z(), im: h2 });
    Ok(out)
}

/// `ad(su(3)) ⊂ so(8)`; needs `√3` in the scalar field.
pub fn su3_adjoint<S: Scalar>() -> Result<LieSubalgebra<S>> {
    let b = su3_basis::<S>()?;
    let ads: Vec<Mat<S>> = b.iter().map(|x| Mat::from_fn(8, 8, |r, c| b[r].pair(&x.bracket(&b[c])))).collect();
    LieSubalgebra::new(8, &ads)
}

/// Real `A ⊗ I₂` on `ℂ³ = ℝ⁶` with `z_p = x_p + i y_p` in the order `x₁, y₁, x₂, …`.
pub fn so3_diag<S: Scalar>() -> Result<LieSubalgebra<S>> {
    let gens: Vec<Mat<S>> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(p, q)| {
            let a = so_basis_elem::<S>(3, p, q);
            Mat::from_fn(6, 6, |r, c| if r % 2 == c % 2 { a[(r / 2, c / 2)].clone() } else { S::zero() })
        })
        .collect();
    LieSubalgebra::new(6, &gens)
}

/// Kähler form `e₀₁ + e₂₃ + e₄₅` on `ℝ⁶`, shifted by `offset` inside `ℝⁿ`.
pub fn kahler_form<S: Scalar>(n: usize, offset: usize) -> AltForm<S> {
    let mut w = AltForm::zero(n, 2);
    for p in 0..3 {
        w.add_term(&[offset + 2 * p, offset + 2 * p + 1], &S::one());
    }
    w
}

/// `u(3) ⊂ so(7)` fixing `e₀` and the Kähler form on `e₁..e₆`.
pub fn u3_in_so7<S: Scalar>() -> LieSubalgebra<S> {
    let mut e0 = AltForm::zero(7, 1);
    e0.add_term(&[0], &S::one());
    stabilizer_of_all(7, &[e0, kahler_form(7, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{curvature_space_dim, stabilizer};
    use crate::models::forms::su3_form;
    use crate::scalar::{Q, Q3};

    #[test]
    fn adjoint_su3() {
        let g = su3_adjoint::<Q3>().unwrap();
        assert_eq!(g.dim(), 8);
        assert!(g.closure_residual().exact_zero);
        assert_eq!(curvature_space_dim(&g), 1);
        assert!(su3_adjoint::<Q>().is_err());
    }

    #[test]
    fn real_forms() {
        let so3 = so3_diag::<Q>().unwrap();
        assert!(so3.is_subalgebra_of(&stabilizer(&su3_form())));
        assert_eq!(u3_in_so7::<Q>().dim(), 9);
    }
}
