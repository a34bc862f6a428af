//! The `G₂` 3-form and the `SU(3)` 3-form, plus the vector cross product
//! identities of a `G₂`-form.

use crate::exterior::{sym_endo, wedge_endo, AltForm};
use crate::liealg::Residual;
use crate::linalg::{unit_vec, Mat};
use crate::scalar::Scalar;

/// `φ = e123 + e145 + e167 + e246 − e257 − e347 − e356` (1-based).
pub fn g2_form<S: Scalar>() -> AltForm<S> {
    AltForm::from_int_terms(
        7,
        &[(1, &[0, 1, 2]), (1, &[0, 3, 4]), (1, &[0, 5, 6]), (1, &[1, 3, 5]), (-1, &[1, 4, 6]), (-1, &[2, 3, 6]), (-1, &[2, 4, 5])],
    )
}

/// `Re(dz₁∧dz₂∧dz₃) = e135 − e146 − e236 − e245` with `z_p = e_{2p−1} + i e_{2p}`.
pub fn su3_form<S: Scalar>() -> AltForm<S> {
    AltForm::from_int_terms(6, &[(1, &[0, 2, 4]), (-1, &[0, 3, 5]), (-1, &[1, 2, 5]), (-1, &[1, 3, 4])])
}

/// Residuals of `2φ_{φ_X Y} + [φ_X, φ_Y] = 3 X∧Y` and
/// `{φ_X, φ_Y} = −2⟨X,Y⟩ Id + X⊙Y` over all basis pairs.
pub fn cross_product_identities<S: Scalar>(phi: &AltForm<S>) -> (Residual, Residual) {
    let n = phi.dim();
    let pe = phi.tau_endos().expect("3-form");
    let comb = |v: &[S]| {
        let mut m = Mat::zeros(n, n);
        for (c, e) in v.iter().zip(&pe) {
            if !c.is_zero() {
                m.axpy(c, e);
            }
        }
        m
    };
    let (mut comm, mut anti) = (Residual::zero(), Residual::zero());
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (unit_vec::<S>(n, i), unit_vec::<S>(n, j));
            let pxy = pe[i].mul_vec(&y);
            let lhs = comb(&pxy).scale(&S::from_i64(2)).add(&pe[i].commutator(&pe[j]));
            let rhs = wedge_endo(&x, &y).scale(&S::from_i64(3));
            comm = comm.merge(Residual::of_mat(&lhs.sub(&rhs)));
            let lhs = pe[i].mul(&pe[j]).add(&pe[j].mul(&pe[i]));
            let mut rhs = sym_endo(&x, &y);
            if i == j {
                rhs = rhs.sub(&Mat::identity(n).scale(&S::from_i64(2)));
            }
            anti = anti.merge(Residual::of_mat(&lhs.sub(&rhs)));
        }
    }
    (comm, anti)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::stabilizer;
    use crate::scalar::{qi, Q};

    #[test]
    fn stabilizer_dimensions() {
        assert_eq!(stabilizer(&g2_form::<Q>()).dim(), 14);
        assert_eq!(stabilizer(&su3_form::<Q>()).dim(), 8);
        assert_eq!(stabilizer(&g2_form::<Q>().scale(&qi(-3))).dim(), 14);
    }

    #[test]
    fn g2_identities() {
        let (a, b) = cross_product_identities(&g2_form::<Q>());
        assert!(a.exact_zero, "commutator identity {}", a.max_abs);
        assert!(b.exact_zero, "anticommutator identity {}", b.max_abs);
    }

    #[test]
    fn identities_fail_for_scaled_form() {
        let (a, _) = cross_product_identities(&g2_form::<Q>().scale(&qi(2)));
        assert!(!a.exact_zero);
    }
}
