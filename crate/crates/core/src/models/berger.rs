//! Berger space `SO(5)/SO(3)_irr`: `so(3)` acts on `ℝ⁵ = Sym₀(ℝ³)` and
//! `m ≅ ℝ⁷` is irreducible.

use super::ModelBundle;
use crate::error::Result;
use crate::exterior::pairs;
use crate::liealg::{so_basis_elem, LieSubalgebra};
use crate::linalg::Mat;
use crate::reductive::{NomizuMap, ReductiveModel};
use crate::scalar::Scalar;

fn sym0_basis<S: Scalar>() -> Vec<Mat<S>> {
    let s = |v: &[i64]| Mat::from_i64(3, 3, v);
    let sym = [
        s(&[0, 1, 0, 1, 0, 0, 0, 0, 0]),
        s(&[0, 0, 1, 0, 0, 0, 1, 0, 0]),
        s(&[0, 0, 0, 0, 0, 1, 0, 1, 0]),
        s(&[1, 0, 0, 0, -1, 0, 0, 0, 0]),
    ];
    let cols: [[i64; 4]; 4] = [[1, 1, 1, 0], [-1, 1, 0, -1], [-1, 0, 1, 1], [0, 1, -1, 1]];
    let mut out = vec![s(&[1, 0, 0, 0, 1, 0, 0, 0, -2])];
    for c in cols {
        let mut m = Mat::zeros(3, 3);
        for (k, x) in c.iter().enumerate() {
            m.axpy(&S::from_i64(*x), &sym[k]);
        }
        out.push(m);
    }
    out
}

/// Isotropy `so(3)` in `so(5)`, written in a basis of `Sym₀(ℝ³)` orthonormal for `tr(AB)/6`.
pub fn so3_irr_on_r5<S: Scalar>() -> Vec<Mat<S>> {
    let f = sym0_basis::<S>();
    let six = S::from_i64(6);
    (0..3)
        .map(|a| {
            let gen = so_basis_elem::<S>(3, (a + 1) % 3, (a + 2) % 3);
            Mat::from_fn(5, 5, |r, c| f[r].mul(&gen.commutator(&f[c])).trace().div_ref(&six))
        })
        .collect()
}

/// Skew coordinates in pair order of an orthogonal basis of `m`, with squared norms 5 or 45.
const M_COORDS: [[i64; 10]; 7] = [
    [1, -1, -1, 0, 0, 1, 0, 0, 1, 0],
    [0, 1, -1, -1, 1, 0, 0, 0, 0, -1],
    [0, 0, 1, -1, 0, 0, -1, -1, 1, 0],
    [3, -3, 0, 0, 1, -4, -1, -1, -2, -2],
    [2, 2, -2, -2, -5, -1, -1, 0, -1, 1],
    [2, 2, 1, 1, 0, -3, 3, 1, 4, 0],
    [1, 1, 2, 2, -2, 2, -1, 1, 0, -5],
];

fn m_basis<S: Scalar>() -> Vec<Mat<S>> {
    M_COORDS
        .iter()
        .map(|v| {
            let n2: i64 = v.iter().map(|x| x * x).sum();
            let k = if n2 == 45 { 3 } else { 1 };
            let mut m = Mat::zeros(5, 5);
            for ((i, j), x) in pairs(5).into_iter().zip(v) {
                m[(i, j)] = S::from_ratio(*x, k);
                m[(j, i)] = S::from_ratio(-*x, k);
            }
            m
        })
        .collect()
}

/// The isotropy as a subalgebra of `so(7)` acting on `m`.
pub fn so3_irr_on_r7<S: Scalar>() -> Result<LieSubalgebra<S>> {
    let m = berger_model::<S>()?;
    LieSubalgebra::new(7, m.isotropy())
}

pub fn berger_model<S: Scalar>() -> Result<ReductiveModel<S>> {
    ReductiveModel::from_matrices("berger", &so3_irr_on_r5::<S>(), &m_basis::<S>())
}

/// Berger space with the normal metric (the `m` basis is orthonormal up to
/// the common factor 5) and `τ` the canonical torsion.
pub fn build_berger<S: Scalar>() -> Result<ModelBundle<S>> {
    let model = berger_model::<S>()?;
    let tau = model.canonical_tau()?;
    Ok(ModelBundle::new("berger", tau)
        .note("m basis orthonormal for -tr(AB)/10 on so(5)")
        .with_model(model, NomizuMap::canonical(7)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{commutant, curvature_space_dim, invariant_vectors, stabilizer};
    use crate::reductive::holonomy;
    use crate::scalar::Q;

    #[test]
    fn orthogonal_complement() {
        let h = so3_irr_on_r5::<Q>();
        let m = m_basis::<Q>();
        for (i, a) in m.iter().enumerate() {
            for x in &h {
                assert!(a.dot(x).is_zero());
            }
            for (j, b) in m.iter().enumerate() {
                let d = a.dot(b);
                assert_eq!(d, if i == j { Q::from_integer(10.into()) } else { Q::from_integer(0.into()) });
            }
        }
    }

    #[test]
    fn berger_invariants() {
        let b = build_berger::<Q>().unwrap();
        let m = b.model().unwrap();
        assert!(m.jacobi_residual().exact_zero);
        let g = so3_irr_on_r7::<Q>().unwrap();
        assert_eq!(commutant(&g).symmetric.len(), 1);
        assert!(invariant_vectors(&g).is_empty());
        assert_eq!(curvature_space_dim(&g), 0);
        assert_eq!(stabilizer(&b.tau).dim(), 14);
        assert_eq!(holonomy(m, b.nomizu().unwrap()).unwrap().dim(), 3);
    }
}
