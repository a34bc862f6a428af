use proptest::prelude::*;

use skewtorsion::exterior::{multi_indices, tau_squared, AltForm};
use skewtorsion::liealg::stabilizer;
use skewtorsion::linalg::Mat;
use skewtorsion::scalar::{q, Q};

fn form_from(n: usize, k: usize, coeffs: &[(i64, i64)]) -> AltForm<Q> {
    let mut f = AltForm::zero(n, k);
    for (idx, (a, b)) in multi_indices(n, k).iter().zip(coeffs.iter().cycle()) {
        f.add_term(idx, &q(*a, *b));
    }
    f
}

fn skew_from(n: usize, coeffs: &[(i64, i64)]) -> Mat<Q> {
    let mut m = Mat::zeros(n, n);
    let mut it = coeffs.iter().cycle();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = it.next().unwrap();
            m[(i, j)] = q(*a, *b);
            m[(j, i)] = q(-*a, *b);
        }
    }
    m
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), 1..12)
}

/// `(n, p, q)` with `p + q <= n`.
fn degrees() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..=6).prop_flat_map(|n| (Just(n), 0..=n)).prop_flat_map(|(n, p)| (Just(n), Just(p), 0..=n - p))
}

/// Sign of `e_{σ(1)} ∧ … ∧ e_{σ(k)}` computed by counting inversions.
fn perm_sign(idx: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                s = -s;
            }
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn leibniz((n, p, k) in degrees(), ca in coeffs(), cb in coeffs(), cm in coeffs()) {
        let a = form_from(n, p, &ca);
        let b = form_from(n, k, &cb);
        let m = skew_from(n, &cm);
        let lhs = a.wedge(&b).unwrap().derivation(&m).unwrap();
        let rhs = a.derivation(&m).unwrap().wedge(&b).unwrap().add(&a.wedge(&b.derivation(&m).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_law(n in 2usize..=7, ca in coeffs(), cb in coeffs()) {
        let a = form_from(n, 2, &ca);
        let b = form_from(n, 2, &cb);
        // oracle: entrywise matrices built directly from the coefficients
        let ma = Mat::from_fn(n, n, |r, c| a.get(&[c, r]));
        let mb = Mat::from_fn(n, n, |r, c| b.get(&[c, r]));
        prop_assert_eq!(a.to_endo().unwrap(), ma.clone());
        let act = b.derivation(&ma).unwrap().to_endo().unwrap();
        prop_assert_eq!(act, ma.mul(&mb).sub(&mb.mul(&ma)));
    }

    #[test]
    fn graded_commutativity((n, p, k) in degrees(), ca in coeffs(), cb in coeffs()) {
        let a = form_from(n, p, &ca);
        let b = form_from(n, k, &cb);
        let sign = if (p * k) % 2 == 0 { q(1, 1) } else { q(-1, 1) };
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&sign));
    }

    #[test]
    fn interior_antiderivation((n, p, k) in degrees(), ca in coeffs(), cb in coeffs(), i in 0usize..7) {
        prop_assume!(p >= 1 && k >= 1);
        let x: Vec<Q> = (0..n).map(|j| if j == i % n { q(1, 1) } else { q(0, 1) }).collect();
        let a = form_from(n, p, &ca);
        let b = form_from(n, k, &cb);
        let sign = if p % 2 == 0 { q(1, 1) } else { q(-1, 1) };
        let lhs = a.wedge(&b).unwrap().interior(&x).unwrap();
        let rhs = a.interior(&x).unwrap().wedge(&b).unwrap().add(&a.wedge(&b.interior(&x).unwrap()).unwrap().scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unsorted_terms_follow_permutation_sign(perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), c in -5i64..=5) {
        let mut f = AltForm::<Q>::zero(4, 4);
        f.add_term(&perm, &q(c, 1));
        prop_assert_eq!(f.get(&[0, 1, 2, 3]), q(c * perm_sign(&perm), 1));
    }

    #[test]
    fn stabilizer_annihilates(ca in prop::collection::vec((-2i64..=2, 1i64..=1), 1..6)) {
        let mut tau = AltForm::<Q>::zero(5, 3);
        for (idx, (a, b)) in multi_indices(5, 3).iter().zip(&ca) {
            tau.add_term(idx, &q(*a, *b));
        }
        let g = stabilizer(&tau);
        prop_assert!(g.closure_residual().exact_zero);
        for b in g.basis() {
            prop_assert!(tau.derivation(b).unwrap().is_zero());
        }
    }

    #[test]
    fn tau_squared_is_symmetric(n in 3usize..=6, ca in coeffs()) {
        let tau = form_from(n, 3, &ca);
        let t2 = tau_squared(&tau).unwrap();
        prop_assert!(t2.is_symmetric());
    }
}
