//! Exterior algebra of Euclidean `R^n`: alternating forms, contractions, the
//! 2-form / skew endomorphism dictionary, derivations, Hodge star and the
//! Bianchi map on curvature operators.
//!
//! Indices are 0-based in the API and 1-based in JSON.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{Mat, max_abs};
use crate::scalar::{Mode, Scalar, Q};

/// Sorts `idx`, returning the permutation sign, or `None` on a repeated index.
pub fn sort_sign(idx: &mut [usize]) -> Option<i8> {
    let mut sign = 1i8;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(sign)
}

fn signed<S: Scalar>(c: &S, sign: i8) -> S {
    if sign < 0 {
        c.neg_ref()
    } else {
        c.clone()
    }
}

/// All strictly increasing `k`-tuples from `0..n`, in lexicographic order.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Alternating `k`-form on `R^n` with sparse coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct AltForm<S> {
    n: usize,
    k: usize,
    coeffs: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> AltForm<S> {
    pub fn zero(n: usize, k: usize) -> Self {
        AltForm { n, k, coeffs: BTreeMap::new() }
    }

    /// `e_{i1} ∧ ... ∧ e_{ik}` for arbitrary (possibly unsorted) indices.
    pub fn basis(n: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(n, idx.len());
        f.add_term(idx, &S::one());
        f
    }

    pub fn from_terms(n: usize, k: usize, terms: &[(&[usize], S)]) -> Self {
        let mut f = Self::zero(n, k);
        for (idx, c) in terms {
            assert_eq!(idx.len(), k);
            f.add_term(idx, c);
        }
        f
    }

    /// Terms with integer coefficients.
    pub fn from_int_terms(n: usize, terms: &[(i64, &[usize])]) -> Self {
        let k = terms.first().map_or(0, |t| t.1.len());
        let mut f = Self::zero(n, k);
        for (c, idx) in terms {
            f.add_term(idx, &S::from_i64(*c));
        }
        f
    }

    pub fn one_form(v: &[S]) -> Self {
        let mut f = Self::zero(v.len(), 1);
        for (i, c) in v.iter().enumerate() {
            f.add_term(&[i], c);
        }
        f
    }

    /// Volume form `e_1 ∧ ... ∧ e_n`.
    pub fn vol(n: usize) -> Self {
        Self::basis(n, &(0..n).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.coeffs.iter()
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `e_idx`, with the sign of the sorting permutation.
    pub fn get(&self, idx: &[usize]) -> S {
        let mut v = idx.to_vec();
        match sort_sign(&mut v) {
            None => S::zero(),
            Some(s) => self.coeffs.get(&v).map_or(S::zero(), |c| signed(c, s)),
        }
    }

    pub fn add_term(&mut self, idx: &[usize], c: &S) {
        assert_eq!(idx.len(), self.k, "term degree mismatch");
        if c.is_zero() {
            return;
        }
        let mut v = idx.to_vec();
        assert!(v.iter().all(|&i| i < self.n), "index out of range");
        let Some(s) = sort_sign(&mut v) else { return };
        let c = signed(c, s);
        let e = self.coeffs.entry(v.clone()).or_insert_with(S::zero);
        e.add_assign_ref(&c);
        if e.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::DimMismatch { expected: self.n, got: o.n });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.n, self.k), (o.n, o.k), "form shape mismatch");
        let mut r = self.clone();
        for (i, c) in &o.coeffs {
            r.add_term(i, c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::from_i64(-1))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut r = Self::zero(self.n, self.k);
        if s.is_zero() {
            return r;
        }
        for (i, c) in &self.coeffs {
            r.coeffs.insert(i.clone(), c.mul_ref(s));
        }
        r
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AltForm<T> {
        let mut r = AltForm::zero(self.n, self.k);
        for (i, c) in &self.coeffs {
            r.add_term(i, &f(c));
        }
        r
    }

    pub fn wedge(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut r = Self::zero(self.n, self.k + o.k);
        if self.k + o.k > self.n {
            return Ok(r);
        }
        for (i, a) in &self.coeffs {
            for (j, b) in &o.coeffs {
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                r.add_term(&idx, &a.mul_ref(b));
            }
        }
        Ok(r)
    }

    /// `X ⌟ α`. The contraction of a 0-form is the zero 0-form.
    pub fn interior(&self, x: &[S]) -> Result<Self> {
        if x.len() != self.n {
            return Err(Error::DimMismatch { expected: self.n, got: x.len() });
        }
        if self.k == 0 {
            return Ok(Self::zero(self.n, 0));
        }
        let mut r = Self::zero(self.n, self.k - 1);
        for (idx, c) in &self.coeffs {
            for (p, &i) in idx.iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(p);
                let v = c.mul_ref(&x[i]);
                r.add_term(&rest, &signed(&v, if p % 2 == 0 { 1 } else { -1 }));
            }
        }
        Ok(r)
    }

    /// `e_i ⌟ α`.
    pub fn interior_basis(&self, i: usize) -> Self {
        self.interior(&crate::linalg::unit_vec(self.n, i)).expect("index in range")
    }

    /// Skew endomorphism `A` with `g(AX, Y) = α(X, Y)`.
    pub fn to_endo(&self) -> Result<Mat<S>> {
        if self.k != 2 {
            return Err(Error::WrongDegree { expected: 2, got: self.k });
        }
        let mut m = Mat::zeros(self.n, self.n);
        for (idx, c) in &self.coeffs {
            let (i, j) = (idx[0], idx[1]);
            // A e_i = sum_l α(e_i, e_l) e_l
            m[(j, i)] = c.clone();
            m[(i, j)] = c.neg_ref();
        }
        Ok(m)
    }

    /// Inverse of [`AltForm::to_endo`].
    pub fn from_endo(a: &Mat<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimMismatch { expected: a.rows(), got: a.cols() });
        }
        if !a.is_skew() {
            return Err(Error::NotSkew(a.add(&a.transpose()).max_abs()));
        }
        let n = a.rows();
        let mut f = Self::zero(n, 2);
        for i in 0..n {
            for j in i + 1..n {
                f.add_term(&[i, j], &a[(j, i)]);
            }
        }
        Ok(f)
    }

    /// Derivation action `A_*α = Σ A e_i ∧ (e_i ⌟ α)`.
    pub fn derivation(&self, a: &Mat<S>) -> Result<Self> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(Error::DimMismatch { expected: self.n, got: a.rows() });
        }
        let mut r = Self::zero(self.n, self.k);
        for (idx, c) in &self.coeffs {
            for p in 0..idx.len() {
                let i = idx[p];
                for m in 0..self.n {
                    let am = &a[(m, i)];
                    if am.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j[p] = m;
                    r.add_term(&j, &c.mul_ref(am));
                }
            }
        }
        Ok(r)
    }

    /// Hodge star for the orientation `e_1 ∧ ... ∧ e_n`.
    pub fn hodge(&self) -> Self {
        let mut r = Self::zero(self.n, self.n - self.k);
        for (idx, c) in &self.coeffs {
            let comp: Vec<usize> = (0..self.n).filter(|i| !idx.contains(i)).collect();
            let mut full = idx.clone();
            full.extend_from_slice(&comp);
            let s = sort_sign(&mut full).expect("complementary indices");
            r.add_term(&comp, &signed(c, s));
        }
        r
    }

    /// Value on `k` vectors.
    pub fn eval(&self, vs: &[Vec<S>]) -> S {
        assert_eq!(vs.len(), self.k);
        let mut s = S::zero();
        for (idx, c) in &self.coeffs {
            let m = Mat::from_fn(self.k, self.k, |a, b| vs[b][idx[a]].clone());
            s.add_mul(c, &det(&m));
        }
        s
    }

    /// Pullback along the linear map `R^m -> R^n` with image vectors `vs`.
    pub fn pullback(&self, vs: &[Vec<S>]) -> Self {
        let m = vs.len();
        let ones: Vec<AltForm<S>> = (0..self.n)
            .map(|i| {
                let mut f = AltForm::zero(m, 1);
                for (a, v) in vs.iter().enumerate() {
                    f.add_term(&[a], &v[i]);
                }
                f
            })
            .collect();
        let mut r = Self::zero(m, self.k);
        for (idx, c) in &self.coeffs {
            let mut t = AltForm::basis(m, &[]).scale(c);
            for &i in idx {
                t = t.wedge(&ones[i]).expect("same dim");
                if t.is_zero() {
                    break;
                }
            }
            r = r.add(&t);
        }
        r
    }

    /// Pushforward of a form on `R^m` along the map `e_a -> vs[a]` (`vs`
    /// orthonormal for the result to be the usual extension by zero).
    pub fn pushforward(&self, n: usize, vs: &[Vec<S>]) -> Self {
        assert_eq!(vs.len(), self.n);
        let ones: Vec<AltForm<S>> = vs.iter().map(|v| AltForm::one_form(v)).collect();
        let mut r = AltForm::zero(n, self.k);
        for (idx, c) in &self.coeffs {
            let mut t = AltForm::basis(n, &[]).scale(c);
            for &i in idx {
                t = t.wedge(&ones[i]).expect("same dim");
            }
            r = r.add(&t);
        }
        r
    }

    /// Inner product of `Λ^k` with orthonormal `e_I`.
    pub fn dot(&self, o: &Self) -> S {
        let mut s = S::zero();
        for (i, a) in &self.coeffs {
            if let Some(b) = o.coeffs.get(i) {
                s.add_mul(a, b);
            }
        }
        s
    }

    /// Squared norm of the `Λ^k` inner product.
    pub fn norm2(&self) -> S {
        self.dot(self)
    }

    /// `Σ_i |e_i ⌟ α|²`, i.e. `k` times [`AltForm::norm2`]. On 2-forms this
    /// is `Σ_i |α(e_i)|²`; on 3-forms it is `Σ_{i<j} |τ_{e_i} e_j|²`.
    pub fn norm2_contracted(&self) -> S {
        self.norm2().mul_ref(&S::from_i64(self.k as i64))
    }

    /// Restriction of a form whose support lies in `keep` coordinates.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.coeffs.keys().flatten().copied().collect();
        s.sort();
        s.dedup();
        s
    }

    /// Endomorphism `τ_X = X ⌟ τ` of a 3-form.
    pub fn tau_x(&self, x: &[S]) -> Result<Mat<S>> {
        if self.k != 3 {
            return Err(Error::WrongDegree { expected: 3, got: self.k });
        }
        self.interior(x)?.to_endo()
    }

    /// `τ_{e_i}` for all `i`.
    pub fn tau_endos(&self) -> Result<Vec<Mat<S>>> {
        if self.k != 3 {
            return Err(Error::WrongDegree { expected: 3, got: self.k });
        }
        (0..self.n).map(|i| self.interior_basis(i).to_endo()).collect()
    }

    pub fn to_f64(&self) -> AltForm<f64> {
        self.map(|c| c.to_f64())
    }

    /// JSON in the `{"dim","degree","mode","entries"}` format.
    pub fn to_json(&self) -> Result<Value> {
        let mut entries = Vec::new();
        for (idx, c) in &self.coeffs {
            let one_based: Vec<usize> = idx.iter().map(|i| i + 1).collect();
            entries.push(match S::MODE {
                Mode::Exact => {
                    let q = c.to_q().ok_or_else(|| Error::Parse("irrational coefficient has no JSON form".into()))?;
                    json!({"idx": one_based, "num": bigint_json(q.numer()), "den": bigint_json(q.denom())})
                }
                Mode::Float => json!({"idx": one_based, "val": c.to_f64()}),
            });
        }
        Ok(json!({"dim": self.n, "degree": self.k, "mode": S::MODE, "entries": entries}))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = field_usize(v, "dim")?;
        let k = field_usize(v, "degree")?;
        if n == 0 {
            return Err(Error::Parse("field 'dim': must be >= 1".into()));
        }
        let mode = v.get("mode").and_then(|m| m.as_str()).ok_or_else(|| Error::Parse("field 'mode': missing".into()))?;
        let want = S::MODE.to_string();
        if mode != want {
            return Err(Error::ModeMismatch);
        }
        let entries = v
            .get("entries")
            .and_then(|e| e.as_array())
            .ok_or_else(|| Error::Parse("field 'entries': expected array".into()))?;
        let mut f = Self::zero(n, k);
        for (pos, e) in entries.iter().enumerate() {
            let idx = e
                .get("idx")
                .and_then(|i| i.as_array())
                .ok_or_else(|| Error::Parse(format!("entries[{pos}].idx: expected array")))?;
            let idx: Vec<usize> = idx
                .iter()
                .map(|x| x.as_u64().map(|u| u as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Parse(format!("entries[{pos}].idx: expected integers")))?;
            if idx.len() != k {
                return Err(Error::Parse(format!("entries[{pos}].idx: length {} != degree {k}", idx.len())));
            }
            if idx.iter().any(|&i| i == 0 || i > n) || idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse(format!("entries[{pos}].idx: must be strictly increasing in 1..={n}")));
            }
            let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
            let c = match S::MODE {
                Mode::Exact => S::from_q(&parse_ratio(e, pos)?),
                Mode::Float => {
                    let x = e
                        .get("val")
                        .and_then(|x| x.as_f64())
                        .ok_or_else(|| Error::Parse(format!("entries[{pos}].val: expected number")))?;
                    S::from_q(&Q::from_float(x).ok_or_else(|| Error::Parse(format!("entries[{pos}].val: not finite")))?)
                }
            };
            f.add_term(&zero_based, &c);
        }
        Ok(f)
    }
}

pub(crate) fn bigint_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(i) => json!(i),
        None => json!(b.to_string()),
    }
}

pub(crate) fn json_bigint(v: &Value) -> Option<BigInt> {
    if let Some(i) = v.as_i64() {
        return Some(BigInt::from(i));
    }
    v.as_str().and_then(|s| s.parse().ok())
}

pub(crate) fn parse_ratio(e: &Value, pos: usize) -> Result<Q> {
    let num = e
        .get("num")
        .and_then(json_bigint)
        .ok_or_else(|| Error::Parse(format!("entries[{pos}].num: expected integer")))?;
    let den = match e.get("den") {
        None => BigInt::from(1),
        Some(d) => json_bigint(d).ok_or_else(|| Error::Parse(format!("entries[{pos}].den: expected integer")))?,
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("entries[{pos}].den: zero denominator")));
    }
    Ok(Q::new(num, den))
}

fn field_usize(v: &Value, name: &str) -> Result<usize> {
    v.get(name)
        .and_then(|x| x.as_u64())
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("field '{name}': expected non-negative integer")))
}

/// Determinant by fraction-free elimination with pivoting.
pub fn det<S: Scalar>(m: &Mat<S>) -> S {
    let n = m.rows();
    let mut a = m.clone();
    let mut d = S::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else { return S::zero() };
        if p != c {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = t;
            }
            d = d.neg_ref();
        }
        let piv = a[(c, c)].clone();
        d = d.mul_ref(&piv);
        let inv = piv.inv();
        for r in c + 1..n {
            if a[(r, c)].is_zero() {
                continue;
            }
            let f = a[(r, c)].mul_ref(&inv);
            for j in c..n {
                let v = a[(c, j)].clone();
                a[(r, j)].sub_mul(&f, &v);
            }
        }
    }
    d
}

/// Endomorphism of `X ∧ Y`: `Z ↦ g(X,Z)Y − g(Y,Z)X`.
pub fn wedge_endo<S: Scalar>(x: &[S], y: &[S]) -> Mat<S> {
    let n = x.len();
    Mat::from_fn(n, n, |i, j| y[i].mul_ref(&x[j]).sub_ref(&x[i].mul_ref(&y[j])))
}

/// `X ⊙ Y`: `Z ↦ g(X,Z)Y + g(Y,Z)X`.
pub fn sym_endo<S: Scalar>(x: &[S], y: &[S]) -> Mat<S> {
    let n = x.len();
    Mat::from_fn(n, n, |i, j| y[i].mul_ref(&x[j]).add_ref(&x[i].mul_ref(&y[j])))
}

/// Index of the pair `i < j` in the lexicographic basis of `Λ²R^n`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

/// Operator on `Λ²R^n`, stored as `M[(kl),(ij)] = R(e_i,e_j,e_k,e_l)` with
/// `R(X,Y,Z,W) = g(R(X,Y)Z, W)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvOperator<S> {
    n: usize,
    m: Mat<S>,
}

impl<S: Scalar> CurvOperator<S> {
    pub fn zero(n: usize) -> Self {
        let d = n * (n.saturating_sub(1)) / 2;
        CurvOperator { n, m: Mat::zeros(d, d) }
    }

    pub fn identity(n: usize) -> Self {
        let d = n * (n.saturating_sub(1)) / 2;
        CurvOperator { n, m: Mat::identity(d) }
    }

    pub fn from_matrix(n: usize, m: Mat<S>) -> Self {
        let d = n * (n.saturating_sub(1)) / 2;
        assert_eq!((m.rows(), m.cols()), (d, d));
        CurvOperator { n, m }
    }

    /// From a 4-index function `R(i,j,k,l)` sampled on increasing pairs.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize, usize) -> S) -> Self {
        let ps = pairs(n);
        let m = Mat::from_fn(ps.len(), ps.len(), |r, c| {
            let (k, l) = ps[r];
            let (i, j) = ps[c];
            f(i, j, k, l)
        });
        CurvOperator { n, m }
    }

    /// From skew endomorphisms `R(e_i, e_j)` for `i < j` (pair order).
    pub fn from_endos(n: usize, rs: &[Mat<S>]) -> Self {
        let ps = pairs(n);
        assert_eq!(rs.len(), ps.len());
        let m = Mat::from_fn(ps.len(), ps.len(), |r, c| {
            let (k, l) = ps[r];
            rs[c][(l, k)].clone()
        });
        CurvOperator { n, m }
    }

    /// Embeds a 4-form `ω` as `R(X,Y,Z,W) = ω(X,Y,Z,W)`.
    pub fn from_four_form(w: &AltForm<S>) -> Result<Self> {
        if w.degree() != 4 {
            return Err(Error::WrongDegree { expected: 4, got: w.degree() });
        }
        Ok(Self::from_fn(w.dim(), |i, j, k, l| w.get(&[i, j, k, l])))
    }

    /// Symmetric product `α ⊙ β = ½(α⊗β + β⊗α)` of 2-forms.
    pub fn sym_product(a: &AltForm<S>, b: &AltForm<S>) -> Self {
        let half = S::from_ratio(1, 2);
        Self::from_fn(a.dim(), |i, j, k, l| {
            a.get(&[i, j]).mul_ref(&b.get(&[k, l])).add_ref(&b.get(&[i, j]).mul_ref(&a.get(&[k, l]))).mul_ref(&half)
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn matrix(&self) -> &Mat<S> {
        &self.m
    }

    /// `R(e_i, e_j, e_k, e_l)` for arbitrary indices.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> S {
        if i == j || k == l {
            return S::zero();
        }
        let (c, s1) = if i < j { (pair_index(self.n, i, j), 1) } else { (pair_index(self.n, j, i), -1) };
        let (r, s2) = if k < l { (pair_index(self.n, k, l), 1) } else { (pair_index(self.n, l, k), -1) };
        signed(&self.m[(r, c)], s1 * s2)
    }

    /// `R(e_i, e_j)` as an endomorphism.
    pub fn endo(&self, i: usize, j: usize) -> Mat<S> {
        Mat::from_fn(self.n, self.n, |l, k| self.get(i, j, k, l))
    }

    /// `R(X, Y)` as an endomorphism.
    pub fn endo_xy(&self, x: &[S], y: &[S]) -> Mat<S> {
        let mut out = Mat::zeros(self.n, self.n);
        for (i, j) in pairs(self.n) {
            let c = x[i].mul_ref(&y[j]).sub_ref(&x[j].mul_ref(&y[i]));
            if !c.is_zero() {
                out.axpy(&c, &self.endo(i, j));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.m.is_symmetric()
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.m.sub(&self.m.transpose()).max_abs()
    }

    pub fn add(&self, o: &Self) -> Self {
        CurvOperator { n: self.n, m: self.m.add(&o.m) }
    }
    pub fn sub(&self, o: &Self) -> Self {
        CurvOperator { n: self.n, m: self.m.sub(&o.m) }
    }
    pub fn scale(&self, s: &S) -> Self {
        CurvOperator { n: self.n, m: self.m.scale(s) }
    }
    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }
    pub fn max_abs(&self) -> f64 {
        self.m.max_abs()
    }

    /// `Ric = Σ_{i<j} (e_i ∧ e_j) ∘ R(e_i, e_j)`.
    pub fn ricci(&self) -> Mat<S> {
        let n = self.n;
        let mut out = Mat::zeros(n, n);
        for (i, j) in pairs(n) {
            let e = wedge_endo(&crate::linalg::unit_vec::<S>(n, i), &crate::linalg::unit_vec(n, j));
            out = out.add(&e.mul(&self.endo(i, j)));
        }
        out
    }

    pub fn scal(&self) -> S {
        self.ricci().trace()
    }

    pub fn to_f64(&self) -> CurvOperator<f64> {
        CurvOperator { n: self.n, m: self.m.to_f64() }
    }

    /// Flattened entries, for stacking operators into linear systems.
    pub fn flat(&self) -> Vec<S> {
        self.m.flatten()
    }
}

/// `τ²(X,Y) = (Z ↦ τ_Z τ_X Y)`, i.e. `τ²(X,Y,Z,W) = −g(τ_X Y, τ_Z W)`.
pub fn tau_squared<S: Scalar>(tau: &AltForm<S>) -> Result<CurvOperator<S>> {
    if tau.degree() != 3 {
        return Err(Error::WrongDegree { expected: 3, got: tau.degree() });
    }
    let n = tau.dim();
    Ok(CurvOperator::from_fn(n, |i, j, k, l| {
        let mut s = S::zero();
        for m in 0..n {
            s.sub_mul(&tau.get(&[i, j, m]), &tau.get(&[k, l, m]));
        }
        s
    }))
}

/// Bianchi map: cyclic sum over the first three arguments.
pub fn bianchi<S: Scalar>(r: &CurvOperator<S>) -> AltForm<S> {
    let n = r.dim();
    let mut out = AltForm::zero(n, 4);
    for idx in multi_indices(n, 4) {
        let (x, y, z, w) = (idx[0], idx[1], idx[2], idx[3]);
        let v = r.get(x, y, z, w).add_ref(&r.get(y, z, x, w)).add_ref(&r.get(z, x, y, w));
        out.add_term(&idx, &v);
    }
    out
}

/// Residual of a vector family, for reports.
pub fn vec_residual<S: Scalar>(v: &[S]) -> f64 {
    max_abs(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vec;
    use crate::scalar::{qi, Q};

    fn e(n: usize, idx: &[usize]) -> AltForm<Q> {
        AltForm::basis(n, idx)
    }

    #[test]
    fn wedge_basics() {
        assert_eq!(e(3, &[0, 1]).wedge(&e(3, &[2])).unwrap(), e(3, &[0, 1, 2]));
        let w = e(4, &[0, 1]).add(&e(4, &[2, 3]));
        assert_eq!(w.wedge(&w).unwrap(), e(4, &[0, 1, 2, 3]).scale(&qi(2)));
        assert!(e(3, &[0, 1]).wedge(&e(3, &[1, 2])).unwrap().is_zero());
        assert_eq!(e(3, &[1]).wedge(&e(3, &[0])).unwrap(), e(3, &[0, 1]).neg());
    }

    #[test]
    fn interior_basics() {
        let v = AltForm::<Q>::vol(3);
        assert_eq!(v.interior(&unit_vec(3, 0)).unwrap(), e(3, &[1, 2]));
        assert_eq!(v.interior(&unit_vec(3, 1)).unwrap(), e(3, &[0, 2]).neg());
        assert!(v.interior(&[qi(0), qi(0), qi(0)]).unwrap().is_zero());
        let x = vec![qi(1), qi(2), qi(3)];
        assert!(v.interior(&x).unwrap().interior(&x).unwrap().is_zero());
        assert_eq!(e(3, &[]).interior(&x).unwrap().degree(), 0);
    }

    #[test]
    fn endo_dictionary() {
        let a = e(3, &[0, 1]).to_endo().unwrap();
        assert_eq!(a.mul_vec(&unit_vec(3, 0)), unit_vec(3, 1));
        assert_eq!(a.mul_vec(&unit_vec(3, 1)), vec![qi(-1), qi(0), qi(0)]);
        assert_eq!(a, wedge_endo(&unit_vec(3, 0), &unit_vec(3, 1)));
        assert_eq!(AltForm::from_endo(&a).unwrap(), e(3, &[0, 1]));
        assert!(AltForm::<Q>::zero(3, 2).to_endo().unwrap().is_zero());
        assert!(matches!(e(3, &[0]).to_endo(), Err(Error::WrongDegree { .. })));
        assert!(AltForm::from_endo(&Mat::<Q>::identity(2)).is_err());
    }

    #[test]
    fn derivation_examples() {
        let a = e(3, &[0, 1]).to_endo().unwrap();
        let r = e(3, &[1, 2]).derivation(&a).unwrap();
        // e3 ∧ e1 = −e1 ∧ e3
        assert_eq!(r, e(3, &[2, 0]));
        let b = e(3, &[1, 2]).to_endo().unwrap();
        assert_eq!(r.to_endo().unwrap(), a.commutator(&b));
        assert!(AltForm::<Q>::vol(3).derivation(&a).unwrap().is_zero());
        assert!(e(3, &[1, 2]).derivation(&Mat::zeros(3, 3)).unwrap().is_zero());
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(e(3, &[0]).hodge(), e(3, &[1, 2]));
        assert_eq!(e(3, &[1]).hodge(), e(3, &[0, 2]).neg());
        for n in 1..=7 {
            for k in 0..=n {
                for idx in multi_indices(n, k) {
                    let a = e(n, &idx);
                    let s = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(a.hodge().hodge(), a.scale(&qi(s)));
                }
            }
        }
    }

    #[test]
    fn tau_squared_of_volume() {
        let t = qi(3);
        let tau = AltForm::<Q>::vol(3).scale(&t);
        let t2 = tau_squared(&tau).unwrap();
        assert!(t2.is_symmetric());
        // τ_X τ_Y Z = −t²(Y∧Z)X, i.e. τ²(Y,Z) = −t² Y∧Z
        for (i, j) in pairs(3) {
            for k in 0..3 {
                let lhs = t2.endo(i, j).mul_vec(&unit_vec(3, k));
                let tx = tau.tau_x(&unit_vec(3, k)).unwrap();
                let ty = tau.tau_x(&unit_vec(3, i)).unwrap();
                assert_eq!(lhs, tx.mul_vec(&ty.mul_vec(&unit_vec(3, j))));
                let rhs = wedge_endo(&unit_vec::<Q>(3, i), &unit_vec(3, j)).mul_vec(&unit_vec(3, k));
                assert_eq!(lhs, rhs.iter().map(|x| -(x * &t * &t)).collect::<Vec<_>>());
            }
        }
        assert_eq!(t2, CurvOperator::identity(3).scale(&-(&t * &t)));
        assert!(tau_squared(&AltForm::<Q>::zero(4, 3)).unwrap().is_zero());
    }

    #[test]
    fn bianchi_examples() {
        let r = CurvOperator::<Q>::identity(3);
        assert!(bianchi(&r).is_zero());
        assert!(bianchi(&CurvOperator::<Q>::identity(5)).is_zero());
        let w = e(4, &[0, 1]).add(&e(4, &[2, 3]));
        let b = bianchi(&CurvOperator::sym_product(&w, &w));
        // cyclic sum at (1,2,3,4): ω12 ω34 + ω23 ω14 + ω31 ω24 = 1
        assert_eq!(b, e(4, &[0, 1, 2, 3]));
        let f = e(5, &[0, 1, 3, 4]).add(&e(5, &[1, 2, 3, 4]).scale(&qi(2)));
        assert_eq!(bianchi(&CurvOperator::from_four_form(&f).unwrap()), f.scale(&qi(3)));
    }

    #[test]
    fn sphere_curvature_normalization() {
        let n = 4;
        let r = CurvOperator::<Q>::identity(n).scale(&qi(-1));
        assert_eq!(r.ricci(), Mat::identity(n).scale(&qi(3)));
        assert_eq!(r.scal(), qi(12));
    }

    #[test]
    fn json_round_trip() {
        let f = e(5, &[0, 2, 4]).scale(&crate::scalar::q(-7, 3)).add(&e(5, &[1, 2, 3]));
        let j = f.to_json().unwrap();
        assert_eq!(j["entries"][0]["idx"], json!([1, 3, 5]));
        assert_eq!(AltForm::<Q>::from_json(&j).unwrap(), f);
        assert!(matches!(AltForm::<f64>::from_json(&j), Err(Error::ModeMismatch)));
        let bad = json!({"dim": 3, "degree": 2, "mode": "exact", "entries": [{"idx": [2, 1], "num": 1, "den": 1}]});
        assert!(AltForm::<Q>::from_json(&bad).is_err());
    }

    #[test]
    fn pullback_and_pushforward() {
        let phi = AltForm::<Q>::vol(3);
        let vs = vec![unit_vec(3, 1), unit_vec(3, 0), unit_vec(3, 2)];
        assert_eq!(phi.pullback(&vs), AltForm::vol(3).neg());
        let small = e(2, &[0, 1]);
        let big = small.pushforward(4, &[unit_vec(4, 2), unit_vec(4, 3)]);
        assert_eq!(big, e(4, &[2, 3]));
        assert_eq!(big.pullback(&[unit_vec(4, 2), unit_vec(4, 3)]), small);
    }
}
