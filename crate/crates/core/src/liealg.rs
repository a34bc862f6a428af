//! Lie subalgebras of `so(n)` and abstract structure-constant algebras:
//! closure, stabilizers, commutants, decomposition into irreducibles,
//! Casimir operators, Killing forms, ideals and curvature spaces `K(h)`.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{bianchi, multi_indices, pairs, AltForm, CurvOperator};
use crate::linalg::{
    exact_eigenspaces, gram_schmidt, inverse, nullspace, nullspace_rows, projector, span_basis, vec_is_zero,
    Echelon, Mat,
};
use crate::scalar::{Mode, Scalar, Q};

/// Upper-triangular coordinates `A[i][j]`, `i < j`, of a skew matrix.
pub fn skew_coords<S: Scalar>(a: &Mat<S>) -> Vec<S> {
    pairs(a.rows()).into_iter().map(|(i, j)| a[(i, j)].clone()).collect()
}

pub fn skew_from_coords<S: Scalar>(n: usize, v: &[S]) -> Mat<S> {
    let mut m = Mat::zeros(n, n);
    for ((i, j), c) in pairs(n).into_iter().zip(v) {
        m[(i, j)] = c.clone();
        m[(j, i)] = c.neg_ref();
    }
    m
}

/// The endomorphism of `e_i ∧ e_j`.
pub fn so_basis_elem<S: Scalar>(n: usize, i: usize, j: usize) -> Mat<S> {
    let mut m = Mat::zeros(n, n);
    m[(j, i)] = S::one();
    m[(i, j)] = S::from_i64(-1);
    m
}

/// Standard basis `{e_i ∧ e_j}` of `so(n)`.
pub fn so_basis<S: Scalar>(n: usize) -> Vec<Mat<S>> {
    pairs(n).into_iter().map(|(i, j)| so_basis_elem(n, i, j)).collect()
}

fn check_skew<S: Scalar>(n: usize, a: &Mat<S>) -> Result<()> {
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimMismatch { expected: n, got: a.rows() });
    }
    if !a.is_skew() {
        return Err(Error::NotSkew(a.add(&a.transpose()).max_abs()));
    }
    Ok(())
}

/// Abstract Lie algebra by structure constants: `[b_i, b_j] = Σ_k c[i][j][k] b_k`.
#[derive(Clone, Debug)]
pub struct StructureConstants<S> {
    dim: usize,
    c: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> StructureConstants<S> {
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Vec<S>) -> Self {
        let mut c = vec![vec![vec![S::zero(); dim]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                c[i][j] = f(i, j);
            }
        }
        StructureConstants { dim, c }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &[S] {
        &self.c[i][j]
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let f = x[i].mul_ref(&y[j]);
                for (o, c) in out.iter_mut().zip(&self.c[i][j]) {
                    o.add_mul(&f, c);
                }
            }
        }
        out
    }

    /// Matrix of `ad(b_i)` (columns are images of basis vectors).
    pub fn ad(&self, i: usize) -> Mat<S> {
        Mat::from_fn(self.dim, self.dim, |k, j| self.c[i][j][k].clone())
    }

    pub fn ad_vec(&self, x: &[S]) -> Mat<S> {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m.axpy(xi, &self.ad(i));
            }
        }
        m
    }

    /// Max residual of antisymmetry and the Jacobi identity.
    pub fn jacobi_residual(&self) -> Residual {
        let d = self.dim;
        let mut r = Residual::zero();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    r.absorb(&self.c[i][j][k].add_ref(&self.c[j][i][k]));
                }
            }
        }
        let e = |i: usize| crate::linalg::unit_vec::<S>(d, i);
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let a = self.bracket(&e(i), &self.bracket(&e(j), &e(k)));
                    let b = self.bracket(&e(j), &self.bracket(&e(k), &e(i)));
                    let c = self.bracket(&e(k), &self.bracket(&e(i), &e(j)));
                    for t in 0..d {
                        r.absorb(&a[t].add_ref(&b[t]).add_ref(&c[t]));
                    }
                }
            }
        }
        r
    }

    /// Killing form `B(X,Y) = tr(ad X ad Y)`.
    pub fn killing(&self) -> KillingReport<S> {
        let ads: Vec<Mat<S>> = (0..self.dim).map(|i| self.ad(i)).collect();
        let gram = Mat::from_fn(self.dim, self.dim, |i, j| ads[i].mul(&ads[j]).trace());
        KillingReport::from_gram(gram)
    }

    /// Restriction to a subspace with given basis (must be a subalgebra).
    pub fn restrict(&self, basis: &[Vec<S>]) -> Option<StructureConstants<S>> {
        let m = Mat::from_cols(self.dim, basis);
        let mut cols = Vec::new();
        for a in basis {
            for b in basis {
                let br = self.bracket(a, b);
                cols.push(crate::linalg::solve(&m, &br)?);
            }
        }
        let k = basis.len();
        Some(StructureConstants::from_fn(k, |i, j| cols[i * k + j].clone()))
    }

    /// Commutant of the adjoint representation (the centroid).
    pub fn centroid(&self) -> Vec<Mat<S>> {
        let ads: Vec<Mat<S>> = (0..self.dim).map(|i| self.ad(i)).collect();
        full_commutant(self.dim, &ads)
    }

    /// Ideals `I_1, ..., I_r` of a semisimple algebra obtained as the joint
    /// eigenspaces of its centroid, each returned by a basis. Returns `None`
    /// if the centroid cannot be diagonalized over the scalar field.
    pub fn simple_ideals(&self) -> Option<Vec<Vec<Vec<S>>>> {
        let cent = self.centroid();
        let mut blocks: Vec<Vec<Vec<S>>> = vec![(0..self.dim).map(|i| crate::linalg::unit_vec(self.dim, i)).collect()];
        for c in &cent {
            let spaces = exact_eigenspaces(c).ok()?;
            let mut next = Vec::new();
            for b in &blocks {
                let mut covered = 0;
                for (_, sp) in &spaces {
                    let inter = intersect(self.dim, b, sp);
                    covered += inter.len();
                    if !inter.is_empty() {
                        next.push(inter);
                    }
                }
                if covered != b.len() {
                    return None;
                }
            }
            blocks = next;
        }
        Some(blocks)
    }

    /// Simplicity: nondegenerate Killing form and centroid of dimension 1
    /// together with an irreducible adjoint action (no proper ideal found).
    pub fn is_simple(&self) -> bool {
        if self.dim == 0 {
            return false;
        }
        let k = self.killing();
        if k.signature.1 != 0 {
            return false;
        }
        self.centroid().len() == 1 && self.simple_ideals().is_some_and(|v| v.len() == 1)
    }
}

fn intersect<S: Scalar>(n: usize, a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    // x = A u = B v  <=>  [A | -B] (u, v) = 0
    let ka = a.len();
    let cols: Vec<Vec<S>> = a.iter().cloned().chain(b.iter().map(|v| v.iter().map(|x| x.neg_ref()).collect())).collect();
    let m = Mat::from_cols(n, &cols);
    let ns = nullspace(&m);
    let vs: Vec<Vec<S>> = ns
        .iter()
        .map(|w| {
            let mut x = vec![S::zero(); n];
            for (c, v) in w[..ka].iter().zip(a) {
                for (xi, vi) in x.iter_mut().zip(v) {
                    xi.add_mul(c, vi);
                }
            }
            x
        })
        .collect();
    span_basis(n, &vs)
}

/// Largest absolute entry of a residual and whether it is exactly zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub max_abs: f64,
    pub exact_zero: bool,
}

impl Residual {
    pub fn zero() -> Self {
        Residual { max_abs: 0.0, exact_zero: true }
    }
    pub fn of<S: Scalar>(xs: impl IntoIterator<Item = S>) -> Self {
        let mut r = Self::zero();
        for x in xs {
            r.absorb(&x);
        }
        r
    }
    pub fn of_mat<S: Scalar>(m: &Mat<S>) -> Self {
        Self::of(m.data().iter().cloned())
    }
    pub fn absorb<S: Scalar>(&mut self, x: &S) {
        let a = x.abs_f64();
        if a > self.max_abs {
            self.max_abs = a;
        }
        if S::MODE == Mode::Exact {
            if !x.is_zero() {
                self.exact_zero = false;
            }
        } else if a != 0.0 {
            self.exact_zero = false;
        }
    }
    pub fn merge(self, o: Residual) -> Residual {
        Residual { max_abs: self.max_abs.max(o.max_abs), exact_zero: self.exact_zero && o.exact_zero }
    }
    /// Pass rule: exact zero in exact mode, `<= tol` in float mode.
    pub fn passes(&self, mode: Mode, tol: f64) -> bool {
        match mode {
            Mode::Exact => self.exact_zero,
            Mode::Float => self.max_abs <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct KillingReport<S> {
    pub gram: Mat<S>,
    /// `(n_plus, n_zero, n_minus)`
    pub signature: (usize, usize, usize),
    pub verdict: Definiteness,
}

impl<S: Scalar> KillingReport<S> {
    pub fn from_gram(gram: Mat<S>) -> Self {
        let signature = crate::linalg::signature(&gram);
        let verdict = match signature {
            (_, z, _) if z > 0 => Definiteness::Degenerate,
            (0, 0, _) => Definiteness::NegativeDefinite,
            (_, 0, 0) => Definiteness::PositiveDefinite,
            _ => Definiteness::Indefinite,
        };
        KillingReport { gram, signature, verdict }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "signature": [self.signature.0, self.signature.1, self.signature.2],
            "verdict": self.verdict,
            "gram": mat_json(&self.gram),
        })
    }
}

/// Bracket-closed span of skew endomorphisms of `R^n`, stored with a reduced
/// echelon basis over the upper-triangular coordinates.
#[derive(Clone, Debug)]
pub struct LieSubalgebra<S> {
    n: usize,
    basis: Vec<Mat<S>>,
    pivots: Vec<usize>,
    consts: StructureConstants<S>,
}

impl<S: Scalar> LieSubalgebra<S> {
    /// Span of `elems`; fails unless the span is bracket-closed.
    pub fn new(n: usize, elems: &[Mat<S>]) -> Result<Self> {
        for a in elems {
            check_skew(n, a)?;
        }
        let mut ech = Echelon::new(n * (n.saturating_sub(1)) / 2);
        for a in elems {
            ech.push(&skew_coords(a));
        }
        let (rows, piv) = ech.rref();
        let basis: Vec<Mat<S>> = rows.iter().map(|r| skew_from_coords(n, r)).collect();
        let pivots = piv.to_vec();
        let d = basis.len();
        let mut c = vec![vec![vec![S::zero(); d]; d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let br = basis[i].commutator(&basis[j]);
                let co: Vec<S> = pivots.iter().map(|&p| skew_coords(&br)[p].clone()).collect();
                let mut recon = Mat::zeros(n, n);
                for (ck, bk) in co.iter().zip(&basis) {
                    recon.axpy(ck, bk);
                }
                let res = recon.sub(&br);
                if !res.is_zero() {
                    return Err(Error::Model(format!("span is not bracket-closed (residual {})", res.max_abs())));
                }
                c[j][i] = co.iter().map(|x| x.neg_ref()).collect();
                c[i][j] = co;
            }
        }
        Ok(LieSubalgebra { n, basis, pivots, consts: StructureConstants { dim: d, c } })
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, &[]).expect("zero algebra")
    }

    pub fn so(n: usize) -> Self {
        Self::new(n, &so_basis(n)).expect("so(n) is closed")
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Mat<S>] {
        &self.basis
    }
    pub fn structure_constants(&self) -> &StructureConstants<S> {
        &self.consts
    }

    /// Coordinates in the stored basis, if `a` lies in the algebra.
    pub fn coords(&self, a: &Mat<S>) -> Option<Vec<S>> {
        if a.rows() != self.n || !a.is_skew() {
            return None;
        }
        let sc = skew_coords(a);
        let co: Vec<S> = self.pivots.iter().map(|&p| sc[p].clone()).collect();
        let mut recon = Mat::zeros(self.n, self.n);
        for (c, b) in co.iter().zip(&self.basis) {
            recon.axpy(c, b);
        }
        if recon.sub(a).is_zero() {
            Some(co)
        } else {
            None
        }
    }

    pub fn contains(&self, a: &Mat<S>) -> bool {
        self.coords(a).is_some()
    }

    pub fn is_subalgebra_of(&self, o: &LieSubalgebra<S>) -> bool {
        self.basis.iter().all(|b| o.contains(b))
    }

    pub fn same_as(&self, o: &LieSubalgebra<S>) -> bool {
        self.dim() == o.dim() && self.is_subalgebra_of(o)
    }

    /// Residual of `[b_i, b_j] - Σ c_ij^k b_k`.
    pub fn closure_residual(&self) -> Residual {
        let mut r = Residual::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let mut m = self.basis[i].commutator(&self.basis[j]);
                for (c, b) in self.consts.c[i][j].iter().zip(&self.basis) {
                    m.axpy(&c.neg_ref(), b);
                }
                r = r.merge(Residual::of_mat(&m));
            }
        }
        r
    }

    pub fn killing(&self) -> KillingReport<S> {
        self.consts.killing()
    }

    /// Matrices of the action on the subspace spanned by the columns `vs`
    /// (which must be invariant): `ρ(A) = (BᵀB)⁻¹ Bᵀ A B`.
    pub fn restrict_action(&self, vs: &[Vec<S>]) -> Vec<Mat<S>> {
        restrict(&self.basis, self.n, vs)
    }

    pub fn to_json(&self) -> Value {
        json!({"dim": self.n, "basis": self.basis.iter().map(mat_json).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v.get("dim").and_then(|x| x.as_u64()).ok_or_else(|| Error::Parse("field 'dim': expected integer".into()))?
            as usize;
        let basis = v.get("basis").and_then(|b| b.as_array()).ok_or_else(|| Error::Parse("field 'basis': expected array".into()))?;
        let mut mats = Vec::new();
        for (pos, b) in basis.iter().enumerate() {
            mats.push(mat_from_json::<S>(b, n, &format!("basis[{pos}]"))?);
        }
        for (pos, m) in mats.iter().enumerate() {
            if !m.is_skew() {
                return Err(Error::Parse(format!("basis[{pos}]: matrix is not skew-symmetric")));
            }
        }
        span_close(n, &mats)
    }
}

pub(crate) fn scalar_json<S: Scalar>(x: &S) -> Value {
    match (S::MODE, x.to_q()) {
        (Mode::Exact, Some(q)) => {
            if q.is_integer() {
                crate::exterior::bigint_json(q.numer())
            } else {
                json!(format!("{}/{}", q.numer(), q.denom()))
            }
        }
        (Mode::Exact, None) => json!(x.to_string()),
        (Mode::Float, _) => json!(x.to_f64()),
    }
}

pub(crate) fn scalar_from_json<S: Scalar>(v: &Value, at: &str) -> Result<S> {
    if let Some(i) = v.as_i64() {
        return Ok(S::from_i64(i));
    }
    if let Some(s) = v.as_str() {
        let q: Q = s.trim().parse().map_err(|_| Error::Parse(format!("{at}: cannot parse rational '{s}'")))?;
        return Ok(S::from_q(&q));
    }
    if v.is_object() {
        return Ok(S::from_q(&crate::exterior::parse_ratio(v, 0).map_err(|_| Error::Parse(format!("{at}: bad num/den")))?));
    }
    if let Some(f) = v.as_f64() {
        if S::MODE == Mode::Exact {
            return Err(Error::Parse(format!("{at}: float entry in exact mode")));
        }
        return Ok(S::from_q(&Q::from_float(f).ok_or_else(|| Error::Parse(format!("{at}: not finite")))?));
    }
    Err(Error::Parse(format!("{at}: expected number")))
}

pub(crate) fn mat_json<S: Scalar>(m: &Mat<S>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_json).collect())).collect())
}

pub(crate) fn mat_from_json<S: Scalar>(v: &Value, n: usize, at: &str) -> Result<Mat<S>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse(format!("{at}: expected array of rows")))?;
    // accept nested rows or one flat row-major list
    let flat: Vec<&Value> = if rows.iter().all(|r| r.is_array()) {
        if rows.len() != n {
            return Err(Error::Parse(format!("{at}: expected {n} rows, got {}", rows.len())));
        }
        let mut f = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_array().unwrap();
            if r.len() != n {
                return Err(Error::Parse(format!("{at}[{i}]: expected {n} entries, got {}", r.len())));
            }
            f.extend(r.iter());
        }
        f
    } else {
        if rows.len() != n * n {
            return Err(Error::Parse(format!("{at}: expected {} entries, got {}", n * n, rows.len())));
        }
        rows.iter().collect()
    };
    let mut data = Vec::with_capacity(n * n);
    for (k, x) in flat.iter().enumerate() {
        data.push(scalar_from_json::<S>(x, &format!("{at}[{}][{}]", k / n, k % n))?);
    }
    Ok(Mat::from_flat(n, n, data))
}

fn restrict<S: Scalar>(ops: &[Mat<S>], n: usize, vs: &[Vec<S>]) -> Vec<Mat<S>> {
    let b = Mat::from_cols(n, vs);
    let bt = b.transpose();
    let ginv = inverse(&bt.mul(&b)).expect("independent basis");
    let left = ginv.mul(&bt);
    ops.iter().map(|a| left.mul(&a.mul(&b))).collect()
}

/// Smallest bracket-closed subspace containing the generators.
pub fn span_close<S: Scalar>(n: usize, gens: &[Mat<S>]) -> Result<LieSubalgebra<S>> {
    for a in gens {
        check_skew(n, a)?;
    }
    let cap = n * (n.saturating_sub(1)) / 2;
    let mut ech = Echelon::new(cap);
    let mut elems: Vec<Mat<S>> = Vec::new();
    let mut queue: Vec<Mat<S>> = Vec::new();
    for g in gens {
        if ech.push(&skew_coords(g)) {
            elems.push(g.clone());
            queue.push(g.clone());
        }
    }
    while let Some(x) = queue.pop() {
        if ech.is_full() {
            break;
        }
        let current = elems.clone();
        for y in &current {
            let br = x.commutator(y);
            if br.is_zero() {
                continue;
            }
            if ech.push(&skew_coords(&br)) {
                elems.push(br.clone());
                queue.push(br);
            }
        }
    }
    LieSubalgebra::new(n, &elems)
}

/// Infinitesimal stabilizer `{A ∈ so(n) : A_*τ = 0}`.
pub fn stabilizer<S: Scalar>(tau: &AltForm<S>) -> LieSubalgebra<S> {
    let n = tau.dim();
    let so = so_basis::<S>(n);
    let images: Vec<AltForm<S>> = so.iter().map(|a| tau.derivation(a).expect("dims agree")).collect();
    let idx = multi_indices(n, tau.degree());
    let rows = idx.iter().map(|i| images.iter().map(|f| f.get(i)).collect::<Vec<S>>());
    let ns = nullspace_rows(so.len(), rows);
    let elems: Vec<Mat<S>> = ns
        .iter()
        .map(|c| {
            let mut m = Mat::zeros(n, n);
            for (ci, b) in c.iter().zip(&so) {
                m.axpy(ci, b);
            }
            m
        })
        .collect();
    LieSubalgebra::new(n, &elems).expect("stabilizers are subalgebras")
}

/// Simultaneous stabilizer of several forms.
pub fn stabilizer_of_all<S: Scalar>(n: usize, forms: &[AltForm<S>]) -> LieSubalgebra<S> {
    let so = so_basis::<S>(n);
    let mut rows: Vec<Vec<S>> = Vec::new();
    for f in forms {
        let images: Vec<AltForm<S>> = so.iter().map(|a| f.derivation(a).expect("dims agree")).collect();
        for i in multi_indices(n, f.degree()) {
            rows.push(images.iter().map(|g| g.get(&i)).collect());
        }
    }
    let ns = nullspace_rows(so.len(), rows);
    let elems: Vec<Mat<S>> = ns
        .iter()
        .map(|c| {
            let mut m = Mat::zeros(n, n);
            for (ci, b) in c.iter().zip(&so) {
                m.axpy(ci, b);
            }
            m
        })
        .collect();
    LieSubalgebra::new(n, &elems).expect("stabilizers are subalgebras")
}

fn sym_basis<S: Scalar>(n: usize) -> Vec<Mat<S>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut m = Mat::zeros(n, n);
            m[(i, j)] = S::one();
            m[(j, i)] = S::one();
            out.push(m);
        }
    }
    out
}

/// Solutions `X = Σ c_a E_a` of `[X, b] = 0` for all `b`.
fn commutant_in<S: Scalar>(n: usize, ops: &[Mat<S>], space: &[Mat<S>]) -> Vec<Mat<S>> {
    let mut rows: Vec<Vec<S>> = Vec::new();
    let comms: Vec<Vec<Mat<S>>> = space.iter().map(|e| ops.iter().map(|b| e.commutator(b)).collect()).collect();
    for (bi, _) in ops.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                rows.push(comms.iter().map(|ce| ce[bi][(r, c)].clone()).collect());
            }
        }
    }
    nullspace_rows(space.len(), rows)
        .iter()
        .map(|c| {
            let mut m = Mat::zeros(n, n);
            for (ci, e) in c.iter().zip(space) {
                m.axpy(ci, e);
            }
            m
        })
        .collect()
}

fn full_commutant<S: Scalar>(n: usize, ops: &[Mat<S>]) -> Vec<Mat<S>> {
    let mut space = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut m = Mat::zeros(n, n);
            m[(i, j)] = S::one();
            space.push(m);
        }
    }
    commutant_in(n, ops, &space)
}

#[derive(Clone, Debug)]
pub struct Commutant<S> {
    pub full_dim: usize,
    pub symmetric: Vec<Mat<S>>,
    pub skew: Vec<Mat<S>>,
}

/// Commutant of a family of skew endomorphisms, split into its symmetric and
/// skew parts (transposition preserves the commutant).
pub fn commutant_of<S: Scalar>(n: usize, ops: &[Mat<S>]) -> Commutant<S> {
    let symmetric = commutant_in(n, ops, &sym_basis(n));
    let skew = commutant_in(n, ops, &so_basis(n));
    Commutant { full_dim: symmetric.len() + skew.len(), symmetric, skew }
}

pub fn commutant<S: Scalar>(g: &LieSubalgebra<S>) -> Commutant<S> {
    commutant_of(g.n(), g.basis())
}

/// Joint kernel of the algebra.
pub fn invariant_vectors<S: Scalar>(g: &LieSubalgebra<S>) -> Vec<Vec<S>> {
    let n = g.n();
    let rows = g.basis().iter().flat_map(|b| (0..n).map(move |i| b.row(i)));
    nullspace_rows(n, rows)
}

/// `−Σ_{i<j} (e_i ∧ e_j)²`.
pub fn casimir_so<S: Scalar>(n: usize) -> Mat<S> {
    let mut out = Mat::zeros(n, n);
    for b in so_basis::<S>(n) {
        out = out.sub(&b.mul(&b));
    }
    out
}

/// Casimir `−Σ g^{ab} ρ(b_a) ρ(b_b)` for the trace form `⟨A,B⟩ = −½ tr(AB)`
/// of `g`, acting through `rho` (one matrix per basis element of `g`).
pub fn casimir<S: Scalar>(g: &LieSubalgebra<S>, rho: &[Mat<S>]) -> Result<Mat<S>> {
    assert_eq!(rho.len(), g.dim());
    let d = g.dim();
    let m = rho.first().map_or(g.n(), |r| r.rows());
    if d == 0 {
        return Ok(Mat::zeros(m, m));
    }
    let half = S::from_ratio(-1, 2);
    let gram = Mat::from_fn(d, d, |a, b| g.basis()[a].mul(&g.basis()[b]).trace().mul_ref(&half));
    let ginv = inverse(&gram).ok_or(Error::DegenerateTraceForm)?;
    let mut out = Mat::zeros(m, m);
    for a in 0..d {
        for b in 0..d {
            if ginv[(a, b)].is_zero() {
                continue;
            }
            out.axpy(&ginv[(a, b)].neg_ref(), &rho[a].mul(&rho[b]));
        }
    }
    Ok(out)
}

/// `K(h) = ker(b : Sym² h → Λ⁴)`, returned with a basis.
pub fn curvature_space<S: Scalar>(h: &LieSubalgebra<S>) -> (usize, Vec<CurvOperator<S>>) {
    let n = h.n();
    let forms: Vec<AltForm<S>> = h.basis().iter().map(|b| AltForm::from_endo(b).expect("skew")).collect();
    let mut gens: Vec<CurvOperator<S>> = Vec::new();
    for a in 0..forms.len() {
        for b in a..forms.len() {
            gens.push(CurvOperator::sym_product(&forms[a], &forms[b]));
        }
    }
    let idx = multi_indices(n, 4);
    let images: Vec<AltForm<S>> = gens.iter().map(bianchi).collect();
    let rows = idx.iter().map(|i| images.iter().map(|f| f.get(i)).collect::<Vec<S>>());
    let ns = nullspace_rows(gens.len(), rows);
    let basis: Vec<CurvOperator<S>> = ns
        .iter()
        .map(|c| {
            let mut r = CurvOperator::zero(n);
            for (ci, g) in c.iter().zip(&gens) {
                if !ci.is_zero() {
                    r = r.add(&g.scale(ci));
                }
            }
            r
        })
        .collect();
    (basis.len(), basis)
}

pub fn curvature_space_dim<S: Scalar>(h: &LieSubalgebra<S>) -> usize {
    curvature_space(h).0
}

/// One summand of a [`RepDecomposition`].
#[derive(Clone, Debug)]
pub struct Summand<S> {
    /// Orthogonal basis (orthonormal in float mode).
    pub basis: Vec<Vec<S>>,
    pub projector: Mat<S>,
    pub invariant: bool,
    pub irreducible: bool,
    /// Isotypic class index.
    pub class: usize,
    /// Dimension of the full commutant of the restricted action.
    pub commutant_dim: usize,
}

impl<S: Scalar> Summand<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug)]
pub struct RepDecomposition<S> {
    pub n: usize,
    pub summands: Vec<Summand<S>>,
    /// Projectors onto the isotypic components, indexed by class.
    pub isotypic: Vec<Mat<S>>,
}

impl<S: Scalar> RepDecomposition<S> {
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.summands.iter().map(|s| s.dim()).collect();
        d.sort();
        d
    }

    /// Equivalence table: `table[i][j]` iff summands `i` and `j` are in the
    /// same isotypic class.
    pub fn pairing(&self) -> Vec<Vec<bool>> {
        self.summands.iter().map(|a| self.summands.iter().map(|b| a.class == b.class).collect()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.n,
            "summands": self.summands.iter().map(|s| json!({
                "dim": s.dim(),
                "class": s.class,
                "invariant": s.invariant,
                "irreducible": s.irreducible,
                "commutant_dim": s.commutant_dim,
                "basis": s.basis.iter().map(|v| v.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Symmetric bilinear forms on the coordinates of an invariant subspace that
/// are invariant under the restricted action: `ρᵀK + Kρ = 0`.
fn invariant_sym_forms<S: Scalar>(rho: &[Mat<S>], d: usize) -> Vec<Mat<S>> {
    let space = sym_basis::<S>(d);
    let mut rows = Vec::new();
    let imgs: Vec<Vec<Mat<S>>> =
        space.iter().map(|k| rho.iter().map(|r| r.transpose().mul(k).add(&k.mul(r))).collect()).collect();
    for bi in 0..rho.len() {
        for r in 0..d {
            for c in r..d {
                rows.push(imgs.iter().map(|im| im[bi][(r, c)].clone()).collect());
            }
        }
    }
    nullspace_rows(space.len(), rows)
        .iter()
        .map(|c| {
            let mut m = Mat::zeros(d, d);
            for (ci, e) in c.iter().zip(&space) {
                m.axpy(ci, e);
            }
            m
        })
        .collect()
}

/// Full commutant dimension of the restricted action on coordinates.
fn restricted_commutant_dim<S: Scalar>(rho: &[Mat<S>], d: usize) -> usize {
    full_commutant(d, rho).len()
}

/// Splits the invariant subspace `vs` using a `G`-self-adjoint operator
/// `T = G⁻¹K`; returns the eigenspaces (as ambient vectors) if at least two
/// are found and they span `vs`, or a partial split into one eigenspace and
/// its complement.
fn split_by_form<S: Scalar>(n: usize, vs: &[Vec<S>], k: &Mat<S>) -> std::result::Result<Option<Vec<Vec<Vec<S>>>>, String> {
    let d = vs.len();
    let b = Mat::from_cols(n, vs);
    let g = b.transpose().mul(&b);
    let ginv = inverse(&g).expect("independent basis");
    let t = ginv.mul(k);
    let spaces = exact_eigenspaces(&t)?;
    let to_ambient = |xs: &Vec<Vec<S>>| -> Vec<Vec<S>> { xs.iter().map(|x| b.mul_vec(x)).collect() };
    let total: usize = spaces.iter().map(|(_, s)| s.len()).sum();
    if spaces.len() >= 2 && total == d {
        return Ok(Some(spaces.iter().map(|(_, s)| to_ambient(s)).collect()));
    }
    if let Some((_, sp)) = spaces.iter().find(|(_, s)| !s.is_empty() && s.len() < d) {
        // G-orthogonal complement of the eigenspace inside vs
        let rows = sp.iter().map(|x| g.mul_vec(x));
        let comp = nullspace_rows(d, rows);
        return Ok(Some(vec![to_ambient(sp), comp.iter().map(|x| b.mul_vec(x)).collect()]));
    }
    Ok(None)
}

fn small_combo<S: Scalar>(rng: &mut ChaCha8Rng, elems: &[Mat<S>]) -> Mat<S> {
    let mut m = Mat::zeros(elems[0].rows(), elems[0].cols());
    for e in elems {
        let c: i64 = rng.random_range(-3..=3);
        if c != 0 {
            m.axpy(&S::from_i64(c), e);
        }
    }
    m
}

/// Splits an invariant subspace into irreducible invariant pieces.
fn split_irreducible<S: Scalar>(
    ops: &[Mat<S>],
    n: usize,
    vs: Vec<Vec<S>>,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Vec<Vec<S>>>,
) -> Result<()> {
    let d = vs.len();
    if d <= 1 {
        out.push(vs);
        return Ok(());
    }
    let rho = restrict(ops, n, &vs);
    let forms = invariant_sym_forms(&rho, d);
    if forms.len() <= 1 {
        out.push(vs);
        return Ok(());
    }
    let mut candidates: Vec<Mat<S>> = forms.clone();
    for _ in 0..24 {
        let c = small_combo(rng, &forms);
        if !c.is_zero() {
            candidates.push(c);
        }
    }
    for k in &candidates {
        match split_by_form(n, &vs, k) {
            Ok(Some(parts)) => {
                for p in parts {
                    split_irreducible(ops, n, p, rng, out)?;
                }
                return Ok(());
            }
            Ok(None) => continue,
            Err(e) => return Err(Error::IndeterminateSplit(e)),
        }
    }
    Err(Error::IndeterminateSplit(format!(
        "no symmetric commutant element with recognizable eigenvalues on a {d}-dimensional block"
    )))
}

/// Isotypic components: joint eigenspaces of the symmetric part of the
/// center of the commutant.
fn isotypic_blocks<S: Scalar>(ops: &[Mat<S>], n: usize) -> Result<Vec<Vec<Vec<S>>>> {
    let com = commutant_of(n, ops);
    let all: Vec<Mat<S>> = com.symmetric.iter().chain(com.skew.iter()).cloned().collect();
    let centre = commutant_in(n, &all, &com.symmetric);
    let mut blocks: Vec<Vec<Vec<S>>> = vec![(0..n).map(|i| crate::linalg::unit_vec(n, i)).collect()];
    for z in &centre {
        let spaces = exact_eigenspaces(z).map_err(Error::IndeterminateSplit)?;
        let total: usize = spaces.iter().map(|(_, s)| s.len()).sum();
        if total != n {
            return Err(Error::IndeterminateSplit("central element with unrecognized eigenvalues".into()));
        }
        let mut next = Vec::new();
        for b in &blocks {
            for (_, sp) in &spaces {
                let inter = intersect(n, b, sp);
                if !inter.is_empty() {
                    next.push(inter);
                }
            }
        }
        blocks = next;
    }
    Ok(blocks)
}

/// Decomposition of `R^n` into orthogonal irreducible summands of `g`,
/// grouped into isotypic classes.
pub fn decompose<S: Scalar>(g: &LieSubalgebra<S>, seed: u64) -> Result<RepDecomposition<S>> {
    decompose_ops(g.n(), g.basis(), seed)
}

pub fn decompose_ops<S: Scalar>(n: usize, ops: &[Mat<S>], seed: u64) -> Result<RepDecomposition<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = isotypic_blocks(ops, n)?;
    let mut summands = Vec::new();
    let mut isotypic = Vec::new();
    for (class, b) in blocks.into_iter().enumerate() {
        isotypic.push(projector(n, &b));
        let mut parts = Vec::new();
        split_irreducible(ops, n, b, &mut rng, &mut parts)?;
        for p in parts {
            let basis = orthonormalize(&p);
            let rho = restrict(ops, n, &basis);
            let invariant = is_invariant(ops, n, &basis);
            let forms = invariant_sym_forms(&rho, basis.len());
            summands.push(Summand {
                projector: projector(n, &basis),
                invariant,
                irreducible: forms.len() == 1,
                class,
                commutant_dim: restricted_commutant_dim(&rho, basis.len()),
                basis,
            });
        }
    }
    Ok(RepDecomposition { n, summands, isotypic })
}

/// Orthogonal basis; normalized when the field has the square roots (always
/// in float mode).
fn orthonormalize<S: Scalar>(vs: &[Vec<S>]) -> Vec<Vec<S>> {
    gram_schmidt(vs)
        .into_iter()
        .map(|v| {
            let n2 = crate::linalg::dot(&v, &v);
            match n2.sqrt_exact() {
                Some(r) => v.iter().map(|x| x.div_ref(&r)).collect(),
                None => v,
            }
        })
        .collect()
}

pub fn is_invariant<S: Scalar>(ops: &[Mat<S>], n: usize, vs: &[Vec<S>]) -> bool {
    let mut e = Echelon::new(n);
    for v in vs {
        e.push(v);
    }
    ops.iter().all(|a| vs.iter().all(|v| e.contains(&a.mul_vec(v))))
}

/// Whether two invariant subspaces carry equivalent representations
/// (nonzero intertwiner `Φ: W1 → W2` with `ρ2 Φ = Φ ρ1`, exact solve).
pub fn equivalent<S: Scalar>(ops: &[Mat<S>], n: usize, w1: &[Vec<S>], w2: &[Vec<S>]) -> bool {
    if w1.len() != w2.len() {
        return false;
    }
    let d = w1.len();
    let r1 = restrict(ops, n, w1);
    let r2 = restrict(ops, n, w2);
    // unknown Φ (d×d), equations ρ2 Φ − Φ ρ1 = 0
    let mut rows = Vec::new();
    for (a, b) in r2.iter().zip(&r1) {
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![S::zero(); d * d];
                for k in 0..d {
                    row[k * d + j].add_assign_ref(&a[(i, k)]);
                    row[i * d + k].sub_assign_ref(&b[(k, j)]);
                }
                rows.push(row);
            }
        }
    }
    let ns = nullspace_rows(d * d, rows);
    ns.iter().any(|phi| {
        let m = Mat::from_flat(d, d, phi.clone());
        crate::linalg::rank(&m) == d
    })
}

/// Elements of `g` supported on the subspace `vs` (zero on its complement
/// and mapping into it), i.e. `so(W) ∩ g`.
pub fn supported_on<S: Scalar>(g: &LieSubalgebra<S>, vs: &[Vec<S>]) -> Vec<Mat<S>> {
    let n = g.n();
    let p = projector(n, vs);
    let q = Mat::identity(n).sub(&p);
    let mut rows = Vec::new();
    let imgs: Vec<(Mat<S>, Mat<S>)> = g.basis().iter().map(|b| (q.mul(b), b.mul(&q))).collect();
    for r in 0..n {
        for c in 0..n {
            rows.push(imgs.iter().map(|(a, _)| a[(r, c)].clone()).collect::<Vec<S>>());
            rows.push(imgs.iter().map(|(_, b)| b[(r, c)].clone()).collect::<Vec<S>>());
        }
    }
    nullspace_rows(g.dim(), rows.into_iter().filter(|r| !vec_is_zero(r)))
        .iter()
        .map(|c| {
            let mut m = Mat::zeros(n, n);
            for (ci, b) in c.iter().zip(g.basis()) {
                m.axpy(ci, b);
            }
            m
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn e(n: usize, i: usize, j: usize) -> Mat<Q> {
        so_basis_elem(n, i, j)
    }

    #[test]
    fn span_close_examples() {
        assert_eq!(span_close(3, &[e(3, 0, 1)]).unwrap().dim(), 1);
        assert_eq!(span_close(3, &[e(3, 0, 1), e(3, 1, 2)]).unwrap().dim(), 3);
        assert_eq!(span_close::<Q>(4, &[]).unwrap().dim(), 0);
        assert!(span_close(2, &[Mat::<Q>::identity(2)]).is_err());
        let g = span_close(5, &[e(5, 0, 1), e(5, 1, 2), e(5, 3, 4)]).unwrap();
        assert_eq!(g.dim(), 4);
        assert!(g.closure_residual().exact_zero);
    }

    #[test]
    fn stabilizer_of_volume_and_products() {
        assert_eq!(stabilizer(&AltForm::<Q>::vol(3)).dim(), 3);
        let v1 = AltForm::<Q>::basis(6, &[0, 1, 2]);
        let v2 = AltForm::<Q>::basis(6, &[3, 4, 5]);
        let st = stabilizer(&v1.add(&v2));
        assert_eq!(st.dim(), 6);
        let so3so3 = LieSubalgebra::new(
            6,
            &[e(6, 0, 1), e(6, 0, 2), e(6, 1, 2), e(6, 3, 4), e(6, 3, 5), e(6, 4, 5)],
        )
        .unwrap();
        assert!(st.same_as(&so3so3));
    }

    #[test]
    fn commutant_examples() {
        let so4 = LieSubalgebra::<Q>::so(4);
        let c = commutant(&so4);
        assert_eq!(c.symmetric.len(), 1);
        let z = LieSubalgebra::<Q>::zero(3);
        assert_eq!(commutant(&z).full_dim, 9);
    }

    #[test]
    fn casimir_so_is_scalar() {
        for n in 2..6 {
            assert_eq!(casimir_so::<Q>(n), Mat::identity(n).scale(&qi(n as i64 - 1)));
        }
        let g = LieSubalgebra::<Q>::so(4);
        let c = casimir(&g, g.basis()).unwrap();
        assert_eq!(c, Mat::identity(4).scale(&qi(3)));
        let z = LieSubalgebra::<Q>::zero(3);
        assert!(casimir(&z, &[]).unwrap().is_zero());
    }

    #[test]
    fn killing_signatures() {
        let so3 = LieSubalgebra::<Q>::so(3);
        let k = so3.killing();
        assert_eq!(k.verdict, Definiteness::NegativeDefinite);
        assert_eq!(k.gram, Mat::identity(3).scale(&qi(-2)));
        let ab = span_close(4, &[e(4, 0, 1), e(4, 2, 3)]).unwrap();
        assert!(ab.killing().gram.is_zero());
        assert!(so3.structure_constants().is_simple());
        let so4 = LieSubalgebra::<Q>::so(4);
        assert!(!so4.structure_constants().is_simple());
        let ideals = so4.structure_constants().simple_ideals().unwrap();
        assert_eq!(ideals.iter().map(|i| i.len()).collect::<Vec<_>>(), vec![3, 3]);
    }

    #[test]
    fn curvature_space_dims() {
        assert_eq!(curvature_space_dim(&LieSubalgebra::<Q>::so(3)), 6);
        assert_eq!(curvature_space_dim(&LieSubalgebra::<Q>::so(4)), 20);
        assert_eq!(curvature_space_dim(&LieSubalgebra::<Q>::zero(4)), 0);
    }

    #[test]
    fn decompose_trivial_and_blocks() {
        let z = LieSubalgebra::<Q>::zero(4);
        let d = decompose(&z, 0).unwrap();
        assert_eq!(d.dims(), vec![1, 1, 1, 1]);
        assert_eq!(d.isotypic.len(), 1);
        let g = span_close(5, &[e(5, 0, 1), e(5, 1, 2), e(5, 3, 4)]).unwrap();
        let d = decompose(&g, 3).unwrap();
        assert_eq!(d.dims(), vec![2, 3]);
        assert!(d.summands.iter().all(|s| s.invariant));
        // so(2) on R² is of complex type: commutant dim 2 but irreducible
        let s2 = d.summands.iter().find(|s| s.dim() == 2).unwrap();
        assert!(s2.irreducible);
        assert_eq!(s2.commutant_dim, 2);
    }

    #[test]
    fn invariant_vectors_of_subalgebra() {
        let g = span_close(4, &[e(4, 0, 1), e(4, 1, 2)]).unwrap();
        let iv = invariant_vectors(&g);
        assert_eq!(iv, vec![crate::linalg::unit_vec(4, 3)]);
        assert_eq!(invariant_vectors(&LieSubalgebra::<Q>::zero(3)).len(), 3);
    }

    #[test]
    fn equivalence_of_copies() {
        // diagonal so(3) on R³ ⊕ R³
        let ops: Vec<Mat<Q>> = so_basis::<Q>(3)
            .iter()
            .map(|a| Mat::from_fn(6, 6, |i, j| if i / 3 == j / 3 { a[(i % 3, j % 3)].clone() } else { qi(0) }))
            .collect();
        let w1: Vec<Vec<Q>> = (0..3).map(|i| crate::linalg::unit_vec(6, i)).collect();
        let w2: Vec<Vec<Q>> = (3..6).map(|i| crate::linalg::unit_vec(6, i)).collect();
        assert!(equivalent(&ops, 6, &w1, &w2));
        let d = decompose_ops(6, &ops, 1).unwrap();
        assert_eq!(d.isotypic.len(), 1);
        assert_eq!(d.dims(), vec![3, 3]);
    }

    #[test]
    fn json_round_trip() {
        let g = LieSubalgebra::<Q>::so(3);
        let j = g.to_json();
        let h = LieSubalgebra::<Q>::from_json(&j).unwrap();
        assert!(h.same_as(&g));
        let bad = json!({"dim": 2, "basis": [[[1, 0], [0, 1]]]});
        assert!(LieSubalgebra::<Q>::from_json(&bad).is_err());
    }
}
