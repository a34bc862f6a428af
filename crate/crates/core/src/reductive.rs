//! Reductive homogeneous models `g = h ⊕ m` with invariant connections given
//! by Nomizu maps `Λ: m → End(m)`.
//!
//! The basis of `m` is orthonormal for the model metric, so forms on `m` are
//! forms on `R^{dim m}` and `τ_X` is the endomorphism of `X ⌟ τ`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{pairs, tau_squared, AltForm, CurvOperator};
use crate::liealg::{mat_from_json, mat_json, scalar_from_json, scalar_json, span_close, LieSubalgebra, Residual, StructureConstants};
use crate::linalg::{inverse, unit_vec, Echelon, Mat};
use crate::scalar::Scalar;

/// Reductive pair with full bracket tables; `m` carries an orthonormal basis.
#[derive(Clone, Debug)]
pub struct ReductiveModel<S> {
    pub name: String,
    dh: usize,
    dm: usize,
    /// `[h_a, h_b] = Σ hh[a][b][c] h_c`
    hh: Vec<Vec<Vec<S>>>,
    /// `ρ(h_a)`: matrix of `ad(h_a)` on `m`
    rho: Vec<Mat<S>>,
    /// `[m_i, m_j]_h`
    mm_h: Vec<Vec<Vec<S>>>,
    /// `[m_i, m_j]_m`
    mm_m: Vec<Vec<Vec<S>>>,
}

/// Solves for coordinates in a fixed family of vectors.
struct Coords<S> {
    basis: Mat<S>,
    left: Mat<S>,
}

impl<S: Scalar> Coords<S> {
    fn new(cols: &[Vec<S>]) -> Result<Self> {
        let n = cols[0].len();
        let basis = Mat::from_cols(n, cols);
        let bt = basis.transpose();
        let g = bt.mul(&basis);
        let ginv = inverse(&g).ok_or_else(|| Error::Model("basis of h ⊕ m is not linearly independent".into()))?;
        Ok(Coords { left: ginv.mul(&bt), basis })
    }

    fn solve(&self, v: &[S]) -> Result<Vec<S>> {
        let c = self.left.mul_vec(v);
        let back = self.basis.mul_vec(&c);
        if back.iter().zip(v).any(|(a, b)| !a.sub_ref(b).is_zero()) {
            return Err(Error::Model("bracket leaves h ⊕ m".into()));
        }
        Ok(c)
    }
}

impl<S: Scalar> ReductiveModel<S> {
    /// Builds the model from matrix realizations of bases of `h` and `m`
    /// inside some matrix Lie algebra. The `m` basis must be orthonormal for
    /// the intended metric (this is not checked here; invariance is).
    pub fn from_matrices(name: &str, h: &[Mat<S>], m: &[Mat<S>]) -> Result<Self> {
        let dh = h.len();
        let dm = m.len();
        let all: Vec<Vec<S>> = h.iter().chain(m.iter()).map(|x| x.flatten()).collect();
        let co = if all.is_empty() { None } else { Some(Coords::new(&all)?) };
        let split = |x: &Mat<S>| -> Result<(Vec<S>, Vec<S>)> {
            let c = co.as_ref().expect("nonempty").solve(&x.flatten())?;
            Ok((c[..dh].to_vec(), c[dh..].to_vec()))
        };
        let mut hh = vec![vec![vec![S::zero(); dh]; dh]; dh];
        for a in 0..dh {
            for b in 0..dh {
                let (ch, cm) = split(&h[a].commutator(&h[b]))?;
                if cm.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Model("h is not a subalgebra".into()));
                }
                hh[a][b] = ch;
            }
        }
        let mut rho = Vec::with_capacity(dh);
        for a in 0..dh {
            let mut r = Mat::zeros(dm, dm);
            for i in 0..dm {
                let (ch, cm) = split(&h[a].commutator(&m[i]))?;
                if ch.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Model("[h, m] is not contained in m".into()));
                }
                for (j, c) in cm.into_iter().enumerate() {
                    r[(j, i)] = c;
                }
            }
            rho.push(r);
        }
        let mut mm_h = vec![vec![vec![S::zero(); dh]; dm]; dm];
        let mut mm_m = vec![vec![vec![S::zero(); dm]; dm]; dm];
        for i in 0..dm {
            for j in 0..dm {
                let (ch, cm) = split(&m[i].commutator(&m[j]))?;
                mm_h[i][j] = ch;
                mm_m[i][j] = cm;
            }
        }
        let model = ReductiveModel { name: name.to_string(), dh, dm, hh, rho, mm_h, mm_m };
        let r = model.isotropy_skew_residual();
        if !r.exact_zero && r.max_abs > crate::scalar::DEFAULT_TOL {
            return Err(Error::Model(format!("isotropy does not act by skew endomorphisms (residual {})", r.max_abs)));
        }
        Ok(model)
    }

    /// Builds the model from abstract bracket tables.
    pub fn from_tables(
        name: &str,
        hh: Vec<Vec<Vec<S>>>,
        rho: Vec<Mat<S>>,
        mm_h: Vec<Vec<Vec<S>>>,
        mm_m: Vec<Vec<Vec<S>>>,
    ) -> Self {
        let dh = rho.len();
        let dm = mm_m.len();
        ReductiveModel { name: name.to_string(), dh, dm, hh, rho, mm_h, mm_m }
    }

    pub fn dim_h(&self) -> usize {
        self.dh
    }
    pub fn dim_m(&self) -> usize {
        self.dm
    }
    pub fn isotropy(&self) -> &[Mat<S>] {
        &self.rho
    }

    pub fn bracket_mm_h(&self, i: usize, j: usize) -> &[S] {
        &self.mm_h[i][j]
    }
    pub fn bracket_mm_m(&self, i: usize, j: usize) -> &[S] {
        &self.mm_m[i][j]
    }

    /// `[X, Y]_m` for coordinate vectors.
    pub fn bracket_m(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dm];
        for i in 0..self.dm {
            for j in 0..self.dm {
                let f = x[i].mul_ref(&y[j]);
                if f.is_zero() {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(&self.mm_m[i][j]) {
                    o.add_mul(&f, c);
                }
            }
        }
        out
    }

    /// `ρ([X, Y]_h)` for coordinate vectors.
    pub fn rho_bracket_h(&self, x: &[S], y: &[S]) -> Mat<S> {
        let mut out = Mat::zeros(self.dm, self.dm);
        for i in 0..self.dm {
            for j in 0..self.dm {
                let f = x[i].mul_ref(&y[j]);
                if f.is_zero() {
                    continue;
                }
                for (a, c) in self.mm_h[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out.axpy(&f.mul_ref(c), &self.rho[a]);
                    }
                }
            }
        }
        out
    }

    /// Structure constants of `g = h ⊕ m` (h first).
    pub fn full_algebra(&self) -> StructureConstants<S> {
        let (dh, dm) = (self.dh, self.dm);
        StructureConstants::from_fn(dh + dm, |p, q| {
            let mut v = vec![S::zero(); dh + dm];
            match (p < dh, q < dh) {
                (true, true) => v[..dh].clone_from_slice(&self.hh[p][q]),
                (true, false) => {
                    let i = q - dh;
                    for j in 0..dm {
                        v[dh + j] = self.rho[p][(j, i)].clone();
                    }
                }
                (false, true) => {
                    let i = p - dh;
                    for j in 0..dm {
                        v[dh + j] = self.rho[q][(j, i)].neg_ref();
                    }
                }
                (false, false) => {
                    let (i, j) = (p - dh, q - dh);
                    v[..dh].clone_from_slice(&self.mm_h[i][j]);
                    v[dh..].clone_from_slice(&self.mm_m[i][j]);
                }
            }
            v
        })
    }

    pub fn jacobi_residual(&self) -> Residual {
        self.full_algebra().jacobi_residual()
    }

    pub fn isotropy_skew_residual(&self) -> Residual {
        self.rho.iter().fold(Residual::zero(), |r, a| r.merge(Residual::of_mat(&a.add(&a.transpose()))))
    }

    /// Residual of `g([X,Y]_m, Z) + g(Y, [X,Z]_m) = 0`.
    pub fn natural_reductivity_residual(&self) -> Residual {
        let mut r = Residual::zero();
        for x in 0..self.dm {
            for y in 0..self.dm {
                for z in 0..self.dm {
                    r.absorb(&self.mm_m[x][y][z].add_ref(&self.mm_m[x][z][y]));
                }
            }
        }
        r
    }

    pub fn is_naturally_reductive(&self) -> bool {
        self.natural_reductivity_residual().passes(S::MODE, crate::scalar::DEFAULT_TOL)
    }

    /// Isotropy algebra as a subalgebra of `so(m)` (its image under `ρ`).
    pub fn isotropy_algebra(&self) -> Result<LieSubalgebra<S>> {
        span_close(self.dm, &self.rho)
    }

    /// Span of `ρ([m, m]_h)`.
    pub fn mm_h_span(&self) -> Result<LieSubalgebra<S>> {
        let mut elems = Vec::new();
        for (i, j) in pairs(self.dm) {
            elems.push(self.rho_bracket_h(&unit_vec(self.dm, i), &unit_vec(self.dm, j)));
        }
        let mut e = Echelon::new(self.dm * self.dm);
        let mut kept = Vec::new();
        for m in elems {
            if e.push(&m.flatten()) {
                kept.push(m);
            }
        }
        LieSubalgebra::new(self.dm, &kept)
    }

    /// Canonical torsion form `τ = −½ g([X,Y]_m, Z)`, if totally skew.
    pub fn canonical_tau(&self) -> Result<AltForm<S>> {
        let half = S::from_ratio(-1, 2);
        let t = Tensor3::from_fn(self.dm, |i, j, k| self.mm_m[i][j][k].mul_ref(&half));
        t.to_form()
    }

    pub fn to_json(&self) -> Value {
        let mut hh = Vec::new();
        for a in 0..self.dh {
            for b in 0..self.dh {
                for (c, v) in self.hh[a][b].iter().enumerate() {
                    if !v.is_zero() {
                        hh.push(json!([a, b, c, scalar_json(v)]));
                    }
                }
            }
        }
        let mut mmh = Vec::new();
        let mut mmm = Vec::new();
        for i in 0..self.dm {
            for j in 0..self.dm {
                for (a, v) in self.mm_h[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        mmh.push(json!([i, j, a, scalar_json(v)]));
                    }
                }
                for (k, v) in self.mm_m[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        mmm.push(json!([i, j, k, scalar_json(v)]));
                    }
                }
            }
        }
        json!({
            "name": self.name,
            "dim_h": self.dh,
            "dim_m": self.dm,
            "hh": hh,
            "hm": self.rho.iter().map(mat_json).collect::<Vec<_>>(),
            "mm_h": mmh,
            "mm_m": mmm,
            "metric": mat_json(&Mat::<S>::identity(self.dm)),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get_usize = |k: &str| -> Result<usize> {
            v.get(k).and_then(|x| x.as_u64()).map(|x| x as usize).ok_or_else(|| Error::Parse(format!("field '{k}': expected integer")))
        };
        let dh = get_usize("dim_h")?;
        let dm = get_usize("dim_m")?;
        let name = v.get("name").and_then(|x| x.as_str()).unwrap_or("model").to_string();
        let sparse = |k: &str, d1: usize, d2: usize, d3: usize| -> Result<Vec<Vec<Vec<S>>>> {
            let mut t = vec![vec![vec![S::zero(); d3]; d2]; d1];
            let arr = v.get(k).and_then(|x| x.as_array()).ok_or_else(|| Error::Parse(format!("field '{k}': expected array")))?;
            for (p, e) in arr.iter().enumerate() {
                let e = e.as_array().filter(|e| e.len() == 4).ok_or_else(|| Error::Parse(format!("{k}[{p}]: expected [i, j, k, value]")))?;
                let idx: Vec<usize> = e[..3]
                    .iter()
                    .map(|x| x.as_u64().map(|u| u as usize))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Parse(format!("{k}[{p}]: bad index")))?;
                if idx[0] >= d1 || idx[1] >= d2 || idx[2] >= d3 {
                    return Err(Error::Parse(format!("{k}[{p}]: index out of range")));
                }
                t[idx[0]][idx[1]][idx[2]] = scalar_from_json(&e[3], &format!("{k}[{p}][3]"))?;
            }
            Ok(t)
        };
        let hh = sparse("hh", dh, dh, dh)?;
        let mm_h = sparse("mm_h", dm, dm, dh)?;
        let mm_m = sparse("mm_m", dm, dm, dm)?;
        let hm = v.get("hm").and_then(|x| x.as_array()).ok_or_else(|| Error::Parse("field 'hm': expected array".into()))?;
        if hm.len() != dh {
            return Err(Error::Parse(format!("field 'hm': expected {dh} matrices")));
        }
        let rho = hm.iter().enumerate().map(|(a, m)| mat_from_json(m, dm, &format!("hm[{a}]"))).collect::<Result<Vec<_>>>()?;
        if let Some(g) = v.get("metric") {
            let g: Mat<S> = mat_from_json(g, dm, "metric")?;
            if g != Mat::identity(dm) {
                return Err(Error::Parse("field 'metric': the m-basis must be orthonormal".into()));
            }
        }
        let model = ReductiveModel { name, dh, dm, hh, rho, mm_h, mm_m };
        if !model.isotropy_skew_residual().passes(S::MODE, crate::scalar::DEFAULT_TOL) {
            return Err(Error::Parse("field 'hm': isotropy matrices must be skew".into()));
        }
        let j = model.jacobi_residual();
        if !j.exact_zero && j.max_abs > crate::scalar::DEFAULT_TOL {
            return Err(Error::Parse(format!("bracket tables violate Jacobi (residual {})", j.max_abs)));
        }
        Ok(model)
    }
}

/// Dense covariant 3-tensor `T(e_i, e_j, e_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Tensor3<S> {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data.push(f(i, j, k));
                }
            }
        }
        Tensor3 { n, data }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.data[(i * self.n + j) * self.n + k]
    }

    pub fn skew_residual(&self) -> Residual {
        let mut r = Residual::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    r.absorb(&self.get(i, j, k).add_ref(self.get(j, i, k)));
                    r.absorb(&self.get(i, j, k).add_ref(self.get(i, k, j)));
                }
            }
        }
        r
    }

    pub fn to_form(&self) -> Result<AltForm<S>> {
        let r = self.skew_residual();
        if !r.passes(S::MODE, crate::scalar::DEFAULT_TOL) {
            return Err(Error::TorsionNotSkew(r.max_abs));
        }
        let mut f = AltForm::zero(self.n, 3);
        for idx in crate::exterior::multi_indices(self.n, 3) {
            f.add_term(&idx, self.get(idx[0], idx[1], idx[2]));
        }
        Ok(f)
    }

    /// `(A_*T)(X,Y,Z) = −T(AX,Y,Z) − T(X,AY,Z) − T(X,Y,AZ)`.
    pub fn derivation(&self, a: &Mat<S>) -> Self {
        let n = self.n;
        Tensor3::from_fn(n, |i, j, k| {
            let mut s = S::zero();
            for m in 0..n {
                s.sub_mul(&a[(m, i)], self.get(m, j, k));
                s.sub_mul(&a[(m, j)], self.get(i, m, k));
                s.sub_mul(&a[(m, k)], self.get(i, j, m));
            }
            s
        })
    }

    pub fn residual(&self) -> Residual {
        Residual::of(self.data.iter().cloned())
    }
}

/// Invariant tensors that connections act on.
#[derive(Clone, Debug)]
pub enum Tensor<S> {
    Vector(Vec<S>),
    Form(AltForm<S>),
    Endo(Mat<S>),
    Cov3(Tensor3<S>),
    Curv(CurvOperator<S>),
}

impl<S: Scalar> Tensor<S> {
    /// Derivation action of a skew endomorphism.
    pub fn act(&self, a: &Mat<S>) -> Tensor<S> {
        match self {
            Tensor::Vector(v) => Tensor::Vector(a.mul_vec(v)),
            Tensor::Form(f) => Tensor::Form(f.derivation(a).expect("dims agree")),
            Tensor::Endo(e) => Tensor::Endo(a.commutator(e)),
            Tensor::Cov3(t) => Tensor::Cov3(t.derivation(a)),
            Tensor::Curv(r) => Tensor::Curv(curv_derivation(r, a)),
        }
    }

    pub fn residual(&self) -> Residual {
        match self {
            Tensor::Vector(v) => Residual::of(v.iter().cloned()),
            Tensor::Form(f) => Residual::of(f.terms().map(|(_, c)| c.clone())),
            Tensor::Endo(e) => Residual::of_mat(e),
            Tensor::Cov3(t) => t.residual(),
            Tensor::Curv(r) => Residual::of_mat(r.matrix()),
        }
    }

    pub fn sub(&self, o: &Tensor<S>) -> Tensor<S> {
        match (self, o) {
            (Tensor::Vector(a), Tensor::Vector(b)) => Tensor::Vector(crate::linalg::vec_sub(a, b)),
            (Tensor::Form(a), Tensor::Form(b)) => Tensor::Form(a.sub(b)),
            (Tensor::Endo(a), Tensor::Endo(b)) => Tensor::Endo(a.sub(b)),
            (Tensor::Cov3(a), Tensor::Cov3(b)) => {
                Tensor::Cov3(Tensor3 { n: a.n, data: a.data.iter().zip(&b.data).map(|(x, y)| x.sub_ref(y)).collect() })
            }
            (Tensor::Curv(a), Tensor::Curv(b)) => Tensor::Curv(a.sub(b)),
            _ => panic!("tensor kind mismatch"),
        }
    }
}

/// `(A_*R)(X,Y) = [A, R(X,Y)] − R(AX,Y) − R(X,AY)` on a general operator.
pub fn curv_derivation<S: Scalar>(r: &CurvOperator<S>, a: &Mat<S>) -> CurvOperator<S> {
    let n = r.dim();
    let endos: Vec<Mat<S>> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| r.endo(i, j)).collect();
    let e = |i: usize, j: usize| &endos[i * n + j];
    let out: Vec<Mat<S>> = pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let mut m = a.commutator(e(i, j));
            for k in 0..n {
                if !a[(k, i)].is_zero() {
                    m.axpy(&a[(k, i)].neg_ref(), e(k, j));
                }
                if !a[(k, j)].is_zero() {
                    m.axpy(&a[(k, j)].neg_ref(), e(i, k));
                }
            }
            m
        })
        .collect();
    CurvOperator::from_endos(n, &out)
}

/// Linear map `m → End(m)` given on the basis of `m`.
#[derive(Clone, Debug)]
pub struct NomizuMap<S> {
    pub maps: Vec<Mat<S>>,
}

impl<S: Scalar> NomizuMap<S> {
    /// `Λ = 0`, the canonical connection.
    pub fn canonical(dm: usize) -> Self {
        NomizuMap { maps: vec![Mat::zeros(dm, dm); dm] }
    }

    /// Levi-Civita connection of the model metric:
    /// `Λ(X)Y = ½[X,Y]_m + U(X,Y)`, `g(U(X,Y),Z) = ½(g([Z,X]_m,Y) + g(X,[Z,Y]_m))`.
    pub fn levi_civita(model: &ReductiveModel<S>) -> Self {
        let dm = model.dm;
        let half = S::from_ratio(1, 2);
        let maps = (0..dm)
            .map(|x| {
                Mat::from_fn(dm, dm, |z, y| {
                    let a = &model.mm_m[x][y][z];
                    let b = &model.mm_m[z][x][y];
                    let c = &model.mm_m[z][y][x];
                    a.add_ref(b).add_ref(c).mul_ref(&half)
                })
            })
            .collect();
        NomizuMap { maps }
    }

    /// `Λ(X) + τ_X`.
    pub fn plus_tau(&self, tau: &AltForm<S>) -> Result<Self> {
        let t = tau.tau_endos()?;
        if t.len() != self.maps.len() {
            return Err(Error::DimMismatch { expected: self.maps.len(), got: t.len() });
        }
        Ok(NomizuMap { maps: self.maps.iter().zip(&t).map(|(a, b)| a.add(b)).collect() })
    }

    /// `Λ(X)` for a coordinate vector.
    pub fn at(&self, x: &[S]) -> Mat<S> {
        let dm = self.maps.len();
        let mut m = Mat::zeros(dm, dm);
        for (c, l) in x.iter().zip(&self.maps) {
            if !c.is_zero() {
                m.axpy(c, l);
            }
        }
        m
    }

    pub fn is_metric(&self) -> bool {
        self.maps.iter().all(|m| m.is_skew())
    }

    /// Residual of `Λ(ρ(A)X) = [ρ(A), Λ(X)]`.
    pub fn equivariance_residual(&self, model: &ReductiveModel<S>) -> Residual {
        let dm = model.dm;
        let mut r = Residual::zero();
        for a in &model.rho {
            for x in 0..dm {
                let ax = a.col(x);
                let lhs = self.at(&ax);
                let rhs = a.commutator(&self.maps[x]);
                r = r.merge(Residual::of_mat(&lhs.sub(&rhs)));
            }
        }
        r
    }

    pub fn to_json(&self) -> Value {
        json!({"maps": self.maps.iter().map(mat_json).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value, dm: usize) -> Result<Self> {
        let arr = v.get("maps").and_then(|x| x.as_array()).ok_or_else(|| Error::Parse("field 'maps': expected array".into()))?;
        if arr.len() != dm {
            return Err(Error::Parse(format!("field 'maps': expected {dm} matrices, got {}", arr.len())));
        }
        let maps = arr.iter().enumerate().map(|(i, m)| mat_from_json(m, dm, &format!("maps[{i}]"))).collect::<Result<Vec<_>>>()?;
        Ok(NomizuMap { maps })
    }
}

/// Torsion, curvature and holonomy of an invariant connection.
#[derive(Clone, Debug)]
pub struct ConnectionReport<S> {
    /// `T(e_i, e_j, e_k) = g(T(e_i,e_j), e_k)`
    pub torsion: Tensor3<S>,
    pub torsion_form: Option<AltForm<S>>,
    pub curvature: CurvOperator<S>,
    pub holonomy: LieSubalgebra<S>,
}

/// `T(X,Y) = Λ(X)Y − Λ(Y)X − [X,Y]_m` as a covariant tensor.
pub fn torsion<S: Scalar>(model: &ReductiveModel<S>, l: &NomizuMap<S>) -> Tensor3<S> {
    let dm = model.dm;
    Tensor3::from_fn(dm, |i, j, k| l.maps[i][(k, j)].sub_ref(&l.maps[j][(k, i)]).sub_ref(&model.mm_m[i][j][k]))
}

/// `R(X,Y) = [Λ(X),Λ(Y)] − Λ([X,Y]_m) − ρ([X,Y]_h)` on basis pairs.
pub fn curvature_endos<S: Scalar>(model: &ReductiveModel<S>, l: &NomizuMap<S>) -> Vec<Mat<S>> {
    let dm = model.dm;
    pairs(dm)
        .into_iter()
        .map(|(i, j)| {
            let ei = unit_vec::<S>(dm, i);
            let ej = unit_vec::<S>(dm, j);
            l.maps[i].commutator(&l.maps[j]).sub(&l.at(&model.mm_m[i][j])).sub(&model.rho_bracket_h(&ei, &ej))
        })
        .collect()
}

pub fn curvature<S: Scalar>(model: &ReductiveModel<S>, l: &NomizuMap<S>) -> CurvOperator<S> {
    CurvOperator::from_endos(model.dm, &curvature_endos(model, l))
}

/// Infinitesimal holonomy: span of curvature values closed under brackets
/// and under `A ↦ [Λ(X), A]`.
pub fn holonomy<S: Scalar>(model: &ReductiveModel<S>, l: &NomizuMap<S>) -> Result<LieSubalgebra<S>> {
    let dm = model.dm;
    for m in &l.maps {
        if !m.is_skew() {
            return Err(Error::NotSkew(m.add(&m.transpose()).max_abs()));
        }
    }
    let mut g = span_close(dm, &curvature_endos(model, l))?;
    let cap = dm * dm.saturating_sub(1) / 2;
    for _ in 0..=cap {
        let mut gens: Vec<Mat<S>> = g.basis().to_vec();
        for x in &l.maps {
            for b in g.basis() {
                gens.push(x.commutator(b));
            }
        }
        let next = span_close(dm, &gens)?;
        if next.dim() == g.dim() {
            return Ok(next);
        }
        g = next;
    }
    Ok(g)
}

pub fn connection_report<S: Scalar>(model: &ReductiveModel<S>, l: &NomizuMap<S>) -> Result<ConnectionReport<S>> {
    let eq = l.equivariance_residual(model);
    if !eq.passes(S::MODE, crate::scalar::DEFAULT_TOL) {
        return Err(Error::NotEquivariant(eq.max_abs));
    }
    let t = torsion(model, l);
    let torsion_form = t.to_form().ok();
    Ok(ConnectionReport { torsion_form, curvature: curvature(model, l), holonomy: holonomy(model, l)?, torsion: t })
}

/// `max_X |Λ(X)_* S|`; errors if `S` is not `h`-invariant.
pub fn parallel_residual<S: Scalar>(model: &ReductiveModel<S>, l: &NomizuMap<S>, t: &Tensor<S>) -> Result<Residual> {
    let inv = model.rho.iter().fold(Residual::zero(), |r, a| r.merge(t.act(a).residual()));
    if !inv.passes(S::MODE, crate::scalar::DEFAULT_TOL) {
        return Err(Error::NotInvariant(inv.max_abs));
    }
    Ok(l.maps.iter().fold(Residual::zero(), |r, x| r.merge(t.act(x).residual())))
}

/// `Λ(e_i)_* S` for every basis vector.
pub fn covariant_derivatives<S: Scalar>(l: &NomizuMap<S>, t: &Tensor<S>) -> Vec<Tensor<S>> {
    l.maps.iter().map(|x| t.act(x)).collect()
}

/// Transvection algebra `hol ⊕ m` of an Ambrose-Singer structure.
#[derive(Clone, Debug)]
pub struct TransvectionAlgebra<S> {
    pub holonomy: LieSubalgebra<S>,
    pub dim_m: usize,
    pub algebra: StructureConstants<S>,
}

impl<S: Scalar> TransvectionAlgebra<S> {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

pub fn transvection<S: Scalar>(model: &ReductiveModel<S>, l: &NomizuMap<S>) -> Result<TransvectionAlgebra<S>> {
    let t = torsion(model, l);
    let r = curvature(model, l);
    let dt = l.maps.iter().fold(Residual::zero(), |acc, x| acc.merge(t.derivation(x).residual()));
    if !dt.passes(S::MODE, crate::scalar::DEFAULT_TOL) {
        return Err(Error::NotAmbroseSinger { what: "nabla T", residual: dt.max_abs });
    }
    let dr = l.maps.iter().fold(Residual::zero(), |acc, x| acc.merge(Residual::of_mat(curv_derivation(&r, x).matrix())));
    if !dr.passes(S::MODE, crate::scalar::DEFAULT_TOL) {
        return Err(Error::NotAmbroseSinger { what: "nabla R", residual: dr.max_abs });
    }
    let hol = holonomy(model, l)?;
    let dm = model.dm;
    let k = hol.dim();
    let hol_coords = |m: &Mat<S>| -> Vec<S> { hol.coords(m).expect("curvature lies in holonomy") };
    let endos: Vec<Vec<Mat<S>>> = (0..dm).map(|i| (0..dm).map(|j| r.endo(i, j)).collect()).collect();
    let algebra = StructureConstants::from_fn(k + dm, |p, q| {
        let mut v = vec![S::zero(); k + dm];
        match (p < k, q < k) {
            (true, true) => {
                let br = hol.basis()[p].commutator(&hol.basis()[q]);
                v[..k].clone_from_slice(&hol_coords(&br));
            }
            (true, false) => {
                let col = hol.basis()[p].col(q - k);
                v[k..].clone_from_slice(&col);
            }
            (false, true) => {
                let col = hol.basis()[q].col(p - k);
                for (o, c) in v[k..].iter_mut().zip(col) {
                    *o = c.neg_ref();
                }
            }
            (false, false) => {
                let (i, j) = (p - k, q - k);
                let rc = hol_coords(&endos[i][j]);
                for (o, c) in v[..k].iter_mut().zip(rc) {
                    *o = c.neg_ref();
                }
                for z in 0..dm {
                    v[k + z] = t.get(i, j, z).neg_ref();
                }
            }
        }
        v
    });
    Ok(TransvectionAlgebra { holonomy: hol, dim_m: dm, algebra })
}

/// Riemannian curvature reconstructed from `∇^τ = ∇^g + τ`.
#[derive(Clone, Debug)]
pub struct RiemannReport<S> {
    pub r_tau: CurvOperator<S>,
    /// Curvature of the Levi-Civita Nomizu map.
    pub r_g: CurvOperator<S>,
    pub ricci: Mat<S>,
    pub scal: S,
    /// `R^g − (R^τ + τ² + b(τ²))`
    pub eq6_residual: Residual,
    /// `R^g(X,Y) − (R^τ(X,Y) + [τ_X,τ_Y] − 2τ_{τ_X Y})`
    pub bracket_residual: Residual,
    /// `b(R^g)`
    pub bianchi_residual: Residual,
}

/// `R^τ + τ² + b(τ²)`.
pub fn eq6_curvature<S: Scalar>(r_tau: &CurvOperator<S>, tau: &AltForm<S>) -> Result<CurvOperator<S>> {
    let t2 = tau_squared(tau)?;
    let b = crate::exterior::bianchi(&t2);
    Ok(r_tau.add(&t2).add(&CurvOperator::from_four_form(&b)?))
}

/// `R^τ(X,Y) + [τ_X,τ_Y] − 2τ_{τ_X Y}`.
pub fn bracket_curvature<S: Scalar>(r_tau: &CurvOperator<S>, tau: &AltForm<S>) -> Result<CurvOperator<S>> {
    let n = tau.dim();
    let te = tau.tau_endos()?;
    let two = S::from_i64(2);
    let endos: Vec<Mat<S>> = pairs(n)
        .into_iter()
        .map(|(i, j)| {
            let txy = te[i].col(j);
            let mut m = r_tau.endo(i, j).add(&te[i].commutator(&te[j]));
            let mut tt = Mat::zeros(n, n);
            for (c, e) in txy.iter().zip(&te) {
                if !c.is_zero() {
                    tt.axpy(c, e);
                }
            }
            m.axpy(&two.neg_ref(), &tt);
            m
        })
        .collect();
    Ok(CurvOperator::from_endos(n, &endos))
}

pub fn riemann_from_tau<S: Scalar>(model: &ReductiveModel<S>, tau: &AltForm<S>) -> Result<RiemannReport<S>> {
    if tau.degree() != 3 {
        return Err(Error::WrongDegree { expected: 3, got: tau.degree() });
    }
    let lg = NomizuMap::levi_civita(model);
    let lt = lg.plus_tau(tau)?;
    let r_tau = curvature(model, &lt);
    let r_g = curvature(model, &lg);
    let eq6 = eq6_curvature(&r_tau, tau)?;
    let br = bracket_curvature(&r_tau, tau)?;
    let ricci = r_g.ricci();
    Ok(RiemannReport {
        eq6_residual: Residual::of_mat(r_g.sub(&eq6).matrix()),
        bracket_residual: Residual::of_mat(r_g.sub(&br).matrix()),
        bianchi_residual: Residual::of(crate::exterior::bianchi(&r_g).terms().map(|(_, c)| c.clone())),
        scal: ricci.trace(),
        ricci,
        r_tau,
        r_g,
    })
}

/// Exact least-squares fit `R^τ ≈ κ τ²`.
#[derive(Clone, Debug)]
pub struct KappaFit<S> {
    pub kappa: S,
    pub residual: Residual,
    pub scal_g: S,
    /// `scal_g − 2(1+κ)‖τ‖²`, meaningful when the fit is exact.
    pub scal_identity_residual: Residual,
}

pub fn fit_kappa<S: Scalar>(model: &ReductiveModel<S>, l_tau: &NomizuMap<S>, tau: &AltForm<S>) -> Result<KappaFit<S>> {
    let t2 = tau_squared(tau)?;
    if t2.is_zero() {
        return Err(Error::ZeroTauSquared);
    }
    let r = curvature(model, l_tau);
    let kappa = r.matrix().dot(t2.matrix()).div_ref(&t2.matrix().dot(t2.matrix()));
    let residual = Residual::of_mat(r.sub(&t2.scale(&kappa)).matrix());
    let scal_g = curvature(model, &NomizuMap::levi_civita(model)).scal();
    let predicted = S::from_i64(2).mul_ref(&S::one().add_ref(&kappa)).mul_ref(&tau.norm2_contracted());
    Ok(KappaFit { scal_identity_residual: Residual::of([scal_g.sub_ref(&predicted)]), kappa, residual, scal_g })
}

/// `Ric − (scal/n) Id`.
pub fn einstein_residual<S: Scalar>(ric: &Mat<S>) -> Residual {
    let n = ric.rows();
    let s = ric.trace().div_ref(&S::from_i64(n as i64));
    Residual::of_mat(&ric.sub(&Mat::identity(n).scale(&s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::so_basis_elem;
    use crate::scalar::{qi, Q};

    /// Round S³ = SO(4)/SO(3) as a symmetric space.
    fn sphere3() -> ReductiveModel<Q> {
        let h = vec![so_basis_elem(4, 1, 2), so_basis_elem(4, 1, 3), so_basis_elem(4, 2, 3)];
        let m = vec![so_basis_elem(4, 0, 1), so_basis_elem(4, 0, 2), so_basis_elem(4, 0, 3)];
        ReductiveModel::from_matrices("S3", &h, &m).unwrap()
    }

    #[test]
    fn symmetric_space_canonical_connection() {
        let s = sphere3();
        assert!(s.jacobi_residual().exact_zero);
        assert!(s.is_naturally_reductive());
        let rep = connection_report(&s, &NomizuMap::canonical(3)).unwrap();
        assert!(rep.torsion.residual().exact_zero);
        assert_eq!(rep.holonomy.dim(), 3);
        // constant curvature: R = −Id on Λ²
        assert_eq!(rep.curvature, CurvOperator::identity(3).scale(&qi(-1)));
        let lc = NomizuMap::levi_civita(&s);
        assert!(lc.maps.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn transvection_of_symmetric_space() {
        let s = sphere3();
        let tv = transvection(&s, &NomizuMap::canonical(3)).unwrap();
        assert_eq!(tv.dim(), 6);
        assert!(tv.algebra.jacobi_residual().exact_zero);
        assert_eq!(tv.algebra.killing().verdict, crate::liealg::Definiteness::NegativeDefinite);
    }

    #[test]
    fn parallel_residual_requires_invariance() {
        let s = sphere3();
        let v = Tensor::Vector(unit_vec::<Q>(3, 0));
        assert!(matches!(parallel_residual(&s, &NomizuMap::canonical(3), &v), Err(Error::NotInvariant(_))));
        let vol = Tensor::Form(AltForm::<Q>::vol(3));
        assert!(parallel_residual(&s, &NomizuMap::canonical(3), &vol).unwrap().exact_zero);
    }

    #[test]
    fn json_round_trip() {
        let s = sphere3();
        let j = s.to_json();
        let t = ReductiveModel::<Q>::from_json(&j).unwrap();
        assert_eq!(t.dim_h(), 3);
        assert_eq!(holonomy(&t, &NomizuMap::canonical(3)).unwrap().dim(), 3);
    }
}
