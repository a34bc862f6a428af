//! Dense matrices and exact row reduction over any [`Scalar`].

use std::fmt;

use crate::scalar::{Mode, Scalar};

#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<S> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| rows[i][j].clone())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(n: usize, cols: &[Vec<S>]) -> Self {
        Self::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn from_i64(rows: usize, cols: usize, v: &[i64]) -> Self {
        Self::from_fn(rows, cols, |i, j| S::from_i64(v[i * cols + j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg_ref())
    }

    /// `self += s * o`
    pub fn axpy(&mut self, s: &S, o: &Self) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            a.add_mul(s, b);
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out.data[i * o.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = S::zero();
                for j in 0..self.cols {
                    s.add_mul(&self[(i, j)], &v[j]);
                }
                s
            })
            .collect()
    }

    /// `[self, o] = self*o - o*self`
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> S {
        let mut s = S::zero();
        for i in 0..self.rows.min(self.cols) {
            s.add_assign_ref(&self[(i, i)]);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| self[(i, j)].add_ref(&self[(j, i)]).is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].sub_ref(&self[(j, i)]).is_zero()))
    }

    /// Frobenius pairing `sum a_ij b_ij`.
    pub fn dot(&self, o: &Self) -> S {
        let mut s = S::zero();
        for (a, b) in self.data.iter().zip(&o.data) {
            s.add_mul(a, b);
        }
        s
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn block(&self, r0: usize, c0: usize, r: usize, c: usize) -> Self {
        Self::from_fn(r, c, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn flatten(&self) -> Vec<S> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, v: Vec<S>) -> Self {
        assert_eq!(v.len(), rows * cols);
        Mat { rows, cols, data: v }
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut s = S::zero();
    for (x, y) in a.iter().zip(b) {
        s.add_mul(x, y);
    }
    s
}

pub fn vec_is_zero<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn vec_scale<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.mul_ref(s)).collect()
}

pub fn unit_vec<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

pub fn max_abs<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
}

fn better_pivot<S: Scalar>(cand: &S, best: Option<&S>) -> bool {
    if cand.is_zero() {
        return false;
    }
    match (S::MODE, best) {
        (_, None) => true,
        (Mode::Exact, Some(_)) => false,
        (Mode::Float, Some(b)) => cand.abs_f64() > b.abs_f64(),
    }
}

/// Incremental row echelon form. Rows are added one at a time; each stored row
/// has a pivot column and is reduced against all earlier pivots.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    ncols: usize,
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
    reduced: bool,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new(), reduced: true }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Remainder of `v` after elimination against the stored pivots.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut x = v.to_vec();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if x[p].is_zero() {
                continue;
            }
            let f = x[p].clone();
            for (xi, ri) in x.iter_mut().zip(r) {
                xi.sub_mul(&f, ri);
            }
            x[p] = S::zero();
        }
        x
    }

    pub fn contains(&self, v: &[S]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    /// Adds a row; returns true if it was independent.
    pub fn push(&mut self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.ncols);
        if self.is_full() {
            return false;
        }
        let x = self.reduce(v);
        let mut piv: Option<usize> = None;
        for (j, xj) in x.iter().enumerate() {
            if better_pivot(xj, piv.map(|p| &x[p])) {
                piv = Some(j);
                if S::MODE == Mode::Exact {
                    break;
                }
            }
        }
        let Some(p) = piv else { return false };
        let inv = x[p].inv();
        let mut x: Vec<S> = x.iter().map(|e| if e.is_zero() { S::zero() } else { e.mul_ref(&inv) }).collect();
        x[p] = S::one();
        self.rows.push(x);
        self.pivots.push(p);
        self.reduced = false;
        true
    }

    /// Brings the stored rows to reduced row echelon form (pivot columns are
    /// zero in every other row).
    pub fn finish(&mut self) {
        if self.reduced {
            return;
        }
        let n = self.rows.len();
        for i in (0..n).rev() {
            let p = self.pivots[i];
            let ri = self.rows[i].clone();
            for j in 0..i {
                if self.rows[j][p].is_zero() {
                    continue;
                }
                let f = self.rows[j][p].clone();
                for (a, b) in self.rows[j].iter_mut().zip(&ri) {
                    a.sub_mul(&f, b);
                }
                self.rows[j][p] = S::zero();
            }
        }
        self.reduced = true;
    }

    /// Rows and pivots of the reduced form.
    pub fn rref(&mut self) -> (&[Vec<S>], &[usize]) {
        self.finish();
        (&self.rows, &self.pivots)
    }

    /// Kernel basis of the row space, i.e. all `x` with `row . x = 0`.
    pub fn nullspace(&mut self) -> Vec<Vec<S>> {
        self.finish();
        let is_pivot: Vec<Option<usize>> = {
            let mut v = vec![None; self.ncols];
            for (i, &p) in self.pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut x = vec![S::zero(); self.ncols];
            x[free] = S::one();
            for (i, &p) in self.pivots.iter().enumerate() {
                let c = &self.rows[i][free];
                if !c.is_zero() {
                    x[p] = c.neg_ref();
                }
            }
            out.push(x);
        }
        out
    }

    /// Coordinates of `v` with respect to the reduced basis, if `v` lies in
    /// the row space.
    pub fn coords(&mut self, v: &[S]) -> Option<Vec<S>> {
        self.finish();
        let c: Vec<S> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![S::zero(); self.ncols];
        for (ci, r) in c.iter().zip(&self.rows) {
            for (a, b) in recon.iter_mut().zip(r) {
                a.add_mul(ci, b);
            }
        }
        if vec_is_zero(&vec_sub(&recon, v)) {
            Some(c)
        } else {
            None
        }
    }

    pub fn basis(&mut self) -> Vec<Vec<S>> {
        self.finish();
        self.rows.clone()
    }
}

/// Kernel of `m` (column vectors `x` with `m x = 0`).
pub fn nullspace<S: Scalar>(m: &Mat<S>) -> Vec<Vec<S>> {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        e.push(&m.row(i));
        if e.is_full() {
            break;
        }
    }
    e.nullspace()
}

/// Kernel of the linear map whose equations are streamed as rows.
pub fn nullspace_rows<S: Scalar, I: IntoIterator<Item = Vec<S>>>(ncols: usize, rows: I) -> Vec<Vec<S>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        if vec_is_zero(&r) {
            continue;
        }
        e.push(&r);
        if e.is_full() {
            break;
        }
    }
    e.nullspace()
}

pub fn rank<S: Scalar>(m: &Mat<S>) -> usize {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        e.push(&m.row(i));
    }
    e.rank()
}

/// Rank of a family of vectors.
pub fn rank_of<S: Scalar>(vs: &[Vec<S>]) -> usize {
    let Some(n) = vs.first().map(|v| v.len()) else { return 0 };
    let mut e = Echelon::new(n);
    for v in vs {
        e.push(v);
    }
    e.rank()
}

/// Reduced basis of the span of the given vectors.
pub fn span_basis<S: Scalar>(n: usize, vs: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut e = Echelon::new(n);
    for v in vs {
        e.push(v);
    }
    e.basis()
}

/// Solves `m x = b` (one solution, if any).
pub fn solve<S: Scalar>(m: &Mat<S>, b: &[S]) -> Option<Vec<S>> {
    let n = m.cols();
    let mut e = Echelon::new(n + 1);
    for i in 0..m.rows() {
        let mut r = m.row(i);
        r.push(b[i].clone());
        e.push(&r);
    }
    let (rows, pivots) = e.rref();
    let mut x = vec![S::zero(); n];
    for (r, &p) in rows.iter().zip(pivots) {
        if p == n {
            return None;
        }
        x[p] = r[n].clone();
    }
    Some(x)
}

pub fn inverse<S: Scalar>(m: &Mat<S>) -> Option<Mat<S>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        cols.push(solve(m, &unit_vec(n, j))?);
    }
    Some(Mat::from_cols(n, &cols))
}

/// Orthogonal (not normalized) basis of the span, by exact Gram-Schmidt.
pub fn gram_schmidt<S: Scalar>(vs: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::new();
    let mut norms: Vec<S> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for (u, nu) in out.iter().zip(&norms) {
            let c = dot(&w, u).div_ref(nu);
            for (a, b) in w.iter_mut().zip(u) {
                a.sub_mul(&c, b);
            }
        }
        if !vec_is_zero(&w) {
            norms.push(dot(&w, &w));
            out.push(w);
        }
    }
    out
}

/// Orthogonal projector onto the span of the given vectors.
pub fn projector<S: Scalar>(n: usize, vs: &[Vec<S>]) -> Mat<S> {
    let ortho = gram_schmidt(vs);
    let mut p: Mat<S> = Mat::zeros(n, n);
    for u in &ortho {
        let nu = dot(u, u).inv();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            let ui = u[i].mul_ref(&nu);
            for j in 0..n {
                p[(i, j)].add_mul(&ui, &u[j]);
            }
        }
    }
    p
}

/// Basis of the orthogonal complement of the span of `vs` in `S^n`.
pub fn orth_complement<S: Scalar>(n: usize, vs: &[Vec<S>]) -> Vec<Vec<S>> {
    nullspace_rows(n, vs.iter().cloned())
}

/// Column space of a square matrix as a reduced basis.
pub fn column_space<S: Scalar>(m: &Mat<S>) -> Vec<Vec<S>> {
    let cols: Vec<Vec<S>> = (0..m.cols()).map(|j| m.col(j)).collect();
    span_basis(m.rows(), &cols)
}

/// Numerical eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues_f64(m: &Mat<f64>) -> Vec<f64> {
    let n = m.rows();
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(dm).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Eigenvalue candidates of `m` with their exact eigenspaces.
///
/// Float eigenvalues of `m` (and of its Galois conjugate) are recognized as
/// field elements and each candidate is kept only if `m - λ` has an exact
/// kernel. In float mode eigenvalues closer than `1e-6` but not within the
/// zero tolerance are reported through the `Err` branch as a clustering
/// failure.
pub fn exact_eigenspaces<S: Scalar>(m: &Mat<S>) -> Result<Vec<(S, Vec<Vec<S>>)>, String> {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let real_eigs = |a: &Mat<f64>| -> Vec<f64> {
        if a.is_symmetric() {
            sym_eigenvalues_f64(a)
        } else {
            let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| a[(i, j)]);
            dm.complex_eigenvalues().iter().filter(|z| z.im.abs() < 1e-7).map(|z| z.re).collect()
        }
    };
    let ev = real_eigs(&m.to_f64());
    let evc = if S::MODE == Mode::Exact { real_eigs(&m.conj().to_f64()) } else { ev.clone() };
    let mut cands: Vec<S> = Vec::new();
    for &x in &ev {
        if S::MODE == Mode::Float {
            if let Some(c) = cands.iter().find(|c| (c.to_f64() - x).abs() < 1e-6) {
                if (c.to_f64() - x).abs() > 1e-9 {
                    return Err(format!("eigenvalues {} and {} cannot be separated", c.to_f64(), x));
                }
                continue;
            }
            cands.push(S::recognize(x, x).expect("float recognize"));
            continue;
        }
        let mut conj_list: Vec<f64> = evc.clone();
        // try the closest conjugate candidates first; rational values pair with themselves
        conj_list.sort_by(|a, b| (a - x).abs().partial_cmp(&(b - x).abs()).unwrap());
        for &xc in &conj_list {
            if let Some(c) = S::recognize(x, xc) {
                if (c.to_f64() - x).abs() < 1e-7 && !cands.contains(&c) {
                    cands.push(c);
                    break;
                }
            }
        }
    }
    let mut out = Vec::new();
    for c in cands {
        let mut shifted = m.clone();
        for i in 0..n {
            let v = shifted[(i, i)].sub_ref(&c);
            shifted[(i, i)] = v;
        }
        let ns = nullspace(&shifted);
        if !ns.is_empty() {
            out.push((c, ns));
        }
    }
    Ok(out)
}

/// Signature `(n_plus, n_zero, n_minus)` of a symmetric form, by exact
/// congruence diagonalization.
pub fn signature<S: Scalar>(m: &Mat<S>) -> (usize, usize, usize) {
    assert!(m.is_square());
    let mut a = m.clone();
    let n = a.rows();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // find a nonzero diagonal entry among active indices
        let diag = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                // look for an off-diagonal entry and fold it into the diagonal
                let mut found = None;
                'outer: for &i in &active {
                    for &j in &active {
                        if i != j && !a[(i, j)].is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                let Some((i, j)) = found else { break };
                // e_i <- e_i + e_j
                for c in 0..n {
                    let v = a[(j, c)].clone();
                    a[(i, c)].add_assign_ref(&v);
                }
                for r in 0..n {
                    let v = a[(r, j)].clone();
                    a[(r, i)].add_assign_ref(&v);
                }
                i
            }
        };
        let d = a[(p, p)].clone();
        if d.signum_i() > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        let dinv = d.inv();
        let rowp = a.row(p);
        for &i in &active {
            if i == p || a[(i, p)].is_zero() {
                continue;
            }
            let f = a[(i, p)].mul_ref(&dinv);
            for c in 0..n {
                a[(i, c)].sub_mul(&f, &rowp[c]);
            }
        }
        let colp = a.col(p);
        for &j in &active {
            if j == p || a[(p, j)].is_zero() {
                continue;
            }
            let f = a[(p, j)].mul_ref(&dinv);
            for r in 0..n {
                a[(r, j)].sub_mul(&f, &colp[r]);
            }
        }
        active.retain(|&x| x != p);
        k += 1;
    }
    let _ = k;
    (pos, n - pos - neg, neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let m: Mat<Q> = Mat::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(vec_is_zero(&m.mul_vec(v)));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m: Mat<Q> = Mat::from_i64(2, 2, &[2, 1, 1, 1]);
        let x = solve(&m, &[qi(3), qi(2)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(1)]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        let sing: Mat<Q> = Mat::from_i64(2, 2, &[1, 1, 1, 1]);
        assert!(solve(&sing, &[qi(1), qi(0)]).is_none());
    }

    #[test]
    fn signature_detects_indefinite_forms() {
        let m: Mat<Q> = Mat::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(signature(&m), (1, 0, 1));
        let d: Mat<Q> = Mat::from_i64(3, 3, &[-2, 0, 0, 0, -1, 0, 0, 0, 0]);
        assert_eq!(signature(&d), (0, 1, 2));
    }

    #[test]
    fn projector_is_idempotent() {
        let v = vec![vec![qi(1), qi(1), qi(0)], vec![qi(0), qi(1), qi(1)]];
        let p: Mat<Q> = projector(3, &v);
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.trace(), qi(2));
        let c = orth_complement(3, &v);
        assert_eq!(c.len(), 1);
        assert_eq!(dot(&c[0], &v[0]), qi(0));
        let _ = q(1, 2);
    }
}
