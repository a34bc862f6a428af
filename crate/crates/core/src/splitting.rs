//! Canonical `g`-splittings `ℝⁿ = H ⊕ V`, the induced decomposition of a
//! 3-form, decomposability and the algebraic submersion identities.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{AltForm, CurvOperator};
use crate::liealg::{decompose, mat_json, scalar_json, supported_on, LieSubalgebra, Residual};
use crate::linalg::{nullspace_rows, projector, unit_vec, Mat};
use crate::reductive::{curv_derivation, curvature, curvature_endos, NomizuMap, ReductiveModel, Tensor3};
use crate::scalar::{Scalar, DEFAULT_TOL};

#[derive(Clone, Debug)]
pub struct Block<S> {
    /// Orthogonal basis of the block.
    pub basis: Vec<Vec<S>>,
    pub class: usize,
    /// `dim so(block) ∩ g`.
    pub supported: usize,
}

impl<S> Block<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalSplitting<S> {
    pub n: usize,
    pub horizontal: Vec<Block<S>>,
    pub vertical: Vec<Block<S>>,
    pub p_h: Mat<S>,
    pub p_v: Mat<S>,
    /// `τ^{VVH}`, zero for any canonical splitting.
    pub admissibility: Residual,
}

impl<S: Scalar> CanonicalSplitting<S> {
    pub fn dim_h(&self) -> usize {
        self.horizontal.iter().map(Block::dim).sum()
    }

    pub fn dim_v(&self) -> usize {
        self.vertical.iter().map(Block::dim).sum()
    }

    pub fn h_basis(&self) -> Vec<Vec<S>> {
        self.horizontal.iter().flat_map(|b| b.basis.iter().cloned()).collect()
    }

    pub fn v_basis(&self) -> Vec<Vec<S>> {
        self.vertical.iter().flat_map(|b| b.basis.iter().cloned()).collect()
    }

    /// A splitting given directly by a vertical subspace, e.g. span of
    /// coordinate vectors; no canonicity is claimed.
    pub fn from_vertical(n: usize, v: &[Vec<S>], tau: &AltForm<S>) -> Self {
        let p_v = projector(n, v);
        let p_h = Mat::identity(n).sub(&p_v);
        let h = crate::linalg::column_space(&p_h);
        let split = torsion_split_proj(&p_h, &p_v, tau);
        CanonicalSplitting {
            n,
            horizontal: if h.is_empty() { vec![] } else { vec![Block { basis: h, class: 0, supported: 0 }] },
            vertical: if v.is_empty() { vec![] } else { vec![Block { basis: v.to_vec(), class: 1, supported: 0 }] },
            p_h,
            p_v,
            admissibility: Residual::of(split.tau_vvh.terms().map(|(_, c)| c.clone())),
        }
    }

    pub fn to_json(&self) -> Value {
        let blocks = |bs: &[Block<S>]| {
            bs.iter()
                .map(|b| {
                    json!({
                        "dim": b.dim(),
                        "class": b.class,
                        "supported_dim": b.supported,
                        "basis": b.basis.iter().map(|v| v.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>()
        };
        json!({
            "dim": self.n,
            "dim_h": self.dim_h(),
            "dim_v": self.dim_v(),
            "horizontal": blocks(&self.horizontal),
            "vertical": blocks(&self.vertical),
            "p_h": mat_json(&self.p_h),
            "p_v": mat_json(&self.p_v),
            "admissibility_residual": self.admissibility.max_abs,
        })
    }
}

/// Largest violation of `g ⊆ stab(τ)`.
pub fn stabilizer_residual<S: Scalar>(g: &LieSubalgebra<S>, tau: &AltForm<S>) -> Result<Residual> {
    let mut r = Residual::zero();
    for b in g.basis() {
        r = r.merge(Residual::of(tau.derivation(b)?.terms().map(|(_, c)| c.clone())));
    }
    Ok(r)
}

/// Canonical splitting: an irreducible block is horizontal iff `g` has a
/// nonzero element supported on it; blocks from isotypic classes of
/// multiplicity > 1 are vertical.
pub fn canonical_splitting<S: Scalar>(g: &LieSubalgebra<S>, tau: &AltForm<S>, seed: u64) -> Result<CanonicalSplitting<S>> {
    let n = g.n();
    if tau.dim() != n {
        return Err(Error::DimMismatch { expected: n, got: tau.dim() });
    }
    let st = stabilizer_residual(g, tau)?;
    if !st.passes(S::MODE, DEFAULT_TOL) {
        return Err(Error::NotInStabilizer(st.max_abs));
    }
    let dec = decompose(g, seed)?;
    let mut mult = vec![0usize; dec.isotypic.len()];
    for s in &dec.summands {
        mult[s.class] += 1;
    }
    let (mut horizontal, mut vertical) = (Vec::new(), Vec::new());
    let mut p_h = Mat::zeros(n, n);
    for s in &dec.summands {
        let supported = if mult[s.class] > 1 { 0 } else { supported_on(g, &s.basis).len() };
        let block = Block { basis: s.basis.clone(), class: s.class, supported };
        if supported > 0 {
            p_h = p_h.add(&s.projector);
            horizontal.push(block);
        } else {
            vertical.push(block);
        }
    }
    let p_v = Mat::identity(n).sub(&p_h);
    let split = torsion_split_proj(&p_h, &p_v, tau);
    let admissibility = Residual::of(split.tau_vvh.terms().map(|(_, c)| c.clone()));
    if !admissibility.passes(S::MODE, DEFAULT_TOL) {
        return Err(Error::Model(format!("canonical splitting is not admissible (residual {})", admissibility.max_abs)));
    }
    Ok(CanonicalSplitting { n, horizontal, vertical, p_h, p_v, admissibility })
}

/// [`canonical_splitting`] with a holonomy candidate `h ⊆ g`.
pub fn canonical_splitting_with<S: Scalar>(
    g: &LieSubalgebra<S>,
    h: &LieSubalgebra<S>,
    tau: &AltForm<S>,
    seed: u64,
) -> Result<CanonicalSplitting<S>> {
    if !h.is_subalgebra_of(g) {
        return Err(Error::NotSubalgebra);
    }
    canonical_splitting(g, tau, seed)
}

/// `τ = τ^H + τ^m + τ^{VVH} + τ^V` by number of vertical slots.
#[derive(Clone, Debug)]
pub struct TorsionSplit<S> {
    pub tau_h: AltForm<S>,
    pub tau_m: AltForm<S>,
    pub tau_vvh: AltForm<S>,
    pub tau_v: AltForm<S>,
}

impl<S: Scalar> TorsionSplit<S> {
    pub fn sum(&self) -> AltForm<S> {
        self.tau_h.add(&self.tau_m).add(&self.tau_vvh).add(&self.tau_v)
    }

    pub fn is_admissible(&self) -> bool {
        self.tau_vvh.is_zero()
    }

    /// O'Neill tensor `A = −τ^m`.
    pub fn oneill_a(&self) -> AltForm<S> {
        self.tau_m.neg()
    }

    pub fn to_json(&self) -> Result<Value> {
        Ok(json!({
            "tau_h": self.tau_h.to_json()?,
            "tau_m": self.tau_m.to_json()?,
            "tau_vvh": self.tau_vvh.to_json()?,
            "tau_v": self.tau_v.to_json()?,
        }))
    }
}

/// `T(P₁x, P₂y, P₃z)` with symmetric projectors.
fn slot_project<S: Scalar>(tau: &AltForm<S>, ps: [&Mat<S>; 3]) -> Tensor3<S> {
    let n = tau.dim();
    let full = Tensor3::from_fn(n, |i, j, k| tau.get(&[i, j, k]));
    let mut cur = full;
    for (slot, p) in ps.iter().enumerate() {
        let prev = cur;
        cur = Tensor3::from_fn(n, |i, j, k| {
            let mut s = S::zero();
            for a in 0..n {
                let (c, idx) = match slot {
                    0 => (&p[(a, i)], (a, j, k)),
                    1 => (&p[(a, j)], (i, a, k)),
                    _ => (&p[(a, k)], (i, j, a)),
                };
                if !c.is_zero() {
                    s.add_mul(c, prev.get(idx.0, idx.1, idx.2));
                }
            }
            s
        });
    }
    cur
}

fn sum_to_form<S: Scalar>(n: usize, parts: &[Tensor3<S>]) -> AltForm<S> {
    let mut f = AltForm::zero(n, 3);
    for idx in crate::exterior::multi_indices(n, 3) {
        let mut c = S::zero();
        for t in parts {
            c.add_assign_ref(t.get(idx[0], idx[1], idx[2]));
        }
        f.add_term(&idx, &c);
    }
    f
}

pub fn torsion_split_proj<S: Scalar>(p_h: &Mat<S>, p_v: &Mat<S>, tau: &AltForm<S>) -> TorsionSplit<S> {
    let n = tau.dim();
    let (h, v) = (p_h, p_v);
    TorsionSplit {
        tau_h: sum_to_form(n, &[slot_project(tau, [h, h, h])]),
        tau_m: sum_to_form(n, &[slot_project(tau, [h, h, v]), slot_project(tau, [h, v, h]), slot_project(tau, [v, h, h])]),
        tau_vvh: sum_to_form(n, &[slot_project(tau, [v, v, h]), slot_project(tau, [v, h, v]), slot_project(tau, [h, v, v])]),
        tau_v: sum_to_form(n, &[slot_project(tau, [v, v, v])]),
    }
}

pub fn torsion_split<S: Scalar>(s: &CanonicalSplitting<S>, tau: &AltForm<S>) -> TorsionSplit<S> {
    torsion_split_proj(&s.p_h, &s.p_v, tau)
}

/// Residuals of the block refinement: `τ^H − Σ_α τ|_{Λ³H_α}` and
/// `τ^m − Σ_α τ|_{Λ²H_α⊗V}`.
pub fn block_refinement_residuals<S: Scalar>(s: &CanonicalSplitting<S>, tau: &AltForm<S>) -> (Residual, Residual) {
    let n = s.n;
    let split = torsion_split(s, tau);
    let mut th = AltForm::zero(n, 3);
    let mut tm = AltForm::zero(n, 3);
    for b in &s.horizontal {
        let p = projector(n, &b.basis);
        th = th.add(&sum_to_form(n, &[slot_project(tau, [&p, &p, &p])]));
        tm = tm.add(&sum_to_form(
            n,
            &[slot_project(tau, [&p, &p, &s.p_v]), slot_project(tau, [&p, &s.p_v, &p]), slot_project(tau, [&s.p_v, &p, &p])],
        ));
    }
    let r = |f: AltForm<S>| Residual::of(f.terms().map(|(_, c)| c.clone()));
    (r(split.tau_h.sub(&th)), r(split.tau_m.sub(&tm)))
}

/// Elements of `g` mapping `span(vs)` into itself.
pub fn preserving_subalgebra<S: Scalar>(g: &LieSubalgebra<S>, vs: &[Vec<S>]) -> Result<LieSubalgebra<S>> {
    let n = g.n();
    let p = projector(n, vs);
    let q = Mat::identity(n).sub(&p);
    let imgs: Vec<Mat<S>> = g.basis().iter().map(|b| q.mul(b).mul(&p)).collect();
    let rows = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).map(|(r, c)| imgs.iter().map(|m| m[(r, c)].clone()).collect::<Vec<S>>());
    let elems: Vec<Mat<S>> = nullspace_rows(g.dim(), rows)
        .iter()
        .map(|c| {
            let mut m = Mat::zeros(n, n);
            for (ci, b) in c.iter().zip(g.basis()) {
                m.axpy(ci, b);
            }
            m
        })
        .collect();
    LieSubalgebra::new(n, &elems)
}

/// Witness for a decomposition `τ = τ₁ + τ₂`, `τ_i ∈ Λ³T_i`.
#[derive(Clone, Debug)]
pub enum Decomposability<S> {
    Decomposable { classes: Vec<usize>, t1: Vec<Vec<S>>, t2: Vec<Vec<S>> },
    Indecomposable { partitions_checked: usize },
}

impl<S: Scalar> Decomposability<S> {
    pub fn is_decomposable(&self) -> bool {
        matches!(self, Decomposability::Decomposable { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Decomposability::Decomposable { classes, t1, t2 } => json!({
                "verdict": "decomposable",
                "classes": classes,
                "t1": t1.iter().map(|v| v.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "t2": t2.iter().map(|v| v.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            Decomposability::Indecomposable { partitions_checked } => json!({
                "verdict": "indecomposable under isotypic partitions",
                "partitions_checked": partitions_checked,
            }),
        }
    }
}

const MAX_CLASSES: usize = 16;

/// Searches all 2-partitions of the isotypic classes of `g` for one under
/// which `τ` has no mixed components.
pub fn decomposability_search<S: Scalar>(g: &LieSubalgebra<S>, tau: &AltForm<S>, seed: u64) -> Result<Decomposability<S>> {
    let n = g.n();
    let dec = decompose(g, seed)?;
    let k = dec.isotypic.len();
    if k > MAX_CLASSES {
        return Err(Error::IndeterminateSplit(format!("{k} isotypic classes exceed the search limit {MAX_CLASSES}")));
    }
    let mut checked = 0;
    // class 0 always in T1; the full set is excluded
    for mask in (1usize..(1 << k)).step_by(2) {
        if mask == (1 << k) - 1 {
            continue;
        }
        checked += 1;
        let mut p1 = Mat::zeros(n, n);
        for (c, p) in dec.isotypic.iter().enumerate() {
            if mask & (1 << c) != 0 {
                p1 = p1.add(p);
            }
        }
        let p2 = Mat::identity(n).sub(&p1);
        let s = torsion_split_proj(&p1, &p2, tau);
        if s.tau_m.is_zero() && s.tau_vvh.is_zero() {
            let classes = (0..k).filter(|c| mask & (1 << c) != 0).collect();
            let part = |inside: bool| -> Vec<Vec<S>> {
                dec.summands.iter().filter(|s| (mask & (1 << s.class) != 0) == inside).flat_map(|s| s.basis.iter().cloned()).collect()
            };
            return Ok(Decomposability::Decomposable { classes, t1: part(true), t2: part(false) });
        }
    }
    Ok(Decomposability::Indecomposable { partitions_checked: checked })
}

/// Outcome of the special-type lemma: `g` trivial on `V ≠ 0` and `τ`
/// indecomposable force `τ^H = 0`.
#[derive(Clone, Debug)]
pub struct SpecialTypeVerdict {
    pub v_nonzero: bool,
    pub trivial_on_v: bool,
    pub tau_h_zero: bool,
    pub indecomposable: bool,
    pub applicable: bool,
    /// False only when the lemma applies and `τ^H ≠ 0`.
    pub consistent: bool,
    pub tau_h_norm: f64,
}

impl SpecialTypeVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "v_nonzero": self.v_nonzero,
            "trivial_on_v": self.trivial_on_v,
            "tau_h_zero": self.tau_h_zero,
            "indecomposable": self.indecomposable,
            "applicable": self.applicable,
            "consistent": self.consistent,
            "tau_h_max_abs": self.tau_h_norm,
        })
    }
}

pub fn special_type_check<S: Scalar>(
    s: &CanonicalSplitting<S>,
    tau: &AltForm<S>,
    g: &LieSubalgebra<S>,
    seed: u64,
) -> Result<SpecialTypeVerdict> {
    let v = s.v_basis();
    let trivial_on_v = g.basis().iter().all(|b| v.iter().all(|x| b.mul_vec(x).iter().all(|c| c.is_zero())));
    let split = torsion_split(s, tau);
    let tau_h_zero = split.tau_h.is_zero();
    let indecomposable = !decomposability_search(g, tau, seed)?.is_decomposable();
    let applicable = !v.is_empty() && trivial_on_v && indecomposable;
    Ok(SpecialTypeVerdict {
        v_nonzero: !v.is_empty(),
        trivial_on_v,
        tau_h_zero,
        indecomposable,
        applicable,
        consistent: !applicable || tau_h_zero,
        tau_h_norm: split.tau_h.max_abs(),
    })
}

/// Residuals of the algebraic submersion identities for `∇^τ` on a model
/// carrying a splitting of `m`.
#[derive(Clone, Debug)]
pub struct SubmersionReport<S> {
    /// `(τ_V)_* τ^H`.
    pub s4: Residual,
    /// `R^τ(X, V)`.
    pub s7_mixed: Residual,
    /// `R^τ(X,Y)V + 4[τ_X,τ_Y]V − 4τ_{τ_X Y}V`.
    pub s7_horizontal: Residual,
    /// `R^τ(X,Y)V − 12τ_{τ_X Y}V` (nearly parallel `G₂` sharpening).
    pub np_g2: Residual,
    /// `g`-equivariance of `pr_{Λ²V} ∘ R^τ`.
    pub vertical_equivariance: Residual,
    /// Fit of `R^τ(U,V)W = c τ_{τ_U V} W` on `V`, when `τ^V ≠ 0`.
    pub vertical_fit: Option<(S, Residual)>,
}

impl<S: Scalar> SubmersionReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "s4": self.s4.max_abs,
            "s7_mixed": self.s7_mixed.max_abs,
            "s7_horizontal": self.s7_horizontal.max_abs,
            "np_g2": self.np_g2.max_abs,
            "vertical_equivariance": self.vertical_equivariance.max_abs,
            "vertical_fit": self.vertical_fit.as_ref().map(|(c, r)| json!({"c": scalar_json(c), "residual": r.max_abs})),
        })
    }
}

pub fn submersion_identity_check<S: Scalar>(
    model: &ReductiveModel<S>,
    l_tau: &NomizuMap<S>,
    tau: &AltForm<S>,
    s: &CanonicalSplitting<S>,
    g: &LieSubalgebra<S>,
) -> Result<SubmersionReport<S>> {
    let n = model.dim_m();
    if s.n != n || tau.dim() != n {
        return Err(Error::DimMismatch { expected: n, got: s.n });
    }
    let hb = s.h_basis();
    let vb = s.v_basis();
    let split = torsion_split(s, tau);
    let r = curvature(model, l_tau);
    let te = |x: &[S]| tau.tau_x(x);

    let mut s4 = Residual::zero();
    for v in &vb {
        s4 = s4.merge(Residual::of(split.tau_h.derivation(&te(v)?)?.terms().map(|(_, c)| c.clone())));
    }

    let mut s7_mixed = Residual::zero();
    for x in &hb {
        for v in &vb {
            s7_mixed = s7_mixed.merge(Residual::of_mat(&r.endo_xy(x, v)));
        }
    }

    let mut s7_horizontal = Residual::zero();
    let mut np_g2 = Residual::zero();
    let four = S::from_i64(4);
    let twelve = S::from_i64(12);
    for x in &hb {
        let tx = te(x)?;
        for y in &hb {
            let ty = te(y)?;
            let rxy = r.endo_xy(x, y);
            let br = tx.commutator(&ty);
            let txy = te(&tx.mul_vec(y))?;
            for v in &vb {
                let lhs = rxy.mul_vec(v);
                let a = br.mul_vec(v);
                let b = txy.mul_vec(v);
                s7_horizontal = s7_horizontal.merge(Residual::of(
                    (0..n).map(|i| lhs[i].add_ref(&four.mul_ref(&a[i])).sub_ref(&four.mul_ref(&b[i]))),
                ));
                np_g2 = np_g2.merge(Residual::of((0..n).map(|i| lhs[i].sub_ref(&twelve.mul_ref(&b[i])))));
            }
        }
    }

    let endos: Vec<Mat<S>> = curvature_endos(model, l_tau).iter().map(|e| s.p_v.mul(e).mul(&s.p_v)).collect();
    let rv = CurvOperator::from_endos(n, &endos);
    let mut vertical_equivariance = Residual::zero();
    for a in g.basis() {
        vertical_equivariance = vertical_equivariance.merge(Residual::of_mat(curv_derivation(&rv, a).matrix()));
    }

    let mut num = S::zero();
    let mut den = S::zero();
    let mut triples = Vec::new();
    for u in &vb {
        let tu = te(u)?;
        for v in &vb {
            let ruv = r.endo_xy(u, v);
            let tuv = te(&tu.mul_vec(v))?;
            for w in &vb {
                let lhs = ruv.mul_vec(w);
                let t = tuv.mul_vec(w);
                for (a, b) in lhs.iter().zip(&t) {
                    num.add_mul(a, b);
                    den.add_mul(b, b);
                }
                triples.push((lhs, t));
            }
        }
    }
    let vertical_fit = if den.is_zero() {
        None
    } else {
        let c = num.div_ref(&den);
        let mut res = Residual::zero();
        for (lhs, t) in &triples {
            for (a, b) in lhs.iter().zip(t) {
                res.absorb(&a.sub_ref(&c.mul_ref(b)));
            }
        }
        Some((c, res))
    };

    Ok(SubmersionReport { s4, s7_mixed, s7_horizontal, np_g2, vertical_equivariance, vertical_fit })
}

/// `Λ − k·τ^V`: the Nomizu map of `∇^τ − k τ^V`.
pub fn shifted_connection<S: Scalar>(l: &NomizuMap<S>, tau_v: &AltForm<S>, k: &S) -> Result<NomizuMap<S>> {
    let n = tau_v.dim();
    let mut maps = Vec::with_capacity(n);
    for (x, m) in l.maps.iter().enumerate() {
        maps.push(m.sub(&tau_v.tau_x(&unit_vec::<S>(n, x))?.scale(k)));
    }
    Ok(NomizuMap { maps })
}

/// `R(e_i, e_j) W` for all `i < j` and `W ∈ V`.
pub fn vertical_flatness_residual<S: Scalar>(model: &ReductiveModel<S>, l: &NomizuMap<S>, vb: &[Vec<S>]) -> Residual {
    let mut r = Residual::zero();
    for e in curvature_endos(model, l) {
        for w in vb {
            r = r.merge(Residual::of(e.mul_vec(w)));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{so_basis_elem, stabilizer};
    use crate::models::forms::g2_form;
    use crate::models::su3::{so3_diag, u3_in_so7};
    use crate::scalar::{qi, Q};

    fn vol3_pair() -> (AltForm<Q>, LieSubalgebra<Q>) {
        let mut t = AltForm::zero(6, 3);
        t.add_term(&[0, 1, 2], &qi(1));
        t.add_term(&[3, 4, 5], &qi(1));
        let mut gens = Vec::new();
        for off in [0, 3] {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                gens.push(so_basis_elem(6, off + i, off + j));
            }
        }
        (t, LieSubalgebra::new(6, &gens).unwrap())
    }

    #[test]
    fn product_decomposes() {
        let (t, g) = vol3_pair();
        let d = decomposability_search(&g, &t, 1).unwrap();
        assert!(d.is_decomposable());
        let v: Vec<Vec<Q>> = (3..6).map(|i| unit_vec(6, i)).collect();
        let s = CanonicalSplitting::from_vertical(6, &v, &t);
        let sp = torsion_split(&s, &t);
        assert!(sp.tau_m.is_zero());
        assert_eq!(sp.tau_v.get(&[3, 4, 5]), qi(1));
        assert_eq!(sp.sum(), t);
        let sc = canonical_splitting(&g, &t, 1).unwrap();
        assert_eq!(sc.dim_v(), 0);
        let verdict = special_type_check(&sc, &t, &g, 1).unwrap();
        assert!(!verdict.indecomposable && !verdict.applicable);
    }

    #[test]
    fn g2_splittings() {
        let phi = g2_form::<Q>();
        let g2 = stabilizer(&phi);
        assert!(!decomposability_search(&g2, &phi, 3).unwrap().is_decomposable());
        let s = canonical_splitting(&g2, &phi, 3).unwrap();
        assert_eq!((s.dim_h(), s.dim_v()), (7, 0));
        // so(4) ⊂ g₂ preserving the associative 3-plane e₀e₁e₂
        let v: Vec<Vec<Q>> = (0..3).map(|i| unit_vec(7, i)).collect();
        let so4 = preserving_subalgebra(&g2, &v).unwrap();
        assert_eq!(so4.dim(), 6);
        let s = canonical_splitting(&so4, &phi, 3).unwrap();
        assert_eq!((s.dim_h(), s.dim_v()), (4, 3));
        assert!(torsion_split(&s, &phi).tau_h.is_zero());
    }

    #[test]
    fn spec_examples() {
        let so3 = so3_diag::<Q>().unwrap();
        let t = crate::models::forms::su3_form::<Q>();
        let s = canonical_splitting(&so3, &t, 5).unwrap();
        assert_eq!((s.dim_h(), s.dim_v()), (0, 6));
        assert_eq!(s.vertical.len(), 2);
        let u3 = u3_in_so7::<Q>();
        let mut tau = AltForm::zero(7, 3);
        for p in 0..3 {
            tau.add_term(&[0, 2 * p + 1, 2 * p + 2], &qi(1));
        }
        let s = canonical_splitting(&u3, &tau, 5).unwrap();
        assert_eq!((s.dim_h(), s.dim_v()), (6, 1));
    }

    #[test]
    fn squashed_sphere_identities() {
        use crate::models::threead::build_3ad_sphere;
        use crate::reductive::{holonomy, parallel_residual, Tensor};
        use crate::scalar::Q5;
        let a = Q5::from_i64(1);
        let b = build_3ad_sphere::<Q5>(a.clone(), Q5::from_i64(5), None).unwrap();
        let m = b.model().unwrap();
        let l = b.nomizu().unwrap();
        let v: Vec<Vec<Q5>> = (0..3).map(|i| unit_vec(7, i)).collect();
        let g = preserving_subalgebra(&stabilizer(&b.tau), &v).unwrap();
        let s = canonical_splitting(&g, &b.tau, 2).unwrap();
        assert_eq!((s.dim_h(), s.dim_v()), (4, 3));
        let rep = submersion_identity_check(m, l, &b.tau, &s, &g).unwrap();
        assert!(rep.s4.exact_zero && rep.s7_mixed.exact_zero && rep.s7_horizontal.exact_zero);
        assert!(rep.np_g2.exact_zero && rep.vertical_equivariance.exact_zero);
        let (c, r) = rep.vertical_fit.unwrap();
        assert!(r.exact_zero);
        assert_eq!(c, Q5::from_i64(-24));
        assert!(holonomy(m, l).unwrap().is_subalgebra_of(&g));
        let tv = torsion_split(&s, &b.tau).tau_v;
        let aux = shifted_connection(l, &tv, &Q5::from_i64(6)).unwrap();
        assert!(vertical_flatness_residual(m, &aux, &v).exact_zero);
        assert!(parallel_residual(m, &aux, &Tensor::Form(tv)).unwrap().exact_zero);
    }

    #[test]
    fn rejects_non_stabilizing() {
        let (t, _) = vol3_pair();
        let g = LieSubalgebra::new(6, &[so_basis_elem::<Q>(6, 0, 3)]).unwrap();
        assert!(matches!(canonical_splitting(&g, &t, 0), Err(Error::NotInStabilizer(_))));
    }
}
