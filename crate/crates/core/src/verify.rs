//! Named check suites.
//!
//! A check is a row of the static registry: an id, the suite it belongs to,
//! the acceptance criterion it feeds, the claim it tests (`anchor`), the
//! exact field it needs and a runner generic over the scalar type. Runners
//! return a [`Measured`] value; the pass rule is applied here, never inside
//! the runner.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{multi_indices, AltForm};
use crate::liealg::{
    casimir_so, curvature_space_dim, so_basis_elem, stabilizer, Definiteness, LieSubalgebra, Residual,
};
use crate::linalg::{unit_vec, Mat};
use crate::models::{self, berger, dim3, forms, gray, kxk, sasaki, su3, threead, Field, ModelBundle, Params};
use crate::reductive::{curvature, holonomy, parallel_residual, riemann_from_tau, transvection, NomizuMap, Tensor};
use crate::scalar::{Mode, Scalar};
use crate::splitting::{
    block_refinement_residuals, canonical_splitting, decomposability_search, preserving_subalgebra, shifted_connection,
    special_type_check, submersion_identity_check, torsion_split, torsion_split_proj, vertical_flatness_residual,
    CanonicalSplitting,
};

pub const SUITES: &[&str] = &["core", "cs-classification", "gray", "ng2", "sasaki", "threead", "dim3"];

/// What a runner measured.
#[derive(Clone, Debug, PartialEq)]
pub enum Measured {
    /// Must vanish.
    Residual(Residual),
    /// Must not vanish.
    NonZero(Residual),
    /// Integer invariants that must match.
    Dims { got: Vec<usize>, want: Vec<usize> },
    Flag { ok: bool, detail: String },
}

impl Measured {
    fn dim(got: usize, want: usize) -> Self {
        Measured::Dims { got: vec![got], want: vec![want] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub id: String,
    pub criterion: u8,
    pub status: Status,
    pub residual: f64,
    pub tol: f64,
    pub anchor: &'static str,
    pub detail: String,
}

impl CheckResult {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "criterion": self.criterion,
            "status": self.status,
            "residual": self.residual,
            "tol": self.tol,
            "anchor": self.anchor,
            "detail": self.detail,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub mode: Mode,
    pub version: &'static str,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "mode": self.mode,
            "version": self.version,
            "checks": self.checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
        })
    }

    /// One line per check and a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let st = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            out.push_str(&format!("{st} {:<40} residual={:.3e} [{}]", c.id, c.residual, c.anchor));
            if c.status == Status::Fail && !c.detail.is_empty() {
                out.push_str(&format!(" -- {}", c.detail));
            }
            out.push('\n');
        }
        let pass = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        out.push_str(&format!("suite {} ({} mode, seed {}): {pass}/{} passed\n", self.suite, self.mode, self.seed, self.checks.len()));
        out
    }
}

/// Inputs handed to a runner.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub mode: Mode,
    pub field: Field,
    pub seed: u64,
    pub arg: usize,
}

pub type Runner = fn(&Ctx) -> Result<Measured>;

#[derive(Clone)]
pub struct Check {
    pub id: String,
    pub suite: &'static str,
    pub criterion: u8,
    pub anchor: &'static str,
    pub field: Field,
    pub arg: usize,
    pub run: Runner,
}

/// Instantiates a generic runner over the check's exact field, or `f64` in float mode.
macro_rules! runner {
    ($f:ident) => {{
        fn r(c: &Ctx) -> Result<Measured> {
            match (c.mode, c.field) {
                (Mode::Float, _) => $f::<f64>(c),
                (Mode::Exact, Field::Q) => $f::<crate::scalar::Q>(c),
                (Mode::Exact, Field::Q2) => $f::<crate::scalar::Q2>(c),
                (Mode::Exact, Field::Q3) => $f::<crate::scalar::Q3>(c),
                (Mode::Exact, Field::Q5) => $f::<crate::scalar::Q5>(c),
            }
        }
        r as Runner
    }};
}

struct Reg(Vec<Check>);

impl Reg {
    fn add(&mut self, id: impl Into<String>, suite: &'static str, criterion: u8, field: Field, arg: usize, anchor: &'static str, run: Runner) {
        self.0.push(Check { id: id.into(), suite, criterion, anchor, field, arg, run });
    }
}

// ---------------------------------------------------------------- catalog

struct Entry {
    key: &'static str,
    model: &'static str,
    params: &'static [(&'static str, &'static str)],
    field: Field,
}

const CATALOG: &[Entry] = &[
    Entry { key: "kxk", model: "kxk", params: &[("t", "1/2")], field: Field::Q },
    Entry { key: "dim3", model: "dim3", params: &[("s", "1"), ("t", "2")], field: Field::Q },
    Entry { key: "dim3-berger", model: "dim3-berger", params: &[], field: Field::Q },
    Entry { key: "s6", model: "s6", params: &[], field: Field::Q },
    Entry { key: "flag", model: "flag", params: &[], field: Field::Q },
    Entry { key: "cp3", model: "cp3", params: &[], field: Field::Q },
    Entry { key: "s3s3", model: "s3s3", params: &[], field: Field::Q3 },
    Entry { key: "berger", model: "berger", params: &[], field: Field::Q },
    Entry { key: "sphere-3sasaki", model: "sphere", params: &[("alpha", "1"), ("delta", "1")], field: Field::Q },
    Entry { key: "sphere-squashed", model: "sphere", params: &[("alpha", "1"), ("delta", "5")], field: Field::Q5 },
    Entry { key: "stiefel2", model: "stiefel", params: &[("n", "2")], field: Field::Q },
    Entry { key: "stiefel3", model: "stiefel", params: &[("n", "3")], field: Field::Q },
];

fn catalog_bundle<S: Scalar>(k: usize) -> Result<ModelBundle<S>> {
    let e = &CATALOG[k];
    let p: Params = e.params.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    models::build(e.model, &p)
}

fn catalog_index(key: &str) -> usize {
    CATALOG.iter().position(|e| e.key == key).expect("catalog key")
}

/// Forms-only pairs `(g, τ)` for the splitting layer.
fn form_pair<S: Scalar>(k: usize) -> Result<(LieSubalgebra<S>, AltForm<S>)> {
    Ok(match k {
        0 => {
            let phi = forms::g2_form();
            (stabilizer(&phi), phi)
        }
        1 => {
            let t = forms::su3_form();
            (stabilizer(&t), t)
        }
        2 => vol3_pair()?,
        3 => (su3::so3_diag()?, forms::su3_form()),
        4 => {
            let mut tau = AltForm::zero(7, 3);
            for p in 0..3 {
                tau.add_term(&[0, 2 * p + 1, 2 * p + 2], &S::one());
            }
            (su3::u3_in_so7(), tau)
        }
        _ => return Err(Error::BadParam(format!("form pair {k}"))),
    })
}

const FORM_PAIRS: &[&str] = &["g2", "su3-form", "vol3-vol3", "so3-diag", "u3"];

fn vol3_pair<S: Scalar>() -> Result<(LieSubalgebra<S>, AltForm<S>)> {
    let mut t = AltForm::zero(6, 3);
    t.add_term(&[0, 1, 2], &S::one());
    t.add_term(&[3, 4, 5], &S::one());
    let mut gens = Vec::new();
    for off in [0, 3] {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            gens.push(so_basis_elem(6, off + i, off + j));
        }
    }
    Ok((LieSubalgebra::new(6, &gens)?, t))
}

fn merge_all(rs: impl IntoIterator<Item = Residual>) -> Residual {
    rs.into_iter().fold(Residual::zero(), Residual::merge)
}

fn form_residual<S: Scalar>(f: &AltForm<S>) -> Residual {
    Residual::of(f.terms().map(|(_, c)| c.clone()))
}

fn scalar_id<S: Scalar>(n: usize, s: S) -> Mat<S> {
    Mat::identity(n).scale(&s)
}

// ---------------------------------------------------------------- core

fn stab_g2<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(stabilizer(&forms::g2_form::<S>()).dim(), 14))
}

fn stab_su3_form<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(stabilizer(&forms::su3_form::<S>()).dim(), 8))
}

fn stab_g2_scaled<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(stabilizer(&forms::g2_form::<S>().scale(&S::from_i64(-3))).dim(), 14))
}

fn casimir<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let n = c.arg;
    Ok(Measured::Residual(Residual::of_mat(&casimir_so::<S>(n).sub(&scalar_id(n, S::from_i64(n as i64 - 1))))))
}

fn curv_so3<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(curvature_space_dim(&LieSubalgebra::<S>::so(3)), 6))
}

fn curv_so4<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(curvature_space_dim(&LieSubalgebra::<S>::so(4)), 20))
}

fn curv_su3_adjoint<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(curvature_space_dim(&su3::su3_adjoint::<S>()?), 1))
}

fn curv_so3_irr<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(curvature_space_dim(&berger::so3_irr_on_r7::<S>()?), 0))
}

fn g2_commutator<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::Residual(forms::cross_product_identities(&forms::g2_form::<S>()).0))
}

fn g2_anticommutator<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::Residual(forms::cross_product_identities(&forms::g2_form::<S>()).1))
}

/// Canonical connection holonomy against `span [m,m]_h`.
fn eq3<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = catalog_bundle::<S>(c.arg)?;
    let m = b.model()?;
    let hol = holonomy(m, &NomizuMap::canonical(m.dim_m()))?;
    let span = m.mm_h_span()?;
    let ok = hol.same_as(&span);
    Ok(Measured::Flag { ok, detail: format!("hol dim {}, [m,m]_h dim {}", hol.dim(), span.dim()) })
}

fn eq3_dim<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (key, want) = [("s6", 8), ("flag", 2), ("berger", 3)][c.arg];
    let b = catalog_bundle::<S>(catalog_index(key))?;
    let m = b.model()?;
    Ok(Measured::dim(holonomy(m, &NomizuMap::canonical(m.dim_m()))?.dim(), want))
}

fn curvature_forms<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = catalog_bundle::<S>(c.arg)?;
    let rep = riemann_from_tau(b.model()?, &b.tau)?;
    Ok(Measured::Residual(rep.eq6_residual.merge(rep.bracket_residual)))
}

fn bianchi_rg<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = catalog_bundle::<S>(c.arg)?;
    Ok(Measured::Residual(riemann_from_tau(b.model()?, &b.tau)?.bianchi_residual))
}

fn admissible_split<S: Scalar>(g: &LieSubalgebra<S>, tau: &AltForm<S>, seed: u64) -> Result<Measured> {
    let s = canonical_splitting(g, tau, seed)?;
    Ok(Measured::Residual(form_residual(&torsion_split(&s, tau).tau_vvh)))
}

fn admissible_stab<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = catalog_bundle::<S>(c.arg)?;
    admissible_split(&stabilizer(&b.tau), &b.tau, c.seed)
}

fn admissible_hol<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = catalog_bundle::<S>(c.arg)?;
    let hol = holonomy(b.model()?, b.nomizu()?)?;
    admissible_split(&hol, &b.tau, c.seed)
}

fn admissible_form<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (g, tau) = form_pair::<S>(c.arg)?;
    admissible_split(&g, &tau, c.seed)
}

fn split_determinism<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (g, tau) = form_pair::<S>(c.arg)?;
    let base = canonical_splitting(&g, &tau, c.seed)?;
    let mut r = Residual::zero();
    for k in 1..5 {
        let s = canonical_splitting(&g, &tau, c.seed.wrapping_add(k))?;
        r = r.merge(Residual::of_mat(&s.p_h.sub(&base.p_h))).merge(Residual::of_mat(&s.p_v.sub(&base.p_v)));
    }
    Ok(Measured::Residual(r))
}

fn decomposable_vol3<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (g, t) = vol3_pair::<S>()?;
    let d = decomposability_search(&g, &t, c.seed)?;
    Ok(Measured::Flag { ok: d.is_decomposable(), detail: d.to_json().to_string() })
}

fn indecomposable_g2<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let phi = forms::g2_form::<S>();
    let d = decomposability_search(&stabilizer(&phi), &phi, c.seed)?;
    Ok(Measured::Flag { ok: !d.is_decomposable(), detail: d.to_json().to_string() })
}

fn random_rational<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    let num: i64 = rng.random_range(-4..=4);
    let den: i64 = rng.random_range(1..=3);
    S::from_ratio(num, den)
}

fn random_form<S: Scalar>(rng: &mut ChaCha8Rng, n: usize, k: usize) -> AltForm<S> {
    let mut f = AltForm::zero(n, k);
    for idx in multi_indices(n, k) {
        if rng.random_range(0..3) == 0 {
            f.add_term(&idx, &random_rational(rng));
        }
    }
    f
}

fn random_skew<S: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Mat<S> {
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x: S = random_rational(rng);
            a[(i, j)] = x.neg_ref();
            a[(j, i)] = x;
        }
    }
    a
}

pub const PROPERTY_CASES: usize = 200;

/// `A_*(α∧β) = A_*α∧β + α∧A_*β` on random rational data.
fn leibniz<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x6c65_6962);
    let mut r = Residual::zero();
    for _ in 0..PROPERTY_CASES {
        let n = rng.random_range(2..=6usize);
        let p = rng.random_range(0..=n);
        let q = rng.random_range(0..=n - p);
        let a = random_skew::<S>(&mut rng, n);
        let x = random_form::<S>(&mut rng, n, p);
        let y = random_form::<S>(&mut rng, n, q);
        let lhs = x.wedge(&y)?.derivation(&a)?;
        let rhs = x.derivation(&a)?.wedge(&y)?.add(&x.wedge(&y.derivation(&a)?)?);
        r = r.merge(form_residual(&lhs.sub(&rhs)));
    }
    Ok(Measured::Residual(r))
}

/// `α_*β = [α,β]` for 2-forms read as skew endomorphisms.
fn commutator_law<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x636f_6d6d);
    let mut r = Residual::zero();
    for _ in 0..PROPERTY_CASES {
        let n = rng.random_range(2..=7usize);
        let x = random_form::<S>(&mut rng, n, 2);
        let y = random_form::<S>(&mut rng, n, 2);
        let (a, b) = (x.to_endo()?, y.to_endo()?);
        let lhs = y.derivation(&a)?.to_endo()?;
        r = r.merge(Residual::of_mat(&lhs.sub(&a.commutator(&b))));
    }
    Ok(Measured::Residual(r))
}

// ---------------------------------------------------------------- cs-classification

const KXK_T: [(i64, i64, usize); 4] = [(0, 1, 3), (1, 2, 3), (1, 1, 0), (2, 1, 3)];

fn kxk_formulas<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (p, q, _) = KXK_T[c.arg];
    let t = S::from_ratio(p, q);
    let b = kxk::build_kxk(t.clone())?;
    let (rt, rr) = kxk::formula_residuals(&b, &t)?;
    Ok(Measured::Residual(rt.merge(rr)))
}

fn kxk_holonomy<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (p, q, want) = KXK_T[c.arg];
    let b = kxk::build_kxk(S::from_ratio(p, q))?;
    Ok(Measured::dim(holonomy(b.model()?, b.nomizu()?)?.dim(), want))
}

fn s3s3_transvection<S: Scalar>() -> Result<crate::reductive::TransvectionAlgebra<S>> {
    let b = gray::build_gray::<S>("s3s3")?;
    transvection(b.model()?, b.nomizu()?)
}

fn transvection_dim<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(s3s3_transvection::<S>()?.dim(), 9))
}

fn transvection_jacobi<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::Residual(s3s3_transvection::<S>()?.algebra.jacobi_residual()))
}

fn transvection_killing<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let k = s3s3_transvection::<S>()?.algebra.killing();
    Ok(Measured::Flag { ok: k.verdict == Definiteness::NegativeDefinite, detail: format!("signature {:?}", k.signature) })
}

fn transvection_ideals<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let t = s3s3_transvection::<S>()?;
    let ideals = t.algebra.simple_ideals().ok_or_else(|| Error::Model("transvection algebra is not semisimple".into()))?;
    let got: Vec<usize> = ideals.iter().map(Vec::len).collect();
    Ok(Measured::Dims { got, want: vec![3, 3, 3] })
}

// ---------------------------------------------------------------- gray

fn gray_bundle<S: Scalar>(c: &Ctx) -> Result<ModelBundle<S>> {
    gray::build_gray(gray::GRAY_NAMES[c.arg])
}

fn gray_stab<S: Scalar>(c: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(stabilizer(&gray_bundle::<S>(c)?.tau).dim(), 8))
}

fn gray_compat<S: Scalar>(c: &Ctx) -> Result<Measured> {
    Ok(Measured::Residual(merge_all(gray::compatibility_residuals(&gray_bundle::<S>(c)?)?)))
}

fn gray_invariance<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = gray_bundle::<S>(c)?;
    Ok(Measured::Residual(b.invariance_residual().merge(b.model()?.jacobi_residual())))
}

fn gray_norm<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (r, count) = gray::norm_identity(&gray_bundle::<S>(c)?)?;
    if count == 0 {
        return Ok(Measured::Flag { ok: false, detail: "no pairs X ⊥ Y, JY".into() });
    }
    Ok(Measured::Residual(r))
}

fn gray_twistor<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (r, count) = gray::twistor_scale(&gray_bundle::<S>(c)?)?;
    if count == 0 {
        return Ok(Measured::Flag { ok: false, detail: "no vertical directions".into() });
    }
    Ok(Measured::Residual(r))
}

// ---------------------------------------------------------------- ng2

fn squashed<S: Scalar>() -> Result<ModelBundle<S>> {
    threead::build_3ad_sphere(S::one(), S::from_i64(5), None)
}

/// `so(4) ⊂ g₂` preserving the fibre directions `e₀,e₁,e₂`, and its splitting.
fn ng2_split<S: Scalar>(b: &ModelBundle<S>, seed: u64) -> Result<(LieSubalgebra<S>, CanonicalSplitting<S>)> {
    let v: Vec<Vec<S>> = (0..3).map(|i| unit_vec(7, i)).collect();
    let g = preserving_subalgebra(&stabilizer(&b.tau), &v)?;
    let s = canonical_splitting(&g, &b.tau, seed)?;
    Ok((g, s))
}

/// `⟨τ,φ⟩/⟨φ,φ⟩`, i.e. `τ₀/12`.
fn ng2_ratio<S: Scalar>(b: &ModelBundle<S>) -> Result<S> {
    let phi = b.form("phi")?;
    Ok(b.tau.dot(phi).div_ref(&phi.dot(phi)))
}

fn ng2_parallel<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    Ok(Measured::Residual(parallel_residual(b.model()?, b.nomizu()?, &Tensor::Form(b.tau.clone()))?))
}

fn ng2_parallel_off<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let gamma = [3, 0, -1][c.arg];
    let b = threead::build_3ad_sphere(S::one(), S::from_i64(5), Some(S::from_i64(gamma)))?;
    Ok(Measured::NonZero(parallel_residual(b.model()?, b.nomizu()?, &Tensor::Form(b.tau.clone()))?))
}

fn ng2_tau_phi<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    Ok(Measured::Residual(form_residual(&b.tau.sub(b.form("phi")?))))
}

fn ng2_stab<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(stabilizer(&squashed::<S>()?.tau).dim(), 14))
}

fn ng2_identities<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let (a, b) = forms::cross_product_identities(squashed::<S>()?.form("phi")?);
    Ok(Measured::Residual(a.merge(b)))
}

fn ng2_c<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let (g, s) = ng2_split(&b, c.seed)?;
    let rep = submersion_identity_check(b.model()?, b.nomizu()?, &b.tau, &s, &g)?;
    let (k, fit) = rep.vertical_fit.ok_or_else(|| Error::Model("tau^V vanishes".into()))?;
    Ok(Measured::Residual(fit.merge(Residual::of([k.add_ref(&S::from_i64(24))]))))
}

fn ng2_ric_tau<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let k = ng2_ratio(&b)?;
    let ric = curvature(b.model()?, b.nomizu()?).ricci();
    let want = S::from_i64(48).mul_ref(&k).mul_ref(&k);
    Ok(Measured::Residual(Residual::of_mat(&ric.sub(&scalar_id(7, want)))))
}

fn ng2_ric_g<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let tau0 = ng2_ratio(&b)?.mul_ref(&S::from_i64(12));
    let ric = riemann_from_tau(b.model()?, &b.tau)?.ricci;
    let want = S::from_ratio(3, 8).mul_ref(&tau0).mul_ref(&tau0);
    Ok(Measured::Residual(Residual::of_mat(&ric.sub(&scalar_id(7, want)))))
}

/// `Ric^g − Ric^τ = −tr(τ_X τ_Y)` for parallel `τ`.
fn ng2_ric_consistency<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let m = b.model()?;
    let diff = riemann_from_tau(m, &b.tau)?.ricci.sub(&curvature(m, b.nomizu()?).ricci());
    let te = b.tau.tau_endos()?;
    let want = Mat::from_fn(7, 7, |x, y| te[x].mul(&te[y]).trace().neg_ref());
    Ok(Measured::Residual(Residual::of_mat(&diff.sub(&want))))
}

fn ng2_hol<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let (g, _) = ng2_split(&b, c.seed)?;
    let hol = holonomy(b.model()?, b.nomizu()?)?;
    Ok(Measured::Flag { ok: hol.is_subalgebra_of(&g), detail: format!("hol dim {}, so(4) dim {}", hol.dim(), g.dim()) })
}

fn ng2_aux_flat<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let (_, s) = ng2_split(&b, c.seed)?;
    let tv = torsion_split(&s, &b.tau).tau_v;
    let aux = shifted_connection(b.nomizu()?, &tv, &S::from_i64(6))?;
    Ok(Measured::Residual(vertical_flatness_residual(b.model()?, &aux, &s.v_basis())))
}

fn ng2_xi123<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    Ok(Measured::Residual(parallel_residual(b.model()?, b.nomizu()?, &Tensor::Form(b.form("xi123")?.clone()))?))
}

fn ng2_split_dims<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (_, s) = ng2_split(&squashed::<S>()?, c.seed)?;
    Ok(Measured::Dims { got: vec![s.dim_h(), s.dim_v()], want: vec![4, 3] })
}

fn ng2_tau_h<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let (_, s) = ng2_split(&b, c.seed)?;
    Ok(Measured::Residual(form_residual(&torsion_split(&s, &b.tau).tau_h)))
}

/// Submersion identities on a model with a chosen `g`; `arg` picks the residual.
fn submersion<S: Scalar>(b: &ModelBundle<S>, g: &LieSubalgebra<S>, s: &CanonicalSplitting<S>, which: usize) -> Result<Measured> {
    let rep = submersion_identity_check(b.model()?, b.nomizu()?, &b.tau, s, g)?;
    Ok(Measured::Residual(match which {
        0 => rep.s4,
        1 => rep.s7_mixed.merge(rep.s7_horizontal),
        2 => rep.vertical_equivariance,
        _ => rep.np_g2,
    }))
}

fn ng2_submersion<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let (g, s) = ng2_split(&b, c.seed)?;
    submersion(&b, &g, &s, c.arg)
}

fn ng2_block<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = squashed::<S>()?;
    let (_, s) = ng2_split(&b, c.seed)?;
    let (h, m) = block_refinement_residuals(&s, &b.tau);
    Ok(Measured::Residual(h.merge(m)))
}

// ---------------------------------------------------------------- sasaki

fn stiefel<S: Scalar>(n: usize) -> Result<ModelBundle<S>> {
    sasaki::build_sasaki_stiefel(n)
}

fn sasaki_stab<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let n = c.arg;
    Ok(Measured::dim(stabilizer(&stiefel::<S>(n)?.tau).dim(), n * n))
}

fn sasaki_eq5<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::Residual(merge_all(sasaki::sasaki_residuals(&stiefel::<S>(3)?)?)))
}

fn sasaki_eq9<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::Residual(sasaki::curvature_relation_residual(&stiefel::<S>(3)?, 3)?))
}

fn sasaki_hol_inclusion<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let (ok, hol, base) = sasaki::holonomy_inclusion(&stiefel::<S>(3)?, 3)?;
    Ok(Measured::Flag { ok, detail: format!("hol dim {}, base holonomy dim {}", hol.dim(), base.dim()) })
}

fn sasaki_hol_dim<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = stiefel::<S>(3)?;
    Ok(Measured::dim(holonomy(b.model()?, b.nomizu()?)?.dim(), 3))
}

fn sasaki_parallel<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = stiefel::<S>(3)?;
    Ok(Measured::Residual(parallel_residual(b.model()?, b.nomizu()?, &Tensor::Form(b.tau.clone()))?))
}

/// `g = stab(τ) ≅ u(3)` and its splitting.
fn sasaki_split<S: Scalar>(b: &ModelBundle<S>, seed: u64) -> Result<(LieSubalgebra<S>, CanonicalSplitting<S>)> {
    let g = stabilizer(&b.tau);
    let s = canonical_splitting(&g, &b.tau, seed)?;
    Ok((g, s))
}

fn sasaki_split_dims<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (_, s) = sasaki_split(&stiefel::<S>(3)?, c.seed)?;
    Ok(Measured::Dims { got: vec![s.dim_h(), s.dim_v()], want: vec![6, 1] })
}

fn sasaki_submersion<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = stiefel::<S>(3)?;
    let (g, s) = sasaki_split(&b, c.seed)?;
    submersion(&b, &g, &s, c.arg)
}

fn sasaki_block<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = stiefel::<S>(3)?;
    let (_, s) = sasaki_split(&b, c.seed)?;
    let (h, m) = block_refinement_residuals(&s, &b.tau);
    Ok(Measured::Residual(h.merge(m)))
}

/// Special-type lemma with `g = hol`: never contradicted.
fn sasaki_special_type<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = stiefel::<S>(3)?;
    let hol = holonomy(b.model()?, b.nomizu()?)?;
    let s = canonical_splitting(&hol, &b.tau, c.seed)?;
    let v = special_type_check(&s, &b.tau, &hol, c.seed)?;
    Ok(Measured::Flag { ok: v.consistent, detail: v.to_json().to_string() })
}

// ---------------------------------------------------------------- threead

fn threead_relations<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = threead::build_3ad_tensors::<S>(c.arg, S::one(), S::from_i64(3), S::from_i64(-2))?;
    Ok(Measured::Residual(merge_all(threead::structure_residuals(&b)?)))
}

fn threead_n2<S: Scalar>() -> Result<ModelBundle<S>> {
    let (a, d) = (S::one(), S::from_i64(5));
    let g = threead::canonical_gamma(&a, &d);
    threead::build_3ad_tensors(2, a, d, g)
}

fn threead_stab_n2<S: Scalar>(_: &Ctx) -> Result<Measured> {
    Ok(Measured::dim(stabilizer(&threead_n2::<S>()?.tau).dim(), 13))
}

fn threead_stab_phi<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = threead::build_3ad_tensors::<S>(1, S::one(), S::from_i64(5), S::from_i64(2))?;
    Ok(Measured::dim(stabilizer(b.form("phi")?).dim(), 14))
}

/// `(α, δ)` for the homogeneous sphere checks; `arg` selects the row.
const SPHERES: [(i64, i64); 3] = [(1, 1), (1, 5), (1, 2)];

fn sphere<S: Scalar>(c: &Ctx) -> Result<(ModelBundle<S>, S, S)> {
    let (a, d) = SPHERES[c.arg];
    let (a, d) = (S::from_i64(a), S::from_i64(d));
    Ok((threead::build_3ad_sphere(a.clone(), d.clone(), None)?, a, d))
}

fn sphere_relations<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (b, a, d) = sphere::<S>(c)?;
    let r = merge_all(threead::structure_residuals(&b)?);
    Ok(Measured::Residual(r.merge(threead::dxi_residual(&b, &a, &d)?).merge(b.model()?.jacobi_residual())))
}

fn sphere_parallel_structure<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let (b, _, _) = sphere::<S>(c)?;
    let (m, l) = (b.model()?, b.nomizu()?);
    let mut r = Residual::zero();
    for i in 1..=3 {
        r = r.merge(parallel_residual(m, l, &Tensor::Vector(b.vector(&format!("xi{i}"))?.clone()))?);
        r = r.merge(parallel_residual(m, l, &Tensor::Endo(b.endo(&format!("Phi{i}"))?.clone()))?);
    }
    Ok(Measured::Residual(r))
}

/// Pieces of `τ^γ` against the vertical span of `ξ₁, ξ₂, ξ₃`.
fn threead_split_pieces<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = threead_n2::<S>()?;
    let n = b.dim();
    let (a, d) = (S::one(), S::from_i64(5));
    let gamma = threead::canonical_gamma(&a, &d);
    let xis: Vec<Vec<S>> = (1..=3).map(|i| b.vector(&format!("xi{i}")).cloned()).collect::<Result<_>>()?;
    let p_v = crate::linalg::projector(n, &xis);
    let p_h = Mat::identity(n).sub(&p_v);
    let sp = torsion_split_proj(&p_h, &p_v, &b.tau);
    let want_v = b.form("xi123")?.scale(&gamma.div_ref(&S::from_i64(2)));
    let mut want_m = AltForm::zero(n, 3);
    for (i, xi) in xis.iter().enumerate() {
        let w = AltForm::one_form(xi).wedge(&AltForm::from_endo(b.endo(&format!("PhiH{}", i + 1))?)?)?;
        want_m = want_m.add(&w.scale(&a));
    }
    let r = form_residual(&sp.tau_h)
        .merge(form_residual(&sp.tau_vvh))
        .merge(form_residual(&sp.tau_v.sub(&want_v)))
        .merge(form_residual(&sp.tau_m.sub(&want_m)));
    Ok(Measured::Residual(r))
}

fn threead_indecomposable<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let b = threead_n2::<S>()?;
    let d = decomposability_search(&stabilizer(&b.tau), &b.tau, c.seed)?;
    Ok(Measured::Flag { ok: !d.is_decomposable(), detail: d.to_json().to_string() })
}

// ---------------------------------------------------------------- dim3

fn dim3_eq8<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let t = S::from_i64(c.arg as i64);
    Ok(Measured::Residual(dim3::eq8_residual(&dim3::build_dim3(S::one(), t)?)?))
}

fn dim3_flat<S: Scalar>(c: &Ctx) -> Result<Measured> {
    let t = S::from_i64(c.arg as i64);
    let (a, b) = dim3::flat_case_residuals(&dim3::build_dim3(t.clone(), t)?)?;
    Ok(Measured::Residual(a.merge(b)))
}

fn dim3_berger_xi<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let (p, d) = dim3::parallel_xi_residuals(&dim3::build_dim3_berger(S::from_i64(2))?)?;
    Ok(Measured::Residual(p.merge(d)))
}

fn dim3_berger_hol<S: Scalar>(_: &Ctx) -> Result<Measured> {
    let b = dim3::build_dim3_berger::<S>(S::from_i64(2))?;
    Ok(Measured::dim(holonomy(b.model()?, b.nomizu()?)?.dim(), 1))
}

// ---------------------------------------------------------------- registry

/// The full check registry, in a fixed order.
pub fn registry() -> Vec<Check> {
    use Field::*;
    let mut r = Reg(Vec::new());

    // core
    r.add("core.stab.g2", "core", 1, Q, 0, "the G2 three-form has a 14-dimensional stabilizer", runner!(stab_g2));
    r.add("core.stab.su3-form", "core", 1, Q, 0, "the SU(3) three-form Re(dz1 dz2 dz3) has stabilizer su(3)", runner!(stab_su3_form));
    r.add("core.stab.g2-scaled", "core", 1, Q, 0, "stabilizer is invariant under rescaling the form", runner!(stab_g2_scaled));
    for n in 3..=8 {
        r.add(format!("core.casimir.so{n}"), "core", 4, Q, n, "Casimir of so(n) on R^n equals (n-1) Id", runner!(casimir));
    }
    r.add("core.curvspace.so3", "core", 5, Q, 0, "curvature space of so(3) on R^3 is Sym^2 R^3", runner!(curv_so3));
    r.add("core.curvspace.su3-adjoint", "core", 5, Q3, 0, "curvature space of adjoint su(3) is one-dimensional", runner!(curv_su3_adjoint));
    r.add("core.curvspace.so3-irr", "core", 5, Q, 0, "curvature space of irreducible so(3) on R^7 vanishes", runner!(curv_so3_irr));
    r.add("core.g2.commutator", "core", 7, Q, 0, "2 phi_(phi_X Y) + [phi_X, phi_Y] = 3 X^Y on the basis grid", runner!(g2_commutator));
    r.add("core.g2.anticommutator", "core", 7, Q, 0, "{phi_X, phi_Y} = -2<X,Y> Id + X.Y on the basis grid", runner!(g2_anticommutator));
    for (k, e) in CATALOG.iter().enumerate() {
        r.add(format!("core.hol-canonical.{}", e.key), "core", 3, e.field, k, "canonical connection holonomy equals span [m,m]_h", runner!(eq3));
    }
    for (k, name) in ["s6", "flag", "berger"].iter().enumerate() {
        r.add(format!("core.hol-canonical-dim.{name}"), "core", 3, Q, k, "canonical holonomy dimensions of S6, F12 and the Berger space", runner!(eq3_dim));
    }
    for (k, e) in CATALOG.iter().enumerate() {
        r.add(format!("core.curvature-forms.{}", e.key), "core", 13, e.field, k, "R^g from R^tau: tau^2 + b(tau^2) form agrees with bracket form", runner!(curvature_forms));
        r.add(format!("core.bianchi.{}", e.key), "core", 13, e.field, k, "first Bianchi identity b(R^g) = 0", runner!(bianchi_rg));
    }
    for (k, e) in CATALOG.iter().enumerate() {
        r.add(format!("core.admissible.stab.{}", e.key), "core", 12, e.field, k, "canonical splitting is admissible: tau has no Lambda^2 V (x) H part", runner!(admissible_stab));
        r.add(format!("core.admissible.hol.{}", e.key), "core", 12, e.field, k, "canonical splitting is admissible: tau has no Lambda^2 V (x) H part", runner!(admissible_hol));
    }
    for (k, name) in FORM_PAIRS.iter().enumerate() {
        r.add(format!("core.admissible.form.{name}"), "core", 12, Q, k, "canonical splitting is admissible: tau has no Lambda^2 V (x) H part", runner!(admissible_form));
        r.add(format!("core.split-determinism.{name}"), "core", 12, Q, k, "canonical splitting projectors do not depend on the seed", runner!(split_determinism));
    }
    r.add("core.decomposable.vol3-vol3", "core", 12, Q, 0, "vol3 + vol3 on R^3 + R^3 is decomposable", runner!(decomposable_vol3));
    r.add("core.indecomposable.g2", "core", 12, Q, 0, "the G2 form is indecomposable", runner!(indecomposable_g2));
    r.add("core.property.leibniz", "core", 13, Q, 0, "derivations act on wedge products by the Leibniz rule", runner!(leibniz));
    r.add("core.property.commutator", "core", 13, Q, 0, "on 2-forms the derivation action is the matrix commutator", runner!(commutator_law));

    // cs-classification
    for (k, name) in ["0", "1_2", "1", "2"].iter().enumerate() {
        r.add(format!("cs.kxk.t{name}.formulas"), "cs-classification", 2, Q, k, "(KxK)/K: T^t = -2t[X,Y] and R^t = -(1-t^2) ad ad", runner!(kxk_formulas));
        r.add(format!("cs.kxk.t{name}.holonomy"), "cs-classification", 2, Q, k, "(KxK)/K: holonomy so(3) unless t = +-1, where the connection is flat", runner!(kxk_holonomy));
    }
    r.add("cs.s3s3.transvection.dim", "cs-classification", 9, Q3, 0, "transvection algebra of S3xS3 is 9-dimensional", runner!(transvection_dim));
    r.add("cs.s3s3.transvection.jacobi", "cs-classification", 9, Q3, 0, "transvection bracket satisfies Jacobi", runner!(transvection_jacobi));
    r.add("cs.s3s3.transvection.killing", "cs-classification", 9, Q3, 0, "transvection algebra of S3xS3 is compact semisimple", runner!(transvection_killing));
    r.add("cs.s3s3.transvection.ideals", "cs-classification", 9, Q3, 0, "transvection algebra of S3xS3 is so(3)+so(3)+so(3)", runner!(transvection_ideals));
    r.add("cs.curvspace.so4", "cs-classification", 5, Q, 0, "curvature space of so(4) on R^4 has dimension 20", runner!(curv_so4));

    // gray
    for (k, name) in gray::GRAY_NAMES.iter().enumerate() {
        let (field, crit) = if *name == "s3s3" { (Q3, 1) } else { (Q, 8) };
        r.add(format!("gray.{name}.stab"), "gray", crit, field, k, "Gray torsion is stabilized exactly by su(3)", runner!(gray_stab));
        r.add(format!("gray.{name}.compatibility"), "gray", 8, field, k, "J^2 = -1, tau_X anticommutes with J, tau_X JX = 0", runner!(gray_compat));
        r.add(format!("gray.{name}.invariance"), "gray", 8, field, k, "named tensors are isotropy invariant and the model satisfies Jacobi", runner!(gray_invariance));
        r.add(format!("gray.{name}.norm"), "gray", 8, field, k, "|tau_X Y|^2 = 1/4 for orthonormal X perpendicular to Y and JY at scal 30", runner!(gray_norm));
        if *name == "flag" || *name == "cp3" {
            r.add(format!("gray.{name}.twistor"), "gray", 8, field, k, "-tr((4 J tau_V)^2) = 16 for unit vertical V at scal 30", runner!(gray_twistor));
        }
    }

    // ng2
    r.add("ng2.parallel", "ng2", 6, Q5, 0, "tau^gamma is parallel at gamma = 2(delta - 4 alpha)", runner!(ng2_parallel));
    for (k, g) in ["3", "0", "-1"].iter().enumerate() {
        r.add(format!("ng2.parallel-off.gamma{g}"), "ng2", 6, Q5, k, "tau^gamma is not parallel away from the canonical gamma", runner!(ng2_parallel_off));
    }
    r.add("ng2.tau-is-phi", "ng2", 6, Q5, 0, "at delta = 5 alpha the torsion is alpha phi", runner!(ng2_tau_phi));
    r.add("ng2.stab", "ng2", 6, Q5, 0, "stabilizer of the squashed-sphere torsion is g2", runner!(ng2_stab));
    r.add("ng2.g2-identities", "ng2", 7, Q5, 0, "G2 cross product identities for the squashed-sphere phi", runner!(ng2_identities));
    r.add("ng2.c", "ng2", 6, Q5, 0, "R^tau(U,V)W = c tau_(tau_U V) W on V with c = -24", runner!(ng2_c));
    r.add("ng2.ricci-tau", "ng2", 6, Q5, 0, "Ric^tau = 48 (tau0/12)^2 Id", runner!(ng2_ric_tau));
    r.add("ng2.ricci-g", "ng2", 6, Q5, 0, "Ric^g = (3 tau0^2 / 8) Id", runner!(ng2_ric_g));
    r.add("ng2.ricci-difference", "ng2", 6, Q5, 0, "Ric^g - Ric^tau = -tr(tau_X tau_Y) for parallel tau", runner!(ng2_ric_consistency));
    r.add("ng2.holonomy-in-so4", "ng2", 6, Q5, 0, "holonomy lies in the so(4) block of g2", runner!(ng2_hol));
    r.add("ng2.aux-flat", "ng2", 6, Q5, 0, "the shifted connection Lambda^tau - 6 (tau^V)_X is flat along V", runner!(ng2_aux_flat));
    r.add("ng2.xi123-parallel", "ng2", 6, Q5, 0, "xi_123 is parallel for the canonical connection", runner!(ng2_xi123));
    r.add("ng2.split-dims", "ng2", 12, Q5, 0, "so(4) splitting of R^7 is H + V with dims (4,3)", runner!(ng2_split_dims));
    r.add("ng2.tau-h-zero", "ng2", 12, Q5, 0, "the horizontal torsion vanishes", runner!(ng2_tau_h));
    r.add("ng2.s4", "ng2", 12, Q5, 0, "(tau_V)_* tau^H = 0 for vertical V", runner!(ng2_submersion));
    r.add("ng2.s7", "ng2", 12, Q5, 1, "R^tau(X,V) = 0 and the horizontal curvature identity on V", runner!(ng2_submersion));
    r.add("ng2.vertical-equivariance", "ng2", 12, Q5, 2, "projected vertical curvature is g-equivariant", runner!(ng2_submersion));
    r.add("ng2.np-g2-curvature", "ng2", 12, Q5, 3, "R^tau(X,Y)V = 12 tau_(tau_X Y) V", runner!(ng2_submersion));
    r.add("ng2.block-refinement", "ng2", 12, Q5, 0, "tau^H and tau^m respect the refined horizontal blocks", runner!(ng2_block));

    // sasaki
    r.add("sasaki.stab.n3", "sasaki", 1, Q, 3, "Sasaki torsion eta ^ d eta is stabilized by u(n)", runner!(sasaki_stab));
    r.add("sasaki.stab.n2", "sasaki", 1, Q, 2, "Sasaki torsion eta ^ d eta is stabilized by u(n)", runner!(sasaki_stab));
    r.add("sasaki.structure", "sasaki", 11, Q, 0, "d xi = 2 Phi and nabla^g_X Phi = -X ^ xi", runner!(sasaki_eq5));
    r.add("sasaki.curvature-relation", "sasaki", 11, Q, 0, "curvature of the Sasaki base with the +4 omega(X,Y) J Z term", runner!(sasaki_eq9));
    r.add("sasaki.holonomy-inclusion", "sasaki", 11, Q, 0, "Hol(nabla^tau) lies in the base holonomy times U(1)", runner!(sasaki_hol_inclusion));
    r.add("sasaki.holonomy-dim", "sasaki", 11, Q, 0, "canonical holonomy of the Stiefel Sasaki space is 3-dimensional", runner!(sasaki_hol_dim));
    r.add("sasaki.parallel", "sasaki", 11, Q, 0, "Sasaki torsion is parallel", runner!(sasaki_parallel));
    r.add("sasaki.split-dims", "sasaki", 12, Q, 0, "u(3) splitting of R^7 is H + V with dims (6,1)", runner!(sasaki_split_dims));
    r.add("sasaki.s4", "sasaki", 12, Q, 0, "(tau_V)_* tau^H = 0 for vertical V", runner!(sasaki_submersion));
    r.add("sasaki.s7", "sasaki", 12, Q, 1, "R^tau(X,V) = 0 and the horizontal curvature identity on V", runner!(sasaki_submersion));
    r.add("sasaki.vertical-equivariance", "sasaki", 12, Q, 2, "projected vertical curvature is g-equivariant", runner!(sasaki_submersion));
    r.add("sasaki.block-refinement", "sasaki", 12, Q, 0, "tau^H and tau^m respect the refined horizontal blocks", runner!(sasaki_block));
    r.add("sasaki.special-type", "sasaki", 12, Q, 0, "special-type lemma is never contradicted with g = hol", runner!(sasaki_special_type));

    // threead
    for n in [1, 2] {
        r.add(format!("threead.relations.n{n}"), "threead", 12, Q, n, "3-(alpha,delta)-Sasaki structure tensor relations", runner!(threead_relations));
    }
    r.add("threead.stab.n2", "threead", 1, Q, 0, "tau^gamma in dimension 11 is stabilized by sp(2) + sp(1)", runner!(threead_stab_n2));
    r.add("threead.stab.phi", "threead", 1, Q, 0, "the 7-dimensional canonical 3-form has stabilizer g2", runner!(threead_stab_phi));
    r.add("threead.sphere.3sasaki", "threead", 12, Q, 0, "homogeneous 3-Sasaki sphere satisfies the structure equations", runner!(sphere_relations));
    r.add("threead.sphere.squashed", "threead", 6, Q5, 1, "squashed sphere satisfies the 3-(alpha,delta)-Sasaki structure equations", runner!(sphere_relations));
    r.add("threead.sphere.parallel-delta2", "threead", 12, Q2, 2, "at delta = 2 alpha the xi_i and Phi_i are parallel", runner!(sphere_parallel_structure));
    r.add("threead.split-pieces", "threead", 12, Q, 0, "tau^gamma splits as alpha sum xi_i ^ Phi_i^H + (gamma/2) xi_123", runner!(threead_split_pieces));
    r.add("threead.indecomposable", "threead", 12, Q, 0, "tau^gamma is indecomposable", runner!(threead_indecomposable));

    // dim3
    for t in [1, 2] {
        r.add(format!("dim3.eq8.t{t}"), "dim3", 10, Q, t, "curvature of a 3-dimensional torsion geometry from tau = t vol", runner!(dim3_eq8));
        r.add(format!("dim3.flat.t{t}"), "dim3", 10, Q, t, "flat nabla^tau forces R^g = -t^2 Id on Lambda^2", runner!(dim3_flat));
    }
    r.add("dim3.berger.xi", "dim3", 10, Q, 0, "on Berger spheres xi is parallel and d xi is proportional to the contact form", runner!(dim3_berger_xi));
    r.add("dim3.berger.holonomy", "dim3", 10, Q, 0, "canonical holonomy of a Berger sphere is u(1)", runner!(dim3_berger_hol));

    r.0
}

/// Suite names with their check counts, `all` last.
pub fn list_suites() -> Vec<(String, usize)> {
    let reg = registry();
    let mut out: Vec<(String, usize)> =
        SUITES.iter().map(|s| (s.to_string(), reg.iter().filter(|c| c.suite == *s).count())).collect();
    out.push(("all".into(), reg.len()));
    out
}

fn evaluate(c: &Check, mode: Mode, seed: u64, tol: f64) -> CheckResult {
    let ctx = Ctx { mode, field: c.field, seed, arg: c.arg };
    let tol_out = if mode == Mode::Exact { 0.0 } else { tol };
    let mut res = CheckResult {
        id: c.id.clone(),
        criterion: c.criterion,
        status: Status::Fail,
        residual: f64::NAN,
        tol: tol_out,
        anchor: c.anchor,
        detail: String::new(),
    };
    match (c.run)(&ctx) {
        Err(e) => res.detail = format!("error: {e}"),
        Ok(Measured::Residual(r)) => {
            res.residual = r.max_abs;
            if r.passes(mode, tol) {
                res.status = Status::Pass;
            }
        }
        Ok(Measured::NonZero(r)) => {
            res.residual = r.max_abs;
            let nonzero = match mode {
                Mode::Exact => !r.exact_zero,
                Mode::Float => r.max_abs > tol,
            };
            if nonzero {
                res.status = Status::Pass;
            }
            res.detail = "expected a nonzero residual".into();
        }
        Ok(Measured::Dims { got, want }) => {
            res.residual = if got.len() == want.len() {
                got.iter().zip(&want).map(|(a, b)| a.abs_diff(*b) as f64).sum()
            } else {
                f64::INFINITY
            };
            if got == want {
                res.status = Status::Pass;
            }
            res.detail = format!("got {got:?}, expected {want:?}");
        }
        Ok(Measured::Flag { ok, detail }) => {
            res.residual = if ok { 0.0 } else { 1.0 };
            if ok {
                res.status = Status::Pass;
            }
            res.detail = detail;
        }
    }
    res
}

fn run_checks(suite: &str, checks: Vec<Check>, mode: Mode, seed: u64, tol: f64) -> SuiteReport {
    let mut out: Vec<CheckResult> = checks.iter().map(|c| evaluate(c, mode, seed, tol)).collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    SuiteReport { suite: suite.into(), seed, mode, version: env!("CARGO_PKG_VERSION"), checks: out }
}

/// Runs a named suite; individual failures are recorded, never propagated.
pub fn run_suite(name: &str, mode: Mode, seed: u64, tol: f64) -> Result<SuiteReport> {
    if !(tol > 0.0) {
        return Err(Error::BadParam(format!("tolerance must be positive, got {tol}")));
    }
    let reg = registry();
    let checks: Vec<Check> = match name {
        "all" => reg,
        s if SUITES.contains(&s) => reg.into_iter().filter(|c| c.suite == s).collect(),
        _ => return Err(Error::UnknownSuite(name.into())),
    };
    Ok(run_checks(name, checks, mode, seed, tol))
}

/// Runs every check feeding one acceptance criterion.
pub fn run_criterion(criterion: u8, mode: Mode, seed: u64, tol: f64) -> SuiteReport {
    let checks: Vec<Check> = registry().into_iter().filter(|c| c.criterion == criterion).collect();
    run_checks(&format!("criterion-{criterion}"), checks, mode, seed, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DEFAULT_TOL;
    use std::collections::BTreeSet;

    #[test]
    fn registry_audit() {
        let reg = registry();
        let ids: BTreeSet<&str> = reg.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids.len(), reg.len(), "duplicate ids");
        let crits: BTreeSet<u8> = reg.iter().map(|c| c.criterion).collect();
        assert_eq!(crits, (1..=13).collect());
        for c in &reg {
            assert!(!c.anchor.trim().is_empty(), "{}", c.id);
            assert!(SUITES.contains(&c.suite), "{}", c.id);
        }
        let listed = list_suites();
        assert!(listed.iter().all(|(_, n)| *n > 0));
        assert_eq!(listed.last().unwrap().1, listed[..listed.len() - 1].iter().map(|(_, n)| n).sum::<usize>());
        assert!(listed.iter().any(|(s, _)| s == "gray"));
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", Mode::Exact, 0, DEFAULT_TOL), Err(Error::UnknownSuite(_))));
        assert!(run_suite("dim3", Mode::Exact, 0, 0.0).is_err());
    }

    #[test]
    fn dim3_suite_passes_and_is_deterministic() {
        let a = run_suite("dim3", Mode::Exact, 7, DEFAULT_TOL).unwrap();
        assert!(a.all_pass(), "{}", a.to_text());
        let b = run_suite("dim3", Mode::Exact, 7, DEFAULT_TOL).unwrap();
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    }

    #[test]
    fn failures_do_not_abort() {
        fn boom<S: Scalar>(_: &Ctx) -> Result<Measured> {
            Err(Error::Model("boom".into()))
        }
        fn nonzero<S: Scalar>(_: &Ctx) -> Result<Measured> {
            Ok(Measured::NonZero(Residual::zero()))
        }
        let checks = vec![
            Check { id: "b".into(), suite: "core", criterion: 1, anchor: "x", field: Field::Q, arg: 0, run: runner!(boom) },
            Check { id: "a".into(), suite: "core", criterion: 1, anchor: "x", field: Field::Q, arg: 0, run: runner!(nonzero) },
            Check { id: "c".into(), suite: "core", criterion: 1, anchor: "x", field: Field::Q, arg: 0, run: runner!(stab_g2) },
        ];
        let rep = run_checks("t", checks, Mode::Exact, 0, DEFAULT_TOL);
        let st: Vec<Status> = rep.checks.iter().map(|c| c.status).collect();
        assert_eq!(st, vec![Status::Fail, Status::Fail, Status::Pass]);
        assert!(rep.checks[1].detail.contains("boom"));
    }
}
