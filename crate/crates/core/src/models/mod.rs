//! Catalog of concrete structures: reductive models, torsion forms and the
//! named tensors that come with them.
//!
//! Every builder is generic over the scalar type. Models whose orthonormal
//! bases need a square root (`s3s3`, the squashed sphere, the `su(3)`
//! adjoint) fail with [`Error::BadParam`] over a field that lacks it; see
//! [`exact_field`] for the field the CLI picks in exact mode.

pub mod berger;
pub mod dim3;
pub mod forms;
pub mod gray;
pub mod kxk;
pub mod quat;
pub mod sasaki;
pub mod su3;
pub mod threead;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::liealg::{mat_json, scalar_json, Residual};
use crate::linalg::Mat;
use crate::reductive::{NomizuMap, ReductiveModel, Tensor};
use crate::scalar::{Scalar, Q};

pub type Params = BTreeMap<String, String>;

/// A model together with its torsion and named tensors.
#[derive(Clone, Debug)]
pub struct ModelBundle<S> {
    pub name: String,
    pub params: Params,
    pub model: Option<ReductiveModel<S>>,
    pub tau: AltForm<S>,
    /// Nomizu map of `∇^τ` when a model is present.
    pub nomizu: Option<NomizuMap<S>>,
    pub tensors: Vec<(String, Tensor<S>)>,
    pub notes: Vec<String>,
}

impl<S: Scalar> ModelBundle<S> {
    pub fn new(name: &str, tau: AltForm<S>) -> Self {
        ModelBundle { name: name.into(), params: Params::new(), model: None, tau, nomizu: None, tensors: Vec::new(), notes: Vec::new() }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn with_tensor(mut self, name: &str, t: Tensor<S>) -> Self {
        self.tensors.push((name.into(), t));
        self
    }

    pub fn with_model(mut self, m: ReductiveModel<S>, l: NomizuMap<S>) -> Self {
        self.model = Some(m);
        self.nomizu = Some(l);
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.tau.dim()
    }

    pub fn tensor(&self, name: &str) -> Option<&Tensor<S>> {
        self.tensors.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn endo(&self, name: &str) -> Result<&Mat<S>> {
        match self.tensor(name) {
            Some(Tensor::Endo(m)) => Ok(m),
            _ => Err(Error::Model(format!("{}: no endomorphism '{name}'", self.name))),
        }
    }

    pub fn vector(&self, name: &str) -> Result<&Vec<S>> {
        match self.tensor(name) {
            Some(Tensor::Vector(v)) => Ok(v),
            _ => Err(Error::Model(format!("{}: no vector '{name}'", self.name))),
        }
    }

    pub fn form(&self, name: &str) -> Result<&AltForm<S>> {
        match self.tensor(name) {
            Some(Tensor::Form(f)) => Ok(f),
            _ => Err(Error::Model(format!("{}: no form '{name}'", self.name))),
        }
    }

    pub fn model(&self) -> Result<&ReductiveModel<S>> {
        self.model.as_ref().ok_or_else(|| Error::Model(format!("{} has no homogeneous model", self.name)))
    }

    pub fn nomizu(&self) -> Result<&NomizuMap<S>> {
        self.nomizu.as_ref().ok_or_else(|| Error::Model(format!("{} has no connection", self.name)))
    }

    /// `h`-invariance of `τ` and of every named tensor.
    pub fn invariance_residual(&self) -> Residual {
        let Some(m) = &self.model else { return Residual::zero() };
        let mut r = Residual::zero();
        let tau = Tensor::Form(self.tau.clone());
        for a in m.isotropy() {
            r = r.merge(tau.act(a).residual());
            for (_, t) in &self.tensors {
                r = r.merge(t.act(a).residual());
            }
        }
        r
    }

    pub fn to_json(&self) -> Result<Value> {
        let mut tensors = Map::new();
        for (n, t) in &self.tensors {
            tensors.insert(n.clone(), tensor_json(t)?);
        }
        Ok(json!({
            "name": self.name,
            "mode": S::MODE,
            "params": self.params,
            "model": self.model.as_ref().map(|m| m.to_json()),
            "tau": self.tau.to_json()?,
            "nomizu": self.nomizu.as_ref().map(|l| l.to_json()),
            "tensors": tensors,
            "notes": self.notes,
        }))
    }
}

pub fn tensor_json<S: Scalar>(t: &Tensor<S>) -> Result<Value> {
    Ok(match t {
        Tensor::Vector(v) => json!({"vector": v.iter().map(scalar_json).collect::<Vec<_>>()}),
        Tensor::Form(f) => json!({"form": f.to_json()?}),
        Tensor::Endo(m) => json!({"endo": mat_json(m)}),
        Tensor::Cov3(_) => json!({"cov3": null}),
        Tensor::Curv(r) => json!({"curv": mat_json(r.matrix())}),
    })
}

/// Exact square root of an integer in `S`, or a parameter error naming the field.
pub fn sqrt_in<S: Scalar>(x: &S, what: &str) -> Result<S> {
    x.sqrt_exact().ok_or_else(|| Error::BadParam(format!("{what}: sqrt({x}) is not in the scalar field; use float mode or a quadratic field")))
}

/// Parses `p`, `p/q` or a finite decimal.
pub fn parse_scalar<S: Scalar>(s: &str) -> Result<S> {
    let s = s.trim();
    if let Ok(q) = s.parse::<Q>() {
        return Ok(S::from_q(&q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        if let Ok(n) = digits.parse::<num::BigInt>() {
            let den = num::BigInt::from(10u32).pow(frac.len() as u32);
            return Ok(S::from_q(&Q::new(n, den)));
        }
    }
    Err(Error::BadParam(format!("cannot parse '{s}' as a rational number")))
}

pub fn param_or<S: Scalar>(p: &Params, key: &str, default: &str) -> Result<S> {
    parse_scalar(p.get(key).map(String::as_str).unwrap_or(default)).map_err(|e| Error::BadParam(format!("{key}: {e}")))
}

pub fn param_usize(p: &Params, key: &str, default: usize) -> Result<usize> {
    match p.get(key) {
        None => Ok(default),
        Some(v) => v.trim().parse().map_err(|_| Error::BadParam(format!("{key}: expected a positive integer, got '{v}'"))),
    }
}

fn check_keys(p: &Params, allowed: &[&str]) -> Result<()> {
    for k in p.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::BadParam(format!("unknown parameter '{k}' (allowed: {})", allowed.join(", "))));
        }
    }
    Ok(())
}

/// Catalog names accepted by [`build`].
pub const MODEL_NAMES: &[&str] =
    &["g2", "su3", "kxk", "dim3", "dim3-berger", "s6", "flag", "cp3", "s3s3", "berger", "threead", "sphere", "stiefel"];

/// Builds a catalog bundle by name.
pub fn build<S: Scalar>(name: &str, p: &Params) -> Result<ModelBundle<S>> {
    match name {
        "g2" => {
            check_keys(p, &[])?;
            Ok(ModelBundle::new("g2", forms::g2_form()))
        }
        "su3" => {
            check_keys(p, &[])?;
            Ok(ModelBundle::new("su3", forms::su3_form()))
        }
        "kxk" => {
            check_keys(p, &["t"])?;
            kxk::build_kxk(param_or(p, "t", "1/2")?)
        }
        "dim3" => {
            check_keys(p, &["s", "t"])?;
            let t: S = param_or(p, "t", "1")?;
            let s = match p.get("s") {
                Some(_) => param_or(p, "s", "1")?,
                None => t.clone(),
            };
            dim3::build_dim3(s, t)
        }
        "dim3-berger" => {
            check_keys(p, &["lambda"])?;
            dim3::build_dim3_berger(param_or(p, "lambda", "2")?)
        }
        "s6" | "flag" | "cp3" | "s3s3" => {
            check_keys(p, &[])?;
            gray::build_gray(name)
        }
        "berger" => {
            check_keys(p, &[])?;
            berger::build_berger()
        }
        "threead" => {
            check_keys(p, &["n", "alpha", "delta", "gamma"])?;
            let a: S = param_or(p, "alpha", "1")?;
            let d: S = param_or(p, "delta", "5")?;
            let g = match p.get("gamma") {
                Some(_) => param_or(p, "gamma", "0")?,
                None => threead::canonical_gamma(&a, &d),
            };
            threead::build_3ad_tensors(param_usize(p, "n", 1)?, a, d, g)
        }
        "sphere" => {
            check_keys(p, &["alpha", "delta", "gamma"])?;
            let a: S = param_or(p, "alpha", "1")?;
            let d: S = param_or(p, "delta", "5")?;
            let g = match p.get("gamma") {
                Some(_) => Some(param_or(p, "gamma", "0")?),
                None => None,
            };
            threead::build_3ad_sphere(a, d, g)
        }
        "stiefel" => {
            check_keys(p, &["n"])?;
            sasaki::build_sasaki_stiefel(param_usize(p, "n", 3)?)
        }
        _ => Err(Error::UnknownModel(name.into())),
    }
}

/// Exact field needed to build a catalog bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Q,
    Q2,
    Q3,
    Q5,
}

pub fn exact_field(name: &str, p: &Params) -> Result<Field> {
    match name {
        "s3s3" => Ok(Field::Q3),
        "sphere" => {
            let a: Q = param_or(p, "alpha", "1")?;
            let d: Q = param_or(p, "delta", "5")?;
            let ad = a * d;
            for (f, k) in [(Field::Q, 1), (Field::Q2, 2), (Field::Q3, 3), (Field::Q5, 5)] {
                if (ad.clone() / Q::from_integer(k.into())).sqrt_exact().is_some() {
                    return Ok(f);
                }
            }
            Err(Error::BadParam(format!("sphere: sqrt(alpha*delta) = sqrt({ad}) needs a field beyond Q(sqrt 2), Q(sqrt 3), Q(sqrt 5); use float mode")))
        }
        _ => Ok(Field::Q),
    }
}
