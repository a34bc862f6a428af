//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code: 0 success, 1 failed checks, 2 usage or input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::AltForm;
use crate::liealg::{curvature_space_dim, decompose, stabilizer, LieSubalgebra};
use crate::models::{self, exact_field, Field, Params};
use crate::reductive::{connection_report, parallel_residual, riemann_from_tau, NomizuMap, ReductiveModel, Tensor};
use crate::scalar::{Mode, Scalar, DEFAULT_TOL, Q, Q2, Q3, Q5};
use crate::splitting::{canonical_splitting, canonical_splitting_with, decomposability_search, torsion_split};
use crate::verify;

#[derive(Parser, Debug)]
#[command(name = "skewtorsion", version, about = "Exact checks for geometries with parallel skew torsion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Emit JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Float tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Scalar mode; file inputs default to the mode recorded in the file.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a named check suite.
    Verify { suite: String },
    /// List suites and their check counts.
    Suites,
    /// Stabilizer algebra of a form (or of the "tau" of a model dump).
    Stabilizer {
        #[arg(long)]
        form: PathBuf,
    },
    /// Decompose R^n under a subalgebra of so(n).
    Decompose {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Torsion, curvature and holonomy of an invariant connection.
    Holonomy {
        /// Reductive model, or a model dump carrying "model" and "nomizu".
        #[arg(long)]
        model: PathBuf,
        /// Nomizu map; the canonical connection if absent.
        #[arg(long)]
        nomizu: Option<PathBuf>,
        /// Torsion form for the Riemannian curvature report.
        #[arg(long)]
        tau: Option<PathBuf>,
    },
    /// Canonical splitting of a form under a subalgebra (default: its stabilizer).
    Split {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// Subalgebra h of g; splits against h instead of g.
        #[arg(long)]
        sub: Option<PathBuf>,
    },
    /// Build a catalog model.
    Model {
        name: String,
        /// Model parameter, repeatable.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        /// Write the bundle as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{text}");
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        2
                    } else {
                        0
                    }
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    if !(cli.opts.tol > 0.0) {
        let _ = writeln!(err, "error: --tol must be positive");
        return 2;
    }
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let o = &cli.opts;
    let text = match &cli.command {
        Command::Verify { suite } => {
            let mode = o.mode.map(Mode::from).unwrap_or(Mode::Exact);
            let rep = verify::run_suite(suite, mode, o.seed, o.tol)?;
            let s = if o.json { pretty(&rep.to_json()) } else { rep.to_text() };
            emit(out, &s)?;
            return Ok(if rep.all_pass() { 0 } else { 1 });
        }
        Command::Suites => {
            let list = verify::list_suites();
            if o.json {
                pretty(&Value::Object(list.iter().map(|(s, n)| (s.clone(), json!(n))).collect()))
            } else {
                list.iter().map(|(s, n)| format!("{s:<20} {n}\n")).collect()
            }
        }
        Command::Stabilizer { form } => {
            let v = read_json(form)?;
            let v = v.get("tau").cloned().unwrap_or(v);
            match file_mode(o, &v) {
                Mode::Exact => stabilizer_cmd::<Q>(&v, o.json)?,
                Mode::Float => stabilizer_cmd::<f64>(&v, o.json)?,
            }
        }
        Command::Decompose { algebra } => {
            let v = read_json(algebra)?;
            let v = v.get("algebra").cloned().unwrap_or(v);
            match file_mode(o, &v) {
                Mode::Exact => decompose_cmd::<Q>(&v, o)?,
                Mode::Float => decompose_cmd::<f64>(&v, o)?,
            }
        }
        Command::Holonomy { model, nomizu, tau } => {
            let mv = read_json(model)?;
            let lv = nomizu.as_deref().map(read_json).transpose()?;
            let tv = tau.as_deref().map(read_json).transpose()?;
            match file_mode(o, &mv) {
                Mode::Exact => holonomy_cmd::<Q>(&mv, lv.as_ref(), tv.as_ref(), o.json)?,
                Mode::Float => holonomy_cmd::<f64>(&mv, lv.as_ref(), tv.as_ref(), o.json)?,
            }
        }
        Command::Split { form, algebra, sub } => {
            let fv = read_json(form)?;
            let fv = fv.get("tau").cloned().unwrap_or(fv);
            let unwrap = |v: serde_json::Value| v.get("algebra").cloned().unwrap_or(v);
            let gv = algebra.as_deref().map(read_json).transpose()?.map(unwrap);
            let hv = sub.as_deref().map(read_json).transpose()?.map(unwrap);
            match file_mode(o, &fv) {
                Mode::Exact => split_cmd::<Q>(&fv, gv.as_ref(), hv.as_ref(), o)?,
                Mode::Float => split_cmd::<f64>(&fv, gv.as_ref(), hv.as_ref(), o)?,
            }
        }
        Command::Model { name, params, dump } => {
            let p = parse_params(params)?;
            let mode = o.mode.map(Mode::from).unwrap_or(Mode::Exact);
            let (summary, bundle) = match mode {
                Mode::Float => model_cmd::<f64>(name, &p)?,
                Mode::Exact => match exact_field(name, &p)? {
                    Field::Q => model_cmd::<Q>(name, &p)?,
                    Field::Q2 => model_cmd::<Q2>(name, &p)?,
                    Field::Q3 => model_cmd::<Q3>(name, &p)?,
                    Field::Q5 => model_cmd::<Q5>(name, &p)?,
                },
            };
            if let Some(path) = dump {
                std::fs::write(path, pretty(&bundle))
                    .map_err(|e| Error::Parse(format!("{}: cannot write: {e}", path.display())))?;
            }
            if o.json {
                pretty(&json!({"summary": summary, "bundle": bundle}))
            } else {
                summary_text(&summary)
            }
        }
    };
    emit(out, &text)?;
    Ok(0)
}

fn emit(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes()).map_err(|e| Error::Parse(format!("stdout: {e}")))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

/// `--mode` if given, else the file's `"mode"` field, else exact.
fn file_mode(o: &GlobalOpts, v: &Value) -> Mode {
    if let Some(m) = o.mode {
        return m.into();
    }
    match v.get("mode").and_then(Value::as_str) {
        Some("float") => Mode::Float,
        _ => Mode::Exact,
    }
}

fn parse_params(raw: &[String]) -> Result<Params> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::BadParam(format!("--param '{kv}': expected k=v")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// `2 e12 - e34` style rendering of a form.
fn fmt_form<S: Scalar>(f: &AltForm<S>) -> String {
    let mut parts = Vec::new();
    for (idx, c) in f.terms() {
        let name: String = idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(if f.dim() > 9 { "," } else { "" });
        parts.push(format!("{c}*e{name}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn algebra_text<S: Scalar>(g: &LieSubalgebra<S>) -> Result<String> {
    let mut s = format!("dimension {}\nbasis:\n", g.dim());
    for b in g.basis() {
        s.push_str(&format!("  {}\n", fmt_form(&AltForm::from_endo(b)?)));
    }
    Ok(s)
}

fn stabilizer_cmd<S: Scalar>(v: &Value, json_out: bool) -> Result<String> {
    let tau = AltForm::<S>::from_json(v)?;
    let g = stabilizer(&tau);
    if json_out {
        return Ok(pretty(&json!({"dim": g.dim(), "algebra": g.to_json()})));
    }
    algebra_text(&g)
}

fn decompose_cmd<S: Scalar>(v: &Value, o: &GlobalOpts) -> Result<String> {
    let g = LieSubalgebra::<S>::from_json(v)?;
    let d = decompose(&g, o.seed)?;
    let k = curvature_space_dim(&g);
    let killing = g.killing();
    if o.json {
        return Ok(pretty(&json!({
            "algebra_dim": g.dim(),
            "decomposition": d.to_json(),
            "curvature_space_dim": k,
            "killing": killing.to_json(),
        })));
    }
    let mut s = format!("algebra dimension {} in so({})\n", g.dim(), g.n());
    for (i, sm) in d.summands.iter().enumerate() {
        let trivial = g.basis().iter().all(|b| sm.basis.iter().all(|v| b.mul_vec(v).iter().all(|c| c.is_zero())));
        s.push_str(&format!(
            "summand {i}: dim {} class {} {}{}\n",
            sm.dim(),
            sm.class,
            if sm.irreducible { "irreducible" } else { "reducible" },
            if trivial { ", trivial action" } else { "" }
        ));
    }
    s.push_str(&format!("curvature space dimension {k}\nKilling form {:?} signature {:?}\n", killing.verdict, killing.signature));
    Ok(s)
}

fn holonomy_cmd<S: Scalar>(mv: &Value, lv: Option<&Value>, tv: Option<&Value>, json_out: bool) -> Result<String> {
    let (model_v, bundle_l) = match mv.get("model") {
        Some(m) if !m.is_null() => (m, mv.get("nomizu").filter(|x| !x.is_null())),
        _ => (mv, None),
    };
    let model = ReductiveModel::<S>::from_json(model_v)?;
    let dm = model.dim_m();
    let l = match lv.or(bundle_l) {
        Some(v) => NomizuMap::from_json(v, dm)?,
        None => NomizuMap::canonical(dm),
    };
    let rep = connection_report(&model, &l)?;
    let span = model.mm_h_span()?;
    let mut j = json!({
        "dim_h": model.dim_h(),
        "dim_m": dm,
        "jacobi_residual": model.jacobi_residual().max_abs,
        "naturally_reductive": model.is_naturally_reductive(),
        "torsion": rep.torsion_form.as_ref().map(|t| t.to_json()).transpose()?,
        "holonomy": rep.holonomy.to_json(),
        "holonomy_dim": rep.holonomy.dim(),
        "mm_h_dim": span.dim(),
        "holonomy_equals_mm_h": rep.holonomy.same_as(&span),
    });
    let mut s = format!(
        "model: dim h = {}, dim m = {}\ntorsion: {}\nholonomy {}",
        model.dim_h(),
        dm,
        rep.torsion_form.as_ref().map(fmt_form).unwrap_or_else(|| "not totally skew".into()),
        algebra_text(&rep.holonomy)?
    );
    s.push_str(&format!("[m,m]_h dimension {}\n", span.dim()));
    let tau = match tv {
        Some(v) => Some(AltForm::<S>::from_json(v.get("tau").unwrap_or(v))?),
        None => rep.torsion_form.clone(),
    };
    if let Some(tau) = tau {
        if tau.dim() == dm {
            let par = parallel_residual(&model, &l, &Tensor::Form(tau.clone()));
            let riem = riemann_from_tau(&model, &tau)?;
            let ric: Vec<Vec<Value>> = (0..dm).map(|i| riem.ricci.row(i).iter().map(|x| json!(x.to_string())).collect()).collect();
            j["parallel_tau_residual"] = par.as_ref().map(|r| json!(r.max_abs)).unwrap_or(Value::Null);
            j["ricci_g"] = json!(ric);
            j["scal_g"] = json!(riem.scal.to_string());
            j["bianchi_residual"] = json!(riem.bianchi_residual.max_abs);
            if let Ok(r) = par {
                s.push_str(&format!("parallel torsion residual {:.3e}\n", r.max_abs));
            }
            s.push_str(&format!("scal_g = {}\n", riem.scal));
        }
    }
    Ok(if json_out { pretty(&j) } else { s })
}

fn split_cmd<S: Scalar>(fv: &Value, gv: Option<&Value>, hv: Option<&Value>, o: &GlobalOpts) -> Result<String> {
    let tau = AltForm::<S>::from_json(fv)?;
    let g = match gv {
        Some(v) => LieSubalgebra::<S>::from_json(v)?,
        None => stabilizer(&tau),
    };
    let s = match hv {
        Some(v) => canonical_splitting_with(&g, &LieSubalgebra::<S>::from_json(v)?, &tau, o.seed)?,
        None => canonical_splitting(&g, &tau, o.seed)?,
    };
    let sp = torsion_split(&s, &tau);
    let dec = decomposability_search(&g, &tau, o.seed)?;
    if o.json {
        return Ok(pretty(&json!({
            "splitting": s.to_json(),
            "torsion": sp.to_json()?,
            "admissible": sp.is_admissible(),
            "decomposability": dec.to_json(),
        })));
    }
    Ok(format!(
        "dim H = {}, dim V = {}\ntau^H = {}\ntau^m = {}\ntau^VVH = {}\ntau^V = {}\nadmissible: {}\ndecomposable: {}\n",
        s.dim_h(),
        s.dim_v(),
        fmt_form(&sp.tau_h),
        fmt_form(&sp.tau_m),
        fmt_form(&sp.tau_vvh),
        fmt_form(&sp.tau_v),
        sp.is_admissible(),
        dec.is_decomposable()
    ))
}

fn model_cmd<S: Scalar>(name: &str, p: &Params) -> Result<(Value, Value)> {
    let b = models::build::<S>(name, p)?;
    let stab = stabilizer(&b.tau).dim();
    let mut summary = json!({
        "name": b.name,
        "mode": S::MODE,
        "dim": b.dim(),
        "params": b.params,
        "stabilizer_dim": stab,
        "tensors": b.tensors.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>(),
        "invariance_residual": b.invariance_residual().max_abs,
        "notes": b.notes,
    });
    if let (Ok(m), Ok(l)) = (b.model(), b.nomizu()) {
        let rep = connection_report(m, l)?;
        summary["dim_h"] = json!(m.dim_h());
        summary["jacobi_residual"] = json!(m.jacobi_residual().max_abs);
        summary["holonomy_dim"] = json!(rep.holonomy.dim());
        summary["parallel_tau_residual"] = json!(parallel_residual(m, l, &Tensor::Form(b.tau.clone()))?.max_abs);
    }
    Ok((summary, b.to_json()?))
}

fn summary_text(v: &Value) -> String {
    let mut s = String::new();
    if let Some(obj) = v.as_object() {
        for (k, x) in obj {
            let shown = match x {
                Value::String(t) => t.clone(),
                Value::Array(a) if a.iter().all(Value::is_string) => {
                    a.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(", ")
                }
                other => other.to_string(),
            };
            s.push_str(&format!("{k}: {shown}\n"));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run(std::iter::once("skewtorsion").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["verify", "nope"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["verify", "dim3", "--tol", "0"]).0, 2);
        assert_eq!(run_str(&["model", "g2", "--param", "x"]).0, 2);
        assert_eq!(run_str(&["model", "nope"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn model_summary() {
        let (code, out, _) = run_str(&["model", "g2"]);
        assert_eq!(code, 0);
        assert!(out.contains("stabilizer_dim: 14"), "{out}");
        let (code, out, _) = run_str(&["model", "sphere", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["summary"]["stabilizer_dim"], 14);
    }

    #[test]
    fn suites_listing() {
        let (code, out, _) = run_str(&["suites"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("gray")));
    }
}
