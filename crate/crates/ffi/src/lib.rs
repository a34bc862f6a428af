//! C ABI over `skewtorsion`.
//!
//! Handles are opaque pointers released with the matching `st_*_free`.
//! Every fallible call returns an [`StStatus`]; on failure the message is
//! available from [`st_last_error`] until the next call on the same thread.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`st_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use skewtorsion::exterior::AltForm;
use skewtorsion::liealg::{stabilizer, LieSubalgebra};
use skewtorsion::models::{self, exact_field, Field, ModelBundle, Params};
use skewtorsion::reductive::holonomy;
use skewtorsion::verify;
use skewtorsion::{Error, Mode, Scalar, Q, Q2, Q3, Q5};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StStatus {
    StOk = 0,
    StErrNull = 1,
    StErrUtf8 = 2,
    StErrParse = 3,
    StErrUnknown = 4,
    StErrParam = 5,
    StErrMath = 6,
    StErrPanic = 7,
}

/// Scalar mode selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StMode {
    StExact = 0,
    StFloat = 1,
}

/// Exact alternating form.
pub struct StForm(AltForm<Q>);

/// Exact subalgebra of `so(n)`.
pub struct StAlgebra(LieSubalgebra<Q>);

enum AnyBundle {
    Q(ModelBundle<Q>),
    Q2(ModelBundle<Q2>),
    Q3(ModelBundle<Q3>),
    Q5(ModelBundle<Q5>),
    F(ModelBundle<f64>),
}

/// Catalog model bundle.
pub struct StBundle(AnyBundle);

macro_rules! with_bundle {
    ($b:expr, $x:ident => $body:expr) => {
        match $b {
            AnyBundle::Q($x) => $body,
            AnyBundle::Q2($x) => $body,
            AnyBundle::Q3($x) => $body,
            AnyBundle::Q5($x) => $body,
            AnyBundle::F($x) => $body,
        }
    };
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> StStatus {
    match e {
        Error::Parse(_) | Error::ModeMismatch => StStatus::StErrParse,
        Error::UnknownSuite(_) | Error::UnknownModel(_) => StStatus::StErrUnknown,
        Error::BadParam(_) => StStatus::StErrParam,
        _ => StStatus::StErrMath,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), StStatus>) -> StStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StStatus::StOk,
        Ok(Err(code)) => code,
        Err(_) => {
            set_error("internal panic");
            StStatus::StErrPanic
        }
    }
}

fn lib_err(e: Error) -> StStatus {
    set_error(&e.to_string());
    code_of(&e)
}

fn null_err(what: &str) -> StStatus {
    set_error(&format!("{what} is null"));
    StStatus::StErrNull
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, StStatus> {
    if p.is_null() {
        return Err(null_err(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        StStatus::StErrUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), StStatus> {
    if out.is_null() {
        return Err(null_err("output pointer"));
    }
    let c = CString::new(s).map_err(|_| {
        set_error("string contains NUL");
        StStatus::StErrUtf8
    })?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), StStatus> {
    if out.is_null() {
        return Err(null_err("output pointer"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Message of the last failed call on this thread; never null.
#[no_mangle]
pub extern "C" fn st_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version string; static, do not free.
#[no_mangle]
pub extern "C" fn st_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Zero `k`-form on `R^n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_form_new(n: usize, k: usize, out: *mut *mut StForm) -> StStatus {
    guard(|| {
        if n == 0 || k > n {
            set_error("need n >= 1 and k <= n");
            return Err(StStatus::StErrParam);
        }
        put(out, StForm(AltForm::zero(n, k)))
    })
}

/// The `G₂` three-form on `R^7`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_form_g2(out: *mut *mut StForm) -> StStatus {
    guard(|| put(out, StForm(models::forms::g2_form())))
}

/// Adds `num/den` times `e_{idx[0]} ∧ … ∧ e_{idx[k-1]}` (0-based indices, any order).
///
/// # Safety
/// `form` must be a live handle and `idx` must point to `len` indices.
#[no_mangle]
pub unsafe extern "C" fn st_form_add_term(form: *mut StForm, idx: *const usize, len: usize, num: i64, den: i64) -> StStatus {
    guard(|| {
        let f = form.as_mut().ok_or_else(|| null_err("form"))?;
        if idx.is_null() && len > 0 {
            return Err(null_err("idx"));
        }
        let ix: &[usize] = if len == 0 { &[] } else { std::slice::from_raw_parts(idx, len) };
        if len != f.0.degree() || ix.iter().any(|&i| i >= f.0.dim()) {
            set_error("index list does not match the form's degree and dimension");
            return Err(StStatus::StErrParam);
        }
        if den == 0 {
            set_error("zero denominator");
            return Err(StStatus::StErrParam);
        }
        f.0.add_term(ix, &Q::from_ratio(num, den));
        Ok(())
    })
}

/// Parses a form from its JSON text (exact mode).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_form_from_json(json: *const c_char, out: *mut *mut StForm) -> StStatus {
    guard(|| {
        let s = read_str(json, "json")?;
        let v: serde_json::Value = s.parse().map_err(|e| {
            set_error(&format!("malformed JSON: {e}"));
            StStatus::StErrParse
        })?;
        let f = AltForm::from_json(&v).map_err(lib_err)?;
        put(out, StForm(f))
    })
}

/// # Safety
/// `form` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_form_to_json(form: *const StForm, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let f = form.as_ref().ok_or_else(|| null_err("form"))?;
        write_string(out, f.0.to_json().map_err(lib_err)?.to_string())
    })
}

/// # Safety
/// `form` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn st_form_free(form: *mut StForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Stabilizer of a form in `so(n)`.
///
/// # Safety
/// `form` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_stabilizer(form: *const StForm, out: *mut *mut StAlgebra) -> StStatus {
    guard(|| {
        let f = form.as_ref().ok_or_else(|| null_err("form"))?;
        put(out, StAlgebra(stabilizer(&f.0)))
    })
}

/// Dimension of an algebra; 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_algebra_dim(alg: *const StAlgebra) -> usize {
    alg.as_ref().map(|a| a.0.dim()).unwrap_or(0)
}

/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_algebra_to_json(alg: *const StAlgebra, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let a = alg.as_ref().ok_or_else(|| null_err("algebra"))?;
        write_string(out, a.0.to_json().to_string())
    })
}

/// # Safety
/// `alg` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn st_algebra_free(alg: *mut StAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

fn parse_params(s: &str) -> Result<Params, StStatus> {
    s.split(|c| c == ',' || c == ';')
        .filter(|kv| !kv.trim().is_empty())
        .map(|kv| {
            kv.split_once('=').map(|(k, v)| (k.trim().to_string(), v.trim().to_string())).ok_or_else(|| {
                set_error(&format!("parameter '{kv}': expected k=v"));
                StStatus::StErrParam
            })
        })
        .collect()
}

/// Builds a catalog model. `params` is null or `"k=v,k=v"`.
///
/// # Safety
/// `name` must be a NUL-terminated string, `params` null or one, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn st_model_build(name: *const c_char, params: *const c_char, mode: StMode, out: *mut *mut StBundle) -> StStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let p = if params.is_null() { Params::new() } else { parse_params(read_str(params, "params")?)? };
        let b = match mode {
            StMode::StFloat => AnyBundle::F(models::build(name, &p).map_err(lib_err)?),
            StMode::StExact => match exact_field(name, &p).map_err(lib_err)? {
                Field::Q => AnyBundle::Q(models::build(name, &p).map_err(lib_err)?),
                Field::Q2 => AnyBundle::Q2(models::build(name, &p).map_err(lib_err)?),
                Field::Q3 => AnyBundle::Q3(models::build(name, &p).map_err(lib_err)?),
                Field::Q5 => AnyBundle::Q5(models::build(name, &p).map_err(lib_err)?),
            },
        };
        put(out, StBundle(b))
    })
}

fn bundle_hol<S: Scalar>(b: &ModelBundle<S>) -> Result<usize, StStatus> {
    let m = b.model().map_err(lib_err)?;
    let l = b.nomizu().map_err(lib_err)?;
    Ok(holonomy(m, l).map_err(lib_err)?.dim())
}

/// Dimension of the bundle's manifold (or vector space).
///
/// # Safety
/// `b` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn st_bundle_dim(b: *const StBundle) -> usize {
    b.as_ref().map(|b| with_bundle!(&b.0, x => x.dim())).unwrap_or(0)
}

/// Holonomy dimension of the bundle's connection.
///
/// # Safety
/// `b` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_bundle_holonomy_dim(b: *const StBundle, out: *mut usize) -> StStatus {
    guard(|| {
        let b = b.as_ref().ok_or_else(|| null_err("bundle"))?;
        if out.is_null() {
            return Err(null_err("output pointer"));
        }
        *out = with_bundle!(&b.0, x => bundle_hol(x))?;
        Ok(())
    })
}

/// Stabilizer dimension of the bundle's torsion.
///
/// # Safety
/// `b` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_bundle_stabilizer_dim(b: *const StBundle, out: *mut usize) -> StStatus {
    guard(|| {
        let b = b.as_ref().ok_or_else(|| null_err("bundle"))?;
        if out.is_null() {
            return Err(null_err("output pointer"));
        }
        *out = with_bundle!(&b.0, x => stabilizer(&x.tau).dim());
        Ok(())
    })
}

/// # Safety
/// `b` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn st_bundle_to_json(b: *const StBundle, out: *mut *mut c_char) -> StStatus {
    guard(|| {
        let b = b.as_ref().ok_or_else(|| null_err("bundle"))?;
        let v = with_bundle!(&b.0, x => x.to_json()).map_err(lib_err)?;
        write_string(out, v.to_string())
    })
}

/// # Safety
/// `b` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn st_bundle_free(b: *mut StBundle) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Runs a check suite; writes the JSON report and whether every check passed.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `report` and `all_pass` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn st_run_suite(
    suite: *const c_char,
    mode: StMode,
    seed: u64,
    tol: f64,
    report: *mut *mut c_char,
    all_pass: *mut bool,
) -> StStatus {
    guard(|| {
        let name = read_str(suite, "suite")?;
        if all_pass.is_null() {
            return Err(null_err("all_pass"));
        }
        let m = match mode {
            StMode::StExact => Mode::Exact,
            StMode::StFloat => Mode::Float,
        };
        let rep = verify::run_suite(name, m, seed, tol).map_err(lib_err)?;
        write_string(report, rep.to_json().to_string())?;
        *all_pass = rep.all_pass();
        Ok(())
    })
}
