//! C ABI for `abelianize`.
//!
//! Models are opaque `AbzModel` handles. Every entry point returns an `AbzStatus`; on failure
//! `abz_last_error_message` describes the error for the calling thread. Rational results are
//! returned as newly allocated strings (`"p"` or `"p/q"`) to be released with `abz_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use abelianize::charclass::{
    characteristic_number, euler_characteristic, index_group, signature, ClassName, NamedClassSeries,
};
use abelianize::config::{model_to_config, QuotientConfig};
use abelianize::presentation::Presentation;
use abelianize::quotient::{
    chern_pairing, grassmannian_model, integrate_group, integrate_torus, GroupRoots, QuotientModel, SplitBundle,
};
use abelianize::ratpoly::{format_rational, parse_rational, Rational, TruncatedPolynomial};
use abelianize::schubert::oracle_chern_pairing;
use abelianize::Error;

/// Opaque model handle.
pub struct AbzModel {
    model: QuotientModel,
    custom_series: Option<Vec<Rational>>,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    InvalidArgument = 4,
    ComputationError = 5,
    Panic = 6,
}

/// Which quotient `abz_integrate` integrates over.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbzIntegration {
    Group = 0,
    Torus = 1,
    Subgroup = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(AbzStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Config { .. } => AbzStatus::ConfigError,
            Error::NotPalindromic(_) | Error::NotInvertible | Error::NotNilpotent => AbzStatus::ComputationError,
            _ => AbzStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> Outcome<()>) -> AbzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            AbzStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            AbzStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(AbzStatus::NullPointer, format!("{what} is null"))
}

unsafe fn model_ref<'a>(m: *const AbzModel) -> Outcome<&'a AbzModel> {
    m.as_ref().ok_or_else(|| null("model"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Outcome<&'a str> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(AbzStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn opt_str_arg<'a>(s: *const c_char, what: &str) -> Outcome<Option<&'a str>> {
    if s.is_null() {
        Ok(None)
    } else {
        str_arg(s, what).map(Some)
    }
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Outcome<&'a [T]> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Outcome<()> {
    let c = CString::new(s).map_err(|_| Failure(AbzStatus::ComputationError, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_rational(out: *mut *mut c_char, r: &Rational) -> Outcome<()> {
    write_string(out, format_rational(r))
}

fn check_out<T>(out: *mut T) -> Outcome<()> {
    if out.is_null() {
        Err(null("output pointer"))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread; empty after a successful call.
/// The pointer stays valid until the next `abz_*` call on the same thread.
#[no_mangle]
pub extern "C" fn abz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn abz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds the Grassmannian model `G(k, n)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn abz_model_grassmannian(k: usize, n: usize, out: *mut *mut AbzModel) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        let model = grassmannian_model(k, n)?;
        *out = Box::into_raw(Box::new(AbzModel {
            model,
            custom_series: None,
        }));
        Ok(())
    })
}

/// Parses and validates a JSON model document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_model_from_json(json: *const c_char, out: *mut *mut AbzModel) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        let cfg = QuotientConfig::parse(str_arg(json, "json")?)?;
        let model = cfg.to_model()?;
        let custom_series = cfg.custom_series()?;
        *out = Box::into_raw(Box::new(AbzModel { model, custom_series }));
        Ok(())
    })
}

/// Serializes a model to JSON with explicit root data.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_model_to_json(model: *const AbzModel, out: *mut *mut c_char) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        let m = model_ref(model)?;
        write_string(out, model_to_config(&m.model)?.to_json())
    })
}

/// # Safety
/// `model` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn abz_model_free(model: *mut AbzModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn abz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of variables `k` of the model's ring.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn abz_model_variable_count(model: *const AbzModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.ring().variable_count())
}

/// `int_{X//G} c_1^{m_1} .. c_k^{m_k}` for a Grassmannian-type model.
///
/// # Safety
/// `exps` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_chern_pairing(
    model: *const AbzModel,
    exps: *const u64,
    len: usize,
    out: *mut *mut c_char,
) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        let m = model_ref(model)?;
        let v = chern_pairing(&m.model, slice_arg(exps, len, "exps")?)?;
        write_rational(out, &v)
    })
}

/// The same pairing from the Schubert-calculus oracle.
///
/// # Safety
/// `exps` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_oracle_chern_pairing(
    k: usize,
    n: usize,
    exps: *const u64,
    len: usize,
    out: *mut *mut c_char,
) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        let v = oracle_chern_pairing(k, n, slice_arg(exps, len, "exps")?)?;
        write_rational(out, &v)
    })
}

/// Integrates a polynomial given in the text syntax, e.g. `"u1^2*u2^2"`.
///
/// # Safety
/// `poly` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_integrate(
    model: *const AbzModel,
    poly: *const c_char,
    over: AbzIntegration,
    out: *mut *mut c_char,
) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        let m = &model_ref(model)?.model;
        let p = TruncatedPolynomial::parse(m.ring(), str_arg(poly, "poly")?)?;
        let v = match over {
            AbzIntegration::Group => integrate_group(m, &p, GroupRoots::All)?,
            AbzIntegration::Torus => integrate_torus(m, &p)?,
            AbzIntegration::Subgroup => integrate_group(m, &p, GroupRoots::ComplementOfSubgroup)?,
        };
        write_rational(out, &v)
    })
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_euler_characteristic(model: *const AbzModel, out: *mut *mut c_char) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        write_rational(out, &euler_characteristic(&model_ref(model)?.model)?)
    })
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_signature(model: *const AbzModel, out: *mut *mut c_char) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        write_rational(out, &signature(&model_ref(model)?.model)?)
    })
}

/// Characteristic number of a named class (`"todd"`, `"l-class"`, ...). For `"custom"`, `coeffs`
/// is a comma-separated list of rationals, or null to use the model's `custom_series`.
///
/// # Safety
/// String arguments must be NUL-terminated (`coeffs` may be null); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_characteristic_number(
    model: *const AbzModel,
    class_name: *const c_char,
    coeffs: *const c_char,
    out: *mut *mut c_char,
) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        let m = model_ref(model)?;
        let class: ClassName = str_arg(class_name, "class_name")?.parse()?;
        let f = if class == ClassName::Custom {
            let coefficients = match opt_str_arg(coeffs, "coeffs")? {
                Some(s) => s
                    .split(',')
                    .map(|c| parse_rational(c.trim()))
                    .collect::<Result<Vec<_>, _>>()?,
                None => m
                    .custom_series
                    .clone()
                    .ok_or_else(|| Failure(AbzStatus::InvalidArgument, "custom class needs coefficients".into()))?,
            };
            NamedClassSeries::custom(m.model.ring(), coefficients)
        } else {
            NamedClassSeries::builtin(class, m.model.ring())?
        };
        write_rational(out, &characteristic_number(&m.model, &f)?)
    })
}

/// Index twisted by a split bundle `"ROOT[:MULT];.."`; null means the trivial line bundle.
///
/// # Safety
/// `bundle` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_index(
    model: *const AbzModel,
    bundle: *const c_char,
    use_subgroup: bool,
    out: *mut *mut c_char,
) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        let m = &model_ref(model)?.model;
        let v = match opt_str_arg(bundle, "bundle")? {
            Some(s) => SplitBundle::parse(m.ring(), s)?,
            None => SplitBundle::trivial(m.ring(), 1),
        };
        let which = if use_subgroup {
            GroupRoots::ComplementOfSubgroup
        } else {
            GroupRoots::All
        };
        write_rational(out, &index_group(m, &v, which)?)
    })
}

/// Betti numbers `b_0..b_D`; release with `abz_betti_free(*out, *len)`.
///
/// # Safety
/// `out` and `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn abz_betti(model: *const AbzModel, out: *mut *mut usize, len: *mut usize) -> AbzStatus {
    guard(|| {
        check_out(out)?;
        check_out(len)?;
        let m = &model_ref(model)?.model;
        let betti = Presentation::new(m, GroupRoots::All)?.poincare_polynomial()?;
        let boxed = betti.into_boxed_slice();
        *len = boxed.len();
        *out = Box::into_raw(boxed).cast();
        Ok(())
    })
}

/// # Safety
/// `(values, len)` must come from `abz_betti` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn abz_betti_free(values: *mut usize, len: usize) {
    if !values.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(values, len)));
    }
}
