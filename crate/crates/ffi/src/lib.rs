//! C ABI for delaycas.
//!
//! Every entry point returns a [`DdeaStatus`]; on failure the message is kept in a
//! thread-local slot readable through [`ddea_last_error`]. Strings handed out by the
//! library must be released with [`ddea_string_free`], handles with their `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use delaycas::algebra::RatFunc;
use delaycas::analytic::{continuum_limit_w22, wp_eval};
use delaycas::cascade::{confinement_report, run_cascade_dir, Direction, Seed};
use delaycas::classify::classify;
use delaycas::cli::{build_report, config_hash, parse_corpus, Command, RunConfig, Validated, DEMO_CORPUS};
use delaycas::model::DelayDiffEq;
use delaycas::Error;
use num_complex::Complex64;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DdeaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Schema = 4,
    Hypothesis = 5,
    Numeric = 6,
    Io = 7,
    OutOfRange = 8,
    Panic = 9,
}

/// Parsed and validated corpus.
pub struct DdeaCorpus(Validated);

/// One delay differential equation.
pub struct DdeaEquation(DelayDiffEq);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn status_of(e: &Error) -> DdeaStatus {
    match e {
        Error::Parse { .. } => DdeaStatus::Parse,
        Error::Schema(_) => DdeaStatus::Schema,
        Error::Hypothesis(_) => DdeaStatus::Hypothesis,
        Error::Io(_) => DdeaStatus::Io,
        _ => DdeaStatus::Numeric,
    }
}

struct Fail(DdeaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DdeaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DdeaStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            DdeaStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(DdeaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(DdeaStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(DdeaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(DdeaStatus::NullPointer, format!("{what} is null")));
    }
    *out = v;
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(DdeaStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Fail(DdeaStatus::Numeric, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Fail> {
    serde_json::to_string(v).map_err(|e| Fail(DdeaStatus::Io, e.to_string()))
}

/// Message for the most recent failure on this thread, or null. Owned by the library;
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ddea_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ddea_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a JSON corpus.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddea_corpus_parse(json: *const c_char, out: *mut *mut DdeaCorpus) -> DdeaStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let v = parse_corpus(text)?;
        put(out, Box::into_raw(Box::new(DdeaCorpus(v))), "out")
    })
}

/// Loads the built-in demo corpus.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddea_corpus_demo(out: *mut *mut DdeaCorpus) -> DdeaStatus {
    guard(|| {
        let v = parse_corpus(DEMO_CORPUS)?;
        put(out, Box::into_raw(Box::new(DdeaCorpus(v))), "out")
    })
}

/// Number of entries in a corpus; 0 for null.
///
/// # Safety
/// `corpus` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ddea_corpus_len(corpus: *const DdeaCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.0.equations.len())
}

/// # Safety
/// `corpus` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ddea_corpus_free(corpus: *mut DdeaCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Runs `command` (`classify`, `cascade`, `verify`, `nev` or `limit`) over the corpus,
/// writing the JSON report to `out_json` and whether every check passed to `out_pass`.
/// `truncation` 0 selects the default.
///
/// # Safety
/// Pointers must be valid; `out_pass` may be null.
#[no_mangle]
pub unsafe extern "C" fn ddea_run_json(
    corpus: *const DdeaCorpus,
    command: *const c_char,
    seed: u64,
    truncation: usize,
    out_json: *mut *mut c_char,
    out_pass: *mut bool,
) -> DdeaStatus {
    guard(|| {
        let c = deref(corpus, "corpus")?;
        let command = match read_str(command, "command")? {
            "classify" => Command::Classify,
            "cascade" => Command::Cascade,
            "verify" => Command::Verify,
            "nev" => Command::Nev,
            "limit" => Command::Limit,
            other => return Err(Fail(DdeaStatus::OutOfRange, format!("unknown command {other}"))),
        };
        let cfg = RunConfig {
            command,
            seed,
            truncation: if truncation == 0 {
                command.default_truncation()
            } else {
                truncation
            },
            entry: None,
        };
        let hash = config_hash(&c.0.corpus, &cfg);
        let report = build_report(&c.0, &cfg, hash)?;
        put_string(out_json, to_json(&report)?)?;
        if !out_pass.is_null() {
            *out_pass = report.pass;
        }
        Ok(())
    })
}

/// Copies equation `index` out of a corpus.
///
/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddea_equation_from_corpus(corpus: *const DdeaCorpus, index: usize, out: *mut *mut DdeaEquation) -> DdeaStatus {
    guard(|| {
        let c = deref(corpus, "corpus")?;
        let eq =
            c.0.equations
                .get(index)
                .ok_or_else(|| Fail(DdeaStatus::OutOfRange, format!("index {index} out of range")))?;
        put(out, Box::into_raw(Box::new(DdeaEquation(eq.clone()))), "out")
    })
}

/// Builds `w(z+1) - w(z-1) = (a w' + b w + c)/w^2` from expressions in `z`.
///
/// # Safety
/// Strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddea_equation_inverse_square(
    a: *const c_char,
    b: *const c_char,
    c: *const c_char,
    out: *mut *mut DdeaEquation,
) -> DdeaStatus {
    guard(|| {
        let a = RatFunc::parse(read_str(a, "a")?)?;
        let b = RatFunc::parse(read_str(b, "b")?)?;
        let c = RatFunc::parse(read_str(c, "c")?)?;
        let eq = DelayDiffEq::inverse_square(a, b, c)?;
        put(out, Box::into_raw(Box::new(DdeaEquation(eq))), "out")
    })
}

/// Builds `w(z+1) - w(z-1) + a w'/w = b`.
///
/// # Safety
/// Strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddea_equation_pure_log_deriv(a: *const c_char, b: *const c_char, out: *mut *mut DdeaEquation) -> DdeaStatus {
    guard(|| {
        let a = RatFunc::parse(read_str(a, "a")?)?;
        let b = RatFunc::parse(read_str(b, "b")?)?;
        let eq = DelayDiffEq::pure_log_deriv(a, b)?;
        put(out, Box::into_raw(Box::new(DdeaEquation(eq))), "out")
    })
}

/// Classifier verdict as JSON.
///
/// # Safety
/// `eq` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddea_equation_classify_json(eq: *const DdeaEquation, out_json: *mut *mut c_char) -> DdeaStatus {
    guard(|| {
        let eq = deref(eq, "equation")?;
        let v = classify(&eq.0)?;
        put_string(out_json, to_json(&v)?)
    })
}

/// # Safety
/// `eq` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn ddea_equation_free(eq: *mut DdeaEquation) {
    if !eq.is_null() {
        drop(Box::from_raw(eq));
    }
}

/// Cascade from a zero of order `p`, `steps` lattice steps, as JSON with the
/// confinement verdict when one can be given. `truncation` 0 selects the default.
///
/// # Safety
/// `eq` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddea_cascade_json(
    eq: *const DdeaEquation,
    p: u32,
    steps: usize,
    truncation: usize,
    backward: bool,
    out_json: *mut *mut c_char,
) -> DdeaStatus {
    guard(|| {
        let eq = deref(eq, "equation")?;
        if p == 0 {
            return Err(Fail(DdeaStatus::OutOfRange, "zero order p must be positive".into()));
        }
        let dir = if backward { Direction::Backward } else { Direction::Forward };
        let trunc = if truncation == 0 {
            delaycas::algebra::laurent::DEFAULT_TRUNCATION
        } else {
            truncation
        };
        let pat = run_cascade_dir(&eq.0, &Seed::zero(p), steps, trunc, dir)?;
        let verdict = confinement_report(&pat, &eq.0).ok();
        let doc = serde_json::json!({ "pattern": pat.to_json(), "confinement": verdict });
        put_string(out_json, doc.to_string())
    })
}

/// Exact continuum limit of the inverse-square delay Painlevé equation, as JSON.
///
/// # Safety
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddea_continuum_limit(truncation: u32, out_json: *mut *mut c_char) -> DdeaStatus {
    guard(|| {
        let l = continuum_limit_w22(truncation, None)?;
        put_string(out_json, to_json(&l)?)
    })
}

/// Weierstrass `wp(z)` and `wp'(z)` for invariants `g2`, `g3`. `out` receives
/// `[re wp, im wp, re wp', im wp']`.
///
/// # Safety
/// `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ddea_wp_eval(g2_re: f64, g2_im: f64, g3_re: f64, g3_im: f64, z_re: f64, z_im: f64, out: *mut f64) -> DdeaStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(DdeaStatus::NullPointer, "out is null".into()));
        }
        let (w, dw) = wp_eval(
            Complex64::new(z_re, z_im),
            Complex64::new(g2_re, g2_im),
            Complex64::new(g3_re, g3_im),
        )?;
        let vals = [w.re, w.im, dw.re, dw.im];
        ptr::copy_nonoverlapping(vals.as_ptr(), out, 4);
        Ok(())
    })
}
