//! C ABI for the rroch kernels: opaque series handles, status codes, and
//! JSON strings for structured results.
//!
//! Conventions: every function that can fail returns `RrochStatus`; outputs
//! are written through out-pointers. Strings returned through out-pointers
//! are NUL-terminated, allocated by this library, and must be released with
//! `rroch_string_free`. On failure the thread-local message inspected by
//! `rroch_last_error` describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rroch::catalog;
use rroch::charclasses as cc;
use rroch::hochschild;
use rroch::locale;
use rroch::scalar::{format_rational, parse_rational};
use rroch::series::{MultiSeries, SeriesRepr};
use rroch::weierstrass;
use serde_json::json;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RrochStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    MathError = 4,
    Panic = 5,
}

/// Opaque handle to a truncated multivariate power series.
pub struct RrochSeries {
    inner: MultiSeries,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into();
    LAST_ERROR.with(|cell| {
        *cell.borrow_mut() = CString::new(msg).ok();
    });
}

fn guard<F: FnOnce() -> RrochStatus>(f: F) -> RrochStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            RrochStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, RrochStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(RrochStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        RrochStatus::InvalidUtf8
    })
}

fn write_string(out: *mut *mut c_char, text: String) -> RrochStatus {
    if out.is_null() {
        set_error("null output pointer");
        return RrochStatus::NullPointer;
    }
    match CString::new(text) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            RrochStatus::Ok
        }
        Err(_) => {
            set_error("result contains an interior NUL byte");
            RrochStatus::InvalidInput
        }
    }
}

fn write_series(out: *mut *mut RrochSeries, series: MultiSeries) -> RrochStatus {
    if out.is_null() {
        set_error("null output pointer");
        return RrochStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(RrochSeries { inner: series })) };
    RrochStatus::Ok
}

unsafe fn series_ref<'a>(ptr: *const RrochSeries) -> Result<&'a MultiSeries, RrochStatus> {
    if ptr.is_null() {
        set_error("null series handle");
        return Err(RrochStatus::NullPointer);
    }
    Ok(&(*ptr).inner)
}

/// Crate version as a static string; do not free.
#[no_mangle]
pub extern "C" fn rroch_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy of the last error message on this thread, or NULL when none.
/// Free with `rroch_string_free`.
#[no_mangle]
pub extern "C" fn rroch_last_error() -> *mut c_char {
    LAST_ERROR.with(|cell| match &*cell.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Release a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by an rroch function and not freed already.
#[no_mangle]
pub unsafe extern "C" fn rroch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release a series handle. NULL is a no-op.
///
/// # Safety
/// `s` must have been produced by an rroch constructor and not freed already.
#[no_mangle]
pub unsafe extern "C" fn rroch_series_free(s: *mut RrochSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Parse human syntax like "1 - 2/3*x1^2*x2" into a series handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_series_parse(
    text: *const c_char,
    nvars: usize,
    trunc: u32,
    out: *mut *mut RrochSeries,
) -> RrochStatus {
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        if nvars == 0 {
            set_error("nvars must be at least 1");
            return RrochStatus::InvalidInput;
        }
        match rroch::series::parse_series(text, nvars, trunc) {
            Ok(series) => write_series(out, series),
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::InvalidInput
            }
        }
    })
}

/// Build a series from its sparse JSON form.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_series_from_json(
    json: *const c_char,
    out: *mut *mut RrochSeries,
) -> RrochStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let repr: SeriesRepr = match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => {
                set_error(e.to_string());
                return RrochStatus::InvalidInput;
            }
        };
        match MultiSeries::try_from(&repr) {
            Ok(series) => write_series(out, series),
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::InvalidInput
            }
        }
    })
}

/// Serialize a series to its sparse JSON form.
///
/// # Safety
/// `s` must be a live series handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_series_to_json(
    s: *const RrochSeries,
    out: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let series = match series_ref(s) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let text = serde_json::to_string(&SeriesRepr::from(series)).expect("series serializes");
        write_string(out, text)
    })
}

macro_rules! series_binop {
    ($name:ident, $method:ident, $doc:literal) => {
        #[doc = $doc]
        ///
        /// # Safety
        /// `a` and `b` must be live series handles and `out` a valid pointer.
        #[no_mangle]
        pub unsafe extern "C" fn $name(
            a: *const RrochSeries,
            b: *const RrochSeries,
            out: *mut *mut RrochSeries,
        ) -> RrochStatus {
            guard(|| {
                let (a, b) = match (series_ref(a), series_ref(b)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(s), _) | (_, Err(s)) => return s,
                };
                match a.$method(b) {
                    Ok(series) => write_series(out, series),
                    Err(e) => {
                        set_error(e.to_string());
                        RrochStatus::MathError
                    }
                }
            })
        }
    };
}

series_binop!(rroch_series_add, add, "Sum of two series in the same ring.");
series_binop!(rroch_series_sub, sub, "Difference of two series in the same ring.");
series_binop!(rroch_series_mul, mul, "Product, truncated at the ring's degree bound.");

/// Inverse of a unit (nonzero constant term), truncation-exact.
///
/// # Safety
/// `a` must be a live series handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_series_invert_unit(
    a: *const RrochSeries,
    out: *mut *mut RrochSeries,
) -> RrochStatus {
    guard(|| {
        let a = match series_ref(a) {
            Ok(a) => a,
            Err(status) => return status,
        };
        match a.invert_unit() {
            Ok(series) => write_series(out, series),
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::MathError
            }
        }
    })
}

/// Divide a two-variable series by U - T: out JSON carries "q" and
/// "r" (the diagonal restriction).
///
/// # Safety
/// `f` must be a live series handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_series_divide_diagonal(
    f: *const RrochSeries,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let f = match series_ref(f) {
            Ok(f) => f,
            Err(status) => return status,
        };
        match rroch::series::divide_diagonal(f) {
            Ok((q, r)) => {
                let body = json!({
                    "q": SeriesRepr::from(&q),
                    "r": SeriesRepr::from(&r),
                });
                write_string(out_json, body.to_string())
            }
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::MathError
            }
        }
    })
}

/// Weighted norm with per-variable radii (JSON array of "p/q" strings) and
/// exponent p ("a/b", 0 < p <= 1); out JSON carries "value" and "exact".
///
/// # Safety
/// All pointer arguments must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rroch_series_weighted_norm(
    s: *const RrochSeries,
    radii_json: *const c_char,
    p: *const c_char,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let series = match series_ref(s) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let radii_text = match read_str(radii_json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let p_text = match read_str(p) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let radii_strs: Vec<String> = match serde_json::from_str(radii_text) {
            Ok(v) => v,
            Err(e) => {
                set_error(format!("radii must be a JSON array of strings: {e}"));
                return RrochStatus::InvalidInput;
            }
        };
        let mut radii = Vec::with_capacity(radii_strs.len());
        for r in &radii_strs {
            match parse_rational(r) {
                Ok(v) => radii.push(v),
                Err(e) => {
                    set_error(e.to_string());
                    return RrochStatus::InvalidInput;
                }
            }
        }
        let p = match parse_rational(p_text) {
            Ok(v) => v,
            Err(e) => {
                set_error(e.to_string());
                return RrochStatus::InvalidInput;
            }
        };
        match series.weighted_norm(&radii, &p) {
            Ok(bound) => {
                let body = json!({
                    "value": format_rational(&bound.value),
                    "exact": bound.exact,
                });
                write_string(out_json, body.to_string())
            }
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::InvalidInput
            }
        }
    })
}

/// Weierstrass preparation at the given working order; out JSON carries
/// "k", "g", "u".
///
/// # Safety
/// `f` must be a live series handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_weierstrass_prepare(
    f: *const RrochSeries,
    order: u32,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let f = match series_ref(f) {
            Ok(f) => f,
            Err(status) => return status,
        };
        match weierstrass::prepare(f, order) {
            Ok(p) => {
                let body = json!({
                    "k": p.k,
                    "g": SeriesRepr::from(&p.g),
                    "u": SeriesRepr::from(&p.u),
                    "working_order": p.working_order,
                });
                write_string(out_json, body.to_string())
            }
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::MathError
            }
        }
    })
}

/// Division with remainder by a monic divisor; out JSON carries "q", "r".
///
/// # Safety
/// `f` and `g` must be live series handles and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_weierstrass_divide(
    f: *const RrochSeries,
    g: *const RrochSeries,
    order: u32,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let (f, g) = match (series_ref(f), series_ref(g)) {
            (Ok(f), Ok(g)) => (f, g),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match weierstrass::divide(f, g, order) {
            Ok((q, r)) => {
                let body = json!({
                    "q": SeriesRepr::from(&q),
                    "r": SeriesRepr::from(&r),
                });
                write_string(out_json, body.to_string())
            }
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::MathError
            }
        }
    })
}

/// chi(space, bundle) for catalog spaces; out JSON carries "chi" (exact
/// rational string) and "integer".
///
/// # Safety
/// `space` and `bundle` must be NUL-terminated strings, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn rroch_hrr(
    space: *const c_char,
    bundle: *const c_char,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let space_text = match read_str(space) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let bundle_text = match read_str(bundle) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let result = catalog::parse_space(space_text).and_then(|sp| {
            let v = catalog::parse_line_bundle(&sp, bundle_text)?;
            cc::hrr(&sp, &v)
        });
        match result {
            Ok(chi) => {
                let body = json!({
                    "chi": format_rational(&chi),
                    "integer": cc::is_integer(&chi),
                });
                write_string(out_json, body.to_string())
            }
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::InvalidInput
            }
        }
    })
}

/// Brute-force Euler characteristic oracle for O(k) on P^n.
#[no_mangle]
pub extern "C" fn rroch_oracle_chi_proj(n: u32, k: i64) -> i64 {
    cc::oracle_chi_proj(n, k)
}

/// hrr-vs-oracle sweep; out JSON carries "rows" and "all_match".
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_chi_table(
    n: u32,
    kmin: i64,
    kmax: i64,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        if kmin > kmax || n > 6 {
            set_error("need kmin <= kmax and n <= 6");
            return RrochStatus::InvalidInput;
        }
        let space = cc::proj_space(n);
        let mut rows = Vec::new();
        let mut all_match = true;
        for k in kmin..=kmax {
            let v = match cc::twist_line(&space, k) {
                Ok(v) => v,
                Err(e) => {
                    set_error(e.to_string());
                    return RrochStatus::MathError;
                }
            };
            let chi = match cc::hrr(&space, &v) {
                Ok(c) => c,
                Err(e) => {
                    set_error(e.to_string());
                    return RrochStatus::MathError;
                }
            };
            let oracle = cc::oracle_chi_proj(n, k);
            let matched = cc::rational_to_integer(&chi) == Some(oracle);
            all_match &= matched;
            rows.push(json!({
                "n": n, "k": k,
                "hrr": format_rational(&chi),
                "oracle": oracle,
                "match": matched,
            }));
        }
        write_string(
            out_json,
            json!({ "rows": rows, "all_match": all_match }).to_string(),
        )
    })
}

/// GRR pushforward comparison for a supported map; out JSON carries "lhs",
/// "rhs", "equal".
///
/// # Safety
/// `map` must be a NUL-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_grr_check(
    map: *const c_char,
    a: i64,
    b: i64,
    m: i64,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let map_text = match read_str(map) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let result =
            catalog::grr_case_from_map(map_text, a, b, m).and_then(|case| case.check());
        match result {
            Ok(report) => write_string(
                out_json,
                json!({
                    "lhs": report.lhs.to_string(),
                    "rhs": report.rhs.to_string(),
                    "equal": report.equal,
                })
                .to_string(),
            ),
            Err(e) => {
                set_error(e.to_string());
                RrochStatus::InvalidInput
            }
        }
    })
}

/// Hochschild homology dimensions and the HKR verdict; out JSON carries
/// "hh" (per-level dims) and "hkr_pass".
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_hkr_check(
    nvars: u32,
    degree_bound: u32,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| match hochschild::hkr_check(nvars, degree_bound) {
        Ok(report) => {
            let table: Vec<_> = report
                .computed
                .iter()
                .map(|g| json!({ "level": g.level, "dims": g.dims }))
                .collect();
            write_string(
                out_json,
                json!({ "hh": table, "hkr_pass": report.pass }).to_string(),
            )
        }
        Err(e) => {
            set_error(e.to_string());
            RrochStatus::InvalidInput
        }
    })
}

/// Containment prover; out JSON carries "verdict" ("Proved"/"Unknown"),
/// the replayed "trace", and "replay_ok".
///
/// # Safety
/// `lhs` and `rhs` must be NUL-terminated strings, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn rroch_locale_prove(
    lhs: *const c_char,
    rhs: *const c_char,
    depth: u32,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let lhs_text = match read_str(lhs) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let rhs_text = match read_str(rhs) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let (lhs, rhs) = match (locale::parse_expr(lhs_text), locale::parse_expr(rhs_text)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => {
                set_error(e.to_string());
                return RrochStatus::InvalidInput;
            }
        };
        let body = match locale::decide_containment(&lhs, &rhs, depth) {
            locale::Decision::Proved(trace) => {
                let replay_ok = locale::replay_trace(&lhs, &trace);
                json!({
                    "verdict": "Proved",
                    "trace": trace_to_json(&trace),
                    "replay_ok": replay_ok,
                })
            }
            locale::Decision::Unknown => json!({ "verdict": "Unknown" }),
        };
        write_string(out_json, body.to_string())
    })
}

/// Emptiness prover; out JSON carries "verdict" ("Empty"/"Unknown").
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rroch_locale_empty(
    expr: *const c_char,
    depth: u32,
    out_json: *mut *mut c_char,
) -> RrochStatus {
    guard(|| {
        let text = match read_str(expr) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let parsed = match locale::parse_expr(text) {
            Ok(e) => e,
            Err(e) => {
                set_error(e.to_string());
                return RrochStatus::InvalidInput;
            }
        };
        let body = match locale::decide_empty(&parsed, depth) {
            locale::EmptyDecision::Empty(trace) => {
                let replay_ok = locale::replay_trace(&parsed, &trace);
                json!({
                    "verdict": "Empty",
                    "trace": trace_to_json(&trace),
                    "replay_ok": replay_ok,
                })
            }
            locale::EmptyDecision::Unknown => json!({ "verdict": "Unknown" }),
        };
        write_string(out_json, body.to_string())
    })
}

fn trace_to_json(trace: &[locale::TraceStep]) -> serde_json::Value {
    let steps: Vec<_> = trace
        .iter()
        .map(|s| {
            json!({
                "rule": s.rule,
                "premises": s.premises.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "conclusion": s.conclusion.to_string(),
            })
        })
        .collect();
    json!(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = CStr::from_ptr(ptr).to_str().unwrap().to_string();
        rroch_string_free(ptr);
        s
    }

    #[test]
    fn series_roundtrip_through_ffi() {
        unsafe {
            let text = cstr("1 - 2/3*x1^2*x2 + (1+1i)*x2^3");
            let mut handle: *mut RrochSeries = ptr::null_mut();
            assert_eq!(
                rroch_series_parse(text.as_ptr(), 2, 5, &mut handle),
                RrochStatus::Ok
            );
            let mut json_out: *mut c_char = ptr::null_mut();
            assert_eq!(rroch_series_to_json(handle, &mut json_out), RrochStatus::Ok);
            let json_text = take_string(json_out);
            let json_c = cstr(&json_text);
            let mut back: *mut RrochSeries = ptr::null_mut();
            assert_eq!(
                rroch_series_from_json(json_c.as_ptr(), &mut back),
                RrochStatus::Ok
            );
            assert_eq!((*handle).inner, (*back).inner);
            rroch_series_free(handle);
            rroch_series_free(back);
        }
    }

    #[test]
    fn arithmetic_and_errors() {
        unsafe {
            let mut one_minus_t: *mut RrochSeries = ptr::null_mut();
            let text = cstr("1 - T");
            assert_eq!(
                rroch_series_parse(text.as_ptr(), 1, 3, &mut one_minus_t),
                RrochStatus::Ok
            );
            let mut inv: *mut RrochSeries = ptr::null_mut();
            assert_eq!(
                rroch_series_invert_unit(one_minus_t, &mut inv),
                RrochStatus::Ok
            );
            let mut product: *mut RrochSeries = ptr::null_mut();
            assert_eq!(
                rroch_series_mul(one_minus_t, inv, &mut product),
                RrochStatus::Ok
            );
            let mut product_json: *mut c_char = ptr::null_mut();
            assert_eq!(
                rroch_series_to_json(product, &mut product_json),
                RrochStatus::Ok
            );
            let text = take_string(product_json);
            assert!(text.contains("\"re\":\"1\""));
            // Non-unit inversion sets the error message.
            let t_only = cstr("T");
            let mut t_handle: *mut RrochSeries = ptr::null_mut();
            assert_eq!(
                rroch_series_parse(t_only.as_ptr(), 1, 3, &mut t_handle),
                RrochStatus::Ok
            );
            let mut out: *mut RrochSeries = ptr::null_mut();
            assert_eq!(
                rroch_series_invert_unit(t_handle, &mut out),
                RrochStatus::MathError
            );
            let err = take_string(rroch_last_error());
            assert!(err.contains("unit"));
            rroch_series_free(one_minus_t);
            rroch_series_free(inv);
            rroch_series_free(product);
            rroch_series_free(t_handle);
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut out: *mut RrochSeries = ptr::null_mut();
            assert_eq!(
                rroch_series_parse(ptr::null(), 1, 3, &mut out),
                RrochStatus::NullPointer
            );
            let text = cstr("1");
            assert_eq!(
                rroch_series_parse(text.as_ptr(), 1, 3, ptr::null_mut()),
                RrochStatus::NullPointer
            );
        }
    }

    #[test]
    fn hrr_and_chi_table_through_ffi() {
        unsafe {
            let space = cstr("P2");
            let bundle = cstr("O(3)");
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                rroch_hrr(space.as_ptr(), bundle.as_ptr(), &mut out),
                RrochStatus::Ok
            );
            let body: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(body["chi"], "10");
            assert_eq!(rroch_oracle_chi_proj(2, 3), 10);

            let mut table: *mut c_char = ptr::null_mut();
            assert_eq!(rroch_chi_table(1, -2, 2, &mut table), RrochStatus::Ok);
            let body: serde_json::Value = serde_json::from_str(&take_string(table)).unwrap();
            assert_eq!(body["all_match"], true);
        }
    }

    #[test]
    fn grr_through_ffi() {
        unsafe {
            let map = cstr("P1xP1->P1");
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                rroch_grr_check(map.as_ptr(), 2, 3, 0, &mut out),
                RrochStatus::Ok
            );
            let body: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(body["equal"], true);
        }
    }

    #[test]
    fn weierstrass_through_ffi() {
        unsafe {
            let text = cstr("x1 + x1^2 - x2 - x1*x2");
            let mut f: *mut RrochSeries = ptr::null_mut();
            assert_eq!(
                rroch_series_parse(text.as_ptr(), 2, 6, &mut f),
                RrochStatus::Ok
            );
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(rroch_weierstrass_prepare(f, 5, &mut out), RrochStatus::Ok);
            let body: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(body["k"], 1);
            rroch_series_free(f);
        }
    }

    #[test]
    fn locale_through_ffi() {
        unsafe {
            let lhs = cstr("|f|<=1 & |g|<=1");
            let rhs = cstr("|f*g|<=1");
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                rroch_locale_prove(lhs.as_ptr(), rhs.as_ptr(), 3, &mut out),
                RrochStatus::Ok
            );
            let body: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(body["verdict"], "Proved");
            assert_eq!(body["replay_ok"], true);

            let expr = cstr("|f|<=1/2 & |f|>=1");
            let mut out2: *mut c_char = ptr::null_mut();
            assert_eq!(
                rroch_locale_empty(expr.as_ptr(), 3, &mut out2),
                RrochStatus::Ok
            );
            let body: serde_json::Value = serde_json::from_str(&take_string(out2)).unwrap();
            assert_eq!(body["verdict"], "Empty");
        }
    }

    #[test]
    fn hkr_through_ffi() {
        unsafe {
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(rroch_hkr_check(2, 3, &mut out), RrochStatus::Ok);
            let body: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(body["hkr_pass"], true);
        }
    }

    #[test]
    fn version_is_static() {
        let v = rroch_version();
        let text = unsafe { CStr::from_ptr(v) }.to_str().unwrap();
        assert_eq!(text, env!("CARGO_PKG_VERSION"));
    }
}
