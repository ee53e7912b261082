//! C ABI over the core library: opaque handles, integer status codes,
//! and a thread-local last-error message. All entry points catch
//! panics and report them as `GMMN_STATUS_PANIC` instead of unwinding
//! across the boundary.
//!
//! The matching declarations live in `include/gmmn.h`.
//!
//! Every entry point shares one safety contract: pointer arguments
//! must be null or valid (strings NUL-terminated, handles previously
//! returned by this library and not yet freed); nulls are rejected
//! with `GMMN_STATUS_NULL_ARGUMENT`. Per-function `# Safety` sections
//! would all restate this, so the lint is silenced crate-wide.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gmmn::error::GmmnError;
use gmmn::geom::{Instance, RectilinearNetwork};
use gmmn::rsa::SteinerBackend;
use gmmn::solver::{solve_gmmn, Algorithm, SolverConfig};
use gmmn::toolkit::{gen_random, gen_tight, GenRandomConfig};

pub const GMMN_STATUS_OK: c_int = 0;
pub const GMMN_STATUS_INFEASIBLE: c_int = 1;
pub const GMMN_STATUS_PARSE: c_int = 2;
pub const GMMN_STATUS_CONFIG: c_int = 3;
pub const GMMN_STATUS_SELF_CHECK: c_int = 4;
pub const GMMN_STATUS_NULL_ARGUMENT: c_int = 5;
pub const GMMN_STATUS_PANIC: c_int = 6;

pub const GMMN_ALGORITHM_RECURSIVE_D: c_int = 0;
pub const GMMN_ALGORITHM_IMPROVED_2D: c_int = 1;

pub const GMMN_BACKEND_MST: c_int = 0;
pub const GMMN_BACKEND_EXACT_SMALL: c_int = 1;

/// Opaque instance handle.
pub struct GmmnInstance(Instance);
/// Opaque network handle.
pub struct GmmnNetwork(RectilinearNetwork);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &GmmnError) -> c_int {
    match err {
        GmmnError::Parse(_) | GmmnError::Io(_) => GMMN_STATUS_PARSE,
        GmmnError::SelfCheckFailed => GMMN_STATUS_SELF_CHECK,
        _ => GMMN_STATUS_CONFIG,
    }
}

fn guard(f: impl FnOnce() -> c_int) -> c_int {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {}", msg));
            GMMN_STATUS_PANIC
        }
    }
}

fn fail(err: GmmnError) -> c_int {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

/// Message for the most recent failing call on this thread, or NULL.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gmmn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

/// Parses an instance file image. On success stores a new handle in
/// `out`; free it with `gmmn_instance_free`.
#[no_mangle]
pub unsafe extern "C" fn gmmn_instance_parse(
    text: *const c_char,
    out: *mut *mut GmmnInstance,
) -> c_int {
    guard(|| {
        if out.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        let Some(text) = read_str(text) else {
            set_error("text is null or not UTF-8".into());
            return GMMN_STATUS_NULL_ARGUMENT;
        };
        match gmmn::io::parse_instance(text) {
            Ok((inst, _warnings)) => {
                *out = Box::into_raw(Box::new(GmmnInstance(inst)));
                GMMN_STATUS_OK
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gmmn_instance_serialize(
    inst: *const GmmnInstance,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| {
        if inst.is_null() || out.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        let text = gmmn::io::serialize_instance(&(*inst).0, &[]);
        *out = CString::new(text).expect("no NUL in output").into_raw();
        GMMN_STATUS_OK
    })
}

#[no_mangle]
pub unsafe extern "C" fn gmmn_instance_dim(inst: *const GmmnInstance) -> c_int {
    if inst.is_null() {
        return -1;
    }
    (*inst).0.dim as c_int
}

#[no_mangle]
pub unsafe extern "C" fn gmmn_instance_pair_count(inst: *const GmmnInstance) -> c_int {
    if inst.is_null() {
        return -1;
    }
    (*inst).0.len() as c_int
}

/// Random instance with integer coordinates in [lo, hi].
#[no_mangle]
pub unsafe extern "C" fn gmmn_gen_random(
    dim: c_int,
    n_pairs: c_int,
    lo: i64,
    hi: i64,
    seed: u64,
    out: *mut *mut GmmnInstance,
) -> c_int {
    guard(|| {
        if out.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        if dim < 0 || n_pairs < 0 {
            set_error("dim and n_pairs must be nonnegative".into());
            return GMMN_STATUS_CONFIG;
        }
        match gen_random(&GenRandomConfig {
            dim: dim as usize,
            n_pairs: n_pairs as usize,
            lo,
            hi,
            seed,
        }) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(GmmnInstance(inst)));
                GMMN_STATUS_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Nested hard family of depth k with eps = eps_num/eps_den. The
/// certificate handle is optional (pass NULL to skip it).
#[no_mangle]
pub unsafe extern "C" fn gmmn_gen_tight(
    k: c_int,
    eps_num: i64,
    eps_den: i64,
    out: *mut *mut GmmnInstance,
    cert_out: *mut *mut GmmnNetwork,
) -> c_int {
    guard(|| {
        if out.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        if k < 0 || eps_den == 0 {
            set_error("k must be nonnegative and eps_den nonzero".into());
            return GMMN_STATUS_CONFIG;
        }
        let eps = gmmn::geom::ratio(eps_num, eps_den);
        match gen_tight(k as usize, &eps) {
            Ok(fam) => {
                *out = Box::into_raw(Box::new(GmmnInstance(fam.instance)));
                if !cert_out.is_null() {
                    *cert_out = Box::into_raw(Box::new(GmmnNetwork(fam.certificate)));
                }
                GMMN_STATUS_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs the solver; `algorithm` and `backend` take the GMMN_ALGORITHM_*
/// and GMMN_BACKEND_* constants.
#[no_mangle]
pub unsafe extern "C" fn gmmn_solve(
    inst: *const GmmnInstance,
    algorithm: c_int,
    backend: c_int,
    parallel: c_int,
    out: *mut *mut GmmnNetwork,
) -> c_int {
    guard(|| {
        if inst.is_null() || out.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        let algorithm = match algorithm {
            GMMN_ALGORITHM_RECURSIVE_D => Algorithm::RecursiveD,
            GMMN_ALGORITHM_IMPROVED_2D => Algorithm::Improved2d,
            _ => {
                set_error(format!("unknown algorithm {}", algorithm));
                return GMMN_STATUS_CONFIG;
            }
        };
        let backend = match backend {
            GMMN_BACKEND_MST => SteinerBackend::MstRectilinear,
            GMMN_BACKEND_EXACT_SMALL => SteinerBackend::ExactSmall,
            _ => {
                set_error(format!("unknown backend {}", backend));
                return GMMN_STATUS_CONFIG;
            }
        };
        let cfg = SolverConfig {
            algorithm,
            backend,
            parallel: parallel != 0,
        };
        match solve_gmmn(&(*inst).0, &cfg) {
            Ok(net) => {
                *out = Box::into_raw(Box::new(GmmnNetwork(net)));
                GMMN_STATUS_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Checks the network against the instance. Returns OK when feasible,
/// GMMN_STATUS_INFEASIBLE otherwise (with the violation count in
/// `violations` when non-NULL).
#[no_mangle]
pub unsafe extern "C" fn gmmn_verify(
    inst: *const GmmnInstance,
    net: *const GmmnNetwork,
    violations: *mut c_int,
) -> c_int {
    guard(|| {
        if inst.is_null() || net.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        let report = gmmn::verifier::verify_instance(&(*net).0, &(*inst).0);
        if !violations.is_null() {
            *violations = report.violations.len() as c_int;
        }
        if report.feasible() {
            GMMN_STATUS_OK
        } else {
            set_error(format!("{} violated pair(s)", report.violations.len()));
            GMMN_STATUS_INFEASIBLE
        }
    })
}

/// Total network length as an exact rational string ("num/den" or an
/// integer). Free with `gmmn_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gmmn_network_length(
    net: *const GmmnNetwork,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| {
        if net.is_null() || out.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        let text = gmmn::io::format_rational(&(*net).0.length());
        *out = CString::new(text).expect("no NUL in output").into_raw();
        GMMN_STATUS_OK
    })
}

#[no_mangle]
pub unsafe extern "C" fn gmmn_network_serialize(
    net: *const GmmnNetwork,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| {
        if net.is_null() || out.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        let text = gmmn::io::serialize_network(&(*net).0);
        *out = CString::new(text).expect("no NUL in output").into_raw();
        GMMN_STATUS_OK
    })
}

#[no_mangle]
pub unsafe extern "C" fn gmmn_network_parse(
    text: *const c_char,
    out: *mut *mut GmmnNetwork,
) -> c_int {
    guard(|| {
        if out.is_null() {
            return GMMN_STATUS_NULL_ARGUMENT;
        }
        let Some(text) = read_str(text) else {
            set_error("text is null or not UTF-8".into());
            return GMMN_STATUS_NULL_ARGUMENT;
        };
        match gmmn::io::parse_network(text) {
            Ok(net) => {
                *out = Box::into_raw(Box::new(GmmnNetwork(net)));
                GMMN_STATUS_OK
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn gmmn_instance_free(inst: *mut GmmnInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

#[no_mangle]
pub unsafe extern "C" fn gmmn_network_free(net: *mut GmmnNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Frees strings returned by the *_serialize and length functions.
#[no_mangle]
pub unsafe extern "C" fn gmmn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
