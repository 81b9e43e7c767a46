//! C ABI over `periodika`.
//!
//! Rules live behind opaque [`PkRule`] handles. Every call returns a
//! [`PkStatus`]; on failure [`pk_last_error`] describes the cause. Strings
//! handed out by the library are released with [`pk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use periodika::additive::{additive_stp_witness, classify_additive};
use periodika::cli::classify_table;
use periodika::configs::Config;
use periodika::engine::space_time;
use periodika::periodicity::{
    find_stp_witness, stp_empty_scan, WitnessSearch, DEFAULT_VIOLATION_CAP,
};
use periodika::rules::parse_rule_spec;
use periodika::{CaError, Rule, TableRule};

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    ResourceCap = 4,
    NotSurjective = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Opaque rule handle.
pub struct PkRule {
    spec: String,
    rule: Rule,
    table: TableRule,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &CaError) -> PkStatus {
    match e {
        CaError::ResourceCap(_) => PkStatus::ResourceCap,
        CaError::NotSurjective | CaError::DegenerateMiddle => PkStatus::NotSurjective,
        CaError::InvalidArgument(_) => PkStatus::InvalidArgument,
        _ => PkStatus::Parse,
    }
}

fn guard(f: impl FnOnce() -> Result<(), PkStatus>) -> PkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            PkStatus::Panic
        }
    }
}

fn fail(e: CaError) -> PkStatus {
    set_error(&e.to_string());
    status_of(&e)
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, PkStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(PkStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        PkStatus::InvalidUtf8
    })
}

unsafe fn rule_arg<'a>(p: *const PkRule) -> Result<&'a PkRule, PkStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null rule handle");
        PkStatus::NullPointer
    })
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), PkStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(PkStatus::NullPointer);
    }
    let c = CString::new(s).map_err(|_| {
        set_error("output contains a NUL byte");
        PkStatus::InvalidArgument
    })?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread. Valid until the next
/// call on the same thread; never null.
#[no_mangle]
pub extern "C" fn pk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a rule literal such as `additive:m=4;r=1;c=2,1,2` or
/// `wolfram:90`. On success `*out` owns a handle for [`pk_rule_free`].
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pk_rule_parse(spec: *const c_char, out: *mut *mut PkRule) -> PkStatus {
    guard(|| {
        let text = str_arg(spec)?;
        if out.is_null() {
            set_error("null output pointer");
            return Err(PkStatus::NullPointer);
        }
        let rule = parse_rule_spec(text).map_err(fail)?;
        let table = rule.to_table().map_err(fail)?;
        *out = Box::into_raw(Box::new(PkRule {
            spec: text.to_string(),
            rule,
            table,
        }));
        Ok(())
    })
}

/// # Safety
/// `rule` must come from [`pk_rule_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pk_rule_free(rule: *mut PkRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Alphabet size of the rule, or 0 for a null handle.
///
/// # Safety
/// `rule` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_rule_alphabet(rule: *const PkRule) -> usize {
    rule.as_ref().map_or(0, |r| r.table.alphabet_size())
}

/// Classification report as JSON. Additive rules get the full
/// algebraic report; table rules the oracle report at `budget`.
///
/// # Safety
/// `rule` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pk_classify_json(
    rule: *const PkRule,
    budget: u32,
    out: *mut *mut c_char,
) -> PkStatus {
    guard(|| {
        let r = rule_arg(rule)?;
        let json = match r.rule.as_additive() {
            Some(a) => classify_additive(a).map_err(fail)?.to_json(),
            None => {
                if budget == 0 {
                    return Err(fail(CaError::InvalidArgument(
                        "budget must be positive".into(),
                    )));
                }
                let report = classify_table(&r.spec, &r.table, budget).map_err(fail)?;
                serde_json::to_string_pretty(&report).expect("report serializes")
            }
        };
        put_string(out, json)
    })
}

/// Space-time diagram on the inclusive window `[lo, hi]`, one row per line.
///
/// # Safety
/// `rule` must be a live handle, `config` a NUL-terminated literal and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_simulate_ascii(
    rule: *const PkRule,
    config: *const c_char,
    steps: usize,
    lo: i64,
    hi: i64,
    out: *mut *mut c_char,
) -> PkStatus {
    guard(|| {
        let r = rule_arg(rule)?;
        let x: Config = str_arg(config)?.parse().map_err(fail)?;
        let trace = match &x {
            Config::Cyclic(c) => space_time(&r.table, c, steps, lo, hi),
            Config::Ep(e) => space_time(&r.table, e, steps, lo, hi),
        }
        .map_err(fail)?;
        put_string(out, trace.to_ascii())
    })
}

/// Scan for strictly temporally periodic points, reported as JSON.
///
/// # Safety
/// `rule` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pk_scan_json(
    rule: *const PkRule,
    tail_period_max: usize,
    mid_len_max: usize,
    t_max: usize,
    out: *mut *mut c_char,
) -> PkStatus {
    guard(|| {
        let r = rule_arg(rule)?;
        let report = stp_empty_scan(
            &r.table,
            tail_period_max,
            mid_len_max,
            t_max,
            DEFAULT_VIOLATION_CAP,
        )
        .map_err(fail)?;
        put_string(
            out,
            serde_json::to_string_pretty(&report).expect("report serializes"),
        )
    })
}

/// Strictly temporally periodic witness at default search bounds, as
/// JSON (`null` when none is found).
///
/// # Safety
/// `rule` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pk_witness_json(rule: *const PkRule, out: *mut *mut c_char) -> PkStatus {
    guard(|| {
        let r = rule_arg(rule)?;
        let search = WitnessSearch::default();
        let witness = match r.rule.as_additive() {
            Some(a) => additive_stp_witness(a, &search),
            None => find_stp_witness(&r.table, &search),
        }
        .map_err(fail)?;
        put_string(
            out,
            serde_json::to_string_pretty(&witness).expect("witness serializes"),
        )
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn pk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
