//! C ABI for the shift-bribery workbench.
//!
//! Handles are opaque pointers created and destroyed here; every string
//! returned to the caller must be released with `sb_string_free`. All entry
//! points are null-safe and report problems through `SbStatus`.
//!
//! ```c
//! SbStatus status;
//! SbInstance *inst = sb_instance_parse(text, &status);
//! SbReport *report = sb_solve(inst, "auto", NULL, -1, &status);
//! if (sb_report_outcome(report) == SB_OUTCOME_FEASIBLE) { ... }
//! sb_report_free(report);
//! sb_instance_free(inst);
//! ```

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use shiftbribery::formats::{instance_digest, parse_instance, serialize_instance};
use shiftbribery::solvers::{dispatch_solver, Epsilon, Limits, Outcome, ReportRecord, Strategy};
use shiftbribery::BriberyInstance;

/// Result codes for the C interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    SbOk = 0,
    SbNullArgument = 1,
    SbInvalidUtf8 = 2,
    SbParseError = 3,
    SbInvalidArgument = 4,
    SbSolverError = 5,
}

/// Outcome codes reported by `sb_report_outcome`.
pub const SB_OUTCOME_FEASIBLE: i32 = 0;
pub const SB_OUTCOME_INFEASIBLE: i32 = 1;
pub const SB_OUTCOME_INCONCLUSIVE: i32 = 2;

/// Opaque parsed bribery instance.
pub struct SbInstance {
    inner: BriberyInstance,
}

/// Opaque solver report.
pub struct SbReport {
    outcome: i32,
    cost: i64,
    optimal: bool,
    json: CString,
}

fn set_status(out: *mut SbStatus, value: SbStatus) {
    if !out.is_null() {
        unsafe { *out = value };
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, status: *mut SbStatus) -> Option<&'a str> {
    if ptr.is_null() {
        set_status(status, SbStatus::SbNullArgument);
        return None;
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Some(s),
        Err(_) => {
            set_status(status, SbStatus::SbInvalidUtf8);
            None
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn sb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses an instance file (UTF-8 text). Returns NULL on failure with the
/// status set; free the handle with `sb_instance_free`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string or NULL.
#[no_mangle]
pub unsafe extern "C" fn sb_instance_parse(
    text: *const c_char,
    status: *mut SbStatus,
) -> *mut SbInstance {
    let Some(text) = utf8_arg(text, status) else {
        return ptr::null_mut();
    };
    match parse_instance(text) {
        Ok(inner) => {
            set_status(status, SbStatus::SbOk);
            Box::into_raw(Box::new(SbInstance { inner }))
        }
        Err(_) => {
            set_status(status, SbStatus::SbParseError);
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `inst` must come from `sb_instance_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sb_instance_free(inst: *mut SbInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Stable digest of the canonical serialization; free with `sb_string_free`.
///
/// # Safety
/// `inst` must be a live handle from `sb_instance_parse` or NULL.
#[no_mangle]
pub unsafe extern "C" fn sb_instance_digest(inst: *const SbInstance) -> *mut c_char {
    if inst.is_null() {
        return ptr::null_mut();
    }
    let digest = instance_digest(&(*inst).inner);
    CString::new(digest).map_or(ptr::null_mut(), CString::into_raw)
}

/// Canonical serialization of the instance; free with `sb_string_free`.
///
/// # Safety
/// `inst` must be a live handle from `sb_instance_parse` or NULL.
#[no_mangle]
pub unsafe extern "C" fn sb_instance_canonical(inst: *const SbInstance) -> *mut c_char {
    if inst.is_null() {
        return ptr::null_mut();
    }
    let text = serialize_instance(&(*inst).inner);
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// Runs a solver. `strategy` accepts the CLI strategy names; `epsilon` is
/// required for "fptas" (e.g. "0.25"), `smax` must be nonnegative for
/// "xp-shifts" and is ignored otherwise. Free the report with
/// `sb_report_free`.
///
/// # Safety
/// Pointer arguments must be valid (or NULL where documented).
#[no_mangle]
pub unsafe extern "C" fn sb_solve(
    inst: *const SbInstance,
    strategy: *const c_char,
    epsilon: *const c_char,
    smax: i64,
    status: *mut SbStatus,
) -> *mut SbReport {
    if inst.is_null() {
        set_status(status, SbStatus::SbNullArgument);
        return ptr::null_mut();
    }
    let Some(strategy_name) = utf8_arg(strategy, status) else {
        return ptr::null_mut();
    };
    let strategy = match strategy_name {
        "auto" => Strategy::Auto,
        "oracle" => Strategy::Oracle,
        "poly" => Strategy::Poly,
        "subset" => Strategy::Subset,
        "xp-voters" => Strategy::XpVoters,
        "ilp" => Strategy::Ilp,
        "kborda-unit" => Strategy::KBordaUnit,
        "fptas" => {
            let Some(eps_text) = utf8_arg(epsilon, status) else {
                return ptr::null_mut();
            };
            match eps_text.parse::<Epsilon>() {
                Ok(eps) => Strategy::FptAs(eps),
                Err(_) => {
                    set_status(status, SbStatus::SbInvalidArgument);
                    return ptr::null_mut();
                }
            }
        }
        "xp-shifts" => {
            if smax < 0 {
                set_status(status, SbStatus::SbInvalidArgument);
                return ptr::null_mut();
            }
            Strategy::XpShifts(smax as u64)
        }
        _ => {
            set_status(status, SbStatus::SbInvalidArgument);
            return ptr::null_mut();
        }
    };
    let instance = &(*inst).inner;
    match dispatch_solver(instance, &strategy, &Limits::default()) {
        Ok((name, report)) => {
            let record = ReportRecord::new(instance, name, &report);
            let json = serde_json_string(&record);
            let (outcome, cost, optimal) = match &report.outcome {
                Outcome::Feasible(sol) => (SB_OUTCOME_FEASIBLE, sol.cost as i64, sol.optimal),
                Outcome::Infeasible => (SB_OUTCOME_INFEASIBLE, -1, false),
                Outcome::Inconclusive(_) => (SB_OUTCOME_INCONCLUSIVE, -1, false),
            };
            set_status(status, SbStatus::SbOk);
            Box::into_raw(Box::new(SbReport {
                outcome,
                cost,
                optimal,
                json,
            }))
        }
        Err(_) => {
            set_status(status, SbStatus::SbSolverError);
            ptr::null_mut()
        }
    }
}

fn serde_json_string(record: &ReportRecord) -> CString {
    let text = serde_json::to_string(record).unwrap_or_else(|_| "{}".to_string());
    CString::new(text).unwrap_or_default()
}

/// # Safety
/// `report` must come from `sb_solve` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sb_report_free(report: *mut SbReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// 0 feasible, 1 infeasible, 2 inconclusive; -1 on NULL.
///
/// # Safety
/// `report` must be a live handle from `sb_solve` or NULL.
#[no_mangle]
pub unsafe extern "C" fn sb_report_outcome(report: *const SbReport) -> i32 {
    if report.is_null() {
        return -1;
    }
    (*report).outcome
}

/// Cost of the found action, or -1 when there is none.
///
/// # Safety
/// `report` must be a live handle from `sb_solve` or NULL.
#[no_mangle]
pub unsafe extern "C" fn sb_report_cost(report: *const SbReport) -> i64 {
    if report.is_null() {
        return -1;
    }
    (*report).cost
}

/// 1 when the solver guarantees the cost is optimal.
///
/// # Safety
/// `report` must be a live handle from `sb_solve` or NULL.
#[no_mangle]
pub unsafe extern "C" fn sb_report_optimal(report: *const SbReport) -> i32 {
    if report.is_null() {
        return 0;
    }
    i32::from((*report).optimal)
}

/// Full report as a JSON string (borrowed from the report; do not free, the
/// pointer is valid until `sb_report_free`).
///
/// # Safety
/// `report` must be a live handle from `sb_solve` or NULL.
#[no_mangle]
pub unsafe extern "C" fn sb_report_json(report: *const SbReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).json.as_ptr()
}

/// Frees strings returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by an `sb_*` function that
/// documents `sb_string_free`, and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
