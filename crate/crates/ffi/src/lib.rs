//! C ABI for the vvmf analysis engine.
//!
//! The surface follows the usual opaque-handle pattern: descriptors go in as
//! JSON strings, an analysis handle comes back, and structured results are
//! returned either as freshly allocated JSON strings (free them with
//! [`vvmf_string_free`]) or through caller-supplied buffers. Every function
//! returns a [`VvmfStatus`] code; on failure a thread-local message is
//! available via [`vvmf_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use vvmf::descriptor::parse_descriptor;
use vvmf::forms::{Caps, FormsError};
use vvmf::qseries::identity_suite;
use vvmf::report::{analyze_parsed, AnalysisBundle, ReportError};
use vvmf::wpline::WeightedLine;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VvmfStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidDescriptor = 3,
    ComputeFailed = 4,
    Undetermined = 5,
    BufferTooSmall = 6,
}

/// Opaque analysis handle.
pub struct VvmfAnalysis {
    bundle: AnalysisBundle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let cstring = CString::new(message).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_of_report_error(e: &ReportError) -> VvmfStatus {
    match e {
        ReportError::Descriptor(_) => VvmfStatus::InvalidDescriptor,
        ReportError::Forms(FormsError::YUndetermined { .. }) => VvmfStatus::Undetermined,
        ReportError::Forms(_) => VvmfStatus::ComputeFailed,
    }
}

/// # Safety
/// `descriptor_json` must be a valid NUL-terminated string and `out` a valid
/// pointer; on `VVMF_STATUS_OK` the caller owns the handle and must release
/// it with [`vvmf_analysis_free`].
#[no_mangle]
pub unsafe extern "C" fn vvmf_analysis_new(
    descriptor_json: *const c_char,
    out: *mut *mut VvmfAnalysis,
) -> VvmfStatus {
    vvmf_analysis_new_with_caps(descriptor_json, 1000, 20000, out)
}

/// Variant of [`vvmf_analysis_new`] with explicit enumeration caps for the
/// T-order search and the image closure.
///
/// # Safety
/// Same contract as [`vvmf_analysis_new`].
#[no_mangle]
pub unsafe extern "C" fn vvmf_analysis_new_with_caps(
    descriptor_json: *const c_char,
    order_cap: usize,
    closure_cap: usize,
    out: *mut *mut VvmfAnalysis,
) -> VvmfStatus {
    if descriptor_json.is_null() || out.is_null() {
        set_error("null argument".into());
        return VvmfStatus::NullArgument;
    }
    let raw = match CStr::from_ptr(descriptor_json).to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("descriptor is not valid UTF-8".into());
            return VvmfStatus::InvalidUtf8;
        }
    };
    let parsed = match parse_descriptor(raw) {
        Ok(p) => p,
        Err(e) => {
            set_error(e.to_string());
            return VvmfStatus::InvalidDescriptor;
        }
    };
    let caps = Caps {
        order_cap,
        closure_cap,
    };
    match analyze_parsed(raw, parsed, caps) {
        Ok(bundle) => {
            *out = Box::into_raw(Box::new(VvmfAnalysis { bundle }));
            VvmfStatus::Ok
        }
        Err(e) => {
            let status = status_of_report_error(&e);
            set_error(e.to_string());
            status
        }
    }
}

/// # Safety
/// `handle` must come from [`vvmf_analysis_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn vvmf_analysis_free(handle: *mut VvmfAnalysis) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// The full report as a JSON string; free it with [`vvmf_string_free`].
///
/// # Safety
/// `handle` must be a live analysis handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vvmf_analysis_report_json(
    handle: *const VvmfAnalysis,
    out: *mut *mut c_char,
) -> VvmfStatus {
    if handle.is_null() || out.is_null() {
        set_error("null argument".into());
        return VvmfStatus::NullArgument;
    }
    let report = &(*handle).bundle.report;
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    match CString::new(json) {
        Ok(s) => {
            *out = s.into_raw();
            VvmfStatus::Ok
        }
        Err(_) => {
            set_error("report contained an interior NUL".into());
            VvmfStatus::ComputeFailed
        }
    }
}

/// Virtual dimension of the analyzed representation.
///
/// # Safety
/// `handle` must be a live analysis handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vvmf_analysis_dim(
    handle: *const VvmfAnalysis,
    out: *mut u64,
) -> VvmfStatus {
    if handle.is_null() || out.is_null() {
        set_error("null argument".into());
        return VvmfStatus::NullArgument;
    }
    *out = (*handle).bundle.analysis.rep.dim() as u64;
    VvmfStatus::Ok
}

/// Generator weights k_1 <= ... <= k_d written into `out_buf`; `out_len`
/// receives d. Returns `VVMF_STATUS_UNDETERMINED` when the weight-one data
/// cannot be resolved, and `VVMF_STATUS_BUFFER_TOO_SMALL` (with `out_len`
/// set) when the buffer cannot hold all weights.
///
/// # Safety
/// `handle` must be a live analysis handle; `out_buf` must point to at least
/// `buf_len` writable elements; `out_len` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vvmf_analysis_weights(
    handle: *const VvmfAnalysis,
    out_buf: *mut i64,
    buf_len: usize,
    out_len: *mut usize,
) -> VvmfStatus {
    if handle.is_null() || out_len.is_null() {
        set_error("null argument".into());
        return VvmfStatus::NullArgument;
    }
    let gw = match (*handle).bundle.analysis.generator_weights() {
        Ok(gw) => gw,
        Err(e) => {
            set_error(e.to_string());
            return VvmfStatus::ComputeFailed;
        }
    };
    let weights = match gw.weight_multiset() {
        Ok(w) => w,
        Err(FormsError::YUndetermined { lo, hi }) => {
            set_error(format!("y is pinned only to {}..={}", lo, hi));
            return VvmfStatus::Undetermined;
        }
        Err(e) => {
            set_error(e.to_string());
            return VvmfStatus::ComputeFailed;
        }
    };
    *out_len = weights.len();
    if weights.len() > buf_len {
        return VvmfStatus::BufferTooSmall;
    }
    if out_buf.is_null() {
        set_error("null output buffer".into());
        return VvmfStatus::NullArgument;
    }
    for (i, w) in weights.iter().enumerate() {
        *out_buf.add(i) = *w as i64;
    }
    VvmfStatus::Ok
}

/// Free a string allocated by this library.
///
/// # Safety
/// `s` must have been returned by a vvmf function and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vvmf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The last error message on this thread, or NULL if none; free it with
/// [`vvmf_string_free`].
#[no_mangle]
pub extern "C" fn vvmf_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// h^0(O(k)) on the weighted projective line P(n1, n2).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vvmf_wpline_h0(n1: u32, n2: u32, k: i64, out: *mut u64) -> VvmfStatus {
    if out.is_null() {
        return VvmfStatus::NullArgument;
    }
    if n1 == 0 || n2 == 0 {
        set_error("weights must be positive".into());
        return VvmfStatus::InvalidDescriptor;
    }
    *out = WeightedLine::new(n1, n2).h0(k);
    VvmfStatus::Ok
}

/// h^1(O(k)) on P(n1, n2).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vvmf_wpline_h1(n1: u32, n2: u32, k: i64, out: *mut u64) -> VvmfStatus {
    if out.is_null() {
        return VvmfStatus::NullArgument;
    }
    if n1 == 0 || n2 == 0 {
        set_error("weights must be positive".into());
        return VvmfStatus::InvalidDescriptor;
    }
    *out = WeightedLine::new(n1, n2).h1(k);
    VvmfStatus::Ok
}

/// chi(O(k)) = h^0 - h^1 on P(n1, n2).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vvmf_wpline_euler(n1: u32, n2: u32, k: i64, out: *mut i64) -> VvmfStatus {
    if out.is_null() {
        return VvmfStatus::NullArgument;
    }
    if n1 == 0 || n2 == 0 {
        set_error("weights must be positive".into());
        return VvmfStatus::InvalidDescriptor;
    }
    *out = WeightedLine::new(n1, n2).euler_line(k);
    VvmfStatus::Ok
}

/// Run the q-expansion identity suite to the given order; `VVMF_STATUS_OK`
/// means every identity verified.
#[no_mangle]
pub extern "C" fn vvmf_qcheck(order: usize) -> VvmfStatus {
    let checks = identity_suite(order);
    if let Some(fail) = checks.iter().find(|c| !c.pass) {
        set_error(format!("identity failed: {}", fail.name));
        VvmfStatus::ComputeFailed
    } else {
        VvmfStatus::Ok
    }
}
