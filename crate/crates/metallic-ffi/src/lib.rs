//! C ABI for the metallic polynomial-structure library.
//!
//! Every entry point is panic-safe (`catch_unwind`), returns an
//! [`MtlStatus`] code, and reports failure detail through a
//! thread-local message readable with [`mtl_last_error`]. Structures
//! cross the boundary as opaque [`MtlStructure`] handles; composite
//! results cross as JSON strings owned by the caller and released with
//! [`mtl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde::Serialize;

use metallic::constancy::{classify, enumerate_grid, Direction, TargetFamily};
use metallic::exact::metallic_mean;
use metallic::variation::harmonicity_certificate;
use metallic::{QuadExt, StructureKind, StructureSpec};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtlStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input was rejected: unknown token, out-of-range parameter,
    /// malformed JSON, or a structure missing required data.
    InvalidInput = 3,
    /// An internal panic was caught; the library state is still valid.
    Panic = 4,
}

/// Opaque handle to a polynomial-structure specification.
pub struct MtlStructure {
    inner: StructureSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: MtlStatus, message: impl Into<String>) -> MtlStatus {
    let text = message.into();
    let stored = CString::new(text)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").expect("literal"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
    status
}

/// Run an entry-point body with a cleared error slot and a panic guard.
fn guarded(body: impl FnOnce() -> MtlStatus) -> MtlStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(MtlStatus::Panic, "internal panic"),
    }
}

/// Read a required C string argument as UTF-8.
///
/// # Safety
/// `pointer` must be NULL or point to a NUL-terminated string.
unsafe fn read_utf8<'a>(pointer: *const c_char, name: &str) -> Result<&'a str, MtlStatus> {
    if pointer.is_null() {
        return Err(fail(MtlStatus::NullArgument, format!("{name} is NULL")));
    }
    CStr::from_ptr(pointer)
        .to_str()
        .map_err(|_| fail(MtlStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

/// Hand a heap string to the caller through `out`.
///
/// # Safety
/// `out` must be a valid, non-NULL destination pointer.
unsafe fn write_string(out: *mut *mut c_char, text: String) -> MtlStatus {
    match CString::new(text) {
        Ok(owned) => {
            *out = owned.into_raw();
            MtlStatus::Ok
        }
        Err(_) => fail(MtlStatus::InvalidInput, "output contained a NUL byte"),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, MtlStatus> {
    serde_json::to_string_pretty(value)
        .map_err(|e| fail(MtlStatus::InvalidInput, format!("serialization failed: {e}")))
}

fn parse_kind(token: &str, p: i64, q: i64) -> Result<StructureKind, MtlStatus> {
    match token {
        "metallic" => Ok(StructureKind::Metallic { p, q }),
        "golden" => Ok(StructureKind::Golden),
        "product" => Ok(StructureKind::AlmostProduct),
        "complex" => Ok(StructureKind::AlmostComplex),
        "contact" => Ok(StructureKind::AlmostContact),
        "para_contact" => Ok(StructureKind::AlmostParaContact),
        other => Err(fail(
            MtlStatus::InvalidInput,
            format!(
                "unknown structure kind '{other}' (expected metallic, golden, product, \
                 complex, contact, or para_contact)"
            ),
        )),
    }
}

#[derive(Serialize)]
struct CheckReport {
    name: String,
    ok: bool,
    residual: QuadExt,
}

#[derive(Serialize)]
struct StructureReport {
    kind: String,
    dim: usize,
    metric_checked: bool,
    checks: Vec<CheckReport>,
    passed: bool,
}

/// ABI revision of this header; bump on any breaking change.
#[no_mangle]
pub extern "C" fn mtl_abi_version() -> u32 {
    1
}

/// Message describing the most recent failure on the calling thread,
/// or NULL if the last call on this thread succeeded. The pointer is
/// owned by the library and is invalidated by the next `mtl_` call on
/// the same thread; do not free it.
#[no_mangle]
pub extern "C" fn mtl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow().as_ref().map_or(ptr::null(), |message| message.as_ptr())
    })
}

/// Release a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `text` must be NULL or a pointer previously returned through a
/// `char **` output of this library, released at most once.
#[no_mangle]
pub unsafe extern "C" fn mtl_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Build a canonical structure on a flat model space.
///
/// `kind` is one of "metallic", "golden", "product", "complex",
/// "contact", "para_contact". `p` and `q` are read only for
/// "metallic" and must then be positive. `multiplicities` points to
/// `multiplicity_count` block sizes: two entries (eigenblock sizes)
/// for metallic/golden/product, one entry n for complex (dimension
/// 2n) and for contact/para_contact (dimension 2n+1). On success
/// `*out` owns the new handle; release it with `mtl_structure_free`.
///
/// # Safety
/// `kind` must be a NUL-terminated string, `multiplicities` must
/// point to `multiplicity_count` readable entries (NULL is allowed
/// when the count is zero), and `out` must be a valid destination.
#[no_mangle]
pub unsafe extern "C" fn mtl_structure_canonical(
    kind: *const c_char,
    p: i64,
    q: i64,
    multiplicities: *const usize,
    multiplicity_count: usize,
    out: *mut *mut MtlStructure,
) -> MtlStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MtlStatus::NullArgument, "out is NULL");
        }
        let token = match read_utf8(kind, "kind") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let kind = match parse_kind(token, p, q) {
            Ok(kind) => kind,
            Err(status) => return status,
        };
        let blocks: &[usize] = if multiplicity_count == 0 {
            &[]
        } else if multiplicities.is_null() {
            return fail(MtlStatus::NullArgument, "multiplicities is NULL");
        } else {
            std::slice::from_raw_parts(multiplicities, multiplicity_count)
        };
        match StructureSpec::canonical(kind, blocks) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(MtlStructure { inner: spec }));
                MtlStatus::Ok
            }
            Err(e) => fail(MtlStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Parse a structure from its JSON file form. On success `*out` owns
/// the new handle; release it with `mtl_structure_free`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn mtl_structure_from_json(
    json: *const c_char,
    out: *mut *mut MtlStructure,
) -> MtlStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MtlStatus::NullArgument, "out is NULL");
        }
        let text = match read_utf8(json, "json") {
            Ok(text) => text,
            Err(status) => return status,
        };
        match StructureSpec::from_json_str(text) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(MtlStructure { inner: spec }));
                MtlStatus::Ok
            }
            Err(e) => fail(MtlStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Serialize a structure to its JSON file form. The caller owns
/// `*json_out` and releases it with `mtl_string_free`.
///
/// # Safety
/// `structure` must be a live handle from this library and `json_out`
/// a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn mtl_structure_to_json(
    structure: *const MtlStructure,
    json_out: *mut *mut c_char,
) -> MtlStatus {
    guarded(|| {
        if structure.is_null() {
            return fail(MtlStatus::NullArgument, "structure is NULL");
        }
        if json_out.is_null() {
            return fail(MtlStatus::NullArgument, "json_out is NULL");
        }
        write_string(json_out, (*structure).inner.to_json())
    })
}

/// Dimension of the flat model space the structure lives on.
///
/// # Safety
/// `structure` must be a live handle and `dim_out` a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn mtl_structure_dim(
    structure: *const MtlStructure,
    dim_out: *mut usize,
) -> MtlStatus {
    guarded(|| {
        if structure.is_null() {
            return fail(MtlStatus::NullArgument, "structure is NULL");
        }
        if dim_out.is_null() {
            return fail(MtlStatus::NullArgument, "dim_out is NULL");
        }
        *dim_out = (*structure).inner.dim();
        MtlStatus::Ok
    })
}

/// Run the defining-identity checks, and with `check_metric` also the
/// metric-compatibility checks (the structure must then carry a
/// metric). `*json_out` receives a report
/// `{kind, dim, metric_checked, checks: [{name, ok, residual}], passed}`
/// with exact residuals; the caller releases it with
/// `mtl_string_free`. A failed mathematical check is reported inside
/// the JSON (`passed: false`), not as a status code.
///
/// # Safety
/// `structure` must be a live handle and `json_out` a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn mtl_structure_verify(
    structure: *const MtlStructure,
    check_metric: bool,
    json_out: *mut *mut c_char,
) -> MtlStatus {
    guarded(|| {
        if structure.is_null() {
            return fail(MtlStatus::NullArgument, "structure is NULL");
        }
        if json_out.is_null() {
            return fail(MtlStatus::NullArgument, "json_out is NULL");
        }
        let spec = &(*structure).inner;
        let identity = spec.verify();
        let mut checks: Vec<CheckReport> = identity
            .checks
            .into_iter()
            .map(|check| CheckReport {
                name: check.name,
                ok: check.ok,
                residual: check.residual_norm,
            })
            .collect();
        if check_metric {
            let compat = match spec.verify_compatibility() {
                Ok(outcome) => outcome,
                Err(e) => return fail(MtlStatus::InvalidInput, e.to_string()),
            };
            checks.extend(compat.checks.into_iter().map(|check| CheckReport {
                name: format!("compatibility: {}", check.name),
                ok: check.ok,
                residual: check.residual_norm,
            }));
        }
        let passed = checks.iter().all(|check| check.ok);
        let report = StructureReport {
            kind: spec.kind().to_string(),
            dim: spec.dim(),
            metric_checked: check_metric,
            checks,
            passed,
        };
        match to_json(&report) {
            Ok(text) => write_string(json_out, text),
            Err(status) => status,
        }
    })
}

/// Release a structure handle. NULL is a no-op.
///
/// # Safety
/// `structure` must be NULL or a handle from this library, released
/// at most once.
#[no_mangle]
pub unsafe extern "C" fn mtl_structure_free(structure: *mut MtlStructure) {
    if !structure.is_null() {
        drop(Box::from_raw(structure));
    }
}

/// Classify the constancy question for metallic maps against one
/// target family. `family` is one of "golden", "product", "complex",
/// "contact", "para_contact"; `direction` is "source" (metallic
/// domain) or "target" (metallic codomain). `*json_out` receives
/// `{p, q, family, direction, obstruction, verdict, witness}` with the
/// exact obstruction value and, when the obstruction vanishes, an
/// exactly verified non-zero intertwiner witness. The caller releases
/// the string with `mtl_string_free`.
///
/// # Safety
/// `family` and `direction` must be NUL-terminated strings and
/// `json_out` a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn mtl_classify(
    p: i64,
    q: i64,
    family: *const c_char,
    direction: *const c_char,
    json_out: *mut *mut c_char,
) -> MtlStatus {
    guarded(|| {
        if json_out.is_null() {
            return fail(MtlStatus::NullArgument, "json_out is NULL");
        }
        let family = match read_utf8(family, "family") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let family: TargetFamily = match family.parse() {
            Ok(parsed) => parsed,
            Err(e) => return fail(MtlStatus::InvalidInput, e.to_string()),
        };
        let direction = match read_utf8(direction, "direction") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let direction: Direction = match direction.parse() {
            Ok(parsed) => parsed,
            Err(e) => return fail(MtlStatus::InvalidInput, e.to_string()),
        };
        match classify(p, q, family, direction) {
            Ok(result) => match to_json(&result) {
                Ok(text) => write_string(json_out, text),
                Err(status) => status,
            },
            Err(e) => fail(MtlStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Classify every cell of the parameter grid `1 ≤ p ≤ p_max`,
/// `1 ≤ q ≤ q_max` across all five families and both directions.
/// `*json_out` receives the full record array in deterministic order;
/// the caller releases it with `mtl_string_free`.
///
/// # Safety
/// `json_out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn mtl_enumerate(
    p_max: i64,
    q_max: i64,
    json_out: *mut *mut c_char,
) -> MtlStatus {
    guarded(|| {
        if json_out.is_null() {
            return fail(MtlStatus::NullArgument, "json_out is NULL");
        }
        match enumerate_grid(p_max, q_max) {
            Ok(rows) => match to_json(&rows) {
                Ok(text) => write_string(json_out, text),
                Err(status) => status,
            },
            Err(e) => fail(MtlStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Evaluate the harmonicity certificate for an identity map between
/// the metallic model on `(p1, q1)` and the one on `(p2, q2)`.
/// `*json_out` receives the exact coefficient, the root comparisons,
/// and the verdict; the caller releases it with `mtl_string_free`.
///
/// # Safety
/// `json_out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn mtl_certificate(
    p1: i64,
    q1: i64,
    p2: i64,
    q2: i64,
    json_out: *mut *mut c_char,
) -> MtlStatus {
    guarded(|| {
        if json_out.is_null() {
            return fail(MtlStatus::NullArgument, "json_out is NULL");
        }
        match harmonicity_certificate(p1, q1, p2, q2) {
            Ok(certificate) => match to_json(&certificate) {
                Ok(text) => write_string(json_out, text),
                Err(status) => status,
            },
            Err(e) => fail(MtlStatus::InvalidInput, e.to_string()),
        }
    })
}

/// The metallic mean `(p + sqrt(p² + 4q)) / 2` as a double.
///
/// # Safety
/// `value_out` must be a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn mtl_metallic_mean(
    p: i64,
    q: i64,
    value_out: *mut f64,
) -> MtlStatus {
    guarded(|| {
        if value_out.is_null() {
            return fail(MtlStatus::NullArgument, "value_out is NULL");
        }
        match metallic_mean(p, q) {
            Ok(value) => {
                *value_out = value.to_f64();
                MtlStatus::Ok
            }
            Err(e) => fail(MtlStatus::InvalidInput, e.to_string()),
        }
    })
}
