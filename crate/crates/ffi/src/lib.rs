//! C ABI over `binpack-core`.
//!
//! Instances and packings are opaque heap handles owned by the caller and
//! released with their `_free` function. Every fallible call returns a
//! [`BpStatus`]; on failure [`bp_last_error`] describes what went wrong on the
//! calling thread. Strings returned by the library are released with
//! [`bp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use binpack_core::adversary::Family;
use binpack_core::algorithms::{AlgorithmId, CardinalityCap};
use binpack_core::analysis::{lambda, pi};
use binpack_core::harness::{exit, generate_family, FamilyParams};
use binpack_core::model::{format_rational, Instance, Packing, Size};
use binpack_core::oracle::{opt_exact_with_limit, OracleError, DEFAULT_LIMIT};

/// Largest index accepted by [`bp_pi_string`]. π(i) has about 2^(i−1) bits.
pub const BP_PI_MAX_INDEX: usize = 16;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    TooLarge = 4,
    Construction = 5,
    Panic = 6,
}

/// Opaque list of item sizes.
pub struct BpInstance(Instance);

/// Opaque assignment of items to bins.
pub struct BpPacking(Packing);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(BpStatus, String);

impl Failure {
    fn new(status: BpStatus, message: impl Into<String>) -> Self {
        Failure(status, message.into())
    }
}

/// Runs `body` with panics caught and the thread's error slot updated.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BpStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BpStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {message}"));
            BpStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(BpStatus::NullPointer, format!("{what} is null")))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(BpStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(BpStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(BpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn cap(k: usize) -> Result<CardinalityCap, Failure> {
    let k = (k != 0).then_some(k);
    CardinalityCap::from_option(k).map_err(|e| Failure::new(BpStatus::InvalidArgument, e.to_string()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn bp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn bp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// A new empty instance.
#[no_mangle]
pub extern "C" fn bp_instance_new() -> *mut BpInstance {
    Box::into_raw(Box::new(BpInstance(Instance::new(Vec::new()))))
}

/// Appends the item `numer/denom`, which must lie in (0, 1].
///
/// # Safety
/// `instance` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bp_instance_push(
    instance: *mut BpInstance,
    numer: i64,
    denom: i64,
) -> BpStatus {
    guard(|| {
        let inst = borrow_mut(instance, "instance")?;
        let size = Size::from_ratio(numer, denom)
            .map_err(|e| Failure::new(BpStatus::InvalidArgument, e.to_string()))?;
        let mut items = inst.0.items().to_vec();
        items.push(size);
        inst.0 = Instance::new(items);
        Ok(())
    })
}

/// Parses instance text (one size per line, `#` comments) into a new handle.
///
/// # Safety
/// `source` must be null or a nul-terminated string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn bp_instance_parse(
    source: *const c_char,
    out: *mut *mut BpInstance,
) -> BpStatus {
    guard(|| {
        let src = text(source, "source")?;
        let out = borrow_mut(out, "out")?;
        let inst =
            Instance::parse_text(src).map_err(|e| Failure::new(BpStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(BpInstance(inst)));
        Ok(())
    })
}

/// Number of items, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_instance_len(instance: *const BpInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.0.len())
}

/// Instance in the text format, as a string to release with
/// [`bp_string_free`]. Null on a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_instance_to_text(instance: *const BpInstance) -> *mut c_char {
    match instance.as_ref() {
        Some(i) => into_c_string(i.0.to_text()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `instance` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bp_instance_free(instance: *mut BpInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Packs `instance` with the named algorithm (`nf`, `nfd`, `ff`, `ffd`, `mm`,
/// optionally suffixed `_k`). `k` is a cardinality cap, 0 for none; it must
/// agree with any suffix.
///
/// # Safety
/// Pointers must be null or valid as described above.
#[no_mangle]
pub unsafe extern "C" fn bp_run(
    instance: *const BpInstance,
    algorithm: *const c_char,
    k: usize,
    out: *mut *mut BpPacking,
) -> BpStatus {
    guard(|| {
        let inst = borrow(instance, "instance")?;
        let name = text(algorithm, "algorithm")?;
        let out = borrow_mut(out, "out")?;
        let mut id: AlgorithmId = name
            .parse()
            .map_err(|e: binpack_core::algorithms::AlgorithmError| {
                Failure::new(BpStatus::InvalidArgument, e.to_string())
            })?;
        let c = cap(k)?;
        if !c.is_unbounded() {
            if !id.cap.is_unbounded() && id.cap != c {
                return Err(Failure::new(
                    BpStatus::InvalidArgument,
                    format!("{name} conflicts with k = {k}"),
                ));
            }
            id.cap = c;
        }
        *out = Box::into_raw(Box::new(BpPacking(id.run(&inst.0))));
        Ok(())
    })
}

/// Number of bins used, or 0 for a null handle.
///
/// # Safety
/// `packing` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_packing_bins(packing: *const BpPacking) -> usize {
    packing.as_ref().map_or(0, |p| p.0.num_bins())
}

/// Number of items, or 0 for a null handle.
///
/// # Safety
/// `packing` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_packing_len(packing: *const BpPacking) -> usize {
    packing.as_ref().map_or(0, |p| p.0.len())
}

/// Copies the 1-based bin label of each item into `buf`, which must hold
/// `bp_packing_len` entries.
///
/// # Safety
/// `buf` must be null or point to `len` writable `size_t`s.
#[no_mangle]
pub unsafe extern "C" fn bp_packing_assignment(
    packing: *const BpPacking,
    buf: *mut usize,
    len: usize,
) -> BpStatus {
    guard(|| {
        let p = borrow(packing, "packing")?;
        if buf.is_null() {
            return Err(Failure::new(BpStatus::NullPointer, "buf is null"));
        }
        if len < p.0.len() {
            return Err(Failure::new(
                BpStatus::InvalidArgument,
                format!("buffer holds {len} entries, need {}", p.0.len()),
            ));
        }
        std::slice::from_raw_parts_mut(buf, p.0.len()).copy_from_slice(&p.0.assignment);
        Ok(())
    })
}

/// Sets `*valid` to whether the packing respects capacity, cap and labelling
/// for `instance`. Fails when the lengths differ.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bp_packing_validate(
    packing: *const BpPacking,
    instance: *const BpInstance,
    valid: *mut bool,
) -> BpStatus {
    guard(|| {
        let p = borrow(packing, "packing")?;
        let inst = borrow(instance, "instance")?;
        let valid = borrow_mut(valid, "valid")?;
        let report = p
            .0
            .validate(&inst.0)
            .map_err(|e| Failure::new(BpStatus::InvalidArgument, e.to_string()))?;
        *valid = report.is_ok();
        Ok(())
    })
}

/// Packing as JSON, released with [`bp_string_free`]. Null on a null handle.
///
/// # Safety
/// `packing` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bp_packing_to_json(packing: *const BpPacking) -> *mut c_char {
    match packing.as_ref() {
        Some(p) => into_c_string(p.0.to_json()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `packing` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bp_packing_free(packing: *mut BpPacking) {
    if !packing.is_null() {
        drop(Box::from_raw(packing));
    }
}

/// Exact optimum bin count. `k` caps items per bin (0 for none); `limit`
/// bounds the item count (0 for the default). `witness` may be null; when
/// given it receives an optimal packing.
///
/// # Safety
/// Pointers must be null or valid; `opt` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn bp_opt_exact(
    instance: *const BpInstance,
    k: usize,
    limit: usize,
    opt: *mut usize,
    witness: *mut *mut BpPacking,
) -> BpStatus {
    guard(|| {
        let inst = borrow(instance, "instance")?;
        let opt = borrow_mut(opt, "opt")?;
        let limit = if limit == 0 { DEFAULT_LIMIT } else { limit };
        let result = opt_exact_with_limit(&inst.0, cap(k)?, limit).map_err(|e| match e {
            OracleError::TooLarge { .. } => Failure::new(BpStatus::TooLarge, e.to_string()),
            _ => Failure::new(BpStatus::InvalidArgument, e.to_string()),
        })?;
        *opt = result.opt;
        if let Some(w) = witness.as_mut() {
            *w = Box::into_raw(Box::new(BpPacking(result.witness)));
        }
        Ok(())
    })
}

/// Parameters for [`bp_generate`]. Zero means "family default" for the
/// optional counts.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct BpFamilyParams {
    pub m: usize,
    pub k: usize,
    pub space: usize,
    pub classes: usize,
    pub cap3: bool,
}

/// Builds a certified lower-bound instance for the named family
/// (`maxmin-unit`, `maxmin-bounded`, `presorted-bounded`, `kcard-bounded`,
/// `online-unit`). `certificate` may be null.
///
/// # Safety
/// Pointers must be null or valid; `instance` and `claimed_opt` must be
/// non-null.
#[no_mangle]
pub unsafe extern "C" fn bp_generate(
    family: *const c_char,
    params: BpFamilyParams,
    instance: *mut *mut BpInstance,
    certificate: *mut *mut BpPacking,
    claimed_opt: *mut usize,
) -> BpStatus {
    guard(|| {
        let name = text(family, "family")?;
        let instance = borrow_mut(instance, "instance")?;
        let claimed_opt = borrow_mut(claimed_opt, "claimed_opt")?;
        let family: Family = name
            .parse()
            .map_err(|e: binpack_core::adversary::AdversaryError| {
                Failure::new(BpStatus::InvalidArgument, e.to_string())
            })?;
        let nonzero = |v: usize| (v != 0).then_some(v);
        let p = FamilyParams {
            m: params.m,
            k: nonzero(params.k),
            space: nonzero(params.space),
            classes: nonzero(params.classes),
            cap3: params.cap3,
            eps: None,
        };
        let built = generate_family(family, &p).map_err(|e| {
            let status = if e.exit_code() == exit::USAGE {
                BpStatus::InvalidArgument
            } else {
                BpStatus::Construction
            };
            Failure::new(status, e.to_string())
        })?;
        *claimed_opt = built.claimed_opt;
        *instance = Box::into_raw(Box::new(BpInstance(built.instance)));
        if let Some(c) = certificate.as_mut() {
            *c = Box::into_raw(Box::new(BpPacking(built.certificate)));
        }
        Ok(())
    })
}

/// `λ_k` as `p/q`, released with [`bp_string_free`]. Null when `k` is 0.
#[no_mangle]
pub extern "C" fn bp_lambda_string(k: usize) -> *mut c_char {
    clear_error();
    if k == 0 {
        set_error("k must be positive");
        return ptr::null_mut();
    }
    into_c_string(format_rational(&lambda(k)))
}

/// `π(i)` in decimal, released with [`bp_string_free`]. Null when `i` is 0 or
/// above [`BP_PI_MAX_INDEX`].
#[no_mangle]
pub extern "C" fn bp_pi_string(i: usize) -> *mut c_char {
    clear_error();
    if i == 0 || i > BP_PI_MAX_INDEX {
        set_error(format!("index {i} outside 1..={BP_PI_MAX_INDEX}"));
        return ptr::null_mut();
    }
    into_c_string(pi(i).to_string())
}

/// # Safety
/// `s` must be null or a string returned by this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn bp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
