//! C interface to `optate`.
//!
//! Every fallible function returns an [`OptateStatus`] and writes its result
//! through an out-pointer. On failure a message is available from
//! [`optate_last_error`] until the next call on the same thread. Handles are
//! opaque and must be released with the matching `_free` function.

#![deny(unsafe_op_in_unsafe_fn)]

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use optate::curve::{g1_mul, G1Point, G2Affine};
use optate::params::{derive_params_with, reference_params, BnParams, DeriveOptions, PointJson};
use optate::tower::Fp12;
use optate::vectors::fp12_to_hex;
use optate::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptateStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedHex = 3,
    OutOfRange = 4,
    NotOnCurve = 5,
    WrongSubgroup = 6,
    Infinity = 7,
    InvalidParams = 8,
    InvalidArgument = 9,
    Internal = 10,
}

impl From<&Error> for OptateStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::MalformedHex(_) => OptateStatus::MalformedHex,
            Error::OutOfRange => OptateStatus::OutOfRange,
            Error::NotOnCurve => OptateStatus::NotOnCurve,
            Error::WrongSubgroup => OptateStatus::WrongSubgroup,
            Error::Infinity => OptateStatus::Infinity,
            Error::Validation(_) | Error::InvalidModulus(_) | Error::SearchExhausted(_) => OptateStatus::InvalidParams,
            _ => OptateStatus::InvalidArgument,
        }
    }
}

/// Curve parameters.
pub struct OptateParams {
    inner: BnParams,
}

/// A point of the order-r subgroup of E(F_p).
pub struct OptateG1 {
    inner: G1Point,
}

/// A point of the order-r subgroup of the sextic twist, affine.
pub struct OptateG2 {
    inner: G2Affine,
}

/// A pairing value in F_p12.
pub struct OptateGt {
    inner: Fp12,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(OptateStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail((&e).into(), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(OptateStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, storing its error message and converting panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OptateStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OptateStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OptateStatus::Internal
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    // SAFETY: the caller passes a handle obtained from this library, or null.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and NUL-terminated per the API contract.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Fail(OptateStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: checked non-null; the caller owns the slot.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Fail(OptateStatus::Internal, "string contains NUL".into()))?;
    // SAFETY: checked non-null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn scalar(s: &str) -> Result<BigUint, Fail> {
    BigUint::parse_bytes(s.as_bytes(), 16).ok_or_else(|| Fail(OptateStatus::MalformedHex, format!("malformed hex: {s}")))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        // SAFETY: `p` came from `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Message for the last failed call on this thread, or null. Owned by the
/// library.
#[no_mangle]
pub extern "C" fn optate_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static.
#[no_mangle]
pub extern "C" fn optate_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or a string from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn optate_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: per contract.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The 254-bit reference curve.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn optate_params_reference(out: *mut *mut OptateParams) -> OptateStatus {
    guard(|| unsafe { put(out, OptateParams { inner: reference_params()? }) })
}

/// Derives a curve from `t`, searching for b.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn optate_params_derive(t: i64, out: *mut *mut OptateParams) -> OptateStatus {
    guard(|| unsafe { put(out, OptateParams { inner: derive_params_with(t, DeriveOptions::default())? }) })
}

/// Parameters as a JSON document. Free with [`optate_string_free`].
///
/// # Safety
/// `params` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_params_to_json(params: *const OptateParams, out: *mut *mut c_char) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        let json = serde_json::to_string_pretty(&p.inner.to_json()).map_err(|e| Fail(OptateStatus::Internal, e.to_string()))?;
        put_string(out, json)
    })
}

/// # Safety
/// `params` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optate_params_free(params: *mut OptateParams) {
    unsafe { free(params) }
}

/// # Safety
/// `params` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_g1_generator(params: *const OptateParams, out: *mut *mut OptateG1) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        put(out, OptateG1 { inner: p.inner.g1_gen })
    })
}

/// # Safety
/// `params` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_g2_generator(params: *const OptateParams, out: *mut *mut OptateG2) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        put(out, OptateG2 { inner: p.inner.g2_gen })
    })
}

/// Decodes a G1 point from big-endian hex coordinates. Curve and subgroup
/// membership are checked when the point is paired.
///
/// # Safety
/// Pointers are live and NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_g1_from_hex(
    params: *const OptateParams,
    x: *const c_char,
    y: *const c_char,
    out: *mut *mut OptateG1,
) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        let j = PointJson { infinity: false, x: vec![text(x, "x")?.into()], y: vec![text(y, "y")?.into()] };
        put(out, OptateG1 { inner: j.to_g1(&p.inner)? })
    })
}

/// Decodes a G2 point `(x0 + x1·u, y0 + y1·u)`.
///
/// # Safety
/// Pointers are live and NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_g2_from_hex(
    params: *const OptateParams,
    x0: *const c_char,
    x1: *const c_char,
    y0: *const c_char,
    y1: *const c_char,
    out: *mut *mut OptateG2,
) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        let j = PointJson {
            infinity: false,
            x: vec![text(x0, "x0")?.into(), text(x1, "x1")?.into()],
            y: vec![text(y0, "y0")?.into(), text(y1, "y1")?.into()],
        };
        put(out, OptateG2 { inner: j.to_g2(&p.inner)? })
    })
}

/// `k·P` for a hex scalar `k`.
///
/// # Safety
/// Pointers are live; `k` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_g1_mul(
    params: *const OptateParams,
    point: *const OptateG1,
    k: *const c_char,
    out: *mut *mut OptateG1,
) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        let pt = borrow(point, "point")?;
        let k = scalar(text(k, "k")?)?;
        put(out, OptateG1 { inner: g1_mul(p.inner.modulus(), &pt.inner, &k) })
    })
}

/// `k·Q` for a hex scalar `k`.
///
/// # Safety
/// Pointers are live; `k` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_g2_mul(
    params: *const OptateParams,
    point: *const OptateG2,
    k: *const c_char,
    out: *mut *mut OptateG2,
) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        let pt = borrow(point, "point")?;
        let k = scalar(text(k, "k")?)?;
        let c = p.inner.ctx();
        let q = c.g2_to_affine(&c.g2_mul(&c.g2_from_affine(&pt.inner), &k));
        put(out, OptateG2 { inner: q })
    })
}

/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optate_g1_free(p: *mut OptateG1) {
    unsafe { free(p) }
}

/// # Safety
/// `q` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optate_g2_free(q: *mut OptateG2) {
    unsafe { free(q) }
}

/// The optimal Ate pairing. Rejects off-curve, infinite and wrong-subgroup
/// inputs.
///
/// # Safety
/// Pointers are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_pairing(
    params: *const OptateParams,
    p: *const OptateG1,
    q: *const OptateG2,
    out: *mut *mut OptateGt,
) -> OptateStatus {
    guard(|| unsafe {
        let params = borrow(params, "params")?;
        let (p, q) = (borrow(p, "p")?, borrow(q, "q")?);
        let v = optate::pairing::optimal_ate(&params.inner, &p.inner, &q.inner)?;
        put(out, OptateGt { inner: v.value })
    })
}

/// `g^k` for a hex exponent `k`.
///
/// # Safety
/// Pointers are live; `k` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_gt_pow(
    params: *const OptateParams,
    g: *const OptateGt,
    k: *const c_char,
    out: *mut *mut OptateGt,
) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        let g = borrow(g, "g")?;
        let k = scalar(text(k, "k")?)?;
        put(out, OptateGt { inner: p.inner.ctx().fp12_pow(&g.inner, &k) })
    })
}

/// 1 when equal, 0 when not, -1 when either pointer is null.
///
/// # Safety
/// Pointers are null or live handles.
#[no_mangle]
pub unsafe extern "C" fn optate_gt_eq(a: *const OptateGt, b: *const OptateGt) -> c_int {
    // SAFETY: per contract.
    match unsafe { (a.as_ref(), b.as_ref()) } {
        (Some(a), Some(b)) => c_int::from(a.inner == b.inner),
        _ => -1,
    }
}

/// The twelve F_p coefficients as a JSON array of hex strings. Free with
/// [`optate_string_free`].
///
/// # Safety
/// Pointers are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn optate_gt_to_json(
    params: *const OptateParams,
    g: *const OptateGt,
    out: *mut *mut c_char,
) -> OptateStatus {
    guard(|| unsafe {
        let p = borrow(params, "params")?;
        let g = borrow(g, "g")?;
        let hex = fp12_to_hex(p.inner.modulus(), &g.inner);
        put_string(out, serde_json::to_string(&hex).map_err(|e| Fail(OptateStatus::Internal, e.to_string()))?)
    })
}

/// # Safety
/// `g` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn optate_gt_free(g: *mut OptateGt) {
    unsafe { free(g) }
}
