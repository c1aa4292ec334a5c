//! C ABI over `berndenom`.
//!
//! Handles (`BdSieve`, `BdProfile`, `BdSet`) are opaque heap objects owned by
//! the caller and released with the matching `*_free`. Every function returns
//! a [`BdStatus`]; on failure a message is available from
//! [`bd_last_error_message`] on the same thread. Large integers are returned
//! as NUL-terminated decimal strings written into caller buffers.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use berndenom::arith::{digit_sum, required_limit};
use berndenom::scanner::{self, SetReport};
use berndenom::{denom, DenomProfile, Error, PrimeSieve};

/// Result codes shared by every exported function.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SieveTooSmall = 3,
    BufferTooSmall = 4,
    SieveBudget = 5,
    Internal = 6,
}

/// Sequences available through [`bd_value`].
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BdSequence {
    Dn = 0,
    Dd = 1,
    Db = 2,
    Ds = 3,
    DdPlus = 4,
    DdMinus = 5,
    DdShared = 6,
    DdCoprime = 7,
    DdComplement = 8,
    DbK = 9,
}

/// Fields readable from a [`BdProfile`] with [`bd_profile_field`].
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BdField {
    Dd = 0,
    DdMinus = 1,
    DdPlus = 2,
    DdShared = 3,
    DdCoprime = 4,
    DdComplement = 5,
    Dn = 6,
    Db = 7,
    Ds = 8,
    RadN = 9,
    RadN1 = 10,
}

/// Immutable prime table; may be shared across threads.
pub struct BdSieve(PrimeSieve);

/// All denominator quantities for one index.
pub struct BdProfile(DenomProfile);

/// Sorted members of an exceptional set.
pub struct BdSet(SetReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: BdStatus, msg: impl Into<String>) -> BdStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> BdStatus {
    let status = match e {
        Error::InsufficientSieve { .. } => BdStatus::SieveTooSmall,
        Error::SieveBudget { .. } => BdStatus::SieveBudget,
        _ => BdStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> BdStatus) -> BdStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(BdStatus::Internal, "internal panic"))
}

unsafe fn write_decimal(value: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> BdStatus {
    let required = value.len() + 1;
    if !needed.is_null() {
        *needed = required;
    }
    if buf.is_null() || len < required {
        return fail(
            BdStatus::BufferTooSmall,
            format!("buffer of {len} bytes cannot hold {required}"),
        );
    }
    ptr::copy_nonoverlapping(value.as_ptr(), buf as *mut u8, value.len());
    *buf.add(value.len()) = 0;
    BdStatus::Ok
}

/// Message for the last failing call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn bd_status_message(status: BdStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BdStatus::Ok => c"ok",
        BdStatus::NullPointer => c"null pointer argument",
        BdStatus::InvalidArgument => c"invalid argument",
        BdStatus::SieveTooSmall => c"sieve does not cover the requested index",
        BdStatus::BufferTooSmall => c"output buffer too small",
        BdStatus::SieveBudget => c"sieve limit exceeds memory budget",
        BdStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Sum of the base-`p` digits of `n`.
#[no_mangle]
pub unsafe extern "C" fn bd_digit_sum(n: u64, p: u64, out: *mut u64) -> BdStatus {
    if out.is_null() {
        return fail(BdStatus::NullPointer, "out is NULL");
    }
    match digit_sum(n, p) {
        Ok(s) => {
            *out = s;
            BdStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Builds a table of all primes `<= limit`.
#[no_mangle]
pub unsafe extern "C" fn bd_sieve_new(limit: u64, out: *mut *mut BdSieve) -> BdStatus {
    if out.is_null() {
        return fail(BdStatus::NullPointer, "out is NULL");
    }
    guard(|| match PrimeSieve::new(limit) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(BdSieve(s)));
            BdStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// Builds a table large enough for every index `<= n`.
#[no_mangle]
pub unsafe extern "C" fn bd_sieve_for_index(n: u64, out: *mut *mut BdSieve) -> BdStatus {
    bd_sieve_new(required_limit(n), out)
}

#[no_mangle]
pub unsafe extern "C" fn bd_sieve_limit(sieve: *const BdSieve) -> u64 {
    sieve.as_ref().map_or(0, |s| s.0.limit())
}

#[no_mangle]
pub unsafe extern "C" fn bd_sieve_free(sieve: *mut BdSieve) {
    if !sieve.is_null() {
        drop(Box::from_raw(sieve));
    }
}

unsafe fn sieve_for<'a>(sieve: *const BdSieve, n: u64) -> Result<&'a PrimeSieve, BdStatus> {
    let s = sieve
        .as_ref()
        .ok_or_else(|| fail(BdStatus::NullPointer, "sieve is NULL"))?;
    s.0.check_covers(required_limit(n)).map_err(from_error)?;
    Ok(&s.0)
}

/// Writes the decimal value of `seq` at index `n` into `buf`.
///
/// `k` is the derivative order for `BD_SEQUENCE_DB_K` and ignored otherwise.
/// `needed`, if non-NULL, receives the required buffer size including the NUL.
#[no_mangle]
pub unsafe extern "C" fn bd_value(
    sieve: *const BdSieve,
    seq: BdSequence,
    n: u64,
    k: u64,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> BdStatus {
    guard(|| {
        let s = match sieve_for(sieve, n) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let min_index = if matches!(seq, BdSequence::Db | BdSequence::Ds) { 0 } else { 1 };
        if n < min_index {
            return fail(BdStatus::InvalidArgument, format!("index {n} out of domain"));
        }
        if seq == BdSequence::DbK && k == 0 {
            return fail(BdStatus::InvalidArgument, "k must be positive");
        }
        let value = match seq {
            BdSequence::Dn => denom::dn(n).to_string(),
            BdSequence::Dd => denom::dd(n, s).to_string(),
            BdSequence::Db => denom::db(n, s).to_string(),
            BdSequence::Ds => denom::ds(n, s).to_string(),
            BdSequence::DdPlus => denom::dd_split_sqrt(n, s).1.to_string(),
            BdSequence::DdMinus => denom::dd_split_sqrt(n, s).0.to_string(),
            BdSequence::DdShared => denom::dd_split_divisibility(n, s).shared.to_string(),
            BdSequence::DdCoprime => denom::dd_coprime(n, s).to_string(),
            BdSequence::DdComplement => denom::dd_split_divisibility(n, s).complement.to_string(),
            BdSequence::DbK => denom::db_k(n, k, s).to_string(),
        };
        write_decimal(&value, buf, len, needed)
    })
}

/// `omega(D+(n))`, the number of primes `p > sqrt(n)` with `s_p(n) >= p`.
#[no_mangle]
pub unsafe extern "C" fn bd_omega_plus(sieve: *const BdSieve, n: u64, out: *mut u64) -> BdStatus {
    if out.is_null() {
        return fail(BdStatus::NullPointer, "out is NULL");
    }
    if n == 0 {
        return fail(BdStatus::InvalidArgument, "n must be positive");
    }
    guard(|| match sieve_for(sieve, n) {
        Ok(s) => {
            *out = denom::omega_dd_plus(n, s) as u64;
            BdStatus::Ok
        }
        Err(status) => status,
    })
}

#[no_mangle]
pub unsafe extern "C" fn bd_profile_new(sieve: *const BdSieve, n: u64, out: *mut *mut BdProfile) -> BdStatus {
    if out.is_null() {
        return fail(BdStatus::NullPointer, "out is NULL");
    }
    if n == 0 {
        return fail(BdStatus::InvalidArgument, "n must be positive");
    }
    guard(|| match sieve_for(sieve, n) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(BdProfile(denom::profile(n, s))));
            BdStatus::Ok
        }
        Err(status) => status,
    })
}

#[no_mangle]
pub unsafe extern "C" fn bd_profile_field(
    profile: *const BdProfile,
    field: BdField,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> BdStatus {
    let Some(BdProfile(p)) = profile.as_ref() else {
        return fail(BdStatus::NullPointer, "profile is NULL");
    };
    let value = match field {
        BdField::Dd => p.dd.to_string(),
        BdField::DdMinus => p.dd_minus.to_string(),
        BdField::DdPlus => p.dd_plus.to_string(),
        BdField::DdShared => p.dd_shared.to_string(),
        BdField::DdCoprime => p.dd_coprime.to_string(),
        BdField::DdComplement => p.dd_complement.to_string(),
        BdField::Dn => p.dn.to_string(),
        BdField::Db => p.db.to_string(),
        BdField::Ds => p.ds.to_string(),
        BdField::RadN => p.rad_n.to_string(),
        BdField::RadN1 => p.rad_n1.to_string(),
    };
    write_decimal(&value, buf, len, needed)
}

#[no_mangle]
pub unsafe extern "C" fn bd_profile_omega_plus(profile: *const BdProfile) -> u64 {
    profile.as_ref().map_or(0, |p| p.0.omega_plus as u64)
}

/// 1 if `D(n) = rad(n+1)`, 0 otherwise (or for NULL).
#[no_mangle]
pub unsafe extern "C" fn bd_profile_in_rad_set(profile: *const BdProfile) -> i32 {
    profile.as_ref().map_or(0, |p| p.0.in_rad_set() as i32)
}

#[no_mangle]
pub unsafe extern "C" fn bd_profile_free(profile: *mut BdProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// `{n <= limit : the k-th derivative of B_n(x) is integral}`.
#[no_mangle]
pub unsafe extern "C" fn bd_set_find(sieve: *const BdSieve, k: u64, limit: u64, out: *mut *mut BdSet) -> BdStatus {
    if out.is_null() {
        return fail(BdStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        let s = match sieve.as_ref() {
            Some(s) => &s.0,
            None => return fail(BdStatus::NullPointer, "sieve is NULL"),
        };
        match scanner::find_sets(k, limit, s) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(BdSet(r)));
                BdStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// `{n <= limit : D(n) = rad(n+1)}`.
#[no_mangle]
pub unsafe extern "C" fn bd_radset_find(sieve: *const BdSieve, limit: u64, out: *mut *mut BdSet) -> BdStatus {
    if out.is_null() {
        return fail(BdStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        let s = match sieve.as_ref() {
            Some(s) => &s.0,
            None => return fail(BdStatus::NullPointer, "sieve is NULL"),
        };
        match scanner::find_rad_set(limit, s) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(BdSet(r)));
                BdStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn bd_set_len(set: *const BdSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.members.len())
}

/// Pointer to `bd_set_len(set)` ascending members; owned by `set`.
#[no_mangle]
pub unsafe extern "C" fn bd_set_members(set: *const BdSet) -> *const u64 {
    set.as_ref().map_or(ptr::null(), |s| s.0.members.as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn bd_set_free(set: *mut BdSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}
