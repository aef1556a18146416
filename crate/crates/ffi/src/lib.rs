//! C ABI over the `greendecay` library.
//!
//! Matrices and generator families are opaque handles owned by the caller
//! and released with the matching `*_free` function. Every fallible call
//! returns a [`GdStatus`]; on failure a message is available from
//! [`gd_last_error_message`] on the same thread. Indices are 1-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use greendecay::banded::{dominance_mu, BandedMatrix};
use greendecay::bounds::{lu_bound, varah_bound};
use greendecay::dense::DenseMatrix;
use greendecay::green::{green_scalar_entry, GreenGenerators};
use greendecay::lu::inverse_green_generators;
use greendecay::mtx::read_matrix_market;
use greendecay::Error;

/// Result codes of every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ZeroPivot = 3,
    DominanceViolated = 4,
    NotRepresented = 5,
    Singular = 6,
    Io = 7,
    Parse = 8,
    Internal = 9,
}

/// Opaque banded matrix.
pub struct GdMatrix(BandedMatrix);

/// Opaque lower Green generators of an inverse.
pub struct GdGenerators(GreenGenerators);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> GdStatus {
    match err {
        Error::ZeroPivot { .. } => GdStatus::ZeroPivot,
        Error::ZeroDiagonal { .. } | Error::DominanceViolated { .. } => GdStatus::DominanceViolated,
        Error::NotRepresented { .. } => GdStatus::NotRepresented,
        Error::Singular => GdStatus::Singular,
        Error::Io(_) => GdStatus::Io,
        Error::Parse { .. } => GdStatus::Parse,
        _ => GdStatus::InvalidArgument,
    }
}

struct Failure(GdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GdStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> GdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GdStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Builds an `n×n` matrix from `n*n` row-major values; entries outside the
/// band are ignored. Pass `r_upper >= n - 1` for a one-sided matrix.
///
/// # Safety
/// `values` must point to `n*n` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_matrix_new(
    n: usize,
    r_lower: usize,
    r_upper: usize,
    values: *const f64,
    out: *mut *mut GdMatrix,
) -> GdStatus {
    guard(|| {
        if values.is_null() {
            return Err(null("values"));
        }
        let len = n.checked_mul(n).ok_or_else(|| Failure(GdStatus::InvalidArgument, "n too large".into()))?;
        let data = std::slice::from_raw_parts(values, len).to_vec();
        let dense = DenseMatrix::from_row_major(n, n, data);
        let m = BandedMatrix::from_dense(&dense, r_lower, r_upper)?;
        write(out, Box::into_raw(Box::new(GdMatrix(m))), "out")
    })
}

/// Reads a Matrix Market coordinate file with inferred bandwidths.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_matrix_from_mtx(path: *const c_char, out: *mut *mut GdMatrix) -> GdStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(GdStatus::InvalidArgument, "path is not UTF-8".into()))?;
        let m = read_matrix_market(path)?;
        write(out, Box::into_raw(Box::new(GdMatrix(m))), "out")
    })
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `m` must come from a `gd_matrix_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gd_matrix_free(m: *mut GdMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Size and bandwidths of a matrix.
///
/// # Safety
/// `m` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_matrix_shape(
    m: *const GdMatrix,
    n: *mut usize,
    r_lower: *mut usize,
    r_upper: *mut usize,
) -> GdStatus {
    guard(|| {
        let a = &deref(m, "matrix")?.0;
        write(n, a.n(), "n")?;
        write(r_lower, a.r_lower(), "r_lower")?;
        write(r_upper, a.r_upper(), "r_upper")
    })
}

/// Strong dominance metric `mu` and smallest diagonal modulus. Succeeds even
/// when `mu >= 1`; `satisfied` is set to 1 when `mu < 1` and no diagonal entry
/// is zero.
///
/// # Safety
/// `m` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_dominance(
    m: *const GdMatrix,
    mu: *mut f64,
    min_diag: *mut f64,
    satisfied: *mut i32,
) -> GdStatus {
    guard(|| {
        let rep = dominance_mu(&deref(m, "matrix")?.0);
        write(mu, rep.mu, "mu")?;
        write(min_diag, rep.min_diag, "min_diag")?;
        write(satisfied, i32::from(rep.satisfied), "satisfied")
    })
}

/// Constants of `|A^{-1}(i,j)| <= M gamma^(i-j)`, `i >= j`.
///
/// # Safety
/// `m` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_lu_bound(m: *const GdMatrix, big_m: *mut f64, gamma: *mut f64) -> GdStatus {
    guard(|| {
        let b = lu_bound(&deref(m, "matrix")?.0)?;
        write(big_m, b.constant.unwrap_or(f64::NAN), "M")?;
        write(gamma, b.rate, "gamma")
    })
}

/// Varah's bound on `||A^{-1}||_1`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_varah_bound(m: *const GdMatrix, out: *mut f64) -> GdStatus {
    guard(|| {
        let v = varah_bound(&deref(m, "matrix")?.0)?;
        write(out, v, "out")
    })
}

/// Generators of the lower part of `A^{-1}` via the structured LU
/// factorization (no pivoting).
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_inverse_generators(m: *const GdMatrix, out: *mut *mut GdGenerators) -> GdStatus {
    guard(|| {
        let g = inverse_green_generators(&deref(m, "matrix")?.0)?;
        write(out, Box::into_raw(Box::new(GdGenerators(g))), "out")
    })
}

/// Entry `(i, j)` of `A^{-1}` from its generators. Returns
/// `GdStatus_NotRepresented` above the encoded region.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gd_generators_entry(g: *const GdGenerators, i: usize, j: usize, out: *mut f64) -> GdStatus {
    guard(|| {
        let v = green_scalar_entry(&deref(g, "generators")?.0, i, j)?;
        write(out, v, "out")
    })
}

/// Releases a generator family. Null is ignored.
///
/// # Safety
/// `g` must come from [`gd_inverse_generators`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gd_generators_free(g: *mut GdGenerators) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Copies the last error message of this thread into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length
/// without the terminator.
///
/// # Safety
/// `buf` must be writable for `len` bytes, or null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn gd_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn gd_status_str(status: GdStatus) -> *const c_char {
    let s: &'static CStr = match status {
        GdStatus::Ok => c"ok",
        GdStatus::NullPointer => c"null pointer",
        GdStatus::InvalidArgument => c"invalid argument",
        GdStatus::ZeroPivot => c"zero pivot",
        GdStatus::DominanceViolated => c"dominance condition not satisfied",
        GdStatus::NotRepresented => c"entry not represented by the generators",
        GdStatus::Singular => c"singular matrix",
        GdStatus::Io => c"I/O error",
        GdStatus::Parse => c"parse error",
        GdStatus::Internal => c"internal error",
    };
    s.as_ptr()
}
