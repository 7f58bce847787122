//! C interface to the class polynomial computation.
//!
//! The surface is deliberately small: compute a polynomial into an opaque
//! handle, read its degree, copy coefficients out as NUL-terminated decimal
//! strings, free the handle. Every function returns a status code and
//! writes results through out-pointers; nothing unwinds across the
//! boundary.

use classpoly::{compute_hilbert, ComputeOptions, Discriminant, IntPoly};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code returned by every interface function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClasspolyStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// The discriminant is not negative and congruent to 0 or 1 mod 4.
    InvalidDiscriminant = 2,
    /// The computation failed internally; the handle was not created.
    ComputeFailed = 3,
    /// The coefficient index exceeds the polynomial degree.
    IndexOutOfRange = 4,
    /// The output buffer cannot hold the value; the required size was
    /// written to the size out-parameter.
    BufferTooSmall = 5,
}

/// Opaque handle to a computed class polynomial.
pub struct ClasspolyHilbert {
    poly: IntPoly,
}

/// Compute the Hilbert class polynomial of `discriminant` and store a handle
/// in `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one pointer value.
/// On any status other than `Ok`, `*out` is left untouched. A returned
/// handle must be released with `classpoly_hilbert_free`.
#[no_mangle]
pub unsafe extern "C" fn classpoly_hilbert_compute(
    discriminant: i64,
    out: *mut *mut ClasspolyHilbert,
) -> ClasspolyStatus {
    if out.is_null() {
        return ClasspolyStatus::NullArgument;
    }
    let computed = catch_unwind(AssertUnwindSafe(|| {
        let d =
            Discriminant::new(discriminant).map_err(|_| ClasspolyStatus::InvalidDiscriminant)?;
        compute_hilbert(&d, &ComputeOptions::default()).map_err(|_| ClasspolyStatus::ComputeFailed)
    }));
    match computed {
        Ok(Ok(poly)) => {
            *out = Box::into_raw(Box::new(ClasspolyHilbert { poly }));
            ClasspolyStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => ClasspolyStatus::ComputeFailed,
    }
}

/// Store the degree of the polynomial in `*degree`.
///
/// # Safety
/// `handle` must be a live pointer from `classpoly_hilbert_compute` and
/// `degree` a valid pointer to writable memory for one u64.
#[no_mangle]
pub unsafe extern "C" fn classpoly_hilbert_degree(
    handle: *const ClasspolyHilbert,
    degree: *mut u64,
) -> ClasspolyStatus {
    if handle.is_null() || degree.is_null() {
        return ClasspolyStatus::NullArgument;
    }
    *degree = (*handle).poly.degree().map_or(0, |d| d as u64);
    ClasspolyStatus::Ok
}

/// Copy the coefficient of X^index as a NUL-terminated decimal string into
/// `buf` and store the byte count including the terminator in `*size`.
///
/// Call with `buf = NULL, buf_len = 0` to query the required size: the
/// status is `BufferTooSmall` and `*size` holds it.
///
/// # Safety
/// `handle` must be a live pointer from `classpoly_hilbert_compute`, `size`
/// a valid pointer to writable memory for one usize, and `buf` either NULL
/// or valid for `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn classpoly_hilbert_coeff_decimal(
    handle: *const ClasspolyHilbert,
    index: u64,
    buf: *mut c_char,
    buf_len: usize,
    size: *mut usize,
) -> ClasspolyStatus {
    if handle.is_null() || size.is_null() {
        return ClasspolyStatus::NullArgument;
    }
    let poly = &(*handle).poly;
    let width = poly.degree().map_or(1, |d| d + 1);
    if index >= width as u64 {
        return ClasspolyStatus::IndexOutOfRange;
    }
    let text = poly.coeffs()[index as usize].to_string();
    let needed = text.len() + 1;
    *size = needed;
    if buf.is_null() || buf_len < needed {
        return ClasspolyStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    ClasspolyStatus::Ok
}

/// Release a handle. NULL is accepted and ignored.
///
/// # Safety
/// `handle` must be NULL or a pointer from `classpoly_hilbert_compute` that
/// has not been freed before.
#[no_mangle]
pub unsafe extern "C" fn classpoly_hilbert_free(handle: *mut ClasspolyHilbert) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
