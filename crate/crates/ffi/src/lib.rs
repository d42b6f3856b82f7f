//! C ABI over `sharpineq`.
//!
//! Every fallible function returns a [`SharpineqStatus`] and writes its
//! result through an out-pointer. On failure the message is kept per thread
//! and can be read with [`sharpineq_last_error`]. Model spaces are opaque
//! handles created from descriptor strings such as
//! `"variant=warped n=2 a=0.5 beta=1"` and released with
//! [`sharpineq_space_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sharpineq::constants::{SharpConstants, SobolevParams};
use sharpineq::spaces::{ModelSpace, SpaceDescriptor};
use sharpineq::specfun::Precision;
use sharpineq::verify::fk_eigenvalue;
use sharpineq::Error;

/// Status codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharpineqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DomainError = 4,
    ConvergenceError = 5,
    Unsupported = 6,
    InvariantViolation = 7,
    Panic = 8,
}

/// Opaque model-space handle.
pub struct SharpineqSpace {
    inner: ModelSpace,
}

/// Sharp constants for one `(n, p, alpha, avr)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SharpineqConstants {
    pub omega_n: f64,
    pub at: f64,
    pub theta: f64,
    pub gn: f64,
    pub sobolev: f64,
    pub gn_sharp: f64,
    pub fk: f64,
    pub rayleigh: f64,
    pub avr: f64,
}

impl From<SharpConstants> for SharpineqConstants {
    fn from(c: SharpConstants) -> Self {
        Self {
            omega_n: c.omega_n,
            at: c.at,
            theta: c.theta,
            gn: c.gn,
            sobolev: c.sobolev,
            gn_sharp: c.gn_sharp,
            fk: c.fk,
            rayleigh: c.rayleigh,
            avr: c.avr,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SharpineqStatus {
    match err {
        Error::Domain(_) => SharpineqStatus::DomainError,
        Error::Convergence { .. } => SharpineqStatus::ConvergenceError,
        Error::Unsupported(_) => SharpineqStatus::Unsupported,
        Error::Invariant(_) => SharpineqStatus::InvariantViolation,
        Error::Parse(_) => SharpineqStatus::ParseError,
    }
}

/// Runs `body`, storing its value in `out`, translating errors and panics.
fn guard<T>(out: *mut T, body: impl FnOnce() -> Result<T, (SharpineqStatus, String)>) -> SharpineqStatus {
    if out.is_null() {
        set_error("output pointer is null".into());
        return SharpineqStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            // SAFETY: `out` is non-null and the caller guarantees it is valid for writes.
            unsafe { out.write(value) };
            SharpineqStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SharpineqStatus::Panic
        }
    }
}

fn lib<T>(r: sharpineq::Result<T>) -> Result<T, (SharpineqStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn space_ref<'a>(space: *const SharpineqSpace) -> Result<&'a ModelSpace, (SharpineqStatus, String)> {
    // SAFETY: non-null handles come from `sharpineq_space_new` and are live until freed.
    unsafe { space.as_ref() }
        .map(|s| &s.inner)
        .ok_or((SharpineqStatus::NullPointer, "space handle is null".into()))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sharpineq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sharpineq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Create a model space from a `key=value` descriptor.
///
/// # Safety
/// `descriptor` must be null or a valid NUL-terminated string; `out` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sharpineq_space_new(
    descriptor: *const c_char,
    out: *mut *mut SharpineqSpace,
) -> SharpineqStatus {
    guard(out, || {
        if descriptor.is_null() {
            return Err((SharpineqStatus::NullPointer, "descriptor is null".into()));
        }
        // SAFETY: checked non-null; the caller guarantees NUL termination.
        let text = unsafe { CStr::from_ptr(descriptor) }
            .to_str()
            .map_err(|_| (SharpineqStatus::InvalidUtf8, "descriptor is not UTF-8".to_string()))?;
        let space = lib(text.parse::<SpaceDescriptor>().and_then(|d| d.to_space()))?;
        Ok(Box::into_raw(Box::new(SharpineqSpace { inner: space })))
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `space` must be null or a handle from [`sharpineq_space_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sharpineq_space_free(space: *mut SharpineqSpace) {
    if !space.is_null() {
        // SAFETY: ownership returns from the caller, see above.
        drop(unsafe { Box::from_raw(space) });
    }
}

/// Effective dimension `N`.
///
/// # Safety
/// `space` must be null or a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sharpineq_space_dimension(space: *const SharpineqSpace, out: *mut f64) -> SharpineqStatus {
    guard(out, || Ok(space_ref(space)?.dimension()))
}

/// Asymptotic volume ratio.
///
/// # Safety
/// As for [`sharpineq_space_dimension`].
#[no_mangle]
pub unsafe extern "C" fn sharpineq_space_avr(space: *const SharpineqSpace, out: *mut f64) -> SharpineqStatus {
    guard(out, || Ok(space_ref(space)?.avr()))
}

/// Measure of the ball of radius `r` about the pole.
///
/// # Safety
/// As for [`sharpineq_space_dimension`].
#[no_mangle]
pub unsafe extern "C" fn sharpineq_space_vol_ball(space: *const SharpineqSpace, r: f64, out: *mut f64) -> SharpineqStatus {
    guard(out, || lib(space_ref(space)?.vol_ball(r)))
}

/// Minkowski content (perimeter) of the ball of radius `r`.
///
/// # Safety
/// As for [`sharpineq_space_dimension`].
#[no_mangle]
pub unsafe extern "C" fn sharpineq_space_minkowski_content(
    space: *const SharpineqSpace,
    r: f64,
    out: *mut f64,
) -> SharpineqStatus {
    guard(out, || lib(space_ref(space)?.minkowski_content_ball(r)))
}

/// First Dirichlet eigenvalue of the ball of radius `radius`.
///
/// # Safety
/// As for [`sharpineq_space_dimension`].
#[no_mangle]
pub unsafe extern "C" fn sharpineq_fk_eigenvalue(
    space: *const SharpineqSpace,
    radius: f64,
    out: *mut f64,
) -> SharpineqStatus {
    guard(out, || {
        let space = space_ref(space)?;
        Ok(lib(fk_eigenvalue(space, radius, &Precision::default()))?.lambda_1)
    })
}

/// All sharp constants; `alpha <= 0` selects the Sobolev endpoint `n/(n-p)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sharpineq_sharp_constants(
    n: f64,
    p: f64,
    alpha: f64,
    avr: f64,
    out: *mut SharpineqConstants,
) -> SharpineqStatus {
    guard(out, || {
        let params = if alpha <= 0.0 {
            lib(SobolevParams::sobolev(n, p))?
        } else {
            lib(SobolevParams::new(n, p, alpha))?
        };
        Ok(lib(SharpConstants::compute(&params, avr))?.into())
    })
}
