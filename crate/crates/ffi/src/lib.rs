//! C interface to `hyperball`.
//!
//! Every function returns an [`HbStatus`]; results go through out-pointers.
//! On failure [`hb_last_error_message`] describes the error on the calling
//! thread. Fields are opaque handles released with their `_free` function.
//! Strings returned by the library are released with [`hb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperball::analysis::{compute_constants, du_at_origin};
use hyperball::fields::{boundary_field, source_field, BoundaryField, SourceField};
use hyperball::geometry::{bracket, hyperbolic_distance, mobius_apply};
use hyperball::kernels::{green_h, poisson_szego};
use hyperball::potentials::{green_potential, poisson_extension, represent, QuadratureSettings};
use hyperball::specialfn::{gauss_2f1, green_g, q_ratio, HypergeomParams};
use hyperball::{BallPoint, HyperError, SpherePoint};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbStatus {
    Ok = 0,
    NullPointer = 1,
    OutsideBall = 2,
    NotOnSphere = 3,
    DimensionMismatch = 4,
    UnsupportedDimension = 5,
    Singular = 6,
    InvalidParameter = 7,
    NonConvergence = 8,
    StencilOutsideBall = 9,
    UndeclaredDecay = 10,
    UnknownField = 11,
    Io = 12,
    Parse = 13,
    Panic = 14,
}

impl From<&HyperError> for HbStatus {
    fn from(e: &HyperError) -> Self {
        match e {
            HyperError::OutsideBall { .. } => HbStatus::OutsideBall,
            HyperError::NotOnSphere { .. } => HbStatus::NotOnSphere,
            HyperError::DimensionMismatch { .. } => HbStatus::DimensionMismatch,
            HyperError::UnsupportedDimension { .. } => HbStatus::UnsupportedDimension,
            HyperError::Singular(_) => HbStatus::Singular,
            HyperError::InvalidParameter(_) => HbStatus::InvalidParameter,
            HyperError::NonConvergence { .. } => HbStatus::NonConvergence,
            HyperError::StencilOutsideBall { .. } => HbStatus::StencilOutsideBall,
            HyperError::UndeclaredDecay => HbStatus::UndeclaredDecay,
            HyperError::UnknownField(_) => HbStatus::UnknownField,
            HyperError::Io(_) => HbStatus::Io,
            HyperError::Parse(_) => HbStatus::Parse,
        }
    }
}

/// Quadrature resolution passed by value.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HbQuadrature {
    pub sphere_order: usize,
    pub radial_order: usize,
    pub margin: f64,
    pub escalation: f64,
}

impl From<HbQuadrature> for QuadratureSettings {
    fn from(q: HbQuadrature) -> Self {
        QuadratureSettings {
            sphere_order: q.sphere_order,
            radial_order: q.radial_order,
            margin: q.margin,
            escalation: q.escalation,
        }
    }
}

/// Opaque boundary field.
pub struct HbBoundaryField {
    inner: BoundaryField,
}

/// Opaque source field.
pub struct HbSourceField {
    inner: SourceField,
}

struct Failure {
    status: HbStatus,
    message: String,
}

impl From<HyperError> for Failure {
    fn from(e: HyperError) -> Self {
        Failure { status: HbStatus::from(&e), message: e.to_string() }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn null(what: &str) -> Failure {
    Failure { status: HbStatus::NullPointer, message: format!("null pointer: {what}") }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HbStatus::Ok
        }
        Ok(Err(fail)) => {
            set_last_error(&fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            HbStatus::Panic
        }
    }
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn slice_mut<'a>(p: *mut f64, n: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, n))
}

unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

unsafe fn ball_point(p: *const f64, n: usize, what: &str) -> Result<BallPoint, Failure> {
    Ok(BallPoint::new(slice(p, n, what)?.to_vec())?)
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure { status: HbStatus::InvalidParameter, message: format!("{what} is not UTF-8") })
}

unsafe fn settings(q: *const HbQuadrature) -> Result<QuadratureSettings, Failure> {
    let s = if q.is_null() { QuadratureSettings::default() } else { QuadratureSettings::from(*q) };
    s.validate()?;
    Ok(s)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn hb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default orders and margin.
#[no_mangle]
pub extern "C" fn hb_quadrature_default() -> HbQuadrature {
    let s = QuadratureSettings::default();
    HbQuadrature { sphere_order: s.sphere_order, radial_order: s.radial_order, margin: s.margin, escalation: s.escalation }
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `[x, y]` for points of the closed ball.
///
/// # Safety
/// `x`, `y` point to `n` doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_bracket(x: *const f64, y: *const f64, n: usize, out: *mut f64) -> HbStatus {
    guard(|| {
        let v = bracket(&ball_point(x, n, "x")?, &ball_point(y, n, "y")?)?;
        write(out, v, "out")
    })
}

/// `phi_a(x)` written to `out` (`n` doubles).
///
/// # Safety
/// `a`, `x` point to `n` doubles; `out` to `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hb_mobius(a: *const f64, x: *const f64, n: usize, out: *mut f64) -> HbStatus {
    guard(|| {
        let y = mobius_apply(&ball_point(a, n, "a")?, &ball_point(x, n, "x")?)?;
        slice_mut(out, n, "out")?.copy_from_slice(y.coords());
        Ok(())
    })
}

/// Hyperbolic distance between interior points.
///
/// # Safety
/// `a`, `b` point to `n` doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_hyperbolic_distance(a: *const f64, b: *const f64, n: usize, out: *mut f64) -> HbStatus {
    guard(|| {
        let d = hyperbolic_distance(&ball_point(a, n, "a")?, &ball_point(b, n, "b")?)?;
        write(out, d, "out")
    })
}

/// Poisson–Szegő kernel `P_h(x, t)`.
///
/// # Safety
/// `x`, `t` point to `n` doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_poisson_szego(x: *const f64, t: *const f64, n: usize, out: *mut f64) -> HbStatus {
    guard(|| {
        let t = SpherePoint::new(slice(t, n, "t")?.to_vec())?;
        write(out, poisson_szego(&ball_point(x, n, "x")?, &t)?, "out")
    })
}

/// Invariant Green function `G_h(x, y)`.
///
/// # Safety
/// `x`, `y` point to `n` doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_green_h(x: *const f64, y: *const f64, n: usize, out: *mut f64) -> HbStatus {
    guard(|| write(out, green_h(&ball_point(x, n, "x")?, &ball_point(y, n, "y")?)?, "out"))
}

/// `(1/n) int_r^t (1-s^2)^{n-2} s^{1-n} ds`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_green_g(n: usize, r: f64, t: f64, out: *mut f64) -> HbStatus {
    guard(|| write(out, green_g(n, r, t)?, "out"))
}

/// `q(t) = t^{n-2} g(t) / (1-t^2)^{n-1}` for `t` in `[0, 1]`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_q_ratio(n: usize, t: f64, out: *mut f64) -> HbStatus {
    guard(|| write(out, q_ratio(n, t)?, "out"))
}

/// Gauss hypergeometric `2F1(a, b; c; s)` for `0 <= s <= 1`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_hyp2f1(a: f64, b: f64, c: f64, s: f64, out: *mut f64) -> HbStatus {
    guard(|| write(out, gauss_2f1(&HypergeomParams::new(a, b, c, s)?)?, "out"))
}

/// Parses a built-in boundary field (`constant:C`, `coordinate:K`, `identity`, ...).
///
/// # Safety
/// `spec` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_boundary_field_new(spec: *const c_char, n: usize, out: *mut *mut HbBoundaryField) -> HbStatus {
    guard(|| {
        let inner = boundary_field(str_arg(spec, "spec")?, n)?;
        write(out, Box::into_raw(Box::new(HbBoundaryField { inner })), "out")
    })
}

/// # Safety
/// `field` comes from [`hb_boundary_field_new`] and is not used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hb_boundary_field_free(field: *mut HbBoundaryField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Parses a built-in source field (`zero`, `linear`, `quadratic`, `decay`).
///
/// # Safety
/// `spec` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hb_source_field_new(spec: *const c_char, n: usize, out: *mut *mut HbSourceField) -> HbStatus {
    guard(|| {
        let inner = source_field(str_arg(spec, "spec")?, n)?;
        write(out, Box::into_raw(Box::new(HbSourceField { inner })), "out")
    })
}

/// # Safety
/// `field` comes from [`hb_source_field_new`] and is not used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hb_source_field_free(field: *mut HbSourceField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

unsafe fn field_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// `P_h[phi](x)` into `out` (`n` doubles); `est_error` may be null.
/// A null `quad` selects the defaults.
///
/// # Safety
/// Pointers follow the usual sizes: `x` and `out` hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn hb_poisson_extension(
    phi: *const HbBoundaryField,
    x: *const f64,
    n: usize,
    quad: *const HbQuadrature,
    out: *mut f64,
    est_error: *mut f64,
) -> HbStatus {
    guard(|| {
        let ext = poisson_extension(&field_ref(phi, "phi")?.inner, &ball_point(x, n, "x")?, &settings(quad)?)?;
        slice_mut(out, n, "out")?.copy_from_slice(&ext.value);
        if !est_error.is_null() {
            est_error.write(ext.est_error);
        }
        Ok(())
    })
}

/// `G_h[psi](x)` into `out` (`n` doubles).
///
/// # Safety
/// `x` and `out` hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn hb_green_potential(
    psi: *const HbSourceField,
    x: *const f64,
    n: usize,
    quad: *const HbQuadrature,
    out: *mut f64,
) -> HbStatus {
    guard(|| {
        let v = green_potential(&field_ref(psi, "psi")?.inner, &ball_point(x, n, "x")?, &settings(quad)?)?;
        slice_mut(out, n, "out")?.copy_from_slice(&v);
        Ok(())
    })
}

/// `u(x) = P_h[phi](x) - G_h[psi](x)` into `out` (`n` doubles).
///
/// # Safety
/// `x` and `out` hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn hb_represent(
    phi: *const HbBoundaryField,
    psi: *const HbSourceField,
    x: *const f64,
    n: usize,
    quad: *const HbQuadrature,
    out: *mut f64,
) -> HbStatus {
    guard(|| {
        let v = represent(
            &field_ref(phi, "phi")?.inner,
            &field_ref(psi, "psi")?.inner,
            &ball_point(x, n, "x")?,
            &settings(quad)?,
        )?;
        slice_mut(out, n, "out")?.copy_from_slice(&v);
        Ok(())
    })
}

/// Constant ledger as a JSON string (free with [`hb_string_free`]). When both
/// fields are non-null, `varrho` and `C2` are filled from `Du(0)`.
///
/// # Safety
/// `out` is writable; field pointers are null or valid handles.
#[no_mangle]
pub unsafe extern "C" fn hb_constants_json(
    n: usize,
    l: f64,
    m: f64,
    phi: *const HbBoundaryField,
    psi: *const HbSourceField,
    quad: *const HbQuadrature,
    out: *mut *mut c_char,
) -> HbStatus {
    guard(|| {
        let mut c = compute_constants(n, l, m)?;
        if let (Some(phi), Some(psi)) = (phi.as_ref(), psi.as_ref()) {
            c = c.with_du0(&du_at_origin(&phi.inner, &psi.inner, &settings(quad)?)?)?;
        }
        let text = serde_json::to_string(&c).map_err(|e| Failure::from(HyperError::Parse(e.to_string())))?;
        let s = CString::new(text).map_err(|e| Failure::from(HyperError::Parse(e.to_string())))?;
        write(out, s.into_raw(), "out")
    })
}
