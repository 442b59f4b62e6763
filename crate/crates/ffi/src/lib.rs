//! C interface. Objects cross the boundary as opaque handles that the caller
//! releases with the matching `*_free` function. Every fallible call returns
//! an [`FdStatus`]; the message of the last failure on the calling thread is
//! available through [`fd_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracdarboux::classifier::{equivalent_beta0, invariant_beta0};
use fracdarboux::cli::{parse_expression, parse_params};
use fracdarboux::expr::Q;
use fracdarboux::numeric::{rk4_ivp, Grid, GridFn};
use fracdarboux::riccati::{
    conformal_transform, mobius_apply, ode_to_riccati, transport_solution, LinearODE2, MobiusMap,
};
use fracdarboux::schrodinger::{fractional_darboux, seed_eigenfunction, Potential, SchrodingerProblem};
use fracdarboux::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    Panic = 4,
    ZeroDenominator = 10,
    Pole = 11,
    DegenerateOde = 12,
    SingularMap = 13,
    Reconstruction = 14,
    PoleCrossing = 15,
    AffineOnly = 16,
    NotConstant = 17,
    SingularBranch = 18,
    VanishingSeed = 19,
    InvalidSeed = 20,
    EigenvalueMismatch = 21,
    Normalization = 22,
    Grid = 23,
    DimensionMismatch = 24,
    Refinement = 25,
    OracleInconclusive = 26,
    IllConditioned = 27,
    Syntax = 28,
    UnknownIdentifier = 29,
    NonIntegerExponent = 30,
    InvalidArgument = 31,
    Io = 32,
}

impl From<&Error> for FdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::ZeroDenominator => FdStatus::ZeroDenominator,
            Error::Pole { .. } => FdStatus::Pole,
            Error::DegenerateOde => FdStatus::DegenerateOde,
            Error::SingularMap => FdStatus::SingularMap,
            Error::Reconstruction => FdStatus::Reconstruction,
            Error::PoleCrossing { .. } => FdStatus::PoleCrossing,
            Error::AffineOnly => FdStatus::AffineOnly,
            Error::NotConstant => FdStatus::NotConstant,
            Error::SingularBranch(_) => FdStatus::SingularBranch,
            Error::Vanishing { .. } => FdStatus::VanishingSeed,
            Error::InvalidSeed { .. } => FdStatus::InvalidSeed,
            Error::EigenvalueMismatch { .. } => FdStatus::EigenvalueMismatch,
            Error::Normalization(_) => FdStatus::Normalization,
            Error::Grid(_) => FdStatus::Grid,
            Error::Dimension(_) => FdStatus::DimensionMismatch,
            Error::Refinement(_) => FdStatus::Refinement,
            Error::OracleInconclusive(_) => FdStatus::OracleInconclusive,
            Error::IllConditioned(_) => FdStatus::IllConditioned,
            Error::Syntax { .. } => FdStatus::Syntax,
            Error::UnknownIdentifier(_) => FdStatus::UnknownIdentifier,
            Error::NonIntegerExponent => FdStatus::NonIntegerExponent,
            Error::InvalidArgument(_) => FdStatus::InvalidArgument,
            Error::Io(_) => FdStatus::Io,
        }
    }
}

/// Linear second-order ODE `p w'' + q w' + r w = 0` with rational coefficients.
pub struct FdOde(LinearODE2);

/// Mobius map with rational entries.
pub struct FdMobius(MobiusMap);

/// Samples of a function on a uniform grid.
pub struct FdGridFn(GridFn);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

enum Fail {
    Status(FdStatus, String),
    Domain(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Domain(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            FdStatus::Ok
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Domain(e))) => {
            set_error(e.to_string());
            FdStatus::from(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            FdStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(FdStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(FdStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::Status(FdStatus::NullPointer, format!("{name} is null")))
}

fn out_arg<T>(p: *mut *mut T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Status(FdStatus::NullPointer, "output pointer is null".into()));
    }
    Ok(())
}

/// `params` is `NULL` or `"name=value;name=value"`.
unsafe fn params_arg(p: *const c_char) -> Result<std::collections::BTreeMap<String, Q>, Fail> {
    if p.is_null() {
        return Ok(Default::default());
    }
    let s = str_arg(p, "params")?;
    let items: Vec<&str> = s.split(';').map(str::trim).filter(|t| !t.is_empty()).collect();
    Ok(parse_params(&items)?)
}

/// Copies `s` plus a NUL into `buf`. `out_len` receives the string length
/// without the NUL, also when the buffer is too small.
unsafe fn write_str(s: &str, buf: *mut c_char, cap: usize, out_len: *mut usize) -> Result<(), Fail> {
    if !out_len.is_null() {
        *out_len = s.len();
    }
    if buf.is_null() || cap < s.len() + 1 {
        return Err(Fail::Status(FdStatus::BufferTooSmall, format!("need {} bytes", s.len() + 1)));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn fd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the last failure on this thread; empty after success.
///
/// # Safety
/// `buf` must be valid for `cap` bytes or null; `out_len` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fd_last_error_message(buf: *mut c_char, cap: usize, out_len: *mut usize) -> FdStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_str(&msg, buf, cap, out_len) {
        Ok(()) => FdStatus::Ok,
        Err(_) => FdStatus::BufferTooSmall,
    }
}

/// Parses the three coefficients of an ODE.
///
/// # Safety
/// String arguments must be NUL-terminated or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_ode_parse(
    p: *const c_char,
    q: *const c_char,
    r: *const c_char,
    params: *const c_char,
    out: *mut *mut FdOde,
) -> FdStatus {
    guard(|| {
        out_arg(out)?;
        let params = params_arg(params)?;
        let ode = LinearODE2::new(
            parse_expression(str_arg(p, "p")?, &params)?,
            parse_expression(str_arg(q, "q")?, &params)?,
            parse_expression(str_arg(r, "r")?, &params)?,
        )?;
        *out = Box::into_raw(Box::new(FdOde(ode)));
        Ok(())
    })
}

/// Releases an ODE handle. Null is ignored.
///
/// # Safety
/// `ode` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fd_ode_free(ode: *mut FdOde) {
    if !ode.is_null() {
        drop(Box::from_raw(ode));
    }
}

/// Writes coefficient `which` (0 = p, 1 = q, 2 = r) as text.
///
/// # Safety
/// `ode` must be a live handle; `buf` valid for `cap` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn fd_ode_coefficient(
    ode: *const FdOde,
    which: u32,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> FdStatus {
    guard(|| {
        let ode = &ref_arg(ode, "ode")?.0;
        let c = match which {
            0 => &ode.p,
            1 => &ode.q,
            2 => &ode.r,
            _ => return Err(Error::InvalidArgument(format!("coefficient index {which}")).into()),
        };
        write_str(&c.to_string(), buf, cap, out_len)
    })
}

/// Parses a Mobius map `y = (alpha z + gamma)/(beta z + delta)`.
///
/// # Safety
/// String arguments must be NUL-terminated or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_mobius_parse(
    alpha: *const c_char,
    beta: *const c_char,
    gamma: *const c_char,
    delta: *const c_char,
    params: *const c_char,
    out: *mut *mut FdMobius,
) -> FdStatus {
    guard(|| {
        out_arg(out)?;
        let params = params_arg(params)?;
        let m = MobiusMap::new(
            parse_expression(str_arg(alpha, "alpha")?, &params)?,
            parse_expression(str_arg(beta, "beta")?, &params)?,
            parse_expression(str_arg(gamma, "gamma")?, &params)?,
            parse_expression(str_arg(delta, "delta")?, &params)?,
        )?;
        *out = Box::into_raw(Box::new(FdMobius(m)));
        Ok(())
    })
}

/// Releases a map handle. Null is ignored.
///
/// # Safety
/// `map` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fd_mobius_free(map: *mut FdMobius) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Image of `ode` under `map`, with denominators cleared.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_conformal_transform(
    ode: *const FdOde,
    map: *const FdMobius,
    out: *mut *mut FdOde,
) -> FdStatus {
    guard(|| {
        out_arg(out)?;
        let t = conformal_transform(&ref_arg(ode, "ode")?.0, &ref_arg(map, "map")?.0)?;
        *out = Box::into_raw(Box::new(FdOde(t.cleared())));
        Ok(())
    })
}

/// Invariant of the equation under affine changes of variable, as text.
///
/// # Safety
/// `ode` must be a live handle; `buf` valid for `cap` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn fd_invariant_beta0(
    ode: *const FdOde,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> FdStatus {
    guard(|| {
        let inv = invariant_beta0(&ref_arg(ode, "ode")?.0)?;
        write_str(&inv.r1.to_string(), buf, cap, out_len)
    })
}

/// Sets `*out` to whether the two equations share the affine-branch invariant.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fd_equivalent_beta0(a: *const FdOde, b: *const FdOde, out: *mut bool) -> FdStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Status(FdStatus::NullPointer, "output pointer is null".into()));
        }
        *out = equivalent_beta0(&ref_arg(a, "a")?.0, &ref_arg(b, "b")?.0)?.equivalent;
        Ok(())
    })
}

/// Integrates `ode` from `w(x0) = w0, w'(x0) = w0p` with RK4 on `n` nodes of
/// `[a, b]` and carries the solution to the transformed equation.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fd_transport(
    ode: *const FdOde,
    map: *const FdMobius,
    a: f64,
    b: f64,
    n: usize,
    x0: f64,
    w0: f64,
    w0p: f64,
    out: *mut *mut FdGridFn,
) -> FdStatus {
    guard(|| {
        out_arg(out)?;
        let ode = &ref_arg(ode, "ode")?.0;
        let m = &ref_arg(map, "map")?.0;
        let g = Grid::new(a, b, n)?;
        let (q, r) = ode.normalized();
        let w = rk4_ivp(&q, &r, x0, w0, w0p, &g)?;
        let f = mobius_apply(&ode_to_riccati(ode)?, m)?.f;
        let t = transport_solution(ode, m, &w, &f)?;
        *out = Box::into_raw(Box::new(FdGridFn(t.u)));
        Ok(())
    })
}

/// Potential `v` of the fractional Darboux transform of `-psi'' + u psi`
/// built from two RK4 seeds at eigenvalue `c`. Seeds are `{x0, value, slope}`.
///
/// # Safety
/// `u` must be NUL-terminated; `seed1` and `seed2` must point to 3 doubles.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fd_fractional_darboux(
    u: *const c_char,
    params: *const c_char,
    c: f64,
    seed1: *const f64,
    seed2: *const f64,
    a: f64,
    b: f64,
    n: usize,
    out: *mut *mut FdGridFn,
) -> FdStatus {
    guard(|| {
        out_arg(out)?;
        let params = params_arg(params)?;
        let pot = Potential::Rational(parse_expression(str_arg(u, "u")?, &params)?);
        let s1 = std::slice::from_raw_parts(ref_arg(seed1, "seed1")?, 3);
        let s2 = std::slice::from_raw_parts(ref_arg(seed2, "seed2")?, 3);
        let g = Grid::new(a, b, n)?;
        let prob = SchrodingerProblem::new(pot, c);
        let z1 = seed_eigenfunction(&prob, c, s1[0], s1[1], s1[2], &g)?;
        let z2 = seed_eigenfunction(&prob, c, s2[0], s2[1], s2[2], &g)?;
        let res = fractional_darboux(&prob, c, &z1, &z2)?;
        *out = Box::into_raw(Box::new(FdGridFn(res.v)));
        Ok(())
    })
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `f` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fd_gridfn_len(f: *const FdGridFn) -> usize {
    f.as_ref().map_or(0, |f| f.0.len())
}

/// Copies nodes into `xs` and values into `values`; either may be null.
///
/// # Safety
/// Non-null arrays must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn fd_gridfn_copy(f: *const FdGridFn, xs: *mut f64, values: *mut f64, cap: usize) -> FdStatus {
    guard(|| {
        let f = &ref_arg(f, "f")?.0;
        if cap < f.len() {
            return Err(Fail::Status(FdStatus::BufferTooSmall, format!("need {} doubles", f.len())));
        }
        if !xs.is_null() {
            let pts = f.grid.points();
            ptr::copy_nonoverlapping(pts.as_ptr(), xs, pts.len());
        }
        if !values.is_null() {
            ptr::copy_nonoverlapping(f.values.as_ptr(), values, f.len());
        }
        Ok(())
    })
}

/// Releases a grid function. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fd_gridfn_free(f: *mut FdGridFn) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cs(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn message() -> String {
        let mut buf = vec![0 as c_char; 256];
        let mut len = 0usize;
        unsafe { fd_last_error_message(buf.as_mut_ptr(), buf.len(), &mut len) };
        let bytes: Vec<u8> = buf[..len].iter().map(|&c| c as u8).collect();
        String::from_utf8(bytes).unwrap()
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut out = ptr::null_mut();
        let s = unsafe { fd_ode_parse(ptr::null(), ptr::null(), ptr::null(), ptr::null(), &mut out) };
        assert_eq!(s, FdStatus::NullPointer);
        assert!(out.is_null());
        assert!(message().contains("null"));
    }

    #[test]
    fn domain_errors_map_to_codes() {
        let (a, b, g, d) = (cs("1"), cs("2"), cs("2"), cs("4"));
        let mut out = ptr::null_mut();
        let s = unsafe { fd_mobius_parse(a.as_ptr(), b.as_ptr(), g.as_ptr(), d.as_ptr(), ptr::null(), &mut out) };
        assert_eq!(s, FdStatus::SingularMap);
        assert!(message().contains("singular"));
    }

    #[test]
    fn short_buffers_report_length() {
        let (p, q, r) = (cs("1"), cs("0"), cs("n*(n+1)"));
        let params = cs("n=3");
        let mut ode = ptr::null_mut();
        unsafe {
            assert_eq!(fd_ode_parse(p.as_ptr(), q.as_ptr(), r.as_ptr(), params.as_ptr(), &mut ode), FdStatus::Ok);
            let mut len = 0usize;
            let mut tiny = [0 as c_char; 2];
            assert_eq!(fd_ode_coefficient(ode, 2, tiny.as_mut_ptr(), 2, &mut len), FdStatus::BufferTooSmall);
            assert_eq!(len, 2);
            let mut buf = [0 as c_char; 3];
            assert_eq!(fd_ode_coefficient(ode, 2, buf.as_mut_ptr(), 3, &mut len), FdStatus::Ok);
            assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), "12");
            fd_ode_free(ode);
        }
    }
}
