//! C interface to the `margulis` crate.
//!
//! Objects are opaque handles created by `mg_*_new`/`mg_*_build` and released
//! by the matching `mg_*_free`. Every fallible function returns an
//! [`MgStatus`]; on failure the message is available from
//! [`mg_last_error_message`] until the next failing call on the same thread.
//! Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use margulis::cli::{cmd_domain, cmd_holonomy, cmd_invariants, SceneConfig};
use margulis::crooked::{
    kissing_resolve, tame_domain, verify_schottky, CrookedDomain, OracleParams,
};
use margulis::holonomy::{Holonomy, Word};
use margulis::margulis::{
    cocycle_from_coefficients, cone_membership, AffineDeformation, Cocycle, ConeClass,
    VertexCoefficients,
};
use margulis::mesh::export_mesh;
use margulis::minkowski::Vec3;
use margulis::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidLength = 3,
    Elliptic = 4,
    NotHyperbolic = 5,
    Kissing = 6,
    OutsideCone = 7,
    KissingUnresolved = 8,
    NotDisjoint = 9,
    Config = 10,
    Io = 11,
    Internal = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MgCone {
    InteriorPlus = 0,
    InteriorMinus = 1,
    Boundary = 2,
    Outside = 3,
}

pub struct MgHolonomy(Holonomy);
pub struct MgDeformation(AffineDeformation);
pub struct MgDomain(CrookedDomain);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MgStatus {
    match e {
        Error::InvalidLength { .. } | Error::InconsistentAngle { .. } => MgStatus::InvalidLength,
        Error::Elliptic { .. } => MgStatus::Elliptic,
        Error::NotHyperbolic { .. } => MgStatus::NotHyperbolic,
        Error::Kissing { .. } => MgStatus::Kissing,
        Error::OutsideCone(_) => MgStatus::OutsideCone,
        Error::KissingUnresolved(_) => MgStatus::KissingUnresolved,
        Error::NotDisjoint(..) => MgStatus::NotDisjoint,
        Error::Config(_) => MgStatus::Config,
        Error::Io { .. } => MgStatus::Io,
        Error::Word(_) | Error::MeshRadius(_) | Error::NotSpacelike { .. } => {
            MgStatus::InvalidArgument
        }
        Error::Parity(_) | Error::NotLorentz(_) => MgStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (MgStatus, String)>) -> MgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MgStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            MgStatus::Internal
        }
    }
}

fn lib(e: Error) -> (MgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (MgStatus, String) {
    (MgStatus::NullPointer, format!("{name} is null"))
}

unsafe fn r<'a, T>(p: *const T, name: &str) -> Result<&'a T, (MgStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn w<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (MgStatus, String)> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (MgStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MgStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

unsafe fn arr<const N: usize>(p: *const f64, name: &str) -> Result<[f64; N], (MgStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    let mut a = [0.0; N];
    ptr::copy_nonoverlapping(p, a.as_mut_ptr(), N);
    Ok(a)
}

fn vec3(a: &[f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

/// Message of the last failing call on this thread; empty if none. The
/// pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn mg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Holonomy of the structure with boundary lengths `ell_a, ell_b >= 0` and
/// one-sided length `ell_x > 0`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_holonomy_new(
    ell_a: f64,
    ell_b: f64,
    ell_x: f64,
    out: *mut *mut MgHolonomy,
) -> MgStatus {
    guard(|| {
        let out = w(out, "out")?;
        let h = Holonomy::from_lengths(ell_a, ell_b, ell_x).map_err(lib)?;
        *out = Box::into_raw(Box::new(MgHolonomy(h)));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`mg_holonomy_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mg_holonomy_free(h: *mut MgHolonomy) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Writes `(a, b, x, y)`.
///
/// # Safety
/// `h` must be a live handle and `out` must point to 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn mg_holonomy_trace_coords(h: *const MgHolonomy, out: *mut f64) -> MgStatus {
    guard(|| {
        let h = r(h, "h")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let t = h.0.trace_coords();
        ptr::copy_nonoverlapping([t.a, t.b, t.x, t.y].as_ptr(), out, 4);
        Ok(())
    })
}

/// Writes `(ell_A, ell_B, ell_X, ell_Y, theta)`.
///
/// # Safety
/// `h` must be a live handle and `out` must point to 5 doubles.
#[no_mangle]
pub unsafe extern "C" fn mg_holonomy_fricke(h: *const MgHolonomy, out: *mut f64) -> MgStatus {
    guard(|| {
        let h = r(h, "h")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = h.0.fricke().ok_or((
            MgStatus::Internal,
            "holonomy has no Fricke coordinates".into(),
        ))?;
        let v = [f.ell_a, f.ell_b, f.ell_x, f.ell_y, f.theta];
        ptr::copy_nonoverlapping(v.as_ptr(), out, 5);
        Ok(())
    })
}

/// Deformation with cocycle values `u(A) = u_a`, `u(X) = u_x`.
///
/// # Safety
/// `h` must be a live handle, `u_a` and `u_x` must point to 3 doubles, and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mg_deformation_new(
    h: *const MgHolonomy,
    u_a: *const f64,
    u_x: *const f64,
    out: *mut *mut MgDeformation,
) -> MgStatus {
    guard(|| {
        let h = r(h, "h")?;
        let c = Cocycle::new(vec3(&arr(u_a, "u_a")?), vec3(&arr(u_x, "u_x")?));
        let out = w(out, "out")?;
        *out = Box::into_raw(Box::new(MgDeformation(AffineDeformation::new(
            h.0.clone(),
            c,
        ))));
        Ok(())
    })
}

/// Deformation of the vertex coefficients `(r0, s0, rA, sA, rX, sX)`.
///
/// # Safety
/// `h` must be a live handle, `coefficients` must point to 6 doubles, and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mg_deformation_from_vertices(
    h: *const MgHolonomy,
    coefficients: *const f64,
    out: *mut *mut MgDeformation,
) -> MgStatus {
    guard(|| {
        let h = r(h, "h")?;
        let c = VertexCoefficients::from_array(arr(coefficients, "coefficients")?);
        let u = cocycle_from_coefficients(&h.0, &c).map_err(lib)?;
        let out = w(out, "out")?;
        *out = Box::into_raw(Box::new(MgDeformation(AffineDeformation::new(
            h.0.clone(),
            u,
        ))));
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a live deformation handle.
#[no_mangle]
pub unsafe extern "C" fn mg_deformation_free(d: *mut MgDeformation) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Margulis invariant of a word in `A, B, X, Y` (lower case for inverses).
///
/// # Safety
/// `d` must be a live handle, `word` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mg_deformation_alpha(
    d: *const MgDeformation,
    word: *const c_char,
    out: *mut f64,
) -> MgStatus {
    guard(|| {
        let d = r(d, "d")?;
        let wd: Word = str_arg(word, "word")?.parse().map_err(lib)?;
        let a = d.0.margulis_invariant(&wd).map_err(lib)?;
        *w(out, "out")? = a;
        Ok(())
    })
}

/// Writes `(alpha_A, alpha_X, alpha_Y)`.
///
/// # Safety
/// `d` must be a live handle and `out` must point to 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn mg_deformation_mu(d: *const MgDeformation, out: *mut f64) -> MgStatus {
    guard(|| {
        let d = r(d, "d")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = d.0.mu_coords().map_err(lib)?;
        ptr::copy_nonoverlapping([m.alpha_a, m.alpha_x, m.alpha_y].as_ptr(), out, 3);
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mg_deformation_cone(
    d: *const MgDeformation,
    out: *mut MgCone,
) -> MgStatus {
    guard(|| {
        let d = r(d, "d")?;
        let c = match cone_membership(&d.0).map_err(lib)? {
            ConeClass::InteriorPlus => MgCone::InteriorPlus,
            ConeClass::InteriorMinus => MgCone::InteriorMinus,
            ConeClass::Boundary => MgCone::Boundary,
            ConeClass::Outside => MgCone::Outside,
        };
        *w(out, "out")? = c;
        Ok(())
    })
}

/// Crooked domain of the vertex coefficients `(r0, s0, rA, sA, rX, sX)`.
/// Non-strict coefficients fail with `KISSING` unless `resolve` is set.
///
/// # Safety
/// `h` must be a live handle, `coefficients` must point to 6 doubles, and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mg_domain_build(
    h: *const MgHolonomy,
    coefficients: *const f64,
    resolve: bool,
    out: *mut *mut MgDomain,
) -> MgStatus {
    guard(|| {
        let h = r(h, "h")?;
        let c = VertexCoefficients::from_array(arr(coefficients, "coefficients")?);
        let d = if resolve {
            kissing_resolve(&h.0, &c)
        } else {
            tame_domain(&h.0, &c)
        }
        .map_err(lib)?;
        let out = w(out, "out")?;
        *out = Box::into_raw(Box::new(MgDomain(d)));
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a live domain handle.
#[no_mangle]
pub unsafe extern "C" fn mg_domain_free(d: *mut MgDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Pairing, disjointness and word checks; `passed` receives the verdict.
///
/// # Safety
/// `d` must be a live handle and `passed` valid.
#[no_mangle]
pub unsafe extern "C" fn mg_domain_verify(
    d: *const MgDomain,
    depth: usize,
    samples: usize,
    radius: f64,
    tol: f64,
    seed: u64,
    passed: *mut bool,
) -> MgStatus {
    guard(|| {
        let d = r(d, "d")?;
        if samples == 0 || radius.is_nan() || radius <= 0.0 || tol.is_nan() || tol < 0.0 {
            return Err((
                MgStatus::InvalidArgument,
                "samples, radius must be positive and tol nonnegative".into(),
            ));
        }
        let p = OracleParams {
            samples,
            radius,
            tol,
            seed,
        };
        *w(passed, "passed")? = verify_schottky(&d.0, depth, &p).passed;
        Ok(())
    })
}

/// Writes face `face` (0 to 3) as an OBJ mesh truncated at `radius`.
///
/// # Safety
/// `d` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mg_domain_export_mesh(
    d: *const MgDomain,
    face: usize,
    radius: f64,
    path: *const c_char,
) -> MgStatus {
    guard(|| {
        let d = r(d, "d")?;
        let path = str_arg(path, "path")?;
        let planes = d.0.planes();
        let plane = planes.get(face).ok_or((
            MgStatus::InvalidArgument,
            format!("face {face} out of range"),
        ))?;
        export_mesh(plane, radius, Path::new(path)).map_err(lib)
    })
}

/// Runs `holonomy`, `invariants` or `domain` on a JSON configuration and
/// returns the JSON report in `out_json` (release with [`mg_string_free`]).
/// `passed` receives the report verdict.
///
/// # Safety
/// `command` and `config_json` must be NUL-terminated strings; `out_json`
/// and `passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mg_run_command(
    command: *const c_char,
    config_json: *const c_char,
    out_json: *mut *mut c_char,
    passed: *mut bool,
) -> MgStatus {
    guard(|| {
        let cmd = str_arg(command, "command")?;
        let cfg = SceneConfig::from_json(str_arg(config_json, "config_json")?).map_err(lib)?;
        let report = match cmd {
            "holonomy" => cmd_holonomy(&cfg),
            "invariants" => cmd_invariants(&cfg),
            "domain" => cmd_domain(&cfg, None).map(|(r, _)| r),
            other => {
                return Err((
                    MgStatus::InvalidArgument,
                    format!("unknown command {other:?}"),
                ))
            }
        }
        .map_err(lib)?;
        let s = CString::new(report.to_json())
            .map_err(|_| (MgStatus::Internal, "report contains NUL".into()))?;
        let out = w(out_json, "out_json")?;
        *w(passed, "passed")? = report.passed;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
