//! C interface to the metamono core library.
//!
//! Every function returns an [`MmStatus`]; on failure a description is
//! available from [`mm_last_error`] on the same thread. Objects are opaque
//! handles created by `*_new` style functions and released with the
//! matching `*_free`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, c_int, c_void, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use metamono::basis::{eval_f, eval_fnm, BasisIndex, DiskPoint};
use metamono::bessel::{bessel_j, bessel_zero};
use metamono::diskquad::{QuadratureRule, Samples};
use metamono::evolution::{TimeField, WaveState};
use metamono::expansion::{ExpansionState, Projector};
use metamono::{Error, Quaternion};

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MmQuaternion {
    pub s: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl From<Quaternion> for MmQuaternion {
    fn from(q: Quaternion) -> Self {
        Self {
            s: q.s,
            i: q.i,
            j: q.j,
            k: q.k,
        }
    }
}

impl From<MmQuaternion> for Quaternion {
    fn from(q: MmQuaternion) -> Self {
        Quaternion::new(q.s, q.i, q.j, q.k)
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Domain = 3,
    ZeroNonconvergence = 4,
    NonFinite = 5,
    IllConditioned = 6,
    Degenerate = 7,
    GrowthGuard = 8,
    Format = 9,
    Io = 10,
    Callback = 11,
    Panic = 12,
}

impl From<&Error> for MmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Config(_) => MmStatus::Config,
            Error::Domain(_) => MmStatus::Domain,
            Error::ZeroNonconvergence { .. } => MmStatus::ZeroNonconvergence,
            Error::NonFinite { .. } => MmStatus::NonFinite,
            Error::IllConditioned { .. } => MmStatus::IllConditioned,
            Error::Degenerate { .. } => MmStatus::Degenerate,
            Error::GrowthGuard { .. } => MmStatus::GrowthGuard,
            Error::Format(_) => MmStatus::Format,
            Error::Io(_) => MmStatus::Io,
        }
    }
}

/// Quadrature rule on the unit disk.
pub struct MmRule {
    inner: QuadratureRule,
}

/// Coefficients of an expansion together with its residual.
pub struct MmExpansion {
    state: ExpansionState,
}

/// Imaginary-time wave built from basis coefficients.
pub struct MmWave {
    state: WaveState,
}

/// Field sampled by [`mm_project`]. Writes `f(x, y)` to `out` and returns
/// 0, or returns nonzero to abort the projection.
pub type MmFieldCallback = Option<
    unsafe extern "C" fn(user: *mut c_void, x: f64, y: f64, out: *mut MmQuaternion) -> c_int,
>;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Core(Error),
    Status(MmStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(MmStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `body`, converting errors and panics into a status and the
/// thread's last error message.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> MmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            MmStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            MmStatus::from(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(&msg);
            s
        }
        Err(_) => {
            set_last_error("internal panic");
            MmStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn to_usize(v: u32) -> usize {
    v as usize
}

/// Message describing the last failure on this thread, or an empty
/// string. Valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn mm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `J_n(x)`.
///
/// # Safety
/// `out` must be NULL or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn mm_bessel_j(n: u32, x: f64, out: *mut f64) -> MmStatus {
    guarded(|| write(out, bessel_j(to_usize(n), x)?, "out"))
}

/// The `m`-th positive zero `j_{n,m}` of `J_n`.
///
/// # Safety
/// `out` must be NULL or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn mm_bessel_zero(n: u32, m: u32, out: *mut f64) -> MmStatus {
    guarded(|| write(out, bessel_zero(to_usize(n), to_usize(m))?, "out"))
}

/// `F_n[lambda](x, y)`.
///
/// # Safety
/// `out` must be NULL or valid for writing one `MmQuaternion`.
#[no_mangle]
pub unsafe extern "C" fn mm_eval_f(
    n: u32,
    lambda: f64,
    x: f64,
    y: f64,
    out: *mut MmQuaternion,
) -> MmStatus {
    guarded(|| {
        write(
            out,
            eval_f(to_usize(n), lambda, &DiskPoint::cartesian(x, y))?.into(),
            "out",
        )
    })
}

/// `F_{n,m}(x, y) = F_n[j_{n,m}](x, y)`.
///
/// # Safety
/// `out` must be NULL or valid for writing one `MmQuaternion`.
#[no_mangle]
pub unsafe extern "C" fn mm_eval_fnm(
    n: u32,
    m: u32,
    x: f64,
    y: f64,
    out: *mut MmQuaternion,
) -> MmStatus {
    guarded(|| {
        let idx = BasisIndex::new(to_usize(n), to_usize(m));
        write(
            out,
            eval_fnm(idx, &DiskPoint::cartesian(x, y))?.into(),
            "out",
        )
    })
}

/// Creates an `nr × ntheta` tensor rule.
///
/// # Safety
/// `out` must be NULL or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_rule_new(nr: u32, ntheta: u32, out: *mut *mut MmRule) -> MmStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let rule = QuadratureRule::new(to_usize(nr), to_usize(ntheta))?;
        out.write(Box::into_raw(Box::new(MmRule { inner: rule })));
        Ok(())
    })
}

/// # Safety
/// `rule` must be NULL or a pointer from [`mm_rule_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mm_rule_free(rule: *mut MmRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Number of nodes of `rule`.
///
/// # Safety
/// `rule` must be a live handle; `out` valid for one `size_t`.
#[no_mangle]
pub unsafe extern "C" fn mm_rule_len(rule: *const MmRule, out: *mut usize) -> MmStatus {
    guarded(|| write(out, handle(rule, "rule")?.inner.len(), "out"))
}

/// Coordinates and weight of node `index`.
///
/// # Safety
/// `rule` must be a live handle; `x`, `y` and `w` valid for one `double` each.
#[no_mangle]
pub unsafe extern "C" fn mm_rule_node(
    rule: *const MmRule,
    index: usize,
    x: *mut f64,
    y: *mut f64,
    w: *mut f64,
) -> MmStatus {
    guarded(|| {
        let rule = &handle(rule, "rule")?.inner;
        let node = rule.nodes().get(index).ok_or_else(|| {
            Failure::Core(Error::Config(format!(
                "node {index} out of range (rule has {})",
                rule.len()
            )))
        })?;
        write(x, node.point.x, "x")?;
        write(y, node.point.y, "y")?;
        write(w, node.weight, "w")
    })
}

/// Expands the field given by `callback` in `F_{n,m}`, `n <= n_max`,
/// `m <= m_max`. The callback is invoked once per rule node, in node
/// order, on the calling thread.
///
/// # Safety
/// `rule` must be a live handle, `callback` non-NULL and safe to call with
/// `user`, and `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_project(
    rule: *const MmRule,
    callback: MmFieldCallback,
    user: *mut c_void,
    lambda: f64,
    n_max: u32,
    m_max: u32,
    out: *mut *mut MmExpansion,
) -> MmStatus {
    guarded(|| {
        let rule = &handle(rule, "rule")?.inner;
        let callback = callback.ok_or_else(|| null("callback"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut values = Vec::with_capacity(rule.len());
        for node in rule.nodes() {
            let mut q = MmQuaternion::default();
            let rc = callback(user, node.point.x, node.point.y, &mut q);
            if rc != 0 {
                return Err(Failure::Status(
                    MmStatus::Callback,
                    format!(
                        "field callback returned {rc} at ({}, {})",
                        node.point.x, node.point.y
                    ),
                ));
            }
            values.push(Quaternion::from(q));
        }
        let samples = Samples { values };
        if let Some(bad) = samples.values.iter().position(|q| !q.is_finite()) {
            let p = rule.nodes()[bad].point;
            return Err(Error::NonFinite { x: p.x, y: p.y }.into());
        }
        let state = Projector::new(rule).project_samples(
            &samples,
            lambda,
            to_usize(n_max),
            to_usize(m_max),
        )?;
        out.write(Box::into_raw(Box::new(MmExpansion { state })));
        Ok(())
    })
}

/// # Safety
/// `expansion` must be NULL or a pointer from [`mm_project`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mm_expansion_free(expansion: *mut MmExpansion) {
    if !expansion.is_null() {
        drop(Box::from_raw(expansion));
    }
}

/// Number of coefficients, ordered `n` outer and `m` inner.
///
/// # Safety
/// `expansion` must be a live handle; `out` valid for one `size_t`.
#[no_mangle]
pub unsafe extern "C" fn mm_expansion_len(
    expansion: *const MmExpansion,
    out: *mut usize,
) -> MmStatus {
    guarded(|| {
        write(
            out,
            handle(expansion, "expansion")?.state.coeffs.len(),
            "out",
        )
    })
}

/// Coefficient number `index` and its basis index `(n, m)`.
///
/// # Safety
/// `expansion` must be a live handle; `n`, `m` and `coeff` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn mm_expansion_coeff(
    expansion: *const MmExpansion,
    index: usize,
    n: *mut u32,
    m: *mut u32,
    coeff: *mut MmQuaternion,
) -> MmStatus {
    guarded(|| {
        let state = &handle(expansion, "expansion")?.state;
        let (idx, c) = state.coeffs.iter().nth(index).ok_or_else(|| {
            Failure::Core(Error::Config(format!(
                "coefficient {index} out of range ({})",
                state.coeffs.len()
            )))
        })?;
        write(n, idx.n as u32, "n")?;
        write(m, idx.m as u32, "m")?;
        write(coeff, (*c).into(), "coeff")
    })
}

/// `L²` residual of the expansion and the norm of the expanded field.
///
/// # Safety
/// `expansion` must be a live handle; `residual` and `field_norm` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn mm_expansion_residual(
    expansion: *const MmExpansion,
    residual: *mut f64,
    field_norm: *mut f64,
) -> MmStatus {
    guarded(|| {
        let state = &handle(expansion, "expansion")?.state;
        write(residual, state.residual_l2, "residual")?;
        write(field_norm, state.field_norm, "field_norm")
    })
}

/// The truncated series at `(x, y)`.
///
/// # Safety
/// `expansion` must be a live handle; `out` valid for one `MmQuaternion`.
#[no_mangle]
pub unsafe extern "C" fn mm_expansion_eval(
    expansion: *const MmExpansion,
    x: f64,
    y: f64,
    out: *mut MmQuaternion,
) -> MmStatus {
    guarded(|| {
        let state = &handle(expansion, "expansion")?.state;
        let v = metamono::expansion::reconstruct(state, &DiskPoint::cartesian(x, y))?;
        write(out, v.into(), "out")
    })
}

/// Wave with coefficients `coeffs[i]` on `F_{ns[i], ms[i]}` and constant `k`.
///
/// # Safety
/// `ns`, `ms` and `coeffs` must each point to `len` readable elements
/// (they may be NULL when `len` is 0); `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_wave_new(
    ns: *const u32,
    ms: *const u32,
    coeffs: *const MmQuaternion,
    len: usize,
    k: f64,
    out: *mut *mut MmWave,
) -> MmStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let mut map = BTreeMap::new();
        if len > 0 {
            if ns.is_null() || ms.is_null() || coeffs.is_null() {
                return Err(null("ns, ms or coeffs"));
            }
            let ns = std::slice::from_raw_parts(ns, len);
            let ms = std::slice::from_raw_parts(ms, len);
            let cs = std::slice::from_raw_parts(coeffs, len);
            for ((&n, &m), &c) in ns.iter().zip(ms).zip(cs) {
                let idx = BasisIndex::new(to_usize(n), to_usize(m));
                *map.entry(idx).or_insert(Quaternion::ZERO) += Quaternion::from(c);
            }
        }
        let state = WaveState::new(&map, k)?;
        out.write(Box::into_raw(Box::new(MmWave { state })));
        Ok(())
    })
}

/// Wave whose initial data is the truncated expansion.
///
/// # Safety
/// `expansion` must be a live handle; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_wave_from_expansion(
    expansion: *const MmExpansion,
    k: f64,
    out: *mut *mut MmWave,
) -> MmStatus {
    guarded(|| {
        let state = &handle(expansion, "expansion")?.state;
        if out.is_null() {
            return Err(null("out"));
        }
        let wave = WaveState::new(&state.coeffs, k)?;
        out.write(Box::into_raw(Box::new(MmWave { state: wave })));
        Ok(())
    })
}

/// # Safety
/// `wave` must be NULL or a pointer from a `mm_wave_*` constructor not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mm_wave_free(wave: *mut MmWave) {
    if !wave.is_null() {
        drop(Box::from_raw(wave));
    }
}

/// `v(x, y, t)`.
///
/// # Safety
/// `wave` must be a live handle; `out` valid for one `MmQuaternion`.
#[no_mangle]
pub unsafe extern "C" fn mm_wave_eval(
    wave: *const MmWave,
    x: f64,
    y: f64,
    t: f64,
    out: *mut MmQuaternion,
) -> MmStatus {
    guarded(|| {
        let state = &handle(wave, "wave")?.state;
        state.check_time(t)?;
        write(
            out,
            state.eval_at(&DiskPoint::cartesian(x, y), t).into(),
            "out",
        )
    })
}
