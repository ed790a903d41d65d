//! C ABI for `gdiscord`.
//!
//! Every function returns a [`GdStatus`]; results are written through out
//! pointers. On failure, [`gd_last_error_message`] describes the most recent
//! error on the calling thread. Covariance matrices and sample sets are
//! opaque handles that must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gdiscord::channel::{classify, CanonicalFormLabel, GaussianChannelParams};
use gdiscord::discord::{gaussian_discord_closed_form, gaussian_discord_numeric, DiscordReport};
use gdiscord::family::{decompose_squeezed_thermal, family_cm_from_params, membership, FamilyParams};
use gdiscord::remote_prep::{condition_on_outcome, GaussianMeasurement, SeedKind};
use gdiscord::sampler::{sample_family, SampleSet};
use gdiscord::symplectic::{
    normal_form, set_validation_tolerance, symplectic_spectrum, validate_bona_fide, NormalFormCM, Sign, TwoModeCM,
    Vec2, Vec4,
};
use gdiscord::{h, Error};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GdStatus {
    GdOk = 0,
    GdErrDomain = 1,
    GdErrNumericalFailure = 2,
    GdErrInvalidChannelParams = 3,
    GdErrNotSqueezedThermalForm = 4,
    GdErrNotBonaFide = 5,
    GdErrOutOfFamily = 6,
    GdErrMixedSeed = 7,
    GdErrParse = 8,
    GdErrNullPointer = 9,
    GdErrIndexOutOfRange = 10,
    GdErrPanic = 11,
}

impl From<&Error> for GdStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => GdStatus::GdErrDomain,
            Error::NumericalFailure(_) => GdStatus::GdErrNumericalFailure,
            Error::InvalidChannelParams { .. } => GdStatus::GdErrInvalidChannelParams,
            Error::NotSqueezedThermalForm { .. } => GdStatus::GdErrNotSqueezedThermalForm,
            Error::NotBonaFide(_) => GdStatus::GdErrNotBonaFide,
            Error::OutOfFamily(_) => GdStatus::GdErrOutOfFamily,
            Error::MixedSeed(_) => GdStatus::GdErrMixedSeed,
            Error::Parse(_) => GdStatus::GdErrParse,
        }
    }
}

/// Opaque two-mode covariance matrix.
pub struct GdCm(TwoModeCM);

/// Opaque set of sampled family members.
pub struct GdSampleSet(SampleSet);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdFamilyParams {
    pub b: f64,
    pub r: f64,
    pub tau: f64,
    pub eta: f64,
    /// +1 or -1.
    pub sign: i32,
    /// Output squeezing; ignored on input.
    pub xi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GdMeasurementKind {
    GdMeasSqueezed = 0,
    GdMeasHomodyneQ = 1,
    GdMeasHomodyneP = 2,
    /// Reported for discord reports without a witness.
    GdMeasNone = 3,
}

/// Rank-one Gaussian measurement. `u` is read only for `GD_MEAS_SQUEEZED`;
/// `u = 1` is heterodyne detection.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdMeasurement {
    pub kind: GdMeasurementKind,
    pub u: f64,
    pub phi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdDiscordReport {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    pub i_ab: f64,
    pub s_min_cond: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub witness: GdMeasurement,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GdChannelForm {
    GdFormA1 = 0,
    GdFormA2 = 1,
    GdFormB1 = 2,
    GdFormB2Identity = 3,
    GdFormB2Additive = 4,
    GdFormCLossy = 5,
    GdFormCAmplifier = 6,
    GdFormD = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdSamplePoint {
    pub c: f64,
    pub cp: f64,
    pub r: f64,
    pub tau: f64,
    pub eta: f64,
    pub sign: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, recording errors and converting panics.
fn guard<F: FnOnce() -> Result<(), GdFailure>>(f: F) -> GdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GdStatus::GdOk,
        Ok(Err(GdFailure::Lib(e))) => {
            set_last_error(&e.to_string());
            GdStatus::from(&e)
        }
        Ok(Err(GdFailure::Null)) => {
            set_last_error("null pointer argument");
            GdStatus::GdErrNullPointer
        }
        Ok(Err(GdFailure::Index)) => {
            set_last_error("index out of range");
            GdStatus::GdErrIndexOutOfRange
        }
        Err(_) => {
            set_last_error("internal panic");
            GdStatus::GdErrPanic
        }
    }
}

enum GdFailure {
    Lib(Error),
    Null,
    Index,
}

impl From<Error> for GdFailure {
    fn from(e: Error) -> Self {
        GdFailure::Lib(e)
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, GdFailure> {
    p.as_ref().ok_or(GdFailure::Null)
}

unsafe fn write<T>(p: *mut T, value: T) -> Result<(), GdFailure> {
    if p.is_null() {
        return Err(GdFailure::Null);
    }
    p.write(value);
    Ok(())
}

fn sign_from_i32(s: i32) -> Result<Sign, GdFailure> {
    match s {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(Error::Domain(format!("sign must be +1 or -1, got {s}")).into()),
    }
}

fn family_from_c(p: &GdFamilyParams) -> Result<FamilyParams, GdFailure> {
    Ok(FamilyParams::new(p.b, p.r, p.tau, p.eta, sign_from_i32(p.sign)?)?)
}

fn family_to_c(fp: &FamilyParams) -> GdFamilyParams {
    GdFamilyParams { b: fp.b, r: fp.r, tau: fp.tau, eta: fp.eta, sign: fp.sign.value() as i32, xi: fp.xi() }
}

fn measurement_from_c(m: &GdMeasurement) -> Result<GaussianMeasurement, GdFailure> {
    Ok(match m.kind {
        GdMeasurementKind::GdMeasSqueezed => GaussianMeasurement::squeezed(m.u, m.phi)?,
        GdMeasurementKind::GdMeasHomodyneQ => GaussianMeasurement::homodyne_q(m.phi),
        GdMeasurementKind::GdMeasHomodyneP => GaussianMeasurement::homodyne_p(m.phi),
        GdMeasurementKind::GdMeasNone => return Err(Error::Domain("measurement kind NONE".into()).into()),
    })
}

fn measurement_to_c(m: Option<&GaussianMeasurement>) -> GdMeasurement {
    match m.map(|m| (m.kind(), m.phi())) {
        None => GdMeasurement { kind: GdMeasurementKind::GdMeasNone, u: f64::NAN, phi: f64::NAN },
        Some((SeedKind::Squeezed { u }, phi)) => GdMeasurement { kind: GdMeasurementKind::GdMeasSqueezed, u, phi },
        Some((SeedKind::HomodyneQ, phi)) => GdMeasurement { kind: GdMeasurementKind::GdMeasHomodyneQ, u: 0.0, phi },
        Some((SeedKind::HomodyneP, phi)) => {
            GdMeasurement { kind: GdMeasurementKind::GdMeasHomodyneP, u: f64::INFINITY, phi }
        }
    }
}

fn report_to_c(r: &DiscordReport) -> GdDiscordReport {
    GdDiscordReport {
        s_a: r.s_a,
        s_b: r.s_b,
        s_ab: r.s_ab,
        i_ab: r.i_ab,
        s_min_cond: r.s_min_cond,
        classical_corr: r.classical_corr,
        discord: r.discord,
        witness: measurement_to_c(r.witness.as_ref().map(|w| &w.0)),
    }
}

/// Message for the last failed call on this thread. Valid until the next
/// call into the library from the same thread; never null.
#[no_mangle]
pub extern "C" fn gd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Sets the process-wide bona fide tolerance (default 1e-9).
#[no_mangle]
pub extern "C" fn gd_set_validation_tolerance(tol: f64) -> GdStatus {
    guard(|| Ok(set_validation_tolerance(tol)?))
}

/// Creates `V(a, b, c, cp)`. The matrix is not validated.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gd_cm_from_normal_form(a: f64, b: f64, c: f64, cp: f64, out: *mut *mut GdCm) -> GdStatus {
    guard(|| {
        let cm = NormalFormCM::new(a, b, c, cp).embed();
        write(out, Box::into_raw(Box::new(GdCm(cm))))
    })
}

/// Creates a covariance matrix from 16 row-major entries in quadrature
/// order `(qA, pA, qB, pB)`. Fails if the matrix is not symmetric.
///
/// # Safety
/// `entries` must point to 16 doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gd_cm_from_entries(entries: *const f64, out: *mut *mut GdCm) -> GdStatus {
    guard(|| {
        let e = deref(entries.cast::<[f64; 16]>())?;
        let cm = TwoModeCM::from_row_major(e)?;
        write(out, Box::into_raw(Box::new(GdCm(cm))))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `cm` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gd_cm_free(cm: *mut GdCm) {
    if !cm.is_null() {
        drop(Box::from_raw(cm));
    }
}

/// Copies the 16 row-major entries.
///
/// # Safety
/// `cm` must be a live handle; `out` must hold 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn gd_cm_entries(cm: *const GdCm, out: *mut f64) -> GdStatus {
    guard(|| {
        let cm = deref(cm)?;
        write(out.cast::<[f64; 16]>(), cm.0.to_row_major())
    })
}

/// Symplectic eigenvalues `nu_minus <= nu_plus`.
///
/// # Safety
/// `cm` must be a live handle; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_symplectic_spectrum(cm: *const GdCm, nu_minus: *mut f64, nu_plus: *mut f64) -> GdStatus {
    guard(|| {
        let s = symplectic_spectrum(&deref(cm)?.0)?;
        write(nu_minus, s.nu_minus)?;
        write(nu_plus, s.nu_plus)
    })
}

/// Writes 1 if the state is bona fide, else 0.
///
/// # Safety
/// `cm` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_is_bona_fide(cm: *const GdCm, out: *mut i32) -> GdStatus {
    guard(|| write(out, validate_bona_fide(&deref(cm)?.0).bona_fide as i32))
}

/// Thermal entropy `h(x)` in bits.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_entropy_h(x: f64, out: *mut f64) -> GdStatus {
    guard(|| write(out, h(x)?))
}

/// Discord by numeric minimisation over Gaussian measurements.
///
/// # Safety
/// `cm` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_discord_numeric(cm: *const GdCm, out: *mut GdDiscordReport) -> GdStatus {
    guard(|| write(out, report_to_c(&gaussian_discord_numeric(&deref(cm)?.0)?)))
}

/// Closed-form discord of a family member.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_discord_closed_form(params: *const GdFamilyParams, out: *mut GdDiscordReport) -> GdStatus {
    guard(|| {
        let fp = family_from_c(deref(params)?)?;
        write(out, report_to_c(&gaussian_discord_closed_form(&fp)?))
    })
}

/// Family witness of a state (reduced to normal form first);
/// `GdErrOutOfFamily` if none exists.
///
/// # Safety
/// `cm` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_membership(cm: *const GdCm, out: *mut GdFamilyParams) -> GdStatus {
    guard(|| {
        let v = &deref(cm)?.0;
        let nf = match NormalFormCM::from_cm(v, 0.0) {
            Some(nf) => nf,
            None => normal_form(v)?,
        };
        write(out, family_to_c(&membership(&nf)?))
    })
}

/// Normal form of the family member described by `params`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_family_cm(params: *const GdFamilyParams, out: *mut *mut GdCm) -> GdStatus {
    guard(|| {
        let fp = family_from_c(deref(params)?)?;
        let cm = family_cm_from_params(&fp)?.embed();
        write(out, Box::into_raw(Box::new(GdCm(cm))))
    })
}

/// `(tau, eta)` of the squeezed thermal state `V(a, b, c, -c)`.
///
/// # Safety
/// Out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_decompose_squeezed_thermal(
    a: f64,
    b: f64,
    c: f64,
    tau: *mut f64,
    eta: *mut f64,
) -> GdStatus {
    guard(|| {
        let ch = decompose_squeezed_thermal(a, b, c)?;
        write(tau, ch.tau)?;
        write(eta, ch.eta)
    })
}

/// Canonical form of the channel `(tau, eta)`. `omega` receives the
/// thermal parameter, or NaN for forms without one.
///
/// # Safety
/// Out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_classify(tau: f64, eta: f64, form: *mut GdChannelForm, omega: *mut f64) -> GdStatus {
    guard(|| {
        let label = classify(&GaussianChannelParams::new(tau, eta)?)?;
        let f = match label {
            CanonicalFormLabel::A1 { .. } => GdChannelForm::GdFormA1,
            CanonicalFormLabel::A2 { .. } => GdChannelForm::GdFormA2,
            CanonicalFormLabel::B1 => GdChannelForm::GdFormB1,
            CanonicalFormLabel::B2Identity => GdChannelForm::GdFormB2Identity,
            CanonicalFormLabel::B2Additive => GdChannelForm::GdFormB2Additive,
            CanonicalFormLabel::CLossy { .. } => GdChannelForm::GdFormCLossy,
            CanonicalFormLabel::CAmplifier { .. } => GdChannelForm::GdFormCAmplifier,
            CanonicalFormLabel::D { .. } => GdChannelForm::GdFormD,
        };
        write(form, f)?;
        write(omega, label.omega().unwrap_or(f64::NAN))
    })
}

/// Conditional state of mode A after measuring mode B with outcome `k`.
/// `mean` holds the four first moments (may be null for zero mean);
/// `out_cm` receives the 2x2 covariance in row-major order.
///
/// # Safety
/// `cm` must be a live handle; `k` must hold 2 doubles, `mean` 4 (or be
/// null), `out_mean` 2 and `out_cm` 4.
#[no_mangle]
pub unsafe extern "C" fn gd_condition_on_outcome(
    cm: *const GdCm,
    mean: *const f64,
    measurement: *const GdMeasurement,
    k: *const f64,
    out_mean: *mut f64,
    out_cm: *mut f64,
) -> GdStatus {
    guard(|| {
        let v = &deref(cm)?.0;
        let mean = if mean.is_null() { Vec4::zeros() } else { Vec4::from(*deref(mean.cast::<[f64; 4]>())?) };
        let m = measurement_from_c(deref(measurement)?)?;
        let k = Vec2::from(*deref(k.cast::<[f64; 2]>())?);
        validate_bona_fide(v).into_result()?;
        let s = condition_on_outcome(v, &mean, &m, &k)?;
        write(out_mean.cast::<[f64; 2]>(), [s.mean[0], s.mean[1]])?;
        write(out_cm.cast::<[f64; 4]>(), [s.cm[(0, 0)], s.cm[(0, 1)], s.cm[(1, 0)], s.cm[(1, 1)]])
    })
}

/// Draws `n` family members at fixed `(a, b)`; the result depends only on
/// `seed`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_sample_family(a: f64, b: f64, n: usize, seed: u64, out: *mut *mut GdSampleSet) -> GdStatus {
    guard(|| {
        let set = sample_family(a, b, n, seed)?;
        write(out, Box::into_raw(Box::new(GdSampleSet(set))))
    })
}

/// Number of points in a sample set (0 for null).
///
/// # Safety
/// `set` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn gd_sample_set_len(set: *const GdSampleSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.points.len())
}

/// Copies point `index`.
///
/// # Safety
/// `set` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gd_sample_set_get(set: *const GdSampleSet, index: usize, out: *mut GdSamplePoint) -> GdStatus {
    guard(|| {
        let p = deref(set)?.0.points.get(index).ok_or(GdFailure::Index)?;
        let fp = p.params.ok_or(GdFailure::Index)?;
        write(
            out,
            GdSamplePoint { c: p.c, cp: p.c_prime, r: fp.r, tau: fp.tau, eta: fp.eta, sign: fp.sign.value() as i32 },
        )
    })
}

/// Releases a sample set. Null is ignored.
///
/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gd_sample_set_free(set: *mut GdSampleSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}
