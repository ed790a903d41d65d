use std::ffi::CStr;
use std::ptr;

use gdiscord_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gd_last_error_message()) }.to_string_lossy().into_owned()
}

fn cm(a: f64, b: f64, c: f64, cp: f64) -> *mut GdCm {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { gd_cm_from_normal_form(a, b, c, cp, &mut h) }, GdStatus::GdOk);
    h
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(gd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn spectrum_and_entries() {
    let h = cm(2.0, 2.0, 3f64.sqrt(), -(3f64.sqrt()));
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { gd_symplectic_spectrum(h, &mut lo, &mut hi) }, GdStatus::GdOk);
    assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);

    let mut e = [0.0; 16];
    assert_eq!(unsafe { gd_cm_entries(h, e.as_mut_ptr()) }, GdStatus::GdOk);
    assert_eq!(e[0], 2.0);
    assert_eq!(e[2], 3f64.sqrt());
    assert_eq!(e[7], -(3f64.sqrt()));

    let mut copy = ptr::null_mut();
    assert_eq!(unsafe { gd_cm_from_entries(e.as_ptr(), &mut copy) }, GdStatus::GdOk);
    let mut ok = 0;
    assert_eq!(unsafe { gd_is_bona_fide(copy, &mut ok) }, GdStatus::GdOk);
    assert_eq!(ok, 1);
    unsafe {
        gd_cm_free(h);
        gd_cm_free(copy);
    }
}

#[test]
fn asymmetric_entries_rejected() {
    let mut e = [0.0; 16];
    for i in 0..4 {
        e[5 * i] = 1.0;
    }
    e[1] = 0.5;
    let mut h = ptr::null_mut();
    assert_ne!(unsafe { gd_cm_from_entries(e.as_ptr(), &mut h) }, GdStatus::GdOk);
    assert!(h.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn discord_closed_form_matches_numeric() {
    let params = GdFamilyParams { b: 2.0, r: 1.5, tau: 0.6, eta: 0.7, sign: -1, xi: 0.0 };
    let mut fam = ptr::null_mut();
    assert_eq!(unsafe { gd_family_cm(&params, &mut fam) }, GdStatus::GdOk);

    let mut closed = std::mem::MaybeUninit::<GdDiscordReport>::uninit();
    assert_eq!(unsafe { gd_discord_closed_form(&params, closed.as_mut_ptr()) }, GdStatus::GdOk);
    let closed = unsafe { closed.assume_init() };
    assert_eq!(closed.witness.kind, GdMeasurementKind::GdMeasNone);

    let mut numeric = std::mem::MaybeUninit::<GdDiscordReport>::uninit();
    assert_eq!(unsafe { gd_discord_numeric(fam, numeric.as_mut_ptr()) }, GdStatus::GdOk);
    let numeric = unsafe { numeric.assume_init() };
    assert!((closed.discord - numeric.discord).abs() < 1e-6);
    assert_ne!(numeric.witness.kind, GdMeasurementKind::GdMeasNone);

    let mut found = GdFamilyParams { b: 0.0, r: 0.0, tau: 0.0, eta: 0.0, sign: 0, xi: 0.0 };
    assert_eq!(unsafe { gd_membership(fam, &mut found) }, GdStatus::GdOk);
    assert_eq!(found.b, 2.0);
    assert!(found.sign == 1 || found.sign == -1);
    unsafe { gd_cm_free(fam) };
}

#[test]
fn error_codes() {
    let bad = GdFamilyParams { b: 2.0, r: 1.0, tau: 0.5, eta: 0.1, sign: 1, xi: 0.0 };
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gd_family_cm(&bad, &mut out) }, GdStatus::GdErrInvalidChannelParams);
    assert!(last_error().contains("0.1"), "{}", last_error());

    let bad_sign = GdFamilyParams { sign: 0, eta: 0.5, ..bad };
    assert_eq!(unsafe { gd_family_cm(&bad_sign, &mut out) }, GdStatus::GdErrDomain);

    assert_eq!(unsafe { gd_family_cm(ptr::null(), &mut out) }, GdStatus::GdErrNullPointer);
    assert_eq!(last_error(), "null pointer argument");

    let (mut tau, mut eta) = (0.0, 0.0);
    assert_eq!(
        unsafe { gd_decompose_squeezed_thermal(2.0, 2.0, 1.9, &mut tau, &mut eta) },
        GdStatus::GdErrNotSqueezedThermalForm
    );

    let mut x = 0.0;
    assert_eq!(unsafe { gd_entropy_h(0.5, &mut x) }, GdStatus::GdErrDomain);

    // Outside the family: c' = 0 with c large at a = b.
    let h = cm(3.0, 3.0, 2.0, 0.0);
    let mut fp = GdFamilyParams { b: 0.0, r: 0.0, tau: 0.0, eta: 0.0, sign: 0, xi: 0.0 };
    let status = unsafe { gd_membership(h, &mut fp) };
    assert!(status == GdStatus::GdOk || status == GdStatus::GdErrOutOfFamily);
    unsafe { gd_cm_free(h) };

    let not_physical = cm(1.0, 1.0, 1.0, 1.0);
    let mut s = 0.0;
    let m = GdMeasurement { kind: GdMeasurementKind::GdMeasSqueezed, u: 1.0, phi: 0.0 };
    let status = unsafe {
        gd_condition_on_outcome(not_physical, ptr::null(), &m, [0.0, 0.0].as_ptr(), [0.0; 2].as_mut_ptr(), &mut s)
    };
    assert_eq!(status, GdStatus::GdErrNotBonaFide);
    unsafe { gd_cm_free(not_physical) };
}

#[test]
fn decompose_and_classify() {
    let (mut tau, mut eta) = (0.0, 0.0);
    assert_eq!(unsafe { gd_decompose_squeezed_thermal(2.0, 2.0, 1.0, &mut tau, &mut eta) }, GdStatus::GdOk);
    assert!((tau - 1.0 / 3.0).abs() < 1e-12 && (eta - 4.0 / 3.0).abs() < 1e-12);

    let mut form = GdChannelForm::GdFormA1;
    let mut omega = 0.0;
    assert_eq!(unsafe { gd_classify(0.5, 0.6, &mut form, &mut omega) }, GdStatus::GdOk);
    assert_eq!(form, GdChannelForm::GdFormCLossy);
    assert!((omega - 1.2).abs() < 1e-12);

    assert_eq!(unsafe { gd_classify(1.0, 0.0, &mut form, &mut omega) }, GdStatus::GdOk);
    assert_eq!(form, GdChannelForm::GdFormB2Identity);
    assert!(omega.is_nan());
}

#[test]
fn heterodyne_on_epr_prepares_coherent_state_variance() {
    let b = 3.0;
    let c = (b * b - 1.0f64).sqrt();
    let h = cm(b, b, c, -c);
    let m = GdMeasurement { kind: GdMeasurementKind::GdMeasSqueezed, u: 1.0, phi: 0.0 };
    let (mut mean, mut out) = ([0.0; 2], [0.0; 4]);
    let status = unsafe {
        gd_condition_on_outcome(h, ptr::null(), &m, [0.5, -0.5].as_ptr(), mean.as_mut_ptr(), out.as_mut_ptr())
    };
    assert_eq!(status, GdStatus::GdOk);
    // A - C (B + I)^-1 C^T = b - c^2 / (b + 1) = 1.
    assert!((out[0] - 1.0).abs() < 1e-12 && (out[3] - 1.0).abs() < 1e-12);
    assert!(out[1].abs() < 1e-12);
    assert!((mean[0] - 0.5 * c / (b + 1.0)).abs() < 1e-12);
    unsafe { gd_cm_free(h) };
}

#[test]
fn sampling_is_reproducible() {
    let mut x = ptr::null_mut();
    let mut y = ptr::null_mut();
    unsafe {
        assert_eq!(gd_sample_family(2.0, 3.0, 100, 9, &mut x), GdStatus::GdOk);
        assert_eq!(gd_sample_family(2.0, 3.0, 100, 9, &mut y), GdStatus::GdOk);
        assert_eq!(gd_sample_set_len(x), 100);
        assert_eq!(gd_sample_set_len(ptr::null()), 0);
        let mut p = GdSamplePoint { c: 0.0, cp: 0.0, r: 0.0, tau: 0.0, eta: 0.0, sign: 0 };
        let mut q = p;
        for i in 0..100 {
            assert_eq!(gd_sample_set_get(x, i, &mut p), GdStatus::GdOk);
            assert_eq!(gd_sample_set_get(y, i, &mut q), GdStatus::GdOk);
            assert_eq!(p, q);
        }
        assert_eq!(gd_sample_set_get(x, 100, &mut p), GdStatus::GdErrIndexOutOfRange);
        gd_sample_set_free(x);
        gd_sample_set_free(y);
        gd_sample_set_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/gdiscord.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20, "{exports:?}");
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}
