//! States obtained from an EPR state by a local extended Gaussian channel
//! sandwiched between two single-mode squeezers,
//! `rho_AB = (S_xi E S_r^{-1} ⊗ I)(sigma_aB)`.
//!
//! For these states a Gaussian measurement on B with squeezing
//! `u = (rb - 1)/(b - r)` feeds coherent states into the channel, so the
//! minimum conditional entropy is `h(|tau| + eta)`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::channel::{GaussianChannelParams, CHANNEL_BOUNDARY_TOL};
use crate::error::{Error, Result};
use crate::format::round_sig;
use crate::optimize::bisect;
use crate::symplectic::{validate_bona_fide, validation_tolerance, NormalFormCM, Sign};

/// Forward-map residual accepted by [`membership`] at the default
/// validation tolerance.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Residual actually accepted: widened along with a relaxed validation
/// tolerance, since boundary states are then clamped onto the family.
pub fn membership_tol() -> f64 {
    MEMBERSHIP_TOL.max(validation_tolerance())
}

/// Slack allowed when snapping a rounded `eta` onto the boundary `|1 - tau|`.
const BOUNDARY_SNAP: f64 = 1e-9;

const MEMBERSHIP_GRID: usize = 2000;

/// `theta(r) = sqrt(eta r + |tau| b)`.
pub fn theta(r: f64, tau: f64, eta: f64, b: f64) -> f64 {
    (eta * r + tau.abs() * b).sqrt()
}

/// Decomposition witness `(b, r, tau, eta, sign)`; the output squeezing
/// `xi` is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub b: f64,
    pub r: f64,
    pub tau: f64,
    pub eta: f64,
    pub sign: Sign,
}

impl FamilyParams {
    pub fn new(b: f64, r: f64, tau: f64, eta: f64, sign: Sign) -> Result<Self> {
        let fp = FamilyParams { b, r, tau, eta, sign };
        fp.check()?;
        Ok(fp)
    }

    pub fn check(&self) -> Result<()> {
        let FamilyParams { b, r, tau, eta, .. } = *self;
        if !(b >= 1.0) || !b.is_finite() {
            return Err(Error::Domain(format!("EPR variance b must be >= 1, got {b}")));
        }
        let slack = 1e-12 * b;
        if !(r > 0.0) || r < 1.0 / b - slack || r > b + slack {
            return Err(Error::Domain(format!("squeezing r = {r} outside [1/b, b] for b = {b}")));
        }
        self.channel().check()?;
        if !(theta(r, tau, eta, b) > 0.0) || !(theta(1.0 / r, tau, eta, b) > 0.0) {
            return Err(Error::Domain("degenerate decomposition (theta = 0)".into()));
        }
        Ok(())
    }

    pub fn channel(&self) -> GaussianChannelParams {
        GaussianChannelParams { tau: self.tau, eta: self.eta }
    }

    /// Output squeezing that restores normal form, `xi = r theta(1/r) / theta(r)`.
    pub fn xi(&self) -> f64 {
        self.r * theta(1.0 / self.r, self.tau, self.eta, self.b) / theta(self.r, self.tau, self.eta, self.b)
    }

    /// Measurement squeezing on B that prepares coherent states at the
    /// channel input. `0` and `+inf` stand for the homodyne limits.
    pub fn matched_measurement_u(&self) -> f64 {
        let FamilyParams { b, r, .. } = *self;
        if r >= b {
            f64::INFINITY
        } else if r * b <= 1.0 {
            0.0
        } else {
            (r * b - 1.0) / (b - r)
        }
    }
}

impl Serialize for FamilyParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FamilyParams", 6)?;
        st.serialize_field("b", &round_sig(self.b, 12))?;
        st.serialize_field("r", &round_sig(self.r, 12))?;
        st.serialize_field("tau", &round_sig(self.tau, 12))?;
        st.serialize_field("eta", &round_sig(self.eta, 12))?;
        st.serialize_field("sign", &(self.sign.value() as i32))?;
        st.serialize_field("xi", &round_sig(self.xi(), 12))?;
        st.end()
    }
}

/// Normal form of the family member:
/// `a = theta(r) theta(1/r)`,
/// `c = ± sqrt(|tau| (b^2-1) theta(1/r)/theta(r))`,
/// `c' = ∓ sign(tau) sqrt(|tau| (b^2-1) theta(r)/theta(1/r))`.
pub fn family_cm_from_params(fp: &FamilyParams) -> Result<NormalFormCM> {
    fp.check()?;
    let FamilyParams { b, r, tau, eta, sign } = *fp;
    let th = theta(r, tau, eta, b);
    let th_inv = theta(1.0 / r, tau, eta, b);
    let corr = tau.abs() * (b * b - 1.0);
    let tau_sign = if tau < 0.0 { -1.0 } else { 1.0 };
    let c = sign.value() * (corr * th_inv / th).sqrt();
    let c_prime = -sign.value() * tau_sign * (corr * th / th_inv).sqrt();
    Ok(NormalFormCM::new(th * th_inv, b, c, c_prime))
}

/// Reads off `(tau, eta)` for a squeezed thermal state `V(a, b, c, -c)`:
/// `tau = c^2/(b^2 - 1)`, `eta = a - tau b`.
pub fn decompose_squeezed_thermal(a: f64, b: f64, c: f64) -> Result<GaussianChannelParams> {
    if !(a >= 1.0) || !(b >= 1.0) {
        return Err(Error::Domain(format!("local variances must be >= 1, got a = {a}, b = {b}")));
    }
    if b == 1.0 && c != 0.0 {
        return Err(Error::Domain("b = 1 admits no correlations".into()));
    }
    let bound = NormalFormCM::squeezed_thermal_bound(a, b);
    let c_sq = c * c;
    // At the bound nu_- = 1 and d nu_- / d c^2 = -1 / (2 + |a - b|), so this
    // slack matches the bona fide tolerance on nu_-.
    let slack = validation_tolerance() * (2.0 + (a - b).abs());
    if c_sq > bound + slack {
        return Err(Error::NotSqueezedThermalForm { c_sq, bound });
    }
    if c == 0.0 {
        return Ok(GaussianChannelParams { tau: 0.0, eta: a });
    }
    let tau = c_sq.min(bound) / (b * b - 1.0);
    let eta = snap_to_boundary(tau, a - tau * b)?;
    Ok(GaussianChannelParams { tau, eta })
}

/// Family witness of a squeezed thermal state (`r = 1`).
pub fn squeezed_thermal_params(a: f64, b: f64, c: f64) -> Result<FamilyParams> {
    let ch = decompose_squeezed_thermal(a, b, c)?;
    FamilyParams::new(b, 1.0, ch.tau, ch.eta, Sign::of(c))
}

fn snap_to_boundary(tau: f64, eta: f64) -> Result<f64> {
    let floor = (1.0 - tau).abs();
    if eta >= floor - CHANNEL_BOUNDARY_TOL {
        Ok(eta)
    } else if eta >= floor - BOUNDARY_SNAP {
        Ok(floor)
    } else {
        Err(Error::InvalidChannelParams { tau, eta })
    }
}

/// Inverts `a = theta(r) theta(1/r)` for `eta`:
/// `eta = [sqrt(4a^2 r^2 + (r^2-1)^2 tau^2 b^2) - (1+r^2)|tau| b] / (2r)`,
/// evaluated in rationalised form to avoid cancellation.
pub fn eta_from_a(a: f64, r: f64, tau: f64, b: f64) -> Result<f64> {
    if !(a >= 1.0) || !(b >= 1.0) || !(r > 0.0) {
        return Err(Error::Domain(format!("eta_from_a needs a, b >= 1 and r > 0 (a={a}, b={b}, r={r})")));
    }
    let t = tau.abs() * b;
    let root = (4.0 * a * a * r * r + (r * r - 1.0).powi(2) * t * t).sqrt();
    let eta = 2.0 * r * (a - t) * (a + t) / (root + (1.0 + r * r) * t);
    if eta < -1e-12 * a {
        return Err(Error::Domain(format!("no non-negative noise for a = {a}: |tau| b = {t} exceeds a")));
    }
    Ok(eta.max(0.0))
}

/// Interval of transmissivities for which `eta_from_a(a, r, tau, b) >= |1 - tau|`.
///
/// With `gamma_± = (r ± b)(rb ± 1)` and `L_± = b + (br ± 2) r`, the ends are
/// the roots of `gamma_± tau^2 ∓ L_± tau + r(1 - a^2) = 0` on the relevant
/// branch (amplifier side for `b <= a`, lossy side for `a <= b`). The roots
/// are evaluated in rationalised form, which is finite at `r = b^{±1}`.
pub fn tau_bounds(a: f64, b: f64, r: f64) -> Result<(f64, f64)> {
    if !(a >= 1.0) || !(b >= 1.0) || !(r > 0.0) {
        return Err(Error::Domain(format!("tau_bounds needs a, b >= 1 and r > 0 (a={a}, b={b}, r={r})")));
    }
    let a2m1 = a * a - 1.0;
    let gamma_plus = (r + b) * (r * b + 1.0);
    let l_plus = b + (b * r + 2.0) * r;
    let rad_plus = ((r * r - 1.0) * b).powi(2) + 4.0 * a * a * r * gamma_plus;
    let sq_plus = rad_plus.sqrt();
    let tau_min = -2.0 * r * a2m1 / (l_plus + sq_plus);

    let tau_max = if a <= b {
        let gamma_minus = (r - b) * (r * b - 1.0);
        let l_minus = b + (b * r - 2.0) * r;
        let rad = ((r * r - 1.0) * b).powi(2) - 4.0 * a * a * r * gamma_minus;
        let scale = ((r * r - 1.0) * b).powi(2) + 4.0 * a * a * r * gamma_minus.abs();
        if rad < -1e-9 * scale.max(1.0) {
            return Err(Error::NumericalFailure(format!("negative radicand {rad:e} in tau_max")));
        }
        let denom = l_minus + rad.max(0.0).sqrt();
        if a2m1 == 0.0 {
            0.0
        } else if denom > 0.0 {
            2.0 * r * a2m1 / denom
        } else {
            return Err(Error::NumericalFailure("degenerate tau_max denominator".into()));
        }
    } else {
        (l_plus + sq_plus) / (2.0 * gamma_plus)
    };
    Ok((tau_min, tau_max))
}

fn forward_error(fp: &FamilyParams, nf: &NormalFormCM) -> Result<f64> {
    let out = family_cm_from_params(fp)?;
    Ok((out.a - nf.a).abs().max((out.c - nf.c).abs()).max((out.c_prime - nf.c_prime).abs()))
}

/// Finds a family witness reproducing `nf` (at the same `b`) to
/// [`membership_tol`], or reports [`Error::OutOfFamily`].
///
/// `|tau|` and its sign follow from `c c' = -sign(tau) |tau| (b^2 - 1)`;
/// `r` is then the root of `(c/c')^2 = theta(1/r)^2 / theta(r)^2` with
/// `eta = eta_from_a(a, r, tau, b)`, bracketed on a log grid over
/// `[1/b, b]` and polished by bisection.
pub fn membership(nf: &NormalFormCM) -> Result<FamilyParams> {
    validate_bona_fide(&nf.embed()).into_result()?;
    let NormalFormCM { a, b, c, c_prime } = *nf;

    if c == 0.0 && c_prime == 0.0 {
        return FamilyParams::new(b, 1.0, 0.0, a, Sign::Plus);
    }
    if c == 0.0 || c_prime == 0.0 {
        return Err(Error::OutOfFamily("exactly one correlation vanishes (c c' = 0)".into()));
    }
    let scale = c.abs().max(c_prime.abs());
    if (c + c_prime).abs() <= 1e-12 * scale {
        let fp = squeezed_thermal_params(a, b, c).map_err(|e| match e {
            Error::InvalidChannelParams { .. } => Error::OutOfFamily(e.to_string()),
            other => other,
        })?;
        let err = forward_error(&fp, nf)?;
        if err >= membership_tol() {
            return Err(Error::OutOfFamily(format!("squeezed thermal witness misses by {err:e}")));
        }
        return Ok(fp);
    }
    if b <= 1.0 {
        return Err(Error::OutOfFamily("b = 1 admits no correlations".into()));
    }

    let tau_abs = (c * c_prime).abs() / (b * b - 1.0);
    let tau = if c * c_prime < 0.0 { tau_abs } else { -tau_abs };
    let t = tau_abs * b;
    if t > a {
        return Err(Error::OutOfFamily(format!("|tau| b = {t} exceeds a = {a}")));
    }
    let sign = Sign::of(c);
    let target = (c * c).ln() - (c_prime * c_prime).ln();

    let residual = |log_r: f64| -> f64 {
        let r = log_r.exp();
        match eta_from_a(a, r, tau, b) {
            Ok(eta) => ((eta / r + t) / (eta * r + t)).ln() - target,
            Err(_) => f64::NAN,
        }
    };

    let ln_b = b.ln();
    let grid: Vec<f64> = (0..=MEMBERSHIP_GRID)
        .map(|i| ln_b * (2.0 * i as f64 - MEMBERSHIP_GRID as f64) / MEMBERSHIP_GRID as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| residual(x)).collect();

    let mut roots = Vec::new();
    for i in 0..MEMBERSHIP_GRID {
        let (f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            roots.push(grid[i]);
        } else if f0.is_finite() && f1.is_finite() && f0.signum() != f1.signum() && f1 != 0.0 {
            if let Some(x) = bisect(residual, grid[i], grid[i + 1], 0.0) {
                roots.push(x);
            }
        }
    }
    if values[MEMBERSHIP_GRID] == 0.0 {
        roots.push(grid[MEMBERSHIP_GRID]);
    }
    // Near-tangential minima of |residual| can miss a sign change.
    if roots.is_empty() {
        if let Some(i) = (0..=MEMBERSHIP_GRID)
            .filter(|&i| values[i].is_finite())
            .min_by(|&i, &j| values[i].abs().total_cmp(&values[j].abs()))
        {
            roots.push(grid[i]);
        }
    }

    let tol = membership_tol();
    let mut best: Option<(f64, FamilyParams)> = None;
    for log_r in roots {
        let r = log_r.exp().clamp(1.0 / b, b);
        let Ok(eta) = eta_from_a(a, r, tau, b) else { continue };
        let Ok(eta) = snap_to_boundary(tau, eta) else { continue };
        let Ok(fp) = FamilyParams::new(b, r, tau, eta, sign) else { continue };
        let Ok(err) = forward_error(&fp, nf) else { continue };
        if err < tol && best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, fp));
        }
    }
    best.map(|(_, fp)| fp)
        .ok_or_else(|| Error::OutOfFamily(format!("no (r, tau, eta) reproduces V({a}, {b}, {c}, {c_prime})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::apply_to_mode_a;
    use crate::symplectic::epr_cm;

    #[test]
    fn decompose_examples() {
        let ch = decompose_squeezed_thermal(5.0, 2.0, 6f64.sqrt()).unwrap();
        assert!((ch.tau - 2.0).abs() < 1e-14 && (ch.eta - 1.0).abs() < 1e-14);
        let ch = decompose_squeezed_thermal(3.0, 2.0, 0.0).unwrap();
        assert_eq!((ch.tau, ch.eta), (0.0, 3.0));
        let ch = decompose_squeezed_thermal(3.0, 3.0, 8f64.sqrt()).unwrap();
        assert!((ch.tau - 1.0).abs() < 1e-14 && ch.eta.abs() < 1e-14);
    }

    #[test]
    fn decompose_accepts_rounded_boundary_states() {
        // sqrt(6) to ten digits sits 1e-9 beyond the bound ab - 1 - |a - b| = 6.
        let ch = decompose_squeezed_thermal(5.0, 2.0, 2.449489743).unwrap();
        assert!((ch.tau - 2.0).abs() < 1e-12 && (ch.eta - 1.0).abs() < 1e-12);
        let fp = membership(&NormalFormCM::new(5.0, 2.0, 2.449489743, -2.449489743)).unwrap();
        assert!((fp.tau - 2.0).abs() < 1e-12);
    }

    #[test]
    fn decompose_errors() {
        assert!(matches!(decompose_squeezed_thermal(2.0, 2.0, 2.0), Err(Error::NotSqueezedThermalForm { .. })));
        assert!(matches!(decompose_squeezed_thermal(3.0, 1.0, 0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn decompose_round_trips_through_channel() {
        let (a, b, c) = (4.0, 2.5, -1.7);
        let ch = decompose_squeezed_thermal(a, b, c).unwrap();
        let out = apply_to_mode_a(&ch, &epr_cm(b, Sign::of(c)).unwrap()).unwrap();
        assert!(out.max_abs_diff(&NormalFormCM::squeezed_thermal(a, b, c).embed()) < 1e-12);
    }

    #[test]
    fn forward_examples() {
        let nf = family_cm_from_params(&FamilyParams::new(2.0, 1.0, 2.0, 1.0, Sign::Plus).unwrap()).unwrap();
        let s6 = 6f64.sqrt();
        assert!((nf.a - 5.0).abs() < 1e-14 && (nf.c - s6).abs() < 1e-14 && (nf.c_prime + s6).abs() < 1e-14);

        let nf =
            family_cm_from_params(&FamilyParams::new(2.0, 1.0, -1.0 / 3.0, 4.0 / 3.0, Sign::Plus).unwrap()).unwrap();
        assert!((nf.a - 2.0).abs() < 1e-14 && (nf.c - 1.0).abs() < 1e-14 && (nf.c_prime - 1.0).abs() < 1e-14);

        let nf = family_cm_from_params(&FamilyParams::new(2.0, 2.0, 1.0, 1.0, Sign::Plus).unwrap()).unwrap();
        assert!((nf.a - 2.0 * 2.5f64.sqrt()).abs() < 1e-14);
        assert!((nf.a - 3.162278).abs() < 1e-6);
        assert!((nf.c * nf.c_prime + 3.0).abs() < 1e-13);
        // c^2 = 3 sqrt(2.5)/2, c'^2 = 6/sqrt(2.5)
        assert!((nf.c - (1.5 * 2.5f64.sqrt()).sqrt()).abs() < 1e-14);
        assert!((nf.c_prime + (6.0 / 2.5f64.sqrt()).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn forward_rejects_bad_params() {
        assert!(FamilyParams::new(2.0, 3.0, 1.0, 0.0, Sign::Plus).is_err());
        assert!(FamilyParams::new(2.0, 1.0, 0.5, 0.1, Sign::Plus).is_err());
    }

    #[test]
    fn eta_examples() {
        assert!((eta_from_a(5.0, 1.0, 2.0, 2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(eta_from_a(3.0, 1.0, 1.0, 3.0).unwrap().abs() < 1e-14);
        assert!((eta_from_a(2.0, 1.0, -1.0 / 3.0, 2.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert!(eta_from_a(1.5, 1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn tau_bounds_examples() {
        let (lo, hi) = tau_bounds(2.0, 2.0, 1.0).unwrap();
        assert!((lo + 1.0 / 3.0).abs() < 1e-14, "{lo}");
        assert!((hi - 1.0).abs() < 1e-14, "{hi}");
        assert_eq!(tau_bounds(1.0, 1.0, 1.0).unwrap(), (0.0, 0.0));
        // Endpoint limits r = b and r = 1/b coincide: (a^2 - 1)/(b^2 - 1).
        let (_, hi_b) = tau_bounds(1.5, 3.0, 3.0).unwrap();
        let (_, hi_inv) = tau_bounds(1.5, 3.0, 1.0 / 3.0).unwrap();
        assert!((hi_b - 1.25 / 8.0).abs() < 1e-14 && (hi_inv - 1.25 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn membership_examples() {
        let s6 = 6f64.sqrt();
        let fp = membership(&NormalFormCM::new(5.0, 2.0, s6, -s6)).unwrap();
        assert_eq!((fp.r, fp.sign), (1.0, Sign::Plus));
        assert!((fp.tau - 2.0).abs() < 1e-12 && (fp.eta - 1.0).abs() < 1e-12);

        let fp = membership(&NormalFormCM::new(2.0, 2.0, 1.0, 1.0)).unwrap();
        assert!((fp.r - 1.0).abs() < 1e-12);
        assert!((fp.tau + 1.0 / 3.0).abs() < 1e-12 && (fp.eta - 4.0 / 3.0).abs() < 1e-12);

        let fp = membership(&NormalFormCM::new(3.0, 2.0, 0.0, 0.0)).unwrap();
        assert_eq!((fp.tau, fp.eta), (0.0, 3.0));
    }

    #[test]
    fn membership_rejects_axis_states() {
        assert!(matches!(membership(&NormalFormCM::new(2.0, 2.0, 0.5, 0.0)), Err(Error::OutOfFamily(_))));
    }

    #[test]
    fn membership_rejects_unphysical() {
        assert!(matches!(membership(&NormalFormCM::new(2.0, 2.0, 2.0, -2.0)), Err(Error::NotBonaFide(_))));
    }

    #[test]
    fn matched_u() {
        let fp = FamilyParams::new(2.0, 1.0, 1.0, 0.5, Sign::Plus).unwrap();
        assert_eq!(fp.matched_measurement_u(), 1.0);
        let fp = FamilyParams::new(2.0, 2.0, 1.0, 0.5, Sign::Plus).unwrap();
        assert_eq!(fp.matched_measurement_u(), f64::INFINITY);
        let fp = FamilyParams::new(2.0, 0.5, 1.0, 0.5, Sign::Plus).unwrap();
        assert_eq!(fp.matched_measurement_u(), 0.0);
    }
}
