//! Two-mode covariance matrices, their symplectic spectra and the standard
//! states and symplectic matrices used throughout the crate.
//!
//! Conventions: quadratures are ordered `(q_A, p_A, q_B, p_B)` and the vacuum
//! has covariance matrix `I` (thermal variance `2n + 1`).

use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<f64>;
pub type Mat4 = Matrix4<f64>;
pub type Vec2 = Vector2<f64>;
pub type Vec4 = Vector4<f64>;

/// Default tolerance on the smallest symplectic eigenvalue.
pub const BONA_FIDE_TOL: f64 = 1e-9;

const SYMMETRY_REL_TOL: f64 = 1e-12;

/// Sign of an EPR correlation block, `C = sign * diag(1, -1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// `Plus` for non-negative input (including `+0.0` and `-0.0`).
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Symplectic form of a single mode.
pub fn omega2() -> Mat2 {
    Mat2::new(0.0, 1.0, -1.0, 0.0)
}

/// Symplectic form of two modes, `Omega ⊕ Omega`.
pub fn omega4() -> Mat4 {
    direct_sum(&omega2(), &omega2())
}

pub fn direct_sum(x: &Mat2, y: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(x);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(y);
    m
}

/// Phase rotation `R(phi)`.
pub fn rotation(phi: f64) -> Mat2 {
    let (s, c) = phi.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// `Z = diag(1, -1)`.
pub fn pauli_z() -> Mat2 {
    Mat2::new(1.0, 0.0, 0.0, -1.0)
}

/// Single-mode squeezer `S(r) = diag(sqrt(r), 1/sqrt(r))`.
pub fn squeezer_matrix(r: f64) -> Result<Mat2> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("squeezing factor must be positive, got {r}")));
    }
    let s = r.sqrt();
    Ok(Mat2::new(s, 0.0, 0.0, 1.0 / s))
}

/// Beam splitter with transmissivity `cos^2 theta`.
pub fn beam_splitter(theta: f64) -> Mat4 {
    let (s, c) = theta.sin_cos();
    let mut m = Mat4::identity() * c;
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(Mat2::identity() * s));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(Mat2::identity() * -s));
    m
}

/// Two-mode squeezer with squeezing parameter `s`; maps vacuum to the EPR
/// state with `b = cosh 2s`.
pub fn two_mode_squeezer(s: f64) -> Mat4 {
    let (ch, sh) = (s.cosh(), s.sinh());
    let mut m = Mat4::identity() * ch;
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(pauli_z() * sh));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(pauli_z() * sh));
    m
}

/// Covariance matrix of a two-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCM(Mat4);

impl TwoModeCM {
    /// Wraps a 4x4 matrix, rejecting it unless it is symmetric to 1e-12
    /// relative to its largest entry. The stored matrix is exactly symmetric.
    pub fn new(m: Mat4) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("covariance matrix has non-finite entries".into()));
        }
        let scale = m.amax().max(1.0);
        let asym = (m - m.transpose()).amax();
        if asym > SYMMETRY_REL_TOL * scale {
            return Err(Error::Domain(format!("covariance matrix is not symmetric (max asymmetry {asym:e})")));
        }
        Ok(TwoModeCM((m + m.transpose()) * 0.5))
    }

    /// Builds `[[A, C], [C^T, B]]`. `A` and `B` are symmetrised.
    pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2) -> Self {
        let mut m = Mat4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&((a + a.transpose()) * 0.5));
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&((b + b.transpose()) * 0.5));
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
        TwoModeCM(m)
    }

    pub fn from_row_major(entries: &[f64; 16]) -> Result<Self> {
        TwoModeCM::new(Mat4::from_row_slice(entries))
    }

    pub fn identity() -> Self {
        TwoModeCM(Mat4::identity())
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn to_row_major(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                out[4 * i + j] = self.0[(i, j)];
            }
        }
        out
    }

    pub fn a_block(&self) -> Mat2 {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn b_block(&self) -> Mat2 {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Off-diagonal block `C` (rows of mode A, columns of mode B).
    pub fn c_block(&self) -> Mat2 {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// `S V S^T` for an arbitrary 4x4 `S`.
    pub fn conjugate(&self, s: &Mat4) -> TwoModeCM {
        let m = s * self.0 * s.transpose();
        TwoModeCM((m + m.transpose()) * 0.5)
    }

    /// Applies local symplectics `S_A ⊕ S_B`.
    pub fn local(&self, s_a: &Mat2, s_b: &Mat2) -> TwoModeCM {
        self.conjugate(&direct_sum(s_a, s_b))
    }

    /// Exchanges the roles of mode A and mode B.
    pub fn swap_modes(&self) -> TwoModeCM {
        TwoModeCM::from_blocks(&self.b_block(), &self.a_block(), &self.c_block().transpose())
    }

    pub fn max_abs_diff(&self, other: &TwoModeCM) -> f64 {
        (self.0 - other.0).amax()
    }
}

/// Normal-form parameters `V(a, b, c, c')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormCM {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(rename = "cp")]
    pub c_prime: f64,
}

impl NormalFormCM {
    pub fn new(a: f64, b: f64, c: f64, c_prime: f64) -> Self {
        NormalFormCM { a, b, c, c_prime }
    }

    /// Two-mode squeezed thermal normal form `V(a, b, c, -c)`.
    pub fn squeezed_thermal(a: f64, b: f64, c: f64) -> Self {
        NormalFormCM { a, b, c, c_prime: -c }
    }

    pub fn embed(&self) -> TwoModeCM {
        embed_normal_form(self)
    }

    /// Bona fide bound on `c^2` for the squeezed thermal subclass.
    pub fn squeezed_thermal_bound(a: f64, b: f64) -> f64 {
        a * b - 1.0 - (a - b).abs()
    }

    /// `det V = (ab - c^2)(ab - c'^2)`.
    pub fn det(&self) -> f64 {
        let ab = self.a * self.b;
        (ab - self.c * self.c) * (ab - self.c_prime * self.c_prime)
    }

    /// Recovers the parameters if `v` is already in normal form.
    pub fn from_cm(v: &TwoModeCM, tol: f64) -> Option<NormalFormCM> {
        let m = v.matrix();
        let nf = NormalFormCM::new(m[(0, 0)], m[(2, 2)], m[(0, 2)], m[(1, 3)]);
        (embed_normal_form(&nf).max_abs_diff(v) <= tol).then_some(nf)
    }
}

/// Square root of a 2x2 positive matrix with unit determinant,
/// `sqrt(M) = (M + I) / sqrt(tr M + 2)`; the result is symplectic.
fn unit_det_sqrt(m: &Mat2) -> Mat2 {
    (m + Mat2::identity()) / (m.trace() + 2.0).sqrt()
}

/// Reduces `v` to normal form by local symplectic transformations.
///
/// Returns `c >= |c'|`, `c >= 0`; other sign and ordering choices are
/// related by local rotations.
pub fn normal_form(v: &TwoModeCM) -> Result<NormalFormCM> {
    let (a_blk, b_blk) = (v.a_block(), v.b_block());
    let (det_a, det_b) = (a_blk.determinant(), b_blk.determinant());
    if !(det_a > 0.0 && a_blk[(0, 0)] > 0.0 && det_b > 0.0 && b_blk[(0, 0)] > 0.0) {
        return Err(Error::NotBonaFide("local blocks are not positive definite".into()));
    }
    let (a, b) = (det_a.sqrt(), det_b.sqrt());
    let la = unit_det_sqrt(&(a_blk / a));
    let lb = unit_det_sqrt(&(b_blk / b));
    let inv = |m: &Mat2| Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]);
    let c = inv(&la) * v.c_block() * inv(&lb).transpose();
    let svd = c.svd(false, false);
    let (s1, s2) =
        (svd.singular_values[0].max(svd.singular_values[1]), svd.singular_values[0].min(svd.singular_values[1]));
    let c_prime = if c.determinant() < 0.0 { -s2 } else { s2 };
    Ok(NormalFormCM::new(a, b, s1, c_prime))
}

pub fn embed_normal_form(nf: &NormalFormCM) -> TwoModeCM {
    let a = Mat2::identity() * nf.a;
    let b = Mat2::identity() * nf.b;
    let c = Mat2::new(nf.c, 0.0, 0.0, nf.c_prime);
    TwoModeCM::from_blocks(&a, &b, &c)
}

/// Two-mode squeezed vacuum with variance `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EprState {
    pub b: f64,
    pub sign: Sign,
}

impl EprState {
    pub fn new(b: f64, sign: Sign) -> Result<Self> {
        if !(b >= 1.0) || !b.is_finite() {
            return Err(Error::Domain(format!("EPR variance must be >= 1, got {b}")));
        }
        Ok(EprState { b, sign })
    }

    pub fn cm(&self) -> TwoModeCM {
        let corr = self.sign.value() * (self.b * self.b - 1.0).sqrt();
        embed_normal_form(&NormalFormCM::new(self.b, self.b, corr, -corr))
    }
}

/// CM of an EPR state: `A = B = bI`, `C = sign * sqrt(b^2 - 1) * diag(1, -1)`.
pub fn epr_cm(b: f64, sign: Sign) -> Result<TwoModeCM> {
    Ok(EprState::new(b, sign)?.cm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub nu_minus: f64,
    pub nu_plus: f64,
}

/// Symplectic eigenvalues from the local invariants
/// `Delta = det A + det B + 2 det C` and `det V`.
/// `(Delta, det V, Delta^2 - 4 det V)`, with the discriminant written as
/// `(det A - det B)^2 + 4 (X + (det A + det B) det C)`,
/// `X = tr(A Ω C Ω B Ω C^T Ω)`, so that it vanishes exactly for pure
/// states given in normal form.
fn spectral_invariants(v: &TwoModeCM) -> (f64, f64, f64) {
    let (a, b, c) = (v.a_block(), v.b_block(), v.c_block());
    let normal = a[(0, 1)] == 0.0
        && a[(0, 0)] == a[(1, 1)]
        && b[(0, 1)] == 0.0
        && b[(0, 0)] == b[(1, 1)]
        && c[(0, 1)] == 0.0
        && c[(1, 0)] == 0.0;
    if normal {
        let (a, b, c, cp) = (a[(0, 0)], b[(0, 0)], c[(0, 0)], c[(1, 1)]);
        let delta = a * a + b * b + 2.0 * c * cp;
        let det_v = (a * b - c * c) * (a * b - cp * cp);
        let disc = (a * a - b * b).powi(2) + 4.0 * (a * c + b * cp) * (a * cp + b * c);
        return (delta, det_v, disc);
    }
    let w = omega2();
    let (da, db, dc) = (a.determinant(), b.determinant(), c.determinant());
    let x = (a * w * c * w * b * w * c.transpose() * w).trace();
    let delta = da + db + 2.0 * dc;
    let det_v = da * db + dc * dc - x;
    let disc = (da - db).powi(2) + 4.0 * (x + (da + db) * dc);
    (delta, det_v, disc)
}

pub fn symplectic_spectrum(v: &TwoModeCM) -> Result<SymplecticSpectrum> {
    let (delta, det_v, disc) = spectral_invariants(v);
    let scale = (delta * delta).max(1.0);
    if disc < -1e-9 * scale {
        return Err(Error::NumericalFailure(format!(
            "negative spectral discriminant {disc:e} (delta = {delta}, det V = {det_v})"
        )));
    }
    let mut disc = disc;
    disc = disc.max(0.0);
    let nu_plus_sq = 0.5 * (delta + disc.sqrt());
    if !(nu_plus_sq > 0.0) {
        return Err(Error::NumericalFailure(format!(
            "non-positive symplectic invariant (delta = {delta}, det V = {det_v})"
        )));
    }
    // det V = nu_-^2 nu_+^2 avoids cancellation when nu_+ >> nu_-.
    let nu_minus_sq = det_v / nu_plus_sq;
    if nu_minus_sq < 0.0 {
        return Err(Error::NumericalFailure(format!("negative det V = {det_v}")));
    }
    Ok(SymplecticSpectrum { nu_minus: nu_minus_sq.sqrt(), nu_plus: nu_plus_sq.sqrt() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BonaFideFailure {
    NotPositiveDefinite,
    UncertaintyViolated,
    SpectrumFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BonaFideDiagnosis {
    pub bona_fide: bool,
    pub nu_minus: Option<f64>,
    pub nu_plus: Option<f64>,
    pub failure: Option<BonaFideFailure>,
}

impl BonaFideDiagnosis {
    pub fn into_result(self) -> Result<()> {
        match self.failure {
            None => Ok(()),
            Some(f) => Err(Error::NotBonaFide(format!(
                "{} (nu_minus = {})",
                match f {
                    BonaFideFailure::NotPositiveDefinite => "covariance matrix is not positive definite",
                    BonaFideFailure::UncertaintyViolated => "smallest symplectic eigenvalue below 1",
                    BonaFideFailure::SpectrumFailure => "covariance matrix is singular or corrupted",
                },
                self.nu_minus.map_or("n/a".to_string(), |n| n.to_string())
            ))),
        }
    }
}

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(BONA_FIDE_TOL.to_bits());

/// Process-wide validation tolerance used by [`validate_bona_fide`] and by
/// the entropy clamp. Defaults to [`BONA_FIDE_TOL`].
pub fn validation_tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

pub fn set_validation_tolerance(tol: f64) -> Result<()> {
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tolerance must be finite and >= 0, got {tol}")));
    }
    TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
    Ok(())
}

pub fn validate_bona_fide(v: &TwoModeCM) -> BonaFideDiagnosis {
    validate_bona_fide_with_tol(v, validation_tolerance())
}

/// Accepts iff `V > 0` and `nu_minus >= 1 - tol`. Never fails.
pub fn validate_bona_fide_with_tol(v: &TwoModeCM, tol: f64) -> BonaFideDiagnosis {
    let spectrum = symplectic_spectrum(v).ok();
    let (nu_minus, nu_plus) = match spectrum {
        Some(s) => (Some(s.nu_minus), Some(s.nu_plus)),
        None => (None, None),
    };
    let failure = if v.matrix().cholesky().is_none() || v.matrix().symmetric_eigenvalues().min() <= 0.0 {
        Some(BonaFideFailure::NotPositiveDefinite)
    } else {
        match nu_minus {
            None => Some(BonaFideFailure::SpectrumFailure),
            Some(n) if n < 1.0 - tol => Some(BonaFideFailure::UncertaintyViolated),
            Some(_) => None,
        }
    };
    BonaFideDiagnosis { bona_fide: failure.is_none(), nu_minus, nu_plus, failure }
}

/// Single-mode bona fide check, `V > 0` and `sqrt(det V) >= 1 - tol`.
pub fn single_mode_bona_fide(v: &Mat2, tol: f64) -> bool {
    v[(0, 0)] > 0.0 && v.determinant() > 0.0 && v.determinant().sqrt() >= 1.0 - tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn embed_vacuum_is_identity() {
        let v = NormalFormCM::new(1.0, 1.0, 0.0, 0.0).embed();
        assert_eq!(*v.matrix(), Mat4::identity());
    }

    #[test]
    fn embed_matches_epr_for_b2() {
        let s3 = 3f64.sqrt();
        let v = NormalFormCM::new(2.0, 2.0, s3, -s3).embed();
        assert!(v.max_abs_diff(&epr_cm(2.0, Sign::Plus).unwrap()) < 1e-15);
    }

    #[test]
    fn embed_blocks() {
        let s6 = 6f64.sqrt();
        let v = NormalFormCM::new(5.0, 2.0, s6, -s6).embed();
        assert_eq!(v.a_block(), Mat2::identity() * 5.0);
        assert_eq!(v.b_block(), Mat2::identity() * 2.0);
        assert_eq!(v.c_block(), Mat2::new(s6, 0.0, 0.0, -s6));
    }

    #[test]
    fn spectrum_of_product_state() {
        let s = symplectic_spectrum(&NormalFormCM::new(3.0, 1.5, 0.0, 0.0).embed()).unwrap();
        assert!(close(s.nu_minus, 1.5, 1e-12) && close(s.nu_plus, 3.0, 1e-12));
    }

    #[test]
    fn spectrum_of_epr_is_pure() {
        for b in [1.0, 1.3, 2.0, 10.0, 250.0] {
            for sign in [Sign::Plus, Sign::Minus] {
                let s = symplectic_spectrum(&epr_cm(b, sign).unwrap()).unwrap();
                assert!(close(s.nu_minus, 1.0, 1e-9), "b={b}: {s:?}");
                assert!(close(s.nu_plus, 1.0, 1e-9), "b={b}: {s:?}");
            }
        }
    }

    #[test]
    fn spectrum_worked_example() {
        let s6 = 6f64.sqrt();
        let s = symplectic_spectrum(&NormalFormCM::new(5.0, 2.0, s6, -s6).embed()).unwrap();
        assert!(close(s.nu_minus, 1.0, 1e-12) && close(s.nu_plus, 4.0, 1e-12), "{s:?}");
    }

    #[test]
    fn corrupted_input_is_a_numerical_failure() {
        // Symmetric, but Delta^2 < 4 det V.
        let bad = NormalFormCM::new(1.0, 1.1, 2.0, -1.9).embed();
        assert!(matches!(symplectic_spectrum(&bad), Err(Error::NumericalFailure(_))));
    }

    #[test]
    fn general_invariants_match_determinant() {
        let v = NormalFormCM::new(3.0, 2.0, 1.2, -0.7).embed();
        let rot = direct_sum(&rotation(0.3), &(rotation(-1.1) * squeezer_matrix(1.7).unwrap()));
        let w = v.conjugate(&rot);
        let (d0, det0, disc0) = spectral_invariants(&v);
        let (d1, det1, disc1) = spectral_invariants(&w);
        assert!((d0 - d1).abs() < 1e-12 && (det0 - det1).abs() < 1e-11 && (disc0 - disc1).abs() < 1e-11);
        assert!((det1 - w.det()).abs() < 1e-10);
    }

    #[test]
    fn normal_form_undoes_local_operations() {
        let nf = NormalFormCM::new(3.0, 2.0, 1.2, -0.7);
        let s_a = rotation(0.4) * squeezer_matrix(1.9).unwrap() * rotation(-0.2);
        let s_b = squeezer_matrix(0.6).unwrap() * rotation(2.1);
        let back = normal_form(&nf.embed().local(&s_a, &s_b)).unwrap();
        assert!((back.a - 3.0).abs() < 1e-12 && (back.b - 2.0).abs() < 1e-12);
        assert!((back.c - 1.2).abs() < 1e-12 && (back.c_prime + 0.7).abs() < 1e-12, "{back:?}");

        // Rotating both modes by pi/2 swaps c and c'.
        let back = normal_form(&NormalFormCM::new(2.0, 2.0, 0.5, 1.0).embed()).unwrap();
        assert!((back.c - 1.0).abs() < 1e-14 && (back.c_prime - 0.5).abs() < 1e-14);
    }

    #[test]
    fn standard_two_mode_gates_are_symplectic() {
        let w = omega4();
        for s in [beam_splitter(0.7), two_mode_squeezer(0.4)] {
            assert!((s * w * s.transpose() - w).amax() < 1e-14);
        }
        let epr = TwoModeCM::identity().conjugate(&two_mode_squeezer(0.5));
        assert!(epr.max_abs_diff(&epr_cm(1f64.cosh(), Sign::Plus).unwrap()) < 1e-14);
    }

    #[test]
    fn validation_examples() {
        assert!(validate_bona_fide(&TwoModeCM::identity()).bona_fide);

        let d = validate_bona_fide(&NormalFormCM::new(2.0, 2.0, 2.0, -2.0).embed());
        assert!(!d.bona_fide);
        assert!(d.failure.is_some());

        let s6 = 6f64.sqrt();
        let d = validate_bona_fide(&NormalFormCM::new(5.0, 2.0, s6, -s6).embed());
        assert!(d.bona_fide);
        assert!(close(d.nu_minus.unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn validation_rejects_indefinite_matrix_with_positive_det() {
        // c^2, c'^2 > ab gives det V > 0 but two negative eigenvalues.
        let d = validate_bona_fide(&NormalFormCM::new(1.0, 1.0, 3.0, 3.0).embed());
        assert_eq!(d.failure, Some(BonaFideFailure::NotPositiveDefinite));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let mut m = Mat4::identity();
        m[(0, 1)] = 0.1;
        assert!(TwoModeCM::new(m).is_err());
    }

    #[test]
    fn epr_constructor() {
        assert_eq!(*epr_cm(1.0, Sign::Plus).unwrap().matrix(), Mat4::identity());
        let v = epr_cm(2.0, Sign::Plus).unwrap();
        assert_eq!(v.a_block(), Mat2::identity() * 2.0);
        assert!((v.c_block() - pauli_z() * 3f64.sqrt()).amax() < 1e-15);
        assert!(matches!(epr_cm(0.5, Sign::Plus), Err(Error::Domain(_))));
    }

    #[test]
    fn squeezer() {
        assert_eq!(squeezer_matrix(1.0).unwrap(), Mat2::identity());
        assert_eq!(squeezer_matrix(4.0).unwrap(), Mat2::new(2.0, 0.0, 0.0, 0.5));
        let p = squeezer_matrix(2.5).unwrap() * squeezer_matrix(1.0 / 2.5).unwrap();
        assert!((p - Mat2::identity()).amax() < 1e-15);
        assert!(squeezer_matrix(0.0).is_err());
        assert!(squeezer_matrix(-1.0).is_err());
    }

    #[test]
    fn normal_form_det_identity() {
        let nf = NormalFormCM::new(3.0, 2.0, 1.2, -0.7);
        assert!((nf.embed().det() - nf.det()).abs() < 1e-12 * nf.det().abs());
    }
}
