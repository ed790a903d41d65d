//! Gaussian measurements on one mode of a two-mode Gaussian state and the
//! conditional states they prepare on the other mode.
//!
//! A rank-one Gaussian measurement projects onto displaced copies of a pure
//! seed state with covariance `V0 = R(phi) diag(u, 1/u) R(phi)^T`. Heterodyne
//! is `u = 1`; the homodyne detectors are the limits `u -> 0` (rotated `q`)
//! and `u -> inf` (rotated `p`) and are handled analytically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::round_sig;
use crate::symplectic::{rotation, Mat2, TwoModeCM, Vec2, Vec4};

const SEED_DET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedKind {
    /// Finite squeezing `u > 0`; `u = 1` is heterodyne.
    Squeezed { u: f64 },
    /// `u -> 0`: the rotated `q` quadrature is measured.
    HomodyneQ,
    /// `u -> inf`: the rotated `p` quadrature is measured.
    HomodyneP,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMeasurement {
    kind: SeedKind,
    phi: f64,
}

fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(PI);
    if w >= PI {
        0.0
    } else {
        w
    }
}

impl GaussianMeasurement {
    pub fn heterodyne() -> Self {
        GaussianMeasurement { kind: SeedKind::Squeezed { u: 1.0 }, phi: 0.0 }
    }

    pub fn squeezed(u: f64, phi: f64) -> Result<Self> {
        if !(u > 0.0) || !u.is_finite() {
            return Err(Error::Domain(format!("measurement squeezing u must be in (0, inf), got {u}")));
        }
        Ok(GaussianMeasurement { kind: SeedKind::Squeezed { u }, phi: wrap_angle(phi) })
    }

    pub fn homodyne_q(phi: f64) -> Self {
        GaussianMeasurement { kind: SeedKind::HomodyneQ, phi: wrap_angle(phi) }
    }

    pub fn homodyne_p(phi: f64) -> Self {
        GaussianMeasurement { kind: SeedKind::HomodyneP, phi: wrap_angle(phi) }
    }

    /// `u = 0` and `u = +inf` select the homodyne limits.
    pub fn from_u(u: f64, phi: f64) -> Result<Self> {
        if u == 0.0 {
            Ok(Self::homodyne_q(phi))
        } else if u == f64::INFINITY {
            Ok(Self::homodyne_p(phi))
        } else {
            Self::squeezed(u, phi)
        }
    }

    /// Recovers `(u, phi)` from a seed covariance matrix. Mixed seeds
    /// (`det V0 != 1`) are rejected.
    pub fn from_seed_cm(v0: &Mat2) -> Result<Self> {
        if (v0[(0, 1)] - v0[(1, 0)]).abs() > 1e-12 * v0.amax().max(1.0) {
            return Err(Error::Domain("seed covariance matrix is not symmetric".into()));
        }
        let det = v0.determinant();
        if !(v0[(0, 0)] > 0.0) || !(det > 0.0) {
            return Err(Error::Domain("seed covariance matrix is not positive definite".into()));
        }
        if (det - 1.0).abs() > SEED_DET_TOL {
            return Err(Error::MixedSeed(det));
        }
        let tr = v0.trace();
        let u = 0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt());
        let phi = 0.5 * (2.0 * v0[(0, 1)]).atan2(v0[(0, 0)] - v0[(1, 1)]);
        Self::squeezed(u, if u == 1.0 { 0.0 } else { phi })
    }

    pub fn kind(&self) -> SeedKind {
        self.kind
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `u`, with `0` and `+inf` for the homodyne limits.
    pub fn u(&self) -> f64 {
        match self.kind {
            SeedKind::Squeezed { u } => u,
            SeedKind::HomodyneQ => 0.0,
            SeedKind::HomodyneP => f64::INFINITY,
        }
    }

    pub fn is_heterodyne(&self) -> bool {
        self.kind == SeedKind::Squeezed { u: 1.0 }
    }

    pub fn is_homodyne(&self) -> bool {
        !matches!(self.kind, SeedKind::Squeezed { .. })
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            SeedKind::Squeezed { u: 1.0 } => "heterodyne",
            SeedKind::Squeezed { .. } => "squeezed",
            SeedKind::HomodyneQ => "homodyne_q",
            SeedKind::HomodyneP => "homodyne_p",
        }
    }

    /// Seed covariance matrix; `None` for the homodyne limits.
    pub fn seed_cm(&self) -> Option<Mat2> {
        match self.kind {
            SeedKind::Squeezed { u } => {
                let r = rotation(self.phi);
                Some(r * Mat2::new(u, 0.0, 0.0, 1.0 / u) * r.transpose())
            }
            _ => None,
        }
    }

    /// Unit vector of the measured quadrature for the homodyne limits.
    pub fn homodyne_direction(&self) -> Option<Vec2> {
        let (s, c) = self.phi.sin_cos();
        match self.kind {
            SeedKind::HomodyneQ => Some(Vec2::new(c, s)),
            SeedKind::HomodyneP => Some(Vec2::new(-s, c)),
            SeedKind::Squeezed { .. } => None,
        }
    }

    /// `(B + V0)^{-1}`, or its rank-one limit `w w^T / (w^T B w)` for
    /// homodyne detection of the quadrature `w`.
    pub fn gain(&self, b: &Mat2) -> Result<Mat2> {
        match self.seed_cm() {
            Some(v0) => {
                let s = b + v0;
                let det = s.determinant();
                if !(det > 0.0) || !det.is_finite() {
                    return Err(Error::NumericalFailure(format!("B + V0 is singular (det = {det:e})")));
                }
                Ok(Mat2::new(s[(1, 1)], -s[(0, 1)], -s[(1, 0)], s[(0, 0)]) / det)
            }
            None => {
                let w = self.homodyne_direction().expect("homodyne direction");
                let var = (w.transpose() * b * w)[(0, 0)];
                if !(var > 0.0) || !var.is_finite() {
                    return Err(Error::NumericalFailure(format!(
                        "measured quadrature has non-positive variance {var:e}"
                    )));
                }
                Ok(w * w.transpose() / var)
            }
        }
    }
}

/// Single-mode Gaussian state: first moments and covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalState {
    pub mean: Vec2,
    pub cm: Mat2,
}

/// Law of the measurement outcome `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutcomeDistribution {
    /// Two-dimensional Gaussian with covariance `B + V0`.
    Gaussian { mean: Vec2, cov: Mat2 },
    /// Homodyne: only the projection `direction . k` is random, with the
    /// given mean and variance; the orthogonal component carries no data.
    Homodyne { direction: Vec2, mean: f64, variance: f64 },
}

impl OutcomeDistribution {
    /// Probability density of the outcome. For homodyne detection this is
    /// the one-dimensional density of `direction . k`.
    pub fn pdf(&self, k: &Vec2) -> f64 {
        match *self {
            OutcomeDistribution::Gaussian { mean, cov } => {
                let d = mean - k;
                let det = cov.determinant();
                let inv = cov.try_inverse().unwrap_or_else(Mat2::zeros);
                (-0.5 * (d.transpose() * inv * d)[(0, 0)]).exp() / (2.0 * PI * det.sqrt())
            }
            OutcomeDistribution::Homodyne { direction, mean, variance } => {
                let x = direction.dot(k) - mean;
                (-0.5 * x * x / variance).exp() / (2.0 * PI * variance).sqrt()
            }
        }
    }
}

fn split_mean(mean_ab: &Vec4) -> (Vec2, Vec2) {
    (Vec2::new(mean_ab[0], mean_ab[1]), Vec2::new(mean_ab[2], mean_ab[3]))
}

/// Outcome law when mode B is measured.
pub fn outcome_distribution(v: &TwoModeCM, mean_ab: &Vec4, m: &GaussianMeasurement) -> OutcomeDistribution {
    let (_, mean_b) = split_mean(mean_ab);
    let b = v.b_block();
    match m.seed_cm() {
        Some(v0) => OutcomeDistribution::Gaussian { mean: mean_b, cov: b + v0 },
        None => {
            let w = m.homodyne_direction().expect("homodyne direction");
            OutcomeDistribution::Homodyne {
                direction: w,
                mean: w.dot(&mean_b),
                variance: (w.transpose() * b * w)[(0, 0)],
            }
        }
    }
}

/// Linear map from outcome to conditional mean of A, `C (B + V0)^{-1}`.
/// The conditional mean is `x_A - map (x_B - k)`.
pub fn mean_map(v: &TwoModeCM, m: &GaussianMeasurement) -> Result<Mat2> {
    Ok(v.c_block() * m.gain(&v.b_block())?)
}

/// Conditional covariance `A - C (B + V0)^{-1} C^T`; independent of the outcome.
pub fn conditional_cm(v: &TwoModeCM, m: &GaussianMeasurement) -> Result<Mat2> {
    let c = v.c_block();
    let out = v.a_block() - c * m.gain(&v.b_block())? * c.transpose();
    Ok((out + out.transpose()) * 0.5)
}

/// State of mode A after measuring mode B with outcome `k`.
pub fn condition_on_outcome(
    v: &TwoModeCM,
    mean_ab: &Vec4,
    m: &GaussianMeasurement,
    k: &Vec2,
) -> Result<ConditionalState> {
    let (mean_a, mean_b) = split_mean(mean_ab);
    let map = mean_map(v, m)?;
    Ok(ConditionalState { mean: mean_a - map * (mean_b - k), cm: conditional_cm(v, m)? })
}

/// State of mode B after measuring mode A with outcome `k`.
pub fn conditioning_on_mode_a(
    v: &TwoModeCM,
    mean_ab: &Vec4,
    m: &GaussianMeasurement,
    k: &Vec2,
) -> Result<ConditionalState> {
    let swapped_mean = Vec4::new(mean_ab[2], mean_ab[3], mean_ab[0], mean_ab[1]);
    condition_on_outcome(&v.swap_modes(), &swapped_mean, m, k)
}

/// Squeezing `r = (1 + u mu) / (u + mu)` of the states remotely prepared by
/// measuring one arm of an EPR state of variance `mu`. `u = 0` and
/// `u = +inf` are the homodyne limits `1/mu` and `mu`.
pub fn epr_squeezing_range(mu: f64, u: f64) -> Result<f64> {
    if !(mu >= 1.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("EPR variance must be >= 1, got {mu}")));
    }
    if u == 0.0 {
        Ok(1.0 / mu)
    } else if u == f64::INFINITY {
        Ok(mu)
    } else if u > 0.0 {
        Ok((1.0 + u * mu) / (u + mu))
    } else {
        Err(Error::Domain(format!("measurement squeezing u must be in [0, inf], got {u}")))
    }
}

/// `Tr(rho1 rho2)` for single-mode Gaussian states.
pub fn gaussian_overlap(s1: &ConditionalState, s2: &ConditionalState) -> f64 {
    let sum = s1.cm + s2.cm;
    let det = sum.determinant();
    let d = s1.mean - s2.mean;
    let inv = Mat2::new(sum[(1, 1)], -sum[(0, 1)], -sum[(1, 0)], sum[(0, 0)]) / det;
    2.0 * (-0.5 * (d.transpose() * inv * d)[(0, 0)]).exp() / det.sqrt()
}

/// Real outcome `(q, p)` to complex amplitude `(q + ip) / 2`, as `(re, im)`.
pub fn outcome_to_amplitude(k: &Vec2) -> (f64, f64) {
    (k[0] / 2.0, k[1] / 2.0)
}

pub fn amplitude_to_outcome(re: f64, im: f64) -> Vec2 {
    Vec2::new(2.0 * re, 2.0 * im)
}

/// Serde view of a single-mode Gaussian state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalStateJson {
    pub mean: [f64; 2],
    pub cm: [[f64; 2]; 2],
}

impl From<&ConditionalState> for ConditionalStateJson {
    fn from(s: &ConditionalState) -> Self {
        let r = |x: f64| round_sig(x, 12);
        ConditionalStateJson {
            mean: [r(s.mean[0]), r(s.mean[1])],
            cm: [[r(s.cm[(0, 0)]), r(s.cm[(0, 1)])], [r(s.cm[(1, 0)]), r(s.cm[(1, 1)])]],
        }
    }
}
