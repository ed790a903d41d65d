//! Single-mode Gaussian channels in canonical form, including the extended
//! channel with transmissivity of either sign.
//!
//! A channel acts on a covariance matrix as `V -> K V K^T + N`. The extended
//! channel is parametrised by `(tau, eta)` with `eta >= |1 - tau|`, and has
//! `K = sqrt|tau| diag(1, sign(tau))`, `N = eta I`.

use serde::{Deserialize, Serialize};

use crate::discord::h;
use crate::error::{Error, Result};
use crate::format::ser_sig12_opt;
use crate::symplectic::{Mat2, Mat4, TwoModeCM};

/// Slack accepted on the quantum-limited boundary `eta = |1 - tau|`.
pub const CHANNEL_BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianChannelParams {
    pub tau: f64,
    pub eta: f64,
}

impl GaussianChannelParams {
    pub fn new(tau: f64, eta: f64) -> Result<Self> {
        let p = GaussianChannelParams { tau, eta };
        p.check()?;
        Ok(p)
    }

    /// Pure-loss / quantum-limited channel with `eta = |1 - tau|`.
    pub fn quantum_limited(tau: f64) -> Self {
        GaussianChannelParams { tau, eta: (1.0 - tau).abs() }
    }

    pub fn check(&self) -> Result<()> {
        if !self.tau.is_finite() || !self.eta.is_finite() || self.eta < (1.0 - self.tau).abs() - CHANNEL_BOUNDARY_TOL {
            return Err(Error::InvalidChannelParams { tau: self.tau, eta: self.eta });
        }
        Ok(())
    }

    pub fn k_matrix(&self) -> Mat2 {
        let s = self.tau.abs().sqrt();
        let sign = if self.tau < 0.0 { -1.0 } else { 1.0 };
        Mat2::new(s, 0.0, 0.0, sign * s)
    }

    pub fn n_matrix(&self) -> Mat2 {
        Mat2::identity() * self.eta
    }

    /// Single-mode action `V -> K V K^T + N`.
    pub fn apply_single(&self, v: &Mat2) -> Mat2 {
        let k = self.k_matrix();
        k * v * k.transpose() + self.n_matrix()
    }
}

/// Canonical form of a single-mode Gaussian channel. `omega` is the thermal
/// variance `2n + 1` of the environment where it is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CanonicalFormLabel {
    A1 { omega: f64 },
    A2 { n_bar: f64 },
    B1,
    B2Identity,
    B2Additive,
    CLossy { omega: f64 },
    CAmplifier { omega: f64 },
    D { omega: f64 },
}

impl CanonicalFormLabel {
    pub fn name(&self) -> &'static str {
        match self {
            CanonicalFormLabel::A1 { .. } => "A1",
            CanonicalFormLabel::A2 { .. } => "A2",
            CanonicalFormLabel::B1 => "B1",
            CanonicalFormLabel::B2Identity => "B2_identity",
            CanonicalFormLabel::B2Additive => "B2_additive",
            CanonicalFormLabel::CLossy { .. } => "C_lossy",
            CanonicalFormLabel::CAmplifier { .. } => "C_amplifier",
            CanonicalFormLabel::D { .. } => "D",
        }
    }

    pub fn omega(&self) -> Option<f64> {
        match *self {
            CanonicalFormLabel::A1 { omega }
            | CanonicalFormLabel::CLossy { omega }
            | CanonicalFormLabel::CAmplifier { omega }
            | CanonicalFormLabel::D { omega } => Some(omega),
            CanonicalFormLabel::A2 { n_bar } => Some(2.0 * n_bar + 1.0),
            _ => None,
        }
    }

    pub fn n_bar(&self) -> Option<f64> {
        self.omega().map(|w| (w - 1.0) / 2.0)
    }
}

/// Serialisable view of a classification result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelClassification {
    pub label: String,
    #[serde(serialize_with = "ser_sig12_opt")]
    pub omega: Option<f64>,
    #[serde(serialize_with = "ser_sig12_opt")]
    pub n_bar: Option<f64>,
}

impl From<CanonicalFormLabel> for ChannelClassification {
    fn from(l: CanonicalFormLabel) -> Self {
        ChannelClassification { label: l.name().to_string(), omega: l.omega(), n_bar: l.n_bar() }
    }
}

pub fn classify(params: &GaussianChannelParams) -> Result<CanonicalFormLabel> {
    params.check()?;
    let GaussianChannelParams { tau, eta } = *params;
    Ok(if tau == 0.0 {
        CanonicalFormLabel::A1 { omega: eta }
    } else if tau < 0.0 {
        CanonicalFormLabel::D { omega: eta / (1.0 - tau) }
    } else if tau < 1.0 {
        CanonicalFormLabel::CLossy { omega: eta / (1.0 - tau) }
    } else if tau == 1.0 {
        if eta == 0.0 {
            CanonicalFormLabel::B2Identity
        } else {
            CanonicalFormLabel::B2Additive
        }
    } else {
        CanonicalFormLabel::CAmplifier { omega: eta / (tau - 1.0) }
    })
}

/// Channel matrices `(K, N)` of the phase-sensitive forms A2 and B1.
pub fn pathological_form_matrices(label: &CanonicalFormLabel) -> Result<(Mat2, Mat2)> {
    match *label {
        CanonicalFormLabel::A2 { n_bar } => {
            if !(n_bar >= 0.0) {
                return Err(Error::Domain(format!("thermal photon number must be >= 0, got {n_bar}")));
            }
            Ok((Mat2::new(1.0, 0.0, 0.0, 0.0), Mat2::identity() * (2.0 * n_bar + 1.0)))
        }
        CanonicalFormLabel::B1 => Ok((Mat2::identity(), Mat2::new(0.0, 0.0, 0.0, 1.0))),
        other => Err(Error::Domain(format!("{} is not a pathological canonical form", other.name()))),
    }
}

/// `V -> (K ⊕ I) V (K^T ⊕ I) + (N ⊕ 0)` for arbitrary channel matrices.
pub fn apply_matrices_to_mode_a(k: &Mat2, n: &Mat2, v: &TwoModeCM) -> TwoModeCM {
    let mut kk = Mat4::identity();
    kk.fixed_view_mut::<2, 2>(0, 0).copy_from(k);
    let out = kk * v.matrix() * kk.transpose();
    let mut out = out;
    let noise = out.fixed_view::<2, 2>(0, 0) + n;
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(&noise);
    TwoModeCM::from_blocks(
        &out.fixed_view::<2, 2>(0, 0).into_owned(),
        &out.fixed_view::<2, 2>(2, 2).into_owned(),
        &out.fixed_view::<2, 2>(0, 2).into_owned(),
    )
}

/// Applies the extended channel to mode A, leaving mode B untouched.
pub fn apply_to_mode_a(params: &GaussianChannelParams, v: &TwoModeCM) -> Result<TwoModeCM> {
    params.check()?;
    Ok(apply_matrices_to_mode_a(&params.k_matrix(), &params.n_matrix(), v))
}

/// Minimum output entropy in bits, reached by coherent input states:
/// `h(|tau| + eta)`.
pub fn min_output_entropy(params: &GaussianChannelParams) -> Result<f64> {
    params.check()?;
    h(params.tau.abs() + params.eta)
}
