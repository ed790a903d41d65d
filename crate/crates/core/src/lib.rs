//! Gaussian quantum discord of two-mode Gaussian states.
//!
//! Covariance matrices use quadrature order `(q_A, p_A, q_B, p_B)` and the
//! convention where the vacuum has covariance matrix `I`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod discord;
pub mod error;
pub mod family;
pub mod format;
pub mod io;
pub mod optimize;
pub mod remote_prep;
pub mod sampler;
pub mod symplectic;
pub mod verify;

pub use channel::{classify, CanonicalFormLabel, ChannelClassification, GaussianChannelParams};
pub use discord::{gaussian_discord_closed_form, gaussian_discord_numeric, h, DiscordMethod, DiscordReport};
pub use error::{Error, Result};
pub use family::{decompose_squeezed_thermal, eta_from_a, family_cm_from_params, membership, tau_bounds, FamilyParams};
pub use remote_prep::{condition_on_outcome, ConditionalState, GaussianMeasurement};
pub use symplectic::{
    symplectic_spectrum, validate_bona_fide, BonaFideDiagnosis, NormalFormCM, Sign, SymplecticSpectrum, TwoModeCM,
};
