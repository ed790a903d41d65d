use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid channel parameters: tau={tau}, eta={eta} (need eta >= |1 - tau|)")]
    InvalidChannelParams { tau: f64, eta: f64 },

    #[error("not a squeezed thermal normal form: c^2 = {c_sq} exceeds ab - 1 - |a - b| = {bound}")]
    NotSqueezedThermalForm { c_sq: f64, bound: f64 },

    #[error("state is not bona fide: {0}")]
    NotBonaFide(String),

    #[error("state is outside the EPR-plus-channel family: {0}")]
    OutOfFamily(String),

    #[error("measurement seed must be a pure Gaussian state (det V0 = 1), got det = {0}")]
    MixedSeed(f64),

    #[error("invalid input: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::NumericalFailure(_) => "numerical_failure",
            Error::InvalidChannelParams { .. } => "invalid_channel_params",
            Error::NotSqueezedThermalForm { .. } => "not_squeezed_thermal_form",
            Error::NotBonaFide(_) => "not_bona_fide",
            Error::OutOfFamily(_) => "out_of_family",
            Error::MixedSeed(_) => "mixed_seed",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
