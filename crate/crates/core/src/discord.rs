//! Entropies of Gaussian states and Gaussian discord `D(A|B)`.
//!
//! All entropies are in bits. The conditional entropy after a rank-one
//! Gaussian measurement on B does not depend on the outcome, so
//! `S(A|M_B) = h(sqrt(det V_{A|k}))`.
//!
//! Two routes to the discord are offered: a closed form for states that
//! decompose as an EPR state plus a local extended channel (where coherent
//! inputs minimise the channel output entropy), and a numerical scan over
//! the squeezing `u` and orientation `phi` of the measurement seed.

use std::f64::consts::PI;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::{family_cm_from_params, membership, FamilyParams};
use crate::format::{ser_sig12, ser_sig12_opt};
use crate::optimize::golden_section_min;
use crate::remote_prep::{conditional_cm, GaussianMeasurement, SeedKind};
use crate::symplectic::{
    normal_form, symplectic_spectrum, validate_bona_fide, validation_tolerance, Mat2, NormalFormCM, TwoModeCM,
};

/// Arguments of `h` in `[1 - H_CLAMP_TOL, 1]` are treated as exactly 1.
pub const H_CLAMP_TOL: f64 = 1e-9;

/// Von Neumann entropy (bits) of a single-mode thermal state with
/// covariance `x I`:
/// `h(x) = (x+1)/2 log2((x+1)/2) - (x-1)/2 log2((x-1)/2)`.
pub fn h(x: f64) -> Result<f64> {
    if x.is_nan() || x < 1.0 - H_CLAMP_TOL.max(validation_tolerance()) {
        return Err(Error::Domain(format!("entropy function needs x >= 1, got {x}")));
    }
    if x <= 1.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let plus = 0.5 * (x + 1.0);
    let minus = 0.5 * (x - 1.0);
    Ok(plus * plus.log2() - minus * minus.log2())
}

/// Entropy of a single-mode Gaussian state with covariance `v`.
pub fn single_mode_entropy(v: &Mat2) -> Result<f64> {
    let det = v.determinant();
    if !(det > 0.0) {
        return Err(Error::NotBonaFide(format!("single-mode covariance has det = {det}")));
    }
    h(det.sqrt())
}

fn require_bona_fide(v: &TwoModeCM) -> Result<()> {
    validate_bona_fide(v).into_result()
}

/// `S(AB) = h(nu_-) + h(nu_+)`.
pub fn entropy_two_mode(v: &TwoModeCM) -> Result<f64> {
    require_bona_fide(v)?;
    let s = symplectic_spectrum(v)?;
    Ok(h(s.nu_minus)? + h(s.nu_plus)?)
}

/// `I(A, B) = S(A) + S(B) - S(AB)`.
pub fn mutual_information(v: &TwoModeCM) -> Result<f64> {
    Ok(single_mode_entropy(&v.a_block())? + single_mode_entropy(&v.b_block())? - entropy_two_mode(v)?)
}

/// `S(A|M_B)` for a Gaussian measurement on mode B.
pub fn conditional_entropy_measured(v: &TwoModeCM, m: &GaussianMeasurement) -> Result<f64> {
    require_bona_fide(v)?;
    conditional_entropy_unchecked(v, m)
}

fn conditional_entropy_unchecked(v: &TwoModeCM, m: &GaussianMeasurement) -> Result<f64> {
    single_mode_entropy(&conditional_cm(v, m)?)
}

/// Grid and refinement policy for [`minimize_conditional_entropy_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub log10_u_min: f64,
    pub log10_u_max: f64,
    pub n_u: usize,
    pub n_phi: usize,
    /// Golden-section stopping width, in `log10 u` and in `phi`.
    pub param_tol: f64,
    /// Maximum number of alternating `u` / `phi` refinement rounds.
    pub rounds: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { log10_u_min: -4.0, log10_u_max: 4.0, n_u: 401, n_phi: 64, param_tol: 1e-10, rounds: 4 }
    }
}

/// How far past the grid edge the `u` refinement may look before handing
/// over to the homodyne limits.
const EDGE_EXTENSION: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalEntropyMin {
    pub measurement: GaussianMeasurement,
    pub s_min: f64,
}

/// Position in the measurement family: `log10 u` (infinite for homodyne) and `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    t: f64,
    phi: f64,
}

impl Point {
    fn measurement(&self) -> GaussianMeasurement {
        if self.t == f64::NEG_INFINITY {
            GaussianMeasurement::homodyne_q(self.phi)
        } else if self.t == f64::INFINITY {
            GaussianMeasurement::homodyne_p(self.phi)
        } else {
            GaussianMeasurement::squeezed(10f64.powf(self.t), self.phi).expect("finite positive u")
        }
    }
}

pub fn minimize_conditional_entropy(v: &TwoModeCM) -> Result<ConditionalEntropyMin> {
    minimize_conditional_entropy_with(v, &ScanConfig::default())
}

/// Minimises `S(A|M_B)` over rank-one Gaussian measurements on B.
///
/// A logarithmic grid in `u` times a uniform grid in `phi` (plus the
/// homodyne limit at every `phi`) is scanned first; ties go to the smaller
/// `(u, phi)`. The best grid point is then refined by alternating
/// golden-section searches in `log10 u` and in `phi`.
pub fn minimize_conditional_entropy_with(v: &TwoModeCM, cfg: &ScanConfig) -> Result<ConditionalEntropyMin> {
    require_bona_fide(v)?;
    if cfg.n_u < 2 || cfg.n_phi < 1 {
        return Err(Error::Domain("scan grid needs n_u >= 2 and n_phi >= 1".into()));
    }
    let eval = |p: &Point| conditional_entropy_unchecked(v, &p.measurement());

    let t_step = (cfg.log10_u_max - cfg.log10_u_min) / (cfg.n_u - 1) as f64;
    let phi_step = PI / cfg.n_phi as f64;

    // Homodyne q at phi + pi/2 is homodyne p at phi, so the q limit alone
    // covers both homodyne detectors on the grid.
    let t_values =
        std::iter::once(f64::NEG_INFINITY).chain((0..cfg.n_u).map(|i| cfg.log10_u_min + t_step * i as f64 * 1.0));
    let mut best = Point { t: f64::NAN, phi: 0.0 };
    let mut best_s = f64::INFINITY;
    for t in t_values {
        for j in 0..cfg.n_phi {
            let p = Point { t, phi: phi_step * j as f64 };
            let s = eval(&p)?;
            if s < best_s {
                best_s = s;
                best = p;
            }
        }
    }

    for _ in 0..cfg.rounds {
        let before = best_s;

        // u at fixed phi.
        let phi = best.phi;
        let (lo, hi) = if best.t.is_infinite() {
            if best.t < 0.0 {
                (cfg.log10_u_min - EDGE_EXTENSION, cfg.log10_u_min + t_step)
            } else {
                (cfg.log10_u_max - t_step, cfg.log10_u_max + EDGE_EXTENSION)
            }
        } else {
            let lo = if best.t - t_step < cfg.log10_u_min { cfg.log10_u_min - EDGE_EXTENSION } else { best.t - t_step };
            let hi = if best.t + t_step > cfg.log10_u_max { cfg.log10_u_max + EDGE_EXTENSION } else { best.t + t_step };
            (lo, hi)
        };
        let (t, s) = golden_section_min(|t| eval(&Point { t, phi }), lo, hi, cfg.param_tol)?;
        if s < best_s {
            best_s = s;
            best = Point { t, phi };
        }
        for t in [f64::NEG_INFINITY, f64::INFINITY] {
            let p = Point { t, phi };
            let s = eval(&p)?;
            if s < best_s {
                best_s = s;
                best = p;
            }
        }

        // phi at fixed u.
        let t = best.t;
        let (phi, s) =
            golden_section_min(|phi| eval(&Point { t, phi }), best.phi - phi_step, best.phi + phi_step, cfg.param_tol)?;
        if s < best_s {
            best_s = s;
            best = Point { t, phi: phi.rem_euclid(PI) };
        }

        if before - best_s <= 1e-15 {
            break;
        }
    }

    Ok(ConditionalEntropyMin { measurement: best.measurement(), s_min: best_s })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscordMethod {
    ClosedForm,
    NumericScan,
}

/// Optimal measurement found by the numeric scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness(pub GaussianMeasurement);

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let m = self.0;
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("kind", m.label())?;
        // JSON has no infinity; homodyne limits are reported through `kind`.
        let u = match m.kind() {
            SeedKind::Squeezed { u } => Some(crate::format::round_sig(u, 12)),
            _ => None,
        };
        st.serialize_field("u", &u)?;
        st.serialize_field("phi", &crate::format::round_sig(m.phi(), 12))?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordReport {
    #[serde(serialize_with = "ser_sig12")]
    pub s_a: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub s_b: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub s_ab: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub i_ab: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub s_min_cond: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub classical_corr: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub discord: f64,
    pub method: DiscordMethod,
    pub witness: Option<Witness>,
}

impl DiscordReport {
    fn assemble(
        s_a: f64,
        s_b: f64,
        s_ab: f64,
        s_min_cond: f64,
        method: DiscordMethod,
        witness: Option<Witness>,
    ) -> Self {
        DiscordReport {
            s_a,
            s_b,
            s_ab,
            i_ab: s_a + s_b - s_ab,
            s_min_cond,
            classical_corr: s_a - s_min_cond,
            discord: s_min_cond - (s_ab - s_b),
            method,
            witness,
        }
    }
}

/// `D(A|B) = h(b) - h(nu_-) - h(nu_+) + h(|tau| + eta)` for a family member.
pub fn gaussian_discord_closed_form(fp: &FamilyParams) -> Result<DiscordReport> {
    let nf = family_cm_from_params(fp)?;
    let v = nf.embed();
    let s_ab = entropy_two_mode(&v)?;
    let s_min = h(fp.tau.abs() + fp.eta)?;
    Ok(DiscordReport::assemble(h(nf.a)?, h(nf.b)?, s_ab, s_min, DiscordMethod::ClosedForm, None))
}

pub fn gaussian_discord_numeric(v: &TwoModeCM) -> Result<DiscordReport> {
    gaussian_discord_numeric_with(v, &ScanConfig::default())
}

pub fn gaussian_discord_numeric_with(v: &TwoModeCM, cfg: &ScanConfig) -> Result<DiscordReport> {
    let min = minimize_conditional_entropy_with(v, cfg)?;
    let s_a = single_mode_entropy(&v.a_block())?;
    let s_b = single_mode_entropy(&v.b_block())?;
    let s_ab = entropy_two_mode(v)?;
    Ok(DiscordReport::assemble(s_a, s_b, s_ab, min.s_min, DiscordMethod::NumericScan, Some(Witness(min.measurement))))
}

/// Both discord routes side by side. `closed_form` is `None` when the
/// state is not recognised as a family member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscordComparison {
    pub closed_form: Option<DiscordReport>,
    pub numeric: DiscordReport,
    pub family: Option<FamilyParams>,
    #[serde(serialize_with = "ser_sig12_opt")]
    pub agreement_delta: Option<f64>,
}

/// Numeric discord of `v`, plus the closed form when `v` (reduced to normal
/// form) is a family member.
pub fn discord_comparison(v: &TwoModeCM) -> Result<DiscordComparison> {
    let numeric = gaussian_discord_numeric(v)?;
    let nf = match NormalFormCM::from_cm(v, 0.0) {
        Some(nf) => nf,
        None => normal_form(v)?,
    };
    let family = match membership(&nf) {
        Ok(fp) => Some(fp),
        Err(Error::OutOfFamily(_)) => None,
        Err(e) => return Err(e),
    };
    let closed_form = family.as_ref().map(gaussian_discord_closed_form).transpose()?;
    let agreement_delta = closed_form.as_ref().map(|c| (c.discord - numeric.discord).abs());
    Ok(DiscordComparison { closed_form, numeric, family, agreement_delta })
}
