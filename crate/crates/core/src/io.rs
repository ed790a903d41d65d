//! JSON input formats for states, channels and measurements.
//!
//! A state is either `{"normal_form": {"a", "b", "c", "cp"}}`,
//! `{"cm": [...]}` (16 row-major entries or a nested 4x4 array), or both,
//! in which case they must agree. An optional `"mean"` holds the four first
//! moments. Unknown keys are rejected.

use serde::Deserialize;

use crate::channel::GaussianChannelParams;
use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::remote_prep::GaussianMeasurement;
use crate::symplectic::{Mat2, NormalFormCM, Sign, TwoModeCM, Vec2, Vec4};

/// Largest entry-wise mismatch accepted between `normal_form` and `cm`.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CmEntries {
    Flat(Vec<f64>),
    Nested(Vec<Vec<f64>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    normal_form: Option<NormalFormCM>,
    cm: Option<CmEntries>,
    mean: Option<[f64; 4]>,
}

/// A parsed state: covariance matrix, first moments, and the normal form
/// when one was supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct StateInput {
    pub cm: TwoModeCM,
    pub mean: Vec4,
    pub normal_form: Option<NormalFormCM>,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn cm_from_entries(entries: CmEntries) -> Result<TwoModeCM> {
    let flat: Vec<f64> = match entries {
        CmEntries::Flat(v) => v,
        CmEntries::Nested(rows) => {
            if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                return Err(Error::Parse("\"cm\" must be a 4x4 array".into()));
            }
            rows.into_iter().flatten().collect()
        }
    };
    let arr: [f64; 16] =
        flat.try_into().map_err(|v: Vec<f64>| Error::Parse(format!("\"cm\" needs 16 entries, got {}", v.len())))?;
    TwoModeCM::from_row_major(&arr)
}

pub fn parse_state_json(text: &str) -> Result<StateInput> {
    let raw: StateJson = serde_json::from_str(text).map_err(parse_err)?;
    let mean = raw.mean.map(Vec4::from).unwrap_or_else(Vec4::zeros);
    let cm = raw.cm.map(cm_from_entries).transpose()?;
    match (raw.normal_form, cm) {
        (Some(nf), Some(cm)) => {
            let diff = nf.embed().max_abs_diff(&cm);
            if diff > CROSS_CHECK_TOL {
                return Err(Error::Parse(format!("\"normal_form\" and \"cm\" disagree by {diff:e}")));
            }
            Ok(StateInput { cm, mean, normal_form: Some(nf) })
        }
        (Some(nf), None) => Ok(StateInput { cm: nf.embed(), mean, normal_form: Some(nf) }),
        (None, Some(cm)) => Ok(StateInput { cm, mean, normal_form: None }),
        (None, None) => Err(Error::Parse("state needs \"normal_form\" or \"cm\"".into())),
    }
}

fn parse_floats(text: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{what}: {e} in {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != n {
        return Err(Error::Parse(format!("{what} needs {n} comma-separated numbers, got {}", values.len())));
    }
    Ok(values)
}

/// `"a,b,c,cp"`.
pub fn parse_normal_form_arg(text: &str) -> Result<NormalFormCM> {
    let v = parse_floats(text, 4, "normal form")?;
    Ok(NormalFormCM::new(v[0], v[1], v[2], v[3]))
}

/// `"x,y"`.
pub fn parse_vec2_arg(text: &str) -> Result<Vec2> {
    let v = parse_floats(text, 2, "2-vector")?;
    Ok(Vec2::new(v[0], v[1]))
}

/// `"x1,x2,x3,x4"`.
pub fn parse_vec4_arg(text: &str) -> Result<Vec4> {
    let v = parse_floats(text, 4, "4-vector")?;
    Ok(Vec4::new(v[0], v[1], v[2], v[3]))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelJson {
    tau: f64,
    eta: f64,
}

/// `{"tau": .., "eta": ..}`, validated.
pub fn parse_channel_json(text: &str) -> Result<GaussianChannelParams> {
    let raw: ChannelJson = serde_json::from_str(text).map_err(parse_err)?;
    GaussianChannelParams::new(raw.tau, raw.eta)
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Quadrature {
    Q,
    P,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurementJson {
    u: Option<f64>,
    homodyne: Option<Quadrature>,
    seed_cm: Option<[[f64; 2]; 2]>,
    #[serde(default)]
    phi: f64,
}

/// One of `{"u": .., "phi": ..}` (`u = 0` is homodyne on `q`),
/// `{"homodyne": "q" | "p", "phi": ..}` or `{"seed_cm": [[..], [..]]}`.
pub fn parse_measurement_json(text: &str) -> Result<GaussianMeasurement> {
    let raw: MeasurementJson = serde_json::from_str(text).map_err(parse_err)?;
    match (raw.u, raw.homodyne, raw.seed_cm) {
        (Some(u), None, None) => GaussianMeasurement::from_u(u, raw.phi),
        (None, Some(Quadrature::Q), None) => Ok(GaussianMeasurement::homodyne_q(raw.phi)),
        (None, Some(Quadrature::P), None) => Ok(GaussianMeasurement::homodyne_p(raw.phi)),
        (None, None, Some(v0)) => GaussianMeasurement::from_seed_cm(&Mat2::new(v0[0][0], v0[0][1], v0[1][0], v0[1][1])),
        _ => Err(Error::Parse("measurement needs exactly one of \"u\", \"homodyne\", \"seed_cm\"".into())),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    b: f64,
    r: f64,
    tau: f64,
    eta: f64,
    sign: i32,
    #[serde(default)]
    #[allow(dead_code)]
    xi: Option<f64>,
}

/// Accepts the `FamilyParams` JSON written by this crate; `xi` is ignored
/// and recomputed.
pub fn parse_family_json(text: &str) -> Result<FamilyParams> {
    let raw: FamilyJson = serde_json::from_str(text).map_err(parse_err)?;
    let sign = match raw.sign {
        1 => Sign::Plus,
        -1 => Sign::Minus,
        s => return Err(Error::Parse(format!("sign must be 1 or -1, got {s}"))),
    };
    FamilyParams::new(raw.b, raw.r, raw.tau, raw.eta, sign)
}

/// Reads `arg` as inline JSON when it starts with `{`, else as a file path.
pub fn read_json_arg(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_forms() {
        let s = parse_state_json(r#"{"normal_form": {"a": 5, "b": 2, "c": 1, "cp": -1}}"#).unwrap();
        assert_eq!(s.cm, NormalFormCM::new(5.0, 2.0, 1.0, -1.0).embed());
        assert_eq!(s.mean, Vec4::zeros());

        let flat = r#"{"cm": [1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1], "mean": [1,2,3,4]}"#;
        let s = parse_state_json(flat).unwrap();
        assert_eq!(s.cm, TwoModeCM::identity());
        assert_eq!(s.mean, Vec4::new(1.0, 2.0, 3.0, 4.0));

        let nested = r#"{"cm": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
                         "normal_form": {"a": 1, "b": 1, "c": 0, "cp": 0}}"#;
        assert!(parse_state_json(nested).unwrap().normal_form.is_some());
    }

    #[test]
    fn state_errors() {
        assert!(matches!(parse_state_json("{}"), Err(Error::Parse(_))));
        assert!(matches!(parse_state_json(r#"{"cm": [1, 2]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_state_json(r#"{"cm": [1], "bogus": 1}"#), Err(Error::Parse(_))));
        let clash = r#"{"cm": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
                        "normal_form": {"a": 2, "b": 1, "c": 0, "cp": 0}}"#;
        assert!(matches!(parse_state_json(clash), Err(Error::Parse(_))));
        assert!(parse_state_json("not json").is_err());
    }

    #[test]
    fn normal_form_arg() {
        let nf = parse_normal_form_arg("5,2, 2.449489743,-2.449489743").unwrap();
        assert_eq!(nf.a, 5.0);
        assert!(parse_normal_form_arg("1,2,3").is_err());
        assert!(parse_normal_form_arg("1,2,x,4").is_err());
    }

    #[test]
    fn measurements() {
        assert!(parse_measurement_json(r#"{"u": 1, "phi": 0}"#).unwrap().is_heterodyne());
        assert_eq!(parse_measurement_json(r#"{"u": 0}"#).unwrap().label(), "homodyne_q");
        assert_eq!(parse_measurement_json(r#"{"homodyne": "p", "phi": 0.3}"#).unwrap().label(), "homodyne_p");
        assert_eq!(parse_measurement_json(r#"{"seed_cm": [[2, 0], [0, 0.5]]}"#).unwrap().label(), "squeezed");
        assert!(matches!(parse_measurement_json(r#"{"seed_cm": [[2, 0], [0, 2]]}"#), Err(Error::MixedSeed(_))));
        assert!(parse_measurement_json(r#"{"u": 1, "homodyne": "q"}"#).is_err());
    }

    #[test]
    fn channel_and_family() {
        assert!(parse_channel_json(r#"{"tau": 0.5, "eta": 0.6}"#).is_ok());
        assert!(matches!(parse_channel_json(r#"{"tau": 0.5, "eta": 0.1}"#), Err(Error::InvalidChannelParams { .. })));
        let fp = parse_family_json(r#"{"b": 2, "r": 1, "tau": 2, "eta": 1, "sign": -1, "xi": 1}"#).unwrap();
        assert_eq!(fp.sign, Sign::Minus);
    }
}
