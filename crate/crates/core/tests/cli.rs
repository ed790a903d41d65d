use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdiscord")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdiscord")).args(args).env(key, val).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const WORKED: &str = "5,2,2.449489742783178,-2.449489742783178";

#[test]
fn discord_worked_example() {
    let v = json(&run(&["discord", "--normal-form", WORKED]));
    let closed = v["closed_form"]["discord"].as_f64().unwrap();
    let numeric = v["numeric"]["discord"].as_f64().unwrap();
    assert!((closed - 0.950067).abs() < 1e-6);
    assert!((numeric - closed).abs() < 1e-6);
    assert_eq!(v["numeric"]["witness"]["kind"], "heterodyne");
    assert_eq!(v["family"]["tau"].as_f64(), Some(2.0));
}

#[test]
fn discord_accepts_json_input() {
    let input = r#"{"cm": [[5,0,2.449489742783178,0],[0,5,0,-2.449489742783178],
                           [2.449489742783178,0,2,0],[0,-2.449489742783178,0,2]]}"#;
    let v = json(&run(&["discord", "--input", input]));
    assert!((v["numeric"]["discord"].as_f64().unwrap() - 0.950067).abs() < 1e-6);
}

#[test]
fn discord_outside_family_has_no_closed_form() {
    let v = json(&run(&["discord", "--normal-form", "3,3,2,0"]));
    assert!(v["closed_form"].is_null());
    assert!(v["numeric"]["discord"].as_f64().unwrap() > 0.0);
}

#[test]
fn decompose_squeezed_thermal_state() {
    let v = json(&run(&["decompose", "--normal-form", "2,2,1,-1"]));
    assert!((v["tau"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-11);
    assert!((v["eta"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-11);
    assert_eq!(v["r"].as_f64(), Some(1.0));
}

#[test]
fn decompose_out_of_family_exits_3() {
    let out = run(&["decompose", "--normal-form", "3,3,2,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error kind=out_of_family"));
}

#[test]
fn classify_labels() {
    let v = json(&run(&["classify", "--tau", "0.5", "--eta", "0.6"]));
    assert_eq!(v["label"], "C_lossy");
    assert_eq!(v["omega"].as_f64(), Some(1.2));
    let v = json(&run(&["classify", "--tau", "-1", "--eta", "2"]));
    assert_eq!(v["label"], "D");
    let v = json(&run(&["classify", "--input", r#"{"tau": 0, "eta": 1}"#]));
    assert_eq!(v["label"], "A1");
}

#[test]
fn validation_errors_exit_2() {
    let out = run(&["classify", "--tau", "0.5", "--eta", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error kind=invalid_channel_params"));

    let out = run(&["discord", "--normal-form", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error kind=not_bona_fide"));

    let out = run(&["discord", "--normal-form", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error kind=parse"));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error kind=usage"));
}

#[test]
fn tolerance_from_env_and_flag() {
    // nu_- = 1 - 1e-7: rejected at the default tolerance, accepted at 1e-6.
    let c = (4.0f64 - (1.0f64 - 1e-7).powi(2)).sqrt();
    let nf = format!("2,2,{c},{}", -c);
    assert_eq!(run(&["decompose", "--normal-form", &nf]).status.code(), Some(2));
    assert!(run(&["decompose", "--normal-form", &nf, "--tolerance", "1e-6"]).status.success());
    assert!(run_env(&["decompose", "--normal-form", &nf], "GDISCORD_TOLERANCE", "1e-6").status.success());
    let out = run_env(&["decompose", "--normal-form", "2,2,1,-1"], "GDISCORD_TOLERANCE", "-1");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn heterodyne_on_epr() {
    let v = json(&run(&[
        "condition",
        "--normal-form",
        "2,2,1.7320508075688772,-1.7320508075688772",
        "--measurement",
        r#"{"u": 1, "phi": 0}"#,
        "--outcome",
        "1,0",
    ]));
    let cm = &v["cm"];
    assert!((cm[0][0].as_f64().unwrap() - 1.0).abs() < 1e-11);
    assert!((cm[1][1].as_f64().unwrap() - 1.0).abs() < 1e-11);
    assert!((v["mean"][0].as_f64().unwrap() - 3f64.sqrt() / 3.0).abs() < 1e-11);
}

#[test]
fn homodyne_on_epr_gives_squeezed_state() {
    let v = json(&run(&[
        "condition",
        "--normal-form",
        "2,2,1.7320508075688772,-1.7320508075688772",
        "--measurement",
        r#"{"homodyne": "q"}"#,
        "--outcome",
        "0,0",
    ]));
    let (x, y) = (v["cm"][0][0].as_f64().unwrap(), v["cm"][1][1].as_f64().unwrap());
    assert!((x - 0.5).abs() < 1e-11 && (y - 2.0).abs() < 1e-11, "{x} {y}");
}

#[test]
fn sample_csv_and_json() {
    let out = run(&["sample", "--a", "2", "--b", "3", "--n", "50", "--seed", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,b,c,cp,r,tau,eta,sign");
    assert_eq!(lines.len(), 51);

    let v = json(&run(&["sample", "--a", "2", "--b", "3", "--n", "50", "--seed", "5", "--format", "json"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 50);
    assert_eq!(v["seed"].as_u64(), Some(5));
}

#[test]
fn sample_writes_grid() {
    let dir = std::env::temp_dir().join(format!("gdiscord-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let grid = dir.join("grid.json");
    let csv = dir.join("out.csv");
    let out = run(&[
        "sample",
        "--a",
        "2",
        "--b",
        "2",
        "--n",
        "1000",
        "--bins",
        "10",
        "--out",
        csv.to_str().unwrap(),
        "--grid-out",
        grid.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&grid).unwrap()).unwrap();
    let total: u64 =
        g["grid"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap()).map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total, 1000);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1001);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sample_rejects_bad_slice() {
    let out = run(&["sample", "--a", "0.5", "--b", "2", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error kind=domain"));
}
