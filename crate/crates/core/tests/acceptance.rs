//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! appear in `cargo test` output.

use std::process::{Command, ExitCode};
use std::time::Instant;

use gdiscord::verify::{self, CheckResult, ACCEPTANCE_SEED, N_SAMPLES};

fn cli_sample(threads: usize) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gdiscord"))
        .args(["sample", "--a", "2", "--b", "2", "--n", &N_SAMPLES.to_string(), "--seed", &ACCEPTANCE_SEED.to_string()])
        .args(["--threads", &threads.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

/// The library-level check plus the same comparison through the binary.
fn criterion_9() -> CheckResult {
    let lib = verify::criterion_9(N_SAMPLES, ACCEPTANCE_SEED);
    let threads = std::thread::available_parallelism().map_or(4, |t| t.get()).max(4);
    let cli = (|| -> Result<(bool, String), String> {
        let first = cli_sample(threads)?;
        let second = cli_sample(threads)?;
        let single = cli_sample(1)?;
        let ok = first == second && first == single && first.len() > N_SAMPLES;
        Ok((ok, format!("CLI {} bytes, two runs and 1 vs {threads} threads identical = {ok}", first.len())))
    })();
    match cli {
        Ok((ok, detail)) => CheckResult {
            name: lib.name.clone(),
            passed: lib.passed && ok,
            detail: format!("{}; {detail}", lib.detail),
        },
        Err(e) => {
            CheckResult { name: lib.name.clone(), passed: false, detail: format!("{}; CLI failed: {e}", lib.detail) }
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (c1, c2) = verify::criteria_1_2(verify::N_DISCORD_STATES, ACCEPTANCE_SEED);
    let checks = [
        c1,
        c2,
        verify::criterion_3(),
        verify::criterion_4(verify::N_ROUND_TRIPS, ACCEPTANCE_SEED),
        verify::criterion_5(N_SAMPLES, ACCEPTANCE_SEED),
        verify::criterion_6(verify::N_RANDOM_CMS, ACCEPTANCE_SEED),
        verify::criterion_7(verify::N_RANDOM_CMS, ACCEPTANCE_SEED),
        verify::criterion_8(),
        criterion_9(),
    ];
    println!();
    for (i, c) in checks.iter().enumerate() {
        println!("acceptance {}: {c}", i + 1);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed ({:.1} s)\n",
        checks.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
