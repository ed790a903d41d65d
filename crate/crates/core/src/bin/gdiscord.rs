use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gdiscord::channel::{classify, ChannelClassification, GaussianChannelParams};
use gdiscord::discord::discord_comparison;
use gdiscord::family::membership;
use gdiscord::io::{
    parse_channel_json, parse_measurement_json, parse_normal_form_arg, parse_state_json, parse_vec2_arg,
    parse_vec4_arg, read_json_arg, StateInput, CROSS_CHECK_TOL,
};
use gdiscord::remote_prep::{condition_on_outcome, conditioning_on_mode_a, ConditionalStateJson};
use gdiscord::sampler::{sample_family, write_csv, OccupancyGrid, CHUNK_SIZE};
use gdiscord::symplectic::{normal_form, set_validation_tolerance, validate_bona_fide, NormalFormCM, Vec2};
use gdiscord::verify::{
    acceptance_checks, criteria_1_2, criterion_3, criterion_4, criterion_5_with_band, criterion_6, criterion_7,
    criterion_8, criterion_9, invariant_checks, CheckResult,
};
use gdiscord::Error;

#[derive(Parser)]
#[command(name = "gdiscord", version, about = "Gaussian discord of two-mode Gaussian states")]
struct Cli {
    /// Bona fide validation tolerance (overrides GDISCORD_TOLERANCE; default 1e-9).
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord by numeric minimisation and, for family members, in closed form.
    Discord(StateArgs),
    /// EPR-plus-channel decomposition of a state (exit 3 if none exists).
    Decompose(StateArgs),
    /// Canonical form of an extended single-mode channel.
    Classify(ClassifyArgs),
    /// Random family members at fixed (a, b), as CSV.
    Sample(SampleArgs),
    /// Conditional state of one mode after measuring the other.
    Condition(ConditionArgs),
    /// Run the acceptance and invariant checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Normal form as "a,b,c,cp".
    #[arg(long, allow_hyphen_values = true)]
    normal_form: Option<String>,
    /// State JSON, inline or as a file path.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true, requires = "eta", conflicts_with = "input")]
    tau: Option<f64>,
    #[arg(long, requires = "tau")]
    eta: Option<f64>,
    /// {"tau": .., "eta": ..}, inline or as a file path.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; the output does not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: SampleFormat,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<String>,
    /// Also write the occupancy grid as JSON.
    #[arg(long)]
    grid_out: Option<String>,
    #[arg(long, default_value_t = 200)]
    bins: usize,
    /// Also write run metadata (redraw count, chunking) as JSON.
    #[arg(long)]
    meta_out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    /// Measure B, condition A.
    B,
    /// Measure A, condition B.
    A,
}

#[derive(Args)]
struct ConditionArgs {
    #[command(flatten)]
    state: StateArgs,
    /// {"u": .., "phi": ..}, {"homodyne": "q"|"p", "phi": ..} or {"seed_cm": ..}.
    #[arg(long)]
    measurement: String,
    /// Outcome "q,p" (default 0,0).
    #[arg(long, allow_hyphen_values = true)]
    outcome: Option<String>,
    /// First moments "qA,pA,qB,pB" (overrides the state's "mean").
    #[arg(long, allow_hyphen_values = true)]
    mean: Option<String>,
    /// Measured mode.
    #[arg(long, value_enum, default_value = "b")]
    side: Side,
}

#[derive(Args)]
struct VerifyArgs {
    /// Smaller sample sizes, for a fast smoke run.
    #[arg(long)]
    quick: bool,
}

/// Exit codes: 2 invalid input, 3 out of family, 4 numerical failure.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OutOfFamily(_) => 3,
        Error::NumericalFailure(_) => 4,
        _ => 2,
    }
}

fn report(kind: &str, msg: &str) {
    let msg = msg.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
    eprintln!("error kind={kind} msg=\"{msg}\"");
}

fn io_err(e: io::Error) -> Error {
    Error::Parse(format!("i/o: {e}"))
}

fn io_or_pipe(r: io::Result<()>) -> Result<(), Error> {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other.map_err(io_err),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    io_or_pipe(writeln!(io::stdout().lock(), "{text}"))
}

fn load_state(args: &StateArgs) -> Result<StateInput, Error> {
    let from_flag = args.normal_form.as_deref().map(parse_normal_form_arg).transpose()?;
    let from_json = args.input.as_deref().map(|s| read_json_arg(s).and_then(|t| parse_state_json(&t))).transpose()?;
    let state = match (from_flag, from_json) {
        (Some(nf), Some(mut st)) => {
            let diff = nf.embed().max_abs_diff(&st.cm);
            if diff > CROSS_CHECK_TOL {
                return Err(Error::Parse(format!("--normal-form and --input disagree by {diff:e}")));
            }
            st.normal_form = Some(nf);
            st
        }
        (Some(nf), None) => StateInput { cm: nf.embed(), mean: Default::default(), normal_form: Some(nf) },
        (None, Some(st)) => st,
        (None, None) => return Err(Error::Parse("give --normal-form or --input".into())),
    };
    validate_bona_fide(&state.cm).into_result()?;
    Ok(state)
}

fn run_discord(args: &StateArgs) -> Result<(), Error> {
    let state = load_state(args)?;
    print_json(&discord_comparison(&state.cm)?)
}

fn run_decompose(args: &StateArgs) -> Result<(), Error> {
    let state = load_state(args)?;
    let nf: NormalFormCM = match state.normal_form {
        Some(nf) => nf,
        None => normal_form(&state.cm)?,
    };
    print_json(&membership(&nf)?)
}

fn run_classify(args: &ClassifyArgs) -> Result<(), Error> {
    let params = match (args.tau, args.eta, &args.input) {
        (Some(tau), Some(eta), None) => GaussianChannelParams::new(tau, eta)?,
        (None, None, Some(input)) => parse_channel_json(&read_json_arg(input)?)?,
        _ => return Err(Error::Parse("give --tau and --eta, or --input".into())),
    };
    print_json(&ChannelClassification::from(classify(&params)?))
}

#[derive(Serialize)]
struct SampleMeta {
    a: f64,
    b: f64,
    n: usize,
    seed: u64,
    redraws: u64,
    chunk_size: usize,
}

fn create(path: &str) -> Result<BufWriter<File>, Error> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::Parse(format!("cannot create {path}: {e}")))
}

fn run_sample(args: &SampleArgs) -> Result<(), Error> {
    let draw = || sample_family(args.a, args.b, args.n, args.seed);
    let set = match args.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::NumericalFailure(e.to_string()))?
            .install(draw)?,
        None => draw()?,
    };
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let written = match args.format {
        SampleFormat::Csv => write_csv(&set, &mut out),
        SampleFormat::Json => {
            serde_json::to_writer(&mut out, &set).map_err(io::Error::from).and_then(|()| writeln!(out))
        }
    };
    io_or_pipe(written.and_then(|()| out.flush()))?;
    if let Some(path) = &args.grid_out {
        let mut f = create(path)?;
        serde_json::to_writer(&mut f, &OccupancyGrid::from_samples(&set, args.bins))
            .map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(f).map_err(io_err)?;
        f.flush().map_err(io_err)?;
    }
    if let Some(path) = &args.meta_out {
        let meta = SampleMeta {
            a: args.a,
            b: args.b,
            n: args.n,
            seed: args.seed,
            redraws: set.redraws,
            chunk_size: CHUNK_SIZE,
        };
        let mut f = create(path)?;
        serde_json::to_writer_pretty(&mut f, &meta).map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(f).map_err(io_err)?;
        f.flush().map_err(io_err)?;
    }
    Ok(())
}

fn run_condition(args: &ConditionArgs) -> Result<(), Error> {
    let state = load_state(&args.state)?;
    let m = parse_measurement_json(&read_json_arg(&args.measurement)?)?;
    let k = args.outcome.as_deref().map(parse_vec2_arg).transpose()?.unwrap_or_else(Vec2::zeros);
    let mean = args.mean.as_deref().map(parse_vec4_arg).transpose()?.unwrap_or(state.mean);
    let out = match args.side {
        Side::B => condition_on_outcome(&state.cm, &mean, &m, &k)?,
        Side::A => conditioning_on_mode_a(&state.cm, &mean, &m, &k)?,
    };
    print_json(&ConditionalStateJson::from(&out))
}

fn run_verify(args: &VerifyArgs) -> Result<bool, Error> {
    let checks: Vec<CheckResult> = if args.quick {
        let (c1, c2) = criteria_1_2(50, 42);
        let mut v = vec![
            c1,
            c2,
            criterion_3(),
            criterion_4(500, 42),
            criterion_5_with_band(50_000, 42, 1e-2),
            criterion_6(500, 42),
            criterion_7(500, 42),
            criterion_8(),
            criterion_9(20_000, 42),
        ];
        v.extend(invariant_checks(100, 7));
        v
    } else {
        let mut v = acceptance_checks();
        v.extend(invariant_checks(2000, 7));
        v
    };
    let mut out = io::stdout().lock();
    for c in &checks {
        io_or_pipe(writeln!(out, "{c}"))?;
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    io_or_pipe(writeln!(out, "{passed} of {} checks passed", checks.len()))?;
    Ok(passed == checks.len())
}

fn configure_tolerance(flag: Option<f64>) -> Result<(), Error> {
    let tol = match flag {
        Some(t) => Some(t),
        None => match std::env::var("GDISCORD_TOLERANCE") {
            Ok(s) => Some(s.trim().parse().map_err(|e| Error::Parse(format!("GDISCORD_TOLERANCE: {e}")))?),
            Err(_) => None,
        },
    };
    if let Some(t) = tol {
        set_validation_tolerance(t)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            report("usage", text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let result = configure_tolerance(cli.tolerance).and_then(|()| match &cli.command {
        Command::Discord(a) => run_discord(a).map(|()| true),
        Command::Decompose(a) => run_decompose(a).map(|()| true),
        Command::Classify(a) => run_classify(a).map(|()| true),
        Command::Sample(a) => run_sample(a).map(|()| true),
        Command::Condition(a) => run_condition(a).map(|()| true),
        Command::Verify(a) => run_verify(a),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            report(e.kind(), &e.to_string());
            ExitCode::from(exit_code(&e))
        }
    }
}
