//! `coinbet` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 checked guarantee
//! violated, 1 anything else (I/O).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use coinbet::simulation::{coverage_experiment, doob_experiment, wealth_bound_experiment};
use coinbet::{
    a_t, confidence_radius, BettingState, BoundForm, BoundParams, MartingaleModel, PriorParams,
    SimConfig,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const MANIFEST_PREFIX: &str = "# manifest: ";
const CSV_HEADER: &str = "t,g,bet,wealth,sum_g,sum_g2,radius,covered";

#[derive(Parser)]
#[command(
    name = "coinbet",
    version,
    about = "Coin-betting wealth and time-uniform confidence radii"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the confidence radius and A_t for a given sum of squares.
    Radius(RadiusArgs),
    /// Run the bettor over a file of outcomes (one per line) and emit CSV.
    Track(TrackArgs),
    /// Run a Monte Carlo experiment and write a JSON report.
    Simulate(SimulateArgs),
    /// Re-run the command recorded in an artifact's manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Clone, Copy, Debug, Serialize, Deserialize)]
struct BoundFlags {
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = std::f64::consts::E)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Form::Simple)]
    form: Form,
}

impl BoundFlags {
    fn params(&self) -> Result<BoundParams, CliError> {
        BoundParams::new(self.alpha, self.gamma, self.delta)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Form {
    Exact,
    Log,
    Simple,
}

impl From<Form> for BoundForm {
    fn from(f: Form) -> Self {
        match f {
            Form::Exact => BoundForm::ExactInverse,
            Form::Log => BoundForm::LogForm,
            Form::Simple => BoundForm::SimpleForm,
        }
    }
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct RadiusArgs {
    #[arg(long)]
    sum_g2: f64,
    #[command(flatten)]
    #[serde(flatten)]
    bound: BoundFlags,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct TrackArgs {
    /// Text file with one outcome in [-1, 1] per line.
    input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    bound: BoundFlags,
    /// Positive-half quadrature nodes.
    #[arg(long, default_value_t = 512)]
    nodes: usize,
    /// Output file (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Experiment {
    Coverage,
    Doob,
    WealthBound,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
struct SimulateArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    /// rademacher, uniform, bernoulli:<p>, signflip or zero.
    #[arg(long, default_value = "rademacher")]
    model: String,
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,
    #[arg(long, default_value_t = 2000)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    bound: BoundFlags,
    #[arg(long, default_value_t = 512)]
    nodes: usize,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    /// A JSON report or CSV track produced by this tool.
    artifact: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    command: String,
    params: Value,
    seed: Option<u64>,
    version: String,
    runtime_sec: f64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Violation(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Violation(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Radius(a) => cmd_radius(&a),
        Command::Track(a) => cmd_track(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Replay(a) => cmd_replay(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Violation(m) => eprintln!("guarantee violated: {m}"),
                CliError::Io(m) => eprintln!("i/o error: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn cmd_radius(args: &RadiusArgs) -> Result<(), CliError> {
    let p = args.bound.params()?;
    let radius = confidence_radius(args.sum_g2, &p, args.bound.form.into())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let out = json!({
        "radius": radius,
        "a_t": a_t(args.sum_g2, &p),
        "sum_g2": args.sum_g2,
        "form": BoundForm::from(args.bound.form).as_str(),
    });
    println!("{out}");
    Ok(())
}

/// Parses one outcome per line; blank lines are skipped but still counted.
fn read_outcomes(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        let g: f64 = s
            .parse()
            .map_err(|_| CliError::Usage(format!("line {}: malformed value {s:?}", i + 1)))?;
        if !(g.abs() <= 1.0) {
            return Err(CliError::Usage(format!(
                "line {}: out of range ({s} not in [-1, 1])",
                i + 1
            )));
        }
        out.push(g);
    }
    Ok(out)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_track(args: &TrackArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let p = args.bound.params()?;
    let form = BoundForm::from(args.bound.form);
    let outcomes = read_outcomes(&args.input)?;
    let mut state = BettingState::init(PriorParams { gamma: p.gamma }, args.nodes)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut rows = Vec::with_capacity(outcomes.len());
    for &g in &outcomes {
        let bet = state.bet();
        state.observe(g).expect("validated outcome");
        let radius = confidence_radius(state.sum_g2(), &p, form)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let covered = u8::from(state.sum_g().abs() <= radius);
        rows.push(format!(
            "{},{:?},{:?},{:?},{:?},{:?},{:?},{}",
            state.t(),
            g,
            bet,
            state.wealth(),
            state.sum_g(),
            state.sum_g2(),
            radius,
            covered
        ));
    }

    let manifest = Manifest {
        command: "track".into(),
        params: serde_json::to_value(args).expect("serialisable"),
        seed: None,
        version: VERSION.into(),
        runtime_sec: start.elapsed().as_secs_f64(),
    };
    let mut w = open_output(args.out.as_deref())?;
    writeln!(
        w,
        "{MANIFEST_PREFIX}{}",
        serde_json::to_string(&manifest).expect("serialisable")
    )?;
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let usage = |e: coinbet::Error| CliError::Usage(e.to_string());
    let cfg = SimConfig {
        model: args.model.parse::<MartingaleModel>().map_err(usage)?,
        horizon: args.horizon,
        reps: args.reps,
        seed: args.seed,
        bound: args.bound.params()?,
        form: args.bound.form.into(),
        node_count: args.nodes,
    };
    cfg.validate().map_err(usage)?;

    let delta = cfg.bound.delta;
    let (results, verdict) = match args.experiment {
        Experiment::Coverage => {
            let r = coverage_experiment(&cfg).map_err(usage)?;
            let ok = r.guarantee_holds(delta);
            let msg = format!(
                "violation rate {} (Wilson lower {}) exceeds delta {delta}",
                r.rate, r.wilson_lower_95
            );
            (serde_json::to_value(r), ok.then_some(()).ok_or(msg))
        }
        Experiment::Doob => {
            let r = doob_experiment(&cfg).map_err(usage)?;
            let e = r.exceedance;
            let msg = format!(
                "exceedance rate {} (Wilson lower {}) exceeds delta {delta}",
                e.rate, e.wilson_lower_95
            );
            (
                serde_json::to_value(r),
                e.guarantee_holds(delta).then_some(()).ok_or(msg),
            )
        }
        Experiment::WealthBound => {
            let r = wealth_bound_experiment(&cfg).map_err(usage)?;
            let msg = format!(
                "min slack {} at t={} rep={}",
                r.min_slack, r.argmin_t, r.argmin_rep
            );
            (
                serde_json::to_value(r),
                r.guarantee_holds().then_some(()).ok_or(msg),
            )
        }
    };

    let params = serde_json::to_value(args).expect("serialisable");
    let report = json!({
        "manifest": Manifest {
            command: "simulate".into(),
            params: params.clone(),
            seed: Some(args.seed),
            version: VERSION.into(),
            runtime_sec: start.elapsed().as_secs_f64(),
        },
        "params": params,
        "results": results.expect("serialisable"),
    });
    let mut w = open_output(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &report).expect("serialisable");
    writeln!(w)?;
    w.flush()?;
    verdict.map_err(CliError::Violation)
}

fn cmd_replay(args: &ReplayArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.artifact)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.artifact.display())))?;
    let bad = |what: &str| CliError::Usage(format!("{}: {what}", args.artifact.display()));
    let manifest: Manifest = if let Some(rest) = text.strip_prefix(MANIFEST_PREFIX) {
        let line = rest.lines().next().unwrap_or_default();
        serde_json::from_str(line).map_err(|_| bad("unreadable manifest line"))?
    } else {
        let v: Value =
            serde_json::from_str(&text).map_err(|_| bad("not a JSON report or CSV track"))?;
        serde_json::from_value(v["manifest"].clone())
            .map_err(|_| bad("missing or invalid manifest"))?
    };
    match manifest.command.as_str() {
        "track" => {
            let mut a: TrackArgs =
                serde_json::from_value(manifest.params).map_err(|_| bad("invalid track params"))?;
            a.out = args.out.clone();
            cmd_track(&a)
        }
        "simulate" => {
            let mut a: SimulateArgs = serde_json::from_value(manifest.params)
                .map_err(|_| bad("invalid simulate params"))?;
            a.out = args.out.clone();
            cmd_simulate(&a)
        }
        other => Err(bad(&format!("cannot replay command {other:?}"))),
    }
}
