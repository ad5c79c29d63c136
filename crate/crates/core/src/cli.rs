//! The `solitrend` command line.
//!
//! Every invocation writes its artifacts plus one `manifest.json` into the
//! output directory. `replay <manifest>` re-runs a recorded invocation and
//! checks that every artifact comes out byte-identical.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analytic::figures::{all_figures, figure, Figure};
use crate::analytic::{
    cnoidal, forced_soliton, return_time, train_predictions, train_profile,
    CnoidalParams, SolitonParam, TrainSpec, DEFAULT_BOOST,
};
use crate::fib::{table1, table2};
use crate::grid::{sample_profile, Grid1D, WaveField};
use crate::kdv::{self, Observation, Scheme, SolverConfig};
use crate::lattice::{continuum_compare, ChainConfig};
use crate::market::{
    alternate_price_projection, detect_pivots, expansion_levels, fit_soliton_train,
    load_ohlc_path, ratio_scorecard, retracement_levels, soliton_projection, swings,
    FitOptions, ProjectionReport, SolitonAnchor, Swing,
};
use crate::oscillator::{
    integrate_harmonic, integrate_nonharmonic, osc_params, recover_nonharmonic_constants,
    ProbState2, ReferenceState,
};
use crate::report::{digest_file, emit_svg, ArtifactWriter, Chart, Overlay, RunManifest};
use crate::{Error, Result};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_221_028;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "solitrend",
    version,
    about = "Forced KdV solitons, oscillator chains and soliton-template price projections"
)]
pub struct Cli {
    /// Directory receiving artifacts and the run manifest [default: solitrend-out].
    #[arg(long, global = true, env = "SOLITREND_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel fit starts (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

pub const DEFAULT_OUT: &str = "solitrend-out";

impl Cli {
    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Time-dependent runs.
    #[command(subcommand)]
    Simulate(SimulateCommand),
    /// Closed-form profiles.
    #[command(subcommand)]
    Analytic(AnalyticCommand),
    /// Fibonacci comparison tables.
    Tables,
    /// Pivots, swings and ratio projections of an OHLC file.
    Analyze(AnalyzeArgs),
    /// Soliton-train fit and m² scorecard of an OHLC file.
    Fit(FitArgs),
    /// Soliton-m² and Miner projections from explicit anchors.
    Project(ProjectArgs),
    /// SVG chart of an OHLC file or a field CSV.
    Plot(PlotArgs),
    /// Re-run a recorded invocation and compare its artifacts.
    Replay(ReplayArgs),
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Simulate(s) => format!("simulate {}", s.name()),
            Command::Analytic(a) => format!("analytic {}", a.name()),
            Command::Tables => "tables".into(),
            Command::Analyze(_) => "analyze".into(),
            Command::Fit(_) => "fit".into(),
            Command::Project(_) => "project".into(),
            Command::Plot(_) => "plot".into(),
            Command::Replay(_) => "replay".into(),
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum SimulateCommand {
    /// Evolve a soliton or train under the forced KdV equation.
    Kdv(KdvArgs),
    /// Run the oscillator chain and compare with its continuum limit.
    Chain(ChainArgs),
    /// Integrate the entropic oscillator pair.
    Oscillator(OscillatorArgs),
}

impl SimulateCommand {
    fn name(&self) -> &'static str {
        match self {
            SimulateCommand::Kdv(_) => "kdv",
            SimulateCommand::Chain(_) => "chain",
            SimulateCommand::Oscillator(_) => "oscillator",
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
pub enum AnalyticCommand {
    /// Single (optionally forced) soliton.
    Soliton(SolitonArgs),
    /// n-soliton train initial profile and its predicted emission.
    Train(TrainArgs),
    /// Cnoidal wave.
    Cnoidal(CnoidalArgs),
    /// Synthetic soliton-train charts.
    Figures(FiguresArgs),
}

impl AnalyticCommand {
    fn name(&self) -> &'static str {
        match self {
            AnalyticCommand::Soliton(_) => "soliton",
            AnalyticCommand::Train(_) => "train",
            AnalyticCommand::Cnoidal(_) => "cnoidal",
            AnalyticCommand::Figures(_) => "figures",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Zk,
    Spectral,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Zk => Scheme::ZabuskyKruskal,
            SchemeArg::Spectral => Scheme::Spectral,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Grid points.
    #[arg(long, default_value_t = 512)]
    pub grid_nx: usize,
    /// Periodic domain length.
    #[arg(long, default_value_t = 40.0)]
    pub grid_length: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<Grid1D> {
        Ok(Grid1D::new(self.grid_length, self.grid_nx)?)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KdvArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Time step; chosen from the stability bound when omitted.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Spectral)]
    pub scheme: SchemeArg,
    /// Uniform forcing C.
    #[arg(long, default_value_t = 0.0)]
    pub forcing: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Train size n of the initial `n(n+1)κ² sech²(κx)` profile.
    #[arg(long, default_value_t = 1)]
    pub train: u32,
    /// Initial crest position; a quarter of the domain when omitted.
    #[arg(long)]
    pub center: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub duration: f64,
    /// Invariant log samples over the run.
    #[arg(long, default_value_t = 100)]
    pub log_samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChainArgs {
    /// Chain sites.
    #[arg(long = "grid-nx", default_value_t = 256)]
    pub sites: usize,
    /// Velocity-Verlet step.
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    /// Spring constant k.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Quadratic force coefficient α.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Constant force C1.
    #[arg(long, default_value_t = 0.0)]
    pub c1: f64,
    /// Initial sech² strain amplitude.
    #[arg(long, default_value_t = 0.1)]
    pub amplitude: f64,
    /// Initial sech² strain width in sites.
    #[arg(long, default_value_t = 8.0)]
    pub width: f64,
    #[arg(long, default_value_t = 100.0)]
    pub duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OscillatorKindArg {
    Harmonic,
    Nonharmonic,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OscillatorArgs {
    #[arg(long, value_enum, default_value_t = OscillatorKindArg::Nonharmonic)]
    pub kind: OscillatorKindArg,
    #[arg(long, default_value_t = 0.4)]
    pub p10: f64,
    #[arg(long, default_value_t = 0.6)]
    pub p20: f64,
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    /// Initial displacement of p2 from p20.
    #[arg(long, default_value_t = 0.05)]
    pub offset: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 500.0)]
    pub duration: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolitonArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0)]
    pub forcing: f64,
    /// Crest position at t = 0; mid-domain when omitted.
    #[arg(long)]
    pub center: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub time: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 2)]
    pub train: u32,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0)]
    pub forcing: f64,
    #[arg(long)]
    pub center: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CnoidalArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Cubic roots `f1,f2,f3` (ascending).
    #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = [-1.0, 0.0, 2.0])]
    pub roots: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub forcing: f64,
    #[arg(long, default_value_t = 0.0)]
    pub time: f64,
    /// Coefficient of the `C t²` phase shift.
    #[arg(long, default_value_t = DEFAULT_BOOST)]
    pub boost: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FiguresArgs {
    /// Only this figure (2, 3, 4 or 5).
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
    pub fig: Option<u8>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    /// OHLC CSV file.
    pub input: PathBuf,
    /// Zigzag reversal threshold as a fraction.
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// OHLC CSV file.
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub pulses: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Multi-start count.
    #[arg(long, default_value_t = 24)]
    pub starts: usize,
    #[arg(long, default_value_t = 4000)]
    pub max_iters: u64,
    /// Bar index of the trend origin for time ratios.
    #[arg(long, default_value_t = 0.0)]
    pub origin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    Up,
    Down,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProjectArgs {
    /// First trend top, measured from `--base`.
    #[arg(long)]
    pub a1: f64,
    /// Bars from the trend origin to the first top.
    #[arg(long, default_value_t = 1.0)]
    pub t1: f64,
    /// Bar index of the trend origin.
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub base: f64,
    /// Largest m projected.
    #[arg(long, default_value_t = 4)]
    pub horizon: u32,
    /// Price range of the reference swing for Miner projections.
    #[arg(long)]
    pub swing_range: Option<f64>,
    /// Bar span of the reference swing.
    #[arg(long, default_value_t = 1)]
    pub swing_bars: usize,
    #[arg(long, value_enum, default_value_t = DirectionArg::Up)]
    pub direction: DirectionArg,
    /// Price the Miner projection starts from.
    #[arg(long)]
    pub anchor_price: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub anchor_index: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlotArgs {
    /// OHLC CSV or field CSV (`x,value`).
    pub input: PathBuf,
    /// Projection report(s) to overlay.
    #[arg(long)]
    pub report: Vec<PathBuf>,
    #[arg(long)]
    pub title: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

struct Session<'a> {
    writer: ArtifactWriter,
    stdout: &'a mut (dyn Write + Send),
    inputs: Vec<crate::report::FileDigest>,
    seed: Option<u64>,
}

impl Session<'_> {
    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        self.writer.write(name, content)?;
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("artifact serializes") + "\n";
        self.write(name, &text)
    }

    fn say(&mut self, line: impl AsRef<str>) {
        let _ = writeln!(self.stdout, "{}", line.as_ref());
    }

    fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(digest_file(path)?);
        Ok(())
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

/// Parses `argv` (program name first), runs it and returns the exit code:
/// 0 on success, 1 on invalid input, 2 on numerical failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let recorded = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut stdout = std::io::stdout();
    match execute(cli, recorded, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

/// Runs a parsed command, writing artifacts and the manifest under
/// `cli.out`. `argv` is recorded for replay.
pub fn execute(cli: Cli, argv: Vec<String>, stdout: &mut (dyn Write + Send)) -> Result<()> {
    if let Command::Replay(args) = &cli.command {
        return replay(&args.manifest, &cli, stdout);
    }
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| invalid(format!("cannot start {} worker threads: {e}", cli.threads)))?;
    let out = cli.out_dir();
    let writer = ArtifactWriter::new(&out)?;
    let mut session = Session {
        writer,
        stdout,
        inputs: Vec::new(),
        seed: None,
    };
    let outcome = pool.install(|| dispatch(&cli.command, &mut session));
    let mut versions = BTreeMap::new();
    versions.insert("solitrend".to_string(), env!("CARGO_PKG_VERSION").to_string());
    if let Command::Simulate(SimulateCommand::Kdv(k)) = &cli.command {
        versions.insert("scheme".to_string(), Scheme::from(k.scheme).name().to_string());
    }
    let manifest = RunManifest {
        command: cli.command.name(),
        argv,
        parameters: serde_json::to_value(&cli).expect("arguments serialize"),
        seed: session.seed,
        versions,
        inputs: session.inputs.clone(),
        outputs: session.writer.outputs().to_vec(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        status: match &outcome {
            Ok(()) => "ok".into(),
            Err(e) if e.is_numerical() => "numerical-failure".into(),
            Err(_) => "invalid-input".into(),
        },
        error: outcome.as_ref().err().map(|e| e.to_string()),
    };
    manifest.write(&out)?;
    outcome
}

fn replay(path: &Path, cli: &Cli, stdout: &mut (dyn Write + Send)) -> Result<()> {
    let original = RunManifest::read(path)?;
    if original.command == "replay" {
        return Err(invalid("a replay manifest cannot itself be replayed"));
    }
    let mut argv = vec!["solitrend".to_string()];
    argv.extend(original.argv.iter().cloned());
    let mut recorded = Cli::try_parse_from(&argv)
        .map_err(|e| invalid(format!("manifest arguments no longer parse: {e}")))?;
    // without --out the replay overwrites the manifest's own directory
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| match path.parent() {
            Some(dir) if !dir.as_os_str().is_empty() => dir.to_path_buf(),
            _ => PathBuf::from("."),
        });
    recorded.out = Some(out.clone());
    execute(recorded, original.argv.clone(), stdout)?;
    let fresh = RunManifest::read(&out.join(crate::report::MANIFEST_FILE))?;
    let mismatched: Vec<&str> = original
        .outputs
        .iter()
        .filter(|o| !fresh.outputs.contains(o))
        .map(|o| o.path.as_str())
        .collect();
    let _ = writeln!(
        stdout,
        "replayed `{}`: {}/{} artifacts identical",
        original.command,
        original.outputs.len() - mismatched.len(),
        original.outputs.len()
    );
    if mismatched.is_empty() {
        Ok(())
    } else {
        Err(invalid(format!("artifacts differ: {}", mismatched.join(", "))))
    }
}

fn dispatch(cmd: &Command, s: &mut Session) -> Result<()> {
    match cmd {
        Command::Simulate(SimulateCommand::Kdv(a)) => simulate_kdv(a, s),
        Command::Simulate(SimulateCommand::Chain(a)) => simulate_chain(a, s),
        Command::Simulate(SimulateCommand::Oscillator(a)) => simulate_oscillator(a, s),
        Command::Analytic(AnalyticCommand::Soliton(a)) => analytic_soliton(a, s),
        Command::Analytic(AnalyticCommand::Train(a)) => analytic_train(a, s),
        Command::Analytic(AnalyticCommand::Cnoidal(a)) => analytic_cnoidal(a, s),
        Command::Analytic(AnalyticCommand::Figures(a)) => analytic_figures(a, s),
        Command::Tables => tables(s),
        Command::Analyze(a) => analyze(a, s),
        Command::Fit(a) => fit(a, s),
        Command::Project(a) => project(a, s),
        Command::Plot(a) => plot(a, s),
        Command::Replay(_) => Err(invalid("nested replay")),
    }
}

fn simulate_kdv(a: &KdvArgs, s: &mut Session) -> Result<()> {
    let grid = a.grid.grid()?;
    let center = a.center.unwrap_or(0.25 * grid.length());
    let spec = TrainSpec::new(a.train, a.kappa, center, a.forcing)?;
    let field = sample_profile(|x| train_profile(&spec, x), grid, 0.0)?;
    let prediction = train_predictions(&spec);
    let peak = prediction.amplitudes.iter().copied().fold(spec.height(), f64::max);
    let scheme = a.scheme.into();
    let cfg = match a.dt {
        Some(dt) => SolverConfig::new(scheme, dt, a.forcing)?,
        None => SolverConfig::auto(scheme, &field, a.forcing, 1.2 * peak)?,
    };
    cfg.validate(&field)?;
    let (steps, _) = cfg.plan(a.duration)?;
    let every = (steps / a.log_samples.max(1)).max(1);
    s.write("initial.csv", &field.to_csv())?;
    let evolution = kdv::evolve_observed(
        &field,
        &cfg,
        a.duration,
        Observation {
            invariants_every: every,
            snapshot_every: 0,
        },
    )?;
    s.write("final.csv", &evolution.field.to_csv())?;
    s.write("invariants.csv", &evolution.invariants_csv())?;
    let first = evolution.invariants.first().map(|v| v.1);
    let last = evolution.invariants.last().map(|v| v.1);
    let mut summary = json!({
        "scheme": cfg.scheme.name(),
        "dt": evolution.dt,
        "steps": evolution.steps,
        "duration": a.duration,
        "predicted": prediction,
        "invariants_initial": first,
        "invariants_final": last,
    });
    s.say(format!(
        "{} run: {} steps of dt = {:.3e} to t = {}",
        cfg.scheme.name(),
        evolution.steps,
        evolution.dt,
        a.duration
    ));
    if let (Some(f), Some(l)) = (first, last) {
        s.say(format!(
            "invariants  I1 {:+.3e}  I2 {:+.3e}  I3 {:+.3e} (change)",
            l.i1 - f.i1,
            l.i2 - f.i2,
            l.i3 - f.i3
        ));
    }
    if a.train >= 2 {
        let report = kdv::fission(&field, &cfg, a.duration, a.train as usize)?;
        let amps: Vec<f64> = report.solitons.iter().map(|m| m.amplitude).collect();
        let speeds: Vec<f64> = report.solitons.iter().map(|m| m.speed).collect();
        s.say(format!("fission amplitudes {}", fmt_list(&amps)));
        s.say(format!(
            "predicted amplitudes {}",
            fmt_list(&prediction.amplitudes.iter().rev().copied().collect::<Vec<_>>())
        ));
        s.say(format!("measured speeds {}", fmt_list(&speeds)));
        summary["fission"] = json!({
            "amplitudes": amps,
            "speeds": speeds,
            "positions": report.solitons.iter().map(|m| m.position).collect::<Vec<_>>(),
            "window": report.window,
        });
    } else {
        let peak = evolution.field.global_peak();
        let travelled = grid.displacement(center, peak.position);
        s.say(format!(
            "crest height {:.6}, position {:.6} (moved {:.6})",
            peak.height, peak.position, travelled
        ));
        summary["crest"] = json!({ "height": peak.height, "position": peak.position });
    }
    s.json("summary.json", &summary)
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", items.join(", "))
}

fn simulate_chain(a: &ChainArgs, s: &mut Session) -> Result<()> {
    let cfg = ChainConfig::new(a.k, a.alpha, a.c1, 1.0, a.sites, a.dt)?;
    if !(a.width.is_finite() && a.width > 0.0) {
        return Err(invalid("--width must be positive"));
    }
    let mid = 0.5 * a.sites as f64;
    let strain: Vec<f64> = (0..a.sites)
        .map(|i| a.amplitude * crate::analytic::sech2((i as f64 - mid) / a.width))
        .collect();
    let cmp = continuum_compare(&strain, &cfg, a.duration)?;
    s.write("chain_strain.csv", &cmp.chain.to_csv())?;
    s.write("continuum_strain.csv", &cmp.continuum.to_csv())?;
    s.json(
        "comparison.json",
        &json!({
            "correlation": cmp.correlation,
            "tau": cmp.tau,
            "t_kdv": cmp.t_kdv,
            "epsilon": cmp.epsilon,
            "delta": if cmp.delta.is_finite() { Some(cmp.delta) } else { None },
            "linear_route": cmp.linear_route,
            "warning": cmp.warning,
        }),
    )?;
    s.say(format!(
        "chain vs {} correlation {:.5} at τ = {} (T = {:.4})",
        if cmp.linear_route { "transported profile" } else { "KdV" },
        cmp.correlation,
        cmp.tau,
        cmp.t_kdv
    ));
    if let Some(w) = &cmp.warning {
        s.say(format!("warning: {w}"));
    }
    Ok(())
}

fn simulate_oscillator(a: &OscillatorArgs, s: &mut Session) -> Result<()> {
    let r = ReferenceState::new(a.p10, a.p20, a.gamma)?;
    let init = ProbState2::new(a.p10, a.p20 + a.offset)?;
    let traj = match a.kind {
        OscillatorKindArg::Harmonic => integrate_harmonic(&r, init, a.dt, a.duration)?,
        OscillatorKindArg::Nonharmonic => integrate_nonharmonic(&r, init, a.dt, a.duration)?,
    };
    s.write("trajectory.csv", &traj.to_csv())?;
    let params = osc_params(&r);
    let recovered = match a.kind {
        OscillatorKindArg::Nonharmonic => Some(recover_nonharmonic_constants(&traj)?),
        OscillatorKindArg::Harmonic => None,
    };
    s.json(
        "summary.json",
        &json!({
            "kind": traj.kind,
            "invariant_drift": traj.invariant_drift(),
            "mean_period": traj.mean_period(),
            "params": params,
            "recovered": recovered,
        }),
    )?;
    s.say(format!(
        "{} samples, invariant drift {:.3e}, mean period {}",
        traj.points.len(),
        traj.invariant_drift(),
        traj.mean_period().map_or("-".into(), |p| format!("{p:.6}"))
    ));
    if let Some(c) = recovered {
        s.say(format!(
            "recovered α = {:.6} (expected {:.6}), C1 = {:.6} (expected {:.6})",
            c.alpha, params.alpha, c.c1, params.c1
        ));
    }
    Ok(())
}

fn analytic_soliton(a: &SolitonArgs, s: &mut Session) -> Result<()> {
    let grid = a.grid.grid()?;
    let p = SolitonParam::new(a.kappa, a.center.unwrap_or(0.5 * grid.length()), a.forcing)?;
    let field = sample_profile(|x| forced_soliton(&p, x, a.time), grid, a.time)?;
    s.write("profile.csv", &field.to_csv())?;
    let ret = if a.forcing > 0.0 { Some(return_time(&p)?) } else { None };
    s.json(
        "soliton.json",
        &json!({
            "kappa": p.kappa,
            "amplitude": p.amplitude(),
            "speed": p.speed(),
            "forcing": p.forcing,
            "peak_offset": p.peak_offset(a.time),
            "return_time": ret,
        }),
    )?;
    s.say(format!(
        "amplitude {}, speed {}, crest offset at t = {}: {}",
        p.amplitude(),
        p.speed(),
        a.time,
        p.peak_offset(a.time)
    ));
    if let Some(r) = ret {
        s.say(format!("return time {} (8κ³/C gives {})", r.model, r.printed));
    }
    Ok(())
}

fn analytic_train(a: &TrainArgs, s: &mut Session) -> Result<()> {
    let grid = a.grid.grid()?;
    let spec = TrainSpec::new(a.train, a.kappa, a.center.unwrap_or(0.25 * grid.length()), a.forcing)?;
    let field = sample_profile(|x| train_profile(&spec, x), grid, 0.0)?;
    s.write("profile.csv", &field.to_csv())?;
    let pred = train_predictions(&spec);
    s.json("train.json", &json!({ "height": spec.height(), "predicted": pred }))?;
    s.say(format!(
        "initial height {}, emits amplitudes {} with speeds {}",
        spec.height(),
        fmt_list(&pred.amplitudes),
        fmt_list(&pred.speeds)
    ));
    Ok(())
}

fn analytic_cnoidal(a: &CnoidalArgs, s: &mut Session) -> Result<()> {
    let grid = a.grid.grid()?;
    let [f1, f2, f3] = <[f64; 3]>::try_from(a.roots.as_slice())
        .map_err(|_| invalid("--roots takes exactly three values"))?;
    let p = CnoidalParams::from_roots(f1, f2, f3)?;
    let field = if a.boost == DEFAULT_BOOST {
        sample_profile(|x| cnoidal(&p, a.forcing, x, a.time), grid, a.time)?
    } else {
        sample_profile(|x| p.boosted(a.forcing, a.boost, x, a.time), grid, a.time)?
    };
    s.write("profile.csv", &field.to_csv())?;
    s.json(
        "cnoidal.json",
        &json!({ "params": p, "period": p.period(), "delta": p.delta(), "boost": a.boost }),
    )?;
    s.say(format!(
        "v = {}, a = {}, b = {}, m = {:.6}, period {:.6}",
        p.v,
        p.a,
        p.b,
        p.m,
        p.period()
    ));
    Ok(())
}

fn figure_svg(f: &Figure) -> Result<String> {
    let x: Vec<f64> = f.field.grid().points().collect();
    let chart = Chart {
        title: &f.title,
        x_label: "x",
        y_label: "u",
        x: &x,
        y: f.field.samples(),
    };
    Ok(emit_svg(&chart, None)?.0)
}

fn analytic_figures(a: &FiguresArgs, s: &mut Session) -> Result<()> {
    let figs = match a.fig {
        Some(n) => vec![figure(n)?],
        None => all_figures()?,
    };
    for f in &figs {
        let n = f.number;
        s.write(&format!("fig{n}.csv"), &f.field.to_csv())?;
        s.write(&format!("fig{n}.svg"), &figure_svg(f)?)?;
        s.json(
            &format!("fig{n}.json"),
            &json!({
                "number": n,
                "title": f.title,
                "time": f.time,
                "pulses": f.pulses,
                "crest_heights": f.crest_heights(),
            }),
        )?;
        s.say(format!("Fig. {n}: {}", f.title));
        for p in &f.pulses {
            s.say(format!("  {:<28} amplitude {:>8}  at x = {:.4}", p.label, p.amplitude, p.position));
        }
    }
    Ok(())
}

fn tables(s: &mut Session) -> Result<()> {
    for (name, t) in [("table1", table1()), ("table2", table2())] {
        s.write(&format!("{name}.csv"), &t.to_csv())?;
        let text = t.to_text();
        s.write(&format!("{name}.txt"), &text)?;
        s.say(text);
    }
    Ok(())
}

fn analyze(a: &AnalyzeArgs, s: &mut Session) -> Result<()> {
    s.input(&a.input)?;
    let series = load_ohlc_path(&a.input)?;
    let pivots = detect_pivots(&series, a.threshold)?;
    let sw = swings(&series, &pivots);
    s.json("pivots.json", &pivots)?;
    let mut csv = String::from("start_index,start_price,end_index,end_price,direction,range,bars,seconds\n");
    for w in &sw {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            w.start.index,
            w.start.price,
            w.end.index,
            w.end.price,
            if w.direction.sign() > 0.0 { "up" } else { "down" },
            w.price_range,
            w.bars,
            w.seconds
        ));
    }
    s.write("swings.csv", &csv)?;
    s.say(format!(
        "{} bars, {} pivots, {} swings at threshold {}",
        series.len(),
        pivots.len(),
        sw.len(),
        a.threshold
    ));
    let Some(last) = sw.last() else {
        s.say("no swing to project from");
        return Ok(());
    };
    let mut reports: Vec<ProjectionReport> = vec![
        retracement_levels(last).with_calendar(&series),
        expansion_levels(last).with_calendar(&series),
    ];
    if sw.len() >= 2 {
        let reference = &sw[sw.len() - 2];
        reports.push(
            alternate_price_projection(reference, last.end.price, last.end.index)?
                .with_calendar(&series),
        );
    }
    for r in &reports {
        s.say(format!(
            "{:<12} {}",
            r.method.name(),
            r.levels
                .iter()
                .map(|l| format!("{}={:.4}", l.label, l.value))
                .collect::<Vec<_>>()
                .join("  ")
        ));
        s.json(&format!("{}.json", r.method.name()), r)?;
    }
    Ok(())
}

fn fit(a: &FitArgs, s: &mut Session) -> Result<()> {
    s.input(&a.input)?;
    s.seed = Some(a.seed);
    let series = load_ohlc_path(&a.input)?;
    let opts = FitOptions {
        starts: a.starts,
        max_iters: a.max_iters,
        seed: a.seed,
    };
    let result = fit_soliton_train(&series.closes(), a.pulses, &opts)?;
    s.json("fit.json", &result)?;
    let mut model = String::from("index,close,model\n");
    for (i, c) in series.closes().iter().enumerate() {
        model.push_str(&format!("{i},{c},{}\n", result.model(i as f64)));
    }
    s.write("fit_model.csv", &model)?;
    s.say(format!(
        "fit {} pulses: rms residual {:.6}, {} after {} iterations (start {})",
        result.pulses.len(),
        result.residual_rms,
        result.status.name(),
        result.iterations,
        result.best_start
    ));
    for (m, p) in result.pulses.iter().enumerate() {
        s.say(format!(
            "  pulse {}: amplitude {:.6}, κ {:.6}, center {:.4}",
            m + 1,
            p.amplitude,
            p.kappa,
            p.center
        ));
    }
    for w in &result.warnings {
        s.say(format!("warning: {w}"));
    }
    if result.pulses.len() >= 2 {
        let card = ratio_scorecard(&result, a.origin)?;
        s.say(card.to_text());
        s.json("scorecard.json", &card)?;
    }
    let first = result.pulses[0];
    let anchor = SolitonAnchor {
        base: result.trend.at(a.origin),
        a1: first.amplitude,
        t0: a.origin,
        t1: first.center - a.origin,
    };
    if anchor.t1 > 0.0 && anchor.a1 != 0.0 {
        let mut proj = soliton_projection(&anchor, (a.pulses as u32 + 2).max(4))?.with_calendar(&series);
        proj.fit = Some(result.summary());
        s.json("projection.json", &proj)?;
    }
    Ok(())
}

fn project(a: &ProjectArgs, s: &mut Session) -> Result<()> {
    let anchor = SolitonAnchor {
        base: a.base,
        a1: a.a1,
        t0: a.t0,
        t1: a.t1,
    };
    let sol = soliton_projection(&anchor, a.horizon)?;
    s.say(format!(
        "soliton-m2  tops {}  times {}",
        fmt_list(&sol.level_values()),
        fmt_list(&sol.time_values())
    ));
    s.json("soliton-m2.json", &sol)?;
    if let Some(range) = a.swing_range {
        let start = 100.0 * range.abs().max(1.0);
        let end = match a.direction {
            DirectionArg::Up => start + range,
            DirectionArg::Down => start - range,
        };
        let swing = Swing::between((0, start), (a.swing_bars, end))?;
        let anchor_price = a.anchor_price.unwrap_or(end);
        let mut app = alternate_price_projection(&swing, anchor_price, a.anchor_index)?;
        app.anchors.clear();
        app.anchors.push(crate::market::Anchor {
            label: "projection anchor".into(),
            index: a.anchor_index as f64,
            price: anchor_price,
            timestamp: None,
        });
        s.say(format!(
            "app         levels {}  times {}",
            fmt_list(&app.level_values()),
            fmt_list(&app.time_values())
        ));
        s.json("app.json", &app)?;
    }
    Ok(())
}

fn plot(a: &PlotArgs, s: &mut Session) -> Result<()> {
    s.input(&a.input)?;
    let text = std::fs::read_to_string(&a.input).map_err(|source| Error::Io {
        path: a.input.display().to_string(),
        source,
    })?;
    let is_ohlc = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.trim_start().starts_with("timestamp"));
    let (x, y, x_label, y_label) = if is_ohlc {
        let series = load_ohlc_path(&a.input)?;
        let x: Vec<f64> = (0..series.len()).map(|i| i as f64).collect();
        (x, series.closes(), "bar", "close")
    } else {
        let field = WaveField::from_csv(std::io::Cursor::new(text.as_bytes()))?;
        let x: Vec<f64> = field.grid().points().collect();
        (x, field.into_samples(), "x", "u")
    };
    let mut overlay = Overlay::default();
    for path in &a.report {
        s.input(path)?;
        let body = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let report: ProjectionReport = serde_json::from_str(&body)
            .map_err(|e| invalid(format!("{} is not a projection report: {e}", path.display())))?;
        overlay = overlay.merge(Overlay::from_report(&report));
    }
    let title = a
        .title
        .clone()
        .unwrap_or_else(|| a.input.file_name().map_or("plot".into(), |n| n.to_string_lossy().into_owned()));
    let chart = Chart {
        title: &title,
        x_label,
        y_label,
        x: &x,
        y: &y,
    };
    let (svg, _) = emit_svg(&chart, Some(&overlay))?;
    s.write("plot.svg", &svg)?;
    s.say(format!(
        "plotted {} points with {} levels and {} markers",
        y.len(),
        overlay.levels.len(),
        overlay.markers.len()
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parser_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_flag_is_a_validation_error() {
        assert_eq!(run(["solitrend", "tables", "--bogus"]), 1);
        assert_eq!(run(["solitrend", "analytic", "figures", "--fig", "7"]), 1);
    }

    #[test]
    fn figures_command_writes_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let cli = Cli::try_parse_from([
            "solitrend",
            "analytic",
            "figures",
            "--fig",
            "5",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .unwrap();
        let mut out = Vec::new();
        execute(cli, vec![], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("8.82") && text.contains("9.68"));
        let m = RunManifest::read(&dir.path().join("manifest.json")).unwrap();
        assert_eq!(m.outputs.len(), 3);
        assert_eq!(m.status, "ok");
    }

    #[test]
    fn failure_still_writes_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("missing.csv");
        let cli = Cli::try_parse_from([
            "solitrend",
            "analyze",
            missing.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .unwrap();
        let err = execute(cli, vec![], &mut Vec::new()).unwrap_err();
        assert_eq!(exit_code(&err), 1);
        let m = RunManifest::read(&dir.path().join("manifest.json")).unwrap();
        assert_eq!(m.status, "invalid-input");
        assert!(m.error.is_some());
    }
}
