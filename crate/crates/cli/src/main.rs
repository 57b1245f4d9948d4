//! Command-line front end: MIS sweeps, model fitting, simulation,
//! accuracy comparison, reference trajectories and waveform generation.
//!
//! Every subcommand optionally reads a flat `key = value` config file;
//! command-line flags override config entries. Exit codes: 0 on
//! success, 1 for usage/config problems, 2 for numeric or model errors.

use clap::{Args, Parser, Subcommand};
use dyntime::delay::OutputDir;
use dyntime::fit::{self, CharacteristicDelays};
use dyntime::harness::{self, CompareConfig, WaveformConfig, WaveformMode};
use dyntime::io as dio;
use dyntime::oracle::{self, ModeOde};
use dyntime::sim::{self, BaselineDelays, BaselineKind, EngineKind, GateParamSet, ParamLibrary};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dyntime", version, about = "Dynamic timing analysis with hybrid gate delay models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a MIS delay curve over input separations, CSV output.
    Sweep(SweepArgs),
    /// Fit gate parameters to six characteristic delays.
    Fit(FitArgs),
    /// Run the event-driven simulator on a netlist.
    Simulate(SimulateArgs),
    /// Compare model accuracy against the reference solver.
    Compare(CompareArgs),
    /// Dump a reference trajectory of one mode, CSV output.
    Oracle(OracleArgs),
    /// Generate random stimulus waveforms.
    Gen(GenArgs),
}

#[derive(Args)]
struct ConfigArg {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Parameter-set file.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Name of the parameter set to sweep.
    #[arg(long)]
    set: Option<String>,
    /// Output direction: rising or falling.
    #[arg(long)]
    direction: Option<String>,
    /// Sweep start (s).
    #[arg(long)]
    from: Option<f64>,
    /// Sweep end (s), inclusive.
    #[arg(long)]
    to: Option<f64>,
    /// Grid step (s).
    #[arg(long)]
    step: Option<f64>,
    /// Output CSV path (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Random seed of the fitting stage.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the fitted set as a parameter file to this path.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    netlist: Option<PathBuf>,
    #[arg(long)]
    params: Option<PathBuf>,
    /// Stimulus trace CSV.
    #[arg(long)]
    stimuli: Option<PathBuf>,
    /// Simulation horizon (s).
    #[arg(long)]
    t_end: Option<f64>,
    /// Delay model: hybrid, oracle, pure or inertial.
    #[arg(long)]
    model: Option<String>,
    /// Reference-solver tolerance (oracle model).
    #[arg(long)]
    oracle_tol: Option<f64>,
    /// Output trace CSV (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the traces as VCD to this path.
    #[arg(long)]
    vcd: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    set: Option<String>,
    /// Mean inter-transition gap (s).
    #[arg(long)]
    mu: Option<f64>,
    /// Gap standard deviation (s).
    #[arg(long)]
    sigma: Option<f64>,
    /// Transitions per run.
    #[arg(long)]
    n: Option<usize>,
    /// Number of seeded repetitions.
    #[arg(long)]
    repetitions: Option<usize>,
    /// Base seed; run k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// local or global transition placement.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    oracle_tol: Option<f64>,
    #[arg(long)]
    fit_seed: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    set: Option<String>,
    /// Mode switch: first-rising, second-rising, first-falling,
    /// second-falling, c-hold, c-rising, c-falling.
    #[arg(long)]
    mode: Option<String>,
    /// Input separation (s) for the second-input modes.
    #[arg(long)]
    delta: Option<f64>,
    /// Initial output voltage (V).
    #[arg(long)]
    v0: Option<f64>,
    /// Integration horizon (s); the mode default when omitted.
    #[arg(long)]
    t_end: Option<f64>,
    /// Integration tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output CSV path (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Mean inter-transition gap (s).
    #[arg(long)]
    mu: Option<f64>,
    /// Gap standard deviation (s).
    #[arg(long)]
    sigma: Option<f64>,
    /// Total number of transitions.
    #[arg(long)]
    n: Option<usize>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// local or global transition placement.
    #[arg(long)]
    mode: Option<String>,
    /// Output trace CSV (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// Usage problems exit with 1, numeric/model problems with 2.
enum CliError {
    Usage(String),
    Model(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }
    fn model(msg: impl std::fmt::Display) -> CliError {
        CliError::Model(msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successful exits
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Model(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

// -- config plumbing ---------------------------------------------------------

struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    fn load(config: &ConfigArg) -> Result<Settings, CliError> {
        let map = match &config.config {
            None => BTreeMap::new(),
            Some(path) => {
                let text = read_file(path)?;
                dio::parse_config(&text)
                    .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
            }
        };
        Ok(Settings { map })
    }

    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::usage(format!("config key `{key}`: {e}"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(flag, key)?
            .ok_or_else(|| CliError::usage(format!("missing `--{}` (config key `{key}`)", key.replace('_', "-"))))
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
    }
}

fn load_params(path: &Path) -> Result<ParamLibrary, CliError> {
    let text = read_file(path)?;
    dio::parse_params(&text).map_err(|e| CliError::model(format!("{}: {e}", path.display())))
}

fn pick_set(lib: &ParamLibrary, name: &str) -> Result<GateParamSet, CliError> {
    lib.get(name)
        .cloned()
        .ok_or_else(|| CliError::usage(format!("parameter set `{name}` not found")))
}

fn parse_direction(s: &str) -> Result<OutputDir, CliError> {
    match s {
        "rising" => Ok(OutputDir::Rising),
        "falling" => Ok(OutputDir::Falling),
        other => Err(CliError::usage(format!(
            "direction must be rising|falling, got `{other}`"
        ))),
    }
}

fn parse_mode(s: &str) -> Result<WaveformMode, CliError> {
    match s {
        "local" => Ok(WaveformMode::Local),
        "global" => Ok(WaveformMode::Global),
        other => Err(CliError::usage(format!(
            "mode must be local|global, got `{other}`"
        ))),
    }
}

// -- subcommands -----------------------------------------------------------------

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let cfg = Settings::load(&args.config)?;
    let params_path: PathBuf = cfg.require(args.params, "params")?;
    let set_name: String = cfg.require(args.set, "set")?;
    let direction = parse_direction(&cfg.require(args.direction, "direction")?)?;
    let from: f64 = cfg.get(args.from, "from_s")?.unwrap_or(-20e-12);
    let to: f64 = cfg.get(args.to, "to_s")?.unwrap_or(20e-12);
    let step: f64 = cfg.get(args.step, "step_s")?.unwrap_or(0.5e-12);
    if !(step > 0.0) || to < from {
        return Err(CliError::usage("need step > 0 and to >= from"));
    }
    let lib = load_params(&params_path)?;
    let set = pick_set(&lib, &set_name)?;
    let mut grid = Vec::new();
    let n = ((to - from) / step).round() as usize;
    for k in 0..=n {
        grid.push(from + k as f64 * step);
    }
    let rows = harness::sweep_mis(&set, direction, &grid);
    let mut out = String::from("delta_s,delay_s,case_k,error\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            dio::format_f64(r.delta),
            r.delay.map(dio::format_f64).unwrap_or_default(),
            r.case_index,
            r.error.unwrap_or_default()
        );
    }
    write_output(&args.out, &out)
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let cfg = Settings::load(&args.config)?;
    if args.config.config.is_none() {
        return Err(CliError::usage("fit requires --config with the target delays"));
    }
    let key = |k: &str| -> Result<f64, CliError> { cfg.require(None, k) };
    let delays = CharacteristicDelays {
        fall_minus_inf: key("fall_minus_inf_s")?,
        fall_zero: key("fall_zero_s")?,
        fall_plus_inf: key("fall_plus_inf_s")?,
        rise_minus_inf: key("rise_minus_inf_s")?,
        rise_zero: key("rise_zero_s")?,
        rise_plus_inf: key("rise_plus_inf_s")?,
    };
    let c: f64 = key("c_farad")?;
    let v_dd: f64 = key("v_dd_volt")?;
    let delta_min: Option<f64> = cfg.get(None, "delta_min_s")?;
    let seed: u64 = cfg.get(args.seed, "seed")?.unwrap_or(1);
    let report = fit::fit_gate(&delays, c, v_dd, delta_min, seed).map_err(CliError::model)?;
    let p = report.params;

    let mut text = String::new();
    let _ = writeln!(text, "# fitted gate parameters");
    let _ = writeln!(text, "converged = {}", report.converged);
    let _ = writeln!(text, "iterations = {}", report.iterations);
    let _ = writeln!(text, "objective = {}", dio::format_f64(report.objective));
    for (name, r) in [
        "fall_minus_inf",
        "fall_zero",
        "fall_plus_inf",
        "rise_minus_inf",
        "rise_zero",
        "rise_plus_inf",
    ]
    .iter()
    .zip(report.residuals)
    {
        let _ = writeln!(text, "residual_{name} = {}", dio::format_f64(r));
    }
    let mut lib = ParamLibrary::new();
    lib.insert("fitted".into(), GateParamSet::Nor(p));
    text.push_str(&dio::write_params(&lib));
    write_output(&args.out, &text)?;
    if args.out.is_some() {
        println!(
            "fit {}: max |residual| = {:.3e}",
            if report.converged { "converged" } else { "did not converge" },
            report
                .residuals
                .iter()
                .fold(0.0f64, |m, r| m.max(r.abs()))
        );
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let cfg = Settings::load(&args.config)?;
    let netlist_path: PathBuf = cfg.require(args.netlist, "netlist")?;
    let params_path: PathBuf = cfg.require(args.params, "params")?;
    let stimuli_path: PathBuf = cfg.require(args.stimuli, "stimuli")?;
    let model: String = cfg.get(args.model, "model")?.unwrap_or_else(|| "hybrid".into());
    let oracle_tol: f64 = cfg.get(args.oracle_tol, "oracle_tol")?.unwrap_or(1e-6);

    let netlist = dio::parse_netlist(&read_file(&netlist_path)?)
        .map_err(|e| CliError::model(format!("{}: {e}", netlist_path.display())))?;
    let lib = load_params(&params_path)?;
    let stimuli = dio::parse_traces(&read_file(&stimuli_path)?)
        .map_err(|e| CliError::model(format!("{}: {e}", stimuli_path.display())))?;
    let t_end: f64 = match cfg.get(args.t_end, "t_end_s")? {
        Some(t) => t,
        None => {
            let last = stimuli
                .iter()
                .filter_map(|t| t.last_time())
                .fold(0.0, f64::max);
            last + 1e-9
        }
    };

    let traces = match model.as_str() {
        "hybrid" => sim::simulate(&netlist, &lib, &stimuli, t_end, EngineKind::Hybrid),
        "oracle" => sim::simulate(
            &netlist,
            &lib,
            &stimuli,
            t_end,
            EngineKind::Oracle { tol: oracle_tol },
        ),
        "pure" | "inertial" => {
            let kind = if model == "pure" {
                BaselineKind::Pure
            } else {
                BaselineKind::Inertial
            };
            let delays = baseline_delays_from_params(&netlist, &lib)?;
            sim::simulate_baseline(&netlist, &stimuli, kind, &delays, t_end)
        }
        other => {
            return Err(CliError::usage(format!(
                "model must be hybrid|oracle|pure|inertial, got `{other}`"
            )))
        }
    }
    .map_err(CliError::model)?;

    write_output(&args.out, &dio::write_traces(&traces))?;
    if let Some(vcd_path) = &args.vcd {
        std::fs::write(vcd_path, dio::write_vcd(&traces))
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", vcd_path.display())))?;
    }
    Ok(())
}

/// Baseline constants derived from each gate's closed-form saturated
/// delays (pure delay included, both separations averaged).
fn baseline_delays_from_params(
    netlist: &sim::Netlist,
    lib: &ParamLibrary,
) -> Result<BTreeMap<String, BaselineDelays>, CliError> {
    let mut map = BTreeMap::new();
    for g in &netlist.gates {
        let set = lib
            .get(&g.param_set)
            .ok_or_else(|| CliError::model(format!("gate {}: unknown set {}", g.id, g.param_set)))?;
        let d = match set {
            GateParamSet::Nor(p) => {
                let delays = CharacteristicDelays::from_params(p);
                BaselineDelays {
                    rise: 0.5 * (delays.rise_plus_inf + delays.rise_minus_inf),
                    fall: 0.5 * (delays.fall_plus_inf + delays.fall_minus_inf),
                }
            }
            GateParamSet::CGate(p) => {
                let rise = dyntime::delay::c_delay_rising(f64::INFINITY, 0.0, p)
                    .map_err(CliError::model)?;
                let fall = dyntime::delay::c_delay_falling(f64::INFINITY, p.v_dd, p)
                    .map_err(CliError::model)?;
                BaselineDelays {
                    rise: rise + p.delta_min,
                    fall: fall + p.delta_min,
                }
            }
        };
        map.insert(g.id.clone(), d);
    }
    Ok(map)
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    let cfg = Settings::load(&args.config)?;
    let params_path: PathBuf = cfg.require(args.params, "params")?;
    let set_name: String = cfg.require(args.set, "set")?;
    let compare = CompareConfig {
        mode: parse_mode(&cfg.get(args.mode, "mode")?.unwrap_or_else(|| "local".into()))?,
        mu: cfg.get(args.mu, "mu_s")?.unwrap_or(100e-12),
        sigma: cfg.get(args.sigma, "sigma_s")?.unwrap_or(50e-12),
        n_transitions: cfg.get(args.n, "n_transitions")?.unwrap_or(500),
        repetitions: cfg.get(args.repetitions, "repetitions")?.unwrap_or(20),
        seed: cfg.get(args.seed, "seed")?.unwrap_or(1),
        oracle_tol: cfg.get(args.oracle_tol, "oracle_tol")?.unwrap_or(1e-5),
        fit_seed: cfg.get(args.fit_seed, "fit_seed")?.unwrap_or(1),
    };
    let lib = load_params(&params_path)?;
    let set = pick_set(&lib, &set_name)?;
    let GateParamSet::Nor(reference) = set else {
        return Err(CliError::usage("compare expects a NOR parameter set"));
    };
    let report = harness::compare_nor_models(&reference, &compare).map_err(CliError::model)?;
    let d = report.reference_delays;
    println!("# reference characteristic delays (s)");
    for (name, v) in [
        ("fall_minus_inf", d.fall_minus_inf),
        ("fall_zero", d.fall_zero),
        ("fall_plus_inf", d.fall_plus_inf),
        ("rise_minus_inf", d.rise_minus_inf),
        ("rise_zero", d.rise_zero),
        ("rise_plus_inf", d.rise_plus_inf),
    ] {
        println!("{name} = {}", dio::format_f64(v));
    }
    println!("delta_min = {}", dio::format_f64(report.delta_min));
    println!("# mean deviation area vs reference, normalized to inertial");
    println!("model,mean_area_vs,normalized,mean_count_delta");
    for m in &report.models {
        println!(
            "{},{},{:.6},{:.3}",
            m.model,
            dio::format_f64(m.mean_area),
            m.normalized,
            m.mean_count_delta
        );
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    let cfg = Settings::load(&args.config)?;
    let params_path: PathBuf = cfg.require(args.params, "params")?;
    let set_name: String = cfg.require(args.set, "set")?;
    let mode_name: String = cfg.require(args.mode, "mode")?;
    let delta: f64 = cfg.get(args.delta, "delta_s")?.unwrap_or(0.0);
    let v0: f64 = cfg.get(args.v0, "v0_volt")?.unwrap_or(0.0);
    let tol: f64 = cfg.get(args.tol, "tol")?.unwrap_or(1e-6);
    let lib = load_params(&params_path)?;
    let set = pick_set(&lib, &set_name)?;

    let mode: ModeOde = match (&set, mode_name.as_str()) {
        (GateParamSet::Nor(p), "first-rising") => ModeOde::nor_first_rising(p),
        (GateParamSet::Nor(p), "second-rising") => ModeOde::nor_second_rising(delta, p),
        (GateParamSet::Nor(p), "first-falling") => ModeOde::nor_first_falling(p),
        (GateParamSet::Nor(p), "second-falling") => ModeOde::nor_second_falling(delta, p),
        (GateParamSet::CGate(p), "c-hold") => ModeOde::c_hold(p),
        (GateParamSet::CGate(p), "c-rising") => ModeOde::c_second_rising(delta, p),
        (GateParamSet::CGate(p), "c-falling") => ModeOde::c_second_falling(delta, p),
        (_, other) => {
            return Err(CliError::usage(format!(
                "mode `{other}` unknown or incompatible with set `{set_name}`"
            )))
        }
    };
    let t_end: f64 = cfg
        .get(args.t_end, "t_end_s")?
        .unwrap_or_else(|| mode.default_t_end());
    let traj = oracle::integrate_mode(&mode, v0, t_end, tol).map_err(CliError::model)?;
    let mut out = String::from("time_s,volts\n");
    for s in &traj.samples {
        let _ = writeln!(out, "{},{}", dio::format_f64(s.t), dio::format_f64(s.v));
    }
    write_output(&args.out, &out)
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let cfg = Settings::load(&args.config)?;
    let wf = WaveformConfig {
        mode: parse_mode(&cfg.get(args.mode, "mode")?.unwrap_or_else(|| "local".into()))?,
        mu: cfg.get(args.mu, "mu_s")?.unwrap_or(100e-12),
        sigma: cfg.get(args.sigma, "sigma_s")?.unwrap_or(50e-12),
        n_transitions: cfg.get(args.n, "n_transitions")?.unwrap_or(500),
        seed: cfg.get(args.seed, "seed")?.unwrap_or(1),
    };
    let traces = harness::gen_waveform(&wf).map_err(CliError::model)?;
    write_output(&args.out, &dio::write_traces(&traces))
}
