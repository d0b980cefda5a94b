//! `fowt`: command-line front end.
//!
//! Every subcommand reads one run configuration (`--config`, optional; the
//! shipped defaults are used without it), applies `--override key=value`
//! edits in order, and writes its artifacts with manifests under `--out`.
//!
//! Exit status: 0 success, 2 configuration or usage error, 3 runtime failure
//! (including a simulated run that capsized or diverged), 4 file error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fowt_core::control::tuning::{IntegralSearch, InstabilityDetector, ProportionalSearch};
use fowt_core::environment::{synthesize_waves, synthesize_wind};
use fowt_core::params;
use fowt_core::sim::{simulate, steady_state_run, Control, Manifest, SimConfig, WaveInput, WindInput, STATE_CHANNELS};
use fowt_lab::analysis::report::{analyze_campaign, AnalyzeSettings};
use fowt_lab::ensemble::{self, CampaignSpec, CounterfactualSpec, EnsembleResult, Hold, Model, Variant};
use fowt_lab::io::{self, cell};
use fowt_lab::runconfig::RunConfig;
use fowt_lab::tuning;
use fowt_lab::LabError;

#[derive(Parser, Debug)]
#[command(name = "fowt", version, about = "Floating wind turbine simulation, campaigns and analysis")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Run configuration file (`key = value [unit]` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Replace or add one configuration entry; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, env = "FOWT_WORKERS", global = true)]
    workers: Option<usize>,
    /// Base seed; shorthand for `--override base_seed=N`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Only log warnings and errors.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation and write its trajectory.
    Simulate,
    /// Tune the pitch controller gains by closed-loop experiments.
    Tune {
        #[arg(long, value_enum, default_value_t = Stage::All)]
        stage: Stage,
        /// Derivative sweep range and resolution.
        #[arg(long, default_value_t = 0.02)]
        kd_min: f64,
        #[arg(long, default_value_t = 1.0)]
        kd_max: f64,
        #[arg(long, default_value_t = 50)]
        kd_points: usize,
    },
    /// Run a seeded Monte Carlo campaign (resumes an interrupted one).
    Campaign,
    /// Re-run one campaign run with one input factor held.
    Counterfactual {
        #[arg(long)]
        campaign: PathBuf,
        #[arg(long)]
        run: usize,
        #[arg(long, value_enum)]
        hold: HoldArg,
        /// `resample:SEED`, `constant:LEVEL` or `none`.
        #[arg(long)]
        variant: String,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
    },
    /// Statistical analysis of a finished campaign.
    Analyze {
        #[arg(long)]
        campaign: PathBuf,
        /// Histogram bins.
        #[arg(long)]
        bins: Option<usize>,
        /// Bins of the heave-pitch scatter.
        #[arg(long)]
        scatter_bins: Option<usize>,
    },
    /// Write the synthetic wind and wave inputs of a configuration.
    SynthEnv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    P,
    I,
    D,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum HoldArg {
    Wind,
    Wave,
}

fn parse_variant(s: &str) -> Result<Variant, LabError> {
    let bad = || LabError::Usage(format!("variant `{s}`: expected resample:SEED, constant:LEVEL or none"));
    match s.split_once(':') {
        None if s == "none" => Ok(Variant::None),
        Some(("resample", v)) => v.parse().map(Variant::Resample).map_err(|_| bad()),
        Some(("constant", v)) => v.parse().map(Variant::Constant).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn load_config(c: &Common) -> Result<RunConfig, LabError> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::defaults(),
    };
    if let Some(seed) = c.seed {
        cfg.apply_override(&format!("base_seed={seed}"))?;
    }
    for o in &c.overrides {
        cfg.apply_override(o)?;
    }
    Ok(cfg)
}

fn override_manifest(cfg: &RunConfig) -> Manifest {
    cfg.overrides.iter().map(|(k, v)| (format!("override.{k}"), v.clone())).collect()
}

fn out_dir(c: &Common, default: &str) -> Result<PathBuf, LabError> {
    let dir = c.out.clone().unwrap_or_else(|| PathBuf::from(default));
    fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
    Ok(dir)
}

/// Saves the effective configuration and model next to the artifacts.
fn save_inputs(dir: &Path, cfg: &RunConfig, model: &Model) -> Result<(), LabError> {
    io::write_atomic(&dir.join("run.cfg"), cfg.to_text().as_bytes())?;
    model.save(dir)
}

fn is_steady(cfg: &SimConfig) -> bool {
    matches!(cfg.wind, WindInput::Constant(_)) && matches!(cfg.waves, WaveInput::Still) && cfg.control == Control::Fixed
}

fn cmd_simulate(c: &Common) -> Result<ExitCode, LabError> {
    let cfg = load_config(c)?;
    let model = cfg.model()?;
    let sim = cfg.sim_config(model.params.g)?;
    let dir = out_dir(c, "run")?;
    save_inputs(&dir, &cfg, &model)?;
    let plant = model.plant();
    let (mut traj, report) = if is_steady(&sim) {
        let (t, r) = steady_state_run(&sim, &plant)?;
        (t, Some(r))
    } else {
        (simulate(&sim, &plant)?, None)
    };
    traj.manifest.extend(override_manifest(&cfg));
    if let Some(r) = report {
        let mut m = traj.manifest.clone();
        m.insert("converged".into(), r.converged.to_string());
        m.insert("settling_time".into(), cell(r.settling_time));
        for (ch, v) in STATE_CHANNELS.iter().zip(r.final_state) {
            m.insert(format!("final.{}", ch.name()), cell(v));
        }
        io::write_manifest(&dir.join("convergence.manifest"), &m)?;
        log::info!("converged: {}, settling time {:.1} s", r.converged, r.settling_time);
        for (ch, v) in STATE_CHANNELS.iter().zip(r.final_state) {
            log::info!("  final {:<12} {v:.6}", ch.name());
        }
    }
    let format = cfg.campaign()?.format;
    io::persist_trajectory(&traj, &dir.join("trajectory"), format)?;
    log::info!("{} rows written to {}", traj.len(), dir.display());
    if let Some(f) = traj.failure {
        log::error!("run stopped at t = {:.3} s: {}", f.time, f.kind.tag());
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_tune(c: &Common, stage: Stage, kd: (f64, f64), kd_points: usize) -> Result<ExitCode, LabError> {
    let cfg = load_config(c)?;
    let mut model = cfg.model()?;
    let sim = cfg.sim_config(model.params.g)?;
    if !matches!(sim.control, Control::Pid(_)) {
        return Err(LabError::Usage("tuning needs `controller = pid`".into()));
    }
    let dir = out_dir(c, "tune")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.workers.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Usage(format!("worker pool: {e}")))?;
    let mut m = override_manifest(&cfg);
    m.insert("param_hash".into(), format!("{:016x}", model.params.fingerprint()));

    if matches!(stage, Stage::P | Stage::All) {
        // the proportional stage runs on steady wind without waves
        let steady = SimConfig { wind: WindInput::Constant(sim.mean_wind()), waves: WaveInput::Still, ..sim.clone() };
        let r = tuning::tune_proportional_gain(&model, &steady, &ProportionalSearch::default(), &InstabilityDetector::default())?;
        io::write_table(
            &dir.join("proportional.csv"),
            &["a_p", "unstable"],
            r.trials.iter().map(|(a, u)| vec![cell(*a), u.to_string()]),
        )?;
        log::info!("proportional: critical {:.4}, a_p = {:.4}", r.critical, r.a_p);
        model.params.a_p = r.a_p;
        m.insert("tune.critical".into(), cell(r.critical));
    }
    if matches!(stage, Stage::I | Stage::All) {
        let search = IntegralSearch::new(model.params.rated_speed);
        let r = tuning::tune_integral_gain(&model, &sim, model.params.a_p, &search)?;
        io::write_table(
            &dir.join("integral.csv"),
            &["a_i", "mean_rotor_speed"],
            r.trials.iter().map(|(a, w)| vec![cell(*a), cell(*w)]),
        )?;
        log::info!("integral: a_i = {:.4}, mean rotor speed {:.4} rad/s", r.a_i, r.mean_speed);
        model.params.a_i = r.a_i;
    }
    if matches!(stage, Stage::D | Stage::All) {
        let grid = fowt_core::control::tuning::derivative_grid(kd, kd_points);
        let r = pool.install(|| tuning::sweep_derivative_gain(&model, &sim, model.params.a_p, model.params.a_i, &grid))?;
        io::write_table(
            &dir.join("derivative.csv"),
            &["k_d", "rotor_speed_std"],
            r.curve.iter().map(|(k, s)| vec![cell(*k), cell(*s)]),
        )?;
        log::info!("derivative: K_d = {:.4} (interior minimum: {})", r.k_d, r.interior_minimum());
        if !r.interior_minimum() {
            log::warn!("the spread is smallest at an end of the sweep range");
        }
        model.params.k_d = r.k_d;
        m.insert("tune.interior_minimum".into(), r.interior_minimum().to_string());
    }
    for (k, v) in [("a_p", model.params.a_p), ("a_i", model.params.a_i), ("K_d", model.params.k_d)] {
        m.insert(format!("tuned.{k}"), cell(v));
    }
    m.extend(sim.to_manifest().into_iter().map(|(k, v)| (format!("template.{k}"), v)));
    io::write_atomic(&dir.join("tuned.cfg"), params::serialize(&model.params).as_bytes())?;
    io::write_manifest(&dir.join("tune.manifest"), &m)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_campaign(c: &Common) -> Result<ExitCode, LabError> {
    let cfg = load_config(c)?;
    let model = cfg.model()?;
    let settings = cfg.campaign()?;
    let spec = CampaignSpec {
        n_runs: settings.n_runs,
        base_seed: settings.base_seed,
        template: cfg.sim_config(model.params.g)?,
        out_dir: c.out.clone().unwrap_or_else(|| PathBuf::from("campaign")),
        workers: c.workers.or(settings.workers),
        format: settings.format,
        extra: override_manifest(&cfg),
    };
    let result = ensemble::run_campaign(&spec, &model)?;
    io::write_atomic(&spec.out_dir.join("run.cfg"), cfg.to_text().as_bytes())?;
    let failed = result.index.iter().filter(|e| e.failure.is_some()).count();
    if failed > 0 {
        log::warn!("{failed} of {} runs ended early", result.index.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_counterfactual(
    c: &Common,
    campaign: &Path,
    run: usize,
    hold: HoldArg,
    variant: &str,
    repetitions: usize,
) -> Result<ExitCode, LabError> {
    let ens = EnsembleResult::load(campaign)?;
    if run >= ens.index.len() {
        return Err(LabError::Usage(format!("campaign has {} runs, no run {run}", ens.index.len())));
    }
    let model = Model::load(campaign)?;
    let hold = match hold {
        HoldArg::Wind => Hold::Wind,
        HoldArg::Wave => Hold::Wave,
    };
    let spec = CounterfactualSpec { source: run, hold, variant: parse_variant(variant)?, repetitions };
    spec.validate()?;
    let dir = out_dir(c, "counterfactual")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.workers.unwrap_or(0))
        .build()
        .map_err(|e| LabError::Usage(format!("worker pool: {e}")))?;
    let runs = pool.install(|| ensemble::counterfactual(&spec, &ens, &model, &dir))?;
    log::info!("{} counterfactual runs written to {}", runs.len(), dir.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(c: &Common, campaign: &Path, bins: Option<usize>, scatter_bins: Option<usize>) -> Result<ExitCode, LabError> {
    let ens = EnsembleResult::load(campaign)?;
    let mut s = AnalyzeSettings::default();
    s.bins = bins.unwrap_or(s.bins);
    s.scatter_bins = scatter_bins.unwrap_or(s.scatter_bins);
    let dir = out_dir(c, "analysis")?;
    analyze_campaign(&ens, &dir, &s)?;
    log::info!("analysis of {} runs written to {}", ens.index.len(), dir.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_synth_env(c: &Common) -> Result<ExitCode, LabError> {
    let cfg = load_config(c)?;
    let model = cfg.model()?;
    let sim = cfg.sim_config(model.params.g)?;
    let dir = out_dir(c, "env")?;
    let mut m = override_manifest(&cfg);
    m.extend(sim.to_manifest().into_iter().filter(|(k, _)| k.starts_with("wind.") || k.starts_with("wave.")));

    let wind = match &sim.wind {
        WindInput::Synthetic(s) => synthesize_wind(s)?,
        WindInput::Constant(u) => fowt_core::environment::WindSeries::constant(*u, sim.dt, sim.duration),
        WindInput::Series(w) => w.clone(),
    };
    io::write_table(
        &dir.join("wind.csv"),
        &["t", "wind_speed"],
        wind.speed.iter().enumerate().map(|(i, u)| vec![cell(wind.time(i)), cell(*u)]),
    )?;
    let waves = match &sim.waves {
        WaveInput::Synthetic(s) => Some(synthesize_waves(s)?),
        WaveInput::Field(f) => Some(f.clone()),
        WaveInput::Still => None,
    };
    let step = sim.dt * sim.decimation as f64;
    let rows = (sim.duration / step).round() as usize + 1;
    io::write_table(
        &dir.join("waves.csv"),
        &["t", "wave_elevation"],
        (0..rows).map(|i| {
            let t = i as f64 * step;
            vec![cell(t), cell(waves.as_ref().map_or(0.0, |w| w.elevation(sim.report_x, t)))]
        }),
    )?;
    if let Some(w) = &waves {
        m.insert("wave.variance".into(), cell(w.variance()));
    }
    io::write_manifest(&dir.join("env.manifest"), &m)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.common.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let c = &cli.common;
    let result = match &cli.command {
        Command::Simulate => cmd_simulate(c),
        Command::Tune { stage, kd_min, kd_max, kd_points } => cmd_tune(c, *stage, (*kd_min, *kd_max), *kd_points),
        Command::Campaign => cmd_campaign(c),
        Command::Counterfactual { campaign, run, hold, variant, repetitions } => {
            cmd_counterfactual(c, campaign, *run, *hold, variant, *repetitions)
        }
        Command::Analyze { campaign, bins, scatter_bins } => cmd_analyze(c, campaign, *bins, *scatter_bins),
        Command::SynthEnv => cmd_synth_env(c),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.class().code() as u8)
        }
    }
}
