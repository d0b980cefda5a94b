//! Seeded Monte Carlo campaigns and counterfactual re-runs.
//!
//! Campaign directory layout:
//!
//! ```text
//! <out>/campaign.manifest      campaign settings, template run, parameter hash
//! <out>/params.cfg             parameter set in SI units
//! <out>/cp_table.csv           power coefficient table
//! <out>/ct_table.csv           thrust coefficient table
//! <out>/index.csv              one row per run: seeds, failure, per-channel min/max
//! <out>/runs/run_NNNNNN.{csv,manifest}
//! ```
//!
//! Run `i` draws its wind from `stream_seed(base, i, Wind)` and its sea
//! state from `stream_seed(base, i, Wave)`, so the two factors can be varied
//! independently. Results depend only on the spec: each run writes its own
//! files and the index is assembled in run order at the end. Runs whose
//! files already exist and verify are loaded instead of recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use fowt_core::dynamics::Plant;
use fowt_core::params::{self, load_parameters, load_surface, CoefficientSurface, ParameterSet, SurfaceKind};
use fowt_core::rng::{stream_seed, Stream};
use fowt_core::sim::{
    initial_condition, simulate, Channel, Initial, Manifest, SimConfig, Trajectory, WaveInput, WindInput, CHANNELS,
};
use rayon::prelude::*;

use crate::io::{self, TrajectoryFormat};
use crate::LabError;

/// Parameters and rotor tables, owned.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub params: ParameterSet,
    pub power: CoefficientSurface,
    pub thrust: CoefficientSurface,
}

impl Model {
    pub fn plant(&self) -> Plant<'_> {
        Plant::new(&self.params, &self.power, &self.thrust)
    }

    /// Writes `params.cfg`, `cp_table.csv` and `ct_table.csv` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<(), LabError> {
        io::write_atomic(&dir.join("params.cfg"), params::serialize(&self.params).as_bytes())?;
        io::write_atomic(&dir.join("cp_table.csv"), self.power.to_text(false).as_bytes())?;
        io::write_atomic(&dir.join("ct_table.csv"), self.thrust.to_text(false).as_bytes())
    }

    pub fn load(dir: &Path) -> Result<Self, LabError> {
        let read = |name: &str| {
            let p = dir.join(name);
            fs::read_to_string(&p).map_err(|e| LabError::io(p, e))
        };
        Ok(Self {
            params: load_parameters(&read("params.cfg")?)?,
            power: load_surface(&read("cp_table.csv")?, SurfaceKind::Power)?,
            thrust: load_surface(&read("ct_table.csv")?, SurfaceKind::Thrust)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSpec {
    pub n_runs: usize,
    pub base_seed: u64,
    /// Run template; synthetic wind and wave specs get per-run seeds.
    pub template: SimConfig,
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub format: TrajectoryFormat,
    /// Extra manifest entries (for example the overrides that produced the spec).
    pub extra: Manifest,
}

/// Configuration of run `index` of a campaign.
pub fn run_config(template: &SimConfig, base_seed: u64, index: usize) -> SimConfig {
    let mut cfg = template.clone();
    if let WindInput::Synthetic(s) = &mut cfg.wind {
        s.seed = stream_seed(base_seed, index as u64, Stream::Wind);
    }
    if let WaveInput::Synthetic(s) = &mut cfg.waves {
        s.seed = stream_seed(base_seed, index as u64, Stream::Wave);
    }
    cfg
}

/// Channels summarized in the index (all but time).
pub fn index_channels() -> &'static [&'static str] {
    &CHANNELS[1..]
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexEntry {
    pub run: usize,
    pub wind_seed: Option<u64>,
    pub wave_seed: Option<u64>,
    /// Failure tag, if the run was truncated.
    pub failure: Option<String>,
    pub rows: usize,
    /// `(min, max)` per entry of [`index_channels`].
    pub extremes: Vec<(f64, f64)>,
    /// Trajectory stem relative to the campaign directory.
    pub path: String,
}

impl IndexEntry {
    pub fn from_trajectory(run: usize, traj: &Trajectory, path: String) -> Self {
        let seed = |k: &str| traj.manifest.get(k).and_then(|v| v.parse().ok());
        let extremes = (1..CHANNELS.len())
            .map(|c| {
                let col = &traj.columns[c];
                if col.is_empty() {
                    (f64::NAN, f64::NAN)
                } else {
                    col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
                }
            })
            .collect();
        Self {
            run,
            wind_seed: seed("wind.seed"),
            wave_seed: seed("wave.seed"),
            failure: traj.failure.map(|f| f.kind.tag().to_string()),
            rows: traj.len(),
            extremes,
            path,
        }
    }

    pub fn extreme(&self, c: Channel) -> (f64, f64) {
        self.extremes[c.index() - 1]
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

fn index_header() -> Vec<String> {
    let mut h: Vec<String> = ["run", "wind_seed", "wave_seed", "failure", "rows", "path"].map(String::from).to_vec();
    for c in index_channels() {
        h.push(format!("{c}_min"));
        h.push(format!("{c}_max"));
    }
    h
}

pub fn write_index(path: &Path, entries: &[IndexEntry]) -> Result<(), LabError> {
    let header = index_header();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    io::write_table(
        path,
        &header,
        entries.iter().map(|e| {
            let mut row =
                vec![e.run.to_string(), opt(&e.wind_seed), opt(&e.wave_seed), opt(&e.failure), e.rows.to_string(), e.path.clone()];
            for &(lo, hi) in &e.extremes {
                row.push(io::cell(lo));
                row.push(io::cell(hi));
            }
            row
        }),
    )
}

pub fn read_index(path: &Path) -> Result<Vec<IndexEntry>, LabError> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let mut lines = text.lines();
    if lines.next() != Some(index_header().join(",").as_str()) {
        return Err(LabError::format(path, "unexpected index header"));
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        let err = || LabError::format(path, format!("index row {}", n + 1));
        if f.len() != 6 + 2 * index_channels().len() {
            return Err(err());
        }
        let seed = |s: &str| if s.is_empty() { Ok(None) } else { s.parse().map(Some).map_err(|_| err()) };
        let num = |s: &str| s.parse::<f64>().map_err(|_| err());
        let mut extremes = Vec::new();
        for pair in f[6..].chunks(2) {
            extremes.push((num(pair[0])?, num(pair[1])?));
        }
        out.push(IndexEntry {
            run: f[0].parse().map_err(|_| err())?,
            wind_seed: seed(f[1])?,
            wave_seed: seed(f[2])?,
            failure: (!f[3].is_empty()).then(|| f[3].to_string()),
            rows: f[4].parse().map_err(|_| err())?,
            path: f[5].to_string(),
            extremes,
        });
    }
    Ok(out)
}

/// A finished campaign: its directory, manifest and index.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub index: Vec<IndexEntry>,
}

impl EnsembleResult {
    pub fn load(dir: &Path) -> Result<Self, LabError> {
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest: io::read_manifest(&dir.join("campaign.manifest"))?,
            index: read_index(&dir.join("index.csv"))?,
        })
    }

    pub fn trajectory(&self, run: usize) -> Result<Trajectory, LabError> {
        let e = self
            .index
            .iter()
            .find(|e| e.run == run)
            .ok_or_else(|| LabError::Usage(format!("run {run} is not in the campaign")))?;
        io::load_trajectory(&self.dir.join(&e.path))
    }

    /// Every trajectory, in run order.
    pub fn trajectories(&self) -> Result<Vec<Trajectory>, LabError> {
        self.index.par_iter().map(|e| io::load_trajectory(&self.dir.join(&e.path))).collect()
    }
}

fn campaign_manifest(spec: &CampaignSpec, model: &Model) -> Manifest {
    let mut m = Manifest::new();
    m.insert("kind".into(), "campaign".into());
    m.insert("n_runs".into(), spec.n_runs.to_string());
    m.insert("base_seed".into(), spec.base_seed.to_string());
    m.insert("format".into(), spec.format.extension().into());
    m.insert("param_hash".into(), format!("{:016x}", model.params.fingerprint()));
    m.insert("seed_rule".into(), "stream_seed(base_seed, run, stream)".into());
    m.extend(spec.extra.clone());
    for (k, v) in spec.template.to_manifest() {
        m.insert(format!("template.{k}"), v);
    }
    m
}

pub fn run_stem(run: usize) -> String {
    format!("runs/run_{run:06}")
}

/// Runs (or completes) a campaign and writes its index.
pub fn run_campaign(spec: &CampaignSpec, model: &Model) -> Result<EnsembleResult, LabError> {
    if spec.n_runs == 0 {
        return Err(LabError::Usage("a campaign needs at least one run".into()));
    }
    spec.template.validate()?;
    let dir = &spec.out_dir;
    fs::create_dir_all(dir.join("runs")).map_err(|e| LabError::io(dir, e))?;
    let manifest = campaign_manifest(spec, model);
    let mpath = dir.join("campaign.manifest");
    if mpath.is_file() {
        let existing = io::read_manifest(&mpath)?;
        if existing != manifest {
            return Err(LabError::Usage(format!(
                "{} holds a different campaign; choose another output directory",
                dir.display()
            )));
        }
    } else {
        model.save(dir)?;
        io::write_manifest(&mpath, &manifest)?;
    }

    let plant = model.plant();
    let one = |i: usize| -> Result<IndexEntry, LabError> {
        let stem = run_stem(i);
        let path = dir.join(&stem);
        if io::trajectory_exists(&path) {
            match io::load_trajectory(&path) {
                Ok(t) => return Ok(IndexEntry::from_trajectory(i, &t, stem)),
                Err(e) => log::warn!("run {i}: {e}; recomputing"),
            }
        }
        let traj = simulate(&run_config(&spec.template, spec.base_seed, i), &plant)?;
        if let Some(f) = &traj.failure {
            log::warn!("run {i}: {f}");
        }
        io::persist_trajectory(&traj, &path, spec.format)?;
        log::debug!("run {i} done");
        Ok(IndexEntry::from_trajectory(i, &traj, stem))
    };
    let runs = || (0..spec.n_runs).into_par_iter().map(one).collect::<Result<Vec<_>, _>>();
    let index = match spec.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| LabError::Usage(format!("worker pool: {e}")))?
            .install(runs)?,
        None => runs()?,
    };
    write_index(&dir.join("index.csv"), &index)?;
    log::info!("campaign of {} runs written to {}", spec.n_runs, dir.display());
    Ok(EnsembleResult { dir: dir.clone(), manifest, index })
}

/// Which factor a counterfactual keeps from the source run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hold {
    Wind,
    Wave,
}

/// What replaces the factor that is not held.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// New stochastic realization; repetition `k` uses `seed + k`.
    Resample(u64),
    /// Constant wind at this speed (wave-holding runs only).
    Constant(f64),
    /// Still water (wind-holding runs only).
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterfactualSpec {
    pub source: usize,
    pub hold: Hold,
    pub variant: Variant,
    pub repetitions: usize,
}

impl CounterfactualSpec {
    pub fn validate(&self) -> Result<(), LabError> {
        match (self.hold, self.variant) {
            (Hold::Wind, Variant::Constant(_)) => Err(LabError::Usage("a constant level replaces wind, so hold the waves".into())),
            (Hold::Wave, Variant::None) => Err(LabError::Usage("still water replaces waves, so hold the wind".into())),
            _ if self.repetitions == 0 => Err(LabError::Usage("at least one repetition is required".into())),
            _ => Ok(()),
        }
    }

    pub fn label(&self, repetition: usize) -> String {
        let hold = match self.hold {
            Hold::Wind => "hold-wind",
            Hold::Wave => "hold-wave",
        };
        let variant = match self.variant {
            Variant::Resample(s) => format!("resample-{}", s.wrapping_add(repetition as u64)),
            Variant::Constant(v) => format!("constant-{v}"),
            Variant::None => "none".to_string(),
        };
        format!("run_{:06}_{hold}_{variant}_{repetition}", self.source)
    }
}

/// Re-run configurations with exactly one factor replaced. When the mean
/// wind changes, the start state and blade pitch are pinned to the source's.
pub fn counterfactual_configs(source: &Manifest, cf: &CounterfactualSpec, model: &Model) -> Result<Vec<SimConfig>, LabError> {
    cf.validate()?;
    let base = SimConfig::from_manifest(source)?;
    let missing = |what: &str| LabError::Usage(format!("source run has no synthetic {what} to resample"));
    let mut out = Vec::with_capacity(cf.repetitions);
    for k in 0..cf.repetitions {
        let mut cfg = base.clone();
        match (cf.hold, cf.variant) {
            (Hold::Wind, Variant::Resample(seed)) => match &mut cfg.waves {
                WaveInput::Synthetic(s) => s.seed = seed.wrapping_add(k as u64),
                _ => return Err(missing("waves")),
            },
            (Hold::Wind, Variant::None) => cfg.waves = WaveInput::Still,
            (Hold::Wave, Variant::Resample(seed)) => match &mut cfg.wind {
                WindInput::Synthetic(s) => s.seed = seed.wrapping_add(k as u64),
                _ => return Err(missing("wind")),
            },
            (Hold::Wave, Variant::Constant(level)) => cfg.wind = WindInput::Constant(level),
            _ => unreachable!("rejected by validate"),
        }
        if cfg.mean_wind() != base.mean_wind() {
            let (state, beta) = initial_condition(&base, &model.plant())?;
            cfg.initial = Initial::State(state);
            cfg.initial_pitch = Some(beta);
        }
        out.push(cfg);
    }
    Ok(out)
}

/// Runs the counterfactual variants of one campaign run and persists them
/// under `out_dir`.
pub fn counterfactual(
    cf: &CounterfactualSpec,
    campaign: &EnsembleResult,
    model: &Model,
    out_dir: &Path,
) -> Result<Vec<Trajectory>, LabError> {
    let source = campaign.trajectory(cf.source)?;
    let configs = counterfactual_configs(&source.manifest, cf, model)?;
    let plant = model.plant();
    configs
        .par_iter()
        .enumerate()
        .map(|(k, cfg)| {
            let mut t = simulate(cfg, &plant)?;
            t.manifest.insert("counterfactual.source".into(), cf.source.to_string());
            t.manifest.insert("counterfactual.label".into(), cf.label(k));
            io::persist_trajectory(&t, &out_dir.join(cf.label(k)), TrajectoryFormat::Csv)?;
            Ok(t)
        })
        .collect()
}
