use std::fs;
use std::path::Path;

use fowt_core::environment::{WaveSpec, WindSpec};
use fowt_core::rng::{stream_seed, Stream};
use fowt_core::sim::{simulate, Channel, Manifest, SimConfig, WaveInput, WindInput};
use fowt_lab::ensemble::{
    counterfactual, counterfactual_configs, read_index, run_campaign, run_config, CampaignSpec, CounterfactualSpec,
    EnsembleResult, Hold, Model, Variant,
};
use fowt_lab::io::TrajectoryFormat;
use fowt_lab::reference_model;

fn template() -> SimConfig {
    SimConfig {
        dt: 0.05,
        duration: 40.0,
        decimation: 2,
        wind: WindInput::Synthetic(WindSpec::new(20.0, 80.0, 0)),
        waves: WaveInput::Synthetic(WaveSpec::new(20.0, 9.81, 0)),
        ..SimConfig::default()
    }
}

fn spec(dir: &Path, n_runs: usize, workers: Option<usize>) -> CampaignSpec {
    CampaignSpec {
        n_runs,
        base_seed: 11,
        template: template(),
        out_dir: dir.to_path_buf(),
        workers,
        format: TrajectoryFormat::Binary,
        extra: Manifest::new(),
    }
}

#[test]
fn single_run_campaign_matches_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_model().unwrap();
    let ens = run_campaign(&spec(dir.path(), 1, Some(1)), &model).unwrap();
    let direct = simulate(&run_config(&template(), 11, 0), &model.plant()).unwrap();
    let stored = ens.trajectory(0).unwrap();
    assert_eq!(stored.columns, direct.columns);
    assert_eq!(ens.index[0].wind_seed, Some(stream_seed(11, 0, Stream::Wind)));
    assert_eq!(ens.index[0].wave_seed, Some(stream_seed(11, 0, Stream::Wave)));
}

#[test]
fn worker_count_does_not_change_results() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let model = reference_model().unwrap();
    let one = run_campaign(&spec(a.path(), 6, Some(1)), &model).unwrap();
    let eight = run_campaign(&spec(b.path(), 6, Some(8)), &model).unwrap();
    assert_eq!(one.index, eight.index);
    assert_eq!(one.manifest, eight.manifest);
    assert_eq!(
        fs::read(a.path().join("index.csv")).unwrap(),
        fs::read(b.path().join("index.csv")).unwrap()
    );
    for e in &one.index {
        for &(lo, hi) in &e.extremes {
            assert!(lo <= hi);
        }
    }
}

#[test]
fn interrupted_campaign_resumes_to_the_same_index() {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_model().unwrap();
    let s = spec(dir.path(), 4, None);
    let full = run_campaign(&s, &model).unwrap();
    let index_bytes = fs::read(dir.path().join("index.csv")).unwrap();
    // lose the index and two runs, corrupt a third
    fs::remove_file(dir.path().join("index.csv")).unwrap();
    fs::remove_file(dir.path().join("runs/run_000001.bin")).unwrap();
    fs::remove_file(dir.path().join("runs/run_000003.manifest")).unwrap();
    fs::write(dir.path().join("runs/run_000002.bin"), b"garbage").unwrap();
    let resumed = run_campaign(&s, &model).unwrap();
    assert_eq!(resumed.index, full.index);
    assert_eq!(fs::read(dir.path().join("index.csv")).unwrap(), index_bytes);
    assert_eq!(read_index(&dir.path().join("index.csv")).unwrap(), full.index);
}

#[test]
fn a_different_campaign_in_the_same_directory_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_model().unwrap();
    run_campaign(&spec(dir.path(), 1, None), &model).unwrap();
    let mut other = spec(dir.path(), 1, None);
    other.base_seed = 12;
    assert_eq!(run_campaign(&other, &model).unwrap_err().class().code(), 2);
}

#[test]
fn saved_model_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_model().unwrap();
    model.save(dir.path()).unwrap();
    let back = Model::load(dir.path()).unwrap();
    assert_eq!(back, model);
}

fn campaign_with_one_run() -> (tempfile::TempDir, EnsembleResult, Model) {
    let dir = tempfile::tempdir().unwrap();
    let model = reference_model().unwrap();
    let ens = run_campaign(&spec(dir.path(), 1, None), &model).unwrap();
    (dir, ens, model)
}

#[test]
fn identity_counterfactual_reproduces_the_source() {
    let (dir, ens, model) = campaign_with_one_run();
    let source = ens.trajectory(0).unwrap();
    let seed = stream_seed(11, 0, Stream::Wind);
    let cf = CounterfactualSpec { source: 0, hold: Hold::Wave, variant: Variant::Resample(seed), repetitions: 1 };
    let runs = counterfactual(&cf, &ens, &model, &dir.path().join("cf")).unwrap();
    assert_eq!(runs[0].columns, source.columns);
}

#[test]
fn holding_the_wind_keeps_the_wind_channel() {
    let (dir, ens, model) = campaign_with_one_run();
    let source = ens.trajectory(0).unwrap();
    let cf = CounterfactualSpec { source: 0, hold: Hold::Wind, variant: Variant::Resample(500), repetitions: 2 };
    let runs = counterfactual(&cf, &ens, &model, &dir.path().join("cf")).unwrap();
    assert_eq!(runs[0].get(Channel::WindSpeed), source.get(Channel::WindSpeed));
    assert_eq!(runs[1].get(Channel::WindSpeed), source.get(Channel::WindSpeed));
    assert_ne!(runs[0].get(Channel::WaveElevation), source.get(Channel::WaveElevation));
    assert_ne!(runs[0].get(Channel::WaveElevation), runs[1].get(Channel::WaveElevation));
    assert_eq!(runs[1].manifest["counterfactual.label"], cf.label(1));
    assert!(dir.path().join("cf").join(format!("{}.csv", cf.label(1))).is_file());
}

#[test]
fn still_water_counterfactual_has_no_wave_load() {
    let (dir, ens, model) = campaign_with_one_run();
    let cf = CounterfactualSpec { source: 0, hold: Hold::Wind, variant: Variant::None, repetitions: 1 };
    let t = &counterfactual(&cf, &ens, &model, &dir.path().join("cf")).unwrap()[0];
    for c in [Channel::WaveElevation, Channel::WaveForceSurge, Channel::WaveForceHeave, Channel::WaveMomentPitch] {
        assert!(t.get(c).iter().all(|&v| v == 0.0), "{}", c.name());
    }
}

#[test]
fn constant_wind_counterfactual_keeps_the_sea_and_start() {
    let (_dir, ens, model) = campaign_with_one_run();
    let source = ens.trajectory(0).unwrap();
    let cf = CounterfactualSpec { source: 0, hold: Hold::Wave, variant: Variant::Constant(15.0), repetitions: 1 };
    let cfgs = counterfactual_configs(&source.manifest, &cf, &model).unwrap();
    let t = simulate(&cfgs[0], &model.plant()).unwrap();
    assert_eq!(t.get(Channel::WaveElevation), source.get(Channel::WaveElevation));
    assert!(t.get(Channel::WindSpeed).iter().all(|&u| u == 15.0));
    assert_eq!(t.row(0)[1..8], source.row(0)[1..8]);
    assert_eq!(t.get(Channel::BladePitch)[0], source.get(Channel::BladePitch)[0]);
}

#[test]
fn inconsistent_counterfactuals_are_rejected() {
    for (hold, variant) in [(Hold::Wind, Variant::Constant(3.0)), (Hold::Wave, Variant::None)] {
        let cf = CounterfactualSpec { source: 0, hold, variant, repetitions: 1 };
        assert_eq!(cf.validate().unwrap_err().class().code(), 2);
    }
    let cf = CounterfactualSpec { source: 0, hold: Hold::Wind, variant: Variant::None, repetitions: 0 };
    assert!(cf.validate().is_err());
}
