use std::fs;

use fowt_core::sim::{simulate, Channel, SimConfig, WaveInput, WindInput};
use fowt_lab::io::{data_path, load_trajectory, manifest_path, persist_trajectory, TrajectoryFormat};
use fowt_lab::{reference_model, LabError};

fn short_run(duration: f64, decimation: usize) -> fowt_core::sim::Trajectory {
    let model = reference_model().unwrap();
    let cfg = SimConfig {
        dt: 0.05,
        duration,
        decimation,
        wind: WindInput::Constant(14.0),
        waves: WaveInput::Still,
        ..SimConfig::default()
    };
    simulate(&cfg, &model.plant()).unwrap()
}

#[test]
fn round_trip_is_lossless_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let t = short_run(20.0, 1);
    for format in [TrajectoryFormat::Csv, TrajectoryFormat::Binary] {
        let stem = dir.path().join(format!("t_{}", format.extension()));
        persist_trajectory(&t, &stem, format).unwrap();
        let back = load_trajectory(&stem).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.failure, t.failure);
        for (k, v) in &t.manifest {
            assert_eq!(back.manifest.get(k), Some(v), "{k}");
        }
    }
}

#[test]
fn truncated_file_fails_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("t");
    persist_trajectory(&short_run(10.0, 1), &stem, TrajectoryFormat::Csv).unwrap();
    let data = data_path(&stem, TrajectoryFormat::Csv);
    let bytes = fs::read(&data).unwrap();
    fs::write(&data, &bytes[..bytes.len() / 2]).unwrap();
    assert!(matches!(load_trajectory(&stem), Err(LabError::Checksum { .. })));
}

#[test]
fn version_mismatch_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("t");
    persist_trajectory(&short_run(10.0, 1), &stem, TrajectoryFormat::Binary).unwrap();
    let m = manifest_path(&stem);
    let text = fs::read_to_string(&m).unwrap().replace("file.version = 1", "file.version = 99");
    fs::write(&m, text).unwrap();
    assert!(matches!(load_trajectory(&stem), Err(LabError::Version { .. })));
}

#[test]
fn decimated_file_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("t");
    let (duration, dt, dec) = (1500.0, 0.05, 4);
    persist_trajectory(&short_run(duration, dec), &stem, TrajectoryFormat::Csv).unwrap();
    let text = fs::read_to_string(data_path(&stem, TrajectoryFormat::Csv)).unwrap();
    let rows = text.lines().count() - 1;
    assert_eq!(rows, (duration / (dt * dec as f64)) as usize + 1);
    assert_eq!(rows, 7501);
    let back = load_trajectory(&stem).unwrap();
    assert_eq!(back.get(Channel::Time).last(), Some(&duration));
}

#[test]
fn missing_manifest_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let e = load_trajectory(&dir.path().join("absent")).unwrap_err();
    assert_eq!(e.class().code(), 4);
}
