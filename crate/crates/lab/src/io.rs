//! Trajectory files.
//!
//! A trajectory stored under the stem `dir/trajectory` is two files:
//!
//! * `trajectory.csv`: a header naming the channels, then one row per
//!   recorded step. Floats use Rust's shortest round-trip formatting, so a
//!   load reproduces every bit. The packed variant `trajectory.bin` holds
//!   the same rows as little-endian `f64`.
//! * `trajectory.manifest`: the run manifest in `key = value` form plus the
//!   `file.*` keys (format, version, row count, SHA-256 of the data file).
//!
//! The manifest is written last and atomically, so a data file without a
//! manifest is an incomplete write.

use std::fs;
use std::path::{Path, PathBuf};

use fowt_core::dynamics::{Failure, FailureKind, StateVector};
use fowt_core::kv;
use fowt_core::sim::{Manifest, Trajectory, CHANNELS};
use sha2::{Digest, Sha256};

use crate::LabError;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrajectoryFormat {
    #[default]
    Csv,
    Binary,
}

impl TrajectoryFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TrajectoryFormat::Csv => "csv",
            TrajectoryFormat::Binary => "bin",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(TrajectoryFormat::Csv),
            "bin" => Some(TrajectoryFormat::Binary),
            _ => None,
        }
    }
}

pub fn manifest_path(stem: &Path) -> PathBuf {
    stem.with_extension("manifest")
}

pub fn data_path(stem: &Path, format: TrajectoryFormat) -> PathBuf {
    stem.with_extension(format.extension())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), LabError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".part");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| LabError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| LabError::io(path, e))
}

pub fn manifest_text(m: &Manifest) -> String {
    let mut out = String::new();
    for (k, v) in m {
        kv::push(&mut out, k, v, None);
    }
    out
}

pub fn write_manifest(path: &Path, m: &Manifest) -> Result<(), LabError> {
    write_atomic(path, manifest_text(m).as_bytes())
}

pub fn read_manifest(path: &Path) -> Result<Manifest, LabError> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    // values are verbatim: a trailing `[unit]` belongs to the value
    let mut m = Manifest::new();
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let (k, v) = line.split_once('=').ok_or_else(|| LabError::format(path, format!("line {}: expected `key = value`", n + 1)))?;
        if m.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(LabError::format(path, format!("line {}: duplicate key `{}`", n + 1, k.trim())));
        }
    }
    Ok(m)
}

fn encode(traj: &Trajectory, format: TrajectoryFormat) -> Vec<u8> {
    match format {
        TrajectoryFormat::Csv => {
            let mut out = CHANNELS.join(",");
            out.push('\n');
            for i in 0..traj.len() {
                let row = traj.row(i);
                let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out.into_bytes()
        }
        TrajectoryFormat::Binary => {
            let mut out = Vec::with_capacity(traj.len() * CHANNELS.len() * 8);
            for i in 0..traj.len() {
                for v in traj.row(i) {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
            out
        }
    }
}

fn decode(bytes: &[u8], format: TrajectoryFormat, rows: usize, path: &Path) -> Result<Vec<Vec<f64>>, LabError> {
    let mut columns: Vec<Vec<f64>> = (0..CHANNELS.len()).map(|_| Vec::with_capacity(rows)).collect();
    match format {
        TrajectoryFormat::Csv => {
            let text = std::str::from_utf8(bytes).map_err(|_| LabError::format(path, "not UTF-8"))?;
            let mut lines = text.lines();
            let header = lines.next().unwrap_or_default();
            if header != CHANNELS.join(",") {
                return Err(LabError::format(path, format!("unexpected header `{header}`")));
            }
            for (n, line) in lines.enumerate() {
                let mut count = 0;
                for (col, cell) in columns.iter_mut().zip(line.split(',')) {
                    let v = cell
                        .parse()
                        .map_err(|_| LabError::format(path, format!("row {}: bad number `{cell}`", n + 1)))?;
                    col.push(v);
                    count += 1;
                }
                if count != CHANNELS.len() || line.split(',').count() != CHANNELS.len() {
                    return Err(LabError::format(path, format!("row {}: expected {} fields", n + 1, CHANNELS.len())));
                }
            }
        }
        TrajectoryFormat::Binary => {
            if bytes.len() % (8 * CHANNELS.len()) != 0 {
                return Err(LabError::format(path, "length is not a whole number of rows"));
            }
            for (i, chunk) in bytes.chunks_exact(8).enumerate() {
                let v = f64::from_le_bytes(chunk.try_into().expect("chunks of eight bytes"));
                columns[i % CHANNELS.len()].push(v);
            }
        }
    }
    if columns[0].len() != rows {
        return Err(LabError::format(path, format!("{} rows, manifest says {rows}", columns[0].len())));
    }
    Ok(columns)
}

/// Writes the data file, then the manifest.
pub fn persist_trajectory(traj: &Trajectory, stem: &Path, format: TrajectoryFormat) -> Result<(), LabError> {
    let bytes = encode(traj, format);
    let mut m = traj.manifest.clone();
    m.insert("file.format".into(), format.extension().into());
    m.insert("file.version".into(), FORMAT_VERSION.into());
    m.insert("file.rows".into(), traj.len().to_string());
    m.insert("file.sha256".into(), sha256_hex(&bytes));
    write_atomic(&data_path(stem, format), &bytes)?;
    write_manifest(&manifest_path(stem), &m)
}

/// True when both files of a trajectory exist (they may still fail to verify).
pub fn trajectory_exists(stem: &Path) -> bool {
    manifest_path(stem).is_file()
}

fn failure_from(m: &Manifest, path: &Path) -> Result<Option<Failure>, LabError> {
    let Some(tag) = m.get("failure") else { return Ok(None) };
    let num = |k: &str| -> Result<f64, LabError> {
        m.get(k)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| LabError::format(path, format!("missing or bad `{k}`")))
    };
    let kind = match tag.as_str() {
        "capsize" => FailureKind::Capsize,
        "non-finite" => FailureKind::NonFinite,
        "singular" => FailureKind::Singular { condition: num("failure.condition")? },
        other => return Err(LabError::format(path, format!("unknown failure `{other}`"))),
    };
    let state: Vec<f64> = m
        .get("failure.state")
        .map(|s| s.split(',').filter_map(|v| v.parse().ok()).collect())
        .unwrap_or_default();
    let state: [f64; 7] = state.try_into().map_err(|_| LabError::format(path, "bad `failure.state`"))?;
    Ok(Some(Failure { kind, time: num("failure.time")?, state: StateVector::from_array(state) }))
}

/// Loads and verifies a trajectory written by [`persist_trajectory`].
pub fn load_trajectory(stem: &Path) -> Result<Trajectory, LabError> {
    let mpath = manifest_path(stem);
    let mut m = read_manifest(&mpath)?;
    let version = m.remove("file.version").unwrap_or_default();
    if version != FORMAT_VERSION {
        return Err(LabError::Version { path: mpath, found: version, expected: FORMAT_VERSION.into() });
    }
    let format = m
        .remove("file.format")
        .as_deref()
        .and_then(TrajectoryFormat::parse)
        .ok_or_else(|| LabError::format(&mpath, "missing or unknown `file.format`"))?;
    let rows: usize = m
        .remove("file.rows")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| LabError::format(&mpath, "missing `file.rows`"))?;
    let expected = m.remove("file.sha256").unwrap_or_default();
    let dpath = data_path(stem, format);
    let bytes = fs::read(&dpath).map_err(|e| LabError::io(&dpath, e))?;
    if sha256_hex(&bytes) != expected {
        return Err(LabError::Checksum { path: dpath });
    }
    let columns = decode(&bytes, format, rows, &dpath)?;
    let failure = failure_from(&m, &mpath)?;
    Ok(Trajectory { columns, manifest: m, failure })
}

/// Writes a table with a header row; floats in round-trip form.
pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), LabError> {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn cell(v: f64) -> String {
    format!("{v:?}")
}
