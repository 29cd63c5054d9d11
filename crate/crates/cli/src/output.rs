//! Field CSV, run manifest and atomic file writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use ftt_core::closedform::{plane_wave_solution, DiffractionParams, InitialProfile};
use ftt_core::solver::FieldGrid;

use crate::config::RunConfig;
use crate::CliError;

pub const CSV_HEADER: [&str; 6] = ["x", "t", "re_e0", "im_e0", "re_eh", "im_eh"];

/// 17 significant digits, locale independent.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// The grid as CSV, row-major over `t` then `x`.
pub fn field_csv(field: &FieldGrid) -> Result<Vec<u8>, CliError> {
    let g = *field.spec();
    let mut w = csv::Writer::from_writer(Vec::with_capacity(g.points() * 150));
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for n in 0..=g.nt {
        let t = fmt_f64(g.t(n));
        for i in 0..=g.nx {
            let (a, b) = (field.e0(n, i), field.eh(n, i));
            w.write_record([fmt_f64(g.x(i)), t.clone(), fmt_f64(a.re), fmt_f64(a.im), fmt_f64(b.re), fmt_f64(b.im)])
                .map_err(io)?;
        }
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Summary numbers stored in the manifest. All but `plane_wave_gap` can be
/// recomputed from the CSV alone.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunMetrics {
    /// Largest `|E_0|` or `|E_h|` on the grid.
    pub max_abs: f64,
    /// Largest change of `|E_0|^2 + |E_h|^2` from its initial value at the
    /// same `x`; zero up to rounding for `alpha = 1`, `kappa = 0` and an
    /// `x`-independent field.
    pub intensity_drift: f64,
    /// Distance to the closed-form plane-wave solution, when it applies.
    pub plane_wave_gap: Option<f64>,
}

pub fn metrics(field: &FieldGrid, params: &DiffractionParams, init: &InitialProfile) -> Result<RunMetrics, CliError> {
    let g = *field.spec();
    let intensity = |n, i| field.e0(n, i).norm_sqr() + field.eh(n, i).norm_sqr();
    let mut drift: f64 = 0.0;
    for n in 1..=g.nt {
        for i in 0..=g.nx {
            drift = drift.max((intensity(n, i) - intensity(0, i)).abs());
        }
    }
    let plane_wave_gap = match init {
        InitialProfile::PlaneWave { e0, eh } if params.phase.is_zero() => {
            let mut worst: f64 = 0.0;
            for n in 0..=g.nt {
                let (w0, wh): (Complex64, Complex64) = plane_wave_solution(params, *e0, *eh, g.t(n))?;
                for i in 0..=g.nx {
                    worst = worst.max((field.e0(n, i) - w0).norm()).max((field.eh(n, i) - wh).norm());
                }
            }
            Some(worst)
        }
        _ => None,
    };
    Ok(RunMetrics {
        max_abs: field.max_abs(),
        intensity_drift: drift,
        plane_wave_gap,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    /// Seconds since the Unix epoch when the run started.
    pub started_unix: f64,
    pub runtime_seconds: f64,
    pub grid_points: usize,
    /// SHA-256 of the CSV file contents.
    pub grid_sha256: String,
    pub csv_file: String,
    pub metrics: RunMetrics,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Paths of the two outputs of a run.
pub fn output_paths(cfg: &RunConfig) -> (PathBuf, PathBuf) {
    (cfg.out.join(format!("{}.csv", cfg.name)), cfg.out.join(format!("{}.json", cfg.name)))
}
