//! Flat TOML run configuration with command-line overrides.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use ftt_core::closedform::{DiffractionParams, InitialProfile, ProfileTable};
use ftt_core::phasefn::PhaseExpr;
use ftt_core::solver::GridSpec;

use crate::CliError;

/// Initial-profile family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    PlaneWave,
    Gaussian,
    Table,
}

/// One simulation, as read from the config file. Every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub kappa: f64,
    /// Expression or preset for `f(x, t)`.
    pub phase: String,
    pub init: InitKind,
    /// Plane-wave amplitudes.
    pub e0_re: f64,
    pub e0_im: f64,
    pub eh_re: f64,
    pub eh_im: f64,
    /// Gaussian beam `exp(-((x - center) / width)^2)` in `E_0`.
    pub center: f64,
    pub width: f64,
    /// CSV with columns `x,re_e0,im_e0,re_eh,im_eh`, relative to the config file.
    pub table: Option<PathBuf>,
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_max: f64,
    pub nt: usize,
    pub solver: String,
    /// Output directory, relative to the working directory.
    pub out: PathBuf,
    /// File stem for `<stem>.csv` and `<stem>.json`.
    pub name: String,
    /// Recorded in the manifest; the solvers themselves are deterministic.
    pub seed: u64,
    pub picard_max_iters: usize,
    pub picard_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            kappa: 0.0,
            phase: "zero".into(),
            init: InitKind::PlaneWave,
            e0_re: 1.0,
            e0_im: 0.0,
            eh_re: 0.0,
            eh_im: 0.0,
            center: 0.0,
            width: 1.0,
            table: None,
            x_min: -4.0,
            x_max: 4.0,
            nx: 256,
            t_max: 2.0,
            nt: 128,
            solver: "fd".into(),
            out: PathBuf::from("out"),
            name: "field".into(),
            seed: 0,
            picard_max_iters: 100,
            picard_tol: 1e-11,
        }
    }
}

/// Values given on the command line take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub kappa: Option<f64>,
    pub phase: Option<String>,
    pub solver: Option<String>,
    pub out: Option<PathBuf>,
}

/// Everything a run needs, validated.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub config: RunConfig,
    pub params: DiffractionParams,
    pub init: InitialProfile,
    pub grid: GridSpec,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if let (Some(t), Some(dir)) = (&cfg.table, path.parent()) {
            if t.is_relative() {
                cfg.table = Some(dir.join(t));
            }
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.alpha {
            self.alpha = v;
        }
        if let Some(v) = o.kappa {
            self.kappa = v;
        }
        if let Some(v) = &o.phase {
            self.phase = v.clone();
        }
        if let Some(v) = &o.solver {
            self.solver = v.clone();
        }
        if let Some(v) = &o.out {
            self.out = v.clone();
        }
    }

    /// Check the combination and build the core objects.
    pub fn resolve(self) -> Result<ResolvedRun, CliError> {
        let cfg = |m: String| CliError::Config(m);
        let phase: PhaseExpr = self.phase.parse().map_err(|e| cfg(format!("phase '{}': {e}", self.phase)))?;
        let params = DiffractionParams::new(self.alpha, self.kappa, phase).map_err(|e| cfg(e.to_string()))?;
        let grid = GridSpec::new(self.x_min, self.x_max, self.nx, self.t_max, self.nt).map_err(|e| cfg(e.to_string()))?;
        let init = match self.init {
            InitKind::PlaneWave => InitialProfile::PlaneWave {
                e0: Complex64::new(self.e0_re, self.e0_im),
                eh: Complex64::new(self.eh_re, self.eh_im),
            },
            InitKind::Gaussian => InitialProfile::Gaussian {
                center: self.center,
                width: self.width,
            },
            InitKind::Table => {
                let path = self.table.as_ref().ok_or_else(|| cfg("init = \"table\" needs a 'table' path".into()))?;
                InitialProfile::Table(read_table(path)?)
            }
        };
        init.validate().map_err(|e| cfg(e.to_string()))?;
        match self.solver.as_str() {
            "picard" => {
                if self.alpha != 1.0 {
                    return Err(cfg(format!("solver = \"picard\" requires alpha = 1, got {}", self.alpha)));
                }
                if (grid.dt() - grid.dx()).abs() > 1e-12 * grid.dx() {
                    return Err(cfg(format!("solver = \"picard\" requires dt = dx, got {} and {}", grid.dt(), grid.dx())));
                }
            }
            "closed_form" if !params.phase.is_zero() => {
                return Err(cfg(format!("solver = \"closed_form\" requires phase 0, got '{}'", self.phase)));
            }
            _ => {}
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(cfg(format!("bad output name '{}'", self.name)));
        }
        Ok(ResolvedRun {
            config: self,
            params,
            init,
            grid,
        })
    }
}

#[derive(Debug, Deserialize)]
struct TableRow {
    x: f64,
    re_e0: f64,
    im_e0: f64,
    re_eh: f64,
    im_eh: f64,
}

fn read_table(path: &Path) -> Result<ProfileTable, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let (mut x, mut e0, mut eh) = (Vec::new(), Vec::new(), Vec::new());
    for row in reader.deserialize() {
        let r: TableRow = row.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        x.push(r.x);
        e0.push(Complex64::new(r.re_e0, r.im_e0));
        eh.push(Complex64::new(r.re_eh, r.im_eh));
    }
    ProfileTable::new(x, e0, eh).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
