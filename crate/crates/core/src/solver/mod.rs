//! Numerical solution of the Cauchy problem on a rectangular `(x, t)` grid.
//!
//! Three strategies share the [`FieldSolver`] interface and are looked up by
//! name in a [`SolverRegistry`]:
//!
//! * `fd`: time marching, L1 Caputo memory plus implicit upwind differences
//!   for `alpha < 1`, characteristic Crank-Nicolson for `alpha = 1`;
//! * `picard`: fixed-point iteration of the classical integral equation
//!   (`alpha = 1` only);
//! * `closed_form`: the perfect-crystal solution sampled on the grid.
//!
//! The window is not padded automatically. Lateral boundaries use
//! zero-gradient ghost values, so the caller should make the window wide
//! enough (by at least `t_max` beyond the region of interest) that nothing
//! reaches the edges.

mod closed;
mod fd;
mod picard;

use num_complex::Complex64;

use crate::closedform::{plane_wave_solution, DiffractionParams, InitialProfile};
use crate::error::{Error, Result};

pub use closed::ClosedFormSolver;
pub use fd::{solve_fd, FdSolver, L1Weights};
pub use picard::{solve_picard_classical, PicardSolver};

/// Uniform grid on `[x_min, x_max] x [0, t_max]` with `nx` and `nt` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_max: f64,
    pub nt: usize,
}

impl GridSpec {
    /// Checked constructor; enforces `dt <= dx`.
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_max: f64, nt: usize) -> Result<Self> {
        let g = Self {
            x_min,
            x_max,
            nx,
            t_max,
            nt,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(Error::InvalidArgument(format!("bad x window [{}, {}]", self.x_min, self.x_max)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) || self.nx == 0 || self.nt == 0 {
            return Err(Error::InvalidArgument(format!("need t_max > 0, nx >= 1, nt >= 1, got {self:?}")));
        }
        let (dt, dx) = (self.dt(), self.dx());
        // tolerate the rounding of equal steps computed from different spans
        if dt > dx * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt, dx });
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.nt as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt()
    }

    /// The grid with both step sizes halved.
    pub fn refined(&self) -> Self {
        Self {
            nx: 2 * self.nx,
            nt: 2 * self.nt,
            ..*self
        }
    }

    pub fn points(&self) -> usize {
        (self.nt + 1) * (self.nx + 1)
    }
}

/// Both amplitudes at every grid node, stored row-major (time level, then x).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    spec: GridSpec,
    e0: Vec<Complex64>,
    eh: Vec<Complex64>,
}

impl FieldGrid {
    /// Zero field with row 0 set to the initial profile.
    pub fn with_initial(spec: GridSpec, init: &InitialProfile) -> Self {
        let len = spec.points();
        let mut g = Self {
            spec,
            e0: vec![Complex64::default(); len],
            eh: vec![Complex64::default(); len],
        };
        for i in 0..=spec.nx {
            let (a, b) = init.values(spec.x(i));
            g.e0[i] = a;
            g.eh[i] = b;
        }
        g
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    fn idx(&self, n: usize, i: usize) -> usize {
        n * (self.spec.nx + 1) + i
    }

    pub fn e0(&self, n: usize, i: usize) -> Complex64 {
        self.e0[self.idx(n, i)]
    }

    pub fn eh(&self, n: usize, i: usize) -> Complex64 {
        self.eh[self.idx(n, i)]
    }

    pub fn row_e0(&self, n: usize) -> &[Complex64] {
        let w = self.spec.nx + 1;
        &self.e0[n * w..(n + 1) * w]
    }

    pub fn row_eh(&self, n: usize) -> &[Complex64] {
        let w = self.spec.nx + 1;
        &self.eh[n * w..(n + 1) * w]
    }

    pub(crate) fn rows_mut(&mut self, n: usize) -> (&mut [Complex64], &mut [Complex64]) {
        let w = self.spec.nx + 1;
        (&mut self.e0[n * w..(n + 1) * w], &mut self.eh[n * w..(n + 1) * w])
    }

    /// Largest modulus of either amplitude.
    pub fn max_abs(&self) -> f64 {
        self.e0.iter().chain(self.eh.iter()).map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// First non-finite entry as `(level, index)`.
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        let w = self.spec.nx + 1;
        (0..self.e0.len())
            .find(|&k| !crate::specfun::is_finite(self.e0[k]) || !crate::specfun::is_finite(self.eh[k]))
            .map(|k| (k / w, k % w))
    }

    pub(crate) fn check_finite(&self, level: usize) -> Result<()> {
        let w = self.spec.nx + 1;
        let (a, b) = (self.row_e0(level), self.row_eh(level));
        match (0..w).find(|&i| !crate::specfun::is_finite(a[i]) || !crate::specfun::is_finite(b[i])) {
            Some(index) => Err(Error::NonFiniteField { level, index }),
            None => Ok(()),
        }
    }

    /// Sup-norm distance to a grid with the same spec.
    pub fn sup_diff(&self, other: &FieldGrid) -> Result<f64> {
        if self.spec != other.spec {
            return Err(Error::InvalidArgument("grids differ".into()));
        }
        Ok(self
            .e0
            .iter()
            .zip(&other.e0)
            .chain(self.eh.iter().zip(&other.eh))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Sup-norm distance to `other` restricted to x in `[lo, hi]`, comparing
    /// this grid's nodes with the matching nodes of a grid refined by an
    /// integer factor.
    pub fn sup_diff_coarse(&self, fine: &FieldGrid, lo: f64, hi: f64) -> Result<f64> {
        let (c, f) = (self.spec, fine.spec);
        if f.nx % c.nx != 0 || f.nt % c.nt != 0 || f.nx / c.nx != f.nt / c.nt || c.x_min != f.x_min || c.x_max != f.x_max {
            return Err(Error::InvalidArgument("fine grid is not a refinement of this grid".into()));
        }
        let r = f.nx / c.nx;
        let mut worst: f64 = 0.0;
        for n in 0..=c.nt {
            for i in (0..=c.nx).filter(|&i| (lo..=hi).contains(&c.x(i))) {
                worst = worst
                    .max((self.e0(n, i) - fine.e0(n * r, i * r)).norm())
                    .max((self.eh(n, i) - fine.eh(n * r, i * r)).norm());
            }
        }
        Ok(worst)
    }
}

/// A strategy for filling a [`FieldGrid`].
pub trait FieldSolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether the solver can handle these parameters and data.
    fn supports(&self, params: &DiffractionParams, init: &InitialProfile) -> Result<()>;

    fn solve(&self, params: &DiffractionParams, init: &InitialProfile, grid: &GridSpec) -> Result<FieldGrid>;
}

/// Solvers selectable by name.
pub struct SolverRegistry {
    solvers: Vec<Box<dyn FieldSolver>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(FdSolver));
        r.register(Box::new(PicardSolver::default()));
        r.register(Box::new(ClosedFormSolver::default()));
        r
    }
}

impl SolverRegistry {
    pub fn empty() -> Self {
        Self { solvers: Vec::new() }
    }

    /// Add a solver, replacing any existing one with the same name.
    pub fn register(&mut self, solver: Box<dyn FieldSolver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn FieldSolver> {
        self.solvers.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }
}

/// Result of a refinement study.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    /// Observed order from the last two errors; infinite if they vanish.
    pub order: f64,
    /// Error (or successive-difference) per level, coarsest first.
    pub errors: Vec<f64>,
}

/// Run [`solve_fd`] on `levels` dyadically refined grids and estimate the
/// order of convergence. For a perfect crystal with plane-wave data the
/// error is measured against the closed form; otherwise the sup-norm
/// differences between successive levels are used.
pub fn refine_and_estimate_order(
    params: &DiffractionParams,
    init: &InitialProfile,
    base_grid: &GridSpec,
    levels: usize,
) -> Result<OrderEstimate> {
    if levels < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 levels, got {levels}")));
    }
    let mut grids = vec![*base_grid];
    for _ in 1..levels {
        let last = grids[grids.len() - 1];
        grids.push(last.refined());
    }
    let oracle = match init {
        InitialProfile::PlaneWave { e0, eh } if params.phase.is_zero() => Some((*e0, *eh)),
        _ => None,
    };
    let errors = match oracle {
        Some((a, b)) => {
            let mut errors = Vec::with_capacity(levels);
            for g in &grids {
                let field = solve_fd(params, init, g)?;
                let mut worst: f64 = 0.0;
                for n in 0..=g.nt {
                    let (w0, wh) = plane_wave_solution(params, a, b, g.t(n))?;
                    for i in 0..=g.nx {
                        worst = worst.max((field.e0(n, i) - w0).norm()).max((field.eh(n, i) - wh).norm());
                    }
                }
                errors.push(worst);
            }
            errors
        }
        None => {
            let fields = grids.iter().map(|g| solve_fd(params, init, g)).collect::<Result<Vec<_>>>()?;
            let (lo, hi) = (base_grid.x_min, base_grid.x_max);
            fields
                .windows(2)
                .map(|w| w[0].sup_diff_coarse(&w[1], lo, hi))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let k = errors.len();
    let (e1, e2) = (errors[k - 2], errors[k - 1]);
    let order = if e1 == 0.0 && e2 == 0.0 {
        f64::INFINITY
    } else {
        (e1 / e2).log2()
    };
    Ok(OrderEstimate { order, errors })
}
