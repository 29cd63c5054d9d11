//! Picard iteration of the classical (`alpha = 1`) integral equation.
//!
//! Eliminating one amplitude from the first-order system gives a
//! Klein-Gordon equation for each component,
//!
//! ```text
//! (d_tt - d_xx + sigma^2) E_0 = i sigma  i (f_t + f_x) e^{ if} E_h
//! (d_tt - d_xx + sigma^2) E_h = i sigma -i (f_t - f_x) e^{-if} E_0
//! ```
//!
//! whose solution is the Green-function integral of the source over the
//! backward light cone plus the Cauchy-data terms
//! `(u0(x-t) + u0(x+t))/2 + int [dG/dt u0 + G u1] du` with
//! `u1 = dE/dt(x, 0)` read off the first-order system. The sources couple
//! the components, so the equation is iterated to a fixed point.
//!
//! Discretisation needs `dt = dx = h`: the light-cone edges then pass
//! through lattice nodes and both the cone integral and the data integral
//! are trapezoidal sums. Sources outside the window are taken as zero;
//! the initial data are evaluated from the profile wherever needed.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{FieldGrid, FieldSolver, GridSpec};
use crate::closedform::{DiffractionParams, InitialProfile};
use crate::error::{Error, Result};
use crate::specfun::{bessel_j0, j1_over_arg};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The `picard` strategy.
#[derive(Debug, Clone, Copy)]
pub struct PicardSolver {
    pub max_iters: usize,
    pub fix_tol: f64,
}

impl Default for PicardSolver {
    fn default() -> Self {
        Self {
            max_iters: 100,
            fix_tol: 1e-11,
        }
    }
}

impl FieldSolver for PicardSolver {
    fn name(&self) -> &'static str {
        "picard"
    }

    fn supports(&self, params: &DiffractionParams, init: &InitialProfile) -> Result<()> {
        if params.alpha != 1.0 {
            return Err(Error::InvalidArgument(format!(
                "the Picard solver handles the classical case alpha = 1 only, got {}",
                params.alpha
            )));
        }
        init.validate()
    }

    fn solve(&self, params: &DiffractionParams, init: &InitialProfile, grid: &GridSpec) -> Result<FieldGrid> {
        solve_picard_classical(params, init, grid, self.max_iters, self.fix_tol)
    }
}

/// Lattice tables shared by all iterations.
struct Tables {
    h: f64,
    nx: usize,
    nt: usize,
    /// `G(j h, k h)` for `0 <= j <= k`, row `k` starting at `k (k + 1) / 2`
    g: Vec<Complex64>,
    /// source prefactors at every window node
    p0: Vec<Complex64>,
    ph: Vec<Complex64>,
}

impl Tables {
    fn g(&self, k: usize, j: usize) -> Complex64 {
        self.g[k * (k + 1) / 2 + j]
    }
}

pub fn solve_picard_classical(
    params: &DiffractionParams,
    init: &InitialProfile,
    grid: &GridSpec,
    max_iters: usize,
    fix_tol: f64,
) -> Result<FieldGrid> {
    grid.validate()?;
    PicardSolver { max_iters, fix_tol }.supports(params, init)?;
    let (h, dx) = (grid.dt(), grid.dx());
    if (h - dx).abs() > 1e-12 * dx {
        return Err(Error::InvalidArgument(format!("the Picard lattice needs dt = dx, got dt = {h}, dx = {dx}")));
    }
    if !(fix_tol > 0.0) || max_iters == 0 {
        return Err(Error::InvalidArgument("need fix_tol > 0 and max_iters >= 1".into()));
    }
    let (nx, nt) = (grid.nx, grid.nt);
    let sigma = params.sigma;
    let phase = &params.phase;

    let mut g = Vec::with_capacity((nt + 1) * (nt + 2) / 2);
    for k in 0..=nt {
        for j in 0..=k {
            let rho = h * (((k * k - j * j) as f64).sqrt());
            g.push(0.5 * bessel_j0(sigma * rho)?);
        }
    }
    let w = nx + 1;
    let mut p0 = vec![Complex64::default(); (nt + 1) * w];
    let mut ph = vec![Complex64::default(); (nt + 1) * w];
    if !phase.is_zero() {
        for n in 0..=nt {
            for i in 0..=nx {
                let (x, t) = (grid.x(i), grid.t(n));
                let (f, fx, ft) = (phase.eval(x, t)?, phase.eval_dx(x, t)?, phase.eval_dt(x, t)?);
                p0[n * w + i] = I * sigma * I * (ft + fx) * Complex64::from_polar(1.0, f);
                ph[n * w + i] = I * sigma * (-I) * (ft - fx) * Complex64::from_polar(1.0, -f);
            }
        }
    }
    let tables = Tables { h, nx, nt, g, p0, ph };

    let base = cauchy_terms(params, init, grid)?;
    let mut current = base.clone();
    let mut residual = f64::INFINITY;
    for _ in 0..max_iters {
        let next = iterate(&tables, &base, &current);
        next.check_all_finite()?;
        residual = next.sup_diff(&current)?;
        current = next;
        if residual < fix_tol {
            return Ok(current);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        residual,
    })
}

impl FieldGrid {
    fn check_all_finite(&self) -> Result<()> {
        match self.first_non_finite() {
            Some((level, index)) => Err(Error::NonFiniteField { level, index }),
            None => Ok(()),
        }
    }
}

/// Solution of the source-free problem: d'Alembert part plus the Bessel
/// integral of the Cauchy data over `[x - t, x + t]`, trapezoidal on the
/// lattice.
fn cauchy_terms(params: &DiffractionParams, init: &InitialProfile, grid: &GridSpec) -> Result<FieldGrid> {
    let (h, nx, nt) = (grid.dt(), grid.nx, grid.nt);
    let sigma = params.sigma;
    // data on the extended lattice x_min + (l - nt) h, l = 0..nx + 2 nt
    let ext = nx + 2 * nt + 1;
    let mut d0 = Vec::with_capacity(ext);
    let mut dh = Vec::with_capacity(ext);
    let mut v0 = Vec::with_capacity(ext);
    let mut vh = Vec::with_capacity(ext);
    for l in 0..ext {
        let x = grid.x_min + (l as f64 - nt as f64) * h;
        let (e0, eh) = init.values(x);
        let (e0x, ehx) = init.derivatives(x);
        let f = if params.phase.is_zero() { 0.0 } else { params.phase.eval(x, 0.0)? };
        let k = Complex64::from_polar(1.0, f);
        v0.push(e0);
        vh.push(eh);
        d0.push(e0x + I * sigma * k * eh);
        dh.push(-ehx + I * sigma * k.conj() * e0);
    }
    let mut field = FieldGrid::with_initial(*grid, init);
    let rows: Vec<Vec<(Complex64, Complex64)>> = (1..=nt)
        .into_par_iter()
        .map(|n| -> Result<Vec<(Complex64, Complex64)>> {
            let tau = n as f64 * h;
            let mut gk = Vec::with_capacity(n + 1);
            let mut gt = Vec::with_capacity(n + 1);
            for j in 0..=n {
                let rho = h * (((n * n - j * j) as f64).sqrt());
                gk.push(0.5 * bessel_j0(sigma * rho)?);
                gt.push(-0.5 * sigma * sigma * tau * j1_over_arg(sigma * rho)?);
            }
            let mut row = Vec::with_capacity(nx + 1);
            for i in 0..=nx {
                let c = i + nt;
                let mut a0 = 0.5 * (v0[c - n] + v0[c + n]);
                let mut ah = 0.5 * (vh[c - n] + vh[c + n]);
                for (j, (&gj, &tj)) in gk.iter().zip(&gt).enumerate() {
                    let wj = if j == n { 0.5 * h } else { h };
                    let mut add = |l: usize| {
                        a0 += wj * (tj * v0[l] + gj * d0[l]);
                        ah += wj * (tj * vh[l] + gj * dh[l]);
                    };
                    add(c + j);
                    if j > 0 {
                        add(c - j);
                    }
                }
                row.push((a0, ah));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    for (n, row) in rows.into_iter().enumerate() {
        let (r0, rh) = field.rows_mut(n + 1);
        for (i, (a, b)) in row.into_iter().enumerate() {
            r0[i] = a;
            rh[i] = b;
        }
    }
    Ok(field)
}

/// One application of `E <- A E + B`.
fn iterate(tab: &Tables, base: &FieldGrid, current: &FieldGrid) -> FieldGrid {
    let (nx, nt, h) = (tab.nx, tab.nt, tab.h);
    let w = nx + 1;
    // sources on the window lattice
    let mut s0 = vec![Complex64::default(); (nt + 1) * w];
    let mut sh = vec![Complex64::default(); (nt + 1) * w];
    for m in 0..=nt {
        let (r0, rh) = (current.row_e0(m), current.row_eh(m));
        for i in 0..w {
            s0[m * w + i] = tab.p0[m * w + i] * rh[i];
            sh[m * w + i] = tab.ph[m * w + i] * r0[i];
        }
    }
    let mut next = base.clone();
    let rows: Vec<Vec<(Complex64, Complex64)>> = (1..=nt)
        .into_par_iter()
        .map(|n| {
            let mut row = Vec::with_capacity(w);
            for i in 0..w {
                let mut a0 = Complex64::default();
                let mut ah = Complex64::default();
                for m in 0..n {
                    let k = n - m;
                    let wv = if m == 0 { 0.5 } else { 1.0 };
                    let lo = i as i64 - k as i64;
                    let hi = i as i64 + k as i64;
                    let mut r0 = Complex64::default();
                    let mut rh = Complex64::default();
                    for l in lo.max(0)..=hi.min(nx as i64) {
                        let j = (l - i as i64).unsigned_abs() as usize;
                        let wu = if j == k { 0.5 } else { 1.0 };
                        let gw = tab.g(k, j) * wu;
                        let idx = m * w + l as usize;
                        r0 += gw * s0[idx];
                        rh += gw * sh[idx];
                    }
                    a0 += wv * r0;
                    ah += wv * rh;
                }
                row.push((h * h * a0, h * h * ah));
            }
            row
        })
        .collect();
    for (n, row) in rows.into_iter().enumerate() {
        let (r0, rh) = next.rows_mut(n + 1);
        for (i, (a, b)) in row.into_iter().enumerate() {
            r0[i] += a;
            rh[i] += b;
        }
    }
    next
}
