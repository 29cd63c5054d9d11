//! Time-marching finite-difference solver for
//!
//! ```text
//! d^a E_0 - dE_0/dx = i sigma e^{ i f} E_h
//! d^a E_h + dE_h/dx = i sigma e^{-i f} E_0
//! ```
//!
//! For `alpha < 1` the Caputo derivative uses the L1 discretisation with full
//! memory, `dx` uses upwind differences (forward for `E_0`, backward for
//! `E_h`), and each level is implicit in both transport and coupling; the
//! resulting 2x2 block-bidiagonal system is solved by block elimination.
//!
//! For `alpha = 1` each amplitude is integrated along its own
//! characteristic with the trapezoidal rule (the foot value is linearly
//! interpolated, exact when `dt = dx`), which is second order and exactly
//! unitary for real `sigma`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{FieldGrid, FieldSolver, GridSpec};
use crate::closedform::{DiffractionParams, InitialProfile};
use crate::error::Result;
use crate::specfun::gamma;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// L1 memory weights `b_j = (j+1)^(1-a) - j^(1-a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights {
    pub alpha: f64,
    pub b: Vec<f64>,
}

impl L1Weights {
    pub fn new(alpha: f64, n: usize) -> Self {
        let e = 1.0 - alpha;
        let b = (0..n).map(|j| ((j + 1) as f64).powf(e) - (j as f64).powf(e)).collect();
        Self { alpha, b }
    }

    /// `sum_{j<n} b_j`, which telescopes to `n^(1-a)`.
    pub fn partial_sum(&self, n: usize) -> f64 {
        self.b[..n].iter().sum()
    }
}

/// The `fd` strategy.
#[derive(Debug, Clone, Copy, Default)]
pub struct FdSolver;

impl FieldSolver for FdSolver {
    fn name(&self) -> &'static str {
        "fd"
    }

    fn supports(&self, _params: &DiffractionParams, init: &InitialProfile) -> Result<()> {
        init.validate()
    }

    fn solve(&self, params: &DiffractionParams, init: &InitialProfile, grid: &GridSpec) -> Result<FieldGrid> {
        solve_fd(params, init, grid)
    }
}

pub fn solve_fd(params: &DiffractionParams, init: &InitialProfile, grid: &GridSpec) -> Result<FieldGrid> {
    grid.validate()?;
    init.validate()?;
    let mut field = FieldGrid::with_initial(*grid, init);
    field.check_finite(0)?;
    if params.alpha == 1.0 {
        march_characteristic(params, &mut field)?;
    } else {
        march_l1(params, &mut field)?;
    }
    Ok(field)
}

fn march_characteristic(params: &DiffractionParams, field: &mut FieldGrid) -> Result<()> {
    let g = *field.spec();
    let (dt, dx, nx) = (g.dt(), g.dx(), g.nx);
    let theta = (dt / dx).min(1.0);
    let a = 0.5 * I * params.sigma * dt;
    let zero_phase = params.phase.is_zero();
    let mut k0 = vec![Complex64::new(1.0, 0.0); nx + 1];
    let mut kh = vec![Complex64::new(1.0, 0.0); nx + 1];
    for n in 0..g.nt {
        let t_mid = g.t(n) + 0.5 * dt;
        if !zero_phase {
            for i in 0..=nx {
                let x = g.x(i);
                k0[i] = Complex64::from_polar(1.0, params.phase.eval(x + 0.5 * dt, t_mid)?);
                kh[i] = Complex64::from_polar(1.0, -params.phase.eval(x - 0.5 * dt, t_mid)?);
            }
        }
        let (prev0, prevh) = (field.row_e0(n).to_vec(), field.row_eh(n).to_vec());
        let (next0, nexth) = field.rows_mut(n + 1);
        for i in 0..=nx {
            let (r, l) = ((i + 1).min(nx), i.saturating_sub(1));
            // E_0 travels towards -x, so its foot is at x + dt; E_h the other way
            let lerp = |v: &[Complex64], j: usize| v[i] + theta * (v[j] - v[i]);
            let f0 = (lerp(&prev0, r), lerp(&prevh, r));
            let fh = (lerp(&prev0, l), lerp(&prevh, l));
            let r0 = f0.0 + a * k0[i] * f0.1;
            let rh = fh.1 + a * kh[i] * fh.0;
            let e0 = (r0 + a * k0[i] * rh) / (1.0 - a * a * k0[i] * kh[i]);
            next0[i] = e0;
            nexth[i] = rh + a * kh[i] * e0;
        }
        field.check_finite(n + 1)?;
    }
    Ok(())
}

type M2 = [[Complex64; 2]; 2];

fn inv2(m: &M2) -> M2 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

fn apply2(a: &M2, v: [Complex64; 2]) -> [Complex64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

const CHUNK: usize = 256;

fn march_l1(params: &DiffractionParams, field: &mut FieldGrid) -> Result<()> {
    let g = *field.spec();
    let (dt, dx, nx, nt) = (g.dt(), g.dx(), g.nx, g.nt);
    let alpha = params.alpha;
    let c = dt.powf(-alpha) / gamma(2.0 - alpha)?;
    let weights = L1Weights::new(alpha, nt);
    let is = I * params.sigma;
    let w = nx + 1;
    let zero_phase = params.phase.is_zero();

    // increments u^k - u^(k-1), k = 1..=n
    let mut inc0: Vec<Vec<Complex64>> = Vec::with_capacity(nt);
    let mut inch: Vec<Vec<Complex64>> = Vec::with_capacity(nt);
    let mut hist0 = vec![Complex64::default(); w];
    let mut histh = vec![Complex64::default(); w];
    let mut k = vec![Complex64::new(1.0, 0.0); w];
    let mut dprime: Vec<M2> = vec![[[Complex64::default(); 2]; 2]; w];
    let mut rprime: Vec<[Complex64; 2]> = vec![[Complex64::default(); 2]; w];

    for n in 0..nt {
        // memory term for level n + 1: sum_{j=1}^{n} b_j (u^(n+1-j) - u^(n-j))
        let fill = |hist: &mut [Complex64], inc: &[Vec<Complex64>]| {
            hist.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, out)| {
                let start = ci * CHUNK;
                out.iter_mut().for_each(|v| *v = Complex64::default());
                for j in 1..=n {
                    let src = &inc[n - j][start..start + out.len()];
                    let bj = weights.b[j];
                    for (o, s) in out.iter_mut().zip(src) {
                        *o += bj * s;
                    }
                }
            });
        };
        fill(&mut hist0, &inc0);
        fill(&mut histh, &inch);

        let t_next = g.t(n + 1);
        if !zero_phase {
            for (i, ki) in k.iter_mut().enumerate() {
                *ki = Complex64::from_polar(1.0, params.phase.eval(g.x(i), t_next)?);
            }
        }
        let (prev0, prevh) = (field.row_e0(n).to_vec(), field.row_eh(n).to_vec());

        // forward elimination; lower coupling only in the E_h row (-1/dx on
        // E_h[i-1]), upper coupling only in the E_0 row (-1/dx on E_0[i+1])
        let inv_dx = 1.0 / dx;
        for i in 0..w {
            let s0 = if i < nx { inv_dx } else { 0.0 };
            let sh = if i > 0 { inv_dx } else { 0.0 };
            let mut d: M2 = [
                [Complex64::from(c + s0), -is * k[i]],
                [-is * k[i].conj(), Complex64::from(c + sh)],
            ];
            // unknowns are the increments u^(n+1) - u^n, so the right-hand
            // side is the residual of the old level and constants stay exact
            let grad0 = if i < nx { (prev0[i + 1] - prev0[i]) * inv_dx } else { Complex64::default() };
            let gradh = if i > 0 { (prevh[i] - prevh[i - 1]) * inv_dx } else { Complex64::default() };
            let mut r = [
                -c * hist0[i] + grad0 + is * k[i] * prevh[i],
                -c * histh[i] - gradh + is * k[i].conj() * prev0[i],
            ];
            if i > 0 {
                // m = L_i D'^{-1}_{i-1}, L_i = [[0, 0], [0, -1/dx]]
                let dinv = inv2(&dprime[i - 1]);
                let m: M2 = [
                    [Complex64::default(), Complex64::default()],
                    [-inv_dx * dinv[1][0], -inv_dx * dinv[1][1]],
                ];
                // D'_i = D_i - m U_{i-1}, U = [[-1/dx, 0], [0, 0]]
                d[1][0] += m[1][0] * inv_dx;
                let rp = apply2(&m, rprime[i - 1]);
                r = [r[0] - rp[0], r[1] - rp[1]];
            }
            dprime[i] = d;
            rprime[i] = r;
        }
        let (next0, nexth) = field.rows_mut(n + 1);
        let mut delta = apply2(&inv2(&dprime[nx]), rprime[nx]);
        next0[nx] = prev0[nx] + delta[0];
        nexth[nx] = prevh[nx] + delta[1];
        for i in (0..nx).rev() {
            let r = [rprime[i][0] + inv_dx * delta[0], rprime[i][1]];
            delta = apply2(&inv2(&dprime[i]), r);
            next0[i] = prev0[i] + delta[0];
            nexth[i] = prevh[i] + delta[1];
        }
        field.check_finite(n + 1)?;
        let (now0, nowh) = (field.row_e0(n + 1), field.row_eh(n + 1));
        inc0.push(now0.iter().zip(&prev0).map(|(a, b)| a - b).collect());
        inch.push(nowh.iter().zip(&prevh).map(|(a, b)| a - b).collect());
    }
    Ok(())
}
