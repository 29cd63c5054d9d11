//! Wright function `phi(lambda, mu; z) = sum_n z^n / (n! Gamma(lambda n + mu))`
//! for `lambda > -1`, and the Mainardi kernel
//! `M_beta(s) = phi(-beta, 1 - beta; -s)`.
//!
//! Near the origin the defining series is used. On the negative real axis
//! with `lambda = -beta` the three kernels the solver needs
//! (`mu = 1 - beta`, `mu = 0`, `mu = beta`) are evaluated from Kanter's
//! integral representation instead: the series needs `exp(|z|^(1/(1-beta)))`
//! terms before it settles, which is hopeless for `beta` close to one.
//!
//! With `c = 1/(1-beta)` and
//! `U(t) = (sin(beta t)/sin t)^c * sin((1-beta) t)/sin(beta t)`,
//!
//! ```text
//! M_beta(s)             = 1/(pi (1-beta) s) * int_0^pi w exp(-w) dt,   w = s^c U(t)
//! phi(-beta, beta; -s)  = beta/pi * int_0^pi U^(beta-1) Gamma(2-beta, s^c U) dt
//! ```
//!
//! `U` increases monotonically from `U(0+)` to infinity, so the integrands
//! are unimodal (respectively decreasing) in `t` and the support can be
//! bracketed by bisection on `ln U`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma_q, ln_gamma, ln_recip_gamma_signed};
use super::{ComplexSum, SeriesControl};
use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod_15, integrate, QuadValue, QuadratureControl};

/// Series is preferred below this `|z|`.
const SERIES_SWITCH: f64 = 0.5;

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::Domain(format!("Mainardi order beta = {beta} outside [0, 1)")));
    }
    Ok(())
}

/// Upper bound for `ln |1/Gamma(x)|` that is smooth in `x`; used to decide
/// when the tail of the series is negligible (the true terms vanish at the
/// poles of Gamma, which would otherwise stop the summation early).
fn ln_recip_gamma_envelope(x: f64) -> f64 {
    if x >= 2.0 {
        -ln_gamma(x).unwrap_or(f64::INFINITY)
    } else if x > 0.0 {
        0.2
    } else {
        // |1/Gamma(x)| = |sin(pi x)| Gamma(1 - x) / pi
        ln_gamma(1.0 - x).unwrap_or(f64::INFINITY) - PI.ln()
    }
}

/// The defining power series, summed with compensation. Fails with a
/// convergence error if cancellation between terms would spoil the
/// requested accuracy.
pub fn wright_phi_series(lambda: f64, mu: f64, z: Complex64, control: &SeriesControl) -> Result<Complex64> {
    control.validate()?;
    if !(lambda > -1.0) || !lambda.is_finite() || !mu.is_finite() {
        return Err(Error::Domain(format!("Wright function needs lambda > -1, got lambda = {lambda}, mu = {mu}")));
    }
    if !super::is_finite(z) {
        return Err(Error::Domain(format!("non-finite Wright argument {z}")));
    }
    let ln_abs_z = z.norm().ln();
    let arg = z.arg();
    let mut sum = ComplexSum::default();
    let mut ln_fact = 0.0;
    let mut peak = f64::NEG_INFINITY;
    let mut prev_env = f64::INFINITY;
    for n in 0..control.max_terms {
        let nf = n as f64;
        if n > 0 {
            ln_fact += nf.ln();
        }
        let x = lambda * nf + mu;
        let ln_zn = if n == 0 { 0.0 } else { nf * ln_abs_z };
        if let Some((lrg, sign)) = ln_recip_gamma_signed(x) {
            let lnmag = ln_zn - ln_fact + lrg;
            if lnmag > 700.0 {
                return Err(Error::Overflow(format!("Wright series term {n} for z = {z}")));
            }
            peak = peak.max(lnmag);
            let phase = if n == 0 { 0.0 } else { nf * arg };
            sum.add(Complex64::from_polar(sign * lnmag.exp(), phase));
        }
        if z.norm() == 0.0 {
            return Ok(sum.value());
        }
        let env = ln_zn - ln_fact + ln_recip_gamma_envelope(x);
        let total = sum.value().norm();
        let small = env < (1e-17 * total).ln() || env < (1e-6 * control.abs_tol).ln();
        if n >= 2 && env < prev_env && small {
            let roundoff = peak.exp() * f64::EPSILON * (n as f64).sqrt();
            if !control.accepts(roundoff, total) {
                return Err(Error::convergence(
                    "Wright series",
                    format!("cancellation: peak term {:e}, value {total:e} at z = {z}", peak.exp()),
                ));
            }
            return Ok(sum.value());
        }
        prev_env = env;
    }
    Err(Error::convergence(
        "Wright series",
        format!("no convergence in {} terms for z = {z}", control.max_terms),
    ))
}

/// Kanter's function for a fixed order.
struct Kanter {
    beta: f64,
    c: f64,
    ln_u0: f64,
}

impl Kanter {
    fn new(beta: f64) -> Self {
        let c = 1.0 / (1.0 - beta);
        Self {
            beta,
            c,
            ln_u0: c * beta.ln() + ((1.0 - beta) / beta).ln(),
        }
    }

    fn ln_u(&self, t: f64) -> f64 {
        if t < 1e-8 {
            return self.ln_u0;
        }
        let sin_t = if t > 0.5 * PI { (PI - t).sin() } else { t.sin() };
        let sb = (self.beta * t).sin().ln();
        let sa = ((1.0 - self.beta) * t).sin().ln();
        self.c * (sb - sin_t.ln()) + sa - sb
    }

    /// Smallest `t` with `ln U(t) >= level` (0 when already met at the origin).
    fn theta_at(&self, level: f64) -> f64 {
        if level <= self.ln_u0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.ln_u(mid) < level {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Quadrature control for the Kanter integrals. `ln_w_max` bounds `ln w`
/// over the window: `exp(-w)` carries a relative rounding error of about
/// `w |ln w| eps`, which caps the attainable accuracy for large arguments.
/// The phase `ln u` carries a factor `1 / (1 - beta)`, which amplifies
/// rounding as `beta -> 1`.
fn tight(ln_w_max: f64, beta: f64) -> QuadratureControl {
    let noise = 20.0 * f64::EPSILON * ln_w_max.exp().max(1.0) * ln_w_max.abs().max(1.0);
    QuadratureControl {
        abs_tol: 0.0,
        rel_tol: noise.max(1e-13 / (1.0 - beta).min(1.0)),
        max_subdivisions: 400,
        tail_epsilon: 1e-300,
    }
}

/// Solve `ln w - w = level` on the branch `w < 1` (`upper = false`) or
/// `w > 1` (`upper = true`); returns `ln w`.
fn ln_w_level(level: f64, upper: bool) -> f64 {
    let (mut lo, mut hi): (f64, f64) = if upper { (0.0, 8.0) } else { (-800.0, 0.0) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = mid - mid.exp();
        // g increases on the lower branch, decreases on the upper one
        if (g > level) ^ upper {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn mainardi_kanter(beta: f64, s: f64) -> Result<f64> {
    let k = Kanter::new(beta);
    let ln_sc = k.c * s.ln();
    let ln_w0 = ln_sc + k.ln_u0;
    let (ln_w_lo, ln_g_max) = if ln_w0 >= 0.0 {
        (ln_w0, ln_w0 - ln_w0.exp())
    } else {
        (ln_w_level(-41.0, false), -1.0)
    };
    if ln_g_max < -745.0 {
        return Ok(0.0);
    }
    let ln_w_hi = ln_w_level(ln_g_max - 40.0, true);
    // ln U is flat at the origin, so inverting it there would turn rounding
    // in the level into a finite gap; start at 0 exactly instead
    let start = if ln_w0 >= 0.0 { 0.0 } else { k.theta_at(ln_w_lo - ln_sc) };
    let mut points = vec![start, k.theta_at(ln_w_hi - ln_sc)];
    for lw in [-3.0, 0.0, 1.5] {
        if lw > ln_w0 && lw < ln_w_hi {
            points.push(k.theta_at(lw - ln_sc));
        }
    }
    let integral = integrate(
        |t| {
            let ln_w = ln_sc + k.ln_u(t);
            Ok((ln_w - ln_w.exp()).exp())
        },
        &points,
        &tight(ln_w_hi, beta),
    )?;
    Ok(integral.value / (PI * (1.0 - beta) * s))
}

fn mu_beta_kanter(beta: f64, s: f64) -> Result<f64> {
    let k = Kanter::new(beta);
    let ln_sc = k.c * s.ln();
    let ln_w0 = ln_sc + k.ln_u0;
    let w_start = ln_w0.exp().max(1.0);
    let a = 2.0 - beta;
    let ln_gamma_a = ln_gamma(a)?;
    let mut points = vec![0.0, k.theta_at((w_start + 60.0).ln() - ln_sc)];
    for dw in [1.0, 5.0, 20.0] {
        points.push(k.theta_at((w_start + dw).ln() - ln_sc));
    }
    if ln_w0 < 0.0 {
        points.push(k.theta_at(-ln_sc));
    }
    let integral = integrate(
        |t| {
            let ln_u = k.ln_u(t);
            let w = (ln_sc + ln_u).exp();
            let q = gamma_q(a, w)?;
            Ok(((beta - 1.0) * ln_u + ln_gamma_a).exp() * q)
        },
        &points,
        &tight((w_start + 60.0).ln(), beta),
    )?;
    Ok(beta / PI * integral.value)
}

/// Mainardi kernel `M_beta(s)`, `0 <= beta < 1`.
pub fn mainardi(beta: f64, s: f64) -> Result<f64> {
    check_beta(beta)?;
    if !s.is_finite() {
        return Err(Error::Domain(format!("non-finite Mainardi argument {s}")));
    }
    if beta == 0.0 {
        return Ok((-s).exp());
    }
    if beta == 0.5 {
        return Ok((-0.25 * s * s).exp() / PI.sqrt());
    }
    if s > SERIES_SWITCH {
        return mainardi_kanter(beta, s);
    }
    Ok(wright_phi_series(-beta, 1.0 - beta, Complex64::new(-s, 0.0), &SeriesControl::default())?.re)
}

/// `phi(-beta, 0; -s) = beta s M_beta(s)`.
pub fn wright_kernel_mu0(beta: f64, s: f64) -> Result<f64> {
    Ok(beta * s * mainardi(beta, s)?)
}

/// `phi(-beta, beta; -s) = int_s^inf beta u M_beta(u) du`.
pub fn wright_kernel_mu_beta(beta: f64, s: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Ok(0.0);
    }
    if beta == 0.5 {
        return Ok((-0.25 * s * s).exp() / PI.sqrt());
    }
    if s > SERIES_SWITCH {
        return mu_beta_kanter(beta, s);
    }
    Ok(wright_phi_series(-beta, beta, Complex64::new(-s, 0.0), &SeriesControl::default())?.re)
}

/// `phi(-beta, mu; z)` with default series control, `0 < beta <= 1`.
pub fn wright_phi(beta: f64, mu: f64, z: Complex64) -> Result<Complex64> {
    wright_phi_with(beta, mu, z, &SeriesControl::default())
}

/// `phi(-beta, mu; z)`. Real negative arguments with `mu` one of
/// `1 - beta`, `0`, `beta` use the integral representation; everything else
/// goes through the series. At `beta = 1` the function is only defined at
/// `z = 0` (the kernels degenerate to distributions).
pub fn wright_phi_with(beta: f64, mu: f64, z: Complex64, control: &SeriesControl) -> Result<Complex64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain(format!("wright_phi needs beta in (0, 1], got {beta}")));
    }
    if beta == 1.0 {
        if z.norm() == 0.0 {
            return Ok(Complex64::from(super::recip_gamma(mu)));
        }
        return Err(Error::Domain("phi(-1, mu; z) is a distribution for z != 0".into()));
    }
    if z.im == 0.0 && z.re < -SERIES_SWITCH {
        let s = -z.re;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-15;
        if close(mu, 1.0 - beta) {
            return mainardi(beta, s).map(Complex64::from);
        }
        if mu == 0.0 {
            return wright_kernel_mu0(beta, s).map(Complex64::from);
        }
        if close(mu, beta) {
            return wright_kernel_mu_beta(beta, s).map(Complex64::from);
        }
    }
    wright_phi_series(-beta, mu, z, control)
}

/// Moment `int_0^inf s^n M_beta(s) ds = n! / Gamma(1 + beta n)`.
pub fn mainardi_moment(beta: f64, n: u32) -> f64 {
    let nf = n as f64;
    (ln_gamma(nf + 1.0).unwrap_or(0.0) - ln_gamma(1.0 + beta * nf).unwrap_or(0.0)).exp()
}

/// Truncation point beyond which `M_beta` is negligible at level `eps`,
/// from the stretched-exponential tail `exp(-B s^(1/(1-beta)))`,
/// `B = (1-beta) beta^(beta/(1-beta))`, and never closer than twelve
/// standard deviations from the mean.
pub fn mainardi_tail_bound(beta: f64, eps: f64) -> f64 {
    let eps = eps.clamp(1e-300, 0.5);
    let b = (1.0 - beta) * beta.powf(beta / (1.0 - beta));
    let asymptotic = ((-eps.ln() + 10.0) / b).powf(1.0 - beta);
    let (mean, std) = mainardi_mean_std(beta);
    asymptotic.max(mean + 12.0 * std)
}

fn mainardi_mean_std(beta: f64) -> (f64, f64) {
    let mean = mainardi_moment(beta, 1);
    let second = mainardi_moment(beta, 2);
    (mean, (second - mean * mean).max(0.0).sqrt())
}

/// The three kernels `phi(-beta, mu; -s)` used by the Green functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WrightKernel {
    /// `mu = 1 - beta`: the Mainardi density `M_beta`.
    Mainardi,
    /// `mu = 0`: `beta s M_beta(s)`.
    Mu0,
    /// `mu = beta`: `int_s^inf beta u M_beta(u) du`.
    MuBeta,
}

impl WrightKernel {
    pub fn eval(self, beta: f64, s: f64) -> Result<f64> {
        match self {
            WrightKernel::Mainardi => mainardi(beta, s),
            WrightKernel::Mu0 => wright_kernel_mu0(beta, s),
            WrightKernel::MuBeta => wright_kernel_mu_beta(beta, s),
        }
    }
}

/// `int_lower^inf g(s) K(s) ds` for one of the Wright kernels, `0 <= beta <= 1`.
///
/// The domain is cut at [`mainardi_tail_bound`] for `control.tail_epsilon`;
/// a 15-point probe of the next panel must confirm the neglected tail is
/// small, otherwise the cut is pushed outwards. At `beta = 1` the kernels
/// are the point mass at `s = 1` (half weight when `lower = 1`) or, for
/// `MuBeta`, the indicator of `[0, 1]`.
pub fn wright_kernel_integral<T, G>(
    beta: f64,
    kernel: WrightKernel,
    lower: f64,
    mut g: G,
    control: &QuadratureControl,
) -> Result<T>
where
    T: QuadValue,
    G: FnMut(f64) -> Result<T>,
{
    control.validate()?;
    let lower = lower.max(0.0);
    if beta == 1.0 {
        return match kernel {
            WrightKernel::MuBeta if lower < 1.0 => Ok(integrate(g, &[lower, 1.0], control)?.value),
            WrightKernel::MuBeta => Ok(T::default()),
            _ if lower < 1.0 => g(1.0),
            _ if lower == 1.0 => Ok(g(1.0)? * 0.5),
            _ => Ok(T::default()),
        };
    }
    check_beta(beta)?;
    let (mean, std) = mainardi_mean_std(beta);
    let mut s_max = mainardi_tail_bound(beta, control.tail_epsilon);
    if lower >= s_max {
        return Ok(T::default());
    }
    let mut f = |s: f64| -> Result<T> { Ok(g(s)? * kernel.eval(beta, s)?) };
    for _ in 0..8 {
        let mut points = vec![lower, s_max];
        for p in [1.0, mean - 4.0 * std, mean - std, mean, mean + std, mean + 4.0 * std] {
            if p > lower && p < s_max {
                points.push(p);
            }
        }
        let body = integrate(&mut f, &points, control)?.value;
        let (tail, _) = gauss_kronrod_15(&mut f, s_max, 2.0 * s_max)?;
        let target = control.abs_tol.max(control.rel_tol * body.magnitude());
        if tail.magnitude() <= control.tail_epsilon.max(0.1 * target) {
            return Ok(body);
        }
        s_max *= 1.5;
    }
    Err(Error::convergence("Wright kernel integral", format!("tail still significant beyond s = {s_max}")))
}

/// `int_0^inf g(s) M_beta(s) ds`, `0 <= beta <= 1` (`beta = 1` is the point
/// mass at `s = 1`).
pub fn mainardi_expectation<T, G>(beta: f64, g: G, control: &QuadratureControl) -> Result<T>
where
    T: QuadValue,
    G: FnMut(f64) -> Result<T>,
{
    wright_kernel_integral(beta, WrightKernel::Mainardi, 0.0, g, control)
}
