//! Two-parameter Mittag-Leffler function
//! `E_{rho,mu}(z) = sum_k z^k / Gamma(rho k + mu)`.
//!
//! Small arguments use the power series, provided the largest term does not
//! exceed the result by more than four orders of magnitude. Otherwise the
//! inverse Laplace representation
//!
//! ```text
//! E_{rho,mu}(z) = 1/(2 pi i) int_C e^s s^(rho-mu) / (s^rho - z) ds
//! ```
//!
//! is integrated along the parabola `s(u) = m (1 + iu)^2` with the trapezoidal
//! rule, adding the residues `s_k^(1-mu) e^(s_k) / rho` of the poles
//! `s_k^rho = z` that lie to the right of it. In the `u` plane the branch
//! point sits at distance 1 from the real axis and a pole at distance
//! `|Re sqrt(s_k) / sqrt(m) - 1|`; `m` is chosen to keep both away and the
//! step follows from the strip width.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{ln_gamma, ln_recip_gamma_signed, recip_gamma};
use super::{ComplexSum, SeriesControl};
use crate::error::{Error, Result};

/// The series is attempted only for `|z|` up to this radius.
pub const SERIES_RADIUS: f64 = 5.0;

/// Largest acceptable ratio between the biggest series term and one.
const SERIES_PEAK_LIMIT: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MittagLefflerMethod {
    /// Series when it is safe, contour integral otherwise.
    #[default]
    Auto,
    Series,
    Contour,
}

/// `E_{rho,mu}(z)` with the automatic method and default control.
pub fn mittag_leffler(rho: f64, mu: f64, z: Complex64) -> Result<Complex64> {
    mittag_leffler_with(rho, mu, z, MittagLefflerMethod::Auto, &SeriesControl::default())
}

pub fn mittag_leffler_with(
    rho: f64,
    mu: f64,
    z: Complex64,
    method: MittagLefflerMethod,
    control: &SeriesControl,
) -> Result<Complex64> {
    control.validate()?;
    if !(rho > 0.0) || !rho.is_finite() || !mu.is_finite() {
        return Err(Error::Domain(format!("Mittag-Leffler needs rho > 0, got rho = {rho}, mu = {mu}")));
    }
    if !super::is_finite(z) {
        return Err(Error::Domain(format!("non-finite Mittag-Leffler argument {z}")));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::from(recip_gamma(mu)));
    }
    match method {
        MittagLefflerMethod::Series => series(rho, mu, z, control),
        MittagLefflerMethod::Contour => contour(rho, mu, z, control),
        MittagLefflerMethod::Auto => {
            if z.norm() <= SERIES_RADIUS && series_peak(rho, mu, z.norm()) <= SERIES_PEAK_LIMIT.ln() {
                // the envelope is only a guide; fall back when the actual sum cancels too much
                match series(rho, mu, z, control) {
                    Err(Error::Convergence { .. }) => contour(rho, mu, z, control),
                    other => other,
                }
            } else {
                contour(rho, mu, z, control)
            }
        }
    }
}

/// Smooth upper envelope of `ln |z^k / Gamma(rho k + mu)|`.
fn ln_term_envelope(rho: f64, mu: f64, ln_r: f64, k: usize) -> f64 {
    let x = rho * k as f64 + mu;
    let lrg = if x >= 2.0 {
        -ln_gamma(x).unwrap_or(f64::INFINITY)
    } else if x > 0.0 {
        0.2
    } else {
        ln_gamma(1.0 - x).unwrap_or(f64::INFINITY) - PI.ln()
    };
    k as f64 * ln_r + lrg
}

/// Log of the largest term magnitude (envelope) of the series.
fn series_peak(rho: f64, mu: f64, r: f64) -> f64 {
    let ln_r = r.ln();
    let mut peak = f64::NEG_INFINITY;
    let mut prev = f64::INFINITY;
    for k in 0..100_000 {
        let e = ln_term_envelope(rho, mu, ln_r, k);
        peak = peak.max(e);
        if k > 2 && e < prev && e < peak - 40.0 {
            break;
        }
        prev = e;
    }
    peak
}

fn series(rho: f64, mu: f64, z: Complex64, control: &SeriesControl) -> Result<Complex64> {
    let ln_r = z.norm().ln();
    let arg = z.arg();
    let mut sum = ComplexSum::default();
    let mut peak = f64::NEG_INFINITY;
    let mut prev_env = f64::INFINITY;
    for k in 0..control.max_terms {
        let kf = k as f64;
        if let Some((lrg, sign)) = ln_recip_gamma_signed(rho * kf + mu) {
            let lnmag = kf * ln_r + lrg;
            if lnmag > 700.0 {
                return Err(Error::Overflow(format!("Mittag-Leffler series term {k} at z = {z}")));
            }
            peak = peak.max(lnmag);
            sum.add(Complex64::from_polar(sign * lnmag.exp(), kf * arg));
        }
        let env = ln_term_envelope(rho, mu, ln_r, k);
        let total = sum.value().norm();
        let small = env < (1e-17 * total).ln() || env < (1e-6 * control.abs_tol).ln();
        if k >= 2 && env < prev_env && small {
            let roundoff = peak.exp() * f64::EPSILON * kf.sqrt();
            if !control.accepts(roundoff, total) {
                return Err(Error::convergence(
                    "Mittag-Leffler series",
                    format!("cancellation: peak term {:e}, value {total:e} at z = {z}", peak.exp()),
                ));
            }
            return Ok(sum.value());
        }
        prev_env = env;
    }
    Err(Error::convergence(
        "Mittag-Leffler series",
        format!("no convergence in {} terms at z = {z}", control.max_terms),
    ))
}

/// Solutions of `s^rho = z` on the principal sheet `|arg s| < pi`.
fn poles(rho: f64, z: Complex64) -> Vec<Complex64> {
    let r = z.norm().powf(1.0 / rho);
    let a = z.arg();
    let two_pi = 2.0 * PI;
    let k_lo = ((-rho * PI - a) / two_pi).floor() as i64;
    let k_hi = ((rho * PI - a) / two_pi).ceil() as i64;
    (k_lo..=k_hi)
        .filter_map(|k| {
            let phase = (a + two_pi * k as f64) / rho;
            (phase.abs() < PI).then(|| Complex64::from_polar(r, phase))
        })
        .collect()
}

/// Parabola scale `c = sqrt(m)` and strip half-width `d` in the `u` plane.
fn choose_contour(poles: &[Complex64]) -> (f64, f64) {
    let relevant: Vec<f64> = poles.iter().filter(|p| p.re > -50.0).map(|p| p.sqrt().re).collect();
    let strip = |c: f64| {
        relevant
            .iter()
            .map(|r| (r / c - 1.0).abs())
            .fold(1.0_f64, f64::min)
            .min(0.5)
    };
    let mut best: (f64, f64) = (2.0, strip(2.0));
    for i in 0..=540 {
        let c = 0.6 + 0.01 * i as f64;
        let d = strip(c);
        let better = d > best.1 + 1e-12 || ((d - best.1).abs() <= 1e-12 && (c - 2.0).abs() < (best.0 - 2.0).abs());
        if better {
            best = (c, d);
        }
    }
    best
}

fn contour(rho: f64, mu: f64, z: Complex64, control: &SeriesControl) -> Result<Complex64> {
    let ps = poles(rho, z);
    if let Some(p) = ps.iter().find(|p| p.re > 700.0) {
        return Err(Error::Overflow(format!("Mittag-Leffler residue exp({}) at z = {z}", p.re)));
    }
    let (c, d) = choose_contour(&ps);
    if d < 1e-3 {
        return Err(Error::convergence("Mittag-Leffler contour", format!("pole too close to contour at z = {z}")));
    }
    let m = c * c;
    let h = 2.0 * PI * d / (m * (1.0 + d) * (1.0 + d) + 45.0);
    let u_max = 1.05 * (1.0 + 45.0 / m).sqrt();
    let n = (u_max / h).ceil() as usize;

    let integrand = |u: f64| -> Complex64 {
        let w = Complex64::new(1.0, u);
        let s = m * w * w;
        let num = s.exp() * s.powf(rho - mu);
        num / (s.powf(rho) - z) * w
    };
    let mut sum = ComplexSum::default();
    let mut largest: f64 = 0.0;
    for j in -(n as i64)..=(n as i64) {
        let v = integrand(j as f64 * h);
        largest = largest.max(v.norm());
        sum.add(v);
    }
    let scale = m * h / PI;
    let mut value = sum.value() * scale;
    // the sum is compensated, so what remains is independent rounding in each term
    let roundoff = largest * scale * f64::EPSILON * 4.0 * ((2 * n + 1) as f64).sqrt();

    let mut residues = ComplexSum::default();
    for p in ps.iter().filter(|p| p.sqrt().re > c) {
        residues.add(p.powf(1.0 - mu) * p.exp() / rho);
    }
    value += residues.value();
    if !super::is_finite(value) {
        return Err(Error::Overflow(format!("Mittag-Leffler value at z = {z}")));
    }
    if !control.accepts(roundoff, value.norm()) {
        return Err(Error::convergence(
            "Mittag-Leffler contour",
            format!("roundoff {roundoff:e} too large for value {value} at z = {z}"),
        ));
    }
    Ok(value)
}
