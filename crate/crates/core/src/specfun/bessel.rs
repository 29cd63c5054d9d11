//! Bessel functions of the first kind, orders 0 and 1.
//!
//! Complex argument: power series for |z| <= 8, otherwise the trapezoidal
//! rule applied to the Bessel integral over one period, which converges
//! geometrically once the node count exceeds roughly e|z|/2. Real argument
//! (order 0 only): Miller backward recurrence normalised with
//! J0 + 2 sum J_2k = 1. The two real-axis routes are independent.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 8.0;
const MAX_IMAG: f64 = 700.0;

fn check_argument(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite Bessel argument {z}")));
    }
    if z.im.abs() > MAX_IMAG {
        return Err(Error::Overflow(format!("Bessel argument {z} has |Im z| > {MAX_IMAG}")));
    }
    Ok(())
}

/// Quarter-period node count for the trapezoidal Bessel integral.
fn quarter_nodes(z: Complex64) -> usize {
    ((1.5 * z.norm() + 60.0) / 4.0).ceil() as usize
}

/// J0 of complex argument.
pub fn bessel_j0(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    if z.norm() <= SERIES_LIMIT {
        return Ok(j0_series(z));
    }
    // J0(z) = (2/pi) int_0^{pi/2} cos(z sin t) dt, periodic-trapezoid form
    let m = quarter_nodes(z);
    let h = 0.5 * PI / m as f64;
    let mut acc = 0.5 * (Complex64::new(1.0, 0.0) + z.cos());
    for j in 1..m {
        acc += (z * (h * j as f64).sin()).cos();
    }
    Ok(acc / m as f64)
}

/// J1 of complex argument.
pub fn bessel_j1(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    if z.norm() <= SERIES_LIMIT {
        return Ok(z * j1_over_arg_series(z));
    }
    // J1(z) = (2/pi) int_0^{pi/2} sin(z sin t) sin t dt
    let m = quarter_nodes(z);
    let h = 0.5 * PI / m as f64;
    let mut acc = 0.5 * z.sin();
    for j in 1..m {
        let s = (h * j as f64).sin();
        acc += (z * s).sin() * s;
    }
    Ok(acc / m as f64)
}

/// `J1(z) / z`, regular at the origin (value 1/2).
pub fn j1_over_arg(z: Complex64) -> Result<Complex64> {
    check_argument(z)?;
    if z.norm() <= SERIES_LIMIT {
        return Ok(j1_over_arg_series(z));
    }
    Ok(bessel_j1(z)? / z)
}

fn j0_series(z: Complex64) -> Complex64 {
    let q = -0.25 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

fn j1_over_arg_series(z: Complex64) -> Complex64 {
    let q = -0.25 * z * z;
    let mut term = Complex64::new(0.5, 0.0);
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

/// J0 of real argument by Miller's backward recurrence.
pub fn bessel_j0_real(x: f64) -> f64 {
    let x = x.abs();
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 1e-8 {
        return 1.0 - 0.25 * x * x;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let start = (x + 15.0 * x.cbrt() + 30.0).ceil() as usize;
    let m = start + (start % 2);
    let two_over_x = 2.0 / x;
    let mut j_next = 0.0; // J_{k+1}
    let mut j_cur = 1.0; // J_k, arbitrary scale
    let mut norm = if m % 2 == 0 { 2.0 * j_cur } else { 0.0 };
    for k in (1..=m).rev() {
        let j_prev = k as f64 * two_over_x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let order = k - 1;
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * j_cur;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j_cur;
    j_cur / norm
}
