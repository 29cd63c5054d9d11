//! Classical and fractional Green functions of the Takagi-Taupin operator.
//!
//! The classical kernel is `G(x, t) = J0(sigma sqrt(t^2 - x^2)) Theta(t - |x|) / 2`.
//! The fractional kernels are subordinated to it through the Wright kernels:
//! substituting `tau = s t^alpha`,
//!
//! ```text
//! D^(alpha-1) G_alpha(x, t)  = 1/2 int_{|x|/t^a}^inf J0(sigma rho(s)) M_alpha(s) ds
//! G_alpha(x, t)              = 1/2 int_{|x|/t^a}^inf J0(sigma rho(s)) alpha s t^(alpha-1) M_alpha(s) ds
//! D^(2alpha-1) G_alpha(x, t) = t^(-alpha) M_alpha(|x|/t^alpha) / 2
//!                              - sigma^2 t^alpha / 2 int s J1(sigma rho)/(sigma rho) M_alpha(s) ds
//! ```
//!
//! with `rho(s) = sqrt(s^2 t^(2 alpha) - x^2)`. The last line moves the
//! extra derivative onto the classical kernel (`d/dtau G` is the wavefront
//! jump plus a J1 term), so no numerical fractional differentiation is
//! needed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::QuadratureControl;
use crate::specfun::{bessel_j0, j1_over_arg, mainardi, wright_kernel_integral, WrightKernel};

/// Point and parameters at which a Green function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensQuery {
    pub x: f64,
    pub t: f64,
    pub alpha: f64,
    pub sigma: Complex64,
}

impl GreensQuery {
    pub fn new(x: f64, t: f64, alpha: f64, sigma: Complex64) -> Self {
        Self { x, t, alpha, sigma }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) || !self.t.is_finite() || !self.x.is_finite() {
            return Err(Error::InvalidArgument(format!("Green function needs finite x and t > 0, got {self:?}")));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha = {} outside (0, 1]", self.alpha)));
        }
        if !crate::specfun::is_finite(self.sigma) {
            return Err(Error::InvalidArgument("non-finite sigma".into()));
        }
        Ok(())
    }
}

/// Classical Green function. On the wavefront `|x| = t` the Heaviside
/// factor takes the value 1/2, giving `1/4`.
pub fn green_classical(q: &GreensQuery) -> Result<Complex64> {
    if !(q.t >= 0.0) || !q.x.is_finite() {
        return Err(Error::InvalidArgument(format!("classical Green function needs t >= 0, got {q:?}")));
    }
    let ax = q.x.abs();
    if ax > q.t {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if ax == q.t {
        return Ok(Complex64::new(0.25, 0.0));
    }
    let rho = ((q.t - ax) * (q.t + ax)).sqrt();
    Ok(0.5 * bessel_j0(q.sigma * rho)?)
}

/// Smooth part of `dG/dt` inside the light cone:
/// `-sigma^2 t J1(sigma rho) / (2 sigma rho)`; zero outside. The wavefront
/// jump of `G` is not included.
pub fn green_classical_dt(q: &GreensQuery) -> Result<Complex64> {
    let ax = q.x.abs();
    if ax >= q.t {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rho = ((q.t - ax) * (q.t + ax)).sqrt();
    Ok(-0.5 * q.sigma * q.sigma * q.t * j1_over_arg(q.sigma * rho)?)
}

fn rho(q: &GreensQuery, s: f64) -> f64 {
    let tau = s * q.t.powf(q.alpha);
    let ax = q.x.abs();
    ((tau - ax) * (tau + ax)).max(0.0).sqrt()
}

/// `G_alpha(x, t)`.
pub fn green_fractional(q: &GreensQuery, qc: &QuadratureControl) -> Result<Complex64> {
    q.validate()?;
    if q.alpha == 1.0 {
        return green_classical(q);
    }
    let ta = q.t.powf(q.alpha);
    let scale = 0.5 * q.t.powf(q.alpha - 1.0);
    wright_kernel_integral(
        q.alpha,
        WrightKernel::Mu0,
        q.x.abs() / ta,
        |s| Ok(scale * bessel_j0(q.sigma * rho(q, s))?),
        qc,
    )
}

/// `D^(alpha-1)_{0t} G_alpha(x, t)` (Riemann-Liouville).
pub fn green_fractional_rl(q: &GreensQuery, qc: &QuadratureControl) -> Result<Complex64> {
    q.validate()?;
    if q.alpha == 1.0 {
        return green_classical(q);
    }
    let ta = q.t.powf(q.alpha);
    wright_kernel_integral(
        q.alpha,
        WrightKernel::Mainardi,
        q.x.abs() / ta,
        |s| Ok(0.5 * bessel_j0(q.sigma * rho(q, s))?),
        qc,
    )
}

/// `D^(2alpha-1)_{0t} G_alpha(x, t)` for `alpha < 1`. At `alpha = 1` this is
/// `dG/dt`, which carries delta functions on the light cone and has no
/// pointwise value.
pub fn green_fractional_rl2(q: &GreensQuery, qc: &QuadratureControl) -> Result<Complex64> {
    q.validate()?;
    if q.alpha == 1.0 {
        return Err(Error::InvalidArgument(
            "D^(2alpha-1) G_alpha is a distribution at alpha = 1; use the classical wavefront terms".into(),
        ));
    }
    let ta = q.t.powf(q.alpha);
    let lower = q.x.abs() / ta;
    let front = 0.5 / ta * mainardi(q.alpha, lower)?;
    let smooth: Complex64 = wright_kernel_integral(
        q.alpha,
        WrightKernel::Mainardi,
        lower,
        |s| Ok(s * j1_over_arg(q.sigma * rho(q, s))?),
        qc,
    )?;
    Ok(front - 0.5 * q.sigma * q.sigma * ta * smooth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        let one = c(1.0, 0.0);
        let g = green_classical(&GreensQuery::new(0.0, 2.0, 1.0, one)).unwrap();
        // J0(2) = 0.223890779141235668...
        assert!((g.re - 0.111_945_389_570_617_83).abs() < 1e-15);
        assert_eq!(green_classical(&GreensQuery::new(3.0, 2.0, 1.0, one)).unwrap(), c(0.0, 0.0));
        assert_eq!(green_classical(&GreensQuery::new(-2.0, 2.0, 1.0, one)).unwrap(), c(0.25, 0.0));
        let s = c(-1.0, 0.05);
        let g = green_classical(&GreensQuery::new(0.0, 2.0, 1.0, s)).unwrap();
        assert!((g - 0.5 * bessel_j0(c(-2.0, 0.1)).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn fractional_reference_values() {
        // (x, t, sigma) -> (G_alpha, D^(alpha-1) G_alpha) at alpha = 1/2, high-precision references
        let cases = [
            (0.3, 1.0, c(1.0, 0.0), c(0.101_467_967_292_804_04, 0.0), c(0.246_321_148_497_812_56, 0.0)),
            (0.0, 1.0, c(0.0, 0.0), c(0.282_094_791_773_878_14, 0.0), c(0.5, 0.0)),
            (
                1.0,
                2.0,
                c(-1.0, 0.05),
                c(0.023_465_582_946_329_006, 0.004_756_709_152_282_052_5),
                c(0.097_236_690_673_175_548, 0.009_548_674_048_358_925_1),
            ),
            (-0.5, 0.7, c(1.0, 0.0), c(0.153_131_175_943_997_44, 0.0), c(0.219_586_216_213_787_06, 0.0)),
            (0.0, 1.0, c(1.0, 0.0), c(0.103_776_874_355_148_68, 0.0), c(0.322_517_635_224_575_03, 0.0)),
        ];
        let qc = QuadratureControl::default();
        for (x, t, sigma, g0, g1) in cases {
            let q = GreensQuery::new(x, t, 0.5, sigma);
            let a = green_fractional(&q, &qc).unwrap();
            let b = green_fractional_rl(&q, &qc).unwrap();
            assert!((a - g0).norm() < 1e-9, "G_a({x},{t},{sigma}) = {a}, want {g0}");
            assert!((b - g1).norm() < 1e-9, "D G_a({x},{t},{sigma}) = {b}, want {g1}");
        }
    }

    #[test]
    fn deep_tail_is_negligible() {
        let qc = QuadratureControl::default();
        // for small alpha the kernel tail is heavy enough that (5, 0.1) is
        // not yet negligible, see green_small_alpha_tail
        for alpha in [0.5, 0.6, 0.9, 0.99] {
            let q = GreensQuery::new(5.0, 0.1, alpha, c(1.0, 0.0));
            assert!(green_fractional(&q, &qc).unwrap().norm() < qc.tail_epsilon);
            assert!(green_fractional_rl(&q, &qc).unwrap().norm() < qc.tail_epsilon);
        }
    }

    #[test]
    fn approaches_classical_near_alpha_one() {
        let qc = QuadratureControl::default();
        for (x, t) in [(0.3, 1.0), (-1.0, 2.5), (0.0, 0.4)] {
            let q = GreensQuery::new(x, t, 0.999, c(1.0, 0.0));
            let g = green_classical(&q).unwrap();
            assert!((green_fractional(&q, &qc).unwrap() - g).norm() < 5e-3, "({x}, {t})");
            assert!((green_fractional_rl(&q, &qc).unwrap() - g).norm() < 5e-3, "({x}, {t})");
        }
    }

    #[test]
    fn green_small_alpha_tail() {
        let qc = QuadratureControl::default();
        let q = GreensQuery::new(5.0, 0.1, 0.3, c(1.0, 0.0));
        let v = green_fractional_rl(&q, &qc).unwrap().norm();
        assert!(v > 1e-10 && v < 1e-4, "{v}");
    }

    #[test]
    fn rl2_reduces_to_g_alpha_at_one_half() {
        // at alpha = 1/2 the order 2 alpha - 1 vanishes, so the wavefront + J1
        // representation must equal the independent mu = 0 kernel integral
        let qc = QuadratureControl::default();
        for (x, t) in [(0.4, 1.3), (0.0, 0.5), (-1.1, 2.0)] {
            let q = GreensQuery::new(x, t, 0.5, c(-1.0, 0.05));
            let a = green_fractional_rl2(&q, &qc).unwrap();
            let b = green_fractional(&q, &qc).unwrap();
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn rl2_matches_grunwald_letnikov_derivative() {
        // D^(2a-1) G_a = D^a [D^(a-1) G_a]; apply a Grunwald-Letnikov
        // derivative of order a to the quadrature values in t
        let qc = QuadratureControl::default();
        let (alpha, x, t) = (0.7, 0.6, 1.0);
        let sigma = c(-1.0, 0.0);
        let n = 2000;
        let h = t / n as f64;
        let mut w = 1.0;
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            let tk = t - k as f64 * h;
            acc += w * green_fractional_rl(&GreensQuery::new(x, tk, alpha, sigma), &qc).unwrap();
            w *= (k as f64 - alpha) / (k as f64 + 1.0);
        }
        let gl = acc * h.powf(-alpha);
        let exact = green_fractional_rl2(&GreensQuery::new(x, t, alpha, sigma), &qc).unwrap();
        assert!((gl - exact).norm() < 2e-3 * exact.norm().max(1.0), "{gl} vs {exact}");
    }

    #[test]
    fn invalid_queries() {
        let qc = QuadratureControl::default();
        let s = c(1.0, 0.0);
        assert!(green_fractional(&GreensQuery::new(0.0, 0.0, 0.5, s), &qc).is_err());
        assert!(green_fractional(&GreensQuery::new(0.0, 1.0, 1.5, s), &qc).is_err());
        assert!(green_fractional_rl2(&GreensQuery::new(0.0, 1.0, 1.0, s), &qc).is_err());
    }
}
