//! Closed-form solutions of the fractional Takagi-Taupin system for a
//! perfect crystal (`f = 0`).
//!
//! For `f = 0` the fractional solution is the classical one subordinated
//! through the Mainardi kernel, `E_alpha(x, t) = int_0^inf E_1(x, s t^alpha)
//! M_alpha(s) ds`. Exchanging the order of integration in the Green-function
//! form gives the three convolutions
//!
//! ```text
//! E_0 = D^(2a-1)G_a * e_0 + D^(a-1)G_a * ( e_0' + i sigma e_h)
//! E_h = D^(2a-1)G_a * e_h + D^(a-1)G_a * (-e_h' + i sigma e_0)
//! ```
//!
//! Both routes are implemented: [`free_space_solution`] subordinates the
//! classical line integral, [`free_space_solution_kernels`] convolves with
//! the fractional Green functions directly. The first convolution carries a
//! plus sign; with a minus the plane-wave solution is not reproduced.
//!
//! Plane waves need no spatial quadrature: integrating the kernels over `x`
//! leaves `C(t) = int M(s) cos(sigma s t^a) ds` and
//! `K(t) = int M(s) sin(sigma s t^a) / sigma ds`, which equal
//! `E_{2a,1}(-sigma^2 t^2a)` and `t^a E_{2a,a+1}(-sigma^2 t^2a)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::{green_fractional_rl, green_fractional_rl2, GreensQuery};
use crate::phasefn::PhaseExpr;
use crate::quad::{integrate, CPair, QuadratureControl};
use crate::specfun::{
    bessel_j0, j1_over_arg, mainardi_tail_bound, mittag_leffler, recip_gamma, wright_kernel_integral, WrightKernel,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Order, coupling constant and key function of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffractionParams {
    pub alpha: f64,
    /// `sigma = -1 + i kappa`.
    pub sigma: Complex64,
    pub phase: PhaseExpr,
}

impl DiffractionParams {
    pub fn new(alpha: f64, kappa: f64, phase: PhaseExpr) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidArgument(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        Self::with_sigma(alpha, Complex64::new(-1.0, kappa), phase)
    }

    /// Arbitrary coupling constant, e.g. `sigma = 0` for pure transport.
    pub fn with_sigma(alpha: f64, sigma: Complex64, phase: PhaseExpr) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !crate::specfun::is_finite(sigma) {
            return Err(Error::InvalidArgument(format!("non-finite sigma {sigma}")));
        }
        Ok(Self { alpha, sigma, phase })
    }

    pub fn kappa(&self) -> f64 {
        self.sigma.im
    }
}

/// Tabulated initial amplitudes on increasing abscissae. Values are
/// linearly interpolated and held constant beyond the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    x: Vec<f64>,
    e0: Vec<Complex64>,
    eh: Vec<Complex64>,
    h: f64,
}

impl ProfileTable {
    pub fn new(x: Vec<f64>, e0: Vec<Complex64>, eh: Vec<Complex64>) -> Result<Self> {
        if x.len() < 2 || e0.len() != x.len() || eh.len() != x.len() {
            return Err(Error::InvalidArgument("profile table needs >= 2 rows of equal length".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("profile abscissae must be finite and strictly increasing".into()));
        }
        if e0.iter().chain(eh.iter()).any(|v| !crate::specfun::is_finite(*v)) {
            return Err(Error::InvalidArgument("profile values must be finite".into()));
        }
        let h = x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        Ok(Self { x, e0, eh, h })
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.x
    }

    fn interp(&self, x: f64) -> (Complex64, Complex64) {
        let n = self.x.len();
        if x <= self.x[0] {
            return (self.e0[0], self.eh[0]);
        }
        if x >= self.x[n - 1] {
            return (self.e0[n - 1], self.eh[n - 1]);
        }
        let j = self.x.partition_point(|&v| v <= x).clamp(1, n - 1);
        let w = (x - self.x[j - 1]) / (self.x[j] - self.x[j - 1]);
        (
            self.e0[j - 1] * (1.0 - w) + self.e0[j] * w,
            self.eh[j - 1] * (1.0 - w) + self.eh[j] * w,
        )
    }

    /// Fourth-order central difference of the interpolant.
    fn deriv(&self, x: f64) -> (Complex64, Complex64) {
        let h = self.h;
        let (p2, p1, m1, m2) = (self.interp(x + 2.0 * h), self.interp(x + h), self.interp(x - h), self.interp(x - 2.0 * h));
        let d = |a: Complex64, b: Complex64, c: Complex64, e: Complex64| (-a + 8.0 * b - 8.0 * c + e) / (12.0 * h);
        (d(p2.0, p1.0, m1.0, m2.0), d(p2.1, p1.1, m1.1, m2.1))
    }
}

/// Initial amplitudes `(E_0(x, 0), E_h(x, 0))`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialProfile {
    PlaneWave { e0: Complex64, eh: Complex64 },
    /// `e0 = exp(-((x - center) / width)^2)`, `eh = 0`.
    Gaussian { center: f64, width: f64 },
    Table(ProfileTable),
}

impl InitialProfile {
    /// The incident plane wave `(1, 0)`.
    pub fn unit_plane_wave() -> Self {
        InitialProfile::PlaneWave {
            e0: Complex64::new(1.0, 0.0),
            eh: Complex64::new(0.0, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InitialProfile::PlaneWave { e0, eh } if !(crate::specfun::is_finite(*e0) && crate::specfun::is_finite(*eh)) => {
                Err(Error::InvalidArgument("non-finite plane-wave amplitude".into()))
            }
            InitialProfile::Gaussian { center, width } if !(center.is_finite() && *width > 0.0 && width.is_finite()) => {
                Err(Error::InvalidArgument(format!("Gaussian needs finite center and width > 0, got {center}, {width}")))
            }
            _ => Ok(()),
        }
    }

    pub fn values(&self, x: f64) -> (Complex64, Complex64) {
        match self {
            InitialProfile::PlaneWave { e0, eh } => (*e0, *eh),
            InitialProfile::Gaussian { center, width } => {
                let u = (x - center) / width;
                (Complex64::new((-u * u).exp(), 0.0), Complex64::new(0.0, 0.0))
            }
            InitialProfile::Table(t) => t.interp(x),
        }
    }

    /// x-derivatives of the two amplitudes.
    pub fn derivatives(&self, x: f64) -> (Complex64, Complex64) {
        match self {
            InitialProfile::PlaneWave { .. } => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            InitialProfile::Gaussian { center, width } => {
                let u = (x - center) / width;
                (Complex64::new(-2.0 * u / width * (-u * u).exp(), 0.0), Complex64::new(0.0, 0.0))
            }
            InitialProfile::Table(t) => t.deriv(x),
        }
    }

    pub fn is_x_independent(&self) -> bool {
        matches!(self, InitialProfile::PlaneWave { .. })
    }

    /// Abscissae where the profile changes character; used as quadrature
    /// breakpoints.
    pub fn features(&self) -> Vec<f64> {
        match self {
            InitialProfile::PlaneWave { .. } => Vec::new(),
            InitialProfile::Gaussian { center, width } => {
                [-6.0, -3.0, -1.5, 0.0, 1.5, 3.0, 6.0].iter().map(|k| center + k * width).collect()
            }
            InitialProfile::Table(t) => {
                let stride = (t.x.len() / 256).max(1);
                let mut v: Vec<f64> = t.x.iter().step_by(stride).copied().collect();
                v.push(t.x[t.x.len() - 1]);
                v
            }
        }
    }
}

fn require_zero_phase(params: &DiffractionParams) -> Result<()> {
    if !params.phase.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "closed forms need a perfect crystal (f = 0), got f = {}",
            params.phase.source()
        )));
    }
    Ok(())
}

/// Quasi-Pendellosung for the incident plane wave `(1, 0)`:
/// `E_0 = E_{2a,1}(-sigma^2 t^2a)`, `E_h = i sigma t^a E_{2a,a+1}(-sigma^2 t^2a)`.
pub fn pendellosung(params: &DiffractionParams, t: f64) -> Result<(Complex64, Complex64)> {
    let (c, k) = pendellosung_kernels(params, t)?;
    Ok((c, I * params.sigma * k))
}

/// `(C(t), K(t))` from Mittag-Leffler functions: the `x`-integrated kernels
/// `D^(2a-1)G_a` and `D^(a-1)G_a`.
pub fn pendellosung_kernels(params: &DiffractionParams, t: f64) -> Result<(Complex64, Complex64)> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let a = params.alpha;
    let ta = t.powf(a);
    let z = -params.sigma * params.sigma * ta * ta;
    Ok((mittag_leffler(2.0 * a, 1.0, z)?, ta * mittag_leffler(2.0 * a, a + 1.0, z)?))
}

/// Plane-wave solution for initial amplitudes `(a, b)` from the
/// Mittag-Leffler kernels.
pub fn plane_wave_solution(
    params: &DiffractionParams,
    a: Complex64,
    b: Complex64,
    t: f64,
) -> Result<(Complex64, Complex64)> {
    let (c, k) = pendellosung_kernels(params, t)?;
    Ok(plane_wave(params.sigma, a, b, c, k))
}

/// Same kernels by direct quadrature against the Mainardi kernel (the
/// Stankovic transform of `cos` and `sin / sigma`).
pub fn pendellosung_kernels_quadrature(
    params: &DiffractionParams,
    t: f64,
    qc: &QuadratureControl,
) -> Result<(Complex64, Complex64)> {
    if t == 0.0 {
        return Ok((Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let (a, sigma) = (params.alpha, params.sigma);
    let ta = t.powf(a);
    let pair: CPair = wright_kernel_integral(
        a,
        WrightKernel::Mainardi,
        0.0,
        |s| {
            let tau = s * ta;
            Ok(CPair((sigma * tau).cos(), sin_over(sigma, tau)))
        },
        qc,
    )?;
    Ok((pair.0, pair.1))
}

/// `sin(sigma tau) / sigma`, continuous at `sigma = 0`.
pub fn sin_over(sigma: Complex64, tau: f64) -> Complex64 {
    let z = sigma * tau;
    if z.norm() < 1e-4 {
        let z2 = z * z;
        return tau * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
    }
    z.sin() / sigma
}

/// Plane-wave solution for arbitrary amplitudes `(a, b)`:
/// `E_0 = a C + i sigma b K`, `E_h = b C + i sigma a K`.
fn plane_wave(sigma: Complex64, a: Complex64, b: Complex64, c: Complex64, k: Complex64) -> (Complex64, Complex64) {
    (a * c + I * sigma * b * k, b * c + I * sigma * a * k)
}

/// Classical (`alpha = 1`) free-space solution at `(x, tau)`, the d'Alembert
/// part plus the Bessel line integral over the light cone.
pub fn classical_free_space(
    sigma: Complex64,
    init: &InitialProfile,
    x: f64,
    tau: f64,
    qc: &QuadratureControl,
) -> Result<(Complex64, Complex64)> {
    if tau == 0.0 {
        return Ok(init.values(x));
    }
    if let InitialProfile::PlaneWave { e0, eh } = init {
        let c = (sigma * tau).cos();
        return Ok(plane_wave(sigma, *e0, *eh, c, sin_over(sigma, tau)));
    }
    let (l, r) = (init.values(x - tau), init.values(x + tau));
    let front = CPair(0.5 * (l.0 + r.0), 0.5 * (l.1 + r.1));
    let mut points = vec![x - tau, x + tau];
    points.extend(init.features().into_iter().filter(|p| (p - x).abs() < tau));
    let body: CPair = integrate(
        |u| {
            let v = x - u;
            let rho = ((tau - v) * (tau + v)).max(0.0).sqrt();
            let g = 0.5 * bessel_j0(sigma * rho)?;
            let gt = -0.5 * sigma * sigma * tau * j1_over_arg(sigma * rho)?;
            let (e0, eh) = init.values(u);
            let (d0, dh) = init.derivatives(u);
            Ok(CPair(gt * e0 + g * (d0 + I * sigma * eh), gt * eh + g * (-dh + I * sigma * e0)))
        },
        &points,
        qc,
    )?
    .value;
    let total = front + body;
    Ok((total.0, total.1))
}

/// Free-space (`f = 0`) solution at `(x, t)` for arbitrary initial data.
pub fn free_space_solution(
    params: &DiffractionParams,
    init: &InitialProfile,
    x: f64,
    t: f64,
    qc: &QuadratureControl,
) -> Result<(Complex64, Complex64)> {
    require_zero_phase(params)?;
    init.validate()?;
    if !(t >= 0.0) || !t.is_finite() || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite x and t >= 0, got ({x}, {t})")));
    }
    if t == 0.0 {
        return Ok(init.values(x));
    }
    let (a, sigma) = (params.alpha, params.sigma);
    if let InitialProfile::PlaneWave { e0, eh } = init {
        let (c, k) = pendellosung_kernels_quadrature(params, t, qc)?;
        return Ok(plane_wave(sigma, *e0, *eh, c, k));
    }
    if a == 1.0 {
        return classical_free_space(sigma, init, x, t, qc);
    }
    let ta = t.powf(a);
    let pair: CPair = wright_kernel_integral(
        a,
        WrightKernel::Mainardi,
        0.0,
        |s| classical_free_space(sigma, init, x, s * ta, qc).map(|(e0, eh)| CPair(e0, eh)),
        qc,
    )?;
    Ok((pair.0, pair.1))
}

/// The same solution as [`free_space_solution`] for `alpha < 1`, computed by
/// convolving the initial data with `D^(2a-1)G_a` and `D^(a-1)G_a` in `x`.
/// Much slower; kept as an independent cross-check.
pub fn free_space_solution_kernels(
    params: &DiffractionParams,
    init: &InitialProfile,
    x: f64,
    t: f64,
    qc: &QuadratureControl,
) -> Result<(Complex64, Complex64)> {
    require_zero_phase(params)?;
    init.validate()?;
    let (a, sigma) = (params.alpha, params.sigma);
    if a == 1.0 || init.is_x_independent() {
        return Err(Error::InvalidArgument(
            "kernel convolution needs alpha < 1 and localized initial data".into(),
        ));
    }
    if !(t > 0.0) {
        return Ok(init.values(x));
    }
    let reach = mainardi_tail_bound(a, qc.tail_epsilon) * t.powf(a);
    let mut points = vec![x - reach, x, x + reach];
    points.extend(init.features().into_iter().filter(|p| (p - x).abs() < reach));
    let pair: CPair = integrate(
        |u| {
            let q = GreensQuery::new(x - u, t, a, sigma);
            let k2 = green_fractional_rl2(&q, qc)?;
            let k1 = green_fractional_rl(&q, qc)?;
            let (e0, eh) = init.values(u);
            let (d0, dh) = init.derivatives(u);
            Ok(CPair(k2 * e0 + k1 * (d0 + I * sigma * eh), k2 * eh + k1 * (-dh + I * sigma * e0)))
        },
        &points,
        qc,
    )?
    .value;
    Ok((pair.0, pair.1))
}

/// Residual of `E_{rho,mu}(z) = 1/Gamma(mu) + z E_{rho,mu+rho}(z)`, relative
/// to the largest of the three terms (or 1 if they are all smaller).
pub fn mlf_identity_check(rho: f64, mu: f64, z: Complex64) -> Result<f64> {
    if !(rho > 0.0) || !(mu > 0.0) {
        return Err(Error::InvalidArgument(format!("need rho > 0 and mu > 0, got {rho}, {mu}")));
    }
    let lhs = mittag_leffler(rho, mu, z)?;
    let g = Complex64::from(recip_gamma(mu));
    let tail = z * mittag_leffler(rho, mu + rho, z)?;
    let scale = lhs.norm().max(g.norm()).max(tail.norm()).max(1.0);
    Ok((lhs - g - tail).norm() / scale)
}

/// Term-by-term check of the Riemann-Liouville rule
/// `D^nu [t^(b-1) E_{a,b}(lambda t^a)] = t^(b-nu-1) E_{a,b-nu}(lambda t^a)`:
/// the `k`-th power `t^(a k + b - 1)` differentiates to
/// `Gamma(a k + b) / Gamma(a k + b - nu) t^(a k + b - nu - 1)`, whose
/// coefficient must match that of the right-hand series. Returns the largest
/// relative coefficient mismatch over the first `terms` powers.
///
/// With the Caputo derivative the identity fails whenever `b - 1` is not a
/// positive power (the constant term is annihilated), so this is a statement
/// about the Riemann-Liouville operator.
pub fn mlf_derivative_coefficient_check(a: f64, b: f64, nu: f64, lambda: Complex64, terms: usize) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && nu >= 0.0) {
        return Err(Error::InvalidArgument(format!("need a, b > 0 and nu >= 0, got {a}, {b}, {nu}")));
    }
    let mut worst: f64 = 0.0;
    let mut lam_k = Complex64::new(1.0, 0.0);
    for k in 0..terms {
        let p = a * k as f64 + b;
        // power rule for t^(p-1), computed from the gamma functions themselves
        let ratio = crate::specfun::gamma(p)? * recip_gamma(p - nu);
        let lhs = lam_k * recip_gamma(p) * ratio;
        let rhs = lam_k * recip_gamma(p - nu);
        let scale = lhs.norm().max(rhs.norm());
        if scale > 0.0 && scale.is_finite() {
            worst = worst.max((lhs - rhs).norm() / scale);
        }
        lam_k *= lambda;
    }
    Ok(worst)
}
