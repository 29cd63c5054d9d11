//! Numerical checks of the limit lemmas, the Green-function limits and the
//! transform identities behind the closed forms.
//!
//! Each check is a [`Check`] registered by name in a [`CheckRegistry`]; a
//! check produces one or more [`CheckReport`] rows. Limit statements are
//! sampled along finite parameter sequences, identities are tested on fixed
//! cases plus a seeded pseudo-random sweep.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closedform::{mlf_derivative_coefficient_check, mlf_identity_check, sin_over};
use crate::error::{Error, Result};
use crate::greens::{green_classical, green_fractional, green_fractional_rl, GreensQuery};
use crate::quad::{integrate, QuadratureControl};
use crate::specfun::{
    bessel_j0, gamma, mainardi_moment, mittag_leffler, wright_kernel_integral, WrightKernel,
};

/// `(int g(s) phi(-b,0;-s) ds, int g(s) phi(-b,b;-s) ds)`; as `b -> 1`
/// these tend to `g(1)` and `int_0^1 g`.
pub fn lemma41_check<G>(g: G, beta: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    let qc = QuadratureControl::default();
    let first = wright_kernel_integral(beta, WrightKernel::Mu0, 0.0, &g, &qc)?;
    let second = wright_kernel_integral(beta, WrightKernel::MuBeta, 0.0, &g, &qc)?;
    Ok((first, second))
}

/// `int g(s) phi(-b,1-b;-s) ds`, tending to `g(1)` as `b -> 1`.
pub fn lemma42_check<G>(g: G, beta: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    wright_kernel_integral(beta, WrightKernel::Mainardi, 0.0, g, &QuadratureControl::default())
}

/// `|int_0^tau J0(sigma sqrt(tau^2 - xi^2)) dxi - sin(sigma tau) / sigma|`.
pub fn table_integral_check(sigma: Complex64, tau: f64) -> Result<f64> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!("tau must be finite and >= 0, got {tau}")));
    }
    let quad = integrate(
        |xi| bessel_j0(sigma * ((tau - xi) * (tau + xi)).max(0.0).sqrt()),
        &[0.0, tau],
        &QuadratureControl::default(),
    )?
    .value;
    Ok((quad - sin_over(sigma, tau)).norm())
}

/// Stankovic transform of `sin(sigma tau) / sigma` by quadrature against
/// `t^(-a) phi(-a, 1-a; -tau / t^a)`, compared with
/// `t^a E_{2a,a+1}(-sigma^2 t^2a)`.
pub fn stankovic_check(alpha: f64, sigma: Complex64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let ta = t.powf(alpha);
    let lhs: Complex64 = wright_kernel_integral(
        alpha,
        WrightKernel::Mainardi,
        0.0,
        |s| Ok(sin_over(sigma, s * ta)),
        &QuadratureControl::default(),
    )?;
    let rhs = ta * mittag_leffler(2.0 * alpha, alpha + 1.0, -sigma * sigma * ta * ta)?;
    Ok((lhs - rhs).norm())
}

/// `|G_alpha(x, t) - G(x, t)|`.
pub fn green_limit_gap(x: f64, t: f64, alpha: f64, sigma: Complex64) -> Result<f64> {
    let q = GreensQuery::new(x, t, alpha, sigma);
    Ok((green_fractional(&q, &QuadratureControl::default())? - green_classical(&q)?).norm())
}

/// Largest of `|E_{2,1}(-t^2) - cos t|` and `|t E_{2,2}(-t^2) - sin t|` over
/// `samples` equispaced `t` in `[0, t_max]`.
pub fn trig_degeneration_residual(t_max: f64, samples: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1).max(1) as f64;
        let z = Complex64::new(-t * t, 0.0);
        let c = mittag_leffler(2.0, 1.0, z)?;
        let s = t * mittag_leffler(2.0, 2.0, z)?;
        worst = worst.max((c - t.cos()).norm()).max((s - t.sin()).norm());
    }
    Ok(worst)
}

/// Largest relative residual of the recurrence over `draws` random
/// `(rho, mu, z)` with `rho in [0.2, 2]`, `mu in [0.5, 3]`, `|z| <= 10`.
/// Draws whose Mittag-Leffler values overflow are replaced.
pub fn recurrence_sweep(seed: u64, draws: usize) -> Result<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut redrawn = 0;
    let mut done = 0;
    while done < draws {
        let rho = rng.gen_range(0.2..=2.0);
        let mu = rng.gen_range(0.5..=3.0);
        let r = 10.0 * rng.gen::<f64>().sqrt();
        let z = Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        match mlf_identity_check(rho, mu, z) {
            Ok(v) => {
                worst = worst.max(v);
                done += 1;
            }
            Err(Error::Overflow(_)) => {
                redrawn += 1;
                if redrawn > 10 * draws {
                    return Err(Error::convergence("recurrence sweep", "too many overflowing draws"));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok((worst, redrawn))
}

/// Options shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Multiplies every tolerance; 0 forces failure.
    pub tol_scale: f64,
    pub seed: u64,
    /// Size of the random sweeps.
    pub draws: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol_scale: 1.0,
            seed: 20_240_601,
            draws: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    fn new(name: &str, residual: f64, tolerance: f64, opts: &CheckOptions, detail: impl Into<String>) -> Self {
        let tolerance = tolerance * opts.tol_scale;
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual < tolerance,
            detail: detail.into(),
        }
    }
}

/// A named numerical check.
pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, opts: &CheckOptions) -> Result<Vec<CheckReport>>;
}

fn rng(opts: &CheckOptions, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

fn ok_s(s: f64) -> Result<f64> {
    Ok(s)
}

struct Lemma41;

impl Check for Lemma41 {
    fn name(&self) -> &'static str {
        "lemma41"
    }
    fn description(&self) -> &'static str {
        "kernels phi(-b,0;-s) and phi(-b,b;-s): limits g(1) and int_0^1 g, moment sweep"
    }
    fn run(&self, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        let (a, b) = lemma41_check(ok_s, 0.99)?;
        let limit = (a - 1.0).abs().max((b - 0.5).abs());
        let mut out = vec![CheckReport::new(
            "lemma41/limit",
            limit,
            0.05,
            opts,
            format!("g(s) = s, beta = 0.99: {a:.6} (-> 1), {b:.6} (-> 0.5)"),
        )];
        // moments: int s^n b s M = b m_{n+1}, int s^n phi(-b,b;-s) = b m_{n+2} / (n+1)
        let mut rng = rng(opts, 41);
        let mut worst: f64 = 0.0;
        for _ in 0..opts.draws {
            let beta = rng.gen_range(0.2..0.95);
            let n = rng.gen_range(0..3u32);
            let (p, q) = lemma41_check(|s| Ok(s.powi(n as i32)), beta)?;
            let wp = beta * mainardi_moment(beta, n + 1);
            let wq = beta * mainardi_moment(beta, n + 2) / (n + 1) as f64;
            worst = worst.max((p - wp).abs() / wp).max((q - wq).abs() / wq);
        }
        out.push(CheckReport::new(
            "lemma41/moments",
            worst,
            1e-8,
            opts,
            format!("{} random (beta, s^n) draws against Gamma-function moments", opts.draws),
        ));
        Ok(out)
    }
}

struct Lemma42;

impl Check for Lemma42 {
    fn name(&self) -> &'static str {
        "lemma42"
    }
    fn description(&self) -> &'static str {
        "Mainardi kernel phi(-b,1-b;-s): normalization, limit g(1), Laplace transform sweep"
    }
    fn run(&self, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        let one = lemma42_check(|_| Ok(1.0), 0.7)?;
        let v = lemma42_check(ok_s, 0.99)?;
        let mut out = vec![
            CheckReport::new("lemma42/normalization", (one - 1.0).abs(), 1e-9, opts, format!("g = 1, beta = 0.7: {one}")),
            CheckReport::new("lemma42/limit", (v - 1.0).abs(), 0.05, opts, format!("g(s) = s, beta = 0.99: {v:.6} (-> 1)")),
        ];
        // int e^{-p s} M_b(s) ds = E_b(-p)
        let mut rng = rng(opts, 42);
        let mut worst: f64 = 0.0;
        for _ in 0..opts.draws {
            let beta = rng.gen_range(0.1..0.95);
            let p = rng.gen_range(0.1..4.0);
            let q = lemma42_check(|s| Ok((-p * s).exp()), beta)?;
            let want = mittag_leffler(beta, 1.0, Complex64::new(-p, 0.0))?.re;
            worst = worst.max((q - want).abs());
        }
        out.push(CheckReport::new(
            "lemma42/laplace",
            worst,
            1e-8,
            opts,
            format!("{} random (beta, p) draws against E_b(-p)", opts.draws),
        ));
        // g(s) = e^{-s} approaching e^{-1}
        let gaps = [0.9, 0.99, 0.999]
            .iter()
            .map(|&b| lemma42_check(|s| Ok((-s).exp()), b).map(|v| (v - (-1f64).exp()).abs()))
            .collect::<Result<Vec<_>>>()?;
        let monotone = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-4);
        out.push(CheckReport::new(
            "lemma42/sequence",
            if monotone { gaps[2] } else { f64::INFINITY },
            5e-3,
            opts,
            format!("g(s) = e^-s, beta = 0.9, 0.99, 0.999: gaps {}", sci(&gaps)),
        ));
        Ok(out)
    }
}

struct TableIntegral;

impl Check for TableIntegral {
    fn name(&self) -> &'static str {
        "table_integral"
    }
    fn description(&self) -> &'static str {
        "int_0^tau J0(sigma sqrt(tau^2 - xi^2)) dxi = sin(sigma tau) / sigma"
    }
    fn run(&self, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        let mut fixed: f64 = 0.0;
        for sigma in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.05), Complex64::new(0.0, 0.0)] {
            for tau in [0.5, 2.0, std::f64::consts::PI] {
                fixed = fixed.max(table_integral_check(sigma, tau)?);
            }
        }
        let mut rng = rng(opts, 57);
        let mut swept: f64 = 0.0;
        for _ in 0..opts.draws {
            let sigma = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.0..0.2));
            swept = swept.max(table_integral_check(sigma, rng.gen_range(0.01..6.0))?);
        }
        Ok(vec![
            CheckReport::new("table_integral/fixed", fixed, 1e-8, opts, "sigma in {1, -1+0.05i, 0}, tau in {0.5, 2, pi}"),
            CheckReport::new("table_integral/sweep", swept, 1e-8, opts, format!("{} random (sigma, tau)", opts.draws)),
        ])
    }
}

struct Stankovic;

impl Check for Stankovic {
    fn name(&self) -> &'static str {
        "stankovic"
    }
    fn description(&self) -> &'static str {
        "Stankovic transform of sin(sigma tau)/sigma equals t^a E_{2a,a+1}(-sigma^2 t^2a)"
    }
    fn run(&self, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        let sigma = Complex64::new(-1.0, 0.0);
        let mut fixed: f64 = 0.0;
        for alpha in [0.5, 0.7, 0.9, 1.0] {
            for t in [0.5, 1.0, 2.0] {
                fixed = fixed.max(stankovic_check(alpha, sigma, t)?);
            }
        }
        let mut rng = rng(opts, 5);
        let mut swept: f64 = 0.0;
        for _ in 0..opts.draws {
            let alpha = rng.gen_range(0.3..1.0);
            let s = Complex64::new(-1.0, rng.gen_range(0.0..0.1));
            swept = swept.max(stankovic_check(alpha, s, rng.gen_range(0.05..3.0))?);
        }
        Ok(vec![
            CheckReport::new("stankovic/fixed", fixed, 1e-6, opts, "alpha in {0.5, 0.7, 0.9, 1}, sigma = -1, t in {0.5, 1, 2}"),
            CheckReport::new("stankovic/sweep", swept, 1e-6, opts, format!("{} random (alpha, kappa, t)", opts.draws)),
        ])
    }
}

struct Limits;

impl Check for Limits {
    fn name(&self) -> &'static str {
        "limits"
    }
    fn description(&self) -> &'static str {
        "G_alpha -> G and Lemma 4.1 kernels approach their limits as the order tends to 1"
    }
    fn run(&self, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        let sigma = Complex64::new(1.0, 0.0);
        let qc = QuadratureControl::default();
        let (mut gaps, mut rl_gaps) = (Vec::new(), Vec::new());
        for alpha in [0.9, 0.95, 0.99] {
            let q = GreensQuery::new(0.3, 1.0, alpha, sigma);
            let g = green_classical(&q)?;
            gaps.push((green_fractional(&q, &qc)? - g).norm());
            rl_gaps.push((green_fractional_rl(&q, &qc)? - g).norm());
        }
        let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
        let moments = [0.9, 0.95, 0.99, 0.999]
            .iter()
            .map(|&b| lemma41_check(|s| Ok(s * s), b).map(|(v, _)| (v - 1.0).abs()))
            .collect::<Result<Vec<_>>>()?;
        let approaching = moments.windows(2).all(|w| w[1] <= w[0] + 1e-4);
        Ok(vec![
            // both gaps shrink linearly in 1 - alpha, about 0.63 (1 - alpha) and 0.41 (1 - alpha)
            CheckReport::new(
                "limits/green",
                if decreasing(&gaps) { gaps[2] } else { f64::INFINITY },
                1e-2,
                opts,
                format!("|G_a - G| at (0.3, 1), sigma = 1, alpha = 0.9, 0.95, 0.99: {}", sci(&gaps)),
            ),
            CheckReport::new(
                "limits/green_rl",
                if decreasing(&rl_gaps) { rl_gaps[2] } else { f64::INFINITY },
                5e-3,
                opts,
                format!("|D^(a-1)G_a - G| at (0.3, 1), sigma = 1, alpha = 0.9, 0.95, 0.99: {}", sci(&rl_gaps)),
            ),
            CheckReport::new(
                "limits/lemma41",
                if approaching { moments[3] } else { f64::INFINITY },
                0.05,
                opts,
                format!("g(s) = s^2, beta = 0.9 .. 0.999: gaps {}", sci(&moments)),
            ),
        ])
    }
}

struct Identities;

impl Check for Identities {
    fn name(&self) -> &'static str {
        "identities"
    }
    fn description(&self) -> &'static str {
        "Mittag-Leffler recurrence, cos/sin degeneration and the fractional power rule"
    }
    fn run(&self, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        let trig = trig_degeneration_residual(10.0, 101)?;
        let (rec, redrawn) = recurrence_sweep(opts.seed, opts.draws.max(100))?;
        let mut rng = rng(opts, 55);
        let mut rule: f64 = 0.0;
        for _ in 0..opts.draws {
            let a = rng.gen_range(0.2..2.0);
            let b = rng.gen_range(0.5..3.0);
            let nu = rng.gen_range(0.0..1.0);
            let lambda = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0));
            rule = rule.max(mlf_derivative_coefficient_check(a, b, nu, lambda, 30)?);
        }
        // E_{1,1}(z) = e^z through the Gamma function route as a sanity anchor
        let anchor = (mittag_leffler(1.0, 1.0, Complex64::new(-2.0, 0.0))?.re - (-2f64).exp()).abs()
            + (1.0 / gamma(1.5)? - 2.0 / std::f64::consts::PI.sqrt()).abs();
        Ok(vec![
            CheckReport::new("identities/trig", trig, 1e-9, opts, "t in [0, 10], 101 samples"),
            CheckReport::new(
                "identities/recurrence",
                rec,
                1e-8,
                opts,
                format!("{} random draws, {redrawn} overflowing draws replaced", opts.draws.max(100)),
            ),
            CheckReport::new("identities/power_rule", rule, 1e-12, opts, format!("{} random (a, b, nu, lambda)", opts.draws)),
            CheckReport::new("identities/anchor", anchor, 1e-13, opts, "E_{1,1}(-2) = e^-2, Gamma(3/2) = sqrt(pi)/2"),
        ])
    }
}

/// Checks selectable by name.
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl Default for CheckRegistry {
    fn default() -> Self {
        let mut r = Self { checks: Vec::new() };
        r.register(Box::new(Lemma41));
        r.register(Box::new(Lemma42));
        r.register(Box::new(TableIntegral));
        r.register(Box::new(Stankovic));
        r.register(Box::new(Limits));
        r.register(Box::new(Identities));
        r
    }
}

impl CheckRegistry {
    pub fn register(&mut self, check: Box<dyn Check>) {
        self.checks.retain(|c| c.name() != check.name());
        self.checks.push(check);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    /// Run the named checks in registry order. Unknown names are an error;
    /// an empty selection gives an empty report.
    pub fn run(&self, selection: &[String], opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        if let Some(bad) = selection.iter().find(|n| self.get(n).is_none()) {
            return Err(Error::InvalidArgument(format!(
                "unknown check '{bad}', available: {}",
                self.names().join(", ")
            )));
        }
        let mut out = Vec::new();
        for c in self.checks.iter().filter(|c| selection.iter().any(|n| n == c.name())) {
            out.extend(c.run(opts)?);
        }
        Ok(out)
    }

    pub fn run_all(&self, opts: &CheckOptions) -> Result<Vec<CheckReport>> {
        let all: Vec<String> = self.names().iter().map(|s| s.to_string()).collect();
        self.run(&all, opts)
    }
}
