//! Globally adaptive Gauss-Kronrod (7/15) quadrature over a finite interval
//! with user breakpoints.
//!
//! Panels are kept in a max-heap keyed on their error estimate; the worst
//! panel is bisected until the summed estimate meets the tolerance or the
//! subdivision budget runs out, in which case a convergence error is
//! returned rather than a silently inaccurate value.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: a real vector space with a norm.
pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Two complex amplitudes integrated together (transmitted and diffracted
/// components share one adaptive mesh).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CPair(pub Complex64, pub Complex64);

impl Add for CPair {
    type Output = CPair;
    fn add(self, o: CPair) -> CPair {
        CPair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for CPair {
    type Output = CPair;
    fn sub(self, o: CPair) -> CPair {
        CPair(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for CPair {
    type Output = CPair;
    fn mul(self, k: f64) -> CPair {
        CPair(self.0 * k, self.1 * k)
    }
}

impl QuadValue for CPair {
    fn magnitude(&self) -> f64 {
        self.0.norm().max(self.1.norm())
    }
}

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Kernel magnitude below which semi-infinite integrals are truncated.
    pub tail_epsilon: f64,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            tail_epsilon: 1e-14,
        }
    }
}

impl QuadratureControl {
    pub fn validate(&self) -> Result<()> {
        let ok_tol = self.abs_tol >= 0.0 && self.rel_tol >= 0.0 && (self.abs_tol > 0.0 || self.rel_tol > 0.0);
        if !ok_tol || !(self.tail_epsilon > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::InvalidArgument(format!("bad quadrature control {self:?}")));
        }
        Ok(())
    }

    /// Same control with both tolerances multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * k,
            rel_tol: self.rel_tol * k,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// Panels narrower than this (relative to their position) are not split.
const MIN_REL_WIDTH: f64 = 1e-14;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
pub fn gauss_kronrod_15<T, F>(f: &mut F, a: f64, b: f64) -> Result<(T, f64)>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        let s = f1 + f2;
        kron = kron + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    Ok((kron, (kron - gauss).magnitude()))
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, o: &Self) -> bool {
        self.error.total_cmp(&o.error) == Ordering::Equal
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Adaptive integral of `f` over `[points[0], points[last]]`, splitting at
/// every interior point. Points must be finite; they are sorted and
/// de-duplicated here.
pub fn integrate<T, F>(mut f: F, points: &[f64], control: &QuadratureControl) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    control.validate()?;
    let mut pts: Vec<f64> = points.to_vec();
    if pts.len() < 2 || pts.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument(format!("integration needs >= 2 finite points, got {points:?}")));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return Ok(QuadResult {
            value: T::default(),
            error: 0.0,
            evaluations: 0,
        });
    }

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel<T>> = Vec::new();
    let mut evaluations = 0;
    for w in pts.windows(2) {
        let (value, error) = gauss_kronrod_15(&mut f, w[0], w[1])?;
        evaluations += 15;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    let mut splits = 0;
    loop {
        let mut total = T::default();
        let mut err = 0.0;
        for p in heap.iter().chain(frozen.iter()) {
            total = total + p.value;
            err += p.error;
        }
        let target = control.abs_tol.max(control.rel_tol * total.magnitude());
        if !err.is_finite() || !total.magnitude().is_finite() {
            return Err(Error::convergence("adaptive quadrature", "non-finite integrand value"));
        }
        if err <= target {
            return Ok(QuadResult {
                value: total,
                error: err,
                evaluations,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::convergence(
                "adaptive quadrature",
                format!("panels reached minimum width with error {err:e} > {target:e}"),
            ));
        };
        if worst.b - worst.a <= MIN_REL_WIDTH * worst.a.abs().max(worst.b.abs()).max(1.0) {
            frozen.push(worst);
            continue;
        }
        if splits >= control.max_subdivisions {
            return Err(Error::convergence(
                "adaptive quadrature",
                format!("{splits} subdivisions, error estimate {err:e} > target {target:e}"),
            ));
        }
        splits += 1;
        let mid = 0.5 * (worst.a + worst.b);
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gauss_kronrod_15(&mut f, a, b)?;
            evaluations += 15;
            heap.push(Panel { a, b, value, error });
        }
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, points: &[f64], control: &QuadratureControl) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate(f, points, control).map(|r| r.value)
}
