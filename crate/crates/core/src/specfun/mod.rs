//! Special functions: gamma, Bessel J0/J1 of complex argument, the Wright
//! function with negative first parameter, and the two-parameter
//! Mittag-Leffler function.

mod bessel;
mod gamma;
mod mittag_leffler;
mod wright;

use num_complex::Complex64;

pub use bessel::{bessel_j0, bessel_j0_real, bessel_j1, j1_over_arg};
pub use gamma::{gamma, gamma_q, ln_gamma, ln_gamma_signed, recip_gamma, sin_pi};
pub use mittag_leffler::{mittag_leffler, mittag_leffler_with, MittagLefflerMethod, SERIES_RADIUS};
pub use wright::{
    mainardi, mainardi_expectation, mainardi_moment, mainardi_tail_bound, wright_kernel_mu0,
    wright_kernel_integral, wright_kernel_mu_beta, wright_phi, wright_phi_series, wright_phi_with, WrightKernel,
};

/// Complex scalar used for amplitudes, the coupling constant and special
/// function values.
pub type ComplexValue = Complex64;

/// Truncation controls shared by the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_terms: 2000,
        }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> crate::Result<()> {
        if self.max_terms == 0 {
            return Err(crate::Error::InvalidArgument("max_terms must be >= 1".into()));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0)
        {
            return Err(crate::Error::InvalidArgument(
                "series tolerances must be non-negative with at least one positive".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn accepts(&self, err: f64, value: f64) -> bool {
        err <= self.abs_tol.max(self.rel_tol * value)
    }
}

/// Kahan-Babuska (Neumaier) compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise compensated sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ComplexSum {
    re: Compensated,
    im: Compensated,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `true` when every component is finite.
pub(crate) fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
