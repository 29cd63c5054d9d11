//! The perfect-crystal closed form sampled on a grid.

use rayon::prelude::*;

use super::{FieldGrid, FieldSolver, GridSpec};
use crate::closedform::{free_space_solution, plane_wave_solution, DiffractionParams, InitialProfile};
use crate::error::{Error, Result};
use crate::quad::QuadratureControl;

/// The `closed_form` strategy. Plane waves use the Mittag-Leffler form
/// once per time level; other profiles evaluate the free-space propagator
/// node by node.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedFormSolver {
    pub quadrature: QuadratureControl,
}

impl FieldSolver for ClosedFormSolver {
    fn name(&self) -> &'static str {
        "closed_form"
    }

    fn supports(&self, params: &DiffractionParams, init: &InitialProfile) -> Result<()> {
        if !params.phase.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "closed_form needs the perfect-crystal phase 0, got {}",
                params.phase.source()
            )));
        }
        init.validate()
    }

    fn solve(&self, params: &DiffractionParams, init: &InitialProfile, grid: &GridSpec) -> Result<FieldGrid> {
        grid.validate()?;
        self.supports(params, init)?;
        let mut field = FieldGrid::with_initial(*grid, init);
        for n in 1..=grid.nt {
            let t = grid.t(n);
            let row: Vec<_> = match init {
                InitialProfile::PlaneWave { e0, eh } => {
                    let v = plane_wave_solution(params, *e0, *eh, t)?;
                    vec![v; grid.nx + 1]
                }
                _ => (0..=grid.nx)
                    .into_par_iter()
                    .map(|i| free_space_solution(params, init, grid.x(i), t, &self.quadrature))
                    .collect::<Result<_>>()?,
            };
            let (r0, rh) = field.rows_mut(n);
            for (i, (a, b)) in row.into_iter().enumerate() {
                r0[i] = a;
                rh[i] = b;
            }
            field.check_finite(n)?;
        }
        Ok(field)
    }
}
