use ftt_core::closedform::{
    free_space_solution, free_space_solution_kernels, pendellosung, DiffractionParams, InitialProfile,
};
use ftt_core::phasefn::PhaseExpr;
use ftt_core::quad::QuadratureControl;

fn params(alpha: f64, kappa: f64) -> DiffractionParams {
    DiffractionParams::new(alpha, kappa, PhaseExpr::zero()).unwrap()
}

#[test]
fn subordination_and_kernel_convolution_agree() {
    let qc = QuadratureControl::default();
    let init = InitialProfile::Gaussian { center: 0.0, width: 0.8 };
    for (alpha, x, t) in [(0.7, 0.3, 1.0), (0.5, -0.6, 0.7)] {
        let p = params(alpha, 0.05);
        let a = free_space_solution(&p, &init, x, t, &qc).unwrap();
        let b = free_space_solution_kernels(&p, &init, x, t, &qc).unwrap();
        let gap = (a.0 - b.0).norm().max((a.1 - b.1).norm());
        assert!(gap < 1e-7, "alpha {alpha}: {a:?} vs {b:?} (gap {gap:e})");
    }
}

#[test]
fn wide_gaussian_approaches_plane_wave() {
    // a very wide beam looks like a plane wave near its centre
    let qc = QuadratureControl::default();
    let init = InitialProfile::Gaussian { center: 0.0, width: 400.0 };
    for alpha in [0.6, 1.0] {
        let p = params(alpha, 0.0);
        let (e0, eh) = free_space_solution(&p, &init, 0.0, 1.5, &qc).unwrap();
        let (w0, wh) = pendellosung(&p, 1.5).unwrap();
        assert!((e0 - w0).norm() < 1e-4 && (eh - wh).norm() < 1e-4, "alpha {alpha}");
    }
}
