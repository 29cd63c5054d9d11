use ftt_core::closedform::{
    mlf_identity_check, pendellosung_kernels, pendellosung_kernels_quadrature, plane_wave_solution, DiffractionParams,
    InitialProfile,
};
use ftt_core::greens::{green_classical, green_fractional, green_fractional_rl, GreensQuery};
use ftt_core::phasefn::PhaseExpr;
use ftt_core::quad::QuadratureControl;
use ftt_core::solver::{solve_fd, GridSpec, SolverRegistry};
use ftt_core::verify::{stankovic_check, table_integral_check, CheckOptions, CheckRegistry};
use ftt_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_routes_agree(alpha in 0.3f64..1.0, kappa in 0.0f64..0.2, t in 0.05f64..3.0) {
        let p = DiffractionParams::new(alpha, kappa, PhaseExpr::zero()).unwrap();
        let (c1, k1) = pendellosung_kernels(&p, t).unwrap();
        let (c2, k2) = pendellosung_kernels_quadrature(&p, t, &QuadratureControl::default()).unwrap();
        prop_assert!((c1 - c2).norm() < 1e-8 && (k1 - k2).norm() < 1e-8, "{c1} {c2} {k1} {k2}");
    }

    #[test]
    fn classical_plane_wave_is_unitary(t in 0.0f64..20.0, a in -2.0f64..2.0, b in -2.0f64..2.0, ph in 0.0f64..6.3) {
        let p = DiffractionParams::new(1.0, 0.0, PhaseExpr::zero()).unwrap();
        let (e0, eh) = (c(a, 0.3), Complex64::from_polar(b, ph));
        let (u, v) = plane_wave_solution(&p, e0, eh, t).unwrap();
        let before = e0.norm_sqr() + eh.norm_sqr();
        prop_assert!((u.norm_sqr() + v.norm_sqr() - before).abs() < 1e-12 * before.max(1.0));
    }

    #[test]
    fn stankovic_identity(alpha in 0.3f64..1.0, kappa in 0.0f64..0.1, t in 0.05f64..3.0) {
        prop_assert!(stankovic_check(alpha, c(-1.0, kappa), t).unwrap() < 1e-6);
    }

    #[test]
    fn table_integral_identity(re in -3.0f64..3.0, im in 0.0f64..0.2, tau in 0.0f64..6.0) {
        prop_assert!(table_integral_check(c(re, im), tau).unwrap() < 1e-8);
    }

    #[test]
    fn recurrence_identity(rho in 0.2f64..2.0, mu in 0.5f64..3.0, r in 0.0f64..10.0, th in -std::f64::consts::PI..std::f64::consts::PI) {
        match mlf_identity_check(rho, mu, Complex64::from_polar(r, th)) {
            Ok(v) => prop_assert!(v < 1e-8, "{v}"),
            Err(Error::Overflow(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn green_functions_are_even_in_x(x in -3.0f64..3.0, t in 0.1f64..3.0, alpha in 0.3f64..1.0) {
        let qc = QuadratureControl::default();
        let q = GreensQuery::new(x, t, alpha, c(1.0, 0.0));
        let m = GreensQuery { x: -x, ..q };
        prop_assert_eq!(green_fractional(&q, &qc).unwrap(), green_fractional(&m, &qc).unwrap());
        prop_assert_eq!(green_fractional_rl(&q, &qc).unwrap(), green_fractional_rl(&m, &qc).unwrap());
        prop_assert_eq!(green_classical(&q).unwrap(), green_classical(&m).unwrap());
    }

    #[test]
    fn classical_green_vanishes_outside_cone(x in 0.0f64..5.0, t in 0.01f64..5.0) {
        prop_assume!(x > t);
        prop_assert_eq!(green_classical(&GreensQuery::new(x, t, 1.0, c(1.0, 0.0))).unwrap(), c(0.0, 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fd_keeps_plane_waves_flat(alpha in 0.3f64..=1.0, kappa in 0.0f64..0.2, a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let p = DiffractionParams::new(alpha, kappa, PhaseExpr::zero()).unwrap();
        let init = InitialProfile::PlaneWave { e0: c(a, 0.1), eh: c(b, -0.2) };
        let g = GridSpec::new(-1.0, 1.0, 32, 1.0, 32).unwrap();
        let f = solve_fd(&p, &init, &g).unwrap();
        for n in 0..=g.nt {
            let (r0, rh) = (f.row_e0(n), f.row_eh(n));
            for i in 1..=g.nx {
                prop_assert!((r0[i] - r0[0]).norm() < 1e-12 && (rh[i] - rh[0]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fd_is_homogeneous(alpha in 0.3f64..=1.0, scale in -3.0f64..3.0) {
        let p = DiffractionParams::new(alpha, 0.05, "linear:0.3,0.1".parse().unwrap()).unwrap();
        let g = GridSpec::new(-3.0, 3.0, 48, 1.0, 24).unwrap();
        let f1 = solve_fd(&p, &InitialProfile::PlaneWave { e0: c(scale, 0.0), eh: c(0.0, scale) }, &g).unwrap();
        let f2 = solve_fd(&p, &InitialProfile::PlaneWave { e0: c(1.0, 0.0), eh: c(0.0, 1.0) }, &g).unwrap();
        let tol = 1e-11 * scale.abs().max(1.0);
        for n in 0..=g.nt {
            for i in 0..=g.nx {
                prop_assert!((f1.e0(n, i) - scale * f2.e0(n, i)).norm() < tol);
                prop_assert!((f1.eh(n, i) - scale * f2.eh(n, i)).norm() < tol);
            }
        }
    }
}

#[test]
fn solvers_by_name_agree_on_plane_wave() {
    let reg = SolverRegistry::default();
    let p = DiffractionParams::new(1.0, 0.0, PhaseExpr::zero()).unwrap();
    let init = InitialProfile::unit_plane_wave();
    let g = GridSpec::new(-2.0, 2.0, 128, 1.0, 64).unwrap();
    let closed = reg.get("closed_form").unwrap().solve(&p, &init, &g).unwrap();
    for name in ["fd", "picard"] {
        let s = reg.get(name).unwrap();
        let g = if name == "picard" { GridSpec::new(-2.0, 2.0, 128, 2.0, 64).unwrap() } else { g };
        let f = s.solve(&p, &init, &g).unwrap();
        // compare at shared times t = k/16
        for k in 0..=16 {
            let t = k as f64 / 16.0;
            let (nf, nc) = ((t / g.dt()).round() as usize, (t / closed.spec().dt()).round() as usize);
            let d = (f.e0(nf, 64) - closed.e0(nc, 64)).norm().max((f.eh(nf, 64) - closed.eh(nc, 64)).norm());
            assert!(d < 1e-3, "{name} at t = {t}: {d}");
        }
    }
}

#[test]
fn every_registered_check_passes() {
    let reports = CheckRegistry::default().run_all(&CheckOptions::default()).unwrap();
    assert!(reports.len() >= 12);
    for r in &reports {
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn checks_are_reproducible_for_a_seed() {
    let reg = CheckRegistry::default();
    let sel = vec!["lemma42".to_string()];
    let opts = CheckOptions { seed: 99, ..CheckOptions::default() };
    assert_eq!(reg.run(&sel, &opts).unwrap(), reg.run(&sel, &opts).unwrap());
}
