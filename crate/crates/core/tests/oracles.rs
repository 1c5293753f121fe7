mod common;

use subriem::criteria::{check_dot_kappa, check_j2, check_theorem1, cov_deriv_r, local_condition_d_residual};
use subriem::extension::{check_step2_decomposition, ExtendedCometric};
use subriem::flows::{integrate_normal_geodesic, project_trajectory, PhaseTrajectory};
use subriem::frenet::{classify_curve, extremal_kappa1, frenet_curvatures, kappa_via_extremal};
use subriem::geometry::{curvature_form, initial_covector, AnnihilatorCovector, PhaseState, Submersion};
use subriem::models;
use subriem::sampling::{self, Probe};
use subriem::Vector;

use common::{vec, Warped, WARP};

fn warped() -> Warped {
    Warped::new(WARP)
}

fn geodesic(model: &dyn Submersion, x: &Vector, c: &[f64], v: &Vector, t_end: f64) -> PhaseTrajectory {
    let lambda = initial_covector(model, x, &AnnihilatorCovector::new(vec(c)), v).unwrap();
    integrate_normal_geodesic(model, &PhaseState::new(x.clone(), lambda), t_end, 1e-3).unwrap()
}

#[test]
fn warped_curvature_is_the_derivative_of_the_warp() {
    let m = warped();
    for x0 in [-1.0, 0.0, 0.4, 1.7] {
        let x = vec(&[x0, 0.3, -0.2]);
        let r = curvature_form(&m, &x).unwrap();
        assert!((r.get(0, 0, 1) - m.dg(x0)).abs() < 1e-7);
        assert!((r.get(0, 1, 0) + m.dg(x0)).abs() < 1e-7);
    }
}

#[test]
fn warped_kappa1_follows_the_warp_along_the_curve() {
    // λ(∂z) = c is conserved, so κ₁(t) = |c| g'(x(t))
    let m = warped();
    let c = 1.3;
    let v = vec(&[0.6, 0.8]);
    let traj = geodesic(&m, &vec(&[0.2, -0.1, 0.0]), &[c], &v, 2.0);
    let frenet = frenet_curvatures(&m, &project_trajectory(&m, &traj).unwrap()).unwrap();
    let extremal = extremal_kappa1(&m, &traj).unwrap();
    for (k, s) in traj.states.iter().enumerate() {
        let oracle = c * m.dg(s.x[0]);
        assert!((frenet.kappa1[k] - oracle).abs() < 1e-8, "{} vs {oracle}", frenet.kappa1[k]);
        assert!((extremal[k] - oracle).abs() < 1e-8);
    }
    let verdict = classify_curve(&frenet, 1e-5, 1e-5);
    assert!(!verdict.kappa1_constant);
}

#[test]
fn warped_model_fails_theorem1_and_constant_kappa1_together() {
    let m = warped();
    let probes = sampling::probes(&m, 20, 5);
    for p in &probes {
        let thm = check_theorem1(&m, p, 2.0, 1e-3, 1e-6).unwrap().pass;
        let lambda = initial_covector(&m, &p.x, &p.alpha, &p.v).unwrap();
        let traj = integrate_normal_geodesic(&m, &PhaseState::new(p.x.clone(), lambda), 2.0, 1e-3).unwrap();
        let verdict =
            classify_curve(&frenet_curvatures(&m, &project_trajectory(&m, &traj).unwrap()).unwrap(), 1e-5, 1e-5);
        assert_eq!(thm, verdict.kappa1_constant, "{p:?}");
    }
    // along a base line x = const the warp g' does not change
    let p = Probe { x: vec(&[0.5, 0.0, 0.0]), alpha: AnnihilatorCovector::new(vec(&[1.0])), v: vec(&[0.0, 1.0]) };
    assert!(check_theorem1(&m, &p, 2.0, 1e-3, 1e-6).unwrap().pass);
}

#[test]
fn warped_dot_kappa_and_covariant_derivative() {
    // ½ d/dt |J η̇|² = c² g' g'' v_x and (∇_v R)(X₁, X₂) = g'' v_x V
    let m = warped();
    let c = -0.8;
    let alpha = AnnihilatorCovector::new(vec(&[c]));
    for (x0, theta) in [(0.0, 0.3), (0.9, 2.0), (-1.2, 4.0)] {
        let x = vec(&[x0, 0.1, 0.5]);
        let v = vec(&[f64::cos(theta), f64::sin(theta)]);
        let oracle = c * c * m.dg(x0) * WARP * v[0];
        let dk = check_dot_kappa(&m, &x, &alpha, &v).unwrap();
        assert!((dk.abs() - oracle.abs()).abs() < 1e-5, "{dk} vs {oracle}");
        let e1 = vec(&[1.0, 0.0, 0.0]);
        let e2 = vec(&[0.0, 1.0, m.g(x0)]);
        let lifted = vec(&[v[0], v[1], m.g(x0) * v[1]]);
        let dr = cov_deriv_r(&m, &x, &lifted, &e1, &e2).unwrap();
        assert!((dr.norm() - (WARP * v[0]).abs()).abs() < 1e-5);
    }
}

#[test]
fn warped_kappa2_routes_agree() {
    // the projection of a warped geodesic lies in the plane, so κ₂ = 0
    let m = warped();
    let traj = geodesic(&m, &vec(&[0.1, 0.2, 0.3]), &[0.9], &vec(&[0.8, -0.6]), 2.0);
    let ext = kappa_via_extremal(&m, &traj).unwrap();
    let fre = frenet_curvatures(&m, &project_trajectory(&m, &traj).unwrap()).unwrap();
    for k in 0..traj.len() {
        assert!(ext.kappa2[k] < 1e-5, "{}", ext.kappa2[k]);
        assert!(fre.kappa2[k] < 1e-5);
        assert!((ext.kappa1[k] - fre.kappa1[k]).abs() < 1e-8);
    }
}

#[test]
fn product_kappa2_routes_agree() {
    let m = models::product_heisenberg();
    let v = vec(&[1.0, 0.0, 1.0, 0.0]) / 2f64.sqrt();
    let traj = geodesic(&m, &Vector::zeros(6), &[1.0, 2.0], &v, 3.0);
    let ext = kappa_via_extremal(&m, &traj).unwrap();
    let fre = frenet_curvatures(&m, &project_trajectory(&m, &traj).unwrap()).unwrap();
    let worst = (0..traj.len()).map(|k| (ext.kappa2[k] - fre.kappa2[k]).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-5, "{worst}");
    assert!(fre.kappa2.iter().cloned().fold(0.0, f64::max) > 1e-3);
}

#[test]
fn product_with_unequal_charges_breaks_j2() {
    // α = dz + 2dẑ, v = (e₁ + e₃)/√2: |Jv|² = 5/2, J²v = −(1, 0, 4, 0)/√2,
    // so J²v + |Jv|²v = (3/2, 0, −3/2, 0)/√2 of norm 3/2
    let m = models::product_heisenberg();
    let v = vec(&[1.0, 0.0, 1.0, 0.0]) / 2f64.sqrt();
    let r = check_j2(&m, &Vector::zeros(6), &AnnihilatorCovector::new(vec(&[1.0, 2.0])), &v).unwrap();
    assert!((r - 1.5).abs() < 1e-12, "{r}");
    assert_eq!(local_condition_d_residual(&m, &Vector::zeros(6)).unwrap(), 0.0);
}

#[test]
fn extension_vertical_blocks() {
    let metric = ExtendedCometric::default();
    let x = vec(&[0.4, -0.3, 0.2]);
    let h = models::heisenberg();
    assert_eq!(metric.annihilator_norm_squared(&h, &x, &AnnihilatorCovector::new(vec(&[1.0]))).unwrap(), 1.0);
    let p = models::product_heisenberg();
    let block = metric.vertical_block(&p, &Vector::zeros(6)).unwrap();
    assert!((block - nalgebra::DMatrix::identity(2, 2) * 0.5).amax() < 1e-15);
    let w = warped();
    let a = AnnihilatorCovector::new(vec(&[1.0]));
    let n2 = metric.annihilator_norm_squared(&w, &x, &a).unwrap();
    assert!((n2 - w.dg(0.4).powi(2)).abs() < 1e-8);
}

#[test]
fn degenerate_constants_fail_step2_with_a_unit_kernel_witness() {
    let z = common::zero_constants();
    let rep = check_step2_decomposition(&z, &sampling::points(&z, 5, 1)).unwrap();
    assert!(!rep.pass);
    assert_eq!(rep.max_residual, 0.0);
    let w = &rep.witnesses[0];
    assert!((w.alpha.iter().map(|a| a * a).sum::<f64>() - 1.0).abs() < 1e-12);
}
