mod common;

use common::*;
use fovk::krylov::GmresOptions;
use fovk::linalg::{dense::matvec, inv_norm, lu_solve, NormOptions, WeightedSpace};
use fovk::precond::{schur, solve_preconditioned, verify_assumptions, BlockPreconditioner, NormChoice, Side, Variant};
use fovk::problems::{oseen_fd, stokes_darcy_fd, synthetic, toeplitz_example, GridSpec, WindField};

#[test]
fn synthetic_constants_are_recovered() {
    for seed in 0..5 {
        let sys = synthetic(24, 10, 0.3, 2.0, 0.5, seed).unwrap();
        let r = verify_assumptions(&sys).unwrap();
        assert!((r.eta - 0.3).abs() <= 1e-8, "eta {}", r.eta);
        assert!((r.c1 - 2.0).abs() <= 1e-8, "c1 {}", r.c1);
        assert!((r.c2 - 0.5).abs() <= 1e-8, "c2 {}", r.c2);
        assert!(r.all_pass());
    }
}

#[test]
fn schur_complement_matches_dense_formula() {
    let sys = synthetic(12, 5, 0.4, 1.5, 0.7, 3).unwrap();
    let k = sys.k_dense();
    let (n, m) = (sys.n(), sys.m());
    let f = k.view((0, 0), (n, n)).clone_owned();
    let bt = k.view((0, n), (n, m)).clone_owned();
    let b = k.view((n, 0), (m, n)).clone_owned();
    let s = schur(&sys).unwrap();
    for j in 0..m {
        let col: Vec<f64> = bt.column(j).iter().copied().collect();
        let want = matvec(&b, &lu_solve(&f, &col).unwrap());
        let got: Vec<f64> = s.column(j).iter().copied().collect();
        assert!(rel_err(&got, &want) <= 1e-12);
    }
}

#[test]
fn toeplitz_inverse_norm_approaches_three_quarters() {
    let e = |n: usize| WeightedSpace::euclidean(2 * n);
    for n in [50, 100] {
        let a = toeplitz_example(n).unwrap();
        let inv = inv_norm(&a, &e(n), &e(n), NormOptions::default()).unwrap().value;
        let sv = jacobi_singular_values(&a);
        assert!((1.0 / inv - sv[sv.len() - 1]).abs() <= 1e-8);
        assert!((0.74..=0.76).contains(&(1.0 / inv)));
    }
}

#[test]
fn flow_systems_satisfy_lemmas() {
    for g in [4, 8] {
        let o = oseen_fd(GridSpec::new(g).unwrap(), 1.0, &WindField::cavity()).unwrap();
        let s = stokes_darcy_fd(GridSpec::new(g).unwrap(), 3.0).unwrap();
        assert!(verify_assumptions(&o).unwrap().all_pass());
        assert!(verify_assumptions(&s).unwrap().all_pass());
    }
}

#[test]
fn inf_sup_constants_are_mesh_independent() {
    let bounds: Vec<_> = [8, 16, 32]
        .iter()
        .map(|&g| oseen_fd(GridSpec::new(g).unwrap(), 1.0, &WindField::cavity()).unwrap().constraint_bounds())
        .collect();
    for w in bounds.windows(2) {
        assert!((w[1].c1 / w[0].c1 - 1.0).abs() <= 0.1);
        assert!((w[1].c2 / w[0].c2 - 1.0).abs() <= 0.25);
    }
}

#[test]
fn eta_scales_inversely_with_viscosity() {
    let g = GridSpec::new(8).unwrap();
    let eta = |nu| verify_assumptions(&oseen_fd(g, nu, &WindField::cavity()).unwrap()).unwrap().eta;
    assert!((eta(2.0) / eta(1.0) - 0.5).abs() <= 1e-6);
}

#[test]
fn zero_wind_oseen_is_symmetric() {
    let sys = oseen_fd(GridSpec::new(6).unwrap(), 1.0, &WindField::zero()).unwrap();
    let r = verify_assumptions(&sys).unwrap();
    assert!(r.eta <= 1e-12);
    let f = sys.k_dense().view((0, 0), (sys.n(), sys.n())).clone_owned();
    assert!((&f - f.transpose()).norm() <= 1e-12 * f.norm());
}

#[test]
fn preconditioned_solution_solves_original_system() {
    let sys = oseen_fd(GridSpec::new(8).unwrap(), 1.0, &WindField::cavity()).unwrap();
    let rhs = sys.rhs.clone().unwrap();
    let opts = GmresOptions {
        tol: 1e-10,
        ..Default::default()
    };
    let direct = lu_solve(&sys.k_dense(), &rhs).unwrap();
    for side in [Side::Left, Side::Right] {
        for variant in [Variant::Diagonal, Variant::Upper, Variant::Lower] {
            let m = BlockPreconditioner::new(&sys, variant, side).unwrap();
            let (x, t) = solve_preconditioned(&sys, &m, &rhs, &opts, Some(NormChoice::natural(side))).unwrap();
            assert!(t.converged);
            assert!(rel_err(&x, &direct) <= 1e-7, "{variant:?} {side:?}");
        }
    }
}

#[test]
fn upper_preconditioner_beats_diagonal() {
    let sys = synthetic(40, 15, 0.2, 2.0, 0.5, 9).unwrap();
    let rhs: Vec<f64> = random_vector(&mut rng(9), sys.dim());
    let opts = GmresOptions::default();
    let its = |v| {
        let m = BlockPreconditioner::new(&sys, v, Side::Left).unwrap();
        solve_preconditioned(&sys, &m, &rhs, &opts, None).unwrap().1.iterations
    };
    assert!(its(Variant::Upper) < its(Variant::Diagonal));
}
