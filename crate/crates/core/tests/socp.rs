mod common;

use common::{l1, random_problem, rel_diff, rng};
use proptest::prelude::*;
use rand::Rng;
use socp_recovery::linalg::DenseMatrix;
use socp_recovery::Error;
use socp_recovery::socp::{optimality_diagnostics, reference_solve, solve_socp, SocpProblem, SolverOptions};

const FEASIBILITY_SLACK: f64 = 1e-6;
const AGREEMENT_TOL: f64 = 1e-5;

fn problem<'a>(a: &'a DenseMatrix<f64>, y: &'a [f64], r: f64, signed: bool) -> SocpProblem<'a, f64> {
    SocpProblem { a, y, r, signed }
}

#[test]
fn admm_and_pdhg_agree_on_random_instances() {
    let mut rng = rng(101);
    let opts = SolverOptions::default();
    for i in 0..30 {
        let n = rng.gen_range(20..=200);
        let m = (n as f64 * rng.gen_range(0.4..0.8)).round() as usize;
        let k = ((m as f64) * rng.gen_range(0.05..0.25)).round().max(1.0) as usize;
        let signed = i % 3 == 2;
        let p = random_problem(&mut rng, m, n, k, 0.5, signed);
        let prob = problem(&p.a, &p.y, p.r, signed);
        let x = solve_socp(&prob, &opts, Some(&p.x_tilde)).unwrap();
        let z = reference_solve(&prob, &opts, Some(&p.x_tilde)).unwrap();
        assert!(x.converged && z.converged, "instance {i}: {} / {}", x.converged, z.converged);
        let gap = rel_diff(x.objective, z.objective);
        assert!(gap < AGREEMENT_TOL, "instance {i} (n={n}, signed={signed}): {} vs {}", x.objective, z.objective);
        assert!(x.residual_norm <= p.r * (1.0 + FEASIBILITY_SLACK));
        let d = optimality_diagnostics(&prob, &x.x_rec);
        assert!(d.violation_score < 1e-4, "instance {i}: KKT violation {}", d.violation_score);
    }
}

#[test]
fn zero_is_returned_exactly_inside_the_ball() {
    let mut rng = rng(7);
    let p = random_problem(&mut rng, 20, 40, 3, 1.0, false);
    let big_r = p.y.iter().map(|v| v * v).sum::<f64>().sqrt() * 1.01;
    for signed in [false, true] {
        let prob = problem(&p.a, &p.y, big_r, signed);
        let sol = solve_socp(&prob, &SolverOptions::default(), None).unwrap();
        assert!(sol.x_rec.iter().all(|v| *v == 0.0));
        assert_eq!(sol.objective, 0.0);
        assert_eq!(sol.iterations, 0);
    }
}

#[test]
fn objective_is_nonincreasing_in_radius() {
    let mut rng = rng(8);
    for signed in [false, true] {
        let p = random_problem(&mut rng, 40, 100, 6, 1.0, signed);
        let mut prev = f64::INFINITY;
        for scale in [0.3, 0.5, 0.8, 1.0, 1.3, 2.0] {
            let prob = problem(&p.a, &p.y, scale * p.r, signed);
            let sol = solve_socp(&prob, &SolverOptions::default(), None).unwrap();
            assert!(sol.converged);
            assert!(sol.objective <= prev * (1.0 + 1e-6), "r x{scale}: {} > {prev}", sol.objective);
            prev = sol.objective;
        }
    }
}

#[test]
fn sign_constraint_never_lowers_the_objective() {
    let mut rng = rng(9);
    for _ in 0..5 {
        let p = random_problem(&mut rng, 30, 80, 4, 1.0, true);
        let free = solve_socp(&problem(&p.a, &p.y, p.r, false), &SolverOptions::default(), None).unwrap();
        let pos = solve_socp(&problem(&p.a, &p.y, p.r, true), &SolverOptions::default(), None).unwrap();
        assert!(pos.objective >= free.objective * (1.0 - 1e-6));
        assert!(pos.x_rec.iter().all(|v| *v >= 0.0));
    }
}

#[test]
fn solution_scales_with_data() {
    let mut rng = rng(10);
    let p = random_problem(&mut rng, 30, 70, 4, 1.0, false);
    let base = solve_socp(&problem(&p.a, &p.y, p.r, false), &SolverOptions::default(), None).unwrap();
    for s in [0.01, 7.0] {
        let ys: Vec<f64> = p.y.iter().map(|v| v * s).collect();
        let sol = solve_socp(&problem(&p.a, &ys, s * p.r, false), &SolverOptions::default(), None).unwrap();
        assert!(rel_diff(sol.objective, s * base.objective) < 1e-5);
    }
}

#[test]
fn error_vector_is_reported_against_truth() {
    let mut rng = rng(12);
    let p = random_problem(&mut rng, 40, 80, 4, 0.1, false);
    let sol = solve_socp(&problem(&p.a, &p.y, p.r, false), &SolverOptions::default(), Some(&p.x_tilde)).unwrap();
    let w = sol.w.as_ref().unwrap();
    for ((wi, xi), ti) in w.iter().zip(&sol.x_rec).zip(&p.x_tilde) {
        assert!((wi - (xi - ti)).abs() < 1e-15);
    }
    assert!((sol.f_obj - (l1(&sol.x_rec) - l1(&p.x_tilde))).abs() < 1e-12);
}

#[test]
fn certification_reports_small_gap() {
    let mut rng = rng(13);
    let p = random_problem(&mut rng, 30, 60, 3, 1.0, false);
    let opts = SolverOptions {
        certify: true,
        ..SolverOptions::default()
    };
    let sol = solve_socp(&problem(&p.a, &p.y, p.r, false), &opts, None).unwrap();
    assert!(sol.certificate_gap.unwrap() < 1e-5);
}

#[test]
fn bad_inputs_are_domain_errors() {
    let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let opts = SolverOptions::default();
    assert!(solve_socp(&problem(&a, &[1.0], 0.5, false), &opts, None).is_err());
    assert!(solve_socp(&problem(&a, &[1.0, 2.0], 0.0, false), &opts, None).is_err());
    assert!(solve_socp(&problem(&a, &[f64::NAN, 2.0], 0.5, false), &opts, None).is_err());
    assert!(solve_socp(&problem(&a, &[1.0, 2.0], 0.5, false), &opts, Some(&[1.0])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn converged_solves_are_feasible(seed in any::<u64>(), n in 8usize..60, frac in 0.3f64..0.9, signed in any::<bool>()) {
        let mut rng = rng(seed);
        let m = ((n as f64) * frac).round().max(2.0) as usize;
        let p = random_problem(&mut rng, m, n, 1 + m / 8, 1.0, signed);
        let prob = problem(&p.a, &p.y, 0.7 * p.r, signed);
        let sol = match solve_socp(&prob, &SolverOptions::default(), None) {
            Ok(s) => s,
            Err(Error::Infeasible(_)) => {
                // only the sign constraint can make the ball unreachable
                prop_assert!(signed);
                prop_assert!(common::nnls_residual(&p.a, &p.y, 20_000) > prob.r);
                return Ok(());
            }
            Err(e) => panic!("{e}"),
        };
        if sol.converged {
            prop_assert!(sol.residual_norm <= prob.r * (1.0 + FEASIBILITY_SLACK));
            prop_assert!(prob.residual_norm(&sol.x_rec) <= prob.r * (1.0 + FEASIBILITY_SLACK));
        }
        if signed {
            prop_assert!(sol.x_rec.iter().all(|v| *v >= 0.0));
        }
    }
}
