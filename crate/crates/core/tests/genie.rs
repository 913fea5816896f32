mod common;

use common::{genie_oracle, normals, rng};
use rand::Rng;
use socp_recovery::genie::{build_sorted, genie_montecarlo, genie_objective, genie_solve, SANDWICH_TOL};
use socp_recovery::theory::RecoveryRegime;
use socp_recovery::Error;

const ORACLE_GRID: usize = 100_000;
const ORACLE_TOL: f64 = 1e-6;

struct Draw {
    h: Vec<f64>,
    g: Vec<f64>,
    k: usize,
    r: f64,
}

fn draw(rng: &mut rand_chacha::ChaCha8Rng) -> Draw {
    let n = rng.gen_range(12..=40);
    let m = (n as f64 * rng.gen_range(0.45..0.8)).round() as usize;
    let k = ((m as f64) * rng.gen_range(0.05..0.2)).round().max(1.0) as usize;
    let r = (m as f64).sqrt() * rng.gen_range(0.4..1.0);
    Draw {
        h: normals(rng, n),
        g: normals(rng, m),
        k,
        r,
    }
}

#[test]
fn closed_form_matches_grid_oracle() {
    for signed in [false, true] {
        let mut rng = rng(if signed { 11 } else { 10 });
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 50 {
            attempts += 1;
            assert!(attempts < 500, "too many degenerate draws");
            let d = draw(&mut rng);
            let data = build_sorted(&d.h, &d.g, d.k, signed).unwrap();
            let sol = match genie_solve(&data, 1.0, d.r) {
                Ok(s) => s,
                Err(Error::DegenerateInstance(_)) | Err(Error::AboveCharacterization(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            let (nu, value) = genie_oracle(&d.h, &d.g, d.k, signed, 1.0, d.r, ORACLE_GRID).expect("oracle");
            assert!(
                (value - sol.xi_value).abs() < ORACLE_TOL,
                "signed={signed}: closed form {} vs oracle {value}",
                sol.xi_value
            );
            assert!((nu - sol.nu_gen).abs() < 1e-3 * nu.max(1.0), "nu {} vs {nu}", sol.nu_gen);
            checked += 1;
        }
    }
}

#[test]
fn sandwich_and_closed_form_consistency() {
    for signed in [false, true] {
        let mut rng = rng(20 + signed as u64);
        for _ in 0..100 {
            let d = draw(&mut rng);
            let data = build_sorted(&d.h, &d.g, d.k, signed).unwrap();
            let Ok(sol) = genie_solve(&data, 1.0, d.r) else { continue };
            let c = sol.c_gen;
            let off = data.n() - data.k;
            if c > 0 {
                assert!(data.h_bar[c - 1] * sol.nu_gen <= 1.0 + SANDWICH_TOL);
            }
            if c < off {
                assert!(data.h_bar[c] * sol.nu_gen > 1.0 - SANDWICH_TOL);
            }
            for (i, l) in sol.lambda.iter().enumerate() {
                if i < c {
                    assert!((l - (1.0 - sol.nu_gen * data.h_bar[i])).abs() < 1e-14);
                } else {
                    assert_eq!(*l, 0.0);
                }
            }
            let direct = genie_objective(&data, sol.nu_gen, &sol.lambda, 1.0, d.r).unwrap();
            assert!((direct - sol.xi_value).abs() < 1e-10);
        }
    }
}

#[test]
fn maximizer_dominates_feasible_perturbations() {
    for signed in [false, true] {
        let mut rng = rng(30 + signed as u64);
        let mut instances = 0;
        while instances < 20 {
            let d = draw(&mut rng);
            let data = build_sorted(&d.h, &d.g, d.k, signed).unwrap();
            let Ok(sol) = genie_solve(&data, 1.0, d.r) else { continue };
            instances += 1;
            let off = data.n() - data.k;
            for _ in 0..100 {
                let nu = sol.nu_gen * (1.0 + rng.gen_range(-0.2..0.2));
                let lambda: Vec<f64> = sol
                    .lambda
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| {
                        if i >= off {
                            0.0
                        } else {
                            let v = (l + rng.gen_range(-0.3..0.3)).max(0.0);
                            if signed {
                                v
                            } else {
                                v.min(1.0)
                            }
                        }
                    })
                    .collect();
                if let Ok(v) = genie_objective(&data, nu, &lambda, 1.0, d.r) {
                    assert!(v <= sol.xi_value + 1e-12, "perturbation {v} beats {}", sol.xi_value);
                }
            }
        }
    }
}

#[test]
fn objective_rejects_out_of_box_multipliers() {
    let data = build_sorted(&[0.3, -1.2, 0.8, 2.0], &[1.0, -0.5, 0.7], 1, false).unwrap();
    assert!(genie_objective(&data, 0.5, &[1.5, 0.0, 0.0, 0.0], 1.0, 1.0).is_err());
    assert!(genie_objective(&data, 0.5, &[0.0, 0.0, 0.0, 0.2], 1.0, 1.0).is_err());
}

#[test]
fn montecarlo_near_theory_and_reproducible() {
    let regime = RecoveryRegime::new(0.5, 0.1, 1.0, 0.5f64.sqrt(), false).unwrap();
    let a = genie_montecarlo(&regime, 1000, 60, 3).unwrap();
    let b = genie_montecarlo(&regime, 1000, 60, 3).unwrap();
    assert_eq!(a, b);
    assert!((a.nu_gen.mean - 0.6899).abs() / 0.6899 < 0.03, "nu {}", a.nu_gen.mean);
}
