//! Chambolle–Pock primal-dual iteration with residual-balanced step sizes.
//!
//! Kept deliberately independent of the ADMM code path (no factorization,
//! different splitting) so agreement between the two is a real check.

use super::{project_ball, shrink, SocpProblem, SolverOptions};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const POWER_ITERATIONS: usize = 100;
/// Safety margin on the power-iteration estimate so τσ‖K‖² < 1.
const NORM_SAFETY: f64 = 1.02;
const TOLERANCE: f64 = 1e-8;
/// The reference method is slower per digit than ADMM.
const ITERATION_FACTOR: usize = 4;

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &u| acc + u * u).sqrt()
}

pub(super) fn solve<T: Scalar>(problem: &SocpProblem<'_, T>, options: &SolverOptions) -> Result<(Vec<T>, usize, bool)> {
    let n = problem.a.cols();
    let m = problem.a.rows();
    let est = problem.a.spectral_norm_estimate(POWER_ITERATIONS);
    if !(est > T::zero()) {
        return Err(Error::Infeasible("A = 0 and ‖y‖ > r".into()));
    }
    let inv = T::one() / (est * T::lit(NORM_SAFETY));
    let k = problem.a.scaled(inv);
    let yt: Vec<T> = problem.y.iter().map(|&v| v * inv).collect();
    let rt = problem.r * inv;

    let mut tau = T::lit(0.95);
    let mut sigma = T::lit(0.95);
    let mut adapt = T::lit(0.5);
    let eta = T::lit(0.95);
    let delta = T::lit(1.5);
    let tol = T::lit(TOLERANCE);
    let sqrt_n = T::from_usize_lossy(n).sqrt();
    let y_scale = norm(&yt).max(T::one());
    let feas_limit = rt * (T::one() + T::lit(options.feasibility_tol.max(1e-6)));

    let mut x = vec![T::zero(); n];
    let mut p = vec![T::zero(); m];
    let mut kx = vec![T::zero(); m];
    let mut ktp = vec![T::zero(); n];
    let mut x_new = vec![T::zero(); n];
    let mut kx_new = vec![T::zero(); m];
    let mut ktp_new = vec![T::zero(); n];
    let mut v = vec![T::zero(); m];
    let two = T::lit(2.0);

    let max_it = options.max_iterations.saturating_mul(ITERATION_FACTOR);
    for it in 1..=max_it {
        for i in 0..n {
            x_new[i] = shrink(x[i] - tau * ktp[i], tau, problem.signed);
        }
        k.matvec_into(&x_new, &mut kx_new);
        for j in 0..m {
            v[j] = (p[j] + sigma * (two * kx_new[j] - kx[j])) / sigma;
        }
        project_ball(&mut v, &yt, rt);
        let mut p_new = vec![T::zero(); m];
        for j in 0..m {
            p_new[j] = p[j] + sigma * (two * kx_new[j] - kx[j]) - sigma * v[j];
        }
        k.matvec_t_into(&p_new, &mut ktp_new);

        let mut prim_sq = T::zero();
        for i in 0..n {
            let r = (x[i] - x_new[i]) / tau - (ktp[i] - ktp_new[i]);
            prim_sq = prim_sq + r * r;
        }
        let mut dual_sq = T::zero();
        for j in 0..m {
            let r = (p[j] - p_new[j]) / sigma - (kx[j] - kx_new[j]);
            dual_sq = dual_sq + r * r;
        }
        let prim = prim_sq.sqrt();
        let dual = dual_sq.sqrt();

        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut kx, &mut kx_new);
        std::mem::swap(&mut ktp, &mut ktp_new);
        p = p_new;

        if prim <= tol * sqrt_n && dual <= tol * y_scale {
            let d = kx
                .iter()
                .zip(&yt)
                .fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b))
                .sqrt();
            if d <= feas_limit {
                return Ok((x, it, true));
            }
        }

        if prim > delta * dual {
            tau = tau / (T::one() - adapt);
            sigma = sigma * (T::one() - adapt);
            adapt = adapt * eta;
        } else if prim < dual / delta {
            tau = tau * (T::one() - adapt);
            sigma = sigma / (T::one() - adapt);
            adapt = adapt * eta;
        }
    }
    log::warn!("reference solver hit the iteration cap ({max_it})");
    Ok((x, max_it, false))
}
