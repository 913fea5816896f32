//! Over-relaxed ADMM on the graph splitting (x, z) with z = Ãx.
//!
//! Ã = A/‖A‖₂ so that a single Cholesky factor of I + ÃÃᵀ serves every
//! graph projection; ρ only scales the prox steps and can adapt freely.

use super::{project_ball, shrink, SocpProblem, SolverOptions};
use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::scalar::Scalar;

const POWER_ITERATIONS: usize = 20;
const RHO_UPDATE_EVERY: usize = 25;

fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&u, &v)| acc + (u - v) * (u - v))
}

fn sq_norm<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |acc, &u| acc + u * u)
}

pub(super) fn solve<T: Scalar>(problem: &SocpProblem<'_, T>, options: &SolverOptions) -> Result<(Vec<T>, usize, bool)> {
    let n = problem.a.cols();
    let m = problem.a.rows();
    let scale = problem.a.spectral_norm_estimate(POWER_ITERATIONS);
    if !(scale > T::zero()) {
        return Err(Error::Infeasible("A = 0 and ‖y‖ > r".into()));
    }
    let inv = T::one() / scale;
    let at = problem.a.scaled(inv);
    let yt: Vec<T> = problem.y.iter().map(|&v| v * inv).collect();
    let rt = problem.r * inv;

    let mut gram = at.gram_rows();
    for i in 0..m {
        gram[i * m + i] = gram[i * m + i] + T::one();
    }
    let chol = Cholesky::factor(&gram, m)?;

    let gamma = T::lit(options.over_relaxation);
    let eps_abs = T::lit(options.eps_abs) * T::from_usize_lossy(n).sqrt();
    let eps_rel = T::lit(options.eps_rel);
    let feas_limit = rt * (T::one() + T::lit(options.feasibility_tol));
    let mut rho = T::lit(options.rho0);

    let mut x = vec![T::zero(); n];
    let mut z = vec![T::zero(); m];
    let mut ux = vec![T::zero(); n];
    let mut uz = vec![T::zero(); m];
    let mut xh = vec![T::zero(); n];
    let mut zh = vec![T::zero(); m];
    let mut w = vec![T::zero(); n];
    let mut t = vec![T::zero(); m];
    let mut ats = vec![T::zero(); n];
    let mut resid = vec![T::zero(); m];
    let mut xr = vec![T::zero(); n];

    let mut best_prim = T::infinity();
    let mut stall = 0usize;
    let mut dual_at_best = T::zero();

    for it in 1..=options.max_iterations {
        let thresh = T::one() / rho;
        for i in 0..n {
            xh[i] = shrink(x[i] - ux[i], thresh, problem.signed);
        }
        for j in 0..m {
            zh[j] = z[j] - uz[j];
        }
        project_ball(&mut zh, &yt, rt);

        // relaxed points, then graph projection of (xr + ux, zr + uz)
        for j in 0..m {
            let zr = gamma * zh[j] + (T::one() - gamma) * z[j];
            t[j] = zr + uz[j];
        }
        at.matvec_t_into(&t, &mut w);
        for i in 0..n {
            xr[i] = gamma * xh[i] + (T::one() - gamma) * x[i];
            w[i] = w[i] + xr[i] + ux[i];
        }
        let mut s = at.matvec(&w);
        chol.solve_in_place(&mut s);
        at.matvec_t_into(&s, &mut ats);

        let mut dx_sq = T::zero();
        let mut prim_sq = T::zero();
        for i in 0..n {
            let xn = w[i] - ats[i];
            dx_sq = dx_sq + (xn - x[i]) * (xn - x[i]);
            prim_sq = prim_sq + (xh[i] - xn) * (xh[i] - xn);
            ux[i] = ux[i] + xr[i] - xn;
            x[i] = xn;
        }
        for j in 0..m {
            let zr = t[j] - uz[j];
            let zn = s[j];
            dx_sq = dx_sq + (zn - z[j]) * (zn - z[j]);
            prim_sq = prim_sq + (zh[j] - zn) * (zh[j] - zn);
            uz[j] = uz[j] + zr - zn;
            z[j] = zn;
        }
        let prim = prim_sq.sqrt();
        let dual = rho * dx_sq.sqrt();
        let u_norm = (sq_norm(&ux) + sq_norm(&uz)).sqrt();
        let eps_pri = eps_abs
            + eps_rel * (sq_norm(&xh) + sq_norm(&zh)).sqrt().max((sq_norm(&x) + sq_norm(&z)).sqrt());
        let eps_dual = eps_abs + eps_rel * rho * u_norm;

        if prim <= eps_pri && dual <= eps_dual {
            at.matvec_into(&xh, &mut resid);
            if sq_dist(&resid, &yt).sqrt() <= feas_limit {
                return Ok((xh, it, true));
            }
        }

        if prim < best_prim * T::lit(0.999) {
            best_prim = prim;
            stall = 0;
            dual_at_best = rho * u_norm;
        } else {
            stall += 1;
            if stall >= options.infeasibility_window && rho * u_norm > T::lit(2.0) * dual_at_best.max(T::one()) {
                at.matvec_into(&xh, &mut resid);
                let gap = sq_dist(&resid, &yt).sqrt() / rt - T::one();
                if gap > T::lit(1e-6) {
                    return Err(Error::Infeasible(format!(
                        "primal residual stalled at {} for {} iterations while duals grew",
                        best_prim.to_f64_lossy(),
                        stall
                    )));
                }
                stall = 0;
            }
        }

        if options.adaptive_rho && it % RHO_UPDATE_EVERY == 0 && eps_pri > T::zero() && eps_dual > T::zero() {
            let ratio = ((prim / eps_pri) / (dual / eps_dual).max(T::min_positive_value())).sqrt();
            if ratio.is_finite() && (ratio > T::lit(5.0) || ratio < T::lit(0.2)) {
                let factor = ratio.max(T::lit(0.1)).min(T::lit(10.0));
                rho = rho * factor;
                ux.iter_mut().for_each(|u| *u = *u / factor);
                uz.iter_mut().for_each(|u| *u = *u / factor);
            }
        }
    }
    log::warn!(
        "ADMM hit the iteration cap ({}) with primal residual {}",
        options.max_iterations,
        best_prim.to_f64_lossy()
    );
    Ok((xh, options.max_iterations, false))
}
