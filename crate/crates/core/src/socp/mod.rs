//! The recovery SOCP
//!
//! ```text
//! minimize ‖x‖₁  subject to  ‖y − A x‖₂ ≤ r   (and x ≥ 0 when signed)
//! ```
//!
//! [`solve_socp`] runs over-relaxed ADMM on the graph splitting z = Ax;
//! [`reference_solve`] is an independent primal-dual (PDHG) method used to
//! certify it. [`optimality_diagnostics`] scores any candidate against the
//! KKT conditions.

mod admm;
mod diagnostics;
mod pdhg;

pub use diagnostics::{optimality_diagnostics, OptimalityDiagnostics};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{norm1, norm2, Scalar};

/// Problem data borrowed from the caller.
#[derive(Debug, Clone, Copy)]
pub struct SocpProblem<'a, T> {
    pub a: &'a DenseMatrix<T>,
    pub y: &'a [T],
    pub r: T,
    pub signed: bool,
}

impl<T: Scalar> SocpProblem<'_, T> {
    pub fn validate(&self) -> Result<()> {
        if self.a.rows() != self.y.len() {
            return Err(Error::Domain(format!(
                "A has {} rows but y has length {}",
                self.a.rows(),
                self.y.len()
            )));
        }
        if self.a.rows() == 0 || self.a.cols() == 0 {
            return Err(Error::Domain("empty problem".into()));
        }
        if !(self.r > T::zero()) || !self.r.is_finite() {
            return Err(Error::Domain(format!("radius must be positive, got {}", self.r)));
        }
        if self.y.iter().chain(self.a.as_slice()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite entry in A or y".into()));
        }
        Ok(())
    }

    pub fn residual_norm(&self, x: &[T]) -> T {
        let ax = self.a.matvec(x);
        let res: Vec<T> = self.y.iter().zip(&ax).map(|(&y, &v)| y - v).collect();
        norm2(&res)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// absolute tolerance per √n
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub max_iterations: usize,
    pub over_relaxation: f64,
    pub rho0: f64,
    pub adaptive_rho: bool,
    /// relative feasibility slack accepted on ‖y − Ax‖ ≤ r
    pub feasibility_tol: f64,
    /// iterations without primal progress (with growing duals) before a
    /// signed problem is declared infeasible
    pub infeasibility_window: usize,
    /// also run the reference method and record the objective gap
    pub certify: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            eps_abs: 1e-8,
            eps_rel: 1e-6,
            max_iterations: 50_000,
            over_relaxation: 1.8,
            rho0: 1.0,
            adaptive_rho: true,
            feasibility_tol: 1e-7,
            infeasibility_window: 5_000,
            certify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocpSolution<T> {
    pub x_rec: Vec<T>,
    /// x_rec − x̃ when the reference vector is supplied
    pub w: Option<Vec<T>>,
    /// ‖x_rec‖₁ − ‖x̃‖₁, or ‖x_rec‖₁ without a reference vector
    pub f_obj: T,
    pub objective: T,
    pub residual_norm: T,
    pub iterations: usize,
    pub converged: bool,
    /// relative objective gap to the reference method, when certified
    pub certificate_gap: Option<T>,
}

impl<T: Scalar> SocpSolution<T> {
    fn finish(x_rec: Vec<T>, problem: &SocpProblem<'_, T>, x_tilde: Option<&[T]>, iterations: usize, converged: bool) -> Self {
        let objective = norm1(&x_rec);
        let (w, f_obj) = match x_tilde {
            Some(xt) => (
                Some(x_rec.iter().zip(xt).map(|(&a, &b)| a - b).collect()),
                objective - norm1(xt),
            ),
            None => (None, objective),
        };
        Self {
            residual_norm: problem.residual_norm(&x_rec),
            x_rec,
            w,
            f_obj,
            objective,
            iterations,
            converged,
            certificate_gap: None,
        }
    }

    pub fn w_norm(&self) -> Option<T> {
        self.w.as_deref().map(norm2)
    }
}

fn check_reference<T: Scalar>(problem: &SocpProblem<'_, T>, x_tilde: Option<&[T]>) -> Result<()> {
    problem.validate()?;
    if let Some(xt) = x_tilde {
        if xt.len() != problem.a.cols() {
            return Err(Error::Domain(format!(
                "x_tilde has length {}, expected {}",
                xt.len(),
                problem.a.cols()
            )));
        }
    }
    Ok(())
}

/// Solve the SOCP with ADMM.
///
/// Hitting the iteration cap is not an error: the best iterate is returned
/// with `converged = false`. Signed problems whose iterates stall while the
/// duals diverge return [`Error::Infeasible`].
pub fn solve_socp<T: Scalar>(problem: &SocpProblem<'_, T>, options: &SolverOptions, x_tilde: Option<&[T]>) -> Result<SocpSolution<T>> {
    check_reference(problem, x_tilde)?;
    let n = problem.a.cols();
    let (x, iterations, converged) = if norm2(problem.y) <= problem.r {
        (vec![T::zero(); n], 0, true)
    } else {
        admm::solve(problem, options)?
    };
    let mut sol = SocpSolution::finish(x, problem, x_tilde, iterations, converged);
    if options.certify {
        let reference = reference_solve(problem, options, x_tilde)?;
        let denom = sol.objective.abs().max(T::one());
        sol.certificate_gap = Some((sol.objective - reference.objective).abs() / denom);
    }
    Ok(sol)
}

/// Solve the SOCP with the primal-dual hybrid gradient method.
pub fn reference_solve<T: Scalar>(problem: &SocpProblem<'_, T>, options: &SolverOptions, x_tilde: Option<&[T]>) -> Result<SocpSolution<T>> {
    check_reference(problem, x_tilde)?;
    let n = problem.a.cols();
    let (x, iterations, converged) = if norm2(problem.y) <= problem.r {
        (vec![T::zero(); n], 0, true)
    } else {
        pdhg::solve(problem, options)?
    };
    Ok(SocpSolution::finish(x, problem, x_tilde, iterations, converged))
}

/// Euclidean projection of `v` onto the ball ‖· − center‖ ≤ radius, in place.
pub(crate) fn project_ball<T: Scalar>(v: &mut [T], center: &[T], radius: T) {
    let dist = v
        .iter()
        .zip(center)
        .fold(T::zero(), |acc, (&a, &c)| acc + (a - c) * (a - c))
        .sqrt();
    if dist > radius {
        let s = radius / dist;
        for (a, &c) in v.iter_mut().zip(center) {
            *a = c + (*a - c) * s;
        }
    }
}

/// prox of t‖·‖₁ (plus the nonnegativity indicator when signed).
#[inline]
pub(crate) fn shrink<T: Scalar>(v: T, t: T, signed: bool) -> T {
    if signed {
        (v - t).max(T::zero())
    } else if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        T::zero()
    }
}
