use serde::{Deserialize, Serialize};

use super::SocpProblem;
use crate::scalar::{norm2, Scalar};

/// KKT scorecard for a candidate SOCP solution.
///
/// With q = Aᵀ(y − Ax)/‖y − Ax‖ the optimality conditions read μ q_i =
/// sign(x_i) on the support and |μ q_i| ≤ 1 off it (only μ q_i ≤ 1 in the
/// signed case), for a multiplier μ ≥ 0 that is positive only if the
/// constraint is active.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalityDiagnostics<T> {
    /// ‖y − Ax‖ / r
    pub residual_ratio: T,
    /// r − ‖y − Ax‖
    pub slack: T,
    /// least-squares fit of μ on the support
    pub multiplier: T,
    pub support_size: usize,
    pub support_violation: T,
    pub off_support_excess: T,
    /// max(support_violation, off_support_excess, infeasibility)
    pub violation_score: T,
    /// μ · max(slack, 0); zero at an optimum
    pub complementarity: T,
}

/// Score `x` against the KKT conditions of `problem`.
pub fn optimality_diagnostics<T: Scalar>(problem: &SocpProblem<'_, T>, x: &[T]) -> OptimalityDiagnostics<T> {
    let ax = problem.a.matvec(x);
    let res: Vec<T> = problem.y.iter().zip(&ax).map(|(&y, &v)| y - v).collect();
    let rn = norm2(&res);
    let slack = problem.r - rn;
    let infeasibility = ((rn - problem.r) / problem.r).max(T::zero());
    let xmax = x.iter().fold(T::zero(), |acc, &v| acc.max(v.abs()));
    let supp_tol = T::lit(1e-10) * xmax.max(T::one());
    let support: Vec<usize> = (0..x.len()).filter(|&i| x[i].abs() > supp_tol).collect();
    let negativity = if problem.signed {
        x.iter().fold(T::zero(), |acc, &v| acc.max(-v))
    } else {
        T::zero()
    };

    if support.is_empty() || rn == T::zero() {
        // x = 0 is optimal exactly when it is feasible
        let score = infeasibility.max(negativity);
        return OptimalityDiagnostics {
            residual_ratio: rn / problem.r,
            slack,
            multiplier: T::zero(),
            support_size: support.len(),
            support_violation: T::zero(),
            off_support_excess: T::zero(),
            violation_score: if support.is_empty() { score } else { T::infinity() },
            complementarity: T::zero(),
        };
    }

    let q: Vec<T> = problem.a.matvec_t(&res).into_iter().map(|v| v / rn).collect();
    let (num, den) = support.iter().fold((T::zero(), T::zero()), |(a, b), &i| {
        (a + x[i].signum() * q[i], b + q[i] * q[i])
    });
    let mu = if den > T::zero() { (num / den).max(T::zero()) } else { T::zero() };
    let support_violation = support
        .iter()
        .fold(T::zero(), |acc, &i| acc.max((mu * q[i] - x[i].signum()).abs()));
    let mut in_support = vec![false; x.len()];
    support.iter().for_each(|&i| in_support[i] = true);
    let off_support_excess = (0..x.len()).filter(|&i| !in_support[i]).fold(T::zero(), |acc, i| {
        let g = if problem.signed { mu * q[i] } else { (mu * q[i]).abs() };
        acc.max(g - T::one())
    });
    OptimalityDiagnostics {
        residual_ratio: rn / problem.r,
        slack,
        multiplier: mu,
        support_size: support.len(),
        support_violation,
        off_support_excess,
        violation_score: support_violation
            .max(off_support_excess)
            .max(infeasibility)
            .max(negativity),
        complementarity: mu * slack.max(T::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    #[test]
    fn hand_built_optimum() {
        // min |x1| + |x2| s.t. |3 − x1 − x2/2| ≤ 1  →  x = (2, 0)
        let a = DenseMatrix::<f64>::from_rows(&[vec![1.0, 0.5]]).unwrap();
        let y = [3.0];
        let p = SocpProblem { a: &a, y: &y, r: 1.0, signed: false };
        let d = optimality_diagnostics(&p, &[2.0, 0.0]);
        assert!(d.violation_score < 1e-12);
        assert!((d.multiplier - 1.0).abs() < 1e-12);
        assert!(d.slack.abs() < 1e-12);

        let worse = optimality_diagnostics(&p, &[0.0, 4.0]);
        assert!(worse.violation_score > 0.5);
    }

    #[test]
    fn infeasible_zero_is_flagged() {
        let a = DenseMatrix::<f64>::from_rows(&[vec![1.0, 0.5]]).unwrap();
        let y = [3.0];
        let p = SocpProblem { a: &a, y: &y, r: 1.0, signed: false };
        assert!(optimality_diagnostics(&p, &[0.0, 0.0]).violation_score >= 2.0);
    }
}
