//! Finite-n genie-aided dual problem.
//!
//! Given the support of the unknown vector, the dual of the SOCP reduces to a
//! one-dimensional problem in ν once the entries of h̄ are sorted: the
//! smallest ones are clipped by λ and the rest enter a closed-form quadratic.
//! [`genie_solve`] scans the clip count and keeps the stationary point that is
//! consistent with the sort order. The objective is concave in ν, so the
//! consistent clip count is unique up to ties.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{NormalStream, StreamTag};
use crate::scalar::{dot, Scalar};
use crate::stats::SampleStat;
use crate::theory::RecoveryRegime;

/// Fraction of degenerate trials above which a Monte Carlo run is rejected.
pub const MAX_FAILURE_FRACTION: f64 = 0.10;

/// Tolerance used when checking the sort-order sandwich h̄_c ν ≤ 1 < h̄_{c+1} ν.
pub const SANDWICH_TOL: f64 = 1e-9;

/// h̄ sorted for the genie scan plus the suffix sums it needs.
///
/// The first `n - k` entries are off-support (sorted by magnitude in the
/// general case and by value in the signed case); the last `k` entries are
/// the on-support values, kept in their original order.
#[derive(Debug, Clone)]
pub struct SortedDualData<T> {
    pub h_bar: Vec<T>,
    pub k: usize,
    pub signed: bool,
    pub g_norm_sq: T,
    suffix_sq: Vec<T>,
    suffix_hz: Vec<T>,
}

impl<T: Scalar> SortedDualData<T> {
    pub fn n(&self) -> usize {
        self.h_bar.len()
    }

    /// +1 on the off-support block, −1 on the support block.
    pub fn z2(&self, i: usize) -> T {
        if i < self.n() - self.k {
            T::one()
        } else {
            -T::one()
        }
    }

    /// Σ_{i ≥ c} h̄_i².
    pub fn suffix_sq(&self, c: usize) -> T {
        self.suffix_sq[c]
    }

    /// Σ_{i ≥ c} h̄_i z2_i.
    pub fn suffix_hz(&self, c: usize) -> T {
        self.suffix_hz[c]
    }
}

/// Sort `h` for the genie scan. The last `k` entries of `h` are the support.
pub fn build_sorted<T: Scalar>(h: &[T], g: &[T], k: usize, signed: bool) -> Result<SortedDualData<T>> {
    let n = h.len();
    if n == 0 || k >= n {
        return Err(Error::Domain(format!("need 0 <= k < n, got k = {k}, n = {n}")));
    }
    if h.iter().chain(g).any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite entry in h or g".into()));
    }
    let off = n - k;
    let mut h_bar: Vec<T> = if signed {
        h[..off].to_vec()
    } else {
        h[..off].iter().map(|v| v.abs()).collect()
    };
    // stable: ties keep their original order
    h_bar.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    h_bar.extend_from_slice(&h[off..]);

    let mut suffix_sq = vec![T::zero(); n + 1];
    let mut suffix_hz = vec![T::zero(); n + 1];
    for i in (0..n).rev() {
        let z = if i < off { T::one() } else { -T::one() };
        suffix_sq[i] = suffix_sq[i + 1] + h_bar[i] * h_bar[i];
        suffix_hz[i] = suffix_hz[i + 1] + h_bar[i] * z;
    }
    Ok(SortedDualData {
        h_bar,
        k,
        signed,
        g_norm_sq: dot(g, g),
        suffix_sq,
        suffix_hz,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenieSolution<T> {
    /// number of clipped (λ > 0) off-support entries
    pub c_gen: usize,
    pub nu_gen: T,
    pub lambda: Vec<T>,
    pub w_norm: T,
    pub xi_value: T,
    pub a_gen: T,
    pub b_gen: T,
}

/// Stationary ν for clip count `c`, with the (a, b) coefficients.
fn stationary_for<T: Scalar>(data: &SortedDualData<T>, c: usize, sigma: T, r: T) -> Option<(T, T, T)> {
    let n = data.n();
    let g2 = data.g_norm_sq;
    let s2 = data.suffix_sq(c);
    let sz = data.suffix_hz(c);
    let len = T::from_usize_lossy(n - c);
    let a = sigma * (g2 - s2) / r;
    let b = sigma * sz / r;
    let quad = a * a - g2 + s2;
    let lin = a * b - sz;
    let cst = b * b + len;
    let scale = a * a + g2 + s2;
    let nu = if quad.abs() <= T::lit(1e-12) * scale {
        if lin == T::zero() {
            return None;
        }
        -cst / (T::lit(2.0) * lin)
    } else {
        let disc = lin * lin - cst * quad;
        if disc < T::zero() {
            return None;
        }
        (-lin - disc.sqrt()) / quad
    };
    if !(nu > T::zero()) || !(a * nu + b > T::zero()) {
        return None;
    }
    Some((nu, a, b))
}

/// Solve the genie dual for one instance with noise level `sigma` and
/// radius `r`.
pub fn genie_solve<T: Scalar>(data: &SortedDualData<T>, sigma: T, r: T) -> Result<GenieSolution<T>> {
    if !(sigma > T::zero()) || !(r > T::zero()) {
        return Err(Error::Domain(format!("need sigma > 0 and r > 0, got {sigma}, {r}")));
    }
    let n = data.n();
    let off = n - data.k;
    let tol = T::lit(SANDWICH_TOL);
    let one = T::one();
    let mut accepted: Option<(usize, T, T, T)> = None;
    let mut consistent = 0usize;
    for c in 0..=off {
        let Some((nu, a, b)) = stationary_for(data, c, sigma, r) else {
            continue;
        };
        let lower = c == 0 || data.h_bar[c - 1] * nu <= one + tol;
        let upper = c == off || data.h_bar[c] * nu > one - tol;
        if lower && upper {
            consistent += 1;
            accepted = Some((c, nu, a, b));
        }
    }
    let Some((c, nu, a, b)) = accepted else {
        return Err(Error::DegenerateInstance(
            "no clip count satisfies the sort-order sandwich".into(),
        ));
    };
    if consistent > 1 {
        log::debug!("genie: {consistent} consistent clip counts (ties), keeping c = {c}");
    }

    let mut lambda = vec![T::zero(); n];
    for (l, &h) in lambda.iter_mut().zip(&data.h_bar[..c]) {
        *l = one - nu * h;
    }
    let resid_sq: T = (c..n)
        .map(|i| {
            let t = nu * data.h_bar[i] - data.z2(i);
            t * t
        })
        .sum();
    let radicand = data.g_norm_sq * nu * nu - resid_sq;
    if !(radicand > T::zero()) {
        return Err(Error::AboveCharacterization(format!(
            "nonpositive radicand {radicand} at c = {c}"
        )));
    }
    Ok(GenieSolution {
        c_gen: c,
        nu_gen: nu,
        lambda,
        w_norm: sigma * (resid_sq / radicand).sqrt(),
        xi_value: sigma * radicand.sqrt() - nu * r,
        a_gen: a,
        b_gen: b,
    })
}

/// Genie dual objective σ√(‖g‖²ν² − ‖νh̄ − z2 + λ‖²) − νr.
pub fn genie_objective<T: Scalar>(data: &SortedDualData<T>, nu: T, lambda: &[T], sigma: T, r: T) -> Result<T> {
    let n = data.n();
    let off = n - data.k;
    if lambda.len() != n {
        return Err(Error::Domain(format!("lambda has length {}, expected {n}", lambda.len())));
    }
    let box_ok = lambda.iter().enumerate().all(|(i, &l)| {
        if i >= off {
            l == T::zero()
        } else if data.signed {
            l >= T::zero()
        } else {
            l >= T::zero() && l <= T::one()
        }
    });
    if !box_ok {
        return Err(Error::Domain("lambda violates its box constraints".into()));
    }
    let resid_sq: T = (0..n)
        .map(|i| {
            let t = nu * data.h_bar[i] - data.z2(i) + lambda[i];
            t * t
        })
        .sum();
    let radicand = data.g_norm_sq * nu * nu - resid_sq;
    if !(radicand >= T::zero()) {
        return Err(Error::Numerical(format!(
            "objective undefined: negative radicand {radicand} at nu = {nu}"
        )));
    }
    Ok(sigma * radicand.sqrt() - nu * r)
}

/// Draw h ∈ ℝⁿ and g ∈ ℝᵐ for one trial and solve the genie problem.
#[allow(clippy::too_many_arguments)]
pub fn genie_trial<T: Scalar>(
    n: usize,
    m: usize,
    k: usize,
    sigma: T,
    r: T,
    signed: bool,
    seed: u64,
    trial: u64,
) -> Result<GenieSolution<T>> {
    let h: Vec<T> = NormalStream::new(seed, trial, StreamTag::GenieH).normals(n, 1.0);
    let g: Vec<T> = NormalStream::new(seed, trial, StreamTag::GenieG).normals(m, 1.0);
    let data = build_sorted(&h, &g, k, signed)?;
    genie_solve(&data, sigma, r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenieStats {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    pub nu_gen: SampleStat,
    pub w_norm: SampleStat,
    pub xi_over_sqrt_n: SampleStat,
    pub failures: usize,
}

/// Genie Monte Carlo over `trials` independent draws at size `n`.
///
/// m = round(αn), k = round(β_w n), r = r_sc √n. Degenerate draws are
/// excluded from the averages and counted; more than
/// [`MAX_FAILURE_FRACTION`] of them is an error.
pub fn genie_montecarlo(regime: &RecoveryRegime<f64>, n: usize, trials: usize, seed: u64) -> Result<GenieStats> {
    regime.validate()?;
    if trials == 0 {
        return Err(Error::EmptyReport);
    }
    let m = (regime.alpha * n as f64).round() as usize;
    let k = (regime.beta_w * n as f64).round() as usize;
    if m == 0 || k == 0 || k >= n {
        return Err(Error::Domain(format!("sizes too small: n = {n}, m = {m}, k = {k}")));
    }
    let r = regime.r_sc * (n as f64).sqrt();
    let outcomes: Vec<Result<GenieSolution<f64>>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| genie_trial(n, m, k, regime.sigma, r, regime.signed, seed, t))
        .collect();

    let sqrt_n = (n as f64).sqrt();
    let (mut nu, mut w, mut xi) = (Vec::new(), Vec::new(), Vec::new());
    let mut failures = 0usize;
    let mut last_reason = String::new();
    for outcome in outcomes {
        match outcome {
            Ok(sol) => {
                nu.push(sol.nu_gen);
                w.push(sol.w_norm);
                xi.push(sol.xi_value / sqrt_n);
            }
            Err(e) => {
                failures += 1;
                last_reason = e.to_string();
            }
        }
    }
    if failures as f64 > MAX_FAILURE_FRACTION * trials as f64 || nu.is_empty() {
        return Err(Error::Aggregate {
            failed: failures,
            total: trials,
            reason: last_reason,
        });
    }
    Ok(GenieStats {
        n,
        m,
        k,
        trials,
        nu_gen: SampleStat::from_samples(&nu).expect("non-empty"),
        w_norm: SampleStat::from_samples(&w).expect("non-empty"),
        xi_over_sqrt_n: SampleStat::from_samples(&xi).expect("non-empty"),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(n: usize, m: usize, k: usize, signed: bool, trial: u64) -> SortedDualData<f64> {
        let h: Vec<f64> = NormalStream::new(5, trial, StreamTag::GenieH).normals(n, 1.0);
        let g: Vec<f64> = NormalStream::new(5, trial, StreamTag::GenieG).normals(m, 1.0);
        build_sorted(&h, &g, k, signed).unwrap()
    }

    #[test]
    fn sorted_layout() {
        let h = [-3.0, 1.0, -0.5, 2.0, 7.0, -8.0];
        let g = [1.0, 2.0];
        let d = build_sorted(&h, &g, 2, false).unwrap();
        assert_eq!(d.h_bar, vec![0.5, 1.0, 2.0, 3.0, 7.0, -8.0]);
        assert_eq!(d.g_norm_sq, 5.0);
        let s = build_sorted(&h, &g, 2, true).unwrap();
        assert_eq!(s.h_bar, vec![-3.0, -0.5, 1.0, 2.0, 7.0, -8.0]);
        assert_eq!(s.z2(3), 1.0);
        assert_eq!(s.z2(4), -1.0);
    }

    #[test]
    fn suffix_sums_match_direct() {
        let d = instance(500, 250, 50, false, 0);
        for c in [0, 1, 17, 200, 450, 500] {
            let s2: f64 = d.h_bar[c..].iter().map(|v| v * v).sum();
            let sz: f64 = (c..500).map(|i| d.h_bar[i] * d.z2(i)).sum();
            assert!((d.suffix_sq(c) - s2).abs() <= 1e-9 * s2.max(1.0));
            assert!((d.suffix_hz(c) - sz).abs() <= 1e-9 * d.suffix_sq(c).max(1.0));
        }
    }

    #[test]
    fn solution_satisfies_sandwich_and_objective() {
        for signed in [false, true] {
            for trial in 0..5 {
                let d = instance(1000, 500, 150, signed, trial);
                let r = 500f64.sqrt();
                let sol = genie_solve(&d, 1.0, r).unwrap();
                let c = sol.c_gen;
                assert!(c == 0 || d.h_bar[c - 1] * sol.nu_gen <= 1.0 + 1e-9);
                assert!(c == 850 || d.h_bar[c] * sol.nu_gen > 1.0 - 1e-9);
                let obj = genie_objective(&d, sol.nu_gen, &sol.lambda, 1.0, r).unwrap();
                assert!((obj - sol.xi_value).abs() < 1e-10 * sol.xi_value.abs().max(1.0));
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(build_sorted(&[1.0, 2.0], &[1.0], 2, false).is_err());
        assert!(build_sorted(&[f64::NAN, 2.0], &[1.0], 1, false).is_err());
        let d = instance(50, 25, 5, false, 1);
        assert!(genie_solve(&d, 0.0, 1.0).is_err());
        let bad = vec![2.0; 50];
        assert!(matches!(
            genie_objective(&d, 0.5, &bad, 1.0, 5.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn montecarlo_is_order_independent() {
        let reg = RecoveryRegime::new(0.5, 0.1, 1.0, 0.5f64.sqrt(), false).unwrap();
        let a = genie_montecarlo(&reg, 400, 12, 99).unwrap();
        let b = genie_montecarlo(&reg, 400, 12, 99).unwrap();
        assert_eq!(a, b);
    }
}
