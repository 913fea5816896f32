//! Asymptotic performance characterizations of noisy ℓ1/SOCP recovery.
//!
//! Everything here is a deterministic function of the scaled problem
//! description ([`RecoveryRegime`]): the noiseless ℓ1 weak threshold, the
//! generic (large-spike) predictor of the SOCP error and objective, the
//! error-minimizing radius and the ρ-contours built from them. Each routine
//! exists in a general and a signed (`x >= 0`) flavour selected by
//! `signed`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{brent, scan_sign_changes};
use crate::scalar::Scalar;
use crate::special::inverse_erf;

/// Number of intervals in the θ scan that brackets the θ̂ root.
pub const THETA_SCAN_INTERVALS: usize = 512;

/// Scaled problem description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryRegime<T> {
    /// m / n
    pub alpha: T,
    /// k / n
    pub beta_w: T,
    /// noise standard deviation
    pub sigma: T,
    /// SOCP radius divided by √n
    pub r_sc: T,
    pub signed: bool,
}

impl<T: Scalar> RecoveryRegime<T> {
    pub fn new(alpha: T, beta_w: T, sigma: T, r_sc: T, signed: bool) -> Result<Self> {
        let regime = Self {
            alpha,
            beta_w,
            sigma,
            r_sc,
            signed,
        };
        regime.validate()?;
        Ok(regime)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.alpha, self.beta_w, self.sigma, self.r_sc]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain(format!("non-finite regime parameter: {:?}", self)));
        }
        if !(T::zero() < self.beta_w && self.beta_w < self.alpha && self.alpha <= T::one()) {
            return Err(Error::Domain(format!(
                "need 0 < beta_w < alpha <= 1, got alpha = {}, beta_w = {}",
                self.alpha, self.beta_w
            )));
        }
        if self.sigma <= T::zero() || self.r_sc <= T::zero() {
            return Err(Error::Domain(format!(
                "sigma and r_sc must be positive, got sigma = {}, r_sc = {}",
                self.sigma, self.r_sc
            )));
        }
        Ok(())
    }

    pub fn with_radius(self, r_sc: T) -> Self {
        Self { r_sc, ..self }
    }
}

/// A(θ) … F(θ) evaluated at one θ (signed flavour when the regime is signed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarCoefficients<T> {
    pub theta: T,
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub f: T,
}

/// Concentrating points predicted for a regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryPoint<T> {
    pub regime: RecoveryRegime<T>,
    pub theta_hat: T,
    /// E ν_gen
    pub nu_gen: T,
    /// E ‖w_gen‖₂, which the SOCP error norm concentrates around
    pub w_norm: T,
    /// lim E ξ_prim / √n, which f_obj / √n concentrates around
    pub xi_prim_limit: T,
    pub alpha_w: T,
    /// σ √(α − α_w)
    pub r_opt_sc: T,
    /// sign changes seen while bracketing θ̂; more than one means the
    /// smallest root was taken
    pub theta_sign_changes: usize,
}

/// Distance kept from the ends of open intervals where erfinv diverges.
pub fn interval_margin<T: Scalar>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(8.0))
}

fn residual_tolerance<T: Scalar>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(1e4))
}

fn discriminant_tolerance<T: Scalar>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(1e2))
}

/// erfinv argument shared by the threshold and the coefficient formulas.
fn erfinv_arg<T: Scalar>(one_minus_t: T, beta_w: T, signed: bool) -> T {
    let frac = one_minus_t / (T::one() - beta_w);
    if signed {
        T::lit(2.0) * frac - T::one()
    } else {
        frac
    }
}

/// Left-hand side of the weak-threshold characterization at `alpha_w`.
pub fn weak_threshold_residual<T: Scalar>(alpha_w: T, beta_w: T, signed: bool) -> Result<T> {
    let e = inverse_erf(erfinv_arg(T::one() - alpha_w, beta_w, signed))?;
    let k = if signed {
        (T::one() / (T::lit(2.0) * T::PI())).sqrt()
    } else {
        (T::lit(2.0) / T::PI()).sqrt()
    };
    Ok((T::one() - beta_w) * k * (-e * e).exp() / alpha_w - T::SQRT_2() * e)
}

/// Noiseless ℓ1 weak threshold α_w(β_w): the smallest m/n at which
/// ℓ1 minimization recovers β_w n-sparse (or signed-sparse) vectors.
pub fn l1_weak_threshold<T: Scalar>(beta_w: T, signed: bool) -> Result<T> {
    if !(T::zero() < beta_w && beta_w < T::one()) {
        return Err(Error::Domain(format!("beta_w must lie in (0, 1), got {}", beta_w)));
    }
    let margin = interval_margin::<T>();
    let lo = beta_w + margin;
    let hi = T::one() - margin;
    if lo >= hi {
        return Err(Error::Domain(format!("beta_w = {} leaves an empty bracket", beta_w)));
    }
    brent(
        |a| weak_threshold_residual(a, beta_w, signed).unwrap_or_else(|_| T::nan()),
        lo,
        hi,
        T::epsilon(),
        400,
    )
}

/// A, B, C, D, F at `theta` for `regime`.
///
/// θ must lie in [β_w, 1]; the endpoints are pulled inside by
/// [`interval_margin`] because erfinv diverges there.
pub fn scalar_coeffs<T: Scalar>(theta: T, regime: &RecoveryRegime<T>) -> Result<ScalarCoefficients<T>> {
    let beta = regime.beta_w;
    if theta.is_nan() || theta < beta || theta > T::one() {
        return Err(Error::Domain(format!(
            "theta = {} outside [beta_w, 1] = [{}, 1]",
            theta, beta
        )));
    }
    let margin = interval_margin::<T>();
    let theta = theta.max(beta + margin).min(T::one() - margin);
    let e = inverse_erf(erfinv_arg(T::one() - theta, beta, regime.signed))?;
    let gauss = (-e * e).exp();
    let one_m_beta = T::one() - beta;
    let (c, d) = if regime.signed {
        let inv_sqrt_2pi = (T::one() / (T::lit(2.0) * T::PI())).sqrt();
        (
            one_m_beta * inv_sqrt_2pi * gauss,
            theta + one_m_beta * inv_sqrt_2pi * T::SQRT_2() * e * gauss,
        )
    } else {
        (
            one_m_beta * (T::lit(2.0) / T::PI()).sqrt() * gauss,
            theta + one_m_beta * T::FRAC_2_SQRT_PI() * e * gauss,
        )
    };
    let scale = regime.sigma / regime.r_sc;
    Ok(ScalarCoefficients {
        theta,
        a: scale * (regime.alpha - d),
        b: scale * c,
        c,
        d,
        f: T::SQRT_2() * e,
    })
}

/// Minus root ν of the stationarity quadratic
/// (A²−α+D)ν² + 2(AB−C)ν + (B²+θ) = 0.
///
/// Returns an error when the discriminant is negative beyond rounding or when
/// the root fails the stationarity sign check Aν + B > 0.
pub fn stationary_nu<T: Scalar>(k: &ScalarCoefficients<T>, alpha: T) -> Result<T> {
    let quad = k.a * k.a - alpha + k.d;
    let lin = k.a * k.b - k.c;
    let cst = k.b * k.b + k.theta;
    let nu = if quad.abs() < T::lit(1e-12) {
        if lin == T::zero() {
            return Err(Error::Numerical("stationarity equation is degenerate".into()));
        }
        -cst / (T::lit(2.0) * lin)
    } else {
        let mut disc = lin * lin - cst * quad;
        if disc < T::zero() {
            if disc > -discriminant_tolerance::<T>() {
                disc = T::zero();
            } else {
                return Err(Error::Numerical(format!(
                    "negative discriminant {} at theta = {}",
                    disc, k.theta
                )));
            }
        }
        (-lin - disc.sqrt()) / quad
    };
    if !(nu > T::zero()) || !(k.a * nu + k.b > T::zero()) {
        return Err(Error::Numerical(format!(
            "spurious stationary point nu = {} at theta = {}",
            nu, k.theta
        )));
    }
    Ok(nu)
}

/// F(θ)·ν(θ) − 1, whose zero defines θ̂.
pub fn theta_equation_residual<T: Scalar>(theta: T, regime: &RecoveryRegime<T>) -> Result<T> {
    let k = scalar_coeffs(theta, regime)?;
    Ok(k.f * stationary_nu(&k, regime.alpha)? - T::one())
}

/// Root θ̂ together with the number of sign changes found while scanning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaRoot<T> {
    pub theta: T,
    pub sign_changes: usize,
}

/// Solve F(θ)ν(θ) = 1 on (β_w, 1).
///
/// A 512-interval scan brackets every sign change; the smallest one is
/// refined with Brent's method.
pub fn solve_theta_hat<T: Scalar>(regime: &RecoveryRegime<T>) -> Result<ThetaRoot<T>> {
    regime.validate()?;
    let margin = interval_margin::<T>();
    let lo = regime.beta_w + margin;
    let hi = T::one() - margin;
    let eval = |t: T| theta_equation_residual(t, regime).unwrap_or_else(|_| T::nan());
    let (profile, brackets) = scan_sign_changes(eval, lo, hi, THETA_SCAN_INTERVALS);
    let Some(&(a, b)) = brackets.first() else {
        return Err(Error::NoRoot {
            profile: profile
                .iter()
                .map(|&(x, y)| (x.to_f64_lossy(), y.to_f64_lossy()))
                .collect(),
        });
    };
    if brackets.len() > 1 {
        log::debug!(
            "theta equation has {} sign changes for {:?}; taking the smallest",
            brackets.len(),
            regime
        );
    }
    let theta = brent(eval, a, b, T::epsilon(), 400)?;
    let residual = theta_equation_residual(theta, regime)?;
    if residual.abs() >= residual_tolerance::<T>() {
        return Err(Error::Numerical(format!(
            "theta residual {} too large at theta = {}",
            residual, theta
        )));
    }
    Ok(ThetaRoot {
        theta,
        sign_changes: brackets.len(),
    })
}

/// Generic-scenario concentrating points of ν_gen, ‖w‖₂ and f_obj/√n.
pub fn predict_generic<T: Scalar>(regime: &RecoveryRegime<T>) -> Result<TheoryPoint<T>> {
    regime.validate()?;
    let alpha_w = l1_weak_threshold(regime.beta_w, regime.signed)?;
    if regime.alpha <= alpha_w {
        return Err(Error::AboveCharacterization(format!(
            "alpha = {} is not above the weak threshold {} for beta_w = {}",
            regime.alpha, alpha_w, regime.beta_w
        )));
    }
    let root = solve_theta_hat(regime)?;
    let k = scalar_coeffs(root.theta, regime)?;
    let nu = stationary_nu(&k, regime.alpha)?;
    let spread = nu * nu * k.d - T::lit(2.0) * nu * k.c + k.theta;
    let radicand = regime.alpha * nu * nu - spread;
    if !(radicand > T::zero()) || spread < T::zero() {
        return Err(Error::AboveCharacterization(format!(
            "nonpositive radicand {} at theta_hat = {}",
            radicand, root.theta
        )));
    }
    let sigma = regime.sigma;
    Ok(TheoryPoint {
        regime: *regime,
        theta_hat: root.theta,
        nu_gen: nu,
        w_norm: sigma * (spread / radicand).sqrt(),
        xi_prim_limit: sigma * radicand.sqrt() - nu * regime.r_sc,
        alpha_w,
        r_opt_sc: sigma * (regime.alpha - alpha_w).sqrt(),
        theta_sign_changes: root.sign_changes,
    })
}

/// Scaled radius σ√(α − α_w) that minimizes the generic error norm.
pub fn optimal_radius<T: Scalar>(alpha: T, beta_w: T, sigma: T, signed: bool) -> Result<T> {
    let alpha_w = l1_weak_threshold(beta_w, signed)?;
    if alpha <= alpha_w {
        return Err(Error::InfeasibleRegime {
            alpha: alpha.to_f64_lossy(),
            alpha_w: alpha_w.to_f64_lossy(),
        });
    }
    Ok(sigma * (alpha - alpha_w).sqrt())
}

/// Error-to-noise ratio √(α_w / (α − α_w)) reached at the optimal radius.
pub fn optimal_error_ratio<T: Scalar>(alpha: T, alpha_w: T) -> T {
    (alpha_w / (alpha - alpha_w)).sqrt()
}

/// How the SOCP radius is tied to α along a contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContourMode {
    /// r = σ√((α − α_w) n)
    OptimalRadius,
    /// r = σ√(α n)
    SqrtAlphaRadius,
}

impl fmt::Display for ContourMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContourMode::OptimalRadius => "optimal-radius",
            ContourMode::SqrtAlphaRadius => "sqrt-alpha-radius",
        })
    }
}

impl FromStr for ContourMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal-radius" | "opt" => Ok(ContourMode::OptimalRadius),
            "sqrt-alpha-radius" | "sqrt-alpha" => Ok(ContourMode::SqrtAlphaRadius),
            other => Err(Error::Domain(format!("unknown contour mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourPoint<T> {
    pub beta_w: T,
    pub alpha: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour<T> {
    pub rho: T,
    pub mode: ContourMode,
    pub signed: bool,
    pub points: Vec<ContourPoint<T>>,
    /// grid values for which no α ≤ 1 reaches the target, with the reason
    pub skipped: Vec<(T, String)>,
}

/// (α, β_w) pairs whose generic error-to-noise ratio equals `rho`.
///
/// Points whose α would exceed 1, or whose target cannot be reached, are
/// recorded in `skipped` rather than aborting the curve.
pub fn contour<T: Scalar>(rho: T, beta_grid: &[T], mode: ContourMode, signed: bool) -> Result<Contour<T>> {
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(Error::Domain(format!("rho must be positive, got {}", rho)));
    }
    let mut points = Vec::with_capacity(beta_grid.len());
    let mut skipped = Vec::new();
    for &beta in beta_grid {
        match contour_alpha(rho, beta, mode, signed) {
            Ok(alpha) => points.push(ContourPoint { beta_w: beta, alpha }),
            Err(e) => skipped.push((beta, e.to_string())),
        }
    }
    Ok(Contour {
        rho,
        mode,
        signed,
        points,
        skipped,
    })
}

fn contour_alpha<T: Scalar>(rho: T, beta: T, mode: ContourMode, signed: bool) -> Result<T> {
    let alpha_w = l1_weak_threshold(beta, signed)?;
    let rho2 = rho * rho;
    let alpha_opt = alpha_w * (T::one() + rho2) / rho2;
    if alpha_opt > T::one() {
        return Err(Error::Domain(format!(
            "optimal-radius contour needs alpha = {} > 1",
            alpha_opt
        )));
    }
    if mode == ContourMode::OptimalRadius {
        return Ok(alpha_opt);
    }
    // w(α) with r = σ√α is at least σρ at alpha_opt (the optimal radius is
    // smaller there) and decreases in α.
    let gap = |alpha: T| -> T {
        RecoveryRegime::new(alpha, beta, T::one(), alpha.sqrt(), signed)
            .and_then(|reg| predict_generic(&reg))
            .map(|p| p.w_norm - rho)
            .unwrap_or_else(|_| T::nan())
    };
    let at_one = gap(T::one());
    if !(at_one < T::zero()) {
        return Err(Error::Domain(format!(
            "sqrt-alpha-radius target rho = {} unreachable for alpha <= 1 (gap {})",
            rho, at_one
        )));
    }
    let lo_gap = gap(alpha_opt);
    if lo_gap.is_nan() {
        return Err(Error::Numerical(format!(
            "prediction failed at alpha = {}",
            alpha_opt
        )));
    }
    if lo_gap <= T::zero() {
        return Ok(alpha_opt);
    }
    let alpha = brent(gap, alpha_opt, T::one(), T::epsilon(), 300)?;
    let miss = gap(alpha);
    if !(miss.abs() <= T::lit(1e-8).max(T::epsilon().sqrt())) {
        return Err(Error::Numerical(format!(
            "sqrt-alpha-radius contour missed target by {} at alpha = {}",
            miss, alpha
        )));
    }
    Ok(alpha)
}

/// β_w on the optimal-radius ρ-contour through a given α, i.e. the β_w whose
/// weak threshold equals αρ²/(1+ρ²).
pub fn beta_on_optimal_contour<T: Scalar>(alpha: T, rho: T, signed: bool) -> Result<T> {
    if !(rho > T::zero()) || !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::Domain(format!(
            "need rho > 0 and 0 < alpha <= 1, got rho = {}, alpha = {}",
            rho, alpha
        )));
    }
    let rho2 = rho * rho;
    let target = alpha * rho2 / (T::one() + rho2);
    let margin = interval_margin::<T>();
    let f = |beta: T| {
        l1_weak_threshold(beta, signed)
            .map(|aw| aw - target)
            .unwrap_or_else(|_| T::nan())
    };
    brent(f, margin, target, T::epsilon(), 300)
}
