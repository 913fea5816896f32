use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::sampling::{NormalStream, StreamTag};
use crate::theory::{optimal_radius, RecoveryRegime};

/// How the SOCP radius is chosen for an instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusMode {
    /// r = σ√m
    SqrtM,
    /// r = √n · σ√(α − α_w)
    Opt,
    /// r = σ√(c m)
    Scaled(f64),
}

impl RadiusMode {
    /// Radius divided by √n for an exact-ratio regime.
    pub fn scaled_radius(&self, alpha: f64, beta_w: f64, sigma: f64, signed: bool) -> Result<f64> {
        match *self {
            RadiusMode::SqrtM => Ok(sigma * alpha.sqrt()),
            RadiusMode::Opt => optimal_radius(alpha, beta_w, sigma, signed),
            RadiusMode::Scaled(c) => {
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::Domain(format!("radius scale must be positive, got {c}")));
                }
                Ok(sigma * (c * alpha).sqrt())
            }
        }
    }

    /// Radius for an instance with `m` measurements out of `n`.
    pub fn radius(&self, n: usize, m: usize, alpha: f64, beta_w: f64, sigma: f64, signed: bool) -> Result<f64> {
        match *self {
            RadiusMode::SqrtM => Ok(sigma * (m as f64).sqrt()),
            RadiusMode::Scaled(c) => {
                self.scaled_radius(alpha, beta_w, sigma, signed)?;
                Ok(sigma * (c * m as f64).sqrt())
            }
            RadiusMode::Opt => Ok((n as f64).sqrt() * optimal_radius(alpha, beta_w, sigma, signed)?),
        }
    }
}

impl fmt::Display for RadiusMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusMode::SqrtM => f.write_str("sqrt-m"),
            RadiusMode::Opt => f.write_str("opt"),
            RadiusMode::Scaled(c) => write!(f, "scaled:{c}"),
        }
    }
}

impl FromStr for RadiusMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt-m" => Ok(RadiusMode::SqrtM),
            "opt" => Ok(RadiusMode::Opt),
            other => {
                let c = other
                    .strip_prefix("scaled:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::Domain(format!(
                            "unknown radius mode '{other}' (expected sqrt-m, opt or scaled:<c>)"
                        ))
                    })?;
                if !(c > 0.0) || !c.is_finite() {
                    return Err(Error::Domain(format!("radius scale must be positive, got {c}")));
                }
                Ok(RadiusMode::Scaled(c))
            }
        }
    }
}

/// Parameters of one random problem family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub alpha: f64,
    pub beta_w: f64,
    pub sigma: f64,
    pub r_mode: RadiusMode,
    pub signed: bool,
    /// magnitude of the nonzero entries; defaults to 40/√n
    pub spike: Option<f64>,
}

impl InstanceSpec {
    pub fn m(&self) -> usize {
        (self.alpha * self.n as f64).round() as usize
    }

    pub fn k(&self) -> usize {
        (self.beta_w * self.n as f64).round() as usize
    }

    pub fn spike(&self) -> f64 {
        self.spike.unwrap_or(40.0 / (self.n as f64).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::Domain(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) || !(self.beta_w > 0.0 && self.beta_w < self.alpha) {
            return Err(Error::Domain(format!(
                "need 0 < beta_w < alpha <= 1, got alpha = {}, beta_w = {}",
                self.alpha, self.beta_w
            )));
        }
        if self.m() == 0 || self.k() == 0 || self.k() >= self.n {
            return Err(Error::Domain(format!(
                "sizes too small: n = {}, m = {}, k = {}",
                self.n,
                self.m(),
                self.k()
            )));
        }
        if let Some(s) = self.spike {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(Error::Domain(format!("spike must be nonnegative, got {s}")));
            }
        }
        Ok(())
    }

    /// The large-n regime this family approximates.
    pub fn regime(&self) -> Result<RecoveryRegime<f64>> {
        let r_sc = self
            .r_mode
            .scaled_radius(self.alpha, self.beta_w, self.sigma, self.signed)?;
        RecoveryRegime::new(self.alpha, self.beta_w, self.sigma, r_sc, self.signed)
    }
}

/// One random draw y = A x̃ + v.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub a: DenseMatrix<f64>,
    pub x_tilde: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<f64>,
    pub r: f64,
    pub sigma: f64,
    pub k: usize,
    pub signed: bool,
    pub seed: u64,
    pub trial_index: u64,
}

/// Draw instance `trial_index` of the family `spec`.
///
/// A has i.i.d. N(0,1) entries and v ~ N(0, σ²I). The support is the last
/// k coordinates (the problem is permutation invariant); its entries are
/// `spike` in the signed case and ±`spike` with alternating signs
/// otherwise.
pub fn gen_instance(spec: &InstanceSpec, seed: u64, trial_index: u64) -> Result<ProblemInstance> {
    spec.validate()?;
    let (n, m, k) = (spec.n, spec.m(), spec.k());
    let r = spec
        .r_mode
        .radius(n, m, spec.alpha, spec.beta_w, spec.sigma, spec.signed)?;
    let a_data = NormalStream::new(seed, trial_index, StreamTag::Matrix).normals(m * n, 1.0);
    let a = DenseMatrix::from_row_major(m, n, a_data)?;
    let v: Vec<f64> = NormalStream::new(seed, trial_index, StreamTag::Noise).normals(m, spec.sigma);
    let spike = spec.spike();
    let mut x_tilde = vec![0.0; n];
    for (j, x) in x_tilde[n - k..].iter_mut().enumerate() {
        *x = if spec.signed || j % 2 == 0 { spike } else { -spike };
    }
    let ax = a.matvec(&x_tilde);
    let y = ax.iter().zip(&v).map(|(p, q)| p + q).collect();
    Ok(ProblemInstance {
        a,
        x_tilde,
        v,
        y,
        r,
        sigma: spec.sigma,
        k,
        signed: spec.signed,
        seed,
        trial_index,
    })
}
