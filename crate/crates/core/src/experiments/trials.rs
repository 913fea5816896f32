use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::instance::{gen_instance, InstanceSpec, RadiusMode};
use crate::error::{Error, Result};
use crate::genie::{genie_trial, MAX_FAILURE_FRACTION};
use crate::socp::{solve_socp, SocpProblem, SolverOptions};
use crate::stats::SampleStat;
use crate::theory::{predict_generic, RecoveryRegime, TheoryPoint};

/// Per-trial statistics reported by [`run_trials`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stat {
    NuGen,
    WNormGenie,
    XiOverSqrtN,
    WNormSocp,
    NegFobjOverSqrtN,
}

impl Stat {
    pub const ALL: [Stat; 5] = [
        Stat::NuGen,
        Stat::WNormGenie,
        Stat::XiOverSqrtN,
        Stat::WNormSocp,
        Stat::NegFobjOverSqrtN,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Stat::NuGen => "nu_gen",
            Stat::WNormGenie => "w_norm_genie",
            Stat::XiOverSqrtN => "xi_over_sqrt_n",
            Stat::WNormSocp => "w_norm_socp",
            Stat::NegFobjOverSqrtN => "neg_fobj_over_sqrt_n",
        }
    }

    pub fn is_genie(&self) -> bool {
        matches!(self, Stat::NuGen | Stat::WNormGenie | Stat::XiOverSqrtN)
    }

    /// The large-n value this statistic concentrates around.
    pub fn theory_value(&self, p: &TheoryPoint<f64>) -> f64 {
        match self {
            Stat::NuGen => p.nu_gen,
            Stat::WNormGenie | Stat::WNormSocp => p.w_norm,
            Stat::XiOverSqrtN => p.xi_prim_limit,
            Stat::NegFobjOverSqrtN => -p.xi_prim_limit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Engines {
    pub socp: bool,
    pub genie: bool,
}

impl Engines {
    pub const BOTH: Engines = Engines { socp: true, genie: true };
    pub const SOCP: Engines = Engines { socp: true, genie: false };
    pub const GENIE: Engines = Engines { socp: false, genie: true };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub spec: InstanceSpec,
    pub trials: usize,
    pub seed: u64,
    pub engines: Engines,
    pub solver: SolverOptions,
    /// include per-trial records in the report
    pub keep_trials: bool,
}

impl ExperimentConfig {
    pub fn new(spec: InstanceSpec, trials: usize, seed: u64, engines: Engines) -> Self {
        Self {
            spec,
            trials,
            seed,
            engines,
            solver: SolverOptions::default(),
            keep_trials: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub socp_iterations: Option<usize>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FailureSummary {
    /// trials with at least one failed engine
    pub count: usize,
    pub reasons: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub regime: RecoveryRegime<f64>,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub r: f64,
    pub r_mode: RadiusMode,
    pub spike: f64,
    pub trials: usize,
    pub seed: u64,
    pub engines: Engines,
    pub empirical: BTreeMap<String, SampleStat>,
    pub theory: Option<TheoryPoint<f64>>,
    pub failures: FailureSummary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_trial: Option<Vec<TrialRecord>>,
}

impl ExperimentReport {
    pub fn stat(&self, stat: Stat) -> Option<&SampleStat> {
        self.empirical.get(stat.name())
    }
}

fn reason_key(e: &Error) -> &'static str {
    match e {
        Error::DegenerateInstance(_) => "degenerate-instance",
        Error::AboveCharacterization(_) => "above-characterization",
        Error::Infeasible(_) => "infeasible",
        Error::Numerical(_) => "numerical",
        _ => "other",
    }
}

struct TrialOutcome {
    record: TrialRecord,
    genie_failed: bool,
    socp_failed: bool,
    reasons: Vec<&'static str>,
}

fn run_one(config: &ExperimentConfig, m: usize, r: f64, trial: u64) -> Result<TrialOutcome> {
    let spec = &config.spec;
    let sqrt_n = (spec.n as f64).sqrt();
    let mut values = BTreeMap::new();
    let mut reasons = Vec::new();
    let mut failures = Vec::new();
    let (mut genie_failed, mut socp_failed) = (false, false);
    let mut socp_iterations = None;

    if config.engines.genie {
        match genie_trial(spec.n, m, spec.k(), spec.sigma, r, spec.signed, config.seed, trial) {
            Ok(sol) => {
                values.insert(Stat::NuGen.name().to_string(), sol.nu_gen);
                values.insert(Stat::WNormGenie.name().to_string(), sol.w_norm);
                values.insert(Stat::XiOverSqrtN.name().to_string(), sol.xi_value / sqrt_n);
            }
            Err(e) => {
                genie_failed = true;
                reasons.push(reason_key(&e));
                failures.push(format!("genie: {e}"));
            }
        }
    }
    if config.engines.socp {
        let inst = gen_instance(spec, config.seed, trial)?;
        let problem = SocpProblem {
            a: &inst.a,
            y: &inst.y,
            r: inst.r,
            signed: inst.signed,
        };
        match solve_socp(&problem, &config.solver, Some(&inst.x_tilde)) {
            Ok(sol) if sol.converged => {
                socp_iterations = Some(sol.iterations);
                values.insert(Stat::WNormSocp.name().to_string(), sol.w_norm().unwrap_or(f64::NAN));
                values.insert(Stat::NegFobjOverSqrtN.name().to_string(), -sol.f_obj / sqrt_n);
            }
            Ok(sol) => {
                socp_iterations = Some(sol.iterations);
                socp_failed = true;
                reasons.push("solver-nonconvergence");
                failures.push(format!("socp: no convergence in {} iterations", sol.iterations));
            }
            Err(e @ Error::Domain(_)) => return Err(e),
            Err(e) => {
                socp_failed = true;
                reasons.push(reason_key(&e));
                failures.push(format!("socp: {e}"));
            }
        }
    }
    Ok(TrialOutcome {
        record: TrialRecord {
            trial,
            values,
            socp_iterations,
            failures,
        },
        genie_failed,
        socp_failed,
        reasons,
    })
}

/// Run `config.trials` independent trials and aggregate them.
///
/// Trials run in parallel but are reduced in trial order, so the report is
/// identical for any thread count. Failed trials are excluded from the
/// means; more than 10% failures for either engine is an error.
pub fn run_trials(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.trials == 0 {
        return Err(Error::EmptyReport);
    }
    if !config.engines.genie && !config.engines.socp {
        return Err(Error::Domain("no engine selected".into()));
    }
    let spec = &config.spec;
    spec.validate()?;
    let regime = spec.regime()?;
    let m = spec.m();
    let r = spec
        .r_mode
        .radius(spec.n, m, spec.alpha, spec.beta_w, spec.sigma, spec.signed)?;
    let theory = match predict_generic(&regime) {
        Ok(p) => Some(p),
        Err(e) => {
            log::warn!("no theory prediction for {regime:?}: {e}");
            None
        }
    };

    let outcomes: Vec<Result<TrialOutcome>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_one(config, m, r, t))
        .collect();

    let mut samples: BTreeMap<&'static str, Vec<f64>> = BTreeMap::new();
    let mut failures = FailureSummary::default();
    let (mut genie_failed, mut socp_failed) = (0usize, 0usize);
    let mut last_reason = String::new();
    let mut records = Vec::with_capacity(config.trials);
    for outcome in outcomes {
        let o = outcome?;
        for stat in Stat::ALL {
            if let Some(&v) = o.record.values.get(stat.name()) {
                samples.entry(stat.name()).or_default().push(v);
            }
        }
        if o.genie_failed || o.socp_failed {
            failures.count += 1;
            last_reason = o.record.failures.join("; ");
        }
        genie_failed += o.genie_failed as usize;
        socp_failed += o.socp_failed as usize;
        for reason in o.reasons {
            *failures.reasons.entry(reason.to_string()).or_default() += 1;
        }
        if config.keep_trials {
            records.push(o.record);
        }
    }
    let limit = MAX_FAILURE_FRACTION * config.trials as f64;
    for failed in [genie_failed, socp_failed] {
        if failed as f64 > limit {
            return Err(Error::Aggregate {
                failed,
                total: config.trials,
                reason: last_reason,
            });
        }
    }

    let empirical = samples
        .into_iter()
        .filter_map(|(name, v)| SampleStat::from_samples(&v).map(|s| (name.to_string(), s)))
        .collect();
    Ok(ExperimentReport {
        regime,
        n: spec.n,
        m,
        k: spec.k(),
        r,
        r_mode: spec.r_mode,
        spike: spec.spike(),
        trials: config.trials,
        seed: config.seed,
        engines: config.engines,
        empirical,
        theory,
        failures,
        per_trial: config.keep_trials.then_some(records),
    })
}
