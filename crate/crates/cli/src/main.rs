//! `socp-recovery`: predictions, contours, Monte Carlo runs and table
//! reproduction for noisy ℓ1/SOCP sparse recovery.
//!
//! Exit codes: 0 success, 2 domain/regime error, 3 a table cell failed its
//! tolerance, 64 usage error, 74 output I/O error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use socp_recovery::experiments::{
    experiment_csv, reproduce_table, run_trials, table_csv, to_json, Engines, ExperimentConfig, InstanceSpec,
    RadiusMode, TableRunOptions,
};
use socp_recovery::theory::{contour, predict_generic, ContourMode, RecoveryRegime};
use socp_recovery::Error;

const EXIT_DOMAIN: u8 = 2;
const EXIT_CELL_FAILURE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser, Debug)]
#[command(name = "socp-recovery", version, about = "Noisy sparse recovery via SOCP: theory and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for Monte Carlo runs (results do not depend on it)
    #[arg(long, global = true, env = "SOCP_RECOVERY_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Only log errors
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Socp,
    Genie,
    Both,
}

impl From<Engine> for Engines {
    fn from(e: Engine) -> Self {
        match e {
            Engine::Socp => Engines::SOCP,
            Engine::Genie => Engines::GENIE,
            Engine::Both => Engines::BOTH,
        }
    }
}

#[derive(Args, Debug)]
struct RegimeArgs {
    #[arg(long)]
    alpha: f64,
    /// β_w/α, as the tables list it
    #[arg(long, required_unless_present = "beta", conflicts_with = "beta")]
    beta_over_alpha: Option<f64>,
    /// β_w = k/n directly
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// sqrt-m, opt, or scaled:<c> with c in (0, 1]
    #[arg(long, default_value = "sqrt-m", value_parser = parse_r_mode)]
    r_mode: RadiusMode,
    /// Nonnegative signal (x >= 0 constraint)
    #[arg(long)]
    signed: bool,
}

impl RegimeArgs {
    fn beta_w(&self) -> f64 {
        self.beta.unwrap_or_else(|| self.alpha * self.beta_over_alpha.unwrap_or(f64::NAN))
    }

    fn regime(&self) -> Result<RecoveryRegime<f64>, Failure> {
        let beta_w = self.beta_w();
        // flag sanity first; anything after this is a regime question
        RecoveryRegime::new(self.alpha, beta_w, self.sigma, 1.0, self.signed).map_err(Failure::usage)?;
        let r_sc = self
            .r_mode
            .scaled_radius(self.alpha, beta_w, self.sigma, self.signed)
            .map_err(Failure::from)?;
        RecoveryRegime::new(self.alpha, beta_w, self.sigma, r_sc, self.signed).map_err(Failure::from)
    }

    fn instance_spec(&self, n: usize, spike: Option<f64>) -> Result<InstanceSpec, Failure> {
        self.regime()?;
        let spec = InstanceSpec {
            n,
            alpha: self.alpha,
            beta_w: self.beta_w(),
            sigma: self.sigma,
            r_mode: self.r_mode,
            signed: self.signed,
            spike,
        };
        spec.validate().map_err(Failure::usage)?;
        Ok(spec)
    }
}

#[derive(Args, Debug)]
struct ScaleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Large-n predictions for one regime
    Predict(RegimeArgs),
    /// ρ-contours in the (β_w, α) plane
    Contour {
        /// Comma-separated error-to-noise ratios
        #[arg(long, value_delimiter = ',', required = true)]
        rho: Vec<f64>,
        /// Grid β_w = i/N for i = 1..N-1
        #[arg(long)]
        beta_grid: usize,
        /// optimal-radius, sqrt-alpha-radius (comma-separated for both)
        #[arg(long, value_delimiter = ',', default_value = "optimal-radius", value_parser = parse_contour_mode)]
        mode: Vec<ContourMode>,
        #[arg(long)]
        signed: bool,
    },
    /// Genie Monte Carlo
    Genie {
        #[command(flatten)]
        regime: RegimeArgs,
        #[command(flatten)]
        scale: ScaleArgs,
        /// Include per-trial records
        #[arg(long)]
        per_trial: bool,
    },
    /// SOCP (and optionally genie) Monte Carlo
    Simulate {
        #[command(flatten)]
        regime: RegimeArgs,
        #[command(flatten)]
        scale: ScaleArgs,
        #[arg(long, value_enum, default_value_t = Engine::Socp)]
        engine: Engine,
        /// Magnitude of the nonzero entries (default 40/√n)
        #[arg(long)]
        spike: Option<f64>,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long)]
        per_trial: bool,
    },
    /// Re-run one of the eight reference tables
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        id: u8,
        #[arg(long)]
        seed: Option<u64>,
        /// Problem size for every engine
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        genie_n: Option<usize>,
        #[arg(long)]
        socp_n: Option<usize>,
        /// Trials per row for every engine
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum, default_value_t = Engine::Both)]
        engine: Engine,
        /// Evaluate theory only (no simulation, no seed needed)
        #[arg(long)]
        theory_only: bool,
    },
}

fn parse_r_mode(s: &str) -> Result<RadiusMode, String> {
    let mode: RadiusMode = s.parse().map_err(|e: Error| e.to_string())?;
    if let RadiusMode::Scaled(c) = mode {
        if c > 1.0 {
            return Err(format!("scaled radius factor must lie in (0, 1], got {c}"));
        }
    }
    Ok(mode)
}

fn parse_contour_mode(s: &str) -> Result<ContourMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: e.to_string(),
        }
    }
}

struct Output {
    body: String,
    code: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Self { body, code: 0 }
    }
}

fn predict(args: &RegimeArgs, format: Format) -> Result<Output, Failure> {
    let regime = args.regime()?;
    let point = predict_generic(&regime)?;
    let body = match format {
        Format::Json => to_json(&point)?,
        Format::Csv => {
            let mut s = String::from(
                "alpha,beta_w,sigma,r_sc,signed,theta_hat,nu_gen,w_norm,xi_prim_limit,alpha_w,r_opt_sc\n",
            );
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                regime.alpha,
                regime.beta_w,
                regime.sigma,
                regime.r_sc,
                regime.signed,
                point.theta_hat,
                point.nu_gen,
                point.w_norm,
                point.xi_prim_limit,
                point.alpha_w,
                point.r_opt_sc
            );
            s
        }
    };
    Ok(Output::ok(body))
}

fn contours(rho: &[f64], beta_grid: usize, modes: &[ContourMode], signed: bool, format: Format) -> Result<Output, Failure> {
    if beta_grid < 2 {
        return Err(Failure::usage("--beta-grid must be at least 2 (grid is i/N, i = 1..N-1)"));
    }
    if rho.is_empty() || rho.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Failure::usage("--rho needs positive finite values"));
    }
    let grid: Vec<f64> = (1..beta_grid).map(|i| i as f64 / beta_grid as f64).collect();
    let mut curves = Vec::new();
    for &mode in modes {
        for &r in rho {
            let c = contour(r, &grid, mode, signed)?;
            log::info!("rho = {r}, {mode}: {} points, {} skipped", c.points.len(), c.skipped.len());
            curves.push(c);
        }
    }
    let body = match format {
        Format::Json => to_json(&curves)?,
        Format::Csv => {
            let mut s = String::from("rho,beta_w,alpha,mode\n");
            for c in &curves {
                for p in &c.points {
                    let _ = writeln!(s, "{},{},{},{}", c.rho, p.beta_w, p.alpha, c.mode);
                }
            }
            s
        }
    };
    Ok(Output::ok(body))
}

fn experiment(config: ExperimentConfig, format: Format) -> Result<Output, Failure> {
    let report = run_trials(&config)?;
    if report.failures.count > 0 {
        log::warn!("{} trial(s) failed: {:?}", report.failures.count, report.failures.reasons);
    }
    let body = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => experiment_csv(&report)?,
    };
    Ok(Output::ok(body))
}

#[allow(clippy::too_many_arguments)]
fn table(
    id: u8,
    seed: Option<u64>,
    n: Option<usize>,
    genie_n: Option<usize>,
    socp_n: Option<usize>,
    trials: Option<usize>,
    engine: Engine,
    theory_only: bool,
    format: Format,
) -> Result<Output, Failure> {
    let options = if theory_only {
        TableRunOptions::theory_only()
    } else {
        let seed = seed.ok_or_else(|| Failure::usage("--seed is required unless --theory-only is given"))?;
        let mut o = TableRunOptions::new(seed, engine.into());
        o.genie_n = genie_n.or(n);
        o.socp_n = socp_n.or(n);
        o.genie_trials = trials;
        o.socp_trials = trials;
        o
    };
    let report = reproduce_table(id, &options)?;
    for row in &report.rows {
        for e in &row.errors {
            log::error!("alpha = {}, beta/alpha = {}, {}: {e}", row.alpha, row.beta_over_alpha, row.r_mode);
        }
    }
    let failed = report.failed_cells();
    log::info!(
        "table {id}: {} cells, {failed} failed, {} row error(s)",
        report.cells().count(),
        report.rows.iter().map(|r| r.errors.len()).sum::<usize>()
    );
    let body = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => table_csv(&report)?,
    };
    let code = if report.all_pass() { 0 } else { EXIT_CELL_FAILURE };
    Ok(Output { body, code })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    }
    let format = cli.format;
    match cli.command {
        Command::Predict(args) => predict(&args, format),
        Command::Contour {
            rho,
            beta_grid,
            mode,
            signed,
        } => contours(&rho, beta_grid, &mode, signed, format),
        Command::Genie {
            regime,
            scale,
            per_trial,
        } => {
            let spec = regime.instance_spec(scale.n, None)?;
            let mut config = ExperimentConfig::new(spec, scale.trials, scale.seed, Engines::GENIE);
            config.keep_trials = per_trial;
            experiment(config, format)
        }
        Command::Simulate {
            regime,
            scale,
            engine,
            spike,
            max_iterations,
            per_trial,
        } => {
            let spec = regime.instance_spec(scale.n, spike)?;
            let mut config = ExperimentConfig::new(spec, scale.trials, scale.seed, engine.into());
            config.keep_trials = per_trial;
            if let Some(m) = max_iterations {
                config.solver.max_iterations = m;
            }
            experiment(config, format)
        }
        Command::Table {
            id,
            seed,
            n,
            genie_n,
            socp_n,
            trials,
            engine,
            theory_only,
        } => table(id, seed, n, genie_n, socp_n, trials, engine, theory_only, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();

    let out_path = cli.out.clone();
    match run(cli) {
        Ok(output) => {
            let mut body = output.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let written = match &out_path {
                Some(path) => std::fs::write(path, body.as_bytes()),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(body.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_IO);
            }
            ExitCode::from(output.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
