//! `verify`: property checks and Monte Carlo checks with pass/fail reports.

use hermsynth_core::chaos::PartitionSet;
use hermsynth_core::noise::keyed_normals;
use hermsynth_core::stats::{generate_paths, DEFAULT_QV_LAGS};
use hermsynth_core::{
    convergence_slope, empirical_covariance, estimate_hurst_qv, farima_covariance,
    farima_covariance_closed, fbm_covariance, gamma_weights, integral_vector_d2, kernel_variance,
    path_seed, phi_hat, sigma_d2, sigma_d3, sigma_general, CovarianceTable, QuadratureSpec,
    SimulationConfig, Simulator,
};
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::args::{ModelArgs, ReportFormat, Suite, VerifyArgs};
use crate::generate::cache_for;
use crate::CliError;

const MIN_PATHS: usize = 50;
const MIN_SEEDS: usize = 5;
const Z_TOLERANCE: f64 = 4.0;
const HURST_TOLERANCE: f64 = 0.05;
const RATE_SLACK: f64 = 0.15;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: String,
    pub passed: bool,
}

impl Check {
    fn new(
        name: impl Into<String>,
        measured: f64,
        tolerance: impl Into<String>,
        passed: bool,
    ) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance: tolerance.into(),
            passed,
        }
    }

    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, format!("<= {bound:e}"), measured <= bound)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self {
            suite: format!("{suite:?}").to_lowercase(),
            checks,
            passed,
        }
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            ReportFormat::Text => {
                let mut out = String::new();
                for c in &self.checks {
                    out.push_str(&format!(
                        "{} {}: measured {:.6e} (tolerance {})\n",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.measured,
                        c.tolerance
                    ));
                }
                let failed = self.checks.iter().filter(|c| !c.passed).count();
                out.push_str(&format!(
                    "{}: {} of {} checks passed\n",
                    self.suite,
                    self.checks.len() - failed,
                    self.checks.len()
                ));
                out
            }
        }
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Report, CliError> {
    let checks = match args.suite {
        Suite::Properties => properties()?,
        Suite::Covariance => covariance(args)?,
        Suite::Variance => variance(args)?,
        Suite::Hurst => hurst(args)?,
        Suite::Rate => rate(args)?,
    };
    Ok(Report::new(args.suite, checks))
}

fn simulator(model: &ModelArgs, cfg: SimulationConfig) -> Result<Simulator, CliError> {
    let cache = cache_for(model);
    Ok(Simulator::with_cache(cfg, cache.as_ref())?)
}

fn require_equal(cfg: &SimulationConfig, suite: &str) -> Result<(), CliError> {
    if cfg.hurst.is_equal() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "the {suite} suite needs equal h coordinates"
        )))
    }
}

fn require_paths(n: usize) -> Result<(), CliError> {
    if n < MIN_PATHS {
        return Err(CliError::Usage(format!(
            "--paths {n} is below the minimum of {MIN_PATHS}"
        )));
    }
    Ok(())
}

fn model_label(cfg: &SimulationConfig) -> String {
    if cfg.hurst.is_equal() {
        return format!("{} H={:.3}", cfg.process, cfg.hurst.hurst());
    }
    let h: Vec<String> = cfg
        .hurst
        .components()
        .iter()
        .map(|h| format!("{h}"))
        .collect();
    format!("{} h=({})", cfg.process, h.join(","))
}

fn label(cfg: &SimulationConfig) -> String {
    format!("{} J={}", model_label(cfg), cfg.scale)
}

/// Oracle and invariant checks that need no simulation.
pub fn properties() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for delta in [-0.4, -0.1, 0.2, 0.45] {
        let w = gamma_weights(delta, 50)?;
        for (p, &g) in w.values.iter().enumerate() {
            let exact = gamma(p as f64 + delta) / (gamma(delta) * gamma(p as f64 + 1.0));
            worst = worst.max(((g - exact) / exact).abs());
        }
    }
    checks.push(Check::at_most(
        "fractional weights vs Gamma ratio (relative)",
        worst,
        1e-12,
    ));

    let mut worst = 0.0f64;
    for (d1, d2) in [(0.1, 0.1), (0.3, 0.2), (-0.2, 0.35), (0.45, 0.45)] {
        for lag in [-7i64, -1, 0, 1, 3, 16] {
            let a = farima_covariance(d1, d2, lag)?;
            let b = farima_covariance_closed(d1, d2, lag)?;
            worst = worst.max((a - b).abs());
        }
    }
    checks.push(Check::at_most(
        "FARIMA covariance spectral vs closed form",
        worst,
        1e-9,
    ));

    let mut worst = 0.0f64;
    let mut z = vec![0.0; 3000];
    keyed_normals(7, 0, 0, &mut z);
    let deltas = [0.25, 0.3, 0.4];
    let cov2 = CovarianceTable::from_deltas(deltas[..2].to_vec(), 3)?;
    let cov3 = CovarianceTable::from_deltas(deltas.to_vec(), 3)?;
    let p2 = PartitionSet::shared(2)?;
    let p3 = PartitionSet::shared(3)?;
    for (i, v) in z.chunks(3).enumerate() {
        let k = [(i % 4) as i64, (i % 3) as i64, (i % 2) as i64];
        let g2 = sigma_general(&p2, &v[..2], &k[..2], &cov2)?;
        let s2 = sigma_d2(v[0], v[1], cov2.get(0, 1, k[1] - k[0])?);
        let g3 = sigma_general(&p3, v, &k, &cov3)?;
        let s3 = sigma_d3(
            v[0],
            v[1],
            v[2],
            cov3.get(0, 1, k[1] - k[0])?,
            cov3.get(0, 2, k[2] - k[0])?,
            cov3.get(1, 2, k[2] - k[1])?,
        );
        worst = worst.max((g2 - s2).abs()).max((g3 - s3).abs());
    }
    checks.push(Check::at_most(
        "Wick products general vs explicit",
        worst,
        1e-12,
    ));

    let mut mismatches = 0.0;
    for d in 1..=6 {
        let set = PartitionSet::new(d)?;
        for m in 0..=d / 2 {
            if set.with_pairs(m).len() as u64 != PartitionSet::expected_count(d, m) {
                mismatches += 1.0;
            }
        }
    }
    checks.push(Check::new(
        "partition counts for d <= 6 (mismatches)",
        mismatches,
        "0",
        mismatches == 0.0,
    ));

    let mut worst = 0.0f64;
    for i in 0..=1000 {
        let xi = i as f64 * std::f64::consts::TAU / 1000.0;
        let s = phi_hat(xi)?.powi(2) + phi_hat(xi - std::f64::consts::TAU)?.powi(2);
        worst = worst.max((s - 1.0).abs());
    }
    checks.push(Check::at_most(
        "scaling function partition of unity",
        worst,
        1e-12,
    ));

    let mut worst = 0.0f64;
    for h in [0.55, 0.7, 0.9] {
        let exact = 1.0 / (gamma(2.0 * h + 1.0) * (std::f64::consts::PI * h).sin());
        worst = worst.max((kernel_variance(1, h) / exact - 1.0).abs());
    }
    checks.push(Check::at_most(
        "order-1 kernel variance vs closed form (relative)",
        worst,
        1e-12,
    ));

    let mut worst = 0.0f64;
    for h in [0.6, 0.9] {
        let t = integral_vector_d2(h, 8, QuadratureSpec::default())?;
        worst = worst.max(t.max_abs_diff(&t.refined()?)?);
    }
    checks.push(Check::at_most(
        "order-2 integral table under node doubling",
        worst,
        1e-9,
    ));
    Ok(checks)
}

fn covariance(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    require_paths(args.paths)?;
    if args.grid_points < 2 {
        return Err(CliError::Usage("--grid-points must be at least 2".into()));
    }
    let cfg = args.model.config(Some(|_| 12))?.normalized(true);
    require_equal(&cfg, "covariance")?;
    let sim = simulator(&args.model, cfg.clone())?;
    let seeds: Vec<u64> = (0..args.paths as u64)
        .map(|i| path_seed(cfg.seed, i))
        .collect();
    let paths = generate_paths(&sim, &seeds)?;
    let last = paths[0].last_knot();
    let n = args.grid_points;
    let grid: Vec<f64> = (1..=n).map(|i| last * i as f64 / n as f64).collect();
    let summary = empirical_covariance(&paths, &grid)?;
    let h = cfg.hurst.hurst();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = fbm_covariance(h, grid[i], grid[j]);
            let se = summary.std_errors[i][j];
            let z = (summary.covariance[i][j] - target).abs() / se;
            worst = worst.max(if se > 0.0 { z } else { f64::INFINITY });
        }
    }
    Ok(vec![Check::new(
        format!(
            "{} covariance on {n} points, {} paths (max |z|)",
            label(&cfg),
            args.paths
        ),
        worst,
        format!("<= {Z_TOLERANCE} standard errors"),
        worst <= Z_TOLERANCE,
    )])
}

fn variance(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    require_paths(args.paths)?;
    let cfg = args.model.config(Some(|_| 12))?.normalized(true);
    require_equal(&cfg, "variance")?;
    let sim = simulator(&args.model, cfg.clone())?;
    let seeds: Vec<u64> = (0..args.paths as u64)
        .map(|i| path_seed(cfg.seed, i))
        .collect();
    let paths = generate_paths(&sim, &seeds)?;
    let t = paths[0].last_knot().min(1.0);
    let summary = empirical_covariance(&paths, &[t])?;
    let target = t.powf(2.0 * cfg.hurst.hurst());
    let z = (summary.variances[0] - target).abs() / summary.std_errors[0][0];
    Ok(vec![Check::new(
        format!(
            "{} variance {:.4} at t={t} vs {target:.4}, {} paths (|z|)",
            label(&cfg),
            summary.variances[0],
            args.paths
        ),
        z,
        format!("<= {Z_TOLERANCE} standard errors"),
        z <= Z_TOLERANCE,
    )])
}

fn hurst(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    if args.seeds < MIN_SEEDS {
        return Err(CliError::Usage(format!(
            "--seeds {} is below the minimum of {MIN_SEEDS}",
            args.seeds
        )));
    }
    let cfg = args
        .model
        .config(Some(|k| if k.order() == 3 { 12 } else { 14 }))?;
    let sim = simulator(&args.model, cfg.clone())?;
    let seeds: Vec<u64> = (0..args.seeds as u64)
        .map(|i| path_seed(cfg.seed, i))
        .collect();
    let paths = generate_paths(&sim, &seeds)?;
    let estimates = paths
        .iter()
        .map(|p| estimate_hurst_qv(p, &DEFAULT_QV_LAGS))
        .collect::<Result<Vec<_>, _>>()?;
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    let target = cfg.hurst.hurst();
    Ok(vec![Check::new(
        format!(
            "{} mean QV Hurst estimate over {} seeds, target {target}",
            label(&cfg),
            args.seeds
        ),
        mean,
        format!("within {HURST_TOLERANCE} of {target}"),
        (mean - target).abs() <= HURST_TOLERANCE,
    )])
}

fn rate(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let mut scales = args.scales.clone();
    scales.sort_unstable();
    scales.dedup();
    if scales.len() < 3 {
        return Err(CliError::Usage(
            "the rate suite needs at least three distinct scales".into(),
        ));
    }
    let max = *scales.last().expect("non-empty");
    let cfg = args.model.config(Some(|_| 8))?.scale(max);
    let fit = convergence_slope(&cfg, &scales, cfg.seed)?;
    let target = cfg.hurst.components().iter().sum::<f64>() - cfg.hurst.order() as f64 + 0.5;
    let bound = target - RATE_SLACK;
    Ok(vec![Check::new(
        format!(
            "{} decay exponent over J={}..{}, target {target:.3}",
            model_label(&cfg),
            scales[0],
            max
        ),
        fit.exponent,
        format!(">= {bound:.3}"),
        fit.exponent >= bound,
    )])
}
