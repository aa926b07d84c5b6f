//! Ensemble moments, quadratic-variation Hurst estimates and empirical
//! convergence rates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::noise::NoiseMode;
use crate::params::SimulationConfig;
use crate::path::{evaluate_path, SamplePath};
use crate::simulator::Simulator;

/// Default lags of [`estimate_hurst_qv`].
pub const DEFAULT_QV_LAGS: [usize; 4] = [2, 4, 8, 16];

/// FBM covariance `½(t^{2H} + s^{2H} − |t − s|^{2H})`.
pub fn fbm_covariance(hurst: f64, t: f64, s: f64) -> f64 {
    let p = 2.0 * hurst;
    0.5 * (t.abs().powf(p) + s.abs().powf(p) - (t - s).abs().powf(p))
}

/// Seed of path `index` under master seed `master` (SplitMix64 of
/// `master + (index + 1)·0x9E3779B97F4A7C15`).
pub fn path_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Paths for the given seeds, generated in parallel.
pub fn generate_paths(sim: &Simulator, seeds: &[u64]) -> Result<Vec<SamplePath>> {
    seeds.par_iter().map(|&s| sim.path(s)).collect()
}

/// Sample moments of an ensemble on a time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub path_count: usize,
    pub grid: Vec<f64>,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    /// Unbiased sample covariance between grid points.
    pub covariance: Vec<Vec<f64>>,
    /// Standard error of each covariance entry.
    pub std_errors: Vec<Vec<f64>>,
    /// All sample variances vanish.
    pub degenerate: bool,
}

/// Sample covariance of `paths` on `grid`.
pub fn empirical_covariance(paths: &[SamplePath], grid: &[f64]) -> Result<EnsembleSummary> {
    if paths.len() < 2 {
        return param("at least two paths are required");
    }
    let digest = &paths[0].provenance.config_digest;
    if paths.iter().any(|p| &p.provenance.config_digest != digest) {
        return param("paths come from different configurations");
    }
    let values: Vec<Vec<f64>> = paths
        .iter()
        .map(|p| evaluate_path(p, grid))
        .collect::<Result<_>>()?;
    Ok(summarize(&values, grid))
}

/// Moments of rows `values[path][grid point]`.
pub fn summarize(values: &[Vec<f64>], grid: &[f64]) -> EnsembleSummary {
    let n = values.len();
    let g = grid.len();
    let nf = n as f64;
    let means: Vec<f64> = (0..g)
        .map(|i| {
            // Constant columns get their exact value so that their variance is exactly zero.
            let first = values[0][i];
            if values.iter().all(|v| v[i] == first) {
                first
            } else {
                values.iter().map(|v| v[i]).sum::<f64>() / nf
            }
        })
        .collect();
    let mut covariance = vec![vec![0.0; g]; g];
    let mut std_errors = vec![vec![0.0; g]; g];
    for i in 0..g {
        for j in i..g {
            let prods: Vec<f64> = values
                .iter()
                .map(|v| (v[i] - means[i]) * (v[j] - means[j]))
                .collect();
            let mean_p = prods.iter().sum::<f64>() / nf;
            let var_p = prods.iter().map(|p| (p - mean_p).powi(2)).sum::<f64>() / (nf - 1.0);
            let c = mean_p * nf / (nf - 1.0);
            let se = (var_p / nf).sqrt();
            covariance[i][j] = c;
            covariance[j][i] = c;
            std_errors[i][j] = se;
            std_errors[j][i] = se;
        }
    }
    let variances: Vec<f64> = (0..g).map(|i| covariance[i][i]).collect();
    EnsembleSummary {
        path_count: n,
        grid: grid.to_vec(),
        means,
        degenerate: variances.iter().all(|&v| v == 0.0),
        variances,
        covariance,
        std_errors,
    }
}

/// Ordinary least-squares slope and intercept.
fn ols(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if !(sxx > 0.0) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Estimation("degenerate regression".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Hurst index from equally spaced samples: regresses `ln mean (x_{i+q} − x_i)²`
/// on `ln q` and halves the slope.
pub fn estimate_hurst_qv_samples(samples: &[f64], lags: &[usize]) -> Result<f64> {
    let mut distinct = lags.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 || distinct[0] == 0 {
        return Err(Error::Estimation(
            "need at least two distinct positive lags".into(),
        ));
    }
    let max = *distinct.last().expect("non-empty");
    if samples.len() < max + 2 {
        return Err(Error::Estimation(format!(
            "{} samples are too few for lag {max}",
            samples.len()
        )));
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for &q in &distinct {
        let n = samples.len() - q;
        let v = (0..n)
            .map(|i| (samples[i + q] - samples[i]).powi(2))
            .sum::<f64>()
            / n as f64;
        if !(v > 0.0) {
            return Err(Error::Estimation(format!("zero variation at lag {q}")));
        }
        x.push((q as f64).ln());
        y.push(v.ln());
    }
    Ok(ols(&x, &y)?.0 / 2.0)
}

/// Hurst index of a path from the quadratic variation of its knot values.
pub fn estimate_hurst_qv(path: &SamplePath, lags: &[usize]) -> Result<f64> {
    estimate_hurst_qv_samples(&path.values, lags)
}

/// Successive sup-norm differences of coupled paths and the fitted decay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub scales: Vec<u32>,
    /// `sup |S̃_{J_{i+1}} − S̃_{J_i}|` on the common horizon.
    pub differences: Vec<f64>,
    /// Fitted `κ` in `diff ≈ C·J^{d/2}·2^{−κJ}`.
    pub exponent: f64,
}

/// Fits `log2(diff_i / J_i^{d/2}) = c − κ·J_i` and returns `κ`.
pub fn fit_decay_exponent(scales: &[u32], diffs: &[f64], order: usize) -> Result<f64> {
    if scales.len() != diffs.len() || diffs.len() < 2 {
        return Err(Error::Estimation("need at least two differences".into()));
    }
    if diffs.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(Error::Estimation(
            "non-positive path differences; rate undefined".into(),
        ));
    }
    let x: Vec<f64> = scales.iter().map(|&j| j as f64).collect();
    let y: Vec<f64> = scales
        .iter()
        .zip(diffs)
        .map(|(&j, d)| (d / (j as f64).powf(order as f64 / 2.0)).log2())
        .collect();
    Ok(-ols(&x, &y)?.0)
}

/// Largest `|a(t) − b(t)|` over `[0, horizon]`; both are piecewise linear, so
/// checking all breakpoints suffices.
pub fn sup_distance(a: &SamplePath, b: &SamplePath, horizon: f64) -> Result<f64> {
    let mut times: Vec<f64> = a
        .points()
        .0
        .into_iter()
        .chain(b.points().0)
        .filter(|&t| t <= horizon)
        .collect();
    times.push(horizon);
    times.sort_by(f64::total_cmp);
    times.dedup();
    let va = evaluate_path(a, &times)?;
    let vb = evaluate_path(b, &times)?;
    Ok(va
        .iter()
        .zip(&vb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// Decay of successive differences between paths at scales `scales`, all
/// driven by one seed through scale-coupled innovations.
pub fn convergence_slope(config: &SimulationConfig, scales: &[u32], seed: u64) -> Result<RateFit> {
    if scales.len() < 3 {
        return param("at least three scales are required");
    }
    let mut js = scales.to_vec();
    js.sort_unstable();
    js.dedup();
    if js.len() != scales.len() {
        return param("scales must be distinct");
    }
    let finest = *js.last().expect("non-empty");
    let paths: Vec<SamplePath> = js
        .par_iter()
        .map(|&j| {
            let cfg = config
                .clone()
                .scale(j)
                .noise(NoiseMode::ScaleCoupled { finest })
                .seed(seed);
            Simulator::new(cfg)?.path(seed)
        })
        .collect::<Result<_>>()?;
    let horizon = paths
        .iter()
        .map(SamplePath::last_knot)
        .fold(f64::INFINITY, f64::min);
    let differences = paths
        .windows(2)
        .map(|w| sup_distance(&w[0], &w[1], horizon))
        .collect::<Result<Vec<_>>>()?;
    let coarse = &js[..js.len() - 1];
    let exponent = fit_decay_exponent(coarse, &differences, config.process.order())?;
    Ok(RateFit {
        scales: js,
        differences,
        exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_input_has_unit_hurst() {
        let x: Vec<f64> = (0..200).map(|i| 0.3 * i as f64).collect();
        let h = estimate_hurst_qv_samples(&x, &[1, 2, 4, 8]).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        assert!(estimate_hurst_qv_samples(&x, &[4]).is_err());
        assert!(estimate_hurst_qv_samples(&vec![1.0; 100], &[1, 2]).is_err());
    }

    #[test]
    fn zero_differences_are_rejected() {
        assert!(fit_decay_exponent(&[8, 9, 10], &[0.0, 0.0, 0.0], 1).is_err());
        let k = fit_decay_exponent(&[8, 9, 10], &[1.0, 0.5, 0.25], 0).unwrap();
        assert!((k - 1.0).abs() < 1e-12);
    }

    #[test]
    fn seeds_are_distinct() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| path_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(path_seed(42, 0), path_seed(43, 0));
    }

    #[test]
    fn covariance_of_constant_rows_is_degenerate() {
        let rows = vec![vec![1.0, 2.0]; 5];
        let s = summarize(&rows, &[0.5, 1.0]);
        assert!(s.degenerate);
        assert_eq!(s.covariance[0][1], 0.0);
    }

    #[test]
    fn fbm_covariance_diagonal() {
        assert!((fbm_covariance(0.7, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((fbm_covariance(0.7, 0.5, 0.5) - 0.5f64.powf(1.4)).abs() < 1e-15);
    }
}
