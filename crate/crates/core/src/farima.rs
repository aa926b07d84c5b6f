//! Fractional differencing weights, FARIMA(0, δ, 0) sequences and their
//! cross-covariances.
//!
//! `Z^{(δ)}_ℓ = Σ_{p ≥ 0} γ_p^{(δ)} g_{ℓ−p}` with `γ_0 = 1`,
//! `γ_p = γ_{p−1}(p − 1 + δ)/p`. Since `γ_p ~ p^{δ−1}/Γ(δ)`, dropping the
//! noise before index `−L` leaves a tail of variance
//! `Σ_{p > L} γ_p² ≈ L^{2δ−1}/((1 − 2δ)Γ(δ)²)`, which decays slowly for
//! `δ` near 1/2. The generator therefore convolves all noise from `−L` onward
//! by FFT and adds the omitted part as an exact Gaussian term: its covariance
//! is known in closed form, it is sampled at Chebyshev nodes (jointly for all
//! orders sharing the same innovations) and interpolated in between.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{param, Error, Result};
use crate::noise::{NoiseMode, NoiseSource};
use crate::quadrature::rules::gauss_legendre;

/// Fractional differencing weights `γ_0, …, γ_P`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FracWeights {
    pub delta: f64,
    pub values: Vec<f64>,
}

impl FracWeights {
    /// Truncation length `P`.
    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.abs() < 0.5) {
        return param(format!("differencing order {delta} outside (-1/2, 1/2)"));
    }
    Ok(())
}

/// `γ_p^{(δ)}` for `p = 0..=truncation` by the multiplicative recursion.
pub fn gamma_weights(delta: f64, truncation: usize) -> Result<FracWeights> {
    check_delta(delta)?;
    Ok(FracWeights {
        delta,
        values: weights(delta, truncation + 1),
    })
}

fn weights(delta: f64, len: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(len);
    let mut g = 1.0;
    for p in 0..len {
        if p > 0 {
            g *= (p as f64 - 1.0 + delta) / p as f64;
        }
        v.push(g);
    }
    v
}

/// `ln Γ(x + a) − ln Γ(x + b)` for `x ≥ 32` and moderate `a, b`, without the
/// cancellation of subtracting two large log-gammas.
fn ln_gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    let series = |z: f64| {
        let z2 = z * z;
        (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z
    };
    let la = (a / x).ln_1p();
    let lb = (b / x).ln_1p();
    (a - b) * x.ln() + (x + a - 0.5) * la - (x + b - 0.5) * lb - (a - b) + series(x + a)
        - series(x + b)
}

const PRODUCT_LAGS: u64 = 64;

/// Exact `E[Z^{(δa)}_k Z^{(δb)}_{k+lag}] = Σ_p γ^a_p γ^b_{p+lag}` in closed form:
/// `Γ(1−δa−δb)/(Γ(1−δa)Γ(1−δb)) · (δb)_lag/(1−δa)_lag` for `lag ≥ 0`.
pub fn farima_covariance_closed(delta_a: f64, delta_b: f64, lag: i64) -> Result<f64> {
    check_delta(delta_a)?;
    check_delta(delta_b)?;
    if lag < 0 {
        return farima_covariance_closed(delta_b, delta_a, -lag);
    }
    let k = (ln_gamma(1.0 - delta_a - delta_b) - ln_gamma(1.0 - delta_a) - ln_gamma(1.0 - delta_b))
        .exp();
    let n = lag as u64;
    let mut prod = 1.0;
    for j in 0..n.min(PRODUCT_LAGS) {
        let j = j as f64;
        prod *= (delta_b + j) / (1.0 - delta_a + j);
    }
    if n > PRODUCT_LAGS && prod != 0.0 {
        let x0 = PRODUCT_LAGS as f64;
        let tail = ln_gamma_ratio(n as f64, delta_b, 1.0 - delta_a)
            - ln_gamma_ratio(x0, delta_b, 1.0 - delta_a);
        prod *= tail.exp();
    }
    Ok(k * prod)
}

/// Cross-covariance `E[Z^{(δ1)}_k Z^{(δ2)}_{k+lag}]` from the spectral integral
/// `(1/2π) ∫_0^{2π} e^{−i·lag·ξ} (1 − e^{−iξ})^{−δ1} (1 − e^{iξ})^{−δ2} dξ`.
///
/// The integrand equals `(2 sin(ξ/2))^{−(δ1+δ2)} e^{−i(lag·ξ + (δ1−δ2)(π−ξ)/2)}`
/// and is conjugate-symmetric about `π`, so the value is
/// `(1/π) ∫_0^π (2 sin(ξ/2))^{−s} cos(lag·ξ + (δ1−δ2)(π−ξ)/2) dξ`. The
/// endpoint singularity is resolved by dyadic panels down to `π·2^{−60}` and
/// the analytic leading term below.
pub fn farima_covariance(delta1: f64, delta2: f64, lag: i64) -> Result<f64> {
    check_delta(delta1)?;
    check_delta(delta2)?;
    let s = delta1 + delta2;
    if s >= 1.0 {
        return param(format!(
            "delta1 + delta2 = {s} makes the spectral integral diverge"
        ));
    }
    if delta1 == 0.0 && delta2 == 0.0 {
        return Ok(if lag == 0 { 1.0 } else { 0.0 });
    }
    let lagf = lag as f64;
    let phase = 0.5 * (delta1 - delta2);
    let f = |x: f64| (2.0 * (0.5 * x).sin()).powf(-s) * (lagf * x + phase * (PI - x)).cos();
    let (gx, gw) = gauss_legendre(24);
    let levels = 60;
    let mut total = 0.0;
    for k in 0..levels {
        let hi = PI / 2f64.powi(k);
        let lo = 0.5 * hi;
        let pieces = 1 + (lagf.abs() * (hi - lo) / 8.0).ceil() as usize;
        let h = (hi - lo) / pieces as f64;
        for p in 0..pieces {
            let mid = lo + (p as f64 + 0.5) * h;
            let mut acc = 0.0;
            for (x, w) in gx.iter().zip(&gw) {
                acc += w * f(mid + 0.5 * h * x);
            }
            total += 0.5 * h * acc;
        }
    }
    let eps = PI / 2f64.powi(levels);
    total += (phase * PI).cos() * eps.powf(1.0 - s) / (1.0 - s);
    Ok(total / PI)
}

/// Layout of a FARIMA plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FarimaParams {
    pub scale: u32,
    /// Differencing orders driven by the same innovations.
    pub deltas: Vec<f64>,
    /// Indices `0..span` are produced.
    pub span: usize,
    /// Innovations before index 0 entering the explicit convolution
    /// (defaults to `span`).
    pub burn_in: Option<usize>,
    /// Add the exact contribution of innovations before `−burn_in`.
    pub history: bool,
    pub noise: NoiseMode,
}

impl FarimaParams {
    pub fn new(scale: u32, deltas: Vec<f64>, span: usize) -> Self {
        Self {
            scale,
            deltas,
            span,
            burn_in: None,
            history: true,
            noise: NoiseMode::Independent,
        }
    }
}

/// A FARIMA window `Z_{J,ℓ}` for `ℓ = start_index..=end_index`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FarimaSequence {
    pub scale: u32,
    pub delta: f64,
    pub noise_seed: u64,
    pub start_index: i64,
    pub end_index: i64,
    pub values: Vec<f64>,
    /// Innovations before index 0 used by the explicit convolution.
    pub burn_in: usize,
}

struct History {
    nodes: Vec<usize>,
    bary: Vec<f64>,
    /// Symmetric square root of the joint node covariance, rows ordered
    /// `(order, node)`.
    root: DMatrix<f64>,
}

/// Deterministic part of FARIMA generation for a fixed layout; sampling a
/// seed is cheap once the plan exists.
pub struct FarimaPlan {
    params: FarimaParams,
    burn_in: usize,
    unique: Vec<f64>,
    slot: Vec<usize>,
    fft_len: usize,
    spectra: Vec<Vec<Complex64>>,
    history: Option<History>,
    planner: Arc<dyn rustfft::Fft<f64>>,
    inverse: Arc<dyn rustfft::Fft<f64>>,
}

impl std::fmt::Debug for FarimaPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FarimaPlan")
            .field("params", &self.params)
            .field("burn_in", &self.burn_in)
            .field("fft_len", &self.fft_len)
            .finish()
    }
}

impl FarimaPlan {
    pub fn new(params: FarimaParams) -> Result<Self> {
        if params.span == 0 {
            return param("FARIMA span must be positive");
        }
        if params.deltas.is_empty() {
            return param("at least one differencing order is required");
        }
        for &d in &params.deltas {
            check_delta(d)?;
        }
        let burn_in = params.burn_in.unwrap_or(params.span);
        if params.history && burn_in < params.span.div_ceil(4) {
            return param(format!(
                "burn-in {burn_in} below span/4 = {} leaves the history term under-resolved",
                params.span.div_ceil(4)
            ));
        }
        let total = burn_in
            .checked_add(params.span)
            .filter(|t| *t < (1usize << 40))
            .ok_or_else(|| Error::Parameter("FARIMA span too large".into()))?;

        let mut unique: Vec<f64> = Vec::new();
        let slot = params
            .deltas
            .iter()
            .map(|&d| match unique.iter().position(|&u| u == d) {
                Some(i) => i,
                None => {
                    unique.push(d);
                    unique.len() - 1
                }
            })
            .collect();

        let fft_len = (2 * total).next_power_of_two();
        let mut fft_planner = FftPlanner::new();
        let forward = fft_planner.plan_fft_forward(fft_len);
        let inverse = fft_planner.plan_fft_inverse(fft_len);
        let gammas: Vec<Vec<f64>> = unique.iter().map(|&d| weights(d, total)).collect();
        let spectra = gammas
            .iter()
            .map(|g| {
                let mut buf: Vec<Complex64> = g.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                buf.resize(fft_len, Complex64::new(0.0, 0.0));
                forward.process(&mut buf);
                buf
            })
            .collect();
        let history = if params.history && unique.iter().any(|&d| d != 0.0) {
            Some(build_history(&unique, &gammas, burn_in, params.span)?)
        } else {
            None
        };
        Ok(Self {
            params,
            burn_in,
            unique,
            slot,
            fft_len,
            spectra,
            history,
            planner: forward,
            inverse,
        })
    }

    pub fn params(&self) -> &FarimaParams {
        &self.params
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    /// Sequences `Z^{(δ_i)}_ℓ`, `ℓ ∈ 0..span`, one per entry of `params.deltas`.
    pub fn generate(&self, seed: u64) -> Result<Vec<Vec<f64>>> {
        let source = NoiseSource::new(seed, self.params.noise);
        let span = self.params.span;
        let total = self.burn_in + span;
        let g = source.innovations(self.params.scale, -(self.burn_in as i64), total)?;
        let mut per_unique: Vec<Vec<f64>> = Vec::with_capacity(self.unique.len());
        let mut noise_hat: Option<Vec<Complex64>> = None;
        for (u, &delta) in self.unique.iter().enumerate() {
            if delta == 0.0 {
                per_unique.push(g[self.burn_in..].to_vec());
                continue;
            }
            let nh = noise_hat.get_or_insert_with(|| {
                let mut buf: Vec<Complex64> = g.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                buf.resize(self.fft_len, Complex64::new(0.0, 0.0));
                self.planner.process(&mut buf);
                buf
            });
            let mut buf: Vec<Complex64> = nh
                .iter()
                .zip(&self.spectra[u])
                .map(|(a, b)| a * b)
                .collect();
            self.inverse.process(&mut buf);
            let norm = 1.0 / self.fft_len as f64;
            per_unique.push(
                buf[self.burn_in..total]
                    .iter()
                    .map(|z| z.re * norm)
                    .collect(),
            );
        }
        if let Some(h) = &self.history {
            let n = h.nodes.len();
            let normals = DVector::from_vec(source.history_normals(h.root.ncols()));
            let node_values = &h.root * normals;
            for (u, seq) in per_unique.iter_mut().enumerate() {
                if self.unique[u] == 0.0 {
                    continue;
                }
                let vals: Vec<f64> = (0..n).map(|i| node_values[u * n + i]).collect();
                add_interpolated(seq, &h.nodes, &h.bary, &vals);
            }
        }
        Ok(self.slot.iter().map(|&s| per_unique[s].clone()).collect())
    }

    /// Window `start..=end` of the sequence for `params.deltas[which]`.
    pub fn window(&self, seed: u64, which: usize, start: i64, end: i64) -> Result<FarimaSequence> {
        let delta = *self
            .params
            .deltas
            .get(which)
            .ok_or_else(|| Error::Parameter(format!("no differencing order #{which}")))?;
        if start < 0 || end < start || end >= self.params.span as i64 {
            return param(format!(
                "window [{start}, {end}] outside generated range [0, {}]",
                self.params.span - 1
            ));
        }
        let all = self.generate(seed)?;
        Ok(FarimaSequence {
            scale: self.params.scale,
            delta,
            noise_seed: seed,
            start_index: start,
            end_index: end,
            values: all[which][start as usize..=end as usize].to_vec(),
            burn_in: self.burn_in,
        })
    }
}

/// FARIMA window for a single differencing order.
pub fn generate_farima(
    params: &FarimaParams,
    seed: u64,
    window: (i64, i64),
) -> Result<FarimaSequence> {
    if params.deltas.len() != 1 {
        return param("generate_farima expects exactly one differencing order");
    }
    FarimaPlan::new(params.clone())?.window(seed, 0, window.0, window.1)
}

fn interpolation_nodes(burn_in: usize, span: usize) -> Vec<usize> {
    // Omitted part at ℓ is Σ_{q≥1} γ_{ℓ+L+q} g_{−L−q}: analytic in ℓ with the
    // nearest singularity at ℓ = −L − 1.
    let a = burn_in as f64;
    let b = (burn_in + span - 1) as f64;
    let x0 = if b > a {
        (a + b + 2.0) / (b - a)
    } else {
        f64::INFINITY
    };
    let rho = x0 + (x0 * x0 - 1.0).max(0.0).sqrt();
    let wanted = ((38.0 / rho.ln()).ceil() as usize).clamp(8, 64);
    if span <= wanted {
        return (0..span).collect();
    }
    let last = (span - 1) as f64;
    let mut nodes: Vec<usize> = (0..wanted)
        .map(|i| {
            let t = (PI * (i as f64 + 0.5) / wanted as f64).cos();
            (0.5 * last * (1.0 - t)).round() as usize
        })
        .collect();
    nodes.push(0);
    nodes.push(span - 1);
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

fn build_history(
    unique: &[f64],
    gammas: &[Vec<f64>],
    burn_in: usize,
    span: usize,
) -> Result<History> {
    let nodes = interpolation_nodes(burn_in, span);
    let n = nodes.len();
    let m = unique.len() * n;
    let mut closed: HashMap<(usize, usize, i64), f64> = HashMap::new();
    let mut cov = DMatrix::<f64>::zeros(m, m);
    for a in 0..unique.len() {
        for i in 0..n {
            let ui = nodes[i] + burn_in;
            for b in 0..unique.len() {
                for j in 0..n {
                    let (r, c) = (a * n + i, b * n + j);
                    if c < r {
                        continue;
                    }
                    let uj = nodes[j] + burn_in;
                    let lag = uj as i64 - ui as i64;
                    let full = match closed.get(&(a, b, lag)) {
                        Some(v) => *v,
                        None => {
                            let v = farima_covariance_closed(unique[a], unique[b], lag)?;
                            closed.insert((a, b, lag), v);
                            v
                        }
                    };
                    // Σ_{v=0}^{ui} γ^a_v γ^b_{v+lag}, terms with negative index vanish.
                    let lo = if lag < 0 { (-lag) as usize } else { 0 };
                    let ga = &gammas[a];
                    let gb = &gammas[b];
                    let mut partial = 0.0;
                    for v in lo..=ui {
                        partial += ga[v] * gb[(v as i64 + lag) as usize];
                    }
                    let value = full - partial;
                    cov[(r, c)] = value;
                    cov[(c, r)] = value;
                }
            }
        }
    }
    let eig = cov.symmetric_eigen();
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if eig
        .eigenvalues
        .iter()
        .any(|&v| v < -1e-8 * scale.max(1e-300))
    {
        return Err(Error::Numerical(
            "history covariance is not positive semidefinite".into(),
        ));
    }
    let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    let root =
        &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let bary = (0..n)
        .map(|j| {
            let xj = nodes[j] as f64;
            // Rescaled to avoid overflow of the node products.
            let s = (span.max(2) - 1) as f64 / 4.0;
            1.0 / (0..n)
                .filter(|&k| k != j)
                .map(|k| (xj - nodes[k] as f64) / s)
                .product::<f64>()
        })
        .collect();
    Ok(History { nodes, bary, root })
}

fn add_interpolated(seq: &mut [f64], nodes: &[usize], bary: &[f64], vals: &[f64]) {
    let mut next = 0;
    for (l, z) in seq.iter_mut().enumerate() {
        if next < nodes.len() && nodes[next] == l {
            *z += vals[next];
            next += 1;
            continue;
        }
        let x = l as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for ((&node, &w), &v) in nodes.iter().zip(bary).zip(vals) {
            let t = w / (x - node as f64);
            num += t * v;
            den += t;
        }
        *z += num / den;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weight_examples() {
        assert_eq!(gamma_weights(0.3, 0).unwrap().values, vec![1.0]);
        let w = gamma_weights(0.3, 2).unwrap();
        assert_relative_eq!(w.values[1], 0.3, epsilon = 1e-15);
        assert_relative_eq!(w.values[2], 0.195, epsilon = 1e-15);
        assert_eq!(w.truncation(), 2);
        assert!(gamma_weights(0.5, 3).is_err());
        assert!(gamma_weights(f64::NAN, 3).is_err());
    }

    #[test]
    fn gamma_ratio_matches_products() {
        for &(a, b) in &[(0.3, 0.7), (-0.4, 1.2), (0.45, 0.55)] {
            for &x in &[32.0, 100.0, 1000.0] {
                // Γ(x+a) = Γ(1+a) ∏_{j < x−1} (1+a+j) for integer x
                let mut z = 1.0;
                for j in 0..(x as usize - 1) {
                    let j = j as f64;
                    z *= (1.0 + a + j) / (1.0 + b + j);
                }
                let direct = z.ln() + ln_gamma(1.0 + a) - ln_gamma(1.0 + b);
                assert!((ln_gamma_ratio(x, a, b) - direct).abs() < 1e-12, "x={x}");
            }
        }
    }

    #[test]
    fn closed_form_matches_series_for_short_memory() {
        for &(da, db) in &[(-0.3, -0.2), (-0.4, 0.1), (0.1, -0.45)] {
            let ga = weights(da, 400_000);
            let gb = weights(db, 400_000);
            for lag in [-5i64, 0, 3, 70, 200] {
                let series: f64 = if lag >= 0 {
                    (0..ga.len() - lag as usize)
                        .map(|p| ga[p] * gb[p + lag as usize])
                        .sum()
                } else {
                    (0..gb.len() - (-lag) as usize)
                        .map(|p| ga[p + (-lag) as usize] * gb[p])
                        .sum()
                };
                let closed = farima_covariance_closed(da, db, lag).unwrap();
                // series tail beyond 4e5 terms is below ~5e-9 here
                assert!(
                    (series - closed).abs() < 1e-8,
                    "{da} {db} {lag}: {series} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn spectral_matches_closed_form() {
        for &(da, db) in &[
            (0.35, 0.35),
            (0.2, 0.45),
            (0.45, 0.2),
            (-0.3, 0.4),
            (0.0, 0.3),
            (0.49, 0.49),
        ] {
            for lag in [-16i64, -3, 0, 1, 2, 7, 16, 40] {
                let s = farima_covariance(da, db, lag).unwrap();
                let c = farima_covariance_closed(da, db, lag).unwrap();
                assert!(
                    (s - c).abs() < 1e-10 * c.abs().max(1.0),
                    "{da} {db} {lag}: {s} vs {c}"
                );
            }
        }
    }

    #[test]
    fn covariance_trivial_cases() {
        assert_eq!(farima_covariance(0.0, 0.0, 0).unwrap(), 1.0);
        assert_eq!(farima_covariance(0.0, 0.0, 3).unwrap(), 0.0);
        assert!(farima_covariance(0.5, 0.1, 0).is_err());
        let a = farima_covariance(0.2, 0.4, 5).unwrap();
        let b = farima_covariance(0.4, 0.2, -5).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn white_noise_passthrough() {
        let mut p = FarimaParams::new(3, vec![0.0], 50);
        p.burn_in = Some(10);
        p.history = false;
        let seq = generate_farima(&p, 9, (5, 20)).unwrap();
        let g = NoiseSource::new(9, NoiseMode::Independent)
            .innovations(3, 5, 16)
            .unwrap();
        assert_eq!(seq.values, g);
    }

    #[test]
    fn truncated_convolution_matches_direct_sum() {
        let mut p = FarimaParams::new(4, vec![0.3], 40);
        p.burn_in = Some(8);
        p.history = false;
        let seq = generate_farima(&p, 11, (0, 39)).unwrap();
        let g = NoiseSource::new(11, NoiseMode::Independent)
            .innovations(4, -8, 48)
            .unwrap();
        let w = weights(0.3, 48);
        for l in 0..40usize {
            let direct: f64 = (0..=l + 8).map(|q| w[q] * g[l + 8 - q]).sum();
            assert!((seq.values[l] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn windows_partition_bit_identically() {
        let plan = FarimaPlan::new(FarimaParams::new(6, vec![0.4], 300)).unwrap();
        let whole = plan.window(3, 0, 0, 299).unwrap();
        let a = plan.window(3, 0, 0, 122).unwrap();
        let b = plan.window(3, 0, 123, 299).unwrap();
        let mut joined = a.values.clone();
        joined.extend(&b.values);
        assert_eq!(joined, whole.values);
        assert!(plan.window(3, 0, 250, 300).is_err());
        assert!(plan.window(3, 0, -1, 3).is_err());
    }

    #[test]
    fn history_restores_stationary_variance() {
        // Without history the variance at index 0 is Σ_{p ≤ L} γ_p², well below
        // the stationary value for δ near 1/2; with it, the ensemble matches.
        let delta = 0.45;
        let plan = FarimaPlan::new(FarimaParams::new(2, vec![delta], 64)).unwrap();
        let target = farima_covariance_closed(delta, delta, 0).unwrap();
        let lag_target = farima_covariance_closed(delta, delta, 40).unwrap();
        let n = 4000;
        let (mut s0, mut s63, mut c) = (0.0, 0.0, 0.0);
        for seed in 0..n {
            let z = &plan.generate(seed).unwrap()[0];
            s0 += z[0] * z[0];
            s63 += z[63] * z[63];
            c += z[10] * z[50];
        }
        let nf = n as f64;
        let se = target * (2.0 / nf).sqrt();
        assert!(
            (s0 / nf - target).abs() < 4.0 * se,
            "{} vs {target}",
            s0 / nf
        );
        assert!((s63 / nf - target).abs() < 4.0 * se);
        assert!((c / nf - lag_target).abs() < 4.0 * se);
    }

    #[test]
    fn joint_orders_share_innovations() {
        let plan = FarimaPlan::new(FarimaParams::new(5, vec![0.3, 0.3, 0.1], 128)).unwrap();
        let out = plan.generate(2).unwrap();
        assert_eq!(out[0], out[1]);
        let explicit = |deltas: Vec<f64>| {
            let mut p = FarimaParams::new(5, deltas, 128);
            p.history = false;
            FarimaPlan::new(p).unwrap().generate(2).unwrap()
        };
        let out = explicit(vec![0.3, 0.1]);
        let solo = explicit(vec![0.3]);
        for (x, y) in out[0].iter().zip(&solo[0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
