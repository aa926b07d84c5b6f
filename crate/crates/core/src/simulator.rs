//! The synthesis recursion: knot indices, thickened-diagonal sums of Wick
//! products against integral tables, cumulative sums and paths.
//!
//! For scale `J` the knot values are
//! `s_m = 2^{−JH} Σ σ(k_1, …, k_d)·I(k_1, …, k_d)` over tuples in `[m0, m]^d`
//! whose spread is at most `W = ⌊2^{εJ}⌋`, where `σ` is the Wick product of the
//! FARIMA values and `I` the time-domain integral of the product of
//! fractional scaling functions. The increment `s_m − s_{m−1}` collects the
//! tuples whose largest index is `m`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chaos::{sigma_d2, sigma_d3, CovarianceTable};
use crate::error::{param, Error, Result};
use crate::farima::{FarimaParams, FarimaPlan};
use crate::params::{ProcessKind, SimulationConfig};
use crate::path::{Provenance, SamplePath};
use crate::quadrature::{
    integral_matrix_d3, integral_matrix_gen3, integral_vector_d2, IntegralTable, TableCache,
};

/// Knot index range `[m0, mmax]` for scale `J`, offset exponent `a` and horizon `T`:
/// `m0` is the least integer above `2^{J(1−a)} − 1`, `mmax = ⌊2^J T − 2^{J(1−a)}⌋`.
pub fn index_bounds(scale: u32, a: f64, horizon: f64) -> Result<(i64, i64)> {
    let offset = (scale as f64 * (1.0 - a)).exp2();
    let m0 = (offset - 1.0).floor() as i64 + 1;
    let top = (scale as f64).exp2() * horizon - offset;
    if !top.is_finite() || top < m0 as f64 {
        return param(format!(
            "horizon too small for scale: no knots in ({}, {top}]",
            offset - 1.0
        ));
    }
    Ok((m0, top.floor() as i64))
}

/// Largest admitted coordinate spread `⌊2^{εJ}⌋`.
pub fn diagonal_width(scale: u32, epsilon: f64) -> usize {
    (epsilon * scale as f64).exp2().floor().max(1.0) as usize
}

/// `s_{m0}` followed by the increments `s_{m+1} − s_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Increments {
    pub m0: i64,
    pub values: Vec<f64>,
}

impl Increments {
    /// Cumulative sums `s_m`.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.values
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect()
    }
}

/// Prepared simulation: FARIMA plan, covariance and integral tables.
#[derive(Debug)]
pub struct Simulator {
    config: SimulationConfig,
    m0: i64,
    mmax: i64,
    width: usize,
    plan: FarimaPlan,
    cov: CovarianceTable,
    table: Option<IntegralTable>,
    /// `(2π)^{−(d−1)}` times the normalization multiplier.
    table_factor: f64,
    /// `2^{−JH}`.
    scale_factor: f64,
    cache_keys: Vec<String>,
    family: String,
}

impl Simulator {
    pub fn new(config: SimulationConfig) -> Result<Self> {
        Self::with_cache(config, None)
    }

    /// Like [`Simulator::new`], loading and storing integral tables in `cache`.
    pub fn with_cache(config: SimulationConfig, cache: Option<&TableCache>) -> Result<Self> {
        config.validate()?;
        let (m0, mmax) = index_bounds(config.scale, config.a, config.horizon)?;
        let width = diagonal_width(config.scale, config.epsilon);
        let kind = config.process;
        let hurst = config.hurst.hurst();
        let spec = config.quadrature;
        let mut cache_keys = Vec::new();
        let mut load = |name: &str, params: Vec<f64>, f: &dyn Fn() -> Result<IntegralTable>| {
            let key = TableCache::key(name, &params, width, spec);
            cache_keys.push(key.clone());
            match cache {
                Some(c) => c.get_or_compute(&key, f),
                None => f(),
            }
        };
        let table = match kind {
            ProcessKind::Fbm => None,
            ProcessKind::Rosenblatt => Some(load("vector", vec![hurst], &|| {
                integral_vector_d2(hurst, width, spec)
            })?),
            ProcessKind::Hermite3 => Some(load("quadrant", vec![hurst], &|| {
                integral_matrix_d3(hurst, width, spec)
            })?),
            ProcessKind::GenHermite3 => {
                let h = config.hurst.clone();
                Some(load("signed", h.components().to_vec(), &|| {
                    integral_matrix_gen3(&h, width, spec)
                })?)
            }
        };
        let d = kind.order();
        let mut fp = FarimaParams::new(config.scale, config.hurst.deltas(), (mmax + 1) as usize);
        fp.burn_in = config.farima.burn_in;
        fp.history = config.farima.history;
        fp.noise = config.noise;
        let plan = FarimaPlan::new(fp)?;
        let cov = CovarianceTable::build(&config.hurst, width)?;
        let table_factor =
            (2.0 * std::f64::consts::PI).powi(1 - d as i32) * config.output_factor()?;
        let scale_factor = (-(config.scale as f64) * hurst).exp2();
        let mut fam = config.clone();
        fam.seed = 0;
        Ok(Self {
            m0,
            mmax,
            width,
            plan,
            cov,
            table,
            table_factor,
            scale_factor,
            cache_keys,
            family: fam.digest(),
            config,
        })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    /// `(m0, mmax)`.
    pub fn bounds(&self) -> (i64, i64) {
        (self.m0, self.mmax)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn table(&self) -> Option<&IntegralTable> {
        self.table.as_ref()
    }

    pub fn covariances(&self) -> &CovarianceTable {
        &self.cov
    }

    /// Cache keys of the integral tables this simulator uses.
    pub fn cache_keys(&self) -> &[String] {
        &self.cache_keys
    }

    /// FARIMA values `Z^{(δ_ℓ)}_{J,ℓ}` for `ℓ = 0..=mmax`, one sequence per coordinate.
    pub fn farima(&self, seed: u64) -> Result<Vec<Vec<f64>>> {
        self.plan.generate(seed)
    }

    pub fn increments(&self, seed: u64) -> Result<Increments> {
        self.increments_from(&self.farima(seed)?)
    }

    /// Increments computed from given FARIMA values (indices `0..=mmax`): one
    /// sequence per coordinate, or a single one for the equal-h kinds.
    pub fn increments_from(&self, z: &[Vec<f64>]) -> Result<Increments> {
        let d = self.config.process.order();
        let need = (self.mmax + 1) as usize;
        let shared_ok = z.len() == 1 && self.config.process != ProcessKind::GenHermite3;
        if !(z.len() == d || shared_ok) || z.iter().any(|s| s.len() < need) {
            return Err(Error::Internal(format!(
                "FARIMA input does not cover {d} coordinates on [0, {}]",
                self.mmax
            )));
        }
        let ms: Vec<i64> = (self.m0..=self.mmax).collect();
        let parts: Vec<f64> = ms
            .par_iter()
            .with_min_len(256)
            .map(|&m| self.part(z, m))
            .collect::<Result<_>>()?;
        let factor = self.scale_factor
            * if d == 1 {
                self.config.output_factor()?
            } else {
                self.table_factor
            };
        Ok(Increments {
            m0: self.m0,
            values: parts.into_iter().map(|p| p * factor).collect(),
        })
    }

    /// Sum over tuples in `[m0, m]^d` of spread ≤ W whose largest index is `m`,
    /// before the `2^{−JH}` and table scaling.
    fn part(&self, z: &[Vec<f64>], m: i64) -> Result<f64> {
        let reach = (self.width as i64).min(m - self.m0);
        let t = self.table.as_ref();
        let at = |i: i64| -> usize { (m - i) as usize };
        let idx = m as usize;
        Ok(match self.config.process {
            ProcessKind::Fbm => z[0][idx],
            ProcessKind::Rosenblatt => {
                let (t, zz, cov) = (t.expect("vector table"), &z[0], &self.cov);
                let mut acc = sigma_d2(zz[idx], zz[idx], cov.at(0, 0, 0)) * t.value(0)?;
                for i in 1..=reach {
                    acc += 2.0 * sigma_d2(zz[idx], zz[at(i)], cov.at(0, 0, i)) * t.value(i)?;
                }
                acc
            }
            ProcessKind::Hermite3 => {
                let (t, zz, c) = (t.expect("matrix table"), &z[0], |l: i64| {
                    self.cov.at(0, 0, l)
                });
                let s = |a: usize, b: usize, e: usize| {
                    let (ia, ib, ie) = (a as i64, b as i64, e as i64);
                    sigma_d3(zz[a], zz[b], zz[e], c(ib - ia), c(ie - ia), c(ie - ib))
                };
                let mut acc = s(idx, idx, idx) * t.value2(0, 0)?;
                for i in 1..=reach {
                    let mi = at(i);
                    let edge = t.value2(0, i)?;
                    acc += 3.0 * s(idx, idx, mi) * edge + 3.0 * s(idx, mi, mi) * edge;
                    for j in i + 1..=reach {
                        acc += 6.0 * s(idx, mi, at(j)) * t.value2(i, j - i)?;
                    }
                }
                acc
            }
            ProcessKind::GenHermite3 => {
                let t = t.expect("signed table");
                let cov = &self.cov;
                let term = |k: [i64; 3]| -> Result<f64> {
                    let v = [
                        z[0][k[0] as usize],
                        z[1][k[1] as usize],
                        z[2][k[2] as usize],
                    ];
                    let s = sigma_d3(
                        v[0],
                        v[1],
                        v[2],
                        cov.at(0, 1, k[1] - k[0]),
                        cov.at(0, 2, k[2] - k[0]),
                        cov.at(1, 2, k[2] - k[1]),
                    );
                    Ok(s * t.value2(k[1] - k[0], k[2] - k[1])?)
                };
                let mut acc = term([m, m, m])?;
                for i in 1..=reach {
                    let q = m - i;
                    for k in [
                        [m, m, q],
                        [m, q, m],
                        [q, m, m],
                        [m, q, q],
                        [q, m, q],
                        [q, q, m],
                    ] {
                        acc += term(k)?;
                    }
                    for j in i + 1..=reach {
                        let r = m - j;
                        for k in [
                            [m, q, r],
                            [m, r, q],
                            [q, m, r],
                            [q, r, m],
                            [r, m, q],
                            [r, q, m],
                        ] {
                            acc += term(k)?;
                        }
                    }
                }
                acc
            }
        })
    }

    pub fn path(&self, seed: u64) -> Result<SamplePath> {
        Ok(self.path_from_increments(&self.increments(seed)?, seed))
    }

    pub fn path_from_increments(&self, inc: &Increments, seed: u64) -> SamplePath {
        let j = self.config.scale as f64;
        let spacing = (-j).exp2();
        SamplePath {
            scale: self.config.scale,
            m0: self.m0,
            first_knot: self.m0 as f64 * spacing + (-self.config.a * j).exp2(),
            spacing,
            values: inc.cumulative(),
            provenance: Provenance {
                config_digest: self.family.clone(),
                seed,
            },
        }
    }
}

/// Increments for `config` with its own seed.
pub fn simulate_increments(config: &SimulationConfig) -> Result<Increments> {
    Simulator::new(config.clone())?.increments(config.seed)
}

/// Sample path for `config` with its own seed.
pub fn build_path(config: &SimulationConfig) -> Result<SamplePath> {
    Simulator::new(config.clone())?.path(config.seed)
}
