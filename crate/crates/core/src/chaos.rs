//! Wick-ordered products of FARIMA values: the chaotic coefficients
//! `σ = Σ_m (−1)^m Σ_{P ∈ pairings with m pairs} ∏_{pairs} E[Z Z] ∏_{singletons} Z`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::farima::farima_covariance;
use crate::params::HurstVector;

/// A partition of `{0, …, d−1}` into unordered pairs and singletons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub pairs: Vec<(usize, usize)>,
    pub singles: Vec<usize>,
}

/// All pair/singleton partitions of `{0, …, d−1}`, grouped by number of pairs.
#[derive(Clone, Debug)]
pub struct PartitionSet {
    d: usize,
    by_pairs: Vec<Vec<Partition>>,
}

impl PartitionSet {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 || d > 12 {
            return param(format!("partition order {d} outside [1, 12]"));
        }
        let mut by_pairs = vec![Vec::new(); d / 2 + 1];
        let mut pairs = Vec::new();
        let mut singles = Vec::new();
        let mut used = vec![false; d];
        enumerate(&mut used, &mut pairs, &mut singles, &mut by_pairs);
        Ok(Self { d, by_pairs })
    }

    /// Memoized set for order `d`.
    pub fn shared(d: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PartitionSet>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().expect("partition cache poisoned");
        if let Some(p) = map.get(&d) {
            return Ok(p.clone());
        }
        let p = Arc::new(Self::new(d)?);
        map.insert(d, p.clone());
        Ok(p)
    }

    pub fn order(&self) -> usize {
        self.d
    }

    /// Partitions with exactly `m` pairs.
    pub fn with_pairs(&self, m: usize) -> &[Partition] {
        self.by_pairs.get(m).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Closed-form count `d!/(m!·2^m·(d−2m)!)`.
    pub fn expected_count(d: usize, m: usize) -> u64 {
        if 2 * m > d {
            return 0;
        }
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        fact(d) / (fact(m) * (1u64 << m) * fact(d - 2 * m))
    }
}

fn enumerate(
    used: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    singles: &mut Vec<usize>,
    out: &mut [Vec<Partition>],
) {
    let Some(first) = used.iter().position(|u| !u) else {
        out[pairs.len()].push(Partition {
            pairs: pairs.clone(),
            singles: singles.clone(),
        });
        return;
    };
    used[first] = true;
    singles.push(first);
    enumerate(used, pairs, singles, out);
    singles.pop();
    for other in first + 1..used.len() {
        if used[other] {
            continue;
        }
        used[other] = true;
        pairs.push((first, other));
        enumerate(used, pairs, singles, out);
        pairs.pop();
        used[other] = false;
    }
    used[first] = false;
}

/// `E[Z^{(δ_ℓ)}_k Z^{(δ_ℓ')}_{k+lag}]` for all coordinate pairs and `|lag| ≤ width`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceTable {
    deltas: Vec<f64>,
    width: usize,
    entries: Vec<f64>,
}

impl CovarianceTable {
    /// Table for the FARIMA orders `δ_ℓ = h_ℓ − 1/2`.
    pub fn build(h: &HurstVector, width: usize) -> Result<Self> {
        Self::from_deltas(h.deltas(), width)
    }

    pub fn from_deltas(deltas: Vec<f64>, width: usize) -> Result<Self> {
        let d = deltas.len();
        let span = 2 * width + 1;
        let mut entries = vec![0.0; d * d * span];
        let mut memo: HashMap<(u64, u64, i64), f64> = HashMap::new();
        for a in 0..d {
            for b in 0..d {
                for lag in -(width as i64)..=width as i64 {
                    let key = (deltas[a].to_bits(), deltas[b].to_bits(), lag);
                    let v = match memo.get(&key) {
                        Some(v) => *v,
                        None => {
                            let v = farima_covariance(deltas[a], deltas[b], lag)?;
                            memo.insert(key, v);
                            v
                        }
                    };
                    entries[(a * d + b) * span + (lag + width as i64) as usize] = v;
                }
            }
        }
        Ok(Self {
            deltas,
            width,
            entries,
        })
    }

    pub fn order(&self) -> usize {
        self.deltas.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Entry `(ℓ, ℓ', lag)`; a lag beyond the table is an internal error.
    pub fn get(&self, l1: usize, l2: usize, lag: i64) -> Result<f64> {
        let d = self.deltas.len();
        if l1 >= d || l2 >= d || lag.unsigned_abs() as usize > self.width {
            return Err(Error::Internal(format!(
                "covariance ({l1}, {l2}, lag {lag}) outside table (d = {d}, width = {})",
                self.width
            )));
        }
        Ok(self.at(l1, l2, lag))
    }

    #[inline]
    pub(crate) fn at(&self, l1: usize, l2: usize, lag: i64) -> f64 {
        let span = 2 * self.width + 1;
        self.entries[(l1 * self.deltas.len() + l2) * span + (lag + self.width as i64) as usize]
    }
}

/// Wick product of `Z_ℓ` at indices `k_ℓ`, for any order.
pub fn sigma_general(
    partitions: &PartitionSet,
    z: &[f64],
    k: &[i64],
    cov: &CovarianceTable,
) -> Result<f64> {
    let d = partitions.order();
    if z.len() != d || k.len() != d || cov.order() != d {
        return param(format!(
            "sigma_general: order {d} with {} values, {} indices, covariance of order {}",
            z.len(),
            k.len(),
            cov.order()
        ));
    }
    let mut total = 0.0;
    for m in 0..=d / 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for p in partitions.with_pairs(m) {
            let mut term = sign;
            for &(a, b) in &p.pairs {
                term *= cov.get(a, b, k[b] - k[a])?;
            }
            for &s in &p.singles {
                term *= z[s];
            }
            total += term;
        }
    }
    Ok(total)
}

/// `Z1·Z2 − cov12`.
#[inline]
pub fn sigma_d2(z1: f64, z2: f64, cov12: f64) -> f64 {
    z1 * z2 - cov12
}

/// `Z1·Z2·Z3 − cov12·Z3 − cov13·Z2 − cov23·Z1`.
#[inline]
pub fn sigma_d3(z1: f64, z2: f64, z3: f64, cov12: f64, cov13: f64, cov23: f64) -> f64 {
    z1 * z2 * z3 - cov12 * z3 - cov13 * z2 - cov23 * z1
}
