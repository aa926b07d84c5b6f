//! Index-keyed Gaussian innovations.
//!
//! Every standard normal is a pure function of `(seed, stream, index)`: a
//! ChaCha20 keystream is positioned at word `4·index` of the stream and two
//! 64-bit words feed one Box–Muller draw. Windows can therefore be generated
//! in any order or partition with bit-identical results.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::meyer::{phi_hat_unchecked, BAND_INNER, BAND_OUTER};
use crate::quadrature::rules::composite_nodes;

const INDEX_OFFSET: i128 = 1 << 62;
const PURPOSE_SCALE: u64 = 0;
const PURPOSE_HISTORY: u64 = 1;
/// Half-length of the truncated Meyer low-pass filter.
pub const FILTER_HALF_LENGTH: usize = 96;

/// How innovations at different scales relate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum NoiseMode {
    /// Each scale has its own independent keyed stream.
    #[default]
    Independent,
    /// Scale `finest` is keyed; coarser scales are obtained by the Meyer
    /// low-pass cascade `g_{j,k} = Σ_n c_n g_{j+1, 2k+n}`, so paths at
    /// different scales share randomness.
    ScaleCoupled { finest: u32 },
}

/// Fills `out` with standard normals `N(seed, stream, start + i)`.
pub fn keyed_normals(seed: u64, stream: u64, start: i64, out: &mut [f64]) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(((start as i128 + INDEX_OFFSET) as u128) * 4);
    for slot in out.iter_mut() {
        let a = rng.next_u64();
        let b = rng.next_u64();
        *slot = box_muller(a, b);
    }
}

#[inline]
fn box_muller(a: u64, b: u64) -> f64 {
    let scale = 1.0 / (1u64 << 53) as f64;
    let u1 = ((a >> 11) as f64 + 0.5) * scale;
    let u2 = (b >> 11) as f64 * scale;
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Source of the innovations `g_{J,ℓ}` for one seed.
#[derive(Clone, Debug)]
pub struct NoiseSource {
    seed: u64,
    mode: NoiseMode,
}

impl NoiseSource {
    pub fn new(seed: u64, mode: NoiseMode) -> Self {
        Self { seed, mode }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    /// Innovations at `scale` for indices `start..start + len`.
    pub fn innovations(&self, scale: u32, start: i64, len: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; len];
        match self.mode {
            NoiseMode::Independent => {
                keyed_normals(self.seed, stream_id(PURPOSE_SCALE, scale), start, &mut out)
            }
            NoiseMode::ScaleCoupled { finest } => {
                if scale > finest {
                    return param(format!("scale {scale} finer than coupled finest {finest}"));
                }
                self.cascade(scale, finest, start, &mut out);
            }
        }
        Ok(out)
    }

    fn cascade(&self, scale: u32, finest: u32, start: i64, out: &mut [f64]) {
        if scale == finest {
            keyed_normals(self.seed, stream_id(PURPOSE_SCALE, scale), start, out);
            return;
        }
        let taps = lowpass_taps();
        let half = FILTER_HALF_LENGTH as i64;
        let fine_start = 2 * start - half;
        let fine_len = 2 * out.len() + 2 * FILTER_HALF_LENGTH - 1;
        let mut fine = vec![0.0; fine_len];
        self.cascade(scale + 1, finest, fine_start, &mut fine);
        for (k, slot) in out.iter_mut().enumerate() {
            let base = 2 * k;
            *slot = taps
                .iter()
                .zip(&fine[base..base + taps.len()])
                .map(|(c, g)| c * g)
                .sum();
        }
    }

    /// Scale-free normals used for the pre-burn-in history of the FARIMA generator.
    pub fn history_normals(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        keyed_normals(self.seed, stream_id(PURPOSE_HISTORY, 0), 0, &mut out);
        out
    }
}

fn stream_id(purpose: u64, scale: u32) -> u64 {
    (purpose << 32) | scale as u64
}

/// Meyer scaling function `φ(x) = (1/π) ∫_0^{4π/3} φ̂(ξ) cos(xξ) dξ`.
fn meyer_phi(x: f64) -> f64 {
    let flat = if x == 0.0 {
        BAND_INNER
    } else {
        (BAND_INNER * x).sin() / x
    };
    let nodes = composite_nodes(&[BAND_INNER, BAND_OUTER], 16, 24);
    let band: f64 = nodes
        .iter()
        .map(|(xi, w)| w * phi_hat_unchecked(*xi) * (x * xi).cos())
        .sum();
    (flat + band) / PI
}

/// Taps `c_n = φ(n/2)/√2` for `|n| ≤ FILTER_HALF_LENGTH`, renormalized to unit energy.
pub fn lowpass_taps() -> Arc<Vec<f64>> {
    static TAPS: OnceLock<Arc<Vec<f64>>> = OnceLock::new();
    TAPS.get_or_init(|| {
        let half = FILTER_HALF_LENGTH as i64;
        let mut taps: Vec<f64> = (-half..=half)
            .map(|n| meyer_phi(n as f64 / 2.0) / 2f64.sqrt())
            .collect();
        let norm = taps.iter().map(|c| c * c).sum::<f64>().sqrt();
        taps.iter_mut().for_each(|c| *c /= norm);
        Arc::new(taps)
    })
    .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keyed_draws_are_window_independent() {
        let mut whole = vec![0.0; 100];
        keyed_normals(7, 3, -40, &mut whole);
        let mut a = vec![0.0; 37];
        let mut b = vec![0.0; 63];
        keyed_normals(7, 3, -40, &mut a);
        keyed_normals(7, 3, -3, &mut b);
        a.extend(b);
        assert_eq!(whole, a);
        let mut other = vec![0.0; 100];
        keyed_normals(8, 3, -40, &mut other);
        assert_ne!(whole, other);
    }

    #[test]
    fn normal_moments() {
        let mut v = vec![0.0; 200_000];
        keyed_normals(1, 0, 0, &mut v);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let kurt = v.iter().map(|x| x.powi(4)).sum::<f64>() / n;
        assert!(mean.abs() < 4.0 / n.sqrt());
        assert!((var - 1.0).abs() < 4.0 * (2.0 / n).sqrt());
        assert!((kurt - 3.0).abs() < 4.0 * (96.0 / n).sqrt());
    }

    #[test]
    fn taps_are_orthonormal_under_even_shifts() {
        let c = lowpass_taps();
        for shift in 0..6 {
            let s: f64 = (0..c.len() - 2 * shift)
                .map(|i| c[i] * c[i + 2 * shift])
                .sum();
            let target = if shift == 0 { 1.0 } else { 0.0 };
            assert!((s - target).abs() < 1e-6, "shift {shift}: {s}");
        }
        let total: f64 = c.iter().sum();
        assert!((total - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn coupled_scales_are_unit_variance_and_consistent() {
        let src = NoiseSource::new(5, NoiseMode::ScaleCoupled { finest: 6 });
        let coarse = src.innovations(3, 0, 4000).unwrap();
        let var = coarse.iter().map(|x| x * x).sum::<f64>() / 4000.0;
        assert!((var - 1.0).abs() < 0.1, "{var}");
        let part = src.innovations(3, 1000, 10).unwrap();
        assert_eq!(&coarse[1000..1010], &part[..]);
        assert!(src.innovations(7, 0, 4).is_err());
    }
}
