//! Hurst parameters, process kinds and simulation configuration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::error::{param, Error, Result};
use crate::noise::NoiseMode;
use crate::quadrature::QuadratureSpec;

/// Per-coordinate Hurst indices `h_1, …, h_d` of a generalized Hermite process.
///
/// Each `h_ℓ` lies in `(1/2, 1)` and `Σ h_ℓ > d − 1/2`, so the
/// self-similarity index `H = Σ h_ℓ − d + 1` lies in `(1/2, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HurstVector {
    h: Vec<f64>,
}

impl HurstVector {
    pub fn new(h: Vec<f64>) -> Result<Self> {
        if h.is_empty() {
            return param("Hurst vector must have at least one coordinate");
        }
        for &x in &h {
            if !(x > 0.5 && x < 1.0) {
                return param(format!("h coordinate {x} outside (1/2, 1)"));
            }
        }
        let d = h.len() as f64;
        let sum: f64 = h.iter().sum();
        if sum <= d - 0.5 {
            return param(format!(
                "sum of h = {sum} must exceed d - 1/2 = {}",
                d - 0.5
            ));
        }
        Ok(Self { h })
    }

    /// Equal coordinates `h = 1 + (H − 1)/d` giving self-similarity index `H`.
    pub fn equal(d: usize, hurst: f64) -> Result<Self> {
        if d == 0 {
            return param("order must be at least 1");
        }
        if !(hurst > 0.5 && hurst < 1.0) {
            return param(format!("Hurst index {hurst} outside (1/2, 1)"));
        }
        let h = 1.0 + (hurst - 1.0) / d as f64;
        Self::new(vec![h; d])
    }

    pub fn order(&self) -> usize {
        self.h.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.h
    }

    /// Self-similarity index `H = Σ h_ℓ − d + 1`.
    pub fn hurst(&self) -> f64 {
        self.h.iter().sum::<f64>() - self.h.len() as f64 + 1.0
    }

    /// FARIMA differencing orders `δ_ℓ = h_ℓ − 1/2`.
    pub fn deltas(&self) -> Vec<f64> {
        self.h.iter().map(|h| h - 0.5).collect()
    }

    pub fn is_equal(&self) -> bool {
        self.h.iter().all(|&x| x == self.h[0])
    }
}

impl TryFrom<Vec<f64>> for HurstVector {
    type Error = Error;
    fn try_from(h: Vec<f64>) -> Result<Self> {
        Self::new(h)
    }
}

impl From<HurstVector> for Vec<f64> {
    fn from(v: HurstVector) -> Self {
        v.h
    }
}

/// Which process a configuration synthesizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    Fbm,
    Rosenblatt,
    Hermite3,
    GenHermite3,
}

impl ProcessKind {
    pub const ALL: [ProcessKind; 4] = [
        ProcessKind::Fbm,
        ProcessKind::Rosenblatt,
        ProcessKind::Hermite3,
        ProcessKind::GenHermite3,
    ];

    /// Chaos order `d`.
    pub fn order(self) -> usize {
        match self {
            ProcessKind::Fbm => 1,
            ProcessKind::Rosenblatt => 2,
            ProcessKind::Hermite3 | ProcessKind::GenHermite3 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::Fbm => "fbm",
            ProcessKind::Rosenblatt => "rosenblatt",
            ProcessKind::Hermite3 => "hermite3",
            ProcessKind::GenHermite3 => "genhermite3",
        }
    }
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProcessKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProcessKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parameter(format!("unknown process kind '{s}'")))
    }
}

/// Options of the FARIMA generator used by the simulator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FarimaOptions {
    /// Noise samples drawn before index 0; `None` uses the generated span.
    pub burn_in: Option<usize>,
    /// Add the exact Gaussian contribution of the noise before the burn-in.
    pub history: bool,
}

impl Default for FarimaOptions {
    fn default() -> Self {
        Self {
            burn_in: None,
            history: true,
        }
    }
}

/// Full description of one synthesis run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub process: ProcessKind,
    pub hurst: HurstVector,
    /// Scale `J`; knots are spaced `2^{-J}` apart.
    pub scale: u32,
    /// Offset exponent: the first knot sits near `2^{-aJ}`.
    pub a: f64,
    /// Diagonal thickening exponent; spread ≤ `⌊2^{εJ}⌋`.
    pub epsilon: f64,
    /// Time horizon `T`.
    pub horizon: f64,
    pub seed: u64,
    /// Rescale equal-h processes to unit variance at `t = 1`.
    pub normalized: bool,
    pub farima: FarimaOptions,
    pub quadrature: QuadratureSpec,
    pub noise: NoiseMode,
}

impl SimulationConfig {
    /// Default configuration for `process`: `J = 20` (`15` for genhermite3),
    /// `a = 0.75`, `ε = 1e-4`, `T = 1`, seed 0, kernel normalization.
    pub fn new(process: ProcessKind, hurst: HurstVector) -> Result<Self> {
        let cfg = Self {
            process,
            hurst,
            scale: if process == ProcessKind::GenHermite3 {
                15
            } else {
                20
            },
            a: 0.75,
            epsilon: 1e-4,
            horizon: 1.0,
            seed: 0,
            normalized: false,
            farima: FarimaOptions::default(),
            quadrature: QuadratureSpec::default(),
            noise: NoiseMode::Independent,
        };
        cfg.check_kind()?;
        Ok(cfg)
    }

    /// Equal-h configuration of `process` with self-similarity index `hurst`.
    pub fn with_hurst(process: ProcessKind, hurst: f64) -> Result<Self> {
        Self::new(process, HurstVector::equal(process.order(), hurst)?)
    }

    pub fn scale(mut self, j: u32) -> Self {
        self.scale = j;
        self
    }

    pub fn offset_exponent(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }

    pub fn horizon(mut self, t: f64) -> Self {
        self.horizon = t;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn normalized(mut self, on: bool) -> Self {
        self.normalized = on;
        self
    }

    pub fn noise(mut self, mode: NoiseMode) -> Self {
        self.noise = mode;
        self
    }

    fn check_kind(&self) -> Result<()> {
        let d = self.process.order();
        if self.hurst.order() != d {
            return param(format!(
                "{} needs {d} Hurst coordinates, got {}",
                self.process,
                self.hurst.order()
            ));
        }
        if matches!(
            self.process,
            ProcessKind::Rosenblatt | ProcessKind::Hermite3
        ) && !self.hurst.is_equal()
        {
            return param(format!("{} requires equal h coordinates", self.process));
        }
        Ok(())
    }

    /// Checks every invariant of the configuration.
    pub fn validate(&self) -> Result<()> {
        self.check_kind()?;
        if !(self.a > 0.5 && self.a < 1.0) {
            return param(format!("a = {} outside (1/2, 1)", self.a));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return param(format!("epsilon = {} must be positive", self.epsilon));
        }
        if self.scale > 30 {
            return param(format!("scale J = {} too large", self.scale));
        }
        let min_t = 2f64.powf(1.0 - self.scale as f64 * self.a);
        if !(self.horizon.is_finite() && self.horizon > min_t) {
            return param(format!(
                "horizon T = {} must exceed 2^(1-Ja) = {min_t}",
                self.horizon
            ));
        }
        if self.normalized && !self.hurst.is_equal() {
            return param("normalization is only defined for equal h coordinates");
        }
        self.quadrature.validate()?;
        if let NoiseMode::ScaleCoupled { finest } = self.noise {
            if finest < self.scale {
                return param(format!(
                    "coupled noise finest scale {finest} below J = {}",
                    self.scale
                ));
            }
        }
        let h = self.hurst.hurst();
        if self.a <= 1.0 - 1.0 / (2.0 * h) {
            log::warn!(
                "a = {} does not exceed 1 - 1/(2H) = {}; interpolation guarantee lost",
                self.a,
                1.0 - 1.0 / (2.0 * h)
            );
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON encoding, used as provenance.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("configuration serializes");
        hex::encode(Sha256::digest(json))
    }

    /// Multiplier applied to kernel-convention paths (1 when not normalized).
    pub fn output_factor(&self) -> Result<f64> {
        if !self.normalized {
            return Ok(1.0);
        }
        if !self.hurst.is_equal() {
            return param("normalization is only defined for equal h coordinates");
        }
        Ok(kernel_variance(self.process.order(), self.hurst.hurst())
            .sqrt()
            .recip())
    }
}

/// `Var X(1)` of the order-`d` Hermite process with index `H` under the kernel
/// convention `1/Γ(h − 1/2)^d`: `d!·B(α, (2 − 2H)/d)^d / (H(2H − 1)·Γ(α)^{2d})`
/// with `α = 1/2 − (1 − H)/d`.
pub fn kernel_variance(d: usize, hurst: f64) -> f64 {
    let df = d as f64;
    let alpha = 0.5 - (1.0 - hurst) / df;
    let ln_fact = ln_gamma(df + 1.0);
    let ln_b = ln_beta(alpha, (2.0 - 2.0 * hurst) / df);
    (ln_fact + df * ln_b - 2.0 * df * ln_gamma(alpha)).exp() / (hurst * (2.0 * hurst - 1.0))
}

/// Unit-variance constant `c(H, d)` of the standard Hermite process:
/// `c² = H(2H − 1) / (d!·B(1/2 − (1 − H)/d, (2 − 2H)/d)^d)`.
pub fn hermite_constant(d: usize, hurst: f64) -> f64 {
    let df = d as f64;
    let alpha = 0.5 - (1.0 - hurst) / df;
    let ln_b = ln_beta(alpha, (2.0 - 2.0 * hurst) / df);
    (hurst * (2.0 * hurst - 1.0) / (ln_gamma(df + 1.0) + df * ln_b).exp()).sqrt()
}
