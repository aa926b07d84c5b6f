//! Deterministic oscillatory integrals consumed by the simulator.
//!
//! Tables store the Fourier-side integrals over the support of the Meyer
//! window. For order `d` the corresponding time-domain integral
//! `∫ ∏ Φ(s − k_ℓ) ds` equals the stored value times `(2π)^{-(d-1)}`
//! (see [`IntegralTable::time_domain_scale`]).
//!
//! The window is only C³ at `|ξ| = 2π/3` and `4π/3`, so every rule is aligned
//! with those kinks: 1D panels break at them, and the 2D hexagonal support
//! `{|ξ|, |η|, |ξ − η| ≤ 4π/3}` is cut along `ξ, η, ξ − η = ±2π/3` into convex
//! cells that are triangulated and integrated with collapsed Gauss–Legendre.

mod cache;
pub mod rules;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::meyer::{half_sinc, phi_hat_unchecked, BAND_INNER, BAND_OUTER};
use crate::params::HurstVector;

pub use cache::TableCache;

/// Resolution controls for the table quadratures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel (per direction in 2D).
    pub order: usize,
    /// Extra halvings of panels and triangles on top of the oscillation-driven level.
    pub refine: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            order: 24,
            refine: 0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(4..=256).contains(&self.order) {
            return param(format!("quadrature order {} outside [4, 256]", self.order));
        }
        if self.refine > 6 {
            return param(format!("quadrature refine level {} above 6", self.refine));
        }
        Ok(())
    }

    /// Same panels, twice the nodes per panel.
    pub fn doubled(&self) -> Self {
        Self {
            order: 2 * self.order,
            refine: self.refine,
        }
    }
}

/// Storage layout of an [`IntegralTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableLayout {
    /// `d = 2`: `V[k]` for `k = 0..=kmax` (even in `k`).
    Vector,
    /// `d = 3`, equal `h`: `M[k, l]` for `k, l = 0..=kmax`.
    Quadrant,
    /// `d = 3`, general `h`: `M[k, l]` for `k, l = -kmax..=kmax`.
    Signed,
}

/// Precomputed Fourier-side integrals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralTable {
    pub layout: TableLayout,
    /// `[H]` for the equal-h layouts, `[h1, h2, h3]` for the signed layout.
    pub params: Vec<f64>,
    pub kmax: usize,
    /// Row-major real parts.
    pub values: Vec<f64>,
    /// Largest discarded imaginary part.
    pub max_imag: f64,
    pub quadrature: QuadratureSpec,
}

impl IntegralTable {
    /// Chaos order `d` of the integrals.
    pub fn order(&self) -> usize {
        match self.layout {
            TableLayout::Vector => 2,
            _ => 3,
        }
    }

    /// Factor converting a stored entry to the time-domain integral.
    pub fn time_domain_scale(&self) -> f64 {
        (2.0 * PI).powi(-(self.order() as i32 - 1))
    }

    fn side(&self) -> usize {
        match self.layout {
            TableLayout::Signed => 2 * self.kmax + 1,
            _ => self.kmax + 1,
        }
    }

    /// Entry of a vector table at offset `k` (either sign).
    pub fn value(&self, k: i64) -> Result<f64> {
        if self.layout != TableLayout::Vector {
            return Err(Error::Internal("value() on a matrix table".into()));
        }
        let k = k.unsigned_abs() as usize;
        self.values
            .get(k)
            .copied()
            .ok_or_else(|| Error::Internal(format!("offset {k} beyond table kmax {}", self.kmax)))
    }

    /// Entry of a matrix table at offsets `(k, l)`.
    pub fn value2(&self, k: i64, l: i64) -> Result<f64> {
        let (i, j) = match self.layout {
            TableLayout::Vector => {
                return Err(Error::Internal("value2() on a vector table".into()))
            }
            TableLayout::Quadrant => {
                // M[k, l] = M[-k, -l] for equal h; mixed signs are not stored.
                let (k, l) = if k <= 0 && l <= 0 { (-k, -l) } else { (k, l) };
                if k < 0 || l < 0 {
                    return Err(Error::Internal(format!(
                        "mixed-sign offsets ({k}, {l}) not stored in quadrant table"
                    )));
                }
                (k as usize, l as usize)
            }
            TableLayout::Signed => {
                let m = self.kmax as i64;
                if k.abs() > m || l.abs() > m {
                    return Err(Error::Internal(format!(
                        "offsets ({k}, {l}) beyond table kmax {m}"
                    )));
                }
                ((k + m) as usize, (l + m) as usize)
            }
        };
        let side = self.side();
        if i >= side || j >= side {
            return Err(Error::Internal(format!(
                "offsets ({k}, {l}) beyond table kmax {}",
                self.kmax
            )));
        }
        Ok(self.values[i * side + j])
    }

    /// Recomputes the table with twice the nodes per panel.
    pub fn refined(&self) -> Result<IntegralTable> {
        let spec = self.quadrature.doubled();
        match self.layout {
            TableLayout::Vector => integral_vector_d2(self.params[0], self.kmax, spec),
            TableLayout::Quadrant => integral_matrix_d3(self.params[0], self.kmax, spec),
            TableLayout::Signed => {
                integral_matrix_gen3(&HurstVector::new(self.params.clone())?, self.kmax, spec)
            }
        }
    }

    /// Largest absolute entry difference to another table of the same shape.
    pub fn max_abs_diff(&self, other: &IntegralTable) -> Result<f64> {
        if self.layout != other.layout || self.kmax != other.kmax {
            return Err(Error::Internal(
                "comparing tables of different shape".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

fn check_hurst(h: f64) -> Result<()> {
    if !(h > 0.5 && h < 1.0) {
        return param(format!("Hurst index {h} outside (1/2, 1)"));
    }
    Ok(())
}

/// Rosenblatt integrals
/// `V[k] = ∫_{-4π/3}^{4π/3} e^{iξk} (sin(ξ/2)/(ξ/2))^H |φ̂(ξ)|² dξ`, `k = 0..=kmax`.
pub fn integral_vector_d2(hurst: f64, kmax: usize, spec: QuadratureSpec) -> Result<IntegralTable> {
    check_hurst(hurst)?;
    spec.validate()?;
    let (values, max_imag) = weighted_vector(hurst, kmax, spec);
    Ok(IntegralTable {
        layout: TableLayout::Vector,
        params: vec![hurst],
        kmax,
        values,
        max_imag,
        quadrature: spec,
    })
}

pub(crate) fn weighted_vector(exponent: f64, kmax: usize, spec: QuadratureSpec) -> (Vec<f64>, f64) {
    let panels = (1 + (kmax as f64 * BAND_INNER / 12.0).ceil() as usize) << spec.refine;
    let breaks = [-BAND_OUTER, -BAND_INNER, 0.0, BAND_INNER, BAND_OUTER];
    let nodes = rules::composite_nodes(&breaks, panels, spec.order);
    let weighted: Vec<(f64, f64)> = nodes
        .into_iter()
        .map(|(x, w)| {
            let p = phi_hat_unchecked(x);
            (x, w * half_sinc(x).powf(exponent) * p * p)
        })
        .collect();
    let mut max_imag: f64 = 0.0;
    let values = (0..=kmax)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for &(x, f) in &weighted {
                let (s, c) = (k as f64 * x).sin_cos();
                re += f * c;
                im += f * s;
            }
            max_imag = max_imag.max(im.abs());
            re
        })
        .collect();
    (values, max_imag)
}

/// Hermite-3 integrals for equal `h = 1 + (H − 1)/3`:
/// `M[k, l] = ∬ e^{iξk} e^{iηl} φ̂(ξ)φ̂(ξ−η)φ̂(η) (s(ξ)s(ξ−η)s(η))^{(2H+1)/6} dξ dη`
/// with `s(x) = sin(x/2)/(x/2)`, for `k, l = 0..=kmax`.
pub fn integral_matrix_d3(hurst: f64, kmax: usize, spec: QuadratureSpec) -> Result<IntegralTable> {
    check_hurst(hurst)?;
    spec.validate()?;
    let delta = (2.0 * hurst + 1.0) / 6.0;
    let (values, max_imag) = matrix_entries([delta; 3], 0, kmax, spec);
    Ok(IntegralTable {
        layout: TableLayout::Quadrant,
        params: vec![hurst],
        kmax,
        values,
        max_imag,
        quadrature: spec,
    })
}

/// Generalized Hermite-3 integrals
/// `M[k, l] = ∬ e^{iξ(k + (h2−h1)/2)} e^{iη(l + (h3−h2)/2)} φ̂(ξ)φ̂(ξ−η)φ̂(η)
/// s(ξ)^{h1−1/2} s(ξ−η)^{h2−1/2} s(η)^{h3−1/2} dξ dη`, for `k, l = -kmax..=kmax`.
///
/// The stored value at `(k2 − k1, k3 − k2)` is the Fourier form of
/// `∫ Φ^{(h1−1/2)}(s−k1) Φ^{(h2−1/2)}(s−k2) Φ^{(h3−1/2)}(s−k3) ds`.
pub fn integral_matrix_gen3(
    h: &HurstVector,
    kmax: usize,
    spec: QuadratureSpec,
) -> Result<IntegralTable> {
    if h.order() != 3 {
        return param(format!("expected 3 Hurst coordinates, got {}", h.order()));
    }
    spec.validate()?;
    let d = h.deltas();
    let (values, max_imag) = matrix_entries([d[0], d[1], d[2]], -(kmax as i64), kmax, spec);
    Ok(IntegralTable {
        layout: TableLayout::Signed,
        params: h.components().to_vec(),
        kmax,
        values,
        max_imag,
        quadrature: spec,
    })
}

/// Weighted nodes on the hexagonal support, aligned with the window kinks.
fn hexagon_nodes(kmax: usize, spec: QuadratureSpec) -> Vec<(f64, f64, f64)> {
    let b = BAND_OUTER;
    let mut cells = vec![vec![[-b, -b], [b, -b], [b, b], [-b, b]]];
    cells = rules::split_all(cells, 1.0, -1.0, b);
    cells.retain(|c| c.iter().all(|p| p[0] - p[1] <= b + 1e-12));
    cells = rules::split_all(cells, -1.0, 1.0, b);
    cells.retain(|c| c.iter().all(|p| p[1] - p[0] <= b + 1e-12));
    let c = BAND_INNER;
    for &(u, v) in &[(1.0, 0.0), (0.0, 1.0), (1.0, -1.0)] {
        for off in [-c, 0.0, c] {
            cells = rules::split_all(cells, u, v, off);
        }
    }
    // Triangles have diameter ≤ ~3; keep the phase change per triangle near 24 rad.
    let spread = (2 * kmax + 1) as f64 * 3.0 / 24.0;
    let auto = if spread > 1.0 {
        spread.log2().ceil() as u32
    } else {
        0
    };
    let tris = rules::subdivide(rules::triangulate(&cells), auto + spec.refine);
    rules::triangle_nodes(&tris, spec.order)
}

/// Real and largest imaginary part of
/// `∬ F(ξ, η) e^{iξ(k + a)} e^{iη(l + b)}` for `k, l ∈ [lo, kmax]`.
fn matrix_entries(delta: [f64; 3], lo: i64, kmax: usize, spec: QuadratureSpec) -> (Vec<f64>, f64) {
    let hi = kmax as i64;
    let side = (hi - lo + 1) as usize;
    let shift_xi = 0.5 * (delta[1] - delta[0]);
    let shift_eta = 0.5 * (delta[2] - delta[1]);
    let nodes = hexagon_nodes(kmax, spec);
    let acc = nodes
        .par_chunks(2048)
        .map(|chunk| {
            let mut acc = vec![Complex64::new(0.0, 0.0); side * side];
            let mut ek = vec![Complex64::new(0.0, 0.0); side];
            let mut el = vec![Complex64::new(0.0, 0.0); side];
            for &(xi, eta, w) in chunk {
                let f =
                    phi_hat_unchecked(xi) * phi_hat_unchecked(eta) * phi_hat_unchecked(xi - eta);
                if f == 0.0 {
                    continue;
                }
                let f = f
                    * w
                    * half_sinc(xi).powf(delta[0])
                    * half_sinc(xi - eta).powf(delta[1])
                    * half_sinc(eta).powf(delta[2]);
                for (i, k) in (lo..=hi).enumerate() {
                    ek[i] = Complex64::from_polar(f, xi * (k as f64 + shift_xi));
                    el[i] = Complex64::from_polar(1.0, eta * (k as f64 + shift_eta));
                }
                for i in 0..side {
                    let row = &mut acc[i * side..(i + 1) * side];
                    let a = ek[i];
                    for (slot, b) in row.iter_mut().zip(&el) {
                        *slot += a * b;
                    }
                }
            }
            acc
        })
        .reduce(
            || vec![Complex64::new(0.0, 0.0); side * side],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let max_imag = acc.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    (acc.into_iter().map(|z| z.re).collect(), max_imag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plancherel_on_window() {
        let (v, _) = weighted_vector(0.0, 0, QuadratureSpec::default());
        assert!((v[0] - 2.0 * PI).abs() < 1e-9, "{}", v[0]);
    }

    #[test]
    fn hexagon_area() {
        let nodes = hexagon_nodes(0, QuadratureSpec::default());
        let area: f64 = nodes.iter().map(|n| n.2).sum();
        // regular-ish hexagon: square of side 8π/3 minus two corner triangles
        let s = 2.0 * BAND_OUTER;
        assert!((area - 0.75 * s * s).abs() < 1e-12);
    }

    #[test]
    fn vector_is_real_and_decays() {
        let t = integral_vector_d2(0.7, 200, QuadratureSpec::default()).unwrap();
        assert!(t.max_imag < 1e-12);
        assert!(t.values[200].abs() < 1e-6);
        assert_eq!(t.value(-3).unwrap(), t.value(3).unwrap());
        assert!(t.value(201).is_err());
    }

    #[test]
    fn quadrant_lookup_rules() {
        let t = integral_matrix_d3(0.7, 2, QuadratureSpec::default()).unwrap();
        assert!(t.max_imag < 1e-10);
        assert_eq!(t.value2(-1, -2).unwrap(), t.value2(1, 2).unwrap());
        assert!(t.value2(1, -1).is_err());
        assert!(t.value2(3, 0).is_err());
        assert!((t.value2(1, 2).unwrap() - t.value2(2, 1).unwrap()).abs() < 1e-12);
    }
}
