//! Piecewise-linear sample paths through the knots `(m·2^{−J} + 2^{−aJ}, s_{m,J})`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where a path came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Digest of the generating configuration with its seed cleared.
    pub config_digest: String,
    pub seed: u64,
}

/// Knot values of one simulated path, linearly interpolated from `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub scale: u32,
    /// Index of the first knot.
    pub m0: i64,
    /// Time of the first knot, `m0·2^{−J} + 2^{−aJ}`.
    pub first_knot: f64,
    /// Knot spacing `2^{−J}`.
    pub spacing: f64,
    /// `s_{m,J}` for `m = m0, m0 + 1, …`.
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

impl SamplePath {
    pub fn knot_count(&self) -> usize {
        self.values.len()
    }

    pub fn knot_time(&self, i: usize) -> f64 {
        self.first_knot + i as f64 * self.spacing
    }

    pub fn last_knot(&self) -> f64 {
        self.knot_time(self.values.len() - 1)
    }

    /// Origin followed by all knots, as `(times, values)`.
    pub fn points(&self) -> (Vec<f64>, Vec<f64>) {
        let mut t = Vec::with_capacity(self.values.len() + 1);
        let mut v = Vec::with_capacity(self.values.len() + 1);
        t.push(0.0);
        v.push(0.0);
        for (i, &s) in self.values.iter().enumerate() {
            t.push(self.knot_time(i));
            v.push(s);
        }
        (t, v)
    }

    fn check(&self, t: f64) -> Result<f64> {
        let last = self.last_knot();
        if !(t >= 0.0 && t <= last + 1e-12 * last.max(1.0)) {
            return Err(Error::Domain(format!("time {t} outside [0, {last}]")));
        }
        Ok(t.min(last))
    }

    /// Interpolates on segment `i` (`0` is the origin segment) at time `t`.
    fn on_segment(&self, i: usize, t: f64) -> f64 {
        if i == 0 {
            return self.values[0] * t / self.first_knot;
        }
        let (t0, v0, v1) = (self.knot_time(i - 1), self.values[i - 1], self.values[i]);
        let w = (t - t0) / self.spacing;
        if w == 0.0 {
            v0
        } else if w == 1.0 {
            v1
        } else {
            v0 + w * (v1 - v0)
        }
    }

    /// Segment containing `t` by bisection over knot times.
    fn segment_of(&self, t: f64) -> usize {
        if t <= self.first_knot {
            return 0;
        }
        let (mut lo, mut hi) = (0usize, self.values.len() - 1);
        if t >= self.knot_time(hi) {
            return hi;
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.knot_time(mid) <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo + 1
    }

    /// Value at a single time by bisection.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        Ok(self.on_segment(self.segment_of(t), t))
    }
}

/// Evaluates `path` at `times`; non-decreasing queries are answered in one
/// forward sweep, others by bisection.
pub fn evaluate_path(path: &SamplePath, times: &[f64]) -> Result<Vec<f64>> {
    let checked: Vec<f64> = times
        .iter()
        .map(|&t| path.check(t))
        .collect::<Result<_>>()?;
    if !checked.windows(2).all(|w| w[0] <= w[1]) {
        return Ok(checked
            .iter()
            .map(|&t| path.on_segment(path.segment_of(t), t))
            .collect());
    }
    let mut seg = 0usize;
    let last = path.values.len() - 1;
    Ok(checked
        .iter()
        .map(|&t| {
            // Advance while the current segment ends before t.
            while seg <= last
                && (if seg == 0 {
                    path.first_knot
                } else {
                    path.knot_time(seg)
                }) < t
            {
                seg += 1;
            }
            path.on_segment(seg.min(last), t)
        })
        .collect())
}
