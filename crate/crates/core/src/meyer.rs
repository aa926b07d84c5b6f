//! Meyer scaling function in the Fourier domain and its fractional variants.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Inner edge of the transition band of `phi_hat`.
pub const BAND_INNER: f64 = 2.0 * PI / 3.0;
/// Outer edge of the support of `phi_hat`.
pub const BAND_OUTER: f64 = 4.0 * PI / 3.0;

/// Smooth step used by the Meyer window: 0 below 0, 1 above 1.
pub fn nu(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x)
    }
}

/// Fourier transform of the Meyer scaling function.
pub fn phi_hat(xi: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::Domain(format!(
            "phi_hat at non-finite frequency {xi}"
        )));
    }
    Ok(phi_hat_unchecked(xi))
}

#[inline]
pub(crate) fn phi_hat_unchecked(xi: f64) -> f64 {
    let a = xi.abs();
    if a <= BAND_INNER {
        1.0
    } else if a >= BAND_OUTER {
        0.0
    } else {
        (0.5 * PI * nu(3.0 * a / (2.0 * PI) - 1.0)).cos()
    }
}

/// `sin(x/2)/(x/2)`, equal to 1 at the origin.
#[inline]
pub(crate) fn half_sinc(x: f64) -> f64 {
    let h = 0.5 * x;
    if h.abs() < 1e-8 {
        1.0 - h * h / 6.0
    } else {
        h.sin() / h
    }
}

/// Fourier transform of the fractional scaling function of order `delta`:
/// `((1 - e^{-iξ}) / (iξ))^delta · phi_hat(ξ)` on the principal branch.
pub fn frac_scaling_hat(delta: f64, xi: f64) -> Result<Complex64> {
    if !xi.is_finite() || !delta.is_finite() {
        return Err(Error::Domain(format!(
            "frac_scaling_hat at delta={delta}, xi={xi}"
        )));
    }
    if xi == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let window = phi_hat_unchecked(xi);
    if window == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // On the support |ξ| < 2π the sinc factor is positive, so the principal
    // power is the real power of the modulus times the phase e^{-iδξ/2}.
    let modulus = half_sinc(xi).powf(delta) * window;
    Ok(Complex64::from_polar(modulus, -0.5 * delta * xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn window_values() {
        assert_eq!(phi_hat(0.0).unwrap(), 1.0);
        assert_eq!(phi_hat(BAND_INNER).unwrap(), 1.0);
        assert_eq!(phi_hat(BAND_OUTER).unwrap(), 0.0);
        assert_eq!(phi_hat(-10.0).unwrap(), 0.0);
        assert_abs_diff_eq!(phi_hat(PI).unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(phi_hat(f64::NAN).is_err());
        assert!(phi_hat(f64::INFINITY).is_err());
    }

    #[test]
    fn partition_of_unity() {
        for i in 0..200 {
            let xi = BAND_INNER + (i as f64) * (BAND_INNER / 200.0);
            let a = phi_hat(xi).unwrap();
            let b = phi_hat(xi - 2.0 * PI).unwrap();
            assert_abs_diff_eq!(a * a + b * b, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn nu_symmetry() {
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert_abs_diff_eq!(nu(x) + nu(1.0 - x), 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn fractional_forms_agree() {
        for &delta in &[0.1, 0.35, 0.5, 0.75, 0.95, -0.3] {
            for i in 1..160 {
                let xi = -BAND_OUTER + i as f64 * (2.0 * BAND_OUTER / 160.0);
                if xi == 0.0 {
                    continue;
                }
                let z = Complex64::new(0.0, xi);
                let direct = ((Complex64::new(1.0, 0.0) - (-z).exp()) / z).powf(delta)
                    * phi_hat(xi).unwrap();
                let got = frac_scaling_hat(delta, xi).unwrap();
                assert!((got - direct).norm() < 1e-12, "delta={delta} xi={xi}");
            }
        }
        assert_eq!(
            frac_scaling_hat(0.7, 0.0).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert!(frac_scaling_hat(0.7, f64::NAN).is_err());
    }
}
