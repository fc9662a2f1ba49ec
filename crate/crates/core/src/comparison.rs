//! Constant-curvature model trigonometric functions.
//!
//! `sin_k`, `cos_k`, `cot_k` and `tan_k` interpolate between circular
//! (positive curvature), linear (flat) and hyperbolic (negative curvature)
//! behaviour. They drive the geodesic-sphere bounds and the 2D model-space
//! family.

use crate::error::{Error, Result};

/// Sectional curvature parameter. The sign selects the trig branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature(pub f64);

impl Curvature {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// sin(sqrt(K) t)/sqrt(K) for K > 0, t for K = 0, sinh(sqrt(-K) t)/sqrt(-K)
/// for K < 0.
pub fn sin_k(curv: Curvature, t: f64) -> f64 {
    let k = curv.0;
    if k > 0.0 {
        let s = k.sqrt();
        (s * t).sin() / s
    } else if k < 0.0 {
        let s = (-k).sqrt();
        (s * t).sinh() / s
    } else {
        t
    }
}

/// Derivative of `sin_k` in `t`.
pub fn cos_k(curv: Curvature, t: f64) -> f64 {
    let k = curv.0;
    if k > 0.0 {
        (k.sqrt() * t).cos()
    } else if k < 0.0 {
        ((-k).sqrt() * t).cosh()
    } else {
        1.0
    }
}

/// Logarithmic derivative of `sin_k`: cos_k / sin_k.
///
/// Diverges like 1/t as t -> 0+; a nonpositive argument or a zero of
/// `sin_k` is a reported domain error.
pub fn cot_k(curv: Curvature, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::Domain(format!("cot_k requires t > 0, got {t}")));
    }
    let s = sin_k(curv, t);
    // the zeros of sin(sqrt(K) t) are not exactly representable, so treat a
    // relatively tiny value as on the zero
    if s.abs() <= 1e-12 * t {
        return Err(Error::Domain(format!(
            "cot_k undefined at zero of sin_k (K = {}, t = {t})",
            curv.0
        )));
    }
    Ok(cos_k(curv, t) / s)
}

/// Reciprocal of `cot_k`.
pub fn tan_k(curv: Curvature, t: f64) -> Result<f64> {
    let c = cot_k(curv, t)?;
    if c == 0.0 {
        return Err(Error::Domain(format!(
            "tan_k undefined at zero of cos_k (K = {}, t = {t})",
            curv.0
        )));
    }
    Ok(1.0 / c)
}

/// tan_k evaluated at t/2, the radial factor of the model-space harmonics.
pub fn tan_k_half(curv: Curvature, t: f64) -> Result<f64> {
    tan_k(curv, t / 2.0)
}
