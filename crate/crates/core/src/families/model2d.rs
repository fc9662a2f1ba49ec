//! Geodesic spheres in the 2D constant-curvature model spaces, handled
//! intrinsically in polar coordinates (t, theta): the area element of the
//! circle of radius t is sin_K(t), so
//!   H(t) = int_0^{2pi} h(t, theta)^2 sin_K(t) dtheta
//! and H'(t) has the analytic form used by `dnorm_h`.

use std::f64::consts::PI;

use crate::comparison::{cos_k, cot_k, sin_k, Curvature};
use crate::error::{Error, Result};
use crate::harmonics::ModelHarmonic;
use crate::quadrature::integrate_1d;

#[derive(Debug, Clone, Copy)]
pub struct ModelSpace2D {
    curvature: Curvature,
}

impl ModelSpace2D {
    pub fn new(curvature: f64) -> Self {
        ModelSpace2D {
            curvature: Curvature(curvature),
        }
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    pub fn label(&self) -> String {
        format!("model2d:K={}", self.curvature.0)
    }

    /// Default level range for sweeps. Positive curvature caps at the
    /// quarter period pi / (2 sqrt K), where cot_K changes sign.
    pub fn t_range(&self) -> (f64, f64) {
        let k = self.curvature.0;
        let hi = if k > 0.0 {
            (0.5 * PI / k.sqrt()).min(3.0)
        } else {
            3.0
        };
        (0.05, hi)
    }

    fn check_radius(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Err(Error::Domain(format!("geodesic radius t = {t} <= 0")));
        }
        let s = sin_k(self.curvature, t);
        if s <= 0.0 {
            return Err(Error::Domain(format!(
                "geodesic circle degenerates at t = {t} for K = {}",
                self.curvature.0
            )));
        }
        Ok(s)
    }

    /// Area element sin_K(t) of the circle of radius t.
    pub fn area_element(&self, t: f64) -> Result<f64> {
        self.check_radius(t)
    }

    pub fn circumference(&self, t: f64) -> Result<f64> {
        Ok(2.0 * PI * self.check_radius(t)?)
    }

    /// Laplacian of the distance function at radius t: cot_K(t).
    pub fn distance_laplacian(&self, t: f64) -> Result<f64> {
        self.check_radius(t)?;
        cot_k(self.curvature, t)
    }

    /// H(t) for a model harmonic.
    pub fn norm_h(&self, h: &ModelHarmonic, t: f64, degree: usize) -> Result<f64> {
        let s = self.check_radius(t)?;
        let integrand = |theta: f64| {
            let v = h.value(t, theta).expect("t > 0 validated");
            v * v * s
        };
        Ok(integrate_1d(integrand, 0.0, 2.0 * PI, degree))
    }

    /// Analytic H'(t) = int (2 h h_t sin_K + h^2 cos_K) dtheta.
    pub fn dnorm_h(&self, h: &ModelHarmonic, t: f64, degree: usize) -> Result<f64> {
        let s = self.check_radius(t)?;
        let c = cos_k(self.curvature, t);
        let integrand = |theta: f64| {
            let v = h.value(t, theta).expect("t > 0 validated");
            let vt = h.dt(t, theta).expect("t > 0 validated");
            2.0 * v * vt * s + v * v * c
        };
        Ok(integrate_1d(integrand, 0.0, 2.0 * PI, degree))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_range_caps() {
        let (lo, hi) = ModelSpace2D::new(1.0).t_range();
        assert_eq!(lo, 0.05);
        assert!((hi - 0.5 * PI).abs() < 1e-15);
        assert_eq!(ModelSpace2D::new(-1.0).t_range().1, 3.0);
        // weak positive curvature: the cap 3.0 wins
        assert_eq!(ModelSpace2D::new(0.01).t_range().1, 3.0);
    }

    #[test]
    fn constant_harmonic_norms() {
        // K = 0, h = a: H = 2 pi a^2 t, H' = 2 pi a^2
        let space = ModelSpace2D::new(0.0);
        let h = ModelHarmonic::new(Curvature(0.0), 0, 1.5, 0.0);
        let val = space.norm_h(&h, 0.8, 32).unwrap();
        assert!((val - 2.0 * PI * 2.25 * 0.8).abs() < 1e-12);
        let dval = space.dnorm_h(&h, 0.8, 32).unwrap();
        assert!((dval - 2.0 * PI * 2.25).abs() < 1e-12);

        // K = 1, h = 1: H = 2 pi sin t, evaluable past the quarter period
        let sphere = ModelSpace2D::new(1.0);
        let one = ModelHarmonic::new(Curvature(1.0), 0, 1.0, 0.0);
        let val = sphere.norm_h(&one, 2.0, 32).unwrap();
        assert!((val - 2.0 * PI * (2.0f64).sin()).abs() < 1e-12);
        // but not past the zero of sin_K
        assert!(sphere.norm_h(&one, 3.5, 32).is_err());
    }

    #[test]
    fn degree_one_sphere_harmonic_norm() {
        // K = 1, k = 1, a = 1: H(t) = pi tan(t/2)^2 sin t
        let space = ModelSpace2D::new(1.0);
        let h = ModelHarmonic::new(Curvature(1.0), 1, 1.0, 0.0);
        let t = 0.8f64;
        let expected = PI * (t / 2.0).tan().powi(2) * t.sin();
        assert!((space.norm_h(&h, t, 48).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn dnorm_matches_finite_differences() {
        for &(curv, k) in &[(1.0, 1u32), (-1.0, 2), (0.0, 3), (0.5, 2)] {
            let space = ModelSpace2D::new(curv);
            let h = ModelHarmonic::new(Curvature(curv), k, 0.7, -0.3);
            for &t in &[0.4, 0.9, 1.3] {
                let step = 1e-5;
                let fd = (space.norm_h(&h, t + step, 48).unwrap()
                    - space.norm_h(&h, t - step, 48).unwrap())
                    / (2.0 * step);
                let an = space.dnorm_h(&h, t, 48).unwrap();
                assert!(
                    (fd - an).abs() < 1e-8 * an.abs().max(1.0),
                    "K={curv} k={k} t={t}: {fd} vs {an}"
                );
            }
        }
    }

    #[test]
    fn log_derivative_identity_is_sharp() {
        // For every model harmonic, (log H)'' + cot_K (log H)' + K = 0.
        for &(curv, k) in &[(1.0, 0u32), (1.0, 1), (1.0, 3), (-1.0, 1), (-1.0, 2), (0.0, 2)] {
            let space = ModelSpace2D::new(curv);
            let h = ModelHarmonic::new(Curvature(curv), k, 1.0, 0.5);
            for &t in &[0.3, 0.7, 1.1] {
                let logh = |s: f64| space.norm_h(&h, s, 48).unwrap().ln();
                let step = 1e-3 * t;
                let d2 = (-logh(t + 2.0 * step) + 16.0 * logh(t + step) - 30.0 * logh(t)
                    + 16.0 * logh(t - step)
                    - logh(t - 2.0 * step))
                    / (12.0 * step * step);
                let d1 = space.dnorm_h(&h, t, 48).unwrap() / space.norm_h(&h, t, 48).unwrap();
                let resid = d2 + cot_k(Curvature(curv), t).unwrap() * d1 + curv;
                assert!(resid.abs() < 1e-7, "K={curv} k={k} t={t}: resid {resid}");
            }
        }
    }
}
