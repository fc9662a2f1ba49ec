//! Ellipsoids with constant eccentricity: the 1-homogeneous family
//! f(x) = |D^{-1} x| for a diagonal dilation matrix D, including the round
//! sphere as the equal-axes case.

use crate::error::{Error, Result};
use crate::geometry::{unit_sphere_box, unit_sphere_jacobian, unit_sphere_point};
use crate::quadrature::{ParamBox, SurfaceChart};

use super::{CondBounds, LevelFamily};

/// f(x) = |D^{-1} x| with D = diag(a_1, ..., a_n), 0 < a_1 <= ... <= a_n.
///
/// Level surfaces are ellipsoids t * D(S^{n-1}); equal axes give the radial
/// family of round spheres.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    semi_axes: Vec<f64>,
}

impl Ellipsoid {
    pub fn new(semi_axes: Vec<f64>) -> Result<Self> {
        if semi_axes.len() < 2 {
            return Err(Error::Config("ellipsoid needs dimension >= 2".into()));
        }
        if semi_axes.iter().any(|&a| a <= 0.0) {
            return Err(Error::Config("semi-axes must be positive".into()));
        }
        if semi_axes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config("semi-axes must be ascending".into()));
        }
        Ok(Ellipsoid { semi_axes })
    }

    /// The radial family f = |x| in dimension n.
    pub fn sphere(n: usize) -> Self {
        Ellipsoid {
            semi_axes: vec![1.0; n],
        }
    }

    pub fn semi_axes(&self) -> &[f64] {
        &self.semi_axes
    }

    pub fn is_round(&self) -> bool {
        let a0 = self.semi_axes[0];
        self.semi_axes.iter().all(|&a| a == a0)
    }

    fn tr_d2(&self) -> f64 {
        self.semi_axes.iter().map(|a| 1.0 / (a * a)).sum()
    }

    fn a_min(&self) -> f64 {
        self.semi_axes[0]
    }

    fn a_max(&self) -> f64 {
        *self.semi_axes.last().unwrap()
    }

    /// |D^{-k} x|^2.
    fn dkx_sq(&self, x: &[f64], k: i32) -> f64 {
        x.iter()
            .zip(&self.semi_axes)
            .map(|(xi, a)| {
                let d = xi / a.powi(k);
                d * d
            })
            .sum()
    }

    /// The convexity constants (A, B) of the integrated inequality, in the
    /// printed sign convention where the right-hand side is B / t^2
    /// (B is negative away from the round case).
    pub fn constants_ab(&self) -> (f64, f64) {
        let (a1, an, tr) = (self.a_min(), self.a_max(), self.tr_d2());
        let r = an * an / (a1 * a1);
        let a = 1.0 + 4.0 * (r - 1.0 / r) + (an * an - a1 * a1) * tr;
        let b = 4.0 * (1.0 / r - r)
            + (3.0 * a1 * a1 + 3.0 * an * an
                - 2.0 * an.powi(4) / (a1 * a1)
                - 4.0 * a1.powi(4) / (an * an))
                * tr
            + a1 * a1 * (an * an - a1 * a1) * tr * tr;
        (a, b)
    }
}

impl LevelFamily for Ellipsoid {
    fn ambient_dim(&self) -> usize {
        self.semi_axes.len()
    }

    fn t_range(&self) -> (f64, f64) {
        (0.05, 10.0)
    }

    fn label(&self) -> String {
        if self.is_round() && self.a_min() == 1.0 {
            format!("radial:n={}", self.ambient_dim())
        } else {
            let axes: Vec<String> = self.semi_axes.iter().map(|a| a.to_string()).collect();
            format!("ellipsoid:a={}", axes.join(","))
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.dkx_sq(x, 1).sqrt()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let f = self.value(x);
        x.iter()
            .zip(&self.semi_axes)
            .map(|(xi, a)| xi / (a * a) / f)
            .collect()
    }

    fn grad_norm(&self, x: &[f64]) -> f64 {
        self.dkx_sq(x, 2).sqrt() / self.value(x)
    }

    fn lap_over_gradsq(&self, x: &[f64]) -> f64 {
        let f = self.value(x);
        let d2 = self.dkx_sq(x, 2);
        // Delta f = tr(D^-2)/f - |D^-2 x|^2 / f^3; |grad f|^2 = |D^-2 x|^2 / f^2
        let lap = self.tr_d2() / f - d2 / f.powi(3);
        lap * f * f / d2
    }

    fn radial_derivative(&self, x: &[f64]) -> f64 {
        let f = self.value(x);
        let d2 = self.dkx_sq(x, 2);
        let d3 = self.dkx_sq(x, 3);
        let tr = self.tr_d2();
        1.0 / (f * f) + tr / d2 - 2.0 * tr * f * f * d3 / d2.powi(3)
    }

    fn bounds(&self) -> CondBounds {
        let (a1, an, tr) = (self.a_min(), self.a_max(), self.tr_d2());
        let c1 = a1 * a1 * tr - 1.0;
        let c2 = an * an * tr - 1.0;
        let c3 = 1.0 + a1 * a1 * tr - 2.0 * an.powi(4) / (a1 * a1) * tr;
        let c4 = 2.0 + 4.0 * (an * an / (a1 * a1) - a1 * a1 / (an * an)) - a1 * a1 * tr;
        CondBounds::new(
            Box::new(move |t| c1 / t),
            Box::new(move |t| c2 / t),
            Box::new(move |t| c3 / (t * t)),
            Box::new(move |t| c4 / t),
        )
    }

    fn build_chart(&self, t: f64) -> SurfaceChart {
        let n = self.ambient_dim();
        let axes = self.semi_axes.clone();
        let axes_jac = axes.clone();
        let (lo, hi) = unit_sphere_box(n);
        SurfaceChart::new(
            n - 1,
            vec![ParamBox { lo, hi }],
            Box::new(move |u: &[f64]| {
                unit_sphere_point(u)
                    .iter()
                    .zip(&axes)
                    .map(|(ui, a)| t * a * ui)
                    .collect()
            }),
        )
        .with_jacobian(Box::new(move |u: &[f64]| {
            unit_sphere_jacobian(u)
                .into_iter()
                .map(|col| {
                    col.iter()
                        .zip(&axes_jac)
                        .map(|(ci, a)| t * a * ci)
                        .collect()
                })
                .collect()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::check_gradient_fd;
    use crate::quadrature::{surface_integral, QuadratureSpec};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn random_surface_point(e: &Ellipsoid, t: f64, rng: &mut impl Rng) -> Vec<f64> {
        // random direction scaled onto f = t
        let dir: Vec<f64> = (0..e.ambient_dim())
            .map(|_| rng.gen_range(-1.0..1.0f64))
            .collect();
        let f = e.value(&dir);
        dir.iter().map(|d| d * t / f).collect()
    }

    #[test]
    fn unit_sphere_bounds() {
        let e = Ellipsoid::sphere(3);
        let b = e.bounds();
        for &t in &[0.5, 1.0, 2.0] {
            assert!((b.m(t) - 2.0 / t).abs() < 1e-14);
            assert!((b.big_m(t) - 2.0 / t).abs() < 1e-14);
            assert!((b.g(t) + 2.0 / (t * t)).abs() < 1e-14);
            assert!((b.big_k(t) + 1.0 / t).abs() < 1e-14);
            // tau = 1/t, rho = 0 for the radial family
            assert!((b.tau(t) - 1.0 / t).abs() < 1e-14);
            assert!(b.rho(t).abs() < 1e-13);
        }
    }

    #[test]
    fn ellipse_bounds_substitution() {
        let e = Ellipsoid::new(vec![1.0, 2.0]).unwrap();
        let b = e.bounds();
        // tr(D^-2) = 1.25
        assert!((b.m(1.0) - 0.25).abs() < 1e-14);
        assert!((b.big_m(1.0) - 4.0).abs() < 1e-14);
        assert!((b.m(2.0) - 0.125).abs() < 1e-14);
    }

    #[test]
    fn constants_ab_values() {
        // all difference terms vanish for the round sphere
        for n in [2usize, 3, 5] {
            let (a, b) = Ellipsoid::sphere(n).constants_ab();
            assert!((a - 1.0).abs() < 1e-14);
            assert!(b.abs() < 1e-13);
        }
        let (a, b) = Ellipsoid::new(vec![1.0, 2.0]).unwrap().constants_ab();
        assert!((a - 19.75).abs() < 1e-12);
        assert!((b + 32.8125).abs() < 1e-12);
    }

    #[test]
    fn constants_ab_match_condition_constants() {
        // independent route: A = C2 + C4 and B = C3 + C1 C2 + C1 C4, with the
        // C_i read off the bounds at t = 1
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let mut axes: Vec<f64> = (0..3).map(|_| rng.gen_range(0.5..3.0)).collect();
            axes.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let e = Ellipsoid::new(axes).unwrap();
            let b = e.bounds();
            let (c1, c2, c3, c4) = (b.m(1.0), b.big_m(1.0), b.g(1.0), b.big_k(1.0));
            let (av, bv) = e.constants_ab();
            assert!((av - (c2 + c4)).abs() <= 1e-10 * av.abs().max(1.0));
            assert!((bv - (c3 + c1 * c2 + c1 * c4)).abs() <= 1e-10 * bv.abs().max(1.0));
            assert!(av >= 1.0 - 1e-12, "A = {av} < 1");
        }
    }

    #[test]
    fn gradient_and_laplacian_match_finite_differences() {
        let e = Ellipsoid::new(vec![1.0, 1.5, 2.0]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let x: Vec<f64> = (0..3)
                .map(|_| {
                    let v: f64 = rng.gen_range(-2.0..2.0);
                    if v.abs() < 0.2 { v + 0.5 } else { v }
                })
                .collect();
            check_gradient_fd(&e, &x, 1e-6);
            // FD Laplacian of f against the analytic ratio
            let h = 1e-4;
            let mut lap = 0.0;
            for j in 0..3 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                lap += (e.value(&xp) - 2.0 * e.value(&x) + e.value(&xm)) / (h * h);
            }
            let g2 = e.grad_norm(&x).powi(2);
            let analytic = e.lap_over_gradsq(&x) * g2;
            assert!((lap - analytic).abs() <= 1e-5 * analytic.abs().max(1.0));
        }
    }

    #[test]
    fn radial_derivative_matches_fd_default() {
        // analytic override vs the trait's finite-difference fallback
        struct Fd(Ellipsoid);
        impl LevelFamily for Fd {
            fn ambient_dim(&self) -> usize {
                self.0.ambient_dim()
            }
            fn t_range(&self) -> (f64, f64) {
                self.0.t_range()
            }
            fn label(&self) -> String {
                "fd".into()
            }
            fn value(&self, x: &[f64]) -> f64 {
                self.0.value(x)
            }
            fn gradient(&self, x: &[f64]) -> Vec<f64> {
                self.0.gradient(x)
            }
            fn lap_over_gradsq(&self, x: &[f64]) -> f64 {
                self.0.lap_over_gradsq(x)
            }
            fn bounds(&self) -> CondBounds {
                self.0.bounds()
            }
            fn build_chart(&self, t: f64) -> SurfaceChart {
                self.0.build_chart(t)
            }
        }
        let e = Ellipsoid::new(vec![1.0, 2.0]).unwrap();
        let fd = Fd(e.clone());
        for x in [[0.7, 1.3], [-1.2, 0.4], [0.3, -0.9]] {
            let a = e.radial_derivative(&x);
            let b = fd.radial_derivative(&x);
            assert!((a - b).abs() <= 1e-5 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn one_homogeneity() {
        let e = Ellipsoid::new(vec![1.0, 1.5, 2.0]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            if e.value(&x) < 1e-3 {
                continue;
            }
            for &s in &[0.5, 2.0] {
                let sx: Vec<f64> = x.iter().map(|v| v * s).collect();
                assert!((e.value(&sx) - s * e.value(&x)).abs() < 1e-12 * (1.0 + e.value(&x)));
                // derivative homogeneity: |grad f|(sx) = |grad f|(x),
                // Delta f(sx) = Delta f(x)/s
                let gn = e.grad_norm(&x);
                assert!((e.grad_norm(&sx) - gn).abs() <= 1e-8 * gn);
                let lap = e.lap_over_gradsq(&x) * gn * gn;
                let lap_s = e.lap_over_gradsq(&sx) * e.grad_norm(&sx).powi(2);
                assert!((lap_s - lap / s).abs() <= 1e-8 * (lap / s).abs().max(1e-8));
            }
        }
    }

    #[test]
    fn bounds_sandwich_on_surface() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for e in [
            Ellipsoid::new(vec![1.0, 2.0]).unwrap(),
            Ellipsoid::new(vec![1.0, 1.5, 2.0]).unwrap(),
        ] {
            let b = e.bounds();
            for &t in &[0.5, 1.0, 2.0] {
                for _ in 0..1000 {
                    let x = random_surface_point(&e, t, &mut rng);
                    let q = e.lap_over_gradsq(&x);
                    assert!(q >= b.m(t) - 1e-9 && q <= b.big_m(t) + 1e-9);
                    assert!(e.radial_derivative(&x) >= b.g(t) - 1e-9);
                }
                assert!(b.tau(t) >= 0.0, "K + M < 0 at t = {t}");
            }
        }
    }

    #[test]
    fn chart_levels_and_areas() {
        let spec = QuadratureSpec::default();
        // ellipse perimeter, a = (1, 2), t = 1: complete elliptic integral
        let e = Ellipsoid::new(vec![1.0, 2.0]).unwrap();
        let chart = e.chart_at(1.0).unwrap();
        let (len, _) = surface_integral(&chart, &|_x| 1.0, &spec).unwrap();
        assert!((len - 9.688448220547675).abs() < 1e-8, "perimeter {len}");

        // unit sphere area
        let s = Ellipsoid::sphere(3);
        let (area, _) = surface_integral(&s.chart_at(1.0).unwrap(), &|_x| 1.0, &spec).unwrap();
        assert!((area - 4.0 * PI).abs() < 1e-8);

        // chart nodes sit on the level set
        let chart = e.chart_at(0.7).unwrap();
        for &u in &[0.1, 1.0, 2.5, 4.0, 6.0] {
            let x = chart.point(&[u]);
            assert!((e.value(&x) - 0.7).abs() <= 1e-12);
        }

        // out-of-range level is rejected
        assert!(e.chart_at(11.0).is_err());
        assert!(e.chart_at(0.0).is_err());
    }

    #[test]
    fn coarea_volumes() {
        use crate::families::region_integral_coarea;
        let spec = QuadratureSpec::default();
        // ball volume: f = |x| in R^3, t = 1
        let s = Ellipsoid::sphere(3);
        let v = region_integral_coarea(&s, &|_x| 1.0, 1.0, &spec).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-8, "{v}");
        // ellipse area pi * a * b
        let e = Ellipsoid::new(vec![1.0, 2.0]).unwrap();
        let v = region_integral_coarea(&e, &|_x| 1.0, 1.0, &spec).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-8, "{v}");
    }
}
