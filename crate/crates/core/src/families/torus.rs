//! Distance-to-S^k family: f(x) = dist(x, S^k) for the unit k-sphere
//! embedded in the first k+1 coordinates of R^n. For k = 1, n = 3 the level
//! surfaces are tori; for k = 0 they are pairs of spheres.

use crate::error::{Error, Result};
use crate::geometry::{unit_sphere_box, unit_sphere_jacobian, unit_sphere_point};
use crate::quadrature::{ParamBox, SurfaceChart};

use super::{CondBounds, LevelFamily};

#[derive(Debug, Clone)]
pub struct TorusDistance {
    ambient_dim: usize,
    sphere_dim: usize,
    eps: f64,
}

impl TorusDistance {
    /// `eps` is the band parameter: the family is used on the region
    /// eps < r_{k+1}(x) < 2 - eps, with levels t < 1 - eps.
    pub fn new(ambient_dim: usize, sphere_dim: usize, eps: f64) -> Result<Self> {
        if sphere_dim >= ambient_dim {
            return Err(Error::Config(format!(
                "sphere dimension {sphere_dim} must be below ambient dimension {ambient_dim}"
            )));
        }
        if !(0.0..1.0).contains(&eps) || eps == 0.0 {
            return Err(Error::Config(format!("eps = {eps} must lie in (0, 1)")));
        }
        Ok(TorusDistance {
            ambient_dim,
            sphere_dim,
            eps,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn sphere_dim(&self) -> usize {
        self.sphere_dim
    }

    /// Radial coordinate of the first k+1 coordinates.
    pub fn radial(&self, x: &[f64]) -> f64 {
        x[..=self.sphere_dim]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    fn in_band(&self, x: &[f64]) -> bool {
        let r = self.radial(x);
        r > self.eps && r < 2.0 - self.eps
    }

    /// Delta f with the band-domain check.
    pub fn laplacian(&self, x: &[f64]) -> Result<f64> {
        if !self.in_band(x) {
            return Err(Error::Domain(format!(
                "point outside band {} < r < {}",
                self.eps,
                2.0 - self.eps
            )));
        }
        let (n, k) = (self.ambient_dim as f64, self.sphere_dim as f64);
        let f = self.value(x);
        Ok((n - 1.0) / f - (k / self.radial(x)) / f)
    }

    /// G(x) = <grad(Delta f), grad f> (|grad f| = 1), with the band check.
    pub fn radial_g(&self, x: &[f64]) -> Result<f64> {
        if !self.in_band(x) {
            return Err(Error::Domain("point outside band".into()));
        }
        Ok(self.radial_derivative(x))
    }

    /// The paper-convention constants (C, B): tau(t) = C/t and the stated
    /// right-hand side B/t^2 (B as printed, negative for small eps).
    pub fn constants_cb(&self) -> (f64, f64) {
        let (n, k) = (self.ambient_dim as f64, self.sphere_dim as f64);
        let e = self.eps;
        let c = 1.0 + k * (1.0 / e - 1.0 / (2.0 - e));
        let b = k * ((2.0 * n - 3.0) * (1.0 - e) / (e * (2.0 - e)) - 2.0 / (e * e));
        (c, b)
    }
}

impl LevelFamily for TorusDistance {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn t_range(&self) -> (f64, f64) {
        (0.05, 1.0 - self.eps - 0.05)
    }

    fn label(&self) -> String {
        format!(
            "torus:n={},k={},eps={}",
            self.ambient_dim, self.sphere_dim, self.eps
        )
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r = self.radial(x);
        let tail: f64 = x[self.sphere_dim + 1..].iter().map(|v| v * v).sum();
        ((r - 1.0) * (r - 1.0) + tail).sqrt()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = self.radial(x);
        let f = self.value(x);
        let mut g = Vec::with_capacity(x.len());
        for (i, &xi) in x.iter().enumerate() {
            if i <= self.sphere_dim {
                g.push(xi * (r - 1.0) / (r * f));
            } else {
                g.push(xi / f);
            }
        }
        g
    }

    fn grad_norm(&self, _x: &[f64]) -> f64 {
        1.0
    }

    fn lap_over_gradsq(&self, x: &[f64]) -> f64 {
        let (n, k) = (self.ambient_dim as f64, self.sphere_dim as f64);
        let f = self.value(x);
        (n - 1.0) / f - (k / self.radial(x)) / f
    }

    fn radial_derivative(&self, x: &[f64]) -> f64 {
        let (n, k) = (self.ambient_dim as f64, self.sphere_dim as f64);
        let f = self.value(x);
        let r = self.radial(x);
        (-(n - 1.0) + 2.0 * k / r - k / (r * r)) / (f * f)
    }

    fn bounds(&self) -> CondBounds {
        let (n, k) = (self.ambient_dim as f64, self.sphere_dim as f64);
        let e = self.eps;
        let m = n - 1.0 - k / e;
        let big_m = n - 1.0 - k / (2.0 - e);
        let g = -(n - 1.0) + 2.0 * k / (2.0 - e) - k / (e * e);
        let big_k = k / e - (n - 2.0);
        CondBounds::new(
            Box::new(move |t| m / t),
            Box::new(move |t| big_m / t),
            Box::new(move |t| g / (t * t)),
            Box::new(move |t| big_k / t),
        )
    }

    /// Product chart: a point omega on S^k (k angles) times the normal
    /// sphere of radius t (n-k-1 angles). The normal direction has its first
    /// component along omega and the rest along the trailing coordinates:
    ///   x = (1 + t v_1) omega (+) t (v_2, ..., v_{n-k}).
    /// For k = 0 the last angle runs over [0, 4pi) in two boxes, the second
    /// box selecting the antipodal center -1 on the axis.
    fn build_chart(&self, t: f64) -> SurfaceChart {
        let n = self.ambient_dim;
        let k = self.sphere_dim;
        let normal_dim = n - k; // v lives on S^{normal_dim - 1}
        let n_beta = normal_dim - 1;
        let two_pi = 2.0 * std::f64::consts::PI;

        let split = move |u: &[f64]| -> (Vec<f64>, Vec<f64>, f64) {
            // returns (omega, v, sign) handling the k = 0 double cover
            if k == 0 {
                let mut beta = u.to_vec();
                let last = beta.len() - 1;
                let sign = if beta[last] > two_pi { -1.0 } else { 1.0 };
                if sign < 0.0 {
                    beta[last] -= two_pi;
                }
                (vec![1.0], unit_sphere_point(&beta), sign)
            } else {
                let (alpha, beta) = u.split_at(k);
                (unit_sphere_point(alpha), unit_sphere_point(beta), 1.0)
            }
        };

        let assemble = move |omega: &[f64], v: &[f64], sign: f64| -> Vec<f64> {
            let mut x = Vec::with_capacity(n);
            for w in omega {
                x.push(sign * (1.0 + t * v[0]) * w);
            }
            for vi in &v[1..] {
                x.push(t * vi);
            }
            x
        };

        let map = {
            let split = split;
            Box::new(move |u: &[f64]| {
                let (omega, v, sign) = split(u);
                assemble(&omega, &v, sign)
            })
        };

        let jac = Box::new(move |u: &[f64]| -> Vec<Vec<f64>> {
            let (omega, v, sign) = split(u);
            let mut cols = Vec::with_capacity(n - 1);
            if k > 0 {
                let (alpha, _) = u.split_at(k);
                for dcol in unit_sphere_jacobian(alpha) {
                    let mut col = vec![0.0; n];
                    for (i, d) in dcol.iter().enumerate() {
                        col[i] = (1.0 + t * v[0]) * d;
                    }
                    cols.push(col);
                }
            }
            let beta: Vec<f64> = if k == 0 {
                let mut b = u.to_vec();
                let last = b.len() - 1;
                if b[last] > two_pi {
                    b[last] -= two_pi;
                }
                b
            } else {
                u[k..].to_vec()
            };
            for dv in unit_sphere_jacobian(&beta) {
                let mut col = vec![0.0; n];
                for (i, w) in omega.iter().enumerate() {
                    col[i] = sign * t * dv[0] * w;
                }
                for (j, dvi) in dv[1..].iter().enumerate() {
                    col[k + 1 + j] = t * dvi;
                }
                cols.push(col);
            }
            cols
        });

        let mut boxes = Vec::new();
        if k == 0 {
            let (lo, hi) = unit_sphere_box(normal_dim);
            let mut lo2 = lo.clone();
            let mut hi2 = hi.clone();
            let last = n_beta - 1;
            lo2[last] += two_pi;
            hi2[last] += two_pi;
            boxes.push(ParamBox { lo, hi });
            boxes.push(ParamBox { lo: lo2, hi: hi2 });
        } else {
            let (alo, ahi) = unit_sphere_box(k + 1);
            let (blo, bhi) = unit_sphere_box(normal_dim);
            let lo = [alo, blo].concat();
            let hi = [ahi, bhi].concat();
            boxes.push(ParamBox { lo, hi });
        }
        SurfaceChart::new(n - 1, boxes, map).with_jacobian(jac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{check_gradient_fd, region_integral_coarea};
    use crate::quadrature::{surface_integral, QuadratureSpec};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn sample_band_point(tf: &TorusDistance, rng: &mut impl Rng) -> Vec<f64> {
        loop {
            let x: Vec<f64> = (0..tf.ambient_dim())
                .map(|_| rng.gen_range(-2.0..2.0))
                .collect();
            let r = tf.radial(&x);
            let f = tf.value(&x);
            if r > tf.eps() + 0.05 && r < 2.0 - tf.eps() - 0.05 && f > 0.05 && f < 0.6 {
                return x;
            }
        }
    }

    #[test]
    fn distance_matches_direct_minimization() {
        let tf = TorusDistance::new(3, 1, 0.3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let x = sample_band_point(&tf, &mut rng);
            // minimize |x - p| over p on the unit circle: coarse scan, then
            // ternary refinement around the best angle
            let dist = |a: f64| {
                ((x[0] - a.cos()).powi(2) + (x[1] - a.sin()).powi(2) + x[2] * x[2]).sqrt()
            };
            let m = 2000;
            let (mut besti, mut best) = (0, f64::INFINITY);
            for i in 0..m {
                let d = dist(2.0 * PI * i as f64 / m as f64);
                if d < best {
                    best = d;
                    besti = i;
                }
            }
            let (mut lo, mut hi) = (
                2.0 * PI * (besti as f64 - 1.0) / m as f64,
                2.0 * PI * (besti as f64 + 1.0) / m as f64,
            );
            for _ in 0..100 {
                let l = lo + (hi - lo) / 3.0;
                let r = hi - (hi - lo) / 3.0;
                if dist(l) < dist(r) {
                    hi = r;
                } else {
                    lo = l;
                }
            }
            best = dist(0.5 * (lo + hi));
            assert!((tf.value(&x) - best).abs() < 1e-10);
        }
    }

    #[test]
    fn unit_gradient_and_fd() {
        let tf = TorusDistance::new(3, 1, 0.3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let x = sample_band_point(&tf, &mut rng);
            assert!((crate::geometry::norm(&tf.gradient(&x)) - 1.0).abs() < 1e-12);
            check_gradient_fd(&tf, &x, 1e-5);
        }
    }

    #[test]
    fn laplacian_values_and_fd() {
        let tf = TorusDistance::new(3, 1, 0.3).unwrap();
        // n=3, k=1, x=(1.5,0,0): r = 1.5, f = 0.5, lap = (2 - 2/3)/0.5 = 8/3
        let lap = tf.laplacian(&[1.5, 0.0, 0.0]).unwrap();
        assert!((lap - 8.0 / 3.0).abs() < 1e-13);

        // k=0, n=2: planar distance to the nearest of (+-1, 0), lap = 1/f
        let t0 = TorusDistance::new(2, 0, 0.3).unwrap();
        let lap = t0.laplacian(&[1.4, 0.0]).unwrap();
        assert!((lap - 2.5).abs() < 1e-13);

        // FD Laplacian oracle
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let x = sample_band_point(&tf, &mut rng);
            let h = 1e-4;
            let mut fd = 0.0;
            for j in 0..3 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                fd += (tf.value(&xp) - 2.0 * tf.value(&x) + tf.value(&xm)) / (h * h);
            }
            let an = tf.laplacian(&x).unwrap();
            assert!((fd - an).abs() <= 1e-5 * an.abs().max(1.0), "{fd} vs {an}");
        }

        assert!(tf.laplacian(&[0.1, 0.0, 0.0]).is_err());
    }

    #[test]
    fn constants_cb_values() {
        let (c, b) = TorusDistance::new(3, 1, 0.3).unwrap().constants_cb();
        assert!((c - 3.7450980392156863).abs() < 1e-10);
        assert!((b + 18.104575163398692).abs() < 1e-5);

        // every k-proportional term vanishes for two points
        let (c, b) = TorusDistance::new(2, 0, 0.3).unwrap().constants_cb();
        assert!((c - 1.0).abs() < 1e-14 && b.abs() < 1e-14);
    }

    #[test]
    fn bounds_substitution_and_sandwich() {
        let tf = TorusDistance::new(3, 1, 0.3).unwrap();
        let b = tf.bounds();
        // m(0.5) = (2 - 10/3)/0.5 = -8/3
        assert!((b.m(0.5) + 8.0 / 3.0).abs() < 1e-13);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(24);
        for _ in 0..500 {
            let x = sample_band_point(&tf, &mut rng);
            let t = tf.value(&x);
            let q = tf.lap_over_gradsq(&x);
            assert!(q >= b.m(t) - 1e-9 && q <= b.big_m(t) + 1e-9);
            assert!(tf.radial_derivative(&x) >= b.g(t) - 1e-9);
        }
        // K + M >= 0 across the valid range
        let (lo, hi) = tf.t_range();
        for i in 0..20 {
            let t = lo + (hi - lo) * i as f64 / 19.0;
            assert!(b.tau(t) >= 0.0);
        }
    }

    #[test]
    fn torus_chart_level_and_area() {
        let tf = TorusDistance::new(3, 1, 0.3).unwrap();
        let chart = tf.chart_at(0.5).unwrap();
        // nodes on the level set
        for u in [[0.3, 1.0], [2.0, 4.0], [5.5, 0.2]] {
            let x = chart.point(&u);
            assert!((tf.value(&x) - 0.5).abs() < 1e-12);
        }
        // torus area 4 pi^2 R r with R = 1, r = 0.5
        let (area, _) = surface_integral(&chart, &|_x| 1.0, &QuadratureSpec::default()).unwrap();
        assert!((area - 4.0 * PI * PI * 0.5).abs() < 1e-8, "{area}");
    }

    #[test]
    fn two_point_chart_k0() {
        let tf = TorusDistance::new(2, 0, 0.3).unwrap();
        let chart = tf.chart_at(0.4).unwrap();
        assert_eq!(chart.boxes.len(), 2);
        // both circles of radius 0.4 around (+-1, 0): total length 2 * 2 pi 0.4
        let (len, _) = surface_integral(&chart, &|_x| 1.0, &QuadratureSpec::default()).unwrap();
        assert!((len - 2.0 * 2.0 * PI * 0.4).abs() < 1e-9, "{len}");
        // second box lands near the antipodal center
        let x = chart.point(&[2.0 * PI + 0.1]);
        assert!(x[0] < 0.0);
        assert!((tf.value(&x) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn coarea_solid_torus_volume() {
        let tf = TorusDistance::new(3, 1, 0.3).unwrap();
        // Pappus: 2 pi^2 R r^2 with r = 0.5
        let v = region_integral_coarea(&tf, &|_x| 1.0, 0.5, &QuadratureSpec::default()).unwrap();
        assert!((v - 2.0 * PI * PI * 0.25).abs() < 1e-8, "{v}");
    }
}
