//! Catalog of exactly-harmonic test functions with analytic gradients, plus
//! the Laplace-eigenfunction extension used by the eigenvalue convexity
//! check.

use crate::comparison::{tan_k_half, Curvature};
use crate::error::{Error, Result};

type ValueFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A scalar field with analytic gradient.
///
/// Constructors in this module produce harmonic functions; the one exception
/// is [`eigen_extension_integrand`], whose field satisfies the eigenvalue
/// equation instead (the engine only relies on the growth identity, which
/// holds for arbitrary fields).
pub struct HarmonicFn {
    pub dim: usize,
    pub label: String,
    /// Homogeneity degree, when the function is homogeneous.
    pub degree: Option<u32>,
    value: ValueFn,
    gradient: GradFn,
}

impl HarmonicFn {
    pub fn new(dim: usize, label: impl Into<String>, value: ValueFn, gradient: GradFn) -> Self {
        HarmonicFn {
            dim,
            label: label.into(),
            degree: None,
            value,
            gradient,
        }
    }

    pub fn with_degree(mut self, k: u32) -> Self {
        self.degree = Some(k);
        self
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.gradient)(x)
    }

    /// Finite-difference Laplacian, used by the harmonicity certificate.
    pub fn fd_laplacian(&self, x: &[f64], h: f64) -> f64 {
        let mut lap = 0.0;
        let center = self.value(x);
        let mut y = x.to_vec();
        for j in 0..self.dim {
            y[j] = x[j] + h;
            let p = self.value(&y);
            y[j] = x[j] - h;
            let m = self.value(&y);
            y[j] = x[j];
            lap += (p - 2.0 * center + m) / (h * h);
        }
        lap
    }
}

/// Real/imaginary parts of (x + iy)^k and of (x + iy)^{k-1}, for the planar
/// homogeneous harmonics and their gradients.
fn complex_pow(x: f64, y: f64, k: u32) -> (f64, f64) {
    let mut re = 1.0;
    let mut im = 0.0;
    for _ in 0..k {
        let nre = re * x - im * y;
        im = re * y + im * x;
        re = nre;
    }
    (re, im)
}

/// Planar homogeneous harmonic t^k (a cos k\theta + b sin k\theta) in
/// Cartesian coordinates: a Re z^k + b Im z^k.
pub fn planar_homogeneous(k: u32, a: f64, b: f64) -> HarmonicFn {
    let label = format!("planar:k={k},a={a},b={b}");
    let value = Box::new(move |x: &[f64]| {
        let (re, im) = complex_pow(x[0], x[1], k);
        a * re + b * im
    });
    let gradient = Box::new(move |x: &[f64]| {
        if k == 0 {
            return vec![0.0, 0.0];
        }
        let (re, im) = complex_pow(x[0], x[1], k - 1);
        let kf = k as f64;
        vec![kf * (a * re + b * im), kf * (-a * im + b * re)]
    });
    HarmonicFn::new(2, label, value, gradient).with_degree(k)
}

fn coordinate(n: usize, i: usize) -> HarmonicFn {
    HarmonicFn::new(
        n,
        format!("poly:x{}", i + 1),
        Box::new(move |x: &[f64]| x[i]),
        Box::new(move |x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            g[i] = 1.0;
            g
        }),
    )
    .with_degree(1)
}

fn product(n: usize, i: usize, j: usize) -> HarmonicFn {
    HarmonicFn::new(
        n,
        format!("poly:x{}x{}", i + 1, j + 1),
        Box::new(move |x: &[f64]| x[i] * x[j]),
        Box::new(move |x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            g[i] = x[j];
            g[j] = x[i];
            g
        }),
    )
    .with_degree(2)
}

fn square_difference(n: usize, i: usize, j: usize) -> HarmonicFn {
    HarmonicFn::new(
        n,
        format!("poly:x{}^2-x{}^2", i + 1, j + 1),
        Box::new(move |x: &[f64]| x[i] * x[i] - x[j] * x[j]),
        Box::new(move |x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            g[i] = 2.0 * x[i];
            g[j] = -2.0 * x[j];
            g
        }),
    )
    .with_degree(2)
}

/// x_i^3 - 3 x_i x_j^2, harmonic for i != j.
fn cubic(n: usize, i: usize, j: usize) -> HarmonicFn {
    HarmonicFn::new(
        n,
        format!("poly:x{}^3-3x{}x{}^2", i + 1, i + 1, j + 1),
        Box::new(move |x: &[f64]| x[i].powi(3) - 3.0 * x[i] * x[j] * x[j]),
        Box::new(move |x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            g[i] = 3.0 * x[i] * x[i] - 3.0 * x[j] * x[j];
            g[j] = -6.0 * x[i] * x[j];
            g
        }),
    )
    .with_degree(3)
}

fn triple_product(n: usize) -> HarmonicFn {
    HarmonicFn::new(
        n,
        "poly:x1x2x3".to_string(),
        Box::new(|x: &[f64]| x[0] * x[1] * x[2]),
        Box::new(|x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            g[0] = x[1] * x[2];
            g[1] = x[0] * x[2];
            g[2] = x[0] * x[1];
            g
        }),
    )
    .with_degree(3)
}

/// The constant function 1.
pub fn constant(n: usize) -> HarmonicFn {
    HarmonicFn::new(
        n,
        "poly:1".to_string(),
        Box::new(|_x: &[f64]| 1.0),
        Box::new(move |x: &[f64]| vec![0.0; x.len()]),
    )
    .with_degree(0)
}

/// Curated harmonic polynomial catalog up to the given degree (capped at 3).
pub fn poly_catalog(n: usize, max_degree: u32) -> Vec<HarmonicFn> {
    assert!(n >= 2);
    let max_degree = max_degree.min(3);
    let mut list = vec![constant(n)];
    if max_degree >= 1 {
        for i in 0..n {
            list.push(coordinate(n, i));
        }
    }
    if max_degree >= 2 {
        for i in 0..n {
            for j in (i + 1)..n {
                list.push(product(n, i, j));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                list.push(square_difference(n, i, j));
            }
        }
    }
    if max_degree >= 3 {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    list.push(cubic(n, i, j));
                }
            }
        }
        if n >= 3 {
            list.push(triple_product(n));
        }
    }
    list
}

/// h(x, y) = e^{nu x} cos(nu y + pi/2) = -e^{nu x} sin(nu y).
pub fn exp_cos(nu: f64) -> HarmonicFn {
    assert!(nu > 0.0, "exp_cos requires nu > 0");
    let label = format!("expcos:nu={nu}");
    let value = Box::new(move |x: &[f64]| -((nu * x[0]).exp()) * (nu * x[1]).sin());
    let gradient = Box::new(move |x: &[f64]| {
        let e = (nu * x[0]).exp();
        vec![-nu * e * (nu * x[1]).sin(), -nu * e * (nu * x[1]).cos()]
    });
    HarmonicFn::new(2, label, value, gradient)
}

/// Harmonic on the 2D constant-curvature model space, in geodesic polar
/// coordinates: h(t, theta) = tan_K(t/2)^k (a cos k theta + b sin k theta).
pub struct ModelHarmonic {
    pub curvature: Curvature,
    pub k: u32,
    pub a: f64,
    pub b: f64,
}

impl ModelHarmonic {
    pub fn new(curvature: Curvature, k: u32, a: f64, b: f64) -> Self {
        ModelHarmonic { curvature, k, a, b }
    }

    pub fn label(&self) -> String {
        format!(
            "model:K={},k={},a={},b={}",
            self.curvature.0, self.k, self.a, self.b
        )
    }

    fn angular(&self, theta: f64) -> f64 {
        let kf = self.k as f64;
        self.a * (kf * theta).cos() + self.b * (kf * theta).sin()
    }

    /// Value at geodesic polar coordinates (t, theta). At t = 0 the angular
    /// factor is removable for k > 0 and the value is 0.
    pub fn value(&self, t: f64, theta: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::Domain(format!("radial coordinate t = {t} < 0")));
        }
        if self.k == 0 {
            return Ok(self.a);
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        let radial = tan_k_half(self.curvature, t)?.powi(self.k as i32);
        Ok(radial * self.angular(theta))
    }

    /// Partial derivative in t, using (tan_K)' = 1 + K tan_K^2.
    pub fn dt(&self, t: f64, theta: f64) -> Result<f64> {
        if self.k == 0 {
            return Ok(0.0);
        }
        let tk = tan_k_half(self.curvature, t)?;
        let dtk = 0.5 * (1.0 + self.curvature.0 * tk * tk);
        let kf = self.k as f64;
        Ok(kf * tk.powi(self.k as i32 - 1) * dtk * self.angular(theta))
    }
}

/// u(x) = exp(k_eig <direction, x>), which satisfies Delta u = k_eig^2 u.
pub fn eigen_extension_integrand(n: usize, k_eig: f64, direction: &[f64]) -> HarmonicFn {
    assert!(k_eig > 0.0);
    let norm = crate::geometry::norm(direction);
    assert!(
        (norm - 1.0).abs() < 1e-12,
        "direction must be a unit vector"
    );
    let dir = direction.to_vec();
    let dir2 = dir.clone();
    let label = format!("eigen:k={k_eig}");
    let value = Box::new(move |x: &[f64]| (k_eig * crate::geometry::dot(&dir, x)).exp());
    let gradient = Box::new(move |x: &[f64]| {
        let v = (k_eig * crate::geometry::dot(&dir2, x)).exp();
        dir2.iter().map(|d| k_eig * d * v).collect()
    });
    HarmonicFn::new(n, label, value, gradient)
}

/// Harmonicity certificate: finite-difference Laplacian below `tol`
/// (scaled by the local function magnitude) at seeded random points in
/// [-1, 1]^n.
pub fn harmonicity_certificate(h: &HarmonicFn, n_points: usize, tol: f64) -> bool {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let step = 1e-4;
    for _ in 0..n_points {
        let x: Vec<f64> = (0..h.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let scale = h.value(&x).abs().max(1.0);
        if h.fd_laplacian(&x, step).abs() > tol * scale {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn planar_values() {
        let h0 = planar_homogeneous(0, 1.0, 0.0);
        assert_eq!(h0.value(&[0.3, -0.2]), 1.0);
        assert_eq!(h0.gradient(&[0.3, -0.2]), vec![0.0, 0.0]);

        // k=2, a=1: Re z^2 = x^2 - y^2
        let h2 = planar_homogeneous(2, 1.0, 0.0);
        assert!((h2.value(&[0.7, 0.4]) - (0.49 - 0.16)).abs() < 1e-14);
        assert!(h2.fd_laplacian(&[0.7, 0.4], 1e-4).abs() < 1e-8);

        // k=3, b=1: Im z^3 at (1, 0) is 0
        let h3 = planar_homogeneous(3, 0.0, 1.0);
        assert_eq!(h3.value(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn planar_homogeneity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for k in 0..=3u32 {
            let h = planar_homogeneous(k, 0.7, -1.1);
            for _ in 0..50 {
                let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0f64)];
                for &s in &[0.5, 2.0] {
                    let hx = h.value(&x);
                    let hsx = h.value(&[s * x[0], s * x[1]]);
                    let expected = s.powi(k as i32) * hx;
                    assert!(
                        (hsx - expected).abs() <= 1e-10 * expected.abs().max(1.0),
                        "k={k} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn catalog_size_n2() {
        // 1; x; y; xy; x^2-y^2; x^3-3xy^2; y^3-3yx^2
        assert_eq!(poly_catalog(2, 3).len(), 7);
    }

    #[test]
    fn catalog_harmonicity_certificates() {
        for n in [2usize, 3] {
            for h in poly_catalog(n, 3) {
                assert!(
                    harmonicity_certificate(&h, 100, 1e-5),
                    "certificate failed for {}",
                    h.label
                );
            }
        }
    }

    #[test]
    fn catalog_gradients_match_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let hstep = 1e-6;
        for h in poly_catalog(3, 3) {
            for _ in 0..20 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let g = h.gradient(&x);
                for j in 0..3 {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[j] += hstep;
                    xm[j] -= hstep;
                    let fd = (h.value(&xp) - h.value(&xm)) / (2.0 * hstep);
                    assert!(
                        (fd - g[j]).abs() <= 1e-6 * g[j].abs().max(1.0),
                        "{} d{}", h.label, j
                    );
                }
            }
        }
    }

    #[test]
    fn exp_cos_values() {
        let h = exp_cos(1.0);
        // cos(pi/2) = 0 at the origin
        assert!(h.value(&[0.0, 0.0]).abs() < 1e-15);
        // gradient at origin: (0, -1), from differentiating -e^x sin y
        let g = h.gradient(&[0.0, 0.0]);
        assert!(g[0].abs() < 1e-15 && (g[1] + 1.0).abs() < 1e-15);

        let h2 = exp_cos(2.0);
        let x = [0.1, 0.2];
        let scale = (0.2f64).exp();
        assert!(h2.fd_laplacian(&x, 1e-4).abs() <= 1e-6 * scale);
        assert!(harmonicity_certificate(&h2, 100, 1e-5));
    }

    #[test]
    fn model_harmonic_values() {
        // K=1, k=1, t=pi/2: tan(pi/4) cos(theta) = cos(theta)
        let h = ModelHarmonic::new(Curvature(1.0), 1, 1.0, 0.0);
        let t = std::f64::consts::FRAC_PI_2;
        for theta in [0.0, 0.5, 2.0] {
            assert!((h.value(t, theta).unwrap() - theta.cos()).abs() < 1e-14);
        }

        // K=0 reduces to (t/2)^k times the angular factor
        let h0 = ModelHarmonic::new(Curvature(0.0), 2, 1.0, 0.0);
        let v = h0.value(0.8, 0.3).unwrap();
        assert!((v - (0.4f64).powi(2) * (0.6f64).cos()).abs() < 1e-14);

        // K=-1, k=2, t=1: radial factor tanh^2(1/2); series oracle value
        let hm = ModelHarmonic::new(Curvature(-1.0), 2, 1.0, 0.0);
        let radial = hm.value(1.0, 0.0).unwrap();
        assert!((radial - 0.21355226703407257).abs() < 1e-12);

        // removable singularity at t = 0
        assert_eq!(h.value(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn model_harmonic_dt_matches_finite_differences() {
        for &(curv, k) in &[(1.0, 1u32), (1.0, 2), (-1.0, 1), (-1.0, 2), (0.0, 3)] {
            let h = ModelHarmonic::new(Curvature(curv), k, 0.8, -0.4);
            for &t in &[0.3, 0.7, 1.2] {
                let theta = 0.9;
                let step = 1e-6;
                let fd = (h.value(t + step, theta).unwrap() - h.value(t - step, theta).unwrap())
                    / (2.0 * step);
                let an = h.dt(t, theta).unwrap();
                assert!((fd - an).abs() < 1e-8, "K={curv} k={k} t={t}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn eigen_extension_residual() {
        let u = eigen_extension_integrand(3, 2.0, &[1.0, 0.0, 0.0]);
        assert_eq!(u.value(&[0.0, 0.0, 0.0]), 1.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = u.value(&x);
            let residual = u.fd_laplacian(&x, 1e-4) - 4.0 * v;
            assert!(residual.abs() <= 1e-5 * v.abs().max(1.0));
        }
    }
}
