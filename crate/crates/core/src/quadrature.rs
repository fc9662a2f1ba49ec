//! Surface and region integration.
//!
//! Surface integrals run fixed-node tensor-product Gauss-Legendre rules over
//! the parameter boxes of a [`SurfaceChart`], with the area element taken
//! from the chart (analytic when supplied, otherwise from the Gram
//! determinant of the chart Jacobian). Region integrals reduce to an outer
//! Gauss-Legendre pass in the level value composed with surface integrals
//! (the coarea formula). A seeded Monte Carlo estimator serves as an
//! independent oracle.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::dot;

/// Nodes-per-axis Gauss-Legendre configuration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Nodes per parameter axis for surface integrals.
    pub degree: usize,
    /// Nodes for the outer level-value axis of coarea integrals.
    pub coarea_degree: usize,
    /// Degree-doubling passes used for the error estimate.
    pub refinements: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            degree: 64,
            coarea_degree: 48,
            refinements: 1,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.degree < 4 || self.coarea_degree < 4 {
            return Err(Error::Config(format!(
                "quadrature degree must be >= 4 (got {} / {})",
                self.degree, self.coarea_degree
            )));
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; results are cached per
/// degree.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(entry) = cache.lock().unwrap().get(&n) {
        return entry.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by upward recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    cache
        .lock()
        .unwrap()
        .insert(n, (nodes.clone(), weights.clone()));
    (nodes, weights)
}

/// 1D Gauss-Legendre integral of `f` over [a, b] with `n` nodes.
pub fn integrate_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        sum += w * f(mid + half * x);
    }
    sum * half
}

/// Axis-aligned parameter box.
#[derive(Debug, Clone)]
pub struct ParamBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

type MapFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type JacFn = Box<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;
type AreaFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A parameterized patch (or union of patches) covering a hypersurface.
pub struct SurfaceChart {
    pub param_dim: usize,
    pub boxes: Vec<ParamBox>,
    map: MapFn,
    jacobian: Option<JacFn>,
    area_element: Option<AreaFn>,
}

impl SurfaceChart {
    pub fn new(param_dim: usize, boxes: Vec<ParamBox>, map: MapFn) -> Self {
        SurfaceChart {
            param_dim,
            boxes,
            map,
            jacobian: None,
            area_element: None,
        }
    }

    pub fn with_jacobian(mut self, jac: JacFn) -> Self {
        self.jacobian = Some(jac);
        self
    }

    pub fn with_area_element(mut self, area: AreaFn) -> Self {
        self.area_element = Some(area);
        self
    }

    /// Ambient point of the parameter value `u`.
    pub fn point(&self, u: &[f64]) -> Vec<f64> {
        (self.map)(u)
    }

    /// Area element at `u`: analytic when supplied, otherwise the Gram
    /// determinant of the (analytic or finite-difference) Jacobian.
    pub fn area_element_at(&self, u: &[f64]) -> f64 {
        if let Some(area) = &self.area_element {
            return area(u);
        }
        let cols = match &self.jacobian {
            Some(jac) => jac(u),
            None => self.fd_jacobian(u),
        };
        gram_sqrt(&cols)
    }

    fn fd_jacobian(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let mut cols = Vec::with_capacity(self.param_dim);
        for j in 0..self.param_dim {
            let width = self.boxes[0].hi[j] - self.boxes[0].lo[j];
            let h = 1e-6 * width.max(1e-3);
            let mut up = u.to_vec();
            let mut um = u.to_vec();
            up[j] += h;
            um[j] -= h;
            let xp = self.point(&up);
            let xm = self.point(&um);
            cols.push(
                xp.iter()
                    .zip(&xm)
                    .map(|(p, m)| (p - m) / (2.0 * h))
                    .collect(),
            );
        }
        cols
    }
}

/// sqrt(det(J^T J)) for Jacobian columns.
pub fn gram_sqrt(cols: &[Vec<f64>]) -> f64 {
    let m = cols.len();
    match m {
        1 => dot(&cols[0], &cols[0]).sqrt(),
        2 => {
            let a = dot(&cols[0], &cols[0]);
            let b = dot(&cols[0], &cols[1]);
            let c = dot(&cols[1], &cols[1]);
            (a * c - b * b).max(0.0).sqrt()
        }
        _ => {
            let mut g = nalgebra::DMatrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    g[(i, j)] = dot(&cols[i], &cols[j]);
                }
            }
            g.determinant().max(0.0).sqrt()
        }
    }
}

/// Single-pass tensor-product Gauss-Legendre evaluation at a fixed degree.
///
/// Deterministic summation order; this is the hot path used by the
/// verification engine.
pub fn chart_integral(
    chart: &SurfaceChart,
    integrand: &dyn Fn(&[f64]) -> f64,
    degree: usize,
) -> f64 {
    let (nodes, weights) = gauss_legendre(degree);
    let m = chart.param_dim;
    let mut total = 0.0;
    let mut u = vec![0.0; m];
    for pbox in &chart.boxes {
        let mut idx = vec![0usize; m];
        loop {
            let mut w = 1.0;
            for j in 0..m {
                let mid = 0.5 * (pbox.lo[j] + pbox.hi[j]);
                let half = 0.5 * (pbox.hi[j] - pbox.lo[j]);
                u[j] = mid + half * nodes[idx[j]];
                w *= weights[idx[j]] * half;
            }
            let x = chart.point(&u);
            total += w * integrand(&x) * chart.area_element_at(&u);
            // advance multi-index
            let mut j = 0;
            loop {
                if j == m {
                    break;
                }
                idx[j] += 1;
                if idx[j] < degree {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == m {
                break;
            }
        }
    }
    total
}

/// Surface integral with a degree-doubling error estimate.
///
/// Returns `(value, err_est)` where the value is taken at the finest degree.
/// Reports non-convergence when the estimate stays above `1e-4 * |value|`
/// after the configured refinements.
pub fn surface_integral(
    chart: &SurfaceChart,
    integrand: &dyn Fn(&[f64]) -> f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    spec.validate()?;
    let mut degree = spec.degree;
    let mut value = chart_integral(chart, integrand, degree);
    let mut err_est = f64::INFINITY;
    for _ in 0..spec.refinements.max(1) {
        degree *= 2;
        let refined = chart_integral(chart, integrand, degree);
        err_est = (refined - value).abs();
        value = refined;
        if err_est <= 1e-4 * value.abs().max(1e-12) {
            return Ok((value, err_est));
        }
    }
    if err_est > 1e-4 * value.abs().max(1e-12) {
        return Err(Error::NonConvergence { value, err_est });
    }
    Ok((value, err_est))
}

/// Deterministic-seed Monte Carlo region integral over a bounding box.
///
/// Returns the estimate and its standard error.
pub fn region_integral_mc(
    region_test: &dyn Fn(&[f64]) -> bool,
    bbox: (&[f64], &[f64]),
    integrand: &dyn Fn(&[f64]) -> f64,
    n_samples: usize,
    seed: u64,
) -> (f64, f64) {
    let (lo, hi) = bbox;
    let dim = lo.len();
    let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut x = vec![0.0; dim];
    for _ in 0..n_samples {
        for j in 0..dim {
            x[j] = rng.gen_range(lo[j]..hi[j]);
        }
        let v = if region_test(&x) { integrand(&x) } else { 0.0 };
        sum += v;
        sum_sq += v * v;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (vol * mean, vol * (var / n).sqrt())
}
