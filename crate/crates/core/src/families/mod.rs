//! Parameterizing-function families: concrete level-set families with
//! analytic gradient and Laplacian data, the bound functions required by the
//! convexity inequality, and level-surface charts.

use crate::error::{Error, Result};
use crate::geometry::{dot, norm};
use crate::quadrature::{integrate_1d, chart_integral, QuadratureSpec, SurfaceChart};

mod ellipsoid;
mod homogeneous;
mod model2d;
mod square;
mod torus;

pub use ellipsoid::Ellipsoid;
pub use homogeneous::{homogeneous_constants_sampled, SampledConstants};
pub use model2d::ModelSpace2D;
pub use square::SquareBoundary;
pub use torus::TorusDistance;

type BoundFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Level-dependent bounds on the conditioning quantities of a family:
/// m(t) <= Delta f / |grad f|^2 <= M(t) on S_t, G >= g(t), plus the
/// Rellich-inequality constant K(t) and the optional extra term k(t).
pub struct CondBounds {
    m: BoundFn,
    big_m: BoundFn,
    g: BoundFn,
    big_k: BoundFn,
    k_extra: BoundFn,
}

impl CondBounds {
    pub fn new(m: BoundFn, big_m: BoundFn, g: BoundFn, big_k: BoundFn) -> Self {
        CondBounds {
            m,
            big_m,
            g,
            big_k,
            k_extra: Box::new(|_| 0.0),
        }
    }

    pub fn with_k_extra(mut self, k_extra: BoundFn) -> Self {
        self.k_extra = k_extra;
        self
    }

    /// Lower bound for Delta f / |grad f|^2 on S_t.
    pub fn m(&self, t: f64) -> f64 {
        (self.m)(t)
    }

    /// Upper bound for Delta f / |grad f|^2 on S_t.
    pub fn big_m(&self, t: f64) -> f64 {
        (self.big_m)(t)
    }

    /// Lower bound for G(x) on S_t.
    pub fn g(&self, t: f64) -> f64 {
        (self.g)(t)
    }

    /// The Rellich-identity constant K(t).
    pub fn big_k(&self, t: f64) -> f64 {
        (self.big_k)(t)
    }

    /// Extra term k(t) of the refined inequality (zero unless used).
    pub fn k_extra(&self, t: f64) -> f64 {
        (self.k_extra)(t)
    }

    /// Coefficient of (log H)' in the unified inequality: tau = K + M.
    pub fn tau(&self, t: f64) -> f64 {
        self.big_k(t) + self.big_m(t)
    }

    /// Right-hand side of the unified inequality:
    /// rho = g + m M + m K + 2 k.
    pub fn rho(&self, t: f64) -> f64 {
        self.g(t) + self.m(t) * self.big_m(t) + self.m(t) * self.big_k(t)
            + 2.0 * self.k_extra(t)
    }
}

/// A parameterizing function f with compact regular level surfaces
/// S_t = f^{-1}(t), its analytic first/second-order data, conditioning
/// bounds, and charts.
pub trait LevelFamily: Sync {
    fn ambient_dim(&self) -> usize;

    /// Open interval of valid level values.
    fn t_range(&self) -> (f64, f64);

    fn label(&self) -> String;

    /// The level value f(x).
    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    fn grad_norm(&self, x: &[f64]) -> f64 {
        norm(&self.gradient(x))
    }

    /// Delta f / |grad f|^2, the quantity sandwiched by m and M.
    fn lap_over_gradsq(&self, x: &[f64]) -> f64;

    /// G(x) = <grad(Delta f / |grad f|^2), grad f / |grad f|^2>.
    ///
    /// Default: central finite differences of `lap_over_gradsq` along the
    /// gradient direction.
    fn radial_derivative(&self, x: &[f64]) -> f64 {
        let grad = self.gradient(x);
        let g2 = dot(&grad, &grad);
        let h = 1e-5 * (1.0 + norm(x));
        let mut d = 0.0;
        for j in 0..x.len() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            let dq = (self.lap_over_gradsq(&xp) - self.lap_over_gradsq(&xm)) / (2.0 * h);
            d += dq * grad[j];
        }
        d / g2
    }

    fn bounds(&self) -> CondBounds;

    /// Chart for S_t without range validation; used internally by the
    /// coarea integral, which needs levels below the advertised range.
    fn build_chart(&self, t: f64) -> SurfaceChart;

    /// Chart for S_t, validated against `t_range`.
    fn chart_at(&self, t: f64) -> Result<SurfaceChart> {
        let (lo, hi) = self.t_range();
        if t <= 0.0 || t < lo || t > hi {
            return Err(Error::OutOfRange { t, lo, hi });
        }
        Ok(self.build_chart(t))
    }
}

/// Region integral over R_t = f^{-1}([0, t)) via the coarea formula:
/// the integral of phi over R_t equals the s-integral over (0, t) of the
/// surface integrals of phi / |grad f|.
///
/// The inner level integrand extends continuously to s = 0 for every family
/// here (homogeneous scaling, respectively tube collapse), so a single
/// Gauss-Legendre rule over [0, t] is used with all nodes interior.
pub fn region_integral_coarea(
    family: &dyn LevelFamily,
    integrand: &dyn Fn(&[f64]) -> f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let (_, hi) = family.t_range();
    if t <= 0.0 || t > hi {
        return Err(Error::OutOfRange {
            t,
            lo: 0.0,
            hi,
        });
    }
    let level = |s: f64| {
        let chart = family.build_chart(s);
        chart_integral(
            &chart,
            &|x: &[f64]| integrand(x) / family.grad_norm(x),
            spec.degree,
        )
    };
    Ok(integrate_1d(level, 0.0, t, spec.coarea_degree))
}

/// Spot-check that the analytic gradient of a family matches finite
/// differences of its value. Test helper shared by the family unit tests.
#[cfg(test)]
pub(crate) fn check_gradient_fd(family: &dyn LevelFamily, x: &[f64], rel_tol: f64) {
    let g = family.gradient(x);
    let h = 1e-6;
    for j in 0..x.len() {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let fd = (family.value(&xp) - family.value(&xm)) / (2.0 * h);
        assert!(
            (fd - g[j]).abs() <= rel_tol * g[j].abs().max(1.0),
            "{} gradient component {j} at {x:?}: fd {fd} vs {}",
            family.label(),
            g[j]
        );
    }
}
