//! The verification engine: weighted norms H(t), their derivatives, and the
//! growth / log-convexity / boundary-identity checks over level-surface
//! families.
//!
//! Derivative policy: (log H)' is always the analytic identity
//! dnorm_analytic / H; (log H)'' is a 5-point central difference of log H
//! with step max(1e-3 t, 1e-4), wide enough that quadrature noise stays
//! below the stencil's truncation error.

use crate::comparison::{cot_k, sin_k, Curvature};
use crate::error::{Error, Result};
use crate::families::{
    region_integral_coarea, Ellipsoid, LevelFamily, ModelSpace2D, SquareBoundary,
};
use crate::geometry::{dot, norm};
use crate::harmonics::{eigen_extension_integrand, exp_cos, HarmonicFn, ModelHarmonic};
use crate::quadrature::{chart_integral, QuadratureSpec};

/// One checked statement at one level value. `margin = lhs - rhs`; the
/// verdict is `margin >= -tol` for inequality rows and `|margin| <= tol`
/// for identity rows.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub check: String,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn inequality(check: &str, t: f64, lhs: f64, rhs: f64, tol: f64) -> CheckRow {
        let margin = lhs - rhs;
        CheckRow {
            check: check.to_string(),
            t,
            lhs,
            rhs,
            margin,
            pass: margin >= -tol,
        }
    }

    pub fn identity(check: &str, t: f64, lhs: f64, rhs: f64, tol: f64) -> CheckRow {
        let margin = lhs - rhs;
        CheckRow {
            check: check.to_string(),
            t,
            lhs,
            rhs,
            margin,
            pass: margin.abs() <= tol,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub family: String,
    pub harmonic: String,
    pub tolerance: f64,
    pub rows: Vec<CheckRow>,
}

impl VerificationReport {
    pub fn new(family: &str, harmonic: &str, tolerance: f64) -> Self {
        VerificationReport {
            family: family.to_string(),
            harmonic: harmonic.to_string(),
            tolerance,
            rows: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn worst_margin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// H, D, derivative and frequency samples over a grid.
#[derive(Debug, Clone)]
pub struct NormCurve {
    pub t_grid: Vec<f64>,
    pub h: Vec<f64>,
    pub dh_analytic: Vec<f64>,
    pub dh_fd: Vec<f64>,
    pub d2logh_fd: Vec<f64>,
    pub d: Vec<f64>,
    pub n: Vec<f64>,
}

fn check_level(t: f64) -> Result<()> {
    if t <= 0.0 {
        return Err(Error::Domain(format!("level value t = {t} must be positive")));
    }
    Ok(())
}

/// H(t): the surface integral of h^2 |grad f|.
pub fn norm_h(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_level(t)?;
    let chart = family.build_chart(t);
    Ok(chart_integral(
        &chart,
        &|x: &[f64]| {
            let v = h.value(x);
            v * v * family.grad_norm(x)
        },
        spec.degree,
    ))
}

/// The analytic H'(t) = 2 int h h_n dsigma + int h^2 (Delta f/|grad f|^2)
/// |grad f| dsigma. The identity holds for arbitrary smooth h.
pub fn dnorm_analytic(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_level(t)?;
    let chart = family.build_chart(t);
    Ok(chart_integral(
        &chart,
        &|x: &[f64]| {
            let v = h.value(x);
            let grad_f = family.gradient(x);
            let gn = norm(&grad_f);
            let hn = dot(&h.gradient(x), &grad_f) / gn;
            2.0 * v * hn + v * v * family.lap_over_gradsq(x) * gn
        },
        spec.degree,
    ))
}

/// The surface form of the Dirichlet integral: int_{S_t} h h_n dsigma.
pub fn dirichlet_surface(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_level(t)?;
    let chart = family.build_chart(t);
    Ok(chart_integral(
        &chart,
        &|x: &[f64]| {
            let grad_f = family.gradient(x);
            h.value(x) * dot(&h.gradient(x), &grad_f) / norm(&grad_f)
        },
        spec.degree,
    ))
}

/// The region form D(t) = int_{R_t} |grad h|^2 vol via the coarea formula.
pub fn dirichlet_region(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    region_integral_coarea(
        family,
        &|x: &[f64]| {
            let g = h.gradient(x);
            dot(&g, &g)
        },
        t,
        spec,
    )
}

fn fd_step(t: f64) -> f64 {
    (1e-3 * t).max(1e-4)
}

/// ((log H)', (log H)'') at t: analytic first derivative, 5-point FD second.
fn log_derivatives(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let hval = norm_h(family, h, t, spec)?;
    if hval <= 0.0 {
        return Err(Error::Domain(format!("H({t}) = {hval} is not positive")));
    }
    let d1 = dnorm_analytic(family, h, t, spec)? / hval;
    let step = fd_step(t);
    let logh = |s: f64| -> Result<f64> { Ok(norm_h(family, h, s, spec)?.ln()) };
    let d2 = (-logh(t + 2.0 * step)? + 16.0 * logh(t + step)? - 30.0 * hval.ln()
        + 16.0 * logh(t - step)?
        - logh(t - 2.0 * step)?)
        / (12.0 * step * step);
    Ok((d1, d2))
}

fn validate_grid(grid: &[f64], min_len: usize) -> Result<()> {
    if grid.len() < min_len {
        return Err(Error::Config(format!(
            "grid needs at least {min_len} points, got {}",
            grid.len()
        )));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] <= 0.0 {
        return Err(Error::Config("grid must be positive and ascending".into()));
    }
    Ok(())
}

/// Builds the full curve over a grid. The Dirichlet column is the expensive
/// part and is optional; when skipped it is filled with zeros.
pub fn build_curve(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t_grid: &[f64],
    spec: &QuadratureSpec,
    with_dirichlet: bool,
) -> Result<NormCurve> {
    validate_grid(t_grid, 2)?;
    let mut curve = NormCurve {
        t_grid: t_grid.to_vec(),
        h: Vec::new(),
        dh_analytic: Vec::new(),
        dh_fd: Vec::new(),
        d2logh_fd: Vec::new(),
        d: Vec::new(),
        n: Vec::new(),
    };
    for &t in t_grid {
        let hv = norm_h(family, h, t, spec)?;
        let dh = dnorm_analytic(family, h, t, spec)?;
        let step = 1e-4 * t;
        let dh_fd = (norm_h(family, h, t + step, spec)? - norm_h(family, h, t - step, spec)?)
            / (2.0 * step);
        let (_, d2) = log_derivatives(family, h, t, spec)?;
        let d = if with_dirichlet {
            dirichlet_region(family, h, t, spec)?
        } else {
            0.0
        };
        curve.h.push(hv);
        curve.dh_analytic.push(dh);
        curve.dh_fd.push(dh_fd);
        curve.d2logh_fd.push(d2);
        curve.d.push(d);
        curve.n.push(t * dh / hv);
    }
    Ok(curve)
}

/// Growth estimate: H'(t) >= 2 D(t) + m(t) H(t).
pub fn growth_check(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t: f64,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<CheckRow> {
    let lhs = dnorm_analytic(family, h, t, spec)?;
    let rhs = 2.0 * dirichlet_region(family, h, t, spec)?
        + family.bounds().m(t) * norm_h(family, h, t, spec)?;
    Ok(CheckRow::inequality(
        "growth",
        t,
        lhs,
        rhs,
        tol * (1.0 + rhs.abs()),
    ))
}

/// The unified differential inequality with explicit coefficient functions:
/// (log H)'' + tau(t) (log H)' >= rho(t).
pub fn differential_inequality_with(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t_grid: &[f64],
    tau: &dyn Fn(f64) -> f64,
    rho: &dyn Fn(f64) -> f64,
    tol: f64,
    spec: &QuadratureSpec,
    check_name: &str,
) -> Result<VerificationReport> {
    validate_grid(t_grid, 5)?;
    let mut report = VerificationReport::new(&family.label(), &h.label, tol);
    for &t in t_grid {
        let (d1, d2) = log_derivatives(family, h, t, spec)?;
        let rhs = rho(t);
        report.rows.push(CheckRow::inequality(
            check_name,
            t,
            d2 + tau(t) * d1,
            rhs,
            tol * (1.0 + rhs.abs()),
        ));
    }
    Ok(report)
}

/// The inequality with tau, rho taken from the family's own bounds.
/// Refuses (hypothesis violation) when K + M < 0 somewhere on the grid.
pub fn differential_inequality_check(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t_grid: &[f64],
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    validate_grid(t_grid, 5)?;
    let bounds = family.bounds();
    for &t in t_grid {
        if bounds.tau(t) < 0.0 {
            return Err(Error::Hypothesis(format!(
                "K(t) + M(t) = {} < 0 at t = {t}; the inequality hypothesis fails",
                bounds.tau(t)
            )));
        }
    }
    differential_inequality_with(
        family,
        h,
        t_grid,
        &|t| bounds.tau(t),
        &|t| bounds.rho(t),
        tol,
        spec,
        "differential_inequality",
    )
}

/// Geodesic-sphere inequality, flat case (kappa = K = 0, f = |x|):
/// (log H)'' + (1/t)(log H)' >= 0, with equality for homogeneous h.
pub fn sphere_theorem_flat_check(
    n_dim: usize,
    h: &HarmonicFn,
    t_grid: &[f64],
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    let family = Ellipsoid::sphere(n_dim);
    differential_inequality_with(
        &family,
        h,
        t_grid,
        &|t| 1.0 / t,
        &|_t| 0.0,
        tol,
        spec,
        "sphere_flat",
    )
}

/// Geodesic-sphere inequality on the 2D model space of curvature K
/// (kappa = K): (log H)'' + cot_K(t) (log H)' >= -K, an equality for the
/// model harmonics.
pub fn sphere_theorem_model_check(
    space: &ModelSpace2D,
    h: &ModelHarmonic,
    t_grid: &[f64],
    tol: f64,
    degree: usize,
) -> Result<VerificationReport> {
    validate_grid(t_grid, 5)?;
    let curv = space.curvature();
    let mut report = VerificationReport::new(&space.label(), &h.label(), tol);
    for &t in t_grid {
        let hval = space.norm_h(h, t, degree)?;
        let d1 = space.dnorm_h(h, t, degree)? / hval;
        let step = fd_step(t);
        let logh = |s: f64| -> Result<f64> { Ok(space.norm_h(h, s, degree)?.ln()) };
        let d2 = (-logh(t + 2.0 * step)? + 16.0 * logh(t + step)? - 30.0 * hval.ln()
            + 16.0 * logh(t - step)?
            - logh(t - 2.0 * step)?)
            / (12.0 * step * step);
        let rhs = -curv.value();
        report.rows.push(CheckRow::inequality(
            "sphere_model",
            t,
            d2 + cot_k(curv, t)? * d1,
            rhs,
            tol * (1.0 + rhs.abs()),
        ));
    }
    Ok(report)
}

/// Interpolation weight for the three-point inequality. `a` is the
/// coefficient A >= 1 of the t^-1 term.
pub fn solve_alpha(a: f64, t0: f64, t1: f64, t2: f64) -> Result<f64> {
    if a < 1.0 {
        return Err(Error::Hypothesis(format!("A = {a} < 1 is not admissible")));
    }
    if !(0.0 < t0 && t0 < t1 && t1 < t2) {
        return Err(Error::Config(format!(
            "need 0 < t0 < t1 < t2, got ({t0}, {t1}, {t2})"
        )));
    }
    if a > 1.0 {
        let p = a - 1.0;
        Ok((1.0 - (t1 / t2).powf(p)) / ((t1 / t0).powf(p) - (t1 / t2).powf(p)))
    } else {
        Ok((t2 / t1).ln() / ((t2 / t1).ln() + (t1 / t0).ln()))
    }
}

/// Three-point geometric convexity. `b` uses the convention that the
/// differential inequality reads (log H)'' + (a/t)(log H)' >= -b/t^2
/// (so b >= 0 in the typical case). Checked in the log domain.
pub fn three_point_check(
    a: f64,
    b: f64,
    h_vals: (f64, f64, f64),
    t_vals: (f64, f64, f64),
    tol: f64,
) -> Result<CheckRow> {
    let (h0, h1, h2) = h_vals;
    let (t0, t1, t2) = t_vals;
    if h0 <= 0.0 || h1 <= 0.0 || h2 <= 0.0 {
        return Err(Error::Domain("H samples must be positive".into()));
    }
    let alpha = solve_alpha(a, t0, t1, t2)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha = {alpha} outside [0, 1]")));
    }
    let log_rhs = if a > 1.0 {
        alpha * b / (a - 1.0) * (t0 / t1).ln()
            + (1.0 - alpha) * b / (a - 1.0) * (t2 / t1).ln()
            + alpha * h0.ln()
            + (1.0 - alpha) * h2.ln()
    } else {
        -b / 2.0 * (t0 / t1).ln() * (t2 / t1).ln() + alpha * h0.ln() + (1.0 - alpha) * h2.ln()
    };
    Ok(CheckRow::inequality(
        "three_point",
        t1,
        log_rhs,
        h1.ln(),
        tol,
    ))
}

/// Monotonicity of the generalized frequency N_H built from (a, b) in the
/// same convention as `three_point_check`.
pub fn frequency_monotonicity_check(
    a: f64,
    b: f64,
    curve: &NormCurve,
    tol: f64,
) -> Result<VerificationReport> {
    if a < 1.0 {
        return Err(Error::Hypothesis(format!("A = {a} < 1 is not admissible")));
    }
    if curve.t_grid.len() < 10 {
        return Err(Error::Config(format!(
            "frequency monotonicity needs >= 10 grid points, got {}",
            curve.t_grid.len()
        )));
    }
    let n_h: Vec<f64> = curve
        .t_grid
        .iter()
        .zip(curve.h.iter().zip(&curve.dh_analytic))
        .map(|(&t, (&h, &dh))| {
            if a > 1.0 {
                t.powf(a - 1.0) * (t * dh / h + b / (a - 1.0))
            } else {
                t * dh / h + b * t.ln()
            }
        })
        .collect();
    let mut report = VerificationReport::new("frequency", "N_H", tol);
    for i in 1..n_h.len() {
        report.rows.push(CheckRow::inequality(
            "frequency_monotone",
            curve.t_grid[i],
            n_h[i],
            n_h[i - 1],
            tol,
        ));
    }
    Ok(report)
}

/// Extension of the unit normal field of S_{t0} into the enclosed region,
/// selecting the boundary-identity weight.
#[derive(Debug, Clone, Copy)]
pub enum ExtensionField {
    /// X = f grad f / (t0 |grad f|^2); weight w = 1/|grad f| on S_{t0}.
    Homogeneous,
    /// X = sin_K(r) grad r / sin_K(t0) for the radial family; w = 1.
    SphereComparison(Curvature),
}

fn extension_field(
    family: &dyn LevelFamily,
    which: ExtensionField,
    t0: f64,
    x: &[f64],
) -> Vec<f64> {
    match which {
        ExtensionField::Homogeneous => {
            let f = family.value(x);
            let g = family.gradient(x);
            let g2 = dot(&g, &g);
            g.iter().map(|gi| f * gi / (t0 * g2)).collect()
        }
        ExtensionField::SphereComparison(curv) => {
            let r = norm(x);
            let scale = sin_k(curv, r) / (sin_k(curv, t0) * r);
            x.iter().map(|xi| scale * xi).collect()
        }
    }
}

/// Both sides of the boundary identity
///   int_S (|grad_S h|^2 - h_n^2) w dsigma
///     = int_R |grad h|^2 div X - 2 <J_X grad h, grad h> vol,
/// with X the chosen extension field and J_X computed by central finite
/// differences. Reported as an identity row at relative tolerance `tol`.
pub fn hormander_identity_check(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t0: f64,
    which: ExtensionField,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<CheckRow> {
    check_level(t0)?;
    let chart = family.build_chart(t0);
    let lhs = chart_integral(
        &chart,
        &|x: &[f64]| {
            let grad_f = family.gradient(x);
            let gn = norm(&grad_f);
            let gh = h.gradient(x);
            let hn = dot(&gh, &grad_f) / gn;
            let w = match which {
                ExtensionField::Homogeneous => 1.0 / gn,
                ExtensionField::SphereComparison(_) => 1.0,
            };
            (dot(&gh, &gh) - 2.0 * hn * hn) * w
        },
        spec.degree,
    );
    let rhs = region_integral_coarea(
        family,
        &|x: &[f64]| {
            let gh = h.gradient(x);
            let n_dim = x.len();
            let step = 1e-5 * (1.0 + norm(x));
            // columns of J_X by central differences of the analytic field
            let mut div = 0.0;
            let mut quad = 0.0;
            for j in 0..n_dim {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[j] += step;
                xm[j] -= step;
                let vp = extension_field(family, which, t0, &xp);
                let vm = extension_field(family, which, t0, &xm);
                for i in 0..n_dim {
                    let jij = (vp[i] - vm[i]) / (2.0 * step);
                    if i == j {
                        div += jij;
                    }
                    quad += gh[i] * jij * gh[j];
                }
            }
            dot(&gh, &gh) * div - 2.0 * quad
        },
        t0,
        spec,
    )?;
    Ok(CheckRow::identity(
        "hormander_identity",
        t0,
        lhs,
        rhs,
        tol * (1.0 + rhs.abs()),
    ))
}

/// The boundary lower bound: int_S (|grad_S h|^2 - h_n^2)/|grad f| dsigma
/// >= -K(t) D(t), with K(t) from the family's analytic bounds.
pub fn hormander_bound_check(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t: f64,
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<CheckRow> {
    check_level(t)?;
    let chart = family.build_chart(t);
    let lhs = chart_integral(
        &chart,
        &|x: &[f64]| {
            let grad_f = family.gradient(x);
            let gn = norm(&grad_f);
            let gh = h.gradient(x);
            let hn = dot(&gh, &grad_f) / gn;
            (dot(&gh, &gh) - 2.0 * hn * hn) / gn
        },
        spec.degree,
    );
    let rhs = -family.bounds().big_k(t) * dirichlet_region(family, h, t, spec)?;
    Ok(CheckRow::inequality(
        "hormander_bound",
        t,
        lhs,
        rhs,
        tol * (1.0 + rhs.abs()),
    ))
}

/// One row of the Lipschitz counterexample table on the square level set.
#[derive(Debug, Clone)]
pub struct CounterexampleRow {
    pub nu: f64,
    /// int_{S_1} (|grad_S h|^2 - h_n^2) dsigma, numerically.
    pub tangential_numeric: f64,
    /// The quoted closed form -nu sqrt(2) (2 sinh 2nu - 2 sin 2nu).
    pub tangential_closed_form: f64,
    /// int_{S_1} h h_n dsigma, numerically.
    pub hhn_numeric: f64,
    /// The closed form cosh 2nu - 1.
    pub hhn_closed_form: f64,
    /// -tangential / int h h_n: unbounded in nu, so no uniform constant K
    /// can close the boundary bound on this Lipschitz level set.
    pub ratio: f64,
}

/// Evaluates the counterexample integrals over the four edges of
/// { |x| + |y| = 1 } for h = e^{nu x} cos(nu y + pi/2).
pub fn square_counterexample(
    nu_list: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<CounterexampleRow>> {
    let square = SquareBoundary;
    let chart = square.chart();
    let mut rows = Vec::new();
    for &nu in nu_list {
        if nu <= 0.0 || nu > 8.0 {
            return Err(Error::Config(format!(
                "nu = {nu} outside the supported range (0, 8]"
            )));
        }
        let h = exp_cos(nu);
        let tangential_numeric = chart_integral(
            &chart,
            &|x: &[f64]| {
                let gh = h.gradient(x);
                let hn = dot(&gh, &square.outward_normal(x));
                dot(&gh, &gh) - 2.0 * hn * hn
            },
            spec.degree,
        );
        let hhn_numeric = chart_integral(
            &chart,
            &|x: &[f64]| h.value(x) * dot(&h.gradient(x), &square.outward_normal(x)),
            spec.degree,
        );
        let two_nu = 2.0 * nu;
        rows.push(CounterexampleRow {
            nu,
            tangential_numeric,
            tangential_closed_form: -nu
                * std::f64::consts::SQRT_2
                * (2.0 * two_nu.sinh() - 2.0 * two_nu.sin()),
            hhn_numeric,
            hhn_closed_form: two_nu.cosh() - 1.0,
            ratio: -tangential_numeric / hhn_numeric,
        });
    }
    Ok(rows)
}

/// Mean value property: F(t) = int h |grad f| / int |grad f| is constant in
/// t whenever Delta f / |grad f|^2 is constant on each level surface.
/// Refuses with a hypothesis error when the constancy fails.
pub fn mean_value_check(
    family: &dyn LevelFamily,
    h: &HarmonicFn,
    t_grid: &[f64],
    spec: &QuadratureSpec,
    tol: f64,
) -> Result<VerificationReport> {
    validate_grid(t_grid, 2)?;
    // hypothesis: spread of Delta f / |grad f|^2 over sampled chart nodes
    for &t in t_grid {
        let chart = family.build_chart(t);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for bx in &chart.boxes {
            for i in 0..8 {
                let u: Vec<f64> = bx
                    .lo
                    .iter()
                    .zip(&bx.hi)
                    .map(|(&l, &h2)| l + (h2 - l) * (i as f64 + 0.5) / 8.0)
                    .collect();
                let q = family.lap_over_gradsq(&chart.point(&u));
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
        if hi - lo > 1e-8 * (1.0 + hi.abs()) {
            return Err(Error::Hypothesis(format!(
                "Delta f/|grad f|^2 varies by {} on S_{t}; the mean value \
                 hypothesis fails",
                hi - lo
            )));
        }
    }
    let f_at = |t: f64| -> Result<f64> {
        let chart = family.build_chart(t);
        let num = chart_integral(
            &chart,
            &|x: &[f64]| h.value(x) * family.grad_norm(x),
            spec.degree,
        );
        let den = chart_integral(&chart, &|x: &[f64]| family.grad_norm(x), spec.degree);
        Ok(num / den)
    };
    let f0 = f_at(t_grid[0])?;
    let mut report = VerificationReport::new(&family.label(), &h.label, tol);
    for &t in t_grid {
        report.rows.push(CheckRow::identity(
            "mean_value",
            t,
            f_at(t)?,
            f0,
            tol * f0.abs().max(1.0),
        ));
    }
    Ok(report)
}

/// H is increasing along the grid (valid when the family certifies
/// Delta f >= 0). Generic over the H evaluator so model-space and
/// level-family norms share it.
pub fn monotonicity_check(
    label: &str,
    h_eval: &dyn Fn(f64) -> Result<f64>,
    t_grid: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    validate_grid(t_grid, 2)?;
    let values: Vec<f64> = t_grid.iter().map(|&t| h_eval(t)).collect::<Result<_>>()?;
    let mut report = VerificationReport::new(label, "H", tol);
    for i in 1..values.len() {
        report.rows.push(CheckRow::inequality(
            "monotonicity",
            t_grid[i],
            values[i],
            values[i - 1],
            tol,
        ));
    }
    Ok(report)
}

/// Convexity for eigenfunction-type integrands on flat spheres:
/// H(t) = int_{S_t} u^2 dsigma for u = e^{k <a, x>} satisfies
/// (log H)'' + (1/t)(log H)' >= 0. The derivative identity holds for
/// arbitrary u, so the flat engine applies unchanged.
pub fn eigen_convexity_check(
    n_dim: usize,
    k_eig: f64,
    t_grid: &[f64],
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    let mut direction = vec![0.0; n_dim];
    direction[0] = 1.0;
    let u = eigen_extension_integrand(n_dim, k_eig, &direction);
    let family = Ellipsoid::sphere(n_dim);
    differential_inequality_with(
        &family,
        &u,
        t_grid,
        &|t| 1.0 / t,
        &|_t| 0.0,
        tol,
        spec,
        "eigen_convexity",
    )
}
