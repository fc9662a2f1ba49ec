//! Configuration, suite runner and report writers for the `hconvex` binary.
//!
//! Configuration is flat key=value text (one pair per line, `#` comments);
//! every key can be overridden by a command-line flag. All outputs are
//! deterministic: CSV with 17 significant digits, LF line endings, fixed
//! row order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::convexity::{
    build_curve, dirichlet_region, dirichlet_surface, differential_inequality_check,
    differential_inequality_with, eigen_convexity_check, frequency_monotonicity_check,
    growth_check, hormander_bound_check, hormander_identity_check, mean_value_check,
    monotonicity_check, norm_h, sphere_theorem_model_check, square_counterexample, three_point_check,
    CheckRow, ExtensionField, NormCurve, VerificationReport,
};
use crate::comparison::{cot_k, Curvature};
use crate::error::{Error, Result};
use crate::families::{
    homogeneous_constants_sampled, Ellipsoid, LevelFamily, ModelSpace2D, TorusDistance,
};
use crate::harmonics::{planar_homogeneous, poly_catalog, HarmonicFn, ModelHarmonic};
use crate::quadrature::{surface_integral, QuadratureSpec};

/// Environment variable naming the default output directory.
pub const OUTPUT_ENV: &str = "HCONVEX_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn build(&self) -> Result<Vec<f64>> {
        if !(self.start > 0.0 && self.end > self.start) {
            return Err(Error::Config(format!(
                "grid needs 0 < t_start < t_end, got [{}, {}]",
                self.start, self.end
            )));
        }
        if self.n_points < 5 {
            return Err(Error::Config(format!(
                "grid needs n_points >= 5, got {}",
                self.n_points
            )));
        }
        let n = self.n_points;
        Ok((0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + (self.end - self.start) * s,
                    Spacing::Log => self.start * (self.end / self.start).powf(s),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: String,
    pub family: String,
    pub harmonic: String,
    pub grid: GridSpec,
    pub quadrature: QuadratureSpec,
    pub tolerance: f64,
    pub seed: u64,
    pub nu: Vec<f64>,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let output = std::env::var(OUTPUT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|_| PathBuf::from("out"));
        RunConfig {
            suite: "flat_sharpness".to_string(),
            family: "radial:2".to_string(),
            harmonic: "planar:2".to_string(),
            grid: GridSpec {
                start: 0.5,
                end: 2.0,
                n_points: 9,
                spacing: Spacing::Linear,
            },
            quadrature: QuadratureSpec::default(),
            tolerance: 1e-4,
            seed: 7,
            nu: vec![1.0, 2.0, 3.0],
            output,
        }
    }
}

impl RunConfig {
    /// Applies one key=value pair; unknown keys are config errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("invalid {what}: {value}"));
        match key {
            "suite" => self.suite = value.to_string(),
            "family" => self.family = value.to_string(),
            "harmonic" => self.harmonic = value.to_string(),
            "t_start" => self.grid.start = value.parse().map_err(|_| bad("t_start"))?,
            "t_end" => self.grid.end = value.parse().map_err(|_| bad("t_end"))?,
            "n_points" => self.grid.n_points = value.parse().map_err(|_| bad("n_points"))?,
            "spacing" => {
                self.grid.spacing = match value {
                    "linear" => Spacing::Linear,
                    "log" => Spacing::Log,
                    _ => return Err(bad("spacing (linear|log)")),
                }
            }
            "degree" => self.quadrature.degree = value.parse().map_err(|_| bad("degree"))?,
            "coarea_degree" => {
                self.quadrature.coarea_degree =
                    value.parse().map_err(|_| bad("coarea_degree"))?
            }
            "refinements" => {
                self.quadrature.refinements = value.parse().map_err(|_| bad("refinements"))?
            }
            "tolerance" => self.tolerance = value.parse().map_err(|_| bad("tolerance"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "nu" => {
                self.nu = value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("nu list"))?
            }
            "output" => self.output = PathBuf::from(value),
            _ => return Err(Error::Config(format!("unknown config key: {key}"))),
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        self.grid.build().map(|_| ())
    }
}

/// Builds a level family from a compact name: `radial:<n>`,
/// `ellipsoid:<a1,a2,...>` (alias `ellipse`), `torus:<n>,<k>,<eps>`.
pub fn parse_family(name: &str) -> Result<Box<dyn LevelFamily>> {
    let (kind, args) = name.split_once(':').unwrap_or((name, ""));
    let parse_f64s = |s: &str| -> Result<Vec<f64>> {
        s.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad family parameter in {name}")))
            })
            .collect()
    };
    match kind {
        "radial" => {
            let n: usize = args
                .parse()
                .map_err(|_| Error::Config(format!("radial needs a dimension, got {name}")))?;
            if n < 2 {
                return Err(Error::Config("radial dimension must be >= 2".into()));
            }
            Ok(Box::new(Ellipsoid::sphere(n)))
        }
        "ellipsoid" | "ellipse" => Ok(Box::new(Ellipsoid::new(parse_f64s(args)?)?)),
        "torus" => {
            let vals = parse_f64s(args)?;
            if vals.len() != 3 {
                return Err(Error::Config(format!(
                    "torus needs n,k,eps, got {name}"
                )));
            }
            Ok(Box::new(TorusDistance::new(
                vals[0] as usize,
                vals[1] as usize,
                vals[2],
            )?))
        }
        _ => Err(Error::Config(format!("unknown family: {name}"))),
    }
}

/// Builds a harmonic from a label: `planar:<k>`, `constant`, or a
/// `poly:` label from the degree-<=3 catalog of the matching dimension.
pub fn parse_harmonic(ambient_dim: usize, label: &str) -> Result<HarmonicFn> {
    if let Some(k) = label.strip_prefix("planar:") {
        if ambient_dim != 2 {
            return Err(Error::Config(
                "planar harmonics need a 2-dimensional family".into(),
            ));
        }
        let k: u32 = k
            .parse()
            .map_err(|_| Error::Config(format!("bad planar degree in {label}")))?;
        return Ok(planar_homogeneous(k, 1.0, 0.0));
    }
    poly_catalog(ambient_dim, 3)
        .into_iter()
        .find(|h| h.label == label)
        .ok_or_else(|| Error::Config(format!("unknown harmonic: {label}")))
}

/// One row of `curve.csv`.
#[derive(Debug, Clone)]
pub struct CurveRow {
    pub t: f64,
    pub h: f64,
    pub dh_analytic: f64,
    pub dh_fd: f64,
    pub d: f64,
    pub n: f64,
    pub logh_dd: f64,
    pub tau: f64,
    pub rho: f64,
    pub margin: f64,
}

fn curve_rows(curve: &NormCurve, tau: &dyn Fn(f64) -> f64, rho: &dyn Fn(f64) -> f64) -> Vec<CurveRow> {
    curve
        .t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let d1 = curve.dh_analytic[i] / curve.h[i];
            CurveRow {
                t,
                h: curve.h[i],
                dh_analytic: curve.dh_analytic[i],
                dh_fd: curve.dh_fd[i],
                d: curve.d[i],
                n: curve.n[i],
                logh_dd: curve.d2logh_fd[i],
                tau: tau(t),
                rho: rho(t),
                margin: curve.d2logh_fd[i] + tau(t) * d1 - rho(t),
            }
        })
        .collect()
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_curve_csv(path: &Path, rows: &[CurveRow]) -> Result<()> {
    let mut text = String::from("t,H,dH_analytic,dH_fd,D,N,logH_dd,tau,rho,margin\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt(r.t),
            fmt(r.h),
            fmt(r.dh_analytic),
            fmt(r.dh_fd),
            fmt(r.d),
            fmt(r.n),
            fmt(r.logh_dd),
            fmt(r.tau),
            fmt(r.rho),
            fmt(r.margin)
        );
    }
    fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn write_report_csv(path: &Path, rows: &[CheckRow]) -> Result<()> {
    let mut text = String::from("check_name,t,lhs,rhs,margin,verdict\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            r.check,
            fmt(r.t),
            fmt(r.lhs),
            fmt(r.rhs),
            fmt(r.margin),
            if r.pass { "pass" } else { "fail" }
        );
    }
    fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_summary(
    path: &Path,
    suite: &str,
    rows: &[CheckRow],
    err_est: Option<f64>,
    notes: &[String],
) -> Result<()> {
    let n_pass = rows.iter().filter(|r| r.pass).count();
    let n_fail = rows.len() - n_pass;
    let worst = rows
        .iter()
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min);
    let mut text = String::new();
    let _ = writeln!(text, "suite: {suite}");
    let _ = writeln!(text, "checks: {} pass, {} fail", n_pass, n_fail);
    if rows.is_empty() {
        let _ = writeln!(text, "worst_margin: n/a");
    } else {
        let _ = writeln!(text, "worst_margin: {}", fmt(worst));
    }
    if let Some(e) = err_est {
        let _ = writeln!(text, "quadrature_error_estimate: {}", fmt(e));
    }
    for note in notes {
        let _ = writeln!(text, "note: {note}");
    }
    if n_fail > 0 {
        let _ = writeln!(text, "failing rows:");
        for r in rows.iter().filter(|r| !r.pass) {
            let _ = writeln!(
                text,
                "  {} t={} lhs={} rhs={} margin={}",
                r.check,
                fmt(r.t),
                fmt(r.lhs),
                fmt(r.rhs),
                fmt(r.margin)
            );
        }
    }
    fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn collect(reports: &[VerificationReport]) -> Vec<CheckRow> {
    reports.iter().flat_map(|r| r.rows.clone()).collect()
}

struct SuiteOutput {
    curve: Vec<CurveRow>,
    rows: Vec<CheckRow>,
    err_est: Option<f64>,
    notes: Vec<String>,
}

fn family_suite(
    config: &RunConfig,
    family: &dyn LevelFamily,
    curve_harmonic: &str,
    with_dirichlet: bool,
    extras: bool,
) -> Result<SuiteOutput> {
    let spec = &config.quadrature;
    let grid = config.grid.build()?;
    let (lo, hi) = family.t_range();
    if grid[0] < lo || *grid.last().unwrap() > hi {
        return Err(Error::Config(format!(
            "grid [{}, {}] outside the family range [{lo}, {hi}]",
            grid[0],
            grid.last().unwrap()
        )));
    }
    let n = family.ambient_dim();
    let bounds = family.bounds();
    let mut reports = Vec::new();
    let mut notes = Vec::new();
    for h in poly_catalog(n, 3) {
        reports.push(differential_inequality_check(family, &h, &grid, config.tolerance, spec)?);
    }
    // three-point and frequency checks with the printed constants, mapped
    // to the "rhs = -b/t^2" convention used by the corollary
    let (a, b_conv) = printed_constants_positive(family)?;
    let mid = grid[grid.len() / 2];
    for h in poly_catalog(n, 3) {
        let hv = |t: f64| norm_h(family, &h, t, spec);
        let row = three_point_check(
            a,
            b_conv,
            (hv(grid[0])?, hv(mid)?, hv(*grid.last().unwrap())?),
            (grid[0], mid, *grid.last().unwrap()),
            config.tolerance,
        )?;
        reports.push(VerificationReport {
            family: family.label(),
            harmonic: h.label.clone(),
            tolerance: config.tolerance,
            rows: vec![row],
        });
        let freq_grid = GridSpec {
            start: grid[0],
            end: *grid.last().unwrap(),
            n_points: grid.len().max(10),
            spacing: Spacing::Linear,
        }
        .build()?;
        let curve = build_curve(family, &h, &freq_grid, spec, false)?;
        reports.push(frequency_monotonicity_check(a, b_conv, &curve, 1e-6)?);
    }
    if extras {
        // identity and boundary checks at the middle grid point
        for h in poly_catalog(n, 3) {
            reports.push(VerificationReport {
                family: family.label(),
                harmonic: h.label.clone(),
                tolerance: config.tolerance,
                rows: vec![
                    growth_check(family, &h, mid, spec, config.tolerance)?,
                    hormander_identity_check(
                        family,
                        &h,
                        mid,
                        ExtensionField::Homogeneous,
                        spec,
                        config.tolerance,
                    )?,
                    hormander_bound_check(family, &h, mid, spec, config.tolerance)?,
                    CheckRow::identity(
                        "divergence_identity",
                        mid,
                        dirichlet_surface(family, &h, mid, spec)?,
                        dirichlet_region(family, &h, mid, spec)?,
                        config.tolerance
                            * (1.0 + dirichlet_region(family, &h, mid, spec)?.abs()),
                    ),
                ],
            });
        }
        notes.push("extras: growth, boundary identity/bound, divergence identity".to_string());
    }
    let h_curve = parse_harmonic(n, curve_harmonic)?;
    let curve = build_curve(family, &h_curve, &grid, spec, with_dirichlet)?;
    let rows = curve_rows(&curve, &|t| bounds.tau(t), &|t| bounds.rho(t));
    let (_, err_est) = surface_integral(
        &family.chart_at(mid)?,
        &|x: &[f64]| {
            let v = h_curve.value(x);
            v * v * family.grad_norm(x)
        },
        spec,
    )?;
    Ok(SuiteOutput {
        curve: rows,
        rows: collect(&reports),
        err_est: Some(err_est),
        notes,
    })
}

/// (A, b) with b in the corollary convention rhs = -b/t^2: for ellipsoids b
/// is the negated printed B; for the torus b = -B with B the printed value.
fn printed_constants_positive(family: &dyn LevelFamily) -> Result<(f64, f64)> {
    let label = family.label();
    if label.starts_with("radial") || label.starts_with("ellipsoid") {
        // reconstruct from the label-independent analytic route
        let bounds = family.bounds();
        let a = bounds.tau(1.0);
        let b = -(bounds.rho(1.0));
        Ok((a, b))
    } else if label.starts_with("torus") {
        let bounds = family.bounds();
        Ok((bounds.tau(1.0) * 1.0, -bounds.rho(1.0)))
    } else {
        Err(Error::Config(format!(
            "no printed constants for family {label}"
        )))
    }
}

fn flat_sharpness_suite(config: &RunConfig) -> Result<SuiteOutput> {
    let spec = &config.quadrature;
    let grid = config.grid.build()?;
    let family = Ellipsoid::sphere(2);
    let mut rows = Vec::new();
    let mut curve_out = Vec::new();
    for k in [1u32, 2, 3] {
        let h = planar_homogeneous(k, 1.0, 0.0);
        let curve = build_curve(&family, &h, &grid, spec, true)?;
        let expected_n = (2 * k + 1) as f64;
        for (i, &t) in grid.iter().enumerate() {
            let d1 = curve.dh_analytic[i] / curve.h[i];
            rows.push(CheckRow::identity(
                &format!("flat_sharpness_k{k}"),
                t,
                curve.d2logh_fd[i] + d1 / t,
                0.0,
                1e-6,
            ));
            rows.push(CheckRow::identity(
                &format!("frequency_constant_k{k}"),
                t,
                curve.n[i],
                expected_n,
                1e-8,
            ));
        }
        if k == 2 {
            curve_out = curve_rows(&curve, &|t| 1.0 / t, &|_t| 0.0);
        }
    }
    Ok(SuiteOutput {
        curve: curve_out,
        rows,
        err_est: None,
        notes: vec!["flat radial family: margins are identities".to_string()],
    })
}

fn model_sharpness_suite(config: &RunConfig) -> Result<SuiteOutput> {
    let degree = config.quadrature.degree;
    let mut rows = Vec::new();
    let mut curve_out = Vec::new();
    for &curv in &[1.0, -1.0] {
        let space = ModelSpace2D::new(curv);
        let (lo, hi) = space.t_range();
        let grid = GridSpec {
            start: lo.max(config.grid.start),
            end: (hi - 0.05).min(config.grid.end),
            n_points: config.grid.n_points,
            spacing: Spacing::Linear,
        }
        .build()?;
        for k in [1u32, 2] {
            let h = ModelHarmonic::new(Curvature(curv), k, 1.0, 0.0);
            let report = sphere_theorem_model_check(&space, &h, &grid, 1e-6, degree)?;
            for r in report.rows {
                rows.push(CheckRow::identity(
                    &format!("model_sharpness_K{curv}_k{k}"),
                    r.t,
                    r.lhs,
                    r.rhs,
                    1e-6,
                ));
            }
            if curv == 1.0 && k == 1 {
                let curve = model_curve(&space, &h, &grid, degree)?;
                curve_out = curve;
            }
        }
        // H' = cot_K(t) H for the constant harmonic
        let one = ModelHarmonic::new(Curvature(curv), 0, 1.0, 0.0);
        for &t in &grid {
            let hval = space.norm_h(&one, t, degree)?;
            rows.push(CheckRow::identity(
                &format!("area_derivative_K{curv}"),
                t,
                space.dnorm_h(&one, t, degree)?,
                cot_k(Curvature(curv), t)? * hval,
                1e-6 * hval,
            ));
        }
    }
    Ok(SuiteOutput {
        curve: curve_out,
        rows,
        err_est: None,
        notes: vec!["model-space families: margins are identities".to_string()],
    })
}

fn model_curve(
    space: &ModelSpace2D,
    h: &ModelHarmonic,
    grid: &[f64],
    degree: usize,
) -> Result<Vec<CurveRow>> {
    let curv = space.curvature();
    let mut rows = Vec::new();
    for &t in grid {
        let hv = space.norm_h(h, t, degree)?;
        let dh = space.dnorm_h(h, t, degree)?;
        let step = (1e-3 * t).max(1e-4);
        let logh = |s: f64| -> Result<f64> { Ok(space.norm_h(h, s, degree)?.ln()) };
        let d2 = (-logh(t + 2.0 * step)? + 16.0 * logh(t + step)? - 30.0 * hv.ln()
            + 16.0 * logh(t - step)?
            - logh(t - 2.0 * step)?)
            / (12.0 * step * step);
        let fd = (space.norm_h(h, t + 1e-4 * t, degree)? - space.norm_h(h, t - 1e-4 * t, degree)?)
            / (2e-4 * t);
        let tau = cot_k(curv, t)?;
        let rho = -curv.value();
        rows.push(CurveRow {
            t,
            h: hv,
            dh_analytic: dh,
            dh_fd: fd,
            d: 0.0,
            n: t * dh / hv,
            logh_dd: d2,
            tau,
            rho,
            margin: d2 + tau * dh / hv - rho,
        });
    }
    Ok(rows)
}

fn eigen_suite(config: &RunConfig) -> Result<SuiteOutput> {
    let spec = &config.quadrature;
    let grid = config.grid.build()?;
    let mut rows = Vec::new();
    for &n in &[2usize, 3] {
        for &k_eig in &[1.0, 2.0] {
            let report = eigen_convexity_check(n, k_eig, &grid, config.tolerance, spec)?;
            for r in report.rows {
                rows.push(CheckRow {
                    check: format!("eigen_n{n}_k{k_eig}"),
                    ..r
                });
            }
        }
    }
    Ok(SuiteOutput {
        curve: Vec::new(),
        rows,
        err_est: None,
        notes: Vec::new(),
    })
}

fn mean_value_suite(config: &RunConfig) -> Result<SuiteOutput> {
    let spec = &config.quadrature;
    let grid = config.grid.build()?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let disk = Ellipsoid::sphere(2);
    let hx = parse_harmonic(2, "poly:x1")?;
    rows.extend(mean_value_check(&disk, &hx, &grid, spec, 1e-8)?.rows);
    let ball = Ellipsoid::sphere(3);
    let catalog = poly_catalog(3, 2);
    // 1 + x1 x2: sum of catalog entries "poly:1" and "poly:x1x2"
    let one = catalog.iter().find(|h| h.label == "poly:1").unwrap();
    let prod = catalog.iter().find(|h| h.label == "poly:x1x2").unwrap();
    let combined = HarmonicFn::new(
        3,
        "poly:1+x1x2".to_string(),
        {
            let (a, b) = (one.label.clone(), prod.label.clone());
            let _ = (a, b);
            Box::new(|x: &[f64]| 1.0 + x[0] * x[1])
        },
        Box::new(|x: &[f64]| {
            let mut g = vec![0.0; x.len()];
            g[0] = x[1];
            g[1] = x[0];
            g
        }),
    );
    rows.extend(mean_value_check(&ball, &combined, &grid, spec, 1e-8)?.rows);
    // the ellipse violates the constancy hypothesis: expect a refusal
    let ellipse = Ellipsoid::new(vec![1.0, 2.0])?;
    match mean_value_check(&ellipse, &hx, &grid, spec, 1e-8) {
        Err(Error::Hypothesis(msg)) => {
            notes.push(format!("ellipse hypothesis correctly refused: {msg}"));
        }
        Err(e) => return Err(e),
        Ok(_) => {
            rows.push(CheckRow {
                check: "mean_value_hypothesis_refusal".to_string(),
                t: grid[0],
                lhs: 0.0,
                rhs: 1.0,
                margin: -1.0,
                pass: false,
            });
            notes.push("ellipse hypothesis was NOT refused (unexpected)".to_string());
        }
    }
    Ok(SuiteOutput {
        curve: Vec::new(),
        rows,
        err_est: None,
        notes,
    })
}

fn monotonicity_suite(config: &RunConfig) -> Result<SuiteOutput> {
    let spec = &config.quadrature;
    let grid = config.grid.build()?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let ball = Ellipsoid::sphere(3);
    for h in poly_catalog(3, 2) {
        let report = monotonicity_check(
            "radial:n=3",
            &|t| norm_h(&ball, &h, t, spec),
            &grid,
            1e-9,
        )?;
        rows.extend(report.rows);
    }
    // documented negative case: K = 1 model space past the quarter period
    let space = ModelSpace2D::new(1.0);
    let one = ModelHarmonic::new(Curvature(1.0), 0, 1.0, 0.0);
    let capped = GridSpec {
        start: 0.3,
        end: 0.5 * std::f64::consts::PI,
        n_points: 6,
        spacing: Spacing::Linear,
    }
    .build()?;
    let report = monotonicity_check(
        "model2d:K=1 capped",
        &|t| space.norm_h(&one, t, spec.degree),
        &capped,
        1e-9,
    )?;
    rows.extend(report.rows);
    let uncapped = GridSpec {
        start: 0.3,
        end: 2.8,
        n_points: 8,
        spacing: Spacing::Linear,
    }
    .build()?;
    let report = monotonicity_check(
        "model2d:K=1 uncapped",
        &|t| space.norm_h(&one, t, spec.degree),
        &uncapped,
        1e-9,
    )?;
    notes.push(format!(
        "uncapped model-space run decreases past the quarter period as \
         documented (passed = {})",
        report.passed()
    ));
    Ok(SuiteOutput {
        curve: Vec::new(),
        rows,
        err_est: None,
        notes,
    })
}

fn counterexample_rows(config: &RunConfig) -> Result<(Vec<CheckRow>, Vec<String>)> {
    let table = square_counterexample(&config.nu, &config.quadrature)?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for r in &table {
        rows.push(CheckRow::identity(
            "counterexample_tangential",
            r.nu,
            r.tangential_numeric,
            r.tangential_closed_form,
            1e-6 * r.tangential_closed_form.abs().max(1.0),
        ));
        rows.push(CheckRow::identity(
            "counterexample_hhn",
            r.nu,
            r.hhn_numeric,
            r.hhn_closed_form,
            1e-6 * r.hhn_closed_form.abs().max(1.0),
        ));
        notes.push(format!(
            "nu={}: ratio -lhs/int(h h_n) = {}",
            r.nu,
            fmt(r.ratio)
        ));
    }
    Ok((rows, notes))
}

/// Runs a named suite and writes `curve.csv`, `report.csv`, `summary.txt`
/// into the output directory. Returns the process exit code: 0 when every
/// check row passes, 1 otherwise.
pub fn run_suite(config: &RunConfig) -> Result<i32> {
    config.validate()?;
    let out = match config.suite.as_str() {
        "flat_sharpness" => flat_sharpness_suite(config)?,
        "model_sharpness" => model_sharpness_suite(config)?,
        "ellipse" => {
            let family = parse_family("ellipse:1,2")?;
            family_suite(config, family.as_ref(), "planar:2", true, true)?
        }
        "ellipsoid" => {
            let family = parse_family("ellipsoid:1,1.5,2")?;
            family_suite(config, family.as_ref(), "poly:x1x2", false, false)?
        }
        "torus" => {
            let family = parse_family("torus:3,1,0.3")?;
            let mut cfg = config.clone();
            let (lo, hi) = family.t_range();
            if cfg.grid.start < lo || cfg.grid.end > hi {
                cfg.grid.start = lo.max(0.1);
                cfg.grid.end = hi.min(0.6);
            }
            torus_suite(&cfg, family.as_ref())?
        }
        "eigen" => eigen_suite(config)?,
        "mean_value" => mean_value_suite(config)?,
        "monotonicity" => monotonicity_suite(config)?,
        "square_counterexample" => {
            let (rows, notes) = counterexample_rows(config)?;
            SuiteOutput {
                curve: Vec::new(),
                rows,
                err_est: None,
                notes,
            }
        }
        other => return Err(Error::Config(format!("unknown suite: {other}"))),
    };
    fs::create_dir_all(&config.output)
        .map_err(|e| Error::Config(format!("cannot create output dir: {e}")))?;
    write_curve_csv(&config.output.join("curve.csv"), &out.curve)?;
    write_report_csv(&config.output.join("report.csv"), &out.rows)?;
    write_summary(
        &config.output.join("summary.txt"),
        &config.suite,
        &out.rows,
        out.err_est,
        &out.notes,
    )?;
    Ok(if out.rows.iter().all(|r| r.pass) { 0 } else { 1 })
}

/// Torus suite: the printed-constant route needs no three-point step (the
/// family is not 1-homogeneous), so this runs the differential inequality
/// in both the family-bounds and the printed (C, B) conventions.
fn torus_suite(config: &RunConfig, family: &dyn LevelFamily) -> Result<SuiteOutput> {
    let spec = &config.quadrature;
    let grid = config.grid.build()?;
    let torus = TorusDistance::new(3, 1, 0.3)?;
    let (c, b) = torus.constants_cb();
    let mut reports = Vec::new();
    for h in poly_catalog(family.ambient_dim(), 3) {
        reports.push(differential_inequality_check(
            family,
            &h,
            &grid,
            config.tolerance,
            spec,
        )?);
        reports.push(differential_inequality_with(
            family,
            &h,
            &grid,
            &|t| c / t,
            &|t| b / (t * t),
            config.tolerance,
            spec,
            "torus_printed_cb",
        )?);
    }
    let bounds = family.bounds();
    let h_curve = parse_harmonic(3, "poly:x1")?;
    let curve = build_curve(family, &h_curve, &grid, spec, false)?;
    Ok(SuiteOutput {
        curve: curve_rows(&curve, &|t| bounds.tau(t), &|t| bounds.rho(t)),
        rows: collect(&reports),
        err_est: None,
        notes: vec![format!("printed constants: C = {}, B = {}", fmt(c), fmt(b))],
    })
}

/// `curve` subcommand: writes curve.csv for the configured family/harmonic.
pub fn run_curve(config: &RunConfig) -> Result<i32> {
    config.validate()?;
    let family = parse_family(&config.family)?;
    let h = parse_harmonic(family.ambient_dim(), &config.harmonic)?;
    let grid = config.grid.build()?;
    let (lo, hi) = family.t_range();
    if grid[0] < lo || *grid.last().unwrap() > hi {
        return Err(Error::Config(format!(
            "grid [{}, {}] outside the family range [{lo}, {hi}]",
            grid[0],
            grid.last().unwrap()
        )));
    }
    let with_d = family.ambient_dim() == 2;
    let curve = build_curve(family.as_ref(), &h, &grid, &config.quadrature, with_d)?;
    let bounds = family.bounds();
    let rows = curve_rows(&curve, &|t| bounds.tau(t), &|t| bounds.rho(t));
    fs::create_dir_all(&config.output)
        .map_err(|e| Error::Config(format!("cannot create output dir: {e}")))?;
    write_curve_csv(&config.output.join("curve.csv"), &rows)?;
    Ok(0)
}

/// `constants` subcommand: prints the conditioning constants of a family in
/// both the printed and the unified (tau, rho) conventions.
pub fn constants_table(family_name: &str) -> Result<String> {
    let mut text = String::new();
    if let Some(args) = family_name.strip_prefix("sampled:") {
        let axes: Vec<f64> = args
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad axis in {family_name}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let n = axes.len();
        let profile = move |u: &[f64]| {
            1.0 / u
                .iter()
                .zip(&axes)
                .map(|(v, a)| (v / a) * (v / a))
                .sum::<f64>()
                .sqrt()
        };
        let c = homogeneous_constants_sampled(&profile, n, 10_000)?;
        let _ = writeln!(text, "family: {family_name} (sampled, {} points)", c.n_samples);
        let _ = writeln!(text, "C1 = {}", fmt(c.c1));
        let _ = writeln!(text, "C2 = {}", fmt(c.c2));
        let _ = writeln!(text, "C3 = {}", fmt(c.c3));
        let _ = writeln!(text, "C4 = {}", fmt(c.c4));
        let _ = writeln!(text, "A = C2 + C4 = {}", fmt(c.a));
        let _ = writeln!(text, "b (rhs = -b/t^2 convention) = {}", fmt(c.b));
        return Ok(text);
    }
    let family = parse_family(family_name)?;
    let bounds = family.bounds();
    let _ = writeln!(text, "family: {}", family.label());
    let _ = writeln!(text, "m(1) = {}", fmt(bounds.m(1.0)));
    let _ = writeln!(text, "M(1) = {}", fmt(bounds.big_m(1.0)));
    let _ = writeln!(text, "g(1) = {}", fmt(bounds.g(1.0)));
    let _ = writeln!(text, "K(1) = {}", fmt(bounds.big_k(1.0)));
    let _ = writeln!(text, "tau(1) = {}", fmt(bounds.tau(1.0)));
    let _ = writeln!(text, "rho(1) = {}", fmt(bounds.rho(1.0)));
    let label = family.label();
    if label.starts_with("radial") || label.starts_with("ellipsoid") {
        // printed (A, B) pair
        let parsed = family_name.split_once(':').map(|x| x.1).unwrap_or("");
        let ell = if label.starts_with("radial") {
            Ellipsoid::sphere(family.ambient_dim())
        } else {
            Ellipsoid::new(
                parsed
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().unwrap())
                    .collect(),
            )?
        };
        let (a, b) = ell.constants_ab();
        let _ = writeln!(text, "A = {}", fmt(a));
        let _ = writeln!(text, "B (printed) = {}", fmt(b));
    } else if label.starts_with("torus") {
        let args: Vec<f64> = family_name
            .split_once(':')
            .map(|x| x.1)
            .unwrap_or("")
            .split(',')
            .map(|v| v.trim().parse::<f64>().unwrap())
            .collect();
        let torus = TorusDistance::new(args[0] as usize, args[1] as usize, args[2])?;
        let (c, b) = torus.constants_cb();
        let _ = writeln!(text, "C = {}", fmt(c));
        let _ = writeln!(text, "B (printed) = {}", fmt(b));
    }
    Ok(text)
}

/// `counterexample` subcommand: prints the table and writes report.csv.
pub fn run_counterexample(config: &RunConfig) -> Result<i32> {
    let (rows, notes) = counterexample_rows(config)?;
    let mut text = String::new();
    for note in &notes {
        let _ = writeln!(text, "{note}");
    }
    print!("{text}");
    fs::create_dir_all(&config.output)
        .map_err(|e| Error::Config(format!("cannot create output dir: {e}")))?;
    write_report_csv(&config.output.join("report.csv"), &rows)?;
    write_summary(
        &config.output.join("summary.txt"),
        "square_counterexample",
        &rows,
        None,
        &notes,
    )?;
    Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_builds_and_validates() {
        let grid = GridSpec {
            start: 0.5,
            end: 2.0,
            n_points: 5,
            spacing: Spacing::Linear,
        };
        let g = grid.build().unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[0] - 0.5).abs() < 1e-15 && (g[4] - 2.0).abs() < 1e-15);
        let bad = GridSpec {
            n_points: 2,
            ..grid.clone()
        };
        assert!(bad.build().is_err());
        let log = GridSpec {
            spacing: Spacing::Log,
            ..grid
        };
        let g = log.build().unwrap();
        assert!((g[2] - 1.0).abs() < 1e-12); // geometric midpoint of 0.5, 2
    }

    #[test]
    fn config_parsing_and_overrides() {
        let mut config = RunConfig::default();
        config.set("t_start", "0.3").unwrap();
        config.set("spacing", "log").unwrap();
        config.set("nu", "1, 2.5").unwrap();
        assert_eq!(config.grid.start, 0.3);
        assert_eq!(config.nu, vec![1.0, 2.5]);
        assert!(config.set("bogus_key", "1").is_err());
        assert!(config.set("t_start", "abc").is_err());
    }

    #[test]
    fn config_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "# comment\nsuite = ellipse\nt_end = 1.5 # inline\n").unwrap();
        let mut config = RunConfig::default();
        config.load_file(&path).unwrap();
        assert_eq!(config.suite, "ellipse");
        assert_eq!(config.grid.end, 1.5);
        fs::write(&path, "no_equals_sign\n").unwrap();
        assert!(config.load_file(&path).is_err());
    }

    #[test]
    fn family_and_harmonic_parsing() {
        assert_eq!(parse_family("radial:3").unwrap().ambient_dim(), 3);
        assert_eq!(parse_family("ellipse:1,2").unwrap().ambient_dim(), 2);
        assert_eq!(parse_family("torus:3,1,0.3").unwrap().ambient_dim(), 3);
        assert!(parse_family("klein:1").is_err());
        assert!(parse_harmonic(2, "planar:2").is_ok());
        assert!(parse_harmonic(3, "poly:x1x2x3").is_ok());
        assert!(parse_harmonic(3, "poly:nope").is_err());
    }

    #[test]
    fn constants_tables() {
        let text = constants_table("ellipse:1,2").unwrap();
        assert!(text.contains("A = 1.9750000000000000e1"), "{text}");
        let text = constants_table("torus:3,1,0.3").unwrap();
        assert!(text.contains("C = 3.7450980"), "{text}");
        assert!(constants_table("klein:1").is_err());
    }

    #[test]
    fn flat_sharpness_suite_passes_and_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            suite: "flat_sharpness".to_string(),
            output: dir.path().to_path_buf(),
            ..RunConfig::default()
        };
        assert_eq!(run_suite(&config).unwrap(), 0);
        let first_curve = fs::read(dir.path().join("curve.csv")).unwrap();
        let first_report = fs::read(dir.path().join("report.csv")).unwrap();
        assert_eq!(run_suite(&config).unwrap(), 0);
        assert_eq!(first_curve, fs::read(dir.path().join("curve.csv")).unwrap());
        assert_eq!(
            first_report,
            fs::read(dir.path().join("report.csv")).unwrap()
        );
        let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
        assert!(summary.contains("0 fail"), "{summary}");
    }

    #[test]
    fn malformed_grid_is_a_config_error() {
        let config = RunConfig {
            grid: GridSpec {
                start: 0.5,
                end: 2.0,
                n_points: 2,
                spacing: Spacing::Linear,
            },
            ..RunConfig::default()
        };
        assert!(matches!(run_suite(&config), Err(Error::Config(_))));
    }
}
