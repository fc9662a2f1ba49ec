//! Sampled conditioning constants for a general 1-homogeneous family given
//! by a star-shaped profile: f(x) = |x| / rho(x/|x|), so f = 1 exactly on
//! the surface { rho(u) u : |u| = 1 }.
//!
//! The constants are deterministic sampled brackets (seeded sphere points,
//! min/max over the samples, no extrapolation):
//!   C1 = min t q,  C2 = max t q   for q = Delta f / |grad f|^2,
//!   C3 = min t^2 G,
//!   C4 = max ( 2 lambda_max(sym J_V) - div V )  for V = f grad f / |grad f|^2,
//! all evaluated on the level surface t = 1 (every quantity is scale
//! invariant). The reported pair is a = C2 + C4 and b = -(C3 + C1 C2 + C1 C4),
//! with b normalized so the differential inequality reads
//! (log H)'' + (a/t)(log H)' >= -b/t^2.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{dot, norm};

#[derive(Debug, Clone, Copy)]
pub struct SampledConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub a: f64,
    pub b: f64,
    pub n_samples: usize,
}

type Profile<'a> = dyn Fn(&[f64]) -> f64 + 'a;

/// f(x) = |x| / rho(x/|x|) for the radial profile rho on the unit sphere.
pub fn star_shaped_value(profile: &Profile, x: &[f64]) -> f64 {
    let r = norm(x);
    if r == 0.0 {
        return 0.0;
    }
    let u: Vec<f64> = x.iter().map(|v| v / r).collect();
    r / profile(&u)
}

fn fd_gradient(profile: &Profile, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|j| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            (star_shaped_value(profile, &xp) - star_shaped_value(profile, &xm)) / (2.0 * h)
        })
        .collect()
}

fn fd_laplacian(profile: &Profile, x: &[f64], h: f64) -> f64 {
    let center = star_shaped_value(profile, x);
    let mut lap = 0.0;
    for j in 0..x.len() {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        lap += (star_shaped_value(profile, &xp) - 2.0 * center
            + star_shaped_value(profile, &xm))
            / (h * h);
    }
    lap
}

/// Delta f / |grad f|^2 via finite differences.
fn q_value(profile: &Profile, x: &[f64]) -> f64 {
    let g = fd_gradient(profile, x, 1e-5);
    // a wide step: the h^2 truncation stays ~1e-6 while keeping the
    // rounding noise (eps/h^2) far below it
    fd_laplacian(profile, x, 1e-3) / dot(&g, &g)
}

/// G = <grad q, grad f> / |grad f|^2 via finite differences of q.
/// Nested differencing needs wide steps; the result carries ~1e-5 noise.
fn g_value(profile: &Profile, x: &[f64]) -> f64 {
    let g = fd_gradient(profile, x, 1e-5);
    let h = 1e-3;
    let mut d = 0.0;
    for j in 0..x.len() {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        d += (q_value(profile, &xp) - q_value(profile, &xm)) / (2.0 * h) * g[j];
    }
    d / dot(&g, &g)
}

/// The extension field V = f grad f / |grad f|^2 (1-homogeneous by
/// construction).
fn v_field(profile: &Profile, x: &[f64]) -> Vec<f64> {
    let f = star_shaped_value(profile, x);
    let g = fd_gradient(profile, x, 1e-5);
    let g2 = dot(&g, &g);
    g.iter().map(|gi| f * gi / g2).collect()
}

/// 2 lambda_max(sym J_V) - div V at x, the pointwise quantity whose maximum
/// gives C4.
fn c4_value(profile: &Profile, x: &[f64]) -> f64 {
    let n = x.len();
    let h = 1e-4;
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let vp = v_field(profile, &xp);
        let vm = v_field(profile, &xm);
        for i in 0..n {
            jac[(i, j)] = (vp[i] - vm[i]) / (2.0 * h);
        }
    }
    let div: f64 = (0..n).map(|i| jac[(i, i)]).sum();
    let sym = 0.5 * (&jac + jac.transpose());
    let eigen = sym.symmetric_eigen();
    let lambda_max = eigen.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    2.0 * lambda_max - div
}

pub fn homogeneous_constants_sampled(
    profile: &Profile,
    ambient_dim: usize,
    n_samples: usize,
) -> Result<SampledConstants> {
    if ambient_dim < 2 {
        return Err(Error::Config("ambient dimension must be >= 2".into()));
    }
    if n_samples == 0 {
        return Err(Error::Config("n_samples must be positive".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let (mut c1, mut c2) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut c3 = f64::INFINITY;
    let mut c4 = f64::NEG_INFINITY;
    for _ in 0..n_samples {
        let mut u: Vec<f64> = (0..ambient_dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let r = norm(&u);
        if r < 1e-8 {
            continue;
        }
        u.iter_mut().for_each(|v| *v /= r);
        let rho = profile(&u);
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::Domain(format!(
                "profile must be positive and finite, got {rho}"
            )));
        }
        // surface point at level t = 1
        let x: Vec<f64> = u.iter().map(|v| v * rho).collect();
        let q = q_value(profile, &x);
        c1 = c1.min(q);
        c2 = c2.max(q);
        c3 = c3.min(g_value(profile, &x));
        c4 = c4.max(c4_value(profile, &x));
    }
    let a = c2 + c4;
    let b = -(c3 + c1 * c2 + c1 * c4);
    Ok(SampledConstants {
        c1,
        c2,
        c3,
        c4,
        a,
        b,
        n_samples,
    })
}
