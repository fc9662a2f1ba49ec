//! Small vector helpers and the hyperspherical parameterization of the unit
//! sphere, shared by the family charts.

/// Euclidean inner product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// Point on the unit sphere S^{d-1} in hyperspherical coordinates.
///
/// With `angles = [p1, ..., p_{d-1}]` (p1..p_{d-2} in [0, pi], the last in
/// [0, 2pi]):
///   u1 = cos p1, u2 = sin p1 cos p2, ..., u_d = sin p1 ... sin p_{d-1}.
/// For d = 2 this is the usual circle parameterization.
pub fn unit_sphere_point(angles: &[f64]) -> Vec<f64> {
    let d = angles.len() + 1;
    let mut u = vec![0.0; d];
    let mut sin_prod = 1.0;
    for (i, &phi) in angles.iter().enumerate() {
        u[i] = sin_prod * phi.cos();
        sin_prod *= phi.sin();
    }
    u[d - 1] = sin_prod;
    u
}

/// Columns of the Jacobian of `unit_sphere_point`: column j is the partial
/// derivative with respect to `angles[j]`.
pub fn unit_sphere_jacobian(angles: &[f64]) -> Vec<Vec<f64>> {
    let m = angles.len();
    let d = m + 1;
    let mut cols = vec![vec![0.0; d]; m];
    for (j, col) in cols.iter_mut().enumerate() {
        // component i of the point is prod_{l<i} sin p_l * cos p_i (or the
        // full sine product for i = d-1); differentiate the factor in p_j.
        for i in 0..d {
            let last = i == d - 1;
            if !last && i < j {
                continue; // no p_j dependence
            }
            let mut v = 1.0;
            let upto = if last { m } else { i + 1 };
            for l in 0..upto {
                let phi = angles[l];
                let factor_is_cos = !last && l == i;
                let base = if factor_is_cos { phi.cos() } else { phi.sin() };
                if l == j {
                    v *= if factor_is_cos { -phi.sin() } else { phi.cos() };
                } else {
                    v *= base;
                }
            }
            if (last && j < m) || (!last && j <= i) {
                col[i] = v;
            }
        }
    }
    cols
}

/// Parameter ranges for the hyperspherical chart of S^{d-1}.
pub fn unit_sphere_box(d: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(d >= 2);
    let m = d - 1;
    let mut lo = vec![0.0; m];
    let mut hi = vec![std::f64::consts::PI; m];
    hi[m - 1] = 2.0 * std::f64::consts::PI;
    let _ = &mut lo;
    (lo, hi)
}
