//! The square level set S_1 = { |x| + |y| = 1 } of the Lipschitz function
//! |x| + |y|. Not a `LevelFamily`: the corners break the smoothness needed
//! by the convexity machinery, which is exactly what the counterexample
//! computations on it demonstrate. Only the t = 1 level is exposed.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::quadrature::{ParamBox, SurfaceChart};

#[derive(Debug, Clone, Copy, Default)]
pub struct SquareBoundary;

impl SquareBoundary {
    /// Chart with four unit-length parameter boxes, one per edge, walking
    /// the square counterclockwise from (1, 0). The area element is the
    /// constant sqrt(2).
    pub fn chart(&self) -> SurfaceChart {
        let map = Box::new(|u: &[f64]| {
            let (edge, s) = split_param(u[0]);
            match edge {
                0 => vec![1.0 - s, s],
                1 => vec![-s, 1.0 - s],
                2 => vec![s - 1.0, -s],
                _ => vec![s, s - 1.0],
            }
        });
        let boxes = (0..4)
            .map(|j| ParamBox {
                lo: vec![j as f64],
                hi: vec![j as f64 + 1.0],
            })
            .collect();
        SurfaceChart::new(1, boxes, map)
            .with_area_element(Box::new(|_u: &[f64]| std::f64::consts::SQRT_2))
    }

    /// Outward unit normal at an edge-interior point.
    pub fn outward_normal(&self, x: &[f64]) -> Vec<f64> {
        vec![
            FRAC_1_SQRT_2 * x[0].signum(),
            FRAC_1_SQRT_2 * x[1].signum(),
        ]
    }
}

fn split_param(u: f64) -> (usize, f64) {
    let edge = (u.floor() as usize).min(3);
    (edge, u - edge as f64)
}
