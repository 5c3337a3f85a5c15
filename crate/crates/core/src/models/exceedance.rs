//! The point process of exceedances `Σ_i δ_{(‖X_i‖ / a_n, X_i / ‖X_i‖)}`.

use alloc::vec::Vec;

use crate::cadlag::{PathEnsemble, VectorStepFunction};
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExceedancePoint {
    pub radius: f64,
    /// Direction with sup norm one.
    pub spectral: VectorStepFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExceedanceProcess {
    pub points: Vec<ExceedancePoint>,
    /// Row size of the array the points came from.
    pub n: usize,
}

impl ExceedanceProcess {
    pub fn radii(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.radius).collect()
    }

    /// `#{i : radius_i > r}`.
    pub fn count_above(&self, r: f64) -> usize {
        self.points.iter().filter(|p| p.radius > r).count()
    }
}

/// Points of the row `paths` at level `a_n`, in input order. Zero paths
/// contribute the null mass and are dropped.
pub fn exceedance_process(paths: &PathEnsemble, a_n: f64) -> Result<ExceedanceProcess> {
    if !(a_n > 0.0 && a_n.is_finite()) {
        return Err(domain("norming constant a_n must be positive"));
    }
    let points = paths
        .paths()
        .iter()
        .filter_map(|x| {
            let norm = x.sup_norm();
            (norm > 0.0).then(|| ExceedancePoint {
                radius: norm / a_n,
                spectral: unit_direction(x, norm),
            })
        })
        .collect();
    Ok(ExceedanceProcess { points, n: paths.len() })
}

// X / ‖X‖ with the attained extreme pinned to ±1 so the norm is exactly one
fn unit_direction(x: &VectorStepFunction, norm: f64) -> VectorStepFunction {
    let mut w = x.scale(1.0 / norm);
    if w.sup_norm() != 1.0 {
        let comps = x
            .components()
            .iter()
            .map(|c| {
                let vals = c
                    .values()
                    .iter()
                    .map(|&v| if v.abs() == norm { v.signum() } else { v / norm })
                    .collect();
                crate::cadlag::StepFunction::new(c.interval(), c.breakpoints().to_vec(), vals)
                    .expect("same breakpoints")
            })
            .collect();
        w = VectorStepFunction::new(comps).expect("shared interval");
    }
    w
}
