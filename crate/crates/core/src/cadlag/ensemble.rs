use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{merged_grid, StepFunction, VectorStepFunction};
use crate::error::{domain, Result};

/// A Monte Carlo sample of paths together with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    paths: Vec<VectorStepFunction>,
    pub seed: u64,
    pub model_tag: String,
    pub params: BTreeMap<String, String>,
}

impl PathEnsemble {
    pub fn new(paths: Vec<VectorStepFunction>, seed: u64, model_tag: impl Into<String>) -> Result<Self> {
        let Some(first) = paths.first() else {
            return Err(domain("an ensemble needs at least one path"));
        };
        let (interval, dim) = (first.interval(), first.dim());
        if paths.iter().any(|p| p.interval() != interval || p.dim() != dim) {
            return Err(domain("ensemble paths must share interval and dimension"));
        }
        Ok(Self {
            paths,
            seed,
            model_tag: model_tag.into(),
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn paths(&self) -> &[VectorStepFunction] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.paths[0].dim()
    }
}

/// Pointwise average of the ensemble, component by component.
///
/// Small ensembles are averaged plateau by plateau on the merged grid, so each
/// value is literally the mean of the paths' values there. Large ensembles
/// accumulate averaged jump sizes instead, which is linear-logarithmic in the
/// total number of jumps.
pub fn mean_path(ensemble: &PathEnsemble) -> VectorStepFunction {
    const DIRECT_BUDGET: usize = 1 << 22;
    let count = ensemble.len() as f64;
    let interval = ensemble.paths[0].interval();
    let components = (0..ensemble.dim())
        .map(|c| {
            let grid = merged_grid(ensemble.paths.iter().map(|p| p.component(c)));
            if grid.len().saturating_mul(ensemble.len()) <= DIRECT_BUDGET {
                let mut acc = alloc::vec![0.0; grid.len() + 1];
                for p in &ensemble.paths {
                    for (a, v) in acc.iter_mut().zip(p.component(c).values_on_grid(&grid)) {
                        *a += v;
                    }
                }
                acc.iter_mut().for_each(|a| *a /= count);
                StepFunction::from_grid_values(interval, &grid, acc)
            } else {
                let mut initial = 0.0;
                let mut jumps = Vec::new();
                for p in &ensemble.paths {
                    let f = p.component(c);
                    initial += f.values()[0];
                    for (t, w) in f.breakpoints().iter().zip(f.values().windows(2)) {
                        jumps.push((*t, (w[1] - w[0]) / count));
                    }
                }
                StepFunction::from_jumps(interval, initial / count, &mut jumps)
                    .expect("averages of finite values are finite")
            }
        })
        .collect();
    VectorStepFunction { components }
}
