//! Splitting a centred row sum into its small-jump and large-jump parts.

use alloc::vec::Vec;

use super::PathBuilder;
use crate::cadlag::{mean_path, PathEnsemble, VectorStepFunction};
use crate::error::{domain, Result};
use crate::tail::TailModel;

/// Which terms of the row are kept: `‖X_i‖ ≤ a_n ε` or `‖X_i‖ > a_n ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Above,
}

/// Source of the expectation subtracted from a truncated row sum.
#[derive(Debug, Clone, PartialEq)]
pub enum TruncationCentering {
    /// Rows `X_k = z_k 1_{[k/n, 1]}`, `k = 1, …, n`; closed-form truncated means.
    PartialSum { tail: TailModel },
    /// Rows `X_i = R_i W_i`; closed-form truncated means of `R` times `E[W]`.
    ParetoProcess { tail: TailModel, spectral_mean: VectorStepFunction },
    /// Monte Carlo means of whole truncated row sums, per level `ε`.
    MonteCarlo {
        levels: Vec<(f64, VectorStepFunction)>,
        full: VectorStepFunction,
    },
}

impl TruncationCentering {
    /// Averages `Σ_i X_i 1{‖X_i‖ ≤ a_n ε}` and `Σ_i X_i` over independent rows.
    pub fn monte_carlo(rows: &[PathEnsemble], a_n: f64, epsilons: &[f64]) -> Result<Self> {
        if rows.is_empty() {
            return Err(domain("Monte Carlo centering needs at least one row"));
        }
        check_level(a_n, epsilons.iter().copied().fold(1.0, f64::min))?;
        let sums = |keep: &dyn Fn(f64) -> bool| -> Result<VectorStepFunction> {
            let totals = rows.iter().map(|row| row_sum(row, keep)).collect();
            Ok(mean_path(&PathEnsemble::new(totals, 0, "centering")?))
        };
        let levels = epsilons
            .iter()
            .map(|&e| Ok((e, sums(&|norm| norm <= a_n * e)?)))
            .collect::<Result<_>>()?;
        Ok(Self::MonteCarlo {
            levels,
            full: sums(&|_| true)?,
        })
    }

    // Expected row sum of the kept terms; `cutoff = None` keeps all.
    fn expected(&self, row: &PathEnsemble, a_n: f64, eps: f64, side: Option<Side>) -> Result<VectorStepFunction> {
        let n = row.len();
        let cutoff = a_n * eps;
        let scalar_mean = |tail: &TailModel| -> Result<f64> {
            Ok(match side {
                None => tail.mean(),
                Some(Side::Below) => tail.truncated_moment(1, cutoff)?,
                Some(Side::Above) => tail.upper_truncated_mean(cutoff)?,
            })
        };
        match self {
            Self::PartialSum { tail } => {
                if row.dim() != 1 {
                    return Err(domain("partial-sum centering needs scalar paths"));
                }
                let m = scalar_mean(tail)?;
                let mut b = PathBuilder::with_capacity(row.paths()[0].interval(), 1, n);
                for k in 1..=n {
                    b.add_jump(0, k as f64 / n as f64, m);
                }
                Ok(b.finish(1.0))
            }
            Self::ParetoProcess { tail, spectral_mean } => {
                if spectral_mean.dim() != row.dim() {
                    return Err(domain("spectral mean dimension differs from the paths"));
                }
                Ok(spectral_mean.scale(n as f64 * scalar_mean(tail)?))
            }
            Self::MonteCarlo { levels, full } => {
                let below = || {
                    levels
                        .iter()
                        .find(|(e, _)| *e == eps)
                        .map(|(_, f)| f)
                        .ok_or_else(|| domain("no Monte Carlo centering stored for this level"))
                };
                match side {
                    None => Ok(full.clone()),
                    Some(Side::Below) => Ok(below()?.clone()),
                    Some(Side::Above) => {
                        let mut b = PathBuilder::new(full.interval(), full.dim());
                        b.add_vector(full, 1.0);
                        b.add_vector(below()?, -1.0);
                        Ok(b.finish(1.0))
                    }
                }
            }
        }
    }
}

fn check_level(a_n: f64, eps: f64) -> Result<()> {
    if !(a_n > 0.0 && a_n.is_finite()) {
        return Err(domain("norming constant a_n must be positive"));
    }
    if !(eps > 0.0) {
        return Err(domain("truncation level epsilon must be positive"));
    }
    Ok(())
}

fn row_sum(row: &PathEnsemble, keep: &dyn Fn(f64) -> bool) -> VectorStepFunction {
    let first = &row.paths()[0];
    let mut b = PathBuilder::new(first.interval(), first.dim());
    for x in row.paths().iter().filter(|x| keep(x.sup_norm())) {
        b.add_vector(x, 1.0);
    }
    b.finish(1.0)
}

fn centred(
    row: &PathEnsemble,
    a_n: f64,
    eps: f64,
    side: Option<Side>,
    centering: &TruncationCentering,
) -> Result<VectorStepFunction> {
    let cutoff = a_n * eps;
    let keep = |norm: f64| match side {
        None => true,
        Some(Side::Below) => norm <= cutoff,
        Some(Side::Above) => norm > cutoff,
    };
    let first = &row.paths()[0];
    let mut b = PathBuilder::new(first.interval(), first.dim());
    for x in row.paths().iter().filter(|x| keep(x.sup_norm())) {
        b.add_vector(x, 1.0);
    }
    b.add_vector(&centering.expected(row, a_n, eps, side)?, -1.0);
    Ok(b.finish(1.0 / a_n))
}

/// `a_n^{-1} Σ_i (X_i 1{‖X_i‖ ≤ a_n ε} − E[·])` for [`Side::Below`], and the
/// complementary large-jump sum for [`Side::Above`].
pub fn truncated_sum(
    paths: &PathEnsemble,
    a_n: f64,
    epsilon: f64,
    side: Side,
    centering: &TruncationCentering,
) -> Result<VectorStepFunction> {
    check_level(a_n, epsilon)?;
    centred(paths, a_n, epsilon, Some(side), centering)
}

/// `a_n^{-1} Σ_i (X_i − E[X_i])`, the sum both sides add up to.
pub fn full_centered_sum(paths: &PathEnsemble, a_n: f64, centering: &TruncationCentering) -> Result<VectorStepFunction> {
    check_level(a_n, 1.0)?;
    centred(paths, a_n, 1.0, None, centering)
}
