//! Uniform and Skorokhod J1 distances between step functions.
//!
//! For step functions the J1 infimum over time changes reduces to a
//! combinatorial problem. A time change only moves the jumps of `g`, keeping
//! their order, so every admissible `λ` is described (up to closure) by an
//! interleaving of the two jump sequences in which some jumps of `g` land
//! exactly on jumps of `f`. Along an interleaving the pair of current plateau
//! values is fixed by how many jumps of each function have been passed, and the
//! cheapest position for an unmatched jump of `g` is its own time clamped to the
//! gap between the neighbouring jumps of `f`. The distance is then a min-max
//! path problem on the `(k + 1) × (m + 1)` lattice, solved exactly.

use alloc::vec;

use super::{linear_combine, StepFunction};
use crate::error::{domain, Result};

/// `sup_t |f(t) − g(t)|`.
pub fn uniform_distance(f: &StepFunction, g: &StepFunction) -> Result<f64> {
    Ok(linear_combine(&[1.0, -1.0], &[f, g])?.sup_norm())
}

/// Skorokhod J1 distance
/// `inf_λ max(sup|λ − id|, sup|f − g∘λ|)` over increasing homeomorphisms of the
/// interval.
///
/// The value is exact for step functions of any size; `tol` only has to be
/// positive and bounds the reported error trivially.
pub fn j1_distance(f: &StepFunction, g: &StepFunction, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(domain("j1_distance needs tol > 0"));
    }
    if f.interval() != g.interval() {
        return Err(domain("functions live on different intervals"));
    }
    Ok(exact_j1(f, g))
}

/// `min(d_J1, 1)`, the bounded variant used on point-measure spaces.
pub fn bounded_j1_distance(f: &StepFunction, g: &StepFunction, tol: f64) -> Result<f64> {
    Ok(j1_distance(f, g, tol)?.min(1.0))
}

fn exact_j1(f: &StepFunction, g: &StepFunction) -> f64 {
    let interval = f.interval();
    let (a, b) = (interval.a(), interval.b());
    let (tf, vf) = (f.breakpoints(), f.values());
    let (tg, vg) = (g.breakpoints(), g.values());
    let (k, m) = (tf.len(), tg.len());
    let f_at_end = tf.last() == Some(&b);
    let g_at_end = tg.last() == Some(&b);
    // a jump at b is fixed by λ(b) = b and must be the last event
    let closed = |i: usize, j: usize| (f_at_end && i == k) || (g_at_end && j == m);

    let width = m + 1;
    let mut cost = vec![f64::INFINITY; (k + 1) * width];
    for i in 0..=k {
        for j in 0..=m {
            let here = (vf[i] - vg[j]).abs();
            if i == 0 && j == 0 {
                cost[0] = here;
                continue;
            }
            let mut best = f64::INFINITY;
            // f's i-th jump alone
            if i > 0 && !closed(i - 1, j) {
                let at_end = tf[i - 1] == b;
                if !at_end || (j == m && !g_at_end) {
                    best = best.min(cost[(i - 1) * width + j]);
                }
            }
            // g's j-th jump alone, placed between f's jumps i and i + 1
            if j > 0 && !closed(i, j - 1) {
                let s = tg[j - 1];
                if s == b {
                    if i == k && !f_at_end {
                        best = best.min(cost[i * width + j - 1]);
                    }
                } else {
                    let lo = if i == 0 { a } else { tf[i - 1] };
                    let hi = if i == k { b } else { tf[i] };
                    let shift = if s < lo {
                        lo - s
                    } else if s > hi {
                        s - hi
                    } else {
                        0.0
                    };
                    best = best.min(cost[i * width + j - 1].max(shift));
                }
            }
            // matched jumps
            if i > 0 && j > 0 && !closed(i - 1, j - 1) {
                let (t, s) = (tf[i - 1], tg[j - 1]);
                if (t == b) == (s == b) {
                    best = best.min(cost[(i - 1) * width + j - 1].max((t - s).abs()));
                }
            }
            cost[i * width + j] = best.max(here);
        }
    }
    cost[k * width + m]
}
