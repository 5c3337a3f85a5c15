use alloc::vec::Vec;

use super::{Interval, StepFunction};
use crate::error::{domain, Result};

/// `sup_{s,t ∈ sub} |f(t) − f(s)|`, read off the plateaus that meet `sub`.
pub fn oscillation(f: &StepFunction, sub: &Interval) -> Result<f64> {
    if !f.interval().contains_interval(sub) {
        return Err(domain("oscillation window is not inside the function's interval"));
    }
    let first = f.plateau_index(sub.a());
    let last = f.plateau_index(sub.b());
    let active = &f.values()[first..=last];
    let (lo, hi) = active
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Ok(hi - lo)
}

/// The two-sided modulus
/// `sup { |f(t) − f(s)| ∧ |f(u) − f(t)| : s ≤ t ≤ u, u − s ≤ δ }`.
///
/// With plateaus `p < q < r`, `s` can sit just left of `t_{p+1}` and `u` at
/// `t_r`, so the triple is reachable iff `t_r − t_{p+1} < δ`. For each middle
/// plateau the admissible right plateaus shrink as `p` moves left, which gives
/// a scan linear in the number of jumps inside each δ-window.
pub fn w_doubleprime(f: &StepFunction, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(domain("w'' needs delta > 0"));
    }
    let t = f.breakpoints();
    let v = f.values();
    let k = t.len();
    let mut best = 0.0f64;
    let mut prefix_max: Vec<f64> = Vec::new();
    // plateau j starts at t[j-1]
    for q in 1..k {
        let tq = t[q - 1];
        prefix_max.clear();
        let mut running = 0.0f64;
        let mut r = q + 1;
        while r <= k && t[r - 1] - tq < delta {
            running = running.max((v[r] - v[q]).abs());
            prefix_max.push(running);
            r += 1;
        }
        let mut admissible = prefix_max.len();
        for p in (0..q).rev() {
            let left_end = t[p];
            while admissible > 0 && !(t[q + admissible - 1] - left_end < delta) {
                admissible -= 1;
            }
            if admissible == 0 {
                break;
            }
            let cand = (v[q] - v[p]).abs().min(prefix_max[admissible - 1]);
            best = best.max(cand);
        }
    }
    Ok(best)
}
