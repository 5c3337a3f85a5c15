//! Analytic constants of the stable limit and of its series representation.

use crate::error::{domain, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(domain("alpha must lie in (1, 2)"))
    }
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `Γ(a) / Γ(b)` for positive arguments, stable for large ones.
pub(crate) fn gamma_ratio(a: f64, b: f64) -> f64 {
    if a < 150.0 && b < 150.0 {
        libm::tgamma(a) / libm::tgamma(b)
    } else {
        libm::exp(ln_gamma(a) - ln_gamma(b))
    }
}

/// `c_α^α = Γ(1 − α) cos(πα/2)`; positive on `(1, 2)` since both factors are
/// negative there.
pub fn c_alpha_pow(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(libm::tgamma(1.0 - alpha) * libm::cos(core::f64::consts::PI * alpha / 2.0))
}

/// `c_α = (Γ(1 − α) cos(πα/2))^{1/α}`, the scale of the stable limit per unit
/// of spectral mass.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    Ok(libm::pow(c_alpha_pow(alpha)?, 1.0 / alpha))
}

/// `E[Γ_i^{-1/α}] = Γ(i − 1/α) / Γ(i)` where `Γ_i ~ Gamma(i, 1)` is the i-th
/// arrival of a unit-rate Poisson process.
pub fn gamma_frac_moment(i: usize, alpha: f64) -> Result<f64> {
    if i == 0 {
        return Err(domain("arrival index starts at 1"));
    }
    check_alpha(alpha)?;
    let i = i as f64;
    Ok(gamma_ratio(i - 1.0 / alpha, i))
}

/// `Σ_{i > k} E[Γ_i^{-2/α}]`, finite because `2/α > 1`.
///
/// Closed form from the telescoping identity
/// `(s − 1) Γ(i − s)/Γ(i) = Γ(i − s)/Γ(i − 1) − Γ(i + 1 − s)/Γ(i)` with `s = 2/α`.
pub fn gamma_second_moment_tail(k: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let s = 2.0 / alpha;
    if k == 0 {
        // E[Γ_1^{-s}] = Γ(1 − s) is infinite for s > 1
        return Ok(f64::INFINITY);
    }
    let k = k as f64;
    Ok(gamma_ratio(k + 1.0 - s, k) / (s - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    // composite Simpson on [0, 12] of 3 e^{-y^3}, i.e. ∫ x^{-2/3} e^{-x} dx after x = y^3
    fn gamma_one_third_by_quadrature() -> f64 {
        let n = 200_000;
        let h = 12.0 / n as f64;
        let f = |y: f64| 3.0 * (-y * y * y).exp();
        let mut s = f(0.0) + f(12.0);
        for j in 1..n {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(j as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn c_alpha_at_three_halves() {
        let v = c_alpha_pow(1.5).unwrap();
        assert!((v - (2.0 * core::f64::consts::PI).sqrt()).abs() < 1e-10);
        assert!((c_alpha(1.5).unwrap() - 1.845_270_148_644_028).abs() < 1e-10);
    }

    #[test]
    fn c_alpha_is_positive_across_range() {
        for j in 1..200 {
            let a = 1.0 + j as f64 / 200.0;
            let g = libm::tgamma(1.0 - a);
            let c = libm::cos(core::f64::consts::PI * a / 2.0);
            assert!(g < 0.0 && c < 0.0, "alpha {a}");
            assert!(c_alpha_pow(a).unwrap() > 0.0);
        }
        for a in [1.0, 2.0, 0.5, 2.5, f64::NAN] {
            assert!(c_alpha(a).is_err());
        }
    }

    #[test]
    fn reference_values() {
        // 30-digit values
        for (a, c) in [
            (1.2, 1.631_144_889_317_430_8),
            (1.3, 1.680_942_502_067_550_5),
            (1.7, 2.195_723_088_089_918),
            (1.8, 2.567_138_850_536_383),
        ] {
            assert!((c_alpha(a).unwrap() - c).abs() < 1e-10, "alpha {a}");
        }
    }

    #[test]
    fn first_moment_matches_quadrature() {
        let quad = gamma_one_third_by_quadrature();
        assert!((quad - 2.678_938_534_707_747_6).abs() < 1e-9);
        assert!((gamma_frac_moment(1, 1.5).unwrap() - quad).abs() < 1e-8);
    }

    #[test]
    fn moments_decrease_and_follow_stirling() {
        let alpha = 1.5;
        let mut prev = f64::INFINITY;
        for i in 1..=100 {
            let m = gamma_frac_moment(i, alpha).unwrap();
            assert!(m > 0.0 && m < prev, "i = {i}");
            prev = m;
        }
        let ratio = gamma_frac_moment(1000, alpha).unwrap() / 1000f64.powf(-1.0 / alpha);
        assert!((ratio - 1.0).abs() < 0.01);
        assert!(gamma_frac_moment(0, alpha).is_err());
        assert!(gamma_frac_moment(3, 2.0).is_err());
    }

    #[test]
    fn squared_moments_are_summable() {
        // partial sums of m_i^2 stabilise: Cauchy increments shrink
        let alpha = 1.5;
        let partial = |n: usize| (2..=n).map(|i| gamma_frac_moment(i, alpha).unwrap().powi(2)).sum::<f64>();
        let (s1, s2, s3) = (partial(1_000), partial(10_000), partial(100_000));
        // tail of Σ i^{-4/3} shrinks by 10^{-1/3} per decade
        assert!((s3 - s2) / (s2 - s1) < 0.5);
        assert!(s3 - s2 > 0.0);
    }

    #[test]
    fn second_moment_tail_closed_form() {
        let alpha = 1.5;
        let s = 2.0 / alpha;
        for k in [1usize, 2, 10, 100] {
            // brute partial sum up to N plus the integral tail ∫_N^∞ x^{-s} dx
            let n = 2_000_000usize;
            let mut sum = 0.0;
            for i in (k + 1..=n).rev() {
                sum += gamma_ratio(i as f64 - s, i as f64);
            }
            sum += (n as f64 + 0.5).powf(1.0 - s) / (s - 1.0);
            let closed = gamma_second_moment_tail(k, alpha).unwrap();
            assert!((closed - sum).abs() / closed < 1e-4, "k {k}: {closed} vs {sum}");
        }
        assert!(gamma_second_moment_tail(0, alpha).unwrap().is_infinite());
    }
}
