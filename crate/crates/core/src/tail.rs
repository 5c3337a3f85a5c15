//! Scalar laws with a regularly varying right tail and exact quantiles.

use crate::error::{domain, Result};
use crate::rng::{uniform_open_closed, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailKind {
    /// `P(X > x) = (x / x_m)^{-α}` for `x ≥ x_m`.
    Pareto,
    /// Lomax: `P(X > x) = (1 + x / x_m)^{-α}` for `x ≥ 0`.
    ParetoShifted,
}

/// A heavy-tailed law with index `α ∈ (1, 2)` and scale `x_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    kind: TailKind,
    alpha: f64,
    x_m: f64,
}

impl TailModel {
    pub fn new(kind: TailKind, alpha: f64, x_m: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(domain("tail index alpha must lie in (1, 2)"));
        }
        if !(x_m > 0.0 && x_m.is_finite()) {
            return Err(domain("scale x_m must be positive and finite"));
        }
        Ok(Self { kind, alpha, x_m })
    }

    pub fn pareto(alpha: f64, x_m: f64) -> Result<Self> {
        Self::new(TailKind::Pareto, alpha, x_m)
    }

    pub fn kind(&self) -> TailKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn x_m(&self) -> f64 {
        self.x_m
    }

    pub fn mean(&self) -> f64 {
        match self.kind {
            TailKind::Pareto => self.alpha * self.x_m / (self.alpha - 1.0),
            TailKind::ParetoShifted => self.x_m / (self.alpha - 1.0),
        }
    }

    /// Lower end of the support.
    pub fn support_min(&self) -> f64 {
        match self.kind {
            TailKind::Pareto => self.x_m,
            TailKind::ParetoShifted => 0.0,
        }
    }

    /// `P(X > x)`.
    pub fn ccdf(&self, x: f64) -> f64 {
        match self.kind {
            TailKind::Pareto if x <= self.x_m => 1.0,
            TailKind::Pareto => libm::pow(x / self.x_m, -self.alpha),
            TailKind::ParetoShifted if x <= 0.0 => 1.0,
            TailKind::ParetoShifted => libm::pow(1.0 + x / self.x_m, -self.alpha),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.ccdf(x)
    }

    /// `F^←(p)` for `p ∈ [0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(domain("quantile level must lie in [0, 1)"));
        }
        Ok(self.scale_unit_tail(libm::pow(1.0 - p, -1.0 / self.alpha)))
    }

    // maps y = U^{-1/α} ≥ 1 to the law
    fn scale_unit_tail(&self, y: f64) -> f64 {
        match self.kind {
            TailKind::Pareto => self.x_m * y,
            TailKind::ParetoShifted => self.x_m * (y - 1.0),
        }
    }

    /// One inverse-CDF draw.
    pub fn sample(&self, rng: &mut Stream) -> f64 {
        let u = uniform_open_closed(rng);
        self.scale_unit_tail(libm::pow(u, -1.0 / self.alpha))
    }

    /// Norming constant `a_n = F^←(1 − 1/n)`; `x_m n^{1/α}` for pure Pareto.
    pub fn a_n(&self, n: u64) -> Result<f64> {
        if n < 1 {
            return Err(domain("a_n needs n >= 1"));
        }
        self.a_t(n as f64)
    }

    /// `F^←(1 − 1/T)` for a continuous index `T ≥ 1`.
    pub fn a_t(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) || !t.is_finite() {
            return Err(domain("norming index must be >= 1"));
        }
        Ok(self.scale_unit_tail(libm::pow(t, 1.0 / self.alpha)))
    }

    /// `E[X^k 1{X ≤ c}]` for `k ∈ {0, 1, 2}`.
    pub fn truncated_moment(&self, k: u32, cutoff: f64) -> Result<f64> {
        if k > 2 {
            return Err(domain("truncated moments are available for k <= 2"));
        }
        let a = self.alpha;
        // E[Y^j 1{Y ≤ C}] for Y ~ Pareto(α, 1)
        let unit = |j: u32, c: f64| -> f64 {
            if c <= 1.0 {
                0.0
            } else if j == 0 {
                1.0 - libm::pow(c, -a)
            } else {
                let e = j as f64 - a;
                a * (libm::pow(c, e) - 1.0) / e
            }
        };
        Ok(match self.kind {
            TailKind::Pareto => libm::pow(self.x_m, k as f64) * unit(k, cutoff / self.x_m),
            TailKind::ParetoShifted => {
                let c = 1.0 + cutoff / self.x_m;
                let s = match k {
                    0 => unit(0, c),
                    1 => unit(1, c) - unit(0, c),
                    _ => unit(2, c) - 2.0 * unit(1, c) + unit(0, c),
                };
                libm::pow(self.x_m, k as f64) * s
            }
        })
    }

    /// `E[X 1{X > c}]`.
    pub fn upper_truncated_mean(&self, cutoff: f64) -> Result<f64> {
        Ok(self.mean() - self.truncated_moment(1, cutoff)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;

    #[test]
    fn rejects_bad_parameters() {
        assert!(TailModel::pareto(2.0, 1.0).is_err());
        assert!(TailModel::pareto(1.0, 1.0).is_err());
        assert!(TailModel::pareto(1.5, 0.0).is_err());
        assert!(TailModel::pareto(1.5, 1.0).unwrap().a_n(0).is_err());
    }

    #[test]
    fn a_n_examples() {
        let m = TailModel::pareto(1.5, 1.0).unwrap();
        assert_eq!(m.a_n(1).unwrap(), 1.0);
        assert!((m.a_n(8).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(m.mean(), 3.0);
    }

    #[test]
    fn exact_regular_variation_for_pareto() {
        let m = TailModel::pareto(1.5, 1.0).unwrap();
        for n in [1u64, 7, 100, 12_345, 1_000_000] {
            let an = m.a_n(n).unwrap();
            for x in [1.0, 2.0, 5.0] {
                let lhs = n as f64 * m.ccdf(an * x);
                let rhs = libm::pow(x, -1.5);
                assert!((lhs - rhs).abs() <= 1e-12 * rhs, "n {n} x {x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn shifted_quantile_inverts_ccdf() {
        let m = TailModel::new(TailKind::ParetoShifted, 1.4, 2.0).unwrap();
        for p in [0.0, 0.1, 0.5, 0.99] {
            let q = m.quantile(p).unwrap();
            assert!((m.cdf(q) - p).abs() < 1e-12);
        }
        assert_eq!(m.a_n(1).unwrap(), 0.0);
        assert!(m.quantile(1.0).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_supported() {
        let m = TailModel::pareto(1.5, 1.0).unwrap();
        let x = m.sample(&mut RngSeed::new(11, 2).stream());
        let y = m.sample(&mut RngSeed::new(11, 2).stream());
        assert_eq!(x, y);
        let mut rng = RngSeed::new(3, 0).stream();
        let n = 1_000_000;
        let mut min = f64::INFINITY;
        let mut above = 0usize;
        for _ in 0..n {
            let z = m.sample(&mut rng);
            min = min.min(z);
            above += (z > 10.0) as usize;
        }
        assert!(min >= 1.0);
        let p = libm::pow(10.0, -1.5);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        let frac = above as f64 / n as f64;
        assert!((frac - p).abs() < 3.0 * se, "{frac} vs {p}");
    }

    // midpoint rule in u = log x on the law's density
    fn quad_moment(m: &TailModel, k: i32, c: f64) -> f64 {
        let lo = m.support_min().max(1e-12);
        if c <= lo {
            return 0.0;
        }
        let density = |x: f64| -> f64 {
            let a = m.alpha();
            match m.kind() {
                TailKind::Pareto => a * m.x_m().powf(a) * x.powf(-a - 1.0),
                TailKind::ParetoShifted => a / m.x_m() * (1.0 + x / m.x_m()).powf(-a - 1.0),
            }
        };
        let n = 400_000;
        let (u0, u1) = (lo.ln(), c.ln());
        let h = (u1 - u0) / n as f64;
        (0..n)
            .map(|j| {
                let x = (u0 + (j as f64 + 0.5) * h).exp();
                x.powi(k) * density(x) * x * h
            })
            .sum()
    }

    #[test]
    fn truncated_moments_match_quadrature() {
        for model in [
            TailModel::pareto(1.5, 1.0).unwrap(),
            TailModel::pareto(1.3, 2.5).unwrap(),
            TailModel::new(TailKind::ParetoShifted, 1.7, 0.8).unwrap(),
        ] {
            for c in [0.5, 1.5, 4.0, 40.0, 700.0] {
                for k in 1..=2 {
                    let exact = model.truncated_moment(k, c).unwrap();
                    let quad = quad_moment(&model, k as i32, c);
                    assert!(
                        (exact - quad).abs() <= 1e-6 * (1.0 + exact.abs()),
                        "{model:?} k {k} c {c}: {exact} vs {quad}"
                    );
                }
            }
            let big = model.truncated_moment(1, 1e12).unwrap();
            assert!((big - model.mean()).abs() < 1e-3 * model.mean());
        }
    }
}
