//! Concrete strictly increasing Lipschitz inner functions `phi`.
//!
//! Two kinds are provided:
//!
//! * [`PhiKind::HashedPiecewiseLinear`]: `segments` equal-width pieces whose
//!   slopes are `1 + 3u_i` with `u_i` drawn from [`crate::mixing::mix`], then
//!   rescaled so that `phi` maps `[lo, hi]` onto itself. Every rescaled slope
//!   lies in `(0, 4]`, and rational inputs give rational outputs.
//! * [`PhiKind::TranscendentalPower`]: `phi(t) = (t + 1)^sqrt(2)`, float only.

use alloc::vec::Vec;

use crate::mixing::mix;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhiKind {
    HashedPiecewiseLinear { seed: u64, segments: u32 },
    TranscendentalPower,
}

impl PhiKind {
    /// Seed and segment count used by the default transfer stack.
    pub const DEFAULT: PhiKind = PhiKind::HashedPiecewiseLinear { seed: 0x4B53_5431, segments: 64 };
}

/// A verified inner function on the closed interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerFunction<S> {
    kind: PhiKind,
    lo: S,
    hi: S,
    // Piecewise-linear tables; empty for the power kind.
    breaks: Vec<S>,
    values: Vec<S>,
    slopes: Vec<S>,
}

/// Outcome of a grid scan over the domain of `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneReport {
    pub monotone: bool,
    pub lipschitz_estimate: f64,
}

impl<S: Scalar> InnerFunction<S> {
    pub fn new(kind: PhiKind, lo: S, hi: S) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::Invalid("inner function domain must have lo < hi"));
        }
        let mut phi = InnerFunction { kind, lo, hi, breaks: Vec::new(), values: Vec::new(), slopes: Vec::new() };
        match kind {
            PhiKind::HashedPiecewiseLinear { seed, segments } => phi.build_tables(seed, segments)?,
            PhiKind::TranscendentalPower => {
                if S::one().pow_sqrt2().is_none() {
                    return Err(Error::FloatOnly);
                }
                if !(phi.lo > -S::one()) {
                    return Err(Error::Invalid("power inner function needs a domain above -1"));
                }
            }
        }
        Ok(phi)
    }

    /// Inner function on the domain reached by `x_j + eps * k` for
    /// `x_j` in `[0, 1]` and `0 <= k <= r`.
    pub fn for_offsets(kind: PhiKind, r: usize, epsilon: &S) -> Result<Self> {
        let span = S::from_i64(r as i64) * epsilon.clone();
        let lo = S::zero().min_of(span.clone());
        let hi = S::one() + S::zero().max_of(span);
        Self::new(kind, lo, hi)
    }

    fn build_tables(&mut self, seed: u64, segments: u32) -> Result<()> {
        if segments == 0 {
            return Err(Error::Invalid("inner function needs at least one segment"));
        }
        let n = segments as u128;
        // Integer slope weights c_i = 2^64 + 3 m_i, so u_i = m_i / 2^64.
        let weights: Vec<u128> = (0..segments as u64).map(|i| (1u128 << 64) + 3 * mix(seed, i) as u128).collect();
        let total: u128 = weights
            .iter()
            .try_fold(0u128, |acc, &w| acc.checked_add(w))
            .filter(|t| t.checked_mul(n).is_some())
            .ok_or(Error::Invalid("too many inner function segments"))?;

        let width = self.hi.clone() - self.lo.clone();
        let total_s = S::from_u128(total);
        let mut cumulative = 0u128;
        for (i, &w) in weights.iter().enumerate() {
            let offset = S::from_u128(i as u128) / S::from_u128(n);
            self.breaks.push(self.lo.clone() + width.clone() * offset);
            self.values.push(self.lo.clone() + width.clone() * S::from_u128(cumulative) / total_s.clone());
            self.slopes.push(S::from_u128(w * n) / total_s.clone());
            cumulative += w;
        }
        Ok(())
    }

    pub fn kind(&self) -> PhiKind {
        self.kind
    }

    pub fn domain(&self) -> (&S, &S) {
        (&self.lo, &self.hi)
    }

    pub fn eval(&self, t: &S) -> Result<S> {
        if *t < self.lo || *t > self.hi {
            return Err(Error::Domain { what: "inner function argument", value: t.to_f64() });
        }
        match self.kind {
            PhiKind::TranscendentalPower => (t.clone() + S::one()).pow_sqrt2().ok_or(Error::FloatOnly),
            PhiKind::HashedPiecewiseLinear { .. } => {
                // Last segment whose left break is <= t.
                let i = self.breaks.partition_point(|b| b <= t).saturating_sub(1);
                Ok(self.values[i].clone() + self.slopes[i].clone() * (t.clone() - self.breaks[i].clone()))
            }
        }
    }

    /// Scans `grid_points` equally spaced points covering the domain.
    ///
    /// # Panics
    ///
    /// Panics if `grid_points < 2`.
    pub fn verify_monotone_lipschitz(&self, grid_points: usize) -> MonotoneReport {
        assert!(grid_points >= 2, "grid needs at least two points");
        let width = self.hi.clone() - self.lo.clone();
        let last = S::from_u128((grid_points - 1) as u128);
        let point = |i: usize| {
            if i + 1 == grid_points {
                self.hi.clone()
            } else {
                self.lo.clone() + width.clone() * S::from_u128(i as u128) / last.clone()
            }
        };

        let mut monotone = true;
        let mut lipschitz = 0.0f64;
        let mut prev_t = point(0);
        let mut prev_v = self.eval(&prev_t).expect("grid point inside domain");
        for i in 1..grid_points {
            let t = point(i);
            let v = self.eval(&t).expect("grid point inside domain");
            let rise = v.clone() - prev_v;
            if !rise.is_positive() {
                monotone = false;
            }
            let slope = (rise / (t.clone() - prev_t)).abs().to_f64();
            lipschitz = lipschitz.max(slope);
            prev_t = t;
            prev_v = v;
        }
        MonotoneReport { monotone, lipschitz_estimate: lipschitz }
    }
}

trait MinOf {
    fn min_of(self, other: Self) -> Self;
}

impl<S: Scalar> MinOf for S {
    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn default_pl<S: Scalar>(hi: S) -> InnerFunction<S> {
        InnerFunction::new(PhiKind::DEFAULT, S::zero(), hi).unwrap()
    }

    #[test]
    fn power_at_zero_is_one() {
        let phi = InnerFunction::new(PhiKind::TranscendentalPower, 0.0, 2.0).unwrap();
        assert_eq!(phi.eval(&0.0).unwrap(), 1.0);
    }

    #[test]
    fn single_segment_is_identity() {
        let kind = PhiKind::HashedPiecewiseLinear { seed: 99, segments: 1 };
        let phi = InnerFunction::new(kind, 0.0, 1.5).unwrap();
        assert_eq!(phi.eval(&0.25).unwrap(), 0.25);
        let exact = InnerFunction::new(kind, Rational::from_i64(0), Rational::ratio(3, 2)).unwrap();
        assert_eq!(exact.eval(&Rational::ratio(1, 4)).unwrap(), Rational::ratio(1, 4));
    }

    #[test]
    fn hashed_64_strictly_increasing_on_dyadic_grid() {
        let kind = PhiKind::HashedPiecewiseLinear { seed: 42, segments: 64 };
        let phi = InnerFunction::new(kind, Rational::from_i64(0), Rational::from_i64(1)).unwrap();
        let values: Vec<Rational> = (0..=128).map(|i| phi.eval(&Rational::ratio(i, 128)).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(values[0], Rational::from_i64(0));
        assert_eq!(values[128], Rational::from_i64(1));
    }

    #[test]
    fn endpoints_map_onto_domain() {
        let phi = default_pl(Rational::ratio(3, 2));
        assert_eq!(phi.eval(&Rational::from_i64(0)).unwrap(), Rational::from_i64(0));
        assert_eq!(phi.eval(&Rational::ratio(3, 2)).unwrap(), Rational::ratio(3, 2));
    }

    #[test]
    fn out_of_domain_is_rejected() {
        let phi = default_pl(1.5f64);
        assert!(matches!(phi.eval(&1.6), Err(Error::Domain { .. })));
        assert!(matches!(phi.eval(&-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn power_is_float_only() {
        let err = InnerFunction::new(PhiKind::TranscendentalPower, Rational::from_i64(0), Rational::from_i64(1));
        assert_eq!(err.unwrap_err(), Error::FloatOnly);
    }

    #[test]
    fn power_monotone_on_zero_two() {
        let phi = InnerFunction::new(PhiKind::TranscendentalPower, 0.0, 2.0).unwrap();
        let report = phi.verify_monotone_lipschitz(1000);
        assert!(report.monotone);
        // Derivative sqrt(2) (t + 1)^(sqrt(2) - 1) peaks at t = 2.
        let bound = core::f64::consts::SQRT_2 * 3f64.powf(core::f64::consts::SQRT_2 - 1.0);
        assert!(report.lipschitz_estimate <= bound);
    }

    #[test]
    fn two_point_grid_is_secant() {
        let phi = InnerFunction::new(PhiKind::TranscendentalPower, 0.0, 2.0).unwrap();
        let report = phi.verify_monotone_lipschitz(2);
        let secant = (phi.eval(&2.0).unwrap() - phi.eval(&0.0).unwrap()) / 2.0;
        assert_eq!(report.lipschitz_estimate, secant);
        // Piecewise-linear maps the domain onto itself, so the secant is 1.
        let pl = default_pl(Rational::ratio(3, 2));
        assert_eq!(pl.verify_monotone_lipschitz(2).lipschitz_estimate, 1.0);
    }

    #[test]
    fn hashed_slopes_bounded_by_four() {
        let kind = PhiKind::HashedPiecewiseLinear { seed: 7, segments: 32 };
        let phi = InnerFunction::new(kind, 0.0, 1.5).unwrap();
        let report = phi.verify_monotone_lipschitz(10_000);
        assert!(report.monotone);
        assert!(report.lipschitz_estimate <= 4.0);
    }

    #[test]
    fn float_and_rational_tables_agree() {
        let f = default_pl(1.5f64);
        let q = default_pl(Rational::ratio(3, 2));
        for i in 0..=300 {
            let t = Rational::ratio(i, 200);
            let exact = q.eval(&t).unwrap().to_f64();
            let approx = f.eval(&t.to_f64()).unwrap();
            assert!((exact - approx).abs() < 1e-14, "{i}: {exact} vs {approx}");
        }
    }

    #[test]
    fn offset_domain() {
        let phi = InnerFunction::<f64>::for_offsets(PhiKind::DEFAULT, 4, &0.125).unwrap();
        assert_eq!(phi.domain(), (&0.0, &1.5));
        let neg = InnerFunction::<f64>::for_offsets(PhiKind::DEFAULT, 4, &-0.125).unwrap();
        assert_eq!(neg.domain(), (&-0.5, &1.0));
    }
}
