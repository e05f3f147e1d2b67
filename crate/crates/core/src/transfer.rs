//! The middle layer `z_k` and its disjoint-range remap `w_k = tau_k(z_k)`.

use alloc::vec::Vec;

use crate::inner::{InnerFunction, PhiKind};
use crate::{Error, Result, Scalar};

/// Algebraic sigmoid `1/2 + u / (2 (1 + |u|))`, a bijection of the reals onto
/// `(0, 1)` that maps rationals to rationals.
pub fn sigma<S: Scalar>(u: &S) -> S {
    let two = S::from_i64(2);
    S::one() / two.clone() + u.clone() / (two * (S::one() + u.abs()))
}

/// Inverse of [`sigma`] on `(0, 1)`.
pub fn sigma_inv<S: Scalar>(v: &S) -> Result<S> {
    if !(*v > S::zero() && *v < S::one()) {
        return Err(Error::Domain { what: "sigmoid inverse argument", value: v.to_f64() });
    }
    let c = S::from_i64(2) * v.clone() - S::one();
    Ok(c.clone() / (S::one() - c.abs()))
}

/// A transfer layer with `blocks()` outputs whose ranges are the pairwise
/// disjoint open intervals returned by [`Transfer::interval`].
///
/// [`TransferStack`] is the production implementation; the trait exists so
/// that the fitting and verification routines can be driven by synthetic
/// layers as well.
pub trait Transfer<S: Scalar> {
    fn dim(&self) -> usize;

    fn blocks(&self) -> usize;

    fn interval(&self, k: usize) -> (&S, &S);

    fn w_eval(&self, x: &[S], k: usize) -> Result<S>;

    /// All `blocks()` remapped values for one point.
    fn w_row(&self, x: &[S]) -> Result<Vec<S>> {
        (0..self.blocks()).map(|k| self.w_eval(x, k)).collect()
    }

    /// `n x blocks()` table of remapped values.
    fn w_table(&self, points: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
        points.iter().map(|x| self.w_row(x)).collect()
    }
}

/// `z_k(x) = sum_j lambda^(j-1) phi(x_j + eps k)` for `k = 0..=2d`, followed by
/// `tau_k(t) = a_k + (b_k - a_k) sigma(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferStack<S> {
    d: usize,
    lambda: S,
    epsilon: S,
    phi: InnerFunction<S>,
    intervals: Vec<(S, S)>,
}

impl<S: Scalar> TransferStack<S> {
    pub fn new(d: usize, lambda: S, epsilon: S, phi: InnerFunction<S>, intervals: Vec<(S, S)>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid("input dimension must exceed 1"));
        }
        if lambda.is_zero() {
            return Err(Error::Invalid("lambda must be nonzero"));
        }
        if epsilon.is_zero() {
            return Err(Error::Invalid("epsilon must be nonzero"));
        }
        if intervals.len() != 2 * d + 1 {
            return Err(Error::DimensionMismatch { expected: 2 * d + 1, found: intervals.len() });
        }
        if intervals.iter().any(|(a, b)| !(a < b)) {
            return Err(Error::Invalid("interval endpoints must satisfy a < b"));
        }
        let mut sorted: Vec<&(S, S)> = intervals.iter().collect();
        sorted.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite endpoints"));
        if sorted.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::Invalid("intervals must be pairwise disjoint"));
        }
        Ok(TransferStack { d, lambda, epsilon, phi, intervals })
    }

    /// `r = 2d`, `eps = 1/(4d)`, `lambda = 1/2`, intervals `(3k, 3k + 1)` and the
    /// default hashed piecewise-linear `phi` on `[0, 1 + r eps]`.
    pub fn default_for(d: usize) -> Result<Self> {
        Self::with_params(d, S::ratio(1, 2), S::ratio(1, 4 * d as i64), PhiKind::DEFAULT)
    }

    /// Default intervals with the given constants and inner function kind.
    pub fn with_params(d: usize, lambda: S, epsilon: S, kind: PhiKind) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid("input dimension must exceed 1"));
        }
        let r = 2 * d;
        let phi = InnerFunction::for_offsets(kind, r, &epsilon)?;
        let intervals = (0..=r as i64).map(|k| (S::from_i64(3 * k), S::from_i64(3 * k + 1))).collect();
        Self::new(d, lambda, epsilon, phi, intervals)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        2 * self.d
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn epsilon(&self) -> &S {
        &self.epsilon
    }

    pub fn phi(&self) -> &InnerFunction<S> {
        &self.phi
    }

    pub fn intervals(&self) -> &[(S, S)] {
        &self.intervals
    }

    fn check_point(&self, x: &[S]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: x.len() });
        }
        match x.iter().find(|v| **v < S::zero() || **v > S::one()) {
            Some(v) => Err(Error::Domain { what: "input coordinate", value: v.to_f64() }),
            None => Ok(()),
        }
    }

    fn check_block(&self, k: usize) -> Result<()> {
        if k > self.r() {
            return Err(Error::Domain { what: "block index", value: k as f64 });
        }
        Ok(())
    }

    pub fn z_eval(&self, x: &[S], k: usize) -> Result<S> {
        self.check_point(x)?;
        self.check_block(k)?;
        let shift = self.epsilon.clone() * S::from_i64(k as i64);
        let mut weight = S::one();
        let mut total = S::zero();
        for xj in x {
            total = total + weight.clone() * self.phi.eval(&(xj.clone() + shift.clone()))?;
            weight = weight * self.lambda.clone();
        }
        Ok(total)
    }

    pub fn tau(&self, k: usize, t: &S) -> S {
        let (a, b) = &self.intervals[k];
        a.clone() + (b.clone() - a.clone()) * sigma(t)
    }

    pub fn tau_inv(&self, k: usize, w: &S) -> Result<S> {
        self.check_block(k)?;
        let (a, b) = &self.intervals[k];
        sigma_inv(&((w.clone() - a.clone()) / (b.clone() - a.clone())))
    }

    /// `(z_0(x), ..., z_r(x))`.
    pub fn z_row(&self, x: &[S]) -> Result<Vec<S>> {
        (0..=self.r()).map(|k| self.z_eval(x, k)).collect()
    }
}

impl<S: Scalar> Transfer<S> for TransferStack<S> {
    fn dim(&self) -> usize {
        self.d
    }

    fn blocks(&self) -> usize {
        self.r() + 1
    }

    fn interval(&self, k: usize) -> (&S, &S) {
        let (a, b) = &self.intervals[k];
        (a, b)
    }

    fn w_eval(&self, x: &[S], k: usize) -> Result<S> {
        let z = self.z_eval(x, k)?;
        Ok(self.tau(k, &z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn identity_stack(lambda: f64) -> TransferStack<f64> {
        TransferStack::with_params(2, lambda, 0.125, PhiKind::HashedPiecewiseLinear { seed: 1, segments: 1 }).unwrap()
    }

    #[test]
    fn identity_sum() {
        let stack = identity_stack(1.0);
        assert!((stack.z_eval(&[0.3, 0.4], 0).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn geometric_weights() {
        let stack = identity_stack(0.5);
        assert_eq!(stack.z_eval(&[1.0, 1.0], 0).unwrap(), 1.5);
    }

    #[test]
    fn composes_independent_phi_values() {
        let kind = PhiKind::HashedPiecewiseLinear { seed: 42, segments: 64 };
        let stack =
            TransferStack::<Rational>::with_params(2, Rational::ratio(1, 2), Rational::ratio(1, 20), kind).unwrap();
        // Same phi built directly on the stack's domain [0, 1 + 4/20].
        let phi = InnerFunction::new(kind, Rational::from_i64(0), Rational::ratio(6, 5)).unwrap();
        let x = [Rational::ratio(1, 5), Rational::ratio(4, 5)];
        let expected = phi.eval(&Rational::ratio(35, 100)).unwrap()
            + Rational::ratio(1, 2) * phi.eval(&Rational::ratio(95, 100)).unwrap();
        assert_eq!(stack.z_eval(&x, 3).unwrap(), expected);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(&0.0), 0.5);
        assert_eq!(sigma(&1.0), 0.75);
        assert_eq!(sigma_inv(&0.75).unwrap(), 1.0);
        assert_eq!(sigma(&-1.0), 0.25);
        assert!(sigma_inv(&1.0).is_err());
        assert!(sigma_inv(&0.0).is_err());
    }

    #[test]
    fn tau_places_zero_at_midpoint() {
        let stack = TransferStack::<f64>::default_for(2).unwrap();
        assert_eq!(stack.tau(0, &0.0), 0.5);
        assert_eq!(stack.tau(1, &0.0), 3.5);
    }

    #[test]
    fn default_stack_shape() {
        let stack = TransferStack::<Rational>::default_for(2).unwrap();
        assert_eq!(stack.r(), 4);
        let expected: Vec<(Rational, Rational)> =
            [0, 3, 6, 9, 12].iter().map(|&a| (Rational::from_i64(a), Rational::from_i64(a + 1))).collect();
        assert_eq!(stack.intervals(), &expected[..]);
        assert_eq!(*stack.epsilon(), Rational::ratio(1, 8));
        assert_eq!(stack.phi().domain(), (&Rational::from_i64(0), &Rational::ratio(3, 2)));
        let stack3 = TransferStack::<f64>::default_for(3).unwrap();
        assert_eq!(stack3.r(), 6);
        assert_eq!(stack3.intervals().len(), 7);
    }

    #[test]
    fn rejects_bad_configuration() {
        let phi = InnerFunction::new(PhiKind::DEFAULT, 0.0, 1.5).unwrap();
        let disjoint = |k: usize| (0..k).map(|i| (3.0 * i as f64, 3.0 * i as f64 + 1.0)).collect::<Vec<_>>();
        assert!(TransferStack::new(1, 0.5, 0.125, phi.clone(), disjoint(3)).is_err());
        assert!(TransferStack::new(2, 0.0, 0.125, phi.clone(), disjoint(5)).is_err());
        assert!(TransferStack::new(2, 0.5, 0.0, phi.clone(), disjoint(5)).is_err());
        assert!(TransferStack::new(2, 0.5, 0.125, phi.clone(), disjoint(4)).is_err());
        let mut overlapping = disjoint(5);
        overlapping[3] = (0.5, 2.0);
        assert!(TransferStack::new(2, 0.5, 0.125, phi, overlapping).is_err());
    }

    #[test]
    fn epsilon_too_large_is_domain_error() {
        // phi built for eps = 1/8 but the stack shifts by 1/4.
        let phi = InnerFunction::new(PhiKind::DEFAULT, 0.0, 1.5).unwrap();
        let intervals = (0..5).map(|i| (3.0 * i as f64, 3.0 * i as f64 + 1.0)).collect();
        let stack = TransferStack::new(2, 0.5, 0.25, phi, intervals).unwrap();
        assert!(stack.z_eval(&[0.5, 0.5], 2).is_ok());
        assert!(matches!(stack.z_eval(&[1.0, 0.5], 4), Err(Error::Domain { .. })));
    }

    #[test]
    fn point_checks() {
        let stack = TransferStack::<f64>::default_for(2).unwrap();
        assert!(matches!(stack.z_eval(&[0.5], 0), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(stack.z_eval(&[0.5, 1.5], 0), Err(Error::Domain { .. })));
        assert!(matches!(stack.z_eval(&[0.5, 0.5], 5), Err(Error::Domain { .. })));
        assert_eq!(stack.w_row(&[0.5, 0.5]).unwrap().len(), 5);
    }
}
