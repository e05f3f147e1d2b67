#![allow(dead_code)]

use ksn_core::{sigma, Rational, Result, Scalar, Transfer};

/// Transfer layer whose block `k` only sees coordinate `k mod d`, so points
/// on a lattice form rectangles that cancel in every block.
pub struct CoordinateTransfer<S> {
    pub d: usize,
    intervals: Vec<(S, S)>,
}

impl<S: Scalar> CoordinateTransfer<S> {
    pub fn new(d: usize) -> Self {
        let intervals = (0..=2 * d as i64).map(|k| (S::from_i64(3 * k), S::from_i64(3 * k + 1))).collect();
        CoordinateTransfer { d, intervals }
    }
}

impl<S: Scalar> Transfer<S> for CoordinateTransfer<S> {
    fn dim(&self) -> usize {
        self.d
    }

    fn blocks(&self) -> usize {
        2 * self.d + 1
    }

    fn interval(&self, k: usize) -> (&S, &S) {
        (&self.intervals[k].0, &self.intervals[k].1)
    }

    fn w_eval(&self, x: &[S], k: usize) -> Result<S> {
        let (a, b) = &self.intervals[k];
        Ok(a.clone() + (b.clone() - a.clone()) * sigma(&x[k % self.d]))
    }
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}
