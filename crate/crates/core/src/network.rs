//! The assembled network `y = sum_k h_k(z_k(x))`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::representer::{combine, fit, residual_report, LookupTable, SampleSet};
use crate::transfer::{Transfer, TransferStack};
use crate::{Error, NumericMode, Result, Scalar};

/// Where a fitted network came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance<S> {
    pub n_fitted: usize,
    pub fit_timestamp: String,
    pub residual: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KolmogorovNetwork<S> {
    stack: TransferStack<S>,
    tables: Vec<LookupTable<S>>,
    provenance: Provenance<S>,
}

impl<S: Scalar> KolmogorovNetwork<S> {
    /// Assembles a network, checking that there is one table per block and
    /// that every key lies in its block's interval.
    pub fn new(stack: TransferStack<S>, tables: Vec<LookupTable<S>>, provenance: Provenance<S>) -> Result<Self> {
        if tables.len() != stack.blocks() {
            return Err(Error::DimensionMismatch { expected: stack.blocks(), found: tables.len() });
        }
        for (k, table) in tables.iter().enumerate() {
            if table.block() != k {
                return Err(Error::Invalid("tables must be listed in block order"));
            }
            let (a, b) = stack.interval(k);
            if table.entries().iter().any(|(key, _)| key <= a || key >= b) {
                return Err(Error::Invalid("lookup key outside its block interval"));
            }
        }
        Ok(KolmogorovNetwork { stack, tables, provenance })
    }

    /// Fits `sample` and records the achieved residual.
    pub fn fit(stack: TransferStack<S>, sample: &SampleSet<S>, tolerance: &S, fit_timestamp: String) -> Result<Self> {
        let tables = fit(&stack, sample, tolerance)?;
        let report = residual_report(&stack, &tables, sample)?;
        let provenance = Provenance { n_fitted: sample.len(), fit_timestamp, residual: report.max_abs_residual };
        Self::new(stack, tables, provenance)
    }

    pub fn eval(&self, x: &[S]) -> Result<S> {
        let row = self.stack.w_row(x)?;
        Ok(combine(&self.tables, &row))
    }

    /// The addends `h_k(z_k(x))`, one per block.
    pub fn eval_terms(&self, x: &[S]) -> Result<Vec<S>> {
        let row = self.stack.w_row(x)?;
        Ok(self.tables.iter().zip(&row).map(|(t, w)| t.lookup(w).clone()).collect())
    }

    pub fn stack(&self) -> &TransferStack<S> {
        &self.stack
    }

    pub fn tables(&self) -> &[LookupTable<S>] {
        &self.tables
    }

    pub fn provenance(&self) -> &Provenance<S> {
        &self.provenance
    }

    pub fn mode(&self) -> NumericMode {
        S::MODE
    }

    /// Replaces every table's extension value.
    pub fn with_default(mut self, default_value: S) -> Self {
        self.tables = self.tables.into_iter().map(|t| t.with_default(default_value.clone())).collect();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn step_lattice() -> SampleSet<Rational> {
        let mut points = Vec::new();
        let mut values = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                let x1 = q(i, 4);
                values.push(if x1 >= q(1, 2) { q(1, 1) } else { q(0, 1) });
                points.push(vec![x1, q(j, 4)]);
            }
        }
        SampleSet::new(2, points, values).unwrap()
    }

    #[test]
    fn step_function_reproduced_on_lattice() {
        let sample = step_lattice();
        let net =
            KolmogorovNetwork::fit(TransferStack::default_for(2).unwrap(), &sample, &q(0, 1), "t".into()).unwrap();
        assert_eq!(net.provenance().residual, q(0, 1));
        for (x, f) in sample.points().iter().zip(sample.values()) {
            assert_eq!(net.eval(x).unwrap(), *f);
        }
    }

    #[test]
    fn unkeyed_point_gives_default() {
        let sample = step_lattice();
        let net =
            KolmogorovNetwork::fit(TransferStack::default_for(2).unwrap(), &sample, &q(0, 1), "t".into()).unwrap();
        let off = [q(1, 3), q(1, 7)];
        assert_eq!(net.eval(&off).unwrap(), q(0, 1));
        let shifted = net.clone().with_default(q(2, 1));
        assert_eq!(shifted.eval(&off).unwrap(), q(10, 1));
        for (x, f) in sample.points().iter().zip(sample.values()) {
            assert_eq!(shifted.eval(x).unwrap(), *f);
        }
    }

    #[test]
    fn eval_rejects_points_outside_cube() {
        let sample = step_lattice();
        let net =
            KolmogorovNetwork::fit(TransferStack::default_for(2).unwrap(), &sample, &q(0, 1), "t".into()).unwrap();
        assert!(matches!(net.eval(&[q(3, 2), q(0, 1)]), Err(Error::Domain { .. })));
    }

    #[test]
    fn table_count_checked() {
        let stack = TransferStack::<f64>::default_for(2).unwrap();
        let provenance = Provenance { n_fitted: 0, fit_timestamp: String::new(), residual: 0.0 };
        let tables = (0..4).map(LookupTable::empty).collect();
        assert!(KolmogorovNetwork::new(stack.clone(), tables, provenance.clone()).is_err());
        let bad_key = vec![LookupTable::new(0, vec![(3.5, 1.0)], 0.0).unwrap()]
            .into_iter()
            .chain((1..5).map(LookupTable::empty))
            .collect();
        assert!(KolmogorovNetwork::new(stack, bad_key, provenance).is_err());
    }
}
