//! Solving for the outer lookup tables.
//!
//! Every distinct `(k, w_k)` value met by the sample is one unknown `h_k(w)`,
//! and each sample point contributes the equation
//! `sum_k h_k(w_k(x_j)) = F(x_j)`. The coefficient matrix is the transpose of
//! the incidence matrix, so the system is solvable for every target exactly
//! when the incidence rank equals the number of points. Among the solutions
//! the minimum-norm one is returned: `h = A^T y` with `(A A^T) y = F`.
//!
//! Inputs never seen during the fit evaluate to the table's default value.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use crate::condition_z::{check_z, ClosedPath};
use crate::incidence::{build_incidence, IncidenceSystem};
use crate::linalg::solve_dense;
use crate::transfer::Transfer;
use crate::{Error, NumericMode, Result, Scalar};

/// Sampled target values `F(x_j)` on points of the unit cube.
///
/// Repeated points are accepted here; fitting reports them as a closed path.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet<S> {
    d: usize,
    points: Vec<Vec<S>>,
    values: Vec<S>,
}

impl<S: Scalar> SampleSet<S> {
    pub fn new(d: usize, points: Vec<Vec<S>>, values: Vec<S>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: values.len() });
        }
        for x in &points {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: x.len() });
            }
            if let Some(v) = x.iter().find(|v| **v < S::zero() || **v > S::one()) {
                return Err(Error::Domain { what: "sample coordinate", value: v.to_f64() });
            }
        }
        Ok(SampleSet { d, points, values })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn mode(&self) -> NumericMode {
        S::MODE
    }
}

/// A finite outer function `h_k` on remapped values of block `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LookupTable<S> {
    block: usize,
    entries: Vec<(S, S)>,
    default_value: S,
}

impl<S: Scalar> LookupTable<S> {
    pub fn new(block: usize, entries: Vec<(S, S)>, default_value: S) -> Result<Self> {
        if entries.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Invalid("lookup keys must be strictly increasing"));
        }
        Ok(LookupTable { block, entries, default_value })
    }

    pub fn empty(block: usize) -> Self {
        LookupTable { block, entries: Vec::new(), default_value: S::zero() }
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn entries(&self) -> &[(S, S)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn default_value(&self) -> &S {
        &self.default_value
    }

    pub fn with_default(mut self, default_value: S) -> Self {
        self.default_value = default_value;
        self
    }

    fn position(&self, key: &S) -> core::result::Result<usize, usize> {
        self.entries.binary_search_by(|(k, _)| k.partial_cmp(key).unwrap_or(Ordering::Less))
    }

    /// Value stored under exactly `key`, else the default.
    pub fn lookup(&self, key: &S) -> &S {
        match self.position(key) {
            Ok(i) => &self.entries[i].1,
            Err(_) => &self.default_value,
        }
    }

    pub fn contains(&self, key: &S) -> bool {
        self.position(key).is_ok()
    }

    /// Value under the nearest key within `tolerance` of `key`, else the
    /// default.
    pub fn lookup_nearest(&self, key: &S, tolerance: &S) -> &S {
        let i = match self.position(key) {
            Ok(i) => return &self.entries[i].1,
            Err(i) => i,
        };
        let distance = |j: usize| (self.entries[j].0.clone() - key.clone()).abs();
        let best = [i.checked_sub(1), (i < self.entries.len()).then_some(i)]
            .into_iter()
            .flatten()
            .min_by(|&a, &b| distance(a).partial_cmp(&distance(b)).unwrap_or(Ordering::Equal));
        match best {
            Some(j) if distance(j) <= *tolerance => &self.entries[j].1,
            _ => &self.default_value,
        }
    }
}

/// `sum_k tables[k](w_row[k])`.
pub(crate) fn combine<S: Scalar>(tables: &[LookupTable<S>], w_row: &[S]) -> S {
    tables.iter().zip(w_row).fold(S::zero(), |acc, (t, w)| acc + t.lookup(w).clone())
}

fn check_tables<S: Scalar, T: Transfer<S>>(transfer: &T, tables: &[LookupTable<S>]) -> Result<()> {
    if tables.len() != transfer.blocks() {
        return Err(Error::DimensionMismatch { expected: transfer.blocks(), found: tables.len() });
    }
    Ok(())
}

/// Lookup tables reproducing `sample` exactly through `transfer`.
///
/// Fails with [`Error::Unrepresentable`] when the sampled transfer values
/// contain a closed path; coincident transfer rows are reported as the pair
/// with coefficients `(1, -1)`.
pub fn fit<S: Scalar, T: Transfer<S>>(
    transfer: &T,
    sample: &SampleSet<S>,
    tolerance: &S,
) -> Result<Vec<LookupTable<S>>> {
    if sample.d() != transfer.dim() {
        return Err(Error::DimensionMismatch { expected: transfer.dim(), found: sample.d() });
    }
    let w = transfer.w_table(sample.points())?;
    let system = build_incidence(&w, tolerance)?;
    if let Some((i, j)) = system.coincident_pair() {
        return Err(Error::Unrepresentable(ClosedPath { points: vec![i, j], mu: vec![1.into(), (-1).into()] }));
    }
    let report = check_z(&system);
    if let Some(path) = report.closed_path {
        return Err(Error::Unrepresentable(path));
    }

    let heights = min_norm_heights(&system, sample.values());
    let blocks = transfer.blocks();
    let mut tables = Vec::with_capacity(blocks);
    for (k, block_heights) in heights.into_iter().enumerate() {
        let mut entries: Vec<(S, S)> = Vec::new();
        for (group, h) in system.groups(k).iter().zip(block_heights) {
            let mut keys: Vec<&S> = group.iter().map(|&j| &w[j][k]).collect();
            keys.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            keys.dedup_by(|a, b| a == b);
            entries.extend(keys.into_iter().map(|key| (key.clone(), h.clone())));
        }
        tables.push(LookupTable::new(k, entries, S::zero())?);
    }
    for k in tables.len()..blocks {
        tables.push(LookupTable::empty(k));
    }
    Ok(tables)
}

/// Minimum-norm heights per `(block, group)`, solved component by component
/// in a canonical point order so that the result does not depend on the
/// order of the sample.
fn min_norm_heights<S: Scalar>(system: &IncidenceSystem, targets: &[S]) -> Vec<Vec<S>> {
    let blocks = system.block_count();
    let mut heights: Vec<Vec<S>> = (0..blocks).map(|k| vec![S::zero(); system.groups(k).len()]).collect();
    let signature = |j: usize| (0..blocks).map(move |k| system.group_of(k, j));

    let mut components = system.components();
    for component in &mut components {
        component.sort_by(|&a, &b| signature(a).cmp(signature(b)));
    }
    components.sort_by(|a, b| signature(a[0]).cmp(signature(b[0])));

    for component in &components {
        let size = component.len();
        let gram: Vec<Vec<S>> = component
            .iter()
            .map(|&a| {
                component
                    .iter()
                    .map(|&b| {
                        let shared = (0..blocks).filter(|&k| system.group_of(k, a) == system.group_of(k, b)).count();
                        S::from_i64(shared as i64)
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<S> = component.iter().map(|&j| targets[j].clone()).collect();
        let y = if size == 1 {
            vec![rhs[0].clone() / gram[0][0].clone()]
        } else {
            solve_dense(gram, rhs).expect("full-rank component has a nonsingular Gram matrix")
        };
        for (&j, yj) in component.iter().zip(y) {
            for (k, block) in heights.iter_mut().enumerate() {
                let g = system.group_of(k, j);
                block[g] = block[g].clone() + yj.clone();
            }
        }
    }
    heights
}

/// `sum_j mu_j * y(x_j)` for the network output `y`, after checking that
/// `mu` cancels the point masses in every block.
///
/// In float mode a group sum counts as zero when it is within
/// `tolerance * sum_j |mu_j|`.
pub fn annihilate<S: Scalar, T: Transfer<S>>(
    points: &[Vec<S>],
    mu: &[S],
    transfer: &T,
    tables: &[LookupTable<S>],
    tolerance: &S,
) -> Result<S> {
    check_tables(transfer, tables)?;
    if mu.len() != points.len() {
        return Err(Error::DimensionMismatch { expected: points.len(), found: mu.len() });
    }
    if mu.iter().all(Zero::is_zero) {
        return Err(Error::InvalidWitness);
    }
    let w = transfer.w_table(points)?;
    let system = build_incidence(&w, tolerance)?;
    let slack = tolerance.clone() * mu.iter().fold(S::zero(), |acc, m| acc + m.abs());
    if system.apply(mu).iter().any(|sum| sum.abs() > slack) {
        return Err(Error::InvalidWitness);
    }
    Ok(w.iter().zip(mu).fold(S::zero(), |acc, (row, m)| acc + m.clone() * combine(tables, row)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<S> {
    pub max_abs_residual: S,
    pub table_sizes: Vec<usize>,
    pub distinct_keys: usize,
}

/// Largest reconstruction error of the tables over the sample.
pub fn residual_report<S: Scalar, T: Transfer<S>>(
    transfer: &T,
    tables: &[LookupTable<S>],
    sample: &SampleSet<S>,
) -> Result<ResidualReport<S>> {
    check_tables(transfer, tables)?;
    let mut worst = S::zero();
    for (x, f) in sample.points().iter().zip(sample.values()) {
        let row = transfer.w_row(x)?;
        let residual = (combine(tables, &row) - f.clone()).abs();
        worst = worst.max_of(residual);
    }
    let table_sizes: Vec<usize> = tables.iter().map(LookupTable::len).collect();
    Ok(ResidualReport { distinct_keys: table_sizes.iter().sum(), max_abs_residual: worst, table_sizes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, TransferStack};

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn stack() -> TransferStack<Rational> {
        TransferStack::default_for(2).unwrap()
    }

    #[test]
    fn single_point_splits_evenly() {
        let sample = SampleSet::new(2, vec![vec![q(1, 3), q(2, 3)]], vec![q(7, 2)]).unwrap();
        let tables = fit(&stack(), &sample, &Rational::zero()).unwrap();
        assert_eq!(tables.len(), 5);
        for t in &tables {
            assert_eq!(t.len(), 1);
            assert_eq!(t.entries()[0].1, q(7, 10));
        }
        let report = residual_report(&stack(), &tables, &sample).unwrap();
        assert!(report.max_abs_residual.is_zero());
        assert_eq!(report.distinct_keys, 5);
    }

    #[test]
    fn three_points_exact() {
        let points = vec![vec![q(1, 10), q(9, 10)], vec![q(1, 2), q(1, 4)], vec![q(1, 1), q(0, 1)]];
        let sample = SampleSet::new(2, points, vec![q(2, 1), q(-1, 1), q(7, 1)]).unwrap();
        let tables = fit(&stack(), &sample, &Rational::zero()).unwrap();
        let report = residual_report(&stack(), &tables, &sample).unwrap();
        assert!(report.max_abs_residual.is_zero());
        assert_eq!(report.table_sizes, vec![3; 5]);
    }

    #[test]
    fn duplicate_point_is_unrepresentable() {
        let x = vec![q(1, 5), q(3, 5)];
        let sample =
            SampleSet::new(2, vec![vec![q(0, 1), q(1, 1)], x.clone(), x], vec![q(1, 1), q(2, 1), q(2, 1)]).unwrap();
        match fit(&stack(), &sample, &Rational::zero()) {
            Err(Error::Unrepresentable(path)) => {
                assert_eq!(path.points, vec![1, 2]);
                assert_eq!(path.mu, vec![1.into(), (-1).into()]);
            }
            other => panic!("expected closed path, got {other:?}"),
        }
    }

    #[test]
    fn empty_sample() {
        let sample = SampleSet::<f64>::new(2, vec![], vec![]).unwrap();
        let s = TransferStack::<f64>::default_for(2).unwrap();
        let tables = fit(&s, &sample, &1e-12).unwrap();
        let report = residual_report(&s, &tables, &sample).unwrap();
        assert_eq!(report.max_abs_residual, 0.0);
        assert_eq!(report.table_sizes, vec![0; 5]);
    }

    #[test]
    fn sample_validation() {
        assert!(SampleSet::new(2, vec![vec![0.5, 1.5]], vec![1.0]).is_err());
        assert!(SampleSet::new(2, vec![vec![0.5]], vec![1.0]).is_err());
        assert!(SampleSet::new(2, vec![vec![0.5, 0.5]], vec![]).is_err());
    }

    #[test]
    fn lookup_behaviour() {
        let table = LookupTable::new(0, vec![(0.25, 1.0), (0.5, 2.0), (0.75, 3.0)], -1.0).unwrap();
        assert_eq!(*table.lookup(&0.5), 2.0);
        assert_eq!(*table.lookup(&0.6), -1.0);
        assert_eq!(*table.lookup_nearest(&0.51, &0.02), 2.0);
        assert_eq!(*table.lookup_nearest(&0.6, &0.02), -1.0);
        assert_eq!(*table.lookup_nearest(&0.8, &0.1), 3.0);
        assert!(LookupTable::new(0, vec![(0.5, 1.0), (0.5, 2.0)], 0.0).is_err());
    }

    #[test]
    fn annihilate_rejects_non_witness() {
        let s = stack();
        let points = vec![vec![q(1, 5), q(3, 5)], vec![q(2, 5), q(3, 5)]];
        let tables: Vec<_> = (0..5).map(LookupTable::empty).collect();
        let mu = vec![q(1, 1), q(-1, 1)];
        assert_eq!(annihilate(&points, &mu, &s, &tables, &Rational::zero()), Err(Error::InvalidWitness));
        let same = vec![points[0].clone(), points[0].clone()];
        assert!(annihilate(&same, &mu, &s, &tables, &Rational::zero()).unwrap().is_zero());
        let zero = vec![q(0, 1), q(0, 1)];
        assert_eq!(annihilate(&same, &zero, &s, &tables, &Rational::zero()), Err(Error::InvalidWitness));
    }
}
