//! Grouping of transfer values into point-mass equations.
//!
//! For a fixed block `k`, the points whose `w_k` values coincide form one
//! group, and the condition that the point masses cancel on that value is the
//! homogeneous equation `sum_{j in group} mu_j = 0`. One 0/1 row per group per
//! block gives the incidence matrix of the system.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use crate::{Error, NumericMode, Result, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceSystem {
    n: usize,
    // blocks[k][g]: ascending point indices of group g, groups in ascending value order.
    blocks: Vec<Vec<Vec<usize>>>,
    // group_of[k][j]: group of point j in block k.
    group_of: Vec<Vec<usize>>,
}

/// Groups the columns of an `n x blocks` table.
///
/// In float mode two sorted neighbours `a <= b` share a group when
/// `b - a <= tolerance * max(1, |a|, |b|)`. A gap strictly between that
/// threshold and ten times it is reported as
/// [`Error::GroupingAmbiguity`]. In rational mode `tolerance` must be zero
/// and grouping is exact equality.
pub fn build_incidence<S: Scalar>(table: &[Vec<S>], tolerance: &S) -> Result<IncidenceSystem> {
    if tolerance.is_negative() {
        return Err(Error::Invalid("grouping tolerance must be nonnegative"));
    }
    if S::MODE == NumericMode::ExactRational && !tolerance.is_zero() {
        return Err(Error::Invalid("rational grouping requires zero tolerance"));
    }
    let n = table.len();
    let width = table.first().map_or(0, Vec::len);
    if let Some(row) = table.iter().find(|row| row.len() != width) {
        return Err(Error::DimensionMismatch { expected: width, found: row.len() });
    }

    let ten = S::from_i64(10);
    let mut blocks = Vec::with_capacity(width);
    let mut group_of = Vec::with_capacity(width);
    for k in 0..width {
        let mut order: Vec<usize> = (0..n).collect();
        let mut incomparable = false;
        order.sort_by(|&i, &j| {
            table[i][k].partial_cmp(&table[j][k]).unwrap_or_else(|| {
                incomparable = true;
                Ordering::Equal
            })
        });
        if incomparable {
            return Err(Error::Invalid("transfer values must be comparable"));
        }

        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut owner = vec![0usize; n];
        for (pos, &j) in order.iter().enumerate() {
            let joins_previous = pos > 0 && {
                let a = &table[order[pos - 1]][k];
                let b = &table[j][k];
                let gap = b.clone() - a.clone();
                let threshold = tolerance.clone() * S::one().max_of(a.abs()).max_of(b.abs());
                if gap > threshold && gap < ten.clone() * threshold.clone() {
                    return Err(Error::GroupingAmbiguity {
                        block: k,
                        gap: gap.to_f64(),
                        tolerance: threshold.to_f64(),
                    });
                }
                gap <= threshold
            };
            if !joins_previous {
                groups.push(Vec::new());
            }
            let g = groups.len() - 1;
            groups[g].push(j);
            owner[j] = g;
        }
        for group in &mut groups {
            group.sort_unstable();
        }
        blocks.push(groups);
        group_of.push(owner);
    }
    Ok(IncidenceSystem { n, blocks, group_of })
}

impl IncidenceSystem {
    /// Number of points (matrix columns).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn groups(&self, k: usize) -> &[Vec<usize>] {
        &self.blocks[k]
    }

    pub fn group_of(&self, k: usize, j: usize) -> usize {
        self.group_of[k][j]
    }

    /// Distinct value counts `s_k` per block.
    pub fn group_counts(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Total number of equations `s = sum_k s_k`.
    pub fn rows(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Dense `s x n` 0/1 incidence matrix, block by block.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.blocks
            .iter()
            .flatten()
            .map(|group| {
                let mut row = vec![0u8; self.n];
                for &j in group {
                    row[j] = 1;
                }
                row
            })
            .collect()
    }

    /// Incidence matrix applied to `mu`: one group sum per equation.
    pub fn apply<T: Clone + Zero>(&self, mu: &[T]) -> Vec<T> {
        self.blocks.iter().flatten().map(|group| group.iter().fold(T::zero(), |acc, &j| acc + mu[j].clone())).collect()
    }

    /// Points whose groups coincide in every block, as the lexicographically
    /// first pair `(i, j)` with `i < j`.
    pub fn coincident_pair(&self) -> Option<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.n).collect();
        let key = |j: usize| self.group_of.iter().map(move |owner| owner[j]);
        order.sort_by(|&a, &b| key(a).cmp(key(b)).then(a.cmp(&b)));
        order.windows(2).filter(|w| key(w[0]).eq(key(w[1]))).map(|w| (w[0], w[1])).min()
    }

    /// Connected components of the point/group incidence graph. Each
    /// component's points are in ascending index order; components are
    /// ordered by their smallest point.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for group in self.blocks.iter().flatten() {
            let root = find(&mut parent, group[0]);
            for &j in &group[1..] {
                let other = find(&mut parent, j);
                if other != root {
                    parent[other] = root;
                }
            }
        }
        let mut slot = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for j in 0..self.n {
            let root = find(&mut parent, j);
            if slot[root] == usize::MAX {
                slot[root] = out.len();
                out.push(Vec::new());
            }
            out[slot[root]].push(j);
        }
        out
    }

    /// Dense incidence rows restricted to the columns in `points`, keeping
    /// only groups that touch them.
    pub(crate) fn local_matrix(&self, points: &[usize]) -> Vec<Vec<u8>> {
        let mut column = vec![usize::MAX; self.n];
        for (c, &j) in points.iter().enumerate() {
            column[j] = c;
        }
        let mut rows = Vec::new();
        for group in self.blocks.iter().flatten() {
            if group.iter().any(|&j| column[j] != usize::MAX) {
                let mut row = vec![0u8; points.len()];
                for &j in group {
                    if column[j] != usize::MAX {
                        row[column[j]] = 1;
                    }
                }
                rows.push(row);
            }
        }
        rows
    }

    /// The system induced on a subset of points, renumbered `0..subset.len()`.
    pub fn restrict(&self, subset: &[usize]) -> IncidenceSystem {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        let mut group_of = Vec::with_capacity(self.blocks.len());
        let mut local = vec![usize::MAX; self.n];
        for (c, &j) in subset.iter().enumerate() {
            local[j] = c;
        }
        for groups in &self.blocks {
            let mut kept: Vec<Vec<usize>> = Vec::new();
            let mut owner = vec![0usize; subset.len()];
            for group in groups {
                let mut members: Vec<usize> =
                    group.iter().filter(|&&j| local[j] != usize::MAX).map(|&j| local[j]).collect();
                if members.is_empty() {
                    continue;
                }
                members.sort_unstable();
                for &c in &members {
                    owner[c] = kept.len();
                }
                kept.push(members);
            }
            blocks.push(kept);
            group_of.push(owner);
        }
        IncidenceSystem { n: subset.len(), blocks, group_of }
    }
}
