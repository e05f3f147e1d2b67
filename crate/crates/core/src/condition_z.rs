//! Certification of the no-closed-path condition on a finite sample.
//!
//! A sample violates the condition when nonzero coefficients `mu_j` make the
//! point masses at `w_k(x_j)` cancel in every block `k`, which is exactly a
//! nowhere-zero vector in the nullspace of the incidence matrix.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::incidence::{build_incidence, IncidenceSystem};
use crate::linalg::{fraction_free_reduce, nullspace, primitive, to_bigint_matrix};
use crate::{Error, Rational, Result, Scalar};

/// A subset of sample points with integer coefficients, all nonzero, whose
/// point masses cancel in every block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPath {
    /// Sample indices, ascending.
    pub points: Vec<usize>,
    /// Coefficient of each point in `points`.
    pub mu: Vec<BigInt>,
}

impl ClosedPath {
    /// The coefficients spread over all `n` sample points, zero elsewhere.
    pub fn padded(&self, n: usize) -> Vec<BigInt> {
        let mut full = vec![BigInt::zero(); n];
        for (&j, m) in self.points.iter().zip(&self.mu) {
            full[j] = m.clone();
        }
        full
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZReport {
    pub n: usize,
    /// Distinct values per block.
    pub group_counts: Vec<usize>,
    pub rank: usize,
    pub nullspace_dim: usize,
    /// Every target vector on the sample is reachable (`rank == n`).
    pub solvable_for_all_f: bool,
    /// No nowhere-zero coefficient vector exists on the whole sample.
    pub z_satisfied: bool,
    /// A nowhere-zero nullspace vector of length `n`, when one exists.
    pub witness: Option<Vec<BigInt>>,
    /// Some closed path inside the sample whenever `rank < n`. A coincident
    /// pair is preferred; otherwise the support of a nullspace basis vector.
    pub closed_path: Option<ClosedPath>,
}

/// Rank, nullspace and witness of an incidence system by exact fraction-free
/// elimination, one connected component at a time.
pub fn check_z(system: &IncidenceSystem) -> ZReport {
    let n = system.n();
    let mut rank = 0;
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for component in system.components() {
        let local = to_bigint_matrix(&system.local_matrix(&component));
        let red = fraction_free_reduce(local, component.len());
        rank += red.rank;
        for v in nullspace(&red, component.len()) {
            let mut full = vec![BigInt::zero(); n];
            for (&j, x) in component.iter().zip(v) {
                full[j] = x;
            }
            basis.push(full);
        }
    }

    // A subspace contains a nowhere-zero vector iff no coordinate vanishes on
    // all of it.
    let covered = n > 0 && (0..n).all(|j| basis.iter().any(|v| !v[j].is_zero()));
    let witness = if covered { Some(generic_combination(system, &basis)) } else { None };

    let closed_path = if rank < n {
        Some(match system.coincident_pair() {
            Some((i, j)) => ClosedPath { points: vec![i, j], mu: vec![BigInt::one(), -BigInt::one()] },
            None => support_path(&basis[0]),
        })
    } else {
        None
    };

    ZReport {
        n,
        group_counts: system.group_counts(),
        rank,
        nullspace_dim: n - rank,
        solvable_for_all_f: rank == n,
        z_satisfied: witness.is_none(),
        witness,
        closed_path,
    }
}

fn support_path(v: &[BigInt]) -> ClosedPath {
    let (points, mu) = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).unzip();
    ClosedPath { points, mu }
}

/// `sum_i t^i b_i` for successive primes `t` until every entry is nonzero.
///
/// Each entry is a nonzero polynomial in `t` of degree below `basis.len()`,
/// so at most `n * (basis.len() - 1) + 1` values of `t` can fail.
fn generic_combination(system: &IncidenceSystem, basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = system.n();
    for t in primes() {
        let t = BigInt::from(t);
        let mut mu = vec![BigInt::zero(); n];
        let mut weight = BigInt::one();
        for b in basis {
            for (m, x) in mu.iter_mut().zip(b) {
                if !x.is_zero() {
                    *m += &weight * x;
                }
            }
            weight *= &t;
        }
        if mu.iter().all(|m| !m.is_zero()) {
            let mu = primitive(mu);
            assert!(system.apply(&mu).iter().all(Zero::is_zero), "witness failed re-verification");
            return mu;
        }
    }
    unreachable!("prime sequence is unbounded")
}

fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&p| (2..).take_while(|d| d * d <= p).all(|d| p % d != 0))
}

/// Independent oracle for [`check_z`] on at most ten points.
///
/// Uses plain rational Gauss-Jordan elimination. A coordinate `j` is forced
/// to zero on the nullspace exactly when appending the unit row `e_j` leaves
/// the rank unchanged; otherwise integer weight vectors from `{1, ..., n+1}`
/// are enumerated over the nullspace basis until a nowhere-zero combination
/// appears. The enumeration cannot miss: a product of `n` nonzero linear
/// forms does not vanish on a grid with more than `n` values per axis.
pub fn brute_force_z<S: Scalar>(table: &[Vec<S>], tolerance: &S) -> Result<ZReport> {
    const MAX_POINTS: usize = 10;
    if table.len() > MAX_POINTS {
        return Err(Error::Size { n: table.len(), max: MAX_POINTS });
    }
    let system = build_incidence(table, tolerance)?;
    let n = system.n();
    let matrix: Vec<Vec<Rational>> =
        system.matrix().iter().map(|row| row.iter().map(|&x| Rational::from_i64(x as i64)).collect()).collect();

    let (reduced, pivots) = rref(matrix.clone(), n);
    let rank = pivots.len();
    let basis = rational_nullspace(&reduced, &pivots, n);

    let forced_zero = (0..n).any(|j| {
        let mut extended = matrix.clone();
        let mut unit = vec![Rational::zero(); n];
        unit[j] = Rational::one();
        extended.push(unit);
        rref(extended, n).1.len() == rank
    });

    let witness = if n == 0 || forced_zero { None } else { grid_search(&basis, n) };
    let closed_path = basis.first().map(|v| support_path(&integral(v)));
    Ok(ZReport {
        n,
        group_counts: system.group_counts(),
        rank,
        nullspace_dim: n - rank,
        solvable_for_all_f: rank == n,
        z_satisfied: witness.is_none(),
        witness,
        closed_path,
    })
}

fn rref(mut m: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in &mut m[row] {
            *x = &*x * &inv;
        }
        let pivot_row = m[row].clone();
        for (i, current) in m.iter_mut().enumerate() {
            if i != row && !current[col].is_zero() {
                let factor = current[col].clone();
                for (x, p) in current.iter_mut().zip(&pivot_row) {
                    *x = &*x - &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

fn rational_nullspace(reduced: &[Vec<Rational>], pivots: &[usize], n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .filter(|f| !pivots.contains(f))
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (row, &pc) in reduced.iter().zip(pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

fn grid_search(basis: &[Vec<Rational>], n: usize) -> Option<Vec<BigInt>> {
    let top = n as i64 + 1;
    let mut weights = vec![1i64; basis.len()];
    loop {
        let mut mu = vec![Rational::zero(); n];
        for (w, b) in weights.iter().zip(basis) {
            for (m, x) in mu.iter_mut().zip(b) {
                *m = &*m + x * Rational::from_i64(*w);
            }
        }
        if mu.iter().all(|m| !m.is_zero()) {
            return Some(integral(&mu));
        }
        // Odometer over {1..=top}^len.
        let mut i = 0;
        loop {
            if i == weights.len() {
                return None;
            }
            if weights[i] < top {
                weights[i] += 1;
                break;
            }
            weights[i] = 1;
            i += 1;
        }
    }
}

fn integral(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    primitive(v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect())
}

/// Smallest subset of points, of size at most `max_subset`, that carries a
/// nowhere-zero witness. Subsets are scanned by increasing size and then in
/// lexicographic order.
pub fn minimal_violation<S: Scalar>(table: &[Vec<S>], tolerance: &S, max_subset: usize) -> Result<Option<ClosedPath>> {
    const MAX_SUBSET: usize = 12;
    if max_subset > MAX_SUBSET {
        return Err(Error::Size { n: max_subset, max: MAX_SUBSET });
    }
    let system = build_incidence(table, tolerance)?;
    let n = system.n();
    for size in 2..=max_subset.min(n) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let report = check_z(&system.restrict(&subset));
            if let Some(mu) = report.witness {
                return Ok(Some(ClosedPath { points: subset, mu }));
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    Ok(None)
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
        return false;
    };
    subset[i] += 1;
    for j in i + 1..k {
        subset[j] = subset[j - 1] + 1;
    }
    true
}
