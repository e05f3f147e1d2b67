//! Exact integer elimination for incidence systems and a small dense solver
//! for the normal equations of the lookup-table fit.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Scalar;

/// Result of fraction-free Gauss-Jordan elimination.
///
/// The first `rank` rows are reduced: in the pivot columns they hold
/// `scale` on the diagonal and zero elsewhere.
pub(crate) struct Reduction {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub rows: Vec<Vec<BigInt>>,
    pub scale: BigInt,
}

/// Fraction-free (Bareiss) Gauss-Jordan elimination with the pivot of least
/// magnitude chosen in each column. Every division is exact.
pub(crate) fn fraction_free_reduce(mut m: Vec<Vec<BigInt>>, cols: usize) -> Reduction {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| m[i][col].magnitude().clone())
        else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        let pivot_row = m[row].clone();
        for (i, current) in m.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = current[col].clone();
            for (entry, p_entry) in current.iter_mut().zip(&pivot_row) {
                let numer = &pivot * &*entry - &factor * p_entry;
                let (q, r) = numer.div_rem(&prev);
                debug_assert!(r.is_zero(), "inexact fraction-free division");
                *entry = q;
            }
        }
        prev = pivot;
        pivot_cols.push(col);
        row += 1;
    }
    m.truncate(row);
    Reduction { rank: row, pivot_cols, rows: m, scale: prev }
}

/// Integer basis of the right nullspace, one primitive vector per free column.
pub(crate) fn nullspace(red: &Reduction, cols: usize) -> Vec<Vec<BigInt>> {
    let mut is_pivot = vec![false; cols];
    for &c in &red.pivot_cols {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![BigInt::zero(); cols];
            v[f] = red.scale.clone();
            for (row, &pc) in red.rows.iter().zip(&red.pivot_cols) {
                v[pc] = -row[f].clone();
            }
            primitive(v)
        })
        .collect()
}

/// Divides out the content and makes the first nonzero entry positive.
pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    let flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in &mut v {
        *x = &*x / &g;
        if flip {
            *x = -&*x;
        }
    }
    v
}

pub(crate) fn to_bigint_matrix(m: &[Vec<u8>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting on magnitude. Returns `None` when `a` is singular.
pub(crate) fn solve_dense<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n)
            .filter(|&i| !a[i][col].is_zero())
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(core::cmp::Ordering::Equal))?;
        a.swap(col, p);
        b.swap(col, p);
        let pivot = a[col][col].clone();
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone() / pivot.clone();
            for j in col..n {
                let delta = factor.clone() * a[col][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
            let delta = factor * b[col].clone();
            b[i] = b[i].clone() - delta;
        }
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in i + 1..n {
            acc = acc - a[i][j].clone() * x[j].clone();
        }
        x[i] = acc / a[i][i].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn times(m: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
        m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn rank_and_nullspace_of_rectangle_path() {
        // Two blocks on four points: (a,a,b,b) and (c,d,c,d).
        let m = ints(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let red = fraction_free_reduce(m.clone(), 4);
        assert_eq!(red.rank, 3);
        let ns = nullspace(&red, 4);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], ints(&[&[1, -1, -1, 1]])[0]);
        assert!(times(&m, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let m = ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let red = fraction_free_reduce(m, 3);
        assert_eq!(red.rank, 3);
        // Final scale is the determinant up to sign.
        assert_eq!(red.scale.magnitude(), BigInt::from(18).magnitude());
        assert!(nullspace(&red, 3).is_empty());
    }

    #[test]
    fn zero_matrix() {
        let red = fraction_free_reduce(ints(&[&[0, 0]]), 2);
        assert_eq!(red.rank, 0);
        assert_eq!(nullspace(&red, 2), ints(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn primitive_normalizes() {
        assert_eq!(primitive(ints(&[&[0, -4, 6]])[0].clone()), ints(&[&[0, 2, -3]])[0]);
    }

    #[test]
    fn dense_solve_rational() {
        let a = vec![
            vec![Rational::from_i64(2), Rational::from_i64(1)],
            vec![Rational::from_i64(1), Rational::from_i64(3)],
        ];
        let b = vec![Rational::from_i64(1), Rational::from_i64(2)];
        let x = solve_dense(a, b).unwrap();
        assert_eq!(x, vec![Rational::ratio(1, 5), Rational::ratio(3, 5)]);
        assert!(solve_dense(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 1.0]).is_none());
    }
}
