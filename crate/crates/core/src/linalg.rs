//! Exact linear algebra over the rationals for small dense systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn to_rational_rows(columns: &[&[i64]], target: Option<&[i64]>) -> Vec<Vec<BigRational>> {
    let n = columns
        .first()
        .map(|c| c.len())
        .or(target.map(<[i64]>::len))
        .unwrap_or(0);
    (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> = columns
                .iter()
                .map(|c| BigRational::from_integer(BigInt::from(c[r])))
                .collect();
            if let Some(t) = target {
                row.push(BigRational::from_integer(BigInt::from(t[r])));
            }
            row
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns among the
/// first `cols` columns.
fn rref(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (pivot_row, other) = if i < r {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, y) in other.iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of a list of integer vectors over the rationals.
pub fn rank(vectors: &[&[i64]]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut rows = to_rational_rows(vectors, None);
    rref(&mut rows, vectors.len()).len()
}

/// Solves `sum_i x_i * basis_i = target` over the rationals for a linearly
/// independent basis.
pub fn solve_rational(basis: &[&[i64]], target: &[i64]) -> Result<Vec<BigRational>> {
    let k = basis.len();
    if basis.iter().any(|b| b.len() != target.len()) {
        return Err(Error::LengthMismatch {
            expected: target.len(),
            got: basis
                .iter()
                .map(|b| b.len())
                .find(|&l| l != target.len())
                .unwrap_or(0),
        });
    }
    let mut rows = to_rational_rows(basis, Some(target));
    let pivots = rref(&mut rows, k + 1);
    if pivots.contains(&k) {
        return Err(Error::NotInSpan {
            target: target.to_vec(),
        });
    }
    if pivots.len() < k {
        return Err(Error::Precondition(
            "basis vectors are linearly dependent".into(),
        ));
    }
    Ok((0..k).map(|i| rows[i][k].clone()).collect())
}

/// Coefficients of `target` in `basis`, required to be nonnegative
/// integers.
pub fn solve_nonnegative_integer(basis: &[&[i64]], target: &[i64]) -> Result<Vec<i64>> {
    let coefficients = solve_rational(basis, target)?;
    if coefficients.iter().any(|c| !c.is_integer()) {
        return Err(Error::NonIntegerExpansion {
            target: target.to_vec(),
        });
    }
    if coefficients.iter().any(|c| c.is_negative()) {
        return Err(Error::NegativeExpansion {
            target: target.to_vec(),
        });
    }
    coefficients
        .iter()
        .map(|c| {
            c.to_integer()
                .to_i64()
                .ok_or(Error::Overflow("linear solve"))
        })
        .collect()
}

/// `sum_i coefficients_i * vectors_i`, checked.
pub fn combination(coefficients: &[i64], vectors: &[&[i64]], n: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i64; n];
    for (&c, v) in coefficients.iter().zip(vectors) {
        for (o, &x) in out.iter_mut().zip(v.iter()) {
            *o = c
                .checked_mul(x)
                .and_then(|p| o.checked_add(p))
                .ok_or(Error::Overflow("linear combination"))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[&[1, 0], &[0, 1]]), 2);
        assert_eq!(rank(&[&[1, 2], &[2, 4]]), 1);
        assert_eq!(rank(&[&[1, 1, 1], &[0, 1, 0], &[1, 2, 1]]), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn solves_integer_combinations() {
        assert_eq!(
            solve_nonnegative_integer(&[&[0, 1], &[1, 0]], &[2, 1]).unwrap(),
            vec![1, 2]
        );
        assert_eq!(
            solve_nonnegative_integer(&[&[3, 2]], &[9, 6]).unwrap(),
            vec![3]
        );
        assert_eq!(
            solve_nonnegative_integer(&[], &[0, 0]).unwrap(),
            Vec::<i64>::new()
        );
    }

    #[test]
    fn solve_errors() {
        assert!(matches!(
            solve_nonnegative_integer(&[&[1, 1]], &[1, 0]),
            Err(Error::NotInSpan { .. })
        ));
        assert!(matches!(
            solve_nonnegative_integer(&[&[2, 2]], &[1, 1]),
            Err(Error::NonIntegerExpansion { .. })
        ));
        assert!(matches!(
            solve_nonnegative_integer(&[&[1, 0], &[1, 1]], &[0, 1]),
            Err(Error::NegativeExpansion { .. })
        ));
        assert!(matches!(
            solve_nonnegative_integer(&[&[1, 1], &[2, 2]], &[1, 1]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn combination_sums() {
        assert_eq!(
            combination(&[2, 1], &[&[1, 0], &[0, 1]], 2).unwrap(),
            vec![2, 1]
        );
    }
}
