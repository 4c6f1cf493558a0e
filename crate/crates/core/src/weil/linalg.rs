//! Exact Gauss-Jordan elimination over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced row-echelon form: `rows[k]` has a leading 1 in column
/// `pivots[k]` and zeros in every other pivot column.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<Vec<BigRational>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains(&col)
    }

    /// Projects `v` onto the complement of the row space along pivot columns:
    /// the result has zeros in every pivot column.
    pub fn reduce(&self, v: &mut [BigRational]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }
}

pub fn rref(input: Vec<Vec<BigRational>>, ncols: usize) -> Rref {
    let mut rows: Vec<Vec<BigRational>> = input.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let Some(found) = (top..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(top, found);
        let inv = BigRational::one() / &rows[top][col];
        for x in rows[top].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == top || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    Rref { ncols, rows, pivots }
}

pub fn rank(rows: Vec<Vec<BigRational>>, ncols: usize) -> usize {
    rref(rows, ncols).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        let r = rref(rows, 3);
        assert_eq!(r.rank(), 2);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rows[0], vec![q(1), q(0), q(1)]);
    }

    #[test]
    fn reduce_zeroes_pivot_columns() {
        let r = rref(vec![vec![q(1), q(1)]], 2);
        let mut v = vec![q(3), q(5)];
        r.reduce(&mut v);
        assert_eq!(v, vec![q(0), q(2)]);
    }
}
