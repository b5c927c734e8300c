//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    /// The unique solution.
    Unique(Vec<Rational>),
    /// Consistent but the columns are dependent; carries the solution with
    /// every free variable set to zero.
    Underdetermined(Vec<Rational>),
    Inconsistent,
}

/// Solves `sum_j x_j * columns[j] = rhs`. Rows past the shortest column are
/// ignored, so callers get the common truncation automatically.
pub fn solve_columns(columns: &[Vec<Rational>], rhs: &[Rational]) -> Solution {
    let ncols = columns.len();
    let nrows = columns
        .iter()
        .map(Vec::len)
        .chain(std::iter::once(rhs.len()))
        .min()
        .unwrap_or(0);
    let mut a: Vec<Vec<Rational>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(found) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, found);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=ncols {
                    let t = &factor * &a[row][c];
                    a[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if a[row..].iter().any(|r| !r[ncols].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][ncols].clone();
    }
    if pivots.len() == ncols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined(x)
    }
}
