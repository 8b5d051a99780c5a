//! Exact rational linear solving for the brute-force oracle.
//!
//! The systems are tiny (at most a few hundred 0/1 rows, at most five
//! columns), so plain Gauss–Jordan elimination over `BigRational` is both
//! fast enough and free of rounding questions.

use num_rational::BigRational;
use num_traits::Zero;

/// Outcome of solving `A·x = b` exactly.
#[derive(Debug)]
pub(crate) enum SolveOutcome {
    /// Full column rank and consistent: the one and only solution.
    Unique(Vec<BigRational>),
    /// Some equation reduces to `0 = c` with `c ≠ 0`.
    Inconsistent,
    /// Consistent but with free variables (column rank below width).
    Underdetermined,
}

/// Solves `A·x = b` over the rationals. `columns[c][r]` holds `A[r][c]`;
/// every column must have the same length as `rhs`.
pub(crate) fn solve_exact(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> SolveOutcome {
    let width = columns.len();
    let height = rhs.len();
    let mut aug: Vec<Vec<BigRational>> = (0..height)
        .map(|r| {
            let mut row: Vec<BigRational> = columns.iter().map(|col| col[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();

    // Forward phase: reduce to row echelon form, recording pivot columns.
    let mut pivots: Vec<usize> = Vec::with_capacity(width);
    let mut rank = 0usize;
    for col in 0..width {
        let Some(pivot_row) = (rank..height).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, pivot_row);
        let inv = aug[rank][col].clone();
        for v in aug[rank][col..].iter_mut() {
            *v = &*v / &inv;
        }
        for r in 0..height {
            if r != rank && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                // Indexed form: rows `r` and `rank` are borrowed together.
                #[allow(clippy::needless_range_loop)]
                for c in col..=width {
                    let delta = &factor * &aug[rank][c];
                    aug[r][c] = &aug[r][c] - delta;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == height {
            break;
        }
    }

    // Any surviving row of the form 0 = c refutes the whole system.
    if aug[rank..].iter().any(|row| !row[width].is_zero()) {
        return SolveOutcome::Inconsistent;
    }
    if rank < width {
        return SolveOutcome::Underdetermined;
    }

    let mut x = vec![BigRational::zero(); width];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = aug[r][width].clone();
    }
    SolveOutcome::Unique(x)
}
