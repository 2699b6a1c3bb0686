//! Exact Gauss–Jordan elimination over ℚ.

use num_traits::{One, Zero};

use crate::rational::{pivot_cost, Rational};

/// Reduced row echelon form of a rational matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows, each normalized to 1 at its pivot.
    pub rows: Vec<Vec<Rational>>,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row-reduces `rows` (each of length `ncols`).
///
/// Among candidate rows for a pivot column the one whose entry has the
/// smallest denominator (then smallest numerator) is chosen.
pub fn row_reduce(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Echelon {
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));

    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(best) = (next..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| pivot_cost(&rows[i][col]))
        else {
            continue;
        };
        rows.swap(next, best);

        let inv = Rational::one() / &rows[next][col];
        for x in rows[next][col..].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let support: Vec<usize> = (col..ncols)
            .filter(|&j| !rows[next][j].is_zero())
            .collect();
        let pivot_row = rows[next].clone();

        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                row[j] -= delta;
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    Echelon { rows, pivots }
}

pub fn rank(rows: Vec<Vec<Rational>>, ncols: usize) -> usize {
    row_reduce(rows, ncols).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(vec![], 3), 0);
        assert_eq!(rank(m(&[&[0, 0, 0]]), 3), 0);
        assert_eq!(rank(m(&[&[1, 2], &[2, 4]]), 2), 1);
        assert_eq!(rank(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]), 3), 2);
        assert_eq!(rank(m(&[&[2, 0, 1], &[0, 3, 0], &[1, 1, 1]]), 3), 3);
    }

    #[test]
    fn reduced_form_is_normalized() {
        let rows = vec![
            vec![ratio(1, 3), ratio(2, 3), int(0)],
            vec![ratio(1, 2), int(0), int(5)],
        ];
        let e = row_reduce(rows, 3);
        assert_eq!(e.pivots, vec![0, 1]);
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            assert_eq!(row[p], int(1));
        }
        assert!(e.rows[1][0].is_zero());
        assert!(e.rows[0][1].is_zero());
    }
}
