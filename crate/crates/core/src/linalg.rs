//! Small dense exact linear algebra over the rationals.
//!
//! Desk-scale only: matrices here have at most a few dozen rows, so
//! plain fraction-based Gaussian elimination is the right tool.

use num::{BigInt, BigRational, One, Zero};

pub type Rational = BigRational;
pub type Int = BigInt;

/// Solves sum_j a_j * cols[j] = target (an overdetermined system with
/// `nrows` equations). Returns None when inconsistent.
pub fn solve_columns(cols: &[Vec<Rational>], target: &[Rational], nrows: usize) -> Option<Vec<Rational>> {
    let ncols = cols.len();
    // augmented matrix [cols | target]
    let mut m: Vec<Vec<Rational>> = (0..nrows)
        .map(|i| {
            let mut row: Vec<Rational> = cols
                .iter()
                .map(|c| c.get(i).cloned().unwrap_or_else(Rational::zero))
                .collect();
            row.push(target.get(i).cloned().unwrap_or_else(Rational::zero));
            row
        })
        .collect();
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) {
            m.swap(row, p);
            let inv = m[row][col].recip();
            for x in m[row].iter_mut() {
                *x *= &inv;
            }
            for r in 0..nrows {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=ncols {
                        let sub = &f * &m[row][c];
                        m[r][c] -= sub;
                    }
                }
            }
            pivot_col_of_row.push(col);
            row += 1;
        }
    }
    // consistency: no pivot in the augmented column
    for r in row..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rational::zero(); ncols];
    for (r, &c) in pivot_col_of_row.iter().enumerate() {
        sol[c] = m[r][ncols].clone();
    }
    Some(sol)
}

/// Determinant by fraction-based elimination.
pub fn det(mat: &[Vec<Rational>]) -> Rational {
    let n = mat.len();
    let mut m: Vec<Vec<Rational>> = mat.to_vec();
    let mut result = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(col, p);
            result = -result;
        }
        result *= &m[col][col];
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for c in col..n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    result
}

/// Exact inverse; None when singular.
pub fn inverse(mat: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = mat.len();
    let mut m: Vec<Vec<Rational>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rational::one() } else { Rational::zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn int_to_rat(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational::from(Int::from(x))).collect())
        .collect()
}

/// Characteristic polynomial of an integer matrix, low degree first,
/// monic of degree n. Computed by evaluation of det(kI - M) at n+1
/// points and Lagrange interpolation.
pub fn char_poly(mat: &[Vec<i64>]) -> Vec<Int> {
    let n = mat.len();
    let points: Vec<i64> = (0..=n as i64).collect();
    let values: Vec<Rational> = points
        .iter()
        .map(|&k| {
            let m: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let d = if i == j { k } else { 0 };
                            Rational::from(Int::from(d - mat[i][j]))
                        })
                        .collect()
                })
                .collect();
            det(&m)
        })
        .collect();
    // interpolate: solve Vandermonde system
    let cols: Vec<Vec<Rational>> = (0..=n)
        .map(|j| {
            points
                .iter()
                .map(|&k| {
                    let mut p = Rational::one();
                    for _ in 0..j {
                        p *= Rational::from(Int::from(k));
                    }
                    p
                })
                .collect()
        })
        .collect();
    let sol = solve_columns(&cols, &values, n + 1).expect("interpolation is always solvable");
    sol.into_iter()
        .map(|c| {
            assert!(c.is_integer(), "characteristic polynomial must be integral");
            c.to_integer()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> Rational {
        Rational::from(Int::from(x))
    }

    #[test]
    fn solve_simple() {
        let cols = vec![vec![r(1), r(0)], vec![r(1), r(1)]];
        let sol = solve_columns(&cols, &[r(3), r(2)], 2).unwrap();
        assert_eq!(sol, vec![r(1), r(2)]);
        assert!(solve_columns(&[vec![r(1), r(1)]], &[r(1), r(2)], 2).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let m = vec![vec![r(2), r(1)], vec![r(1), r(1)]];
        assert_eq!(det(&m), r(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0], vec![r(1), r(-1)]);
        assert_eq!(inv[1], vec![r(-1), r(2)]);
    }

    #[test]
    fn char_poly_reflection() {
        // s_1 in A_1 acts by -1
        assert_eq!(char_poly(&[vec![-1]]), vec![Int::from(1), Int::from(1)]);
        // identity 2x2: (x-1)^2 = 1 - 2x + x^2
        assert_eq!(
            char_poly(&[vec![1, 0], vec![0, 1]]),
            vec![Int::from(1), Int::from(-2), Int::from(1)]
        );
    }
}
