//! Small exact linear algebra over `Ratio<i128>`.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Q = Ratio<i128>;

/// Outcome of solving `A x = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<Q>),
    Inconsistent,
    /// The system is consistent but has a positive-dimensional solution set.
    /// `null_space` is a basis of the homogeneous solutions.
    Underdetermined { null_space: Vec<Vec<Q>> },
}

/// Reduced row echelon form in place. Returns the pivot column of each pivot row.
fn rref(m: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c];
        for x in m[r].iter_mut() {
            *x /= pv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..m[i].len() {
                    let d = f * m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solve `a x = b` where `a` has `b.len()` rows and `cols` columns.
pub fn solve(a: &[Vec<Q>], b: &[Q], cols: usize) -> LinearSolution {
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut row = row.clone();
            row.push(rhs);
            row
        })
        .collect();
    let pivots = rref(&mut m, cols);
    for (i, row) in m.iter().enumerate() {
        if i >= pivots.len() && !row[cols].is_zero() {
            return LinearSolution::Inconsistent;
        }
    }
    if pivots.len() < cols {
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let null_space = free
            .iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); cols];
                v[f] = Q::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[row][f];
                }
                v
            })
            .collect();
        return LinearSolution::Underdetermined { null_space };
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols];
    }
    LinearSolution::Unique(x)
}

/// Exact inverse of a square integer matrix, or `None` if it is singular.
pub fn invert(m: &[Vec<i64>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q> = row.iter().map(|&x| Q::from_integer(x as i128)).collect();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Scale a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Q]) -> Vec<i64> {
    let lcm = v
        .iter()
        .fold(1i128, |acc, x| num_integer_lcm(acc, *x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| (x * Q::from_integer(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
    let g = if g == 0 { 1 } else { g };
    let sign = match ints.iter().find(|x| **x != 0) {
        Some(x) if x.is_negative() => -1,
        _ => 1,
    };
    ints.iter().map(|&x| (sign * x / g) as i64).collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn num_integer_lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i128) -> Q {
        Q::from_integer(x)
    }

    #[test]
    fn inverse_of_unipotent_matrix_is_integral() {
        let m = vec![vec![1, -2, 0], vec![0, 1, -1], vec![0, 0, 1]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0], vec![q(1), q(2), q(2)]);
        assert_eq!(inv[1], vec![q(0), q(1), q(1)]);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        assert!(invert(&[vec![1, 2], vec![2, 4]]).is_none());
    }

    #[test]
    fn underdetermined_system_reports_kernel() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        match solve(&a, &[q(2), q(4)], 2) {
            LinearSolution::Underdetermined { null_space } => {
                assert_eq!(null_space.len(), 1);
                assert_eq!(primitive_integer(&null_space[0]), vec![1, -1]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconsistent_system_is_detected() {
        let a = vec![vec![q(1)], vec![q(1)]];
        assert_eq!(solve(&a, &[q(1), q(2)], 1), LinearSolution::Inconsistent);
    }
}
