//! Grothendieck group of an exceptional sequence.
//!
//! Classes are integer vectors in the basis given by the objects of a fixed
//! reference sequence. The Euler form in that basis is the upper
//! unitriangular matrix of signed entries, and the Auslander-Reiten
//! translation acts by the Coxeter matrix `-A^{-1} A^T`.

use crate::exseq::{ExcSeqQuiver, MutKind, Side};
use crate::linalg;

/// Longest τ-orbit followed before giving up.
pub const ORBIT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    euler: Vec<Vec<i64>>,
    coxeter: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn from_sequence(q: &ExcSeqQuiver) -> Self {
        let n = q.n();
        let euler: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Less => q.a(i, j),
                        std::cmp::Ordering::Equal => 1,
                        std::cmp::Ordering::Greater => 0,
                    })
                    .collect()
            })
            .collect();
        let inv = linalg::invert(&euler).expect("unitriangular matrices are invertible");
        let coxeter = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x: linalg::Q = (0..n)
                            .map(|k| inv[i][k] * linalg::Q::from_integer(euler[j][k] as i128))
                            .sum();
                        -(x.to_integer() as i64)
                    })
                    .collect()
            })
            .collect();
        Lattice { euler, coxeter }
    }

    pub fn rank(&self) -> usize {
        self.euler.len()
    }

    /// Basis classes of the reference sequence.
    pub fn basis(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
    }

    pub fn euler_form(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in i..n {
                s += x[i] * self.euler[i][j] * y[j];
            }
        }
        s
    }

    pub fn tau(&self, v: &[i64]) -> Vec<i64> {
        self.coxeter
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Sum of `<e, τ^k v>` over the τ-orbit of `v`, or `None` when the orbit
    /// does not close within [`ORBIT_CAP`] steps.
    ///
    /// For a bundle `e` and a torsion sheaf `v` every term is a Hom dimension
    /// and the sum is positive, so its sign tells a torsion class from the
    /// negative of one.
    pub fn orbit_pairing(&self, e: &[i64], v: &[i64]) -> Option<i64> {
        let mut u = v.to_vec();
        let mut total = 0;
        for _ in 0..ORBIT_CAP {
            total += self.euler_form(e, &u);
            u = self.tau(&u);
            if u == v {
                return Some(total);
            }
        }
        None
    }
}

/// Sign `s` in the mutation formulas for a given side and kind.
pub fn formula_sign(side: Side, kind: MutKind) -> i64 {
    match (side, kind) {
        (Side::Left, MutKind::E) | (Side::Right, MutKind::M) => -1,
        _ => 1,
    }
}

/// Classes after mutating at `l`, given `a = a(l, l+1)` before the move.
pub fn mutate_classes(classes: &mut [Vec<i64>], l: usize, side: Side, kind: MutKind, a: i64) {
    let s = formula_sign(side, kind);
    let (x, y) = (classes[l].clone(), classes[l + 1].clone());
    let combine = |p: &[i64], q: &[i64]| -> Vec<i64> { p.iter().zip(q).map(|(u, v)| s * (u - a * v)).collect() };
    match side {
        Side::Left => {
            classes[l] = combine(&y, &x);
            classes[l + 1] = x;
        }
        Side::Right => {
            classes[l + 1] = combine(&x, &y);
            classes[l] = y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::squid_sequence;
    use crate::WeightSequence;

    #[test]
    fn squid_torsion_is_periodic_with_positive_degree() {
        let q = squid_sequence(&WeightSequence::new(vec![2, 3]).unwrap());
        let lat = Lattice::from_sequence(&q);
        let basis = lat.basis();
        for t in 2..q.n() {
            let d = lat.orbit_pairing(&basis[0], &basis[t]).unwrap();
            assert!(d > 0, "position {t}");
            let neg: Vec<i64> = basis[t].iter().map(|x| -x).collect();
            assert_eq!(lat.orbit_pairing(&basis[0], &neg), Some(-d));
        }
    }

    #[test]
    fn serre_duality_in_coordinates() {
        let q = squid_sequence(&WeightSequence::new(vec![2, 2, 2]).unwrap());
        let lat = Lattice::from_sequence(&q);
        let b = lat.basis();
        for x in &b {
            for y in &b {
                assert_eq!(lat.euler_form(x, y), -lat.euler_form(y, &lat.tau(x)));
            }
        }
    }
}
