//! Signed quivers of exceptional sequences and their left and right mutations.
//!
//! For positions `i < j` the entry `a(i, j)` is `dim Hom(E_i, E_j)` when
//! positive and `-dim Ext(E_i, E_j)` when negative. Each position carries the
//! rank of its object.

use std::fmt;

use thiserror::Error;

use crate::symbolic::SymbolicObject;
use crate::word::Move;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MutKind {
    /// Transposition of an orthogonal pair.
    T,
    /// The approximation is an epimorphism.
    E,
    /// The approximation is a monomorphism.
    M,
    /// The pair is related by extensions.
    X,
}

impl fmt::Display for MutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutKind::T => "T",
            MutKind::E => "E",
            MutKind::M => "M",
            MutKind::X => "X",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Kind(MutKind),
    /// A Hom pair of two rank-zero objects: ranks cannot tell E from M.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExseqError {
    #[error("position {pos_} out of range for a sequence of length {n}", pos_ = pos + 1)]
    OutOfRange { pos: usize, n: usize },
    #[error("entries are only defined for i < j, got ({i_}, {j_})", i_ = i + 1, j_ = j + 1)]
    IndexOrder { i: usize, j: usize },
    #[error("kind {kind} does not match a({pos_},{next}) = {a}", next = pos + 2, pos_ = pos + 1)]
    KindMismatch { pos: usize, kind: MutKind, a: i64 },
    #[error("{side} mutation at {pos_} would produce rank {rank}", pos_ = pos + 1)]
    NegativeRank { side: Side, pos: usize, rank: i128 },
    #[error("{side} mutation at {pos_} classifies as {classified}, not {requested}", pos_ = pos + 1)]
    Misclassified {
        side: Side,
        pos: usize,
        classified: MutKind,
        requested: MutKind,
    },
    #[error("{side} mutation at {pos_} is undetermined (Hom pair of rank-0 objects)", pos_ = pos + 1)]
    Undetermined { side: Side, pos: usize },
    #[error("pair ({i_},{j_}) with ranks ({ri},{rj}) and a = {a} is not realizable by sheaves", i_ = i + 1, j_ = j + 1)]
    Unrealizable {
        i: usize,
        j: usize,
        ri: u64,
        rj: u64,
        a: i64,
    },
    #[error("the pair at {pos_} is not a Hom pair (a = {a})", pos_ = pos + 1)]
    NotHomPair { pos: usize, a: i64 },
    #[error("both objects at {pos_} have rank 0", pos_ = pos + 1)]
    RankZeroPair { pos: usize },
    #[error("no orthogonal pair reached at {pos_} within {cap} mutations; ranks now ({r0},{r1}), a = {a}", pos_ = pos + 1)]
    NonTermination {
        pos: usize,
        cap: usize,
        r0: u64,
        r1: u64,
        a: i64,
    },
    #[error("integer overflow while mutating at {pos_}", pos_ = pos + 1)]
    Overflow { pos: usize },
}

/// Signed quiver of an exceptional sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcSeqQuiver {
    n: usize,
    entries: Vec<i64>,
    ranks: Vec<u64>,
    labels: Vec<SymbolicObject>,
}

impl ExcSeqQuiver {
    /// All-zero sequence with the given ranks and labels `1..=n`.
    pub fn new(ranks: Vec<u64>) -> Self {
        let n = ranks.len();
        ExcSeqQuiver {
            n,
            entries: vec![0; n * n],
            ranks,
            labels: (1..=n).map(|i| SymbolicObject::name(i.to_string())).collect(),
        }
    }

    /// Build from an upper-triangular matrix; entries on or below the diagonal
    /// are ignored.
    pub fn from_matrix(a: &[Vec<i64>], ranks: Vec<u64>) -> Self {
        let mut q = Self::new(ranks);
        for i in 0..q.n {
            for j in i + 1..q.n {
                q.set(i, j, a[i][j]);
            }
        }
        q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The entry `a(i, j)` for `i < j`.
    ///
    /// # Panics
    ///
    /// Panics unless `i < j < n`.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        assert!(i < j && j < self.n, "a({i},{j}) undefined");
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) -> &mut Self {
        assert!(i < j && j < self.n, "a({i},{j}) undefined");
        self.entries[i * self.n + j] = v;
        self
    }

    pub fn rank(&self, i: usize) -> u64 {
        self.ranks[i]
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn labels(&self) -> &[SymbolicObject] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<SymbolicObject>) -> &mut Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    /// Nonzero entries `(i, j, a)` in row-major order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let a = self.a(i, j);
                if a != 0 {
                    out.push((i, j, a));
                }
            }
        }
        out
    }

    /// Entries and ranks agree; labels are ignored.
    pub fn same_data(&self, other: &ExcSeqQuiver) -> bool {
        self.n == other.n && self.entries == other.entries && self.ranks == other.ranks
    }

    /// Sum of ranks.
    pub fn norm(&self) -> u64 {
        self.ranks.iter().sum()
    }

    /// Pairs violating the sign constraints of sheaves on a weighted
    /// projective line: there are no nonzero maps from a torsion sheaf to a
    /// vector bundle and no extensions of a torsion sheaf by a vector bundle.
    pub fn realizability_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if pair_unrealizable(self.ranks[i], self.ranks[j], self.a(i, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_realizable(&self) -> bool {
        self.realizability_violations().is_empty()
    }

    fn unrealizable_error(&self, i: usize, j: usize) -> ExseqError {
        ExseqError::Unrealizable {
            i,
            j,
            ri: self.ranks[i],
            rj: self.ranks[j],
            a: self.a(i, j),
        }
    }

    fn check_pos(&self, l: usize) -> Result<(), ExseqError> {
        if l + 1 >= self.n {
            Err(ExseqError::OutOfRange { pos: l, n: self.n })
        } else {
            Ok(())
        }
    }
}

fn pair_unrealizable(ri: u64, rj: u64, a: i64) -> bool {
    (ri == 0 && rj > 0 && a > 0) || (ri > 0 && rj == 0 && a < 0)
}

pub fn hom_dim(q: &ExcSeqQuiver, i: usize, j: usize) -> Result<u64, ExseqError> {
    if i >= j || j >= q.n() {
        return Err(ExseqError::IndexOrder { i, j });
    }
    Ok(q.a(i, j).max(0) as u64)
}

pub fn ext_dim(q: &ExcSeqQuiver, i: usize, j: usize) -> Result<u64, ExseqError> {
    if i >= j || j >= q.n() {
        return Err(ExseqError::IndexOrder { i, j });
    }
    Ok((-q.a(i, j)).max(0) as u64)
}

/// Kind of the left mutation at `l`.
pub fn classify_left(q: &ExcSeqQuiver, l: usize) -> Result<Classification, ExseqError> {
    classify(q, l, Side::Left)
}

/// Kind of the right mutation at `l`.
pub fn classify_right(q: &ExcSeqQuiver, l: usize) -> Result<Classification, ExseqError> {
    classify(q, l, Side::Right)
}

pub fn classify(q: &ExcSeqQuiver, l: usize, side: Side) -> Result<Classification, ExseqError> {
    q.check_pos(l)?;
    let a = q.a(l, l + 1);
    let (r0, r1) = (q.ranks[l] as i128, q.ranks[l + 1] as i128);
    if pair_unrealizable(q.ranks[l], q.ranks[l + 1], a) {
        return Err(q.unrealizable_error(l, l + 1));
    }
    let kind = match a {
        0 => MutKind::T,
        a if a < 0 => MutKind::X,
        _ if r0 == 0 && r1 == 0 => return Ok(Classification::Undetermined),
        a => {
            let a = a as i128;
            let epi = match side {
                Side::Left => r0 * a > r1,
                Side::Right => r0 > a * r1,
            };
            if epi {
                MutKind::E
            } else {
                MutKind::M
            }
        }
    };
    Ok(Classification::Kind(kind))
}

/// Left mutation at `l`. `kind` must agree with [`classify_left`] whenever the
/// classification is determined.
pub fn left_mutate(
    q: &ExcSeqQuiver,
    l: usize,
    kind: MutKind,
) -> Result<(ExcSeqQuiver, Move), ExseqError> {
    mutate(q, l, Side::Left, kind)
}

/// Right mutation at `l`, the inverse operation of [`left_mutate`].
pub fn right_mutate(
    q: &ExcSeqQuiver,
    l: usize,
    kind: MutKind,
) -> Result<(ExcSeqQuiver, Move), ExseqError> {
    mutate(q, l, Side::Right, kind)
}

/// Classify and mutate in one step; fails on an undetermined pair.
pub fn mutate_classified(
    q: &ExcSeqQuiver,
    l: usize,
    side: Side,
) -> Result<(ExcSeqQuiver, Move), ExseqError> {
    match classify(q, l, side)? {
        Classification::Kind(kind) => mutate(q, l, side, kind),
        Classification::Undetermined => Err(ExseqError::Undetermined { side, pos: l }),
    }
}

pub fn mutate(
    q: &ExcSeqQuiver,
    l: usize,
    side: Side,
    kind: MutKind,
) -> Result<(ExcSeqQuiver, Move), ExseqError> {
    if let Classification::Kind(c) = classify(q, l, side)? {
        if c != kind {
            return Err(ExseqError::Misclassified {
                side,
                pos: l,
                classified: c,
                requested: kind,
            });
        }
    }
    let out = apply(q, l, side, kind)?;
    let mv = match side {
        Side::Left => Move::Lambda { l, kind },
        Side::Right => Move::Rho { l, kind },
    };
    Ok((out, mv))
}

/// Apply the mutation formulas with the given kind, checking only that the
/// kind matches the sign of `a(l, l+1)` and that ranks stay nonnegative.
pub fn apply(
    q: &ExcSeqQuiver,
    l: usize,
    side: Side,
    kind: MutKind,
) -> Result<ExcSeqQuiver, ExseqError> {
    q.check_pos(l)?;
    let n = q.n;
    let a = q.a(l, l + 1);
    let sign_ok = match kind {
        MutKind::T => a == 0,
        MutKind::X => a < 0,
        MutKind::E | MutKind::M => a > 0,
    };
    if !sign_ok {
        return Err(ExseqError::KindMismatch { pos: l, kind, a });
    }
    let s: i64 = match (side, kind) {
        (Side::Left, MutKind::E) | (Side::Right, MutKind::M) => -1,
        _ => 1,
    };
    let ovf = || ExseqError::Overflow { pos: l };
    // s * (y - a * x)
    let lin = |y: i64, x: i64| -> Result<i64, ExseqError> {
        a.checked_mul(x)
            .and_then(|ax| y.checked_sub(ax))
            .and_then(|d| d.checked_mul(s))
            .ok_or_else(ovf)
    };

    let mut out = q.clone();
    for i in 0..l {
        let (x, y) = (q.a(i, l), q.a(i, l + 1));
        match side {
            Side::Left => {
                out.set(i, l + 1, x);
                out.set(i, l, lin(y, x)?);
            }
            Side::Right => {
                out.set(i, l, y);
                out.set(i, l + 1, lin(x, y)?);
            }
        }
    }
    for j in l + 2..n {
        let (x, y) = (q.a(l, j), q.a(l + 1, j));
        match side {
            Side::Left => {
                out.set(l + 1, j, x);
                out.set(l, j, lin(y, x)?);
            }
            Side::Right => {
                out.set(l, j, y);
                out.set(l + 1, j, lin(x, y)?);
            }
        }
    }
    out.set(l, l + 1, -s * a);

    let (r0, r1) = (q.ranks[l] as i128, q.ranks[l + 1] as i128);
    let (a, s) = (a as i128, s as i128);
    let (new_l, new_l1) = match side {
        Side::Left => (s * (r1 - a * r0), r0),
        Side::Right => (r1, s * (r0 - a * r1)),
    };
    for r in [new_l, new_l1] {
        if r < 0 {
            return Err(ExseqError::NegativeRank { side, pos: l, rank: r });
        }
        if r > u64::MAX as i128 {
            return Err(ovf());
        }
    }
    out.ranks[l] = new_l as u64;
    out.ranks[l + 1] = new_l1 as u64;

    let (x, y) = (&q.labels[l], &q.labels[l + 1]);
    match side {
        Side::Left => {
            out.labels[l] = SymbolicObject::left(x, y);
            out.labels[l + 1] = x.clone();
        }
        Side::Right => {
            out.labels[l] = y.clone();
            out.labels[l + 1] = SymbolicObject::right(y, x);
        }
    }
    Ok(out)
}

/// Iteration cap for [`kronecker_t_search`].
pub const KRONECKER_CAP: usize = 64;

/// Mutate the Hom pair at `l` until it becomes orthogonal or an Ext pair.
///
/// Returns `t` with `ρ^t` the applied power (negative `t` counts left
/// mutations), the mutated sequence and the recorded moves.
pub fn kronecker_t_search(
    q: &ExcSeqQuiver,
    l: usize,
) -> Result<(i64, ExcSeqQuiver, Vec<Move>), ExseqError> {
    q.check_pos(l)?;
    let m = q.a(l, l + 1);
    if m <= 0 {
        return Err(ExseqError::NotHomPair { pos: l, a: m });
    }
    if q.ranks[l] == 0 && q.ranks[l + 1] == 0 {
        return Err(ExseqError::RankZeroPair { pos: l });
    }
    let side = if q.ranks[l] <= q.ranks[l + 1] {
        Side::Left
    } else {
        Side::Right
    };
    let mut cur = q.clone();
    let mut moves = Vec::new();
    while cur.a(l, l + 1) > 0 {
        if moves.len() == KRONECKER_CAP {
            return Err(ExseqError::NonTermination {
                pos: l,
                cap: KRONECKER_CAP,
                r0: cur.ranks[l],
                r1: cur.ranks[l + 1],
                a: cur.a(l, l + 1),
            });
        }
        let (next, mv) = mutate_classified(&cur, l, side)?;
        cur = next;
        moves.push(mv);
    }
    let t = match side {
        Side::Left => -(moves.len() as i64),
        Side::Right => moves.len() as i64,
    };
    Ok((t, cur, moves))
}

fn checked_step(q: &ExcSeqQuiver, l: usize) -> Result<ExcSeqQuiver, ExseqError> {
    let (next, _) = mutate_classified(q, l, Side::Left)?;
    if let Some(&(i, j)) = next.realizability_violations().first() {
        return Err(next.unrealizable_error(i, j));
    }
    Ok(next)
}

fn run_left(q: &ExcSeqQuiver, path: &[usize]) -> Result<ExcSeqQuiver, ExseqError> {
    if let Some(&(i, j)) = q.realizability_violations().first() {
        return Err(q.unrealizable_error(i, j));
    }
    path.iter().try_fold(q.clone(), |cur, &l| checked_step(&cur, l))
}

/// Compare `λ_i λ_{i+1} λ_i` with `λ_{i+1} λ_i λ_{i+1}` on entries and ranks.
///
/// Every intermediate state must be classifiable and realizable; otherwise
/// the relevant error is returned instead of a verdict.
pub fn braid_check(q: &ExcSeqQuiver, i: usize) -> Result<bool, ExseqError> {
    q.check_pos(i + 1)?;
    let p = run_left(q, &[i, i + 1, i])?;
    let r = run_left(q, &[i + 1, i, i + 1])?;
    Ok(p.same_data(&r))
}

/// Compare `λ_i λ_j` with `λ_j λ_i` for `|i - j| >= 2`.
pub fn commute_check(q: &ExcSeqQuiver, i: usize, j: usize) -> Result<bool, ExseqError> {
    q.check_pos(i)?;
    q.check_pos(j)?;
    let p = run_left(q, &[i, j])?;
    let r = run_left(q, &[j, i])?;
    Ok(p.same_data(&r))
}
