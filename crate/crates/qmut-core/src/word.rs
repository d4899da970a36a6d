//! Recorded elementary moves and words of them.

use thiserror::Error;

use crate::exseq::{self, ExcSeqQuiver, ExseqError, MutKind, Side};
use crate::graded::{self, GradedError, GradedQuiver, Quiver, Tag};

/// One elementary move. Every variant carries what is needed to undo it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Fz {
        k: usize,
    },
    Graded {
        k: usize,
        tag_before: Tag,
        rank_before: Option<u64>,
        neighbor_tags: Vec<(usize, Tag)>,
    },
    Lambda {
        l: usize,
        kind: MutKind,
    },
    Rho {
        l: usize,
        kind: MutKind,
    },
}

impl Move {
    /// The move undoing a sequence move. Graded and FZ moves are undone by
    /// dedicated functions and return `None` here.
    pub fn sequence_inverse(&self) -> Option<Move> {
        match *self {
            Move::Lambda { l, kind } => Some(Move::Rho {
                l,
                kind: match kind {
                    MutKind::M => MutKind::X,
                    MutKind::X => MutKind::E,
                    MutKind::E => MutKind::M,
                    MutKind::T => MutKind::T,
                },
            }),
            Move::Rho { l, kind } => Some(Move::Lambda {
                l,
                kind: match kind {
                    MutKind::X => MutKind::M,
                    MutKind::E => MutKind::X,
                    MutKind::M => MutKind::E,
                    MutKind::T => MutKind::T,
                },
            }),
            _ => None,
        }
    }

    pub fn is_transposition(&self) -> bool {
        matches!(
            self,
            Move::Lambda { kind: MutKind::T, .. } | Move::Rho { kind: MutKind::T, .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("move {index_}: {source}", index_ = index + 1)]
    Sequence { index: usize, source: ExseqError },
    #[error("move {index_}: {source}", index_ = index + 1)]
    Graded { index: usize, source: GradedError },
    #[error("move {index_} ({mv:?}) does not act on this kind of quiver", index_ = index + 1)]
    WrongTarget { index: usize, mv: Move },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MutationWord {
    pub moves: Vec<Move>,
}

impl MutationWord {
    pub fn new(moves: Vec<Move>) -> Self {
        MutationWord { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn transpositions_only(&self) -> bool {
        self.moves.iter().all(Move::is_transposition)
    }

    /// Replay on an exceptional sequence using the recorded kinds.
    pub fn replay_sequence(
        &self,
        q: &ExcSeqQuiver,
        dir: Direction,
    ) -> Result<ExcSeqQuiver, ReplayError> {
        let mut cur = q.clone();
        let order: Box<dyn Iterator<Item = (usize, &Move)>> = match dir {
            Direction::Forward => Box::new(self.moves.iter().enumerate()),
            Direction::Backward => Box::new(self.moves.iter().enumerate().rev()),
        };
        for (index, mv) in order {
            let mv = match dir {
                Direction::Forward => mv.clone(),
                Direction::Backward => mv
                    .sequence_inverse()
                    .ok_or_else(|| ReplayError::WrongTarget { index, mv: mv.clone() })?,
            };
            let (side, l, kind) = match mv {
                Move::Lambda { l, kind } => (Side::Left, l, kind),
                Move::Rho { l, kind } => (Side::Right, l, kind),
                other => return Err(ReplayError::WrongTarget { index, mv: other }),
            };
            cur = exseq::apply(&cur, l, side, kind)
                .map_err(|source| ReplayError::Sequence { index, source })?;
        }
        Ok(cur)
    }

    /// Replay on a graded quiver. Only `Fz` and `Graded` moves are allowed;
    /// `Fz` moves act on the underlying ungraded quiver and are rejected here.
    pub fn replay_graded(
        &self,
        q: &GradedQuiver,
        dir: Direction,
    ) -> Result<GradedQuiver, ReplayError> {
        let mut cur = q.clone();
        let order: Box<dyn Iterator<Item = (usize, &Move)>> = match dir {
            Direction::Forward => Box::new(self.moves.iter().enumerate()),
            Direction::Backward => Box::new(self.moves.iter().enumerate().rev()),
        };
        for (index, mv) in order {
            if !matches!(mv, Move::Graded { .. }) {
                return Err(ReplayError::WrongTarget { index, mv: mv.clone() });
            }
            let res = match dir {
                Direction::Forward => graded::redo_graded(&cur, mv),
                Direction::Backward => graded::undo_graded(&cur, mv),
            };
            cur = res.map_err(|source| ReplayError::Graded { index, source })?;
        }
        Ok(cur)
    }

    /// Replay on an ungraded quiver. Only `Fz` moves are allowed.
    pub fn replay_fz(&self, q: &Quiver, dir: Direction) -> Result<Quiver, ReplayError> {
        let mut cur = q.clone();
        let order: Box<dyn Iterator<Item = (usize, &Move)>> = match dir {
            Direction::Forward => Box::new(self.moves.iter().enumerate()),
            Direction::Backward => Box::new(self.moves.iter().enumerate().rev()),
        };
        for (index, mv) in order {
            let Move::Fz { k } = mv else {
                return Err(ReplayError::WrongTarget { index, mv: mv.clone() });
            };
            cur = graded::fz_mutate(&cur, *k)
                .map_err(|source| ReplayError::Graded { index, source })?;
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_kinds_pair_up() {
        for kind in [MutKind::T, MutKind::E, MutKind::M, MutKind::X] {
            let m = Move::Lambda { l: 2, kind };
            let back = m.sequence_inverse().unwrap().sequence_inverse().unwrap();
            assert_eq!(back, m);
        }
        assert_eq!(Move::Fz { k: 0 }.sequence_inverse(), None);
    }
}
