//! Recovery of a tilting object from its graded quiver and ranks.
//!
//! The tilting sequence is read off the Cartan matrix and then mutated to the
//! squid `(O(c), O(2c), torsion arms)` in four phases:
//!
//! 1. produce a line bundle and move it to the front,
//! 2. remove Hom arrows among the remaining vector bundles,
//! 3. remove Ext arrows among the torsion sheaves,
//! 4. remove torsion sources by tilting mutations.
//!
//! Every elementary move is recorded, so the word can be replayed backward
//! from the squid to reconstruct the input.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::catalog::torsion_label;
use crate::exseq::{self, Classification, ExcSeqQuiver, ExseqError, MutKind, Side};
use crate::graded::{GradedQuiver, Violation};
use crate::lattice::{self, Lattice};
use crate::linalg;
use crate::ranks::{self, RankError};
use crate::symbolic::SymbolicObject;
use crate::word::{Direction, Move, MutationWord, ReplayError};

/// Default number of elementary moves each phase may spend.
pub const PHASE_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Input,
    Step1,
    Step2,
    Step3,
    Step4,
    Recognize,
}

impl Phase {
    pub fn number(self) -> u8 {
        match self {
            Phase::Input => 0,
            Phase::Step1 => 1,
            Phase::Step2 => 2,
            Phase::Step3 => 3,
            Phase::Step4 => 4,
            Phase::Recognize => 5,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Input => "input",
            Phase::Step1 => "step 1 (line bundle)",
            Phase::Step2 => "step 2 (Hom reduction)",
            Phase::Step3 => "step 3 (Ext reduction)",
            Phase::Step4 => "step 4 (source removal)",
            Phase::Recognize => "squid recognition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("quiver is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("degree-0 arrows contain a cycle through vertex {}", .0 + 1)]
    Cycle(usize),
    #[error("I - A0 + R is singular")]
    Singular,
    #[error("Cartan entry ({i_},{j_}) = {value} is not an integer", i_ = i + 1, j_ = j + 1)]
    NonIntegral { i: usize, j: usize, value: String },
    #[error("Cartan entry ({i_},{j_}) = {value} is negative", i_ = i + 1, j_ = j + 1)]
    Negative { i: usize, j: usize, value: i64 },
    #[error("Cartan diagonal entry at {i_} is {value}, not 1", i_ = i + 1)]
    Diagonal { i: usize, value: i64 },
    #[error("Cartan matrix is not unitriangular in the degree-0 order: ({i_},{j_}) = {value}", i_ = i + 1, j_ = j + 1)]
    NotUnitriangular { i: usize, j: usize, value: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquidError {
    #[error("expected exactly two rank-1 positions and rank 0 elsewhere, ranks are {0:?}")]
    Ranks(Vec<u64>),
    #[error("a({},{}) = {} between the line bundles, expected 2", .0 + 1, .1 + 1, .2)]
    LineBundlePair(usize, usize, i64),
    #[error("torsion position {} has {} irreducible predecessors among torsion", .0 + 1, .1)]
    Branching(usize, usize),
    #[error("arm head {} is not fed by both line bundles", .0 + 1)]
    UnfedHead(usize),
    #[error("entry a({i_},{j_}) = {found}, squid requires {expected}", i_ = i + 1, j_ = j + 1)]
    Entry {
        i: usize,
        j: usize,
        found: i64,
        expected: i64,
    },
    #[error("sequence has fewer than two positions")]
    TooShort,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Failure {
    #[error("{0}")]
    Cartan(#[from] CartanError),
    #[error("{0}")]
    Ranks(#[from] RankError),
    #[error("ranks are not additive at vertices {:?}", .0.iter().map(|v| v + 1).collect::<Vec<_>>())]
    NotAdditive(Vec<usize>),
    #[error("{0}")]
    Sequence(#[from] ExseqError),
    #[error("{0}")]
    Squid(#[from] SquidError),
    #[error("no Hom pair among vector bundles of rank at least 2")]
    Stall,
    #[error("sorted rank vector did not decrease: {before:?} -> {after:?}")]
    NoProgress { before: Vec<u64>, after: Vec<u64> },
    #[error("expected a transposition at {pos_}, got {kind}", pos_ = pos + 1)]
    NotTransposition { pos: usize, kind: MutKind },
    #[error("expected an extension move at {pos_}, got {kind}", pos_ = pos + 1)]
    NotExtension { pos: usize, kind: MutKind },
    #[error("cannot make the Hom pair ({},{}) adjacent by transpositions", .a + 1, .b + 1)]
    NotAdjacentable { a: usize, b: usize },
    #[error("endpoint violated: {0}")]
    Endpoint(String),
    #[error("phase exhausted its budget of {0} moves")]
    Budget(usize),
    #[error("move touches protected position {}", .0 + 1)]
    Protected(usize),
}

/// A failed recovery, with the phase, the state reached and the moves so far.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{phase}: {failure}")]
pub struct RecoveryError {
    pub phase: Phase,
    pub failure: Failure,
    pub state: Option<Box<ExcSeqQuiver>>,
    pub log: Vec<LogEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub step: usize,
    pub phase: Phase,
    pub mv: Move,
    pub ranks: Vec<u64>,
}

/// Result of [`recognize_squid`]: the two line bundles and the torsion arms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquidDescriptor {
    pub line_bundles: (usize, usize),
    /// Arms in order of their head position, each listed from its head.
    pub arms: Vec<Vec<usize>>,
    /// Weight `arm length + 1` of each arm, in arm order.
    pub arm_weights: Vec<u32>,
    /// Weights sorted in descending order.
    pub weights: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryResult {
    pub input: ExcSeqQuiver,
    /// For graded input, the graded vertex at each sequence position.
    pub vertex_order: Option<Vec<usize>>,
    pub word: MutationWord,
    /// The squid reached, labelled with the squid names.
    pub final_state: ExcSeqQuiver,
    pub squid: SquidDescriptor,
    pub weights: Vec<u32>,
    /// Names of the input objects in terms of the squid.
    pub reconstruction: Vec<SymbolicObject>,
    pub log: Vec<LogEntry>,
}

impl RecoveryResult {
    /// States after each move, starting with the input, at most `cap + 1` of them.
    pub fn states(&self, cap: usize) -> Result<Vec<ExcSeqQuiver>, ReplayError> {
        let mut out = vec![self.input.clone()];
        for (i, mv) in self.word.moves.iter().take(cap).enumerate() {
            let next = MutationWord::new(vec![mv.clone()])
                .replay_sequence(&out[i], Direction::Forward)?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Dimension of morphism spaces between the summands, `(I - A0 + R)^{-1}`,
/// where `R(i, j)` counts degree-1 arrows `j -> i`.
pub fn cartan_from_graded(q: &GradedQuiver) -> Result<Vec<Vec<i64>>, CartanError> {
    let violations = q.validate();
    if !violations.is_empty() {
        return Err(CartanError::Invalid(violations));
    }
    degree_zero_order(q)?;
    let n = q.n();
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for (f, t, d, c) in q.arrows() {
        if d == 0 {
            m[f][t] -= c as i64;
        } else {
            m[t][f] += c as i64;
        }
    }
    let inv = linalg::invert(&m).ok_or(CartanError::Singular)?;
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = inv[i][j];
            if !x.is_integer() {
                return Err(CartanError::NonIntegral { i, j, value: x.to_string() });
            }
            let v = x.to_integer() as i64;
            if v < 0 {
                return Err(CartanError::Negative { i, j, value: v });
            }
            out[i][j] = v;
        }
        if !(inv[i][i] - linalg::Q::one()).is_zero() {
            return Err(CartanError::Diagonal { i, value: out[i][i] });
        }
    }
    Ok(out)
}

/// Topological order of the degree-0 arrows, smallest index first.
fn degree_zero_order(q: &GradedQuiver) -> Result<Vec<usize>, CartanError> {
    let n = q.n();
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for (f, t, d, _) in q.arrows() {
        if d == 0 {
            indeg[t] += 1;
            succ[f].push(t);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    if order.len() < n {
        let v = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
        return Err(CartanError::Cycle(v));
    }
    Ok(order)
}

/// Tilting sequence read off the Cartan matrix, together with the graded
/// vertex placed at each position.
pub fn tilting_sequence_from_graded(
    q: &GradedQuiver,
) -> Result<(ExcSeqQuiver, Vec<usize>), Failure> {
    let ranks: Vec<u64> = (0..q.n())
        .map(|v| q.rank(v).ok_or(RankError::MissingRank(v)))
        .collect::<Result<_, _>>()?;
    let c = cartan_from_graded(q)?;
    let order = degree_zero_order(q)?;
    let n = q.n();
    let mut seq = ExcSeqQuiver::new(order.iter().map(|&v| ranks[v]).collect());
    for x in 0..n {
        for y in 0..n {
            let value = c[order[x]][order[y]];
            if y < x && value != 0 {
                return Err(CartanError::NotUnitriangular { i: order[x], j: order[y], value }.into());
            }
            if y > x {
                seq.set(x, y, value);
            }
        }
    }
    seq.set_labels(
        order
            .iter()
            .map(|&v| SymbolicObject::name(q.label(v)))
            .collect(),
    );
    Ok((seq, order))
}

struct Runner {
    state: ExcSeqQuiver,
    lattice: Lattice,
    classes: Vec<Vec<i64>>,
    moves: Vec<Move>,
    log: Vec<LogEntry>,
    phase: Phase,
    phase_moves: std::collections::BTreeMap<Phase, usize>,
    budget: usize,
}

type Step<T> = Result<T, RecoveryError>;

impl Runner {
    fn new(state: ExcSeqQuiver, budget: usize) -> Self {
        let lattice = Lattice::from_sequence(&state);
        Runner {
            classes: lattice.basis(),
            lattice,
            state,
            moves: Vec::new(),
            log: Vec::new(),
            phase: Phase::Input,
            phase_moves: Default::default(),
            budget,
        }
    }

    fn enter(&mut self, phase: Phase) {
        self.phase = phase;
    }

    fn fail(&self, failure: impl Into<Failure>) -> RecoveryError {
        RecoveryError {
            phase: self.phase,
            failure: failure.into(),
            state: Some(Box::new(self.state.clone())),
            log: self.log.clone(),
        }
    }

    fn r(&self, i: usize) -> u64 {
        self.state.rank(i)
    }

    fn a(&self, i: usize, j: usize) -> i64 {
        self.state.a(i, j)
    }

    fn n(&self) -> usize {
        self.state.n()
    }

    /// Decide a Hom pair of torsion objects by the sign of the new object's
    /// class, measured against a bundle of the sequence.
    fn classify_torsion_pair(&self, side: Side, l: usize) -> Option<MutKind> {
        let e = (0..self.n()).find(|&i| self.r(i) > 0)?;
        let a = self.a(l, l + 1);
        let (x, y) = match side {
            Side::Left => (&self.classes[l + 1], &self.classes[l]),
            Side::Right => (&self.classes[l], &self.classes[l + 1]),
        };
        let v: Vec<i64> = x.iter().zip(y).map(|(p, q)| p - a * q).collect();
        let d = self.lattice.orbit_pairing(&self.classes[e], &v)?;
        match (side, d.signum()) {
            (Side::Left, 1) | (Side::Right, -1) => Some(MutKind::M),
            (Side::Left, -1) | (Side::Right, 1) => Some(MutKind::E),
            _ => None,
        }
    }

    fn step(&mut self, side: Side, l: usize) -> Step<MutKind> {
        let spent = self.phase_moves.entry(self.phase).or_insert(0);
        if *spent == self.budget {
            return Err(self.fail(Failure::Budget(self.budget)));
        }
        let kind = match exseq::classify(&self.state, l, side).map_err(|e| self.fail(e))? {
            Classification::Kind(k) => k,
            Classification::Undetermined => match self.classify_torsion_pair(side, l) {
                Some(k) => k,
                None => return Err(self.fail(ExseqError::Undetermined { side, pos: l })),
            },
        };
        let a = self.a(l, l + 1);
        let (next, mv) = exseq::mutate(&self.state, l, side, kind).map_err(|e| self.fail(e))?;
        if let Some(&(i, j)) = next.realizability_violations().first() {
            let err = ExseqError::Unrealizable {
                i,
                j,
                ri: next.rank(i),
                rj: next.rank(j),
                a: next.a(i, j),
            };
            self.state = next;
            return Err(self.fail(err));
        }
        lattice::mutate_classes(&mut self.classes, l, side, kind, a);
        self.state = next;
        debug_assert!(self.classes_consistent());
        *self.phase_moves.entry(self.phase).or_insert(0) += 1;
        self.moves.push(mv.clone());
        self.log.push(LogEntry {
            step: self.moves.len(),
            phase: self.phase,
            mv,
            ranks: self.state.ranks().to_vec(),
        });
        Ok(kind)
    }

    fn classes_consistent(&self) -> bool {
        (0..self.n()).all(|i| {
            (i + 1..self.n()).all(|j| self.a(i, j) == self.lattice.euler_form(&self.classes[i], &self.classes[j]))
        })
    }

    fn transposition(&mut self, side: Side, l: usize) -> Step<()> {
        match exseq::classify(&self.state, l, side).map_err(|e| self.fail(e))? {
            Classification::Kind(MutKind::T) => self.step(side, l).map(|_| ()),
            Classification::Kind(kind) => Err(self.fail(Failure::NotTransposition { pos: l, kind })),
            Classification::Undetermined => Err(self.fail(ExseqError::Undetermined { side, pos: l })),
        }
    }

    /// Move every rank-0 object to the right of all positive-rank objects.
    fn torsion_right(&mut self) -> Step<()> {
        loop {
            let Some(l) = (0..self.n().saturating_sub(1)).find(|&l| self.r(l) == 0 && self.r(l + 1) > 0) else {
                return Ok(());
            };
            self.step(Side::Left, l)?;
        }
    }

    fn positive_positions(&self, from: usize) -> Vec<usize> {
        (from..self.n()).filter(|&i| self.r(i) > 0).collect()
    }

    /// Positive-rank pair with `a > 0` and the smallest span, leftmost first.
    fn innermost_hom_pair(&self, from: usize) -> Option<(usize, usize)> {
        let pos = self.positive_positions(from);
        let mut best: Option<(usize, usize)> = None;
        for (x, &a) in pos.iter().enumerate() {
            for &b in &pos[x + 1..] {
                if self.a(a, b) > 0 && best.is_none_or(|(p, q)| b - a < q - p) {
                    best = Some((a, b));
                }
            }
        }
        best
    }

    fn sorted_ranks(&self) -> Vec<u64> {
        let mut v = self.state.ranks().to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    fn step1(&mut self) -> Step<()> {
        self.enter(Phase::Step1);
        self.torsion_right()?;
        while !self.state.ranks().contains(&1) {
            let (a, b) = self.innermost_hom_pair(0).ok_or_else(|| self.fail(Failure::Stall))?;
            let before = self.sorted_ranks();
            if self.r(a) <= self.r(b) {
                for l in a..b {
                    self.step(Side::Left, l)?;
                }
            } else {
                for l in (a..b).rev() {
                    self.step(Side::Right, l)?;
                }
            }
            self.torsion_right()?;
            let after = self.sorted_ranks();
            let decreased = after != before && after.iter().zip(&before).all(|(x, y)| x <= y);
            if !decreased {
                return Err(self.fail(Failure::NoProgress { before, after }));
            }
        }
        let p = (0..self.n()).find(|&i| self.r(i) == 1).unwrap_or(0);
        for l in (0..p).rev() {
            self.step(Side::Right, l)?;
        }
        Ok(())
    }

    fn step2(&mut self) -> Step<()> {
        self.enter(Phase::Step2);
        if self.n() == 0 || self.r(0) != 1 {
            return Err(self.fail(Failure::Endpoint("position 1 must hold a line bundle".into())));
        }
        loop {
            self.torsion_right()?;
            let Some((a, b)) = self.innermost_hom_pair(1) else {
                break;
            };
            let l = if (a + 1..b).all(|i| self.a(a, i) == 0) {
                for l in a..b - 1 {
                    self.transposition(Side::Right, l)?;
                }
                b - 1
            } else if (a + 1..b).all(|i| self.a(i, b) == 0) {
                for l in (a + 1..b).rev() {
                    self.transposition(Side::Right, l)?;
                }
                a
            } else {
                return Err(self.fail(Failure::NotAdjacentable { a, b }));
            };
            let (_, next, moves) = exseq::kronecker_t_search(&self.state, l).map_err(|e| self.fail(e))?;
            let side = match moves.first() {
                Some(Move::Lambda { .. }) => Side::Left,
                _ => Side::Right,
            };
            for _ in 0..moves.len() {
                self.step(side, l)?;
            }
            debug_assert!(self.state.same_data(&next));
        }
        let positive = self.positive_positions(0);
        if positive != [0, 1] || self.r(0) != 1 || self.r(1) != 1 {
            return Err(self.fail(Failure::Endpoint(format!(
                "expected two rank-1 objects followed by torsion, ranks {:?}",
                self.state.ranks()
            ))));
        }
        Ok(())
    }

    fn negative_pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.a(i, j) < 0 {
                    v.push((i, j));
                }
            }
        }
        v
    }

    fn protected_right(&mut self, l: usize) -> Step<MutKind> {
        if l < 2 {
            return Err(self.fail(Failure::Protected(l)));
        }
        self.step(Side::Right, l)
    }

    fn step3(&mut self) -> Step<()> {
        self.enter(Phase::Step3);
        loop {
            let Some((mut a, mut b)) = self
                .negative_pairs()
                .into_iter()
                .min_by_key(|&(i, j)| (j - i, i))
            else {
                return Ok(());
            };
            while b - a > 1 {
                let t = (a + 1..b).rev().find(|&t| self.a(a, t) > 0).unwrap_or(a);
                if t > a {
                    for l in t..b {
                        if l < 2 {
                            return Err(self.fail(Failure::Protected(l)));
                        }
                        self.transposition(Side::Right, l)?;
                    }
                    b -= 1;
                } else {
                    for l in a..b - 1 {
                        if l < 2 {
                            return Err(self.fail(Failure::Protected(l)));
                        }
                        self.transposition(Side::Right, l)?;
                    }
                    a = b - 1;
                }
            }
            let kind = self.protected_right(a)?;
            if kind != MutKind::X {
                return Err(self.fail(Failure::NotExtension { pos: a, kind }));
            }
        }
    }

    /// Rank-0 positions with no incoming Hom arrow and some outgoing one.
    fn torsion_sources(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| {
                self.r(v) == 0
                    && (0..v).all(|i| self.a(i, v) <= 0)
                    && (v + 1..self.n()).any(|j| self.a(v, j) > 0)
            })
            .collect()
    }

    fn irreducible_targets(&self, v: usize) -> Vec<usize> {
        let targets: Vec<usize> = (v + 1..self.n()).filter(|&j| self.a(v, j) > 0).collect();
        targets
            .iter()
            .copied()
            .filter(|&j| !(v + 1..j).any(|k| self.a(v, k) > 0 && self.a(k, j) > 0))
            .collect()
    }

    fn step4(&mut self) -> Step<()> {
        self.enter(Phase::Step4);
        while let Some(&v) = self.torsion_sources().first() {
            let targets = self.irreducible_targets(v);
            let last = *targets.last().expect("a source has a target");
            for l in v..last {
                if l < 2 {
                    return Err(self.fail(Failure::Protected(l)));
                }
                self.step(Side::Right, l)?;
            }
        }
        Ok(())
    }
}

/// Phase 1 alone: torsion to the right, a line bundle, moved to the front.
pub fn step1_obtain_line_bundle(q: &ExcSeqQuiver) -> Result<(ExcSeqQuiver, Vec<Move>), RecoveryError> {
    let mut run = Runner::new(q.clone(), PHASE_BUDGET);
    run.step1()?;
    Ok((run.state, run.moves))
}

pub fn step2_hom_reduce(q: &ExcSeqQuiver) -> Result<(ExcSeqQuiver, Vec<Move>), RecoveryError> {
    let mut run = Runner::new(q.clone(), PHASE_BUDGET);
    run.step2()?;
    Ok((run.state, run.moves))
}

pub fn step3_ext_reduce(q: &ExcSeqQuiver) -> Result<(ExcSeqQuiver, Vec<Move>), RecoveryError> {
    let mut run = Runner::new(q.clone(), PHASE_BUDGET);
    run.step3()?;
    Ok((run.state, run.moves))
}

pub fn step4_remove_sources(q: &ExcSeqQuiver) -> Result<(ExcSeqQuiver, Vec<Move>), RecoveryError> {
    let mut run = Runner::new(q.clone(), PHASE_BUDGET);
    run.step4()?;
    Ok((run.state, run.moves))
}

/// Recognise the squid shape: two rank-1 positions with `a = 2`, and torsion
/// forming linear arms whose heads are fed by both line bundles, with every
/// entry equal to the corresponding Hom dimension of the squid.
pub fn recognize_squid(q: &ExcSeqQuiver) -> Result<SquidDescriptor, SquidError> {
    let n = q.n();
    if n < 2 {
        return Err(SquidError::TooShort);
    }
    let ones: Vec<usize> = (0..n).filter(|&i| q.rank(i) == 1).collect();
    if ones.len() != 2 || (0..n).any(|i| q.rank(i) > 1) {
        return Err(SquidError::Ranks(q.ranks().to_vec()));
    }
    let (u, w) = (ones[0], ones[1]);
    if q.a(u, w) != 2 {
        return Err(SquidError::LineBundlePair(u, w, q.a(u, w)));
    }
    let torsion: Vec<usize> = (0..n).filter(|&i| q.rank(i) == 0).collect();
    let pos = |i: usize, j: usize| i < j && q.a(i, j) > 0;
    let irreducible = |x: usize, y: usize| pos(x, y) && !torsion.iter().any(|&z| pos(x, z) && pos(z, y));
    let mut next = vec![None; n];
    let mut preds = vec![0usize; n];
    for &x in &torsion {
        let outs: Vec<usize> = torsion.iter().copied().filter(|&y| irreducible(x, y)).collect();
        if outs.len() > 1 {
            return Err(SquidError::Branching(outs[1], 2));
        }
        if let Some(&y) = outs.first() {
            next[x] = Some(y);
            preds[y] += 1;
        }
    }
    let mut arms = Vec::new();
    let mut arm_of = vec![usize::MAX; n];
    for &x in &torsion {
        if preds[x] > 1 {
            return Err(SquidError::Branching(x, preds[x]));
        }
        if preds[x] == 0 {
            let mut arm = vec![x];
            let mut cur = x;
            while let Some(y) = next[cur] {
                arm.push(y);
                cur = y;
            }
            for &y in &arm {
                arm_of[y] = arms.len();
            }
            arms.push(arm);
        }
    }
    for arm in &arms {
        let head = arm[0];
        if !(pos(u, head) && pos(w, head)) {
            return Err(SquidError::UnfedHead(head));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let expected = match (q.rank(i), q.rank(j)) {
                (1, 1) => 2,
                (1, 0) if i == u || i == w => 1,
                (0, 0) if arm_of[i] == arm_of[j] => 1,
                _ => 0,
            };
            let found = q.a(i, j);
            if found != expected {
                return Err(SquidError::Entry { i, j, found, expected });
            }
        }
    }
    let arm_weights: Vec<u32> = arms.iter().map(|a| a.len() as u32 + 1).collect();
    let mut weights = arm_weights.clone();
    weights.sort_unstable_by(|a, b| b.cmp(a));
    Ok(SquidDescriptor {
        line_bundles: (u, w),
        arms,
        arm_weights,
        weights,
    })
}

/// Canonical squid names for the positions of a recognised squid.
pub fn squid_names(q: &ExcSeqQuiver, d: &SquidDescriptor) -> Vec<SymbolicObject> {
    let mut names: Vec<SymbolicObject> = q.labels().to_vec();
    names[d.line_bundles.0] = SymbolicObject::name("O(c)");
    names[d.line_bundles.1] = SymbolicObject::name("O(2c)");
    for (i, arm) in d.arms.iter().enumerate() {
        let len = arm.len() as u32;
        for (k, &x) in arm.iter().enumerate() {
            names[x] = SymbolicObject::name(torsion_label(i + 1, len - k as u32));
        }
    }
    names
}

/// Run the pipeline on an exceptional sequence.
pub fn recover_sequence(q: &ExcSeqQuiver) -> Result<RecoveryResult, RecoveryError> {
    recover_sequence_with_budget(q, PHASE_BUDGET)
}

pub fn recover_sequence_with_budget(
    q: &ExcSeqQuiver,
    budget: usize,
) -> Result<RecoveryResult, RecoveryError> {
    let mut run = Runner::new(q.clone(), budget);
    if let Some(&(i, j)) = q.realizability_violations().first() {
        return Err(run.fail(ExseqError::Unrealizable {
            i,
            j,
            ri: q.rank(i),
            rj: q.rank(j),
            a: q.a(i, j),
        }));
    }
    run.step1()?;
    run.step2()?;
    // Source removal can create new extensions, so the last two phases
    // alternate until neither has anything left to do.
    loop {
        run.step3()?;
        run.step4()?;
        if run.negative_pairs().is_empty() {
            break;
        }
    }
    run.enter(Phase::Recognize);
    let squid = recognize_squid(&run.state).map_err(|e| run.fail(e))?;
    let word = MutationWord::new(run.moves.clone());
    let mut final_state = run.state.clone();
    final_state.set_labels(squid_names(&run.state, &squid));
    let back = word
        .replay_sequence(&final_state, Direction::Backward)
        .map_err(|e| run.fail(Failure::Endpoint(format!("backward replay failed: {e}"))))?;
    if !back.same_data(q) {
        return Err(run.fail(Failure::Endpoint("backward replay does not reproduce the input".into())));
    }
    Ok(RecoveryResult {
        input: q.clone(),
        vertex_order: None,
        weights: squid.weights.clone(),
        reconstruction: back.labels().to_vec(),
        word,
        final_state,
        squid,
        log: run.log,
    })
}

/// Run the full pipeline on a graded quiver with complete ranks.
pub fn recover(q: &GradedQuiver) -> Result<RecoveryResult, RecoveryError> {
    let input_err = |failure: Failure| RecoveryError {
        phase: Phase::Input,
        failure,
        state: None,
        log: Vec::new(),
    };
    let report = ranks::check_additivity(q).map_err(|e| input_err(e.into()))?;
    if !report.ok {
        let bad = (0..q.n()).filter(|&v| report.residuals[v] != 0).collect();
        return Err(input_err(Failure::NotAdditive(bad)));
    }
    let (seq, order) = tilting_sequence_from_graded(q).map_err(input_err)?;
    let mut res = recover_sequence(&seq)?;
    res.vertex_order = Some(order);
    Ok(res)
}

/// Number of torsion objects on each arm, in arm order.
pub fn arm_lengths(d: &SquidDescriptor) -> Vec<usize> {
    d.arms.iter().map(Vec::len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{canonical_graded, squid_graded, squid_sequence};
    use crate::WeightSequence;

    fn w(p: &[u32]) -> WeightSequence {
        WeightSequence::new(p.to_vec()).unwrap()
    }

    #[test]
    fn arrowless_cartan_is_identity() {
        let mut q = GradedQuiver::new(3);
        q.set_ranks(&[1, 1, 1]);
        assert_eq!(cartan_from_graded(&q).unwrap(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn degree_zero_cycle_is_rejected() {
        let mut q = GradedQuiver::new(3);
        q.add_arrows(0, 1, 0, 1).add_arrows(1, 2, 0, 1).add_arrows(2, 0, 0, 1);
        assert!(matches!(cartan_from_graded(&q), Err(CartanError::Cycle(_))));
    }

    #[test]
    fn squid_sequence_matches_its_cartan_matrix() {
        for p in [vec![2, 3], vec![2, 2, 2], vec![3, 3, 4]] {
            let (seq, _) = tilting_sequence_from_graded(&squid_graded(&w(&p))).unwrap();
            assert!(seq.same_data(&squid_sequence(&w(&p))), "{p:?}");
        }
    }

    #[test]
    fn squid_is_recognised() {
        let d = recognize_squid(&squid_sequence(&w(&[2, 3]))).unwrap();
        assert_eq!(d.weights, vec![3, 2]);
        assert_eq!(arm_lengths(&d), vec![1, 2]);
        let d = recognize_squid(&squid_sequence(&w(&[2, 2, 2, 2]))).unwrap();
        assert_eq!(d.arms.len(), 4);
        assert!(recognize_squid(&ExcSeqQuiver::new(vec![1, 1, 1])).is_err());
    }

    #[test]
    fn canonical_222_round_trip() {
        let res = recover(&canonical_graded(&w(&[2, 2, 2]))).unwrap();
        assert_eq!(res.weights, vec![2, 2, 2]);
        let back = res.word.replay_sequence(&res.final_state, Direction::Backward).unwrap();
        assert!(back.same_data(&res.input));
    }
}
