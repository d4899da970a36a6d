//! Graded quivers and their mutations.
//!
//! Vertices are indexed from zero. Arrows are stored as bundles keyed by
//! `(from, to, degree)` with a positive multiplicity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::word::Move;

/// Sink/source status of a summand of the cluster-tilting object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Sink,
    Source,
    Unknown,
}

impl Tag {
    pub fn flipped(self) -> Tag {
        match self {
            Tag::Sink => Tag::Source,
            Tag::Source => Tag::Sink,
            Tag::Unknown => Tag::Unknown,
        }
    }

    pub fn is_known(self) -> bool {
        self != Tag::Unknown
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Sink => "sink",
            Tag::Source => "source",
            Tag::Unknown => "unknown",
        })
    }
}

/// A broken [`GradedQuiver`] invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Loop { vertex: usize },
    TwoCycle { a: usize, b: usize },
    MixedDegree { from: usize, to: usize },
    BadDegree { from: usize, to: usize, degree: u8 },
    ZeroMultiplicity { from: usize, to: usize },
    VertexOutOfRange { vertex: usize },
}

impl Violation {
    pub fn invariant(&self) -> &'static str {
        match self {
            Violation::Loop { .. } => "no-loops",
            Violation::TwoCycle { .. } => "no-2-cycles",
            Violation::MixedDegree { .. } => "homogeneous-parallel-bundles",
            Violation::BadDegree { .. } => "degree-in-0-1",
            Violation::ZeroMultiplicity { .. } => "positive-multiplicity",
            Violation::VertexOutOfRange { .. } => "vertex-in-range",
        }
    }

    pub fn vertices(&self) -> Vec<usize> {
        match *self {
            Violation::Loop { vertex } | Violation::VertexOutOfRange { vertex } => vec![vertex],
            Violation::TwoCycle { a, b } => vec![a, b],
            Violation::MixedDegree { from, to }
            | Violation::BadDegree { from, to, .. }
            | Violation::ZeroMultiplicity { from, to } => vec![from, to],
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Loop { vertex } => write!(f, "loop at vertex {}", vertex + 1),
            Violation::TwoCycle { a, b } => write!(f, "2-cycle between {} and {}", a + 1, b + 1),
            Violation::MixedDegree { from, to } => {
                write!(f, "arrows {}->{} carry both degrees", from + 1, to + 1)
            }
            Violation::BadDegree { from, to, degree } => {
                write!(f, "arrow {}->{} has degree {degree}", from + 1, to + 1)
            }
            Violation::ZeroMultiplicity { from, to } => {
                write!(f, "arrow bundle {}->{} has multiplicity 0", from + 1, to + 1)
            }
            Violation::VertexOutOfRange { vertex } => write!(f, "vertex {} out of range", vertex + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("vertex {vertex_} out of range for a quiver with {n} vertices", vertex_ = vertex + 1)]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("quiver violates its invariants: {}", join(.0))]
    InvalidQuiver(Vec<Violation>),
    #[error("vertex {vertex_} has unknown sink/source tag", vertex_ = vertex + 1)]
    UnknownTag { vertex: usize },
    #[error("tag of vertex {vertex_} is {tag} but it has a degree-1 arrow {from_}->{to_}", vertex_ = vertex + 1, from_ = from + 1, to_ = to + 1)]
    TagDegreeConflict {
        vertex: usize,
        tag: Tag,
        from: usize,
        to: usize,
    },
    #[error("grading inconsistency between {from_} and {to_}: {detail}", from_ = from + 1, to_ = to + 1)]
    GradingInconsistency {
        from: usize,
        to: usize,
        detail: String,
        state: Box<GradedQuiver>,
    },
    #[error("move {0:?} cannot be applied to a graded quiver")]
    WrongMoveKind(Move),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// A quiver without grading: arrow bundles keyed by `(from, to)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    pub labels: Vec<String>,
    pub arrows: BTreeMap<(usize, usize), u32>,
    pub ranks: Vec<Option<u64>>,
}

impl Quiver {
    pub fn new(n: usize) -> Self {
        Quiver {
            labels: (1..=n).map(|i| i.to_string()).collect(),
            arrows: BTreeMap::new(),
            ranks: vec![None; n],
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn add_arrows(&mut self, from: usize, to: usize, count: u32) -> &mut Self {
        assert!(from < self.n() && to < self.n(), "vertex out of range");
        if count > 0 {
            *self.arrows.entry((from, to)).or_insert(0) += count;
        }
        self
    }

    /// Skew-symmetric exchange matrix: `b[i][j]` is the number of arrows
    /// `i -> j` minus the number of arrows `j -> i`.
    pub fn exchange_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut b = vec![vec![0i64; n]; n];
        for (&(i, j), &c) in &self.arrows {
            b[i][j] += c as i64;
            b[j][i] -= c as i64;
        }
        b
    }

    fn check_simple(&self) -> Result<(), GradedError> {
        let mut v = Vec::new();
        for &(i, j) in self.arrows.keys() {
            if i == j {
                v.push(Violation::Loop { vertex: i });
            } else if i < j && self.arrows.contains_key(&(j, i)) {
                v.push(Violation::TwoCycle { a: i, b: j });
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(GradedError::InvalidQuiver(v))
        }
    }
}

/// Fomin-Zelevinsky mutation at `k`.
pub fn fz_mutate(q: &Quiver, k: usize) -> Result<Quiver, GradedError> {
    let n = q.n();
    if k >= n {
        return Err(GradedError::VertexOutOfRange { vertex: k, n });
    }
    q.check_simple()?;
    let b = q.exchange_matrix();
    let mut out = Quiver {
        labels: q.labels.clone(),
        arrows: BTreeMap::new(),
        ranks: q.ranks.clone(),
    };
    for i in 0..n {
        for j in 0..n {
            let v = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + (b[i][k].abs() * b[k][j] + b[i][k] * b[k][j].abs()) / 2
            };
            if v > 0 {
                out.arrows.insert((i, j), v as u32);
            }
        }
    }
    Ok(out)
}

/// Finite quiver whose arrows carry degree 0 or 1, with optional ranks and tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedQuiver {
    labels: Vec<String>,
    arrows: BTreeMap<(usize, usize, u8), u32>,
    ranks: Vec<Option<u64>>,
    tags: Vec<Tag>,
}

impl GradedQuiver {
    pub fn new(n: usize) -> Self {
        Self::with_labels((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        let n = labels.len();
        GradedQuiver {
            labels,
            arrows: BTreeMap::new(),
            ranks: vec![None; n],
            tags: vec![Tag::Unknown; n],
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    /// Add `count` arrows `from -> to` of the given degree. Invariants are not
    /// enforced here; call [`GradedQuiver::validate`].
    ///
    /// # Panics
    ///
    /// Panics if either endpoint is out of range.
    pub fn add_arrows(&mut self, from: usize, to: usize, degree: u8, count: u32) -> &mut Self {
        assert!(from < self.n() && to < self.n(), "vertex out of range");
        *self.arrows.entry((from, to, degree)).or_insert(0) += count;
        self
    }

    /// Arrow bundles as `(from, to, degree, count)` in sorted order.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, u8, u32)> + '_ {
        self.arrows.iter().map(|(&(f, t, d), &c)| (f, t, d, c))
    }

    pub fn arrow_count(&self, from: usize, to: usize, degree: u8) -> u32 {
        self.arrows.get(&(from, to, degree)).copied().unwrap_or(0)
    }

    pub fn total_arrows(&self) -> u32 {
        self.arrows.values().sum()
    }

    pub fn rank(&self, v: usize) -> Option<u64> {
        self.ranks[v]
    }

    pub fn ranks(&self) -> &[Option<u64>] {
        &self.ranks
    }

    pub fn set_rank(&mut self, v: usize, r: Option<u64>) -> &mut Self {
        self.ranks[v] = r;
        self
    }

    pub fn set_ranks(&mut self, ranks: &[u64]) -> &mut Self {
        assert_eq!(ranks.len(), self.n());
        self.ranks = ranks.iter().map(|&r| Some(r)).collect();
        self
    }

    /// All ranks, if every vertex has one.
    pub fn full_ranks(&self) -> Option<Vec<u64>> {
        self.ranks.iter().copied().collect()
    }

    pub fn tag(&self, v: usize) -> Tag {
        self.tags[v]
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn set_tag(&mut self, v: usize, t: Tag) -> &mut Self {
        self.tags[v] = t;
        self
    }

    pub fn set_tags(&mut self, tags: &[Tag]) -> &mut Self {
        assert_eq!(tags.len(), self.n());
        self.tags = tags.to_vec();
        self
    }

    /// All invariant violations, empty when the quiver is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.n();
        let mut out = Vec::new();
        let mut pairs: BTreeMap<(usize, usize), BTreeSet<u8>> = BTreeMap::new();
        for (&(f, t, d), &c) in &self.arrows {
            if f >= n || t >= n {
                out.push(Violation::VertexOutOfRange { vertex: f.max(t) });
                continue;
            }
            if c == 0 {
                out.push(Violation::ZeroMultiplicity { from: f, to: t });
                continue;
            }
            if d > 1 {
                out.push(Violation::BadDegree { from: f, to: t, degree: d });
            }
            if f == t {
                out.push(Violation::Loop { vertex: f });
                continue;
            }
            pairs.entry((f, t)).or_default().insert(d);
        }
        for (&(f, t), degs) in &pairs {
            if degs.len() > 1 {
                out.push(Violation::MixedDegree { from: f, to: t });
            }
            if f < t && pairs.contains_key(&(t, f)) {
                out.push(Violation::TwoCycle { a: f, b: t });
            }
        }
        out
    }
}

/// Sum multiplicities over degrees.
pub fn forget_grading(q: &GradedQuiver) -> Quiver {
    let mut out = Quiver {
        labels: q.labels.clone(),
        arrows: BTreeMap::new(),
        ranks: q.ranks.clone(),
    };
    for (f, t, _, c) in q.arrows() {
        if c > 0 {
            *out.arrows.entry((f, t)).or_insert(0) += c;
        }
    }
    out
}

/// Graded mutation at the sink or source `k`.
///
/// Arrows through `k` are reversed with the degree rules of the graded
/// mutation rule, composites `i -> k -> j` carry the sum of their leg degrees,
/// and a composite of degree `d` cancels against an opposite arrow of degree
/// `1 - d`. The rank at `k` is cleared.
pub fn graded_mutate(q: &GradedQuiver, k: usize) -> Result<(GradedQuiver, Move), GradedError> {
    let n = q.n();
    if k >= n {
        return Err(GradedError::VertexOutOfRange { vertex: k, n });
    }
    let violations = q.validate();
    if !violations.is_empty() {
        return Err(GradedError::InvalidQuiver(violations));
    }
    let tag = q.tags[k];
    let sink = match tag {
        Tag::Sink => true,
        Tag::Source => false,
        Tag::Unknown => return Err(GradedError::UnknownTag { vertex: k }),
    };

    let mut incoming = Vec::new();
    let mut outgoing = Vec::new();
    let mut arrows: BTreeMap<(usize, usize, u8), u32> = BTreeMap::new();
    for (f, t, d, c) in q.arrows() {
        if d == 1 && ((sink && t == k) || (!sink && f == k)) {
            return Err(GradedError::TagDegreeConflict { vertex: k, tag, from: f, to: t });
        }
        if t == k {
            incoming.push((f, d, c));
        } else if f == k {
            outgoing.push((t, d, c));
        } else {
            arrows.insert((f, t, d), c);
        }
    }

    for &(i, d, c) in &incoming {
        let nd = if sink { d } else { 1 - d };
        arrows.insert((k, i, nd), c);
    }
    for &(j, d, c) in &outgoing {
        let nd = if sink { 1 - d } else { d };
        arrows.insert((j, k, nd), c);
    }

    let mut composites: BTreeMap<(usize, usize), (u8, u32)> = BTreeMap::new();
    for &(i, d1, r) in &incoming {
        for &(j, d2, s) in &outgoing {
            let d = d1 + d2;
            if d > 1 {
                return Err(inconsistency(q, i, j, "composite of degree 2".into()));
            }
            let e = composites.entry((i, j)).or_insert((d, 0));
            if e.0 != d {
                return Err(inconsistency(q, i, j, "composites of different degrees".into()));
            }
            e.1 += r * s;
        }
    }

    for (&(i, j), &(d, c)) in &composites {
        let same_wrong = arrows.get(&(i, j, 1 - d)).copied().unwrap_or(0);
        if same_wrong > 0 {
            return Err(inconsistency(
                q,
                i,
                j,
                format!("composite of degree {d} parallel to arrows of degree {}", 1 - d),
            ));
        }
        let opp_wrong = arrows.get(&(j, i, d)).copied().unwrap_or(0);
        if opp_wrong > 0 {
            return Err(inconsistency(
                q,
                i,
                j,
                format!("composite of degree {d} opposite to arrows of the same degree"),
            ));
        }
        let opposite = arrows.remove(&(j, i, 1 - d)).unwrap_or(0);
        if c > opposite {
            *arrows.entry((i, j, d)).or_insert(0) += c - opposite;
        } else if opposite > c {
            arrows.insert((j, i, 1 - d), opposite - c);
        }
    }

    let mut tags = q.tags.clone();
    let mut neighbor_tags = BTreeMap::new();
    for &(v, _, _) in incoming.iter().chain(&outgoing) {
        neighbor_tags.insert(v, q.tags[v]);
        tags[v] = Tag::Unknown;
    }
    tags[k] = tag.flipped();
    let mut ranks = q.ranks.clone();
    ranks[k] = None;

    let out = GradedQuiver {
        labels: q.labels.clone(),
        arrows,
        ranks,
        tags,
    };
    let mv = Move::Graded {
        k,
        tag_before: tag,
        rank_before: q.ranks[k],
        neighbor_tags: neighbor_tags.into_iter().collect(),
    };
    Ok((out, mv))
}

fn inconsistency(q: &GradedQuiver, from: usize, to: usize, detail: String) -> GradedError {
    GradedError::GradingInconsistency {
        from,
        to,
        detail,
        state: Box::new(q.clone()),
    }
}

/// Undo a graded move recorded by [`graded_mutate`], restoring the tag and
/// rank at the mutated vertex and the tags of its former neighbours.
pub fn undo_graded(q: &GradedQuiver, mv: &Move) -> Result<GradedQuiver, GradedError> {
    let Move::Graded {
        k,
        tag_before,
        rank_before,
        neighbor_tags,
    } = mv
    else {
        return Err(GradedError::WrongMoveKind(mv.clone()));
    };
    let mut start = q.clone();
    if *k >= start.n() {
        return Err(GradedError::VertexOutOfRange { vertex: *k, n: start.n() });
    }
    start.tags[*k] = tag_before.flipped();
    let (mut out, _) = graded_mutate(&start, *k)?;
    out.tags[*k] = *tag_before;
    out.ranks[*k] = *rank_before;
    for &(v, t) in neighbor_tags {
        out.tags[v] = t;
    }
    Ok(out)
}

/// Replay a recorded graded move forward, using the tag stored in the move.
pub fn redo_graded(q: &GradedQuiver, mv: &Move) -> Result<GradedQuiver, GradedError> {
    let Move::Graded { k, tag_before, .. } = mv else {
        return Err(GradedError::WrongMoveKind(mv.clone()));
    };
    if *k >= q.n() {
        return Err(GradedError::VertexOutOfRange { vertex: *k, n: q.n() });
    }
    let mut start = q.clone();
    start.tags[*k] = *tag_before;
    graded_mutate(&start, *k).map(|(out, _)| out)
}

/// Equality under identical indexing of vertex count, graded arrows and ranks.
pub fn labeled_equal(a: &GradedQuiver, b: &GradedQuiver) -> bool {
    a.n() == b.n() && a.arrows == b.arrows && a.ranks == b.ranks
}

/// A bijection `p` with `a`'s vertex `i` sent to `b`'s vertex `p[i]` that
/// preserves graded arrows and ranks, found by backtracking.
pub fn is_isomorphic(a: &GradedQuiver, b: &GradedQuiver) -> Option<Vec<usize>> {
    let n = a.n();
    if n != b.n() || a.arrows.len() != b.arrows.len() || a.total_arrows() != b.total_arrows() {
        return None;
    }
    let sig = |q: &GradedQuiver, v: usize| {
        let mut s: Vec<(bool, u8, u32)> = q
            .arrows()
            .filter_map(|(f, t, d, c)| {
                if f == v {
                    Some((true, d, c))
                } else if t == v {
                    Some((false, d, c))
                } else {
                    None
                }
            })
            .collect();
        s.sort_unstable();
        (q.ranks[v], s)
    };
    let sa: Vec<_> = (0..n).map(|v| sig(a, v)).collect();
    let sb: Vec<_> = (0..n).map(|v| sig(b, v)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        v: usize,
        a: &GradedQuiver,
        b: &GradedQuiver,
        sa: &[(Option<u64>, Vec<(bool, u8, u32)>)],
        sb: &[(Option<u64>, Vec<(bool, u8, u32)>)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if v == map.len() {
            return true;
        }
        for w in 0..map.len() {
            if used[w] || sa[v] != sb[w] {
                continue;
            }
            let ok = (0..v).all(|u| {
                let x = map[u];
                (0..2u8).all(|d| {
                    a.arrow_count(u, v, d) == b.arrow_count(x, w, d)
                        && a.arrow_count(v, u, d) == b.arrow_count(w, x, d)
                })
            });
            if ok {
                map[v] = w;
                used[w] = true;
                if go(v + 1, a, b, sa, sb, map, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    if go(0, a, b, &sa, &sb, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Quiver {
        let mut q = Quiver::new(3);
        q.add_arrows(0, 1, 1).add_arrows(1, 2, 1);
        q
    }

    #[test]
    fn fz_on_path_creates_shortcut() {
        let m = fz_mutate(&path3(), 1).unwrap();
        let expect: BTreeMap<_, _> = [((1, 0), 1), ((2, 1), 1), ((0, 2), 1)].into_iter().collect();
        assert_eq!(m.arrows, expect);
    }

    #[test]
    fn fz_twice_is_identity_and_isolated_vertex_is_fixed() {
        let q = path3();
        assert_eq!(fz_mutate(&fz_mutate(&q, 1).unwrap(), 1).unwrap(), q);
        let mut iso = Quiver::new(3);
        iso.add_arrows(0, 1, 2);
        assert_eq!(fz_mutate(&iso, 2).unwrap(), iso);
    }

    #[test]
    fn fz_rejects_bad_vertex_and_two_cycles() {
        assert!(matches!(fz_mutate(&path3(), 3), Err(GradedError::VertexOutOfRange { .. })));
        let mut q = Quiver::new(2);
        q.add_arrows(0, 1, 1).add_arrows(1, 0, 1);
        assert!(matches!(fz_mutate(&q, 0), Err(GradedError::InvalidQuiver(_))));
    }

    #[test]
    fn validate_reports_each_invariant() {
        let mut ok = GradedQuiver::new(2);
        ok.add_arrows(0, 1, 0, 1);
        assert!(ok.validate().is_empty());

        let mut cyc = GradedQuiver::new(2);
        cyc.add_arrows(0, 1, 0, 1).add_arrows(1, 0, 1, 1);
        assert_eq!(cyc.validate(), vec![Violation::TwoCycle { a: 0, b: 1 }]);

        let mut mixed = GradedQuiver::new(2);
        mixed.add_arrows(0, 1, 0, 1).add_arrows(0, 1, 1, 1);
        assert_eq!(mixed.validate(), vec![Violation::MixedDegree { from: 0, to: 1 }]);

        let mut lp = GradedQuiver::new(1);
        lp.add_arrows(0, 0, 0, 1);
        assert_eq!(lp.validate()[0].invariant(), "no-loops");
    }

    #[test]
    fn single_arrow_into_sink() {
        let mut q = GradedQuiver::new(2);
        q.add_arrows(0, 1, 0, 1).set_tag(1, Tag::Sink).set_ranks(&[1, 1]);
        let (m, mv) = graded_mutate(&q, 1).unwrap();
        assert_eq!(m.arrows().collect::<Vec<_>>(), vec![(1, 0, 0, 1)]);
        assert_eq!(m.tag(1), Tag::Source);
        assert_eq!(m.rank(1), None);
        assert_eq!(undo_graded(&m, &mv).unwrap(), q);
    }

    #[test]
    fn unknown_tag_is_refused() {
        let mut q = GradedQuiver::new(2);
        q.add_arrows(0, 1, 0, 1);
        assert_eq!(graded_mutate(&q, 0).unwrap_err(), GradedError::UnknownTag { vertex: 0 });
    }

    #[test]
    fn degree_one_into_sink_is_refused() {
        let mut q = GradedQuiver::new(2);
        q.add_arrows(0, 1, 1, 1).set_tag(1, Tag::Sink);
        assert!(matches!(graded_mutate(&q, 1), Err(GradedError::TagDegreeConflict { .. })));
    }

    #[test]
    fn isomorphism_finds_swap() {
        let mut a = GradedQuiver::new(2);
        a.add_arrows(0, 1, 0, 1);
        let mut b = GradedQuiver::new(2);
        b.add_arrows(1, 0, 0, 1);
        assert_eq!(is_isomorphic(&a, &a), Some(vec![0, 1]));
        assert_eq!(is_isomorphic(&a, &b), Some(vec![1, 0]));
        let mut c = GradedQuiver::new(2);
        c.add_arrows(1, 0, 1, 1);
        assert_eq!(is_isomorphic(&a, &c), None);
    }
}
