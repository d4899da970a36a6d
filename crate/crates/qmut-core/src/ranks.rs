//! Rank additivity and sink/source inference on graded quivers.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::graded::{self, GradedError, GradedQuiver, Quiver, Tag, Violation};
use crate::word::Move;
use crate::linalg::{self, LinearSolution, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("vertex {} has no rank", .0 + 1)]
    MissingRank(usize),
    #[error("additivity equations are inconsistent for the unknown ranks")]
    Inconsistent,
    #[error("unknown ranks at {:?} are not determined; free directions {free_directions:?}", unknowns.iter().map(|u| u + 1).collect::<Vec<_>>())]
    Underdetermined {
        unknowns: Vec<usize>,
        free_directions: Vec<Vec<i64>>,
    },
    #[error("rank at vertex {vertex_} solves to the non-integer {value}", vertex_ = vertex + 1)]
    NonIntegral { vertex: usize, value: String },
    #[error("rank at vertex {vertex_} solves to the negative value {value}", vertex_ = vertex + 1)]
    Negative { vertex: usize, value: i128 },
    #[error("vertex {vertex_} would be tagged both sink and source ({reason})", vertex_ = vertex + 1)]
    ConflictingTags { vertex: usize, reason: String },
    #[error("tags do not yield a valid grading: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidGrading(Vec<Violation>),
    #[error("vertex {} is not tagged sink or source", .0 + 1)]
    UntaggedVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrackError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Rank(#[from] RankError),
}

/// Per-vertex residual of the rank additivity equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityReport {
    pub residuals: Vec<i64>,
    pub ok: bool,
}

/// Degree-0 and degree-1 arrow counts between each pair, in either direction.
fn symmetric_counts(q: &GradedQuiver) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let n = q.n();
    let mut a = vec![vec![0i64; n]; n];
    let mut b = vec![vec![0i64; n]; n];
    for (f, t, d, c) in q.arrows() {
        let m = if d == 0 { &mut a } else { &mut b };
        m[f][t] += c as i64;
        m[t][f] += c as i64;
    }
    (a, b)
}

/// Coefficient of `rank(j)` in the equation at vertex `i`.
fn coefficients(q: &GradedQuiver) -> Vec<Vec<i64>> {
    let n = q.n();
    let (a, b) = symmetric_counts(q);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 2 } else { 0 } - a[j][i] + b[j][i])
                .collect()
        })
        .collect()
}

pub fn check_additivity(q: &GradedQuiver) -> Result<AdditivityReport, RankError> {
    let ranks = full_ranks(q)?;
    let coef = coefficients(q);
    let residuals: Vec<i64> = coef
        .iter()
        .map(|row| row.iter().zip(&ranks).map(|(c, &r)| c * r as i64).sum())
        .collect();
    let ok = residuals.iter().all(|&r| r == 0);
    Ok(AdditivityReport { residuals, ok })
}

fn full_ranks(q: &GradedQuiver) -> Result<Vec<u64>, RankError> {
    (0..q.n())
        .map(|v| q.rank(v).ok_or(RankError::MissingRank(v)))
        .collect()
}

/// Complete the missing ranks from the additivity equations at every vertex.
pub fn solve_unknown_ranks(q: &GradedQuiver) -> Result<Vec<u64>, RankError> {
    let unknowns: Vec<usize> = (0..q.n()).filter(|&v| q.rank(v).is_none()).collect();
    if unknowns.is_empty() {
        return full_ranks(q);
    }
    let coef = coefficients(q);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for row in &coef {
        rows.push(unknowns.iter().map(|&u| Q::from_integer(row[u] as i128)).collect::<Vec<_>>());
        let known: i128 = (0..q.n())
            .filter_map(|j| q.rank(j).map(|r| row[j] as i128 * r as i128))
            .sum();
        rhs.push(Q::from_integer(-known));
    }
    match linalg::solve(&rows, &rhs, unknowns.len()) {
        LinearSolution::Inconsistent => Err(RankError::Inconsistent),
        LinearSolution::Underdetermined { null_space } => Err(RankError::Underdetermined {
            free_directions: null_space.iter().map(|v| linalg::primitive_integer(v)).collect(),
            unknowns,
        }),
        LinearSolution::Unique(x) => {
            let mut out: Vec<u64> = q.ranks().iter().map(|r| r.unwrap_or(0)).collect();
            for (&v, val) in unknowns.iter().zip(&x) {
                if !val.is_integer() {
                    return Err(RankError::NonIntegral { vertex: v, value: val.to_string() });
                }
                if val.is_negative() && !val.is_zero() {
                    return Err(RankError::Negative { vertex: v, value: val.to_integer() });
                }
                out[v] = val.to_integer() as u64;
            }
            Ok(out)
        }
    }
}

/// Copy of `q` with the missing ranks filled in.
pub fn with_solved_ranks(q: &GradedQuiver) -> Result<GradedQuiver, RankError> {
    let ranks = solve_unknown_ranks(q)?;
    let mut out = q.clone();
    out.set_ranks(&ranks);
    Ok(out)
}

/// Sink/source tags determined by the ranks and the degree-1 arrows.
///
/// Tails of degree-1 arrows are sinks and heads are sources. A positive-rank
/// vertex touching only degree-0 arrows is a source when its rank is at most
/// the rank sum of its successors, and a sink when the rank sum of its
/// predecessors exceeds its rank. Everything else stays `Unknown`.
pub fn infer_sink_source(q: &GradedQuiver) -> Result<Vec<Tag>, RankError> {
    let ranks = full_ranks(q)?;
    let n = q.n();
    let mut tags = vec![Tag::Unknown; n];
    let mut has_degree_one = vec![false; n];
    let assign = |tags: &mut Vec<Tag>, v: usize, t: Tag, why: &str| {
        if tags[v].is_known() && tags[v] != t {
            return Err(RankError::ConflictingTags { vertex: v, reason: why.to_string() });
        }
        tags[v] = t;
        Ok(())
    };
    for (f, t, d, _) in q.arrows() {
        if d == 1 {
            has_degree_one[f] = true;
            has_degree_one[t] = true;
            assign(&mut tags, f, Tag::Sink, "tail of a degree-1 arrow")?;
            assign(&mut tags, t, Tag::Source, "head of a degree-1 arrow")?;
        }
    }
    for v in 0..n {
        if has_degree_one[v] || ranks[v] == 0 {
            continue;
        }
        let mut out_sum = 0u64;
        let mut in_sum = 0u64;
        for (f, t, _, c) in q.arrows() {
            if f == v {
                out_sum += c as u64 * ranks[t];
            } else if t == v {
                in_sum += c as u64 * ranks[f];
            }
        }
        let source = ranks[v] <= out_sum;
        let sink = in_sum > ranks[v];
        match (source, sink) {
            (true, true) => {
                return Err(RankError::ConflictingTags {
                    vertex: v,
                    reason: format!(
                        "rank {} against outgoing sum {out_sum} and incoming sum {in_sum}",
                        ranks[v]
                    ),
                })
            }
            (true, false) => tags[v] = Tag::Source,
            (false, true) => tags[v] = Tag::Sink,
            (false, false) => {}
        }
    }
    Ok(tags)
}

/// Combine inferred tags with those already carried by `q`: inferred tags win,
/// carried tags fill in where inference says `Unknown`, and a disagreement is
/// reported as a conflict.
pub fn refresh_tags(q: &GradedQuiver) -> Result<GradedQuiver, RankError> {
    let inferred = infer_sink_source(q)?;
    let mut out = q.clone();
    for (v, &t) in inferred.iter().enumerate() {
        let carried = q.tag(v);
        if t.is_known() && carried.is_known() && t != carried {
            return Err(RankError::ConflictingTags {
                vertex: v,
                reason: format!("carried {carried}, inferred {t}"),
            });
        }
        if t.is_known() {
            out.set_tag(v, t);
        }
    }
    Ok(out)
}

/// Graded mutation at `k` that keeps ranks and tags complete: a missing tag
/// at `k` is inferred first, and afterwards the rank of the new summand is
/// solved and tags are re-inferred.
pub fn mutate_tracking(q: &GradedQuiver, k: usize) -> Result<(GradedQuiver, Move), TrackError> {
    let start = if q.tag(k).is_known() || k >= q.n() { q.clone() } else { refresh_tags(q)? };
    let (m, mv) = graded::graded_mutate(&start, k)?;
    let m = refresh_tags(&with_solved_ranks(&m)?)?;
    Ok((m, mv))
}

/// Grade the arrows of an ungraded quiver from a complete tag assignment:
/// an arrow has degree 1 exactly when it runs from a sink to a source.
pub fn grading_from_sink_source(q: &Quiver, tags: &[Tag]) -> Result<GradedQuiver, RankError> {
    assert_eq!(tags.len(), q.n());
    if let Some(v) = tags.iter().position(|t| !t.is_known()) {
        return Err(RankError::UntaggedVertex(v));
    }
    let mut out = GradedQuiver::with_labels(q.labels.clone());
    for (&(f, t), &c) in &q.arrows {
        let d = u8::from(tags[f] == Tag::Sink && tags[t] == Tag::Source);
        out.add_arrows(f, t, d, c);
    }
    for (v, r) in q.ranks.iter().enumerate() {
        out.set_rank(v, *r);
    }
    out.set_tags(tags);
    let violations = out.validate();
    if !violations.is_empty() {
        return Err(RankError::InvalidGrading(violations));
    }
    Ok(out)
}
