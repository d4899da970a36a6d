//! Document-level operations shared by the command line and the service.
//!
//! Every function takes and returns documents with 1-based vertex ids and
//! reports failures as [`ApiError`]s.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qmut_core::catalog::{canonical_graded, squid_graded, squid_sequence};
use qmut_core::exseq::{self, Side};
use qmut_core::graded::{self, forget_grading, GradedError};
use qmut_core::ranks;
use qmut_core::recovery::{self, tilting_sequence_from_graded};
use qmut_core::word::{Direction, Move};
use qmut_core::{MutKind, WeightSequence};

use crate::doc::{Document, Kind, KindDoc, MoveDoc, RecoveryDocument, WordDocument};
use crate::error::{one_based, ApiError};

/// Default cap on per-step states attached to a recovery result.
pub const DEFAULT_STATE_CAP: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerateType {
    Canonical,
    Squid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerateAs {
    #[default]
    Graded,
    Sequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideDoc {
    Left,
    Right,
}

impl From<SideDoc> for Side {
    fn from(s: SideDoc) -> Side {
        match s {
            SideDoc::Left => Side::Left,
            SideDoc::Right => Side::Right,
        }
    }
}

fn index(id: usize, n: usize, what: &str) -> Result<usize, ApiError> {
    if id == 0 || id > n {
        return Err(ApiError::usage(format!("{what} {id} is outside 1..={n}")));
    }
    Ok(id - 1)
}

pub fn generate(ty: GenerateType, weights: &str, as_: GenerateAs) -> Result<Document, ApiError> {
    let p: WeightSequence = weights
        .parse()
        .map_err(|e: qmut_core::catalog::CatalogError| ApiError::usage(e.to_string()))?;
    Ok(match (ty, as_) {
        (GenerateType::Canonical, GenerateAs::Graded) => Document::from_graded(&canonical_graded(&p)),
        (GenerateType::Squid, GenerateAs::Graded) => Document::from_graded(&squid_graded(&p)),
        (GenerateType::Squid, GenerateAs::Sequence) => Document::from_sequence(&squid_sequence(&p)),
        (GenerateType::Canonical, GenerateAs::Sequence) => {
            let (seq, _) = tilting_sequence_from_graded(&canonical_graded(&p))
                .map_err(|e| ApiError::internal(e.to_string()))?;
            Document::from_sequence(&seq)
        }
    })
}

/// Graded mutation at `vertex`, inferring the tag there first when it is
/// not carried by the document. With `graded == false` the grading is
/// dropped and plain Fomin-Zelevinsky mutation is applied.
pub fn mutate(doc: &Document, vertex: usize, graded: bool) -> Result<(Document, MoveDoc), ApiError> {
    let q = doc.to_graded()?;
    let k = index(vertex, q.n(), "vertex")?;
    if !graded {
        let m = graded::fz_mutate(&forget_grading(&q), k)?;
        return Ok((Document::from_quiver(&m).with_meta(&doc.meta), MoveDoc::Fz { at: vertex }));
    }
    let start = if q.tag(k).is_known() {
        q
    } else {
        let tagged = ranks::refresh_tags(&q).map_err(|e| {
            ApiError::from(GradedError::UnknownTag { vertex: k })
                .with_details(json!({"vertex": vertex, "inference": e.to_string()}))
        })?;
        if !tagged.tag(k).is_known() {
            return Err(GradedError::UnknownTag { vertex: k }.into());
        }
        tagged
    };
    let (m, mv) = graded::graded_mutate(&start, k)?;
    Ok((Document::from_graded(&m).with_meta(&doc.meta), MoveDoc::from_move(&mv)))
}

pub fn solve_ranks(doc: &Document) -> Result<Document, ApiError> {
    let q = ranks::with_solved_ranks(&doc.to_graded()?)?;
    Ok(Document::from_graded(&q).with_meta(&doc.meta))
}

pub fn infer_tags(doc: &Document) -> Result<Document, ApiError> {
    let q = ranks::refresh_tags(&doc.to_graded()?)?;
    Ok(Document::from_graded(&q).with_meta(&doc.meta))
}

/// Additivity residuals per vertex, in vertex order.
pub fn additivity(doc: &Document) -> Result<Value, ApiError> {
    let r = ranks::check_additivity(&doc.to_graded()?)?;
    Ok(json!({"ok": r.ok, "residuals": r.residuals}))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub kind: Kind,
    pub violations: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub additivity: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub missing_ranks: Vec<usize>,
}

/// Structural invariants plus rank additivity for graded quivers, and
/// realizability of every pair for sequences.
pub fn verify(doc: &Document) -> Result<VerifyReport, ApiError> {
    match doc.kind {
        Kind::GradedQuiver => {
            let q = doc.to_graded()?;
            let violations: Vec<Value> = q
                .validate()
                .iter()
                .map(|v| json!({"invariant": v.invariant(), "vertices": one_based(&v.vertices()), "message": v.to_string()}))
                .collect();
            let missing: Vec<usize> = (0..q.n()).filter(|&v| q.rank(v).is_none()).map(|v| v + 1).collect();
            let additivity = if missing.is_empty() { Some(additivity(doc)?) } else { None };
            let additive = additivity.as_ref().is_some_and(|a| a["ok"] == json!(true));
            Ok(VerifyReport {
                ok: violations.is_empty() && additive,
                kind: doc.kind,
                violations,
                additivity,
                missing_ranks: missing,
            })
        }
        Kind::ExcSequence => {
            let q = doc.to_sequence()?;
            let violations: Vec<Value> = q
                .realizability_violations()
                .into_iter()
                .map(|(i, j)| {
                    json!({
                        "invariant": "realizable",
                        "vertices": [i + 1, j + 1],
                        "message": format!("pair ({}, {}) with ranks ({}, {}) and a = {} is not realizable", i + 1, j + 1, q.rank(i), q.rank(j), q.a(i, j)),
                    })
                })
                .collect();
            Ok(VerifyReport {
                ok: violations.is_empty(),
                kind: doc.kind,
                violations,
                additivity: None,
                missing_ranks: Vec::new(),
            })
        }
    }
}

/// Mutate the pair at `position` and `position + 1`. Without an explicit
/// kind the pair is classified from the data.
pub fn exmutate(
    doc: &Document,
    position: usize,
    side: SideDoc,
    kind: Option<KindDoc>,
) -> Result<(Document, MoveDoc), ApiError> {
    let q = doc.to_sequence()?;
    if q.n() < 2 {
        return Err(ApiError::usage("a sequence needs two objects to mutate"));
    }
    let l = index(position, q.n() - 1, "position")?;
    let (m, mv) = match kind {
        Some(k) => exseq::mutate(&q, l, side.into(), MutKind::from(k))?,
        None => exseq::mutate_classified(&q, l, side.into())?,
    };
    Ok((Document::from_sequence(&m).with_meta(&doc.meta), MoveDoc::from_move(&mv)))
}

/// Run the recovery pipeline on a graded quiver or a sequence, attaching at
/// most `state_cap` per-step states when asked for.
pub fn recover(doc: &Document, state_cap: Option<usize>) -> Result<RecoveryDocument, ApiError> {
    let res = match doc.kind {
        Kind::GradedQuiver => recovery::recover(&doc.to_graded()?)?,
        Kind::ExcSequence => recovery::recover_sequence(&doc.to_sequence()?)?,
    };
    let mut out = RecoveryDocument::from_result(&res);
    if let Some(cap) = state_cap {
        let states = res.states(cap)?;
        out.states = Some(states.iter().map(Document::from_sequence).collect());
    }
    Ok(out)
}

/// Replay a word on a document of the matching kind.
pub fn replay(doc: &Document, word: &WordDocument, backward: bool) -> Result<Document, ApiError> {
    let w = word.to_word()?;
    let dir = if backward { Direction::Backward } else { Direction::Forward };
    let first = w.moves.first();
    match (doc.kind, first) {
        (_, None) => Ok(doc.clone()),
        (Kind::ExcSequence, _) => {
            let q = w.replay_sequence(&doc.to_sequence()?, dir)?;
            Ok(Document::from_sequence(&q).with_meta(&doc.meta))
        }
        (Kind::GradedQuiver, Some(Move::Fz { .. })) => {
            let q = w.replay_fz(&forget_grading(&doc.to_graded()?), dir)?;
            Ok(Document::from_quiver(&q).with_meta(&doc.meta))
        }
        (Kind::GradedQuiver, _) => {
            let q = w.replay_graded(&doc.to_graded()?, dir)?;
            Ok(Document::from_graded(&q).with_meta(&doc.meta))
        }
    }
}
