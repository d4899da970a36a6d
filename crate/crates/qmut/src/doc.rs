//! The `qmut/1` JSON document format.
//!
//! Vertices are numbered from 1 in documents and must be listed in order.
//! Output is pretty-printed with sorted arrow and entry lists, so the bytes
//! of a serialized document depend only on its content.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use qmut_core::exseq::{ExcSeqQuiver, MutKind};
use qmut_core::graded::{GradedQuiver, Quiver, Tag};
use qmut_core::recovery::{LogEntry, RecoveryResult};
use qmut_core::word::{Move, MutationWord};
use qmut_core::SymbolicObject;

use crate::error::ApiError;

pub const SCHEMA: &str = "qmut/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    GradedQuiver,
    ExcSequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagDoc {
    Sink,
    Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: usize,
    pub label: String,
    pub rank: Option<u64>,
    pub tag: Option<TagDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub from: usize,
    pub to: usize,
    pub degree: u8,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub i: usize,
    pub j: usize,
    pub a: i64,
}

/// A graded quiver or an exceptional sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema: String,
    pub kind: Kind,
    pub vertices: Vec<VertexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<ArrowDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, Value>,
}

/// Parse JSON text into a value of type `T`, reporting the failing field.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de)?;
    Ok(value)
}

/// Parse and validate a document.
pub fn parse(text: &str) -> Result<Document, ApiError> {
    let doc: Document = parse_json(text)?;
    doc.check()?;
    Ok(doc)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// Serialize with arrows and entries in sorted order.
pub fn serialize(doc: &Document) -> String {
    let mut doc = doc.clone();
    if let Some(a) = doc.arrows.as_mut() {
        a.sort();
    }
    if let Some(e) = doc.entries.as_mut() {
        e.sort();
    }
    to_text(&doc)
}

fn tag_from_doc(t: Option<TagDoc>) -> Tag {
    match t {
        Some(TagDoc::Sink) => Tag::Sink,
        Some(TagDoc::Source) => Tag::Source,
        None => Tag::Unknown,
    }
}

pub fn tag_to_doc(t: Tag) -> Option<TagDoc> {
    match t {
        Tag::Sink => Some(TagDoc::Sink),
        Tag::Source => Some(TagDoc::Source),
        Tag::Unknown => None,
    }
}

impl Document {
    /// Schema checks beyond what the JSON types enforce.
    pub fn check(&self) -> Result<(), ApiError> {
        if self.schema != SCHEMA {
            return Err(ApiError::schema("schema", format!("expected \"{SCHEMA}\", found {:?}", self.schema)));
        }
        let n = self.vertices.len();
        for (x, v) in self.vertices.iter().enumerate() {
            if v.id != x + 1 {
                return Err(ApiError::schema(
                    format!("vertices[{x}].id"),
                    format!("vertex ids must be 1..{n} in order, found {} at index {x}", v.id),
                ));
            }
        }
        let id_ok = |id: usize| (1..=n).contains(&id);
        match self.kind {
            Kind::GradedQuiver => {
                if self.entries.is_some() {
                    return Err(ApiError::schema("entries", "graded quivers carry arrows, not entries"));
                }
                let arrows = self
                    .arrows
                    .as_ref()
                    .ok_or_else(|| ApiError::schema("arrows", "graded quivers need an arrows list"))?;
                let mut seen = BTreeSet::new();
                for (x, a) in arrows.iter().enumerate() {
                    for (name, id) in [("from", a.from), ("to", a.to)] {
                        if !id_ok(id) {
                            return Err(ApiError::schema(
                                format!("arrows[{x}].{name}"),
                                format!("no vertex with id {id}"),
                            ));
                        }
                    }
                    if a.degree > 1 {
                        return Err(ApiError::schema(
                            format!("arrows[{x}].degree"),
                            format!("degree must be 0 or 1, found {}", a.degree),
                        ));
                    }
                    if a.count == 0 {
                        return Err(ApiError::schema(format!("arrows[{x}].count"), "count must be at least 1"));
                    }
                    if !seen.insert((a.from, a.to, a.degree)) {
                        return Err(ApiError::schema(
                            format!("arrows[{x}]"),
                            format!("duplicate bundle {}->{} of degree {}", a.from, a.to, a.degree),
                        ));
                    }
                }
            }
            Kind::ExcSequence => {
                if self.arrows.is_some() {
                    return Err(ApiError::schema("arrows", "sequences carry entries, not arrows"));
                }
                let entries = self
                    .entries
                    .as_ref()
                    .ok_or_else(|| ApiError::schema("entries", "sequences need an entries list"))?;
                for (x, v) in self.vertices.iter().enumerate() {
                    if v.rank.is_none() {
                        return Err(ApiError::schema(format!("vertices[{x}].rank"), "sequence ranks are required"));
                    }
                    if v.tag.is_some() {
                        return Err(ApiError::schema(format!("vertices[{x}].tag"), "sequences carry no tags"));
                    }
                }
                let mut seen = BTreeSet::new();
                for (x, e) in entries.iter().enumerate() {
                    for (name, id) in [("i", e.i), ("j", e.j)] {
                        if !id_ok(id) {
                            return Err(ApiError::schema(format!("entries[{x}].{name}"), format!("no vertex with id {id}")));
                        }
                    }
                    if e.i >= e.j {
                        return Err(ApiError::schema(format!("entries[{x}]"), "entries need i < j"));
                    }
                    if e.a == 0 {
                        return Err(ApiError::schema(format!("entries[{x}].a"), "zero entries are omitted"));
                    }
                    if !seen.insert((e.i, e.j)) {
                        return Err(ApiError::schema(format!("entries[{x}]"), format!("duplicate entry ({}, {})", e.i, e.j)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_graded(q: &GradedQuiver) -> Document {
        let vertices = (0..q.n())
            .map(|v| VertexDoc {
                id: v + 1,
                label: q.label(v).to_string(),
                rank: q.rank(v),
                tag: tag_to_doc(q.tag(v)),
            })
            .collect();
        let arrows = q
            .arrows()
            .map(|(f, t, d, c)| ArrowDoc { from: f + 1, to: t + 1, degree: d, count: c })
            .collect();
        Document {
            schema: SCHEMA.into(),
            kind: Kind::GradedQuiver,
            vertices,
            arrows: Some(arrows),
            entries: None,
            meta: BTreeMap::new(),
        }
    }

    /// An ungraded quiver, written with every arrow in degree 0 and no tags.
    pub fn from_quiver(q: &Quiver) -> Document {
        let mut g = GradedQuiver::with_labels(q.labels.clone());
        for (&(f, t), &c) in &q.arrows {
            g.add_arrows(f, t, 0, c);
        }
        for (v, r) in q.ranks.iter().enumerate() {
            g.set_rank(v, *r);
        }
        let mut doc = Document::from_graded(&g);
        doc.meta.insert("grading".into(), Value::from("forgotten"));
        doc
    }

    pub fn from_sequence(q: &ExcSeqQuiver) -> Document {
        let vertices = (0..q.n())
            .map(|v| VertexDoc {
                id: v + 1,
                label: q.labels()[v].to_string(),
                rank: Some(q.rank(v)),
                tag: None,
            })
            .collect();
        let entries = q
            .nonzero_entries()
            .into_iter()
            .map(|(i, j, a)| EntryDoc { i: i + 1, j: j + 1, a })
            .collect();
        Document {
            schema: SCHEMA.into(),
            kind: Kind::ExcSequence,
            vertices,
            arrows: None,
            entries: Some(entries),
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, meta: &BTreeMap<String, Value>) -> Document {
        for (k, v) in meta {
            self.meta.entry(k.clone()).or_insert_with(|| v.clone());
        }
        self
    }

    pub fn to_graded(&self) -> Result<GradedQuiver, ApiError> {
        if self.kind != Kind::GradedQuiver {
            return Err(ApiError::schema("kind", "expected a graded_quiver document"));
        }
        self.check()?;
        let mut q = GradedQuiver::with_labels(self.vertices.iter().map(|v| v.label.clone()).collect());
        for a in self.arrows.iter().flatten() {
            q.add_arrows(a.from - 1, a.to - 1, a.degree, a.count);
        }
        for (x, v) in self.vertices.iter().enumerate() {
            q.set_rank(x, v.rank);
            q.set_tag(x, tag_from_doc(v.tag));
        }
        Ok(q)
    }

    pub fn to_sequence(&self) -> Result<ExcSeqQuiver, ApiError> {
        if self.kind != Kind::ExcSequence {
            return Err(ApiError::schema("kind", "expected an exc_sequence document"));
        }
        self.check()?;
        let ranks = self.vertices.iter().map(|v| v.rank.unwrap_or(0)).collect();
        let mut q = ExcSeqQuiver::new(ranks);
        for e in self.entries.iter().flatten() {
            q.set(e.i - 1, e.j - 1, e.a);
        }
        q.set_labels(self.vertices.iter().map(|v| SymbolicObject::name(v.label.clone())).collect());
        Ok(q)
    }
}

/// Mutation kind as written in documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KindDoc {
    T,
    E,
    M,
    X,
}

impl From<MutKind> for KindDoc {
    fn from(k: MutKind) -> Self {
        match k {
            MutKind::T => KindDoc::T,
            MutKind::E => KindDoc::E,
            MutKind::M => KindDoc::M,
            MutKind::X => KindDoc::X,
        }
    }
}

impl From<KindDoc> for MutKind {
    fn from(k: KindDoc) -> Self {
        match k {
            KindDoc::T => MutKind::T,
            KindDoc::E => MutKind::E,
            KindDoc::M => MutKind::M,
            KindDoc::X => MutKind::X,
        }
    }
}

/// One recorded move. Positions and vertices are numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MoveDoc {
    Fz {
        at: usize,
    },
    Graded {
        at: usize,
        tag_before: TagDoc,
        rank_before: Option<u64>,
        neighbor_tags: Vec<(usize, Option<TagDoc>)>,
    },
    Lambda {
        at: usize,
        kind: KindDoc,
    },
    Rho {
        at: usize,
        kind: KindDoc,
    },
}

impl MoveDoc {
    pub fn from_move(m: &Move) -> MoveDoc {
        match m {
            Move::Fz { k } => MoveDoc::Fz { at: k + 1 },
            Move::Graded { k, tag_before, rank_before, neighbor_tags } => MoveDoc::Graded {
                at: k + 1,
                tag_before: tag_to_doc(*tag_before).expect("graded moves start from a known tag"),
                rank_before: *rank_before,
                neighbor_tags: neighbor_tags.iter().map(|&(v, t)| (v + 1, tag_to_doc(t))).collect(),
            },
            Move::Lambda { l, kind } => MoveDoc::Lambda { at: l + 1, kind: (*kind).into() },
            Move::Rho { l, kind } => MoveDoc::Rho { at: l + 1, kind: (*kind).into() },
        }
    }

    pub fn to_move(&self) -> Result<Move, ApiError> {
        let pos = |at: usize| at.checked_sub(1).ok_or_else(|| ApiError::schema("at", "positions start at 1"));
        Ok(match self {
            MoveDoc::Fz { at } => Move::Fz { k: pos(*at)? },
            MoveDoc::Graded { at, tag_before, rank_before, neighbor_tags } => Move::Graded {
                k: pos(*at)?,
                tag_before: tag_from_doc(Some(*tag_before)),
                rank_before: *rank_before,
                neighbor_tags: neighbor_tags
                    .iter()
                    .map(|&(v, t)| Ok((pos(v)?, tag_from_doc(t))))
                    .collect::<Result<_, ApiError>>()?,
            },
            MoveDoc::Lambda { at, kind } => Move::Lambda { l: pos(*at)?, kind: (*kind).into() },
            MoveDoc::Rho { at, kind } => Move::Rho { l: pos(*at)?, kind: (*kind).into() },
        })
    }
}

/// A mutation word as a standalone document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordDocument {
    pub schema: String,
    pub kind: WordKind,
    pub moves: Vec<MoveDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordKind {
    MutationWord,
}

impl WordDocument {
    pub fn from_word(w: &MutationWord) -> WordDocument {
        WordDocument {
            schema: SCHEMA.into(),
            kind: WordKind::MutationWord,
            moves: w.moves.iter().map(MoveDoc::from_move).collect(),
        }
    }

    pub fn to_word(&self) -> Result<MutationWord, ApiError> {
        if self.schema != SCHEMA {
            return Err(ApiError::schema("schema", format!("expected \"{SCHEMA}\"")));
        }
        let moves = self
            .moves
            .iter()
            .enumerate()
            .map(|(x, m)| {
                m.to_move().map_err(|mut e| {
                    e.field = Some(format!("moves[{x}].{}", e.field.unwrap_or_default()));
                    e
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(MutationWord::new(moves))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogDoc {
    pub step: usize,
    pub phase: u8,
    pub phase_name: String,
    #[serde(rename = "move")]
    pub mv: MoveDoc,
    pub ranks: Vec<u64>,
}

impl LogDoc {
    pub fn from_entry(e: &LogEntry) -> LogDoc {
        LogDoc {
            step: e.step,
            phase: e.phase.number(),
            phase_name: e.phase.to_string(),
            mv: MoveDoc::from_move(&e.mv),
            ranks: e.ranks.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquidDoc {
    pub line_bundles: [usize; 2],
    pub arms: Vec<Vec<usize>>,
    pub arm_weights: Vec<u32>,
}

/// Output of the recovery pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryDocument {
    pub schema: String,
    pub kind: String,
    pub weights: Vec<u32>,
    pub squid: SquidDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_order: Option<Vec<usize>>,
    pub word: Vec<MoveDoc>,
    pub reconstruction: Vec<String>,
    pub input: Document,
    pub final_state: Document,
    pub log: Vec<LogDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<Document>>,
}

impl RecoveryDocument {
    pub fn from_result(r: &RecoveryResult) -> RecoveryDocument {
        let squid = &r.squid;
        RecoveryDocument {
            schema: SCHEMA.into(),
            kind: "recovery_result".into(),
            weights: r.weights.clone(),
            squid: SquidDoc {
                line_bundles: [squid.line_bundles.0 + 1, squid.line_bundles.1 + 1],
                arms: squid.arms.iter().map(|a| crate::error::one_based(a)).collect(),
                arm_weights: squid.arm_weights.clone(),
            },
            vertex_order: r.vertex_order.as_deref().map(crate::error::one_based),
            word: r.word.moves.iter().map(MoveDoc::from_move).collect(),
            reconstruction: r.reconstruction.iter().map(|s| s.to_string()).collect(),
            input: Document::from_sequence(&r.input),
            final_state: Document::from_sequence(&r.final_state),
            log: r.log.iter().map(LogDoc::from_entry).collect(),
            states: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_round_trips() {
        let text = to_text(&Document::from_graded(&GradedQuiver::new(1)));
        assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn degree_two_names_the_field() {
        let text = r#"{"schema":"qmut/1","kind":"graded_quiver",
            "vertices":[{"id":1,"label":"a","rank":1,"tag":null},{"id":2,"label":"b","rank":1,"tag":null}],
            "arrows":[{"from":1,"to":2,"degree":2,"count":1}]}"#;
        let e = parse(text).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("arrows[0].degree"));
    }

    #[test]
    fn type_errors_carry_path_and_position() {
        let text = "{\"schema\":\"qmut/1\",\"kind\":\"graded_quiver\",\n\"vertices\":[{\"id\":\"x\"}]}";
        let e = parse(text).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("vertices[0].id"));
        assert_eq!(e.line, Some(2));
    }
}
