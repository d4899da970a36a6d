use serde::Serialize;
use serde_json::{json, Value};

use qmut_core::exseq::ExseqError;
use qmut_core::graded::GradedError;
use qmut_core::ranks::{RankError, TrackError};
use qmut_core::recovery::RecoveryError;
use qmut_core::word::ReplayError;

/// Whether an error is the caller's input, the mathematics, or ours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Domain,
    Internal,
}

/// Machine-readable error object shared by the CLI and the HTTP service.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip)]
    pub class: ErrorClass,
}

impl ApiError {
    pub fn new(class: ErrorClass, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
            field: None,
            line: None,
            column: None,
            phase: None,
            details: Value::Null,
            class,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ErrorClass::Usage, "usage", message)
    }

    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        let mut e = Self::new(ErrorClass::Usage, "schema", message);
        e.field = Some(field.into());
        e
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(ErrorClass::Internal, "internal", message)
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Domain => 1,
            ErrorClass::Usage => 2,
            ErrorClass::Internal => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error objects serialize")
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl From<serde_path_to_error::Error<serde_json::Error>> for ApiError {
    fn from(e: serde_path_to_error::Error<serde_json::Error>) -> Self {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let mut out = ApiError::new(ErrorClass::Usage, "parse", inner.to_string());
        if path != "." {
            out.field = Some(path);
        }
        if inner.line() > 0 {
            out.line = Some(inner.line());
            out.column = Some(inner.column());
        }
        out
    }
}

impl From<GradedError> for ApiError {
    fn from(e: GradedError) -> Self {
        let details = match &e {
            GradedError::InvalidQuiver(v) => json!(v
                .iter()
                .map(|x| json!({"invariant": x.invariant(), "vertices": one_based(&x.vertices()), "message": x.to_string()}))
                .collect::<Vec<_>>()),
            GradedError::GradingInconsistency { from, to, state, .. } => json!({
                "from": from + 1,
                "to": to + 1,
                "state": crate::doc::Document::from_graded(state),
            }),
            GradedError::UnknownTag { vertex } | GradedError::VertexOutOfRange { vertex, .. } => {
                json!({"vertex": vertex + 1})
            }
            _ => Value::Null,
        };
        let code = match &e {
            GradedError::VertexOutOfRange { .. } => "vertex_out_of_range",
            GradedError::InvalidQuiver(_) => "invalid_quiver",
            GradedError::UnknownTag { .. } => "unknown_tag",
            GradedError::TagDegreeConflict { .. } => "tag_degree_conflict",
            GradedError::GradingInconsistency { .. } => "grading_inconsistency",
            GradedError::WrongMoveKind(_) => "wrong_move_kind",
        };
        ApiError::new(ErrorClass::Domain, code, e.to_string()).with_details(details)
    }
}

impl From<RankError> for ApiError {
    fn from(e: RankError) -> Self {
        let details = match &e {
            RankError::Underdetermined { unknowns, free_directions } => json!({
                "unknowns": one_based(unknowns),
                "free_directions": free_directions,
            }),
            RankError::MissingRank(v) | RankError::UntaggedVertex(v) => json!({"vertex": v + 1}),
            RankError::NonIntegral { vertex, .. }
            | RankError::Negative { vertex, .. }
            | RankError::ConflictingTags { vertex, .. } => json!({"vertex": vertex + 1}),
            _ => Value::Null,
        };
        ApiError::new(ErrorClass::Domain, "rank", e.to_string()).with_details(details)
    }
}

impl From<TrackError> for ApiError {
    fn from(e: TrackError) -> Self {
        match e {
            TrackError::Graded(g) => g.into(),
            TrackError::Rank(r) => r.into(),
        }
    }
}

impl From<ExseqError> for ApiError {
    fn from(e: ExseqError) -> Self {
        let code = match &e {
            ExseqError::OutOfRange { .. } | ExseqError::IndexOrder { .. } => "position_out_of_range",
            ExseqError::Undetermined { .. } => "undetermined",
            ExseqError::Unrealizable { .. } => "unrealizable",
            ExseqError::NonTermination { .. } => "non_termination",
            _ => "sequence",
        };
        ApiError::new(ErrorClass::Domain, code, e.to_string())
    }
}

impl From<ReplayError> for ApiError {
    fn from(e: ReplayError) -> Self {
        ApiError::new(ErrorClass::Domain, "replay", e.to_string())
    }
}

impl From<RecoveryError> for ApiError {
    fn from(e: RecoveryError) -> Self {
        let mut out = ApiError::new(ErrorClass::Domain, "recovery", e.failure.to_string());
        out.phase = Some(e.phase.to_string());
        out.details = json!({
            "phase_number": e.phase.number(),
            "moves_applied": e.log.len(),
            "state": e.state.as_deref().map(crate::doc::Document::from_sequence),
        });
        out
    }
}

pub(crate) fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}
