use thiserror::Error;

use crate::change::OpId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid concept id {0:?}: {1}")]
    InvalidConceptId(String, &'static str),
    #[error("unknown concept id {0:?}")]
    UnknownConcept(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineageError {
    #[error("unknown op id {0}")]
    UnknownOp(OpId),
    #[error("complex op {0} has no recorded lineage")]
    MissingLineage(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("duplicate rule id {0:?}")]
    DuplicateId(String),
    #[error("rule {id:?} collides with {other:?} at order {order} in the {phase} phase")]
    OrderCollision { id: String, other: String, order: u32, phase: &'static str },
    #[error("rule {0:?} declares recursion but is not an aggregation rule")]
    RecursionOutsideAggregation(String),
    #[error("invalid rule id {0:?}")]
    InvalidId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("match mapping references unknown concepts: {0}")]
    InvalidMatch(String),
    #[error("rule {0:?} changed the mapping without reducing the number of live operations")]
    NonReducingRule(String),
    #[error("rule {rule:?} is registered for the {found} phase, expected {expected}")]
    WrongPhase { rule: String, expected: &'static str, found: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MigrationError {
    #[error("mapping inconsistent with version: {0}")]
    Inconsistent(String),
    #[error("migration requires a basic diff, found complex op {0}")]
    NotBasic(String),
    #[error("migrated ontology is invalid: {0}")]
    InvalidResult(String),
    #[error(transparent)]
    Lineage(#[from] LineageError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Failure reading one of the line-oriented text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid ontology: {0}")]
    Invalid(String),
    #[error("inconsistent diff: {0}")]
    Inconsistent(String),
}

impl ParseError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { line, message: message.into() }
    }

    /// 1-based line number, when the error is tied to one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } => Some(*line),
            ParseError::Invalid(_) | ParseError::Inconsistent(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown old id {id:?}")]
    UnknownOld { line: usize, id: String },
    #[error("line {line}: unknown new id {id:?}")]
    UnknownNew { line: usize, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("edit step {step} not applicable: {message}")]
    Inapplicable { step: usize, message: String },
}
