//! Document schemas: UTF-8 JSON with a fixed field layout.
//!
//! A presentation document lists generator names and pair orders (a positive
//! integer or the token `"inf"`; unlisted pairs mean `∞`).  A representation
//! document carries the dimension and one row-major `(n+1)²` matrix per
//! generator, plus optional tolerance overrides.

use std::collections::BTreeMap;

use coxsplit_core::coxeter::{CoxeterOrder, CoxeterSystem, SystemError};
use coxsplit_core::pipeline::{load_representation, PipelineError, Representation};
use coxsplit_core::Tolerances;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    MalformedDocument { line: usize, column: usize, message: String },
    #[error("invalid system: {0}")]
    System(#[from] SystemError),
    #[error("order for ({i}, {j}) must be a positive integer or \"inf\", got {got:?}")]
    BadOrderToken { i: String, j: String, got: String },
    #[error("matrix missing for generator {0:?}")]
    MissingMatrix(String),
    #[error("matrix given for unknown generator {0:?}")]
    UnknownMatrixGenerator(String),
    #[error("invalid representation: {0}")]
    Representation(#[from] PipelineError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl DocError {
    fn from_json(err: serde_json::Error) -> DocError {
        DocError::MalformedDocument {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

/// Order value in a document: a number or the string `"inf"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum OrderValue {
    Finite(u32),
    Token(String),
}

/// One `[name_i, name_j, m]` entry.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OrderEntry(pub String, pub String, pub OrderValue);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub generators: Vec<String>,
    #[serde(default)]
    pub orders: Vec<OrderEntry>,
}

impl SystemDocument {
    pub fn to_system(&self) -> Result<CoxeterSystem, DocError> {
        let mut pairs = Vec::with_capacity(self.orders.len());
        for OrderEntry(a, b, value) in &self.orders {
            let order = match value {
                OrderValue::Finite(m) => CoxeterOrder::Finite(*m),
                OrderValue::Token(t) if t == "inf" => CoxeterOrder::Infinite,
                OrderValue::Token(t) => {
                    return Err(DocError::BadOrderToken {
                        i: a.clone(),
                        j: b.clone(),
                        got: t.clone(),
                    })
                }
            };
            pairs.push((a.as_str(), b.as_str(), order));
        }
        Ok(CoxeterSystem::from_named_pairs(self.generators.clone(), &pairs)?)
    }

    /// Canonical document for a system: finite off-diagonal orders only,
    /// sorted by generator indices.
    pub fn from_system(system: &CoxeterSystem) -> SystemDocument {
        let orders = system
            .finite_pairs()
            .into_iter()
            .map(|(i, j, m)| {
                OrderEntry(
                    system.generators()[i].clone(),
                    system.generators()[j].clone(),
                    OrderValue::Finite(m),
                )
            })
            .collect();
        SystemDocument { generators: system.generators().to_vec(), orders }
    }
}

/// Parses a presentation document into a validated system.
pub fn parse_system(text: &str) -> Result<CoxeterSystem, DocError> {
    let doc: SystemDocument = serde_json::from_str(text).map_err(DocError::from_json)?;
    doc.to_system()
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isom: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fix: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thin: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            point: self.point.unwrap_or(base.point),
            isom: self.isom.unwrap_or(base.isom),
            fix: self.fix.unwrap_or(base.fix),
            thin: self.thin.unwrap_or(base.thin),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RepresentationDocument {
    pub dimension: usize,
    pub matrices: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

impl RepresentationDocument {
    /// Validates the matrices against `system` with `base` tolerances (the
    /// document's overrides take precedence).
    pub fn to_representation(
        &self,
        system: &CoxeterSystem,
        base: Tolerances,
    ) -> Result<Representation, DocError> {
        self.to_representation_with(system, self.tolerances.unwrap_or_default().apply(base))
    }

    /// Validates with exactly the given tolerances, ignoring the document's
    /// own overrides.
    pub fn to_representation_with(
        &self,
        system: &CoxeterSystem,
        tol: Tolerances,
    ) -> Result<Representation, DocError> {
        let mut ordered = Vec::with_capacity(system.rank());
        for name in system.generators() {
            let matrix = self
                .matrices
                .get(name)
                .ok_or_else(|| DocError::MissingMatrix(name.clone()))?;
            ordered.push(matrix.clone());
        }
        for name in self.matrices.keys() {
            if system.generator_index(name).is_none() {
                return Err(DocError::UnknownMatrixGenerator(name.clone()));
            }
        }
        Ok(load_representation(system, self.dimension, &ordered, tol)?)
    }

    pub fn from_matrices(
        system: &CoxeterSystem,
        dimension: usize,
        matrices: &[Vec<f64>],
    ) -> RepresentationDocument {
        let map = system
            .generators()
            .iter()
            .cloned()
            .zip(matrices.iter().cloned())
            .collect();
        RepresentationDocument { dimension, matrices: map, tolerances: None }
    }
}

/// Parses a representation document (schema only; validation against a
/// system happens in [`RepresentationDocument::to_representation`]).
pub fn parse_representation_document(text: &str) -> Result<RepresentationDocument, DocError> {
    serde_json::from_str(text).map_err(DocError::from_json)
}
