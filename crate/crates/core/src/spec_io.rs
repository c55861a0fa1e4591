//! JSON ingestion for groupoid spec files, algebra elements, and states.
//!
//! Semantic problems are reported with a JSON pointer to the offending
//! entry, so a broken Cayley cell or an asymmetric length value can be
//! located in the document directly.

use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::groupoid::{
    FiniteGroup, GroupAction, GroupoidError, LengthError, LengthFunction,
    TransformationGroupoid,
};
use crate::state::{State, StateError};

#[derive(Debug, Error)]
pub enum SpecIoError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("JSON parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid document at {pointer}: {message}")]
    Invalid { pointer: String, message: String },
}

fn invalid(pointer: impl Into<String>, message: impl ToString) -> SpecIoError {
    SpecIoError::Invalid {
        pointer: pointer.into(),
        message: message.to_string(),
    }
}

/// A parsed and fully validated groupoid spec document.
#[derive(Debug, Clone)]
pub struct GroupoidBundle {
    pub groupoid: Arc<TransformationGroupoid>,
    pub length: LengthFunction,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidDoc {
    group: GroupDoc,
    space: SpaceDoc,
    action: Vec<Vec<usize>>,
    length: LengthDoc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    order: usize,
    cayley: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    identity: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    size: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum LengthDoc {
    Word {
        generators: Vec<usize>,
        weights: Vec<f64>,
    },
    Table {
        values: Vec<Vec<f64>>,
    },
}

fn group_error_pointer(err: &GroupoidError) -> String {
    match err {
        GroupoidError::BadIdentity { left, right, .. } => {
            format!("/group/cayley/{left}/{right}")
        }
        GroupoidError::BadInverse { g, .. } => format!("/group/inverses/{g}"),
        GroupoidError::NonAssociative { a, b, .. } => format!("/group/cayley/{a}/{b}"),
        GroupoidError::NotAnAction { g, x, .. } => format!("/action/{g}/{x}"),
        GroupoidError::BadShape { context, .. } | GroupoidError::IndexOutOfRange { context, .. } => {
            match *context {
                "cayley" => "/group/cayley".to_string(),
                "inverses" => "/group/inverses".to_string(),
                "identity" => "/group/identity".to_string(),
                "action" => "/action".to_string(),
                other => format!("/{other}"),
            }
        }
    }
}

fn length_error_pointer(err: &LengthError, word: bool) -> String {
    if word {
        return match err {
            LengthError::BadWeight { g, .. } | LengthError::AsymmetricWeights { g, .. } => {
                format!("/length/weights/{g}")
            }
            _ => "/length/generators".to_string(),
        };
    }
    match err {
        LengthError::Negative { g, x, .. }
        | LengthError::ZeroSetWrong { g, x, .. }
        | LengthError::NotSymmetric { g, x, .. } => format!("/length/values/{g}/{x}"),
        LengthError::NotSubadditive { g, x, .. } => format!("/length/values/{g}/{x}"),
        _ => "/length/values".to_string(),
    }
}

/// Parses and validates a groupoid spec document from a JSON string.
pub fn parse_groupoid_spec(text: &str) -> Result<GroupoidBundle, SpecIoError> {
    let doc: GroupoidDoc = serde_json::from_str(text)?;
    if doc.group.cayley.len() != doc.group.order {
        return Err(invalid(
            "/group/cayley",
            format!(
                "expected {} rows, got {}",
                doc.group.order,
                doc.group.cayley.len()
            ),
        ));
    }
    let group = FiniteGroup::new(doc.group.cayley, doc.group.identity, doc.group.inverses)
        .map_err(|e| invalid(group_error_pointer(&e), e))?;
    if doc.action.len() != group.order() {
        return Err(invalid(
            "/action",
            format!("expected {} rows, got {}", group.order(), doc.action.len()),
        ));
    }
    for (g, row) in doc.action.iter().enumerate() {
        if row.len() != doc.space.size {
            return Err(invalid(
                format!("/action/{g}"),
                format!("expected {} columns, got {}", doc.space.size, row.len()),
            ));
        }
    }
    if let Some(labels) = &doc.space.labels {
        if labels.len() != doc.space.size {
            return Err(invalid(
                "/space/labels",
                format!("expected {} labels, got {}", doc.space.size, labels.len()),
            ));
        }
    }
    let groupoid = Arc::new(
        TransformationGroupoid::new(group, doc.space.size, GroupAction::new(doc.action))
            .map_err(|e| invalid(group_error_pointer(&e), e))?,
    );
    let length = match doc.length {
        LengthDoc::Word {
            generators,
            weights,
        } => {
            if generators.len() != weights.len() {
                return Err(invalid(
                    "/length/weights",
                    format!(
                        "expected {} weights, got {}",
                        generators.len(),
                        weights.len()
                    ),
                ));
            }
            if let Some(pos) = generators.iter().position(|&g| g >= groupoid.order()) {
                return Err(invalid(
                    format!("/length/generators/{pos}"),
                    format!(
                        "generator {} out of range (order {})",
                        generators[pos],
                        groupoid.order()
                    ),
                ));
            }
            LengthFunction::word_length(&groupoid, &generators, &weights)
                .map_err(|e| invalid(length_error_pointer(&e, true), e))?
        }
        LengthDoc::Table { values } => LengthFunction::validate(&groupoid, values)
            .map_err(|e| invalid(length_error_pointer(&e, false), e))?,
    };
    Ok(GroupoidBundle {
        groupoid,
        length,
        labels: doc.space.labels,
    })
}

pub fn load_groupoid_spec(path: &Path) -> Result<GroupoidBundle, SpecIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_groupoid_spec(&text)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

fn check_table_shape(
    table: &[Vec<f64>],
    pointer: &str,
    rows: usize,
    cols: usize,
) -> Result<(), SpecIoError> {
    if table.len() != rows {
        return Err(invalid(
            pointer,
            format!("expected {rows} rows, got {}", table.len()),
        ));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != cols {
            return Err(invalid(
                format!("{pointer}/{i}"),
                format!("expected {cols} columns, got {}", row.len()),
            ));
        }
    }
    Ok(())
}

/// Parses an algebra element document against a groupoid's shape.
pub fn parse_element(
    text: &str,
    groupoid: &Arc<TransformationGroupoid>,
) -> Result<AlgebraElement, SpecIoError> {
    let doc: ElementDoc = serde_json::from_str(text)?;
    let order = groupoid.order();
    let space = groupoid.space_size();
    check_table_shape(&doc.re, "/re", order, space)?;
    if let Some(im) = &doc.im {
        check_table_shape(im, "/im", order, space)?;
    }
    Ok(AlgebraElement::from_fn(groupoid.clone(), |g, x| {
        let re = doc.re[g][x];
        let im = doc.im.as_ref().map_or(0.0, |im| im[g][x]);
        C64::new(re, im)
    }))
}

pub fn load_element(
    path: &Path,
    groupoid: &Arc<TransformationGroupoid>,
) -> Result<AlgebraElement, SpecIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_element(&text, groupoid)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
enum StateDoc {
    #[serde(rename = "blocks")]
    Blocks(Vec<BlockDoc>),
    #[serde(rename = "vector")]
    Vector(VectorDoc),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    x: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorDoc {
    x: usize,
    psi_re: Vec<f64>,
    #[serde(default)]
    psi_im: Option<Vec<f64>>,
}

fn state_error_pointer(err: &StateError) -> String {
    match err {
        StateError::NotHermitian { index, .. }
        | StateError::NotPositive { index, .. }
        | StateError::ShapeMismatch { index, .. } => format!("/blocks/{index}"),
        StateError::BadTrace { .. } => "/blocks".to_string(),
        StateError::NotUnitVector { .. } => "/vector/psi_re".to_string(),
        StateError::PointOutOfRange { .. } => "/vector/x".to_string(),
        _ => "".to_string(),
    }
}

/// Parses a state document (density blocks or a vector-state shorthand).
pub fn parse_state(
    text: &str,
    groupoid: &Arc<TransformationGroupoid>,
) -> Result<State, SpecIoError> {
    let doc: StateDoc = serde_json::from_str(text)?;
    let order = groupoid.order();
    let space = groupoid.space_size();
    match doc {
        StateDoc::Blocks(block_docs) => {
            let mut blocks = vec![DMatrix::<C64>::zeros(order, order); space];
            let mut seen = vec![false; space];
            for (i, bd) in block_docs.iter().enumerate() {
                if bd.x >= space {
                    return Err(invalid(
                        format!("/blocks/{i}/x"),
                        format!("point {} out of range (space size {space})", bd.x),
                    ));
                }
                if seen[bd.x] {
                    return Err(invalid(
                        format!("/blocks/{i}/x"),
                        format!("duplicate block for point {}", bd.x),
                    ));
                }
                seen[bd.x] = true;
                check_table_shape(&bd.re, &format!("/blocks/{i}/re"), order, order)?;
                if let Some(im) = &bd.im {
                    check_table_shape(im, &format!("/blocks/{i}/im"), order, order)?;
                }
                blocks[bd.x] = DMatrix::from_fn(order, order, |r, c| {
                    C64::new(bd.re[r][c], bd.im.as_ref().map_or(0.0, |im| im[r][c]))
                });
            }
            State::new(groupoid.clone(), blocks)
                .map_err(|e| invalid(state_error_pointer(&e), e))
        }
        StateDoc::Vector(vd) => {
            if let Some(im) = &vd.psi_im {
                if im.len() != vd.psi_re.len() {
                    return Err(invalid(
                        "/vector/psi_im",
                        format!("expected {} entries, got {}", vd.psi_re.len(), im.len()),
                    ));
                }
            }
            if vd.psi_re.len() != order {
                return Err(invalid(
                    "/vector/psi_re",
                    format!("expected {order} entries, got {}", vd.psi_re.len()),
                ));
            }
            let psi: Vec<C64> = vd
                .psi_re
                .iter()
                .enumerate()
                .map(|(i, &re)| C64::new(re, vd.psi_im.as_ref().map_or(0.0, |im| im[i])))
                .collect();
            State::vector_state(groupoid.clone(), vd.x, &psi)
                .map_err(|e| invalid(state_error_pointer(&e), e))
        }
    }
}

pub fn load_state(
    path: &Path,
    groupoid: &Arc<TransformationGroupoid>,
) -> Result<State, SpecIoError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_state(&text, groupoid)
}
