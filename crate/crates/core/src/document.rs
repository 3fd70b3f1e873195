//! JSON instance format.
//!
//! ```json
//! { "n": 2, "a": [[1, 2], [2]], "b": [[1], [2]], "weights": ["7", "1/3"] }
//! ```
//!
//! Adjacency lists use 1-based labels and list loops explicitly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pair::DigraphPair;
use crate::rational::{parse_rational, WeightVector};
use crate::relation::{Relation, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    pub n: usize,
    pub a: Vec<Vec<usize>>,
    pub b: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A validated document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub pair: DigraphPair,
    pub weights: Option<WeightVector>,
    pub labels: Option<Vec<String>>,
}

fn doc_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document {
        location: location.into(),
        message: message.into(),
    }
}

fn relation_from_lists(name: &str, n: usize, lists: &[Vec<usize>]) -> Result<Relation> {
    if lists.len() != n {
        return Err(doc_error(
            name,
            format!("expected {n} adjacency lists, found {}", lists.len()),
        ));
    }
    let mut rows = Vec::with_capacity(n);
    for (i, list) in lists.iter().enumerate() {
        let mut row = VertexSet::empty(n);
        for (j, &label) in list.iter().enumerate() {
            let at = format!("{name}[{i}][{j}]");
            if label == 0 || label > n {
                return Err(doc_error(
                    at,
                    format!("vertex label {label} outside 1..{n}"),
                ));
            }
            if row.contains(label - 1) {
                return Err(doc_error(at, format!("duplicate vertex label {label}")));
            }
            row.insert(label - 1);
        }
        rows.push(row);
    }
    Relation::from_rows(rows)
}

fn lists_from_relation(r: &Relation) -> Vec<Vec<usize>> {
    r.rows().iter().map(VertexSet::labels).collect()
}

impl PairDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            doc_error(
                format!("line {}, column {}", e.line(), e.column()),
                e.to_string(),
            )
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_instance(
        pair: &DigraphPair,
        weights: Option<&WeightVector>,
        labels: Option<&[String]>,
    ) -> Self {
        Self {
            n: pair.n(),
            a: lists_from_relation(pair.a()),
            b: lists_from_relation(pair.b()),
            weights: weights.map(|w| w.values().iter().map(ToString::to_string).collect()),
            labels: labels.map(<[String]>::to_vec),
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let n = self.n;
        let a = relation_from_lists("a", n, &self.a)?;
        let b = relation_from_lists("b", n, &self.b)?;
        let weights = match &self.weights {
            None => None,
            Some(ws) => {
                if ws.len() != n {
                    return Err(doc_error(
                        "weights",
                        format!("expected {n} weights, found {}", ws.len()),
                    ));
                }
                let values = ws
                    .iter()
                    .enumerate()
                    .map(|(i, w)| {
                        parse_rational(w)
                            .map_err(|e| doc_error(format!("weights[{i}]"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(WeightVector::new(values)?)
            }
        };
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return Err(doc_error(
                    "labels",
                    format!("expected {n} labels, found {}", labels.len()),
                ));
            }
        }
        Ok(Instance {
            pair: DigraphPair::new(a, b)?,
            weights,
            labels: self.labels.clone(),
        })
    }
}

/// Parses and validates in one step.
pub fn read_instance(text: &str) -> Result<Instance> {
    PairDocument::parse(text)?.to_instance()
}
