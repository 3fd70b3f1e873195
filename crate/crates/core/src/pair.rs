//! Hypothesis checks and the weighted inequalities on digraph pairs.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{check_dims, Error, Result};
use crate::rational::{serialize_rational, Rational, WeightVector};
use crate::relation::Relation;

/// Two relations on a shared vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigraphPair {
    a: Relation,
    b: Relation,
}

impl DigraphPair {
    pub fn new(a: Relation, b: Relation) -> Result<Self> {
        check_dims(a.n(), b.n())?;
        Ok(Self { a, b })
    }

    /// `A = B = edges(g) ∪ I`.
    pub fn diagonal(g: &Relation) -> Self {
        let a = g.union(&Relation::identity(g.n())).expect("same size");
        Self { b: a.clone(), a }
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn a(&self) -> &Relation {
        &self.a
    }

    pub fn b(&self) -> &Relation {
        &self.b
    }

    pub fn into_parts(self) -> (Relation, Relation) {
        (self.a, self.b)
    }

    /// `AB`.
    pub fn product(&self) -> Relation {
        self.a.compose(&self.b).expect("same size")
    }

    /// `AB ∪ BA`.
    pub fn union_product(&self) -> Relation {
        let ba = self.b.compose(&self.a).expect("same size");
        self.product().union(&ba).expect("same size")
    }

    pub fn combined(&self, variant: Variant) -> Relation {
        match variant {
            Variant::ProductOnly => self.product(),
            Variant::Union => self.union_product(),
        }
    }
}

/// Which combined relation `C` is tested against `ω(A(v)) + ω(B(v)) − ω(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `C = AB`.
    ProductOnly,
    /// `C = AB ∪ BA`.
    Union,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::ProductOnly => "product-only",
            Variant::Union => "union",
        })
    }
}

/// Which inequality an [`InequalityReport`] records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityKind {
    ProductOnly,
    Union,
    /// `ω(N⁺⁺(v)) ≥ ω(N⁺(v))` on an oriented graph.
    SecondNeighbourhood,
}

impl From<Variant> for InequalityKind {
    fn from(v: Variant) -> Self {
        match v {
            Variant::ProductOnly => InequalityKind::ProductOnly,
            Variant::Union => InequalityKind::Union,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    /// All weights equal to one.
    Unit,
    Weighted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexRecord {
    /// 1-based label in serialized output, 0-based id in memory.
    #[serde(serialize_with = "serialize_label")]
    pub vertex: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub margin: Rational,
    pub satisfied: bool,
}

pub(crate) fn serialize_label<S: serde::Serializer>(
    v: &usize,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*v as u64 + 1)
}

fn serialize_labels<S: serde::Serializer>(
    vs: &[usize],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(vs.iter().map(|v| v + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub weighting: Weighting,
    pub records: Vec<VertexRecord>,
    #[serde(serialize_with = "serialize_labels")]
    pub satisfying: Vec<usize>,
}

impl InequalityReport {
    fn from_sides(
        kind: InequalityKind,
        w: &WeightVector,
        sides: Vec<(Rational, Rational)>,
    ) -> Self {
        let records: Vec<VertexRecord> = sides
            .into_iter()
            .enumerate()
            .map(|(vertex, (lhs, rhs))| {
                let margin = &lhs - &rhs;
                let satisfied = !margin.is_negative();
                VertexRecord {
                    vertex,
                    lhs,
                    rhs,
                    margin,
                    satisfied,
                }
            })
            .collect();
        let satisfying = records
            .iter()
            .filter(|r| r.satisfied)
            .map(|r| r.vertex)
            .collect();
        let weighting = if w.is_all_ones() {
            Weighting::Unit
        } else {
            Weighting::Weighted
        };
        Self {
            kind,
            weighting,
            records,
            satisfying,
        }
    }

    pub fn holds_somewhere(&self) -> bool {
        !self.satisfying.is_empty()
    }

    pub fn margins(&self) -> Vec<Rational> {
        self.records.iter().map(|r| r.margin.clone()).collect()
    }
}

/// `A ∩ Bᵀ = I`.
pub fn check_identity_hypothesis(p: &DigraphPair) -> bool {
    let meet = p.a.intersection(&p.b.transpose()).expect("same size");
    meet == Relation::identity(p.n())
}

/// `A ∩ Bᵀ = I` and `A ∪ Bᵀ = V × V`.
pub fn check_tournament_pair(p: &DigraphPair) -> bool {
    check_identity_hypothesis(p)
        && p.a.union(&p.b.transpose()).expect("same size") == Relation::complete(p.n())
}

/// Ordered pairs `(u, v)` lying in neither `A` nor `Bᵀ`.
pub fn uncovered_pairs(p: &DigraphPair) -> Vec<(usize, usize)> {
    let cover = p.a.union(&p.b.transpose()).expect("same size");
    let n = p.n();
    (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !cover.has_edge(u, v))
        .collect()
}

/// Replaces `(A, B)` with `(A ∩ B, A ∪ B)`.
pub fn reduce_pair(p: &DigraphPair) -> Result<DigraphPair> {
    if !check_identity_hypothesis(p) {
        return Err(Error::Precondition(
            "reduce_pair requires A ∩ Bᵀ = I".into(),
        ));
    }
    DigraphPair::new(p.a.intersection(&p.b)?, p.a.union(&p.b)?)
}

/// Per-vertex `ω(C(v))` against `ω(A(v)) + ω(B(v)) − ω(v)`.
pub fn product_inequality_report(
    p: &DigraphPair,
    w: &WeightVector,
    variant: Variant,
) -> Result<InequalityReport> {
    check_dims(p.n(), w.len())?;
    let c = p.combined(variant);
    let sides = (0..p.n())
        .map(|v| {
            let lhs = w.weight_of(c.out_set(v)?)?;
            let rhs = w.weight_of(p.a.out_set(v)?)? + w.weight_of(p.b.out_set(v)?)? - &w[v];
            Ok((lhs, rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalityReport::from_sides(variant.into(), w, sides))
}

/// Per-vertex `ω(N⁺⁺(v))` against `ω(N⁺(v))` on an oriented graph.
pub fn wsnp_report(g: &Relation, w: &WeightVector) -> Result<InequalityReport> {
    check_dims(g.n(), w.len())?;
    if !g.is_oriented() {
        return Err(Error::Precondition(
            "second neighbourhood report requires an oriented graph".into(),
        ));
    }
    let sides = (0..g.n())
        .map(|v| {
            let nb = g.neighbourhoods(v)?;
            Ok((w.weight_of(&nb.out2)?, w.weight_of(&nb.out1)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InequalityReport::from_sides(
        InequalityKind::SecondNeighbourhood,
        w,
        sides,
    ))
}

/// Unit-weight inequality at `v` for a precomputed `C`.
pub(crate) fn satisfies_unit(p: &DigraphPair, c: &Relation, v: usize) -> bool {
    let lhs = c.rows()[v].len() + 1;
    let rhs = p.a.rows()[v].len() + p.b.rows()[v].len();
    lhs >= rhs
}

/// True when every vertex has margin exactly `value`.
pub fn all_margins_equal(report: &InequalityReport, value: &Rational) -> bool {
    report.records.iter().all(|r| &r.margin == value)
}
