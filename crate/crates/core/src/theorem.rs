//! Certificates for the union inequality on tournament pairs.
//!
//! For a pair with `A ∩ Bᵀ = I`, `A ∪ Bᵀ = V × V` and `A ⊆ B`, let
//! `C = AB ∪ BA`, `G = A ∖ I` and `l` a losing density of `G`. For each vertex
//! `v` the sets
//!
//! * `S₁ = Aᵀ(v) ∖ {v}`
//! * `S₂ = Cᵀ(v) ∖ Bᵀ(v)`
//! * `Bonly = Bᵀ(v) ∖ Aᵀ(v)`
//! * `Q = (V ∖ Cᵀ(v)) ∪ {v}`
//!
//! partition `V` and satisfy `l(S₂) ≥ l(S₁)`. Summing against `ω` gives
//! `Σ_v l(v)·(ω(C(v) ∖ B(v)) − ω(A(v) ∖ {v})) ≥ 0`, so some supported vertex
//! has a non-negative term, and that term is exactly its union-inequality margin.
//! Every one of these steps is recomputed and checked here.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::density::{compute_losing_density, verify_density, Density};
use crate::error::{check_dims, Error, Result};
use crate::pair::{
    check_identity_hypothesis, check_tournament_pair, product_inequality_report, reduce_pair,
    serialize_label, DigraphPair, Variant,
};
use crate::rational::{serialize_rational, Rational, WeightVector};
use crate::relation::{Relation, VertexSet};

/// An instance on which a certificate could not be produced.
#[derive(Clone, Debug)]
pub struct Violation {
    pub pair: DigraphPair,
    pub weights: WeightVector,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |r: &Relation| -> Vec<Vec<usize>> {
            r.out_lists()
                .into_iter()
                .map(|l| l.into_iter().map(|v| v + 1).collect())
                .collect()
        };
        write!(
            f,
            "{} (n = {}, A = {:?}, B = {:?}, weights = {})",
            self.reason,
            self.pair.n(),
            label(self.pair.a()),
            label(self.pair.b()),
            self.weights
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    pub s1: VertexSet,
    pub s2: VertexSet,
    pub b_only: VertexSet,
    pub q: VertexSet,
}

impl VertexPartition {
    /// Pairwise disjoint, covering, with `v ∈ Q`.
    pub fn is_valid_for(&self, v: usize) -> bool {
        let parts = [&self.s1, &self.s2, &self.b_only, &self.q];
        let n = self.q.universe();
        let disjoint = (0..4).all(|i| ((i + 1)..4).all(|j| parts[i].is_disjoint(parts[j])));
        let mut cover = VertexSet::empty(n);
        for p in parts {
            cover.union_with(p);
        }
        disjoint && cover == VertexSet::full(n) && self.q.contains(v)
    }
}

/// Transposes and `C` for a reduced pair, shared across vertices.
struct Frame<'a> {
    pair: &'a DigraphPair,
    c: Relation,
    a_t: Relation,
    b_t: Relation,
    c_t: Relation,
}

impl<'a> Frame<'a> {
    fn new(pair: &'a DigraphPair) -> Self {
        let c = pair.union_product();
        let c_t = c.transpose();
        Self {
            a_t: pair.a().transpose(),
            b_t: pair.b().transpose(),
            c,
            c_t,
            pair,
        }
    }

    fn partition(&self, v: usize) -> VertexPartition {
        let a_in = &self.a_t.rows()[v];
        let b_in = &self.b_t.rows()[v];
        let c_in = &self.c_t.rows()[v];
        let mut s1 = a_in.clone();
        s1.remove(v);
        let mut q = c_in.complement();
        q.insert(v);
        VertexPartition {
            s1,
            s2: c_in.difference(b_in),
            b_only: b_in.difference(a_in),
            q,
        }
    }

    /// `ω(C(v) ∖ B(v)) − ω(A(v) ∖ {v})`.
    fn term(&self, w: &WeightVector, v: usize) -> Rational {
        let gain = self.c.rows()[v].difference(&self.pair.b().rows()[v]);
        let mut lost = self.pair.a().rows()[v].clone();
        lost.remove(v);
        w.weight_of(&gain).expect("dims") - w.weight_of(&lost).expect("dims")
    }
}

fn require_reduced(p: &DigraphPair) -> Result<()> {
    if !check_identity_hypothesis(p) {
        return Err(Error::Precondition("A ∩ Bᵀ = I required".into()));
    }
    if !p.a().is_subset(p.b())? {
        return Err(Error::Precondition(
            "A ⊆ B required; apply reduce_pair first".into(),
        ));
    }
    Ok(())
}

fn require_tournament_reduced(p: &DigraphPair) -> Result<()> {
    require_reduced(p)?;
    if !check_tournament_pair(p) {
        return Err(Error::Precondition("A ∪ Bᵀ = V × V required".into()));
    }
    Ok(())
}

fn require_density(p: &DigraphPair, l: &Density) -> Result<Relation> {
    let g = p.a().strip_loops();
    let check = verify_density(&g, l);
    if !check.is_valid() {
        return Err(Error::Precondition(format!(
            "not a losing density of A ∖ I: {:?}",
            check.violations
        )));
    }
    Ok(g)
}

fn mass(l: &[Rational], s: &VertexSet) -> Rational {
    s.iter().fold(Rational::zero(), |acc, u| acc + &l[u])
}

/// `S₁`, `S₂`, `Bonly` and `Q` at `v`. Requires `A ∩ Bᵀ = I` and `A ⊆ B`.
pub fn partition_for_vertex(p: &DigraphPair, v: usize) -> Result<VertexPartition> {
    require_reduced(p)?;
    if v >= p.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: p.n(),
        });
    }
    Ok(Frame::new(p).partition(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityInequality {
    #[serde(serialize_with = "serialize_label")]
    pub vertex: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub l_s1: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub l_s2: Rational,
    pub holds: bool,
}

/// `l(S₂) ≥ l(S₁)` at every vertex of a reduced tournament pair.
pub fn density_inequality_check(p: &DigraphPair, l: &Density) -> Result<Vec<DensityInequality>> {
    require_tournament_reduced(p)?;
    require_density(p, l)?;
    let frame = Frame::new(p);
    Ok((0..p.n())
        .map(|v| {
            let part = frame.partition(v);
            let l_s1 = mass(l.values(), &part.s1);
            let l_s2 = mass(l.values(), &part.s2);
            let holds = l_s2 >= l_s1;
            DensityInequality {
                vertex: v,
                l_s1,
                l_s2,
                holds,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AggregateSum {
    /// `Σ_v l(v)·(ω(C(v) ∖ B(v)) − ω(A(v) ∖ {v}))`.
    #[serde(serialize_with = "serialize_rational")]
    pub direct: Rational,
    /// `Σ_v ω(v)·(l(Cᵀ(v) ∖ Bᵀ(v)) − l(Aᵀ(v) ∖ {v}))`.
    #[serde(serialize_with = "serialize_rational")]
    pub transposed: Rational,
}

fn aggregate_in(frame: &Frame<'_>, w: &WeightVector, l: &Density) -> Result<AggregateSum> {
    let n = frame.pair.n();
    let direct = (0..n).fold(Rational::zero(), |acc, v| {
        acc + &l.values()[v] * frame.term(w, v)
    });
    let transposed = (0..n).fold(Rational::zero(), |acc, v| {
        let part = frame.partition(v);
        acc + &w[v] * (mass(l.values(), &part.s2) - mass(l.values(), &part.s1))
    });
    if direct != transposed {
        return Err(Error::Internal(format!(
            "aggregate sum {direct} differs from transposed form {transposed}"
        )));
    }
    Ok(AggregateSum { direct, transposed })
}

/// Both forms of the weighted aggregate; errors if they differ.
pub fn aggregate_sum(p: &DigraphPair, w: &WeightVector, l: &Density) -> Result<AggregateSum> {
    require_tournament_reduced(p)?;
    check_dims(p.n(), w.len())?;
    require_density(p, l)?;
    aggregate_in(&Frame::new(p), w, l)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleCount {
    /// `Σ_{v∈Q} l(v)·l(N_Q⁻(v))`.
    #[serde(serialize_with = "serialize_rational")]
    pub incoming: Rational,
    /// `Σ_{v∈Q} l(v)·l(N_Q⁺(v))`.
    #[serde(serialize_with = "serialize_rational")]
    pub outgoing: Rational,
}

impl DoubleCount {
    pub fn balanced(&self) -> bool {
        self.incoming == self.outgoing
    }
}

/// Both sides of the double-counting identity on the subgraph of `g` induced by `q`.
pub fn double_count_check(g: &Relation, q: &VertexSet, l: &[Rational]) -> Result<DoubleCount> {
    check_dims(g.n(), q.universe())?;
    check_dims(g.n(), l.len())?;
    let mut incoming = Rational::zero();
    let mut outgoing = Rational::zero();
    for v in q.iter() {
        let out_q = g.rows()[v].intersection(q);
        let in_q = g.in_set(v)?.intersection(q);
        incoming += &l[v] * mass(l, &in_q);
        outgoing += &l[v] * mass(l, &out_q);
    }
    Ok(DoubleCount { incoming, outgoing })
}

/// The vertex `u ∈ Q` used when `l(Q) > 0`, with the two containments
/// `N_G⁻(u) ⊇ N_Q⁻(u) ∪ S₁` and `N_G⁺(u) ⊆ N_Q⁺(u) ∪ S₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PivotCheck {
    #[serde(serialize_with = "serialize_label")]
    pub u: usize,
    pub in_contains: bool,
    pub out_contained: bool,
}

fn pivot_in(g: &Relation, part: &VertexPartition, l: &[Rational]) -> Option<PivotCheck> {
    let q = &part.q;
    q.iter().find_map(|u| {
        if !l[u].is_positive() {
            return None;
        }
        let g_out = &g.rows()[u];
        let g_in = g.in_set(u).expect("in range");
        let out_q = g_out.intersection(q);
        let in_q = g_in.intersection(q);
        if mass(l, &in_q) < mass(l, &out_q) {
            return None;
        }
        Some(PivotCheck {
            u,
            in_contains: in_q.union(&part.s1).is_subset(&g_in),
            out_contained: g_out.is_subset(&out_q.union(&part.s2)),
        })
    })
}

/// The proof's pivot vertex at `v`, or `None` when `l(Q) = 0`.
/// `Some(Err)` signals that no eligible `u` exists although `l(Q) > 0`.
pub fn proof_pivot(p: &DigraphPair, l: &Density, v: usize) -> Result<Option<PivotCheck>> {
    require_tournament_reduced(p)?;
    let g = require_density(p, l)?;
    if v >= p.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: p.n(),
        });
    }
    let part = Frame::new(p).partition(v);
    if mass(l.values(), &part.q).is_zero() {
        return Ok(None);
    }
    pivot_in(&g, &part, l.values())
        .map(Some)
        .ok_or_else(|| Error::Internal(format!("no pivot vertex for v = {}", v + 1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCertificate {
    #[serde(serialize_with = "serialize_label")]
    pub vertex: usize,
    pub partition: VertexPartition,
    #[serde(serialize_with = "serialize_rational")]
    pub l_s1: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub l_s2: Rational,
    /// `ω(C(v) ∖ B(v)) − ω(A(v) ∖ {v})` on the reduced pair.
    #[serde(serialize_with = "serialize_rational")]
    pub term: Rational,
    pub pivot: Option<PivotCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCertificate {
    /// Whether `(A ∩ B, A ∪ B)` differed from the input pair.
    pub reduced: bool,
    pub density: Density,
    pub vertices: Vec<VertexCertificate>,
    pub aggregate: AggregateSum,
    /// Smallest supported vertex with a non-negative term.
    #[serde(serialize_with = "serialize_label")]
    pub density_witness: usize,
    /// Smallest vertex satisfying the union inequality on the input pair.
    #[serde(serialize_with = "serialize_label")]
    pub witness: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub witness_lhs: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub witness_rhs: Rational,
}

/// Finds a vertex satisfying `ω((AB ∪ BA)(v)) ≥ ω(A(v)) + ω(B(v)) − ω(v)` on a
/// tournament pair, together with every intermediate quantity of the argument.
pub fn find_witness(p: &DigraphPair, w: &WeightVector) -> Result<TheoremCertificate> {
    check_dims(p.n(), w.len())?;
    if p.n() == 0 {
        return Err(Error::Precondition("empty vertex set".into()));
    }
    if !check_tournament_pair(p) {
        return Err(Error::Precondition(
            "find_witness requires A ∩ Bᵀ = I and A ∪ Bᵀ = V × V".into(),
        ));
    }
    let violated = |reason: String| {
        Error::TheoremViolated(Box::new(Violation {
            pair: p.clone(),
            weights: w.clone(),
            reason,
        }))
    };

    let reduced = reduce_pair(p)?;
    let g = reduced.a().strip_loops();
    let density = compute_losing_density(&g)?;
    let l = density.values();
    let frame = Frame::new(&reduced);

    let mut vertices = Vec::with_capacity(p.n());
    for v in 0..p.n() {
        let partition = frame.partition(v);
        if !partition.is_valid_for(v) || !frame.b_t.rows()[v].is_subset(&frame.c_t.rows()[v]) {
            return Err(violated(format!("partition invalid at vertex {}", v + 1)));
        }
        let l_s1 = mass(l, &partition.s1);
        let l_s2 = mass(l, &partition.s2);
        if l_s2 < l_s1 {
            return Err(violated(format!(
                "l(S2) = {l_s2} < l(S1) = {l_s1} at vertex {}",
                v + 1
            )));
        }
        let pivot = if mass(l, &partition.q).is_positive() {
            match pivot_in(&g, &partition, l) {
                Some(pc) if pc.in_contains && pc.out_contained => Some(pc),
                Some(pc) => {
                    return Err(violated(format!(
                        "containment fails at pivot {} for vertex {}",
                        pc.u + 1,
                        v + 1
                    )))
                }
                None => return Err(violated(format!("no pivot in Q for vertex {}", v + 1))),
            }
        } else {
            None
        };
        let term = frame.term(w, v);
        vertices.push(VertexCertificate {
            vertex: v,
            partition,
            l_s1,
            l_s2,
            term,
            pivot,
        });
    }

    let aggregate = aggregate_in(&frame, w, &density)?;
    if aggregate.direct.is_negative() {
        return Err(violated(format!(
            "aggregate sum {} is negative",
            aggregate.direct
        )));
    }
    let density_witness = density
        .support()
        .find(|&v| !vertices[v].term.is_negative())
        .ok_or_else(|| violated("no supported vertex has a non-negative term".into()))?;

    let original = product_inequality_report(p, w, Variant::Union)?;
    if !original.records[density_witness].satisfied {
        return Err(violated(format!(
            "vertex {} does not transfer to the input pair",
            density_witness + 1
        )));
    }
    let witness = original.satisfying[0];
    let record = &original.records[witness];

    Ok(TheoremCertificate {
        reduced: &reduced != p,
        density,
        vertices,
        aggregate,
        density_witness,
        witness,
        witness_lhs: record.lhs.clone(),
        witness_rhs: record.rhs.clone(),
    })
}
