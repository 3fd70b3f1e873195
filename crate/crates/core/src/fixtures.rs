//! The two six-vertex weighted counterexamples to the product-only inequality.
//!
//! Tables are stored with 1-based labels exactly as printed, including the
//! `AB` column, which is recomputed and compared rather than trusted.

use num_traits::One;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::blowup::blow_up_pair;
use crate::error::{Error, Result};
use crate::pair::{check_identity_hypothesis, product_inequality_report, DigraphPair, Variant};
use crate::rational::{Rational, WeightVector};
use crate::relation::{Relation, VertexSet};

struct Table {
    weights: [u64; 6],
    a: [&'static [usize]; 6],
    b: [&'static [usize]; 6],
    ab: [&'static [usize]; 6],
}

const TABLE_1: Table = Table {
    weights: [7, 3, 11, 3, 3, 9],
    a: [
        &[1, 2, 5, 6],
        &[2, 3],
        &[1, 3, 4, 5],
        &[1, 4],
        &[2, 5, 6],
        &[2, 3, 6],
    ],
    b: [
        &[1, 2, 5, 6],
        &[2, 3, 4],
        &[1, 3, 4, 5],
        &[1, 4, 6],
        &[2, 4, 5, 6],
        &[2, 3, 6],
    ],
    ab: [
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 3, 4, 5],
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 4, 5, 6],
        &[2, 3, 4, 5, 6],
        &[1, 2, 3, 4, 5, 6],
    ],
};

const TABLE_2: Table = Table {
    weights: [17, 11, 15, 8, 5, 8],
    a: [
        &[1, 2, 5, 6],
        &[2, 3, 4],
        &[1, 3, 6],
        &[1, 3, 4, 5],
        &[2, 3, 5],
        &[2, 4, 5, 6],
    ],
    b: [
        &[1, 2, 5, 6],
        &[2, 3, 4],
        &[1, 3],
        &[3, 4, 5],
        &[2, 3, 5],
        &[2, 5, 6],
    ],
    ab: [
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 3, 4, 5],
        &[1, 2, 3, 5, 6],
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 3, 4, 5],
        &[2, 3, 4, 5, 6],
    ],
};

/// SHA-256 of the canonical table text; guards against accidental edits.
const CHECKSUMS: [&str; 2] = [
    "279104877bfe499a02489ea812c829fc60a2a9223b4e3a26d286d2263c56c649",
    "838b398a1dcd03a0998263c8fd43f6fbdecf376ba87bf3ac60d8989c62a84988",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inclusion {
    /// `A ⊆ B`.
    AInB,
    /// `B ⊆ A`.
    BInA,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: u8,
    pub pair: DigraphPair,
    pub weights: WeightVector,
    /// The printed `AB` out-sets.
    pub printed_product: Vec<VertexSet>,
    pub inclusion: Inclusion,
}

fn table(id: u8) -> Result<&'static Table> {
    match id {
        1 => Ok(&TABLE_1),
        2 => Ok(&TABLE_2),
        other => Err(Error::UnknownFixture(other)),
    }
}

fn canonical_text(t: &Table) -> String {
    let mut text = String::new();
    for v in 0..6 {
        let join = |xs: &[usize]| {
            xs.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        text.push_str(&format!(
            "{}|{}|{}|{}|{}\n",
            v + 1,
            t.weights[v],
            join(t.a[v]),
            join(t.b[v]),
            join(t.ab[v])
        ));
    }
    text
}

pub fn table_checksum(id: u8) -> Result<String> {
    Ok(hex::encode(Sha256::digest(
        canonical_text(table(id)?).as_bytes(),
    )))
}

fn relation(rows: &[&[usize]; 6]) -> Relation {
    let zero_based: Vec<Vec<usize>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v - 1).collect())
        .collect();
    Relation::from_out_lists(&zero_based).expect("fixture labels are in range")
}

pub fn load_fixture(id: u8) -> Result<Fixture> {
    let t = table(id)?;
    let product = relation(&t.ab);
    Ok(Fixture {
        id,
        pair: DigraphPair::new(relation(&t.a), relation(&t.b))?,
        weights: WeightVector::from_integers(&t.weights),
        printed_product: product.rows().to_vec(),
        inclusion: if id == 1 {
            Inclusion::AInB
        } else {
            Inclusion::BInA
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub id: u8,
    pub checks: Vec<Check>,
    pub blow_up_vertices: usize,
    /// 1-based labels satisfying the union inequality.
    pub union_satisfying: Vec<usize>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn labelled(rows: &[VertexSet]) -> String {
    rows.iter()
        .enumerate()
        .map(|(v, s)| format!("{}:{}", v + 1, s))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Re-derives every claim attached to a fixture.
pub fn verify_fixture(id: u8) -> Result<FixtureReport> {
    let f = load_fixture(id)?;
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    };

    let checksum = table_checksum(id)?;
    check(
        "table checksum",
        checksum == CHECKSUMS[usize::from(id) - 1],
        checksum,
    );

    let p = &f.pair;
    check(
        "identity hypothesis A ∩ Bᵀ = I",
        check_identity_hypothesis(p),
        String::new(),
    );

    let (inner, outer, label) = match f.inclusion {
        Inclusion::AInB => (p.a(), p.b(), "A ⊆ B"),
        Inclusion::BInA => (p.b(), p.a(), "B ⊆ A"),
    };
    check(label, inner.is_subset(outer)?, String::new());

    check(
        "no 2-cycles in A or B",
        p.a().strip_loops().is_oriented() && p.b().strip_loops().is_oriented(),
        String::new(),
    );

    let product = p.product();
    let mismatched: Vec<usize> = (0..6)
        .filter(|&v| product.rows()[v] != f.printed_product[v])
        .map(|v| v + 1)
        .collect();
    check(
        "recomputed AB equals printed AB",
        mismatched.is_empty(),
        if mismatched.is_empty() {
            labelled(product.rows())
        } else {
            format!(
                "mismatch at {mismatched:?}: computed {} printed {}",
                labelled(product.rows()),
                labelled(&f.printed_product)
            )
        },
    );

    let minus_one = -Rational::one();
    let weighted = product_inequality_report(p, &f.weights, Variant::ProductOnly)?;
    let margins = weighted.margins();
    check(
        "product-only inequality fails everywhere with margin -1",
        margins.iter().all(|m| *m == minus_one),
        margins
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );

    let union = product_inequality_report(p, &f.weights, Variant::Union)?;
    let union_satisfying: Vec<usize> = union.satisfying.iter().map(|v| v + 1).collect();
    check(
        "union inequality holds somewhere",
        union.holds_somewhere(),
        format!("{union_satisfying:?}"),
    );

    let (big, _) = blow_up_pair(p, &f.weights)?;
    let expected_size = f.weights.total();
    check(
        "blow-up size equals total weight",
        Rational::from_integer(big.n().into()) == expected_size,
        big.n().to_string(),
    );
    check(
        "blow-up keeps A ∩ Bᵀ = I",
        check_identity_hypothesis(&big),
        String::new(),
    );
    let unit = product_inequality_report(&big, &WeightVector::ones(big.n()), Variant::ProductOnly)?;
    check(
        "unweighted product-only inequality fails at every blow-up vertex by 1",
        unit.records.iter().all(|r| r.margin == minus_one),
        format!("{} satisfying", unit.satisfying.len()),
    );

    Ok(FixtureReport {
        id,
        checks,
        blow_up_vertices: big.n(),
        union_satisfying,
    })
}
