//! Exact verification tools for second-neighbourhood inequalities on digraphs
//! and digraph pairs.
//!
//! * [`relation`]: digraphs as boolean relations, composition, neighbourhoods.
//! * [`pair`]: hypothesis checks, weighted inequality reports, `(A ∩ B, A ∪ B)` reduction.
//! * [`blowup`]: weighted-to-unweighted vertex duplication.
//! * [`density`]: losing densities by exact rational simplex.
//! * [`theorem`]: certificates for the union inequality on tournament pairs.
//! * [`search`]: exhaustive and seeded random counterexample search, weight oracle.
//! * [`fixtures`]: the two embedded six-vertex counterexamples.
//! * [`document`]: the JSON pair format.
//!
//! All verdicts use exact rationals.

pub mod blowup;
pub mod density;
pub mod document;
mod error;
pub mod fixtures;
mod lp;
pub mod pair;
pub mod rational;
pub mod relation;
pub mod search;
pub mod theorem;

pub use blowup::{blow_up_oriented, blow_up_pair, BlowupMap};
pub use density::{compute_losing_density, verify_density, Density, DensityCheck};
pub use document::{read_instance, Instance, PairDocument};
pub use error::{Error, Result};
pub use fixtures::{load_fixture, verify_fixture, Fixture, FixtureReport};
pub use pair::{
    check_identity_hypothesis, check_tournament_pair, product_inequality_report, reduce_pair,
    wsnp_report, DigraphPair, InequalityReport, Variant,
};
pub use rational::{Rational, WeightVector};
pub use relation::{Relation, VertexSet};
pub use search::{
    enumerate_pairs, find_violating_weights, random_search, run_search, Hypothesis, SearchConfig,
    SearchMode, SearchReport,
};
pub use theorem::{
    aggregate_sum, density_inequality_check, double_count_check, find_witness,
    partition_for_vertex, TheoremCertificate,
};
