//! Exhaustive and randomized counterexample search over digraph pairs.
//!
//! Under `A ∩ Bᵀ = I` every vertex carries a loop in both relations, and each
//! unordered pair `{u, v}` (with `u < v`) independently takes one of a few local
//! configurations of the four bits `(a_uv, a_vu, b_uv, b_vu)`: 9 in general, 6 when
//! `A ⊆ B` is imposed, 4 for tournament pairs. Instances are identified by their
//! configuration codes, listed over pairs in lexicographic order.

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::blowup::blow_up_pair;
use crate::document::PairDocument;
use crate::error::{check_dims, Error, Result};
use crate::lp::{self, Constraint, Outcome, Problem, Sense};
use crate::pair::{
    check_identity_hypothesis, product_inequality_report, satisfies_unit, DigraphPair, Variant,
};
use crate::rational::{serialize_rational, Rational, WeightVector};
use crate::relation::Relation;

pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 4;
/// Largest `n` accepted even with an explicit override.
pub const MAX_EXHAUSTIVE_BOUND: usize = 5;
/// Blow-ups of oracle weights are re-verified only up to this many vertices.
pub const BLOWUP_VERIFY_LIMIT: usize = 512;
const RANDOM_BLOCK: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// `A ∩ Bᵀ = I`.
    IdentityOnly,
    /// `A ∩ Bᵀ = I` and `A ⊆ B`.
    IdentitySubset,
    /// `A ∩ Bᵀ = I` and `A ∪ Bᵀ = V × V`.
    TournamentPair,
}

/// Local configuration bits for an unordered pair `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Local {
    a_uv: bool,
    a_vu: bool,
    b_uv: bool,
    b_vu: bool,
}

fn admissible(h: Hypothesis, c: Local) -> bool {
    let identity = !(c.a_uv && c.b_vu) && !(c.a_vu && c.b_uv);
    match h {
        Hypothesis::IdentityOnly => identity,
        Hypothesis::IdentitySubset => identity && (!c.a_uv || c.b_uv) && (!c.a_vu || c.b_vu),
        Hypothesis::TournamentPair => identity && (c.a_uv || c.b_vu) && (c.a_vu || c.b_uv),
    }
}

fn local_configurations(h: Hypothesis) -> Vec<Local> {
    (0u8..16)
        .map(|bits| Local {
            a_uv: bits & 1 != 0,
            a_vu: bits & 2 != 0,
            b_uv: bits & 4 != 0,
            b_vu: bits & 8 != 0,
        })
        .filter(|&c| admissible(h, c))
        .collect()
}

/// Number of admissible local configurations per unordered pair.
pub fn configurations_per_pair(h: Hypothesis) -> usize {
    local_configurations(h).len()
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Closed-form count of admissible pairs on `n` vertices.
pub fn expected_pair_count(n: usize, h: Hypothesis) -> u128 {
    (configurations_per_pair(h) as u128).pow(pair_count(n) as u32)
}

fn build_pair(n: usize, configs: &[Local], codes: &[u8]) -> DigraphPair {
    let mut a = Relation::identity(n);
    let mut b = Relation::identity(n);
    let mut k = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            let c = configs[codes[k] as usize];
            k += 1;
            if c.a_uv {
                a.add_edge(u, v);
            }
            if c.a_vu {
                a.add_edge(v, u);
            }
            if c.b_uv {
                b.add_edge(u, v);
            }
            if c.b_vu {
                b.add_edge(v, u);
            }
        }
    }
    DigraphPair::new(a, b).expect("same size")
}

/// Advances a mixed-radix counter over the low `digits.len()` positions; false on wrap.
fn advance(digits: &mut [u8], radix: u8) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    let bound = bound.min(MAX_EXHAUSTIVE_BOUND);
    if n > bound {
        Err(Error::BoundExceeded { n, bound })
    } else {
        Ok(())
    }
}

/// Visits every admissible pair on `n ≤ DEFAULT_EXHAUSTIVE_BOUND` vertices once.
pub fn enumerate_pairs(n: usize, h: Hypothesis, visitor: impl FnMut(&DigraphPair)) -> Result<u64> {
    enumerate_pairs_bounded(n, h, DEFAULT_EXHAUSTIVE_BOUND, visitor)
}

pub fn enumerate_pairs_bounded(
    n: usize,
    h: Hypothesis,
    bound: usize,
    mut visitor: impl FnMut(&DigraphPair),
) -> Result<u64> {
    check_bound(n, bound)?;
    let configs = local_configurations(h);
    let mut codes = vec![0u8; pair_count(n)];
    let mut count = 0;
    loop {
        visitor(&build_pair(n, &configs, &codes));
        count += 1;
        if !advance(&mut codes, configs.len() as u8) {
            return Ok(count);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolatingWeights {
    pub weights: WeightVector,
    /// Optimal `t*`: every vertex misses the inequality by at least this much.
    #[serde(serialize_with = "serialize_rational")]
    pub min_violation: Rational,
}

/// Maximizes `t` subject to `ω ≥ 0`, `Σω = 1` and, at every `v`,
/// `ω(A(v)) + ω(B(v)) − ω(v) − ω(C(v)) ≥ t`. Returns the optimizer iff `t* > 0`.
pub fn find_violating_weights(
    p: &DigraphPair,
    variant: Variant,
) -> Result<Option<ViolatingWeights>> {
    if !check_identity_hypothesis(p) {
        return Err(Error::Precondition(
            "weight oracle requires A ∩ Bᵀ = I".into(),
        ));
    }
    let n = p.n();
    if n == 0 {
        return Ok(None);
    }
    let c = p.combined(variant);
    // Variables: ω_0..ω_{n-1}, t⁺, t⁻.
    let nv = n + 2;
    let mut constraints = Vec::with_capacity(n + 1);
    let mut simplex_row = vec![Rational::one(); n];
    simplex_row.extend([Rational::zero(), Rational::zero()]);
    constraints.push(Constraint {
        coeffs: simplex_row,
        sense: Sense::Eq,
        rhs: Rational::one(),
    });
    for v in 0..n {
        let mut coeffs = vec![Rational::zero(); nv];
        for u in p.a().rows()[v].iter() {
            coeffs[u] += Rational::one();
        }
        for u in p.b().rows()[v].iter() {
            coeffs[u] += Rational::one();
        }
        coeffs[v] -= Rational::one();
        for u in c.rows()[v].iter() {
            coeffs[u] -= Rational::one();
        }
        coeffs[n] = -Rational::one();
        coeffs[n + 1] = Rational::one();
        constraints.push(Constraint {
            coeffs,
            sense: Sense::Ge,
            rhs: Rational::zero(),
        });
    }
    let mut objective = vec![Rational::zero(); nv];
    objective[n] = Rational::one();
    objective[n + 1] = -Rational::one();
    match lp::solve(&Problem {
        num_vars: nv,
        objective,
        constraints,
    }) {
        Outcome::Optimal { x, value } => {
            if !value.is_positive() {
                return Ok(None);
            }
            let weights = WeightVector::new(x[..n].to_vec())?;
            Ok(Some(ViolatingWeights {
                weights,
                min_violation: value,
            }))
        }
        Outcome::Infeasible | Outcome::Unbounded => Err(Error::Internal(
            "weight oracle LP must be feasible and bounded".into(),
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, iterations: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub n: usize,
    pub hypothesis: Hypothesis,
    pub variant: Variant,
    pub mode: SearchMode,
    /// Run the weight oracle on instances that pass the unweighted check.
    pub oracle: bool,
    /// Worker threads; results do not depend on it.
    pub parallelism: usize,
    pub exhaustive_bound: usize,
}

impl SearchConfig {
    pub fn exhaustive(n: usize, hypothesis: Hypothesis, variant: Variant) -> Self {
        Self {
            n,
            hypothesis,
            variant,
            mode: SearchMode::Exhaustive,
            oracle: false,
            parallelism: 1,
            exhaustive_bound: DEFAULT_EXHAUSTIVE_BOUND,
        }
    }

    pub fn random(
        n: usize,
        hypothesis: Hypothesis,
        variant: Variant,
        seed: u64,
        iterations: u64,
    ) -> Self {
        Self {
            mode: SearchMode::Random { seed, iterations },
            ..Self::exhaustive(n, hypothesis, variant)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleKind {
    /// Fails the all-ones inequality at every vertex.
    Unweighted,
    /// Some weight function makes every vertex fail.
    Weighted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Position in the examined sequence.
    pub index: u64,
    pub kind: CounterexampleKind,
    pub instance: PairDocument,
    #[serde(serialize_with = "serialize_rational")]
    pub min_violation: Rational,
    /// Primitive integer weights when the instance is weighted.
    pub integer_weights: Option<Vec<u64>>,
    /// Outcome of re-checking the unweighted blow-up, when it was small enough.
    pub blowup_verified: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub examined: u64,
    pub counterexamples: Vec<Counterexample>,
    pub wall_time_ms: u128,
    /// SHA-256 over the examined instance codes, independent of parallelism.
    pub fingerprint: String,
}

impl SearchReport {
    pub fn found(&self) -> bool {
        !self.counterexamples.is_empty()
    }
}

struct Chunk {
    examined: u64,
    digest: [u8; 32],
    found: Vec<Counterexample>,
}

fn examine(
    p: &DigraphPair,
    index: u64,
    variant: Variant,
    oracle: bool,
) -> Result<Option<Counterexample>> {
    let c = p.combined(variant);
    let unit_holds = (0..p.n()).any(|v| satisfies_unit(p, &c, v));
    if !unit_holds {
        let w = WeightVector::ones(p.n());
        let report = product_inequality_report(p, &w, variant)?;
        if report.holds_somewhere() {
            return Err(Error::Internal(format!(
                "instance {index} failed to re-verify"
            )));
        }
        let min_violation = report
            .records
            .iter()
            .map(|r| -&r.margin)
            .min()
            .unwrap_or_else(Rational::zero);
        return Ok(Some(Counterexample {
            index,
            kind: CounterexampleKind::Unweighted,
            instance: PairDocument::from_instance(p, None, None),
            min_violation,
            integer_weights: None,
            blowup_verified: None,
        }));
    }
    if !oracle {
        return Ok(None);
    }
    let Some(found) = find_violating_weights(p, variant)? else {
        return Ok(None);
    };
    let report = product_inequality_report(p, &found.weights, variant)?;
    if report.holds_somewhere() {
        return Err(Error::Internal(format!(
            "oracle weights for instance {index} failed to re-verify"
        )));
    }
    let integer_weights = found.weights.to_primitive_integers();
    let blowup_verified = integer_weights.as_ref().and_then(|ints| {
        let total: u64 = ints.iter().sum();
        if ints.contains(&0) || total as usize > BLOWUP_VERIFY_LIMIT {
            return None;
        }
        let (big, _) = blow_up_pair(p, &WeightVector::from_integers(ints)).ok()?;
        let unit = product_inequality_report(&big, &WeightVector::ones(big.n()), variant).ok()?;
        Some(!unit.holds_somewhere())
    });
    Ok(Some(Counterexample {
        index,
        kind: CounterexampleKind::Weighted,
        instance: PairDocument::from_instance(p, Some(&found.weights), None),
        min_violation: found.min_violation,
        integer_weights,
        blowup_verified,
    }))
}

fn run_chunks<F>(parallelism: usize, chunks: u64, work: F) -> Result<Vec<Chunk>>
where
    F: Fn(u64) -> Result<Chunk> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| (0..chunks).into_par_iter().map(&work).collect())
}

fn header(config: &SearchConfig) -> Vec<u8> {
    format!(
        "{}:{:?}:{}:{:?}",
        config.n, config.hypothesis, config.variant, config.mode
    )
    .into_bytes()
}

fn merge(config: SearchConfig, chunks: Vec<Chunk>, started: Instant) -> SearchReport {
    let mut hasher = Sha256::new();
    hasher.update(header(&config));
    let mut examined = 0;
    let mut counterexamples = Vec::new();
    for chunk in chunks {
        hasher.update(chunk.digest);
        examined += chunk.examined;
        counterexamples.extend(chunk.found);
    }
    SearchReport {
        config,
        examined,
        counterexamples,
        wall_time_ms: started.elapsed().as_millis(),
        fingerprint: hex::encode(hasher.finalize()),
    }
}

fn exhaustive_search(config: SearchConfig) -> Result<SearchReport> {
    check_bound(config.n, config.exhaustive_bound)?;
    let started = Instant::now();
    let configs = local_configurations(config.hypothesis);
    let radix = configs.len() as u8;
    let m = pair_count(config.n);
    // Partition by the first one or two codes.
    let prefix_len = m.min(2);
    let partitions = (radix as u64).pow(prefix_len as u32);
    let suffix_len = m - prefix_len;
    let suffix_size = (radix as u64).pow(suffix_len as u32);

    let chunks = run_chunks(config.parallelism, partitions, |part| {
        let mut codes = vec![0u8; m];
        let mut rest = part;
        for d in codes[..prefix_len].iter_mut().rev() {
            *d = (rest % radix as u64) as u8;
            rest /= radix as u64;
        }
        let mut hasher = Sha256::new();
        let mut found = Vec::new();
        let mut examined = 0;
        loop {
            hasher.update(&codes);
            let p = build_pair(config.n, &configs, &codes);
            let index = part * suffix_size + examined;
            if let Some(cx) = examine(&p, index, config.variant, config.oracle)? {
                found.push(cx);
            }
            examined += 1;
            if !advance(&mut codes[prefix_len..], radix) {
                break;
            }
        }
        Ok(Chunk {
            examined,
            digest: hasher.finalize().into(),
            found,
        })
    })?;
    Ok(merge(config, chunks, started))
}

/// Codes for sample `index` of a seeded campaign.
fn sample_codes(seed: u64, index: u64, radix: u8, m: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..m).map(|_| rng.gen_range(0..radix)).collect()
}

fn random_campaign(config: SearchConfig, seed: u64, iterations: u64) -> Result<SearchReport> {
    let started = Instant::now();
    let configs = local_configurations(config.hypothesis);
    let radix = configs.len() as u8;
    let m = pair_count(config.n);
    let blocks = iterations.div_ceil(RANDOM_BLOCK);
    let chunks = run_chunks(config.parallelism, blocks, |block| {
        let start = block * RANDOM_BLOCK;
        let end = (start + RANDOM_BLOCK).min(iterations);
        let mut hasher = Sha256::new();
        let mut found = Vec::new();
        for index in start..end {
            let codes = sample_codes(seed, index, radix, m);
            hasher.update(&codes);
            let p = build_pair(config.n, &configs, &codes);
            if let Some(cx) = examine(&p, index, config.variant, config.oracle)? {
                found.push(cx);
            }
        }
        Ok(Chunk {
            examined: end - start,
            digest: hasher.finalize().into(),
            found,
        })
    })?;
    Ok(merge(config, chunks, started))
}

/// Runs a campaign. Deterministic in everything except `wall_time_ms`.
pub fn run_search(config: SearchConfig) -> Result<SearchReport> {
    if config.n == 0 {
        return Err(Error::Precondition("search needs n ≥ 1".into()));
    }
    match config.mode.clone() {
        SearchMode::Exhaustive => exhaustive_search(config),
        SearchMode::Random { seed, iterations } => random_campaign(config, seed, iterations),
    }
}

/// Random campaign entry point.
pub fn random_search(config: SearchConfig) -> Result<SearchReport> {
    match config.mode {
        SearchMode::Random { .. } => run_search(config),
        SearchMode::Exhaustive => Err(Error::Precondition(
            "random_search needs a random mode".into(),
        )),
    }
}

/// Re-checks a reported counterexample from its serialized instance alone.
pub fn reverify(cx: &Counterexample, variant: Variant) -> Result<bool> {
    let inst = cx.instance.to_instance()?;
    let w = inst
        .weights
        .unwrap_or_else(|| WeightVector::ones(inst.pair.n()));
    check_dims(inst.pair.n(), w.len())?;
    Ok(check_identity_hypothesis(&inst.pair)
        && !product_inequality_report(&inst.pair, &w, variant)?.holds_somewhere())
}
