//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! elapsed time; the run fails if any criterion fails or overruns its budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use snc_core::rational::{int, ratio};
use snc_core::search::{enumerate_pairs, Hypothesis};
use snc_core::theorem::proof_pivot;
use snc_core::{
    aggregate_sum, blow_up_oriented, blow_up_pair, check_identity_hypothesis,
    compute_losing_density, density_inequality_check, find_violating_weights, find_witness,
    load_fixture, product_inequality_report, reduce_pair, run_search, verify_density, wsnp_report,
    DigraphPair, Rational, Relation, SearchConfig, Variant, WeightVector,
};

type Outcome = Result<(), String>;
/// Name, check and time budget.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// (weights, A rows, B rows, printed AB rows), 1-based, as printed.
type RawTable = (
    [i64; 6],
    [&'static [usize]; 6],
    [&'static [usize]; 6],
    [&'static [usize]; 6],
);

const RAW_1: RawTable = (
    [7, 3, 11, 3, 3, 9],
    [
        &[1, 2, 5, 6],
        &[2, 3],
        &[1, 3, 4, 5],
        &[1, 4],
        &[2, 5, 6],
        &[2, 3, 6],
    ],
    [
        &[1, 2, 5, 6],
        &[2, 3, 4],
        &[1, 3, 4, 5],
        &[1, 4, 6],
        &[2, 4, 5, 6],
        &[2, 3, 6],
    ],
    [
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 3, 4, 5],
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 4, 5, 6],
        &[2, 3, 4, 5, 6],
        &[1, 2, 3, 4, 5, 6],
    ],
);

const RAW_2: RawTable = (
    [17, 11, 15, 8, 5, 8],
    [
        &[1, 2, 5, 6],
        &[2, 3, 4],
        &[1, 3, 6],
        &[1, 3, 4, 5],
        &[2, 3, 5],
        &[2, 4, 5, 6],
    ],
    [
        &[1, 2, 5, 6],
        &[2, 3, 4],
        &[1, 3],
        &[3, 4, 5],
        &[2, 3, 5],
        &[2, 5, 6],
    ],
    [
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 3, 4, 5],
        &[1, 2, 3, 5, 6],
        &[1, 2, 3, 4, 5, 6],
        &[1, 2, 3, 4, 5],
        &[2, 3, 4, 5, 6],
    ],
);

/// Summation over the printed table: ω(AB(v)) − ω(A(v)) − ω(B(v)) + ω(v), with `AB(v)`
/// taken straight from the printed column.
fn summation_margins(raw: &RawTable) -> Vec<i64> {
    let (w, a, b, ab) = raw;
    let weigh = |xs: &[usize]| xs.iter().map(|&x| w[x - 1]).sum::<i64>();
    (0..6)
        .map(|v| weigh(ab[v]) - weigh(a[v]) - weigh(b[v]) + w[v])
        .collect()
}

fn criterion_1() -> Outcome {
    for (id, raw) in [(1u8, &RAW_1), (2, &RAW_2)] {
        let f = load_fixture(id).map_err(|e| e.to_string())?;
        let product = f.pair.product();
        for v in 0..6 {
            let got = product.out_set(v).unwrap().labels();
            ensure(got == raw.3[v], || {
                format!(
                    "fixture {id}: AB({}) = {got:?}, printed {:?}",
                    v + 1,
                    raw.3[v]
                )
            })?;
            ensure(f.pair.a().out_set(v).unwrap().labels() == raw.1[v], || {
                format!("fixture {id}: A row {}", v + 1)
            })?;
            ensure(f.pair.b().out_set(v).unwrap().labels() == raw.2[v], || {
                format!("fixture {id}: B row {}", v + 1)
            })?;
        }
        ensure(check_identity_hypothesis(&f.pair), || {
            format!("fixture {id}: A ∩ Bᵀ ≠ I")
        })?;
        let inclusion = if id == 1 {
            f.pair.a().is_subset(f.pair.b())
        } else {
            f.pair.b().is_subset(f.pair.a())
        };
        ensure(inclusion.unwrap(), || {
            format!("fixture {id}: inclusion fails")
        })?;
        ensure(
            f.pair.a().strip_loops().is_oriented() && f.pair.b().strip_loops().is_oriented(),
            || format!("fixture {id}: 2-cycle present"),
        )?;
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    for (id, raw) in [(1u8, &RAW_1), (2, &RAW_2)] {
        let oracle = summation_margins(raw);
        ensure(oracle.iter().all(|&m| m == -1), || {
            format!("fixture {id}: summation oracle margins {oracle:?}")
        })?;
        let f = load_fixture(id).unwrap();
        let report = product_inequality_report(&f.pair, &f.weights, Variant::ProductOnly).unwrap();
        ensure(report.satisfying.is_empty(), || {
            format!("fixture {id}: satisfied at {:?}", report.satisfying)
        })?;
        for (v, rec) in report.records.iter().enumerate() {
            ensure(rec.margin == int(oracle[v]), || {
                format!("fixture {id}: vertex {} margin {}", v + 1, rec.margin)
            })?;
        }
    }
    let f1 = load_fixture(1).unwrap();
    let r = product_inequality_report(&f1.pair, &f1.weights, Variant::ProductOnly).unwrap();
    ensure(
        r.records[0].lhs == int(36) && r.records[0].rhs == int(37),
        || "fixture 1 vertex 1 sides".into(),
    )
}

fn criterion_3() -> Outcome {
    for (id, size) in [(1u8, 36usize), (2, 64)] {
        let f = load_fixture(id).unwrap();
        let (big, map) = blow_up_pair(&f.pair, &f.weights).map_err(|e| e.to_string())?;
        ensure(big.n() == size && map.total() == size, || {
            format!("fixture {id}: {} vertices", big.n())
        })?;
        ensure(check_identity_hypothesis(&big), || {
            format!("fixture {id}: blow-up breaks A ∩ Bᵀ = I")
        })?;
        let unit = product_inequality_report(&big, &WeightVector::ones(size), Variant::ProductOnly)
            .unwrap();
        ensure(unit.records.iter().all(|r| r.margin == int(-1)), || {
            format!("fixture {id}: unweighted margins")
        })?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    for id in [1u8, 2] {
        let f = load_fixture(id).unwrap();
        let report = product_inequality_report(&f.pair, &f.weights, Variant::Union).unwrap();
        ensure(report.holds_somewhere(), || {
            format!("fixture {id}: union inequality fails everywhere")
        })?;
        if id == 1 {
            let v4 = &report.records[3];
            ensure(
                v4.satisfied && v4.lhs == int(36) && v4.rhs == int(26),
                || format!("fixture 1 vertex 4: {} vs {}", v4.lhs, v4.rhs),
            )?;
        }
    }
    Ok(())
}

fn random_oriented(rng: &mut ChaCha8Rng, n: usize) -> Relation {
    let mut g = Relation::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            match rng.gen_range(0..3) {
                0 => g.add_edge(u, v),
                1 => g.add_edge(v, u),
                _ => {}
            }
        }
    }
    g
}

fn random_tournament_pair(rng: &mut ChaCha8Rng, n: usize) -> DigraphPair {
    let mut a = Relation::identity(n);
    let mut b = Relation::identity(n);
    for u in 0..n {
        for v in (u + 1)..n {
            // For each ordered pair exactly one of (u, v) ∈ A and (v, u) ∈ B.
            if rng.gen_bool(0.5) {
                a.add_edge(u, v)
            } else {
                b.add_edge(v, u)
            }
            if rng.gen_bool(0.5) {
                a.add_edge(v, u)
            } else {
                b.add_edge(u, v)
            }
        }
    }
    DigraphPair::new(a, b).unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..200 {
        let n = rng.gen_range(1..=6);
        let g = random_oriented(&mut rng, n);
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let w = WeightVector::from_integers(&weights);
        let weighted = wsnp_report(&g, &w).unwrap();
        let (big, map) = blow_up_oriented(&g, &w).unwrap();
        let unit = wsnp_report(&big, &WeightVector::ones(big.n())).unwrap();
        for v in 0..n {
            for c in map.copies(v) {
                ensure(
                    unit.records[c].satisfied == weighted.records[v].satisfied,
                    || format!("trial {trial}: vertex {} copy {c}", v + 1),
                )?;
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let cycle = Relation::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    let l = compute_losing_density(&cycle).map_err(|e| e.to_string())?;
    ensure(
        l.values() == [ratio(1, 3), ratio(1, 3), ratio(1, 3)],
        || format!("3-cycle density {:?}", l.values()),
    )?;
    let transitive = Relation::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let l = compute_losing_density(&transitive).map_err(|e| e.to_string())?;
    ensure(l.values() == [int(0), int(0), int(1)], || {
        format!("transitive density {:?}", l.values())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..200 {
        let n = rng.gen_range(1..=10);
        let g = random_oriented(&mut rng, n);
        let l = compute_losing_density(&g).map_err(|e| format!("trial {trial}: {e}"))?;
        let check = verify_density(&g, &l);
        ensure(check.is_valid(), || {
            format!("trial {trial}: {:?}", check.violations)
        })?;
    }
    Ok(())
}

fn random_rational_weights(rng: &mut ChaCha8Rng, n: usize) -> WeightVector {
    WeightVector::new(
        (0..n)
            .map(|_| ratio(rng.gen_range(0..10), rng.gen_range(1..6)))
            .collect(),
    )
    .unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pivots = 0;
    for trial in 0..1000 {
        let n = rng.gen_range(1..=7);
        let p = random_tournament_pair(&mut rng, n);
        let w = random_rational_weights(&mut rng, n);
        let cert = find_witness(&p, &w).map_err(|e| format!("trial {trial}: {e}"))?;
        let union = product_inequality_report(&p, &w, Variant::Union).unwrap();
        ensure(union.records[cert.witness].satisfied, || {
            format!("trial {trial}: witness fails")
        })?;

        let r = reduce_pair(&p).unwrap();
        let agg =
            aggregate_sum(&r, &w, &cert.density).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(
            !agg.direct.is_negative() && agg.direct == agg.transposed,
            || {
                format!(
                    "trial {trial}: aggregate {} / {}",
                    agg.direct, agg.transposed
                )
            },
        )?;
        for row in density_inequality_check(&r, &cert.density).unwrap() {
            ensure(row.holds, || {
                format!("trial {trial}: l(S2) < l(S1) at {}", row.vertex + 1)
            })?;
        }
        for v in 0..n {
            let q_mass = cert.vertices[v]
                .partition
                .q
                .iter()
                .fold(Rational::zero(), |acc, u| acc + &cert.density.values()[u]);
            let pivot =
                proof_pivot(&r, &cert.density, v).map_err(|e| format!("trial {trial}: {e}"))?;
            match pivot {
                Some(pc) => {
                    pivots += 1;
                    ensure(
                        q_mass.is_positive() && pc.in_contains && pc.out_contained,
                        || {
                            format!(
                                "trial {trial}: containment at pivot {} for vertex {}",
                                pc.u + 1,
                                v + 1
                            )
                        },
                    )?;
                }
                None => ensure(q_mass.is_zero(), || format!("trial {trial}: missing pivot"))?,
            }
        }
    }
    ensure(pivots > 0, || {
        "no vertex with l(Q) > 0 was exercised".into()
    })
}

fn criterion_8() -> Outcome {
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges =
                pairs
                    .iter()
                    .enumerate()
                    .map(|(i, &(u, v))| if mask >> i & 1 == 1 { (u, v) } else { (v, u) });
            let t = Relation::from_edges(n, edges).unwrap();
            let report = wsnp_report(&t, &WeightVector::ones(n)).unwrap();
            ensure(report.holds_somewhere(), || {
                format!("tournament n={n} mask={mask:b} has no SNP vertex")
            })?;
        }
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for (n, expected) in [(3usize, 729u64), (4, 531_441)] {
        let mut cfg = SearchConfig::exhaustive(n, Hypothesis::IdentityOnly, Variant::Union);
        cfg.parallelism = std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1);
        let report = run_search(cfg).map_err(|e| e.to_string())?;
        ensure(report.examined == expected, || {
            format!("n={n}: examined {}", report.examined)
        })?;
        ensure(!report.found(), || {
            format!(
                "n={n}: counterexample {}",
                report.counterexamples[0].instance.to_json()
            )
        })?;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let f = load_fixture(1).unwrap();
    let found = find_violating_weights(&f.pair, Variant::ProductOnly)
        .map_err(|e| e.to_string())?
        .ok_or("oracle returned empty on fixture 1")?;
    ensure(found.min_violation >= ratio(1, 36), || {
        format!("t* = {}", found.min_violation)
    })?;
    let normalised = f.weights.scaled(&ratio(1, 36)).unwrap();
    let normalised_report =
        product_inequality_report(&f.pair, &normalised, Variant::ProductOnly).unwrap();
    ensure(
        normalised_report
            .records
            .iter()
            .all(|r| r.margin == ratio(-1, 36)),
        || "normalised weights margin".into(),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..200 {
        let n = rng.gen_range(1..=6);
        let p = random_tournament_pair(&mut rng, n);
        let out = find_violating_weights(&p, Variant::Union).map_err(|e| e.to_string())?;
        ensure(out.is_none(), || {
            format!("trial {trial}: oracle found weights on a tournament pair")
        })?;
    }
    let mut failures = 0;
    enumerate_pairs(3, Hypothesis::TournamentPair, |p| {
        if find_violating_weights(p, Variant::Union).unwrap().is_some() {
            failures += 1;
        }
    })
    .unwrap();
    ensure(failures == 0, || {
        format!("{failures} tournament pairs on 3 vertices admit violating weights")
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "1 fixture tables reproduce",
            criterion_1,
            Duration::from_secs(1),
        ),
        (
            "2 product-only refutation, margin -1",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            "3 blow-ups to 36 and 64 vertices",
            criterion_3,
            Duration::from_secs(1),
        ),
        (
            "4 union inequality holds on fixtures",
            criterion_4,
            Duration::from_secs(1),
        ),
        (
            "5 WSNP equals per-copy SNP",
            criterion_5,
            Duration::from_secs(10),
        ),
        ("6 losing densities", criterion_6, Duration::from_secs(30)),
        (
            "7 tournament-pair certificates",
            criterion_7,
            Duration::from_secs(120),
        ),
        (
            "8 tournaments on <= 5 vertices have SNP",
            criterion_8,
            Duration::from_secs(30),
        ),
        (
            "9 exhaustive search n = 3, 4",
            criterion_9,
            Duration::from_secs(60),
        ),
        ("10 weight oracle", criterion_10, Duration::from_secs(5)),
    ];
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Ok(()) if elapsed <= budget => "PASS".to_string(),
            Ok(()) => format!("FAIL (over budget {budget:?})"),
            Err(e) => format!("FAIL ({e})"),
        };
        println!("[{verdict}] criterion {name} in {elapsed:.2?}");
        if !verdict.starts_with("PASS") {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
