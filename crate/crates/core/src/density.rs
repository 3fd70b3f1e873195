//! Losing densities of oriented graphs.
//!
//! A losing density is a probability vector `l` with
//! `l(N⁺(v)) ≥ l(N⁻(v))` at every vertex and equality wherever `l(v) > 0`.
//! On an oriented graph `Σ_v l(v)·(l(N⁺(v)) − l(N⁻(v))) = 0` for any `l`, so
//! every feasible point of the inequality system already satisfies the
//! equality condition. The solver therefore only needs feasibility.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{check_dims, Error, Result};
use crate::lp::{self, Constraint, Outcome, Problem, Sense};
use crate::rational::{serialize_rationals, Rational, WeightVector};
use crate::relation::Relation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Density {
    #[serde(serialize_with = "serialize_rationals")]
    values: Vec<Rational>,
    /// `l(N⁺(v)) − l(N⁻(v))`.
    #[serde(serialize_with = "serialize_rationals")]
    slack: Vec<Rational>,
}

impl Density {
    /// Wraps candidate values for `g`, computing slacks. No invariant is checked;
    /// use [`verify_density`].
    pub fn from_values(g: &Relation, values: Vec<Rational>) -> Result<Self> {
        check_dims(g.n(), values.len())?;
        let slack = slacks(g, &values);
        Ok(Self { values, slack })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn slack(&self) -> &[Rational] {
        &self.slack
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_weights(&self) -> Result<WeightVector> {
        WeightVector::new(self.values.clone())
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_positive())
            .map(|(v, _)| v)
    }
}

fn slacks(g: &Relation, values: &[Rational]) -> Vec<Rational> {
    let n = g.n();
    let mut slack = vec![Rational::zero(); n];
    for (u, v) in g.edges() {
        // Edge u -> v: v is an out-neighbour of u, u an in-neighbour of v.
        slack[u] += &values[v];
        slack[v] -= &values[u];
    }
    slack
}

/// Solves the exact feasibility system `l ≥ 0`, `Σ l = 1`, `l(N⁺(v)) − l(N⁻(v)) ≥ 0`.
pub fn compute_losing_density(g: &Relation) -> Result<Density> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Precondition(
            "losing density needs at least one vertex".into(),
        ));
    }
    if !g.is_oriented() {
        return Err(Error::Precondition(
            "losing density requires an oriented graph".into(),
        ));
    }
    let mut constraints = Vec::with_capacity(n + 1);
    constraints.push(Constraint {
        coeffs: vec![Rational::one(); n],
        sense: Sense::Eq,
        rhs: Rational::one(),
    });
    for v in 0..n {
        let mut coeffs = vec![Rational::zero(); n];
        for u in g.rows()[v].iter() {
            coeffs[u] += Rational::one();
        }
        for u in g.in_set(v)?.iter() {
            coeffs[u] -= Rational::one();
        }
        constraints.push(Constraint {
            coeffs,
            sense: Sense::Ge,
            rhs: Rational::zero(),
        });
    }
    let problem = Problem {
        num_vars: n,
        objective: vec![Rational::zero(); n],
        constraints,
    };
    match lp::solve(&problem) {
        Outcome::Optimal { x, .. } => {
            let density = Density::from_values(g, x)?;
            let check = verify_density(g, &density);
            if !check.is_valid() {
                return Err(Error::Internal(format!(
                    "solver density failed verification: {:?}",
                    check.violations
                )));
            }
            Ok(density)
        }
        Outcome::Infeasible | Outcome::Unbounded => Err(Error::DensityNotFound { n }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityViolation {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    NegativeValue {
        vertex: usize,
        value: String,
    },
    NotNormalised {
        total: String,
    },
    NegativeSlack {
        vertex: usize,
        out_weight: String,
        in_weight: String,
    },
    SlackOnSupport {
        vertex: usize,
        value: String,
        slack: String,
    },
    StaleSlack {
        vertex: usize,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DensityCheck {
    pub violations: Vec<DensityViolation>,
}

impl DensityCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-checks every density invariant directly from neighbourhood sets.
/// Vertices in violations are 1-based labels.
pub fn verify_density(g: &Relation, l: &Density) -> DensityCheck {
    let mut check = DensityCheck::default();
    let n = g.n();
    if l.values.len() != n || l.slack.len() != n {
        check.violations.push(DensityViolation::DimensionMismatch {
            expected: n,
            found: l.values.len(),
        });
        return check;
    }
    let sum_over = |set: &crate::relation::VertexSet| {
        set.iter()
            .fold(Rational::zero(), |acc, u| acc + &l.values[u])
    };

    let total = l.values.iter().fold(Rational::zero(), |acc, x| acc + x);
    if !total.is_one() {
        check.violations.push(DensityViolation::NotNormalised {
            total: total.to_string(),
        });
    }
    for v in 0..n {
        let value = &l.values[v];
        if value.is_negative() {
            check.violations.push(DensityViolation::NegativeValue {
                vertex: v + 1,
                value: value.to_string(),
            });
        }
        let nb = g.neighbourhoods(v).expect("in range");
        let out_weight = sum_over(&nb.out1);
        let in_weight = sum_over(&nb.in1);
        let slack = &out_weight - &in_weight;
        if slack != l.slack[v] {
            check
                .violations
                .push(DensityViolation::StaleSlack { vertex: v + 1 });
        }
        if slack.is_negative() {
            check.violations.push(DensityViolation::NegativeSlack {
                vertex: v + 1,
                out_weight: out_weight.to_string(),
                in_weight: in_weight.to_string(),
            });
        }
        if value.is_positive() && !slack.is_zero() {
            check.violations.push(DensityViolation::SlackOnSupport {
                vertex: v + 1,
                value: value.to_string(),
                slack: slack.to_string(),
            });
        }
    }
    check
}

/// `l(N⁻(v)) ≥ l(N⁺(v))` everywhere.
pub fn is_winning_density(g: &Relation, values: &[Rational]) -> bool {
    values.len() == g.n()
        && slacks(g, values).iter().all(|s| !s.is_positive())
        && values.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::relation::tests::{arb_relation, cycle3, orient, transitive3};
    use proptest::prelude::*;

    #[test]
    fn cycle_is_uniform() {
        let l = compute_losing_density(&cycle3()).unwrap();
        assert_eq!(l.values(), &[ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert!(l.slack().iter().all(Zero::is_zero));
    }

    #[test]
    fn transitive_is_sink_mass() {
        let l = compute_losing_density(&transitive3()).unwrap();
        assert_eq!(l.values(), &[int(0), int(0), int(1)]);
    }

    #[test]
    fn single_vertex() {
        let l = compute_losing_density(&Relation::empty(1)).unwrap();
        assert_eq!(l.values(), &[int(1)]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            compute_losing_density(&Relation::empty(0)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            compute_losing_density(&Relation::identity(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn verifier_rejects_point_mass_on_cycle() {
        let g = cycle3();
        let l = Density::from_values(&g, vec![int(1), int(0), int(0)]).unwrap();
        let check = verify_density(&g, &l);
        assert!(!check.is_valid());
        assert!(check.violations.contains(&DensityViolation::NegativeSlack {
            vertex: 2,
            out_weight: "0".into(),
            in_weight: "1".into()
        }));
        let good = Density::from_values(&g, vec![ratio(1, 3); 3]).unwrap();
        assert!(verify_density(&g, &good).is_valid());
    }

    #[test]
    fn verifier_checks_normalisation_and_sign() {
        let g = Relation::empty(2);
        let l = Density::from_values(&g, vec![int(2), int(-1)]).unwrap();
        let check = verify_density(&g, &l);
        assert!(check
            .violations
            .iter()
            .any(|v| matches!(v, DensityViolation::NegativeValue { vertex: 2, .. })));
        let half = Density::from_values(&g, vec![ratio(1, 2), int(0)]).unwrap();
        assert!(matches!(
            verify_density(&g, &half).violations[..],
            [DensityViolation::NotNormalised { .. }]
        ));
    }

    #[test]
    fn solver_is_deterministic() {
        let g = Relation::from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 0), (4, 3), (1, 4)]).unwrap();
        assert_eq!(
            compute_losing_density(&g).unwrap(),
            compute_losing_density(&g).unwrap()
        );
    }

    proptest! {
        #[test]
        fn zero_sum_identity(r in arb_relation(7), raw in proptest::collection::vec(0i64..9, 7)) {
            let g = orient(&r);
            let values: Vec<Rational> = raw.iter().map(|&x| int(x)).collect();
            let s = slacks(&g, &values);
            let total = values.iter().zip(&s).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
            prop_assert!(total.is_zero());
        }

        #[test]
        fn solver_output_verifies(r in (1usize..11).prop_flat_map(arb_relation)) {
            let g = orient(&r);
            let l = compute_losing_density(&g).unwrap();
            prop_assert!(verify_density(&g, &l).is_valid());
        }

        #[test]
        fn reversal_duality(r in (1usize..9).prop_flat_map(arb_relation)) {
            let g = orient(&r);
            let l = compute_losing_density(&g).unwrap();
            prop_assert!(is_winning_density(&g.transpose(), l.values()));
        }
    }
}
