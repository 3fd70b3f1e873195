//! Small dense two-phase simplex over exact rationals.
//!
//! Variables are non-negative. Pivoting uses Bland's rule (lowest eligible
//! column enters, lowest basic index leaves on ratio ties), so every run
//! terminates and is reproducible.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Maximize `objective · x` subject to `constraints`, `x ≥ 0`.
#[derive(Clone, Debug)]
pub(crate) struct Problem {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `m` rows of `cols + 1` entries, the last being the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns with `allowed[j]`.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> Step {
        loop {
            let entering = (0..self.cols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && {
                    let z = self
                        .rows
                        .iter()
                        .zip(&self.basis)
                        .fold(Rational::zero(), |acc, (row, &b)| acc + &cost[b] * &row[j]);
                    (&cost[j] - z).is_positive()
                }
            });
            let Some(c) = entering else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return Step::Unbounded,
            }
        }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, &b)| {
                acc + &cost[b] * self.rhs(i)
            })
    }
}

pub(crate) fn solve(problem: &Problem) -> Outcome {
    let nv = problem.num_vars;
    // Normalise to rhs >= 0; a `>= 0` row flips to `<= 0` so it starts with a slack basis.
    let normalised: Vec<Constraint> = problem
        .constraints
        .iter()
        .map(|c| {
            debug_assert_eq!(c.coeffs.len(), nv);
            let flip = c.rhs.is_negative() || (c.rhs.is_zero() && c.sense == Sense::Ge);
            if flip {
                Constraint {
                    coeffs: c.coeffs.iter().map(|x| -x).collect(),
                    sense: match c.sense {
                        Sense::Le => Sense::Ge,
                        Sense::Ge => Sense::Le,
                        Sense::Eq => Sense::Eq,
                    },
                    rhs: -&c.rhs,
                }
            } else {
                c.clone()
            }
        })
        .collect();

    let m = normalised.len();
    let slack_count = normalised.iter().filter(|c| c.sense != Sense::Eq).count();
    let art_count = normalised.iter().filter(|c| c.sense != Sense::Le).count();
    let cols = nv + slack_count + art_count;
    let art_start = nv + slack_count;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (nv, art_start);
    for c in &normalised {
        let mut row = vec![Rational::zero(); cols + 1];
        row[..nv].clone_from_slice(&c.coeffs);
        row[cols] = c.rhs.clone();
        match c.sense {
            Sense::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, cols };

    if art_count > 0 {
        let phase1: Vec<Rational> = (0..cols)
            .map(|j| {
                if j >= art_start {
                    -Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let all = vec![true; cols];
        // Phase 1 is bounded above by zero.
        let _ = t.optimize(&phase1, &all);
        if t.value(&phase1).is_negative() {
            return Outcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis; drop rows that are redundant.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![Rational::zero(); cols];
    cost[..nv].clone_from_slice(&problem.objective);
    let allowed: Vec<bool> = (0..cols).map(|j| j < art_start).collect();
    if let Step::Unbounded = t.optimize(&cost, &allowed) {
        return Outcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); nv];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < nv {
            x[b] = t.rhs(i).clone();
        }
    }
    let value = x
        .iter()
        .zip(&problem.objective)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
    Outcome::Optimal { x, value }
}
