//! Weighted-to-unweighted blow-ups.
//!
//! Vertex `v` of weight `k` is replaced by `k` copies occupying a contiguous id
//! range. Every non-loop edge `(u, v)` becomes all edges `(u_i, v_j)`. In a pair
//! blow-up a loop `(v, v)` becomes one loop per copy and nothing else, which keeps
//! `A ∩ Bᵀ = I` intact.

use std::ops::Range;

use serde::Serialize;

use crate::error::{check_dims, Error, Result};
use crate::pair::{check_identity_hypothesis, DigraphPair};
use crate::rational::WeightVector;
use crate::relation::Relation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupMap {
    counts: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlowupMap {
    fn new(counts: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(counts.len() + 1);
        let mut total = 0;
        offsets.push(0);
        for &c in &counts {
            total += c;
            offsets.push(total);
        }
        Self { counts, offsets }
    }

    pub fn original_n(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Ids of the copies of original vertex `v`.
    pub fn copies(&self, v: usize) -> Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// The original vertex a copy came from.
    pub fn origin(&self, copy: usize) -> usize {
        debug_assert!(copy < self.total());
        self.offsets.partition_point(|&o| o <= copy) - 1
    }
}

fn copy_counts(n: usize, w: &WeightVector) -> Result<Vec<usize>> {
    check_dims(n, w.len())?;
    let ints = w
        .as_integers()
        .ok_or_else(|| Error::Precondition("blow-up weights must be integers".into()))?;
    if let Some(v) = ints.iter().position(|&k| k == 0) {
        return Err(Error::Precondition(format!(
            "blow-up weight of vertex {} is zero",
            v + 1
        )));
    }
    Ok(ints.into_iter().map(|k| k as usize).collect())
}

fn blow_up_relation(r: &Relation, map: &BlowupMap) -> Relation {
    let mut out = Relation::empty(map.total());
    for (u, v) in r.edges() {
        if u == v {
            for c in map.copies(v) {
                out.add_edge(c, c);
            }
        } else {
            for i in map.copies(u) {
                for j in map.copies(v) {
                    out.add_edge(i, j);
                }
            }
        }
    }
    out
}

/// Blows up an oriented graph by positive integer weights.
pub fn blow_up_oriented(g: &Relation, w: &WeightVector) -> Result<(Relation, BlowupMap)> {
    if !g.is_oriented() {
        return Err(Error::Precondition(
            "blow_up_oriented requires an oriented graph".into(),
        ));
    }
    let map = BlowupMap::new(copy_counts(g.n(), w)?);
    Ok((blow_up_relation(g, &map), map))
}

/// Blows up both relations of a pair satisfying `A ∩ Bᵀ = I`.
pub fn blow_up_pair(p: &DigraphPair, w: &WeightVector) -> Result<(DigraphPair, BlowupMap)> {
    if !check_identity_hypothesis(p) {
        return Err(Error::Precondition(
            "blow_up_pair requires A ∩ Bᵀ = I".into(),
        ));
    }
    let map = BlowupMap::new(copy_counts(p.n(), w)?);
    let pair = DigraphPair::new(blow_up_relation(p.a(), &map), blow_up_relation(p.b(), &map))?;
    Ok((pair, map))
}
