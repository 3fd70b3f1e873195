//! Digraphs as binary relations on `0..n`.
//!
//! A [`Relation`] is a dense bit matrix: row `u` holds the out-set `R(u)`.
//! Composition follows the left-to-right convention, so
//! `compose(R, S)(v)` is the union of `S(w)` over `w` in `R(v)`.

use std::fmt;

use crate::error::{check_dims, Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A subset of `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for v in 0..universe {
            set.insert(v);
        }
        set
    }

    pub fn singleton(universe: usize, v: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(v);
        set
    }

    /// Builds a set from members, failing if any member is `>= universe`.
    pub fn from_members<I: IntoIterator<Item = usize>>(
        universe: usize,
        members: I,
    ) -> Result<Self> {
        let mut set = Self::empty(universe);
        for v in members {
            if v >= universe {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: universe,
                });
            }
            set.insert(v);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Panics if `v >= universe`.
    pub fn insert(&mut self, v: usize) {
        assert!(
            v < self.universe,
            "vertex {v} outside universe {}",
            self.universe
        );
        self.words[v / WORD] |= 1 << (v % WORD);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.universe {
            self.words[v / WORD] &= !(1 << (v % WORD));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD + bit)
            })
        })
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.subtract(other);
        out
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.universe).difference(self)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Members as 1-based labels.
    pub fn labels(&self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    /// Renders 1-based labels, e.g. `{1,2,5}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.labels())
    }
}

/// First and second neighbourhoods of a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbourhoods {
    pub out1: VertexSet,
    pub in1: VertexSet,
    pub out2: VertexSet,
    pub in2: VertexSet,
}

impl Neighbourhoods {
    pub fn out_degree(&self) -> usize {
        self.out1.len()
    }

    pub fn in_degree(&self) -> usize {
        self.in1.len()
    }

    pub fn second_out_degree(&self) -> usize {
        self.out2.len()
    }
}

/// A digraph on `0..n` stored as an `n × n` boolean matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<VertexSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            rows: vec![VertexSet::empty(n); n],
        }
    }

    /// The identity relation `{(v, v)}`.
    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for v in 0..n {
            r.add_edge(v, v);
        }
        r
    }

    /// All of `V × V`.
    pub fn complete(n: usize) -> Self {
        Self {
            n,
            rows: vec![VertexSet::full(n); n],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut r = Self::empty(n);
        for (u, v) in edges {
            r.check_vertex(u)?;
            r.check_vertex(v)?;
            r.add_edge(u, v);
        }
        Ok(r)
    }

    /// Builds a relation from 0-based out-lists.
    pub fn from_out_lists(lists: &[Vec<usize>]) -> Result<Self> {
        let n = lists.len();
        let rows = lists
            .iter()
            .map(|l| VertexSet::from_members(n, l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, rows })
    }

    pub fn from_rows(rows: Vec<VertexSet>) -> Result<Self> {
        let n = rows.len();
        if let Some(row) = rows.iter().find(|r| r.universe() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: row.universe(),
            });
        }
        Ok(Self { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u].insert(v);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].remove(v);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.rows[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |v| (u, v)))
    }

    pub fn rows(&self) -> &[VertexSet] {
        &self.rows
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Row `v`, i.e. `R(v)`.
    pub fn out_set(&self, v: usize) -> Result<&VertexSet> {
        self.check_vertex(v)?;
        Ok(&self.rows[v])
    }

    /// Column `v`, i.e. `Rᵀ(v)`.
    pub fn in_set(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let mut set = VertexSet::empty(self.n);
        for (u, row) in self.rows.iter().enumerate() {
            if row.contains(v) {
                set.insert(u);
            }
        }
        Ok(set)
    }

    pub fn transpose(&self) -> Relation {
        let mut t = Relation::empty(self.n);
        for (u, v) in self.edges() {
            t.add_edge(v, u);
        }
        t
    }

    /// The product `RS = {(u, v) | ∃w: (u, w) ∈ R, (w, v) ∈ S}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        check_dims(self.n, other.n)?;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = VertexSet::empty(self.n);
                for w in row.iter() {
                    out.union_with(&other.rows[w]);
                }
                out
            })
            .collect();
        Ok(Relation { n: self.n, rows })
    }

    fn zip_rows(
        &self,
        other: &Relation,
        op: impl Fn(&VertexSet, &VertexSet) -> VertexSet,
    ) -> Result<Relation> {
        check_dims(self.n, other.n)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| op(a, b))
            .collect();
        Ok(Relation { n: self.n, rows })
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.zip_rows(other, VertexSet::union)
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.zip_rows(other, VertexSet::intersection)
    }

    pub fn difference(&self, other: &Relation) -> Result<Relation> {
        self.zip_rows(other, VertexSet::difference)
    }

    pub fn is_subset(&self, other: &Relation) -> Result<bool> {
        check_dims(self.n, other.n)?;
        Ok(self
            .rows
            .iter()
            .zip(&other.rows)
            .all(|(a, b)| a.is_subset(b)))
    }

    pub fn equals(&self, other: &Relation) -> Result<bool> {
        check_dims(self.n, other.n)?;
        Ok(self == other)
    }

    /// `N⁺`, `N⁻`, `N⁺⁺` and `N⁻⁻` of `v`, using the literal set formulas:
    /// `N⁺⁺(v) = (⋃_{u ∈ N⁺(v)} N⁺(u)) ∖ N⁺(v)`.
    pub fn neighbourhoods(&self, v: usize) -> Result<Neighbourhoods> {
        self.check_vertex(v)?;
        let out1 = self.rows[v].clone();
        let in1 = self.in_set(v)?;

        let mut out2 = VertexSet::empty(self.n);
        for u in out1.iter() {
            out2.union_with(&self.rows[u]);
        }
        out2.subtract(&out1);

        let mut in2 = VertexSet::empty(self.n);
        for u in in1.iter() {
            in2.union_with(&self.in_set(u)?);
        }
        in2.subtract(&in1);

        Ok(Neighbourhoods {
            out1,
            in1,
            out2,
            in2,
        })
    }

    pub fn strip_loops(&self) -> Relation {
        let mut r = self.clone();
        for v in 0..self.n {
            r.remove_edge(v, v);
        }
        r
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    /// No loops and no 2-cycles.
    pub fn is_oriented(&self) -> bool {
        (0..self.n)
            .all(|u| !self.has_edge(u, u) && self.rows[u].iter().all(|v| !self.has_edge(v, u)))
    }

    /// Oriented with exactly one edge between every pair of distinct vertices.
    pub fn is_tournament(&self) -> bool {
        self.is_oriented()
            && (0..self.n)
                .all(|u| ((u + 1)..self.n).all(|v| self.has_edge(u, v) || self.has_edge(v, u)))
    }

    /// The subgraph induced on `keep`, relabelled to `0..keep.len()` in increasing id order.
    pub fn induced(&self, keep: &VertexSet) -> Result<Relation> {
        check_dims(self.n, keep.universe())?;
        let ids: Vec<usize> = keep.iter().collect();
        let m = ids.len();
        let mut r = Relation::empty(m);
        for (i, &u) in ids.iter().enumerate() {
            for (j, &v) in ids.iter().enumerate() {
                if self.has_edge(u, v) {
                    r.add_edge(i, j);
                }
            }
        }
        Ok(r)
    }

    /// 0-based out-lists.
    pub fn out_lists(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(|r| r.iter().collect()).collect()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("n", &self.n)
            .field("out", &self.out_lists())
            .finish()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn cycle3() -> Relation {
        Relation::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    pub(crate) fn transitive3() -> Relation {
        Relation::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    /// Brute-force matrix product over plain boolean arrays.
    fn product_oracle(r: &[Vec<bool>], s: &[Vec<bool>]) -> Vec<Vec<bool>> {
        let n = r.len();
        let mut out = vec![vec![false; n]; n];
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if r[u][w] && s[w][v] {
                        out[u][v] = true;
                    }
                }
            }
        }
        out
    }

    fn to_matrix(r: &Relation) -> Vec<Vec<bool>> {
        (0..r.n())
            .map(|u| (0..r.n()).map(|v| r.has_edge(u, v)).collect())
            .collect()
    }

    pub(crate) fn arb_relation(n: usize) -> impl Strategy<Value = Relation> {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n));
            Relation::from_edges(n, edges).unwrap()
        })
    }

    #[test]
    fn identity_has_only_loops() {
        let id = Relation::identity(3);
        assert_eq!(id.edge_count(), 3);
        assert_eq!(id.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(Relation::identity(0).n(), 0);
        assert_eq!(Relation::identity(0).edge_count(), 0);
        assert_eq!(id.transpose(), id);
        for v in 0..3 {
            assert_eq!(id.out_set(v).unwrap(), &VertexSet::singleton(3, v));
        }
    }

    #[test]
    fn compose_rejects_mismatched_sizes() {
        let err = Relation::identity(2)
            .compose(&Relation::identity(3))
            .unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch { left: 2, right: 3 }
        ));
        assert!(Relation::identity(2).union(&Relation::identity(3)).is_err());
        assert!(Relation::identity(2)
            .is_subset(&Relation::identity(3))
            .is_err());
    }

    #[test]
    fn out_of_range_vertex() {
        let r = Relation::identity(2);
        assert!(matches!(
            r.out_set(2),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(r.neighbourhoods(5).is_err());
        assert!(Relation::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn cycle_neighbourhoods() {
        let nb = cycle3().neighbourhoods(0).unwrap();
        assert_eq!(nb.out1, VertexSet::singleton(3, 1));
        assert_eq!(nb.out2, VertexSet::singleton(3, 2));
        assert_eq!(nb.in1, VertexSet::singleton(3, 2));
        assert_eq!(nb.in2, VertexSet::singleton(3, 1));
    }

    #[test]
    fn transitive_neighbourhoods() {
        let t = transitive3();
        let sink = t.neighbourhoods(2).unwrap();
        assert!(sink.out1.is_empty() && sink.out2.is_empty());
        let source = t.neighbourhoods(0).unwrap();
        assert_eq!(source.out1, VertexSet::from_members(3, [1, 2]).unwrap());
        assert!(source.out2.is_empty());
        assert!(t.neighbourhoods(2).unwrap().in2.is_empty());
        assert_eq!(t.neighbourhoods(1).unwrap().in1, VertexSet::singleton(3, 0));
    }

    #[test]
    fn second_neighbourhood_follows_set_formula_with_loops() {
        // 0 -> 1 -> 0 plus loop at 1: 0 is reachable from itself in two steps.
        let r = Relation::from_edges(2, [(0, 1), (1, 0), (1, 1)]).unwrap();
        let nb = r.neighbourhoods(0).unwrap();
        assert!(nb.out2.contains(0));
        assert!(!nb.out1.contains(0));
    }

    #[test]
    fn orientation_checks() {
        assert!(!Relation::identity(2).is_oriented());
        assert!(cycle3().is_oriented());
        assert!(!Relation::from_edges(2, [(0, 1), (1, 0)])
            .unwrap()
            .is_oriented());
        assert!(Relation::identity(3).strip_loops().edge_count() == 0);
        assert!(cycle3().is_tournament());
        assert!(!Relation::from_edges(3, [(0, 1)]).unwrap().is_tournament());
    }

    #[test]
    fn boolean_ops_basic() {
        let r = cycle3();
        assert_eq!(r.union(&r).unwrap(), r);
        assert_eq!(r.intersection(&r).unwrap(), r);
        assert_eq!(r.difference(&r).unwrap().edge_count(), 0);
        assert!(r.is_subset(&Relation::complete(3)).unwrap());
        assert!(!Relation::complete(3).is_subset(&r).unwrap());
        assert!(r.equals(&r.clone()).unwrap());
    }

    #[test]
    fn induced_subgraph_relabels() {
        let keep = VertexSet::from_members(3, [0, 2]).unwrap();
        let sub = cycle3().induced(&keep).unwrap();
        assert_eq!(sub.out_lists(), vec![vec![], vec![0]]);
    }

    #[test]
    fn vertex_set_iteration_crosses_words() {
        let set = VertexSet::from_members(130, [0, 63, 64, 129]).unwrap();
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(set.len(), 4);
        assert_eq!(set.complement().len(), 126);
        assert_eq!(set.to_string(), "{1,64,65,130}");
        assert!(VertexSet::from_members(3, [3]).is_err());
    }

    proptest! {
        #[test]
        fn double_transpose_is_identity(r in (0usize..7).prop_flat_map(arb_relation)) {
            prop_assert_eq!(r.transpose().transpose(), r);
        }

        #[test]
        fn compose_matches_triple_loop(r in arb_relation(5), s in arb_relation(5)) {
            let got = to_matrix(&r.compose(&s).unwrap());
            prop_assert_eq!(got, product_oracle(&to_matrix(&r), &to_matrix(&s)));
        }

        #[test]
        fn identity_is_neutral(r in arb_relation(5)) {
            let id = Relation::identity(5);
            prop_assert_eq!(id.compose(&r).unwrap(), r.clone());
            prop_assert_eq!(r.compose(&id).unwrap(), r);
        }

        #[test]
        fn compose_is_associative(r in arb_relation(5), s in arb_relation(5), t in arb_relation(5)) {
            let left = r.compose(&s).unwrap().compose(&t).unwrap();
            let right = r.compose(&s.compose(&t).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            let oracle = product_oracle(&product_oracle(&to_matrix(&r), &to_matrix(&s)), &to_matrix(&t));
            prop_assert_eq!(to_matrix(&left), oracle);
        }

        #[test]
        fn transpose_reverses_products(r in arb_relation(5), s in arb_relation(5)) {
            let lhs = r.compose(&s).unwrap().transpose();
            let rhs = s.transpose().compose(&r.transpose()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn out_set_of_product_unfolds(r in arb_relation(6), s in arb_relation(6), v in 0usize..6) {
            let mut expected = VertexSet::empty(6);
            for w in r.out_set(v).unwrap().iter() {
                expected.union_with(s.out_set(w).unwrap());
            }
            let rs = r.compose(&s).unwrap();
            prop_assert_eq!(rs.out_set(v).unwrap(), &expected);
        }

        #[test]
        fn strip_loops_is_idempotent(r in arb_relation(6)) {
            let once = r.strip_loops();
            prop_assert_eq!(once.strip_loops(), once.clone());
            prop_assert!((0..6).all(|v| !once.has_loop(v)));
        }

        #[test]
        fn oriented_second_neighbourhood_is_disjoint(r in arb_relation(6)) {
            let g = orient(&r);
            for v in 0..6 {
                let nb = g.neighbourhoods(v).unwrap();
                prop_assert!(!nb.out2.contains(v));
                prop_assert!(nb.out1.is_disjoint(&nb.out2));
            }
        }

        #[test]
        fn reformulated_square_counts(r in arb_relation(6)) {
            let g = orient(&r);
            let a = g.union(&Relation::identity(6)).unwrap();
            let aa = a.compose(&a).unwrap();
            for v in 0..6 {
                let nb = g.neighbourhoods(v).unwrap();
                let sq = aa.out_set(v).unwrap().len();
                let row = a.out_set(v).unwrap().len();
                prop_assert_eq!(sq, 1 + nb.out_degree() + nb.second_out_degree());
                prop_assert_eq!(row, 1 + nb.out_degree());
                prop_assert_eq!(sq + 1 >= 2 * row, nb.second_out_degree() >= nb.out_degree());
            }
        }
    }

    /// Drops loops and keeps only the lower-id-to-higher-id half of each 2-cycle.
    pub(crate) fn orient(r: &Relation) -> Relation {
        let mut g = r.strip_loops();
        for u in 0..r.n() {
            for v in 0..u {
                if g.has_edge(u, v) && g.has_edge(v, u) {
                    g.remove_edge(u, v);
                }
            }
        }
        g
    }
}
