//! Directed graphs stored as a dense matrix of two-bit adjacency codes.
//!
//! For an ordered pair `(u, v)` of distinct vertices the code records which of
//! the arcs `u -> v` and `v -> u` are present. Alongside the matrix, each vertex
//! keeps one bitset per non-zero code so that degree counts against an arbitrary
//! vertex set reduce to intersection popcounts.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Set of vertices of one graph, indexed `0..n`.
pub type VertexSet = FixedBitSet;

/// Relation between an ordered pair of distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[repr(u8)]
pub enum AdjacencyCode {
    /// No arc in either direction.
    #[default]
    None = 0,
    /// Only the arc pointing back at the first vertex.
    Incoming = 1,
    /// Only the arc leaving the first vertex.
    Outgoing = 2,
    /// Arcs in both directions (an undirected edge).
    Both = 3,
}

impl AdjacencyCode {
    pub fn from_u8(value: u8) -> Option<Self> {
        match value {
            0 => Some(AdjacencyCode::None),
            1 => Some(AdjacencyCode::Incoming),
            2 => Some(AdjacencyCode::Outgoing),
            3 => Some(AdjacencyCode::Both),
            _ => None,
        }
    }

    pub fn value(self) -> u8 {
        self as u8
    }

    /// The code seen from the other endpoint.
    pub fn inverse(self) -> Self {
        match self {
            AdjacencyCode::Incoming => AdjacencyCode::Outgoing,
            AdjacencyCode::Outgoing => AdjacencyCode::Incoming,
            other => other,
        }
    }

    fn from_arcs(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (false, false) => AdjacencyCode::None,
            (false, true) => AdjacencyCode::Incoming,
            (true, false) => AdjacencyCode::Outgoing,
            (true, true) => AdjacencyCode::Both,
        }
    }

    fn has_forward(self) -> bool {
        matches!(self, AdjacencyCode::Outgoing | AdjacencyCode::Both)
    }

    fn has_backward(self) -> bool {
        matches!(self, AdjacencyCode::Incoming | AdjacencyCode::Both)
    }
}

/// Available degree of a vertex with respect to a vertex set: the number of
/// neighbours with code 3, 2 and 1, compared lexicographically in that order.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct DegreeTriple {
    pub d3: usize,
    pub d2: usize,
    pub d1: usize,
}

impl DegreeTriple {
    pub const ZERO: DegreeTriple = DegreeTriple {
        d3: 0,
        d2: 0,
        d1: 0,
    };

    pub fn new(d3: usize, d2: usize, d1: usize) -> Self {
        DegreeTriple { d3, d2, d1 }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// Degree contributed by a single neighbour with the given code.
    pub fn of_code(code: AdjacencyCode) -> Self {
        match code {
            AdjacencyCode::None => Self::ZERO,
            AdjacencyCode::Incoming => DegreeTriple::new(0, 0, 1),
            AdjacencyCode::Outgoing => DegreeTriple::new(0, 1, 0),
            AdjacencyCode::Both => DegreeTriple::new(1, 0, 0),
        }
    }

    pub fn total(&self) -> usize {
        self.d3 + self.d2 + self.d1
    }
}

impl std::ops::Add for DegreeTriple {
    type Output = DegreeTriple;

    fn add(self, rhs: Self) -> Self {
        DegreeTriple::new(self.d3 + rhs.d3, self.d2 + rhs.d2, self.d1 + rhs.d1)
    }
}

impl std::iter::Sum for DegreeTriple {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(DegreeTriple::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for DegreeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d3, self.d2, self.d1)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    codes: Vec<AdjacencyCode>,
    // rows[c - 1][v] holds every u with code(v, u) == c
    rows: [Vec<FixedBitSet>; 3],
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Graph on `n` vertices with no arcs.
    pub fn empty(n: usize) -> Self {
        let row = || vec![FixedBitSet::with_capacity(n); n];
        Graph {
            n,
            codes: vec![AdjacencyCode::None; n * n],
            rows: [row(), row(), row()],
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn all_vertices(&self) -> VertexSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        s.insert_range(..);
        s
    }

    pub fn vertex_set(&self, members: impl IntoIterator<Item = usize>) -> VertexSet {
        let mut s = FixedBitSet::with_capacity(self.n);
        s.extend(members);
        s
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::invalid(format!(
                "self pair ({u}, {u}) has no adjacency code"
            )));
        }
        Ok(())
    }

    /// Adds the arc `u -> v`. Adding an existing arc is a no-op.
    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        let old = self.code_unchecked(u, v);
        self.store(u, v, AdjacencyCode::from_arcs(true, old.has_backward()));
        Ok(())
    }

    /// Adds both arcs `u -> v` and `v -> u`.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_pair(u, v)?;
        self.store(u, v, AdjacencyCode::Both);
        Ok(())
    }

    /// Overwrites the relation between `u` and `v`; the reverse code is kept consistent.
    pub fn set_code(&mut self, u: usize, v: usize, code: AdjacencyCode) -> Result<()> {
        self.check_pair(u, v)?;
        self.store(u, v, code);
        Ok(())
    }

    fn store(&mut self, u: usize, v: usize, code: AdjacencyCode) {
        self.store_half(u, v, code);
        self.store_half(v, u, code.inverse());
    }

    fn store_half(&mut self, u: usize, v: usize, code: AdjacencyCode) {
        let old = self.codes[u * self.n + v];
        if old != AdjacencyCode::None {
            self.rows[old as usize - 1][u].set(v, false);
        }
        if code != AdjacencyCode::None {
            self.rows[code as usize - 1][u].insert(v);
        }
        self.codes[u * self.n + v] = code;
    }

    #[inline]
    pub(crate) fn code_unchecked(&self, u: usize, v: usize) -> AdjacencyCode {
        self.codes[u * self.n + v]
    }

    pub fn adjacency_code(&self, u: usize, v: usize) -> Result<AdjacencyCode> {
        self.check_pair(u, v)?;
        Ok(self.code_unchecked(u, v))
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u != v && u < self.n && v < self.n && self.code_unchecked(u, v).has_forward()
    }

    /// Every arc `(u, v)` in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| {
            (0..n)
                .filter(move |&v| self.has_arc(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn arc_count(&self) -> usize {
        self.rows[1]
            .iter()
            .chain(&self.rows[2])
            .map(|r| r.count_ones(..))
            .sum()
    }

    /// Number of unordered pairs carrying each code, indexed by code value.
    pub fn code_counts(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                counts[self.code_unchecked(u, v) as usize] += 1;
            }
        }
        // 1 and 2 are the same pair seen from either end
        counts[1] += counts[2];
        counts[2] = counts[1];
        counts
    }

    pub fn is_undirected(&self) -> bool {
        self.rows[0].iter().all(|r| r.is_clear())
    }

    /// Available degree of `v` with respect to `set`.
    #[inline]
    pub(crate) fn degree_in(&self, v: usize, set: &VertexSet) -> DegreeTriple {
        DegreeTriple {
            d3: self.rows[2][v].intersection_count(set),
            d2: self.rows[1][v].intersection_count(set),
            d1: self.rows[0][v].intersection_count(set),
        }
    }

    #[inline]
    pub(crate) fn has_links_in(&self, v: usize, set: &VertexSet) -> bool {
        self.rows.iter().any(|r| !r[v].is_disjoint(set))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(())
    }

    fn check_set(&self, set: &VertexSet) -> Result<()> {
        match set.ones().find(|&x| x >= self.n) {
            Some(x) => Err(Error::VertexOutOfRange {
                vertex: x,
                n: self.n,
            }),
            None => Ok(()),
        }
    }

    pub fn available_degree(&self, v: usize, set: &VertexSet) -> Result<DegreeTriple> {
        self.check_vertex(v)?;
        self.check_set(set)?;
        let set = self.fit(set);
        Ok(self.degree_in(v, &set))
    }

    pub fn has_links(&self, v: usize, set: &VertexSet) -> Result<bool> {
        Ok(!self.available_degree(v, set)?.is_zero())
    }

    /// The degree every member of `cell` shares with respect to `set`, if they share one.
    pub fn uniform_degree(&self, cell: &[usize], set: &VertexSet) -> Result<Option<DegreeTriple>> {
        let (&first, rest) = cell
            .split_first()
            .ok_or_else(|| Error::invalid("uniform degree of an empty cell"))?;
        self.check_vertex(first)?;
        for &v in rest {
            self.check_vertex(v)?;
        }
        self.check_set(set)?;
        let set = self.fit(set);
        let d = self.degree_in(first, &set);
        Ok(rest
            .iter()
            .all(|&v| self.degree_in(v, &set) == d)
            .then_some(d))
    }

    // Bitsets supplied by callers may have a different capacity.
    fn fit<'a>(&self, set: &'a VertexSet) -> std::borrow::Cow<'a, VertexSet> {
        if set.len() == self.n {
            std::borrow::Cow::Borrowed(set)
        } else {
            let mut s = FixedBitSet::with_capacity(self.n);
            s.extend(set.ones().filter(|&x| x < self.n));
            std::borrow::Cow::Owned(s)
        }
    }

    /// Subgraph induced by `set`; vertices are renumbered in ascending order.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<InducedSubgraph> {
        self.check_set(set)?;
        let vertices: Vec<usize> = set.ones().collect();
        let mut graph = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                let code = self.code_unchecked(u, v);
                if code != AdjacencyCode::None {
                    graph.store(i, j, code);
                }
            }
        }
        Ok(InducedSubgraph { graph, vertices })
    }

    /// Relabels every vertex `u` as `f(u)`.
    pub fn apply_permutation(&self, f: &Permutation) -> Result<Graph> {
        if f.len() != self.n {
            return Err(Error::invalid(format!(
                "permutation of {} points applied to a graph with {} vertices",
                f.len(),
                self.n
            )));
        }
        let mut out = Graph::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                let code = self.code_unchecked(u, v);
                if code != AdjacencyCode::None {
                    out.store(f[u], f[v], code);
                }
            }
        }
        Ok(out)
    }

    /// Whether `f` maps `self` onto `other` preserving every adjacency code.
    pub fn is_isomorphism(&self, other: &Graph, f: &[usize]) -> bool {
        if self.n != other.n || f.len() != self.n || !is_bijection(f) {
            return false;
        }
        (0..self.n).all(|u| {
            (0..self.n)
                .all(|v| u == v || self.code_unchecked(u, v) == other.code_unchecked(f[u], f[v]))
        })
    }
}

/// Free-function form of [`Graph::is_isomorphism`].
pub fn is_isomorphism(g: &Graph, h: &Graph, f: &[usize]) -> bool {
    g.is_isomorphism(h, f)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `vertices[new] = old`.
    pub vertices: Vec<usize>,
}

impl InducedSubgraph {
    pub fn new_index(&self, old: usize) -> Option<usize> {
        self.vertices.binary_search(&old).ok()
    }
}

fn is_bijection(f: &[usize]) -> bool {
    let mut seen = vec![false; f.len()];
    f.iter()
        .all(|&x| x < f.len() && !std::mem::replace(&mut seen[x], true))
}

/// A bijection on `0..n`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        if !is_bijection(&images) {
            return Err(Error::invalid("image vector is not a bijection"));
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self` after `first`: `x -> self(first(x))`.
    pub fn compose(&self, first: &Permutation) -> Self {
        Permutation(first.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixes(&self, v: usize) -> bool {
        self.0[v] == v
    }
}

impl std::ops::Index<usize> for Permutation {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl std::ops::Deref for Permutation {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn set(g: &Graph, xs: &[usize]) -> VertexSet {
        g.vertex_set(xs.iter().copied())
    }

    #[test]
    fn codes_of_single_and_reciprocal_arcs() {
        let g = Graph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(g.adjacency_code(0, 1).unwrap(), AdjacencyCode::Outgoing);
        assert_eq!(g.adjacency_code(1, 0).unwrap(), AdjacencyCode::Incoming);
        let g = Graph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.adjacency_code(0, 1).unwrap().value(), 3);
        let g = Graph::empty(2);
        assert_eq!(g.adjacency_code(0, 1).unwrap().value(), 0);
    }

    #[test]
    fn code_errors() {
        let g = Graph::empty(2);
        assert!(matches!(
            g.adjacency_code(0, 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            g.adjacency_code(0, 2),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        let mut g = Graph::empty(2);
        assert!(g.add_arc(1, 1).is_err());
    }

    #[test]
    fn inverse_table() {
        use AdjacencyCode::*;
        assert_eq!(None.inverse(), None);
        assert_eq!(Incoming.inverse(), Outgoing);
        assert_eq!(Outgoing.inverse(), Incoming);
        assert_eq!(Both.inverse(), Both);
    }

    #[test]
    fn available_degree_examples() {
        let t = triangle();
        assert_eq!(
            t.available_degree(0, &set(&t, &[])).unwrap(),
            DegreeTriple::ZERO
        );
        assert_eq!(
            t.available_degree(0, &set(&t, &[1, 2])).unwrap(),
            DegreeTriple::new(2, 0, 0)
        );
        // the self pair contributes nothing
        assert_eq!(
            t.available_degree(0, &set(&t, &[0, 1, 2])).unwrap(),
            DegreeTriple::new(2, 0, 0)
        );
        let arc = Graph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(
            arc.available_degree(0, &set(&arc, &[1])).unwrap(),
            DegreeTriple::new(0, 1, 0)
        );
    }

    #[test]
    fn has_links_examples() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(!g.has_links(2, &g.all_vertices()).unwrap());
        let t = triangle();
        assert!(t.has_links(0, &set(&t, &[1])).unwrap());
        let arc = Graph::from_arcs(2, [(0, 1)]).unwrap();
        assert!(arc.has_links(0, &set(&arc, &[1])).unwrap());
    }

    #[test]
    fn uniform_degree_examples() {
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(
            c4.uniform_degree(&[0, 2], &set(&c4, &[1, 3])).unwrap(),
            Some(DegreeTriple::new(2, 0, 0))
        );
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            p3.uniform_degree(&[0, 1], &p3.all_vertices()).unwrap(),
            None
        );
        assert_eq!(
            p3.uniform_degree(&[1], &set(&p3, &[0])).unwrap(),
            Some(p3.available_degree(1, &set(&p3, &[0])).unwrap())
        );
        assert!(p3.uniform_degree(&[], &p3.all_vertices()).is_err());
    }

    #[test]
    fn induced_subgraph_examples() {
        let t = triangle();
        assert_eq!(t.induced_subgraph(&t.all_vertices()).unwrap().graph, t);
        let e = t.induced_subgraph(&set(&t, &[0, 1])).unwrap();
        assert_eq!(e.graph, Graph::from_edges(2, [(0, 1)]).unwrap());
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let s = c4.induced_subgraph(&set(&c4, &[0, 2])).unwrap();
        assert_eq!(s.graph.n(), 2);
        assert_eq!(s.graph.arc_count(), 0);
        assert_eq!(s.new_index(2), Some(1));
    }

    #[test]
    fn permutation_examples() {
        let arc = Graph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(
            arc.apply_permutation(&Permutation::identity(2)).unwrap(),
            arc
        );
        let swapped = arc
            .apply_permutation(&Permutation::new(vec![1, 0]).unwrap())
            .unwrap();
        assert_eq!(swapped, Graph::from_arcs(2, [(1, 0)]).unwrap());
        let t = triangle();
        assert_eq!(
            t.apply_permutation(&Permutation::new(vec![2, 0, 1]).unwrap())
                .unwrap(),
            t
        );
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn isomorphism_check_examples() {
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert!(c5.is_isomorphism(&c5, &[0, 1, 2, 3, 4]));
        let rotated = Graph::from_edges(5, (0..5).map(|i| ((i + 2) % 5, (i + 3) % 5))).unwrap();
        assert!(c5.is_isomorphism(&rotated, &[2, 3, 4, 0, 1]));
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let t = triangle();
        for f in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            assert!(!p3.is_isomorphism(&t, &f));
        }
        assert!(!p3.is_isomorphism(&c5, &[0, 1, 2]));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::vec(0u8..4, n * (n - 1) / 2).prop_map(move |codes| {
                let mut g = Graph::empty(n);
                let mut it = codes.into_iter();
                for u in 0..n {
                    for v in (u + 1)..n {
                        g.set_code(u, v, AdjacencyCode::from_u8(it.next().unwrap()).unwrap())
                            .unwrap();
                    }
                }
                g
            })
        })
    }

    fn arb_graph_and_perm() -> impl Strategy<Value = (Graph, Vec<usize>)> {
        arb_graph().prop_flat_map(|g| {
            let n = g.n();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    }

    proptest! {
        #[test]
        fn codes_are_inverse_symmetric(g in arb_graph()) {
            for u in g.vertices() {
                for v in g.vertices().filter(|&v| v != u) {
                    prop_assert_eq!(g.adjacency_code(u, v).unwrap(), g.adjacency_code(v, u).unwrap().inverse());
                }
            }
        }

        #[test]
        fn degree_is_additive_over_disjoint_sets(g in arb_graph(), mask in any::<u16>()) {
            let a = g.vertex_set(g.vertices().filter(|&x| mask & (1 << x) != 0));
            let b = g.vertex_set(g.vertices().filter(|&x| mask & (1 << x) == 0));
            for v in g.vertices() {
                prop_assert_eq!(
                    g.available_degree(v, &g.all_vertices()).unwrap(),
                    g.available_degree(v, &a).unwrap() + g.available_degree(v, &b).unwrap()
                );
            }
        }

        #[test]
        fn relabeling_is_an_isomorphism((g, f) in arb_graph_and_perm()) {
            let f = Permutation::new(f).unwrap();
            let h = g.apply_permutation(&f).unwrap();
            prop_assert!(g.is_isomorphism(&h, &f));
        }

        #[test]
        fn induced_degrees_agree(g in arb_graph(), mask in any::<u16>()) {
            let s = g.vertex_set(g.vertices().filter(|&x| mask & (1 << x) != 0));
            let sub = g.induced_subgraph(&s).unwrap();
            for (new, &old) in sub.vertices.iter().enumerate() {
                prop_assert_eq!(
                    sub.graph.available_degree(new, &sub.graph.all_vertices()).unwrap(),
                    g.available_degree(old, &s).unwrap()
                );
            }
        }
    }
}
