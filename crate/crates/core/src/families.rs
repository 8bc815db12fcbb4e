//! Hard instance families built from small regular components.
//!
//! * SRG joins: copies of the Shrikhande and 4×4 rook graphs, every vertex
//!   joined to every vertex of the other components.
//! * Tripartite unions: three-part circulant digraphs of two kinds, with arcs
//!   from the `A` part of each component to the `B` part of every other one.
//! * Two-level graphs: cubic components joined on their 3-vertex orbits into
//!   blocks, and blocks joined on their 1-vertex orbits.
//!
//! A negative instance differs from its positive partner by swapping the type
//! of exactly one component.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::io::{format_graph, parse};
use crate::oracle::random_iso_pair;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub graph: Graph,
    pub tag: String,
    /// Named vertex subsets used by the connection schemes.
    pub marked_sets: BTreeMap<String, Vec<usize>>,
}

impl Component {
    pub fn new(graph: Graph, tag: impl Into<String>) -> Self {
        Component {
            graph,
            tag: tag.into(),
            marked_sets: BTreeMap::new(),
        }
    }

    pub fn with_set(mut self, name: &str, mut vertices: Vec<usize>) -> Result<Self> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.graph.n()) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.graph.n(),
            });
        }
        vertices.sort_unstable();
        vertices.dedup();
        self.marked_sets.insert(name.to_string(), vertices);
        Ok(self)
    }

    pub fn marked(&self, name: &str) -> Result<&[usize]> {
        self.marked_sets
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "component `{}` has no marked set `{name}`",
                    self.tag
                ))
            })
    }

    fn marked_of_size(&self, name: &str, size: usize) -> Result<&[usize]> {
        let set = self.marked(name)?;
        if set.len() != size {
            return Err(Error::invalid(format!(
                "marked set `{name}` of component `{}` has {} vertices, expected {size}",
                self.tag,
                set.len()
            )));
        }
        Ok(set)
    }
}

/// Parses a graph file whose `s <name> <v>...` lines become marked sets.
pub fn load_component(bytes: &[u8]) -> Result<Component> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::parse(1, format!("input is not UTF-8: {e}")))?;
    let (graph, sets) = parse(text)?;
    let mut c = Component::new(graph, "user");
    for s in sets {
        c.marked_sets.insert(s.name, {
            let mut v = s.vertices;
            v.sort_unstable();
            v.dedup();
            v
        });
    }
    Ok(c)
}

pub fn save_component(c: &Component) -> Vec<u8> {
    let sets: Vec<(&str, &[usize])> = c
        .marked_sets
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_slice()))
        .collect();
    format_graph(&c.graph, &sets).into_bytes()
}

fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Paley graph on `q` vertices: `u ~ v` iff `u - v` is a nonzero square mod `q`.
pub fn paley_graph(q: usize) -> Result<Graph> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(Error::invalid(format!(
            "Paley graphs need a prime q ≡ 1 (mod 4), got {q}"
        )));
    }
    let mut square = vec![false; q];
    for x in 1..q {
        square[x * x % q] = true;
    }
    Graph::from_edges(
        q,
        (0..q)
            .flat_map(|u| ((u + 1)..q).map(move |v| (u, v)))
            .filter(|&(u, v)| square[v - u]),
    )
}

/// Rows and columns of a 4×4 grid; vertex `4i + j` is cell `(i, j)`.
pub fn rook_graph_4x4() -> Graph {
    let mut g = Graph::empty(16);
    for u in 0..16 {
        for v in (u + 1)..16 {
            if u / 4 == v / 4 || u % 4 == v % 4 {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// Cayley graph on Z4 × Z4 with connection set ±(1,0), ±(0,1), ±(1,1);
/// vertex `4a + b` is `(a, b)`.
pub fn shrikhande_graph() -> Graph {
    let mut g = Graph::empty(16);
    for a in 0..4 {
        for b in 0..4 {
            for (da, db) in [(1, 0), (0, 1), (1, 1)] {
                g.add_edge(4 * a + b, 4 * ((a + da) % 4) + (b + db) % 4)
                    .expect("in range");
            }
        }
    }
    g
}

/// Parameters `(n, k, λ, μ)` when `g` is strongly regular. Complete and
/// edgeless graphs have no defined `μ` or `λ` and give `None`.
pub fn verify_srg(g: &Graph) -> Result<Option<(usize, usize, usize, usize)>> {
    if !g.is_undirected() {
        return Err(Error::invalid(
            "strong regularity is defined for undirected graphs",
        ));
    }
    let n = g.n();
    let neighbors: Vec<_> = g
        .vertices()
        .map(|u| g.vertex_set(g.vertices().filter(|&v| g.has_arc(u, v))))
        .collect();
    let Some(k) = neighbors.first().map(|s| s.count_ones(..)) else {
        return Ok(None);
    };
    if neighbors.iter().any(|s| s.count_ones(..) != k) {
        return Ok(None);
    }
    let (mut lambda, mut mu) = (None, None);
    for u in 0..n {
        for v in (u + 1)..n {
            let common = neighbors[u].intersection_count(&neighbors[v]);
            let slot = if g.has_arc(u, v) {
                &mut lambda
            } else {
                &mut mu
            };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => return Ok(None),
                Some(_) => {}
            }
        }
    }
    Ok(lambda.zip(mu).map(|(l, m)| (n, k, l, m)))
}

/// Places components side by side, numbering them consecutively.
fn disjoint_union(components: &[&Component]) -> (Graph, Vec<usize>) {
    let total = components.iter().map(|c| c.graph.n()).sum();
    let mut g = Graph::empty(total);
    let mut offsets = Vec::with_capacity(components.len());
    let mut base = 0;
    for c in components {
        offsets.push(base);
        for (u, v) in c.graph.arcs() {
            g.add_arc(base + u, base + v).expect("in range");
        }
        base += c.graph.n();
    }
    (g, offsets)
}

/// Disjoint copies with an undirected edge between every two vertices of
/// different components.
pub fn complete_join(components: &[Component]) -> Result<Graph> {
    if components.is_empty() {
        return Err(Error::invalid("a join needs at least one component"));
    }
    let refs: Vec<&Component> = components.iter().collect();
    Ok(join_refs(&refs))
}

fn join_refs(components: &[&Component]) -> Graph {
    let (mut g, offsets) = disjoint_union(components);
    for i in 0..components.len() {
        for j in (i + 1)..components.len() {
            for u in 0..components[i].graph.n() {
                for v in 0..components[j].graph.n() {
                    g.add_edge(offsets[i] + u, offsets[j] + v)
                        .expect("in range");
                }
            }
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripartiteKind {
    Alpha,
    Beta,
}

/// Three parts `P0, P1, P2` of `k` vertices each; vertex `j` of `P_i` is
/// `i*k + j` and has arcs to vertices `j` and `j + 1` of the next part, except
/// that in the beta kind the arcs from `P2` go to `j` and `j - 1`. The alpha
/// kind has `k` directed triangles and the beta kind `3k`. Marks `A = P0`
/// and `B = P1`.
pub fn tripartite_component(kind: TripartiteKind, k: usize) -> Result<Component> {
    if k < 5 {
        return Err(Error::invalid(format!(
            "tripartite components need parts of at least 5 vertices, got {k}"
        )));
    }
    let last_shift = match kind {
        TripartiteKind::Alpha => 1,
        TripartiteKind::Beta => k - 1,
    };
    let mut g = Graph::empty(3 * k);
    for part in 0..3 {
        let next = (part + 1) % 3;
        let shift = if part == 2 { last_shift } else { 1 };
        for j in 0..k {
            g.add_arc(part * k + j, next * k + j)?;
            g.add_arc(part * k + j, next * k + (j + shift) % k)?;
        }
    }
    let tag = match kind {
        TripartiteKind::Alpha => "tripartite-alpha",
        TripartiteKind::Beta => "tripartite-beta",
    };
    Component::new(g, tag)
        .with_set("A", (0..k).collect())?
        .with_set("B", (k..2 * k).collect())
}

/// Disjoint copies plus arcs from every `A` vertex of each component to every
/// `B` vertex of every other component. With `directed == false` every arc,
/// inside components too, becomes an undirected edge.
pub fn tripartite_union(components: &[Component], directed: bool) -> Result<Graph> {
    if components.is_empty() {
        return Err(Error::invalid("a union needs at least one component"));
    }
    let refs: Vec<&Component> = components.iter().collect();
    tripartite_refs(&refs, directed)
}

fn tripartite_refs(components: &[&Component], directed: bool) -> Result<Graph> {
    let (mut g, offsets) = disjoint_union(components);
    for (i, a) in components.iter().enumerate() {
        let from = a.marked("A")?;
        for (j, b) in components.iter().enumerate() {
            if i == j {
                continue;
            }
            for &u in from {
                for &v in b.marked("B")? {
                    g.add_arc(offsets[i] + u, offsets[j] + v)?;
                }
            }
        }
    }
    if !directed {
        let arcs: Vec<_> = g.arcs().collect();
        for (u, v) in arcs {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Two cubic 10-vertex components with the same orbit sizes. Vertex 0 is the
/// centre `c` (mark `orbit1`), 1..=3 are its neighbours `a1..a3` (mark
/// `orbit3`), and `a_i` is adjacent to `b_{2i-1}, b_{2i}` (vertices 4..=9).
/// In the first the `b` vertices form the cycle `b1 b2 ... b6`, giving three
/// triangles; in the second they form the triangles `b1 b3 b5` and `b2 b4 b6`.
pub fn two_level_components() -> [Component; 2] {
    let b = |i: usize| 3 + i;
    let mut spokes = vec![(0, 1), (0, 2), (0, 3)];
    for i in 1..=3 {
        spokes.push((i, b(2 * i - 1)));
        spokes.push((i, b(2 * i)));
    }
    let build = |cycles: &[&[usize]], tag: &str| {
        let rims = cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |i| (b(c[i]), b(c[(i + 1) % c.len()]))));
        let g = Graph::from_edges(10, spokes.iter().copied().chain(rims)).expect("in range");
        Component::new(g, tag)
            .with_set("orbit1", vec![0])
            .and_then(|c| c.with_set("orbit3", vec![1, 2, 3]))
            .expect("marks in range")
    };
    [
        build(&[&[1, 2, 3, 4, 5, 6]], "cubic-hexagon"),
        build(&[&[1, 3, 5], &[2, 4, 6]], "cubic-two-triangles"),
    ]
}

/// `n * m` components, each of one of the two `base` types. Components are
/// grouped into `m` blocks of `n`; inside a block the `orbit3` sets form a
/// complete `n`-partite graph, and the `orbit1` sets of all components form a
/// complete `m`-partite graph with one part per block. `types[s]` selects the
/// base of slot `s`.
pub fn two_level_graph(
    base: [&Component; 2],
    n: usize,
    m: usize,
    types: &[usize],
) -> Result<Graph> {
    if n == 0 || m == 0 {
        return Err(Error::invalid("two-level graphs need n, m ≥ 1"));
    }
    if types.len() != n * m || types.iter().any(|&t| t > 1) {
        return Err(Error::invalid(format!(
            "expected {} component types of 0 or 1",
            n * m
        )));
    }
    for c in base {
        c.marked_of_size("orbit1", 1)?;
        c.marked_of_size("orbit3", 3)?;
    }
    let slots: Vec<&Component> = types.iter().map(|&t| base[t]).collect();
    let (mut g, offsets) = disjoint_union(&slots);
    let orbit = |s: usize, name: &str| -> Vec<usize> {
        slots[s].marked_sets[name]
            .iter()
            .map(|&v| offsets[s] + v)
            .collect()
    };
    for block in 0..m {
        for i in 0..n {
            for j in (i + 1)..n {
                for &u in &orbit(block * n + i, "orbit3") {
                    for &v in &orbit(block * n + j, "orbit3") {
                        g.add_edge(u, v)?;
                    }
                }
            }
        }
    }
    for s in 0..n * m {
        for t in (s + 1)..n * m {
            if s / n != t / n {
                g.add_edge(orbit(s, "orbit1")[0], orbit(t, "orbit1")[0])?;
            }
        }
    }
    Ok(g)
}

/// [`two_level_graph`] with seeded component types; `negative` flips the type
/// of one seeded slot.
pub fn two_level_family(
    base: [&Component; 2],
    n: usize,
    m: usize,
    negative: bool,
    seed: u64,
) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut types: Vec<usize> = (0..n * m).map(|_| rng.gen_range(0..2)).collect();
    if negative && !types.is_empty() {
        let s = rng.gen_range(0..types.len());
        types[s] ^= 1;
    }
    two_level_graph(base, n, m, &types)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `copies` components, each Shrikhande or rook 4×4 by seed.
    SrgJoin { copies: usize },
    /// `alpha` and `beta` components with parts of size `k`.
    Tripartite {
        alpha: usize,
        beta: usize,
        k: usize,
        directed: bool,
    },
    /// Built-in cubic components in `m` blocks of `n`.
    TwoLevel { n: usize, m: usize },
}

impl Family {
    pub fn id(&self) -> &'static str {
        match self {
            Family::SrgJoin { .. } => "srg-join",
            Family::Tripartite { directed: true, .. } => "tripartite",
            Family::Tripartite {
                directed: false, ..
            } => "tripartite-undirected",
            Family::TwoLevel { .. } => "two-level",
        }
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            Family::SrgJoin { copies } => 16 * copies,
            Family::Tripartite { alpha, beta, k, .. } => 3 * k * (alpha + beta),
            Family::TwoLevel { n, m } => 10 * n * m,
        }
    }

    fn slots(&self) -> usize {
        match *self {
            Family::SrgJoin { copies } => copies,
            Family::Tripartite { alpha, beta, .. } => alpha + beta,
            Family::TwoLevel { n, m } => n * m,
        }
    }
}

/// One generated instance: a family, its polarity and a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub negative: bool,
    pub seed: u64,
}

/// A generated pair and whether it is isomorphic by construction.
#[derive(Debug, Clone)]
pub struct InstancePair {
    pub g: Graph,
    pub h: Graph,
    pub isomorphic: bool,
}

impl FamilySpec {
    pub fn new(family: Family, negative: bool, seed: u64) -> Self {
        FamilySpec {
            family,
            negative,
            seed,
        }
    }

    // Slot types in component order, the slot a negative instance flips, and
    // the relabeling seed for the second graph.
    fn layout(&self) -> Result<(Vec<usize>, usize, u64)> {
        let slots = self.family.slots();
        if slots == 0 {
            return Err(Error::invalid(
                "a family instance needs at least one component",
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let types: Vec<usize> = match self.family {
            Family::Tripartite { alpha, beta, .. } => {
                let mut t = vec![0; alpha];
                t.resize(alpha + beta, 1);
                t.shuffle(&mut rng);
                t
            }
            _ => (0..slots).map(|_| rng.gen_range(0..2)).collect(),
        };
        let flip = rng.gen_range(0..slots);
        Ok((types, flip, rng.gen()))
    }

    fn build(&self, types: &[usize]) -> Result<Graph> {
        match self.family {
            Family::SrgJoin { .. } => {
                let base = [
                    Component::new(shrikhande_graph(), "shrikhande"),
                    Component::new(rook_graph_4x4(), "rook4x4"),
                ];
                let refs: Vec<&Component> = types.iter().map(|&t| &base[t]).collect();
                Ok(join_refs(&refs))
            }
            Family::Tripartite { k, directed, .. } => {
                let base = [
                    tripartite_component(TripartiteKind::Alpha, k)?,
                    tripartite_component(TripartiteKind::Beta, k)?,
                ];
                let refs: Vec<&Component> = types.iter().map(|&t| &base[t]).collect();
                tripartite_refs(&refs, directed)
            }
            Family::TwoLevel { n, m } => {
                let [x, y] = two_level_components();
                two_level_graph([&x, &y], n, m, types)
            }
        }
    }

    /// The first graph of the pair.
    pub fn generate(&self) -> Result<Graph> {
        let (types, _, _) = self.layout()?;
        self.build(&types)
    }

    /// The first graph and a relabeled partner, which for a negative
    /// instance has one component of the other type.
    pub fn pair(&self) -> Result<InstancePair> {
        let (types, flip, relabel_seed) = self.layout()?;
        let g = self.build(&types)?;
        let partner = if self.negative {
            let mut swapped = types;
            swapped[flip] ^= 1;
            self.build(&swapped)?
        } else {
            g.clone()
        };
        let (h, _): (Graph, Permutation) = random_iso_pair(&partner, relabel_seed);
        Ok(InstancePair {
            g,
            h,
            isomorphic: !self.negative,
        })
    }
}
