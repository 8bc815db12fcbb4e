//! Exhaustive ground truth for small graphs, plus seeded random inputs.
//!
//! The searches here share no code with the refinement machinery: they try
//! every bijection in lexicographic order, pruning only on whole-graph degree
//! and on adjacency codes between already assigned vertices.

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DegreeTriple, Graph, Permutation};

/// Largest vertex count the exhaustive searches accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_n: usize,
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit { max_n: 8 }
    }
}

impl OracleLimit {
    pub fn new(max_n: usize) -> Self {
        OracleLimit { max_n }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::OracleLimit { n, max: self.max_n });
        }
        Ok(())
    }

    /// First isomorphism `g -> h` in lexicographic order, if any.
    pub fn isomorphism(&self, g: &Graph, h: &Graph) -> Result<Option<Permutation>> {
        self.check(g.n().max(h.n()))?;
        if g.n() != h.n() {
            return Ok(None);
        }
        let mut found = None;
        Enumerator::new(g, h).run(&mut |f| {
            found = Some(f.to_vec());
            false
        });
        Ok(found.map(|f| Permutation::new(f).expect("enumerated maps are bijections")))
    }

    /// Exact orbit partition; classes ascending, ordered by smallest member.
    pub fn orbits(&self, g: &Graph) -> Result<Vec<Vec<usize>>> {
        self.check(g.n())?;
        let mut uf = UnionFind::<usize>::new(g.n());
        Enumerator::new(g, g).run(&mut |f| {
            for (u, &v) in f.iter().enumerate() {
                uf.union(u, v);
            }
            true
        });
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; g.n()];
        for v in g.vertices() {
            let r = uf.find(v);
            if slot[r] == usize::MAX {
                slot[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[r]].push(v);
        }
        Ok(classes)
    }

    /// Number of automorphisms of `g`.
    pub fn automorphism_count(&self, g: &Graph) -> Result<usize> {
        self.check(g.n())?;
        let mut count = 0;
        Enumerator::new(g, g).run(&mut |_| {
            count += 1;
            true
        });
        Ok(count)
    }
}

/// [`OracleLimit::isomorphism`] with the default limit.
pub fn brute_force_isomorphism(g: &Graph, h: &Graph) -> Result<Option<Permutation>> {
    OracleLimit::default().isomorphism(g, h)
}

/// [`OracleLimit::orbits`] with the default limit.
pub fn brute_force_orbits(g: &Graph) -> Result<Vec<Vec<usize>>> {
    OracleLimit::default().orbits(g)
}

struct Enumerator<'a> {
    g: &'a Graph,
    h: &'a Graph,
    deg_g: Vec<DegreeTriple>,
    deg_h: Vec<DegreeTriple>,
    image: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> Enumerator<'a> {
    fn new(g: &'a Graph, h: &'a Graph) -> Self {
        let (all_g, all_h) = (g.all_vertices(), h.all_vertices());
        Enumerator {
            g,
            h,
            deg_g: g.vertices().map(|u| g.degree_in(u, &all_g)).collect(),
            deg_h: h.vertices().map(|u| h.degree_in(u, &all_h)).collect(),
            image: Vec::with_capacity(g.n()),
            used: vec![false; h.n()],
        }
    }

    /// Calls `visit` on each isomorphism until it returns false.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        self.extend(visit);
    }

    fn extend(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let u = self.image.len();
        if u == self.g.n() {
            return visit(&self.image);
        }
        for v in 0..self.h.n() {
            if self.used[v] || self.deg_g[u] != self.deg_h[v] {
                continue;
            }
            let consistent = self
                .image
                .iter()
                .enumerate()
                .all(|(w, &x)| self.g.code_unchecked(u, w) == self.h.code_unchecked(v, x));
            if !consistent {
                continue;
            }
            self.image.push(v);
            self.used[v] = true;
            let keep_going = self.extend(visit);
            self.used[v] = false;
            self.image.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Random digraph where each of the two directions between every pair is
/// present independently with probability `arc_probability` (clamped to
/// `[0, 1]`). The same seed always yields the same graph.
pub fn random_digraph(n: usize, arc_probability: f64, seed: u64) -> Graph {
    let p = if arc_probability.is_nan() {
        0.0
    } else {
        arc_probability.clamp(0.0, 1.0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                g.add_arc(u, v).expect("in range");
            }
            if rng.gen_bool(p) {
                g.add_arc(v, u).expect("in range");
            }
        }
    }
    g
}

pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Permutation::new(images).expect("shuffle preserves bijectivity")
}

/// `g` relabeled by a seeded random permutation, and that permutation.
pub fn random_iso_pair(g: &Graph, seed: u64) -> (Graph, Permutation) {
    let f = random_permutation(g.n(), seed);
    let h = g.apply_permutation(&f).expect("permutation sized to g");
    (h, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AdjacencyCode;
    use proptest::prelude::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn identity_for_equal_graphs() {
        let g = cycle(5);
        assert!(brute_force_isomorphism(&g, &g)
            .unwrap()
            .unwrap()
            .is_identity());
    }

    #[test]
    fn cycle_and_clique_differ() {
        assert!(brute_force_isomorphism(&cycle(4), &complete(4))
            .unwrap()
            .is_none());
        let two_triangles =
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(brute_force_isomorphism(&cycle(6), &two_triangles)
            .unwrap()
            .is_none());
    }

    #[test]
    fn reversed_arc_maps_by_swap() {
        let a = Graph::from_arcs(2, [(0, 1)]).unwrap();
        let b = Graph::from_arcs(2, [(1, 0)]).unwrap();
        assert_eq!(
            brute_force_isomorphism(&a, &b).unwrap().unwrap().images(),
            &[1, 0]
        );
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(
            brute_force_orbits(&complete(3)).unwrap(),
            vec![vec![0, 1, 2]]
        );
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            brute_force_orbits(&path).unwrap(),
            vec![vec![0, 2], vec![1]]
        );
        let arc = Graph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(brute_force_orbits(&arc).unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(
            OracleLimit::default()
                .automorphism_count(&cycle(5))
                .unwrap(),
            10
        );
    }

    #[test]
    fn limit_is_enforced() {
        let g = Graph::empty(9);
        assert!(matches!(
            brute_force_orbits(&g),
            Err(Error::OracleLimit { n: 9, max: 8 })
        ));
        assert!(OracleLimit::new(9).orbits(&g).is_ok());
    }

    #[test]
    fn random_digraph_extremes() {
        assert_eq!(random_digraph(6, 0.0, 3).arc_count(), 0);
        let full = random_digraph(6, 1.0, 3);
        for u in 0..6 {
            for v in 0..6 {
                if u != v {
                    assert_eq!(full.adjacency_code(u, v).unwrap(), AdjacencyCode::Both);
                }
            }
        }
        assert_eq!(random_digraph(10, 0.3, 42), random_digraph(10, 0.3, 42));
    }

    #[test]
    fn iso_pair_is_consistent() {
        let g = random_digraph(7, 0.4, 1);
        let (h, f) = random_iso_pair(&g, 2);
        assert!(g.is_isomorphism(&h, &f));
    }

    proptest! {
        #[test]
        fn relabelings_are_found(n in 1usize..8, p in 0.0f64..1.0, s1: u64, s2: u64) {
            let g = random_digraph(n, p, s1);
            let (h, _) = random_iso_pair(&g, s2);
            let f = brute_force_isomorphism(&g, &h).unwrap();
            prop_assert!(f.is_some_and(|f| g.is_isomorphism(&h, &f)));
        }
    }
}
