//! Limited automorphism search at backtracking points.
//!
//! For each backtracking level, from the last to the first, every other vertex
//! of the pivot cell is tried as a pivot while keeping the earlier levels
//! fixed. When the rest of the sequence can be rebuilt compatibly, the two
//! sequences yield an automorphism; it is validated, stored, and its cycles
//! merge classes. A level whose whole pivot cell ends up in one class no longer
//! needs backtracking and is relabeled as a vertex refinement.

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::matcher::{automorphism_at, MatchOptions, MatchStats, Target};
use crate::sequence::{RefinementKind, SequenceOfPartitions};

/// Vertex classes known to lie inside automorphism orbits, with the
/// automorphisms that justify them.
#[derive(Debug, Clone)]
pub struct SemiorbitPartition {
    n: usize,
    classes: UnionFind<usize>,
    witnesses: Vec<Permutation>,
}

impl SemiorbitPartition {
    /// Every vertex in its own class.
    pub fn singletons(n: usize) -> Self {
        SemiorbitPartition {
            n,
            classes: UnionFind::new(n),
            witnesses: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn same_class(&self, u: usize, v: usize) -> bool {
        u == v || (u < self.n && v < self.n && self.classes.equiv(u, v))
    }

    /// Joins the class of every `u` with the class of `witness[u]`. Fails
    /// unless `witness` is an automorphism of `g`. Returns whether any two
    /// classes were joined; the witness is kept only in that case.
    pub fn merge_classes(&mut self, g: &Graph, witness: &Permutation) -> Result<bool> {
        if g.n() != self.n || !g.is_isomorphism(g, witness) {
            return Err(Error::invalid(
                "witness is not an automorphism of the graph",
            ));
        }
        let mut merged = false;
        for (u, &v) in witness.iter().enumerate() {
            merged |= self.classes.union(u, v);
        }
        if merged {
            self.witnesses.push(witness.clone());
        }
        Ok(merged)
    }

    /// Classes in ascending order, sorted by smallest member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let labels = self.classes.clone().into_labeling();
        let mut slot = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (v, &r) in labels.iter().enumerate() {
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(v);
        }
        out
    }

    pub fn witnesses(&self) -> &[Permutation] {
        &self.witnesses
    }

    /// Rebuilds the classes from the stored witnesses alone and checks that
    /// each witness is an automorphism of `g` and the classes agree.
    pub fn verify(&self, g: &Graph) -> bool {
        if g.n() != self.n {
            return false;
        }
        let mut replay = SemiorbitPartition::singletons(self.n);
        for w in &self.witnesses {
            if !matches!(replay.merge_classes(g, w), Ok(true)) {
                return false;
            }
        }
        replay.classes() == self.classes()
    }
}

/// A sequence of partitions together with the semiorbits found for its graph.
#[derive(Debug, Clone)]
pub struct ExtendedSequence {
    pub seq: SequenceOfPartitions,
    pub orbits: SemiorbitPartition,
}

/// Searches for automorphisms at the backtracking levels of `q`, which must
/// have been generated from `g`.
pub fn find_automorphisms(g: &Graph, q: SequenceOfPartitions) -> Result<ExtendedSequence> {
    find_automorphisms_with(g, q, MatchOptions::default(), &mut MatchStats::default())
}

pub(crate) fn find_automorphisms_with(
    g: &Graph,
    mut seq: SequenceOfPartitions,
    options: MatchOptions,
    stats: &mut MatchStats,
) -> Result<ExtendedSequence> {
    let mut orbits = SemiorbitPartition::singletons(g.n());
    let backtracks: Vec<usize> = (0..seq.final_level())
        .rev()
        .filter(|&l| seq.level(l).kind == Some(RefinementKind::Backtrack))
        .collect();
    let target = Target::new(g, &seq);
    for l in backtracks {
        let level = seq.level(l);
        let p = level
            .pivot_vertex
            .expect("backtracking level has a pivot vertex");
        let cell = level
            .partition
            .cell(level.pivot_index.expect("pivot cell"))
            .to_vec();
        for &c in &cell {
            if orbits.same_class(p, c) {
                continue;
            }
            let found =
                automorphism_at(g, &seq, &target, l, c, orbits.witnesses(), options, stats)?;
            if let Some(w) = found {
                orbits
                    .merge_classes(g, &w)
                    .map_err(|e| Error::Internal(format!("rejected witness at level {l}: {e}")))?;
            }
        }
        if cell.iter().all(|&c| orbits.same_class(p, c)) {
            seq.level_mut(l).kind = Some(RefinementKind::Vertex);
        }
    }
    Ok(ExtendedSequence { seq, orbits })
}
