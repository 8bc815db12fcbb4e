//! Matching a graph against the sequence of partitions of another.
//!
//! The search rebuilds, on the other graph, a sequence whose every level is
//! compatible with the target sequence. Non-backtracking levels have a single
//! choice; backtracking levels try each vertex of the corresponding cell.
//! A node reports an integer level rather than a boolean: the final level on
//! success, the parent's level to make the parent try its next choice, or a
//! lower level to unwind several choice points at once. When every choice at a
//! level fails, the search returns to the nearest earlier level at which two of
//! the current cells still share an ancestor cell; choice points in between can
//! not produce a compatible partition and are skipped.

use std::time::{Duration, Instant};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::automorphism::{find_automorphisms_with, SemiorbitPartition};
use crate::error::{Error, Result};
use crate::graph::{DegreeTriple, Graph, Permutation};
use crate::refinement::{refine, Partition, Pivot, RefinementOutcome};
use crate::sequence::{
    degree_level, generate_sequence, CrossDegrees, Level, RefinementKind, SequenceOfPartitions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchOptions {
    pub backjump: bool,
    pub orbit_pruning: bool,
    pub deadline: Option<Instant>,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            backjump: true,
            orbit_pruning: true,
            deadline: None,
        }
    }
}

impl MatchOptions {
    pub fn with_backjump(mut self, on: bool) -> Self {
        self.backjump = on;
        self
    }

    pub fn with_orbit_pruning(mut self, on: bool) -> Self {
        self.orbit_pruning = on;
        self
    }

    /// Deadline measured from now.
    pub fn with_timeout(mut self, limit: Duration) -> Self {
        self.deadline = Some(Instant::now() + limit);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchStats {
    /// Search nodes visited while matching.
    pub calls: u64,
    /// Failures that returned below the parent level.
    pub backjumps: u64,
    /// Levels passed over by those failures.
    pub levels_skipped: u64,
    /// Search nodes visited while looking for automorphisms.
    pub automorphism_calls: u64,
    /// Decided before any sequence was built.
    pub early_rejection: bool,
    /// The second graph's sequence was used as the target.
    pub swapped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    /// Final level of the target sequence on success, otherwise -1.
    pub level: isize,
    /// Isomorphism from the first graph to the second, present on success.
    pub mapping: Option<Permutation>,
    pub stats: MatchStats,
}

impl MatchOutcome {
    pub fn is_isomorphic(&self) -> bool {
        self.mapping.is_some()
    }
}

/// Degrees of a cell's members toward the remaining set.
#[derive(Debug, Clone, PartialEq, Eq)]
enum CellProfile {
    Uniform(DegreeTriple),
    Mixed(Vec<DegreeTriple>),
}

fn cell_profile(cell: &[usize], p: &Partition, g: &Graph) -> CellProfile {
    let d = g.degree_in(cell[0], p.remaining());
    let mut all: Vec<DegreeTriple> = Vec::new();
    for (i, &u) in cell.iter().enumerate().skip(1) {
        let e = g.degree_in(u, p.remaining());
        if e != d && all.is_empty() {
            all.extend(std::iter::repeat_n(d, i));
        }
        if !all.is_empty() {
            all.push(e);
        }
    }
    if all.is_empty() {
        CellProfile::Uniform(d)
    } else {
        all.sort_unstable();
        CellProfile::Mixed(all)
    }
}

/// Largest level `k < l` at which two cells of level `l` descend from one
/// cell, or -1 when every earlier level keeps them apart.
pub fn backjump_level(q: &SequenceOfPartitions, l: usize) -> isize {
    if l == 0 || l > q.final_level() {
        return -1;
    }
    let mut ancestors: Vec<usize> = (0..q.level(l).partition.len()).collect();
    for k in (0..l).rev() {
        let origins = &q.level(k + 1).origins;
        for a in ancestors.iter_mut() {
            *a = origins[*a].parent;
        }
        let mut seen = vec![false; q.level(k).partition.len()];
        for &a in &ancestors {
            if std::mem::replace(&mut seen[a], true) {
                return k as isize;
            }
        }
    }
    -1
}

/// Per-level data derived once from a target sequence.
pub(crate) struct Target {
    profiles: Vec<Vec<CellProfile>>,
    cross: CrossDegrees,
    backjump_to: Vec<isize>,
}

impl Target {
    pub(crate) fn new(g: &Graph, q: &SequenceOfPartitions) -> Self {
        let profiles = q
            .levels()
            .iter()
            .map(|l| {
                l.partition
                    .cells()
                    .iter()
                    .map(|c| cell_profile(c, &l.partition, g))
                    .collect()
            })
            .collect();
        Target {
            profiles,
            cross: q.final_cross_degrees(g),
            backjump_to: (0..=q.final_level())
                .map(|l| backjump_level(q, l))
                .collect(),
        }
    }
}

struct Frame {
    level: Level,
    candidates: Vec<usize>,
    next: usize,
    tried: Vec<usize>,
    classes: Option<UnionFind<usize>>,
    visited: bool,
}

impl Frame {
    fn new(level: Level) -> Self {
        Frame {
            level,
            candidates: Vec::new(),
            next: 0,
            tried: Vec::new(),
            classes: None,
            visited: false,
        }
    }
}

enum Search {
    Found(SequenceOfPartitions),
    Failed(isize),
}

pub(crate) struct Engine<'a> {
    target: &'a Target,
    seq: &'a SequenceOfPartitions,
    h: &'a Graph,
    witnesses: &'a [Permutation],
    options: MatchOptions,
    stats: MatchStats,
    steps: u64,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(
        target: &'a Target,
        seq: &'a SequenceOfPartitions,
        h: &'a Graph,
        witnesses: &'a [Permutation],
        options: MatchOptions,
    ) -> Self {
        Engine {
            target,
            seq,
            h,
            witnesses,
            options,
            stats: MatchStats::default(),
            steps: 0,
        }
    }

    pub(crate) fn stats(&self) -> MatchStats {
        self.stats
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps % 1024 == 1 {
            if let Some(deadline) = self.options.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::Timeout);
                }
            }
        }
        Ok(())
    }

    fn compatible(&self, l: usize, out: &RefinementOutcome) -> bool {
        let want = self.seq.level(l);
        let (a, b) = (&want.partition, &out.partition);
        if a.len() != b.len()
            || want.origins != out.origins
            || want.discarded.len() != out.discarded.len()
            || a.cells()
                .iter()
                .zip(b.cells())
                .any(|(x, y)| x.len() != y.len())
        {
            return false;
        }
        let same_discards = want
            .discarded
            .iter()
            .zip(&out.discarded)
            .all(|(x, y)| x.position == y.position && x.cell.len() == y.cell.len());
        same_discards
            && b.cells()
                .iter()
                .zip(&self.target.profiles[l])
                .all(|(cell, p)| cell_profile(cell, b, self.h) == *p)
    }

    /// Refines `frame`'s partition at level `l` the way the target does.
    fn descend(&self, frame: &mut Frame, l: usize, vertex: Option<usize>) -> Option<Level> {
        let want = self.seq.level(l);
        let kind = want.kind.expect("non-final level");
        let pivot_index = want.pivot_index.expect("non-final level");
        let p = &frame.level.partition;
        let outcome = match kind {
            RefinementKind::Set => refine(p, self.h, Pivot::Set(&p.cell_set(pivot_index))),
            RefinementKind::Vertex | RefinementKind::Backtrack => {
                let v = vertex.unwrap_or_else(|| p.cell(pivot_index)[0]);
                frame.level.pivot_vertex = Some(v);
                refine(p, self.h, Pivot::Vertex(v))
            }
        };
        frame.level.kind = Some(kind);
        frame.level.pivot_index = Some(pivot_index);
        self.compatible(l + 1, &outcome).then(|| Level {
            partition: outcome.partition,
            kind: None,
            pivot_index: None,
            pivot_vertex: None,
            discarded: outcome.discarded,
            origins: outcome.origins,
        })
    }

    fn fail(&mut self, l: usize) -> isize {
        let l = l as isize;
        let r = if self.options.backjump {
            self.target.backjump_to[l as usize]
        } else {
            l - 1
        };
        if r < l - 1 {
            self.stats.backjumps += 1;
            self.stats.levels_skipped += (l - 1 - r) as u64;
        }
        r
    }

    /// Whether `v` is equivalent to an already tried vertex under the stored
    /// automorphisms that fix every pivot chosen below this frame.
    fn pruned(&self, stack: &mut [Frame], v: usize) -> bool {
        let (below, top) = stack.split_at_mut(stack.len() - 1);
        let frame = &mut top[0];
        if frame.tried.is_empty() {
            return false;
        }
        let classes = frame.classes.get_or_insert_with(|| {
            let fixed: Vec<usize> = below.iter().filter_map(|f| f.level.pivot_vertex).collect();
            let mut uf = UnionFind::new(self.h.n());
            for w in self
                .witnesses
                .iter()
                .filter(|w| fixed.iter().all(|&x| w.fixes(x)))
            {
                for (u, &x) in w.iter().enumerate() {
                    uf.union(u, x);
                }
            }
            uf
        });
        frame.tried.iter().any(|&t| classes.equiv(t, v))
    }

    /// Runs the search from the top of `stack`. Frames below index `floor`
    /// are a fixed prefix: a result that would return into them is a failure.
    fn run(&mut self, mut stack: Vec<Frame>, floor: usize) -> Result<Search> {
        let t = self.seq.final_level();
        let mut ret: Option<isize> = None;
        'search: loop {
            self.tick()?;
            let l = stack.len() - 1;
            if let Some(r) = ret.take() {
                if r != l as isize {
                    stack.pop();
                    if stack.len() <= floor {
                        return Ok(Search::Failed(r));
                    }
                    ret = Some(r);
                    continue;
                }
            }
            let first = !std::mem::replace(&mut stack[l].visited, true);
            match self.seq.level(l).kind {
                None => {
                    debug_assert_eq!(l, t);
                    if first
                        && CrossDegrees::of(&stack[l].level.partition, self.h) == self.target.cross
                    {
                        let levels = stack.into_iter().map(|f| f.level).collect();
                        return Ok(Search::Found(SequenceOfPartitions::from_levels(levels)));
                    }
                }
                Some(RefinementKind::Vertex | RefinementKind::Set) => {
                    if first {
                        if let Some(child) = self.descend(&mut stack[l], l, None) {
                            stack.push(Frame::new(child));
                            self.stats.calls += 1;
                            continue;
                        }
                    }
                }
                Some(RefinementKind::Backtrack) => {
                    if first && stack[l].candidates.is_empty() {
                        let pivot_index = self.seq.level(l).pivot_index.expect("non-final level");
                        stack[l].candidates = stack[l].level.partition.cell(pivot_index).to_vec();
                    }
                    while stack[l].next < stack[l].candidates.len() {
                        let v = stack[l].candidates[stack[l].next];
                        stack[l].next += 1;
                        if self.options.orbit_pruning
                            && !self.witnesses.is_empty()
                            && self.pruned(&mut stack, v)
                        {
                            continue;
                        }
                        stack[l].tried.push(v);
                        if let Some(child) = self.descend(&mut stack[l], l, Some(v)) {
                            stack.push(Frame::new(child));
                            self.stats.calls += 1;
                            continue 'search;
                        }
                    }
                }
            }
            let r = self.fail(l);
            stack.pop();
            if stack.len() <= floor {
                return Ok(Search::Failed(r));
            }
            ret = Some(r);
        }
    }
}

/// Searches for an automorphism of `g` that fixes the pivots of levels
/// `0..l` of its own sequence and maps the pivot of level `l` to `candidate`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn automorphism_at(
    g: &Graph,
    seq: &SequenceOfPartitions,
    target: &Target,
    l: usize,
    candidate: usize,
    witnesses: &[Permutation],
    options: MatchOptions,
    stats: &mut MatchStats,
) -> Result<Option<Permutation>> {
    let mut stack: Vec<Frame> = (0..l)
        .map(|i| {
            let mut f = Frame::new(seq.level(i).clone());
            f.visited = true;
            f
        })
        .collect();
    let mut start = Frame::new(seq.level(l).clone());
    start.candidates = vec![candidate];
    stack.push(start);
    let mut engine = Engine::new(target, seq, g, witnesses, options);
    engine.stats.calls = 1;
    let result = engine.run(stack, l);
    stats.automorphism_calls += engine.stats().calls;
    match result? {
        Search::Found(built) => extract_isomorphism(seq, &built, g, g).map(Some),
        Search::Failed(_) => Ok(None),
    }
}

/// Matches `h` against the target sequence `qg` of `g`, pruning with the
/// semiorbits `oh` of `h`.
pub fn match_sequence(
    g: &Graph,
    qg: &SequenceOfPartitions,
    h: &Graph,
    oh: &SemiorbitPartition,
    options: MatchOptions,
) -> Result<MatchOutcome> {
    if g.n() != h.n() {
        return Ok(MatchOutcome {
            level: -1,
            mapping: None,
            stats: MatchStats::default(),
        });
    }
    let target = Target::new(g, qg);
    let mut engine = Engine::new(&target, qg, h, oh.witnesses(), options);
    let start = degree_level(h);
    let outcome = RefinementOutcome {
        partition: start.partition.clone(),
        discarded: Vec::new(),
        removed_pivot: None,
        origins: start.origins.clone(),
    };
    if !engine.compatible(0, &outcome) {
        return Ok(MatchOutcome {
            level: -1,
            mapping: None,
            stats: engine.stats(),
        });
    }
    engine.stats.calls = 1;
    let result = engine.run(vec![Frame::new(start)], 0)?;
    let stats = engine.stats();
    match result {
        Search::Found(built) => Ok(MatchOutcome {
            level: qg.final_level() as isize,
            mapping: Some(extract_isomorphism(qg, &built, g, h)?),
            stats,
        }),
        Search::Failed(level) => Ok(MatchOutcome {
            level,
            mapping: None,
            stats,
        }),
    }
}

/// Reads the bijection implied by two compatible complete sequences: pivot
/// vertices level by level, discarded cells by position and the final cells
/// by position, members paired in ascending order within each cell.
pub fn extract_isomorphism(
    qg: &SequenceOfPartitions,
    qh: &SequenceOfPartitions,
    g: &Graph,
    h: &Graph,
) -> Result<Permutation> {
    let n = g.n();
    if h.n() != n || qg.final_level() != qh.final_level() {
        return Err(Error::invalid("sequences have different shapes"));
    }
    let mut f = vec![usize::MAX; n];
    let mut pair = |u: usize, v: usize| -> Result<()> {
        if u >= n || v >= n || f[u] != usize::MAX {
            return Err(Error::Internal(format!(
                "vertex {u} paired twice or out of range"
            )));
        }
        f[u] = v;
        Ok(())
    };
    let pair_cells =
        |a: &[usize], b: &[usize], pair: &mut dyn FnMut(usize, usize) -> Result<()>| {
            if a.len() != b.len() {
                return Err(Error::invalid("corresponding cells differ in size"));
            }
            a.iter().zip(b).try_for_each(|(&u, &v)| pair(u, v))
        };
    for (a, b) in qg.levels().iter().zip(qh.levels()) {
        if a.discarded.len() != b.discarded.len() {
            return Err(Error::invalid("sequences discard different cells"));
        }
        for (x, y) in a.discarded.iter().zip(&b.discarded) {
            pair_cells(&x.cell, &y.cell, &mut pair)?;
        }
        match (a.pivot_vertex, b.pivot_vertex) {
            (Some(u), Some(v)) => pair(u, v)?,
            (None, None) => {}
            _ => return Err(Error::invalid("sequences disagree on pivot vertices")),
        }
    }
    let (pa, pb) = (
        &qg.level(qg.final_level()).partition,
        &qh.level(qh.final_level()).partition,
    );
    if pa.len() != pb.len() {
        return Err(Error::invalid("final partitions differ in length"));
    }
    for (x, y) in pa.cells().iter().zip(pb.cells()) {
        pair_cells(x, y, &mut pair)?;
    }
    if f.contains(&usize::MAX) {
        return Err(Error::Internal(
            "sequences do not cover every vertex".into(),
        ));
    }
    let f = Permutation::new(f)
        .map_err(|e| Error::Internal(format!("extracted map is not a bijection: {e}")))?;
    if !g.is_isomorphism(h, &f) {
        return Err(Error::Internal(
            "extracted map does not preserve adjacency".into(),
        ));
    }
    Ok(f)
}

fn rejected(stats: MatchStats) -> MatchOutcome {
    MatchOutcome {
        level: -1,
        mapping: None,
        stats: MatchStats {
            early_rejection: true,
            ..stats
        },
    }
}

/// Decides whether `g` and `h` are isomorphic. On success the mapping takes
/// `g` to `h`.
pub fn are_isomorphic(g: &Graph, h: &Graph, options: MatchOptions) -> Result<MatchOutcome> {
    let mut stats = MatchStats::default();
    if g.n() != h.n() || g.code_counts() != h.code_counts() {
        return Ok(rejected(stats));
    }
    let (dg, dh) = (degree_level(g), degree_level(h));
    if dg.partition.sizes() != dh.partition.sizes() || dg.origins != dh.origins {
        return Ok(rejected(stats));
    }
    let eg = find_automorphisms_with(g, generate_sequence(g), options, &mut stats)?;
    let eh = find_automorphisms_with(h, generate_sequence(h), options, &mut stats)?;
    let swapped = eg.seq.backtrack_amount() > eh.seq.backtrack_amount();
    let (tg, te, sg, se) = if swapped {
        (h, &eh, g, &eg)
    } else {
        (g, &eg, h, &eh)
    };
    let mut outcome = match_sequence(tg, &te.seq, sg, &se.orbits, options)?;
    outcome.stats = MatchStats {
        automorphism_calls: stats.automorphism_calls,
        swapped,
        ..outcome.stats
    };
    if swapped {
        outcome.mapping = outcome.mapping.map(|f| f.inverse());
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::find_automorphisms;
    use crate::oracle::{brute_force_isomorphism, random_digraph, random_iso_pair};

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))).unwrap()
    }

    fn both_ways(g: &Graph, h: &Graph) -> MatchOutcome {
        let on = are_isomorphic(g, h, MatchOptions::default()).unwrap();
        let off = are_isomorphic(g, h, MatchOptions::default().with_backjump(false)).unwrap();
        assert_eq!(on.is_isomorphic(), off.is_isomorphic());
        assert!(
            on.stats.calls <= off.stats.calls,
            "{:?} vs {:?}",
            on.stats,
            off.stats
        );
        if let Some(f) = &on.mapping {
            assert!(g.is_isomorphism(h, f));
        }
        on
    }

    #[test]
    fn single_vertex() {
        let g = Graph::empty(1);
        let out = both_ways(&g, &g);
        assert_eq!(out.level, 0);
        assert!(out.is_isomorphic());
    }

    #[test]
    fn empty_graphs() {
        assert!(both_ways(&Graph::empty(0), &Graph::empty(0)).is_isomorphic());
        assert!(both_ways(&Graph::empty(4), &Graph::empty(4)).is_isomorphic());
    }

    #[test]
    fn relabeled_cycle() {
        let g = cycle(5);
        let (h, _) = random_iso_pair(&g, 9);
        assert!(both_ways(&g, &h).is_isomorphic());
    }

    #[test]
    fn hexagon_versus_two_triangles() {
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let out = both_ways(&cycle(6), &two);
        assert!(!out.is_isomorphic());
        assert_eq!(out.level, -1);
    }

    #[test]
    fn triangle_versus_path_rejected_early() {
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let out = are_isomorphic(&complete(3), &p3, MatchOptions::default()).unwrap();
        assert!(!out.is_isomorphic() && out.stats.early_rejection);
    }

    #[test]
    fn backjump_level_examples() {
        let k3 = complete(3);
        let q = generate_sequence(&k3);
        assert_eq!(backjump_level(&q, 0), -1);
        // level 1 cell {1,2} comes from one level-0 cell, but so would any single cell
        assert_eq!(backjump_level(&q, 1), -1);

        // both cells of level 1 come from the single level-0 cell
        let c4 = cycle(4);
        let q = generate_sequence(&c4);
        assert_eq!(q.level(1).partition.len(), 2);
        assert_eq!(backjump_level(&q, 1), 0);

        let k6 = complete(6);
        let q = generate_sequence(&k6);
        for l in 0..=q.final_level() {
            assert_eq!(backjump_level(&q, l), -1);
        }
    }

    #[test]
    fn extracted_map_on_identical_sequences_is_automorphism() {
        let g = random_digraph(9, 0.3, 5);
        let q = generate_sequence(&g);
        let f = extract_isomorphism(&q, &q, &g, &g).unwrap();
        assert!(f.is_identity());
        let isolated = Graph::from_edges(4, [(0, 1)]).unwrap();
        let q = generate_sequence(&isolated);
        assert!(extract_isomorphism(&q, &q, &isolated, &isolated).is_ok());
    }

    #[test]
    fn agrees_with_oracle_on_random_pairs() {
        for seed in 0..400u64 {
            let n = 1 + (seed as usize % 7);
            let g = random_digraph(n, [0.2, 0.5, 0.8][seed as usize % 3], seed);
            let h = if seed % 2 == 0 {
                random_iso_pair(&g, seed ^ 77).0
            } else {
                random_digraph(n, [0.2, 0.5, 0.8][seed as usize % 3], seed + 10_000)
            };
            let expected = brute_force_isomorphism(&g, &h).unwrap().is_some();
            assert_eq!(both_ways(&g, &h).is_isomorphic(), expected, "seed {seed}");
            let plain =
                are_isomorphic(&g, &h, MatchOptions::default().with_orbit_pruning(false)).unwrap();
            assert_eq!(plain.is_isomorphic(), expected);
        }
    }

    #[test]
    fn match_sequence_direct() {
        let g = cycle(5);
        let (h, _) = random_iso_pair(&g, 3);
        let eh = find_automorphisms(&h, generate_sequence(&h)).unwrap();
        let out = match_sequence(
            &g,
            &generate_sequence(&g),
            &h,
            &eh.orbits,
            MatchOptions::default(),
        )
        .unwrap();
        assert!(out.level >= 0);
        assert!(g.is_isomorphism(&h, out.mapping.as_ref().unwrap()));
    }

    #[test]
    fn timeout_is_reported() {
        let g = random_digraph(40, 0.5, 1);
        let (h, _) = random_iso_pair(&g, 2);
        let opts = MatchOptions {
            deadline: Some(Instant::now()),
            ..MatchOptions::default()
        };
        // tiny searches may finish before the first deadline check
        match are_isomorphic(&g, &h, opts) {
            Ok(out) => assert!(out.is_isomorphic()),
            Err(e) => assert!(matches!(e, Error::Timeout)),
        }
    }
}
