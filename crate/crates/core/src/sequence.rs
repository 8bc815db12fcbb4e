//! Sequences of partitions.
//!
//! Starting from the degree partition, the generator keeps refining until every
//! cell is a singleton or has no links left. At each step it prefers, in order:
//! a singleton pivot cell with links (`Vertex`), a set refinement that actually
//! splits a cell, smallest pivot cell first (`Set`), and finally individualizing
//! the lowest vertex of the smallest cell with links (`Backtrack`). Ties between
//! candidate cells go to the cell with the most links, then the lowest position.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{DegreeTriple, Graph};
use crate::refinement::{refine, CellOrigin, DiscardedCell, Partition, Pivot, RefinementOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RefinementKind {
    Vertex,
    Set,
    Backtrack,
}

impl fmt::Display for RefinementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RefinementKind::Vertex => "VERTEX",
            RefinementKind::Set => "SET",
            RefinementKind::Backtrack => "BACKTRACK",
        })
    }
}

/// One level of a sequence.
///
/// `kind`, `pivot_index` and `pivot_vertex` describe the refinement applied to
/// this level's partition to produce the next one; they are `None` at the final
/// level. `discarded` and `origins` describe how this level was produced from
/// the previous one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub partition: Partition,
    pub kind: Option<RefinementKind>,
    pub pivot_index: Option<usize>,
    pub pivot_vertex: Option<usize>,
    pub discarded: Vec<DiscardedCell>,
    pub origins: Vec<CellOrigin>,
}

impl Level {
    fn produced(outcome: RefinementOutcome) -> Self {
        Level {
            partition: outcome.partition,
            kind: None,
            pivot_index: None,
            pivot_vertex: None,
            discarded: outcome.discarded,
            origins: outcome.origins,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceOfPartitions {
    levels: Vec<Level>,
}

impl SequenceOfPartitions {
    pub(crate) fn from_levels(levels: Vec<Level>) -> Self {
        debug_assert!(!levels.is_empty());
        SequenceOfPartitions { levels }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    pub(crate) fn level_mut(&mut self, i: usize) -> &mut Level {
        &mut self.levels[i]
    }

    /// Index `t` of the final level.
    pub fn final_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn kinds(&self) -> impl Iterator<Item = RefinementKind> + '_ {
        self.levels.iter().filter_map(|l| l.kind)
    }

    /// Number of `Backtrack` levels among `1..t`. Level 0 is not counted.
    pub fn backtrack_amount(&self) -> usize {
        let t = self.final_level();
        (1..t)
            .filter(|&i| self.levels[i].kind == Some(RefinementKind::Backtrack))
            .count()
    }

    /// Uniform degree of every final cell toward every final cell.
    pub fn final_cross_degrees(&self, g: &Graph) -> CrossDegrees {
        CrossDegrees::of(&self.levels[self.final_level()].partition, g)
    }

    /// One line per level: index, refinement kind, pivot and cell sizes.
    /// Vertices are printed 1-based, as in graph files.
    pub fn trace_lines(&self) -> Vec<String> {
        self.levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let sizes = l.partition.sizes();
                match l.kind {
                    None => format!("level {i} FIN cells={sizes:?}"),
                    Some(kind) => {
                        let pivot = l.pivot_index.map_or("-".to_string(), |p| p.to_string());
                        let vertex = l.pivot_vertex.map_or("-".to_string(), |v| (v + 1).to_string());
                        format!("level {i} {kind} pivot_cell={pivot} pivot_vertex={vertex} cells={sizes:?}")
                    }
                }
            })
            .collect()
    }
}

impl fmt::Display for SequenceOfPartitions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.trace_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Square matrix of cell-to-cell degrees; `None` where a cell is not uniform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossDegrees {
    cells: usize,
    entries: Vec<Option<DegreeTriple>>,
}

impl CrossDegrees {
    pub fn of(p: &Partition, g: &Graph) -> Self {
        let r = p.len();
        let sets: Vec<_> = (0..r).map(|j| p.cell_set(j)).collect();
        let mut entries = Vec::with_capacity(r * r);
        for cell in p.cells() {
            for s in &sets {
                let d = g.degree_in(cell[0], s);
                entries.push(
                    cell[1..]
                        .iter()
                        .all(|&u| g.degree_in(u, s) == d)
                        .then_some(d),
                );
            }
        }
        CrossDegrees { cells: r, entries }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn get(&self, x: usize, y: usize) -> Option<DegreeTriple> {
        self.entries[x * self.cells + y]
    }

    pub fn is_uniform(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }
}

/// Vertices grouped by available degree toward the whole graph, largest first.
pub fn degree_partition(g: &Graph) -> Partition {
    degree_level(g).partition
}

pub(crate) fn degree_level(g: &Graph) -> Level {
    let all = g.all_vertices();
    let mut keyed: Vec<(DegreeTriple, usize)> =
        g.vertices().map(|u| (g.degree_in(u, &all), u)).collect();
    keyed.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut origins = Vec::new();
    for (d, u) in keyed {
        match origins.last() {
            Some(CellOrigin { key, .. }) if *key == d => cells.last_mut().unwrap().push(u),
            _ => {
                cells.push(vec![u]);
                origins.push(CellOrigin { parent: 0, key: d });
            }
        }
    }
    Level {
        partition: Partition::from_parts(cells, all),
        kind: None,
        pivot_index: None,
        pivot_vertex: None,
        discarded: Vec::new(),
        origins,
    }
}

fn link_weight(p: &Partition, i: usize, g: &Graph) -> DegreeTriple {
    p.cell(i)
        .iter()
        .map(|&u| g.degree_in(u, p.remaining()))
        .sum()
}

// Whether refining by the pivot cell would split at least one cell with links.
fn set_refinement_splits(p: &Partition, pivot: usize, g: &Graph) -> bool {
    let set = p.cell_set(pivot);
    (0..p.len()).any(|i| {
        let cell = p.cell(i);
        if cell.len() < 2 || p.cell_is_linkless(i, g) {
            return false;
        }
        let d = g.degree_in(cell[0], &set);
        cell[1..].iter().any(|&u| g.degree_in(u, &set) != d)
    })
}

/// Chooses the next refinement for a non-final partition.
fn choose(p: &Partition, g: &Graph) -> (RefinementKind, usize) {
    let mut linked: Vec<(usize, usize, DegreeTriple)> = (0..p.len())
        .filter(|&i| !p.cell_is_linkless(i, g))
        .map(|i| (i, p.cell(i).len(), link_weight(p, i, g)))
        .collect();
    // smallest first, then most links, then lowest position
    linked.sort_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)).then(a.0.cmp(&b.0)));

    if let Some(&(i, 1, _)) = linked.first() {
        return (RefinementKind::Vertex, i);
    }
    if let Some(&(i, _, _)) = linked
        .iter()
        .find(|&&(i, _, _)| set_refinement_splits(p, i, g))
    {
        return (RefinementKind::Set, i);
    }
    let &(i, _, _) = linked
        .first()
        .expect("a non-final partition has a cell with links");
    (RefinementKind::Backtrack, i)
}

/// Builds the sequence of partitions of `g`. Deterministic for a fixed graph.
pub fn generate_sequence(g: &Graph) -> SequenceOfPartitions {
    let mut levels = vec![degree_level(g)];
    loop {
        let current = levels.last_mut().unwrap();
        if current.partition.is_final(g) {
            break;
        }
        let (kind, pivot_index) = choose(&current.partition, g);
        let outcome = match kind {
            RefinementKind::Set => {
                let set = current.partition.cell_set(pivot_index);
                refine(&current.partition, g, Pivot::Set(&set))
            }
            RefinementKind::Vertex | RefinementKind::Backtrack => {
                let v = current.partition.cell(pivot_index)[0];
                current.pivot_vertex = Some(v);
                refine(&current.partition, g, Pivot::Vertex(v))
            }
        };
        current.kind = Some(kind);
        current.pivot_index = Some(pivot_index);
        levels.push(Level::produced(outcome));
    }
    SequenceOfPartitions { levels }
}
