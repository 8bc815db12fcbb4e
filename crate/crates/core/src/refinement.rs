//! Ordered partitions and the refinement steps that split them.
//!
//! A refinement either individualizes a pivot vertex (splitting every cell by
//! its adjacency code to the pivot) or uses a whole pivot cell (splitting by
//! available degree toward it). Cells with no links left in the remaining
//! vertex set are dropped and reported as discarded. Each surviving parent cell
//! is replaced in place by its sub-cells, ordered by descending degree key.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{DegreeTriple, Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    remaining: VertexSet,
}

impl Partition {
    /// Empty partition over a universe of `n` vertices.
    pub fn empty(n: usize) -> Self {
        Partition {
            cells: Vec::new(),
            remaining: FixedBitSet::with_capacity(n),
        }
    }

    /// Builds a partition of vertices drawn from `0..n`; cells are kept in the given order.
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut remaining = FixedBitSet::with_capacity(n);
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::invalid("partition cells must be non-empty"));
            }
            for &v in cell {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if remaining.put(v) {
                    return Err(Error::invalid(format!("vertex {v} appears in two cells")));
                }
            }
        }
        let cells = cells
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Ok(Partition { cells, remaining })
    }

    /// Single-cell partition of `members`, or the empty partition when there are none.
    pub fn unit(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let cell: Vec<usize> = members.into_iter().collect();
        if cell.is_empty() {
            return Ok(Partition::empty(n));
        }
        Partition::new(n, vec![cell])
    }

    pub(crate) fn from_parts(cells: Vec<Vec<usize>>, remaining: VertexSet) -> Self {
        Partition { cells, remaining }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Union of all cells.
    pub fn remaining(&self) -> &VertexSet {
        &self.remaining
    }

    pub fn universe(&self) -> usize {
        self.remaining.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn cell_of(&self, v: usize) -> Option<usize> {
        if v >= self.remaining.len() || !self.remaining.contains(v) {
            return None;
        }
        self.cells.iter().position(|c| c.contains(&v))
    }

    pub fn cell_set(&self, i: usize) -> VertexSet {
        let mut s = FixedBitSet::with_capacity(self.remaining.len());
        s.extend(self.cells[i].iter().copied());
        s
    }

    pub(crate) fn cell_is_linkless(&self, i: usize, g: &Graph) -> bool {
        self.cells[i]
            .iter()
            .all(|&u| !g.has_links_in(u, &self.remaining))
    }

    /// Whether every cell is a singleton or has no links inside the remaining set.
    pub fn is_final(&self, g: &Graph) -> bool {
        (0..self.cells.len()).all(|i| self.cells[i].len() == 1 || self.cell_is_linkless(i, g))
    }

    /// Concatenation: the cells of `self` followed by those of `other`.
    pub fn concat(&self, other: &Partition) -> Result<Partition> {
        let n = self.universe().max(other.universe());
        let mut a = self.remaining.clone();
        a.grow(n);
        let mut b = other.remaining.clone();
        b.grow(n);
        if !a.is_disjoint(&b) {
            return Err(Error::invalid("concatenated partitions overlap"));
        }
        a.union_with(&b);
        let cells = self.cells.iter().chain(&other.cells).cloned().collect();
        Ok(Partition {
            cells,
            remaining: a,
        })
    }
}

/// Free-function form of [`Partition::concat`].
pub fn concat(p: &Partition, q: &Partition) -> Result<Partition> {
    p.concat(q)
}

/// A cell dropped by a refinement because it had no links left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscardedCell {
    /// Position of the cell in the partition that was refined.
    pub position: usize,
    pub cell: Vec<usize>,
}

/// Where a refined cell came from: its parent's position and the degree key
/// (toward the pivot vertex or pivot set) that separated it from its siblings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellOrigin {
    pub parent: usize,
    pub key: DegreeTriple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementOutcome {
    pub partition: Partition,
    pub discarded: Vec<DiscardedCell>,
    pub removed_pivot: Option<usize>,
    /// One entry per cell of `partition`.
    pub origins: Vec<CellOrigin>,
}

/// Groups `members` by key, largest key first; members stay ascending within a group.
fn split_by_key(
    members: &[usize],
    key: impl Fn(usize) -> DegreeTriple,
) -> Vec<(DegreeTriple, Vec<usize>)> {
    let mut keyed: Vec<(DegreeTriple, usize)> = members.iter().map(|&u| (key(u), u)).collect();
    keyed.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut groups: Vec<(DegreeTriple, Vec<usize>)> = Vec::new();
    for (k, u) in keyed {
        match groups.last_mut() {
            Some((last, cell)) if *last == k => cell.push(u),
            _ => groups.push((k, vec![u])),
        }
    }
    groups
}

fn vertex_key(g: &Graph, u: usize, pivot: usize) -> DegreeTriple {
    DegreeTriple::of_code(g.code_unchecked(u, pivot))
}

fn check_members(g: &Graph, members: &[usize]) -> Result<()> {
    match members.iter().find(|&&u| u >= g.n()) {
        Some(&u) => Err(Error::VertexOutOfRange {
            vertex: u,
            n: g.n(),
        }),
        None => Ok(()),
    }
}

/// Splits `members` by their adjacency code to `pivot`.
pub fn partition_by_vertex(members: &[usize], pivot: usize, g: &Graph) -> Result<Partition> {
    check_members(g, members)?;
    if pivot >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: pivot,
            n: g.n(),
        });
    }
    if members.contains(&pivot) {
        return Err(Error::invalid(
            "pivot vertex belongs to the set being partitioned",
        ));
    }
    let cells = split_by_key(members, |u| vertex_key(g, u, pivot))
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    Partition::new(g.n(), cells)
}

/// Splits `members` by available degree toward `pivot_set`.
pub fn partition_by_set(members: &[usize], pivot_set: &VertexSet, g: &Graph) -> Result<Partition> {
    if members.is_empty() {
        return Err(Error::invalid("cannot partition an empty set"));
    }
    check_members(g, members)?;
    let mut pivot_fit = FixedBitSet::with_capacity(g.n());
    pivot_fit.extend(pivot_set.ones().filter(|&x| x < g.n()));
    let cells = split_by_key(members, |u| g.degree_in(u, &pivot_fit))
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    Partition::new(g.n(), cells)
}

pub(crate) fn refine(p: &Partition, g: &Graph, pivot: Pivot<'_>) -> RefinementOutcome {
    let mut cells = Vec::with_capacity(p.len() + 4);
    let mut origins = Vec::with_capacity(p.len() + 4);
    let mut discarded = Vec::new();
    let mut remaining = p.remaining.clone();
    let mut removed_pivot = None;
    for (i, cell) in p.cells.iter().enumerate() {
        let holds_pivot = matches!(pivot, Pivot::Vertex(v) if cell.contains(&v));
        if !holds_pivot && p.cell_is_linkless(i, g) {
            for &u in cell {
                remaining.set(u, false);
            }
            discarded.push(DiscardedCell {
                position: i,
                cell: cell.clone(),
            });
            continue;
        }
        let groups = match pivot {
            Pivot::Vertex(v) => {
                if cell.contains(&v) {
                    remaining.set(v, false);
                    removed_pivot = Some(v);
                    let rest: Vec<usize> = cell.iter().copied().filter(|&u| u != v).collect();
                    split_by_key(&rest, |u| vertex_key(g, u, v))
                } else {
                    split_by_key(cell, |u| vertex_key(g, u, v))
                }
            }
            Pivot::Set(set) => split_by_key(cell, |u| g.degree_in(u, set)),
        };
        for (key, sub) in groups {
            cells.push(sub);
            origins.push(CellOrigin { parent: i, key });
        }
    }
    RefinementOutcome {
        partition: Partition::from_parts(cells, remaining),
        discarded,
        removed_pivot,
        origins,
    }
}

#[derive(Clone, Copy)]
pub(crate) enum Pivot<'a> {
    Vertex(usize),
    Set(&'a VertexSet),
}

/// Individualizes `v`: every cell with links is split by adjacency to `v`,
/// linkless cells are discarded and `v` leaves the remaining set.
pub fn vertex_refinement(p: &Partition, v: usize, g: &Graph) -> Result<RefinementOutcome> {
    if p.universe() != g.n() {
        return Err(Error::invalid(
            "partition and graph have different vertex counts",
        ));
    }
    if p.cell_of(v).is_none() {
        return Err(Error::invalid(format!(
            "pivot vertex {v} is not in any cell"
        )));
    }
    Ok(refine(p, g, Pivot::Vertex(v)))
}

/// Splits every cell with links by available degree toward the cell at `pivot_index`.
pub fn set_refinement(p: &Partition, pivot_index: usize, g: &Graph) -> Result<RefinementOutcome> {
    if p.universe() != g.n() {
        return Err(Error::invalid(
            "partition and graph have different vertex counts",
        ));
    }
    if pivot_index >= p.len() {
        return Err(Error::invalid(format!(
            "pivot cell {pivot_index} out of range for a partition with {} cells",
            p.len()
        )));
    }
    let pivot = p.cell_set(pivot_index);
    Ok(refine(p, g, Pivot::Set(&pivot)))
}

/// Same number of cells, equal sizes position by position, and each pair of
/// corresponding cells uniformly sharing one degree toward its remaining set.
/// A cell whose members disagree on their degree makes the pair incompatible.
pub fn partitions_compatible(p: &Partition, g: &Graph, q: &Partition, h: &Graph) -> bool {
    if p.len() != q.len() || p.universe() != g.n() || q.universe() != h.n() {
        return false;
    }
    p.cells.iter().zip(&q.cells).all(|(a, b)| {
        if a.len() != b.len() {
            return false;
        }
        let da = g.degree_in(a[0], &p.remaining);
        let db = h.degree_in(b[0], &q.remaining);
        da == db
            && a.iter().all(|&u| g.degree_in(u, &p.remaining) == da)
            && b.iter().all(|&u| h.degree_in(u, &q.remaining) == db)
    })
}

/// Every cell is degree-uniform toward every cell (including itself).
pub fn is_equitable(p: &Partition, g: &Graph) -> bool {
    if p.universe() != g.n() {
        return false;
    }
    let sets: Vec<VertexSet> = (0..p.len()).map(|j| p.cell_set(j)).collect();
    p.cells.iter().all(|cell| {
        sets.iter().all(|s| {
            let d = g.degree_in(cell[0], s);
            cell[1..].iter().all(|&u| g.degree_in(u, s) == d)
        })
    })
}
