//! Vertex partitions: distance layers, group orbits, equitable verification,
//! and quotient matrices.

use crate::graph::{all_pairs_distances, Graph};
use crate::linalg::{char_poly, integer_roots, integral_spectrum, nullity_at, IntMatrix};
use crate::symmetry::Permutation;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("cells must be nonempty, disjoint, and cover 0..{n}")]
    BadCells { n: usize },
    #[error("permutation degree {got} does not match vertex count {expected}")]
    DegreeMismatch { expected: usize, got: usize },
}

/// Ordered partition of `0..n` into nonempty, disjoint cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cell_of: Vec<usize>,
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut cell_of = vec![usize::MAX; n];
        let mut seen = 0usize;
        for (ci, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(PartitionError::BadCells { n });
            }
            for &v in cell {
                if v >= n || cell_of[v] != usize::MAX {
                    return Err(PartitionError::BadCells { n });
                }
                cell_of[v] = ci;
                seen += 1;
            }
        }
        if seen != n {
            return Err(PartitionError::BadCells { n });
        }
        Ok(Partition { cell_of, cells })
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            cell_of: (0..n).collect(),
            cells: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn unit(n: usize) -> Self {
        assert!(n > 0, "unit partition needs at least one vertex");
        Partition {
            cell_of: vec![0; n],
            cells: vec![(0..n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.len()).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.len() == self.cell_of.len()
    }

    pub fn has_singleton_cell(&self) -> bool {
        self.cells.iter().any(|c| c.len() == 1)
    }

    /// Split `v`'s cell into `[{v}, rest]` in place of the original cell;
    /// other cells keep their order.
    pub fn individualize(&self, v: usize) -> Partition {
        let target = self.cell_of[v];
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        for (ci, cell) in self.cells.iter().enumerate() {
            if ci != target {
                cells.push(cell.clone());
                continue;
            }
            cells.push(vec![v]);
            let rest: Vec<usize> = cell.iter().copied().filter(|&u| u != v).collect();
            if !rest.is_empty() {
                cells.push(rest);
            }
        }
        Partition::from_cells(self.n(), cells).expect("individualization keeps validity")
    }

    /// Set-partition equality, ignoring cell order and in-cell order.
    pub fn same_blocks(&self, other: &Partition) -> bool {
        if self.n() != other.n() {
            return false;
        }
        self.canonical_cell_of() == other.canonical_cell_of()
    }

    fn canonical_cell_of(&self) -> Vec<usize> {
        let mut relabel = vec![usize::MAX; self.cells.len()];
        let mut next = 0usize;
        let mut out = Vec::with_capacity(self.n());
        for &c in &self.cell_of {
            if relabel[c] == usize::MAX {
                relabel[c] = next;
                next += 1;
            }
            out.push(relabel[c]);
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({ "cells": self.cells })
    }
}

/// Quotient matrix of an equitable partition: `b[i][j]` neighbors in cell `j`
/// for every vertex of cell `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMatrix {
    pub b: IntMatrix,
}

impl QuotientMatrix {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!(self.b.to_nested_i64())
    }
}

/// Witness that a partition is not equitable: two vertices of `cell_i` with
/// different neighbor counts into `cell_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquitableRefutation {
    pub cell_i: usize,
    pub cell_j: usize,
    pub u: usize,
    pub u_prime: usize,
    pub count_u: u32,
    pub count_u_prime: u32,
}

/// Cells are the distance layers from `v`; cell index = distance.
pub fn distance_partition(g: &Graph, v: usize) -> Result<Partition, PartitionError> {
    let dt = all_pairs_distances(g);
    if !dt.connected {
        return Err(PartitionError::Disconnected);
    }
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); dt.diameter as usize + 1];
    for u in 0..g.n() {
        cells[dt.get(v, u) as usize].push(u);
    }
    cells.retain(|c| !c.is_empty());
    Partition::from_cells(g.n(), cells)
}

/// Checks the equitable condition and returns the quotient, or the first
/// violating pair in (cell, vertex, target-cell) order.
pub fn is_equitable(g: &Graph, p: &Partition) -> Result<QuotientMatrix, EquitableRefutation> {
    assert_eq!(p.n(), g.n(), "partition and graph sizes differ");
    let masks: Vec<Vec<u64>> = p.cells().iter().map(|c| g.vertex_mask(c)).collect();
    let r = p.cell_count();
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(r);
    for (ci, cell) in p.cells().iter().enumerate() {
        let first = cell[0];
        let base: Vec<u32> = masks
            .iter()
            .map(|m| g.count_neighbors_in(first, m))
            .collect();
        for &u in &cell[1..] {
            for (cj, m) in masks.iter().enumerate() {
                let count = g.count_neighbors_in(u, m);
                if count != base[cj] {
                    return Err(EquitableRefutation {
                        cell_i: ci,
                        cell_j: cj,
                        u: first,
                        u_prime: u,
                        count_u: base[cj],
                        count_u_prime: count,
                    });
                }
            }
        }
        rows.push(base);
    }
    let b = IntMatrix::from_fn(r, r, |i, j| num_bigint::BigInt::from(rows[i][j]));
    Ok(QuotientMatrix { b })
}

/// Orbits of the group generated by `gens`, as a partition with cells
/// ordered by minimum vertex.
pub fn orbit_partition(n: usize, gens: &[Permutation]) -> Result<Partition, PartitionError> {
    for g in gens {
        if g.degree() != n {
            return Err(PartitionError::DegreeMismatch {
                expected: n,
                got: g.degree(),
            });
        }
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for g in gens {
        for v in 0..n {
            let a = find(&mut parent, v);
            let b = find(&mut parent, g.apply(v));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut cell_index: Vec<Option<usize>> = vec![None; n];
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let root = find(&mut parent, v);
        let idx = match cell_index[root] {
            Some(i) => i,
            None => {
                cells.push(Vec::new());
                cell_index[root] = Some(cells.len() - 1);
                cells.len() - 1
            }
        };
        cells[idx].push(v);
    }
    Partition::from_cells(n, cells)
}

/// Coarsest equitable partition refining `initial`, by iterated splitting on
/// neighbor-count signatures. Cell order is deterministic: sub-cells replace
/// their parent in signature order.
pub fn equitable_refinement(g: &Graph, initial: &Partition) -> Partition {
    assert_eq!(initial.n(), g.n());
    let mut cells: Vec<Vec<usize>> = initial.cells().to_vec();
    loop {
        let masks: Vec<Vec<u64>> = cells.iter().map(|c| g.vertex_mask(c)).collect();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<usize>> =
                std::collections::BTreeMap::new();
            for &v in cell {
                let sig: Vec<u32> = masks.iter().map(|m| g.count_neighbors_in(v, m)).collect();
                groups.entry(sig).or_default().push(v);
            }
            if groups.len() > 1 {
                changed = true;
            }
            next.extend(groups.into_values());
        }
        cells = next;
        if !changed {
            break;
        }
    }
    Partition::from_cells(g.n(), cells).expect("refinement preserves partition validity")
}

/// Theorem-3 style check: every integer root of the quotient's characteristic
/// polynomial is an adjacency eigenvalue of the host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumSubsetVerdict {
    pub ok: bool,
    /// (quotient root, its multiplicity as adjacency eigenvalue of g)
    pub roots: Vec<(i64, usize)>,
    /// degree of the quotient char-poly factor with no integer roots
    pub residual_degree: usize,
}

pub fn quotient_spectrum_subset_check(g: &Graph, q: &QuotientMatrix) -> SpectrumSubsetVerdict {
    let p = char_poly(&q.b).expect("quotient matrices are square");
    let bound = gershgorin_bound(&q.b);
    let found = integer_roots(&p, bound);
    let a = IntMatrix::adjacency(g);
    let mut roots = Vec::with_capacity(found.roots.len());
    let mut ok = true;
    for &(r, _) in &found.roots {
        let mult = nullity_at(&a, r).expect("adjacency is square");
        if mult == 0 {
            ok = false;
        }
        roots.push((r, mult));
    }
    SpectrumSubsetVerdict {
        ok,
        roots,
        residual_degree: found.residual_degree,
    }
}

/// Max absolute row sum: every real eigenvalue lies within this bound.
pub fn gershgorin_bound(m: &IntMatrix) -> i64 {
    use num_traits::ToPrimitive;
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.get(i, j).abs())
                .sum::<num_bigint::BigInt>()
                .to_i64()
                .expect("row sum fits i64")
        })
        .max()
        .unwrap_or(0)
}

/// Theorem-4 style check around a singleton cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingletonCellVerdict {
    pub ok: bool,
    pub has_singleton: bool,
    pub orbit_closure_ok: bool,
    pub eigenvalue_sets_equal: bool,
    pub residual: usize,
    pub graph_eigenvalues: Vec<i64>,
    pub quotient_roots: Vec<i64>,
}

/// Verifies that `p` is the orbit partition of the witnesses, has a singleton
/// cell, and that the quotient's integer roots give the whole spectrum of `g`.
pub fn singleton_cell_full_spectrum_check(
    g: &Graph,
    p: &Partition,
    witnesses: &[Permutation],
) -> Result<SingletonCellVerdict, EquitableRefutation> {
    let q = is_equitable(g, p)?;
    let has_singleton = p.has_singleton_cell();
    let orbit_closure_ok = match orbit_partition(g.n(), witnesses) {
        Ok(op) => op.same_blocks(p),
        Err(_) => false,
    };
    let poly = char_poly(&q.b).expect("quotient is square");
    let found = integer_roots(&poly, gershgorin_bound(&q.b));
    let mut quotient_roots: Vec<i64> = found.roots.iter().map(|&(r, _)| r).collect();
    quotient_roots.sort_unstable();
    let spec = integral_spectrum(g);
    let graph_eigenvalues = spec.eigenvalues();
    let eigenvalue_sets_equal =
        graph_eigenvalues == quotient_roots && found.residual_degree == 0;
    let ok = has_singleton && orbit_closure_ok && eigenvalue_sets_equal && spec.residual == 0;
    Ok(SingletonCellVerdict {
        ok,
        has_singleton,
        orbit_closure_ok,
        eigenvalue_sets_equal,
        residual: spec.residual,
        graph_eigenvalues,
        quotient_roots,
    })
}
