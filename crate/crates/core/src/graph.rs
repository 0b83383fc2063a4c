//! Graph construction and distance machinery.
//!
//! Vertices are `0..n` and adjacency is stored as a packed bitset, one row of
//! `ceil(n/64)` words per vertex. Undirected, no loops, no multi-edges.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

/// Distance sentinel for unreachable pairs; strictly larger than any real
/// distance in any graph this library can hold.
pub const INFINITE_DISTANCE: u32 = u32::MAX;

/// Hard cap on vertex count; the dense bitset is n*ceil(n/64) words, so this
/// keeps a single graph under ~2 GiB.
pub const MAX_VERTICES: usize = 120_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("k must be at least 2, got {0}")]
    KTooSmall(usize),
    #[error("k = {0} puts the ground set past the 31-bit subset labels")]
    KTooLarge(usize),
    #[error("graph on {0} vertices exceeds the {MAX_VERTICES}-vertex capacity")]
    TooManyVertices(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("expected {n} labels, got {got}")]
    LabelCountMismatch { n: usize, got: usize },
    #[error("labels are not pairwise distinct (vertices {0} and {1})")]
    DuplicateLabel(usize, usize),
    #[error("label parity must be 0 or 1, got {0}")]
    BadParity(u8),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("malformed edge list: {0}")]
    MalformedEdgeList(String),
}

/// Vertex label for graphs in the odd family: a subset of the ground set
/// `{0, .., 2k-2}` as a bitmask, plus a parity bit distinguishing the two
/// copies in a double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DoubleOddLabel {
    pub subset: u32,
    pub parity: u8,
}

/// Simple undirected graph over vertices `0..n` with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    row_words: usize,
    bits: Vec<u64>,
    labels: Option<Vec<DoubleOddLabel>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .field("labeled", &self.labels.is_some())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let row_words = n.div_ceil(64).max(1);
        Ok(Graph {
            n,
            row_words,
            bits: vec![0u64; n * row_words],
            labels: None,
        })
    }

    pub fn set_labels(&mut self, labels: Vec<DoubleOddLabel>) -> Result<(), GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCountMismatch {
                n: self.n,
                got: labels.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if l.parity > 1 {
                return Err(GraphError::BadParity(l.parity));
            }
            // labels must be pairwise distinct
            for (j, m) in labels.iter().enumerate().take(i) {
                if l == m {
                    return Err(GraphError::DuplicateLabel(j, i));
                }
            }
        }
        self.labels = Some(labels);
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[DoubleOddLabel]> {
        self.labels.as_deref()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for &x in &[u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        self.bits[u * self.row_words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.row_words + u / 64] |= 1 << (u % 64);
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.bits[u * self.row_words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Adjacency row of `v` as packed words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.row_words..(v + 1) * self.row_words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of neighbors of `v` inside the vertex set given as a bitmask.
    pub fn count_neighbors_in(&self, v: usize, mask: &[u64]) -> u32 {
        debug_assert_eq!(mask.len(), self.row_words);
        self.row(v)
            .iter()
            .zip(mask)
            .map(|(r, m)| (r & m).count_ones())
            .sum()
    }

    /// Packed bitmask sized for this graph's rows with the given vertices set.
    pub fn vertex_mask(&self, vs: &[usize]) -> Vec<u64> {
        let mut mask = vec![0u64; self.row_words];
        for &v in vs {
            debug_assert!(v < self.n);
            mask[v / 64] |= 1 << (v % 64);
        }
        mask
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(wi, &w)| {
            std::iter::successors((w != 0).then_some(w), |&w| {
                let rest = w & (w - 1);
                (rest != 0).then_some(rest)
            })
            .map(move |w| wi * 64 + w.trailing_zeros() as usize)
        })
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.n).map(|v| self.degree(v)).sum();
        total / 2
    }

    /// All edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Two-coloring by BFS over every component; `None` when an odd cycle exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if color[w] == u8::MAX {
                        color[w] = color[u] ^ 1;
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Image of the graph under a relabeling permutation: vertex `v` becomes
    /// `perm[v]`. Labels travel with their vertices.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation degree mismatch");
        let mut seen = vec![false; self.n];
        for &p in perm {
            assert!(p < self.n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let mut h = Graph::empty(self.n).expect("same size");
        for (u, v) in self.edges() {
            h.add_edge(perm[u], perm[v]).expect("valid edge");
        }
        if let Some(labels) = &self.labels {
            let mut moved = vec![labels[0]; self.n];
            for v in 0..self.n {
                moved[perm[v]] = labels[v];
            }
            h.labels = Some(moved);
        }
        h
    }
}

// ======================================================================
// constructors for the odd family
// ======================================================================

/// The (k-1)-subsets of `{0, .., 2k-2}` as bitmasks in ascending order.
///
/// This ordering is the vertex order of `odd_graph(k)` and the per-parity
/// block order of its doubles.
pub fn odd_subsets(k: usize) -> Result<Vec<u32>, GraphError> {
    if k < 2 {
        return Err(GraphError::KTooSmall(k));
    }
    let ground = 2 * k - 1;
    if ground > 31 {
        return Err(GraphError::KTooLarge(k));
    }
    let r = (k - 1) as u32;
    let limit: u32 = 1 << ground;
    let mut masks = Vec::new();
    let mut m: u32 = (1 << r) - 1;
    // Gosper's hack walks fixed-popcount masks in ascending order.
    while m < limit {
        masks.push(m);
        let c = m & m.wrapping_neg();
        let rp = m + c;
        if rp >= limit || c == 0 {
            break;
        }
        m = rp | (((m ^ rp) / c) >> 2);
    }
    Ok(masks)
}

/// Position of `mask` in the canonical ascending subset list.
pub(crate) fn subset_index(subsets: &[u32], mask: u32) -> usize {
    subsets
        .binary_search(&mask)
        .expect("mask is a canonical subset")
}

/// Odd graph: vertices are the (k-1)-subsets of a (2k-1)-set, edges join
/// disjoint subsets. `k = 3` gives the Petersen graph.
pub fn odd_graph(k: usize) -> Result<Graph, GraphError> {
    let subsets = odd_subsets(k)?;
    let n = subsets.len();
    let mut g = Graph::empty(n)?;
    for i in 0..n {
        for j in i + 1..n {
            if subsets[i] & subsets[j] == 0 {
                g.add_edge(i, j)?;
            }
        }
    }
    g.set_labels(
        subsets
            .iter()
            .map(|&subset| DoubleOddLabel { subset, parity: 0 })
            .collect(),
    )?;
    Ok(g)
}

/// Bipartite double: two copies of the vertex set, with `(u, 0) ~ (w, 1)`
/// exactly when `u ~ w` in the source. Vertex `(v, i)` gets index `v + i*n`.
///
/// Connected iff the source is connected and non-bipartite; a bipartite
/// source doubles into two disjoint copies of itself.
pub fn bipartite_double(g: &Graph) -> Graph {
    let n = g.n();
    let mut d = Graph::empty(2 * n).expect("double within capacity");
    for (u, w) in g.edges() {
        d.add_edge(u, n + w).expect("valid");
        d.add_edge(w, n + u).expect("valid");
    }
    if let Some(labels) = g.labels() {
        if labels.iter().all(|l| l.parity == 0) {
            let doubled = (0..2 * n)
                .map(|v| DoubleOddLabel {
                    subset: labels[v % n].subset,
                    parity: (v / n) as u8,
                })
                .collect();
            d.labels = Some(doubled);
        }
    }
    d
}

/// Bipartite double of the odd graph plus the antipodal perfect matching
/// `(v, 0) ~ (v, 1)`; a (k+1)-regular bipartite graph on the same vertex set
/// as the double.
///
/// "Folded" here means the matching is ADDED; antipodal pairs are kept as
/// distinct vertices, not identified.
pub fn folded_double_odd(k: usize) -> Result<Graph, GraphError> {
    let g = odd_graph(k)?;
    let n = g.n();
    let mut f = bipartite_double(&g);
    for v in 0..n {
        f.add_edge(v, n + v)?;
    }
    Ok(f)
}

// ======================================================================
// distances
// ======================================================================

/// Dense all-pairs distance table with `INFINITE_DISTANCE` for unreachable
/// pairs.
#[derive(Clone)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u32>,
    pub diameter: u32,
    pub connected: bool,
}

impl DistanceTable {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Vertices at distance exactly `r` from `v`, ascending.
    pub fn sphere(&self, v: usize, r: u32) -> Vec<usize> {
        (0..self.n).filter(|&u| self.get(v, u) == r).collect()
    }
}

/// BFS from every source.
pub fn all_pairs_distances(g: &Graph) -> DistanceTable {
    let n = g.n();
    let mut dist = vec![INFINITE_DISTANCE; n * n];
    let mut diameter = 0u32;
    let mut connected = n > 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for w in g.neighbors(u) {
                if row[w] == INFINITE_DISTANCE {
                    row[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        for &d in row.iter() {
            if d == INFINITE_DISTANCE {
                connected = false;
            } else if d > diameter {
                diameter = d;
            }
        }
    }
    DistanceTable {
        n,
        dist,
        diameter,
        connected,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AntipodalError {
    #[error("graph is disconnected; antipodes are undefined")]
    Disconnected,
    #[error("vertex {vertex} has {count} vertices at diameter distance, expected exactly 1")]
    AmbiguousAntipode { vertex: usize, count: usize },
}

/// The unique-vertex-at-diameter map. Succeeds iff every vertex has exactly
/// one vertex at distance `diameter`; uniqueness everywhere forces the map to
/// be an involution.
pub fn antipodal_map(g: &Graph, dt: &DistanceTable) -> Result<Vec<usize>, AntipodalError> {
    assert_eq!(g.n(), dt.n(), "distance table does not match graph");
    if !dt.connected {
        return Err(AntipodalError::Disconnected);
    }
    let n = g.n();
    let mut map = vec![0usize; n];
    for v in 0..n {
        let far = dt.sphere(v, dt.diameter);
        if far.len() != 1 {
            return Err(AntipodalError::AmbiguousAntipode {
                vertex: v,
                count: far.len(),
            });
        }
        map[v] = far[0];
    }
    Ok(map)
}

/// Outcome of checking `f: g -> h` as a covering map: a graph homomorphism
/// that is surjective and a local isomorphism (bijective on every
/// neighborhood).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CoveringVerdict {
    Covers,
    MapLengthMismatch { expected: usize, got: usize },
    ImageOutOfRange { vertex: usize, image: usize },
    EdgeNotPreserved { u: usize, v: usize },
    NotSurjective { missed: usize },
    NotLocallyBijective { vertex: usize, base: usize },
}

impl CoveringVerdict {
    pub fn is_covering(&self) -> bool {
        matches!(self, CoveringVerdict::Covers)
    }
}

pub fn verify_covering_map(g: &Graph, h: &Graph, f: &[usize]) -> CoveringVerdict {
    if f.len() != g.n() {
        return CoveringVerdict::MapLengthMismatch {
            expected: g.n(),
            got: f.len(),
        };
    }
    for (v, &fv) in f.iter().enumerate() {
        if fv >= h.n() {
            return CoveringVerdict::ImageOutOfRange { vertex: v, image: fv };
        }
    }
    for (u, v) in g.edges() {
        if !h.has_edge(f[u], f[v]) {
            return CoveringVerdict::EdgeNotPreserved { u, v };
        }
    }
    let mut hit = vec![false; h.n()];
    for &fv in f {
        hit[fv] = true;
    }
    if let Some(missed) = hit.iter().position(|&b| !b) {
        return CoveringVerdict::NotSurjective { missed };
    }
    // Local bijectivity: edges were already checked to land in h, so it
    // suffices that images of distinct neighbors are distinct and the
    // degrees agree.
    let mut seen = vec![false; h.n()];
    for x in 0..g.n() {
        if g.degree(x) != h.degree(f[x]) {
            return CoveringVerdict::NotLocallyBijective {
                vertex: x,
                base: f[x],
            };
        }
        let mut images = Vec::with_capacity(g.degree(x));
        let mut ok = true;
        for w in g.neighbors(x) {
            if seen[f[w]] {
                ok = false;
            }
            seen[f[w]] = true;
            images.push(f[w]);
        }
        for i in images {
            seen[i] = false;
        }
        if !ok {
            return CoveringVerdict::NotLocallyBijective {
                vertex: x,
                base: f[x],
            };
        }
    }
    CoveringVerdict::Covers
}

// ======================================================================
// serialization
// ======================================================================

/// Wire form of a graph: `{"n": .., "edges": [[u, v], ..], "labels": ..}`
/// with `u < v` sorted lexicographically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub labels: Option<Vec<DoubleOddLabel>>,
}

impl Graph {
    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json_value(j: &GraphJson) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(j.n)?;
        for &(u, v) in &j.edges {
            g.add_edge(u, v)?;
        }
        if let Some(labels) = &j.labels {
            g.set_labels(labels.clone())?;
        }
        Ok(g)
    }

    pub fn from_json_str(s: &str) -> Result<Graph, GraphError> {
        let j: GraphJson = serde_json::from_str(s)
            .map_err(|e| GraphError::MalformedEdgeList(e.to_string()))?;
        Graph::from_json_value(&j)
    }

    /// Plain text edge list: a `# n=<n>` header line, then one `u v` line per
    /// edge, `u < v`, lexicographic.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = format!("# n={}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| GraphError::MalformedEdgeList("empty input".into()))?;
        let n: usize = header
            .strip_prefix("# n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| GraphError::MalformedEdgeList(format!("bad header {header:?}")))?;
        let mut g = Graph::empty(n)?;
        for line in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (u, v) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => {
                    let u = a.parse().map_err(|_| {
                        GraphError::MalformedEdgeList(format!("bad line {line:?}"))
                    })?;
                    let v = b.parse().map_err(|_| {
                        GraphError::MalformedEdgeList(format!("bad line {line:?}"))
                    })?;
                    (u, v)
                }
                _ => return Err(GraphError::MalformedEdgeList(format!("bad line {line:?}"))),
            };
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

// ======================================================================
// tests
// ======================================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::empty(n).unwrap();
        for v in 0..n {
            g.add_edge(v, (v + 1) % n).unwrap();
        }
        g
    }

    fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n).unwrap();
        for v in 0..n - 1 {
            g.add_edge(v, v + 1).unwrap();
        }
        g
    }

    #[test]
    fn odd_graph_rejects_small_k() {
        assert_eq!(odd_graph(1).unwrap_err(), GraphError::KTooSmall(1));
        assert_eq!(odd_graph(0).unwrap_err(), GraphError::KTooSmall(0));
    }

    #[test]
    fn odd_graph_k2_is_triangle() {
        let g = odd_graph(2).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.regular_degree(), Some(2));
        let labels = g.labels().unwrap();
        assert_eq!(
            labels.iter().map(|l| l.subset).collect::<Vec<_>>(),
            vec![0b001, 0b010, 0b100]
        );
    }

    #[test]
    fn odd_graph_k3_is_petersen_shaped() {
        let g = odd_graph(3).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.regular_degree(), Some(3));
        let dt = all_pairs_distances(&g);
        assert!(dt.connected);
        assert_eq!(dt.diameter, 2);
        assert!(!g.is_bipartite());
    }

    #[test]
    fn subsets_are_ascending_and_complete() {
        let s = odd_subsets(4).unwrap();
        assert_eq!(s.len(), 35); // C(7,3)
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|m| m.count_ones() == 3 && *m < (1 << 7)));
    }

    #[test]
    fn double_of_triangle_is_hexagon() {
        let d = bipartite_double(&odd_graph(2).unwrap());
        assert_eq!(d.n(), 6);
        assert_eq!(d.edge_count(), 6);
        assert_eq!(d.regular_degree(), Some(2));
        let dt = all_pairs_distances(&d);
        assert!(dt.connected);
        assert_eq!(dt.diameter, 3);
        assert!(d.is_bipartite());
    }

    #[test]
    fn double_of_bipartite_graph_disconnects() {
        let c6 = cycle(6);
        let d = bipartite_double(&c6);
        assert_eq!(d.n(), 12);
        assert!(!all_pairs_distances(&d).connected);
    }

    #[test]
    fn folded_k2_is_k33() {
        let f = folded_double_odd(2).unwrap();
        assert_eq!(f.n(), 6);
        assert_eq!(f.edge_count(), 9);
        assert_eq!(f.regular_degree(), Some(3));
        // complete bipartite: every parity-0 vertex adjacent to every parity-1 vertex
        for u in 0..3 {
            for w in 3..6 {
                assert!(f.has_edge(u, w), "missing edge {u}-{w}");
            }
        }
    }

    #[test]
    fn folded_degree_is_k_plus_one() {
        for k in 2..=4 {
            let f = folded_double_odd(k).unwrap();
            assert_eq!(f.regular_degree(), Some(k + 1), "k = {k}");
            assert!(f.is_bipartite());
        }
    }

    #[test]
    fn distance_table_disconnected_flags() {
        let mut g = Graph::empty(4).unwrap();
        g.add_edge(0, 1).unwrap();
        let dt = all_pairs_distances(&g);
        assert!(!dt.connected);
        assert_eq!(dt.get(0, 2), INFINITE_DISTANCE);
        assert_eq!(dt.get(0, 1), 1);
    }

    #[test]
    fn antipodal_on_hexagon_is_rotation_by_three() {
        let c6 = cycle(6);
        let dt = all_pairs_distances(&c6);
        let m = antipodal_map(&c6, &dt).unwrap();
        assert_eq!(m, vec![3, 4, 5, 0, 1, 2]);
    }

    #[test]
    fn antipodal_fails_on_petersen() {
        let g = odd_graph(3).unwrap();
        let dt = all_pairs_distances(&g);
        let err = antipodal_map(&g, &dt).unwrap_err();
        assert_eq!(
            err,
            AntipodalError::AmbiguousAntipode {
                vertex: 0,
                count: 6
            }
        );
    }

    #[test]
    fn antipodal_fails_on_disconnected() {
        let mut g = Graph::empty(2).unwrap();
        let _ = &mut g;
        let dt = all_pairs_distances(&g);
        assert_eq!(
            antipodal_map(&g, &dt).unwrap_err(),
            AntipodalError::Disconnected
        );
    }

    #[test]
    fn covering_identity_map() {
        let g = odd_graph(3).unwrap();
        let f: Vec<usize> = (0..g.n()).collect();
        assert!(verify_covering_map(&g, &g, &f).is_covering());
    }

    #[test]
    fn covering_hexagon_onto_triangle() {
        let d = bipartite_double(&odd_graph(2).unwrap());
        let k3 = odd_graph(2).unwrap();
        let f: Vec<usize> = (0..6).map(|v| v % 3).collect();
        assert!(verify_covering_map(&d, &k3, &f).is_covering());
    }

    #[test]
    fn covering_rejects_adjacent_collapse() {
        let c6 = cycle(6);
        let k3 = odd_graph(2).unwrap();
        let f = vec![0, 0, 1, 1, 2, 2];
        let v = verify_covering_map(&c6, &k3, &f);
        assert_eq!(v, CoveringVerdict::EdgeNotPreserved { u: 0, v: 1 });
    }

    #[test]
    fn covering_rejects_non_surjective() {
        let mut g = Graph::empty(2).unwrap();
        g.add_edge(0, 1).unwrap();
        let mut h = Graph::empty(3).unwrap();
        h.add_edge(0, 1).unwrap();
        h.add_edge(1, 2).unwrap();
        let v = verify_covering_map(&g, &h, &[0, 1]);
        assert_eq!(v, CoveringVerdict::NotSurjective { missed: 2 });
    }

    #[test]
    fn covering_rejects_degree_drop() {
        // path P3 -> edge by collapsing the ends: homomorphism, surjective,
        // but the middle vertex has two neighbors with one image
        let p3 = path(3);
        let mut k2 = Graph::empty(2).unwrap();
        k2.add_edge(0, 1).unwrap();
        let v = verify_covering_map(&p3, &k2, &[0, 1, 0]);
        assert_eq!(v, CoveringVerdict::NotLocallyBijective { vertex: 1, base: 1 });
    }

    #[test]
    fn json_round_trip() {
        let g = folded_double_odd(2).unwrap();
        let s = g.to_json_string();
        let h = Graph::from_json_str(&s).unwrap();
        assert_eq!(g, h);
        assert_eq!(s, h.to_json_string());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = odd_graph(3).unwrap();
        let text = g.to_edge_list_text();
        assert!(text.starts_with("# n=10\n"));
        let h = Graph::from_edge_list_text(&text).unwrap();
        assert_eq!(g.edges(), h.edges());
    }

    #[test]
    fn relabel_moves_edges_and_labels() {
        let g = odd_graph(2).unwrap();
        let h = g.relabel(&[2, 0, 1]);
        assert_eq!(h.edge_count(), 3);
        assert_eq!(h.labels().unwrap()[2].subset, 0b001);
    }

    #[test]
    fn self_loop_rejected() {
        let mut g = Graph::empty(3).unwrap();
        assert_eq!(g.add_edge(1, 1).unwrap_err(), GraphError::SelfLoop(1));
    }
}
