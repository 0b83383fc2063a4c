//! Permutations, the theta and sigma generator families, stabilizer-chain
//! group orders, and a refinement-backtracking full automorphism search.

use crate::graph::{odd_subsets, subset_index, Graph, GraphError};
use crate::partition::{equitable_refinement, Partition};
use num_bigint::BigInt;
use num_traits::One;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("image is not a bijection on 0..{degree}")]
    NotBijection { degree: usize },
    #[error("sigma must be a permutation of {expected} ground elements, got degree {got}")]
    BadSigmaDegree { expected: usize, got: usize },
    #[error("graph has {n} vertices, over the automorphism search limit {max_n}")]
    CapacityExceeded { n: usize, max_n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomorphismError {
    #[error("permutation degree {got} does not match vertex count {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("adjacency of ({u}, {v}) is not preserved")]
    NotPreserved { u: usize, v: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransitivityError {
    #[error("generator {index} is not an automorphism: {source}")]
    BadGenerator {
        index: usize,
        source: AutomorphismError,
    },
}

// ======================================================================
// permutations
// ======================================================================

/// Permutation of `0..n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn from_image(image: Vec<usize>) -> Result<Self, SymmetryError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(SymmetryError::NotBijection { degree: n });
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Composition applying `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            image: self.image.iter().map(|&v| other.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Permutation { image }
    }

    /// Non-trivial cycles, each starting at its minimum point, ordered by
    /// that minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut v = self.image[start];
            while v != start {
                seen[v] = true;
                cycle.push(v);
                v = self.image[v];
            }
            out.push(cycle);
        }
        out
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.image.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let image = Vec::<usize>::deserialize(d)?;
        Permutation::from_image(image).map_err(D::Error::custom)
    }
}

/// True automorphism check: adjacency must be preserved in both directions.
pub fn is_automorphism(g: &Graph, p: &Permutation) -> Result<(), AutomorphismError> {
    let n = g.n();
    if p.degree() != n {
        return Err(AutomorphismError::DegreeMismatch {
            expected: n,
            got: p.degree(),
        });
    }
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) != g.has_edge(p.apply(u), p.apply(v)) {
                return Err(AutomorphismError::NotPreserved { u, v });
            }
        }
    }
    Ok(())
}

// ======================================================================
// theta and sigma generators
// ======================================================================

/// Parity flip on the double: `(v, i) -> (v, 1-i)`, i.e. `x -> x +- N`.
pub fn theta_generator(k: usize) -> Result<Permutation, SymmetryError> {
    let n = odd_subsets(k)?.len();
    let image = (0..2 * n).map(|x| (x + n) % (2 * n)).collect();
    Ok(Permutation::from_image(image).expect("parity flip is a bijection"))
}

/// Vertex permutation of the double induced by a permutation `sigma` of the
/// ground set: `({x...}, i) -> ({sigma(x)...}, i)`.
pub fn sigma_generator(sigma: &Permutation, k: usize) -> Result<Permutation, SymmetryError> {
    let subsets = odd_subsets(k)?;
    let ground = 2 * k - 1;
    if sigma.degree() != ground {
        return Err(SymmetryError::BadSigmaDegree {
            expected: ground,
            got: sigma.degree(),
        });
    }
    let n = subsets.len();
    let mut image = vec![0usize; 2 * n];
    for (i, &mask) in subsets.iter().enumerate() {
        let mut mapped: u32 = 0;
        for b in 0..ground {
            if mask >> b & 1 == 1 {
                mapped |= 1 << sigma.apply(b);
            }
        }
        let j = subset_index(&subsets, mapped);
        image[i] = j;
        image[n + i] = n + j;
    }
    Ok(Permutation::from_image(image).expect("induced map is a bijection"))
}

/// Standard generating pair of Sym(m): a transposition and an m-cycle.
pub fn symmetric_group_generators(m: usize) -> Vec<Permutation> {
    if m < 2 {
        return vec![Permutation::identity(m)];
    }
    let mut swap: Vec<usize> = (0..m).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
    vec![
        Permutation::from_image(swap).expect("valid"),
        Permutation::from_image(cycle).expect("valid"),
    ]
}

// ======================================================================
// stabilizer chains
// ======================================================================

/// Deterministic Schreier-Sims stabilizer chain. The supplied preferred base
/// is kept verbatim as a prefix (levels with singleton orbits included), so
/// `stabilizer_gens(d)` generates the pointwise stabilizer of the first `d`
/// preferred points.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    base: Vec<usize>,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    base_point: usize,
    orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
}

impl StabChain {
    pub fn build(degree: usize, gens: &[Permutation], preferred_base: &[usize]) -> StabChain {
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        {
            let mut seen = vec![false; degree];
            for &b in preferred_base {
                assert!(b < degree && !seen[b], "preferred base must be distinct");
                seen[b] = true;
            }
        }
        let mut strong: Vec<Permutation> = Vec::new();
        for g in gens {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<usize> = preferred_base.to_vec();
        loop {
            extend_base(&strong, &mut base);
            let levels = compute_levels(degree, &strong, &base);
            match find_failing_schreier(&strong, &base, &levels) {
                Some(residue) => strong.push(residue),
                None => {
                    return StabChain {
                        degree,
                        base,
                        strong,
                        levels,
                    }
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn order(&self) -> BigInt {
        self.levels
            .iter()
            .map(|l| BigInt::from(l.orbit.len()))
            .product()
    }

    /// Strong generators fixing the first `d` base points pointwise; these
    /// generate that pointwise stabilizer.
    pub fn stabilizer_gens(&self, d: usize) -> Vec<&Permutation> {
        assert!(d <= self.base.len());
        self.strong
            .iter()
            .filter(|g| self.base[..d].iter().all(|&b| g.apply(b) == b))
            .collect()
    }

    /// Sifts `p` through the chain; the residue is the identity exactly when
    /// `p` is in the group.
    pub fn sift(&self, p: &Permutation) -> Permutation {
        assert_eq!(p.degree(), self.degree);
        let mut g = p.clone();
        for level in &self.levels {
            let target = g.apply(level.base_point);
            match &level.transversal[target] {
                Some(u) => g = g.then(&u.inverse()),
                None => return g,
            }
        }
        g
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.sift(p).is_identity()
    }
}

/// Grow the base until every non-identity strong generator moves a base point.
fn extend_base(strong: &[Permutation], base: &mut Vec<usize>) {
    for g in strong {
        if base.iter().all(|&b| g.apply(b) == b) {
            let moved = (0..g.degree())
                .find(|&v| g.apply(v) != v)
                .expect("non-identity generator moves a point");
            base.push(moved);
        }
    }
}

fn compute_levels(degree: usize, strong: &[Permutation], base: &[usize]) -> Vec<Level> {
    base.iter()
        .enumerate()
        .map(|(i, &b)| {
            let gens: Vec<&Permutation> = strong
                .iter()
                .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
                .collect();
            let mut orbit = vec![b];
            let mut transversal: Vec<Option<Permutation>> = vec![None; degree];
            transversal[b] = Some(Permutation::identity(degree));
            let mut head = 0;
            while head < orbit.len() {
                let p = orbit[head];
                head += 1;
                for g in &gens {
                    let q = g.apply(p);
                    if transversal[q].is_none() {
                        let u = transversal[p].as_ref().expect("p is in orbit").then(g);
                        transversal[q] = Some(u);
                        orbit.push(q);
                    }
                }
            }
            Level {
                base_point: b,
                orbit,
                transversal,
            }
        })
        .collect()
}

/// Verifies every Schreier generator sifts to the identity; returns the first
/// non-trivial residue otherwise.
fn find_failing_schreier(
    strong: &[Permutation],
    base: &[usize],
    levels: &[Level],
) -> Option<Permutation> {
    for (i, level) in levels.iter().enumerate() {
        let gens: Vec<&Permutation> = strong
            .iter()
            .filter(|g| base[..i].iter().all(|&p| g.apply(p) == p))
            .collect();
        for &p in &level.orbit {
            let u_p = level.transversal[p].as_ref().expect("orbit point");
            for g in &gens {
                let q = g.apply(p);
                let u_q = level.transversal[q].as_ref().expect("orbit is closed");
                let schreier = u_p.then(g).then(&u_q.inverse());
                if let Some(residue) = sift_residue(&schreier, &levels[i + 1..]) {
                    return Some(residue);
                }
            }
        }
    }
    None
}

/// `Some(residue)` when the permutation fails to sift to the identity.
fn sift_residue(p: &Permutation, levels: &[Level]) -> Option<Permutation> {
    let mut g = p.clone();
    for level in levels {
        let target = g.apply(level.base_point);
        match &level.transversal[target] {
            Some(u) => g = g.then(&u.inverse()),
            None => return Some(g),
        }
    }
    (!g.is_identity()).then_some(g)
}

/// Exact order of the group generated by `gens`.
pub fn group_order(gens: &[Permutation]) -> BigInt {
    match gens.first() {
        None => BigInt::one(),
        Some(g) => StabChain::build(g.degree(), gens, &[]).order(),
    }
}

// ======================================================================
// permutation groups
// ======================================================================

/// Generators plus the exact order of the group they generate.
#[derive(Debug, Clone)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub order: BigInt,
    chain: StabChain,
}

impl PermGroup {
    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> PermGroup {
        let chain = StabChain::build(degree, &generators, &[]);
        PermGroup {
            degree,
            generators,
            order: chain.order(),
            chain,
        }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain.contains(p)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl Serialize for PermGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PermGroup", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("order", &self.order.to_string())?;
        st.end()
    }
}

/// Single-orbit check; every generator is first verified to be an
/// automorphism.
pub fn is_vertex_transitive(g: &Graph, gens: &[Permutation]) -> Result<bool, TransitivityError> {
    for (index, p) in gens.iter().enumerate() {
        is_automorphism(g, p).map_err(|source| TransitivityError::BadGenerator { index, source })?;
    }
    let partition = crate::partition::orbit_partition(g.n(), gens)
        .expect("degrees already checked against g");
    Ok(partition.cell_count() == 1)
}

// ======================================================================
// full automorphism search
// ======================================================================

/// Full automorphism group via individualization-refinement backtracking.
///
/// The first leaf fixes a canonical vertex ordering; sibling branches are
/// pruned by refinement traces and, along the first-leaf spine, by orbits of
/// the already-found group. Every emitted generator is re-verified, and the
/// group order is cross-checked under generator reorderings.
pub fn full_automorphism_group(g: &Graph, max_n: usize) -> Result<PermGroup, SymmetryError> {
    let n = g.n();
    if n > max_n {
        return Err(SymmetryError::CapacityExceeded { n, max_n });
    }
    if n == 0 {
        return Ok(PermGroup::from_generators(0, vec![]));
    }

    let root = equitable_refinement(g, &Partition::unit(n));

    // First-leaf spine: individualize the first vertex of the target cell,
    // refine, repeat until discrete.
    let mut spine_nodes = vec![root];
    let mut base_seq: Vec<usize> = Vec::new();
    while let Some(t) = target_cell(spine_nodes.last().expect("nonempty")) {
        let node = spine_nodes.last().expect("nonempty");
        let v = node.cells()[t][0];
        base_seq.push(v);
        let child = equitable_refinement(g, &node.individualize(v));
        spine_nodes.push(child);
    }
    let trace0: Vec<Vec<usize>> = spine_nodes.iter().map(|p| p.cell_sizes()).collect();
    let leaf0 = spine_nodes.last().expect("nonempty");
    let l0_order: Vec<usize> = leaf0.cells().iter().map(|c| c[0]).collect();

    let mut gens: Vec<Permutation> = Vec::new();
    let mut chain = StabChain::build(n, &gens, &base_seq);

    // Deepest spine level first, so orbit pruning at shallower levels sees
    // the stabilizer generators found below.
    for d in (0..base_seq.len()).rev() {
        let node = &spine_nodes[d];
        let t = target_cell(node).expect("spine nodes above the leaf are non-discrete");
        let candidates = node.cells()[t].clone();
        let mut orbit = orbit_membership(n, base_seq[d], &chain.stabilizer_gens(d));
        for &v in &candidates {
            if orbit[v] {
                continue;
            }
            let child = equitable_refinement(g, &node.individualize(v));
            if child.cell_sizes() != trace0[d + 1] {
                continue;
            }
            if let Some(gamma) = dive(g, &child, d + 1, &trace0, &l0_order) {
                gens.push(gamma);
                chain = StabChain::build(n, &gens, &base_seq);
                orbit = orbit_membership(n, base_seq[d], &chain.stabilizer_gens(d));
            }
        }
    }

    for p in &gens {
        assert!(
            is_automorphism(g, p).is_ok(),
            "search emitted a non-automorphism"
        );
    }
    let order = chain.order();
    let mut reordered = gens.clone();
    reordered.reverse();
    assert_eq!(
        StabChain::build(n, &reordered, &[]).order(),
        order,
        "order unstable under generator reversal"
    );
    if gens.len() > 1 {
        reordered.rotate_left(1);
        assert_eq!(
            StabChain::build(n, &reordered, &[]).order(),
            order,
            "order unstable under generator rotation"
        );
    }

    Ok(PermGroup {
        degree: n,
        generators: gens,
        order,
        chain,
    })
}

/// First cell of minimum size above 1, if any.
fn target_cell(p: &Partition) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, cell) in p.cells().iter().enumerate() {
        if cell.len() > 1 && best.is_none_or(|(_, len)| cell.len() < len) {
            best = Some((i, cell.len()));
        }
    }
    best.map(|(i, _)| i)
}

fn orbit_membership(n: usize, start: usize, gens: &[&Permutation]) -> Vec<bool> {
    let mut in_orbit = vec![false; n];
    in_orbit[start] = true;
    let mut queue = vec![start];
    while let Some(p) = queue.pop() {
        for g in gens {
            let q = g.apply(p);
            if !in_orbit[q] {
                in_orbit[q] = true;
                queue.push(q);
            }
        }
    }
    in_orbit
}

/// Depth-first hunt for one automorphism in a sibling subtree; leaves are
/// compared positionally against the first leaf.
fn dive(
    g: &Graph,
    node: &Partition,
    depth: usize,
    trace0: &[Vec<usize>],
    l0_order: &[usize],
) -> Option<Permutation> {
    match target_cell(node) {
        None => {
            let mut image = vec![0usize; g.n()];
            for (m, cell) in node.cells().iter().enumerate() {
                image[l0_order[m]] = cell[0];
            }
            let p = Permutation::from_image(image).ok()?;
            if p.is_identity() {
                return None;
            }
            is_automorphism(g, &p).ok().map(|_| p)
        }
        Some(t) => {
            for &v in &node.cells()[t] {
                let child = equitable_refinement(g, &node.individualize(v));
                if child.cell_sizes() != trace0[depth + 1] {
                    continue;
                }
                if let Some(p) = dive(g, &child, depth + 1, trace0, l0_order) {
                    return Some(p);
                }
            }
            None
        }
    }
}

// ======================================================================
// tests
// ======================================================================
