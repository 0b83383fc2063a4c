//! Distance-regularity: intersection arrays, the closed-form arrays for the
//! odd graph family, the bipartite-double criterion, and intersection
//! matrices.

use crate::graph::{all_pairs_distances, Graph};
use crate::linalg::IntMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DrgError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not regular")]
    NotRegular,
    #[error("intersection array is inconsistent: {0}")]
    BadArray(String),
}

/// Intersection array `{b_0..b_{d-1}; c_1..c_d}` of a distance-regular graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionArray {
    pub valency: usize,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl IntersectionArray {
    pub fn new(valency: usize, b: Vec<usize>, c: Vec<usize>) -> Result<Self, DrgError> {
        let arr = IntersectionArray { valency, b, c };
        arr.validate()?;
        Ok(arr)
    }

    pub fn validate(&self) -> Result<(), DrgError> {
        if self.b.len() != self.c.len() || self.b.is_empty() {
            return Err(DrgError::BadArray(format!(
                "b has {} entries, c has {}",
                self.b.len(),
                self.c.len()
            )));
        }
        if self.b[0] != self.valency {
            return Err(DrgError::BadArray(format!(
                "b_0 = {} but valency = {}",
                self.b[0], self.valency
            )));
        }
        if self.c[0] < 1 {
            return Err(DrgError::BadArray("c_1 must be at least 1".into()));
        }
        for r in 0..=self.diameter() {
            if self.b_at(r) + self.c_at(r) > self.valency {
                return Err(DrgError::BadArray(format!("a_{r} is negative")));
            }
        }
        Ok(())
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    /// `b_r`, with the convention `b_d = 0`.
    pub fn b_at(&self, r: usize) -> usize {
        if r < self.b.len() {
            self.b[r]
        } else {
            0
        }
    }

    /// `c_r`, with the convention `c_0 = 0`.
    pub fn c_at(&self, r: usize) -> usize {
        if r == 0 {
            0
        } else {
            self.c[r - 1]
        }
    }

    /// `a_r = k - b_r - c_r`.
    pub fn a_at(&self, r: usize) -> usize {
        self.valency - self.b_at(r) - self.c_at(r)
    }

    pub fn a_values(&self) -> Vec<usize> {
        (0..=self.diameter()).map(|r| self.a_at(r)).collect()
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bs: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        let cs: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{};{}}}", bs.join(","), cs.join(","))
    }
}

impl Serialize for IntersectionArray {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IntersectionArray", 4)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("k", &self.valency)?;
        st.serialize_field("d", &self.diameter())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for IntersectionArray {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Dto {
            b: Vec<usize>,
            c: Vec<usize>,
            k: usize,
            d: usize,
        }
        let dto = Dto::deserialize(d)?;
        if dto.d != dto.b.len() {
            return Err(D::Error::custom("d does not match the length of b"));
        }
        IntersectionArray::new(dto.k, dto.b, dto.c).map_err(D::Error::custom)
    }
}

/// Witness that a connected regular graph is not distance regular: an ordered
/// pair whose layer count disagrees with the first pair seen at its distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DrgRefutation {
    pub u: usize,
    pub v: usize,
    pub distance: u32,
    /// which count disagreed: "b" (one layer out) or "c" (one layer in)
    pub quantity: char,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DrgResult {
    DistanceRegular(IntersectionArray),
    Refuted(DrgRefutation),
}

impl DrgResult {
    pub fn array(&self) -> Option<&IntersectionArray> {
        match self {
            DrgResult::DistanceRegular(a) => Some(a),
            DrgResult::Refuted(_) => None,
        }
    }
}

/// Number of neighbors of `v` at distance `r` from `u`.
pub fn layer_count(g: &Graph, dt: &crate::graph::DistanceTable, u: usize, v: usize, r: u32) -> usize {
    g.neighbors(v).filter(|&w| dt.get(u, w) == r).count()
}

/// Computes the intersection array, verifying the counts over every ordered
/// pair, not just one base vertex.
pub fn intersection_array(g: &Graph) -> Result<DrgResult, DrgError> {
    let dt = all_pairs_distances(g);
    if !dt.connected || g.n() == 0 {
        return Err(DrgError::Disconnected);
    }
    let valency = g.regular_degree().ok_or(DrgError::NotRegular)?;
    let d = dt.diameter as usize;
    let mut b: Vec<Option<usize>> = vec![None; d + 1];
    let mut c: Vec<Option<usize>> = vec![None; d + 1];
    let mut first: Vec<Option<(usize, usize)>> = vec![None; d + 1];
    for u in 0..g.n() {
        for v in 0..g.n() {
            let r = dt.get(u, v) as usize;
            let out = layer_count(g, &dt, u, v, r as u32 + 1);
            let inward = if r == 0 {
                0
            } else {
                layer_count(g, &dt, u, v, r as u32 - 1)
            };
            match first[r] {
                None => {
                    first[r] = Some((u, v));
                    b[r] = Some(out);
                    c[r] = Some(inward);
                }
                Some(_) => {
                    if b[r] != Some(out) {
                        return Ok(DrgResult::Refuted(DrgRefutation {
                            u,
                            v,
                            distance: r as u32,
                            quantity: 'b',
                            expected: b[r].expect("set with first"),
                            found: out,
                        }));
                    }
                    if c[r] != Some(inward) {
                        return Ok(DrgResult::Refuted(DrgRefutation {
                            u,
                            v,
                            distance: r as u32,
                            quantity: 'c',
                            expected: c[r].expect("set with first"),
                            found: inward,
                        }));
                    }
                }
            }
        }
    }
    let arr = IntersectionArray::new(
        valency,
        (0..d).map(|r| b[r].expect("layer reached")).collect(),
        (1..=d).map(|r| c[r].expect("layer reached")).collect(),
    )?;
    Ok(DrgResult::DistanceRegular(arr))
}

/// Closed-form array for the odd graph O_k: `b_r = k - ceil(r/2)`,
/// `c_r = ceil(r/2)`, emitted with length `max(k-1, 2)`. At `k = 2` this is
/// longer than the true diameter of O_2 = K3; callers compare and report the
/// mismatch rather than reconciling.
pub fn predicted_odd_array(k: usize) -> IntersectionArray {
    assert!(k >= 2);
    let d = (k - 1).max(2);
    IntersectionArray {
        valency: k,
        b: (0..d).map(|r| k - r.div_ceil(2)).collect(),
        c: (1..=d).map(|r| r.div_ceil(2)).collect(),
    }
}

/// The length-(2k-1) array of the bipartite double 2O_k: same closed forms,
/// run out to c_d = k; every a_r is zero.
pub fn predicted_double_odd_array(k: usize) -> IntersectionArray {
    assert!(k >= 2);
    let d = 2 * k - 1;
    IntersectionArray {
        valency: k,
        b: (0..d).map(|r| k - r.div_ceil(2)).collect(),
        c: (1..=d).map(|r| r.div_ceil(2)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCriterionVerdict {
    pub holds: bool,
    pub a_values: Vec<usize>,
    /// `2d + 1` when the criterion holds
    pub predicted_double_diameter: Option<usize>,
}

/// Criterion for the bipartite double of a distance-regular graph to be
/// distance regular of diameter 2d+1: `a_i = 0` for `i < d` and `a_d > 0`.
pub fn bipartite_double_drg_criterion(arr: &IntersectionArray) -> DoubleCriterionVerdict {
    let d = arr.diameter();
    let a_values = arr.a_values();
    let holds = a_values[..d].iter().all(|&a| a == 0) && a_values[d] > 0;
    DoubleCriterionVerdict {
        holds,
        a_values,
        predicted_double_diameter: holds.then_some(2 * d + 1),
    }
}

/// Tridiagonal intersection matrix: sub-diagonal c, diagonal a,
/// super-diagonal b.
pub fn intersection_matrix(arr: &IntersectionArray) -> IntMatrix {
    let d = arr.diameter();
    IntMatrix::from_fn(d + 1, d + 1, |i, j| {
        if j + 1 == i {
            BigInt::from(arr.c_at(i))
        } else if j == i {
            BigInt::from(arr.a_at(i))
        } else if j == i + 1 {
            BigInt::from(arr.b_at(i))
        } else {
            BigInt::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bipartite_double, odd_graph};

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::empty(n).unwrap();
        for v in 0..n {
            g.add_edge(v, (v + 1) % n).unwrap();
        }
        g
    }

    fn array_of(g: &Graph) -> IntersectionArray {
        match intersection_array(g).unwrap() {
            DrgResult::DistanceRegular(a) => a,
            DrgResult::Refuted(w) => panic!("unexpected refutation: {w:?}"),
        }
    }

    #[test]
    fn petersen_array() {
        let arr = array_of(&odd_graph(3).unwrap());
        assert_eq!(arr.to_string(), "{3,2;1,1}");
        assert_eq!(arr.a_values(), vec![0, 0, 2]);
    }

    #[test]
    fn double_odd_three_matches_prediction() {
        let arr = array_of(&bipartite_double(&odd_graph(3).unwrap()));
        assert_eq!(arr, predicted_double_odd_array(3));
        assert_eq!(arr.to_string(), "{3,2,2,1,1;1,1,2,2,3}");
    }

    #[test]
    fn hexagon_array() {
        let arr = array_of(&cycle(6));
        assert_eq!(arr.to_string(), "{2,1,1;1,1,2}");
    }

    #[test]
    fn triangle_array_has_diameter_one() {
        let arr = array_of(&odd_graph(2).unwrap());
        assert_eq!(arr.to_string(), "{2;1}");
        assert_eq!(arr.a_values(), vec![0, 1]);
    }

    #[test]
    fn prism_is_refuted_with_replayable_witness() {
        // triangular prism: 3-regular and connected but not distance regular
        // (triangle edges and matching edges see different layer counts)
        let mut prism = Graph::empty(6).unwrap();
        for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            prism.add_edge(u, v).unwrap();
        }
        for v in 0..3 {
            prism.add_edge(v, v + 3).unwrap();
        }
        let w = match intersection_array(&prism).unwrap() {
            DrgResult::Refuted(w) => w,
            DrgResult::DistanceRegular(a) => panic!("prism is not drg: {a}"),
        };
        // replay the witness through the layer counter
        let dt = crate::graph::all_pairs_distances(&prism);
        let (fu, fv) = (0..6)
            .flat_map(|u| (0..6).map(move |v| (u, v)))
            .find(|&(u, v)| dt.get(u, v) == w.distance)
            .expect("distance class is inhabited");
        let replay = |u: usize, v: usize, delta: i64| {
            layer_count(&prism, &dt, u, v, (w.distance as i64 + delta) as u32)
        };
        let delta = if w.quantity == 'b' { 1 } else { -1 };
        assert_eq!(replay(w.u, w.v, delta), w.found);
        assert_eq!(replay(fu, fv, delta), w.expected);
        assert_ne!(w.expected, w.found);
    }

    #[test]
    fn irregular_and_disconnected_inputs_error() {
        let mut path = Graph::empty(3).unwrap();
        path.add_edge(0, 1).unwrap();
        path.add_edge(1, 2).unwrap();
        assert_eq!(intersection_array(&path).unwrap_err(), DrgError::NotRegular);
        let two = Graph::empty(2).unwrap();
        assert_eq!(
            intersection_array(&two).unwrap_err(),
            DrgError::Disconnected
        );
    }

    #[test]
    fn predicted_odd_arrays() {
        assert_eq!(predicted_odd_array(3).to_string(), "{3,2;1,1}");
        assert_eq!(predicted_odd_array(3).a_at(2), 2);
        assert_eq!(predicted_odd_array(4).to_string(), "{4,3,3;1,1,2}");
        assert_eq!(predicted_odd_array(4).a_at(3), 2);
        assert_eq!(predicted_odd_array(2).to_string(), "{2,1;1,1}");
        assert_eq!(predicted_odd_array(2).a_at(2), 1);
    }

    #[test]
    fn predicted_odd_matches_computed_above_two() {
        for k in 3..=5 {
            let arr = array_of(&odd_graph(k).unwrap());
            assert_eq!(arr, predicted_odd_array(k), "k = {k}");
        }
        // the documented k = 2 degeneracy: O_2 = K3 has diameter 1
        assert_ne!(array_of(&odd_graph(2).unwrap()), predicted_odd_array(2));
    }

    #[test]
    fn predicted_double_odd_arrays() {
        assert_eq!(predicted_double_odd_array(2).to_string(), "{2,1,1;1,1,2}");
        assert_eq!(
            predicted_double_odd_array(3).to_string(),
            "{3,2,2,1,1;1,1,2,2,3}"
        );
        for k in 2..=6 {
            let arr = predicted_double_odd_array(k);
            assert!(arr.a_values().iter().all(|&a| a == 0), "k = {k}");
            assert_eq!(arr.diameter(), 2 * k - 1);
            assert!(arr.validate().is_ok());
        }
    }

    #[test]
    fn double_criterion_verdicts() {
        let petersen = bipartite_double_drg_criterion(&predicted_odd_array(3));
        assert!(petersen.holds);
        assert_eq!(petersen.a_values, vec![0, 0, 2]);
        assert_eq!(petersen.predicted_double_diameter, Some(5));

        let k3 = bipartite_double_drg_criterion(&array_of(&odd_graph(2).unwrap()));
        assert!(k3.holds);
        assert_eq!(k3.predicted_double_diameter, Some(3));

        let c5 = bipartite_double_drg_criterion(&array_of(&cycle(5)));
        assert!(c5.holds);

        // C6 is antipodal bipartite: a_d = 0, criterion fails
        let c6 = bipartite_double_drg_criterion(&array_of(&cycle(6)));
        assert!(!c6.holds);
        assert_eq!(c6.predicted_double_diameter, None);
    }

    #[test]
    fn intersection_matrices() {
        let m = intersection_matrix(&predicted_odd_array(3));
        assert_eq!(
            m.to_nested_i64(),
            vec![vec![0, 3, 0], vec![1, 0, 2], vec![0, 1, 2]]
        );
        let b2 = intersection_matrix(&predicted_double_odd_array(2));
        assert_eq!(
            b2.to_nested_i64(),
            vec![
                vec![0, 2, 0, 0],
                vec![1, 0, 1, 0],
                vec![0, 1, 0, 1],
                vec![0, 0, 2, 0],
            ]
        );
        let k2 = intersection_matrix(&IntersectionArray::new(1, vec![1], vec![1]).unwrap());
        assert_eq!(k2.to_nested_i64(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn array_serde_shape() {
        let arr = predicted_odd_array(3);
        let j = serde_json::to_string(&arr).unwrap();
        assert_eq!(j, r#"{"b":[3,2],"c":[1,1],"k":3,"d":2}"#);
        let back: IntersectionArray = serde_json::from_str(&j).unwrap();
        assert_eq!(back, arr);
        assert!(serde_json::from_str::<IntersectionArray>(
            r#"{"b":[3,2],"c":[1,1],"k":3,"d":5}"#
        )
        .is_err());
    }

    #[test]
    fn validation_rejects_bad_arrays() {
        assert!(IntersectionArray::new(3, vec![2, 2], vec![1, 1]).is_err());
        assert!(IntersectionArray::new(3, vec![3, 2], vec![1]).is_err());
        assert!(IntersectionArray::new(2, vec![2, 2], vec![1, 1]).is_err());
    }
}
