//! Executable claim registry: every numbered claim C1..C9 maps to a check
//! over one value of k, returning PASS, REFUTED, or UNVERIFIED with a
//! structured evidence payload.

use crate::drg::{
    bipartite_double_drg_criterion, intersection_array, intersection_matrix,
    predicted_double_odd_array, DrgResult,
};
use crate::graph::{
    all_pairs_distances, antipodal_map, bipartite_double, folded_double_odd, odd_graph,
    verify_covering_map,
};
use crate::linalg::{char_poly, integer_roots, integral_spectrum, IntMatrix};
use crate::partition::{
    distance_partition, gershgorin_bound, is_equitable, orbit_partition,
    quotient_spectrum_subset_check,
};
use crate::symmetry::{
    full_automorphism_group, is_vertex_transitive, sigma_generator, symmetric_group_generators,
    theta_generator, Permutation, SymmetryError,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

// ======================================================================
// identifiers and verdicts
// ======================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClaimId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
}

impl ClaimId {
    pub const ALL: [ClaimId; 9] = [
        ClaimId::C1,
        ClaimId::C2,
        ClaimId::C3,
        ClaimId::C4,
        ClaimId::C5,
        ClaimId::C6,
        ClaimId::C7,
        ClaimId::C8,
        ClaimId::C9,
    ];

    pub fn description(self) -> &'static str {
        match self {
            ClaimId::C1 => "the bipartite double 2O_k has diameter 2k-1",
            ClaimId::C2 => "2O_k is distance regular with the predicted intersection array",
            ClaimId::C3 => "(v,i) -> v is a covering map 2O_k -> O_k with antipodal fibres",
            ClaimId::C4 => "Spec(2O_k) = {+-(k-i)} with binomial-difference multiplicities",
            ClaimId::C5 => "the tridiagonal matrix B has simple integer roots +-(k-i)",
            ClaimId::C6 => "F(2O_k) is vertex transitive",
            ClaimId::C7 => "Aut(F(2O_k)) has order 2(2k-1)! and equals Aut(2O_k)",
            ClaimId::C8 => "the folded quotient is B + C with integer roots +-(k-i+(-1)^i)",
            ClaimId::C9 => "F(2O_k) is integral with eigenvalues among +-(k-i+(-1)^i)",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", *self as u8 + 1)
    }
}

impl FromStr for ClaimId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase();
        ClaimId::ALL
            .iter()
            .copied()
            .find(|c| c.to_string() == norm)
            .ok_or_else(|| format!("unknown claim id: {s}"))
    }
}

impl Serialize for ClaimId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Refuted,
    Unverified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Refuted => "REFUTED",
            Verdict::Unverified => "UNVERIFIED",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub claim_id: ClaimId,
    pub k: usize,
    pub verdict: Verdict,
    pub evidence: Value,
    /// Wall-clock time; kept out of serialized reports so identical
    /// invocations stay byte-identical.
    #[serde(skip)]
    pub runtime_ms: u128,
}

// ======================================================================
// configuration
// ======================================================================

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    /// Cap for every claim except C5.
    pub max_k: usize,
    /// C5 is pure small-matrix arithmetic and runs further out.
    pub c5_max_k: usize,
    /// Vertex-count cap for the brute-force automorphism search.
    pub max_aut_n: usize,
    /// Downgrade allowlisted REFUTED verdicts in the aggregate status.
    pub allow_known_discrepancies: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            max_k: 5,
            c5_max_k: 12,
            max_aut_n: 70,
            allow_known_discrepancies: true,
        }
    }
}

/// Expected refutations: these reports stay REFUTED but do not fail the
/// aggregate status under the default config.
pub fn known_discrepancies() -> &'static [(ClaimId, usize)] {
    &[(ClaimId::C7, 2)]
}

// ======================================================================
// harness
// ======================================================================

pub struct Harness {
    pub config: HarnessConfig,
}

impl Harness {
    pub fn new(config: HarnessConfig) -> Self {
        Harness { config }
    }

    fn k_cap(&self, id: ClaimId) -> usize {
        if id == ClaimId::C5 {
            self.config.c5_max_k
        } else {
            self.config.max_k
        }
    }

    pub fn run_claim(&self, id: ClaimId, k: usize) -> ClaimReport {
        let start = Instant::now();
        let (verdict, evidence) = if k < 2 {
            (
                Verdict::Unverified,
                json!({"reason": "k must be at least 2", "k": k}),
            )
        } else if k > self.k_cap(id) {
            (
                Verdict::Unverified,
                json!({
                    "reason": "k exceeds the configured cap for this claim",
                    "k": k,
                    "cap": self.k_cap(id),
                }),
            )
        } else {
            match id {
                ClaimId::C1 => claim_c1(k),
                ClaimId::C2 => claim_c2(k),
                ClaimId::C3 => claim_c3(k),
                ClaimId::C4 => claim_c4(k),
                ClaimId::C5 => claim_c5(k),
                ClaimId::C6 => claim_c6(k),
                ClaimId::C7 => claim_c7(k, self.config.max_aut_n),
                ClaimId::C8 => claim_c8(k),
                ClaimId::C9 => claim_c9(k),
            }
        };
        ClaimReport {
            claim_id: id,
            k,
            verdict,
            evidence,
            runtime_ms: start.elapsed().as_millis(),
        }
    }

    /// The given claims at every k, in claim-then-k order. Claims run as
    /// independent parallel jobs; the report order is fixed.
    pub fn run_claims(&self, ids: &[ClaimId], ks: &[usize]) -> Vec<ClaimReport> {
        let jobs: Vec<(ClaimId, usize)> = ids
            .iter()
            .flat_map(|&id| ks.iter().map(move |&k| (id, k)))
            .collect();
        jobs.par_iter()
            .map(|&(id, k)| self.run_claim(id, k))
            .collect()
    }

    pub fn run_all(&self, ks: &[usize]) -> Vec<ClaimReport> {
        self.run_claims(&ClaimId::ALL, ks)
    }

    /// False only when a REFUTED verdict appears outside the known
    /// discrepancies (or anywhere, with the allowlist disabled).
    pub fn aggregate_ok(&self, reports: &[ClaimReport]) -> bool {
        reports.iter().all(|r| {
            r.verdict != Verdict::Refuted
                || (self.config.allow_known_discrepancies
                    && known_discrepancies().contains(&(r.claim_id, r.k)))
        })
    }
}

pub fn reports_to_json(reports: &[ClaimReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("serializable");
    s.push('\n');
    s
}

/// Claim-by-k verdict grid plus detail lines for everything that is not a
/// plain PASS.
pub fn markdown_summary(reports: &[ClaimReport]) -> String {
    let mut ks: Vec<usize> = reports.iter().map(|r| r.k).collect();
    ks.sort_unstable();
    ks.dedup();
    let mut out = String::from("# Claim verification\n\n");
    out.push_str("| claim | statement |");
    for k in &ks {
        out.push_str(&format!(" k={k} |"));
    }
    out.push_str("\n|---|---|");
    for _ in &ks {
        out.push_str("---|");
    }
    out.push('\n');
    for id in ClaimId::ALL {
        let row: Vec<&ClaimReport> = reports.iter().filter(|r| r.claim_id == id).collect();
        if row.is_empty() {
            continue;
        }
        out.push_str(&format!("| {id} | {} |", id.description()));
        for &k in &ks {
            let cell = row
                .iter()
                .find(|r| r.k == k)
                .map_or(String::new(), |r| r.verdict.to_string());
            out.push_str(&format!(" {cell} |"));
        }
        out.push('\n');
    }
    let mut notes = String::new();
    for r in reports {
        if r.verdict == Verdict::Pass {
            continue;
        }
        let allowlisted = known_discrepancies().contains(&(r.claim_id, r.k));
        let tag = if r.verdict == Verdict::Refuted && allowlisted {
            " (known discrepancy)"
        } else {
            ""
        };
        notes.push_str(&format!(
            "- {} at k={}: {}{tag} -- evidence: {}\n",
            r.claim_id, r.k, r.verdict, r.evidence
        ));
    }
    if !notes.is_empty() {
        out.push_str("\n## Notes\n\n");
        out.push_str(&notes);
    }
    out
}

// ======================================================================
// shared arithmetic
// ======================================================================

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Prop-3 spectrum of 2O_k: eigenvalues +-(k-i) with multiplicity
/// C(2k-1,i) - C(2k-1,i-1), ascending.
pub fn predicted_double_odd_spectrum(k: usize) -> Vec<(i64, usize)> {
    let mult = |i: usize| {
        binomial(2 * k - 1, i) - if i == 0 { 0 } else { binomial(2 * k - 1, i - 1) }
    };
    let mut pairs: Vec<(i64, usize)> = (0..k).map(|i| (-((k - i) as i64), mult(i))).collect();
    pairs.extend((0..k).rev().map(|i| ((k - i) as i64, mult(i))));
    pairs
}

/// Theorem-7 eigenvalue set for F(2O_k): {+-(k - i + (-1)^i)}, sorted and
/// deduplicated.
pub fn folded_formula_eigenvalues(k: usize) -> Vec<i64> {
    let mut vals: Vec<i64> = (0..k)
        .flat_map(|i| {
            let v = k as i64 - i as i64 + if i % 2 == 0 { 1 } else { -1 };
            [v, -v]
        })
        .collect();
    vals.sort_unstable();
    vals.dedup();
    vals
}

fn big_to_json(v: &BigInt) -> Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

/// 2(2k-1)!.
pub fn claimed_aut_order(k: usize) -> BigInt {
    (1..=(2 * k as u64 - 1)).map(BigInt::from).product::<BigInt>() * 2
}

// ======================================================================
// the nine claims
// ======================================================================

fn claim_c1(k: usize) -> (Verdict, Value) {
    let odd = odd_graph(k).expect("k within bounds");
    let double = bipartite_double(&odd);
    let dt = all_pairs_distances(&double);
    let claimed = (2 * k - 1) as u32;
    let criterion = match intersection_array(&odd).expect("odd graphs are connected and regular") {
        DrgResult::DistanceRegular(arr) => json!(bipartite_double_drg_criterion(&arr)),
        DrgResult::Refuted(w) => json!({ "odd_graph_refutation": w }),
    };
    let pass = dt.connected && dt.diameter == claimed;
    let verdict = if pass { Verdict::Pass } else { Verdict::Refuted };
    (
        verdict,
        json!({
            "n": double.n(),
            "connected": dt.connected,
            "computed_diameter": dt.diameter,
            "claimed_diameter": claimed,
            "double_criterion_on_odd_array": criterion,
        }),
    )
}

fn claim_c2(k: usize) -> (Verdict, Value) {
    let double = bipartite_double(&odd_graph(k).expect("k within bounds"));
    let claimed = predicted_double_odd_array(k);
    match intersection_array(&double).expect("double is connected and regular") {
        DrgResult::DistanceRegular(computed) => {
            let equal = computed == claimed;
            let a_values = computed.a_values();
            let all_a_zero = a_values.iter().all(|&a| a == 0);
            let verdict = if equal && all_a_zero {
                Verdict::Pass
            } else {
                Verdict::Refuted
            };
            (
                verdict,
                json!({
                    "computed": computed,
                    "claimed": claimed,
                    "arrays_equal": equal,
                    "a_values": a_values,
                    "all_a_zero": all_a_zero,
                }),
            )
        }
        DrgResult::Refuted(w) => (
            Verdict::Refuted,
            json!({ "claimed": claimed, "refutation": w }),
        ),
    }
}

fn claim_c3(k: usize) -> (Verdict, Value) {
    let odd = odd_graph(k).expect("k within bounds");
    let double = bipartite_double(&odd);
    let n = odd.n();
    let fibre_map: Vec<usize> = (0..2 * n).map(|v| v % n).collect();
    let covering = verify_covering_map(&double, &odd, &fibre_map);
    let dt = all_pairs_distances(&double);
    let theta = theta_generator(k).expect("k within bounds");
    let (antipodal_ok, antipodal_note) = match antipodal_map(&double, &dt) {
        Ok(map) => (map == theta.image(), json!("unique antipodes")),
        Err(e) => (false, json!(e.to_string())),
    };
    let pass = covering.is_covering() && antipodal_ok;
    let verdict = if pass { Verdict::Pass } else { Verdict::Refuted };
    (
        verdict,
        json!({
            "covering": covering,
            "antipodal_map_is_parity_flip": antipodal_ok,
            "antipodal_note": antipodal_note,
        }),
    )
}

fn claim_c4(k: usize) -> (Verdict, Value) {
    let double = bipartite_double(&odd_graph(k).expect("k within bounds"));
    let spectrum = integral_spectrum(&double);
    let claimed = predicted_double_odd_spectrum(k);
    let pass = spectrum.pairs == claimed && spectrum.residual == 0;
    let verdict = if pass { Verdict::Pass } else { Verdict::Refuted };
    (
        verdict,
        json!({
            "computed_pairs": spectrum.pairs,
            "claimed_pairs": claimed,
            "residual": spectrum.residual,
        }),
    )
}

fn claim_c5(k: usize) -> (Verdict, Value) {
    let b = intersection_matrix(&predicted_double_odd_array(k));
    let poly = char_poly(&b).expect("square");
    let roots = integer_roots(&poly, k as i64);
    let expected: Vec<(i64, usize)> = (-(k as i64)..=-1)
        .map(|l| (l, 1))
        .chain((1..=k as i64).map(|l| (l, 1)))
        .collect();
    let pass = roots.roots == expected && roots.residual_degree == 0;
    let verdict = if pass { Verdict::Pass } else { Verdict::Refuted };
    (
        verdict,
        json!({
            "char_poly": poly,
            "computed_roots": roots.roots,
            "expected_roots": expected,
            "residual_degree": roots.residual_degree,
        }),
    )
}

fn claim_c6(k: usize) -> (Verdict, Value) {
    let folded = folded_double_odd(k).expect("k within bounds");
    let gens = standard_generators(k);
    match is_vertex_transitive(&folded, &gens) {
        Ok(true) => (
            Verdict::Pass,
            json!({
                "orbit_count": 1,
                "generator_count": gens.len(),
                "n": folded.n(),
            }),
        ),
        Ok(false) => {
            let orbits = orbit_partition(folded.n(), &gens).expect("degrees match");
            (
                Verdict::Refuted,
                json!({
                    "orbit_count": orbits.cell_count(),
                    "orbit_sizes": orbits.cell_sizes(),
                }),
            )
        }
        Err(e) => (
            Verdict::Refuted,
            json!({ "generator_failure": e.to_string() }),
        ),
    }
}

/// Theta plus the induced generators of Sym(2k-1).
pub fn standard_generators(k: usize) -> Vec<Permutation> {
    let mut gens = vec![theta_generator(k).expect("k within bounds")];
    for s in symmetric_group_generators(2 * k - 1) {
        gens.push(sigma_generator(&s, k).expect("degrees match"));
    }
    gens
}

fn claim_c7(k: usize, max_aut_n: usize) -> (Verdict, Value) {
    let folded = folded_double_odd(k).expect("k within bounds");
    let double = bipartite_double(&odd_graph(k).expect("k within bounds"));
    let claimed = claimed_aut_order(k);
    let aut_folded = match full_automorphism_group(&folded, max_aut_n) {
        Ok(g) => g,
        Err(SymmetryError::CapacityExceeded { n, max_n }) => {
            return (
                Verdict::Unverified,
                json!({
                    "reason": "brute-force search capacity exceeded",
                    "n": n,
                    "max_aut_n": max_n,
                    "claimed": big_to_json(&claimed),
                }),
            )
        }
        Err(e) => unreachable!("search failed unexpectedly: {e}"),
    };
    let aut_double =
        full_automorphism_group(&double, max_aut_n).expect("same vertex count as the folded graph");
    let folded_in_double: bool = aut_folded
        .generators
        .iter()
        .all(|p| aut_double.contains(p));
    let double_in_folded: bool = aut_double
        .generators
        .iter()
        .all(|p| aut_folded.contains(p));
    let order_matches_claim = aut_folded.order == claimed;
    let groups_equal =
        aut_folded.order == aut_double.order && folded_in_double && double_in_folded;
    let pass = order_matches_claim && groups_equal;
    let verdict = if pass { Verdict::Pass } else { Verdict::Refuted };
    (
        verdict,
        json!({
            "computed": big_to_json(&aut_folded.order),
            "claimed": big_to_json(&claimed),
            "double_aut_order": big_to_json(&aut_double.order),
            "folded_gens_in_double_aut": folded_in_double,
            "double_gens_in_folded_aut": double_in_folded,
            "groups_equal": groups_equal,
        }),
    )
}

fn claim_c8(k: usize) -> (Verdict, Value) {
    let double = bipartite_double(&odd_graph(k).expect("k within bounds"));
    let folded = folded_double_odd(k).expect("k within bounds");
    let partition = distance_partition(&double, 0).expect("double is connected");
    let q_double = match is_equitable(&double, &partition) {
        Ok(q) => q,
        Err(w) => {
            return (
                Verdict::Refuted,
                json!({ "double_partition_refutation": w }),
            )
        }
    };
    let q_folded = match is_equitable(&folded, &partition) {
        Ok(q) => q,
        Err(w) => {
            return (
                Verdict::Refuted,
                json!({ "folded_partition_refutation": w }),
            )
        }
    };
    let b = intersection_matrix(&predicted_double_odd_array(k));
    let c = IntMatrix::exchange(2 * k);
    let quotient_is_b = q_double.b == b;
    let sum_identity = q_folded.b == q_double.b.add(&c);
    let commutation = b.mul(&c) == c.mul(&b);

    let poly = char_poly(&q_folded.b).expect("square");
    let found = integer_roots(&poly, gershgorin_bound(&q_folded.b));
    let mut computed_set: Vec<i64> = found.roots.iter().map(|&(r, _)| r).collect();
    computed_set.sort_unstable();
    let formula = folded_formula_eigenvalues(k);
    let roots_match_formula = computed_set == formula && found.residual_degree == 0;
    let subset = quotient_spectrum_subset_check(&folded, &q_folded);

    let pass =
        quotient_is_b && sum_identity && commutation && roots_match_formula && subset.ok;
    let verdict = if pass { Verdict::Pass } else { Verdict::Refuted };
    (
        verdict,
        json!({
            "double_quotient_is_intersection_matrix": quotient_is_b,
            "folded_quotient_is_b_plus_exchange": sum_identity,
            "b_and_exchange_commute": commutation,
            "computed_root_set": computed_set,
            "formula_root_set": formula,
            "roots_with_adjacency_multiplicity": subset.roots,
            "residual_degree": found.residual_degree,
            "proof_step_note": "the two summands are tridiagonal and anti-diagonal, \
             not diagonal; commutation is verified for those matrices directly",
        }),
    )
}

fn claim_c9(k: usize) -> (Verdict, Value) {
    let folded = folded_double_odd(k).expect("k within bounds");
    let spectrum = integral_spectrum(&folded);
    let allowed = folded_formula_eigenvalues(k);
    let eigenvalues = spectrum.eigenvalues();
    let in_allowed = eigenvalues.iter().all(|l| allowed.contains(l));
    let pass = spectrum.residual == 0 && in_allowed;
    let verdict = if pass { Verdict::Pass } else { Verdict::Refuted };
    (
        verdict,
        json!({
            "pairs": spectrum.pairs,
            "residual": spectrum.residual,
            "allowed_eigenvalues": allowed,
            "eigenvalue_set_within_allowed": in_allowed,
            "multiplicity_note": "multiplicities are reported as computed; \
             the check asserts only integrality and the eigenvalue set",
        }),
    )
}

// ======================================================================
// tests
// ======================================================================
