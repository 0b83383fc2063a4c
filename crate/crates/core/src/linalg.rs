//! Exact integer linear algebra: matrices, characteristic polynomials,
//! fraction-free rank, and integer spectra.
//!
//! Ranks and determinants come from Bareiss (fraction-free) elimination with
//! first-nonzero pivoting, so every intermediate entry is an exact minor of
//! the input. Entries start in `i128` and upgrade to `BigInt` the moment a
//! pre-step bound says the next update could overflow; both phases follow the
//! identical pivot sequence.

use crate::graph::Graph;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
}

// ======================================================================
// matrices
// ======================================================================

/// Dense row-major matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// 0/1 adjacency matrix of a graph.
    pub fn adjacency(g: &Graph) -> Self {
        IntMatrix::from_fn(g.n(), g.n(), |i, j| {
            if i != j && g.has_edge(i, j) {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Anti-diagonal exchange matrix: ones on (i, n-1-i), zeros elsewhere.
    pub fn exchange(n: usize) -> Self {
        IntMatrix::from_fn(n, n, |i, j| {
            if i + j == n - 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Nested-array view for JSON output; panics if an entry exceeds i64.
    pub fn to_nested_i64(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_i64().expect("entry fits i64"))
                    .collect()
            })
            .collect()
    }

    /// `self - lambda * I`.
    pub fn shift_diagonal(&self, lambda: i64) -> IntMatrix {
        assert!(self.is_square());
        let l = BigInt::from(lambda);
        IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            if i == j {
                self.get(i, j) - &l
            } else {
                self.get(i, j).clone()
            }
        })
    }
}

// ======================================================================
// fraction-free elimination
// ======================================================================

struct Elimination {
    rank: usize,
    /// Determinant when the input was square; zero on rank deficiency.
    det: BigInt,
}

/// Largest magnitude the i128 phase tolerates: the fused update
/// `p*x - f*y` is bounded by `2*max^2`, which must stay inside i128.
const I128_SAFE: i128 = 3_000_000_000_000_000_000; // 3e18 < sqrt(i128::MAX/2)

fn eliminate(m: &IntMatrix) -> Elimination {
    let small: Option<Vec<i128>> = m.entries.iter().map(|e| e.to_i128()).collect();
    match small {
        Some(a) => eliminate_small(a, m.rows, m.cols),
        None => eliminate_big(
            m.entries.clone(),
            m.rows,
            m.cols,
            0,
            0,
            BigInt::one(),
            1,
        ),
    }
}

fn eliminate_small(mut a: Vec<i128>, rows: usize, cols: usize) -> Elimination {
    let mut pivot_row = 0usize;
    let mut prev: i128 = 1;
    let mut sign: i8 = 1;
    let mut col = 0usize;
    while col < cols && pivot_row < rows {
        // Pre-step overflow bound over the active submatrix.
        let mut mx: i128 = 0;
        for i in pivot_row..rows {
            for j in col..cols {
                let v = a[i * cols + j].abs();
                if v > mx {
                    mx = v;
                }
            }
        }
        if mx > I128_SAFE {
            let big: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
            return eliminate_big(big, rows, cols, pivot_row, col, BigInt::from(prev), sign);
        }
        let Some(pr) = (pivot_row..rows).find(|&r| a[r * cols + col] != 0) else {
            col += 1;
            continue;
        };
        if pr != pivot_row {
            for j in col..cols {
                a.swap(pr * cols + j, pivot_row * cols + j);
            }
            sign = -sign;
        }
        let p = a[pivot_row * cols + col];
        for i in pivot_row + 1..rows {
            let f = a[i * cols + col];
            for j in col + 1..cols {
                let num = p * a[i * cols + j] - f * a[pivot_row * cols + j];
                let q = num / prev;
                debug_assert_eq!(q * prev, num, "inexact division in elimination");
                a[i * cols + j] = q;
            }
            a[i * cols + col] = 0;
        }
        prev = p;
        pivot_row += 1;
        col += 1;
    }
    finish(rows, cols, pivot_row, BigInt::from(prev), sign)
}

fn eliminate_big(
    mut a: Vec<BigInt>,
    rows: usize,
    cols: usize,
    mut pivot_row: usize,
    mut col: usize,
    mut prev: BigInt,
    mut sign: i8,
) -> Elimination {
    while col < cols && pivot_row < rows {
        let Some(pr) = (pivot_row..rows).find(|&r| !a[r * cols + col].is_zero()) else {
            col += 1;
            continue;
        };
        if pr != pivot_row {
            for j in col..cols {
                a.swap(pr * cols + j, pivot_row * cols + j);
            }
            sign = -sign;
        }
        for i in pivot_row + 1..rows {
            let f = std::mem::take(&mut a[i * cols + col]);
            for j in col + 1..cols {
                let num = &a[pivot_row * cols + col] * &a[i * cols + j]
                    - &f * &a[pivot_row * cols + j];
                let q = &num / &prev;
                debug_assert_eq!(&q * &prev, num, "inexact division in elimination");
                a[i * cols + j] = q;
            }
        }
        prev = a[pivot_row * cols + col].clone();
        pivot_row += 1;
        col += 1;
    }
    finish(rows, cols, pivot_row, prev, sign)
}

fn finish(rows: usize, cols: usize, rank: usize, prev: BigInt, sign: i8) -> Elimination {
    let det = if rows == cols && rank == rows {
        if sign < 0 {
            -prev
        } else {
            prev
        }
    } else {
        BigInt::zero()
    };
    Elimination { rank, det }
}

/// Rank over the rationals, computed by exact integer elimination.
pub fn rank(m: &IntMatrix) -> usize {
    eliminate(m).rank
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(eliminate(m).det)
}

/// `dim ker(m - lambda*I)`, the geometric multiplicity of `lambda`.
pub fn nullity_at(m: &IntMatrix, lambda: i64) -> Result<usize, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(m.rows - rank(&m.shift_diagonal(lambda)))
}

// ======================================================================
// polynomials
// ======================================================================

/// Integer polynomial with ascending coefficients; trailing zeros are
/// trimmed, the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// Exact division by `(x - r)`; `None` when `r` is not a root or the
    /// polynomial is constant.
    pub fn deflate(&self, r: i64) -> Option<Polynomial> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let r = BigInt::from(r);
        let mut quotient = vec![BigInt::zero(); d];
        let mut carry = self.coeffs[d].clone();
        for i in (0..d).rev() {
            quotient[i] = carry.clone();
            carry = &self.coeffs[i] + &r * carry;
        }
        carry.is_zero().then(|| Polynomial::from_coeffs(quotient))
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        let coeffs = strings
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Polynomial::from_coeffs(coeffs))
    }
}

/// Characteristic polynomial `det(xI - m)` by the trace recurrence
/// (Faddeev-LeVerrier), exact over the integers.
pub fn char_poly(m: &IntMatrix) -> Result<Polynomial, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    if n == 0 {
        return Ok(Polynomial::from_coeffs(coeffs));
    }
    let mut mk = m.clone();
    for j in 1..=n {
        let tr = mk.trace();
        let jj = BigInt::from(j);
        let c = -&tr / &jj;
        debug_assert!((&tr % &jj).is_zero(), "trace recurrence divisibility");
        coeffs[n - j] = c.clone();
        if j < n {
            let mut t = mk;
            for i in 0..n {
                let v = t.get(i, i) + &c;
                t.set(i, i, v);
            }
            mk = m.mul(&t);
        }
    }
    Ok(Polynomial::from_coeffs(coeffs))
}

/// Integer roots found by probing `[-bound, bound]` with synthetic division.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerRoots {
    pub roots: Vec<(i64, usize)>,
    pub residual_degree: usize,
}

pub fn integer_roots(p: &Polynomial, bound: i64) -> IntegerRoots {
    let mut cur = p.clone();
    let mut roots = Vec::new();
    if cur.is_zero() {
        return IntegerRoots {
            roots,
            residual_degree: 0,
        };
    }
    for r in -bound..=bound {
        let mut mult = 0usize;
        while let Some(q) = cur.deflate(r) {
            cur = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    }
    IntegerRoots {
        roots,
        residual_degree: cur.degree().unwrap_or(0),
    }
}

// ======================================================================
// spectra
// ======================================================================

/// Integer eigenvalues with multiplicities plus the residual dimension not
/// accounted for by integer eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub pairs: Vec<(i64, usize)>,
    pub residual: usize,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> Vec<i64> {
        self.pairs.iter().map(|&(l, _)| l).collect()
    }

    pub fn multiplicity(&self, lambda: i64) -> usize {
        self.pairs
            .iter()
            .find(|&&(l, _)| l == lambda)
            .map_or(0, |&(_, m)| m)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.pairs.iter().map(|&(_, m)| m).sum()
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Full integer spectrum of a graph's adjacency matrix: every candidate in
/// `[-max_degree, max_degree]` is probed with an exact nullity computation.
/// Candidates are independent and run in parallel.
pub fn integral_spectrum(g: &Graph) -> Spectrum {
    let n = g.n();
    if n == 0 {
        return Spectrum {
            pairs: vec![],
            residual: 0,
        };
    }
    let delta = (0..n).map(|v| g.degree(v)).max().unwrap_or(0) as i64;
    let a = IntMatrix::adjacency(g);
    let candidates: Vec<i64> = (-delta..=delta).collect();
    let pairs: Vec<(i64, usize)> = candidates
        .par_iter()
        .map(|&lambda| {
            let m = nullity_at(&a, lambda).expect("adjacency is square");
            (lambda, m)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|&(_, m)| m > 0)
        .collect();
    let residual = n - pairs.iter().map(|&(_, m)| m).sum::<usize>();
    Spectrum { pairs, residual }
}

// ======================================================================
// tests
// ======================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bipartite_double, folded_double_odd, odd_graph};

    fn k3_adjacency() -> IntMatrix {
        IntMatrix::adjacency(&odd_graph(2).unwrap())
    }

    #[test]
    fn char_poly_of_triangle() {
        let p = char_poly(&k3_adjacency()).unwrap();
        assert_eq!(
            p.to_decimal_strings(),
            vec!["-2", "-3", "0", "1"] // x^3 - 3x - 2
        );
        assert!(p.is_monic());
    }

    #[test]
    fn char_poly_one_by_one() {
        let m = IntMatrix::from_i64_rows(&[vec![7]]);
        let p = char_poly(&m).unwrap();
        assert_eq!(p.to_decimal_strings(), vec!["-7", "1"]);
    }

    #[test]
    fn char_poly_empty_matrix_is_one() {
        let m = IntMatrix::zeros(0, 0);
        assert_eq!(char_poly(&m).unwrap().to_decimal_strings(), vec!["1"]);
    }

    #[test]
    fn char_poly_rejects_non_square() {
        let m = IntMatrix::zeros(2, 3);
        assert_eq!(
            char_poly(&m).unwrap_err(),
            LinalgError::NonSquare { rows: 2, cols: 3 }
        );
    }

    #[test]
    fn char_poly_matches_determinant_route() {
        // two independent routes: trace recurrence vs fraction-free det
        let m = IntMatrix::from_i64_rows(&[
            vec![2, -1, 0, 3],
            vec![-1, 0, 4, 1],
            vec![0, 4, -2, 2],
            vec![3, 1, 2, 1],
        ]);
        let p = char_poly(&m).unwrap();
        for t in -4..=4i64 {
            let shifted = IntMatrix::from_fn(4, 4, |i, j| {
                let d = if i == j { BigInt::from(t) } else { BigInt::zero() };
                d - m.get(i, j)
            });
            assert_eq!(p.eval_i64(t), determinant(&shifted).unwrap(), "t = {t}");
        }
    }

    #[test]
    fn integer_roots_of_triangle_poly() {
        let p = char_poly(&k3_adjacency()).unwrap();
        let r = integer_roots(&p, 2);
        assert_eq!(r.roots, vec![(-1, 2), (2, 1)]);
        assert_eq!(r.residual_degree, 0);
    }

    #[test]
    fn integer_roots_leaves_irreducible_residual() {
        // (x^2 - 2)(x - 1): only the root 1 is integral
        let p = Polynomial::from_coeffs(
            [2, -2, -1, 1].iter().map(|&c| BigInt::from(c)).collect(),
        );
        let r = integer_roots(&p, 10);
        assert_eq!(r.roots, vec![(1, 1)]);
        assert_eq!(r.residual_degree, 2);
    }

    #[test]
    fn deflate_rejects_non_root() {
        let p = char_poly(&k3_adjacency()).unwrap();
        assert!(p.deflate(1).is_none());
        assert!(p.deflate(-1).is_some());
    }

    #[test]
    fn determinant_of_singular_matrix_is_zero() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(determinant(&m).unwrap(), BigInt::zero());
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn determinant_tracks_row_swaps() {
        let m = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&m).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn determinant_of_empty_matrix_is_one() {
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
    }

    #[test]
    fn nullity_of_k33_at_zero() {
        let f = folded_double_odd(2).unwrap(); // K_{3,3}
        let a = IntMatrix::adjacency(&f);
        assert_eq!(nullity_at(&a, 0).unwrap(), 4);
        assert_eq!(nullity_at(&a, 3).unwrap(), 1);
        assert_eq!(nullity_at(&a, -3).unwrap(), 1);
        assert_eq!(nullity_at(&a, 1).unwrap(), 0);
    }

    #[test]
    fn nullity_on_double_odd_three() {
        let g = bipartite_double(&odd_graph(3).unwrap());
        let a = IntMatrix::adjacency(&g);
        assert_eq!(nullity_at(&a, 2).unwrap(), 4);
        assert_eq!(nullity_at(&a, 0).unwrap(), 0);
    }

    #[test]
    fn spectrum_of_triangle() {
        let s = integral_spectrum(&odd_graph(2).unwrap());
        assert_eq!(s.pairs, vec![(-1, 2), (2, 1)]);
        assert_eq!(s.residual, 0);
    }

    #[test]
    fn spectrum_of_pentagon_has_residual() {
        let mut g = Graph::empty(5).unwrap();
        for v in 0..5 {
            g.add_edge(v, (v + 1) % 5).unwrap();
        }
        let s = integral_spectrum(&g);
        assert_eq!(s.pairs, vec![(2, 1)]);
        assert_eq!(s.residual, 4);
    }

    #[test]
    fn spectrum_of_k33() {
        let s = integral_spectrum(&folded_double_odd(2).unwrap());
        assert_eq!(s.pairs, vec![(-3, 1), (0, 4), (3, 1)]);
        assert_eq!(s.residual, 0);
    }

    #[test]
    fn spectrum_json_shape() {
        let s = integral_spectrum(&odd_graph(2).unwrap());
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"pairs":[[-1,2],[2,1]],"residual":0}"#);
    }

    #[test]
    fn polynomial_serde_round_trip() {
        let p = char_poly(&k3_adjacency()).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"["-2","-3","0","1"]"#);
        let q: Polynomial = serde_json::from_str(&j).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn big_phase_engages_and_agrees_on_hilbert_like_matrix() {
        // dense matrix with growing minors to push past the i128 phase
        let n = 12;
        let m = IntMatrix::from_fn(n, n, |i, j| {
            BigInt::from((i as i64 + 2).pow(j as u32 / 2) + (j as i64) - (i as i64))
        });
        // determinant evaluated two ways: directly, and via char_poly at 0
        let p = char_poly(&m).unwrap();
        let det_direct = determinant(&m).unwrap();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(p.eval_i64(0) * sign, det_direct);
    }
}
