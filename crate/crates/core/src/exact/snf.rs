//! Smith normal form, integer kernels and rank over every supported ring.
//!
//! Two reduction paths share the work. Small matrices (and every call that
//! needs the unimodular transforms) run a dense reduction with
//! smallest-nonzero-pivot selection, which bounds entry growth. Large sparse
//! matrices — the Koszul differentials — are first stripped of ±1 pivots
//! chosen by Markowitz cost; each such pivot contributes an invariant factor
//! 1, and whatever survives is finished densely. Elimination on ±1 pivots is
//! unimodular, so `SNF(A) = diag(1,…,1) ⊕ SNF(residual)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::field::CoefficientRing;
use super::matrix::IntMatrix;

/// Unimodular factorisation `U · A · V = D` with `D` in Smith normal form.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries of `D`, in divisibility order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.entry(i, i))
            .filter(|v| !v.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

/// Full Smith normal form with transforms. Total on any rectangular matrix,
/// including empty shapes.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut b = a.to_dense();
    let mut u = dense_identity(a.rows());
    let mut v = dense_identity(a.cols());
    dense_reduce(&mut b, a.rows(), a.cols(), Some(&mut u), Some(&mut v));
    SnfResult {
        u: IntMatrix::from_dense(a.rows(), a.rows(), &u),
        d: IntMatrix::from_dense(a.rows(), a.cols(), &b),
        v: IntMatrix::from_dense(a.cols(), a.cols(), &v),
    }
}

/// Invariant factors of `A` (the nonzero diagonal of its SNF), via the sparse
/// fast path.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let (units, mut residual) = sparse_unit_reduce(a);
    let mut factors = vec![BigInt::one(); units];
    if !residual.is_empty() {
        let rows = residual.len();
        let cols = residual[0].len();
        dense_reduce(&mut residual, rows, cols, None, None);
        for i in 0..rows.min(cols) {
            if residual[i][i].is_zero() {
                break;
            }
            factors.push(residual[i][i].clone());
        }
    }
    factors
}

/// Matrix rank after reduction into the given coefficient ring. The `Z` and
/// `Q` ranks coincide.
pub fn rank_over(a: &IntMatrix, ring: CoefficientRing) -> usize {
    match ring {
        CoefficientRing::Integers | CoefficientRing::Rationals => invariant_factors(a).len(),
        CoefficientRing::PrimeField(p) => rank_mod_p(a, p.get()),
    }
}

/// Basis of `{x ∈ Z^cols : A·xᵀ = 0}` as the rows of the returned matrix.
/// The rows span a direct summand of `Z^cols` (all invariant factors 1),
/// because they are columns of the unimodular `V`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let v = snf.v;
    let mut out = IntMatrix::zero(a.cols() - r, a.cols());
    for (row_out, col_v) in (r..a.cols()).enumerate() {
        for i in 0..a.cols() {
            let val = v.entry(i, col_v);
            if !val.is_zero() {
                out.set_entry(row_out, i, val);
            }
        }
    }
    out
}

fn dense_identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

/// In-place reduction of `b` to Smith normal form, mirroring the row
/// operations on `u` and the column operations on `v` when present.
fn dense_reduce(
    b: &mut Vec<Vec<BigInt>>,
    nr: usize,
    nc: usize,
    mut u: Option<&mut Vec<Vec<BigInt>>>,
    mut v: Option<&mut Vec<Vec<BigInt>>>,
) {
    let mut t = 0;
    while t < nr.min(nc) {
        let Some((pi, pj)) = smallest_pivot(b, t, nr, nc) else {
            break;
        };
        swap_rows(b, &mut u, t, pi);
        swap_cols(b, &mut v, t, pj);
        loop {
            // clear the pivot column; leftover remainders become the new,
            // strictly smaller pivot
            let mut dirty = false;
            for i in t + 1..nr {
                if b[i][t].is_zero() {
                    continue;
                }
                let q = &b[i][t] / &b[t][t];
                if !q.is_zero() {
                    row_axpy(b, &mut u, i, t, &q, nc);
                }
                if !b[i][t].is_zero() {
                    swap_rows(b, &mut u, t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..nc {
                if b[t][j].is_zero() {
                    continue;
                }
                let q = &b[t][j] / &b[t][t];
                if !q.is_zero() {
                    col_axpy(b, &mut v, j, t, &q, nr);
                }
                if !b[t][j].is_zero() {
                    swap_cols(b, &mut v, t, j);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            // row and column are clear; enforce the divisibility chain
            match first_nondivisible(b, t, nr, nc) {
                Some(i) => {
                    // pull the offending row into the pivot row and go again
                    row_add(b, &mut u, t, i, nc);
                }
                None => break,
            }
        }
        if b[t][t].is_negative() {
            negate_row(b, &mut u, t, nc);
        }
        t += 1;
    }
}

fn smallest_pivot(
    b: &[Vec<BigInt>],
    t: usize,
    nr: usize,
    nc: usize,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs: Option<BigInt> = None;
    for i in t..nr {
        for j in t..nc {
            if b[i][j].is_zero() {
                continue;
            }
            let a = b[i][j].abs();
            if best_abs.as_ref().is_none_or(|m| a < *m) {
                if a.is_one() {
                    return Some((i, j));
                }
                best_abs = Some(a);
                best = Some((i, j));
            }
        }
    }
    best
}

/// First row index `i > t` owning an entry not divisible by the pivot.
fn first_nondivisible(b: &[Vec<BigInt>], t: usize, nr: usize, nc: usize) -> Option<usize> {
    let pivot = &b[t][t];
    if pivot.abs().is_one() {
        return None;
    }
    for i in t + 1..nr {
        for j in t + 1..nc {
            if !(&b[i][j] % pivot).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

fn swap_rows(b: &mut [Vec<BigInt>], u: &mut Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
    if i == j {
        return;
    }
    b.swap(i, j);
    if let Some(u) = u {
        u.swap(i, j);
    }
}

fn swap_cols(b: &mut [Vec<BigInt>], v: &mut Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in b.iter_mut() {
        row.swap(i, j);
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// `row_i -= q · row_t`.
fn row_axpy(
    b: &mut [Vec<BigInt>],
    u: &mut Option<&mut Vec<Vec<BigInt>>>,
    i: usize,
    t: usize,
    q: &BigInt,
    nc: usize,
) {
    for j in 0..nc {
        if !b[t][j].is_zero() {
            let delta = q * &b[t][j];
            b[i][j] -= delta;
        }
    }
    if let Some(u) = u {
        let n = u[t].len();
        for j in 0..n {
            if !u[t][j].is_zero() {
                let delta = q * &u[t][j];
                u[i][j] -= delta;
            }
        }
    }
}

/// `col_j -= q · col_t`.
fn col_axpy(
    b: &mut [Vec<BigInt>],
    v: &mut Option<&mut Vec<Vec<BigInt>>>,
    j: usize,
    t: usize,
    q: &BigInt,
    nr: usize,
) {
    for row in b.iter_mut().take(nr) {
        if !row[t].is_zero() {
            let delta = q * &row[t];
            row[j] -= delta;
        }
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            if !row[t].is_zero() {
                let delta = q * &row[t];
                row[j] -= delta;
            }
        }
    }
}

/// `row_t += row_i`.
fn row_add(
    b: &mut [Vec<BigInt>],
    u: &mut Option<&mut Vec<Vec<BigInt>>>,
    t: usize,
    i: usize,
    nc: usize,
) {
    for j in 0..nc {
        let add = b[i][j].clone();
        b[t][j] += add;
    }
    if let Some(u) = u {
        let n = u[i].len();
        for j in 0..n {
            let add = u[i][j].clone();
            u[t][j] += add;
        }
    }
}

fn negate_row(
    b: &mut [Vec<BigInt>],
    u: &mut Option<&mut Vec<Vec<BigInt>>>,
    t: usize,
    nc: usize,
) {
    for j in 0..nc {
        let neg = -b[t][j].clone();
        b[t][j] = neg;
    }
    if let Some(u) = u {
        let n = u[t].len();
        for j in 0..n {
            let neg = -u[t][j].clone();
            u[t][j] = neg;
        }
    }
}

// ---------------------------------------------------------------------------
// sparse front end
// ---------------------------------------------------------------------------

struct SparseZ {
    rows: Vec<BTreeMap<usize, i128>>,
    cols: Vec<BTreeSet<usize>>,
}

impl SparseZ {
    fn from_matrix(a: &IntMatrix) -> Option<Self> {
        let mut rows: Vec<BTreeMap<usize, i128>> = vec![BTreeMap::new(); a.rows()];
        let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.cols()];
        for (r, c, v) in a.iter() {
            let small: i128 = v.try_into().ok()?;
            rows[r].insert(c, small);
            cols[c].insert(r);
        }
        Some(SparseZ { rows, cols })
    }

    fn to_dense_bigint(&self) -> Vec<Vec<BigInt>> {
        // compact away empty rows and untouched columns
        let live_cols: Vec<usize> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(j, _)| j)
            .collect();
        let col_pos: BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(p, &j)| (j, p)).collect();
        let mut out = Vec::new();
        for row in &self.rows {
            if row.is_empty() {
                continue;
            }
            let mut dense = vec![BigInt::zero(); live_cols.len()];
            for (&j, &v) in row {
                dense[col_pos[&j]] = BigInt::from(v);
            }
            out.push(dense);
        }
        out
    }

    /// Best ±1 pivot by Markowitz cost `(row_nnz − 1)·(col_nnz − 1)`.
    fn find_unit_pivot(&self) -> Option<(usize, usize, i128)> {
        let mut best: Option<(usize, usize, i128)> = None;
        let mut best_cost = usize::MAX;
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let rl = row.len() - 1;
            if rl >= best_cost {
                continue;
            }
            for (&j, &v) in row {
                if v != 1 && v != -1 {
                    continue;
                }
                let cost = rl * (self.cols[j].len() - 1);
                if cost < best_cost {
                    best_cost = cost;
                    best = Some((i, j, v));
                    if cost == 0 {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Schur elimination of a ±1 pivot. Returns false on i128 overflow, in
    /// which case the matrix is left untouched for this pivot and the caller
    /// falls back to dense arithmetic.
    fn eliminate(&mut self, pi: usize, pj: usize, pv: i128) -> bool {
        let prow = std::mem::take(&mut self.rows[pi]);
        for &j in prow.keys() {
            self.cols[j].remove(&pi);
        }
        let targets: Vec<usize> = self.cols[pj].iter().copied().collect();
        // dry-run for overflow before mutating any target row
        for &i in &targets {
            let a = self.rows[i][&pj];
            let Some(q) = a.checked_mul(pv) else {
                self.restore(pi, prow);
                return false;
            };
            for (&j, &w) in &prow {
                if j == pj {
                    continue;
                }
                let cur = self.rows[i].get(&j).copied().unwrap_or(0);
                let ok = q
                    .checked_mul(w)
                    .and_then(|d| cur.checked_sub(d))
                    .is_some();
                if !ok {
                    self.restore(pi, prow);
                    return false;
                }
            }
        }
        for i in targets {
            let a = self.rows[i].remove(&pj).unwrap();
            let q = a * pv;
            for (&j, &w) in &prow {
                if j == pj {
                    continue;
                }
                let entry = self.rows[i].entry(j).or_insert(0);
                *entry -= q * w;
                if *entry == 0 {
                    self.rows[i].remove(&j);
                    self.cols[j].remove(&i);
                } else {
                    self.cols[j].insert(i);
                }
            }
        }
        self.cols[pj].clear();
        true
    }

    fn restore(&mut self, pi: usize, prow: BTreeMap<usize, i128>) {
        for &j in prow.keys() {
            self.cols[j].insert(pi);
        }
        self.rows[pi] = prow;
    }
}

/// Eliminates ±1 pivots; returns their count and the dense residual.
fn sparse_unit_reduce(a: &IntMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let Some(mut sp) = SparseZ::from_matrix(a) else {
        // entries beyond i128: hand the whole matrix to the dense path
        return (0, compact_dense(a));
    };
    let mut units = 0;
    while let Some((pi, pj, pv)) = sp.find_unit_pivot() {
        if !sp.eliminate(pi, pj, pv) {
            break;
        }
        units += 1;
    }
    (units, sp.to_dense_bigint())
}

fn compact_dense(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let dense = a.to_dense();
    dense.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect()
}

/// Sparse Gaussian elimination over `F_p`.
fn rank_mod_p(a: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); a.rows()];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.cols()];
    for (r, c, v) in a.iter() {
        let red = ((v % &pb) + &pb) % &pb;
        let red: u64 = red.try_into().expect("reduced residue fits u64");
        if red != 0 {
            rows[r].insert(c, red);
            cols[c].insert(r);
        }
    }
    let mut rank = 0;
    loop {
        // any nonzero entry works as a pivot over a field
        let mut best: Option<(usize, usize)> = None;
        let mut best_cost = usize::MAX;
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let rl = row.len() - 1;
            if rl >= best_cost {
                continue;
            }
            for &j in row.keys() {
                let cost = rl * (cols[j].len() - 1);
                if cost < best_cost {
                    best_cost = cost;
                    best = Some((i, j));
                    if cost == 0 {
                        break;
                    }
                }
            }
            if best_cost == 0 {
                break;
            }
        }
        let Some((pi, pj)) = best else {
            break;
        };
        let prow = std::mem::take(&mut rows[pi]);
        for &j in prow.keys() {
            cols[j].remove(&pi);
        }
        let pivot_inv = mod_inv(prow[&pj], p);
        let targets: Vec<usize> = cols[pj].iter().copied().collect();
        for i in targets {
            let aij = rows[i].remove(&pj).unwrap();
            let factor = mod_mul(aij, pivot_inv, p);
            for (&j, &w) in &prow {
                if j == pj {
                    continue;
                }
                let sub = mod_mul(factor, w, p);
                let entry = rows[i].entry(j).or_insert(0);
                *entry = (*entry + p - sub) % p;
                if *entry == 0 {
                    rows[i].remove(&j);
                    cols[j].remove(&i);
                } else {
                    cols[j].insert(i);
                }
            }
        }
        cols[pj].clear();
        rank += 1;
    }
    rank
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid; p prime, a ≠ 0 mod p
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "modular inverse of non-unit");
    (((t % p as i128) + p as i128) % p as i128) as u64
}
