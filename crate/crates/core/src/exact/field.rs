//! Coefficient rings and field-side linear algebra.
//!
//! The engine supports three coefficient families: the integers, the
//! rationals and prime fields. Field elements are carried by the concrete
//! [`Scalar`] type (an exact rational or a residue tagged with its modulus),
//! and the sparse [`ScalarMat`] provides the echelonisation used to pick
//! cocycle representatives and to express classes in a chosen basis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use crate::{Error, Result};

/// A prime modulus, validated at construction. Restricted to `p < 2^63` so
/// residue sums never overflow `u64`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 {
            return Err(Error::input(format!("modulus {p} too large (need p < 2^63)")));
        }
        if !is_prime_u64(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Deterministic Miller–Rabin for u64 inputs.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The coefficient ring governing a computation: `Z`, `Q` or `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(Prime),
}

impl CoefficientRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        Ok(CoefficientRing::PrimeField(Prime::new(p)?))
    }

    pub fn is_field(self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            CoefficientRing::PrimeField(p) => p.get(),
            _ => 0,
        }
    }

    /// Parses the CLI/JSON spelling: `Z`, `Q` or `Fp:<prime>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Z" => Ok(CoefficientRing::Integers),
            "Q" => Ok(CoefficientRing::Rationals),
            _ => {
                let rest = s
                    .strip_prefix("Fp:")
                    .ok_or_else(|| Error::input(format!("unknown ring {s:?}; expected Z, Q or Fp:<p>")))?;
                let p: u64 = rest
                    .parse()
                    .map_err(|_| Error::input(format!("bad prime in ring spec {s:?}")))?;
                CoefficientRing::prime_field(p)
            }
        }
    }

    /// Canonical spelling, inverse to [`CoefficientRing::parse`].
    pub fn tag(self) -> String {
        match self {
            CoefficientRing::Integers => "Z".to_string(),
            CoefficientRing::Rationals => "Q".to_string(),
            CoefficientRing::PrimeField(p) => format!("Fp:{}", p.get()),
        }
    }

    /// Embeds an integer as a field scalar. Panics on `Z` (internal misuse).
    pub fn scalar(self, n: &BigInt) -> Scalar {
        match self {
            CoefficientRing::Integers => panic!("scalar() needs field coefficients"),
            CoefficientRing::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            CoefficientRing::PrimeField(p) => {
                let pb = BigInt::from(p.get());
                let red = ((n % &pb) + &pb) % &pb;
                Scalar::Fp { val: red.try_into().expect("residue fits u64"), p: p.get() }
            }
        }
    }

    pub fn zero(self) -> Scalar {
        self.scalar(&BigInt::zero())
    }

    pub fn one(self) -> Scalar {
        self.scalar(&BigInt::one())
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// An exact field element: a rational, or a residue carrying its modulus.
/// Mixed-modulus arithmetic is an internal bug and panics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Fp { val: u64, p: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, p: q }) => {
                assert_eq!(p, q, "mixed moduli");
                Scalar::Fp { val: (a + b) % p, p: *p }
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { val, p } => Scalar::Fp { val: (p - val) % p, p: *p },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, p: q }) => {
                assert_eq!(p, q, "mixed moduli");
                Scalar::Fp { val: mul_mod(*a, *b, *p), p: *p }
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    /// Multiplicative inverse; panics on zero (internal contract).
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Rat(a.recip())
            }
            Scalar::Fp { val, p } => {
                assert!(*val != 0, "inverse of zero");
                Scalar::Fp { val: pow_mod(*val, p - 2, *p), p: *p }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

/// Sparse row-major matrix over a field, used for echelonisation.
#[derive(Clone, Debug)]
pub struct ScalarMat {
    pub ring: CoefficientRing,
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<BTreeMap<usize, Scalar>>,
}

impl ScalarMat {
    pub fn zero(ring: CoefficientRing, nrows: usize, ncols: usize) -> Self {
        assert!(ring.is_field(), "ScalarMat needs field coefficients");
        ScalarMat { ring, nrows, ncols, rows: vec![BTreeMap::new(); nrows] }
    }

    pub fn from_int_matrix(a: &IntMatrix, ring: CoefficientRing) -> Self {
        let mut m = ScalarMat::zero(ring, a.rows(), a.cols());
        for (r, c, v) in a.iter() {
            let s = ring.scalar(v);
            if !s.is_zero() {
                m.rows[r].insert(c, s);
            }
        }
        m
    }

    /// Assembles a matrix whose columns are the given sparse vectors.
    pub fn from_sparse_cols(
        ring: CoefficientRing,
        nrows: usize,
        cols: &[Vec<(usize, Scalar)>],
    ) -> Self {
        let mut m = ScalarMat::zero(ring, nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col {
                if !v.is_zero() {
                    m.rows[*i].insert(j, v.clone());
                }
            }
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        if v.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }

    /// Reduced row echelon form with pivot columns restricted to the first
    /// `pivot_limit` columns; later columns are carried along passively
    /// (augmented right-hand sides). Pivot columns are chosen left to right;
    /// within a column the sparsest candidate row wins, ties to the smaller
    /// index. Fully deterministic.
    pub fn echelonize(mut self, pivot_limit: usize) -> Echelon {
        let limit = pivot_limit.min(self.ncols);
        let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for &j in row.keys() {
                cols[j].insert(i);
            }
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut is_pivot_row = vec![false; self.nrows];
        for j in 0..limit {
            let candidate = cols[j]
                .iter()
                .copied()
                .filter(|&i| !is_pivot_row[i])
                .min_by_key(|&i| (self.rows[i].len(), i));
            let Some(pi) = candidate else { continue };
            // normalise the pivot row
            let inv = self.rows[pi][&j].inv();
            let prow: BTreeMap<usize, Scalar> = self.rows[pi]
                .iter()
                .map(|(&c, v)| (c, v.mul(&inv)))
                .collect();
            self.rows[pi] = prow.clone();
            // clear column j everywhere else
            let targets: Vec<usize> = cols[j].iter().copied().filter(|&i| i != pi).collect();
            for i in targets {
                let factor = self.rows[i].remove(&j).unwrap();
                cols[j].remove(&i);
                for (&c, w) in &prow {
                    if c == j {
                        continue;
                    }
                    let delta = factor.mul(w);
                    let cur = self.rows[i].remove(&c);
                    let next = match cur {
                        Some(x) => x.sub(&delta),
                        None => delta.neg(),
                    };
                    if next.is_zero() {
                        cols[c].remove(&i);
                    } else {
                        self.rows[i].insert(c, next);
                        cols[c].insert(i);
                    }
                }
            }
            is_pivot_row[pi] = true;
            pivots.push((pi, j));
        }
        Echelon {
            ring: self.ring,
            ncols: self.ncols,
            pivot_limit: limit,
            pivots,
            rows: self.rows,
        }
    }
}

/// Result of [`ScalarMat::echelonize`]: reduced rows plus the pivot list in
/// column order.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub ring: CoefficientRing,
    pub ncols: usize,
    pub pivot_limit: usize,
    /// (row, col) per pivot, ascending in col.
    pub pivots: Vec<(usize, usize)>,
    rows: Vec<BTreeMap<usize, Scalar>>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> BTreeSet<usize> {
        self.pivots.iter().map(|&(_, c)| c).collect()
    }

    /// Kernel basis of the matrix restricted to the pivot-eligible columns
    /// (requires `pivot_limit == ncols` to mean the full kernel). One sparse
    /// vector per free column, ordered by free column index.
    pub fn kernel_basis(&self) -> Vec<Vec<(usize, Scalar)>> {
        let pivot_cols = self.pivot_cols();
        let mut out = Vec::new();
        for f in 0..self.pivot_limit {
            if pivot_cols.contains(&f) {
                continue;
            }
            let mut vec: Vec<(usize, Scalar)> = Vec::new();
            for &(r, c) in &self.pivots {
                if let Some(v) = self.rows[r].get(&f) {
                    vec.push((c, v.neg()));
                }
            }
            // the free coordinate itself
            vec.push((f, self.ring.one()));
            vec.sort_by_key(|&(i, _)| i);
            out.push(vec);
        }
        out
    }

    /// Solution of the system for an augmented (passive) column: `None` if
    /// inconsistent, otherwise coordinates on the pivot columns with free
    /// variables at zero. The result is dense over the pivot-eligible
    /// columns.
    pub fn solve_augmented(&self, rhs_col: usize) -> Option<Vec<(usize, Scalar)>> {
        assert!(rhs_col >= self.pivot_limit, "rhs column must be passive");
        let pivot_rows: BTreeSet<usize> = self.pivots.iter().map(|&(r, _)| r).collect();
        for (i, row) in self.rows.iter().enumerate() {
            if !pivot_rows.contains(&i) && row.contains_key(&rhs_col) {
                return None;
            }
        }
        let mut sol = Vec::new();
        for &(r, c) in &self.pivots {
            if let Some(v) = self.rows[r].get(&rhs_col) {
                sol.push((c, v.clone()));
            }
        }
        Some(sol)
    }
}

/// Coefficients `c_i` with `cocycle − Σ c_i · basis_i` in the column space of
/// the coboundaries. Errors if the basis does not span (an internal bug).
pub fn express_in_quotient(
    ring: CoefficientRing,
    cocycle: &[(usize, Scalar)],
    basis_cocycles: &[Vec<(usize, Scalar)>],
    coboundary_cols: &[Vec<(usize, Scalar)>],
    dim: usize,
) -> Result<Vec<Scalar>> {
    let many = express_many_in_quotient(ring, &[cocycle.to_vec()], basis_cocycles, coboundary_cols, dim)?;
    Ok(many.into_iter().next().unwrap())
}

/// Batched version: one echelonisation serves all right-hand sides. Each
/// result is dense over the basis classes.
pub fn express_many_in_quotient(
    ring: CoefficientRing,
    cocycles: &[Vec<(usize, Scalar)>],
    basis_cocycles: &[Vec<(usize, Scalar)>],
    coboundary_cols: &[Vec<(usize, Scalar)>],
    dim: usize,
) -> Result<Vec<Vec<Scalar>>> {
    if !ring.is_field() {
        return Err(Error::FieldRequired("express_in_quotient".into()));
    }
    let nb = basis_cocycles.len();
    let nc = coboundary_cols.len();
    let mut cols: Vec<Vec<(usize, Scalar)>> =
        Vec::with_capacity(nb + nc + cocycles.len());
    cols.extend(basis_cocycles.iter().cloned());
    cols.extend(coboundary_cols.iter().cloned());
    cols.extend(cocycles.iter().cloned());
    let mat = ScalarMat::from_sparse_cols(ring, dim, &cols);
    let ech = mat.echelonize(nb + nc);
    let mut out = Vec::with_capacity(cocycles.len());
    for t in 0..cocycles.len() {
        let rhs = nb + nc + t;
        let sol = ech.solve_augmented(rhs).ok_or_else(|| {
            Error::contract("cocycle not in span of basis and coboundaries".to_string())
        })?;
        let lookup: BTreeMap<usize, Scalar> = sol.into_iter().collect();
        let dense: Vec<Scalar> = (0..nb)
            .map(|i| lookup.get(&i).cloned().unwrap_or_else(|| ring.zero()))
            .collect();
        out.push(dense);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: u64, p: u64) -> Scalar {
        Scalar::Fp { val: v % p, p }
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(91).is_err());
        assert!(Prime::new((1 << 61) - 1).is_ok()); // Mersenne prime
    }

    #[test]
    fn ring_parse_round_trip() {
        for s in ["Z", "Q", "Fp:5", "Fp:2"] {
            assert_eq!(CoefficientRing::parse(s).unwrap().tag(), s);
        }
        assert!(CoefficientRing::parse("Fp:4").is_err());
        assert!(CoefficientRing::parse("R").is_err());
    }

    #[test]
    fn scalar_field_ops() {
        let a = fp(3, 7);
        assert!(a.mul(&a.inv()).is_one());
        let q = Scalar::Rat(BigRational::new(BigInt::from(2), BigInt::from(3)));
        assert!(q.mul(&q.inv()).is_one());
        assert_eq!(format!("{q}"), "2/3");
    }

    #[test]
    fn echelon_kernel() {
        // x + y + z = 0 over F_5: kernel has dimension 2
        let ring = CoefficientRing::prime_field(5).unwrap();
        let a = ScalarMat::from_int_matrix(&IntMatrix::from_rows(&[vec![1, 1, 1]]), ring);
        let ech = a.echelonize(3);
        assert_eq!(ech.rank(), 1);
        let kernel = ech.kernel_basis();
        assert_eq!(kernel.len(), 2);
    }

    #[test]
    fn express_examples() {
        let ring = CoefficientRing::prime_field(5).unwrap();
        let one = ring.one();
        let b0 = vec![(0usize, one.clone())];
        let b1 = vec![(1usize, one.clone())];
        let cob = vec![(2usize, one.clone())];
        // cocycle = basis[0], empty coboundary -> (1, 0)
        let c = express_in_quotient(ring, &b0.clone(), &[b0.clone(), b1.clone()], &[], 3).unwrap();
        assert!(c[0].is_one() && c[1].is_zero());
        // a pure coboundary -> all zeros
        let c = express_in_quotient(ring, &cob.clone(), &[b0.clone(), b1.clone()], &[cob.clone()], 3)
            .unwrap();
        assert!(c.iter().all(Scalar::is_zero));
        // 2·b0 + 3·b1 + coboundary over F_5 -> (2, 3)
        let target = vec![(0, fp(2, 5)), (1, fp(3, 5)), (2, fp(4, 5))];
        let c = express_in_quotient(ring, &target, &[b0, b1], &[cob], 3).unwrap();
        assert_eq!(c, vec![fp(2, 5), fp(3, 5)]);
    }

    #[test]
    fn express_detects_missing_span() {
        let ring = CoefficientRing::Rationals;
        let e0 = vec![(0usize, ring.one())];
        let e1 = vec![(1usize, ring.one())];
        assert!(express_in_quotient(ring, &e1, &[e0], &[], 2).is_err());
    }
}
