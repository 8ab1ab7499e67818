//! Sparse exact integer matrices.
//!
//! Entries are arbitrary-precision and stored in triplet form keyed by
//! `(row, col)`; zero entries are never stored. Matrices with zero rows or
//! zero columns are legal everywhere and denote zero maps.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), BigInt::from(1));
        }
        m
    }

    /// Builds a matrix from (row, col, value) triplets; duplicate positions
    /// are summed, out-of-range positions rejected.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut entries: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::input(format!(
                    "matrix entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if v.is_zero() {
                continue;
            }
            let slot = entries.entry((r, c)).or_insert_with(BigInt::zero);
            *slot += v;
            if slot.is_zero() {
                entries.remove(&(r, c));
            }
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Rectangular construction from small integers, convenient in tests and
    /// in the generators. Panics on ragged input.
    pub fn from_rows(data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zero(rows, cols);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row-major data");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.entries.insert((i, j), BigInt::from(v));
                }
            }
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<BigInt>]) -> Self {
        let mut m = IntMatrix::zero(rows, cols);
        for (i, row) in dense.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Zero test after reduction into the coefficient ring (entrywise mod p
    /// for prime fields).
    pub fn is_zero_over(&self, ring: super::field::CoefficientRing) -> bool {
        match ring {
            super::field::CoefficientRing::PrimeField(p) => {
                let pb = BigInt::from(p.get());
                self.entries.values().all(|v| (v % &pb).is_zero())
            }
            _ => self.is_zero(),
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> BigInt {
        assert!(r < self.rows && c < self.cols, "entry index out of range");
        self.entries.get(&(r, c)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn set_entry(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "entry index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        let mut m = IntMatrix::zero(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            m.entries.insert((c, r), v.clone());
        }
        m
    }

    /// Sparse matrix product; panics on shape mismatch (internal contract).
    pub fn matmul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        // group rhs entries by row for the inner loop
        let mut rhs_rows: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); rhs.rows];
        for (r, c, v) in rhs.iter() {
            rhs_rows[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (i, k, v) in self.iter() {
            for &(j, w) in &rhs_rows[k] {
                let slot = acc.entry((i, j)).or_insert_with(BigInt::zero);
                *slot += v * w;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        IntMatrix { rows: self.rows, cols: rhs.cols, entries: acc }
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_cols(&self, keep: &[usize]) -> IntMatrix {
        let pos: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut m = IntMatrix::zero(self.rows, keep.len());
        for (r, c, v) in self.iter() {
            if let Some(&nc) = pos.get(&c) {
                m.entries.insert((r, nc), v.clone());
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            d[r][c] = v.clone();
        }
        d
    }

    /// Debug-dump schema: `{"rows": r, "cols": c, "entries": [[i, j, value], …]}`.
    /// Values beyond i64 render as decimal strings so arbitrary precision
    /// survives JSON.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .iter()
            .map(|(r, c, v)| match i64::try_from(v) {
                Ok(n) => json!([r, c, n]),
                Err(_) => json!([r, c, v.to_string()]),
            })
            .collect();
        json!({ "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::input("matrix JSON must be an object"))?;
        let rows = obj
            .get("rows")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::input("matrix JSON needs integer \"rows\""))?
            as usize;
        let cols = obj
            .get("cols")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::input("matrix JSON needs integer \"cols\""))?
            as usize;
        let raw = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("matrix JSON needs \"entries\" array"))?;
        let mut triplets = Vec::with_capacity(raw.len());
        for e in raw {
            let t = e
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::input("matrix entry must be [i, j, value]"))?;
            let r = t[0]
                .as_u64()
                .ok_or_else(|| Error::input("matrix entry row must be an integer"))?
                as usize;
            let c = t[1]
                .as_u64()
                .ok_or_else(|| Error::input("matrix entry col must be an integer"))?
                as usize;
            let v = match &t[2] {
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::input("matrix value out of i64 range; use a string"))?,
                Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| Error::input(format!("bad integer literal {s:?}")))?,
                _ => return Err(Error::input("matrix value must be an integer or string")),
            };
            triplets.push((r, c, v));
        }
        IntMatrix::from_triplets(rows, cols, triplets)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let line: Vec<String> = row.iter().map(BigInt::to_string).collect();
            writeln!(f, "  [{}]", line.join(", "))?;
        }
        write!(f, "]")
    }
}
