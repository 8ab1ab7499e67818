//! Subtorus specifications, the freeness gate, and the quotient model.
//!
//! A rank-k subtorus `H ⊂ T^m` is given by a basis of its lattice
//! `L_H ⊂ Z^m`; the basis must span a direct summand (primitivity), which is
//! what makes `H` a genuine subtorus. `H` acts freely on `Z_K` exactly when
//! for every simplex `I ∈ K` the composite `L_H → Z^m → Z^{[m]∖I}` is a split
//! injection; split injectivity for a simplex follows from that of any
//! larger one, so checking facets suffices.
//!
//! The quotient model carries the annihilator lattice of `L_H`: its rows are
//! the linear forms `λ_j = Σ_i C[j,i]·v_i`, the images of the polynomial
//! generators of `H*(B(T^m/H))`, which drive the Koszul differential.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::exact::{invariant_factors, kernel_basis, IntMatrix};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::{Error, Result};

/// A rank-k subtorus of `T^m`, specified by a k×m lattice basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubtorusSpec {
    m: usize,
    k: usize,
    lattice_basis: IntMatrix,
}

impl SubtorusSpec {
    /// Shape checks happen here; primitivity is a separate [`validate`].
    ///
    /// [`validate`]: SubtorusSpec::validate
    pub fn new(m: usize, lattice_basis: IntMatrix) -> Result<Self> {
        let k = lattice_basis.rows();
        if lattice_basis.cols() != m {
            return Err(Error::input(format!(
                "lattice basis has {} columns, expected m = {m}",
                lattice_basis.cols()
            )));
        }
        if k > m {
            return Err(Error::input(format!("rank {k} exceeds m = {m}")));
        }
        Ok(SubtorusSpec { m, k, lattice_basis })
    }

    /// The trivial subtorus (k = 0).
    pub fn trivial(m: usize) -> Self {
        SubtorusSpec { m, k: 0, lattice_basis: IntMatrix::zero(0, m) }
    }

    /// The diagonal subcircle: basis `(1, 1, …, 1)`.
    pub fn diagonal_circle(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::input("diagonal circle needs m ≥ 1"));
        }
        SubtorusSpec::new(m, IntMatrix::from_rows(&[vec![1; m]]))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lattice_basis(&self) -> &IntMatrix {
        &self.lattice_basis
    }

    /// Primitivity: the rows span a rank-k direct summand of `Z^m`, i.e. the
    /// basis has exactly k invariant factors, all equal to 1. Never repaired
    /// silently — saturating would change the subgroup.
    pub fn validate(&self) -> bool {
        let factors = invariant_factors(&self.lattice_basis);
        factors.len() == self.k && factors.iter().all(BigInt::is_one)
    }

    /// Split-injectivity check on one vertex set: delete the columns indexed
    /// by the simplex and demand k unit invariant factors.
    fn splits_off(&self, simplex: &Simplex) -> bool {
        let keep: Vec<usize> = (0..self.m)
            .filter(|&c| !simplex.vertices().contains(&(c + 1)))
            .collect();
        let sub = self.lattice_basis.select_cols(&keep);
        let factors = invariant_factors(&sub);
        factors.len() == self.k && factors.iter().all(BigInt::is_one)
    }

    /// First facet whose deleted-column submatrix fails split injectivity,
    /// or `None` when the action is free.
    pub fn freeness_violation(&self, k: &SimplicialComplex) -> Result<Option<Simplex>> {
        if self.m != k.m() {
            return Err(Error::input(format!(
                "subtorus lives in T^{} but the complex has m = {}",
                self.m,
                k.m()
            )));
        }
        if !self.validate() {
            return Err(Error::input(
                "lattice basis is not primitive (not a valid subtorus)".to_string(),
            ));
        }
        for facet in k.facets() {
            if !self.splits_off(facet) {
                return Ok(Some(facet.clone()));
            }
        }
        Ok(None)
    }

    /// Whether `H` acts freely on `Z_K` (checked on facets; subsets inherit
    /// split injectivity because retractions compose).
    pub fn acts_freely(&self, k: &SimplicialComplex) -> Result<bool> {
        Ok(self.freeness_violation(k)?.is_none())
    }

    /// The annihilator model: rows of `forms` span `{c ∈ Z^m : c·L_H = 0}`,
    /// a direct summand, so they descend from a basis of the character
    /// lattice of `T^m/H`.
    pub fn quotient_model(&self) -> Result<QuotientModel> {
        if !self.validate() {
            return Err(Error::input(
                "lattice basis is not primitive (not a valid subtorus)".to_string(),
            ));
        }
        let forms = kernel_basis(&self.lattice_basis);
        QuotientModel::new(forms, self.clone())
    }

    /// JSON schema: `{"m": 5, "basis": [[1,1,1,1,1]]}`. Entries beyond i64
    /// render as decimal strings.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.k)
            .map(|r| {
                Value::Array(
                    (0..self.m)
                        .map(|c| {
                            let v = self.lattice_basis.entry(r, c);
                            match i64::try_from(&v) {
                                Ok(n) => json!(n),
                                Err(_) => json!(v.to_string()),
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        json!({ "m": self.m, "basis": Value::Array(rows) })
    }

    pub fn from_json(value: &Value) -> Result<SubtorusSpec> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::input("subtorus JSON must be an object"))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::input("subtorus JSON needs integer \"m\""))? as usize;
        let rows = obj
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("subtorus JSON needs \"basis\" array"))?;
        let mut triplets = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|a| a.len() == m)
                .ok_or_else(|| Error::input(format!("basis row {r} must have {m} entries")))?;
            for (c, v) in row.iter().enumerate() {
                let value = match v {
                    Value::Number(n) => n
                        .as_i64()
                        .map(BigInt::from)
                        .ok_or_else(|| Error::input("basis entry out of i64 range; use a string"))?,
                    Value::String(s) => s
                        .parse::<BigInt>()
                        .map_err(|_| Error::input(format!("bad integer literal {s:?}")))?,
                    _ => return Err(Error::input("basis entries must be integers")),
                };
                triplets.push((r, c, value));
            }
        }
        let basis = IntMatrix::from_triplets(rows.len(), m, triplets)?;
        SubtorusSpec::new(m, basis)
    }
}

/// Annihilator basis of a subtorus: the linear forms defining the Koszul
/// differential. No canonical form is imposed; downstream Betti numbers are
/// invariant under unimodular changes of this basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientModel {
    forms: IntMatrix,
    source: SubtorusSpec,
}

impl QuotientModel {
    /// Validates the model invariants: `C · L_Hᵀ = 0` and both blocks
    /// primitive of the expected ranks.
    pub fn new(forms: IntMatrix, source: SubtorusSpec) -> Result<Self> {
        let expected = source.m - source.k;
        if forms.rows() != expected || forms.cols() != source.m {
            return Err(Error::input(format!(
                "forms must be {}x{}, got {}x{}",
                expected,
                source.m,
                forms.rows(),
                forms.cols()
            )));
        }
        if !forms.matmul(&source.lattice_basis.transpose()).is_zero() {
            return Err(Error::input(
                "forms do not annihilate the subtorus lattice".to_string(),
            ));
        }
        let factors = invariant_factors(&forms);
        if factors.len() != expected || !factors.iter().all(BigInt::is_one) {
            return Err(Error::input(
                "forms do not span the annihilator as a direct summand".to_string(),
            ));
        }
        Ok(QuotientModel { forms, source })
    }

    /// Rows are the linear forms λ_j in the `v_i` coordinates.
    pub fn forms(&self) -> &IntMatrix {
        &self.forms
    }

    pub fn source(&self) -> &SubtorusSpec {
        &self.source
    }

    /// Number of exterior generators of the Koszul complex, m − k.
    pub fn generator_count(&self) -> usize {
        self.forms.rows()
    }
}
