//! The Stanley–Reisner face ring `R[K]` as graded slices.
//!
//! `R[K] = R[v_1, …, v_m] / (v_{i_1}⋯v_{i_k} : {i_1, …, i_k} ∉ K)` with
//! `deg v_i = 2`. The ring is never materialised as a whole: only the finite
//! slice of a fixed polynomial degree is built, in a canonical order
//! (descending lexicographic on exponent vectors, so powers of earlier
//! variables come first). A monomial survives in `R[K]` exactly when its
//! support is a simplex of `K`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::exact::{rank_over, CoefficientRing, IntMatrix};
use crate::simplicial::{Simplex, SimplicialComplex};
use crate::{Error, Result};

/// A monomial in the `v_i`, stored as vertex → exponent (absent = 0).
/// The cohomological degree is twice the polynomial degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    exponents: BTreeMap<usize, u32>,
}

impl Monomial {
    /// The unit monomial 1.
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn new(pairs: impl IntoIterator<Item = (usize, u32)>) -> Result<Self> {
        let mut exponents = BTreeMap::new();
        for (v, e) in pairs {
            if v == 0 {
                return Err(Error::input("monomial variables are 1-based"));
            }
            if e == 0 {
                continue;
            }
            *exponents.entry(v).or_insert(0) += e;
        }
        Ok(Monomial { exponents })
    }

    pub fn variable(v: usize) -> Self {
        Monomial::new([(v, 1)]).expect("positive vertex")
    }

    pub fn exponents(&self) -> &BTreeMap<usize, u32> {
        &self.exponents
    }

    pub fn exponent_of(&self, v: usize) -> u32 {
        self.exponents.get(&v).copied().unwrap_or(0)
    }

    /// Polynomial degree (sum of exponents).
    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn cohomological_degree(&self) -> u32 {
        2 * self.degree()
    }

    pub fn support(&self) -> Simplex {
        Simplex::new(self.exponents.keys().copied().collect()).expect("valid vertices")
    }

    /// Exponent-wise product in the ambient polynomial ring.
    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut exponents = self.exponents.clone();
        for (&v, &e) in &other.exponents {
            *exponents.entry(v).or_insert(0) += e;
        }
        Monomial { exponents }
    }

    /// JSON schema: `{"exponents": {"1": 2, "3": 1}}`.
    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .exponents
            .iter()
            .map(|(v, e)| (v.to_string(), json!(e)))
            .collect();
        json!({ "exponents": map })
    }

    pub fn from_json(value: &Value) -> Result<Monomial> {
        let map = value
            .as_object()
            .and_then(|o| o.get("exponents"))
            .and_then(Value::as_object)
            .ok_or_else(|| Error::input("monomial JSON needs an \"exponents\" object"))?;
        let mut pairs = Vec::new();
        for (k, v) in map {
            let vertex: usize = k
                .parse()
                .map_err(|_| Error::input(format!("bad vertex key {k:?}")))?;
            let exp = v
                .as_u64()
                .ok_or_else(|| Error::input("exponents must be non-negative integers"))?;
            pairs.push((vertex, exp as u32));
        }
        Monomial::new(pairs)
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    format!("v{v}")
                } else {
                    format!("v{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// All monomials of one polynomial degree that survive in `R[K]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceRingSlice {
    /// Polynomial degree j (cohomological degree 2j).
    pub degree: u32,
    /// Canonical order: descending lexicographic on exponent vectors.
    pub basis: Vec<Monomial>,
}

/// True iff the support of `w` is a simplex of `K` (membership in the
/// Stanley–Reisner ideal is purely a support test).
pub fn survives(k: &SimplicialComplex, w: &Monomial) -> Result<bool> {
    if let Some(&v) = w.exponents().keys().find(|&&v| v > k.m()) {
        return Err(Error::input(format!("monomial variable v{v} out of range (m = {})", k.m())));
    }
    Ok(k.contains(&w.support()))
}

/// Product in `R[K]`: the exponent-wise sum when its support lies in `K`,
/// `None` (the distinguished zero) otherwise.
pub fn multiply(k: &SimplicialComplex, a: &Monomial, b: &Monomial) -> Result<Option<Monomial>> {
    let prod = a.times(b);
    Ok(if survives(k, &prod)? { Some(prod) } else { None })
}

/// The degree-j slice of `R[K]` in canonical order.
pub fn enumerate_slice(k: &SimplicialComplex, j: u32) -> FaceRingSlice {
    let mut basis = Vec::new();
    let mut support: Vec<usize> = Vec::new();
    let mut exponents: Vec<(usize, u32)> = Vec::new();
    let max_support = (k.dim() + 1).max(0) as usize;
    enumerate_rec(k, 1, j, max_support, &mut support, &mut exponents, &mut basis);
    FaceRingSlice { degree: j, basis }
}

fn enumerate_rec(
    k: &SimplicialComplex,
    vertex: usize,
    remaining: u32,
    max_support: usize,
    support: &mut Vec<usize>,
    exponents: &mut Vec<(usize, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(Monomial::new(exponents.iter().copied()).expect("valid exponents"));
        return;
    }
    if vertex > k.m() {
        return;
    }
    // larger exponents of earlier variables first = descending lex order
    for e in (0..=remaining).rev() {
        if e > 0 {
            if support.len() == max_support {
                continue;
            }
            support.push(vertex);
            // supports only grow along a branch, so a dead support prunes
            // the whole subtree
            if k.contains_sorted_vertices(support) {
                exponents.push((vertex, e));
                enumerate_rec(k, vertex + 1, remaining - e, max_support, support, exponents, out);
                exponents.pop();
            }
            support.pop();
        } else {
            enumerate_rec(k, vertex + 1, remaining, max_support, support, exponents, out);
        }
    }
}

/// Rank test for the restriction of the degree-2j slice of `R[K]` to the
/// product of polynomial rings over the facets. The inverse-limit
/// description of the face ring forces this map to be injective; the check
/// recomputes that fact with exact rank arithmetic over `Q`.
pub fn limit_injectivity_check(k: &SimplicialComplex, j: u32) -> bool {
    let slice = enumerate_slice(k, j);
    if slice.basis.is_empty() {
        return true;
    }
    // rows: (facet, monomial of degree j supported on that facet)
    let facets = k.effective_facets();
    let mut row_index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for (fi, facet) in facets.iter().enumerate() {
        let full = SimplicialComplex::new(k.m(), &[facet.vertices().to_vec()])
            .expect("facet is a valid face");
        for w in enumerate_slice(&full, j).basis {
            let next = row_index.len();
            row_index.entry((fi, w)).or_insert(next);
        }
    }
    let mut triplets = Vec::new();
    for (col, w) in slice.basis.iter().enumerate() {
        let supp = w.support();
        for (fi, facet) in facets.iter().enumerate() {
            if supp.is_face_of(facet) {
                let row = row_index[&(fi, w.clone())];
                triplets.push((row, col, 1.into()));
            }
        }
    }
    let mat = IntMatrix::from_triplets(row_index.len(), slice.basis.len(), triplets)
        .expect("indices in range");
    rank_over(&mat, CoefficientRing::Rationals) == slice.basis.len()
}
