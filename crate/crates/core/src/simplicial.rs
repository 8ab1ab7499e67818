//! Simplicial complexes on `{1, …, m}`, stored by facets.
//!
//! The empty simplex always belongs to a complex, and vertices outside every
//! facet ("ghost vertices") are permitted — they multiply the moment-angle
//! complex by circle factors. Faces are enumerated eagerly per dimension at
//! construction, which keeps every later read immutable and thread-safe;
//! desk scale is m ≲ 12.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::exact::{homology_at, CoefficientRing, HomologyGroup, IntMatrix};
use crate::{Error, Result};

/// A simplex: a sorted, duplicate-free subset of `{1, …, m}`. The empty
/// simplex is legal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.iter().any(|&v| v == 0) {
            return Err(Error::input("vertices are 1-based; 0 is not a vertex"));
        }
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Simplex { vertices })
    }

    pub fn empty() -> Self {
        Simplex { vertices: Vec::new() }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn card(&self) -> usize {
        self.vertices.len()
    }

    /// Dimension; the empty simplex has dimension −1.
    pub fn dim(&self) -> i64 {
        self.vertices.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        subset_sorted(&self.vertices, &other.vertices)
    }
}

fn subset_sorted(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// A simplicial complex on `{1, …, m}`. An empty facet list denotes the
/// complex `{∅}` (only the empty simplex).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    m: usize,
    facets: Vec<Simplex>,
    /// faces[d] = faces with d+1 vertices, sorted; the empty simplex is
    /// implicit.
    faces: Vec<Vec<Simplex>>,
}

impl SimplicialComplex {
    /// Builds the downward closure of the given faces; inclusion-maximal
    /// inputs become the facets. Vertices must lie in `1..=m`.
    pub fn new(m: usize, faces: &[Vec<usize>]) -> Result<Self> {
        let mut cleaned: Vec<Simplex> = Vec::new();
        for raw in faces {
            if let Some(&v) = raw.iter().find(|&&v| v == 0 || v > m) {
                return Err(Error::input(format!(
                    "vertex {v} out of range in face {raw:?} (m = {m})"
                )));
            }
            cleaned.push(Simplex::new(raw.clone())?);
        }
        cleaned.sort();
        cleaned.dedup();
        let facets: Vec<Simplex> = cleaned
            .iter()
            .filter(|s| {
                !s.is_empty()
                    && !cleaned.iter().any(|t| t.card() > s.card() && s.is_face_of(t))
            })
            .cloned()
            .collect();
        let faces = enumerate_faces(&facets);
        Ok(SimplicialComplex { m, facets, faces })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Inclusion-maximal nonempty faces. Empty when the complex is `{∅}`.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// Facets with the convention that `{∅}` has the empty simplex as its
    /// unique facet; used where every simplex must lie under some facet.
    pub fn effective_facets(&self) -> Vec<Simplex> {
        if self.facets.is_empty() {
            vec![Simplex::empty()]
        } else {
            self.facets.clone()
        }
    }

    /// Dimension of the complex; `{∅}` has dimension −1.
    pub fn dim(&self) -> i64 {
        self.faces.len() as i64 - 1
    }

    /// Membership test. The empty simplex is always a member.
    pub fn contains(&self, simplex: &Simplex) -> bool {
        simplex.is_empty() || self.facets.iter().any(|f| simplex.is_face_of(f))
    }

    pub(crate) fn contains_sorted_vertices(&self, vertices: &[usize]) -> bool {
        vertices.is_empty()
            || self
                .facets
                .iter()
                .any(|f| subset_sorted(vertices, f.vertices()))
    }

    /// Nonempty faces of the given dimension, sorted.
    pub fn faces_of_dim(&self, d: usize) -> &[Simplex] {
        static EMPTY: Vec<Simplex> = Vec::new();
        self.faces.get(d).unwrap_or(&EMPTY)
    }

    /// All nonempty faces.
    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.faces.iter().flatten()
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// The full subcomplex on the vertex set `J`, relabeled order-preservingly
    /// to `{1, …, |J|}`.
    pub fn full_subcomplex(&self, j: &[usize]) -> Result<SimplicialComplex> {
        let mut sorted = j.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != j.len() {
            return Err(Error::input(format!("vertex set {j:?} has duplicates")));
        }
        if let Some(&v) = sorted.iter().find(|&&v| v == 0 || v > self.m) {
            return Err(Error::input(format!("vertex {v} out of range (m = {})", self.m)));
        }
        let relabel = |v: usize| sorted.binary_search(&v).unwrap() + 1;
        // facets of K_J are the maximal sets facet ∩ J
        let mut candidates: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| {
                f.vertices()
                    .iter()
                    .filter(|v| sorted.binary_search(v).is_ok())
                    .map(|&v| relabel(v))
                    .collect()
            })
            .collect();
        candidates.retain(|c| !c.is_empty());
        SimplicialComplex::new(sorted.len(), &candidates)
    }

    /// Boundary of the (m−1)-simplex: all proper subsets of `{1, …, m}`.
    pub fn boundary_simplex(m: usize) -> Result<SimplicialComplex> {
        if m < 1 {
            return Err(Error::input("boundary_simplex needs m ≥ 1"));
        }
        let all: Vec<usize> = (1..=m).collect();
        let facets: Vec<Vec<usize>> = (1..=m)
            .map(|skip| all.iter().copied().filter(|&v| v != skip).collect())
            .filter(|f: &Vec<usize>| !f.is_empty())
            .collect();
        SimplicialComplex::new(m, &facets)
    }

    /// The full (m−1)-simplex on `{1, …, m}`.
    pub fn simplex(m: usize) -> Result<SimplicialComplex> {
        let all: Vec<usize> = (1..=m).collect();
        if m == 0 {
            return SimplicialComplex::new(0, &[]);
        }
        SimplicialComplex::new(m, &[all])
    }

    /// The boundary of an m-gon: edges `{i, i+1}` and `{m, 1}`.
    pub fn polygon(m: usize) -> Result<SimplicialComplex> {
        if m < 3 {
            return Err(Error::input("polygon needs m ≥ 3"));
        }
        let mut facets: Vec<Vec<usize>> = (1..m).map(|i| vec![i, i + 1]).collect();
        facets.push(vec![1, m]);
        SimplicialComplex::new(m, &facets)
    }

    /// Join: `K₂`'s vertices are shifted past `K₁`'s, simplices are unions.
    pub fn join(k1: &SimplicialComplex, k2: &SimplicialComplex) -> SimplicialComplex {
        let m = k1.m + k2.m;
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for f1 in k1.effective_facets() {
            for f2 in k2.effective_facets() {
                let mut joined: Vec<usize> = f1.vertices().to_vec();
                joined.extend(f2.vertices().iter().map(|&v| v + k1.m));
                facets.push(joined);
            }
        }
        SimplicialComplex::new(m, &facets).expect("join of valid complexes is valid")
    }

    /// The d-skeleton: all faces of dimension at most `d`.
    pub fn skeleton(&self, d: i64) -> Result<SimplicialComplex> {
        if d < 0 || d > self.dim() {
            return Err(Error::input(format!(
                "skeleton dimension {d} outside 0..={}",
                self.dim()
            )));
        }
        let faces: Vec<Vec<usize>> = self
            .all_faces()
            .filter(|s| s.dim() <= d)
            .map(|s| s.vertices().to_vec())
            .collect();
        SimplicialComplex::new(self.m, &faces)
    }

    /// Coboundary matrix `δ_d : C^d → C^{d+1}` of the reduced simplicial
    /// cochain complex, `d` from −1 (the augmentation) to `dim`. Simplices
    /// carry their sorted vertex order; inserting a vertex at position `i`
    /// contributes the sign `(−1)^i`.
    pub fn coboundary(&self, d: i64) -> IntMatrix {
        let dim = self.dim();
        assert!((-1..=dim).contains(&d), "coboundary degree out of range");
        let src_count = if d == -1 { 1 } else { self.faces_of_dim(d as usize).len() };
        if d == dim {
            return IntMatrix::zero(0, src_count);
        }
        let targets = self.faces_of_dim((d + 1) as usize);
        if d == -1 {
            // δ(∅*) = Σ_v v*, all signs +1
            let mut m = IntMatrix::zero(targets.len(), 1);
            for r in 0..targets.len() {
                m.set_entry(r, 0, 1.into());
            }
            return m;
        }
        let sources = self.faces_of_dim(d as usize);
        let index: std::collections::BTreeMap<&Simplex, usize> =
            sources.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = IntMatrix::zero(targets.len(), sources.len());
        for (r, sigma) in targets.iter().enumerate() {
            for (pos, _) in sigma.vertices().iter().enumerate() {
                let mut tau = sigma.vertices().to_vec();
                tau.remove(pos);
                let tau = Simplex { vertices: tau };
                let c = index[&tau];
                let sign: i64 = if pos % 2 == 0 { 1 } else { -1 };
                m.set_entry(r, c, sign.into());
            }
        }
        m
    }

    /// Reduced simplicial cohomology. Index 0 of the result is degree −1
    /// (the complex `{∅}` has one group of rank 1 there), index `i` is
    /// degree `i − 1`, up to `dim`.
    pub fn reduced_cohomology(&self, ring: CoefficientRing) -> Result<Vec<HomologyGroup>> {
        let dim = self.dim();
        let mut deltas = Vec::new();
        for d in -1..=dim {
            deltas.push(self.coboundary(d));
        }
        let mut out = Vec::new();
        for (idx, _d) in (-1..=dim).enumerate() {
            let src_count = deltas[idx].cols();
            let d_in = if idx == 0 {
                IntMatrix::zero(src_count, 0)
            } else {
                deltas[idx - 1].clone()
            };
            out.push(homology_at(&d_in, &deltas[idx], ring)?);
        }
        Ok(out)
    }

    /// JSON schema: `{"m": 5, "facets": [[1,2],[2,3]]}` — 1-indexed, sorted
    /// inner lists.
    pub fn to_json(&self) -> Value {
        let facets: Vec<Value> = self
            .facets
            .iter()
            .map(|f| Value::Array(f.vertices().iter().map(|&v| json!(v)).collect()))
            .collect();
        json!({ "m": self.m, "facets": facets })
    }

    pub fn from_json(value: &Value) -> Result<SimplicialComplex> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::input("complex JSON must be an object"))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::input("complex JSON needs integer \"m\""))? as usize;
        let raw = obj
            .get("facets")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::input("complex JSON needs \"facets\" array"))?;
        let mut facets = Vec::with_capacity(raw.len());
        for f in raw {
            let arr = f
                .as_array()
                .ok_or_else(|| Error::input("each facet must be an array of vertices"))?;
            let mut verts = Vec::with_capacity(arr.len());
            for v in arr {
                let v = v
                    .as_u64()
                    .ok_or_else(|| Error::input("facet vertices must be positive integers"))?;
                verts.push(v as usize);
            }
            facets.push(verts);
        }
        SimplicialComplex::new(m, &facets)
    }
}

fn enumerate_faces(facets: &[Simplex]) -> Vec<Vec<Simplex>> {
    let mut seen: BTreeSet<Simplex> = BTreeSet::new();
    for facet in facets {
        let verts = facet.vertices();
        let n = verts.len();
        for mask in 1u64..(1 << n) {
            let sub: Vec<usize> =
                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
            seen.insert(Simplex { vertices: sub });
        }
    }
    let top = seen.iter().map(Simplex::card).max().unwrap_or(0);
    let mut faces: Vec<Vec<Simplex>> = vec![Vec::new(); top];
    for s in seen {
        let d = s.card() - 1;
        faces[d].push(s);
    }
    for bucket in &mut faces {
        bucket.sort();
    }
    faces
}
