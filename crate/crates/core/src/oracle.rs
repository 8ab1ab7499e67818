//! Independent verification paths for the Koszul engine.
//!
//! The Hochster decomposition computes `H^p(Z_K)` (the trivial-subtorus
//! case) as the direct sum over vertex subsets `J` of the reduced simplicial
//! cohomology of the full subcomplex `K_J` in degree `p − |J| − 1`, with
//! `H̃^{−1}` of the complex `{∅}` contributing one rank. It is built from
//! scratch on simplicial cochains and shares nothing with the Koszul engine
//! beyond the exact linear algebra kernel. The toric oracle covers the
//! maximal-rank case, where the face ring is free over the polynomial
//! subring and the cohomology collapses onto the quotient ring
//! `R[K]/(λ_1, …, λ_{m−k})`. Brute-force freeness re-evaluates the facet
//! criterion on every simplex.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::exact::{
    merge_torsion, rank_over, smith_normal_form, CoefficientRing, HomologyGroup, IntMatrix,
};
use crate::face_ring::enumerate_slice;
use crate::koszul::{self, default_degree_bound};
use crate::simplicial::SimplicialComplex;
use crate::torus::SubtorusSpec;
use crate::{Error, Result};

/// Side-by-side comparison of the engine against the applicable oracle.
/// `agreement` is `None` when no oracle applies.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub target: String,
    pub agreement: Option<bool>,
    pub rows: Vec<OracleRow>,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct OracleRow {
    pub degree: usize,
    pub engine_betti: usize,
    pub engine_torsion: Vec<BigInt>,
    pub oracle_betti: usize,
    pub oracle_torsion: Vec<BigInt>,
    pub matched: bool,
}

impl OracleReport {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "degree": r.degree,
                    "engine": { "betti": r.engine_betti,
                                "torsion": torsion_strings(&r.engine_torsion) },
                    "oracle": { "betti": r.oracle_betti,
                                "torsion": torsion_strings(&r.oracle_torsion) },
                    "matched": r.matched,
                })
            })
            .collect();
        json!({
            "target": self.target,
            "agreement": self.agreement,
            "rows": rows,
            "note": self.note,
        })
    }
}

fn torsion_strings(torsion: &[BigInt]) -> Vec<String> {
    torsion.iter().map(BigInt::to_string).collect()
}

/// `H^p(Z_K; R)` by the Hochster decomposition, degrees `0..=max_degree`
/// (default: `m + dim K + 1`). Betti numbers add up across the `2^m`
/// summands; torsion accumulates through invariant-factor merging.
pub fn hochster_betti(
    complex: &SimplicialComplex,
    ring: CoefficientRing,
    max_degree: Option<usize>,
) -> Result<Vec<HomologyGroup>> {
    let m = complex.m();
    let top = max_degree.unwrap_or_else(|| default_degree_bound(complex, 0));
    let contributions: Vec<Vec<(usize, HomologyGroup)>> = (0u64..(1 << m))
        .into_par_iter()
        .map(|mask| -> Result<Vec<(usize, HomologyGroup)>> {
            let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let cardinality = subset.len();
            let sub = complex.full_subcomplex(&subset)?;
            let groups = sub.reduced_cohomology(ring)?;
            let mut local = Vec::new();
            for (idx, group) in groups.into_iter().enumerate() {
                if group.is_trivial() {
                    continue;
                }
                // index 0 is reduced degree −1; the summand lands in
                // p = (reduced degree) + |J| + 1
                let p = idx + cardinality;
                if p <= top {
                    local.push((p, group));
                }
            }
            Ok(local)
        })
        .collect::<Result<_>>()?;
    let mut betti = vec![0usize; top + 1];
    let mut torsion_lists: Vec<Vec<Vec<BigInt>>> = vec![Vec::new(); top + 1];
    for local in contributions {
        for (p, group) in local {
            betti[p] += group.betti;
            if !group.torsion.is_empty() {
                torsion_lists[p].push(group.torsion);
            }
        }
    }
    Ok((0..=top)
        .map(|p| HomologyGroup { betti: betti[p], torsion: merge_torsion(&torsion_lists[p]) })
        .collect())
}

/// The freeness criterion evaluated on every simplex of `K` (including the
/// empty one) through full Smith normal forms. Test oracle only — the
/// production path checks facets.
pub fn brute_force_freeness(
    subtorus: &SubtorusSpec,
    complex: &SimplicialComplex,
) -> Result<bool> {
    if !subtorus.validate() {
        return Err(Error::input("lattice basis is not primitive".to_string()));
    }
    if subtorus.m() != complex.m() {
        return Err(Error::input("subtorus and complex have different m".to_string()));
    }
    let k = subtorus.k();
    let m = subtorus.m();
    let mut simplices: Vec<Vec<usize>> = vec![Vec::new()];
    simplices.extend(complex.all_faces().map(|s| s.vertices().to_vec()));
    for simplex in simplices {
        let keep: Vec<usize> = (0..m).filter(|&c| !simplex.contains(&(c + 1))).collect();
        let sub = subtorus.lattice_basis().select_cols(&keep);
        let snf = smith_normal_form(&sub);
        let diag = snf.diagonal();
        if diag.len() != k || !diag.iter().all(BigInt::is_one) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimensions per cohomological degree of `R[K]/(λ_1, …, λ_{m−k})`, by exact
/// rank computation on face-ring slices. Meaningful as a cohomology oracle
/// only when the face ring is free over the polynomial subring (the
/// maximal-rank toric case); the quotient itself is computed for any input.
pub fn toric_quotient_dims(
    complex: &SimplicialComplex,
    subtorus: &SubtorusSpec,
    field: CoefficientRing,
    max_degree: Option<usize>,
) -> Result<Vec<usize>> {
    if !field.is_field() {
        return Err(Error::FieldRequired("toric quotient dimensions".to_string()));
    }
    let model = subtorus.quotient_model()?;
    let forms = model.forms();
    let top = max_degree.unwrap_or_else(|| default_degree_bound(complex, subtorus.k()));
    let mut dims = vec![0usize; top + 1];
    for n in 0..=top {
        if n % 2 != 0 {
            continue;
        }
        let j = (n / 2) as u32;
        let slice = enumerate_slice(complex, j);
        if slice.basis.is_empty() {
            continue;
        }
        if j == 0 {
            dims[n] = 1;
            continue;
        }
        let index: std::collections::BTreeMap<_, _> = slice
            .basis
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let lower = enumerate_slice(complex, j - 1);
        // columns: λ_a · u over all generators a and monomials u of degree j−1
        let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
        let ncols = forms.rows() * lower.basis.len();
        for (a, u) in (0..forms.rows()).flat_map(|a| {
            lower.basis.iter().enumerate().map(move |(ui, u)| ((a, ui), u))
        }) {
            let col = a.0 * lower.basis.len() + a.1;
            for i in 1..=complex.m() {
                let coeff = forms.entry(a.0, i - 1);
                if coeff == BigInt::from(0) {
                    continue;
                }
                let prod = u.times(&crate::face_ring::Monomial::variable(i));
                if let Some(&row) = index.get(&prod) {
                    triplets.push((row, col, coeff));
                }
            }
        }
        let mat = IntMatrix::from_triplets(slice.basis.len(), ncols, triplets)?;
        dims[n] = slice.basis.len() - rank_over(&mat, field);
    }
    Ok(dims)
}

/// Runs the applicable oracle against the Koszul engine: Hochster for the
/// trivial subtorus, the toric quotient ring for a maximal-rank free action
/// over a field. Otherwise the report carries no verdict.
pub fn compare(
    complex: &SimplicialComplex,
    subtorus: &SubtorusSpec,
    ring: CoefficientRing,
    max_degree: Option<usize>,
) -> Result<OracleReport> {
    let maximal_rank = complex.m() as i64 - (complex.dim() + 1);
    if subtorus.k() == 0 {
        let engine = koszul::cohomology(complex, subtorus, ring, max_degree)?;
        let oracle = hochster_betti(complex, ring, Some(engine.max_degree))?;
        let rows: Vec<OracleRow> = engine
            .groups
            .iter()
            .zip(&oracle)
            .enumerate()
            .map(|(degree, (e, o))| OracleRow {
                degree,
                engine_betti: e.betti,
                engine_torsion: e.torsion.clone(),
                oracle_betti: o.betti,
                oracle_torsion: o.torsion.clone(),
                matched: e == o,
            })
            .collect();
        let agreement = rows.iter().all(|r| r.matched);
        return Ok(OracleReport {
            target: format!("Hochster decomposition over {}", ring.tag()),
            agreement: Some(agreement),
            rows,
            note: None,
        });
    }
    if ring.is_field()
        && subtorus.k() as i64 == maximal_rank
        && subtorus.acts_freely(complex)?
    {
        let engine = koszul::cohomology(complex, subtorus, ring, max_degree)?;
        let dims = toric_quotient_dims(complex, subtorus, ring, Some(engine.max_degree))?;
        let rows: Vec<OracleRow> = engine
            .groups
            .iter()
            .zip(&dims)
            .enumerate()
            .map(|(degree, (e, &dim))| OracleRow {
                degree,
                engine_betti: e.betti,
                engine_torsion: e.torsion.clone(),
                oracle_betti: dim,
                oracle_torsion: Vec::new(),
                matched: e.betti == dim && e.torsion.is_empty(),
            })
            .collect();
        let agreement = rows.iter().all(|r| r.matched);
        return Ok(OracleReport {
            target: format!("toric quotient ring over {}", ring.tag()),
            agreement: Some(agreement),
            rows,
            note: Some("face ring assumed free over the polynomial subring (maximal rank)".into()),
        });
    }
    Ok(OracleReport {
        target: "no applicable oracle".to_string(),
        agreement: None,
        rows: Vec::new(),
        note: Some(format!(
            "Hochster needs k = 0 (got k = {}); the toric quotient oracle needs field \
             coefficients, k = m − dim K − 1 = {} and a free action",
            subtorus.k(),
            maximal_rank.max(0),
        )),
    })
}

/// Seeded search for a primitive rank-k subtorus acting freely on `Z_K`,
/// over small random integer matrices. Used to produce the maximal-rank
/// scenarios for the toric oracle.
pub fn search_free_subtorus(
    complex: &SimplicialComplex,
    rank: usize,
    seed: u64,
    tries: usize,
) -> Option<SubtorusSpec> {
    let m = complex.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tries {
        let rows: Vec<Vec<i64>> = (0..rank)
            .map(|_| (0..m).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let Ok(candidate) = SubtorusSpec::new(m, IntMatrix::from_rows(&rows)) else {
            continue;
        };
        if !candidate.validate() {
            continue;
        }
        if candidate.acts_freely(complex) == Ok(true) {
            return Some(candidate);
        }
    }
    None
}
