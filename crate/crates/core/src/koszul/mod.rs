//! The Koszul complex `Λ[t_1, …, t_{m−k}] ⊗ R[K]` and its cohomology.
//!
//! The differential is determined by `d t_j = λ_j` and `d v_i = 0`
//! (`deg t_j = 1`, `deg v_i = 2`), extended by the Koszul rule
//!
//! ```text
//! d(t_S ⊗ w) = Σ_a (−1)^{a−1} t_{S∖{j_a}} ⊗ (λ_{j_a}·w),   S = {j_1 < … < j_s},
//! ```
//!
//! with products that die in `R[K]` dropped. The cohomology of this complex
//! is the graded Tor algebra computing `H*(Z_K/H; R)`; the sign extension is
//! the standard one and is enforced by the `d∘d = 0` contract rather than by
//! authority.
//!
//! A degree-`n` slice has basis `{t_S ⊗ w : |S| + 2·deg w = n}` ordered by
//! `|S|` descending, then lexicographically on `S`, then by the canonical
//! monomial order. Cohomology defaults to degrees up to
//! `m + dim K + 1 − k`, the dimension of `Z_K/H`, above which it vanishes.

mod ring;

pub use ring::{ring_structure, ClassId, CocycleClass, RingPresentation};

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exact::{
    invariant_factors, rank_over, CoefficientRing, HomologyGroup, IntMatrix,
};
use crate::face_ring::{enumerate_slice, Monomial};
use crate::simplicial::SimplicialComplex;
use crate::torus::{QuotientModel, SubtorusSpec};
use crate::{Error, Result};

/// `t_S ⊗ w`: a sorted subset of exterior generators and a surviving
/// monomial. Total cohomological degree `|S| + 2·deg w`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct KoszulBasisElement {
    pub exterior: Vec<usize>,
    pub monomial: Monomial,
}

impl KoszulBasisElement {
    pub fn degree(&self) -> usize {
        self.exterior.len() + self.monomial.cohomological_degree() as usize
    }
}

impl std::fmt::Display for KoszulBasisElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exterior.is_empty() {
            return write!(f, "{}", self.monomial);
        }
        let ts: Vec<String> = self.exterior.iter().map(|j| format!("t{j}")).collect();
        write!(f, "{}({})", ts.join(""), self.monomial)
    }
}

/// One total degree of the Koszul complex together with its outgoing
/// differential (rows index the degree-(n+1) basis).
#[derive(Clone, Debug)]
pub struct KoszulSlice {
    pub degree: usize,
    pub basis: Vec<KoszulBasisElement>,
    pub d_out: IntMatrix,
}

/// Auxiliary diagnostic over a field: the dimension of the cohomology of the
/// `(exterior, polynomial)`-bigraded summand contributing to one total
/// degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BigradedDimension {
    pub total: usize,
    pub exterior: usize,
    pub polynomial: usize,
    pub dim: usize,
}

/// Graded cohomology of `Z_K/H`, with optional field-only refinements.
#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub ring: CoefficientRing,
    /// Highest degree computed.
    pub max_degree: usize,
    /// `m + dim K + 1 − k`; cohomology above it is guaranteed zero.
    pub default_bound: usize,
    /// Per degree `0..=max_degree`.
    pub groups: Vec<HomologyGroup>,
    pub bigraded: Option<Vec<BigradedDimension>>,
    pub ring_structure: Option<RingPresentation>,
}

impl CohomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn total_betti(&self) -> usize {
        self.groups.iter().map(|g| g.betti).sum()
    }
}

/// Dimension of `Z_K/H`: the default degree bound.
pub fn default_degree_bound(k: &SimplicialComplex, subtorus_rank: usize) -> usize {
    (k.m() as i64 + k.dim() + 1 - subtorus_rank as i64).max(0) as usize
}

pub(crate) struct Engine<'a> {
    complex: &'a SimplicialComplex,
    ring: CoefficientRing,
    /// λ_j as sparse rows: (variable index 1..=m, coefficient).
    forms: Vec<Vec<(usize, BigInt)>>,
    bases: Vec<Vec<KoszulBasisElement>>,
    indexes: Vec<BTreeMap<KoszulBasisElement, usize>>,
}

impl<'a> Engine<'a> {
    /// Builds slice bases for all degrees `0..=top`.
    pub(crate) fn new(
        complex: &'a SimplicialComplex,
        model: &QuotientModel,
        ring: CoefficientRing,
        top: usize,
    ) -> Self {
        let ngen = model.generator_count();
        let mut forms = vec![Vec::new(); ngen];
        for (r, c, v) in model.forms().iter() {
            forms[r].push((c + 1, v.clone()));
        }
        let mut bases = Vec::with_capacity(top + 1);
        for n in 0..=top {
            bases.push(slice_basis(complex, ngen, n));
        }
        let indexes = bases
            .iter()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .map(|(i, e)| (e.clone(), i))
                    .collect::<BTreeMap<_, _>>()
            })
            .collect();
        Engine { complex, ring, forms, bases, indexes }
    }

    pub(crate) fn basis(&self, n: usize) -> &[KoszulBasisElement] {
        &self.bases[n]
    }

    pub(crate) fn top(&self) -> usize {
        self.bases.len() - 1
    }

    /// The differential out of degree `n` (into `n + 1`), with entries
    /// reduced into the coefficient ring.
    pub(crate) fn d_matrix(&self, n: usize) -> IntMatrix {
        assert!(n < self.top(), "missing target basis");
        let source = &self.bases[n];
        let target_index = &self.indexes[n + 1];
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (col, element) in source.iter().enumerate() {
            for (pos, &gen) in element.exterior.iter().enumerate() {
                let sign = if pos % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let mut rest: Vec<usize> = element.exterior.clone();
                rest.remove(pos);
                for (var, coeff) in &self.forms[gen - 1] {
                    let product = element.monomial.times(&Monomial::variable(*var));
                    if !self.complex.contains(&product.support()) {
                        continue;
                    }
                    let target = KoszulBasisElement { exterior: rest.clone(), monomial: product };
                    let row = *target_index
                        .get(&target)
                        .expect("differential lands in the next slice");
                    let slot = acc.entry((row, col)).or_insert_with(BigInt::zero);
                    *slot += &sign * coeff;
                }
            }
        }
        if let CoefficientRing::PrimeField(p) = self.ring {
            let pb = BigInt::from(p.get());
            acc = acc
                .into_iter()
                .map(|(key, v)| (key, ((v % &pb) + &pb) % &pb))
                .collect();
        }
        acc.retain(|_, v| !v.is_zero());
        let rows = self.bases[n + 1].len();
        let cols = source.len();
        IntMatrix::from_triplets(rows, cols, acc.into_iter().map(|((r, c), v)| (r, c, v)))
            .expect("indices in range")
    }

    /// Contiguous `(exterior degree, polynomial degree, start, len)` blocks
    /// of the degree-`n` basis, in basis order.
    pub(crate) fn blocks(&self, n: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        let basis = &self.bases[n];
        let mut start = 0;
        while start < basis.len() {
            let s = basis[start].exterior.len();
            let j = basis[start].monomial.degree() as usize;
            let len = basis[start..]
                .iter()
                .take_while(|e| e.exterior.len() == s)
                .count();
            out.push((s, j, start, len));
            start += len;
        }
        out
    }
}

fn slice_basis(
    complex: &SimplicialComplex,
    ngen: usize,
    n: usize,
) -> Vec<KoszulBasisElement> {
    let mut out = Vec::new();
    let mut s = n.min(ngen);
    if s % 2 != n % 2 {
        s = s.saturating_sub(1);
    }
    loop {
        // |S| descending, with n − |S| even
        if s % 2 == n % 2 {
            let j = ((n - s) / 2) as u32;
            let monomials = enumerate_slice(complex, j).basis;
            if !monomials.is_empty() {
                for subset in (1..=ngen).combinations(s) {
                    for w in &monomials {
                        out.push(KoszulBasisElement {
                            exterior: subset.clone(),
                            monomial: w.clone(),
                        });
                    }
                }
            }
        }
        if s < 2 {
            break;
        }
        s -= 2;
    }
    out
}

/// Public slice constructor: basis plus outgoing differential.
pub fn build_slice(
    complex: &SimplicialComplex,
    model: &QuotientModel,
    n: usize,
    ring: CoefficientRing,
) -> KoszulSlice {
    let engine = Engine::new(complex, model, ring, n + 1);
    KoszulSlice { degree: n, basis: engine.basis(n).to_vec(), d_out: engine.d_matrix(n) }
}

/// Graded cohomology of `Z_K/H`, gated on the freeness of the action.
pub fn cohomology(
    complex: &SimplicialComplex,
    subtorus: &SubtorusSpec,
    ring: CoefficientRing,
    max_degree: Option<usize>,
) -> Result<CohomologyResult> {
    let model = subtorus.quotient_model()?;
    cohomology_with_model(complex, &model, ring, max_degree)
}

/// Same as [`cohomology`], but with an explicit annihilator basis — the
/// Betti numbers do not depend on that choice.
pub fn cohomology_with_model(
    complex: &SimplicialComplex,
    model: &QuotientModel,
    ring: CoefficientRing,
    max_degree: Option<usize>,
) -> Result<CohomologyResult> {
    compute(complex, model, ring, max_degree, false)
}

/// Field-only variant that also reports the `(exterior, polynomial)`
/// bigraded dimensions of the Koszul model.
pub fn cohomology_bigraded(
    complex: &SimplicialComplex,
    subtorus: &SubtorusSpec,
    ring: CoefficientRing,
    max_degree: Option<usize>,
) -> Result<CohomologyResult> {
    if !ring.is_field() {
        return Err(Error::FieldRequired("bigraded refinement".into()));
    }
    let model = subtorus.quotient_model()?;
    compute(complex, &model, ring, max_degree, true)
}

pub(crate) fn compute(
    complex: &SimplicialComplex,
    model: &QuotientModel,
    ring: CoefficientRing,
    max_degree: Option<usize>,
    want_bigraded: bool,
) -> Result<CohomologyResult> {
    if let Some(facet) = model.source().freeness_violation(complex)? {
        return Err(Error::NotFree(facet.vertices().to_vec()));
    }
    let default_bound = default_degree_bound(complex, model.source().k());
    let bound = max_degree.unwrap_or(default_bound);
    let engine = Engine::new(complex, model, ring, bound + 1);
    let d: Vec<IntMatrix> = (0..=bound)
        .into_par_iter()
        .map(|n| engine.d_matrix(n))
        .collect();
    // d∘d = 0 on every consecutive pair, over the coefficient ring
    let bad = (0..bound)
        .into_par_iter()
        .find_any(|&n| !d[n + 1].matmul(&d[n]).is_zero_over(ring));
    if let Some(n) = bad {
        return Err(Error::contract(format!(
            "Koszul differential fails d∘d = 0 between degrees {n} and {}",
            n + 2
        )));
    }
    // one factorisation/rank per differential serves both adjacent degrees
    let per_matrix: Vec<(usize, Vec<BigInt>)> = d
        .par_iter()
        .map(|mat| match ring {
            CoefficientRing::Integers => {
                let factors = invariant_factors(mat);
                (factors.len(), factors)
            }
            field => (rank_over(mat, field), Vec::new()),
        })
        .collect();
    let mut groups = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let dim = engine.basis(n).len();
        let rank_out = per_matrix[n].0;
        let (rank_in, torsion) = if n == 0 {
            (0, Vec::new())
        } else {
            let (rank, factors) = &per_matrix[n - 1];
            let torsion: Vec<BigInt> =
                factors.iter().filter(|f| !f.is_one()).cloned().collect();
            (*rank, torsion)
        };
        groups.push(HomologyGroup { betti: dim - rank_out - rank_in, torsion });
    }
    let bigraded = if want_bigraded {
        Some(bigraded_dimensions(&engine, &d, bound, ring))
    } else {
        None
    };
    Ok(CohomologyResult {
        ring,
        max_degree: bound,
        default_bound,
        groups,
        bigraded,
        ring_structure: None,
    })
}

/// The differential maps the `(s, j)` block of one slice into the
/// `(s−1, j+1)` block of the next, so each block column range meets exactly
/// one block row range and the bigraded pieces form independent complexes.
fn bigraded_dimensions(
    engine: &Engine,
    d: &[IntMatrix],
    bound: usize,
    ring: CoefficientRing,
) -> Vec<BigradedDimension> {
    let block_range = |n: usize, s: usize, j: usize| -> Option<(usize, usize)> {
        engine
            .blocks(n)
            .into_iter()
            .find(|&(bs, bj, _, _)| bs == s && bj == j)
            .map(|(_, _, start, len)| (start, len))
    };
    // rank of d restricted to block (s, j) of slice n
    let block_rank = |n: usize, s: usize, j: usize| -> usize {
        if s == 0 || n >= d.len() {
            return 0;
        }
        let Some((cstart, clen)) = block_range(n, s, j) else { return 0 };
        let Some((rstart, rlen)) = block_range(n + 1, s - 1, j + 1) else { return 0 };
        let triplets: Vec<(usize, usize, BigInt)> = d[n]
            .iter()
            .filter(|&(r, c, _)| {
                c >= cstart && c < cstart + clen && r >= rstart && r < rstart + rlen
            })
            .map(|(r, c, v)| (r - rstart, c - cstart, v.clone()))
            .collect();
        let sub = IntMatrix::from_triplets(rlen, clen, triplets).expect("block in range");
        rank_over(&sub, ring)
    };
    let mut out = Vec::new();
    for n in 0..=bound {
        for (s, j, _, len) in engine.blocks(n) {
            let rank_out = block_rank(n, s, j);
            let rank_in = if n == 0 || j == 0 { 0 } else { block_rank(n - 1, s + 1, j - 1) };
            let dim = len - rank_out - rank_in;
            if dim > 0 {
                out.push(BigradedDimension { total: n, exterior: s, polynomial: j, dim });
            }
        }
    }
    out
}

/// Product of two basis elements in the tensor DGA: zero when the exterior
/// parts meet or the monomial product dies; otherwise the merged element with
/// the shuffle sign of the exterior merge. Monomials sit in even degree, so
/// they contribute no sign.
pub fn cup_product(
    a: &KoszulBasisElement,
    b: &KoszulBasisElement,
    complex: &SimplicialComplex,
) -> Result<Option<(i64, KoszulBasisElement)>> {
    if a.exterior.iter().any(|x| b.exterior.contains(x)) {
        return Ok(None);
    }
    let Some(monomial) = crate::face_ring::multiply(complex, &a.monomial, &b.monomial)? else {
        return Ok(None);
    };
    let inversions: usize = a
        .exterior
        .iter()
        .map(|x| b.exterior.iter().filter(|&&y| y < *x).count())
        .sum();
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    let mut exterior: Vec<usize> = a.exterior.iter().chain(&b.exterior).copied().collect();
    exterior.sort_unstable();
    Ok(Some((sign, KoszulBasisElement { exterior, monomial })))
}

/// Replaces the annihilator basis by `U·C` for `trials` random unimodular
/// `U` and checks that Betti numbers and torsion are unchanged.
pub fn basis_invariance_check(
    complex: &SimplicialComplex,
    subtorus: &SubtorusSpec,
    ring: CoefficientRing,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let model = subtorus.quotient_model()?;
    let base = cohomology_with_model(complex, &model, ring, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.generator_count();
    for _ in 0..trials {
        let u = random_unimodular(n, &mut rng);
        let twisted = QuotientModel::new(u.matmul(model.forms()), subtorus.clone())?;
        let result = cohomology_with_model(complex, &twisted, ring, None)?;
        if result.groups != base.groups {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A product of random elementary integer row operations.
fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    if n == 0 {
        return IntMatrix::identity(0);
    }
    let mut dense: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_dense();
    for _ in 0..(3 * n + 2) {
        match rng.gen_range(0..3u8) {
            0 => {
                let i = rng.gen_range(0..n);
                for v in dense[i].iter_mut() {
                    *v = -std::mem::take(v);
                }
            }
            1 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                dense.swap(i, j);
            }
            _ if n >= 2 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let c = BigInt::from([-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)]);
                for col in 0..n {
                    let add = &c * &dense[j][col];
                    dense[i][col] += add;
                }
            }
            _ => {}
        }
    }
    IntMatrix::from_dense(n, n, &dense)
}
