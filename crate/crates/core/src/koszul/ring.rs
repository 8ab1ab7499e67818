//! Cup products on cohomology over a field.
//!
//! Representatives are chosen by echelonising cocycles against coboundaries
//! (first-pivot rule): the kernel of the outgoing differential is computed,
//! its vectors are appended after the coboundary columns, and the kernel
//! vectors that become pivot columns represent the classes. Products are
//! expanded at chain level through the tensor-DGA multiplication, verified
//! to be cocycles, and expressed in the chosen basis. The choices are
//! deterministic and do not affect the isomorphism class of the answer.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::exact::{express_many_in_quotient, CoefficientRing, IntMatrix, Scalar, ScalarMat};
use crate::koszul::{cup_product, default_degree_bound, Engine};
use crate::simplicial::SimplicialComplex;
use crate::torus::SubtorusSpec;
use crate::{Error, Result};

/// (degree, index) of a cohomology basis class.
pub type ClassId = (usize, usize);

/// A cohomology class with its chosen cocycle representative, a sparse
/// vector in the coordinates of the degree's Koszul slice.
#[derive(Clone, PartialEq, Debug)]
pub struct CocycleClass {
    pub representative: Vec<(usize, Scalar)>,
}

/// Basis classes per degree and the full multiplication table between them.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    pub field: CoefficientRing,
    pub max_degree: usize,
    /// `basis[n]` are the classes of degree `n`, `0..=max_degree`.
    pub basis: Vec<Vec<CocycleClass>>,
    /// `products[((p,i),(q,j))]` expands class `i` of degree `p` times class
    /// `j` of degree `q` in the degree-(p+q) basis; present for every
    /// ordered pair with `p + q ≤ max_degree`.
    pub products: BTreeMap<(ClassId, ClassId), Vec<Scalar>>,
}

impl RingPresentation {
    pub fn class_count(&self, degree: usize) -> usize {
        self.basis.get(degree).map_or(0, Vec::len)
    }

    pub fn product(&self, a: ClassId, b: ClassId) -> Option<&Vec<Scalar>> {
        self.products.get(&(a, b))
    }

    /// Bilinear extension of the table: multiplies two classes given by
    /// coefficient vectors over the degree bases. `None` when the target
    /// degree is out of tabulated range.
    pub fn multiply_vectors(
        &self,
        p: usize,
        x: &[Scalar],
        q: usize,
        y: &[Scalar],
    ) -> Option<Vec<Scalar>> {
        let t = p + q;
        if t > self.max_degree {
            return None;
        }
        let zero = self.field.zero();
        let mut acc = vec![zero.clone(); self.class_count(t)];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let table = self.product((p, i), (q, j))?;
                let factor = xi.mul(yj);
                for (slot, coeff) in acc.iter_mut().zip(table) {
                    *slot = slot.add(&coeff.mul(&factor));
                }
            }
        }
        Some(acc)
    }
}

/// Cohomology basis with representatives and the multiplication table, over
/// `Q` or `F_p` only.
pub fn ring_structure(
    complex: &SimplicialComplex,
    subtorus: &SubtorusSpec,
    field: CoefficientRing,
    max_degree: Option<usize>,
) -> Result<RingPresentation> {
    if !field.is_field() {
        return Err(Error::FieldRequired(
            "the multiplicative structure is computed over Q or F_p; over Z only Betti numbers \
             and torsion are reported"
                .to_string(),
        ));
    }
    let model = subtorus.quotient_model()?;
    if let Some(facet) = model.source().freeness_violation(complex)? {
        return Err(Error::NotFree(facet.vertices().to_vec()));
    }
    let bound = max_degree.unwrap_or(default_degree_bound(complex, subtorus.k()));
    let engine = Engine::new(complex, &model, field, bound + 1);
    let d: Vec<IntMatrix> = (0..=bound).map(|n| engine.d_matrix(n)).collect();
    let d_cols: Vec<Vec<Vec<(usize, Scalar)>>> =
        d.par_iter().map(|mat| scalar_columns(mat, field)).collect();

    // representatives per degree
    let mut basis: Vec<Vec<CocycleClass>> = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let dim = engine.basis(n).len();
        let kernel = ScalarMat::from_int_matrix(&d[n], field)
            .echelonize(dim)
            .kernel_basis();
        let coboundaries: &[Vec<(usize, Scalar)>] =
            if n == 0 { &[] } else { &d_cols[n - 1] };
        let mut cols: Vec<Vec<(usize, Scalar)>> = coboundaries.to_vec();
        cols.extend(kernel.iter().cloned());
        let ech = ScalarMat::from_sparse_cols(field, dim, &cols).echelonize(cols.len());
        let reps: Vec<CocycleClass> = ech
            .pivots
            .iter()
            .filter(|&&(_, c)| c >= coboundaries.len())
            .map(|&(_, c)| CocycleClass { representative: kernel[c - coboundaries.len()].clone() })
            .collect();
        basis.push(reps);
    }

    // chain-level products, batched per target degree
    let mut products: BTreeMap<(ClassId, ClassId), Vec<Scalar>> = BTreeMap::new();
    for target in 0..=bound {
        let mut pairs: Vec<(ClassId, ClassId)> = Vec::new();
        let mut rhs: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for p in 0..=target {
            let q = target - p;
            for ia in 0..basis[p].len() {
                for ib in 0..basis[q].len() {
                    let vec = expand_product(
                        complex,
                        &engine,
                        field,
                        p,
                        &basis[p][ia].representative,
                        q,
                        &basis[q][ib].representative,
                    )?;
                    // the product of cocycles must be a cocycle
                    if target < d.len() && !applies_to_zero(&d_cols[target], &vec) {
                        return Err(Error::contract(format!(
                            "product of cocycles is not a cocycle in degree {target}"
                        )));
                    }
                    pairs.push(((p, ia), (q, ib)));
                    rhs.push(vec);
                }
            }
        }
        if pairs.is_empty() {
            continue;
        }
        let reps_t: Vec<Vec<(usize, Scalar)>> = basis[target]
            .iter()
            .map(|c| c.representative.clone())
            .collect();
        let cobound_t: &[Vec<(usize, Scalar)>] =
            if target == 0 { &[] } else { &d_cols[target - 1] };
        let dim_t = engine.basis(target).len();
        let solutions = express_many_in_quotient(field, &rhs, &reps_t, cobound_t, dim_t)?;
        for (pair, coeffs) in pairs.into_iter().zip(solutions) {
            products.insert(pair, coeffs);
        }
    }
    Ok(RingPresentation { field, max_degree: bound, basis, products })
}

fn scalar_columns(mat: &IntMatrix, field: CoefficientRing) -> Vec<Vec<(usize, Scalar)>> {
    let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); mat.cols()];
    for (r, c, v) in mat.iter() {
        let s = field.scalar(v);
        if !s.is_zero() {
            cols[c].push((r, s));
        }
    }
    cols
}

/// `Σ_{i,j} a_i·b_j · (e_i ⌣ f_j)` in the coordinates of the target slice.
fn expand_product(
    complex: &SimplicialComplex,
    engine: &Engine,
    field: CoefficientRing,
    p: usize,
    a: &[(usize, Scalar)],
    q: usize,
    b: &[(usize, Scalar)],
) -> Result<Vec<(usize, Scalar)>> {
    let basis_p = engine.basis(p);
    let basis_q = engine.basis(q);
    let target_index: BTreeMap<_, _> = engine
        .basis(p + q)
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, ai) in a {
        for (j, bj) in b {
            let Some((sign, element)) = cup_product(&basis_p[*i], &basis_q[*j], complex)? else {
                continue;
            };
            let idx = *target_index
                .get(&element)
                .expect("product lands in the target slice");
            let mut term = ai.mul(bj);
            if sign < 0 {
                term = term.neg();
            }
            let slot = acc.entry(idx).or_insert_with(|| field.zero());
            *slot = slot.add(&term);
        }
    }
    Ok(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect())
}

/// Whether the sparse vector is annihilated by the differential whose
/// columns are given.
fn applies_to_zero(d_cols: &[Vec<(usize, Scalar)>], vec: &[(usize, Scalar)]) -> bool {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (col, coeff) in vec {
        for (row, val) in &d_cols[*col] {
            let term = coeff.mul(val);
            match acc.remove(row) {
                Some(existing) => {
                    let sum = existing.add(&term);
                    if !sum.is_zero() {
                        acc.insert(*row, sum);
                    }
                }
                None => {
                    acc.insert(*row, term);
                }
            }
        }
    }
    acc.is_empty()
}
