//! Homology of one degree of a chain complex of free modules.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::field::CoefficientRing;
use super::matrix::IntMatrix;
use super::snf::{invariant_factors, rank_over};
use crate::{Error, Result};

/// One graded piece of (co)homology: free rank plus torsion invariants in
/// ascending divisibility order. Over a field the torsion list is empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(betti: usize) -> Self {
        HomologyGroup { betti, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// `ker(d_out) / im(d_in)` for one degree of a complex over the given ring.
///
/// `d_in` maps into the degree (its rows index the degree's basis), `d_out`
/// maps out of it (its columns index the same basis). Over `Z` the torsion
/// invariants are the invariant factors of `d_in` exceeding 1: since
/// `d_out·d_in = 0` the image of `d_in` sits inside the kernel lattice of
/// `d_out`, which is a direct summand of the ambient lattice, so the factors
/// computed in the ambient lattice and in the kernel lattice coincide.
pub fn homology_at(
    d_in: &IntMatrix,
    d_out: &IntMatrix,
    ring: CoefficientRing,
) -> Result<HomologyGroup> {
    let n = d_out.cols();
    if d_in.rows() != n {
        return Err(Error::contract(format!(
            "chain maps not composable: d_in is {}x{}, d_out is {}x{}",
            d_in.rows(),
            d_in.cols(),
            d_out.rows(),
            d_out.cols()
        )));
    }
    if !d_out.matmul(d_in).is_zero_over(ring) {
        return Err(Error::contract(format!(
            "d∘d ≠ 0 between a {}-dim and a {}-dim slice",
            d_in.cols(),
            d_out.rows()
        )));
    }
    match ring {
        CoefficientRing::Integers => {
            let factors = invariant_factors(d_in);
            let rank_out = rank_over(d_out, CoefficientRing::Rationals);
            let betti = n - rank_out - factors.len();
            let torsion: Vec<BigInt> =
                factors.into_iter().filter(|f| !f.is_one()).collect();
            Ok(HomologyGroup { betti, torsion })
        }
        field => {
            let rank_in = rank_over(d_in, field);
            let rank_out = rank_over(d_out, field);
            Ok(HomologyGroup::free(n - rank_out - rank_in))
        }
    }
}

/// Invariant-factor form of a direct sum of torsion groups. Each input list
/// is a divisibility chain; the output is again one chain, obtained by
/// merging the prime-power decompositions.
pub fn merge_torsion(lists: &[Vec<BigInt>]) -> Vec<BigInt> {
    // prime -> exponents, one per cyclic summand of that prime power
    let mut primary: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
    for list in lists {
        for value in list {
            for (p, e) in factorize(value) {
                primary.entry(p).or_default().push(e);
            }
        }
    }
    let depth = primary.values().map(Vec::len).max().unwrap_or(0);
    let mut chain = vec![BigInt::one(); depth];
    for (p, mut exps) in primary {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        // largest exponent joins the last (largest) invariant factor
        for (i, e) in exps.into_iter().enumerate() {
            let slot = depth - 1 - i;
            chain[slot] *= p.pow(e);
        }
    }
    chain
}

fn factorize(value: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = value.clone();
    assert!(n > BigInt::one(), "torsion invariants exceed 1");
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d) == BigInt::from(0) {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}
