//! Property suites for the exact kernel, checked against independent
//! test-side implementations (fraction-free elimination, brute-force
//! counting). Randomness is seeded; failures reproduce.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torq_core::exact::{
    homology_at, invariant_factors, kernel_basis, rank_over, smith_normal_form, CoefficientRing,
    IntMatrix,
};
use torq_core::face_ring;
use torq_core::simplicial::SimplicialComplex;
use torq_core::torus::SubtorusSpec;

// --- independent oracles (test-side only) ---------------------------------

/// One-step Bareiss fraction-free elimination; returns (rank, det) where det
/// is meaningful for square inputs of full rank and 0 otherwise.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(r, p);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    let det = if rows == cols && r == rows { sign * prev } else { BigInt::zero() };
    (r, det)
}

fn ff_rank(m: &IntMatrix) -> usize {
    bareiss(m.to_dense()).0
}

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, max_entry: i64) -> IntMatrix {
    let rows = rng.gen_range(0..=max_dim);
    let cols = rng.gen_range(0..=max_dim);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-max_entry..=max_entry)).collect())
        .collect();
    if rows == 0 {
        IntMatrix::zero(0, cols)
    } else {
        IntMatrix::from_rows(&data)
    }
}

fn random_complex(rng: &mut ChaCha8Rng, max_m: usize) -> SimplicialComplex {
    let m = rng.gen_range(1..=max_m);
    let nfacets = rng.gen_range(0..=m.min(5) + 1);
    let faces: Vec<Vec<usize>> = (0..nfacets)
        .map(|_| {
            let size = rng.gen_range(1..=m.min(4));
            (0..size).map(|_| rng.gen_range(1..=m)).collect()
        })
        .collect();
    SimplicialComplex::new(m, &faces).expect("random faces in range")
}

// --- Smith normal form ------------------------------------------------------

#[test]
fn snf_satisfies_contract_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..150 {
        let a = random_matrix(&mut rng, 8, 9);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.matmul(&a).matmul(&snf.v), snf.d, "U·A·V = D");
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
        }
        assert!(diag.iter().all(|d| d.is_positive()));
        // transforms are unimodular
        let (_, det_u) = bareiss(snf.u.to_dense());
        let (_, det_v) = bareiss(snf.v.to_dense());
        assert!(det_u.abs().is_one(), "|det U| = 1");
        assert!(det_v.abs().is_one(), "|det V| = 1");
        // sparse fast path agrees with the dense diagonal
        assert_eq!(invariant_factors(&a), diag);
        // rank agrees with fraction-free elimination
        assert_eq!(rank_over(&a, CoefficientRing::Rationals), ff_rank(&a));
    }
}

#[test]
fn kernel_basis_spans_a_direct_summand() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..120 {
        let a = random_matrix(&mut rng, 7, 6);
        let kernel = kernel_basis(&a);
        assert_eq!(kernel.rows(), a.cols() - ff_rank(&a), "kernel dimension");
        assert!(a.matmul(&kernel.transpose()).is_zero(), "rows lie in the kernel");
        if kernel.rows() > 0 {
            assert_eq!(ff_rank(&kernel), kernel.rows(), "rows independent over Q");
            let factors = invariant_factors(&kernel);
            assert!(factors.iter().all(BigInt::is_one), "direct summand");
        }
    }
}

// --- homology ---------------------------------------------------------------

#[test]
fn homology_betti_matches_fraction_free_elimination() {
    // coboundary pairs of random complexes give genuine d∘d = 0 instances
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let k = random_complex(&mut rng, 6);
        for d in -1..=k.dim() {
            let d_in = if d == -1 {
                IntMatrix::zero(1, 0)
            } else {
                k.coboundary(d - 1)
            };
            let d_out = k.coboundary(d);
            let h = homology_at(&d_in, &d_out, CoefficientRing::Rationals).unwrap();
            let expected = d_out.cols() - ff_rank(&d_out) - ff_rank(&d_in);
            assert_eq!(h.betti, expected, "betti at degree {d}");
        }
    }
}

#[test]
fn universal_coefficients_spot_check() {
    // betti over F_p = betti over Q + #p-torsion here + #p-torsion next degree
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let fields = [2u64, 3, 5];
    for _ in 0..40 {
        let k = random_complex(&mut rng, 6);
        let over_z = k.reduced_cohomology(CoefficientRing::Integers).unwrap();
        let over_q = k.reduced_cohomology(CoefficientRing::Rationals).unwrap();
        for &p in &fields {
            let ring = CoefficientRing::prime_field(p).unwrap();
            let over_p = k.reduced_cohomology(ring).unwrap();
            for idx in 0..over_z.len() {
                let t_here = count_divisible(&over_z[idx].torsion, p);
                let t_next = over_z
                    .get(idx + 1)
                    .map_or(0, |g| count_divisible(&g.torsion, p));
                assert_eq!(
                    over_p[idx].betti,
                    over_q[idx].betti + t_here + t_next,
                    "UCT at reduced degree {} over F_{p}",
                    idx as i64 - 1
                );
            }
        }
    }
}

fn count_divisible(torsion: &[BigInt], p: u64) -> usize {
    let pb = BigInt::from(p);
    torsion.iter().filter(|t| (*t % &pb).is_zero()).count()
}

#[test]
fn reduced_euler_characteristic_counts_faces() {
    // Σ_{d≥−1} (−1)^d betti_d over Q  =  Σ_{∅≠I∈K} (−1)^{|I|−1} − 1
    let mut rng = ChaCha8Rng::seed_from_u64(271828);
    for _ in 0..40 {
        let k = random_complex(&mut rng, 6);
        let groups = k.reduced_cohomology(CoefficientRing::Rationals).unwrap();
        let chi_betti: i64 = groups
            .iter()
            .enumerate()
            .map(|(idx, g)| {
                let degree = idx as i64 - 1;
                if degree.rem_euclid(2) == 0 { g.betti as i64 } else { -(g.betti as i64) }
            })
            .sum();
        let chi_faces: i64 = k
            .all_faces()
            .map(|f| if (f.card() - 1) % 2 == 0 { 1 } else { -1 })
            .sum::<i64>()
            - 1;
        assert_eq!(chi_betti, chi_faces, "Euler characteristic via face counting");
    }
}

// --- face ring ---------------------------------------------------------------

#[test]
fn face_ring_multiplication_is_associative_and_commutative() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let k = random_complex(&mut rng, 6);
        for _ in 0..20 {
            let monomials: Vec<_> = (0..3)
                .map(|_| {
                    let deg = rng.gen_range(0..=3u32);
                    let slice = face_ring::enumerate_slice(&k, deg).basis;
                    if slice.is_empty() {
                        face_ring::Monomial::one()
                    } else {
                        slice[rng.gen_range(0..slice.len())].clone()
                    }
                })
                .collect();
            let (a, b, c) = (&monomials[0], &monomials[1], &monomials[2]);
            let ab = face_ring::multiply(&k, a, b).unwrap();
            let ba = face_ring::multiply(&k, b, a).unwrap();
            assert_eq!(ab, ba, "commutativity");
            // (ab)c = a(bc), with zero absorbing
            let left = match &ab {
                None => None,
                Some(ab) => face_ring::multiply(&k, ab, c).unwrap(),
            };
            let bc = face_ring::multiply(&k, b, c).unwrap();
            let right = match &bc {
                None => None,
                Some(bc) => face_ring::multiply(&k, a, bc).unwrap(),
            };
            assert_eq!(left, right, "associativity");
        }
    }
}

#[test]
fn limit_injectivity_on_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..25 {
        let k = random_complex(&mut rng, 6);
        for j in 0..=5 {
            assert!(
                face_ring::limit_injectivity_check(&k, j),
                "restriction to facets must embed the degree-{j} slice"
            );
        }
    }
}

// --- torus -------------------------------------------------------------------

#[test]
fn quotient_model_annihilates_and_is_primitive() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    let mut produced = 0;
    while produced < 60 {
        let m = rng.gen_range(1..=7usize);
        let k = rng.gen_range(0..=m.min(3));
        let basis: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let basis = if k == 0 { IntMatrix::zero(0, m) } else { IntMatrix::from_rows(&basis) };
        let Ok(s) = SubtorusSpec::new(m, basis) else { continue };
        if !s.validate() {
            continue;
        }
        produced += 1;
        let q = s.quotient_model().unwrap();
        assert!(q.forms().matmul(&s.lattice_basis().transpose()).is_zero());
        let factors = invariant_factors(q.forms());
        assert_eq!(factors.len(), m - k);
        assert!(factors.iter().all(BigInt::is_one));
        // stacked, the two blocks span a finite-index sublattice of Z^m
        let mut stacked = Vec::new();
        for r in 0..k {
            stacked.push((0..m).map(|c| s.lattice_basis().entry(r, c)).collect::<Vec<_>>());
        }
        for r in 0..(m - k) {
            stacked.push((0..m).map(|c| q.forms().entry(r, c)).collect::<Vec<_>>());
        }
        let stacked = IntMatrix::from_dense(m, m, &stacked);
        assert_eq!(ff_rank(&stacked), m, "blocks span a finite-index sublattice");
    }
}
