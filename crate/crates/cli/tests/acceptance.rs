//! Acceptance suite. Each test prints one PASS/FAIL line for its criterion
//! (run with `--nocapture` to see them). Everything is exact arithmetic:
//! comparisons are equalities, tolerance zero, and the stated runtime
//! budgets are asserted.

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use torq_core::exact::{CoefficientRing, Scalar};
use torq_core::koszul::{self, default_degree_bound};
use torq_core::oracle;
use torq_core::simplicial::SimplicialComplex;
use torq_core::torus::SubtorusSpec;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn criterion(name: &str, budget: Duration, body: impl FnOnce() + UnwindSafe) {
    let start = Instant::now();
    let outcome = catch_unwind(body);
    let elapsed = start.elapsed();
    match &outcome {
        Ok(()) if elapsed <= budget => {
            println!("ACCEPTANCE {name}: PASS ({elapsed:.2?}, budget {budget:.0?})")
        }
        Ok(()) => println!("ACCEPTANCE {name}: FAIL (over budget: {elapsed:.2?} > {budget:.0?})"),
        Err(_) => println!("ACCEPTANCE {name}: FAIL ({elapsed:.2?})"),
    }
    if let Err(e) = outcome {
        resume_unwind(e);
    }
    assert!(elapsed <= budget, "{name} exceeded its runtime budget: {elapsed:.2?}");
}

fn rings() -> Vec<CoefficientRing> {
    vec![
        CoefficientRing::Integers,
        CoefficientRing::Rationals,
        CoefficientRing::prime_field(2).unwrap(),
        CoefficientRing::prime_field(3).unwrap(),
    ]
}

fn rp2() -> SimplicialComplex {
    SimplicialComplex::new(
        6,
        &[
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 2, 6],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![2, 4, 5],
            vec![3, 5, 6],
            vec![2, 4, 6],
        ],
    )
    .unwrap()
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
    SimplicialComplex::new(m, &faces).unwrap()
}

#[test]
fn acceptance_1_hopf() {
    criterion("1 (Hopf: S³/S¹ = CP¹ over Z)", Duration::from_secs(1), || {
        let k = SimplicialComplex::boundary_simplex(2).unwrap();
        let h = SubtorusSpec::diagonal_circle(2).unwrap();
        let result = koszul::cohomology(&k, &h, CoefficientRing::Integers, None).unwrap();
        assert_eq!(result.betti(), vec![1, 0, 1]);
        assert!(result.groups.iter().all(|g| g.torsion.is_empty()));
    });
}

#[test]
fn acceptance_2_projective_spaces() {
    criterion("2 (CP^{m−1} Betti and ring, m = 2..5)", Duration::from_secs(10), || {
        for m in 2..=5usize {
            let k = SimplicialComplex::boundary_simplex(m).unwrap();
            let h = SubtorusSpec::diagonal_circle(m).unwrap();
            for field in [CoefficientRing::Rationals, CoefficientRing::prime_field(2).unwrap()] {
                let result = koszul::cohomology(&k, &h, field, None).unwrap();
                let expected: Vec<usize> =
                    (0..=2 * (m - 1)).map(|n| usize::from(n % 2 == 0)).collect();
                assert_eq!(result.betti(), expected, "CP^{} over {}", m - 1, field.tag());

                // ring: one degree-2 generator x, x^{m−1} ≠ 0, x^m = 0;
                // degree 2m is inside the computed range so the vanishing
                // is witnessed, not assumed
                let ring = koszul::ring_structure(&k, &h, field, Some(2 * m)).unwrap();
                assert_eq!(ring.class_count(2), 1, "single degree-2 generator");
                let x = vec![field.one()];
                let mut power = x.clone();
                for step in 2..=m {
                    power = ring.multiply_vectors(2, &x, 2 * (step - 1), &power).unwrap();
                    let vanished = power.iter().all(Scalar::is_zero);
                    if step <= m - 1 {
                        assert!(!vanished, "x^{step} must not vanish for CP^{}", m - 1);
                    } else {
                        assert!(vanished, "x^{m} must vanish for CP^{}", m - 1);
                    }
                }
            }
        }
    });
}

#[test]
fn acceptance_3_classical_oracle_equivalence() {
    criterion(
        "3 (k = 0: Koszul = Hochster over Z, Q, F2, F3; corpus + 100 random)",
        Duration::from_secs(300),
        || {
            let mut corpus: Vec<SimplicialComplex> = Vec::new();
            for m in 2..=5 {
                corpus.push(SimplicialComplex::boundary_simplex(m).unwrap());
            }
            for m in 4..=8 {
                corpus.push(SimplicialComplex::polygon(m).unwrap());
            }
            let d4 = SimplicialComplex::boundary_simplex(5).unwrap();
            for d in 0..=2 {
                corpus.push(d4.skeleton(d).unwrap());
            }
            corpus.push(rp2());
            corpus.push(SimplicialComplex::new(4, &[vec![1, 2], vec![3, 4]]).unwrap());

            let mut rng = ChaCha8Rng::seed_from_u64(20240810);
            for _ in 0..100 {
                corpus.push(random_complex(&mut rng, 6));
            }

            for k in &corpus {
                let trivial = SubtorusSpec::trivial(k.m());
                for ring in rings() {
                    let engine = koszul::cohomology(k, &trivial, ring, None).unwrap();
                    let hochster =
                        oracle::hochster_betti(k, ring, Some(engine.max_degree)).unwrap();
                    assert_eq!(
                        engine.groups,
                        hochster,
                        "pipelines disagree on m = {} facets {:?} over {}",
                        k.m(),
                        k.facets(),
                        ring.tag()
                    );
                }
            }
        },
    );
}

#[test]
fn acceptance_4_finite_characteristic_sensitivity() {
    criterion("4 (RP²: F2 exceeds Q; torsion degree agreed)", Duration::from_secs(60), || {
        let k = rp2();
        let trivial = SubtorusSpec::trivial(6);
        let over_q = koszul::cohomology(&k, &trivial, CoefficientRing::Rationals, None).unwrap();
        let over_f2 =
            koszul::cohomology(&k, &trivial, CoefficientRing::prime_field(2).unwrap(), None)
                .unwrap();
        assert!(
            over_f2.total_betti() > over_q.total_betti(),
            "F2 total Betti must strictly exceed Q total Betti"
        );

        // the Hochster oracle locates the torsion degree; the engine must
        // exhibit invariant 2 exactly there
        let hochster = oracle::hochster_betti(&k, CoefficientRing::Integers, None).unwrap();
        let oracle_degrees: Vec<usize> = hochster
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.torsion.is_empty())
            .map(|(n, _)| n)
            .collect();
        assert_eq!(oracle_degrees.len(), 1, "one torsion degree expected");
        let degree = oracle_degrees[0];
        assert_eq!(hochster[degree].torsion, vec![BigInt::from(2)]);
        let over_z = koszul::cohomology(&k, &trivial, CoefficientRing::Integers, None).unwrap();
        assert_eq!(over_z.groups[degree].torsion, vec![BigInt::from(2)]);
        assert_eq!(over_z.groups, hochster, "pipelines agree including the torsion degree");
    });
}

#[test]
fn acceptance_5_toric_degeneration() {
    criterion("5 (maximal-rank toric case vs quotient ring)", Duration::from_secs(60), || {
        let scenarios: Vec<(SimplicialComplex, usize, Vec<usize>)> = vec![
            (SimplicialComplex::boundary_simplex(3).unwrap(), 1, vec![1, 0, 1, 0, 1]),
            (SimplicialComplex::polygon(4).unwrap(), 2, vec![1, 0, 2, 0, 1]),
        ];
        for (k, rank, expected) in scenarios {
            assert_eq!(rank as i64, k.m() as i64 - (k.dim() + 1), "maximal rank");
            let s = oracle::search_free_subtorus(&k, rank, 1729, 5000)
                .expect("seeded search finds a freely acting subtorus");
            let field = CoefficientRing::Rationals;
            let engine = koszul::cohomology(&k, &s, field, None).unwrap();
            let dims =
                oracle::toric_quotient_dims(&k, &s, field, Some(engine.max_degree)).unwrap();
            assert_eq!(dims, expected, "quotient ring dimensions");
            for (n, group) in engine.groups.iter().enumerate() {
                if n % 2 == 1 {
                    assert_eq!(group.betti, 0, "odd Betti must vanish (degree {n})");
                }
                assert_eq!(group.betti, dims[n], "Betti equals quotient dim at degree {n}");
            }
        }
    });
}

#[test]
fn acceptance_6_structural_invariants() {
    criterion("6 (d∘d, ring axioms, basis invariance, freeness, duality)", Duration::from_secs(300), || {
        // d∘d = 0 on every slice pair of a mixed corpus, all three ring families
        let pairs: Vec<(SimplicialComplex, SubtorusSpec)> = vec![
            (SimplicialComplex::boundary_simplex(4).unwrap(), SubtorusSpec::trivial(4)),
            (
                SimplicialComplex::boundary_simplex(4).unwrap(),
                SubtorusSpec::diagonal_circle(4).unwrap(),
            ),
            (SimplicialComplex::polygon(6).unwrap(), SubtorusSpec::diagonal_circle(6).unwrap()),
            (rp2(), SubtorusSpec::trivial(6)),
        ];
        for (k, s) in &pairs {
            let model = s.quotient_model().unwrap();
            for ring in rings() {
                let bound = default_degree_bound(k, s.k());
                let slices: Vec<_> =
                    (0..=bound).map(|n| koszul::build_slice(k, &model, n, ring)).collect();
                for n in 0..bound {
                    let product = slices[n + 1].d_out.matmul(&slices[n].d_out);
                    assert!(
                        product.is_zero_over(ring),
                        "d∘d ≠ 0 at degree {n} over {}",
                        ring.tag()
                    );
                }
            }
        }

        // graded commutativity and associativity of every computed product
        for (k, s, field) in [
            (
                SimplicialComplex::polygon(4).unwrap(),
                SubtorusSpec::trivial(4),
                CoefficientRing::Rationals,
            ),
            (
                SimplicialComplex::boundary_simplex(4).unwrap(),
                SubtorusSpec::diagonal_circle(4).unwrap(),
                CoefficientRing::prime_field(3).unwrap(),
            ),
        ] {
            let ring = koszul::ring_structure(&k, &s, field, None).unwrap();
            let max = ring.max_degree;
            let degrees: Vec<usize> = (0..=max).filter(|&d| ring.class_count(d) > 0).collect();
            for &p in &degrees {
                for &q in &degrees {
                    if p + q > max {
                        continue;
                    }
                    for i in 0..ring.class_count(p) {
                        for j in 0..ring.class_count(q) {
                            let ab = ring.product((p, i), (q, j)).unwrap();
                            let ba = ring.product((q, j), (p, i)).unwrap();
                            for (x, y) in ab.iter().zip(ba) {
                                let expect =
                                    if p * q % 2 == 1 { y.neg() } else { y.clone() };
                                assert_eq!(*x, expect, "graded commutativity at ({p},{q})");
                            }
                        }
                    }
                }
            }
            for &p in &degrees {
                for &q in &degrees {
                    for &r in &degrees {
                        if p + q + r > max {
                            continue;
                        }
                        for i in 0..ring.class_count(p) {
                            for j in 0..ring.class_count(q) {
                                for l in 0..ring.class_count(r) {
                                    let e_p = unit(&ring, p, i, field);
                                    let e_q = unit(&ring, q, j, field);
                                    let e_r = unit(&ring, r, l, field);
                                    let ab = ring.multiply_vectors(p, &e_p, q, &e_q).unwrap();
                                    let left =
                                        ring.multiply_vectors(p + q, &ab, r, &e_r).unwrap();
                                    let bc = ring.multiply_vectors(q, &e_q, r, &e_r).unwrap();
                                    let right =
                                        ring.multiply_vectors(p, &e_p, q + r, &bc).unwrap();
                                    assert_eq!(left, right, "associativity at ({p},{q},{r})");
                                }
                            }
                        }
                    }
                }
            }
        }

        // annihilator-basis invariance: 5 random unimodular changes
        let k = SimplicialComplex::polygon(5).unwrap();
        let s = SubtorusSpec::diagonal_circle(5).unwrap();
        assert!(koszul::basis_invariance_check(&k, &s, CoefficientRing::Integers, 5, 99).unwrap());
        assert!(
            koszul::basis_invariance_check(
                &k,
                &SubtorusSpec::trivial(5),
                CoefficientRing::prime_field(2).unwrap(),
                5,
                99
            )
            .unwrap()
        );

        // facet-only freeness equals the all-simplices brute force, 200 seeded instances
        let mut rng = ChaCha8Rng::seed_from_u64(60606);
        let mut tested = 0;
        while tested < 200 {
            let k = random_complex(&mut rng, 7);
            let rank = rng.gen_range(0..=k.m().min(3));
            let rows: Vec<Vec<i64>> = (0..rank)
                .map(|_| (0..k.m()).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let basis = if rank == 0 {
                torq_core::exact::IntMatrix::zero(0, k.m())
            } else {
                torq_core::exact::IntMatrix::from_rows(&rows)
            };
            let Ok(s) = SubtorusSpec::new(k.m(), basis) else { continue };
            if !s.validate() {
                continue;
            }
            tested += 1;
            assert_eq!(
                s.acts_freely(&k).unwrap(),
                oracle::brute_force_freeness(&s, &k).unwrap(),
                "freeness criteria disagree"
            );
        }

        // Poincaré duality over Q on the sphere corpora with free H
        let mut sphere_cases: Vec<(SimplicialComplex, SubtorusSpec)> = Vec::new();
        for m in 2..=5 {
            let k = SimplicialComplex::boundary_simplex(m).unwrap();
            sphere_cases.push((k.clone(), SubtorusSpec::trivial(m)));
            sphere_cases.push((k, SubtorusSpec::diagonal_circle(m).unwrap()));
        }
        for m in 4..=8 {
            let k = SimplicialComplex::polygon(m).unwrap();
            sphere_cases.push((k.clone(), SubtorusSpec::trivial(m)));
            sphere_cases.push((k, SubtorusSpec::diagonal_circle(m).unwrap()));
        }
        for (k, s) in &sphere_cases {
            assert!(s.acts_freely(k).unwrap());
            let result = koszul::cohomology(k, s, CoefficientRing::Rationals, None).unwrap();
            let betti = result.betti();
            let top = betti.len() - 1;
            for i in 0..=top {
                assert_eq!(betti[i], betti[top - i], "duality at degree {i} (m = {})", k.m());
            }
        }
    });
}

fn unit(
    ring: &koszul::RingPresentation,
    degree: usize,
    index: usize,
    field: CoefficientRing,
) -> Vec<Scalar> {
    (0..ring.class_count(degree))
        .map(|i| if i == index { field.one() } else { field.zero() })
        .collect()
}

#[test]
fn acceptance_7_determinism() {
    criterion("7 (byte-identical JSON on repeated runs)", Duration::from_secs(60), || {
        let torq = env!("CARGO_BIN_EXE_torq");
        let jobs: Vec<Vec<&str>> = vec![
            vec!["betti", "--complex", "polygon:5", "--subtorus", "diagonal", "--ring", "Z",
                 "--format", "json", "--seed", "17"],
            vec!["ring", "--complex", "simplex-boundary:3", "--subtorus", "diagonal",
                 "--ring", "Q", "--format", "json"],
            vec!["oracle", "--complex", "rp2", "--ring", "Fp:2", "--format", "json"],
        ];
        for job in &jobs {
            let first = Command::new(torq).args(job).output().unwrap();
            let second = Command::new(torq).args(job).output().unwrap();
            assert!(first.status.code().is_some());
            assert_eq!(first.status.code(), second.status.code());
            assert_eq!(first.stdout, second.stdout, "stdout must be byte-identical: {job:?}");
            assert!(!first.stdout.is_empty());

            // thread count is not part of the JobSpec and must not affect output
            let mut with_threads: Vec<&str> = job.clone();
            with_threads.extend(["--threads", "1"]);
            let third = Command::new(torq).args(&with_threads).output().unwrap();
            assert_eq!(first.stdout, third.stdout, "thread count changed output: {job:?}");
        }
    });
}
