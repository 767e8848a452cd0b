mod common;

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;

use rankdec::chains::{
    find_translate_chain, greedy_chain, is_c_increasing, TranslateSearch, VectorQ,
};
use rankdec::codes::{
    enumerate_ball, is_list_decodable_exact, list_decode, max_list_size_exhaustive,
    min_rank_distance, RankCode,
};
use rankdec::counting::{ball_volume, gaussian_binomial, rank_count, singleton_check, BallSpec};
use rankdec::gf::build_field;
use rankdec::matgf::{field_for_order, rank_distance, Matrix, Subspace};
use rankdec::sampling::{
    mix64, sample_ball_uniform, sample_random_linear_code, sample_uniform_matrix, SeedSpec,
    TrialRng,
};
use rankdec::Rational;

use common::{binary_subspaces, matrix_rows, rank_mod_p};

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn matrix(q: u64, m: usize, n: usize, index: u64) -> Matrix {
    Matrix::from_index(field_for_order(q).unwrap(), m, n, index)
}

/// Carry-less product of two F_2 polynomials reduced by `modulus` (bit i = coefficient of x^i).
fn gf2_poly_mul(a: u32, b: u32, modulus: u32, degree: u32) -> u32 {
    let mut acc = 0u32;
    for i in 0..degree {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    for i in (degree..2 * degree).rev() {
        if acc >> i & 1 == 1 {
            acc ^= modulus << (i - degree);
        }
    }
    acc
}

#[test]
fn binary_extension_fields_match_polynomial_arithmetic() {
    for (e, modulus) in [(2u32, 0b111u32), (3, 0b1011), (4, 0b10011)] {
        let f = build_field(2, e).unwrap();
        let q = 1u32 << e;
        for a in 0..q {
            for b in 0..q {
                assert_eq!(f.mul(a, b), gf2_poly_mul(a, b, modulus, e), "q={q} {a}*{b}");
                assert_eq!(f.add(a, b), a ^ b);
            }
        }
    }
}

#[test]
fn rank_agrees_with_prime_field_elimination() {
    for (p, m, n) in [(2u32, 3usize, 3usize), (3, 2, 3), (5, 2, 2)] {
        let total = (p as u64).pow((m * n) as u32);
        for idx in 0..total {
            let x = matrix(p as u64, m, n, idx);
            assert_eq!(
                x.rank(),
                rank_mod_p(&matrix_rows(idx, p, m, n), p),
                "p={p} idx={idx}"
            );
        }
    }
}

#[test]
fn rank_counts_match_enumeration() {
    for (q, m, n) in [(2u64, 3usize, 3usize), (3, 3, 2), (4, 2, 2), (5, 2, 2)] {
        let total = q.pow((m * n) as u32);
        let mut hist = vec![0u64; n + 1];
        for idx in 0..total {
            hist[matrix(q, m, n, idx).rank()] += 1;
        }
        for (r, &h) in hist.iter().enumerate() {
            assert_eq!(
                rank_count(q, m, n, r).unwrap(),
                BigUint::from(h),
                "q={q} {m}x{n} r={r}"
            );
        }
    }
}

#[test]
fn grassmannian_matches_closure_enumeration() {
    for n in 1..=5 {
        let levels = binary_subspaces(n);
        let field = field_for_order(2).unwrap();
        for (k, level) in levels.iter().enumerate() {
            assert_eq!(
                gaussian_binomial(2, n, k).unwrap(),
                BigUint::from(level.len())
            );
            let from_lib: BTreeSet<u64> = Subspace::enumerate_all(field.clone(), n, k)
                .iter()
                .map(|s| {
                    s.elements()
                        .iter()
                        .map(|v| {
                            v.iter()
                                .enumerate()
                                .fold(0usize, |a, (i, &b)| a | (b as usize) << i)
                        })
                        .fold(0u64, |mask, v| mask | 1 << v)
                })
                .collect();
            assert_eq!(&from_lib, level, "n={n} k={k}");
        }
    }
}

#[test]
fn ball_enumeration_matches_filter() {
    for (q, m, n) in [(2u64, 3usize, 2usize), (3, 2, 2)] {
        let field = field_for_order(q).unwrap();
        let total = q.pow((m * n) as u32);
        for r in 0..=n {
            let want: BTreeSet<u64> = (0..total)
                .filter(|&i| matrix(q, m, n, i).rank() <= r)
                .collect();
            let got: BTreeSet<u64> = enumerate_ball(&field, m, n, r)
                .unwrap()
                .iter()
                .map(Matrix::to_index)
                .collect();
            assert_eq!(got, want);
            let spec = BallSpec::with_radius(q, m, n, r).unwrap();
            assert_eq!(ball_volume(&spec), BigUint::from(want.len()));
        }
    }
}

#[test]
fn list_decoding_matches_brute_force() {
    let q = 3u64;
    let field = field_for_order(q).unwrap();
    let mut rng = TrialRng::seed_from_u64(11);
    let basis = sample_random_linear_code(&field, 2, 2, 2, &mut rng).unwrap();
    let code = RankCode::linear(field.clone(), 2, 2, basis).unwrap();
    let words = code.codewords().unwrap();
    let rho = rat(1, 2);
    let spec = BallSpec::new(q, 2, 2, &rho).unwrap();
    let mut max = 0;
    for idx in 0..81 {
        let y = matrix(q, 2, 2, idx);
        let mut want: Vec<Matrix> = words
            .iter()
            .filter(|c| c.sub(&y).unwrap().rank() <= 1)
            .cloned()
            .collect();
        want.sort();
        assert_eq!(list_decode(&code, &y, &rho).unwrap(), want);
        max = max.max(want.len());
    }
    assert_eq!(max_list_size_exhaustive(&code, &spec).unwrap(), max);
    assert!(is_list_decodable_exact(&code, &spec, max).unwrap().0);
    let (ok, witness) = is_list_decodable_exact(&code, &spec, max - 1).unwrap();
    assert!(!ok);
    assert_eq!(
        list_decode(&code, &witness.unwrap(), &rho).unwrap().len(),
        max
    );
}

#[test]
fn general_code_file_round_trip() {
    let field = field_for_order(5).unwrap();
    let words: Vec<Matrix> = [3u64, 17, 200, 601]
        .iter()
        .map(|&i| matrix(5, 2, 2, i))
        .collect();
    let code = RankCode::general(field, 2, 2, words).unwrap();
    let mut buf = Vec::new();
    code.write(&mut buf).unwrap();
    let back = RankCode::read(buf.as_slice()).unwrap();
    assert_eq!(back.codewords().unwrap(), code.codewords().unwrap());
    assert!(!back.is_linear());
}

#[test]
fn trial_seeds_follow_splitmix_finalizer() {
    assert_eq!(mix64(0x9e37_79b9_7f4a_7c15), 0xe220_a839_7b1d_cdaf);
    assert_eq!(SeedSpec::new(7).trial_seed(0), 1_346_066_267_577_507_604);
    assert_eq!(SeedSpec::new(7).trial_seed(1), 15_093_541_023_163_888_492);
    assert_eq!(SeedSpec::new(42).trial_seed(3), 7_408_963_384_981_888_293);
}

#[test]
fn sauer_shelah_full_cube() {
    let set: Vec<VectorQ> = (0..16).map(|i| VectorQ::from_index(2, 4, i)).collect();
    let cert = find_translate_chain(&set, 1, TranslateSearch::Exhaustive).unwrap();
    assert!(cert.verify(&set).unwrap());
    assert_eq!(cert.chain.len(), 4);
    assert!(is_c_increasing(&greedy_chain(&set, 2), 2).unwrap());
}

fn arb_matrix(q: u64, m: usize, n: usize) -> impl Strategy<Value = Matrix> {
    (0..q.pow((m * n) as u32)).prop_map(move |i| matrix(q, m, n, i))
}

fn arb_q() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_is_transpose_invariant(q in arb_q(), seed in any::<u64>(), m in 1usize..6, n in 1usize..6) {
        let field = field_for_order(q).unwrap();
        let mut rng = TrialRng::seed_from_u64(seed);
        let x = sample_uniform_matrix(&field, m, n, &mut rng);
        prop_assert_eq!(x.rank(), x.transpose().rank());
        prop_assert_eq!(x.rank(), x.rank_generic());
        prop_assert!(x.rank() <= m.min(n));
        prop_assert_eq!(x.row_space().dim() + x.transpose().row_space().dim(), 2 * x.rank());
    }

    #[test]
    fn rank_is_subadditive(q in arb_q(), seed in any::<u64>()) {
        let field = field_for_order(q).unwrap();
        let mut rng = TrialRng::seed_from_u64(seed);
        let a = sample_uniform_matrix(&field, 4, 3, &mut rng);
        let b = sample_uniform_matrix(&field, 4, 3, &mut rng);
        let c = sample_uniform_matrix(&field, 3, 5, &mut rng);
        prop_assert!(a.add(&b).unwrap().rank() <= a.rank() + b.rank());
        prop_assert!(a.mul(&c).unwrap().rank() <= a.rank().min(c.rank()));
    }

    #[test]
    fn rank_distance_is_a_metric(x in arb_matrix(3, 3, 2), y in arb_matrix(3, 3, 2), z in arb_matrix(3, 3, 2)) {
        let dxy = rank_distance(&x, &y).unwrap();
        prop_assert_eq!(&dxy, &rank_distance(&y, &x).unwrap());
        prop_assert!(dxy <= rank_distance(&x, &z).unwrap() + rank_distance(&z, &y).unwrap());
        prop_assert_eq!(dxy.is_zero(), x == y);
    }

    #[test]
    fn modular_law(q in arb_q(), seed in any::<u64>(), a in 0usize..6, b in 0usize..6) {
        let field = field_for_order(q).unwrap();
        let mut rng = TrialRng::seed_from_u64(seed);
        let u = sample_uniform_matrix(&field, a, 6, &mut rng).row_space();
        let v = sample_uniform_matrix(&field, b, 6, &mut rng).row_space();
        let meet = u.intersection(&v).unwrap();
        prop_assert_eq!(meet.dim(), u.intersect_dim(&v).unwrap());
        prop_assert_eq!(u.sum_dim(&v).unwrap() + meet.dim(), u.dim() + v.dim());
        for w in meet.basis() {
            prop_assert!(u.contains(w) && v.contains(w));
        }
    }

    #[test]
    fn pascal_identity(q in arb_q(), n in 1usize..16, k in 1usize..16) {
        prop_assume!(k <= n);
        let lhs = gaussian_binomial(q, n, k).unwrap();
        let upper = if k < n { gaussian_binomial(q, n - 1, k).unwrap() } else { BigUint::zero() };
        let rhs = gaussian_binomial(q, n - 1, k - 1).unwrap() + num_traits::pow(BigUint::from(q), k) * upper;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_counts_partition_the_space(q in arb_q(), m in 1usize..8, n in 1usize..8) {
        let total: BigUint = (0..=m.min(n)).map(|r| rank_count(q, m, n, r).unwrap()).sum();
        prop_assert_eq!(total, num_traits::pow(BigUint::from(q), m * n));
        for r in 0..=m.min(n) {
            prop_assert_eq!(rank_count(q, m, n, r).unwrap(), rank_count(q, n, m, r).unwrap());
        }
    }

    #[test]
    fn ball_samples_stay_in_ball(q in arb_q(), seed in any::<u64>(), r in 0usize..4) {
        let field = field_for_order(q).unwrap();
        let spec = BallSpec::with_radius(q, 5, 3, r.min(3)).unwrap();
        let mut rng = TrialRng::seed_from_u64(seed);
        for _ in 0..8 {
            prop_assert!(sample_ball_uniform(&field, &spec, &mut rng).unwrap().rank() <= r.min(3));
        }
    }

    #[test]
    fn random_linear_codes_respect_singleton(q in prop::sample::select(vec![2u64, 3]), seed in any::<u64>(), k in 1usize..5) {
        let field = field_for_order(q).unwrap();
        let mut rng = TrialRng::seed_from_u64(seed);
        let space = sample_random_linear_code(&field, 3, 2, k, &mut rng).unwrap();
        prop_assert_eq!(space.dim(), k);
        let code = RankCode::linear(field, 3, 2, space).unwrap();
        let d = min_rank_distance(&code).unwrap();
        prop_assert!(singleton_check(q, 3, 2, &code.size(), d).unwrap());
        prop_assert!(code.size() <= num_traits::pow(BigUint::from(q), 3 * (2 - d + 1)));
        prop_assert!(!code.size().is_zero() && code.size() > BigUint::one());
    }

    #[test]
    fn matrix_text_round_trip(x in arb_matrix(7, 3, 2)) {
        let text = x.to_string();
        let back = Matrix::parse_text(&text).unwrap();
        prop_assert_eq!(back.data(), x.data());
    }

    #[test]
    fn greedy_chains_are_c_increasing(words in prop::collection::vec(0u64..81, 1..30), c in 1usize..3) {
        let set: Vec<VectorQ> = words.iter().map(|&i| VectorQ::from_index(3, 4, i)).collect();
        let chain = greedy_chain(&set, c);
        prop_assert!(is_c_increasing(&chain, c).unwrap());
        let distinct: HashSet<&VectorQ> = set.iter().collect();
        prop_assert!(chain.iter().all(|v| distinct.contains(v)));
    }
}
