//! Reproducible uniform samplers for matrices, rank-metric balls, subspaces and codes.
//!
//! Trial `i` of an experiment with master seed `s` draws from a
//! xoshiro256++ generator seeded with `mix64(s ^ i)`, where `mix64` is the
//! SplitMix64 finalizer. Results therefore do not depend on the order in
//! which trials are scheduled.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::counting::{rank_count, BallSpec};
use crate::fraction::ratio_to_f64;
use crate::gf::Field;
use crate::matgf::{Matrix, Subspace};
use crate::{Error, Rational, Result};

/// Generator used for every trial stream.
pub type TrialRng = Xoshiro256PlusPlus;

/// Largest universe `q^{mn}` for which Bernoulli codes are materialized.
pub const RANDOM_CODE_LIMIT: u64 = 1 << 22;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedSpec {
    pub master_seed: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64) -> Self {
        SeedSpec { master_seed }
    }

    pub fn trial_seed(&self, trial_index: u64) -> u64 {
        mix64(self.master_seed ^ trial_index)
    }

    pub fn rng(&self, trial_index: u64) -> TrialRng {
        TrialRng::seed_from_u64(self.trial_seed(trial_index))
    }
}

pub fn sample_uniform_matrix<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    rng: &mut R,
) -> Matrix {
    let q = field.q();
    let data = (0..m * n).map(|_| rng.gen_range(0..q)).collect();
    Matrix::from_parts(field.clone(), m, n, data)
}

/// Uniform full-rank `rows × cols` matrix by rejection; also returns the number of draws.
pub fn sample_full_rank_with_attempts<R: Rng + ?Sized>(
    field: &Field,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> (Matrix, u32) {
    let target = rows.min(cols);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let x = sample_uniform_matrix(field, rows, cols, rng);
        if x.rank() == target {
            return (x, attempts);
        }
    }
}

pub fn sample_full_rank<R: Rng + ?Sized>(
    field: &Field,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Matrix {
    sample_full_rank_with_attempts(field, rows, cols, rng).0
}

/// Uniform over the rank-`r` matrices of F_q^{m×n}.
///
/// Draws `A` (m×r, full column rank) and `B` (r×n, full row rank) uniformly and
/// returns `A·B`; every rank-r matrix has exactly |GL_r(F_q)| such factorizations.
pub fn sample_uniform_rank_matrix<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    r: usize,
    rng: &mut R,
) -> Result<Matrix> {
    if r > m.min(n) {
        return Err(Error::OutOfRange(format!("rank {r} exceeds min({m}, {n})")));
    }
    if r == 0 {
        return Ok(Matrix::zeros(field.clone(), m, n));
    }
    let a = sample_full_rank(field, m, r, rng);
    let b = sample_full_rank(field, r, n, rng);
    a.mul(&b)
}

/// Exact sampler for the uniform distribution on `B_R(0, ρ)`.
#[derive(Clone, Debug)]
pub struct BallSampler {
    field: Field,
    spec: BallSpec,
    /// `cumulative[r]` = number of ball elements with rank ≤ r.
    cumulative: Vec<BigUint>,
}

impl BallSampler {
    pub fn new(field: &Field, spec: &BallSpec) -> Result<Self> {
        if field.q() as u64 != spec.q {
            return Err(Error::FieldMismatch {
                left: field.q(),
                right: spec.q as u32,
            });
        }
        let mut cumulative = Vec::with_capacity(spec.r_max + 1);
        let mut acc = BigUint::from(0u32);
        for r in 0..=spec.r_max {
            acc += rank_count(spec.q, spec.m, spec.n, r)?;
            cumulative.push(acc.clone());
        }
        Ok(BallSampler {
            field: field.clone(),
            spec: spec.clone(),
            cumulative,
        })
    }

    pub fn spec(&self) -> &BallSpec {
        &self.spec
    }

    pub fn volume(&self) -> &BigUint {
        self.cumulative.last().expect("at least rank 0")
    }

    /// Rank drawn with probability `N_q(r,m,n) / |B|` by exact inverse CDF.
    pub fn sample_rank<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.gen_biguint_below(self.volume());
        self.cumulative
            .iter()
            .position(|c| u < *c)
            .expect("u is below the total volume")
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix {
        let r = self.sample_rank(rng);
        sample_uniform_rank_matrix(&self.field, self.spec.m, self.spec.n, r, rng)
            .expect("r <= r_max <= n")
    }
}

/// One draw from the uniform distribution on the ball (distribution D1 for a single matrix).
pub fn sample_ball_uniform<R: Rng + ?Sized>(
    field: &Field,
    spec: &BallSpec,
    rng: &mut R,
) -> Result<Matrix> {
    Ok(BallSampler::new(field, spec)?.sample(rng))
}

/// Uniform `s`-dimensional subspace of F_q^m: the column span of a uniform full-rank m×s matrix.
pub fn sample_uniform_subspace<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    s: usize,
    rng: &mut R,
) -> Result<Subspace> {
    if s > m {
        return Err(Error::OutOfRange(format!(
            "subspace dimension {s} exceeds ambient {m}"
        )));
    }
    if s == 0 {
        return Ok(Subspace::zero(field.clone(), m));
    }
    Ok(sample_full_rank(field, m, s, rng).column_space())
}

pub fn sample_vector_from<R: Rng + ?Sized>(space: &Subspace, rng: &mut R) -> Vec<u32> {
    let f = space.field();
    let mut v = vec![0u32; space.ambient_dim()];
    for row in space.basis() {
        let c = rng.gen_range(0..f.q());
        if c == 0 {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(row) {
            *x = f.add(*x, f.mul(c, y));
        }
    }
    v
}

/// An m×n matrix whose columns are iid uniform vectors of a uniform `s`-dimensional subspace.
pub fn sample_d2_matrix<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    s: usize,
    rng: &mut R,
) -> Result<Matrix> {
    if s > m.min(n) {
        return Err(Error::OutOfRange(format!("s = {s} exceeds min({m}, {n})")));
    }
    let u = sample_uniform_subspace(field, m, s, rng)?;
    let mut x = Matrix::zeros(field.clone(), m, n);
    for j in 0..n {
        let col = sample_vector_from(&u, rng);
        for (i, v) in col.into_iter().enumerate() {
            x.set(i, j, v);
        }
    }
    Ok(x)
}

/// Independent pair from distribution D2 with subspace dimensions `(s1, s2)`.
pub fn sample_d2_pair<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    s1: usize,
    s2: usize,
    rng: &mut R,
) -> Result<(Matrix, Matrix)> {
    let x1 = sample_d2_matrix(field, m, n, s1, rng)?;
    let x2 = sample_d2_matrix(field, m, n, s2, rng)?;
    Ok((x1, x2))
}

/// Uniform `k`-dimensional subspace of F_q^{mn}; basis rows reshape to m×n matrices row-major.
pub fn sample_random_linear_code<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<Subspace> {
    let a = m * n;
    if k > a {
        return Err(Error::OutOfRange(format!(
            "code dimension {k} exceeds mn = {a}"
        )));
    }
    if k == 0 {
        return Ok(Subspace::zero(field.clone(), a));
    }
    Ok(sample_full_rank(field, k, a, rng).row_space())
}

/// Bernoulli random code: every matrix is kept independently with probability `q^{(R−1)mn}`.
/// The result is sorted canonically.
pub fn sample_random_code<R: Rng + ?Sized>(
    field: &Field,
    m: usize,
    n: usize,
    rate: &Rational,
    rng: &mut R,
) -> Result<Vec<Matrix>> {
    let r = ratio_to_f64(rate);
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange(format!("rate {r} outside [0, 1]")));
    }
    let q = field.q() as u64;
    let universe = universe_size(q, m * n).filter(|&u| u <= RANDOM_CODE_LIMIT);
    let Some(universe) = universe else {
        return Err(Error::GuardExceeded {
            what: "random code universe q^(mn)",
            needed: format!("{q}^{}", m * n),
            limit: RANDOM_CODE_LIMIT,
        });
    };
    let p = inclusion_probability(q, m, n, rate);
    let mut out: Vec<Matrix> = (0..universe)
        .filter(|_| rng.gen::<f64>() < p)
        .map(|idx| Matrix::from_index(field.clone(), m, n, idx))
        .collect();
    out.sort();
    Ok(out)
}

/// `q^{(R−1)mn}`, with the exponent formed exactly so integral exponents give exact powers.
pub fn inclusion_probability(q: u64, m: usize, n: usize, rate: &Rational) -> f64 {
    let e = (rate - Rational::one()) * Rational::from_integer(BigInt::from(m * n));
    if e.is_integer() {
        match e.to_integer().to_i32() {
            Some(k) => (q as f64).powi(k),
            None => 0.0,
        }
    } else {
        (q as f64).powf(ratio_to_f64(&e))
    }
}

/// `q^e` if it fits in a u64.
pub fn universe_size(q: u64, e: usize) -> Option<u64> {
    q.checked_pow(u32::try_from(e).ok()?)
}
