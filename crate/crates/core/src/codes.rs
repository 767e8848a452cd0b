//! Rank-metric codes: rate, minimum distance, and list-decodability checks.
//!
//! Membership in a ball is always decided on integer ranks: `X ∈ B_R(Y, ρ)`
//! iff `rank(X − Y) ≤ ⌊ρn⌋`.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::counting::{ball_volume, BallSpec};
use crate::gf::Field;
use crate::matgf::{
    parse_numbers, rank_gf2_words, read_matrix, vector_to_matrix, Matrix, Subspace,
};
use crate::sampling::{sample_uniform_matrix, universe_size};
use crate::{BigCount, Error, Rational, Result};

/// Largest codeword or ball enumeration performed by decoding routines.
pub const ENUMERATION_LIMIT: u64 = 1 << 22;
/// Largest number of centers visited by the exhaustive list-decodability check.
pub const CENTER_LIMIT: u64 = 1 << 20;
/// Largest general code handled by the pairwise minimum-distance scan.
pub const PAIRWISE_LIMIT: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeKind {
    /// Subspace of F_q^{mn}; basis rows are m×n matrices in row-major order.
    Linear(Subspace),
    /// Explicit, duplicate-free, canonically sorted codeword list.
    General(Vec<Matrix>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCode {
    field: Field,
    m: usize,
    n: usize,
    kind: CodeKind,
}

fn check_shape(m: usize, n: usize) -> Result<()> {
    if n == 0 || m < n {
        return Err(Error::InvalidParameter(format!(
            "codes need m >= n >= 1 (transpose the matrices), got {m}x{n}"
        )));
    }
    Ok(())
}

impl RankCode {
    pub fn linear(field: Field, m: usize, n: usize, space: Subspace) -> Result<Self> {
        check_shape(m, n)?;
        if space.ambient_dim() != m * n || space.field().q() != field.q() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of F_{}^{} is not a code in F_{}^({m}x{n})",
                space.field().q(),
                space.ambient_dim(),
                field.q()
            )));
        }
        Ok(RankCode {
            field,
            m,
            n,
            kind: CodeKind::Linear(space),
        })
    }

    /// Linear code spanned by the given matrices, which must be independent.
    pub fn linear_from_basis(field: Field, m: usize, n: usize, basis: &[Matrix]) -> Result<Self> {
        for b in basis {
            if b.rows() != m || b.cols() != n || b.field().q() != field.q() {
                return Err(Error::DimensionMismatch(
                    "basis matrix has the wrong shape or field".into(),
                ));
            }
        }
        let space = Subspace::from_vectors(
            field.clone(),
            m * n,
            basis.iter().map(|b| b.data().to_vec()).collect(),
        );
        if space.dim() != basis.len() {
            return Err(Error::InvalidParameter(
                "basis matrices are linearly dependent".into(),
            ));
        }
        RankCode::linear(field, m, n, space)
    }

    pub fn general(field: Field, m: usize, n: usize, mut words: Vec<Matrix>) -> Result<Self> {
        check_shape(m, n)?;
        for w in &words {
            if w.rows() != m || w.cols() != n || w.field().q() != field.q() {
                return Err(Error::DimensionMismatch(
                    "codeword has the wrong shape or field".into(),
                ));
            }
        }
        words.sort();
        let before = words.len();
        words.dedup();
        if words.len() != before {
            return Err(Error::InvalidParameter("duplicate codewords".into()));
        }
        Ok(RankCode {
            field,
            m,
            n,
            kind: CodeKind::General(words),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &CodeKind {
        &self.kind
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, CodeKind::Linear(_))
    }

    pub fn size(&self) -> BigCount {
        match &self.kind {
            CodeKind::Linear(s) => num_traits::pow(BigUint::from(self.field.q()), s.dim()),
            CodeKind::General(w) => BigUint::from(w.len()),
        }
    }

    pub fn contains(&self, x: &Matrix) -> bool {
        if x.rows() != self.m || x.cols() != self.n || x.field().q() != self.field.q() {
            return false;
        }
        match &self.kind {
            CodeKind::Linear(s) => s.contains(x.data()),
            CodeKind::General(w) => w.binary_search(x).is_ok(),
        }
    }

    /// All codewords, guarded by [`ENUMERATION_LIMIT`].
    pub fn codewords(&self) -> Result<Vec<Matrix>> {
        match &self.kind {
            CodeKind::General(w) => Ok(w.clone()),
            CodeKind::Linear(s) => {
                let total = guard_power(
                    self.field.q() as u64,
                    s.dim(),
                    ENUMERATION_LIMIT,
                    "codewords q^k",
                )?;
                Ok((0..total)
                    .map(|i| vector_to_matrix(&self.field, self.m, self.n, &s.combination(i)))
                    .collect())
            }
        }
    }

    /// Reads the code file format: header `q m n k linear|general`, then k matrices.
    pub fn read<R: BufRead>(reader: R) -> Result<RankCode> {
        let mut lines = reader.lines();
        let header = loop {
            match lines.next() {
                Some(line) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break line;
                    }
                }
                None => return Err(Error::Parse("empty code file".into())),
            }
        };
        let mut parts = header.split_whitespace();
        let nums = parse_numbers(&parts.by_ref().take(4).collect::<Vec<_>>().join(" "))?;
        let variant = parts.next().unwrap_or("");
        let [q, m, n, k] = nums[..] else {
            return Err(Error::Parse(format!(
                "code header must be `q m n k linear|general`, got {header:?}"
            )));
        };
        let field = crate::matgf::field_for_order(q)?;
        let (m, n) = (m as usize, n as usize);
        let mut mats = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let x = read_matrix(&mut lines, Some(&field))?;
            if x.rows() != m || x.cols() != n {
                return Err(Error::Parse(format!(
                    "matrix of shape {}x{} in a {m}x{n} code",
                    x.rows(),
                    x.cols()
                )));
            }
            mats.push(x);
        }
        match variant {
            "linear" => RankCode::linear_from_basis(field, m, n, &mats),
            "general" => RankCode::general(field, m, n, mats),
            other => Err(Error::Parse(format!("unknown code variant {other:?}"))),
        }
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let (variant, mats): (&str, Vec<Matrix>) = match &self.kind {
            CodeKind::Linear(s) => (
                "linear",
                s.basis()
                    .iter()
                    .map(|b| vector_to_matrix(&self.field, self.m, self.n, b))
                    .collect(),
            ),
            CodeKind::General(w) => ("general", w.clone()),
        };
        writeln!(
            out,
            "{} {} {} {} {}",
            self.field.q(),
            self.m,
            self.n,
            mats.len(),
            variant
        )?;
        for x in mats {
            write!(out, "{x}")?;
        }
        Ok(())
    }
}

fn guard_power(q: u64, e: usize, limit: u64, what: &'static str) -> Result<u64> {
    universe_size(q, e)
        .filter(|&t| t <= limit)
        .ok_or_else(|| Error::GuardExceeded {
            what,
            needed: format!("{q}^{e}"),
            limit,
        })
}

/// Rate of a code. Exact when |C| is a power of q, otherwise a rational
/// approximation of `log_q|C| / mn` to nine decimal places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeRate {
    pub code_size: BigCount,
    pub mn: usize,
    pub exact: Option<Rational>,
    pub approx: Rational,
}

pub fn code_rate(code: &RankCode) -> Result<CodeRate> {
    let size = code.size();
    if size.is_zero() {
        return Err(Error::Empty("rate of an empty code"));
    }
    let mn = code.m * code.n;
    let q = BigUint::from(code.field.q());
    let mut exact = None;
    if let CodeKind::Linear(s) = &code.kind {
        exact = Some(Rational::new(BigInt::from(s.dim()), BigInt::from(mn)));
    } else {
        let mut p = BigUint::one();
        let mut e = 0usize;
        while p < size {
            p *= &q;
            e += 1;
        }
        if p == size {
            exact = Some(Rational::new(BigInt::from(e), BigInt::from(mn)));
        }
    }
    let approx = match &exact {
        Some(r) => r.clone(),
        None => {
            let log = size.bits() as f64; // fallback scale for huge sizes
            let value = size
                .to_f64()
                .map(|s| s.ln() / (code.field.q() as f64).ln())
                .unwrap_or(log / (code.field.q() as f64).log2())
                / mn as f64;
            let scale = 1_000_000_000i64;
            Rational::new(
                BigInt::from((value * scale as f64).round() as i64),
                BigInt::from(scale),
            )
        }
    };
    Ok(CodeRate {
        code_size: size,
        mn,
        exact,
        approx,
    })
}

/// Unnormalized minimum rank distance.
pub fn min_rank_distance(code: &RankCode) -> Result<usize> {
    if code.size() < BigUint::from(2u32) {
        return Err(Error::Empty(
            "minimum distance needs at least two codewords",
        ));
    }
    match &code.kind {
        CodeKind::Linear(_) => {
            let words = code.codewords()?;
            Ok(words
                .iter()
                .filter(|w| !w.is_zero())
                .map(Matrix::rank)
                .min()
                .expect("dim >= 1"))
        }
        CodeKind::General(words) => {
            if words.len() > PAIRWISE_LIMIT {
                return Err(Error::GuardExceeded {
                    what: "pairwise distance scan",
                    needed: words.len().to_string(),
                    limit: PAIRWISE_LIMIT as u64,
                });
            }
            let mut best = code.n;
            for (i, x) in words.iter().enumerate() {
                for y in &words[i + 1..] {
                    best = best.min(x.sub(y)?.rank());
                }
            }
            Ok(best)
        }
    }
}

/// Normalized minimum distance `min rank / n`.
pub fn min_rank_distance_normalized(code: &RankCode) -> Result<Rational> {
    Ok(Rational::new(
        BigInt::from(min_rank_distance(code)?),
        BigInt::from(code.n),
    ))
}

/// Every matrix of rank at most `r` in F_q^{m×n}.
///
/// Small spaces are scanned directly. Otherwise each rank-s matrix is built
/// once as `B·C`, where the columns of `B` are the canonical basis of its
/// column space and `C` is a full-row-rank s×n coefficient matrix.
pub fn enumerate_ball(field: &Field, m: usize, n: usize, r: usize) -> Result<Vec<Matrix>> {
    let q = field.q() as u64;
    let spec = BallSpec::with_radius(q, m, n, r.min(n))?;
    let volume = ball_volume(&spec);
    if volume > BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::GuardExceeded {
            what: "ball volume",
            needed: volume.to_string(),
            limit: ENUMERATION_LIMIT,
        });
    }
    if let Some(total) = universe_size(q, m * n).filter(|&t| t <= ENUMERATION_LIMIT) {
        let mut out: Vec<Matrix> = (0..total)
            .map(|i| Matrix::from_index(field.clone(), m, n, i))
            .filter(|x| x.rank() <= r)
            .collect();
        out.sort();
        return Ok(out);
    }
    let mut out = vec![Matrix::zeros(field.clone(), m, n)];
    for s in 1..=r.min(n) {
        let coeffs: Vec<Matrix> = {
            let total = guard_power(q, s * n, ENUMERATION_LIMIT, "coefficient matrices q^(sn)")?;
            (0..total)
                .map(|i| Matrix::from_index(field.clone(), s, n, i))
                .filter(|c| c.rank() == s)
                .collect()
        };
        for u in Subspace::enumerate_all(field.clone(), m, s) {
            let b = u.basis_matrix().expect("s >= 1").transpose();
            for c in &coeffs {
                out.push(b.mul(c)?);
            }
        }
    }
    out.sort();
    Ok(out)
}

enum Strategy {
    /// Scan codewords; packed binary rows when available.
    Codewords {
        words: Vec<Matrix>,
        packed: Option<Vec<Vec<u64>>>,
    },
    /// Scan `Y + Z` for Z in the ball around zero.
    Ball {
        offsets: Vec<Matrix>,
        /// Binary matrices with mn ≤ 64 as bit masks: offsets and the codeword set.
        packed: Option<(Vec<u64>, HashSet<u64>)>,
    },
}

/// Precomputed list decoder for one code and radius.
pub struct ListDecoder<'a> {
    code: &'a RankCode,
    r_max: usize,
    strategy: Strategy,
}

fn pack_bits(x: &Matrix) -> u64 {
    x.data()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
}

fn pack_rows(x: &Matrix) -> Vec<u64> {
    (0..x.rows())
        .map(|i| {
            x.row(i)
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j))
        })
        .collect()
}

impl<'a> ListDecoder<'a> {
    /// Picks whichever of the code and the ball is smaller to enumerate.
    pub fn new(code: &'a RankCode, spec: &BallSpec) -> Result<Self> {
        if spec.q != code.field.q() as u64 || spec.m != code.m || spec.n != code.n {
            return Err(Error::DimensionMismatch(
                "ball parameters do not match the code".into(),
            ));
        }
        let size = code.size();
        let volume = ball_volume(spec);
        let limit = BigUint::from(ENUMERATION_LIMIT);
        if (&size).min(&volume) > &limit {
            return Err(Error::GuardExceeded {
                what: "list decoding enumeration",
                needed: (&size).min(&volume).to_string(),
                limit: ENUMERATION_LIMIT,
            });
        }
        let strategy = if size <= volume {
            let words = code.codewords()?;
            let packed = (code.field.q() == 2 && code.n <= 64)
                .then(|| words.iter().map(pack_rows).collect());
            Strategy::Codewords { words, packed }
        } else {
            let offsets = enumerate_ball(&code.field, code.m, code.n, spec.r_max)?;
            let packed = if code.field.q() == 2 && code.m * code.n <= 64 && size <= limit {
                let words = code.codewords()?;
                Some((
                    offsets.iter().map(pack_bits).collect(),
                    words.iter().map(pack_bits).collect(),
                ))
            } else {
                None
            };
            Strategy::Ball { offsets, packed }
        };
        Ok(ListDecoder {
            code,
            r_max: spec.r_max,
            strategy,
        })
    }

    pub fn enumerates_codewords(&self) -> bool {
        matches!(self.strategy, Strategy::Codewords { .. })
    }

    fn check_center(&self, y: &Matrix) -> Result<()> {
        if y.rows() != self.code.m
            || y.cols() != self.code.n
            || y.field().q() != self.code.field.q()
        {
            return Err(Error::DimensionMismatch(
                "center has the wrong shape or field".into(),
            ));
        }
        Ok(())
    }

    /// Codewords within rank distance `r_max` of `y`, canonically sorted.
    pub fn decode(&self, y: &Matrix) -> Result<Vec<Matrix>> {
        self.check_center(y)?;
        let mut out = match &self.strategy {
            Strategy::Codewords { words, .. } => words
                .iter()
                .filter(|x| x.sub(y).map(|d| d.rank() <= self.r_max).unwrap_or(false))
                .cloned()
                .collect(),
            Strategy::Ball { offsets, .. } => offsets
                .iter()
                .map(|z| y.add(z).expect("same shape"))
                .filter(|x| self.code.contains(x))
                .collect::<Vec<_>>(),
        };
        out.sort();
        Ok(out)
    }

    /// `|B_R(y, ρ) ∩ C|` without materializing the list.
    pub fn count(&self, y: &Matrix) -> Result<usize> {
        self.check_center(y)?;
        Ok(match &self.strategy {
            Strategy::Codewords {
                packed: Some(packed),
                ..
            } => {
                let center = pack_rows(y);
                let mut scratch = vec![0u64; center.len()];
                packed
                    .iter()
                    .filter(|w| {
                        for ((s, a), b) in scratch.iter_mut().zip(w.iter()).zip(&center) {
                            *s = a ^ b;
                        }
                        rank_gf2_words(&mut scratch) <= self.r_max
                    })
                    .count()
            }
            Strategy::Codewords { words, .. } => words
                .iter()
                .filter(|x| x.sub(y).map(|d| d.rank() <= self.r_max).unwrap_or(false))
                .count(),
            Strategy::Ball {
                packed: Some((offsets, words)),
                ..
            } => {
                let center = pack_bits(y);
                offsets
                    .iter()
                    .filter(|&&z| words.contains(&(center ^ z)))
                    .count()
            }
            Strategy::Ball { offsets, .. } => offsets
                .iter()
                .filter(|z| self.code.contains(&y.add(z).expect("same shape")))
                .count(),
        })
    }
}

/// The codewords within normalized distance ρ of `y`.
pub fn list_decode(code: &RankCode, y: &Matrix, rho: &Rational) -> Result<Vec<Matrix>> {
    let spec = BallSpec::new(code.field.q() as u64, code.m, code.n, rho)?;
    ListDecoder::new(code, &spec)?.decode(y)
}

/// Exhaustive check over every center. Returns the first (lowest-index) center
/// whose ball holds more than `list_bound` codewords, if any.
pub fn is_list_decodable_exact(
    code: &RankCode,
    spec: &BallSpec,
    list_bound: usize,
) -> Result<(bool, Option<Matrix>)> {
    let total = guard_power(
        code.field.q() as u64,
        code.m * code.n,
        CENTER_LIMIT,
        "centers q^(mn)",
    )?;
    let decoder = ListDecoder::new(code, spec)?;
    let witness = (0..total).into_par_iter().find_first(|&i| {
        let y = Matrix::from_index(code.field.clone(), code.m, code.n, i);
        decoder.count(&y).map(|c| c > list_bound).unwrap_or(false)
    });
    Ok(match witness {
        Some(i) => (
            false,
            Some(Matrix::from_index(code.field.clone(), code.m, code.n, i)),
        ),
        None => (true, None),
    })
}

/// Largest list over every center.
pub fn max_list_size_exhaustive(code: &RankCode, spec: &BallSpec) -> Result<usize> {
    let total = guard_power(
        code.field.q() as u64,
        code.m * code.n,
        CENTER_LIMIT,
        "centers q^(mn)",
    )?;
    let decoder = ListDecoder::new(code, spec)?;
    Ok((0..total)
        .into_par_iter()
        .map(|i| {
            let y = Matrix::from_index(code.field.clone(), code.m, code.n, i);
            decoder.count(&y).unwrap_or(0)
        })
        .max()
        .unwrap_or(0))
}

/// Largest list over `centers` uniform centers drawn from `rng`; a lower bound on the true maximum.
pub fn max_list_size_monte_carlo<R: Rng + ?Sized>(
    code: &RankCode,
    spec: &BallSpec,
    centers: usize,
    rng: &mut R,
) -> Result<usize> {
    let decoder = ListDecoder::new(code, spec)?;
    let mut best = 0;
    for _ in 0..centers {
        let y = sample_uniform_matrix(&code.field, code.m, code.n, rng);
        best = best.max(decoder.count(&y)?);
    }
    Ok(best)
}

/// Parameters of the list-decoding statement for random linear codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodingParams {
    pub rho: Rational,
    pub epsilon: Rational,
    /// Aspect ratio n/m.
    pub b: Rational,
    /// `(1 − ρ)(1 − bρ)`.
    pub capacity: Rational,
    /// `capacity − ε`.
    pub rate: Rational,
    pub list_bound: u64,
}

impl DecodingParams {
    pub fn new(
        m: usize,
        n: usize,
        rho: &Rational,
        epsilon: &Rational,
        list_bound: u64,
    ) -> Result<Self> {
        check_shape(m, n)?;
        if *rho <= Rational::zero() || *rho >= Rational::one() {
            return Err(Error::OutOfRange("rho must lie in (0, 1)".into()));
        }
        if *epsilon <= Rational::zero() {
            return Err(Error::OutOfRange("epsilon must be positive".into()));
        }
        if list_bound == 0 {
            return Err(Error::OutOfRange("list bound must be at least 1".into()));
        }
        let one = Rational::one();
        let b = Rational::new(BigInt::from(n), BigInt::from(m));
        let capacity = (&one - rho) * (&one - &b * rho);
        let rate = &capacity - epsilon;
        Ok(DecodingParams {
            rho: rho.clone(),
            epsilon: epsilon.clone(),
            b,
            capacity,
            rate,
            list_bound,
        })
    }

    /// Code dimension `⌊R·mn⌋`, clamped at zero.
    pub fn dimension(&self, m: usize, n: usize) -> usize {
        let k = (&self.rate * Rational::from_integer(BigInt::from(m * n)))
            .floor()
            .to_integer();
        k.to_usize().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::ball_volume;
    use crate::gf::build_field;
    use crate::sampling::{sample_random_linear_code, SeedSpec};

    fn f2() -> Field {
        build_field(2, 1).unwrap()
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    /// span{I, J} in F_2^{2x2}, where J is the all-ones matrix (rank 1 over F_2).
    fn identity_ones_code() -> RankCode {
        let f = f2();
        let id = Matrix::identity(f.clone(), 2);
        let ones = Matrix::from_rows(f.clone(), &[vec![1, 1], vec![1, 1]]).unwrap();
        RankCode::linear_from_basis(f, 2, 2, &[id, ones]).unwrap()
    }

    /// span{I, A} with A the companion matrix of x^2 + x + 1: a copy of F_4, so d = 2.
    fn mrd_code() -> RankCode {
        let f = f2();
        let id = Matrix::identity(f.clone(), 2);
        let a = Matrix::from_rows(f.clone(), &[vec![0, 1], vec![1, 1]]).unwrap();
        RankCode::linear_from_basis(f, 2, 2, &[id, a]).unwrap()
    }

    #[test]
    fn rate_examples() {
        let f = f2();
        let full = RankCode::linear(f.clone(), 2, 2, Subspace::full(f.clone(), 4)).unwrap();
        assert_eq!(code_rate(&full).unwrap().exact, Some(Rational::one()));
        let zero = RankCode::linear(f.clone(), 2, 2, Subspace::zero(f.clone(), 4)).unwrap();
        assert_eq!(code_rate(&zero).unwrap().exact, Some(Rational::zero()));
        assert_eq!(
            code_rate(&identity_ones_code()).unwrap().exact,
            Some(half())
        );
        let three = RankCode::general(
            f.clone(),
            2,
            2,
            (0..3)
                .map(|i| Matrix::from_index(f.clone(), 2, 2, i))
                .collect(),
        )
        .unwrap();
        let r = code_rate(&three).unwrap();
        assert!(r.exact.is_none());
        let approx = crate::fraction::ratio_to_f64(&r.approx);
        assert!((approx - 3f64.log2() / 4.0).abs() < 1e-9);
        let empty = RankCode::general(f, 2, 2, vec![]).unwrap();
        assert!(code_rate(&empty).is_err());
    }

    fn singleton_check_holds(code: &RankCode, d: usize) -> bool {
        crate::counting::singleton_check(2, code.m(), code.n(), &code.size(), d).unwrap()
    }

    #[test]
    fn min_distance_examples() {
        let f = f2();
        let pair = RankCode::general(
            f.clone(),
            3,
            3,
            vec![
                Matrix::zeros(f.clone(), 3, 3),
                Matrix::identity(f.clone(), 3),
            ],
        )
        .unwrap();
        assert_eq!(min_rank_distance(&pair).unwrap(), 3);
        let full = RankCode::linear(f.clone(), 2, 2, Subspace::full(f.clone(), 4)).unwrap();
        assert_eq!(min_rank_distance(&full).unwrap(), 1);
        // J has rank 1 over F_2
        assert_eq!(min_rank_distance(&identity_ones_code()).unwrap(), 1);
        assert_eq!(min_rank_distance(&mrd_code()).unwrap(), 2);
        assert!(singleton_check_holds(&mrd_code(), 2));
        let single = RankCode::general(f.clone(), 2, 2, vec![Matrix::zeros(f, 2, 2)]).unwrap();
        assert!(min_rank_distance(&single).is_err());
    }

    #[test]
    fn list_decode_examples() {
        let f = f2();
        let code = identity_ones_code();
        let id = Matrix::identity(f.clone(), 2);
        assert!(list_decode(&code, &id, &Rational::new(1.into(), 4.into()))
            .unwrap()
            .contains(&id));
        let zero_code =
            RankCode::general(f.clone(), 2, 2, vec![Matrix::zeros(f.clone(), 2, 2)]).unwrap();
        assert!(list_decode(&zero_code, &id, &half()).unwrap().is_empty());
        let z = Matrix::zeros(f.clone(), 2, 2);
        assert_eq!(
            list_decode(&mrd_code(), &z, &half()).unwrap(),
            vec![z.clone()]
        );
        let ones = Matrix::from_rows(f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(list_decode(&code, &z, &half()).unwrap(), vec![z, ones]);
    }

    #[test]
    fn exact_checker_examples() {
        let f = f2();
        let spec = BallSpec::new(2, 2, 2, &half()).unwrap();
        // codewords at distance 2 = 1 + 1 share a radius-1 ball, e.g. around diag(1, 0)
        let (ok, witness) = is_list_decodable_exact(&mrd_code(), &spec, 1).unwrap();
        assert!(!ok);
        let w = witness.unwrap();
        assert!(list_decode(&mrd_code(), &w, &half()).unwrap().len() >= 2);
        let words = mrd_code().codewords().unwrap();
        let brute = (0..16)
            .map(|i| {
                let y = Matrix::from_index(f2(), 2, 2, i);
                words
                    .iter()
                    .filter(|x| x.sub(&y).unwrap().rank() <= 1)
                    .count()
            })
            .max()
            .unwrap();
        assert_eq!(brute, 3);
        assert_eq!(max_list_size_exhaustive(&mrd_code(), &spec).unwrap(), brute);
        assert!(!is_list_decodable_exact(&mrd_code(), &spec, 2).unwrap().0);
        assert!(is_list_decodable_exact(&mrd_code(), &spec, 3).unwrap().0);
        assert!(
            !is_list_decodable_exact(&identity_ones_code(), &spec, 1)
                .unwrap()
                .0
        );
        assert!(
            is_list_decodable_exact(&identity_ones_code(), &spec, 4)
                .unwrap()
                .0
        );
        let full = RankCode::linear(f.clone(), 2, 2, Subspace::full(f, 4)).unwrap();
        let v = ball_volume(&spec).to_usize().unwrap();
        let (ok, witness) = is_list_decodable_exact(&full, &spec, v - 1).unwrap();
        assert!(!ok);
        assert!(witness.unwrap().is_zero());
        assert!(is_list_decodable_exact(&full, &spec, v).unwrap().0);
    }

    #[test]
    fn both_strategies_agree() {
        let f = f2();
        let seeds = SeedSpec::new(17);
        let spec = BallSpec::new(2, 4, 3, &Rational::new(1.into(), 3.into())).unwrap();
        for (t, k) in [(0u64, 2usize), (1, 6), (2, 9), (3, 11)] {
            let space = sample_random_linear_code(&f, 4, 3, k, &mut seeds.rng(t)).unwrap();
            let code = RankCode::linear(f.clone(), 4, 3, space).unwrap();
            let decoder = ListDecoder::new(&code, &spec).unwrap();
            let words = code.codewords().unwrap();
            for i in (0..4096u64).step_by(37) {
                let y = Matrix::from_index(f.clone(), 4, 3, i);
                // independent direct loop over codewords
                let direct = words
                    .iter()
                    .filter(|x| x.sub(&y).unwrap().rank() <= 1)
                    .count();
                assert_eq!(decoder.count(&y).unwrap(), direct);
                assert_eq!(decoder.decode(&y).unwrap().len(), direct);
            }
        }
    }

    #[test]
    fn ball_enumeration_matches_volume() {
        let f = f2();
        for (m, n, r) in [(3usize, 3usize, 1usize), (4, 2, 1), (5, 5, 1), (6, 5, 2)] {
            let ball = enumerate_ball(&f, m, n, r).unwrap();
            let spec = BallSpec::with_radius(2, m, n, r).unwrap();
            assert_eq!(BigUint::from(ball.len()), ball_volume(&spec));
            assert!(ball.iter().all(|x| x.rank() <= r));
            let mut dedup = ball.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), ball.len());
        }
    }

    #[test]
    fn monte_carlo_bounded_by_exact() {
        let f = f2();
        let spec = BallSpec::new(2, 3, 3, &Rational::new(1.into(), 3.into())).unwrap();
        let space = sample_random_linear_code(&f, 3, 3, 4, &mut SeedSpec::new(5).rng(0)).unwrap();
        let code = RankCode::linear(f, 3, 3, space).unwrap();
        let exact = max_list_size_exhaustive(&code, &spec).unwrap();
        let mut rng = SeedSpec::new(5).rng(1);
        assert_eq!(
            max_list_size_monte_carlo(&code, &spec, 0, &mut rng).unwrap(),
            0
        );
        let mut prev = 0;
        for centers in [1, 10, 100, 1000] {
            let mc = max_list_size_monte_carlo(&code, &spec, centers, &mut SeedSpec::new(5).rng(1))
                .unwrap();
            assert!(mc >= prev && mc <= exact);
            prev = mc;
        }
    }

    #[test]
    fn code_file_round_trip() {
        let code = identity_ones_code();
        let mut buf = Vec::new();
        code.write(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("2 2 2 2 linear\n"));
        assert_eq!(RankCode::read(buf.as_slice()).unwrap(), code);
        assert!(RankCode::read("2 2 2 1 weird\n2 2 2\n1 0\n0 1\n".as_bytes()).is_err());
        assert!(
            RankCode::read("2 2 2 2 linear\n2 2 2\n1 0\n0 1\n2 2 2\n1 0\n0 1\n".as_bytes())
                .is_err()
        );
    }

    #[test]
    fn decoding_params() {
        let p = DecodingParams::new(
            4,
            4,
            &Rational::new(1.into(), 4.into()),
            &Rational::new(1.into(), 8.into()),
            10,
        )
        .unwrap();
        assert_eq!(p.capacity, Rational::new(9.into(), 16.into()));
        assert_eq!(p.rate, Rational::new(7.into(), 16.into()));
        assert_eq!(p.dimension(4, 4), 7);
        assert!(DecodingParams::new(3, 4, &half(), &half(), 1).is_err());
    }

    #[test]
    fn wide_codes_are_rejected() {
        let f = f2();
        assert!(RankCode::general(f, 2, 3, vec![]).is_err());
    }
}
