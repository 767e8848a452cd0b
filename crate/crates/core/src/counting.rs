//! Exact q-analog counting: matrices of given rank, rank-metric ball volumes,
//! Gaussian binomials, the constant K_q, and the Singleton bound.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::fraction::Fraction;
use crate::{BigCount, Error, Rational, Result};

fn pow(q: u64, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), e)
}

/// Radius data for a rank-metric ball in F_q^{m×n}, m ≥ n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSpec {
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub rho: Rational,
    /// `⌊rho · n⌋`: the largest rank inside the ball.
    pub r_max: usize,
}

impl BallSpec {
    /// Ball of normalized radius `rho ∈ (0, 1)`.
    pub fn new(q: u64, m: usize, n: usize, rho: &Rational) -> Result<Self> {
        check_shape(q, m, n)?;
        if *rho <= Rational::zero() || *rho >= Rational::one() {
            return Err(Error::OutOfRange(format!(
                "rho = {} must lie in (0, 1)",
                Fraction(rho.clone())
            )));
        }
        let r_max = Fraction(rho.clone()).floor_times(n) as usize;
        Ok(BallSpec {
            q,
            m,
            n,
            rho: rho.clone(),
            r_max,
        })
    }

    /// Ball of integer rank radius `r ∈ [0, n]`, with `rho = r / n`.
    pub fn with_radius(q: u64, m: usize, n: usize, r: usize) -> Result<Self> {
        check_shape(q, m, n)?;
        if r > n {
            return Err(Error::OutOfRange(format!("radius {r} exceeds n = {n}")));
        }
        Ok(BallSpec {
            q,
            m,
            n,
            rho: Rational::new(BigInt::from(r), BigInt::from(n)),
            r_max: r,
        })
    }

    /// True when the ball is the whole space.
    pub fn is_degenerate(&self) -> bool {
        self.r_max >= self.n
    }
}

fn check_shape(q: u64, m: usize, n: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q}")));
    }
    if n == 0 || m < n {
        return Err(Error::InvalidParameter(format!(
            "need m >= n >= 1 (transpose otherwise), got m = {m}, n = {n}"
        )));
    }
    Ok(())
}

/// `[n choose k]_q`, built by the integer recurrence `[n,t+1] = [n,t]·(q^{n−t} − 1)/(q^{t+1} − 1)`.
pub fn gaussian_binomial(q: u64, n: usize, k: usize) -> Result<BigCount> {
    if k > n {
        return Err(Error::OutOfRange(format!("k = {k} > n = {n}")));
    }
    let mut acc = BigUint::one();
    for t in 0..k {
        acc *= pow(q, n - t) - 1u32;
        acc /= pow(q, t + 1) - 1u32;
    }
    Ok(acc)
}

/// Number of m×n matrices over F_q of rank exactly r:
/// `[n choose r]_q · Π_{j<r} (q^m − q^j)`.
pub fn rank_count(q: u64, m: usize, n: usize, r: usize) -> Result<BigCount> {
    if r > m.min(n) {
        return Err(Error::OutOfRange(format!("rank {r} exceeds min({m}, {n})")));
    }
    let mut acc = gaussian_binomial(q, n, r)?;
    for j in 0..r {
        acc *= pow(q, m) - pow(q, j);
    }
    Ok(acc)
}

pub fn ball_volume(spec: &BallSpec) -> BigCount {
    (0..=spec.r_max)
        .map(|r| rank_count(spec.q, spec.m, spec.n, r).expect("r_max <= n"))
        .sum()
}

/// Rigorous enclosure `(lower, upper)` of `K_q = Π_{j≥1} (1 − q^{−j})`.
///
/// `upper` is the partial product over `terms` factors (the remaining factors
/// are below one); `lower` multiplies it by `1 − q^{−terms}/(q − 1)`, which
/// bounds the tail product from below.
pub fn kq_bounds(q: u64, terms: usize) -> Result<(Rational, Rational)> {
    if terms == 0 {
        return Err(Error::InvalidParameter(
            "kq_bounds needs at least one term".into(),
        ));
    }
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q}")));
    }
    let qi = BigInt::from(q);
    let mut partial = Rational::one();
    for j in 1..=terms {
        let den = num_traits::pow(qi.clone(), j);
        partial *= Rational::new(&den - 1, den);
    }
    let tail_den = num_traits::pow(qi.clone(), terms) * (&qi - 1);
    let tail = Rational::new(&tail_den - 1, tail_den);
    Ok((&partial * tail, partial))
}

/// Outcome of checking `q^{e} ≤ |B| ≤ 4·q^{e}` with `e = r_max(m + n − r_max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallBounds {
    pub lower: BigCount,
    pub volume: BigCount,
    pub upper: BigCount,
    pub holds: bool,
}

pub fn ball_volume_bounds(spec: &BallSpec) -> BallBounds {
    let r = spec.r_max;
    let lower = pow(spec.q, r * (spec.m + spec.n - r));
    let upper = &lower * 4u32;
    let volume = ball_volume(spec);
    let holds = lower <= volume && volume <= upper;
    BallBounds {
        lower,
        volume,
        upper,
        holds,
    }
}

/// Checks `K_q q^{k(n−k)} ≤ [n,k]_q ≤ K_q^{−1} q^{k(n−k)}` using only the enclosure,
/// so a `true` result is a proof for the exact constant.
pub fn gaussian_binomial_bounds_hold(q: u64, n: usize, k: usize, terms: usize) -> Result<bool> {
    let g = Rational::from_integer(BigInt::from(gaussian_binomial(q, n, k)?));
    let main = Rational::from_integer(BigInt::from(pow(q, k * (n - k))));
    let (_, kq_upper) = kq_bounds(q, terms)?;
    // K_q ≤ kq_upper, hence K_q·main ≤ kq_upper·main and main/K_q ≥ main/kq_upper
    Ok(&kq_upper * &main <= g && g <= &main / &kq_upper)
}

/// True iff `code_size ≤ q^{m(n − d + 1)}`.
pub fn singleton_check(q: u64, m: usize, n: usize, code_size: &BigCount, d: usize) -> Result<bool> {
    if d == 0 || d > n {
        return Err(Error::OutOfRange(format!(
            "minimum distance {d} not in [1, {n}]"
        )));
    }
    if code_size.is_zero() {
        return Err(Error::Empty("code must be non-empty"));
    }
    Ok(*code_size <= pow(q, m * (n - d + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraction::ratio_to_f64;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    #[test]
    fn rank_count_examples() {
        assert_eq!(rank_count(2, 2, 2, 0).unwrap(), big(1));
        assert_eq!(rank_count(2, 2, 2, 1).unwrap(), big(9));
        assert_eq!(rank_count(2, 2, 2, 2).unwrap(), big(6));
        assert!(rank_count(2, 2, 2, 3).is_err());
    }

    #[test]
    fn ball_examples() {
        assert_eq!(
            ball_volume(&BallSpec::new(2, 2, 2, &Rational::new(1.into(), 3.into())).unwrap()),
            big(1)
        );
        assert_eq!(
            ball_volume(&BallSpec::new(2, 2, 2, &half()).unwrap()),
            big(10)
        );
        assert_eq!(
            ball_volume(&BallSpec::with_radius(2, 2, 2, 2).unwrap()),
            big(16)
        );
        assert!(BallSpec::new(2, 2, 2, &Rational::one()).is_err());
        assert!(BallSpec::new(2, 2, 3, &half()).is_err());
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(2, 5, 0).unwrap(), big(1));
        assert_eq!(gaussian_binomial(2, 2, 1).unwrap(), big(3));
        assert_eq!(gaussian_binomial(2, 4, 2).unwrap(), big(35));
        assert!(gaussian_binomial(2, 2, 3).is_err());
    }

    #[test]
    fn kq_examples() {
        let (lo, hi) = kq_bounds(2, 64).unwrap();
        assert!(lo < hi);
        let mid = (ratio_to_f64(&lo) + ratio_to_f64(&hi)) / 2.0;
        assert!((mid - 0.2887).abs() < 1e-4, "K_2 ~ {mid}");
        assert!((mid - 0.288_788_095_086_602).abs() < 1e-12);
        for q in [2u64, 3, 4, 5, 7, 9, 16] {
            let (lo, hi) = kq_bounds(q, 16).unwrap();
            assert!(lo > Rational::zero() && hi < Rational::one());
            // K_q^{-1} < 4 certified by the lower end
            assert!(Rational::one() / lo < Rational::from_integer(4.into()));
        }
        let (_, hi3) = kq_bounds(3, 2).unwrap();
        assert_eq!(hi3, Rational::new(16.into(), 27.into()));
        let (lo3, _) = kq_bounds(3, 40).unwrap();
        assert!(ratio_to_f64(&lo3) > 0.56 && ratio_to_f64(&lo3) < 0.5602);
    }

    #[test]
    fn ball_bounds_examples() {
        let b = ball_volume_bounds(&BallSpec::new(2, 2, 2, &half()).unwrap());
        assert_eq!(
            (b.lower.clone(), b.volume.clone(), b.upper.clone()),
            (big(8), big(10), big(32))
        );
        assert!(b.holds);
        let b0 = ball_volume_bounds(
            &BallSpec::new(2, 3, 2, &Rational::new(1.into(), 4.into())).unwrap(),
        );
        assert_eq!((b0.lower, b0.volume, b0.upper), (big(1), big(1), big(4)));
    }

    #[test]
    fn singleton_examples() {
        assert!(singleton_check(2, 2, 2, &big(16), 1).unwrap());
        assert!(!singleton_check(2, 2, 2, &big(16), 2).unwrap());
        assert!(singleton_check(2, 2, 2, &big(4), 2).unwrap());
        assert!(singleton_check(2, 2, 2, &big(4), 0).is_err());
    }

    #[test]
    fn rank_counts_partition_the_space() {
        for q in [2u64, 3, 4, 5] {
            for n in 1..=5 {
                for m in n..=6 {
                    let total: BigUint = (0..=n).map(|r| rank_count(q, m, n, r).unwrap()).sum();
                    assert_eq!(total, pow(q, m * n));
                    for r in 0..=n {
                        assert_eq!(
                            rank_count(q, m, n, r).unwrap(),
                            rank_count(q, n, m, r).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gaussian_binomial_symmetry() {
        for q in [2u64, 3, 4] {
            for n in 0..=9 {
                for k in 0..=n {
                    assert_eq!(
                        gaussian_binomial(q, n, k).unwrap(),
                        gaussian_binomial(q, n, n - k).unwrap()
                    );
                }
            }
        }
    }
}
