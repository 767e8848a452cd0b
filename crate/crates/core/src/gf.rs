//! Arithmetic in F_q for prime powers q = p^e.
//!
//! Elements are integers in `[0, q)` whose base-p digits are the coefficients
//! of a polynomial over F_p (digit i is the coefficient of x^i). Extension
//! fields are built modulo the lexicographically least monic irreducible
//! polynomial of degree e, comparing coefficients from the highest degree
//! down. That is the monic polynomial whose lower coefficients have the
//! smallest integer encoding, so the representation is fixed across runs.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Largest field order served from log/antilog tables.
pub const TABLE_LIMIT: u64 = 1 << 16;
/// Largest supported field order.
pub const ORDER_LIMIT: u64 = 1 << 31;

/// Shared handle to an immutable field description.
pub type Field = Arc<FieldSpec>;

#[derive(Clone)]
enum Backend {
    Tables { log: Vec<u32>, exp: Vec<u32> },
    OnTheFly,
}

#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Low-to-high coefficients of the monic modulus (length e + 1); empty for prime fields.
    modulus: Vec<u32>,
    backend: Backend,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("tables", &matches!(self.backend, Backend::Tables { .. }))
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for FieldSpec {}

/// An element tagged with the order of its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    q: u32,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn order(self) -> u32 {
        self.q
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds F_{p^e}, choosing table or on-the-fly multiplication by size.
pub fn build_field(p: u64, e: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::InvalidParameter(
            "extension degree must be >= 1".into(),
        ));
    }
    let q = (p as u128)
        .checked_pow(e)
        .filter(|&q| q <= ORDER_LIMIT as u128);
    let Some(q) = q else {
        return Err(Error::FieldTooLarge { p, e });
    };
    let modulus = if e == 1 {
        Vec::new()
    } else {
        least_irreducible(p, e)
    };
    let mut spec = FieldSpec {
        p: p as u32,
        e,
        q: q as u32,
        modulus,
        backend: Backend::OnTheFly,
    };
    if q as u64 <= TABLE_LIMIT && q > 2 {
        spec.backend = spec.build_tables();
    }
    Ok(Arc::new(spec))
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn uses_tables(&self) -> bool {
        matches!(self.backend, Backend::Tables { .. })
    }

    fn build_tables(&self) -> Backend {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (2..self.q)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, order / r) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; self.q as usize - 1];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, generator);
        }
        Backend::Tables { log, exp }
    }

    // ---- raw arithmetic on encodings ----

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            let s = a as u64 + b as u64;
            return (s % self.p as u64) as u32;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let p = self.p;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = a % p;
            out += ((p - d) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.backend {
            Backend::Tables { log, exp } => {
                let s = log[a as usize] as usize + log[b as usize] as usize;
                let n = exp.len();
                exp[if s >= n { s - n } else { s }]
            }
            Backend::OnTheFly => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse; panics on zero. Use [`FieldSpec::fe_inv`] for a checked version.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match &self.backend {
            Backend::Tables { log, exp } => {
                let n = exp.len();
                exp[(n - log[a as usize] as usize) % n]
            }
            Backend::OnTheFly => self.pow_slow(a, self.q as u64 - 2),
        }
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        match &self.backend {
            Backend::Tables { log, exp } if a != 0 => {
                let n = exp.len() as u64;
                exp[((log[a as usize] as u64 * (k % n)) % n) as usize]
            }
            _ => self.pow_slow(a, k),
        }
    }

    fn pow_slow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if self.p == 2 {
            // carry-less product, then reduce by the modulus
            let mut prod: u64 = 0;
            for i in 0..self.e {
                if (b >> i) & 1 == 1 {
                    prod ^= (a as u64) << i;
                }
            }
            let modbits: u64 = self
                .modulus
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| acc | ((c as u64) << i));
            let e = self.e as i32;
            for deg in (e..2 * e - 1).rev() {
                if (prod >> deg) & 1 == 1 {
                    prod ^= modbits << (deg - e);
                }
            }
            return prod as u32;
        }
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let prod = poly_mul(&da, &db, p);
        let rem = poly_rem(
            &prod,
            &self.modulus.iter().map(|&c| c as u64).collect::<Vec<_>>(),
            p,
        );
        self.encode_digits(&rem)
    }

    fn digits(&self, mut a: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            out.push((a % self.p) as u64);
            a /= self.p;
        }
        out
    }

    fn encode_digits(&self, digits: &[u64]) -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p as u64 + d) as u32
    }

    // ---- checked element API ----

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.q as u64 {
            return Err(Error::ElementOutOfRange { value, q: self.q });
        }
        Ok(FieldElement {
            value: value as u32,
            q: self.q,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            q: self.q,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            q: self.q,
        }
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if a.q != self.q {
            return Err(Error::FieldMismatch {
                left: self.q,
                right: a.q,
            });
        }
        Ok(())
    }

    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement { value, q: self.q }
    }

    pub fn fe_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.add(a.value, b.value)))
    }

    pub fn fe_sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.sub(a.value, b.value)))
    }

    pub fn fe_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul(a.value, b.value)))
    }

    pub fn fe_inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.value == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.wrap(self.inv(a.value)))
    }
}

// ---- polynomials over F_p, coefficient vectors low to high ----

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small
    let mut base = a % p;
    let mut k = p - 2;
    let mut acc = 1u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let f = trim(f.to_vec());
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p);
    while r.len() > df {
        let shift = r.len() - 1 - df;
        let coef = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in f.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - coef * c % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod f` by repeated p-th powering.
fn frobenius_power(f: &[u64], p: u64, k: u32) -> Vec<u64> {
    let mut x = poly_rem(&[0, 1], f, p);
    for _ in 0..k {
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_rem(&poly_mul(&acc, &base, p), f, p);
            }
            base = poly_rem(&poly_mul(&base, &base, p), f, p);
            e >>= 1;
        }
        x = acc;
    }
    x
}

/// Rabin's test for a monic polynomial of degree `e` over F_p.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let e = f.len() as u32 - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if e <= 3 {
        // a reducible cubic or quadratic has a linear factor
        return (0..p).all(|x| f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) != 0);
    }
    let x = vec![0u64, 1];
    if poly_sub(&frobenius_power(&f, p, e), &x, p) != Vec::<u64>::new() {
        return false;
    }
    prime_factors(e as u64).into_iter().all(|r| {
        let h = poly_sub(&frobenius_power(&f, p, e / r as u32), &x, p);
        poly_gcd(&f, &h, p).len() == 1
    })
}

fn least_irreducible(p: u64, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    for code in 0..count {
        let mut coeffs = Vec::with_capacity(e as usize + 1);
        let mut c = code;
        for _ in 0..e {
            coeffs.push(c % p);
            c /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields() -> Vec<Field> {
        [
            (2, 1),
            (3, 1),
            (2, 2),
            (5, 1),
            (2, 3),
            (7, 1),
            (3, 2),
            (2, 4),
        ]
        .iter()
        .map(|&(p, e)| build_field(p, e).unwrap())
        .collect()
    }

    #[test]
    fn build_examples() {
        let f2 = build_field(2, 1).unwrap();
        assert_eq!(f2.q(), 2);
        assert!(f2.modulus().is_empty());
        let f4 = build_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert!(matches!(build_field(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(
            build_field(2, 32),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn only_quadratic_over_f2_is_x2_x_1() {
        // exhaust the four monic quadratics x^2 + b x + c
        let irreducible: Vec<_> = (0..4u64)
            .map(|code| vec![code & 1, code >> 1, 1])
            .filter(|f| is_irreducible(f, 2))
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(build_field(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(build_field(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        // x^2 + 1 is irreducible over F_3 and has the smallest encoding
        assert_eq!(build_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // x^8 + x^4 + x^3 + x + 1 is the least degree-8 irreducible over F_2
        assert_eq!(
            build_field(2, 8).unwrap().modulus(),
            &[1, 1, 0, 1, 1, 0, 0, 0, 1]
        );
    }

    #[test]
    fn rabin_agrees_with_root_test_on_small_degree() {
        // degree 4 over F_2: x^4 + x^2 + 1 = (x^2 + x + 1)^2 has no roots but is reducible
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 1, 1, 1], 2));
    }

    #[test]
    fn element_examples() {
        let f2 = build_field(2, 1).unwrap();
        let f3 = build_field(3, 1).unwrap();
        let f4 = build_field(2, 2).unwrap();
        let e = |f: &Field, v| f.element(v).unwrap();
        assert_eq!(f2.fe_add(e(&f2, 1), e(&f2, 1)).unwrap().value(), 0);
        assert_eq!(f3.fe_add(e(&f3, 2), e(&f3, 2)).unwrap().value(), 1);
        // x = 2, x + 1 = 3
        assert_eq!(f4.fe_add(e(&f4, 2), e(&f4, 3)).unwrap().value(), 1);
        assert_eq!(f4.fe_mul(e(&f4, 2), e(&f4, 2)).unwrap().value(), 3);
        assert_eq!(f2.fe_inv(e(&f2, 1)).unwrap().value(), 1);
        assert_eq!(f3.fe_inv(e(&f3, 2)).unwrap().value(), 2);
        assert_eq!(f4.fe_inv(e(&f4, 2)).unwrap().value(), 3);
        assert!(matches!(f4.fe_inv(f4.zero()), Err(Error::ZeroInverse)));
        assert!(matches!(
            f4.fe_add(e(&f4, 1), e(&f2, 1)),
            Err(Error::FieldMismatch { .. })
        ));
        assert!(f4.element(4).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in fields() {
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.mul(a, 0), 0);
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                    assert_eq!(f.pow(a, q as u64 - 1), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn table_and_polynomial_backends_agree() {
        for (p, e) in [(2u64, 4u32), (3, 3), (2, 8), (5, 2)] {
            let f = build_field(p, e).unwrap();
            assert!(f.uses_tables());
            for a in 0..f.q() {
                for b in (0..f.q()).step_by(3) {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = build_field(2, 20).unwrap();
        assert!(!f.uses_tables());
        let mut x = 12345u32;
        for _ in 0..200 {
            assert_eq!(f.mul(x, f.inv(x)), 1);
            x = f.add(f.mul(x, 3), 7) % f.q();
            if x == 0 {
                x = 1;
            }
        }
        let g = build_field(65537, 1).unwrap();
        assert!(!g.uses_tables());
        assert_eq!(g.mul(65536, 65536), 1);
    }
}
