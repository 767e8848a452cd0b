//! c-increasing sequences and a constructive q-ary Sauer–Shelah translate search.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

use crate::sampling::SeedSpec;
use crate::{Error, Result};

/// Translate counts up to this size are searched exhaustively.
pub const EXHAUSTIVE_TRANSLATES: u64 = 1 << 20;

/// A vector of F_q^ℓ with entries in the field encoding of [`crate::gf`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorQ {
    q: u32,
    entries: Vec<u32>,
}

fn characteristic(q: u32) -> u32 {
    (2..=q).find(|d| q % d == 0).unwrap_or(q)
}

/// Digit-wise sum in base p, which is addition in F_q for any prime power q = p^e.
fn add_encoded(q: u32, a: u32, b: u32) -> u32 {
    let p = characteristic(q);
    if p == q {
        return (a + b) % q;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    while place < q {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn neg_encoded(q: u32, a: u32) -> u32 {
    let p = characteristic(q);
    if p == q {
        return (q - a) % q;
    }
    let mut a = a;
    let mut out = 0;
    let mut place = 1;
    while place < q {
        out += ((p - a % p) % p) * place;
        a /= p;
        place *= p;
    }
    out
}

impl VectorQ {
    pub fn new(q: u32, entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&v| v >= q) {
            return Err(Error::ElementOutOfRange {
                value: bad as u64,
                q,
            });
        }
        Ok(VectorQ { q, entries })
    }

    /// Vector with base-q digits of `index`, most significant digit first.
    pub fn from_index(q: u32, len: usize, mut index: u64) -> Self {
        let mut entries = vec![0u32; len];
        for slot in entries.iter_mut().rev() {
            *slot = (index % q as u64) as u32;
            index /= q as u64;
        }
        VectorQ { q, entries }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add(&self, other: &VectorQ) -> VectorQ {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| add_encoded(self.q, a, b))
            .collect();
        VectorQ { q: self.q, entries }
    }

    pub fn neg(&self) -> VectorQ {
        let entries = self
            .entries
            .iter()
            .map(|&a| neg_encoded(self.q, a))
            .collect();
        VectorQ { q: self.q, entries }
    }

    /// Parses a line of base-q digits such as `0110` or `0 1 2`.
    pub fn parse(q: u32, line: &str) -> Result<VectorQ> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let digits: Result<Vec<u32>> = if tokens.len() > 1 {
            tokens
                .iter()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad digit {t:?}")))
                })
                .collect()
        } else {
            line.trim()
                .chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?}")))
                })
                .collect()
        };
        VectorQ::new(q, digits?)
    }
}

impl fmt::Display for VectorQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for d in &self.entries {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(u32::to_string).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A translate `w` and a chain of members of S such that `(v_i + w)` is c-increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCertificate {
    pub translate: VectorQ,
    pub chain: Vec<VectorQ>,
    pub c: usize,
}

impl ChainCertificate {
    pub fn translated_chain(&self) -> Vec<VectorQ> {
        self.chain.iter().map(|v| v.add(&self.translate)).collect()
    }

    /// Checks the certificate against the set it was built from.
    pub fn verify(&self, set: &[VectorQ]) -> Result<bool> {
        let members: BTreeSet<&VectorQ> = set.iter().collect();
        Ok(self.chain.iter().all(|v| members.contains(v))
            && is_c_increasing(&self.translated_chain(), self.c)?)
    }
}

pub fn is_c_increasing(seq: &[VectorQ], c: usize) -> Result<bool> {
    if c == 0 {
        return Err(Error::InvalidParameter("c must be at least 1".into()));
    }
    let Some(first) = seq.first() else {
        return Ok(true);
    };
    let len = first.len();
    if seq.iter().any(|v| v.len() != len) {
        return Err(Error::DimensionMismatch(
            "vectors of different lengths".into(),
        ));
    }
    let mut covered = vec![false; len];
    for v in seq {
        let fresh = v.support().into_iter().filter(|&i| !covered[i]).count();
        if fresh < c {
            return Ok(false);
        }
        for i in v.support() {
            covered[i] = true;
        }
    }
    Ok(true)
}

/// Greedy scan of `set` in canonical (sorted) order, keeping every vector
/// that adds at least `c` uncovered coordinates.
pub fn greedy_chain(set: &[VectorQ], c: usize) -> Vec<VectorQ> {
    let mut sorted: Vec<&VectorQ> = set.iter().collect();
    sorted.sort();
    sorted.dedup();
    let len = sorted.first().map_or(0, |v| v.len());
    let mut covered = vec![false; len];
    let mut chain = Vec::new();
    for v in sorted {
        let support = v.support();
        if c > 0 && support.iter().filter(|&&i| !covered[i]).count() >= c {
            for i in support {
                covered[i] = true;
            }
            chain.push(v.clone());
        }
    }
    chain
}

/// `max(0, ⌊(1/c) log_q(L/2) − (1 − 1/c) log_q((q−1)ℓ)⌋)`, evaluated as the largest
/// `k ≥ 0` with `2 · q^{ck} · ((q−1)ℓ)^{c−1} ≤ L`.
pub fn chain_guarantee(q: u64, ell: usize, list: u64, c: usize) -> u64 {
    if c == 0 || list == 0 {
        return 0;
    }
    let base = num_traits::pow(BigUint::from((q - 1) * ell as u64), c - 1) * 2u32;
    let l = BigUint::from(list);
    let step = num_traits::pow(BigUint::from(q), c);
    let mut k = 0u64;
    let mut lhs = &base * &step;
    while lhs <= l {
        k += 1;
        lhs *= &step;
    }
    k
}

/// Chain for the translate `w`, expressed through members of `set`.
fn chain_for_translate(set: &[VectorQ], w: &VectorQ, c: usize) -> Vec<VectorQ> {
    let mut shifted: Vec<(VectorQ, &VectorQ)> = set.iter().map(|v| (v.add(w), v)).collect();
    shifted.sort();
    shifted.dedup_by(|a, b| a.0 == b.0);
    let mut covered = vec![false; w.len()];
    let mut chain = Vec::new();
    for (t, v) in &shifted {
        let support = t.support();
        if support.iter().filter(|&&i| !covered[i]).count() >= c {
            for i in support {
                covered[i] = true;
            }
            chain.push((*v).clone());
        }
    }
    chain
}

/// Search mode for [`find_translate_chain`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslateSearch {
    /// Every translate in F_q^ℓ (requires q^ℓ ≤ 2^20).
    Exhaustive,
    /// The negated members of S plus `budget` random translates drawn from `seed`.
    Randomized { budget: usize, seed: u64 },
}

/// Finds a translate `w` maximizing the greedy chain length of `S + w`.
///
/// Ties go to the lexicographically least `w`, so the result does not depend
/// on how the search is parallelized. Fails if the best chain falls short of
/// [`chain_guarantee`].
pub fn find_translate_chain(
    set: &[VectorQ],
    c: usize,
    mode: TranslateSearch,
) -> Result<ChainCertificate> {
    let first = set
        .first()
        .ok_or(Error::Empty("translate search needs a non-empty set"))?;
    if c == 0 {
        return Err(Error::InvalidParameter("c must be at least 1".into()));
    }
    let q = first.q();
    let ell = first.len();
    if set.iter().any(|v| v.len() != ell || v.q() != q) {
        return Err(Error::DimensionMismatch(
            "set vectors differ in length or field".into(),
        ));
    }
    let distinct: BTreeSet<&VectorQ> = set.iter().collect();
    let list = distinct.len() as u64;
    let guarantee = chain_guarantee(q as u64, ell, list, c);

    let space = crate::sampling::universe_size(q as u64, ell);
    let best = match mode {
        TranslateSearch::Exhaustive => {
            let Some(total) = space.filter(|&s| s <= EXHAUSTIVE_TRANSLATES) else {
                return Err(Error::GuardExceeded {
                    what: "translates q^l",
                    needed: format!("{q}^{ell}"),
                    limit: EXHAUSTIVE_TRANSLATES,
                });
            };
            (0..total)
                .into_par_iter()
                .map(|idx| {
                    let w = VectorQ::from_index(q, ell, idx);
                    let chain = chain_for_translate(set, &w, c);
                    (chain.len(), w, chain)
                })
                .reduce_with(pick_better)
        }
        TranslateSearch::Randomized { budget, seed } => {
            let mut rng = SeedSpec::new(seed).rng(0);
            let mut candidates: Vec<VectorQ> = distinct.iter().map(|v| v.neg()).collect();
            for _ in 0..budget {
                let entries = (0..ell).map(|_| rng.gen_range(0..q)).collect();
                candidates.push(VectorQ { q, entries });
            }
            candidates
                .into_par_iter()
                .map(|w| {
                    let chain = chain_for_translate(set, &w, c);
                    (chain.len(), w, chain)
                })
                .reduce_with(pick_better)
        }
    };
    let (len, translate, chain) = best.expect("at least one candidate translate");
    if (len as u64) < guarantee {
        return Err(Error::GuaranteeNotMet {
            found: len,
            guarantee,
        });
    }
    Ok(ChainCertificate {
        translate,
        chain,
        c,
    })
}

type Candidate = (usize, VectorQ, Vec<VectorQ>);

fn pick_better(a: Candidate, b: Candidate) -> Candidate {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}
