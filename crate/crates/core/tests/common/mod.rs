//! Oracles written independently of the library: plain elimination over a
//! prime field and closure-based subspace enumeration.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Rank over F_p (p prime) by Gaussian elimination on a copy of `rows`.
pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as u64).collect())
        .collect();
    let p = p as u64;
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][col] % p != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][col], p - 2, p);
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != rank && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p * p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Entries of the matrix with base-p digit expansion `index`, row-major.
pub fn matrix_rows(index: u64, p: u32, m: usize, n: usize) -> Vec<Vec<u32>> {
    let mut idx = index;
    let mut rows = vec![vec![0u32; n]; m];
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            *x = (idx % p as u64) as u32;
            idx /= p as u64;
        }
    }
    rows
}

/// Every subspace of F_2^n (n ≤ 5) as a bitmask over its 2^n member vectors,
/// grouped by dimension. Built by repeatedly adjoining a vector and closing under addition.
pub fn binary_subspaces(n: usize) -> Vec<BTreeSet<u64>> {
    assert!(n <= 6);
    let size = 1usize << n;
    let mut levels: Vec<BTreeSet<u64>> = vec![BTreeSet::from([1u64])];
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for &space in levels.last().unwrap() {
            for v in 0..size {
                if space >> v & 1 == 1 {
                    continue;
                }
                let mut grown = space;
                for u in 0..size {
                    if space >> u & 1 == 1 {
                        grown |= 1 << (u ^ v);
                    }
                }
                next.insert(grown);
            }
        }
        levels.push(next);
    }
    levels
}
