//! Brute-force oracles shared by the integration tests. Everything here uses
//! plain integer arithmetic on `Vec<Vec<u32>>` so it stays independent of the
//! library's matrix and decoding code paths.

#![allow(dead_code)]

use ldc::{Field, FieldMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rows_of(h: &FieldMatrix) -> Vec<Vec<u32>> {
    (0..h.rows()).map(|r| h.row(r).to_vec()).collect()
}

pub fn naive_syndrome(h: &[Vec<u32>], q: u32, v: &[u32]) -> Vec<u32> {
    h.iter()
        .map(|row| {
            let s: u64 = row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
            (s % q as u64) as u32
        })
        .collect()
}

/// Little-endian index of `s`, written out longhand.
pub fn naive_index(s: &[u32], q: u32) -> usize {
    let mut idx = 0usize;
    let mut place = 1usize;
    for &x in s {
        idx += x as usize * place;
        place *= q as usize;
    }
    idx
}

/// Every vector of GF(q)^n, in odometer order.
pub fn all_vectors(q: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as usize).pow(n as u32);
    (0..total).map(move |mut i| {
        (0..n)
            .map(|_| {
                let d = (i % q as usize) as u32;
                i /= q as usize;
                d
            })
            .collect()
    })
}

pub fn hamming_weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Minimum coset weight for every syndrome, by scanning all q^N vectors.
pub fn brute_min_weights(h: &FieldMatrix) -> Vec<usize> {
    let rows = rows_of(h);
    let q = h.q();
    let mut best = vec![usize::MAX; (q as usize).pow(h.rows() as u32)];
    for v in all_vectors(q, h.cols()) {
        let idx = naive_index(&naive_syndrome(&rows, q, &v), q);
        best[idx] = best[idx].min(hamming_weight(&v));
    }
    best
}

pub fn brute_ball_volume(q: u32, n: usize, r: usize) -> u128 {
    all_vectors(q, n).filter(|v| hamming_weight(v) <= r).count() as u128
}

fn subsets(n: usize, r: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if acc.len() == r {
        out.push(acc.clone());
        return;
    }
    for i in start..n {
        acc.push(i);
        subsets(n, r, i + 1, acc, out);
        acc.pop();
    }
}

/// `1 + max r` such that every `r` columns of `h` are linearly independent,
/// found as the size of the smallest dependent column set.
pub fn min_distance_by_columns(h: &FieldMatrix) -> usize {
    let q = h.q();
    let cols: Vec<Vec<u32>> = h.columns().collect();
    for r in 1..=h.cols() {
        let mut sets = Vec::new();
        subsets(h.cols(), r, 0, &mut Vec::new(), &mut sets);
        for set in sets {
            for coeffs in all_vectors(q - 1, r) {
                let coeffs: Vec<u32> = coeffs.iter().map(|c| c + 1).collect();
                let zero = (0..h.rows()).all(|i| {
                    let s: u64 = set
                        .iter()
                        .zip(&coeffs)
                        .map(|(&j, &c)| cols[j][i] as u64 * c as u64)
                        .sum();
                    s.is_multiple_of(q as u64)
                });
                if zero {
                    return r;
                }
            }
        }
    }
    h.cols() + 1
}

pub fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Random `k x n` parity-check over GF(q) with full row rank.
pub fn random_full_rank(rng: &mut ChaCha8Rng, q: u32, k: usize, n: usize) -> FieldMatrix {
    let field = Field::new(q as u64).unwrap();
    loop {
        let data: Vec<u32> = (0..k * n).map(|_| rng.gen_range(0..q)).collect();
        let h = FieldMatrix::from_entries(field, k, n, data).unwrap();
        if h.rank() == k {
            return h;
        }
    }
}

/// Random demand with `l` distinct columns of length `k`.
pub fn random_distinct_columns(rng: &mut ChaCha8Rng, q: u32, k: usize, l: usize) -> FieldMatrix {
    let total = (q as usize).pow(k as u32);
    let picks = rand::seq::index::sample(rng, total, l);
    let columns: Vec<Vec<u32>> = picks
        .into_iter()
        .map(|mut i| {
            (0..k)
                .map(|_| {
                    let d = (i % q as usize) as u32;
                    i /= q as usize;
                    d
                })
                .collect()
        })
        .collect();
    FieldMatrix::from_columns(Field::new(q as u64).unwrap(), k, &columns).unwrap()
}
