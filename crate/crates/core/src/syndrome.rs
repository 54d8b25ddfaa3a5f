//! Complete syndrome -> coset-leader tables.
//!
//! Syndromes are indexed mixed-radix little-endian: `s_1 + s_2 q + ... +
//! s_K q^(K-1)`.
//!
//! Leaders are found by enumerating error patterns in non-decreasing weight.
//! Within one weight, supports are visited in lexicographic order and, for
//! each support, the non-zero values in lexicographic order (first support
//! position most significant). The first pattern to reach a syndrome becomes
//! its leader.
//!
//! # Cache file layout
//!
//! All integers little-endian.
//!
//! | offset | size        | content                                   |
//! |--------|-------------|-------------------------------------------|
//! | 0      | 8           | magic `LDCSYND1`                          |
//! | 8      | 4           | q (`u32`)                                 |
//! | 12     | 4           | K (`u32`)                                 |
//! | 16     | 4           | N (`u32`)                                 |
//! | 20     | 32          | SHA-256 of the text serialization of H    |
//! | 52     | 2 q^K N     | leaders in syndrome order, one `u16` each |

use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{weight, FieldMatrix};
use crate::{checked_pow, Budget};

const CACHE_MAGIC: &[u8; 8] = b"LDCSYND1";
const CACHE_HEADER_LEN: usize = 52;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeTable {
    h: FieldMatrix,
    /// `q^K` leaders of length N, flattened in syndrome-index order.
    leaders: Vec<u32>,
    weights: Vec<usize>,
    rho: usize,
}

/// Mixed-radix little-endian index of a syndrome.
pub fn syndrome_index(s: &[u32], q: u32) -> usize {
    s.iter()
        .rev()
        .fold(0usize, |acc, &x| acc * q as usize + x as usize)
}

/// Inverse of [`syndrome_index`].
pub fn syndrome_from_index(mut idx: usize, q: u32, k: usize) -> Vec<u32> {
    let mut s = vec![0; k];
    for slot in s.iter_mut() {
        *slot = (idx % q as usize) as u32;
        idx /= q as usize;
    }
    s
}

/// Calls `visit` with every vector of length `n` and weight exactly `w` over
/// GF(q) in the order described in the module docs. Stops early when `visit`
/// returns `false`.
pub fn for_each_weight_w(
    n: usize,
    w: usize,
    q: u32,
    mut visit: impl FnMut(&[usize], &[u32]) -> bool,
) {
    if w > n {
        return;
    }
    let mut support: Vec<usize> = (0..w).collect();
    let mut values = vec![1u32; w];
    loop {
        values.iter_mut().for_each(|v| *v = 1);
        loop {
            if !visit(&support, &values) {
                return;
            }
            // Last position varies fastest.
            let mut wrapped = true;
            for v in values.iter_mut().rev() {
                if *v + 1 < q {
                    *v += 1;
                    wrapped = false;
                    break;
                }
                *v = 1;
            }
            if wrapped {
                break;
            }
        }
        let mut i = w;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if support[i] < n - w + i {
                support[i] += 1;
                for j in i + 1..w {
                    support[j] = support[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn validate_parity_check(h: &FieldMatrix) -> Result<()> {
    let rank = h.rank();
    if rank != h.rows() {
        return Err(Error::RankDeficient {
            rank,
            rows: h.rows(),
        });
    }
    Ok(())
}

impl SyndromeTable {
    pub fn build(h: &FieldMatrix, budget: &Budget) -> Result<Self> {
        let q = h.q();
        let (k, n) = (h.rows(), h.cols());
        let size = budget.check(
            "syndrome table (q^K)",
            checked_pow(q as u128, k),
            budget.table_entries,
        )? as usize;
        validate_parity_check(h)?;

        let field = h.field();
        let columns: Vec<Vec<u32>> = h.columns().collect();
        let mut leaders = vec![0u32; size * n];
        let mut weights = vec![usize::MAX; size];
        weights[0] = 0;
        let mut filled = 1;
        let mut rho = 0;
        let mut syn = vec![0u32; k];

        for w in 1..=n {
            if filled == size {
                break;
            }
            for_each_weight_w(n, w, q, |support, values| {
                syn.iter_mut().for_each(|x| *x = 0);
                for (&p, &v) in support.iter().zip(values) {
                    for (s, &c) in syn.iter_mut().zip(&columns[p]) {
                        *s = field.add(*s, field.mul(v, c));
                    }
                }
                let idx = syndrome_index(&syn, q);
                if weights[idx] == usize::MAX {
                    weights[idx] = w;
                    let leader = &mut leaders[idx * n..(idx + 1) * n];
                    for (&p, &v) in support.iter().zip(values) {
                        leader[p] = v;
                    }
                    filled += 1;
                    rho = w;
                }
                filled < size
            });
        }
        debug_assert_eq!(filled, size, "full-rank H reaches every syndrome");

        Ok(SyndromeTable {
            h: h.clone(),
            leaders,
            weights,
            rho,
        })
    }

    pub fn parity_check(&self) -> &FieldMatrix {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Largest leader weight, i.e. the covering radius of the code.
    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn leader_at(&self, idx: usize) -> &[u32] {
        let n = self.h.cols();
        &self.leaders[idx * n..(idx + 1) * n]
    }

    pub fn weight_at(&self, idx: usize) -> usize {
        self.weights[idx]
    }

    pub fn decode(&self, s: &[u32]) -> Result<&[u32]> {
        if s.len() != self.h.rows() {
            return Err(Error::Dimension(format!(
                "syndrome of length {}, expected {}",
                s.len(),
                self.h.rows()
            )));
        }
        for &x in s {
            self.h.field().residue(x as u64)?;
        }
        Ok(self.leader_at(syndrome_index(s, self.h.q())))
    }

    pub fn leader_weight_histogram(&self) -> BTreeMap<usize, u128> {
        let mut hist = BTreeMap::new();
        for &w in &self.weights {
            *hist.entry(w).or_insert(0) += 1;
        }
        hist
    }

    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(CACHE_HEADER_LEN + 2 * self.leaders.len());
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&self.h.q().to_le_bytes());
        out.extend_from_slice(&(self.h.rows() as u32).to_le_bytes());
        out.extend_from_slice(&(self.h.cols() as u32).to_le_bytes());
        out.extend_from_slice(&parity_check_hash(&self.h));
        for &x in &self.leaders {
            out.extend_from_slice(&(x as u16).to_le_bytes());
        }
        out
    }

    /// Restores a table written by [`to_cache_bytes`](Self::to_cache_bytes),
    /// rejecting it unless it was built for exactly `h`.
    pub fn from_cache_bytes(h: &FieldMatrix, bytes: &[u8]) -> Result<Self> {
        if bytes.len() < CACHE_HEADER_LEN || &bytes[..8] != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let read_u32 = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let (q, k, n) = (read_u32(8), read_u32(12) as usize, read_u32(16) as usize);
        if (q, k, n) != (h.q(), h.rows(), h.cols()) {
            return Err(Error::Cache(format!(
                "table is for GF({}) {}x{}, parity-check is GF({}) {}x{}",
                q,
                k,
                n,
                h.q(),
                h.rows(),
                h.cols()
            )));
        }
        if bytes[20..52] != parity_check_hash(h)[..] {
            return Err(Error::Cache(
                "stale table: parity-check hash differs".into(),
            ));
        }
        let size = checked_pow(q as u128, k)
            .filter(|&s| s <= usize::MAX as u128)
            .ok_or_else(|| Error::Cache("table too large".into()))? as usize;
        let body = &bytes[CACHE_HEADER_LEN..];
        if body.len() != 2 * size * n {
            return Err(Error::Cache(format!(
                "expected {} leader bytes, found {}",
                2 * size * n,
                body.len()
            )));
        }
        let leaders: Vec<u32> = body
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]) as u32)
            .collect();
        let mut weights = Vec::with_capacity(size);
        for idx in 0..size {
            let leader = &leaders[idx * n..(idx + 1) * n];
            let s = h.mul_vec(
                &leader
                    .iter()
                    .map(|&x| h.field().residue(x as u64))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            if syndrome_index(&s, q) != idx {
                return Err(Error::Cache(format!(
                    "leader {} has the wrong syndrome",
                    idx
                )));
            }
            weights.push(weight(leader));
        }
        let rho = weights.iter().copied().max().unwrap_or(0);
        Ok(SyndromeTable {
            h: h.clone(),
            leaders,
            weights,
            rho,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_cache_bytes())?;
        Ok(())
    }

    pub fn load(h: &FieldMatrix, path: &Path) -> Result<Self> {
        Self::from_cache_bytes(h, &std::fs::read(path)?)
    }
}

fn parity_check_hash(h: &FieldMatrix) -> [u8; 32] {
    Sha256::digest(h.to_text().as_bytes()).into()
}
