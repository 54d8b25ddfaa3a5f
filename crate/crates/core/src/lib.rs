//! Planner and verifier for multi-user linearly-decomposable distributed
//! computing.
//!
//! A demand matrix `F` (users x subfunctions) over GF(q) is factored as
//! `F = D E`, where `D` is the parity-check matrix of a chosen linear code
//! and each column of `E` is the minimum-weight coset leader of the matching
//! column of `F`. Row supports of `E` are the servers' job sets, so the
//! number of non-zeros in `E` is the cumulative computation cost and its
//! heaviest row is the computational delay.

pub mod cli;
pub mod codes;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod matrix;
pub mod planner;
pub mod simulator;
pub mod syndrome;

pub use codes::{Classification, LinearCode, Ratio};
pub use error::{Error, Result};
pub use field::Field;
pub use matrix::{EntryPolicy, FieldMatrix};

pub use syndrome::SyndromeTable;

/// Limits on exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of codewords `q^(N-K)` enumerated for the minimum distance.
    pub codewords: u128,
    /// Maximum number of syndrome-table entries `q^K`.
    pub table_entries: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            codewords: 1 << 26,
            table_entries: 1 << 24,
        }
    }
}

impl Budget {
    pub(crate) fn check(
        &self,
        what: &'static str,
        needed: Option<u128>,
        limit: u128,
    ) -> Result<u128> {
        match needed {
            Some(n) if n <= limit => Ok(n),
            other => Err(Error::Budget {
                what,
                needed: other.unwrap_or(u128::MAX),
                limit,
            }),
        }
    }
}

/// `base^exp`, or `None` on overflow.
pub(crate) fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
