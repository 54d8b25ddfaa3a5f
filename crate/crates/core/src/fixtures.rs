//! The worked example: q = 3, N = 11 servers, K = 5 users, L = 12
//! subfunctions, decoded with the ternary Golay parity-check.
//!
//! Job sets and audiences are listed 1-based, as they are usually written.

use crate::codes::{golay_ternary_parity_check, TERNARY_GOLAY_ROWS};
use crate::field::Field;
use crate::matrix::FieldMatrix;

pub const EXAMPLE_Q: u32 = 3;

pub const EXAMPLE_F: [[u32; 12]; 5] = [
    [2, 1, 1, 1, 1, 1, 1, 1, 2, 1, 2, 0],
    [1, 0, 0, 2, 2, 2, 0, 1, 1, 1, 0, 1],
    [1, 2, 1, 0, 1, 0, 2, 1, 2, 0, 1, 1],
    [0, 2, 0, 2, 0, 1, 2, 1, 0, 1, 2, 1],
    [0, 0, 0, 1, 1, 2, 2, 0, 1, 1, 1, 2],
];

pub const EXAMPLE_E: [[u32; 12]; 11] = [
    [2, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0],
    [0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 2],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 2],
    [0, 0, 0, 0, 2, 0, 0, 2, 0, 0, 0, 0],
];

pub const EXAMPLE_D: [[u32; 11]; 5] = TERNARY_GOLAY_ROWS;

pub const EXAMPLE_JOBS: [&[usize]; 11] = [
    &[1, 8, 10],
    &[2, 6],
    &[5, 9],
    &[4],
    &[7, 11],
    &[1, 6, 12],
    &[3],
    &[2],
    &[3, 10],
    &[7, 12],
    &[5, 8],
];

pub const EXAMPLE_AUDIENCES: [&[usize]; 11] = [
    &[1, 2, 3, 4, 5],
    &[1, 2, 3, 4],
    &[1, 2, 3, 5],
    &[1, 2, 4, 5],
    &[1, 3, 4, 5],
    &[2, 3, 4, 5],
    &[1],
    &[2],
    &[3],
    &[4],
    &[5],
];

pub const EXAMPLE_GAMMA: usize = 21;
pub const EXAMPLE_LAMBDA: usize = 3;

fn gf3() -> Field {
    Field::new(EXAMPLE_Q as u64).unwrap()
}

pub fn example_f() -> FieldMatrix {
    FieldMatrix::from_rows(gf3(), &EXAMPLE_F).unwrap()
}

pub fn example_e() -> FieldMatrix {
    FieldMatrix::from_rows(gf3(), &EXAMPLE_E).unwrap()
}

pub fn example_d() -> FieldMatrix {
    golay_ternary_parity_check()
}

/// Converts 1-based index lists to 0-based.
pub fn zero_based(sets: &[&[usize]]) -> Vec<Vec<usize>> {
    sets.iter()
        .map(|s| s.iter().map(|&i| i - 1).collect())
        .collect()
}
