//! Linear codes given by parity-check matrices, and their exact
//! combinatorial parameters.
//!
//! For a `K x N` parity-check `H` over GF(q):
//! - `d` is the minimum weight over all non-zero codewords, found by
//!   enumerating the `q^(N-K)` codewords spanned by a null-space basis;
//! - `tau = floor((d - 1) / 2)` is the packing radius;
//! - `rho` is the covering radius, read off the full syndrome table as the
//!   heaviest coset leader;
//! - `mu_tau = q^(N-K) V_q(N, tau) / q^N` is the packing density.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{weight, FieldMatrix};
use crate::syndrome::SyndromeTable;
use crate::{checked_pow, Budget};

/// Non-negative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u128,
    den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(self) -> u128 {
        self.num
    }

    pub fn den(self) -> u128 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    /// `self * m` if the product is an integer.
    pub fn times_integer(self, m: u128) -> Option<u128> {
        let g = gcd(m, self.den);
        let (m, den) = (m / g, self.den / g);
        (den == 1).then(|| self.num * m)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    Perfect,
    QuasiPerfect,
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Perfect => "Perfect",
            Classification::QuasiPerfect => "QuasiPerfect",
            Classification::Other => "Other",
        })
    }
}

/// Perfect iff `rho == tau`, quasi-perfect iff `rho == tau + 1`.
pub fn classify(tau: usize, rho: usize) -> Classification {
    if rho == tau {
        Classification::Perfect
    } else if rho == tau + 1 {
        Classification::QuasiPerfect
    } else {
        Classification::Other
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `V_q(n, r) = sum_{i=0}^{r} C(n, i) (q-1)^i`, the size of a Hamming ball.
pub fn ball_volume(q: u32, n: usize, r: usize) -> Result<u128> {
    if r > n {
        return Err(Error::Invalid(format!(
            "ball radius {} exceeds length {}",
            r, n
        )));
    }
    let overflow = || Error::Invalid(format!("V_{}({}, {}) overflows", q, n, r));
    let mut total: u128 = 0;
    for i in 0..=r {
        let term = checked_pow(q as u128 - 1, i)
            .and_then(|p| p.checked_mul(binomial(n, i)))
            .ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct LinearCode {
    h: FieldMatrix,
    d: usize,
    tau: usize,
    rho: usize,
    mu_tau: Ratio,
    class: Classification,
    table: SyndromeTable,
}

/// Parameter summary in the `analyze` JSON shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub tau: usize,
    pub rho: usize,
    pub mu_tau: String,
    pub class: Classification,
}

/// Minimum weight over the non-zero codewords spanned by the rows of
/// `generator`. Codewords are visited with a mixed-radix counter; bumping
/// digit `i` adds row `i` to the running codeword, wrap-around included.
pub fn min_distance_by_enumeration(generator: &FieldMatrix) -> usize {
    let field = generator.field();
    let (k, n) = (generator.rows(), generator.cols());
    let q = field.q();
    let mut digits = vec![0u32; k];
    let mut word = vec![0u32; n];
    let mut best = usize::MAX;
    loop {
        let mut i = 0;
        while i < k {
            for (x, &g) in word.iter_mut().zip(generator.row(i)) {
                *x = field.add(*x, g);
            }
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        best = best.min(weight(&word));
    }
    best
}

impl LinearCode {
    pub fn from_parity_check(h: &FieldMatrix, budget: &Budget) -> Result<Self> {
        let (k, n) = (h.rows(), h.cols());
        if k == 0 {
            return Err(Error::Invalid("parity-check matrix has no rows".into()));
        }
        let rank = h.rank();
        if rank != k {
            return Err(Error::RankDeficient { rank, rows: k });
        }
        if k == n {
            return Err(Error::Invalid(
                "parity-check is square: the code has dimension zero".into(),
            ));
        }
        let q = h.q();
        budget.check(
            "codeword enumeration (q^(N-K))",
            checked_pow(q as u128, n - k),
            budget.codewords,
        )?;
        let table = SyndromeTable::build(h, budget)?;

        let generator = h.null_space();
        let d = min_distance_by_enumeration(&generator);
        let tau = (d - 1) / 2;
        let rho = table.rho();
        let q_k = checked_pow(q as u128, k).expect("bounded by the table budget");
        let mu_tau = Ratio::new(ball_volume(q, n, tau)?, q_k);
        let class = classify(tau, rho);
        Ok(LinearCode {
            h: h.clone(),
            d,
            tau,
            rho,
            mu_tau,
            class,
            table,
        })
    }

    pub fn parity_check(&self) -> &FieldMatrix {
        &self.h
    }

    pub fn table(&self) -> &SyndromeTable {
        &self.table
    }

    /// Replaces the syndrome table with one loaded from a cache; it must
    /// describe the same parity-check.
    pub fn with_table(mut self, table: SyndromeTable) -> Result<Self> {
        if table.parity_check() != &self.h {
            return Err(Error::Cache(
                "table belongs to a different parity-check".into(),
            ));
        }
        self.table = table;
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.h.field()
    }

    pub fn q(&self) -> u32 {
        self.h.q()
    }

    /// Code length N.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Redundancy K (rows of H, number of users).
    pub fn redundancy(&self) -> usize {
        self.h.rows()
    }

    /// Dimension N - K.
    pub fn dimension(&self) -> usize {
        self.n() - self.redundancy()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn mu_tau(&self) -> Ratio {
        self.mu_tau
    }

    pub fn classification(&self) -> Classification {
        self.class
    }

    /// Number of syndromes `q^K`.
    pub fn syndrome_count(&self) -> u128 {
        self.table.len() as u128
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            n: self.n(),
            k: self.dimension(),
            d: self.d,
            tau: self.tau,
            rho: self.rho,
            mu_tau: self.mu_tau.to_string(),
            class: self.class,
        }
    }
}

/// q-ary Hamming code with `r` check symbols. Columns of H are the projective
/// points of GF(q)^r normalized to a leading 1, in lexicographic order.
pub fn hamming_code(q: u32, r: usize, budget: &Budget) -> Result<LinearCode> {
    LinearCode::from_parity_check(&hamming_parity_check(q, r)?, budget)
}

pub fn hamming_parity_check(q: u32, r: usize) -> Result<FieldMatrix> {
    let field = Field::new(q as u64)?;
    if r < 2 {
        return Err(Error::Invalid(format!(
            "Hamming redundancy must be at least 2, got {}",
            r
        )));
    }
    let total = checked_pow(q as u128, r)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::Invalid(format!("Hamming code q={} r={} too large", q, r)))?
        as usize;
    let mut columns = Vec::new();
    for idx in 1..total {
        // Big-endian digits: coordinate 1 most significant.
        let mut v = vec![0u32; r];
        let mut x = idx;
        for slot in v.iter_mut().rev() {
            *slot = (x % q as usize) as u32;
            x /= q as usize;
        }
        if v.iter().find(|&&c| c != 0) == Some(&1) {
            columns.push(v);
        }
    }
    FieldMatrix::from_columns(field, r, &columns)
}

/// Parity-check of the length-`n` repetition code: `x_i - x_n = 0`.
pub fn repetition_parity_check(q: u32, n: usize) -> Result<FieldMatrix> {
    let field = Field::new(q as u64)?;
    if n < 2 {
        return Err(Error::Invalid(format!(
            "repetition length must be at least 2, got {}",
            n
        )));
    }
    let mut h = FieldMatrix::zeros(field, n - 1, n);
    for i in 0..n - 1 {
        h.set(i, i, 1);
        h.set(i, n - 1, field.neg(1));
    }
    Ok(h)
}

pub fn repetition_code(q: u32, n: usize, budget: &Budget) -> Result<LinearCode> {
    LinearCode::from_parity_check(&repetition_parity_check(q, n)?, budget)
}

/// Binary extended Hamming code of length `2^r`: the Hamming check rows
/// padded with a zero column, plus an all-ones row.
pub fn extended_hamming_parity_check(r: usize) -> Result<FieldMatrix> {
    let base = hamming_parity_check(2, r)?;
    let n = base.cols() + 1;
    let mut h = FieldMatrix::zeros(base.field(), r + 1, n);
    for i in 0..r {
        for j in 0..base.cols() {
            h.set(i, j, base.get(i, j));
        }
    }
    for j in 0..n {
        h.set(r, j, 1);
    }
    Ok(h)
}

/// The `5 x 11` ternary Golay parity-check used as the decoding matrix of the
/// worked 11-server, 5-user example.
pub const TERNARY_GOLAY_ROWS: [[u32; 11]; 5] = [
    [1, 1, 1, 2, 2, 0, 1, 0, 0, 0, 0],
    [1, 1, 2, 1, 0, 2, 0, 1, 0, 0, 0],
    [1, 2, 1, 0, 1, 2, 0, 0, 1, 0, 0],
    [1, 2, 0, 1, 2, 1, 0, 0, 0, 1, 0],
    [1, 0, 2, 2, 1, 1, 0, 0, 0, 0, 1],
];

pub fn golay_ternary_parity_check() -> FieldMatrix {
    FieldMatrix::from_rows(Field::new(3).unwrap(), &TERNARY_GOLAY_ROWS).unwrap()
}

pub fn golay_ternary(budget: &Budget) -> Result<LinearCode> {
    LinearCode::from_parity_check(&golay_ternary_parity_check(), budget)
}

/// Generator polynomial of the cyclic [23,12,7] binary Golay code,
/// `1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11`, coefficients by ascending degree.
const BINARY_GOLAY_GENERATOR: [u32; 12] = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1];

/// `11 x 23` parity-check of the binary Golay code: the reduced null-space
/// basis of the cyclic generator matrix.
pub fn golay_binary_parity_check() -> FieldMatrix {
    let field = Field::new(2).unwrap();
    let mut g = FieldMatrix::zeros(field, 12, 23);
    for shift in 0..12 {
        for (i, &c) in BINARY_GOLAY_GENERATOR.iter().enumerate() {
            g.set(shift, shift + i, c);
        }
    }
    g.null_space()
}

pub fn golay_binary(budget: &Budget) -> Result<LinearCode> {
    LinearCode::from_parity_check(&golay_binary_parity_check(), budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn ratio_reduces() {
        let r = Ratio::new(144, 256);
        assert_eq!((r.num(), r.den()), (9, 16));
        assert!(Ratio::new(243, 243).is_one());
        assert_eq!(Ratio::new(3, 4).times_integer(8), Some(6));
        assert_eq!(Ratio::new(3, 4).times_integer(6), None);
        assert_eq!(Ratio::new(0, 5).to_string(), "0/1");
    }

    #[test]
    fn ball_volume_examples() {
        assert_eq!(ball_volume(3, 11, 2).unwrap(), 243);
        assert_eq!(ball_volume(2, 7, 1).unwrap(), 8);
        assert_eq!(ball_volume(5, 9, 0).unwrap(), 1);
        assert_eq!(ball_volume(2, 23, 3).unwrap(), 2048);
        assert!(ball_volume(2, 3, 4).is_err());
        for (q, n) in [(2u32, 10usize), (3, 7), (5, 4)] {
            assert_eq!(ball_volume(q, n, n).unwrap(), (q as u128).pow(n as u32));
        }
    }

    #[test]
    fn hamming_columns_are_normalized_lexicographic() {
        let h = hamming_parity_check(2, 2).unwrap();
        assert_eq!(
            h.columns().collect::<Vec<_>>(),
            vec![vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let h = hamming_parity_check(3, 2).unwrap();
        assert_eq!(
            h.columns().collect::<Vec<_>>(),
            vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]
        );
        assert!(hamming_parity_check(2, 1).is_err());
        assert!(hamming_parity_check(4, 2).is_err());
    }

    #[test]
    fn hamming_parameters() {
        let c = hamming_code(2, 3, &budget()).unwrap();
        assert_eq!(
            (c.n(), c.dimension(), c.d(), c.tau(), c.rho()),
            (7, 4, 3, 1, 1)
        );
        assert!(c.mu_tau().is_one());
        assert_eq!(c.classification(), Classification::Perfect);

        let c = hamming_code(3, 2, &budget()).unwrap();
        assert_eq!((c.n(), c.redundancy(), c.d()), (4, 2, 3));
        assert!(c.mu_tau().is_one());

        let c = hamming_code(2, 2, &budget()).unwrap();
        assert_eq!((c.n(), c.dimension(), c.d()), (3, 1, 3));
    }

    #[test]
    fn single_parity_code() {
        let h = FieldMatrix::from_rows(Field::new(2).unwrap(), &[[1, 1, 1]]).unwrap();
        let c = LinearCode::from_parity_check(&h, &budget()).unwrap();
        assert_eq!((c.d(), c.tau(), c.rho()), (2, 0, 1));
        assert_eq!(c.mu_tau(), Ratio::new(1, 2));
        assert_eq!(c.classification(), Classification::QuasiPerfect);
    }

    #[test]
    fn extended_hamming_is_quasi_perfect() {
        let h = extended_hamming_parity_check(3).unwrap();
        let c = LinearCode::from_parity_check(&h, &budget()).unwrap();
        assert_eq!(
            (c.n(), c.dimension(), c.d(), c.tau(), c.rho()),
            (8, 4, 4, 1, 2)
        );
        assert_eq!(c.mu_tau(), Ratio::new(9, 16));
        assert_eq!(c.classification(), Classification::QuasiPerfect);
    }

    #[test]
    fn repetition_code_parameters() {
        let c = repetition_code(3, 5, &budget()).unwrap();
        assert_eq!((c.n(), c.dimension(), c.d(), c.tau()), (5, 1, 5, 2));
        assert!(c
            .parity_check()
            .mat_mul(
                &FieldMatrix::from_rows(c.field(), &[[1u32; 5]])
                    .unwrap()
                    .transpose()
            )
            .unwrap()
            .is_zero());
        assert!(repetition_code(2, 1, &budget()).is_err());
    }

    #[test]
    fn golay_ternary_row_and_parameters() {
        let c = golay_ternary(&budget()).unwrap();
        assert_eq!(c.parity_check().row(0), &[1, 1, 1, 2, 2, 0, 1, 0, 0, 0, 0]);
        assert_eq!(
            (c.n(), c.dimension(), c.d(), c.tau(), c.rho()),
            (11, 6, 5, 2, 2)
        );
        assert!(c.mu_tau().is_one());
        assert_eq!(c.classification(), Classification::Perfect);
    }

    #[test]
    fn rejections() {
        let f = Field::new(2).unwrap();
        let deficient = FieldMatrix::from_rows(f, &[[1, 1, 0], [1, 1, 0]]).unwrap();
        let err = LinearCode::from_parity_check(&deficient, &budget()).unwrap_err();
        assert!(err.to_string().contains("parity-check not full rank"));
        assert!(LinearCode::from_parity_check(&FieldMatrix::identity(f, 3), &budget()).is_err());
        let tight = Budget {
            codewords: 8,
            table_entries: 1 << 24,
        };
        let err = hamming_code(2, 3, &tight).unwrap_err();
        assert!(err.is_budget());
        assert!(err.to_string().contains("limit is 8"));
    }

    #[test]
    fn classify_cases() {
        assert_eq!(classify(2, 2), Classification::Perfect);
        assert_eq!(classify(1, 2), Classification::QuasiPerfect);
        assert_eq!(classify(0, 1), Classification::QuasiPerfect);
        assert_eq!(classify(0, 3), Classification::Other);
    }
}
