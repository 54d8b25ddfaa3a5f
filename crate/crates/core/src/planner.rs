//! Factoring a demand matrix as `F = D E` and bounding the resulting costs.
//!
//! `D` is the parity-check of the chosen code and column `l` of `E` is the
//! coset leader of syndrome `F(:, l)`. Server `n` computes the subfunctions
//! in the support of row `n` of `E` and broadcasts to the users in the
//! support of column `n` of `D`.

use std::collections::HashMap;

use serde::Serialize;

use crate::codes::{binomial, Classification, LinearCode};
use crate::error::{Error, Result};
use crate::matrix::{support, FieldMatrix};
use crate::syndrome::syndrome_from_index;
use crate::{checked_pow, Budget};

/// `K x L` demand matrix; row `k` holds user `k`'s coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandMatrix {
    f: FieldMatrix,
    duplicates: Vec<(usize, usize)>,
}

impl DemandMatrix {
    /// Accepts `f` only if its columns are pairwise distinct.
    pub fn new(f: FieldMatrix) -> Result<Self> {
        let d = Self::allowing_duplicates(f);
        if let Some(&(a, b)) = d.duplicates.first() {
            return Err(Error::Invalid(format!(
                "demand columns {} and {} are identical (pass --allow-duplicate-columns to plan anyway)",
                a, b
            )));
        }
        Ok(d)
    }

    /// Accepts any `f`, recording each repeated column as `(first, repeat)`.
    pub fn allowing_duplicates(f: FieldMatrix) -> Self {
        let mut first_seen: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut duplicates = Vec::new();
        for (l, col) in f.columns().enumerate() {
            match first_seen.get(&col) {
                Some(&first) => duplicates.push((first, l)),
                None => {
                    first_seen.insert(col, l);
                }
            }
        }
        DemandMatrix { f, duplicates }
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.f
    }

    pub fn duplicates(&self) -> &[(usize, usize)] {
        &self.duplicates
    }

    pub fn has_distinct_columns(&self) -> bool {
        self.duplicates.is_empty()
    }

    /// Number of users K.
    pub fn users(&self) -> usize {
        self.f.rows()
    }

    /// Number of subfunctions L.
    pub fn subfunctions(&self) -> usize {
        self.f.cols()
    }
}

/// The demand whose columns are every vector of GF(q)^K once, in ascending
/// syndrome-index order.
pub fn maximal_basis_demand(q: u32, k: usize, budget: &Budget) -> Result<DemandMatrix> {
    let field = crate::field::Field::new(q as u64)?;
    let size = budget.check(
        "maximal-basis demand (q^K)",
        checked_pow(q as u128, k),
        budget.table_entries,
    )? as usize;
    let columns: Vec<Vec<u32>> = (0..size).map(|i| syndrome_from_index(i, q, k)).collect();
    DemandMatrix::new(FieldMatrix::from_columns(field, k, &columns)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputingScheme {
    demand: DemandMatrix,
    decoding: FieldMatrix,
    encoding: FieldMatrix,
    jobs: Vec<Vec<usize>>,
    audiences: Vec<Vec<usize>>,
    gamma: usize,
    lambda: usize,
}

impl ComputingScheme {
    /// Assembles a scheme from explicit matrices, checking `D E = F`.
    pub fn from_parts(
        demand: DemandMatrix,
        decoding: FieldMatrix,
        encoding: FieldMatrix,
    ) -> Result<Self> {
        let product = decoding.mat_mul(&encoding)?;
        if &product != demand.matrix() {
            return Err(Error::Invalid("D E does not equal F".into()));
        }
        Ok(Self::assemble(demand, decoding, encoding))
    }

    /// Assembles a scheme without checking `D E = F`.
    pub fn from_parts_unchecked(
        demand: DemandMatrix,
        decoding: FieldMatrix,
        encoding: FieldMatrix,
    ) -> Self {
        Self::assemble(demand, decoding, encoding)
    }

    fn assemble(demand: DemandMatrix, decoding: FieldMatrix, encoding: FieldMatrix) -> Self {
        let jobs: Vec<Vec<usize>> = (0..encoding.rows())
            .map(|n| support(encoding.row(n)))
            .collect();
        let audiences: Vec<Vec<usize>> = (0..decoding.cols())
            .map(|n| support(&decoding.column(n)))
            .collect();
        let gamma = encoding.total_weight();
        let lambda = encoding.row_weights().into_iter().max().unwrap_or(0);
        assert_eq!(gamma, jobs.iter().map(Vec::len).sum::<usize>());
        assert_eq!(lambda, jobs.iter().map(Vec::len).max().unwrap_or(0));
        ComputingScheme {
            demand,
            decoding,
            encoding,
            jobs,
            audiences,
            gamma,
            lambda,
        }
    }

    pub fn demand(&self) -> &DemandMatrix {
        &self.demand
    }

    /// `D`, `K x N`.
    pub fn decoding(&self) -> &FieldMatrix {
        &self.decoding
    }

    /// `E`, `N x L`.
    pub fn encoding(&self) -> &FieldMatrix {
        &self.encoding
    }

    /// Server job sets `S_n` (0-based subfunction indices).
    pub fn jobs(&self) -> &[Vec<usize>] {
        &self.jobs
    }

    /// Server audiences `T_n` (0-based user indices).
    pub fn audiences(&self) -> &[Vec<usize>] {
        &self.audiences
    }

    /// Cumulative computation cost.
    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// Computational delay.
    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn servers(&self) -> usize {
        self.decoding.cols()
    }

    pub fn users(&self) -> usize {
        self.decoding.rows()
    }

    pub fn subfunctions(&self) -> usize {
        self.encoding.cols()
    }
}

/// Decodes every column of `F` with the code's syndrome table.
pub fn plan(demand: DemandMatrix, code: &LinearCode) -> Result<ComputingScheme> {
    let f = demand.matrix();
    let h = code.parity_check();
    if f.field() != h.field() {
        return Err(Error::FieldMismatch {
            left: f.q(),
            right: h.q(),
        });
    }
    if f.rows() != h.rows() {
        return Err(Error::Dimension(format!(
            "demand has {} users but the code has {} check rows",
            f.rows(),
            h.rows()
        )));
    }
    let table = code.table();
    let columns = f
        .columns()
        .map(|col| table.decode(&col).map(<[u32]>::to_vec))
        .collect::<Result<Vec<_>>>()?;
    let encoding = FieldMatrix::from_columns(h.field(), h.cols(), &columns)?;
    debug_assert_eq!(&h.mat_mul(&encoding)?, f);
    Ok(ComputingScheme::assemble(demand, h.clone(), encoding))
}

/// `(1 - mu_tau) q^K`: the number of cosets whose leader is heavier than tau.
fn uncovered_cosets(code: &LinearCode) -> u128 {
    let q_k = code.syndrome_count();
    let covered = code
        .mu_tau()
        .times_integer(q_k)
        .expect("mu_tau * q^K is integral for a full-rank parity-check");
    q_k - covered
}

fn pow(base: u32, exp: usize) -> u128 {
    (base as u128).pow(exp as u32)
}

/// `sum_{i=1}^{t} C(N-1, i-1) (q-1)^i`: weight-`<= t` patterns with a fixed
/// position non-zero.
fn per_row_sum(code: &LinearCode, t: usize) -> u128 {
    (1..=t)
        .map(|i| binomial(code.n() - 1, i - 1) * pow(code.q() - 1, i))
        .sum()
}

/// `sum_{i=1}^{t} C(N, i) (q-1)^i i`: total weight of all weight-`<= t` patterns.
fn total_weight_sum(code: &LinearCode, t: usize) -> u128 {
    (1..=t)
        .map(|i| binomial(code.n(), i) * pow(code.q() - 1, i) * i as u128)
        .sum()
}

/// Upper bound on the delay for `l` distinct demand columns:
/// `min{L, sum_{i=1}^{tau} C(N-1,i-1)(q-1)^i + (1 - mu_tau) q^K}`.
pub fn bound_lambda(code: &LinearCode, l: usize) -> u128 {
    (l as u128).min(per_row_sum(code, code.tau()) + uncovered_cosets(code))
}

/// Upper bound on the cumulative cost for `l` distinct demand columns:
/// `min{N L, sum_{i=1}^{tau} C(N,i)(q-1)^i i + (1 - mu_tau) q^K rho}`.
pub fn bound_gamma(code: &LinearCode, l: usize) -> u128 {
    (code.n() as u128 * l as u128)
        .min(total_weight_sum(code, code.tau()) + uncovered_cosets(code) * code.rho() as u128)
}

/// Lower bounds `(lambda, gamma)` when `L = q^K`.
pub fn lower_bounds_maximal(code: &LinearCode) -> (u128, u128) {
    (
        per_row_sum(code, code.tau()),
        total_weight_sum(code, code.tau()),
    )
}

/// Strict upper bounds `(lambda, gamma)` for a quasi-perfect code:
/// `sum_{i=1}^{tau} C(N-1,i-1)(q-1)^i + C(N,tau+1)(q-1)^(tau+1)` and
/// `sum_{i=1}^{tau+1} C(N,i)(q-1)^i i`.
pub fn quasi_perfect_bounds(code: &LinearCode) -> Result<(u128, u128)> {
    if code.classification() != Classification::QuasiPerfect {
        return Err(Error::Invalid(format!(
            "quasi-perfect bounds need a quasi-perfect code, got {}",
            code.classification()
        )));
    }
    let tau = code.tau();
    let lambda = per_row_sum(code, tau) + binomial(code.n(), tau + 1) * pow(code.q() - 1, tau + 1);
    Ok((lambda, total_weight_sum(code, tau + 1)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub tau: usize,
    pub rho: usize,
    pub mu_tau: String,
    pub class: Classification,
    pub lambda_ub: u128,
    pub gamma_ub: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_lb: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_lb: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qp_lambda_ub: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qp_gamma_ub: Option<u128>,
    pub measured_lambda: usize,
    pub measured_gamma: usize,
}

impl BoundReport {
    pub fn evaluate(scheme: &ComputingScheme, code: &LinearCode) -> Self {
        let l = scheme.subfunctions();
        let maximal = scheme.demand().has_distinct_columns() && l as u128 == code.syndrome_count();
        let (lambda_lb, gamma_lb) = if maximal {
            let (a, b) = lower_bounds_maximal(code);
            (Some(a), Some(b))
        } else {
            (None, None)
        };
        let (qp_lambda_ub, qp_gamma_ub) = match quasi_perfect_bounds(code) {
            Ok((a, b)) => (Some(a), Some(b)),
            Err(_) => (None, None),
        };
        BoundReport {
            tau: code.tau(),
            rho: code.rho(),
            mu_tau: code.mu_tau().to_string(),
            class: code.classification(),
            lambda_ub: bound_lambda(code, l),
            gamma_ub: bound_gamma(code, l),
            lambda_lb,
            gamma_lb,
            qp_lambda_ub,
            qp_gamma_ub,
            measured_lambda: scheme.lambda(),
            measured_gamma: scheme.gamma(),
        }
    }

    /// Every bound the measured costs break; empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let (lam, gam) = (self.measured_lambda as u128, self.measured_gamma as u128);
        let mut out = Vec::new();
        if lam > self.lambda_ub {
            out.push(format!("lambda {} > upper bound {}", lam, self.lambda_ub));
        }
        if gam > self.gamma_ub {
            out.push(format!("gamma {} > upper bound {}", gam, self.gamma_ub));
        }
        if let Some(lb) = self.lambda_lb.filter(|&lb| lam < lb) {
            out.push(format!("lambda {} < lower bound {}", lam, lb));
        }
        if let Some(lb) = self.gamma_lb.filter(|&lb| gam < lb) {
            out.push(format!("gamma {} < lower bound {}", gam, lb));
        }
        if let Some(ub) = self.qp_lambda_ub.filter(|&ub| lam >= ub) {
            out.push(format!(
                "lambda {} not below quasi-perfect bound {}",
                lam, ub
            ));
        }
        if let Some(ub) = self.qp_gamma_ub.filter(|&ub| gam >= ub) {
            out.push(format!(
                "gamma {} not below quasi-perfect bound {}",
                gam, ub
            ));
        }
        out
    }
}

/// Contents of `scheme.json`. Job and audience indices are 0-based.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeSummary<'a> {
    pub gamma: usize,
    pub lambda: usize,
    pub jobs: &'a [Vec<usize>],
    pub audiences: &'a [Vec<usize>],
    pub bounds: BoundReport,
}

impl<'a> SchemeSummary<'a> {
    pub fn new(scheme: &'a ComputingScheme, code: &LinearCode) -> Self {
        SchemeSummary {
            gamma: scheme.gamma(),
            lambda: scheme.lambda(),
            jobs: scheme.jobs(),
            audiences: scheme.audiences(),
            bounds: BoundReport::evaluate(scheme, code),
        }
    }
}
