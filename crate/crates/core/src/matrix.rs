//! Dense matrices over GF(q) and their text/JSON file formats.
//!
//! Text format: the first line is `q rows cols`, followed by `rows` lines of
//! `cols` space-separated residues. The file ends with a newline.
//!
//! ```text
//! 3 1 2
//! 2 1
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// How `parse_text` / `from_json` treat entries outside `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntryPolicy {
    /// Out-of-range entries are an error.
    #[default]
    Strict,
    /// Entries (possibly negative) are reduced mod q.
    Reduce,
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    q: u64,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<i64>>,
}

/// Hamming weight of a vector.
pub fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Indices of the non-zero entries.
pub fn support(v: &[u32]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, _)| i)
        .collect()
}

impl FieldMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries, validating every residue.
    pub fn from_entries(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        for &x in &data {
            field.residue(x as u64)?;
        }
        Ok(FieldMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows<R: AsRef<[u32]>>(field: Field, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_entries(field, rows.len(), cols, data)
    }

    /// Builds a `rows x columns.len()` matrix whose columns are given.
    pub fn from_columns<C: AsRef<[u32]>>(field: Field, rows: usize, columns: &[C]) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(field, rows, cols);
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != rows {
                return Err(Error::Dimension(format!(
                    "column {} has {} entries, expected {}",
                    j,
                    c.len(),
                    rows
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                m.data[i * cols + j] = field.residue(x as u64)?;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    /// Sets one entry, reducing `value` mod q.
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.data[r * self.cols + c] = value % self.q();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.cols).map(move |c| self.column(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.q(),
                right: other.q(),
            });
        }
        Ok(())
    }

    /// Exact product over GF(q).
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.q() as u64;
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = vec![0u64; other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.get(k, j) as u64) % q;
                }
            }
            for (j, v) in acc.into_iter().enumerate() {
                out.data[i * other.cols + j] = v as u32;
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by a length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let q = self.q() as u64;
        Ok((0..self.rows)
            .map(|i| {
                let row = self.row(i);
                (row.iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64 % q)
                    .sum::<u64>()
                    % q) as u32
            })
            .collect())
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        Ok(FieldMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    /// Weight of a one-row or one-column matrix.
    pub fn weight(&self) -> Result<usize> {
        if self.rows != 1 && self.cols != 1 {
            return Err(Error::Dimension(format!(
                "weight of a {}x{} matrix: not a vector",
                self.rows, self.cols
            )));
        }
        Ok(weight(&self.data))
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows).map(|r| weight(self.row(r))).collect()
    }

    pub fn total_weight(&self) -> usize {
        weight(&self.data)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot is non-zero");
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                let factor = m.get(i, c);
                if i == r || factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : self · x = 0}`, one vector per
    /// row of the result (`cols - rank` rows).
    pub fn null_space(&self) -> Self {
        let f = self.field;
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.data[b * self.cols + fc] = 1;
            for (pr, &pc) in pivots.iter().enumerate() {
                basis.data[b * self.cols + pc] = f.neg(reduced.get(pr, fc));
            }
        }
        basis
    }

    /// Canonical text serialization.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.data.len() * 3 + 16);
        let _ = writeln!(s, "{} {} {}", self.q(), self.rows, self.cols);
        for r in 0..self.rows {
            let mut first = true;
            for &x in self.row(r) {
                if !first {
                    s.push(' ');
                }
                first = false;
                let _ = write!(s, "{}", x);
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str, policy: EntryPolicy) -> Result<Self> {
        let body = text.strip_suffix('\n').ok_or_else(|| Error::Parse {
            line: text.lines().count().max(1),
            msg: "missing trailing newline".into(),
        })?;
        let mut lines = body.split('\n');
        let header = lines.next().unwrap_or("");
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 3 {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header must be `q rows cols`, got {:?}", header),
            });
        }
        let parse_usize = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("invalid {} {:?}", what, s),
            })
        };
        let q = parse_usize(nums[0], "modulus")?;
        let rows = parse_usize(nums[1], "row count")? as usize;
        let cols = parse_usize(nums[2], "column count")? as usize;
        let field = Field::new(q)?;

        let mut data = Vec::with_capacity(rows * cols);
        let mut seen = 0;
        for (i, line) in lines.enumerate() {
            let lineno = i + 2;
            if seen == rows {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {} rows, found more", rows),
                });
            }
            let before = data.len();
            for tok in line.split_whitespace() {
                let v = tok.parse::<i64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid entry {:?}", tok),
                })?;
                data.push(match policy {
                    EntryPolicy::Reduce => field.reduce(v),
                    EntryPolicy::Strict => {
                        if v < 0 {
                            return Err(Error::OutOfRange {
                                value: v as u64,
                                q: field.q(),
                            });
                        }
                        field.residue(v as u64)?
                    }
                });
            }
            if data.len() - before != cols {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {} entries, found {}", cols, data.len() - before),
                });
            }
            seen += 1;
        }
        if seen != rows {
            return Err(Error::Parse {
                line: seen + 2,
                msg: format!("expected {} rows, found {}", rows, seen),
            });
        }
        Self::from_entries(field, rows, cols, data)
    }

    pub fn to_json(&self) -> String {
        let jm = JsonMatrix {
            q: self.q() as u64,
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|r| self.row(r).iter().map(|&x| x as i64).collect())
                .collect(),
        };
        serde_json::to_string(&jm).expect("matrix serializes")
    }

    pub fn parse_json(text: &str, policy: EntryPolicy) -> Result<Self> {
        let jm: JsonMatrix = serde_json::from_str(text)?;
        let field = Field::new(jm.q)?;
        if jm.entries.len() != jm.rows {
            return Err(Error::Dimension(format!(
                "{} rows declared, {} given",
                jm.rows,
                jm.entries.len()
            )));
        }
        let mut data = Vec::with_capacity(jm.rows * jm.cols);
        for (i, row) in jm.entries.iter().enumerate() {
            if row.len() != jm.cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    jm.cols
                )));
            }
            for &v in row {
                data.push(match policy {
                    EntryPolicy::Reduce => field.reduce(v),
                    EntryPolicy::Strict if v < 0 => {
                        return Err(Error::OutOfRange {
                            value: v as u64,
                            q: field.q(),
                        })
                    }
                    EntryPolicy::Strict => field.residue(v as u64)?,
                });
            }
        }
        Self::from_entries(field, jm.rows, jm.cols, data)
    }
}
