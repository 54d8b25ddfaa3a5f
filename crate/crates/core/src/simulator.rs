//! In-process execution of the three phases: servers compute their assigned
//! subfunctions and broadcast one linear combination each, users combine
//! what they receive, and the harness checks every user got `F_k(w)`.
//!
//! Subfunction outputs are plain field elements `w_l`. Random trials draw
//! `w` uniformly with `ChaCha8Rng::seed_from_u64(seed)`, one stream for the
//! whole run, entries in subfunction order, trial after trial.

use std::cell::RefCell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::planner::ComputingScheme;

/// Read-only view of the file vector that logs which indices were read.
struct FileStore<'a> {
    files: &'a [u32],
    reads: RefCell<Vec<usize>>,
}

impl<'a> FileStore<'a> {
    fn new(files: &'a [u32]) -> Self {
        FileStore {
            files,
            reads: RefCell::new(Vec::new()),
        }
    }

    fn read(&self, l: usize) -> u32 {
        self.reads.borrow_mut().push(l);
        self.files[l]
    }

    fn into_log(self) -> Vec<usize> {
        self.reads.into_inner()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub files: Vec<u32>,
    /// `z = E w`, one entry per server.
    pub transmissions: Vec<u32>,
    /// Per user, the `(server, z_n)` pairs it received.
    pub delivered: Vec<Vec<(usize, u32)>>,
    /// `f' = D z`.
    pub decoded: Vec<u32>,
    /// `f = F w`.
    pub expected: Vec<u32>,
    pub pass: bool,
    /// True when every server read exactly its job set.
    pub locality_ok: bool,
    /// Indices each server read, in read order.
    pub reads: Vec<Vec<usize>>,
    pub delay: usize,
    pub message_count: usize,
}

/// Runs one round for the file vector `w`.
pub fn run_once(scheme: &ComputingScheme, w: &[u32]) -> Result<SimulationReport> {
    let e = scheme.encoding();
    let d = scheme.decoding();
    let field = e.field();
    if w.len() != scheme.subfunctions() {
        return Err(Error::Dimension(format!(
            "file vector has {} entries, scheme has {} subfunctions",
            w.len(),
            scheme.subfunctions()
        )));
    }
    for &x in w {
        field.residue(x as u64)?;
    }

    // Computation and encoding.
    let mut transmissions = Vec::with_capacity(scheme.servers());
    let mut reads = Vec::with_capacity(scheme.servers());
    for (n, jobs) in scheme.jobs().iter().enumerate() {
        let store = FileStore::new(w);
        let z = jobs.iter().fold(0, |acc, &l| {
            field.add(acc, field.mul(e.get(n, l), store.read(l)))
        });
        transmissions.push(z);
        reads.push(store.into_log());
    }
    let locality_ok = reads.iter().zip(scheme.jobs()).all(|(r, j)| r == j);

    // Communication: server n reaches the users in T_n.
    let mut delivered = vec![Vec::new(); scheme.users()];
    for (n, audience) in scheme.audiences().iter().enumerate() {
        for &k in audience {
            delivered[k].push((n, transmissions[n]));
        }
    }

    // Decoding.
    let decoded: Vec<u32> = delivered
        .iter()
        .enumerate()
        .map(|(k, received)| {
            received
                .iter()
                .fold(0, |acc, &(n, z)| field.add(acc, field.mul(d.get(k, n), z)))
        })
        .collect();
    let expected = scheme.demand().matrix().mul_vec(w)?;
    let pass = decoded == expected;

    Ok(SimulationReport {
        files: w.to_vec(),
        transmissions,
        delivered,
        decoded,
        expected,
        pass,
        locality_ok,
        reads,
        delay: scheme.lambda(),
        message_count: message_count(scheme),
    })
}

/// `sum_n |T_n|`.
pub fn message_count(scheme: &ComputingScheme) -> usize {
    scheme.audiences().iter().map(Vec::len).sum()
}

/// Per-server delays `|S_n|` under unit-cost subfunctions, and their maximum.
pub fn delay_accounting(scheme: &ComputingScheme) -> (Vec<usize>, usize) {
    let delays: Vec<usize> = scheme.jobs().iter().map(Vec::len).collect();
    let max = delays.iter().copied().max().unwrap_or(0);
    (delays, max)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub pass: bool,
    pub locality_ok: bool,
    pub files: Vec<u32>,
    pub decoded: Vec<u32>,
    pub expected: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialsReport {
    pub trials: usize,
    pub pass_rate: f64,
    pub lambda: usize,
    pub message_count: usize,
    pub passes: usize,
    pub locality_ok: bool,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

/// Uniform file vector of length `l` over GF(q).
pub fn random_files(rng: &mut ChaCha8Rng, q: u32, l: usize) -> Vec<u32> {
    (0..l).map(|_| rng.gen_range(0..q)).collect()
}

pub fn random_trials(scheme: &ComputingScheme, trials: usize, seed: u64) -> Result<TrialsReport> {
    if trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = scheme.encoding().q();
    let mut records = Vec::with_capacity(trials);
    for trial in 0..trials {
        let w = random_files(&mut rng, q, scheme.subfunctions());
        let r = run_once(scheme, &w)?;
        records.push(TrialRecord {
            trial,
            pass: r.pass,
            locality_ok: r.locality_ok,
            files: r.files,
            decoded: r.decoded,
            expected: r.expected,
        });
    }
    let passes = records.iter().filter(|r| r.pass).count();
    Ok(TrialsReport {
        trials,
        pass_rate: passes as f64 / trials as f64,
        lambda: delay_accounting(scheme).1,
        message_count: message_count(scheme),
        passes,
        locality_ok: records.iter().all(|r| r.locality_ok),
        records,
    })
}

impl TrialsReport {
    /// Per-trial CSV: `trial,pass,locality_ok,files,decoded,expected`, with
    /// vectors written as space-separated residues.
    pub fn to_csv(&self) -> String {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        let mut out = String::from("trial,pass,locality_ok,files,decoded,expected\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.trial,
                r.pass,
                r.locality_ok,
                join(&r.files),
                join(&r.decoded),
                join(&r.expected)
            ));
        }
        out
    }
}

/// Copy of `scheme` with `E(row, col)` bumped by one and `D E = F` no
/// longer guaranteed. Used to confirm the harness catches infeasible schemes.
pub fn perturb(scheme: &ComputingScheme, row: usize, col: usize) -> ComputingScheme {
    let mut e = scheme.encoding().clone();
    let v = e.field().add(e.get(row, col), 1);
    e.set(row, col, v);
    ComputingScheme::from_parts_unchecked(scheme.demand().clone(), scheme.decoding().clone(), e)
}
