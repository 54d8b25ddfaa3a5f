//! Command-line driver: `analyze`, `plan`, `simulate`, `bench` and
//! `reproduce-example`.
//!
//! Exit codes: 0 success, 1 validation error, 2 budget exceeded, 3 failed
//! reproduction assertion.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{self, LinearCode};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::fixtures;
use crate::matrix::{EntryPolicy, FieldMatrix};
use crate::planner::{self, BoundReport, ComputingScheme, DemandMatrix, SchemeSummary};
use crate::simulator;
use crate::syndrome::{syndrome_from_index, SyndromeTable};
use crate::Budget;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

/// Which code supplies the decoding matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSelector {
    Hamming { q: u32, r: usize },
    GolayTernary,
    GolayBinary,
    Repetition { q: u32, n: usize },
    File(PathBuf),
}

impl FromStr for CodeSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.splitn(3, ':').collect();
        let num = |x: &str, what: &str| -> std::result::Result<usize, String> {
            x.parse::<usize>()
                .map_err(|_| format!("invalid {} {:?} in selector {:?}", what, x, s))
        };
        let prime = |x: &str| -> std::result::Result<u32, String> {
            let q = num(x, "field size")?;
            if q > u16::MAX as usize || !is_prime(q as u64) {
                return Err(format!("field size {} is not a prime in [2, 65535]", q));
            }
            Ok(q as u32)
        };
        match parts.as_slice() {
            ["golay-ternary"] => Ok(CodeSelector::GolayTernary),
            ["golay-binary"] => Ok(CodeSelector::GolayBinary),
            ["hamming", q, r] => {
                let (q, r) = (prime(q)?, num(r, "redundancy")?);
                if r < 2 {
                    return Err(format!("Hamming redundancy must be at least 2, got {}", r));
                }
                Ok(CodeSelector::Hamming { q, r })
            }
            ["repetition", q, n] => {
                let (q, n) = (prime(q)?, num(n, "length")?);
                if n < 2 {
                    return Err(format!("repetition length must be at least 2, got {}", n));
                }
                Ok(CodeSelector::Repetition { q, n })
            }
            ["file", rest @ ..] if !rest.join(":").is_empty() => Ok(CodeSelector::File(PathBuf::from(rest.join(":")))),
            _ => Err(format!(
                "unknown code selector {:?}; expected hamming:Q:R, golay-ternary, golay-binary, repetition:Q:N or file:PATH",
                s
            )),
        }
    }
}

impl fmt::Display for CodeSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSelector::Hamming { q, r } => write!(f, "hamming:{}:{}", q, r),
            CodeSelector::GolayTernary => f.write_str("golay-ternary"),
            CodeSelector::GolayBinary => f.write_str("golay-binary"),
            CodeSelector::Repetition { q, n } => write!(f, "repetition:{}:{}", q, n),
            CodeSelector::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl CodeSelector {
    pub fn parity_check(&self) -> Result<FieldMatrix> {
        match self {
            CodeSelector::Hamming { q, r } => codes::hamming_parity_check(*q, *r),
            CodeSelector::GolayTernary => Ok(codes::golay_ternary_parity_check()),
            CodeSelector::GolayBinary => Ok(codes::golay_binary_parity_check()),
            CodeSelector::Repetition { q, n } => codes::repetition_parity_check(*q, *n),
            CodeSelector::File(path) => read_matrix(path, MatrixFormat::Auto, EntryPolicy::Strict),
        }
    }

    pub fn build(&self, budget: &Budget) -> Result<LinearCode> {
        LinearCode::from_parity_check(&self.parity_check()?, budget)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    /// JSON when the file name ends in `.json`, text otherwise.
    Auto,
    Text,
    Json,
}

fn read_matrix(path: &Path, format: MatrixFormat, policy: EntryPolicy) -> Result<FieldMatrix> {
    let text = std::fs::read_to_string(path)?;
    let json = match format {
        MatrixFormat::Json => true,
        MatrixFormat::Text => false,
        MatrixFormat::Auto => path.extension().is_some_and(|e| e == "json"),
    };
    if json {
        FieldMatrix::parse_json(&text, policy)
    } else {
        FieldMatrix::parse_text(&text, policy)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ldc",
    version,
    about = "Plan and verify coded multi-user linearly-decomposable computation"
)]
pub struct Cli {
    /// Maximum syndrome-table size q^K.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    pub budget_table_entries: u128,
    /// Maximum number of codewords q^(N-K) enumerated for the minimum distance.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    pub budget_codewords: u128,
    /// Machine-readable output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Seed for random file vectors and random demands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the parameters of a code.
    Analyze {
        /// hamming:Q:R, golay-ternary, golay-binary, repetition:Q:N or file:PATH
        code: CodeSelector,
    },
    /// Factor a demand matrix and write the scheme bundle.
    Plan(PlanArgs),
    /// Run seeded random trials of a planned scheme.
    Simulate(SimulateArgs),
    /// Compare measured costs against the bounds over a sweep of L.
    Bench(BenchArgs),
    /// Re-derive the 11-server ternary Golay example and check every value.
    ReproduceExample {
        /// Corrupt one entry of the expected E (harness self-check).
        #[arg(long, hide = true)]
        corrupt_fixture: bool,
    },
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub code: CodeSelector,
    /// Demand matrix file.
    #[arg(
        long,
        required_unless_present = "maximal_basis",
        conflicts_with = "maximal_basis"
    )]
    pub demand: Option<PathBuf>,
    /// Use every vector of GF(q)^K once as the demand.
    #[arg(long)]
    pub maximal_basis: bool,
    #[arg(long, value_enum, default_value_t = MatrixFormat::Auto)]
    pub input_format: MatrixFormat,
    /// Reduce out-of-range demand entries mod q instead of rejecting them.
    #[arg(long)]
    pub reduce_entries: bool,
    #[arg(long)]
    pub allow_duplicate_columns: bool,
    /// Load the syndrome table from this file, or build and save it there.
    #[arg(long)]
    pub cache_table: Option<PathBuf>,
    /// Output directory for D.txt, E.txt, F.txt and scheme.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Directory written by `plan`.
    #[arg(long)]
    pub scheme: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Also write one CSV row per trial here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub code: CodeSelector,
    /// Comma-separated numbers of subfunctions L.
    #[arg(long, value_delimiter = ',', required = true)]
    pub l_sweep: Vec<usize>,
    /// Random demands per L.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Leave out wall-time columns so output is byte-reproducible.
    #[arg(long)]
    pub omit_timing: bool,
}

/// Failure of a CLI run, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_budget() {
                EXIT_BUDGET
            } else {
                EXIT_VALIDATION
            },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CliResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_VALIDATION;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let budget = Budget {
        codewords: cli.budget_codewords,
        table_entries: cli.budget_table_entries,
    };
    match &cli.command {
        Command::Analyze { code } => cmd_analyze(code, &budget, cli.format, out),
        Command::Plan(args) => cmd_plan(args, &budget, cli.format, out, err),
        Command::Simulate(args) => cmd_simulate(args, cli.seed, cli.format, out),
        Command::Bench(args) => cmd_bench(args, &budget, cli.seed, cli.format, out),
        Command::ReproduceExample { corrupt_fixture } => {
            cmd_reproduce_example(*corrupt_fixture, &budget, out)
        }
    }
}

fn csv_line<T: fmt::Display>(fields: &[T]) -> String {
    let cells: Vec<String> = fields.iter().map(|f| f.to_string()).collect();
    cells.join(",") + "\n"
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable") + "\n"
}

pub fn cmd_analyze(
    selector: &CodeSelector,
    budget: &Budget,
    format: OutputFormat,
    out: &mut dyn Write,
) -> CliResult {
    let p = selector.build(budget)?.params();
    let text = match format {
        OutputFormat::Json => json_line(&p),
        OutputFormat::Csv => {
            "n,k,d,tau,rho,mu_tau,class\n".to_string()
                + &csv_line(&[
                    p.n.to_string(),
                    p.k.to_string(),
                    p.d.to_string(),
                    p.tau.to_string(),
                    p.rho.to_string(),
                    p.mu_tau.clone(),
                    p.class.to_string(),
                ])
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn load_code(selector: &CodeSelector, cache: Option<&Path>, budget: &Budget) -> Result<LinearCode> {
    let code = selector.build(budget)?;
    match cache {
        Some(path) if path.exists() => {
            let table = SyndromeTable::load(code.parity_check(), path)?;
            code.with_table(table)
        }
        Some(path) => {
            code.table().save(path)?;
            Ok(code)
        }
        None => Ok(code),
    }
}

/// Writes `D.txt`, `E.txt`, `F.txt` and `scheme.json` into `dir`.
pub fn write_bundle(dir: &Path, scheme: &ComputingScheme, code: &LinearCode) -> Result<String> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("D.txt"), scheme.decoding().to_text())?;
    std::fs::write(dir.join("E.txt"), scheme.encoding().to_text())?;
    std::fs::write(dir.join("F.txt"), scheme.demand().matrix().to_text())?;
    let summary = serde_json::to_string_pretty(&SchemeSummary::new(scheme, code))? + "\n";
    std::fs::write(dir.join("scheme.json"), &summary)?;
    Ok(summary)
}

/// Reads a bundle written by [`write_bundle`], re-checking `D E = F`.
pub fn read_bundle(dir: &Path) -> Result<ComputingScheme> {
    let read = |name: &str| read_matrix(&dir.join(name), MatrixFormat::Text, EntryPolicy::Strict);
    let (d, e, f) = (read("D.txt")?, read("E.txt")?, read("F.txt")?);
    ComputingScheme::from_parts(DemandMatrix::allowing_duplicates(f), d, e)
}

pub fn cmd_plan(
    args: &PlanArgs,
    budget: &Budget,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let policy = if args.reduce_entries {
        EntryPolicy::Reduce
    } else {
        EntryPolicy::Strict
    };
    // Cheap validation first: the demand file and the code's shape.
    let f = match &args.demand {
        Some(path) => Some(read_matrix(path, args.input_format, policy)?),
        None => None,
    };
    let h = args.code.parity_check()?;
    if let Some(f) = &f {
        if f.q() != h.q() {
            return Err(Error::FieldMismatch {
                left: f.q(),
                right: h.q(),
            }
            .into());
        }
        if f.rows() != h.rows() {
            return Err(Error::Dimension(format!(
                "demand has {} users but {} has {} check rows",
                f.rows(),
                args.code,
                h.rows()
            ))
            .into());
        }
    }
    let demand = match f {
        Some(f) if args.allow_duplicate_columns => {
            let d = DemandMatrix::allowing_duplicates(f);
            for (first, repeat) in d.duplicates() {
                writeln!(
                    err,
                    "warning: demand column {} repeats column {}",
                    repeat, first
                )?;
            }
            d
        }
        Some(f) => DemandMatrix::new(f)?,
        None => planner::maximal_basis_demand(h.q(), h.rows(), budget)?,
    };

    let code = load_code(&args.code, args.cache_table.as_deref(), budget)?;
    let scheme = planner::plan(demand, &code)?;
    let summary = write_bundle(&args.out, &scheme, &code)?;
    let text = match format {
        OutputFormat::Json => summary,
        OutputFormat::Csv => {
            let b = BoundReport::evaluate(&scheme, &code);
            let opt = |v: Option<u128>| v.map_or(String::new(), |x| x.to_string());
            "gamma,lambda,gamma_ub,lambda_ub,gamma_lb,lambda_lb,qp_gamma_ub,qp_lambda_ub\n"
                .to_string()
                + &csv_line(&[
                    scheme.gamma().to_string(),
                    scheme.lambda().to_string(),
                    b.gamma_ub.to_string(),
                    b.lambda_ub.to_string(),
                    opt(b.gamma_lb),
                    opt(b.lambda_lb),
                    opt(b.qp_gamma_ub),
                    opt(b.qp_lambda_ub),
                ])
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

pub fn cmd_simulate(
    args: &SimulateArgs,
    seed: u64,
    format: OutputFormat,
    out: &mut dyn Write,
) -> CliResult {
    let scheme = read_bundle(&args.scheme)?;
    let report = simulator::random_trials(&scheme, args.trials, seed)?;
    if let Some(path) = &args.csv {
        std::fs::write(path, report.to_csv())?;
    }
    let text = match format {
        OutputFormat::Json => json_line(&report),
        OutputFormat::Csv => {
            "trials,pass_rate,locality_ok,lambda,message_count\n".to_string()
                + &csv_line(&[
                    report.trials.to_string(),
                    report.pass_rate.to_string(),
                    report.locality_ok.to_string(),
                    report.lambda.to_string(),
                    report.message_count.to_string(),
                ])
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub l: usize,
    pub trial: usize,
    pub measured_gamma: usize,
    pub measured_lambda: usize,
    pub bound_gamma: u128,
    pub bound_lambda: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub build_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan_ms: Option<f64>,
}

/// Demand with `l` distinct columns drawn uniformly from GF(q)^K.
pub fn random_distinct_demand(
    code: &LinearCode,
    l: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DemandMatrix> {
    let total = code.syndrome_count() as usize;
    if l > total {
        return Err(Error::Invalid(format!(
            "L = {} exceeds the {} distinct columns available",
            l, total
        )));
    }
    let (q, k) = (code.q(), code.redundancy());
    let columns: Vec<Vec<u32>> = sample(rng, total, l)
        .into_iter()
        .map(|i| syndrome_from_index(i, q, k))
        .collect();
    DemandMatrix::new(FieldMatrix::from_columns(code.field(), k, &columns)?)
}

pub fn bench_rows(args: &BenchArgs, budget: &Budget, seed: u64) -> Result<Vec<BenchRow>> {
    if args.l_sweep.is_empty() {
        return Err(Error::Invalid("empty L sweep".into()));
    }
    if args.trials == 0 {
        return Err(Error::Invalid(
            "at least one trial per L is required".into(),
        ));
    }
    let h = args.code.parity_check()?;
    let total = crate::checked_pow(h.q() as u128, h.rows()).unwrap_or(u128::MAX);
    if let Some(&bad) = args.l_sweep.iter().find(|&&l| l == 0 || l as u128 > total) {
        return Err(Error::Invalid(format!(
            "L = {} outside [1, {}]",
            bad, total
        )));
    }

    let started = Instant::now();
    let code = args.code.build(budget)?;
    let build_ms = started.elapsed().as_secs_f64() * 1e3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &l in &args.l_sweep {
        for trial in 0..args.trials {
            let demand = random_distinct_demand(&code, l, &mut rng)?;
            let started = Instant::now();
            let scheme = planner::plan(demand, &code)?;
            let plan_ms = started.elapsed().as_secs_f64() * 1e3;
            rows.push(BenchRow {
                l,
                trial,
                measured_gamma: scheme.gamma(),
                measured_lambda: scheme.lambda(),
                bound_gamma: planner::bound_gamma(&code, l),
                bound_lambda: planner::bound_lambda(&code, l),
                build_ms: (!args.omit_timing).then_some(build_ms),
                plan_ms: (!args.omit_timing).then_some(plan_ms),
            });
        }
    }
    Ok(rows)
}

pub fn cmd_bench(
    args: &BenchArgs,
    budget: &Budget,
    seed: u64,
    format: OutputFormat,
    out: &mut dyn Write,
) -> CliResult {
    let rows = bench_rows(args, budget, seed)?;
    let text = match format {
        OutputFormat::Json => json_line(&rows),
        OutputFormat::Csv => {
            let mut s =
                String::from("l,trial,measured_gamma,measured_lambda,bound_gamma,bound_lambda");
            if !args.omit_timing {
                s.push_str(",build_ms,plan_ms");
            }
            s.push('\n');
            for r in &rows {
                let mut cells = vec![
                    r.l.to_string(),
                    r.trial.to_string(),
                    r.measured_gamma.to_string(),
                    r.measured_lambda.to_string(),
                    r.bound_gamma.to_string(),
                    r.bound_lambda.to_string(),
                ];
                if let (Some(b), Some(p)) = (r.build_ms, r.plan_ms) {
                    cells.push(format!("{:.3}", b));
                    cells.push(format!("{:.3}", p));
                }
                s.push_str(&csv_line(&cells));
            }
            s
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// One checked claim of the worked example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn one_based(set: &[usize]) -> Vec<usize> {
    set.iter().map(|i| i + 1).collect()
}

/// Plans the embedded example from its demand and the ternary Golay code
/// and compares every derived quantity with the embedded expectations.
pub fn reproduce_example(corrupt_fixture: bool, budget: &Budget) -> Result<Vec<Check>> {
    let code = codes::golay_ternary(budget)?;
    let scheme = planner::plan(DemandMatrix::new(fixtures::example_f())?, &code)?;
    let mut expected_e = fixtures::example_e();
    if corrupt_fixture {
        let v = expected_e.field().add(expected_e.get(0, 0), 1);
        expected_e.set(0, 0, v);
    }

    let mut checks = vec![
        check(
            "D equals the embedded decoding matrix",
            scheme.decoding() == &fixtures::example_d(),
            "",
        ),
        check(
            "D E = F",
            &scheme.decoding().mat_mul(scheme.encoding())? == scheme.demand().matrix(),
            "",
        ),
        check(
            "E matches the embedded matrix entry for entry",
            scheme.encoding() == &expected_e,
            format!(
                "{} differing entries",
                scheme
                    .encoding()
                    .entries()
                    .iter()
                    .zip(expected_e.entries())
                    .filter(|(a, b)| a != b)
                    .count()
            ),
        ),
        check(
            "gamma = 21",
            scheme.gamma() == fixtures::EXAMPLE_GAMMA,
            format!("gamma = {}", scheme.gamma()),
        ),
        check(
            "lambda = 3",
            scheme.lambda() == fixtures::EXAMPLE_LAMBDA,
            format!("lambda = {}", scheme.lambda()),
        ),
    ];
    for (n, expected) in fixtures::EXAMPLE_JOBS.iter().enumerate() {
        let got = one_based(&scheme.jobs()[n]);
        checks.push(check(
            format!("S_{}", n + 1),
            got == *expected,
            format!("{:?}", got),
        ));
    }
    for (n, expected) in fixtures::EXAMPLE_AUDIENCES.iter().enumerate() {
        let got = one_based(&scheme.audiences()[n]);
        checks.push(check(
            format!("T_{}", n + 1),
            got == *expected,
            format!("{:?}", got),
        ));
    }
    let sim = simulator::random_trials(&scheme, 100, 42)?;
    checks.push(check(
        "100 seeded trials decode F w",
        sim.pass_rate == 1.0 && sim.locality_ok,
        format!("pass_rate = {}", sim.pass_rate),
    ));
    Ok(checks)
}

pub fn cmd_reproduce_example(
    corrupt_fixture: bool,
    budget: &Budget,
    out: &mut dyn Write,
) -> CliResult {
    let checks = reproduce_example(corrupt_fixture, budget)?;
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            writeln!(out, "{} {}", status, c.name)?;
        } else {
            writeln!(out, "{} {} ({})", status, c.name, c.detail)?;
        }
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(Failure {
            code: EXIT_ASSERTION,
            message: format!("{} of {} checks failed", failed, checks.len()),
        });
    }
    Ok(())
}
