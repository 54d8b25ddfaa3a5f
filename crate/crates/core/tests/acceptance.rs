//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use ldc::cli::run;
use ldc::codes::{self, LinearCode};
use ldc::planner::{self, bound_gamma, bound_lambda, quasi_perfect_bounds, DemandMatrix};
use ldc::syndrome::syndrome_from_index;
use ldc::{fixtures, simulator, Budget, Classification, Field, FieldMatrix, SyndromeTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn budget() -> Budget {
    Budget::default()
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<Duration, String> {
    let took = started.elapsed();
    ensure!(took < limit, "{} took {:?}, limit {:?}", what, took, limit);
    Ok(took)
}

/// Closed-form `(lambda, gamma)` sums up to radius `t`, from scratch.
fn closed_form(q: u32, n: usize, t: usize) -> (u128, u128) {
    let (q, n) = (q as u128, n as u128);
    let lam = (1..=t as u128)
        .map(|i| binom(n - 1, i - 1) * (q - 1).pow(i as u32))
        .sum();
    let gam = (1..=t as u128)
        .map(|i| binom(n, i) * (q - 1).pow(i as u32) * i)
        .sum();
    (lam, gam)
}

fn ac1_paper_example() -> Outcome {
    let started = Instant::now();
    let code = codes::golay_ternary(&budget()).map_err(|e| e.to_string())?;
    let scheme = planner::plan(DemandMatrix::new(fixtures::example_f()).unwrap(), &code)
        .map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(5), started, "planning")?;
    ensure!(scheme.decoding() == &fixtures::example_d(), "D differs");
    let diff = scheme
        .encoding()
        .entries()
        .iter()
        .zip(fixtures::example_e().entries())
        .filter(|(a, b)| a != b)
        .count();
    ensure!(diff == 0, "E differs in {} entries", diff);
    ensure!(scheme.gamma() == 21, "gamma = {}", scheme.gamma());
    ensure!(scheme.lambda() == 3, "lambda = {}", scheme.lambda());
    ensure!(
        scheme.jobs() == fixtures::zero_based(&fixtures::EXAMPLE_JOBS).as_slice(),
        "job sets differ: {:?}",
        scheme.jobs()
    );
    ensure!(
        scheme.audiences() == fixtures::zero_based(&fixtures::EXAMPLE_AUDIENCES).as_slice(),
        "audiences differ: {:?}",
        scheme.audiences()
    );
    Ok(format!(
        "E identical, gamma=21, lambda=3, S_1..S_11 and T_1..T_11 match ({:?})",
        took
    ))
}

fn ac2_perfect_parameters() -> Outcome {
    let cases: [(&str, usize, usize, usize); 3] = [
        ("golay-ternary", 5, 2, 2),
        ("hamming:2:3", 3, 1, 1),
        ("golay-binary", 7, 3, 3),
    ];
    let mut notes = Vec::new();
    for (sel, d, tau, rho) in cases {
        let started = Instant::now();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let status = run(["ldc", "analyze", sel], &mut out, &mut err);
        let took = within(Duration::from_secs(30), started, sel)?;
        ensure!(status == 0, "{}: exit {}", sel, status);
        let v: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
        ensure!(
            v["d"] == d
                && v["tau"] == tau
                && v["rho"] == rho
                && v["mu_tau"] == "1/1"
                && v["class"] == "Perfect",
            "{}: got {}",
            sel,
            v
        );
        notes.push(format!(
            "{} d={} tau={} rho={} mu=1 ({:?})",
            sel, d, tau, rho, took
        ));
    }
    Ok(notes.join("; "))
}

fn ac3_perfect_equalities() -> Outcome {
    let cases: [(&str, FieldMatrix, u128, u128, u64); 3] = [
        (
            "golay-ternary",
            codes::golay_ternary_parity_check(),
            42,
            462,
            60,
        ),
        (
            "hamming:2:3",
            codes::hamming_parity_check(2, 3).unwrap(),
            1,
            7,
            60,
        ),
        (
            "golay-binary",
            codes::golay_binary_parity_check(),
            254,
            5842,
            60,
        ),
    ];
    let mut notes = Vec::new();
    for (name, h, lam, gam, secs) in cases {
        let started = Instant::now();
        let code = LinearCode::from_parity_check(&h, &budget()).map_err(|e| e.to_string())?;
        let demand =
            planner::maximal_basis_demand(h.q(), h.rows(), &budget()).map_err(|e| e.to_string())?;
        let scheme = planner::plan(demand, &code).map_err(|e| e.to_string())?;
        let took = within(Duration::from_secs(secs), started, name)?;
        let sums = closed_form(h.q(), h.cols(), code.tau());
        ensure!(sums == (lam, gam), "{}: closed form {:?}", name, sums);
        ensure!(
            planner::lower_bounds_maximal(&code) == sums,
            "{}: library sums {:?}",
            name,
            planner::lower_bounds_maximal(&code)
        );
        ensure!(
            (scheme.lambda() as u128, scheme.gamma() as u128) == sums,
            "{}: measured lambda={} gamma={}, expected {:?}",
            name,
            scheme.lambda(),
            scheme.gamma(),
            sums
        );
        notes.push(format!(
            "{} lambda={} gamma={} ({:?})",
            name, lam, gam, took
        ));
    }
    Ok(notes.join("; "))
}

fn random_codes(rng: &mut ChaCha8Rng, count: usize) -> Vec<FieldMatrix> {
    (0..count)
        .map(|_| {
            let q = [2u32, 3][rng.gen_range(0..2)];
            let n = rng.gen_range(3..=9);
            let max_k = if q == 2 { n - 1 } else { (n - 1).min(6) };
            let k = rng.gen_range(1..=max_k);
            random_full_rank(rng, q, k, n)
        })
        .collect()
}

/// Bound formulas evaluated from brute-force ball counts.
fn independent_bounds(h: &FieldMatrix, tau: usize, rho: usize, l: usize) -> (u128, u128) {
    let (q, n, k) = (h.q(), h.cols(), h.rows());
    let q_k = (q as u128).pow(k as u32);
    let uncovered = q_k - brute_ball_volume(q, n, tau);
    let (lam, gam) = closed_form(q, n, tau);
    (
        (l as u128).min(lam + uncovered),
        (n as u128 * l as u128).min(gam + uncovered * rho as u128),
    )
}

fn ac4_bound_compliance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut hs = vec![
        codes::repetition_parity_check(2, 3).unwrap(),
        codes::hamming_parity_check(2, 3).unwrap(),
        codes::golay_ternary_parity_check(),
        codes::extended_hamming_parity_check(3).unwrap(),
    ];
    hs.extend(random_codes(&mut rng, 20));
    let mut cases = 0;
    for h in &hs {
        let code = LinearCode::from_parity_check(h, &budget()).map_err(|e| e.to_string())?;
        let total = code.syndrome_count() as usize;
        for _ in 0..200 {
            let l = rng.gen_range(1..=total);
            let f = random_distinct_columns(&mut rng, h.q(), h.rows(), l);
            let scheme =
                planner::plan(DemandMatrix::new(f).unwrap(), &code).map_err(|e| e.to_string())?;
            let (lb, gb) = (bound_lambda(&code, l), bound_gamma(&code, l));
            ensure!(
                (lb, gb) == independent_bounds(h, code.tau(), code.rho(), l),
                "bound formula disagrees for\n{}",
                h.to_text()
            );
            ensure!(
                scheme.lambda() as u128 <= lb && scheme.gamma() as u128 <= gb,
                "L={} lambda={}>{} or gamma={}>{} for\n{}",
                l,
                scheme.lambda(),
                lb,
                scheme.gamma(),
                gb,
                h.to_text()
            );
            cases += 1;
        }
    }
    Ok(format!(
        "{} codes x 200 demands, {} / {} within both bounds",
        hs.len(),
        cases,
        cases
    ))
}

fn ac5_minimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    let mut hs = vec![
        codes::repetition_parity_check(2, 3).unwrap(),
        codes::hamming_parity_check(2, 3).unwrap(),
        codes::hamming_parity_check(3, 2).unwrap(),
        codes::extended_hamming_parity_check(3).unwrap(),
        codes::repetition_parity_check(3, 5).unwrap(),
        FieldMatrix::from_rows(Field::new(2).unwrap(), &[[1, 1, 1]]).unwrap(),
    ];
    hs.extend(random_codes(&mut rng, 20));
    let mut leaders = 0;
    for h in &hs {
        ensure!(h.cols() <= 10, "test set contains N > 10");
        let table = SyndromeTable::build(h, &budget()).map_err(|e| e.to_string())?;
        let best = brute_min_weights(h);
        let rows = rows_of(h);
        for (idx, &min) in best.iter().enumerate() {
            let s = syndrome_from_index(idx, h.q(), h.rows());
            let leader = table.decode(&s).map_err(|e| e.to_string())?;
            ensure!(
                naive_syndrome(&rows, h.q(), leader) == s,
                "leader for {:?} has wrong syndrome",
                s
            );
            ensure!(
                hamming_weight(leader) == min,
                "leader for {:?} has weight {}, brute force finds {}",
                s,
                hamming_weight(leader),
                min
            );
            leaders += 1;
        }
    }
    Ok(format!(
        "{} codes, {} leaders all minimum weight",
        hs.len(),
        leaders
    ))
}

fn ac6_quasi_perfect() -> Outcome {
    let h = codes::extended_hamming_parity_check(3).unwrap();
    let code = LinearCode::from_parity_check(&h, &budget()).map_err(|e| e.to_string())?;
    ensure!(
        code.classification() == Classification::QuasiPerfect,
        "class {}",
        code.classification()
    );
    ensure!(
        code.rho() == code.tau() + 1,
        "rho={} tau={}",
        code.rho(),
        code.tau()
    );
    let (lam_ub, gam_ub) = quasi_perfect_bounds(&code).map_err(|e| e.to_string())?;
    let n = h.cols() as u128;
    let independent = (
        closed_form(2, h.cols(), 1).0 + binom(n, 2),
        closed_form(2, h.cols(), 2).1,
    );
    ensure!(
        (lam_ub, gam_ub) == (29, 64),
        "bounds {:?}",
        (lam_ub, gam_ub)
    );
    ensure!(
        independent == (29, 64),
        "independent bounds {:?}",
        independent
    );
    let demand = planner::maximal_basis_demand(2, 4, &budget()).unwrap();
    let scheme = planner::plan(demand, &code).map_err(|e| e.to_string())?;
    ensure!(
        (scheme.lambda() as u128) < lam_ub && (scheme.gamma() as u128) < gam_ub,
        "lambda={} gamma={}",
        scheme.lambda(),
        scheme.gamma()
    );
    Ok(format!(
        "rho=2=tau+1, lambda={} < 29, gamma={} < 64",
        scheme.lambda(),
        scheme.gamma()
    ))
}

fn ac7_simulation() -> Outcome {
    let code = codes::golay_ternary(&budget()).unwrap();
    let scheme = planner::plan(DemandMatrix::new(fixtures::example_f()).unwrap(), &code).unwrap();
    let report = simulator::random_trials(&scheme, 100, 42).map_err(|e| e.to_string())?;
    ensure!(report.trials == 100, "ran {} trials", report.trials);
    ensure!(report.pass_rate == 1.0, "pass rate {}", report.pass_rate);
    let f = fixtures::example_f();
    for r in &report.records {
        ensure!(
            r.decoded == f.mul_vec(&r.files).unwrap(),
            "trial {} decoded wrong",
            r.trial
        );
    }
    ensure!(report.locality_ok, "a server read outside its job set");
    let (delays, lambda) = simulator::delay_accounting(&scheme);
    ensure!(
        lambda == scheme.lambda(),
        "delay accounting {} vs planner {}",
        lambda,
        scheme.lambda()
    );
    ensure!(
        delays == vec![3, 2, 2, 1, 2, 3, 1, 1, 2, 2, 2],
        "delays {:?}",
        delays
    );
    Ok("100/100 trials decode F w, every server read exactly S_n".into())
}

fn ac8_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let f = dir.path().join("F.txt");
    std::fs::write(&f, fixtures::example_f().to_text()).unwrap();
    let ldc = |args: &[&str]| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("ldc").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, out)
    };
    let mut bundles = Vec::new();
    for name in ["a", "b"] {
        let out_dir = dir.path().join(name);
        let (code, out) = ldc(&[
            "plan",
            "--demand",
            f.to_str().unwrap(),
            "--code",
            "golay-ternary",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        ensure!(code == 0, "plan exit {}", code);
        let files: Vec<Vec<u8>> = ["D.txt", "E.txt", "F.txt", "scheme.json"]
            .iter()
            .map(|n| std::fs::read(out_dir.join(n)).unwrap())
            .collect();
        bundles.push((out, files));
    }
    ensure!(bundles[0] == bundles[1], "plan outputs differ");

    for h in [
        codes::golay_ternary_parity_check(),
        codes::golay_binary_parity_check(),
    ] {
        let a = SyndromeTable::build(&h, &budget())
            .unwrap()
            .to_cache_bytes();
        let b = SyndromeTable::build(&h, &budget())
            .unwrap()
            .to_cache_bytes();
        ensure!(a == b, "table bytes differ");
    }

    let scheme_dir = dir.path().join("a");
    let mut sims = Vec::new();
    for name in ["t1.csv", "t2.csv"] {
        let csv = dir.path().join(name);
        let (code, out) = ldc(&[
            "simulate",
            "--scheme",
            scheme_dir.to_str().unwrap(),
            "--trials",
            "50",
            "--seed",
            "7",
            "--csv",
            csv.to_str().unwrap(),
        ]);
        ensure!(code == 0, "simulate exit {}", code);
        sims.push((out, std::fs::read(&csv).unwrap()));
    }
    ensure!(sims[0] == sims[1], "simulate outputs differ");
    Ok("plan bundle, syndrome tables and simulate output byte-identical across runs".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1 worked-example reproduction", ac1_paper_example),
        ("AC2 perfect-code parameters", ac2_perfect_parameters),
        ("AC3 maximal-basis equalities", ac3_perfect_equalities),
        ("AC4 bound compliance", ac4_bound_compliance),
        ("AC5 decoder minimality", ac5_minimality),
        ("AC6 quasi-perfect bounds", ac6_quasi_perfect),
        ("AC7 end-to-end simulation", ac7_simulation),
        ("AC8 determinism", ac8_determinism),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(criterion)).unwrap_or_else(|p| {
            Err(format!(
                "panicked: {:?}",
                p.downcast_ref::<String>()
                    .map(String::as_str)
                    .or(p.downcast_ref::<&str>().copied())
            ))
        });
        match outcome {
            Ok(detail) => println!("PASS {}: {}", name, detail),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {}", name, why);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
