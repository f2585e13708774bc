//! Exit criteria. Each criterion prints one PASS/FAIL line; the binary
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use bigeven::genfun;
use bigeven::stats;
use bigeven::verify::{self, VerifyConfig};
use bigeven::{Threshold, YPolynomial};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn th(k: u32) -> Threshold {
    Threshold::new(k as i64).unwrap()
}

fn pow2(n: usize) -> BigInt {
    BigInt::one() << n
}

fn all_comps(n: usize) -> BigInt {
    if n == 0 {
        BigInt::one()
    } else {
        pow2(n - 1)
    }
}

fn expect_eq(what: &str, got: BigInt, want: i64, fails: &mut Vec<String>) {
    if got != BigInt::from(want) {
        fails.push(format!("{what} = {got}, expected {want}"));
    }
}

fn criterion_1() -> Outcome {
    let t = th(12);
    let mut fails = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut timed = |f: &mut dyn FnMut()| {
        let start = Instant::now();
        f();
        slowest = slowest.max(start.elapsed());
    };
    timed(&mut || expect_eq("c(12,30)", stats::avoid_count(t, 30), 536_470_425, &mut fails));
    timed(&mut || {
        let (e, o) = stats::parity_counts(t, 30).unwrap();
        expect_eq("E(12,30)", e, 536_470_436, &mut fails);
        expect_eq("O(12,30)", o, 400_476, &mut fails);
    });
    timed(&mut || expect_eq("T(12,30)", stats::total_count(t, 30), 400_498, &mut fails));
    timed(&mut || {
        let l = stats::late_count(t, 5, 30).unwrap();
        expect_eq("L(12,5,30)", l, 536_536_162, &mut fails);
    });
    timed(&mut || {
        let f = stats::first_at_count(t, 5, 30).unwrap();
        expect_eq("F(12,5,30)", f, 27_524, &mut fails);
    });
    if slowest >= Duration::from_secs(1) {
        fails.push(format!("slowest evaluation took {slowest:?}"));
    }
    if fails.is_empty() {
        Ok(format!("all five values exact, slowest {slowest:?}"))
    } else {
        Err(fails.join("; "))
    }
}

fn criterion_2() -> Outcome {
    let t = th(2);
    let want = [
        YPolynomial::one(),
        YPolynomial::from_i64s(&[1]),
        YPolynomial::from_i64s(&[2]),
        YPolynomial::from_i64s(&[4]),
        YPolynomial::from_i64s(&[7, 1]),
    ];
    let got = genfun::build_F(t).series(4);
    for (n, w) in want.iter().enumerate() {
        if &got[n] != w {
            return Err(format!("f_{n} = {}, expected {w}", got[n]));
        }
    }
    Ok(format!("f_4(y) = {}", got[4]))
}

fn criterion_3() -> Outcome {
    let cfg = VerifyConfig {
        k_max: 6,
        n_max: 18,
        ell_max: 4,
        numeric: false,
        ..Default::default()
    };
    let start = Instant::now();
    let summary = verify::run(&cfg).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(m) = summary.first_mismatch {
        return Err(m.to_string());
    }
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    let checks: usize = summary.rows.iter().map(|r| r.oracle_checks).sum();
    Ok(format!("{checks} comparisons in {elapsed:?}"))
}

fn criterion_4() -> Outcome {
    let cfg = VerifyConfig {
        k_max: 12,
        n_max: 60,
        ell_max: 5,
        oracle: false,
        numeric: true,
        ..Default::default()
    };
    let summary = verify::run(&cfg).map_err(|e| e.to_string())?;
    if !summary.errors.is_empty() {
        return Err(summary.errors.join("; "));
    }
    let failures: usize = summary.rows.iter().map(|r| r.numeric_failures).sum();
    if let Some(m) = summary.first_mismatch {
        return Err(format!("{failures} failures, first: {m}"));
    }
    let checks: usize = summary.rows.iter().map(|r| r.numeric_checks).sum();
    Ok(format!("{checks} comparisons within tolerance"))
}

fn recurrence_residual(f: &[YPolynomial], e: usize, n: usize) -> YPolynomial {
    let at = |m: isize| -> YPolynomial {
        if m < 0 {
            YPolynomial::zero()
        } else {
            f[m as usize].clone()
        }
    };
    let n = n as isize;
    let e = e as isize;
    let two = YPolynomial::constant(BigInt::from(2));
    let y_minus_1 = YPolynomial::from_i64s(&[-1, 1]);
    let lhs = &(&(&at(n) - &(&two * &at(n - 1))) - &at(n - 2)) + &(&two * &at(n - 3));
    &lhs - &(&y_minus_1 * &(&at(n - e) - &at(n - e - 1)))
}

fn identities_at(k: u32, ell: u32, n: usize) -> Result<(), String> {
    let t = th(k);
    let a = stats::count_by_t(t, n);
    let sum: BigInt = a.iter().sum();
    if sum != all_comps(n) {
        return Err(format!("k={k} n={n}: sum of a_t = {sum}"));
    }
    if n >= 1 {
        let (e, o) = stats::parity_counts(t, n).unwrap();
        if &e + &o != pow2(n - 1) {
            return Err(format!("k={k} n={n}: E+O = {}", e + o));
        }
    }
    let weighted: BigInt = a
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigInt::from(i))
        .sum();
    if weighted != stats::total_count(t, n) {
        return Err(format!("k={k} n={n}: T != sum t*a_t"));
    }
    if a.first().cloned().unwrap_or_default() != stats::avoid_count(t, n) {
        return Err(format!("k={k} n={n}: a_0 != c"));
    }
    let exactly = genfun::exactly_allowed_gf(t, ell).unwrap().coeff(n);
    let lhs = stats::late_count(t, ell, n).unwrap();
    let rhs = exactly + stats::first_at_count(t, ell, n).unwrap() + stats::late_count(t, ell + 1, n).unwrap();
    if lhs != rhs {
        return Err(format!("k={k} ell={ell} n={n}: telescoping {lhs} != {rhs}"));
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 256,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(1u32..=12, 0u32..=6, 0usize..=200), |(k, ell, n)| {
            identities_at(k, ell, n).map_err(TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    for k in 1..=8 {
        let t = th(k);
        let f = genfun::build_F(t).series(200);
        for n in 4..=200 {
            let r = recurrence_residual(&f, t.min_big(), n);
            if !r.is_zero() {
                return Err(format!("k={k} n={n}: residual {r}"));
            }
        }
    }
    Ok("identities hold on 256 random cases, recurrence residual zero for k 1..8".into())
}

fn criterion_6() -> Outcome {
    for k in 1..=20u32 {
        let t = th(k);
        for n in 1..=k as usize {
            if stats::avoid_count(t, n) != pow2(n - 1) {
                return Err(format!("k={k} n={n}: c"));
            }
            if !stats::parity_counts(t, n).unwrap().1.is_zero() {
                return Err(format!("k={k} n={n}: O"));
            }
            if !stats::total_count(t, n).is_zero() {
                return Err(format!("k={k} n={n}: T"));
            }
            for ell in 0..=5 {
                if !stats::first_at_count(t, ell, n).unwrap().is_zero() {
                    return Err(format!("k={k} ell={ell} n={n}: F"));
                }
            }
        }
        if !stats::avoid_count(t, 0).is_one() || !stats::total_count(t, 0).is_zero() {
            return Err(format!("k={k}: c(0) or T(0)"));
        }
        if stats::parity_counts(t, 0).is_ok() || stats::average_count(t, 0).is_ok() {
            return Err(format!("k={k}: parity or average defined at n=0"));
        }
        for ell in 0..=5 {
            let want = if ell == 0 { BigInt::one() } else { BigInt::zero() };
            if stats::late_count(t, ell, 0).unwrap() != want {
                return Err(format!("k={k} ell={ell}: L(0)"));
            }
            if !stats::first_at_count(t, ell, 0).unwrap().is_zero() {
                return Err(format!("k={k} ell={ell}: F(0)"));
            }
        }
    }
    Ok("k >= n and n = 0 conventions hold for k 1..20".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let table = stats::build_table(th(12), 5, 5000).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if table.rows.len() != 5001 {
        return Err(format!("{} rows", table.rows.len()));
    }
    if elapsed >= Duration::from_secs(10) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("5001 rows in {elapsed:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("worked values at k=12, n=30", criterion_1),
        ("bivariate polynomials for k=2", criterion_2),
        ("oracle equivalence", criterion_3),
        ("numeric cross-check", criterion_4),
        ("identity suite", criterion_5),
        ("degenerate suite", criterion_6),
        ("scale check", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
