//! Cross-engine verification: exact tables against the brute-force oracle,
//! and the numeric closed forms against the exact tables.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::genfun::Threshold;
use crate::numeric::ClosedForms;
use crate::oracle;
use crate::stats::{self, StatTable};

/// Relative tolerance for numeric values (absolute when the exact value is 0).
pub const NUMERIC_REL_TOL: f64 = 1e-6;

/// Exact values up to this size must be recovered by rounding.
pub const ROUNDING_LIMIT: f64 = 1e12;

/// Does the floating-point `numeric` value agree with `exact`?
///
/// Checks the relative (or absolute at zero) tolerance, a small imaginary
/// part, and for exact values up to [`ROUNDING_LIMIT`] that rounding gives
/// back the exact integer.
pub fn numeric_matches(numeric: Complex64, exact: &BigInt) -> bool {
    let e = exact.to_f64().unwrap_or(f64::INFINITY);
    let scale = if exact.is_zero() { 1.0 } else { e.abs() };
    let re_err = (numeric.re - e).abs();
    let im_err = numeric.im.abs();
    if re_err.is_nan() || re_err > NUMERIC_REL_TOL * scale {
        return false;
    }
    if im_err.is_nan() || im_err > NUMERIC_REL_TOL * (1.0 + e.abs()) {
        return false;
    }
    if exact.abs().to_f64().unwrap_or(f64::INFINITY) <= ROUNDING_LIMIT {
        return BigInt::from(numeric.re.round() as i64) == *exact;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub k_max: u32,
    pub n_max: usize,
    pub ell_max: u32,
    pub oracle_cap: usize,
    pub oracle: bool,
    pub numeric: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            k_max: 6,
            n_max: 18,
            ell_max: 4,
            oracle_cap: oracle::DEFAULT_CAP,
            oracle: true,
            numeric: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub check: &'static str,
    pub k: u32,
    pub ell: Option<u32>,
    pub n: usize,
    pub field: &'static str,
    pub expected: String,
    pub got: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ell = self.ell.map_or("-".to_string(), |l| l.to_string());
        write!(
            f,
            "{} mismatch at k={} ell={} n={} field={}: expected {}, got {}",
            self.check, self.k, ell, self.n, self.field, self.expected, self.got
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KSummary {
    pub k: u32,
    pub oracle_checks: usize,
    pub oracle_failures: usize,
    pub numeric_checks: usize,
    pub numeric_failures: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub rows: Vec<KSummary>,
    pub first_mismatch: Option<Mismatch>,
    /// Closed forms that could not be built at all.
    pub errors: Vec<String>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none() && self.errors.is_empty()
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4}  {:>16}  {:>16}", "k", "oracle", "numeric")?;
        for r in &self.rows {
            let cell = |checks: usize, fails: usize| {
                if fails == 0 {
                    format!("ok {checks}")
                } else {
                    format!("FAIL {fails}/{checks}")
                }
            };
            writeln!(
                f,
                "{:>4}  {:>16}  {:>16}",
                r.k,
                cell(r.oracle_checks, r.oracle_failures),
                cell(r.numeric_checks, r.numeric_failures)
            )?;
        }
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        if let Some(m) = &self.first_mismatch {
            writeln!(f, "first {m}")?;
        }
        Ok(())
    }
}

/// Run every check against the exact engine.
pub fn run(config: &VerifyConfig) -> Result<Summary, Error> {
    run_with(config, stats::build_table)
}

/// Run every check against an arbitrary table builder.
pub fn run_with<F>(config: &VerifyConfig, exact: F) -> Result<Summary, Error>
where
    F: Fn(Threshold, u32, usize) -> Result<StatTable, Error>,
{
    let mut summary = Summary::default();
    for k in 1..=config.k_max {
        let t = Threshold::new(k as i64)?;
        let tables: Vec<StatTable> = (0..=config.ell_max)
            .map(|ell| exact(t, ell, config.n_max))
            .collect::<Result<_, _>>()?;
        let mut row = KSummary {
            k,
            ..Default::default()
        };
        let fail = |m: Mismatch, summary: &mut Summary| {
            if summary.first_mismatch.is_none() {
                summary.first_mismatch = Some(m);
            }
        };

        for n in (0..=config.n_max).filter(|_| config.oracle) {
            let rep = oracle::aggregate_capped(n, t, config.ell_max, config.oracle_cap)?;
            let base = &tables[0].rows[n];
            let hist: Vec<BigInt> = rep.histogram.iter().map(|&h| BigInt::from(h)).collect();
            let mut scalar = vec![
                ("a_t", None, format!("{hist:?}"), format!("{:?}", base.a)),
                ("c", None, rep.c.to_string(), base.c.to_string()),
                ("T", None, rep.total.to_string(), base.total.to_string()),
            ];
            if n > 0 {
                scalar.push(("E", None, rep.even.to_string(), opt_str(&base.even)));
                scalar.push(("O", None, rep.odd.to_string(), opt_str(&base.odd)));
            }
            for (ell, table) in tables.iter().enumerate() {
                let r = &table.rows[n];
                let e = Some(ell as u32);
                scalar.push(("L", e, rep.late[ell].to_string(), r.late.to_string()));
                scalar.push(("F", e, rep.first_at[ell].to_string(), r.first_at.to_string()));
                scalar.push((
                    "late_exists",
                    e,
                    rep.late_exists[ell].to_string(),
                    r.late_exists.to_string(),
                ));
            }
            for (field, ell, expected, got) in scalar {
                row.oracle_checks += 1;
                if expected != got {
                    row.oracle_failures += 1;
                    fail(
                        Mismatch {
                            check: "oracle",
                            k,
                            ell,
                            n,
                            field,
                            expected,
                            got,
                        },
                        &mut summary,
                    );
                }
            }
        }

        if config.numeric {
            for (ell, table) in tables.iter().enumerate() {
                let forms = match ClosedForms::new(t, ell as u32) {
                    Ok(f) => f,
                    Err(e) => {
                        summary.errors.push(format!("k={k} ell={ell}: {e}"));
                        continue;
                    }
                };
                for r in &table.rows {
                    let num = forms.row(r.n);
                    let mut pairs = vec![
                        ("F", num.first_at, r.first_at.clone()),
                        ("L", num.late, r.late.clone()),
                    ];
                    if ell == 0 {
                        pairs.push(("c", num.c, r.c.clone()));
                        pairs.push(("T", num.total, r.total.clone()));
                        if let (Some(ne), Some(no), Some(e), Some(o)) =
                            (num.even, num.odd, &r.even, &r.odd)
                        {
                            pairs.push(("E", ne, e.clone()));
                            pairs.push(("O", no, o.clone()));
                        }
                    }
                    for (field, got, expected) in pairs {
                        row.numeric_checks += 1;
                        if !numeric_matches(got, &expected) {
                            row.numeric_failures += 1;
                            fail(
                                Mismatch {
                                    check: "numeric",
                                    k,
                                    ell: Some(ell as u32),
                                    n: r.n,
                                    field,
                                    expected: expected.to_string(),
                                    got: format!("{got}"),
                                },
                                &mut summary,
                            );
                        }
                    }
                }
            }
        }
        summary.rows.push(row);
    }
    Ok(summary)
}

fn opt_str(v: &Option<BigInt>) -> String {
    v.as_ref().map(BigInt::to_string).unwrap_or_default()
}
