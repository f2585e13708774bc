//! Named statistics over compositions of `n`, computed exactly from the
//! generating functions in [`crate::genfun`].
//!
//! Conventions at `n = 0` follow the single empty composition: `c = 1`,
//! `T = 0`, `L = 1` only for `l = 0`, `F = 0`. Parity counts and the
//! average are not defined there.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::genfun::{self, Threshold};
use crate::poly::YPolynomial;

/// Reduced fraction with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Panics if `den` is zero.
    pub fn new(num: BigInt, den: BigInt) -> Self {
        Self(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// Number of compositions of `n`: `2^(n-1)`, and 1 for `n = 0`.
pub fn compositions_count(n: usize) -> BigInt {
    if n == 0 {
        BigInt::one()
    } else {
        BigInt::one() << (n - 1)
    }
}

/// `[a_{n,0}, a_{n,1}, ...]`, trimmed.
pub fn count_by_t(t: Threshold, n: usize) -> Vec<BigInt> {
    genfun::build_F(t)
        .series(n)
        .pop()
        .map(|f| f.coeffs().to_vec())
        .unwrap_or_default()
}

/// `f_n(y)` itself.
pub fn f_poly(t: Threshold, n: usize) -> YPolynomial {
    genfun::build_F(t).series(n).pop().unwrap_or_default()
}

/// `c_k(n)`, compositions with no large even part.
pub fn avoid_count(t: Threshold, n: usize) -> BigInt {
    genfun::avoid_gf(t).coeff(n)
}

/// `(E, O)`: compositions with an even / odd number of large even parts.
pub fn parity_counts(t: Threshold, n: usize) -> Result<(BigInt, BigInt), Error> {
    if n == 0 {
        return Err(Error::UndefinedAtZero("parity_counts"));
    }
    Ok(split_parity(&compositions_count(n), &genfun::signed_gf(t).coeff(n)))
}

fn split_parity(all: &BigInt, signed: &BigInt) -> (BigInt, BigInt) {
    let two = BigInt::from(2);
    ((all + signed) / &two, (all - signed) / &two)
}

/// `T_k(n)`, large even parts summed over all compositions.
pub fn total_count(t: Threshold, n: usize) -> BigInt {
    genfun::total_gf(t).coeff(n)
}

/// `T_k(n) / 2^(n-1)`.
pub fn average_count(t: Threshold, n: usize) -> Result<ExactRational, Error> {
    if n == 0 {
        return Err(Error::UndefinedAtZero("average_count"));
    }
    Ok(ExactRational::new(total_count(t, n), compositions_count(n)))
}

/// `L_{k,l}(n)`: at least `l` parts, none of the first `l` large even.
pub fn late_count(t: Threshold, ell: u32, n: usize) -> Result<BigInt, Error> {
    Ok(genfun::late_gf(t, ell)?.coeff(n))
}

/// `F_{k,l}(n)`: the first large even part is part `l + 1`.
pub fn first_at_count(t: Threshold, ell: u32, n: usize) -> Result<BigInt, Error> {
    Ok(genfun::first_at_gf(t, ell)?.coeff(n))
}

/// Compositions that contain a large even part whose first occurrence is at
/// position `l + 1` or later.
///
/// This is `L - c` corrected by the all-allowed compositions with fewer
/// than `l` parts, which `c` counts and `L` does not.
pub fn late_with_existence(t: Threshold, ell: u32, n: usize) -> Result<BigInt, Error> {
    let mut short = BigInt::zero();
    for j in 0..ell {
        short += genfun::exactly_allowed_gf(t, j)?.coeff(n);
    }
    Ok(late_count(t, ell, n)? - avoid_count(t, n) + short)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatRow {
    pub n: usize,
    #[serde(with = "crate::report::decimal_vec")]
    pub a: Vec<BigInt>,
    #[serde(with = "crate::report::decimal")]
    pub c: BigInt,
    #[serde(with = "crate::report::decimal_opt")]
    pub even: Option<BigInt>,
    #[serde(with = "crate::report::decimal_opt")]
    pub odd: Option<BigInt>,
    #[serde(with = "crate::report::decimal")]
    pub total: BigInt,
    #[serde(with = "crate::report::decimal")]
    pub late: BigInt,
    #[serde(with = "crate::report::decimal")]
    pub first_at: BigInt,
    #[serde(with = "crate::report::decimal")]
    pub late_exists: BigInt,
    #[serde(with = "crate::report::ratio_opt")]
    pub avg: Option<ExactRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatTable {
    pub k: u32,
    pub ell: u32,
    pub rows: Vec<StatRow>,
}

impl StatTable {
    /// Check the row identities; returns the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        for r in &self.rows {
            let all = compositions_count(r.n);
            let fail = |what: &str| Err(format!("n={}: {what}", r.n));
            let sum: BigInt = r.a.iter().sum();
            if sum != all {
                return fail("sum of a_t");
            }
            if r.a.first().cloned().unwrap_or_default() != r.c {
                return fail("a_0 != c");
            }
            let weighted: BigInt = r
                .a
                .iter()
                .enumerate()
                .map(|(t, a)| a * BigInt::from(t))
                .sum();
            if weighted != r.total {
                return fail("sum t*a_t != T");
            }
            if let (Some(e), Some(o)) = (&r.even, &r.odd) {
                if e + o != all || e.is_negative() || o.is_negative() {
                    return fail("E + O");
                }
                if *e < r.c {
                    return fail("E < c");
                }
            } else if r.n > 0 {
                return fail("missing parity");
            }
            if r.first_at.is_negative() || r.first_at > r.late || r.late > all {
                return fail("0 <= F <= L <= 2^(n-1)");
            }
            if r.late_exists.is_negative() || r.late_exists > r.late {
                return fail("late_exists range");
            }
        }
        Ok(())
    }
}

/// All columns for `0 <= n <= n_max`, one series pass per generating
/// function.
pub fn build_table(t: Threshold, ell: u32, n_max: usize) -> Result<StatTable, Error> {
    let late_g = genfun::late_gf(t, ell)?;
    let first_g = genfun::first_at_gf(t, ell)?;
    let short_g: Vec<_> = (0..ell)
        .map(|j| genfun::exactly_allowed_gf(t, j))
        .collect::<Result<_, _>>()?;

    let (fs, (scalars, short)) = rayon::join(
        || genfun::build_F(t).series(n_max),
        || {
            let series = rayon::join(
                || {
                    (
                        genfun::avoid_gf(t).series(n_max),
                        genfun::signed_gf(t).series(n_max),
                        genfun::total_gf(t).series(n_max),
                    )
                },
                || (late_g.series(n_max), first_g.series(n_max)),
            );
            let mut short = vec![BigInt::zero(); n_max + 1];
            for g in &short_g {
                for (acc, v) in short.iter_mut().zip(g.series(n_max)) {
                    *acc += v;
                }
            }
            (series, short)
        },
    );
    let ((c, signed, total), (late, first)) = scalars;

    let rows = (0..=n_max)
        .map(|n| {
            let all = compositions_count(n);
            let (even, odd) = if n == 0 {
                (None, None)
            } else {
                let (e, o) = split_parity(&all, &signed[n]);
                (Some(e), Some(o))
            };
            let avg = (n > 0).then(|| ExactRational::new(total[n].clone(), all.clone()));
            StatRow {
                n,
                a: fs[n].coeffs().to_vec(),
                c: c[n].clone(),
                even,
                odd,
                total: total[n].clone(),
                late: late[n].clone(),
                first_at: first[n].clone(),
                late_exists: &late[n] - &c[n] + &short[n],
                avg,
            }
        })
        .collect();
    Ok(StatTable {
        k: t.k(),
        ell,
        rows,
    })
}
