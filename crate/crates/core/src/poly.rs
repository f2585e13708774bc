//! Dense polynomials over arbitrary-precision integers and the rational
//! generating functions built from them.
//!
//! Every series in this crate is the expansion of `num / den` with
//! `den(0) = 1`, so coefficients come out of the linear recurrence
//! `a_n = p_n - sum_{j>=1} q_j a_{n-j}` without any division. Common
//! factors between numerator and denominator are never cancelled; the
//! recurrence does not care about them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Dense univariate polynomial with `BigInt` coefficients.
///
/// `coeffs[i]` is the coefficient of degree `i`. Trailing zeros are always
/// trimmed, so the zero polynomial is the empty list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^degree`.
    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `x^degree`.
    pub fn x_pow(degree: usize) -> Self {
        Self::monomial(BigInt::one(), degree)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Coefficients as `f64`; values beyond `f64` range become infinite.
    pub fn to_f64s(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    fn fmt_in(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        f.write_str(var)?;
                    } else {
                        write!(f, "{var}^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f, "x")
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        IntPolynomial::new(coeffs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntPolynomial::new(coeffs)
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                $tr::$m(&self, &rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty {
                $tr::$m(&self, rhs)
            }
        }
    )*};
}

forward_owned!(IntPolynomial, Add add, Sub sub, Mul mul);

/// Polynomial in `y` whose coefficient `t` is the number of compositions
/// with exactly `t` large even parts (when it is some `f_n`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct YPolynomial(IntPolynomial);

impl YPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        Self(IntPolynomial::new(coeffs))
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self(IntPolynomial::from_i64s(coeffs))
    }

    pub fn zero() -> Self {
        Self(IntPolynomial::zero())
    }

    pub fn one() -> Self {
        Self(IntPolynomial::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self(IntPolynomial::constant(c))
    }

    pub fn as_poly(&self) -> &IntPolynomial {
        &self.0
    }

    pub fn coeffs(&self) -> &[BigInt] {
        self.0.coeffs()
    }

    pub fn coeff(&self, t: usize) -> BigInt {
        self.0.coeff(t)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    pub fn eval(&self, y: &BigInt) -> BigInt {
        self.0.eval(y)
    }

    /// Value of `d/dy` at `y = 1`, i.e. `sum_t t * a_t`.
    pub fn derivative_at_one(&self) -> BigInt {
        self.0
            .coeffs()
            .iter()
            .enumerate()
            .map(|(t, a)| a * BigInt::from(t))
            .sum()
    }
}

impl From<IntPolynomial> for YPolynomial {
    fn from(p: IntPolynomial) -> Self {
        Self(p)
    }
}

impl fmt::Display for YPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_in(f, "y")
    }
}

impl Add for &YPolynomial {
    type Output = YPolynomial;
    fn add(self, rhs: &YPolynomial) -> YPolynomial {
        YPolynomial(&self.0 + &rhs.0)
    }
}

impl Sub for &YPolynomial {
    type Output = YPolynomial;
    fn sub(self, rhs: &YPolynomial) -> YPolynomial {
        YPolynomial(&self.0 - &rhs.0)
    }
}

impl Mul for &YPolynomial {
    type Output = YPolynomial;
    fn mul(self, rhs: &YPolynomial) -> YPolynomial {
        YPolynomial(&self.0 * &rhs.0)
    }
}

forward_owned!(YPolynomial, Add add, Sub sub, Mul mul);

/// A power series given as `num / den` with `den(0) = 1`.
///
/// The denominator is also kept as a product of factors with
/// multiplicities. Builders that know the factorization (`(1 - 2x)`,
/// `(1 - x)^l`, ...) record it so the numeric engine can use exact poles;
/// [`RationalGF::new`] records the denominator as a single factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGF {
    num: IntPolynomial,
    den: IntPolynomial,
    factors: Vec<(IntPolynomial, u32)>,
}

impl RationalGF {
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self, Error> {
        check_normalized(&den)?;
        Ok(Self {
            num,
            factors: vec![(den.clone(), 1)],
            den,
        })
    }

    /// Build from a factored denominator. Each factor must itself have
    /// constant term 1.
    pub fn from_factors(
        num: IntPolynomial,
        factors: Vec<(IntPolynomial, u32)>,
    ) -> Result<Self, Error> {
        let mut den = IntPolynomial::one();
        for (f, m) in &factors {
            check_normalized(f)?;
            den = &den * &f.pow(*m);
        }
        let factors = factors.into_iter().filter(|(_, m)| *m > 0).collect();
        Ok(Self { num, den, factors })
    }

    pub fn num(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn den(&self) -> &IntPolynomial {
        &self.den
    }

    /// Denominator factors with multiplicities; their product is `den()`.
    pub fn den_factors(&self) -> &[(IntPolynomial, u32)] {
        &self.factors
    }

    /// Power-series coefficients `[a_0, ..., a_{n_max}]`.
    pub fn series(&self, n_max: usize) -> Vec<BigInt> {
        series_recurrence(&self.num, &self.den, n_max)
    }

    /// Single coefficient `[x^n]`.
    pub fn coeff(&self, n: usize) -> BigInt {
        self.series(n).pop().unwrap_or_default()
    }
}

fn check_normalized(den: &IntPolynomial) -> Result<(), Error> {
    let c0 = den.constant_term();
    if c0.is_one() {
        Ok(())
    } else {
        Err(Error::UnnormalizedDenominator { constant: c0 })
    }
}

/// Coefficients `[a_0, ..., a_{n_max}]` of `num / den`.
///
/// Fails if `den(0) != 1`.
pub fn series_coeffs(
    num: &IntPolynomial,
    den: &IntPolynomial,
    n_max: usize,
) -> Result<Vec<BigInt>, Error> {
    check_normalized(den)?;
    Ok(series_recurrence(num, den, n_max))
}

fn series_recurrence(num: &IntPolynomial, den: &IntPolynomial, n_max: usize) -> Vec<BigInt> {
    let taps: Vec<(usize, &BigInt)> = den
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, q)| !q.is_zero())
        .collect();
    let mut out: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut a = num.coeff(n);
        for &(j, q) in &taps {
            if j > n {
                break;
            }
            a -= q * &out[n - j];
        }
        out.push(a);
    }
    out
}

/// Bivariate series `num(x, y) / den(x, y)`, stored as x-polynomials with
/// `YPolynomial` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateGF {
    num: Vec<YPolynomial>,
    den: Vec<YPolynomial>,
}

impl BivariateGF {
    /// Fails unless `den` at `x = 0` is the constant polynomial 1.
    pub fn new(mut num: Vec<YPolynomial>, mut den: Vec<YPolynomial>) -> Result<Self, Error> {
        trim_x(&mut num);
        trim_x(&mut den);
        match den.first() {
            Some(d0) if *d0 == YPolynomial::one() => Ok(Self { num, den }),
            Some(d0) => Err(Error::UnnormalizedDenominator {
                constant: d0.coeff(0),
            }),
            None => Err(Error::UnnormalizedDenominator {
                constant: BigInt::zero(),
            }),
        }
    }

    pub fn num(&self) -> &[YPolynomial] {
        &self.num
    }

    pub fn den(&self) -> &[YPolynomial] {
        &self.den
    }

    /// `[f_0(y), ..., f_{n_max}(y)]`.
    pub fn series(&self, n_max: usize) -> Vec<YPolynomial> {
        let taps: Vec<(usize, &YPolynomial)> = self
            .den
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, q)| !q.is_zero())
            .collect();
        let mut out: Vec<YPolynomial> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut acc: Vec<BigInt> = self
                .num
                .get(n)
                .map(|p| p.coeffs().to_vec())
                .unwrap_or_default();
            for &(j, q) in &taps {
                if j > n {
                    break;
                }
                let prev = out[n - j].coeffs();
                if prev.is_empty() {
                    continue;
                }
                let need = prev.len() + q.coeffs().len() - 1;
                if acc.len() < need {
                    acc.resize(need, BigInt::zero());
                }
                for (s, qs) in q.coeffs().iter().enumerate() {
                    if qs.is_zero() {
                        continue;
                    }
                    for (t, pt) in prev.iter().enumerate() {
                        acc[s + t] -= qs * pt;
                    }
                }
            }
            out.push(YPolynomial::new(acc));
        }
        out
    }

    /// Substitute the integer `y0` for `y` in every coefficient.
    pub fn specialize_y(&self, y0: &BigInt) -> Result<RationalGF, Error> {
        let sub = |ps: &[YPolynomial]| IntPolynomial::new(ps.iter().map(|p| p.eval(y0)).collect());
        RationalGF::new(sub(&self.num), sub(&self.den))
    }
}

fn trim_x(ps: &mut Vec<YPolynomial>) {
    while ps.last().is_some_and(YPolynomial::is_zero) {
        ps.pop();
    }
}

/// `[f_0(y), ..., f_{n_max}(y)]` of a bivariate series.
pub fn bivariate_series(g: &BivariateGF, n_max: usize) -> Vec<YPolynomial> {
    g.series(n_max)
}
