//! Generating functions for compositions counted by their large even parts.
//!
//! A part is *large even* for threshold `k` when it is even and exceeds
//! `k`. The smallest such part is `k + delta` with `delta = 1` for odd `k`
//! and `delta = 2` for even `k`. All builders return the numerator and the
//! denominator exactly as products of their displayed factors, with no
//! cancellation, so the `l = 0` cases need no special handling.

use num_bigint::BigInt;

use crate::error::Error;
use crate::poly::{BivariateGF, IntPolynomial, RationalGF, YPolynomial};

/// Largest `l` the positional builders accept by default.
pub const DEFAULT_ELL_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Threshold {
    k: u32,
    delta: u32,
}

impl Threshold {
    pub fn new(k: i64) -> Result<Self, Error> {
        if k <= 0 || k > u32::MAX as i64 / 2 {
            return Err(Error::InvalidThreshold(k));
        }
        let k = k as u32;
        Ok(Self {
            k,
            delta: if k % 2 == 1 { 1 } else { 2 },
        })
    }

    /// A threshold with an arbitrary `delta`, for mutation tests of the
    /// verification harness. Not a valid threshold in general.
    #[doc(hidden)]
    pub fn with_delta_unchecked(k: u32, delta: u32) -> Self {
        Self { k, delta }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Smallest large even part, `k + delta`.
    pub fn min_big(&self) -> usize {
        (self.k + self.delta) as usize
    }

    /// Whether `part` counts as a large even part.
    pub fn is_big(&self, part: usize) -> bool {
        part.is_multiple_of(2) && part > self.k as usize
    }
}

pub fn make_threshold(k: i64) -> Result<Threshold, Error> {
    Threshold::new(k)
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

fn one_minus_2x() -> IntPolynomial {
    poly(&[1, -2])
}

fn one_minus_x() -> IntPolynomial {
    poly(&[1, -1])
}

fn one_plus_x() -> IntPolynomial {
    poly(&[1, 1])
}

fn check_ell(ell: u32, cap: u32) -> Result<(), Error> {
    if ell > cap {
        Err(Error::EllTooLarge { ell, cap })
    } else {
        Ok(())
    }
}

/// `x(1 + x) - x^(k+delta)`, the numerator of the single allowed part.
pub fn allowed_part_numerator(t: Threshold) -> IntPolynomial {
    poly(&[0, 1, 1]) - IntPolynomial::x_pow(t.min_big())
}

/// Single large even part: `x^(k+delta) / (1 - x^2)`.
pub fn even_tail_gf(t: Threshold) -> RationalGF {
    RationalGF::from_factors(
        IntPolynomial::x_pow(t.min_big()),
        vec![(one_minus_x(), 1), (one_plus_x(), 1)],
    )
    .expect("factors are normalized")
}

/// The bivariate series in the cleared form
/// `(1-x)(1-x^2) / ((1-2x)(1-x^2) - (y-1)(1-x) x^(k+delta))`.
#[allow(non_snake_case)]
pub fn build_F(t: Threshold) -> BivariateGF {
    let num = [1, -1, -1, 1].map(|c| YPolynomial::constant(BigInt::from(c)));
    let e = t.min_big();
    let mut den: Vec<YPolynomial> = [1, -2, -1, 2]
        .map(|c| YPolynomial::constant(BigInt::from(c)))
        .to_vec();
    den.resize(e + 2, YPolynomial::zero());
    // -(y - 1)(1 - x) x^e
    den[e] = &den[e] + &YPolynomial::from_i64s(&[1, -1]);
    den[e + 1] = &den[e + 1] + &YPolynomial::from_i64s(&[-1, 1]);
    BivariateGF::new(num.to_vec(), den).expect("den(0, y) = 1")
}

/// Bivariate series with an integer substituted for `y`.
pub fn specialize_y(g: &BivariateGF, y0: i64) -> RationalGF {
    g.specialize_y(&BigInt::from(y0))
        .expect("denominator stays normalized under substitution")
}

/// `F(x, 0)`: compositions with no large even part.
pub fn avoid_gf(t: Threshold) -> RationalGF {
    specialize_y(&build_F(t), 0)
}

/// `F(x, -1)`: compositions signed by the parity of their large even parts.
pub fn signed_gf(t: Threshold) -> RationalGF {
    specialize_y(&build_F(t), -1)
}

/// Total number of large even parts: `x^(k+delta)(1-x) / ((1-2x)^2 (1+x))`.
pub fn total_gf(t: Threshold) -> RationalGF {
    RationalGF::from_factors(
        IntPolynomial::x_pow(t.min_big()) * one_minus_x(),
        vec![(one_minus_2x(), 2), (one_plus_x(), 1)],
    )
    .expect("factors are normalized")
}

/// `(U, B, S)`: any part, a large even part, an allowed part.
pub fn single_part_gfs(t: Threshold) -> (RationalGF, RationalGF, RationalGF) {
    let u = RationalGF::from_factors(poly(&[0, 1]), vec![(one_minus_x(), 1)]);
    let s = RationalGF::from_factors(
        allowed_part_numerator(t),
        vec![(one_minus_x(), 1), (one_plus_x(), 1)],
    );
    (
        u.expect("factors are normalized"),
        even_tail_gf(t),
        s.expect("factors are normalized"),
    )
}

/// Compositions whose first `ell` parts are all allowed (so at least `ell`
/// parts): `S^l (1-x)/(1-2x)`.
pub fn late_gf(t: Threshold, ell: u32) -> Result<RationalGF, Error> {
    late_gf_capped(t, ell, DEFAULT_ELL_CAP)
}

pub fn late_gf_capped(t: Threshold, ell: u32, cap: u32) -> Result<RationalGF, Error> {
    check_ell(ell, cap)?;
    RationalGF::from_factors(
        allowed_part_numerator(t).pow(ell) * one_minus_x(),
        vec![(one_minus_2x(), 1), (one_minus_x(), ell), (one_plus_x(), ell)],
    )
}

/// Compositions whose first large even part is part number `ell + 1`:
/// `S^l B (1-x)/(1-2x)`.
pub fn first_at_gf(t: Threshold, ell: u32) -> Result<RationalGF, Error> {
    first_at_gf_capped(t, ell, DEFAULT_ELL_CAP)
}

pub fn first_at_gf_capped(t: Threshold, ell: u32, cap: u32) -> Result<RationalGF, Error> {
    check_ell(ell, cap)?;
    RationalGF::from_factors(
        IntPolynomial::x_pow(t.min_big()) * allowed_part_numerator(t).pow(ell),
        vec![
            (one_minus_2x(), 1),
            (one_minus_x(), ell),
            (one_plus_x(), ell + 1),
        ],
    )
}

/// Compositions into exactly `ell` allowed parts: `S^l`.
pub fn exactly_allowed_gf(t: Threshold, ell: u32) -> Result<RationalGF, Error> {
    check_ell(ell, DEFAULT_ELL_CAP)?;
    RationalGF::from_factors(
        allowed_part_numerator(t).pow(ell),
        vec![(one_minus_x(), ell), (one_plus_x(), ell)],
    )
}
