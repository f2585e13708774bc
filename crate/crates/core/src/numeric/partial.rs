//! Partial-fraction decomposition with repeated poles.
//!
//! A series `num / den` with `den(0) = 1` is written as
//! `q(x) + sum c_{p,j} / (1 - x/p)^j`, so that
//! `[x^n] = q_n + sum c_{p,j} binom(n + j - 1, j - 1) p^(-n)`.
//! Linear denominator factors give exact poles; other factors go through
//! [`find_roots`].

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::roots::{find_roots, horner};
use super::NumericError;
use crate::poly::{IntPolynomial, RationalGF};

/// Relative residual accepted from the root finder.
pub const ROOT_TOL: f64 = 1e-12;

pub const RECONSTRUCTION_POINTS: usize = 16;
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Poles closer than this (relative) coming from different factors are
/// treated as one.
const SAME_POLE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct PoleTerm {
    pub pole: Complex64,
    /// `j` in `coeff / (1 - x/pole)^j`.
    pub order: u32,
    pub coeff: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleDecomposition {
    pub terms: Vec<PoleTerm>,
    /// Coefficients of the polynomial part `q(x)`.
    pub polynomial_part: Vec<f64>,
    /// Normwise relative error of the reconstruction check.
    pub reconstruction_error: f64,
}

impl PoleDecomposition {
    /// `[x^n]` of the decomposed series.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        let mut acc = Complex64::new(self.polynomial_part.get(n).copied().unwrap_or(0.0), 0.0);
        for term in &self.terms {
            let weight = binomial(n + term.order as usize - 1, term.order as usize - 1);
            acc += term.coeff * weight * powi(term.pole.inv(), n);
        }
        acc
    }

    /// Value of the decomposed function at `x`.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.eval_with_scale(x).0
    }

    /// Value and the sum of absolute values of its summands.
    fn eval_with_scale(&self, x: Complex64) -> (Complex64, f64) {
        let mut value = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        let mut xp = Complex64::new(1.0, 0.0);
        for &q in &self.polynomial_part {
            let v = xp * q;
            value += v;
            scale += v.norm();
            xp *= x;
        }
        for term in &self.terms {
            let base = Complex64::new(1.0, 0.0) - x / term.pole;
            let v = term.coeff / powi(base, term.order as usize);
            value += v;
            scale += v.norm();
        }
        (value, scale)
    }

    /// Distinct poles with their highest order.
    pub fn poles(&self) -> Vec<(Complex64, u32)> {
        let mut out: Vec<(Complex64, u32)> = Vec::new();
        for t in &self.terms {
            match out.iter_mut().find(|(p, _)| *p == t.pole) {
                Some((_, m)) => *m = (*m).max(t.order),
                None => out.push((t.pole, t.order)),
            }
        }
        out
    }
}

/// `binom(n, k)` in floating point.
pub fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn powi(z: Complex64, e: usize) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    result
}

fn to_complex(p: &IntPolynomial) -> Vec<Complex64> {
    p.to_f64s().into_iter().map(|c| Complex64::new(c, 0.0)).collect()
}

/// Poles of the factored denominator with multiplicities.
fn collect_poles(g: &RationalGF) -> Result<Vec<(Complex64, u32)>, NumericError> {
    let mut poles: Vec<(Complex64, u32)> = Vec::new();
    let mut push = |p: Complex64, m: u32| {
        match poles
            .iter_mut()
            .find(|(q, _)| (*q - p).norm() <= SAME_POLE * p.norm())
        {
            Some((_, total)) => *total += m,
            None => poles.push((p, m)),
        }
    };
    for (factor, mult) in g.den_factors() {
        match factor.degree() {
            None | Some(0) => {}
            Some(1) => {
                let c0 = factor.coeff(0).to_f64().unwrap_or(f64::NAN);
                let c1 = factor.coeff(1).to_f64().unwrap_or(f64::NAN);
                push(Complex64::new(-c0 / c1, 0.0), *mult);
            }
            Some(_) => {
                for r in find_roots(factor, ROOT_TOL)?.roots {
                    push(r.value, r.multiplicity * mult);
                }
            }
        }
    }
    Ok(poles)
}

/// Quotient of the exact division `num = q * den + r`.
pub(crate) fn polynomial_part(num: &IntPolynomial, den: &IntPolynomial) -> Vec<f64> {
    let (Some(dn), Some(dd)) = (num.degree(), den.degree()) else {
        return vec![];
    };
    if dn < dd {
        return vec![];
    }
    let mut rem: Vec<BigRational> = num
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let lead = BigRational::from_integer(den.coeff(dd));
    let den_q: Vec<BigRational> = den
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut quot = vec![BigRational::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = &rem[i + dd] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, d) in den_q.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    quot.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Taylor coefficients of `coeffs` at `p`, up to `count` terms.
fn taylor_at(coeffs: &[Complex64], p: Complex64, count: usize) -> Vec<Complex64> {
    let mut work = coeffs.to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        // Synthetic division by (x - p): remainder is the value.
        for i in (0..work.len() - 1).rev() {
            let carry = work[i + 1] * p;
            work[i] += carry;
        }
        out.push(work.remove(0));
    }
    out
}

/// Truncated product of power series in `u`.
fn series_mul(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_div(num: &[Complex64], den: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..len {
        let mut v = num.get(n).copied().unwrap_or_default();
        for j in 1..=n.min(den.len().saturating_sub(1)) {
            v -= den[j] * out[n - j];
        }
        out[n] = v / den[0];
    }
    out
}

/// Decompose `g`, checking the result at sample points.
pub fn recover_shape_constants(g: &RationalGF) -> Result<PoleDecomposition, NumericError> {
    let poles = collect_poles(g)?;
    let num = to_complex(g.num());
    let mut terms = Vec::new();
    for (idx, &(p, m)) in poles.iter().enumerate() {
        let m_us = m as usize;
        // num(p(1 - u)) to order m - 1: Taylor at p, scaled by (-p)^i.
        let mut scale = Complex64::new(1.0, 0.0);
        let shifted: Vec<Complex64> = taylor_at(&num, p, m_us)
            .into_iter()
            .map(|c| {
                let v = c * scale;
                scale *= -p;
                v
            })
            .collect();
        // The other factors: 1 - p(1-u)/q = (1 - p/q) + (p/q) u.
        let mut rest = vec![Complex64::new(1.0, 0.0)];
        for (jdx, &(q, mq)) in poles.iter().enumerate() {
            if jdx == idx {
                continue;
            }
            let lin = [Complex64::new(1.0, 0.0) - p / q, p / q];
            for _ in 0..mq {
                rest = series_mul(&rest, &lin, m_us);
            }
        }
        let phi = series_div(&shifted, &rest, m_us);
        for j in 1..=m {
            terms.push(PoleTerm {
                pole: p,
                order: j,
                coeff: phi[m_us - j as usize],
            });
        }
    }
    let mut dec = PoleDecomposition {
        terms,
        polynomial_part: polynomial_part(g.num(), g.den()),
        reconstruction_error: 0.0,
    };
    dec.reconstruction_error = reconstruction_error(g, &dec);
    if dec.reconstruction_error.is_nan() || dec.reconstruction_error > RECONSTRUCTION_TOL {
        return Err(NumericError::Reconstruction {
            error: dec.reconstruction_error,
        });
    }
    Ok(dec)
}

/// Largest normwise relative mismatch between `g` and `dec` over the
/// sample points.
pub fn reconstruction_error(g: &RationalGF, dec: &PoleDecomposition) -> f64 {
    let num = to_complex(g.num());
    let den = to_complex(g.den());
    let min_pole = dec
        .terms
        .iter()
        .map(|t| t.pole.norm())
        .fold(f64::INFINITY, f64::min);
    let base = if min_pole.is_finite() { min_pole } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    while taken < RECONSTRUCTION_POINTS {
        let r = base * rng.gen_range(0.3..3.0);
        let x = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
        if dec
            .terms
            .iter()
            .any(|t| (x - t.pole).norm() < 0.1 * t.pole.norm())
        {
            continue;
        }
        taken += 1;
        let direct = horner(&num, x) / horner(&den, x);
        let (value, scale) = dec.eval_with_scale(x);
        let denom = scale.max(direct.norm()).max(f64::MIN_POSITIVE);
        worst = worst.max((direct - value).norm() / denom);
    }
    worst
}

/// `[x^n] g` by partial fractions.
pub fn multi_pole_coeff(g: &RationalGF, n: usize) -> Result<Complex64, NumericError> {
    Ok(recover_shape_constants(g)?.coefficient(n))
}
