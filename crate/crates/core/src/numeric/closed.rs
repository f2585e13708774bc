//! Floating-point closed forms for every statistic, used to cross-check
//! the exact engine.
//!
//! Avoidance and parity counts use the simple-root formula
//! `[x^n] P/Q = sum -P(a)/(a Q'(a)) a^(-n)` on the reduced kernels
//! `(1 - x^2) / R(x)`, falling back to the general decomposition when a
//! root is not simple. Totals and positional counts go through the general
//! decomposition with exact poles at `1/2`, `1` and `-1`.
//!
//! Real kernel roots are refined and evaluated in double-double arithmetic.
//! Parity counts subtract `f_n(-1)/2` from `2^(n-2)`, and the dominant real
//! root sits within about `2^-(k+delta)` of `1/2`, so plain doubles lose the
//! last unit of the odd count near `n = 50`.

use num_complex::Complex64;
use twofloat::TwoFloat;

use super::partial::{self, powi, recover_shape_constants, PoleDecomposition, PoleTerm, ROOT_TOL};
use super::roots::{find_roots, horner, ComplexRootSet};
use super::NumericError;
use crate::error::Error;
use crate::genfun::{self, Threshold};
use crate::poly::{IntPolynomial, RationalGF};

/// `R_k(x) = (1 - 2x)(1 + x) + x^(k+delta)`, the reduced denominator of
/// `F(x, 0)`; `weight` 2 gives the one of `F(x, -1)`.
pub fn reduced_kernel(t: Threshold, weight: i64) -> IntPolynomial {
    IntPolynomial::from_i64s(&[1, -1, -2])
        + IntPolynomial::monomial(weight.into(), t.min_big())
}

/// Shared numerator `1 - x^2` of both reduced kernels.
pub fn kernel_numerator() -> IntPolynomial {
    IntPolynomial::from_i64s(&[1, 0, -1])
}

fn to_complex(p: &IntPolynomial) -> Vec<Complex64> {
    p.to_f64s().into_iter().map(|c| Complex64::new(c, 0.0)).collect()
}

/// Simple-pole terms `-P(a) / (a Q'(a))` for each root `a` of `Q`, plus
/// the polynomial part when `deg P >= deg Q`.
pub fn simple_pole_decomposition(
    p: &IntPolynomial,
    q: &IntPolynomial,
    roots: &ComplexRootSet,
) -> Result<PoleDecomposition, NumericError> {
    if let Some(r) = roots.roots.iter().find(|r| !r.simple) {
        return Err(NumericError::NonSimpleRoot { root: r.value });
    }
    let pc = to_complex(p);
    let dq = to_complex(&q.derivative());
    let terms = roots
        .roots
        .iter()
        .map(|r| {
            let a = r.value;
            PoleTerm {
                pole: a,
                order: 1,
                coeff: -horner(&pc, a) / (a * horner(&dq, a)),
            }
        })
        .collect();
    let whole = RationalGF::new(p.clone(), q.clone())
        .map_err(|_| NumericError::UnnormalizedKernel)?;
    let mut dec = PoleDecomposition {
        terms,
        polynomial_part: partial::polynomial_part(p, q),
        reconstruction_error: 0.0,
    };
    dec.reconstruction_error = partial::reconstruction_error(&whole, &dec);
    Ok(dec)
}

/// `sum_i C_i a_i^(-n)` with `C_i = -P(a_i) / (a_i Q'(a_i))`.
///
/// Refuses a root set containing a non-simple root. When `deg P >= deg Q`
/// the polynomial part's coefficient is added, which only matters for
/// small `n`.
pub fn simple_pole_coeff(
    p: &IntPolynomial,
    q: &IntPolynomial,
    roots: &ComplexRootSet,
    n: usize,
) -> Result<Complex64, NumericError> {
    Ok(simple_pole_decomposition(p, q, roots)?.coefficient(n))
}

/// Imaginary parts below this (relative) mark a root as real.
const REAL_ROOT: f64 = 1e-12;

/// A real simple pole with its constant, both in double-double.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealPole {
    /// Index of the matching term in the double-precision decomposition.
    pub term: usize,
    pub pole: TwoFloat,
    pub coeff: TwoFloat,
}

/// Double-double quotient. `TwoFloat`'s own division returns only a
/// double-precision result, so the remainder is corrected twice by hand.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

/// Value and derivative of an integer polynomial at a double-double point.
fn dd_horner2(coeffs: &[f64], x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let mut p = TwoFloat::from(0.0);
    let mut dp = TwoFloat::from(0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn refine_real_poles(
    p: &IntPolynomial,
    q: &IntPolynomial,
    dec: &PoleDecomposition,
) -> Vec<RealPole> {
    let pc = p.to_f64s();
    let qc = q.to_f64s();
    let dqc = q.derivative().to_f64s();
    dec.terms
        .iter()
        .enumerate()
        .filter(|(_, t)| t.order == 1 && t.pole.im.abs() <= REAL_ROOT * t.pole.norm())
        .map(|(term, t)| {
            let mut a = TwoFloat::from(t.pole.re);
            for _ in 0..3 {
                let (v, dv) = dd_horner2(&qc, a);
                if dv.hi() == 0.0 {
                    break;
                }
                a -= dd_div(v, dv);
            }
            let pv = dd_horner2(&pc, a).0;
            let dq = dd_horner2(&dqc, a).0;
            RealPole {
                term,
                pole: a,
                coeff: -dd_div(pv, a * dq),
            }
        })
        .collect()
}

/// Which evaluation route a closed form ended up on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    SimplePole,
    MultiPole,
}

#[derive(Clone, Debug)]
pub struct KernelForm {
    pub roots: ComplexRootSet,
    pub decomposition: PoleDecomposition,
    pub route: Route,
    /// Double-double versions of the real simple poles; empty on the
    /// multi-pole route.
    pub real_poles: Vec<RealPole>,
}

impl KernelForm {
    /// `[x^n]` with the real poles summed in double-double. Returns the real
    /// part and the (double precision) imaginary part.
    pub fn coefficient_dd(&self, n: usize) -> (TwoFloat, f64) {
        if self.real_poles.is_empty() {
            let v = self.decomposition.coefficient(n);
            return (TwoFloat::from(v.re), v.im);
        }
        let dec = &self.decomposition;
        let mut rest = Complex64::new(dec.polynomial_part.get(n).copied().unwrap_or(0.0), 0.0);
        for (i, term) in dec.terms.iter().enumerate() {
            if self.real_poles.iter().all(|r| r.term != i) {
                rest += term.coeff * powi(term.pole.inv(), n);
            }
        }
        let mut acc = TwoFloat::from(rest.re);
        for r in &self.real_poles {
            acc += r.coeff * power(dd_div(TwoFloat::from(1.0), r.pole), n);
        }
        (acc, rest.im)
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        let (re, im) = self.coefficient_dd(n);
        Complex64::new(re.into(), im)
    }
}

/// `base^n` by squaring, with multiplications only.
fn power(base: TwoFloat, mut n: usize) -> TwoFloat {
    let mut acc = TwoFloat::from(1.0);
    let mut b = base;
    while n > 0 {
        if n & 1 == 1 {
            acc *= b;
        }
        b *= b;
        n >>= 1;
    }
    acc
}

/// Decomposition of `(1 - x^2) / R(x)`, by simple roots when possible.
pub fn kernel_form(t: Threshold, weight: i64) -> Result<KernelForm, NumericError> {
    let q = reduced_kernel(t, weight);
    let p = kernel_numerator();
    let roots = find_roots(&q, ROOT_TOL)?;
    match simple_pole_decomposition(&p, &q, &roots) {
        Ok(decomposition) => Ok(KernelForm {
            real_poles: refine_real_poles(&p, &q, &decomposition),
            roots,
            decomposition,
            route: Route::SimplePole,
        }),
        Err(NumericError::NonSimpleRoot { .. }) => {
            let g = RationalGF::new(p, q).expect("R(0) = 1");
            Ok(KernelForm {
                roots,
                decomposition: recover_shape_constants(&g)?,
                route: Route::MultiPole,
                real_poles: Vec::new(),
            })
        }
        Err(e) => Err(e),
    }
}

/// All closed forms for one `(k, l)`.
#[derive(Clone, Debug)]
pub struct ClosedForms {
    pub threshold: Threshold,
    pub ell: u32,
    pub avoid: KernelForm,
    pub signed: KernelForm,
    pub total: PoleDecomposition,
    pub late: PoleDecomposition,
    pub first_at: PoleDecomposition,
}

/// Numeric values of one row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericRow {
    pub n: usize,
    pub c: Complex64,
    pub signed: Complex64,
    pub even: Option<Complex64>,
    pub odd: Option<Complex64>,
    pub total: Complex64,
    pub late: Complex64,
    pub first_at: Complex64,
}

#[derive(Debug, thiserror::Error)]
pub enum ClosedFormError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Exact(#[from] Error),
}

impl ClosedForms {
    pub fn new(t: Threshold, ell: u32) -> Result<Self, ClosedFormError> {
        Ok(Self {
            threshold: t,
            ell,
            avoid: kernel_form(t, 1)?,
            signed: kernel_form(t, 2)?,
            total: recover_shape_constants(&genfun::total_gf(t))?,
            late: recover_shape_constants(&genfun::late_gf(t, ell)?)?,
            first_at: recover_shape_constants(&genfun::first_at_gf(t, ell)?)?,
        })
    }

    pub fn avoid(&self, n: usize) -> Complex64 {
        self.avoid.coefficient(n)
    }

    /// `f_n(-1)`.
    pub fn signed(&self, n: usize) -> Complex64 {
        self.signed.coefficient(n)
    }

    /// `(E, O) = 2^(n-2) +- f_n(-1)/2`, for `n >= 1`.
    pub fn parity(&self, n: usize) -> Option<(Complex64, Complex64)> {
        if n == 0 {
            return None;
        }
        let half_all = TwoFloat::from(2.0f64.powi(n as i32 - 2));
        let (g, g_im) = self.signed.coefficient_dd(n);
        let g = g * 0.5;
        let even = Complex64::new((half_all + g).into(), g_im / 2.0);
        let odd = Complex64::new((half_all - g).into(), -g_im / 2.0);
        Some((even, odd))
    }

    pub fn total(&self, n: usize) -> Complex64 {
        self.total.coefficient(n)
    }

    pub fn late(&self, n: usize) -> Complex64 {
        self.late.coefficient(n)
    }

    pub fn first_at(&self, n: usize) -> Complex64 {
        self.first_at.coefficient(n)
    }

    pub fn row(&self, n: usize) -> NumericRow {
        let parity = self.parity(n);
        NumericRow {
            n,
            c: self.avoid(n),
            signed: self.signed(n),
            even: parity.map(|p| p.0),
            odd: parity.map(|p| p.1),
            total: self.total(n),
            late: self.late(n),
            first_at: self.first_at(n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats;
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;

    fn th(k: i64) -> Threshold {
        Threshold::new(k).unwrap()
    }

    fn close(a: Complex64, b: f64, rel: f64) -> bool {
        (a.re - b).abs() <= rel * b.abs().max(1.0) && a.im.abs() <= rel * (1.0 + b.abs())
    }

    #[test]
    fn kernel_times_one_minus_x_is_specialized_denominator() {
        for k in 1..=12 {
            let t = th(k);
            let one_minus_x = IntPolynomial::from_i64s(&[1, -1]);
            assert_eq!(&reduced_kernel(t, 1) * &one_minus_x, *genfun::avoid_gf(t).den());
            assert_eq!(&reduced_kernel(t, 2) * &one_minus_x, *genfun::signed_gf(t).den());
        }
    }

    #[test]
    fn single_pole_geometric() {
        let q = IntPolynomial::from_i64s(&[1, -2]);
        let roots = find_roots(&q, ROOT_TOL).unwrap();
        let v = simple_pole_coeff(&IntPolynomial::one(), &q, &roots, 10).unwrap();
        assert!(close(v, 1024.0, 1e-12));
    }

    #[test]
    fn avoid_worked_value() {
        let t = th(12);
        let form = kernel_form(t, 1).unwrap();
        assert_eq!(form.route, Route::SimplePole);
        assert_eq!(form.decomposition.terms.len(), 14);
        assert!(close(form.decomposition.coefficient(30), 536_470_425.0, 1e-6));
    }

    #[test]
    fn signed_matches_exact_engine() {
        let t = th(12);
        let exact = genfun::signed_gf(t).coeff(30).to_f64().unwrap();
        let form = kernel_form(t, 2).unwrap();
        assert!(close(form.decomposition.coefficient(30), exact, 1e-6));
        let cf = ClosedForms::new(t, 5).unwrap();
        let (e, o) = cf.parity(30).unwrap();
        assert_eq!(e.re.round(), 536_470_436.0);
        assert_eq!(o.re.round(), 400_476.0);
    }

    #[test]
    fn k1_kernel_is_fibonacci_like() {
        let t = th(1);
        let r = reduced_kernel(t, 1);
        assert_eq!(r, IntPolynomial::from_i64s(&[1, -1, -1]));
        let c = genfun::avoid_gf(t).series(40);
        for n in 3..=40 {
            assert_eq!(c[n], &c[n - 1] + &c[n - 2]);
        }
        // deg P = deg R: the polynomial part fixes n = 0.
        let form = kernel_form(t, 1).unwrap();
        for n in 0..=40 {
            assert!(close(form.decomposition.coefficient(n), c[n].to_f64().unwrap(), 1e-9), "n={n}");
        }
    }

    #[test]
    fn rejects_non_simple_roots() {
        let q = IntPolynomial::from_i64s(&[1, -2]).pow(2);
        let roots = find_roots(&q, ROOT_TOL).unwrap();
        assert!(matches!(
            simple_pole_coeff(&IntPolynomial::one(), &q, &roots, 3),
            Err(NumericError::NonSimpleRoot { .. })
        ));
    }

    #[test]
    fn dominant_root_of_avoid_kernel() {
        for k in 1..=12 {
            let rs = find_roots(&reduced_kernel(th(k), 1), ROOT_TOL).unwrap();
            let dom = rs.dominant().unwrap().value;
            assert!(dom.im.abs() < 1e-12, "k={k}");
            assert!(dom.re > 0.5 && dom.re < 1.0, "k={k} root={dom}");
        }
    }

    #[test]
    fn double_double_division() {
        let third = dd_div(TwoFloat::from(1.0), TwoFloat::from(3.0));
        assert!(third.lo() != 0.0);
        assert!((third * 3.0 - 1.0).abs().hi() < 1e-31);
        assert_eq!(power(TwoFloat::from(2.0), 60).hi(), 2f64.powi(60));
        assert_eq!(power(third, 0), TwoFloat::from(1.0));
    }

    #[test]
    fn odd_count_survives_cancellation() {
        let t = th(12);
        let cf = ClosedForms::new(t, 0).unwrap();
        assert_eq!(cf.signed.real_poles.len(), 2);
        for n in [40, 50, 60] {
            let (_, o) = stats::parity_counts(t, n).unwrap();
            let got = cf.parity(n).unwrap().1.re;
            assert_eq!(BigInt::from(got.round() as i64), o, "n={n}");
        }
    }

    #[test]
    fn simple_route_reconstructs() {
        for k in 1..=12 {
            for weight in [1, 2] {
                let form = kernel_form(th(k), weight).unwrap();
                assert_eq!(form.route, Route::SimplePole, "k={k} weight={weight}");
                assert!(form.decomposition.reconstruction_error < 1e-9, "k={k}");
            }
        }
    }
}
