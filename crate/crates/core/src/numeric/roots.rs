//! Complex roots of integer polynomials by Aberth-Ehrlich simultaneous
//! iteration, followed by Newton polishing and multiplicity clustering.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::NumericError;
use crate::poly::IntPolynomial;

/// Roots closer than this (relative) are not flagged simple.
pub const SEPARATION: f64 = 1e-8;

/// Approximations within this relative distance are merged into one
/// multiple root. A double root only resolves to about `sqrt(eps)` in
/// double precision and a triple root to about `eps^(1/3)`, with the
/// approximations spread over a circle of that radius.
pub const MERGE_RADIUS: f64 = 1e-4;

pub const MAX_ITERATIONS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: u32,
    /// Multiplicity one and separated from every other root.
    pub simple: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexRootSet {
    pub roots: Vec<Root>,
    /// Degree of the source polynomial.
    pub degree: usize,
    /// Largest `|p(root)| / max|coeff|` over the roots.
    pub residual_bound: f64,
}

impl ComplexRootSet {
    pub fn all_simple(&self) -> bool {
        self.roots.iter().all(|r| r.simple)
    }

    pub fn multiplicity_sum(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity as usize).sum()
    }

    /// Root of smallest modulus.
    pub fn dominant(&self) -> Option<&Root> {
        self.roots
            .iter()
            .min_by(|a, b| a.value.norm().total_cmp(&b.value.norm()))
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and derivative at `z`.
fn horner2(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Rounding-noise level of evaluating the polynomial at `z`.
fn noise(abs_coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let mag = abs_coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c);
    8.0 * f64::EPSILON * abs_coeffs.len() as f64 * mag
}

/// All complex roots of `p` with multiplicities. `tol` bounds the relative
/// residual `|p(root)| / max|coeff|` accepted after polishing.
pub fn find_roots(p: &IntPolynomial, tol: f64) -> Result<ComplexRootSet, NumericError> {
    let degree = match p.degree() {
        None | Some(0) => return Err(NumericError::ConstantPolynomial),
        Some(d) => d,
    };
    let coeffs: Vec<Complex64> = p
        .to_f64s()
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    let max_coeff = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);

    let mut found: Vec<(Complex64, u32)> = Vec::new();
    let zeros = p.valuation().unwrap_or(0);
    if zeros > 0 {
        found.push((Complex64::new(0.0, 0.0), zeros as u32));
    }
    let reduced = &coeffs[zeros..];
    let d = reduced.len() - 1;
    if d == 1 {
        found.push((-reduced[0] / reduced[1], 1));
    } else if d > 1 {
        let approx = aberth(reduced)?;
        found.extend(cluster(reduced, approx));
    }

    let mut residual_bound: f64 = 0.0;
    for (z, _) in &found {
        residual_bound = residual_bound.max(horner(&coeffs, *z).norm() / max_coeff);
    }
    if residual_bound > tol {
        return Err(NumericError::Residual {
            residual: residual_bound,
            tol,
        });
    }

    let roots = found
        .iter()
        .enumerate()
        .map(|(i, &(value, multiplicity))| {
            let separated = found.iter().enumerate().all(|(j, (w, _))| {
                i == j || (value - w).norm() > SEPARATION * value.norm().max(1.0)
            });
            Root {
                value,
                multiplicity,
                simple: multiplicity == 1 && separated,
            }
        })
        .collect();
    Ok(ComplexRootSet {
        roots,
        degree,
        residual_bound,
    })
}

fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>, NumericError> {
    let d = coeffs.len() - 1;
    let abs: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    // Geometric mean of the root moduli.
    let radius = (abs[0] / abs[d]).powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| Complex64::from_polar(radius, TAU * j as f64 / d as f64 + 0.4))
        .collect();
    let mut done = vec![false; d];

    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (pv, dpv) = horner2(coeffs, z[i]);
            if pv.norm() <= noise(&abs, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                // Perturb off a degenerate configuration.
                let bump = Complex64::new(1e-3, 1e-3) * z[i].norm().max(1e-3);
                z[i] += bump;
                all_done = false;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    Err(NumericError::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Merge nearby approximations and polish each cluster centre.
fn cluster(coeffs: &[Complex64], approx: Vec<Complex64>) -> Vec<(Complex64, u32)> {
    let n = approx.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = approx[i].norm().max(approx[j].norm()).max(1.0);
            if (approx[i] - approx[j]).norm() <= MERGE_RADIUS * scale {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a] = b;
            }
        }
    }
    let mut out: Vec<(Complex64, u32, usize)> = Vec::new();
    for (i, &z) in approx.iter().enumerate() {
        let g = find(&mut group, i);
        match out.iter_mut().find(|(_, _, id)| *id == g) {
            Some((sum, m, _)) => {
                *sum += z;
                *m += 1;
            }
            None => out.push((z, 1, g)),
        }
    }
    out.into_iter()
        .map(|(sum, m, _)| {
            let centre = sum / m as f64;
            (polish(coeffs, centre, m), m)
        })
        .collect()
}

/// Multiplicity-aware Newton steps; keeps whichever point has the smaller
/// residual.
fn polish(coeffs: &[Complex64], z0: Complex64, m: u32) -> Complex64 {
    let mut best = z0;
    let mut best_res = horner(coeffs, z0).norm();
    let mut z = z0;
    for _ in 0..4 {
        let (pv, dpv) = horner2(coeffs, z);
        if dpv.norm() == 0.0 {
            break;
        }
        z -= pv / dpv * m as f64;
        let res = horner(coeffs, z).norm();
        if res < best_res {
            best = z;
            best_res = res;
        } else {
            break;
        }
    }
    best
}
