//! Floating-point partial-fraction engine: complex roots, pole
//! decompositions with multiplicities, and the exponential-polynomial
//! coefficient formulas built on them.

use num_complex::Complex64;
use thiserror::Error;

pub mod closed;
pub mod partial;
pub mod roots;

pub use closed::{
    kernel_form, kernel_numerator, reduced_kernel, simple_pole_coeff, ClosedFormError, ClosedForms, KernelForm,
    NumericRow, Route,
};
pub use partial::{multi_pole_coeff, recover_shape_constants, PoleDecomposition, PoleTerm};
pub use roots::{find_roots, ComplexRootSet, Root};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("polynomial has no roots (degree < 1)")]
    ConstantPolynomial,
    #[error("root iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("root residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { residual: f64, tol: f64 },
    #[error("root {root} is not simple")]
    NonSimpleRoot { root: Complex64 },
    #[error("kernel denominator must have constant term 1")]
    UnnormalizedKernel,
    #[error("partial fractions do not reconstruct the input (relative error {error:e})")]
    Reconstruction { error: f64 },
}
