//! Exact enumeration of integer compositions by their large even parts.
//!
//! A part is large even for a threshold `k` when it is even and exceeds
//! `k`. The crate builds the rational generating functions for the number,
//! parity, total and first position of such parts, extracts their
//! coefficients exactly, and cross-checks them against a brute-force
//! enumerator and a floating-point partial-fraction engine.
//!
//! ```
//! use bigeven::{genfun::Threshold, stats};
//!
//! let t = Threshold::new(12).unwrap();
//! assert_eq!(stats::avoid_count(t, 30), 536_470_425.into());
//! ```

pub mod error;
pub mod genfun;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod stats;
pub mod verify;

pub use error::Error;
pub use genfun::Threshold;
pub use poly::{BivariateGF, IntPolynomial, RationalGF, YPolynomial};
pub use report::{Engine, OutputMeta, OutputRecord};
pub use stats::{ExactRational, StatRow, StatTable};
