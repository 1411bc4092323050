//! Simultaneous polynomial zero-finding with semilocal convergence certificates.
//!
//! Three total-step iterations are provided (Weierstrass, Ehrlich in both its
//! derivative and Börsch-Supan forms, and Nourein) together with the
//! certificate functions that decide, from data at the initial point alone,
//! whether an iteration is guaranteed to converge, the zero-localization disks
//! derived from Weierstrass corrections, and a priori / a posteriori error
//! bounds. The [`oracle`] module supplies extended-precision reference roots
//! for verifying all of the above.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod certify;
pub mod compare;
pub mod corpus;
pub mod error;
pub mod fmt;
pub mod localize;
pub mod matching;
pub mod norm;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod simul;
pub mod solve;

pub use error::{Error, Result};
pub use norm::NormParameter;
pub use num_complex::Complex64;
pub use poly::{MonicPolynomial, RootVector};
pub use scalar::ComplexScalar;
pub use simul::{ApproximationVector, Method, StepQuantities};
