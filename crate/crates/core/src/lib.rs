//! Exact arithmetic for modular forms, modular linear differential equations
//! (MLDEs), and vector-valued modular forms.
//!
//! The crate is organized in layers:
//!
//! - [`exactnum`]: arbitrary-precision rationals and cyclotomic field elements
//! - [`qseries`]: truncated Puiseux q-series and the classical modular series
//!   eta, E2, E4, E6, Delta, j, K, A
//! - [`polyk`]: polynomials and rational functions in the hauptmodul K with
//!   denominators supported on {K, 1-K}
//! - [`hypergeom`]: generalized hypergeometric series and the Frobenius
//!   indicial machinery
//! - [`mlde`]: the modular derivative, MLDE representation, the D <-> theta_K
//!   reparameterization, and a direct Frobenius solver in q
//! - [`vvmf`]: minimal-weight vector-valued modular forms in dimensions 2 and
//!   3, the Kaneko-Zagier equation, and supersingular polynomials
//! - [`eisenstein`]: weight-2 Eisenstein series on Gamma(N)
//! - [`cli`]: command-line front end and the identity-verification registry

// Index-driven loops and operator impls built from other operators are the
// natural shape of the coefficient recurrences here.
#![allow(
    clippy::needless_range_loop,
    clippy::suspicious_arithmetic_impl,
    clippy::result_unit_err,
    clippy::result_large_err
)]

pub mod exactnum;
pub mod qseries;
pub mod polyk;
pub mod mlde;
pub mod hypergeom;
pub mod modp;
pub mod vvmf;
pub mod eisenstein;
pub mod cli;

pub use exactnum::{rat, rati, CycNumber, ExactNumError, Rational};
pub use qseries::{PuiseuxSeries, QSeriesError, SeriesContext};
