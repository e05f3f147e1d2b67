//! Exact finite-sample Kolmogorov superposition networks.
//!
//! A three-layer network
//!
//! ```text
//! z_k(x) = sum_j lambda^(j-1) * phi(x_j + eps * k),   k = 0..=2d
//! y      = sum_k h_k(z_k(x))
//! ```
//!
//! can reproduce any target `F` on a finite sample exactly, discontinuous or
//! not, as long as the sampled transfer values contain no *closed path*: a
//! set of points with nonzero weights `mu_j` whose point masses cancel in
//! every block. This crate builds the transfer layer, certifies the absence
//! of closed paths with exact integer linear algebra, and solves for the
//! outer lookup tables `h_k`.
//!
//! The crate is `no_std` and only needs `alloc`. All numerical code is
//! generic over [`Scalar`], implemented for `f64` and for the exact
//! [`Rational`] type.
//!
//! ```
//! use ksn_core::{KolmogorovNetwork, Rational, SampleSet, Scalar, TransferStack};
//! use num_traits::Zero;
//!
//! # fn main() -> ksn_core::Result<()> {
//! let q = |n, d| Rational::ratio(n, d);
//! let points = vec![vec![q(0, 1), q(0, 1)], vec![q(1, 2), q(1, 3)], vec![q(1, 1), q(1, 1)]];
//! let sample = SampleSet::new(2, points.clone(), vec![q(0, 1), q(5, 1), q(-2, 7)])?;
//! let stack = TransferStack::default_for(2)?;
//! let net = KolmogorovNetwork::fit(stack, &sample, &Rational::zero(), "2026-01-01T00:00:00Z".into())?;
//! assert_eq!(net.eval(&points[1])?, q(5, 1));
//! # Ok(())
//! # }
//! ```

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
// Index loops read better in the matrix code; negated comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod condition_z;
mod error;
pub mod incidence;
pub mod inner;
mod linalg;
pub mod mixing;
pub mod network;
pub mod representer;
mod scalar;
pub mod transfer;

pub use condition_z::{brute_force_z, check_z, minimal_violation, ClosedPath, ZReport};
pub use error::{Error, Result};
pub use incidence::{build_incidence, IncidenceSystem};
pub use inner::{InnerFunction, MonotoneReport, PhiKind};
pub use network::{KolmogorovNetwork, Provenance};
pub use representer::{annihilate, fit, residual_report, LookupTable, ResidualReport, SampleSet};
pub use scalar::{NumericMode, Rational, Scalar};
pub use transfer::{sigma, sigma_inv, Transfer, TransferStack};
