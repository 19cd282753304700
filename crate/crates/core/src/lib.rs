//! First Dirichlet eigenvalue of the Laplacian on an eccentric annulus.
//!
//! The domain is the unit disc with a disc of radius `a` centred at `(h, 0)` removed.
//! The crate provides
//!
//! - [`special_functions`]: Bessel functions of order 0 and 1, the concentric
//!   eigenvalue `mu(b)` as a root of the Bessel cross-product, and two-sided bounds;
//! - [`geometry`]: the annulus, a Möbius map from a concentric annulus and a
//!   reflection-symmetric structured triangulation;
//! - [`fem`]: P1 stiffness/mass assembly, a sparse envelope Cholesky and shifted
//!   inverse iteration for the smallest eigenpair;
//! - [`analysis`]: boundary flux on the inner circle, the shape derivative
//!   `dλ/dh = ∫_S u_N² N₁ ds`, finite-difference and Rellich cross-checks, and sweeps in `h`.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop
)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod special_functions;

pub use error::{Error, Result};

/// First Dirichlet eigenvalue of the unit disc, `j₀,₁²`.
pub const DISC_EIGENVALUE: f64 = 5.783_185_962_946_784_5;
