//! Bessel functions and the concentric-annulus eigenvalue.

mod bessel;
mod concentric;

pub use bessel::{bessel01, bessel_j0, bessel_j1, bessel_y0, bessel_y1, Bessel01, EULER_GAMMA};
pub use concentric::{
    cross_product, eigenvalue_bounds, mu_first, Bounds, LowerBound, RadialMode, DEFAULT_ROOT_TOL,
};
