//! Boundary flux, the shape derivative `dλ/dh`, and its cross-checks.

mod checks;
mod flux;
mod sweep;

pub use checks::{
    fd_derivative, fd_derivative_extrapolated, observed_order, rellich_check, rellich_integral, richardson,
    ExtrapolatedDerivative,
};
pub use flux::{
    boundary_flux, flux_monotonicity, shape_derivative, Boundary, BoundaryFlux, FluxMonotonicity,
    FluxRecovery,
};
pub use sweep::{
    analyze_point, sweep, uniform_grid, validate_grid, InvariantViolation, PointAnalysis, SweepPoint,
    SweepReport,
};
