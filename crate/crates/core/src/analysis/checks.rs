//! Independent cross-checks of the shape derivative: finite differences in `h` and the
//! Rellich boundary identity.

use crate::error::{Error, Result};
use crate::fem::{solve_lambda, Resolution, Solution};
use crate::geometry::AnnulusSpec;

use super::flux::{boundary_flux, Boundary, BoundaryFlux, FluxRecovery};

fn check_step(a: f64, h: f64, delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Domain("delta must be positive"));
    }
    if h - delta < 0.0 {
        return Err(Error::Domain(
            "h - delta must be nonnegative for a central difference",
        ));
    }
    AnnulusSpec::new(a, h + delta).map(|_| ())
}

fn central_difference(a: f64, h: f64, delta: f64, resolution: Resolution, tol: f64) -> Result<f64> {
    let lo = solve_lambda(&AnnulusSpec::new(a, h - delta)?, resolution, tol)?.lambda;
    let hi = solve_lambda(&AnnulusSpec::new(a, h + delta)?, resolution, tol)?.lambda;
    Ok((hi - lo) / (2.0 * delta))
}

/// `(λ(h + δ) − λ(h − δ)) / 2δ` with both solves at the same resolution.
pub fn fd_derivative(a: f64, h: f64, delta: f64, resolution: Resolution, tol: f64) -> Result<f64> {
    check_step(a, h, delta)?;
    central_difference(a, h, delta, resolution, tol)
}

/// Central differences on a grid and its refinement, and their extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrapolatedDerivative {
    pub coarse: f64,
    pub fine: f64,
    /// `(4 fine − coarse) / 3`, removing the second-order discretization error.
    pub extrapolated: f64,
}

/// [`fd_derivative`] at `resolution` and at [`Resolution::refined`], Richardson-extrapolated.
///
/// The refined mesh is nested in the coarse one, so both differences see the same geometric
/// approximation pattern and the `O(mesh²)` errors cancel in the combination.
pub fn fd_derivative_extrapolated(
    a: f64,
    h: f64,
    delta: f64,
    resolution: Resolution,
    tol: f64,
) -> Result<ExtrapolatedDerivative> {
    check_step(a, h, delta)?;
    let coarse = central_difference(a, h, delta, resolution, tol)?;
    let fine = central_difference(a, h, delta, resolution.refined(), tol)?;
    Ok(ExtrapolatedDerivative {
        coarse,
        fine,
        extrapolated: richardson(coarse, fine, 2.0, 2.0),
    })
}

/// Extrapolates `f(H) = f* + C H^order` from values at `H` and `H / ratio`.
pub fn richardson(coarse: f64, fine: f64, ratio: f64, order: f64) -> f64 {
    fine + (fine - coarse) / (libm::pow(ratio, order) - 1.0)
}

/// Convergence order implied by three values on grids refined by `ratio` each step.
pub fn observed_order(f1: f64, f2: f64, f3: f64, ratio: f64) -> f64 {
    libm::log(((f2 - f1) / (f3 - f2)).abs()) / libm::log(ratio)
}

fn ring_integral(flux: &BoundaryFlux, weight: impl Fn(f64) -> f64) -> f64 {
    let n = flux.len();
    let mut s = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        let mut dphi = flux.phi[j] - flux.phi[i];
        if dphi <= 0.0 {
            dphi += core::f64::consts::TAU;
        }
        let fi = weight(flux.phi[i]) * flux.u_n_sq[i];
        let fj = weight(flux.phi[i] + dphi) * flux.u_n_sq[j];
        s += 0.5 * (fi + fj) * flux.radius * dphi;
    }
    s
}

/// `∫_{∂D} (x·n) u_N² ds` with `n` the outward normal of the annulus, over both circles.
pub fn rellich_integral(sol: &Solution, recovery: FluxRecovery) -> Result<f64> {
    let spec = sol.mesh.spec;
    let (a, h) = (spec.a(), spec.h());
    let outer = boundary_flux(sol, Boundary::Outer, recovery)?;
    let inner = boundary_flux(sol, Boundary::Inner, recovery)?;
    // on the hole x = (h,0) + a(cos φ, sin φ) and n points into the hole
    Ok(ring_integral(&outer, |_| 1.0) + ring_integral(&inner, |phi| -(h * libm::cos(phi) + a)))
}

/// Relative defect `|∫ (x·n) u_N² ds − 2λ| / 2λ` of the Rellich identity.
pub fn rellich_check(sol: &Solution, recovery: FluxRecovery) -> Result<f64> {
    let integral = rellich_integral(sol, recovery)?;
    Ok((integral - 2.0 * sol.lambda).abs() / (2.0 * sol.lambda))
}
