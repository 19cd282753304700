use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fem::{solve_lambda, Resolution};
use crate::geometry::AnnulusSpec;
use crate::special_functions::{eigenvalue_bounds, Bounds, LowerBound, DEFAULT_ROOT_TOL};
use crate::DISC_EIGENVALUE;

use super::checks::rellich_check;
use super::flux::{boundary_flux, shape_derivative, Boundary, BoundaryFlux, FluxRecovery};

/// Everything computed at one hole offset.
#[derive(Debug, Clone, PartialEq)]
pub struct PointAnalysis {
    pub lambda: f64,
    pub lambda_dot: f64,
    pub bounds: Bounds,
    /// Flux on the hole boundary.
    pub flux: BoundaryFlux,
    pub rellich_defect: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Solve, flux, shape derivative, bounds and Rellich defect at `(a, h)`.
pub fn analyze_point(a: f64, h: f64, resolution: Resolution, tol: f64) -> Result<PointAnalysis> {
    let spec = AnnulusSpec::new(a, h)?;
    let sol = solve_lambda(&spec, resolution, tol)?;
    let flux = boundary_flux(&sol, Boundary::Inner, FluxRecovery::default())?;
    Ok(PointAnalysis {
        lambda: sol.lambda,
        lambda_dot: shape_derivative(&flux),
        bounds: eigenvalue_bounds(a, h, DEFAULT_ROOT_TOL)?,
        rellich_defect: rellich_check(&sol, FluxRecovery::default())?,
        flux,
        residual: sol.residual,
        iterations: sol.iterations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub h: f64,
    pub outcome: Result<PointAnalysis>,
    /// Central difference of the neighbouring λ values; interior points only.
    pub fd_check: Option<f64>,
}

impl SweepPoint {
    pub fn lambda(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|p| p.lambda)
    }
}

/// A sweep in `h` at fixed `a`, in ascending `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub a: f64,
    pub points: Vec<SweepPoint>,
}

/// A sweep invariant that failed at the computed points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvariantViolation {
    /// λ did not strictly decrease from one successful point to the next.
    NotDecreasing {
        h_prev: f64,
        h: f64,
        lambda_prev: f64,
        lambda: f64,
    },
    /// λ outside `(mu(a − h), mu(a + h))` for `0 < h < a`.
    OutsideBounds {
        h: f64,
        lambda: f64,
        lower: f64,
        upper: f64,
    },
    /// λ not above the unit-disc eigenvalue.
    BelowDisc { h: f64, lambda: f64 },
    /// The point failed to compute.
    Failed { h: f64 },
}

impl SweepReport {
    /// Assembles a report from per-point outcomes given in ascending `h`, filling the
    /// finite-difference column.
    pub fn from_outcomes(a: f64, outcomes: Vec<(f64, Result<PointAnalysis>)>) -> Self {
        let lambdas: Vec<Option<f64>> = outcomes
            .iter()
            .map(|(_, r)| r.as_ref().ok().map(|p| p.lambda))
            .collect();
        let hs: Vec<f64> = outcomes.iter().map(|(h, _)| *h).collect();
        let points = outcomes
            .into_iter()
            .enumerate()
            .map(|(i, (h, outcome))| {
                let fd_check = if i > 0 && i + 1 < hs.len() {
                    match (lambdas[i - 1], lambdas[i + 1]) {
                        (Some(l0), Some(l1)) => Some((l1 - l0) / (hs[i + 1] - hs[i - 1])),
                        _ => None,
                    }
                } else {
                    None
                };
                SweepPoint { h, outcome, fd_check }
            })
            .collect();
        SweepReport { a, points }
    }

    pub fn h_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.h).collect()
    }

    pub fn lambda_values(&self) -> Vec<Option<f64>> {
        self.points.iter().map(SweepPoint::lambda).collect()
    }

    /// All invariant violations, in `h` order.
    pub fn violations(&self) -> Vec<InvariantViolation> {
        let mut out = Vec::new();
        let mut previous: Option<(f64, f64)> = None;
        for p in &self.points {
            let Ok(res) = &p.outcome else {
                out.push(InvariantViolation::Failed { h: p.h });
                continue;
            };
            let lambda = res.lambda;
            if let Some((h_prev, lambda_prev)) = previous {
                if !(lambda < lambda_prev) {
                    out.push(InvariantViolation::NotDecreasing {
                        h_prev,
                        h: p.h,
                        lambda_prev,
                        lambda,
                    });
                }
            }
            previous = Some((p.h, lambda));
            let b = res.bounds;
            if p.h > 0.0 && b.lower_kind == LowerBound::Annulus && !b.contains(lambda) {
                out.push(InvariantViolation::OutsideBounds {
                    h: p.h,
                    lambda,
                    lower: b.lower,
                    upper: b.upper,
                });
            }
            if !(lambda > DISC_EIGENVALUE) {
                out.push(InvariantViolation::BelowDisc { h: p.h, lambda });
            }
        }
        out
    }
}

/// `steps` equally spaced points from `h_min` to `h_max` inclusive.
pub fn uniform_grid(h_min: f64, h_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(h_min.is_finite() && h_max.is_finite() && h_min <= h_max) {
        return Err(Error::Domain("need finite h_min <= h_max"));
    }
    match steps {
        0 => Err(Error::Domain("steps must be at least 1")),
        1 if h_min == h_max => Ok(alloc::vec![h_min]),
        1 => Err(Error::Domain("a single step needs h_min = h_max")),
        _ => {
            let span = h_max - h_min;
            let last = (steps - 1) as f64;
            Ok((0..steps)
                .map(|i| {
                    if i + 1 == steps {
                        h_max
                    } else {
                        h_min + span * i as f64 / last
                    }
                })
                .collect())
        }
    }
}

/// Checks that `grid` is strictly ascending and every point is a valid annulus.
pub fn validate_grid(a: f64, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty h grid"));
    }
    for &h in grid {
        AnnulusSpec::new(a, h)?;
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("h grid must be strictly ascending"));
    }
    Ok(())
}

/// Runs [`analyze_point`] at every grid point. Point failures are recorded in the report;
/// only an invalid grid is an error.
pub fn sweep(a: f64, grid: &[f64], resolution: Resolution, tol: f64) -> Result<SweepReport> {
    validate_grid(a, grid)?;
    let outcomes = grid
        .iter()
        .map(|&h| (h, analyze_point(a, h, resolution, tol)))
        .collect();
    Ok(SweepReport::from_outcomes(a, outcomes))
}
