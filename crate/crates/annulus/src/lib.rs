//! Command-line driver support for the eccentric annulus eigenvalue solver: number
//! formatting, CSV/JSON report writers, a mesh dump, the reference tables and a parallel
//! sweep. The numerics live in `annulus-core`.

pub mod format;
pub mod mesh_dump;
pub mod reference;
pub mod report;
pub mod tables;

use annulus_core::analysis::{analyze_point, validate_grid, SweepReport};
use annulus_core::fem::Resolution;
use annulus_core::Result;
use rayon::prelude::*;

/// [`annulus_core::analysis::sweep`] with the grid points solved in parallel. The report is
/// identical to the sequential one.
pub fn par_sweep(a: f64, grid: &[f64], resolution: Resolution, tol: f64) -> Result<SweepReport> {
    validate_grid(a, grid)?;
    let outcomes = grid
        .par_iter()
        .map(|&h| (h, analyze_point(a, h, resolution, tol)))
        .collect();
    Ok(SweepReport::from_outcomes(a, outcomes))
}
