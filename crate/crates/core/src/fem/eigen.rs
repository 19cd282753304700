//! Smallest eigenpair of the pencil `K x = λ M x` by shifted inverse iteration.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::cholesky::{rcm_ordering, EnvelopeCholesky};
use super::sparse::SparseSymMatrix;
use crate::error::{ConvergenceFailure, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 500;

/// Unshifted iterations before a shift is chosen from the Rayleigh quotient.
const WARMUP: usize = 4;
/// Initial distance of the shift below the Rayleigh quotient, relative to it.
const SHIFT_GAP: f64 = 0.01;
const SHIFT_ATTEMPTS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub lambda: f64,
    /// `M`-normalised eigenvector, positive at its largest-magnitude entry.
    pub vector: Vec<f64>,
    /// `‖K x − λ M x‖ / ‖M x‖`.
    pub residual: f64,
    pub iterations: usize,
    /// Shift `σ` of the final factorization of `K − σ M`.
    pub shift: f64,
}

fn norm2(x: &[f64]) -> f64 {
    libm::sqrt(x.iter().map(|v| v * v).sum())
}

struct Workspace {
    mx: Vec<f64>,
    kx: Vec<f64>,
    y: Vec<f64>,
    scratch: Vec<f64>,
}

/// Normalises `x` in the `M` norm and returns `(λ, residual)` with `Mx` and `Kx` left in the
/// workspace.
fn rayleigh(k: &SparseSymMatrix, m: &SparseSymMatrix, x: &mut [f64], ws: &mut Workspace) -> (f64, f64) {
    m.mul_vec_into(x, &mut ws.mx);
    let norm = libm::sqrt(x.iter().zip(&ws.mx).map(|(a, b)| a * b).sum::<f64>());
    x.iter_mut().for_each(|v| *v /= norm);
    ws.mx.iter_mut().for_each(|v| *v /= norm);
    k.mul_vec_into(x, &mut ws.kx);
    let lambda: f64 = x.iter().zip(&ws.kx).map(|(a, b)| a * b).sum();
    let r: f64 = ws
        .kx
        .iter()
        .zip(&ws.mx)
        .map(|(kv, mv)| {
            let d = kv - lambda * mv;
            d * d
        })
        .sum();
    (lambda, libm::sqrt(r) / norm2(&ws.mx))
}

/// Smallest eigenpair of `K x = λ M x` for symmetric positive definite `K` and `M`.
///
/// Starts from the all-ones vector, runs a few unshifted inverse iterations, then factors
/// `K − σ M` with `σ` just below the current Rayleigh quotient. A successful Cholesky
/// factorization certifies `σ < λ₁`; if it fails the shift is moved further down. Stops when
/// successive Rayleigh quotients agree to `tol` relative and the residual is below `10 tol`.
pub fn smallest_eig(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<EigenResult> {
    let n = k.dim();
    if m.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.dim(),
        });
    }
    if n == 0 {
        return Err(Error::Domain("empty matrix pencil"));
    }
    if !(tol.is_finite() && tol > 0.0) || max_iter == 0 {
        return Err(Error::Domain("tol must be positive and max_iter nonzero"));
    }

    let perm = rcm_ordering(k);
    let mut factor = EnvelopeCholesky::factor_combination(&[(1.0, k)], &perm)?;
    let mut shift = 0.0;
    let mut shifted = false;

    let mut ws = Workspace {
        mx: vec![0.0; n],
        kx: vec![0.0; n],
        y: vec![0.0; n],
        scratch: vec![0.0; n],
    };
    let mut x = vec![1.0; n];
    let (mut lambda, mut residual) = rayleigh(k, m, &mut x, &mut ws);

    for it in 1..=max_iter {
        factor.solve_into(&ws.mx, &mut ws.y, &mut ws.scratch);
        core::mem::swap(&mut x, &mut ws.y);
        let previous = lambda;
        (lambda, residual) = rayleigh(k, m, &mut x, &mut ws);

        if (lambda - previous).abs() <= tol * lambda.abs() && residual <= 10.0 * tol {
            orient(&mut x);
            return Ok(EigenResult {
                lambda,
                vector: x,
                residual,
                iterations: it,
                shift,
            });
        }

        if !shifted && it >= WARMUP {
            shifted = true;
            let mut gap = SHIFT_GAP * lambda;
            for _ in 0..SHIFT_ATTEMPTS {
                let sigma = lambda - gap;
                if sigma <= 0.0 {
                    break;
                }
                match EnvelopeCholesky::factor_combination(&[(1.0, k), (-sigma, m)], &perm) {
                    Ok(f) => {
                        factor = f;
                        shift = sigma;
                        break;
                    }
                    Err(Error::NotPositiveDefinite { .. }) => gap *= 4.0,
                    Err(e) => return Err(e),
                }
            }
        }
    }

    orient(&mut x);
    Err(Error::NoConvergence(Box::new(ConvergenceFailure {
        iterations: max_iter,
        lambda,
        residual,
        vector: x,
    })))
}

/// Flips the sign so the largest-magnitude entry (first one on ties) is positive.
fn orient(x: &mut [f64]) {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    if x.get(best).is_some_and(|&v| v < 0.0) {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}
