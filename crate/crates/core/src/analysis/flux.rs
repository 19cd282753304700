use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fem::{barycentric_gradients, element_matrices, Solution};
use crate::geometry::{polar_angle, Point};

/// How the normal derivative is recovered from the P1 solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxRecovery {
    /// Weak-form residual `K u − λ M u` at the boundary nodes, solved against the
    /// boundary mass matrix. Converges at the rate of the eigenvalue.
    #[default]
    Variational,
    /// Per-triangle gradients averaged over the triangles touching each node, dotted with the
    /// analytic normal. First order.
    GradientAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// The hole `|x − (h,0)| = a`.
    Inner,
    /// The unit circle.
    Outer,
}

/// Normal derivative of the eigenfunction along one boundary circle.
///
/// `u_n` uses the normal pointing into the annulus, so `u_n >= 0` up to discretization error.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFlux {
    pub boundary: Boundary,
    pub center: Point,
    pub radius: f64,
    /// Mesh node of each sample.
    pub nodes: Vec<usize>,
    /// Angle about `center`, ascending in `[0, 2π)`.
    pub phi: Vec<f64>,
    pub u_n: Vec<f64>,
    pub u_n_sq: Vec<f64>,
}

impl BoundaryFlux {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    fn interpolate(&self, values: &[f64], phi: f64) -> f64 {
        let n = self.phi.len();
        let t = libm::fmod(phi, TAU);
        let t = if t < 0.0 { t + TAU } else { t };
        // first sample strictly after t; the segment wraps past 2π
        let hi = self.phi.partition_point(|&p| p <= t);
        let (i0, i1) = (if hi == 0 { n - 1 } else { hi - 1 }, hi % n);
        let p0 = self.phi[i0];
        let mut p1 = self.phi[i1];
        let mut tt = t;
        if p1 <= p0 {
            p1 += TAU;
            if tt < p0 {
                tt += TAU;
            }
        }
        let w = (tt - p0) / (p1 - p0);
        values[i0] + w * (values[i1] - values[i0])
    }

    /// `u_N²` at angle `phi` (radians), linear between nodes.
    pub fn sample_sq(&self, phi: f64) -> f64 {
        self.interpolate(&self.u_n_sq, phi)
    }

    pub fn sample(&self, phi: f64) -> f64 {
        self.interpolate(&self.u_n, phi)
    }

    pub fn max_sq(&self) -> f64 {
        self.u_n_sq.iter().copied().fold(0.0, f64::max)
    }

    /// `max_φ |u_N²(φ) − u_N²(2π − φ)|`, evaluated at the nodes.
    pub fn reflection_defect(&self) -> f64 {
        self.phi
            .iter()
            .zip(&self.u_n_sq)
            .map(|(&p, &v)| (v - self.sample_sq(TAU - p)).abs())
            .fold(0.0, f64::max)
    }
}

/// Angle-sorted node list, centre and radius of a boundary circle.
fn ring(sol: &Solution, boundary: Boundary) -> (&[usize], Point, f64) {
    let mesh = &sol.mesh;
    match boundary {
        Boundary::Inner => (&mesh.inner_ring, mesh.spec.inner_center(), mesh.spec.a()),
        Boundary::Outer => (&mesh.outer_ring, Point::new(0.0, 0.0), 1.0),
    }
}

/// Unit normal at `p` pointing into the annulus.
fn inward_normal(boundary: Boundary, p: Point, center: Point, radius: f64) -> [f64; 2] {
    let n = [(p.x - center.x) / radius, (p.y - center.y) / radius];
    match boundary {
        Boundary::Inner => n,
        Boundary::Outer => [-n[0], -n[1]],
    }
}

/// Normal derivative of `sol.u` along one boundary circle.
pub fn boundary_flux(sol: &Solution, boundary: Boundary, recovery: FluxRecovery) -> Result<BoundaryFlux> {
    let mesh = &sol.mesh;
    let (nodes, center, radius) = ring(sol, boundary);
    let nodes = nodes.to_vec();
    let incidence = mesh.node_triangles();
    for &v in &nodes {
        if incidence.of(v).is_empty() {
            return Err(Error::MeshIntegrity { node: v });
        }
    }

    let u_n = match recovery {
        FluxRecovery::GradientAverage => nodes
            .iter()
            .map(|&v| {
                let tris = incidence.of(v);
                let mut g = [0.0; 2];
                for &t in tris {
                    let grads = barycentric_gradients(mesh.triangle_points(t));
                    for (i, &w) in mesh.triangles[t].iter().enumerate() {
                        g[0] += sol.u[w] * grads[i][0];
                        g[1] += sol.u[w] * grads[i][1];
                    }
                }
                let n = inward_normal(boundary, mesh.nodes[v], center, radius);
                (g[0] * n[0] + g[1] * n[1]) / tris.len() as f64
            })
            .collect(),
        FluxRecovery::Variational => variational_flux(sol, &nodes),
    };

    let phi = nodes
        .iter()
        .map(|&v| polar_angle(mesh.nodes[v], center))
        .collect();
    let u_n_sq = u_n.iter().map(|v: &f64| v * v).collect();
    Ok(BoundaryFlux {
        boundary,
        center,
        radius,
        nodes,
        phi,
        u_n,
        u_n_sq,
    })
}

/// Solves `M_b q = −(K u − λ M u)|_ring`, where `M_b` is the P1 mass matrix of the closed
/// polygon through the ring nodes. By Green's formula the residual is `∫ ∂u/∂n_out φ_i ds`,
/// so `q` is the inward normal derivative.
fn variational_flux(sol: &Solution, nodes: &[usize]) -> Vec<f64> {
    let mesh = &sol.mesh;
    let mut slot = vec![usize::MAX; mesh.num_nodes()];
    for (i, &v) in nodes.iter().enumerate() {
        slot[v] = i;
    }
    let mut residual = vec![0.0; nodes.len()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if tri.iter().all(|&v| slot[v] == usize::MAX) {
            continue;
        }
        let e = element_matrices(mesh.triangle_points(t));
        for i in 0..3 {
            let s = slot[tri[i]];
            if s == usize::MAX {
                continue;
            }
            for j in 0..3 {
                residual[s] += (e.stiffness[i][j] - sol.lambda * e.mass[i][j]) * sol.u[tri[j]];
            }
        }
    }

    let n = nodes.len();
    let chord: Vec<f64> = (0..n)
        .map(|i| mesh.nodes[nodes[i]].dist(mesh.nodes[nodes[(i + 1) % n]]))
        .collect();
    let diag: Vec<f64> = (0..n)
        .map(|i| (chord[(i + n - 1) % n] + chord[i]) / 3.0)
        .collect();
    let off: Vec<f64> = chord.iter().map(|l| l / 6.0).collect();
    let rhs: Vec<f64> = residual.iter().map(|r| -r).collect();
    solve_cyclic_symmetric(&diag, &off, &rhs)
}

/// Solves a symmetric cyclic tridiagonal system: `diag[i]` on the diagonal, `off[i]` coupling
/// `i` and `i + 1 (mod n)`. Requires `n >= 3` and diagonal dominance.
fn solve_cyclic_symmetric(diag: &[f64], off: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let corner = off[n - 1];
    // Sherman–Morrison: A = T + u vᵀ with u = (γ, 0, …, corner), v = (1, 0, …, corner/γ)
    let gamma = -diag[0];
    let mut b = diag.to_vec();
    b[0] -= gamma;
    b[n - 1] -= corner * corner / gamma;

    let thomas = |r: &[f64]| -> Vec<f64> {
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        c_prime[0] = off[0] / b[0];
        d_prime[0] = r[0] / b[0];
        for i in 1..n {
            let sub = off[i - 1];
            let denom = b[i] - sub * c_prime[i - 1];
            if i < n - 1 {
                c_prime[i] = off[i] / denom;
            }
            d_prime[i] = (r[i] - sub * d_prime[i - 1]) / denom;
        }
        let mut x = d_prime;
        for i in (0..n - 1).rev() {
            x[i] -= c_prime[i] * x[i + 1];
        }
        x
    };

    let x = thomas(rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = corner;
    let z = thomas(&u);
    let factor = (x[0] + corner * x[n - 1] / gamma) / (1.0 + z[0] + corner * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - factor * zi).collect()
}

/// `∫_S u_N² N₁ ds` over the hole boundary, `N₁ = cos φ` the x-component of the normal
/// pointing out of the hole: trapezoid in `u_N²` with the normal taken at arc midpoints and
/// exact arc lengths `a Δφ`.
pub fn shape_derivative(flux: &BoundaryFlux) -> f64 {
    let n = flux.len();
    let mut s = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        let mut dphi = flux.phi[j] - flux.phi[i];
        if dphi <= 0.0 {
            dphi += TAU;
        }
        let mid = flux.phi[i] + 0.5 * dphi;
        s += 0.5 * (flux.u_n_sq[i] + flux.u_n_sq[j]) * libm::cos(mid) * flux.radius * dphi;
    }
    s
}

/// Result of checking that `u_N²` does not decrease on `φ ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxMonotonicity {
    Monotone,
    /// Concentric hole: the flux is constant and the check is vacuous.
    NotApplicable,
    /// First decrease larger than the tolerance, between these two angles.
    Violation {
        phi_from: f64,
        phi_to: f64,
    },
}

impl FluxMonotonicity {
    pub fn passed(&self) -> bool {
        !matches!(self, FluxMonotonicity::Violation { .. })
    }
}

/// Checks `u_N²` nondecreasing along the nodes with `φ ∈ [0, π]`, allowing a drop of
/// `1e−3 · max u_N²` per step.
pub fn flux_monotonicity(flux: &BoundaryFlux) -> FluxMonotonicity {
    if flux.center.x == 0.0 && flux.center.y == 0.0 {
        return FluxMonotonicity::NotApplicable;
    }
    let slack = 1e-3 * flux.max_sq();
    let upper: Vec<usize> = (0..flux.len()).filter(|&i| flux.phi[i] <= PI + 1e-12).collect();
    for w in upper.windows(2) {
        let (i, j) = (w[0], w[1]);
        if flux.u_n_sq[j] < flux.u_n_sq[i] - slack {
            return FluxMonotonicity::Violation {
                phi_from: flux.phi[i],
                phi_to: flux.phi[j],
            };
        }
    }
    FluxMonotonicity::Monotone
}
