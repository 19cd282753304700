//! Linear finite elements on the annulus mesh and the discrete eigenproblem.

mod cholesky;
mod eigen;
mod sparse;

use alloc::vec;
use alloc::vec::Vec;

pub use cholesky::{rcm_ordering, EnvelopeCholesky};
pub use eigen::{smallest_eig, EigenResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use sparse::SparseSymMatrix;

use crate::error::{Error, Result};
use crate::geometry::{generate_mesh, signed_area, AnnulusSpec, Mesh, Point, MIN_TRIANGLE_AREA};

/// Element stiffness and mass of one linear triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMatrices {
    pub stiffness: [[f64; 3]; 3],
    pub mass: [[f64; 3]; 3],
    pub area: f64,
}

/// Gradients of the three barycentric coordinates on a counterclockwise triangle.
pub fn barycentric_gradients(p: [Point; 3]) -> [[f64; 2]; 3] {
    let twice_area = 2.0 * signed_area(p[0], p[1], p[2]);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let (b, c) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        g[i] = [(b.y - c.y) / twice_area, (c.x - b.x) / twice_area];
    }
    g
}

/// `K_ij = A ∇φi·∇φj`, `M_ij = A/12 (1 + δij)`.
pub fn element_matrices(p: [Point; 3]) -> ElementMatrices {
    let area = signed_area(p[0], p[1], p[2]);
    let g = barycentric_gradients(p);
    let mut stiffness = [[0.0; 3]; 3];
    let mut mass = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            stiffness[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
            mass[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    ElementMatrices {
        stiffness,
        mass,
        area,
    }
}

/// Numbering of the free (non-boundary) nodes, in increasing node order.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    /// Node of each degree of freedom.
    pub nodes: Vec<usize>,
    /// Degree of freedom of each node, `None` on the boundary.
    pub dof: Vec<Option<usize>>,
}

impl DofMap {
    pub fn new(mesh: &Mesh) -> Self {
        let mut nodes = Vec::new();
        let mut dof = vec![None; mesh.num_nodes()];
        for (v, d) in dof.iter_mut().enumerate() {
            if !mesh.is_boundary(v) {
                *d = Some(nodes.len());
                nodes.push(v);
            }
        }
        DofMap { nodes, dof }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Extends a vector over the free nodes by zero to all nodes.
    pub fn extend(&self, values: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.dof.len()];
        for (&v, &x) in self.nodes.iter().zip(values) {
            full[v] = x;
        }
        full
    }
}

fn assemble_with(
    mesh: &Mesh,
    index: impl Fn(usize) -> Option<usize>,
    dim: usize,
) -> Result<(SparseSymMatrix, SparseSymMatrix)> {
    let mut kt = Vec::with_capacity(6 * mesh.triangles.len());
    let mut mt = Vec::with_capacity(6 * mesh.triangles.len());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let e = element_matrices(mesh.triangle_points(t));
        if !(e.area > MIN_TRIANGLE_AREA) {
            return Err(Error::DegenerateTriangle {
                triangle: t,
                nodes: *tri,
                area: e.area,
            });
        }
        for i in 0..3 {
            let Some(gi) = index(tri[i]) else { continue };
            for j in 0..=i {
                let Some(gj) = index(tri[j]) else { continue };
                kt.push((gi, gj, e.stiffness[i][j]));
                mt.push((gi, gj, e.mass[i][j]));
            }
        }
    }
    Ok((
        SparseSymMatrix::from_triplets(dim, kt),
        SparseSymMatrix::from_triplets(dim, mt),
    ))
}

/// Stiffness and mass over all nodes, boundary included.
pub fn assemble_full(mesh: &Mesh) -> Result<(SparseSymMatrix, SparseSymMatrix)> {
    assemble_with(mesh, Some, mesh.num_nodes())
}

/// Stiffness and mass restricted to the free nodes of [`DofMap::new`].
pub fn assemble(mesh: &Mesh) -> Result<(SparseSymMatrix, SparseSymMatrix)> {
    let dofs = DofMap::new(mesh);
    assemble_with(mesh, |v| dofs.dof[v], dofs.len())
}

/// Mesh resolution: radial layers and nodes per ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            n_r: crate::geometry::DEFAULT_N_R,
            n_theta: crate::geometry::DEFAULT_N_THETA,
        }
    }
}

impl Resolution {
    pub const fn new(n_r: usize, n_theta: usize) -> Self {
        Resolution { n_r, n_theta }
    }

    /// Both counts doubled; the refined mesh contains every node of this one.
    pub const fn refined(self) -> Self {
        Resolution {
            n_r: 2 * self.n_r,
            n_theta: 2 * self.n_theta,
        }
    }
}

/// Discrete eigenpair with its mesh.
#[derive(Debug, Clone)]
pub struct Solution {
    pub mesh: Mesh,
    pub dofs: DofMap,
    pub lambda: f64,
    /// Eigenfunction at every mesh node (zero on the boundary), `∫ u² = 1`.
    pub u: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Meshes the annulus and computes its smallest discrete Dirichlet eigenpair.
pub fn solve_lambda(spec: &AnnulusSpec, resolution: Resolution, tol: f64) -> Result<Solution> {
    let mesh = generate_mesh(spec, resolution.n_r, resolution.n_theta)?;
    solve_on_mesh(mesh, tol)
}

pub fn solve_on_mesh(mesh: Mesh, tol: f64) -> Result<Solution> {
    let dofs = DofMap::new(&mesh);
    let (k, m) = assemble(&mesh)?;
    let eig = smallest_eig(&k, &m, tol, DEFAULT_MAX_ITER)?;
    let u = dofs.extend(&eig.vector);
    Ok(Solution {
        mesh,
        dofs,
        lambda: eig.lambda,
        u,
        residual: eig.residual,
        iterations: eig.iterations,
    })
}
