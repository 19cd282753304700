//! The eccentric annulus, the Möbius map from a concentric annulus onto it, and a structured
//! triangulation built on that map.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Triangles with signed area at or below this are rejected.
pub const MIN_TRIANGLE_AREA: f64 = 1e-14;

/// Default radial and angular resolution of [`generate_mesh`].
pub const DEFAULT_N_R: usize = 64;
pub const DEFAULT_N_THETA: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    /// Mirror image under `y ↦ −y`.
    pub fn reflect(self) -> Point {
        Point::new(self.x, -self.y)
    }
}

/// Unit disc minus the disc of radius `a` centred at `(h, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSpec {
    a: f64,
    h: f64,
}

impl AnnulusSpec {
    /// Requires `0 < a < 1`, `h >= 0` and `a + h < 1`.
    pub fn new(a: f64, h: f64) -> Result<Self> {
        if a.is_finite() && h.is_finite() && a > 0.0 && a < 1.0 && h >= 0.0 && a + h < 1.0 {
            Ok(AnnulusSpec { a, h })
        } else {
            Err(Error::Geometry { a, h })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn inner_center(&self) -> Point {
        Point::new(self.h, 0.0)
    }

    /// Area of the annulus.
    pub fn area(&self) -> f64 {
        PI * (1.0 - self.a * self.a)
    }
}

/// `w ↦ (w + alpha)/(1 + alpha w)` from `rho <= |w| <= 1` onto the eccentric annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalMap {
    pub alpha: f64,
    pub rho: f64,
}

/// Parameters of the Möbius map for `spec`.
///
/// With `p = h + a` and `q = h − a` the real points `p`, `q` of the inner circle must have
/// preimages of equal modulus, which gives `alpha² (p+q) − 2 alpha (1 + pq) + (p+q) = 0`.
pub fn conformal_params(spec: &AnnulusSpec) -> ConformalMap {
    let (a, h) = (spec.a, spec.h);
    if h == 0.0 {
        return ConformalMap { alpha: 0.0, rho: a };
    }
    let p = h + a;
    let q = h - a;
    let s = p + q;
    let c = 1.0 + p * q;
    // c - sqrt(c² - s²) cancels badly for small s; use the conjugate form.
    let alpha = s / (c + libm::sqrt(c * c - s * s));
    let rho = ((alpha - q) / (1.0 - alpha * q)).abs();
    ConformalMap { alpha, rho }
}

/// Image of the preimage point `w` under `map`.
pub fn map_to_physical(map: &ConformalMap, w: Point) -> Point {
    map.apply(w)
}

impl ConformalMap {
    pub fn new(spec: &AnnulusSpec) -> Self {
        conformal_params(spec)
    }

    pub fn apply(&self, w: Point) -> Point {
        let alpha = self.alpha;
        let (u, v) = (w.x, w.y);
        let den_re = 1.0 + alpha * u;
        let den_im = alpha * v;
        let d = den_re * den_re + den_im * den_im;
        Point::new(
            ((u + alpha) * den_re + alpha * v * v) / d,
            v * (1.0 - alpha * alpha) / d,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Interior,
    OuterBoundary,
    InnerBoundary,
}

/// Conforming triangulation of the annulus on the mapped polar grid.
///
/// Node `(j, k)` has index `j * n_theta + k`: `j = 0` is the inner circle, `j = n_r` the outer
/// one, `k` the angular position in the preimage.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub spec: AnnulusSpec,
    pub map: ConformalMap,
    pub n_r: usize,
    pub n_theta: usize,
    pub nodes: Vec<Point>,
    /// Counterclockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    pub node_class: Vec<NodeClass>,
    /// Inner-circle nodes by increasing angle about `(h, 0)`, starting at angle 0.
    pub inner_ring: Vec<usize>,
    /// Outer-circle nodes by increasing angle about the origin, starting at angle 0.
    pub outer_ring: Vec<usize>,
}

/// Angle of `p` about `center`, in `[0, 2π)`.
pub fn polar_angle(p: Point, center: Point) -> f64 {
    let t = libm::atan2(p.y - center.y, p.x - center.x);
    let t = if t < 0.0 { t + TAU } else { t };
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Unit direction of the preimage grid line `k`, exactly mirror-symmetric in `k ↦ n − k`.
fn grid_direction(k: usize, n_theta: usize) -> Point {
    if k == 0 {
        return Point::new(1.0, 0.0);
    }
    if 2 * k == n_theta {
        return Point::new(-1.0, 0.0);
    }
    if 2 * k > n_theta {
        return grid_direction(n_theta - k, n_theta).reflect();
    }
    let (s, c) = libm::sincos(TAU * (k as f64 / n_theta as f64));
    Point::new(c, s)
}

/// Mapped polar grid with `n_r + 1` rings of `n_theta` nodes.
///
/// Preimage radii are graded geometrically, `r_j = rho (1/rho)^(j/n_r)`. Each grid quad is
/// split along the diagonal `(j,k)-(j+1,k+1)` in the first and third quadrants of the
/// preimage and along `(j,k+1)-(j+1,k)` in the second and fourth. The mesh is invariant under
/// `y ↦ −y`, and for `h = 0` also under `x ↦ −x`.
pub fn generate_mesh(spec: &AnnulusSpec, n_r: usize, n_theta: usize) -> Result<Mesh> {
    if n_r < 4 {
        return Err(Error::Resolution("n_r must be at least 4"));
    }
    if n_theta < 16 || !n_theta.is_multiple_of(4) {
        return Err(Error::Resolution(
            "n_theta must be a multiple of 4 and at least 16",
        ));
    }

    let map = conformal_params(spec);
    let growth = 1.0 / map.rho;
    let radii: Vec<f64> = (0..=n_r)
        .map(|j| match j {
            0 => map.rho,
            j if j == n_r => 1.0,
            j => map.rho * libm::pow(growth, j as f64 / n_r as f64),
        })
        .collect();
    let directions: Vec<Point> = (0..n_theta).map(|k| grid_direction(k, n_theta)).collect();

    let mut nodes = Vec::with_capacity((n_r + 1) * n_theta);
    let mut node_class = Vec::with_capacity(nodes.capacity());
    for (j, &r) in radii.iter().enumerate() {
        let class = if j == 0 {
            NodeClass::InnerBoundary
        } else if j == n_r {
            NodeClass::OuterBoundary
        } else {
            NodeClass::Interior
        };
        for d in &directions {
            nodes.push(map.apply(Point::new(r * d.x, r * d.y)));
            node_class.push(class);
        }
    }

    let idx = |j: usize, k: usize| j * n_theta + k % n_theta;
    let mut triangles = Vec::with_capacity(2 * n_r * n_theta);
    for j in 0..n_r {
        for k in 0..n_theta {
            let (p00, p01, p11, p10) = (idx(j, k), idx(j, k + 1), idx(j + 1, k + 1), idx(j + 1, k));
            if (4 * k / n_theta).is_multiple_of(2) {
                triangles.push([p00, p11, p01]);
                triangles.push([p00, p10, p11]);
            } else {
                triangles.push([p00, p10, p01]);
                triangles.push([p01, p10, p11]);
            }
        }
    }

    for (t, tri) in triangles.iter().enumerate() {
        let area = signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
        if area <= MIN_TRIANGLE_AREA {
            return Err(Error::DegenerateTriangle {
                triangle: t,
                nodes: *tri,
                area,
            });
        }
    }

    let inner_center = spec.inner_center();
    let mut inner_ring: Vec<usize> = (0..n_theta).collect();
    sort_by_angle(&mut inner_ring, &nodes, inner_center);
    let mut outer_ring: Vec<usize> = (n_r * n_theta..(n_r + 1) * n_theta).collect();
    sort_by_angle(&mut outer_ring, &nodes, Point::default());

    Ok(Mesh {
        spec: *spec,
        map,
        n_r,
        n_theta,
        nodes,
        triangles,
        node_class,
        inner_ring,
        outer_ring,
    })
}

fn sort_by_angle(ring: &mut [usize], nodes: &[Point], center: Point) {
    ring.sort_by(|&i, &j| polar_angle(nodes[i], center).total_cmp(&polar_angle(nodes[j], center)));
}

/// Signed area, positive for counterclockwise `p0, p1, p2`.
pub fn signed_area(p0: Point, p1: Point, p2: Point) -> f64 {
    0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y))
}

/// Node-to-triangle incidence in compressed form.
#[derive(Debug, Clone)]
pub struct NodeTriangles {
    offsets: Vec<usize>,
    triangles: Vec<usize>,
}

impl NodeTriangles {
    pub fn of(&self, node: usize) -> &[usize] {
        &self.triangles[self.offsets[node]..self.offsets[node + 1]]
    }
}

impl Mesh {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.node_class[node] != NodeClass::Interior
    }

    /// Index of the mirror image of `node` under `y ↦ −y`.
    pub fn mirror_node(&self, node: usize) -> usize {
        let j = node / self.n_theta;
        let k = node % self.n_theta;
        j * self.n_theta + (self.n_theta - k) % self.n_theta
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [p0, p1, p2] = self.triangle_points(t);
        signed_area(p0, p1, p2)
    }

    /// Number of distinct edges.
    pub fn edge_count(&self) -> usize {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(i, j)| (i.min(j), i.max(j)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    }

    /// `V − E + F` with `F` counting triangles; zero for an annulus.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_nodes() as i64 - self.edge_count() as i64 + self.triangles.len() as i64
    }

    /// Smallest interior angle of any triangle, in degrees.
    pub fn min_angle_degrees(&self) -> f64 {
        let mut smallest = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            for i in 0..3 {
                let (a, b, c) = (p[i], p[(i + 1) % 3], p[(i + 2) % 3]);
                let (ux, uy) = (b.x - a.x, b.y - a.y);
                let (vx, vy) = (c.x - a.x, c.y - a.y);
                let cross = ux * vy - uy * vx;
                let dot = ux * vx + uy * vy;
                smallest = smallest.min(libm::atan2(cross.abs(), dot));
            }
        }
        smallest.to_degrees()
    }

    pub fn node_triangles(&self) -> NodeTriangles {
        let n = self.num_nodes();
        let mut offsets = vec![0usize; n + 1];
        for tri in &self.triangles {
            for &v in tri {
                offsets[v + 1] += 1;
            }
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut triangles = vec![0usize; offsets[n]];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                triangles[fill[v]] = t;
                fill[v] += 1;
            }
        }
        NodeTriangles { offsets, triangles }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit_circle(points: &[Point]) -> (Point, f64) {
        // x-extremes of a circle symmetric about the x-axis give centre and radius
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = lo.min(p.x);
            hi = hi.max(p.x);
        }
        (Point::new(0.5 * (lo + hi), 0.0), 0.5 * (hi - lo))
    }

    #[test]
    fn conformal_params_closed_form_case() {
        let m = conformal_params(&AnnulusSpec::new(0.3, 0.3).unwrap());
        assert!((m.alpha - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.rho - 1.0 / 3.0).abs() < 1e-15);

        let c = conformal_params(&AnnulusSpec::new(0.3, 0.0).unwrap());
        assert_eq!(c, ConformalMap { alpha: 0.0, rho: 0.3 });
    }

    #[test]
    fn inner_preimage_circle_maps_onto_hole() {
        for (a, h) in [(0.1, 0.8), (0.3, 0.6), (0.6, 0.3), (0.1, 0.1), (0.05, 0.9)] {
            let spec = AnnulusSpec::new(a, h).unwrap();
            let map = conformal_params(&spec);
            let image: Vec<Point> = (0..64)
                .map(|k| {
                    let t = TAU * k as f64 / 64.0;
                    map.apply(Point::new(map.rho * libm::cos(t), map.rho * libm::sin(t)))
                })
                .collect();
            let (center, radius) = fit_circle(&image);
            assert!(center.dist(Point::new(h, 0.0)) < 1e-10);
            assert!((radius - a).abs() < 1e-10);
            for p in &image {
                assert!((p.dist(spec.inner_center()) - a).abs() < 1e-12);
            }
            for k in 0..64 {
                let t = TAU * k as f64 / 64.0;
                let z = map.apply(Point::new(libm::cos(t), libm::sin(t)));
                assert!((z.norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn map_fixed_points() {
        let id = ConformalMap { alpha: 0.0, rho: 0.3 };
        assert_eq!(map_to_physical(&id, Point::new(0.5, 0.2)), Point::new(0.5, 0.2));
        let m = ConformalMap {
            alpha: 1.0 / 3.0,
            rho: 1.0 / 3.0,
        };
        let p = map_to_physical(&m, Point::new(1.0, 0.0));
        assert!(p.dist(Point::new(1.0, 0.0)) < 1e-15);
        let q = map_to_physical(&m, Point::new(-1.0, 0.0));
        assert!(q.dist(Point::new(-1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn coarse_mesh_counts() {
        let mesh = generate_mesh(&AnnulusSpec::new(0.3, 0.0).unwrap(), 4, 16).unwrap();
        assert_eq!(mesh.num_nodes(), 80);
        assert_eq!(mesh.triangles.len(), 128);
        assert_eq!(mesh.edge_count(), 208);
        assert_eq!(mesh.euler_characteristic(), 0);
    }

    #[test]
    fn resolution_validation() {
        let spec = AnnulusSpec::new(0.3, 0.1).unwrap();
        assert!(matches!(generate_mesh(&spec, 3, 16), Err(Error::Resolution(_))));
        assert!(matches!(generate_mesh(&spec, 4, 15), Err(Error::Resolution(_))));
        assert!(matches!(generate_mesh(&spec, 4, 17), Err(Error::Resolution(_))));
        assert!(matches!(generate_mesh(&spec, 4, 18), Err(Error::Resolution(_))));
        assert!(AnnulusSpec::new(0.5, 0.5).is_err());
        assert!(AnnulusSpec::new(0.0, 0.1).is_err());
        assert!(AnnulusSpec::new(0.3, -0.1).is_err());
    }

    #[test]
    fn boundary_nodes_lie_on_circles() {
        let spec = AnnulusSpec::new(0.3, 0.3).unwrap();
        let mesh = generate_mesh(&spec, 32, 128).unwrap();
        for &i in &mesh.inner_ring {
            assert!((mesh.nodes[i].dist(spec.inner_center()) - 0.3).abs() < 1e-12);
        }
        for &i in &mesh.outer_ring {
            assert!((mesh.nodes[i].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_ring_starts_nearest_outer_circle() {
        let spec = AnnulusSpec::new(0.3, 0.3).unwrap();
        let mesh = generate_mesh(&spec, 8, 32).unwrap();
        let first = mesh.nodes[mesh.inner_ring[0]];
        assert!(first.dist(Point::new(0.6, 0.0)) < 1e-14);
        let c = spec.inner_center();
        let angles: Vec<f64> = mesh
            .inner_ring
            .iter()
            .map(|&i| polar_angle(mesh.nodes[i], c))
            .collect();
        assert!(angles.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mesh_is_mirror_symmetric() {
        let spec = AnnulusSpec::new(0.6, 0.3).unwrap();
        let mesh = generate_mesh(&spec, 8, 32).unwrap();
        for i in 0..mesh.num_nodes() {
            assert_eq!(mesh.nodes[mesh.mirror_node(i)], mesh.nodes[i].reflect());
        }
        let mut original: Vec<[usize; 3]> = mesh.triangles.iter().map(|t| sorted(*t)).collect();
        let mut mirrored: Vec<[usize; 3]> = mesh
            .triangles
            .iter()
            .map(|t| sorted(t.map(|v| mesh.mirror_node(v))))
            .collect();
        original.sort_unstable();
        mirrored.sort_unstable();
        assert_eq!(original, mirrored);
    }

    fn sorted(mut t: [usize; 3]) -> [usize; 3] {
        t.sort_unstable();
        t
    }

    #[test]
    fn refinement_is_nested() {
        let spec = AnnulusSpec::new(0.1, 0.8).unwrap();
        let coarse = generate_mesh(&spec, 8, 32).unwrap();
        let fine = generate_mesh(&spec, 16, 64).unwrap();
        for j in 0..=8 {
            for k in 0..32 {
                let c = coarse.nodes[j * 32 + k];
                let f = fine.nodes[2 * j * 64 + 2 * k];
                assert_eq!(c, f, "node ({j},{k})");
            }
        }
    }

    #[test]
    fn default_meshes_are_well_shaped() {
        for (a, h) in [(0.1, 0.8), (0.3, 0.6), (0.6, 0.3), (0.6, 0.1), (0.1, 0.0)] {
            let mesh = generate_mesh(&AnnulusSpec::new(a, h).unwrap(), DEFAULT_N_R, DEFAULT_N_THETA).unwrap();
            assert!(mesh.min_angle_degrees() > 5.0);
            assert!((0..mesh.triangles.len()).all(|t| mesh.triangle_area(t) > 0.0));
        }
    }
}
