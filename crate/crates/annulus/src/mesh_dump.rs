//! Plain-text mesh dump for debugging: a header line, one `v x y` line per node, then one
//! `t i j k` line per counterclockwise triangle.

use std::io::{self, Write};

use annulus_core::geometry::Mesh;

pub fn write_mesh<W: Write>(mesh: &Mesh, mut out: W) -> io::Result<()> {
    writeln!(
        out,
        "# a {} h {} n_r {} n_theta {} nodes {} triangles {}",
        mesh.spec.a(),
        mesh.spec.h(),
        mesh.n_r,
        mesh.n_theta,
        mesh.num_nodes(),
        mesh.triangles.len()
    )?;
    for p in &mesh.nodes {
        writeln!(out, "v {:e} {:e}", p.x, p.y)?;
    }
    for [i, j, k] in &mesh.triangles {
        writeln!(out, "t {i} {j} {k}")?;
    }
    out.flush()
}
