use alloc::vec::Vec;

use super::{Point, TriMesh};
use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;
use crate::math::{self, neumaier_sum};
use crate::quad::GAUSS2_NODES;

/// P1 element stiffness matrix of triangle `t`, `K_ij = e_i . e_j / (4 A)`
/// with `e_i` the edge opposite vertex `i`.
pub fn element_stiffness(mesh: &TriMesh, t: usize) -> Result<[[f64; 3]; 3]> {
    let area = mesh.triangle_area(t);
    if !(area > 0.0) {
        return Err(Error::DegenerateTriangle { triangle: t, area });
    }
    let tri = mesh.triangles()[t];
    let p: [Point; 3] = [0, 1, 2].map(|k| mesh.vertices()[tri[k]]);
    let e: [Point; 3] = [0, 1, 2].map(|i| {
        let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
        [b[0] - a[0], b[1] - a[1]]
    });
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (e[i][0] * e[j][0] + e[i][1] * e[j][1]) / (4.0 * area);
        }
    }
    Ok(k)
}

/// Global stiffness matrix from per-triangle element matrices.
///
/// Contributions are summed in triangle order whatever produced `elements`,
/// so the result is reproducible bit for bit.
pub fn assemble_stiffness(mesh: &TriMesh, elements: &[[[f64; 3]; 3]]) -> Result<CsrMatrix> {
    let n = mesh.num_vertices();
    let mut triplets = Vec::with_capacity(9 * elements.len());
    for (tri, k) in mesh.triangles().iter().zip(elements) {
        for i in 0..3 {
            for j in 0..3 {
                triplets.push((tri[i], tri[j], k[i][j]));
            }
        }
    }
    CsrMatrix::from_triplets(n, n, triplets)
}

/// P1 stiffness matrix. The Euclidean element geometry is used in both
/// ambients since the planar Dirichlet energy is conformally invariant.
pub fn stiffness_matrix(mesh: &TriMesh) -> Result<CsrMatrix> {
    let elements =
        (0..mesh.num_triangles()).map(|t| element_stiffness(mesh, t)).collect::<Result<Vec<_>>>()?;
    assemble_stiffness(mesh, &elements)
}

/// Ambient length of the straight model-coordinate segment `a b`
/// (two-point Gauss rule for the conformal factor).
fn edge_length(mesh: &TriMesh, a: Point, b: Point) -> f64 {
    let len = math::hypot(b[0] - a[0], b[1] - a[1]);
    let ambient = mesh.ambient();
    let avg: f64 = GAUSS2_NODES
        .iter()
        .map(|&s| 0.5 * ambient.conformal_factor([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]))
        .sum();
    len * avg
}

/// Consistent P1 boundary mass matrix, indexed by position in
/// [`TriMesh::boundary_vertices`].
pub fn boundary_mass_matrix(mesh: &TriMesh) -> CsrMatrix {
    let bv = mesh.boundary_vertices();
    let pos = |v: usize| bv.binary_search(&v).expect("boundary edge endpoints are boundary vertices");
    let mut triplets = Vec::with_capacity(4 * mesh.boundary_edges().len());
    for &[a, b] in mesh.boundary_edges() {
        let l = edge_length(mesh, mesh.vertices()[a], mesh.vertices()[b]);
        let (i, j) = (pos(a), pos(b));
        triplets.push((i, i, l / 3.0));
        triplets.push((j, j, l / 3.0));
        triplets.push((i, j, l / 6.0));
        triplets.push((j, i, l / 6.0));
    }
    CsrMatrix::from_triplets(bv.len(), bv.len(), triplets).expect("indices are in range")
}

/// Ambient length of the boundary.
pub fn perimeter(mesh: &TriMesh) -> f64 {
    neumaier_sum(
        mesh.boundary_edges().iter().map(|&[a, b]| edge_length(mesh, mesh.vertices()[a], mesh.vertices()[b])),
    )
}

/// Quadrature points and ambient weights for `int_Omega f dmu_g`: the
/// three edge midpoints of every triangle, each with weight `rho^2 A / 3`.
pub fn domain_quadrature(mesh: &TriMesh) -> Vec<(Point, f64)> {
    let ambient = mesh.ambient();
    let mut out = Vec::with_capacity(3 * mesh.num_triangles());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let a = mesh.triangle_area(t) / 3.0;
        for k in 0..3 {
            let (p, q) = (mesh.vertices()[tri[k]], mesh.vertices()[tri[(k + 1) % 3]]);
            let m = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
            let rho = ambient.conformal_factor(m);
            out.push((m, a * rho * rho));
        }
    }
    out
}

/// Quadrature points and ambient weights for `int_{dOmega} f dA_g`: two
/// Gauss points per boundary edge.
pub fn boundary_quadrature(mesh: &TriMesh) -> Vec<(Point, f64)> {
    let ambient = mesh.ambient();
    let mut out = Vec::with_capacity(2 * mesh.boundary_edges().len());
    for &[a, b] in mesh.boundary_edges() {
        let (p, q) = (mesh.vertices()[a], mesh.vertices()[b]);
        let len = math::hypot(q[0] - p[0], q[1] - p[1]);
        for &s in &GAUSS2_NODES {
            let x = [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])];
            out.push((x, 0.5 * len * ambient.conformal_factor(x)));
        }
    }
    out
}

/// Ambient area: the sum of triangle areas, or the edge-midpoint rule for `rho^2`.
pub fn domain_volume(mesh: &TriMesh) -> f64 {
    match mesh.ambient() {
        super::Ambient::Euclidean => neumaier_sum((0..mesh.num_triangles()).map(|t| mesh.triangle_area(t))),
        _ => neumaier_sum(domain_quadrature(mesh).into_iter().map(|(_, w)| w)),
    }
}

/// Largest ambient distance between two boundary vertices.
pub fn domain_diameter(mesh: &TriMesh) -> f64 {
    let ambient = mesh.ambient();
    let pts: Vec<Point> = mesh.boundary_vertices().iter().map(|&v| mesh.vertices()[v]).collect();
    let mut d = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max(ambient.distance(pts[i], pts[j]));
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::super::Ambient;
    use super::*;

    #[test]
    fn reference_triangle() {
        let m = TriMesh::from_parts(
            alloc::vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            alloc::vec![[0, 1, 2]],
            Ambient::Euclidean,
        )
        .unwrap();
        let k = element_stiffness(&m, 0).unwrap();
        let want = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k[i][j] - want[i][j]).abs() < 1e-15);
            }
            assert!(k[i].iter().sum::<f64>().abs() < 1e-15);
        }
        let mb = boundary_mass_matrix(&m);
        // Vertex 0 touches edges of length 1 and 1: mass 2/3 on the diagonal.
        assert!((mb.get(0, 0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((mb.get(1, 2) - 2f64.sqrt() / 6.0).abs() < 1e-15);
        assert!((domain_volume(&m) - 0.5).abs() < 1e-15);
        assert!((domain_diameter(&m) - 2f64.sqrt()).abs() < 1e-15);
    }
}
