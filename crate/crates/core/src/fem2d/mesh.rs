use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::delaunay::{Triangulation, NONE};
use super::geometry::{boundary_curves, Curve};
use super::{Ambient, DomainSpec, Point};
use crate::error::{Error, Result};
use crate::math;

/// Smallest accepted signed triangle area.
pub const MIN_TRIANGLE_AREA: f64 = 1e-14;

/// Boundary sample spacing and interior lattice spacing, relative to `h`.
const SPACING: f64 = 0.85;

/// Interior lattice points closer than this (relative to the lattice
/// spacing) to the boundary polyline are dropped.
const BOUNDARY_CLEARANCE: f64 = 0.55;

const MAX_ROUNDS: usize = 64;

/// A conforming triangle mesh in model coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<[usize; 2]>,
    boundary_loops: Vec<Vec<usize>>,
    boundary_vertices: Vec<usize>,
    ambient: Ambient,
}

fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

impl TriMesh {
    /// Checks a raw triangulation and extracts its boundary.
    ///
    /// Triangles must be counterclockwise with area at least
    /// [`MIN_TRIANGLE_AREA`], every vertex must be used, and every edge must
    /// be shared by at most two consistently oriented triangles.
    pub fn from_parts(vertices: Vec<Point>, triangles: Vec<[usize; 3]>, ambient: Ambient) -> Result<Self> {
        let nv = vertices.len();
        if triangles.is_empty() {
            return Err(Error::Geometry("mesh has no triangles".into()));
        }
        if let Some(i) = vertices.iter().position(|&x| !ambient.contains(x)) {
            return Err(Error::Geometry(alloc::format!("vertex {i} lies outside the model")));
        }
        let mut used = alloc::vec![false; nv];
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::Geometry(alloc::format!("triangle {t} has an invalid vertex")));
            }
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if !(area >= MIN_TRIANGLE_AREA) {
                return Err(Error::DegenerateTriangle { triangle: t, area });
            }
            for &v in tri {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|&u| !u) {
            return Err(Error::Geometry(alloc::format!("vertex {v} belongs to no triangle")));
        }
        let mut half: Vec<(usize, usize, usize, usize)> = triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| (a.min(b), a.max(b), a, b))
            .collect();
        half.sort_unstable();
        let mut boundary_edges = Vec::new();
        let mut i = 0;
        while i < half.len() {
            let mut j = i + 1;
            while j < half.len() && half[j].0 == half[i].0 && half[j].1 == half[i].1 {
                j += 1;
            }
            match j - i {
                1 => boundary_edges.push([half[i].2, half[i].3]),
                2 if half[i].2 != half[i + 1].2 => {}
                _ => {
                    return Err(Error::Geometry(alloc::format!(
                        "edge ({}, {}) is not shared by two consistently oriented triangles",
                        half[i].0,
                        half[i].1
                    )))
                }
            }
            i = j;
        }
        let mut next = alloc::vec![NONE; nv];
        for &[a, b] in &boundary_edges {
            if next[a] != NONE {
                return Err(Error::Geometry(alloc::format!("boundary is pinched at vertex {a}")));
            }
            next[a] = b;
        }
        let mut boundary_vertices: Vec<usize> = boundary_edges.iter().map(|e| e[0]).collect();
        boundary_vertices.sort_unstable();
        let mut seen = alloc::vec![false; nv];
        let mut boundary_loops = Vec::new();
        for &start in &boundary_vertices {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v);
                v = next[v];
                if v == NONE {
                    return Err(Error::Geometry("boundary edges do not close up".into()));
                }
            }
            if v != start {
                return Err(Error::Geometry("boundary edges do not form loops".into()));
            }
            boundary_loops.push(cycle);
        }
        Ok(Self { vertices, triangles, boundary_edges, boundary_loops, boundary_vertices, ambient })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Boundary edges, oriented like the triangle they belong to.
    pub fn boundary_edges(&self) -> &[[usize; 2]] {
        &self.boundary_edges
    }

    pub fn boundary_loops(&self) -> &[Vec<usize>] {
        &self.boundary_loops
    }

    /// Sorted indices of the boundary vertices.
    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary_vertices
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Signed Euclidean area of triangle `t` in model coordinates.
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    /// Longest Euclidean edge in model coordinates.
    pub fn max_edge_length(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| {
                let (p, q) = (self.vertices[a], self.vertices[b]);
                math::hypot(p[0] - q[0], p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }

    /// The same mesh with the coordinates mapped by `f`.
    pub fn map_vertices<F: Fn(Point) -> Point>(&self, ambient: Ambient, f: F) -> Result<Self> {
        let vertices = self.vertices.iter().map(|&p| f(p)).collect();
        Self::from_parts(vertices, self.triangles.clone(), ambient)
    }
}

struct BoundaryLoop {
    curve: usize,
    params: Vec<f64>,
    verts: Vec<usize>,
}

struct Mesher<'a> {
    curves: &'a [Curve],
    loops: Vec<BoundaryLoop>,
    tr: Triangulation,
}

impl Mesher<'_> {
    fn insert(&mut self, p: Point) -> Result<Option<usize>> {
        match self.tr.insert(p) {
            Ok(v) => Ok(Some(v)),
            Err(_) => Ok(None),
        }
    }

    /// Splits segment `k` of loop `l` at the curve point of the mid parameter.
    fn split_segment(&mut self, l: usize, k: usize) -> Result<()> {
        let lp = &self.loops[l];
        let t0 = lp.params[k];
        let t1 = if k + 1 == lp.params.len() { 1.0 } else { lp.params[k + 1] };
        let tm = 0.5 * (t0 + t1);
        let p = self.curves[lp.curve].eval(tm);
        let Some(v) = self.insert(p)? else {
            return Err(Error::Resolution("boundary refinement produced a duplicate vertex".into()));
        };
        let lp = &mut self.loops[l];
        lp.params.insert(k + 1, tm);
        lp.verts.insert(k + 1, v);
        Ok(())
    }

    /// Boundary segments `((min, max), loop, index)`, sorted.
    fn segments(&self) -> Vec<((usize, usize), usize, usize)> {
        let mut out = Vec::new();
        for (l, lp) in self.loops.iter().enumerate() {
            let m = lp.verts.len();
            for k in 0..m {
                let (a, b) = (lp.verts[k], lp.verts[(k + 1) % m]);
                out.push(((a.min(b), a.max(b)), l, k));
            }
        }
        out.sort_unstable();
        out
    }

    fn split_all(&mut self, mut which: Vec<(usize, usize)>) -> Result<()> {
        which.sort_unstable();
        which.dedup();
        for &(l, k) in which.iter().rev() {
            self.split_segment(l, k)?;
        }
        Ok(())
    }

    /// Splits boundary segments until every one of them is a triangulation edge.
    fn conform(&mut self) -> Result<()> {
        for _ in 0..MAX_ROUNDS {
            let edges = self.tr.edges();
            let missing: Vec<(usize, usize)> = self
                .segments()
                .into_iter()
                .filter(|(e, _, _)| edges.binary_search(e).is_err())
                .map(|(_, l, k)| (l, k))
                .collect();
            if missing.is_empty() {
                return Ok(());
            }
            self.split_all(missing)?;
        }
        Err(Error::Resolution("boundary recovery did not terminate".into()))
    }

    /// Marks the triangles inside the domain by flooding outward from the
    /// enclosing triangle and toggling at every boundary segment.
    fn inside(&self) -> Result<Vec<bool>> {
        let segs: Vec<(usize, usize)> = self.segments().into_iter().map(|(e, _, _)| e).collect();
        let tr = &self.tr;
        let start = tr.tris.iter().position(|t| t.contains(&0)).expect("enclosing vertex is present");
        let mut parity = alloc::vec![u8::MAX; tr.tris.len()];
        parity[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for i in 0..3 {
                let n = tr.nbr[t][i];
                if n == NONE {
                    continue;
                }
                let (a, b) = (tr.tris[t][(i + 1) % 3], tr.tris[t][(i + 2) % 3]);
                let cross = segs.binary_search(&(a.min(b), a.max(b))).is_ok() as u8;
                let want = parity[t] ^ cross;
                if parity[n] == u8::MAX {
                    parity[n] = want;
                    queue.push_back(n);
                } else if parity[n] != want {
                    return Err(Error::Geometry("boundary is not resolved by the mesh".into()));
                }
            }
        }
        let inside: Vec<bool> = parity.iter().map(|&p| p == 1).collect();
        for (t, tri) in tr.tris.iter().enumerate() {
            if inside[t] && tri.iter().any(|&v| Triangulation::is_enclosing(v)) {
                return Err(Error::Geometry("boundary loops are not closed".into()));
            }
        }
        Ok(inside)
    }
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    math::hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)
}

/// Even-odd test against closed polylines.
fn inside_polylines(p: Point, segs: &[(Point, Point)]) -> bool {
    let mut inside = false;
    for &(a, b) in segs {
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Meshes the domain of `spec` with target edge length `spec.h`.
///
/// The shape is meshed in its tangent plane: boundary samples, an
/// equilateral interior lattice, Delaunay triangulation, boundary recovery
/// by splitting segments at curve midpoints, and midpoint refinement of
/// edges longer than `h`. Vertices are then placed in the model.
pub fn build_mesh(spec: &DomainSpec) -> Result<TriMesh> {
    spec.validate()?;
    let h = spec.h;
    let spacing = SPACING * h;
    let curves = boundary_curves(&spec.geometry);

    let mut samples: Vec<(usize, Vec<f64>, Vec<Point>)> = Vec::new();
    let (mut min, mut max) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for (c, curve) in curves.iter().enumerate() {
        let params = curve.sample_parameters(spacing);
        let pts: Vec<Point> = params.iter().map(|&t| curve.eval(t)).collect();
        for p in &pts {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        samples.push((c, params, pts));
    }

    let mut mesher = Mesher { curves: &curves, loops: Vec::new(), tr: Triangulation::new(min, max) };
    let mut polyline = Vec::new();
    for (c, params, pts) in samples {
        let mut verts = Vec::with_capacity(pts.len());
        for &p in &pts {
            match mesher.insert(p)? {
                Some(v) => verts.push(v),
                None => return Err(Error::Geometry("boundary curves touch each other".into())),
            }
        }
        for k in 0..pts.len() {
            polyline.push((pts[k], pts[(k + 1) % pts.len()]));
        }
        mesher.loops.push(BoundaryLoop { curve: c, params, verts });
    }

    let row = spacing * math::sqrt(3.0) / 2.0;
    let clearance = BOUNDARY_CLEARANCE * spacing;
    let j0 = math::floor(min[1] / row) as i64;
    let j1 = math::ceil(max[1] / row) as i64;
    for j in j0..=j1 {
        let y = j as f64 * row;
        let shift = if j.rem_euclid(2) == 1 { 0.5 * spacing } else { 0.0 };
        let i0 = math::floor((min[0] - shift) / spacing) as i64;
        let i1 = math::ceil((max[0] - shift) / spacing) as i64;
        for i in i0..=i1 {
            let p = [i as f64 * spacing + shift, y];
            if !inside_polylines(p, &polyline) {
                continue;
            }
            if polyline.iter().any(|&(a, b)| point_segment_distance(p, a, b) < clearance) {
                continue;
            }
            mesher.insert(p)?;
        }
    }

    let limit = h * (1.0 + 1e-9);
    let mut inside = Vec::new();
    let mut done = false;
    for _ in 0..MAX_ROUNDS {
        mesher.conform()?;
        inside = mesher.inside()?;
        let tr = &mesher.tr;
        let mut long: Vec<(usize, usize)> = Vec::new();
        for (t, tri) in tr.tris.iter().enumerate() {
            if !inside[t] {
                continue;
            }
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let (p, q) = (tr.pts[a], tr.pts[b]);
                if math::hypot(p[0] - q[0], p[1] - q[1]) > limit {
                    long.push((a.min(b), a.max(b)));
                }
            }
        }
        if long.is_empty() {
            done = true;
            break;
        }
        long.sort_unstable();
        long.dedup();
        let segs = mesher.segments();
        let mut boundary_splits = Vec::new();
        let mut midpoints = Vec::new();
        for e in long {
            match segs.binary_search_by(|s| s.0.cmp(&e)) {
                Ok(i) => boundary_splits.push((segs[i].1, segs[i].2)),
                Err(_) => {
                    let (p, q) = (mesher.tr.pts[e.0], mesher.tr.pts[e.1]);
                    midpoints.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                }
            }
        }
        mesher.split_all(boundary_splits)?;
        for p in midpoints {
            mesher.insert(p)?;
        }
    }
    if !done {
        return Err(Error::Resolution("edge refinement did not terminate".into()));
    }

    let tr = &mesher.tr;
    let mut index = alloc::vec![NONE; tr.pts.len()];
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (t, tri) in tr.tris.iter().enumerate() {
        if inside[t] {
            for &v in tri {
                index[v] = 0;
            }
            triangles.push(*tri);
        }
    }
    for (v, slot) in index.iter_mut().enumerate() {
        if *slot == 0 {
            *slot = vertices.len();
            vertices.push(spec.ambient.place(spec.center, tr.pts[v]));
        }
    }
    for tri in &mut triangles {
        for v in tri.iter_mut() {
            *v = index[*v];
        }
    }
    TriMesh::from_parts(vertices, triangles, spec.ambient)
}
