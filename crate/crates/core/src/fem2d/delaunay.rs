//! Incremental Delaunay triangulation with Lawson flips.

use alloc::vec::Vec;

use super::Point;

pub(crate) const NONE: usize = usize::MAX;

/// Relative tolerance of the orientation and in-circle predicates.
const PREDICATE_EPS: f64 = 1e-12;

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn dist(a: Point, b: Point) -> f64 {
    crate::math::hypot(a[0] - b[0], a[1] - b[1])
}

/// `> 0` when `d` lies inside the circumcircle of the counterclockwise `a, b, c`,
/// together with a bound on the rounding error of the determinant.
fn incircle(a: Point, b: Point, c: Point, d: Point) -> (f64, f64) {
    let (adx, ady) = (a[0] - d[0], a[1] - d[1]);
    let (bdx, bdy) = (b[0] - d[0], b[1] - d[1]);
    let (cdx, cdy) = (c[0] - d[0], c[1] - d[1]);
    let alift = adx * adx + ady * ady;
    let blift = bdx * bdx + bdy * bdy;
    let clift = cdx * cdx + cdy * cdy;
    let (bc, ca, ab) = (bdx * cdy - cdx * bdy, cdx * ady - adx * cdy, adx * bdy - bdx * ady);
    let det = alift * bc + blift * ca + clift * ab;
    let perm = alift * ((bdx * cdy).abs() + (cdx * bdy).abs())
        + blift * ((cdx * ady).abs() + (adx * cdy).abs())
        + clift * ((adx * bdy).abs() + (bdx * ady).abs());
    (det, PREDICATE_EPS * perm)
}

enum Location {
    Inside(usize),
    /// On edge `i` (opposite local vertex `i`) of the triangle.
    OnEdge(usize, usize),
    Vertex(usize),
}

/// Triangulation of a point set inside a large enclosing triangle whose
/// vertices are `0, 1, 2`.
///
/// `nbr[t][i]` is the triangle across the edge opposite `tris[t][i]`.
#[derive(Debug, Clone)]
pub(crate) struct Triangulation {
    pub pts: Vec<Point>,
    pub tris: Vec<[usize; 3]>,
    pub nbr: Vec<[usize; 3]>,
    last: usize,
    stack: Vec<usize>,
}

impl Triangulation {
    pub fn new(min: Point, max: Point) -> Self {
        let cx = 0.5 * (min[0] + max[0]);
        let cy = 0.5 * (min[1] + max[1]);
        let size = (max[0] - min[0]).max(max[1] - min[1]).max(1e-300) * 50.0;
        let pts =
            alloc::vec![[cx - 2.0 * size, cy - size], [cx + 2.0 * size, cy - size], [cx, cy + 2.0 * size],];
        Self { pts, tris: alloc::vec![[0, 1, 2]], nbr: alloc::vec![[NONE; 3]], last: 0, stack: Vec::new() }
    }

    pub fn is_enclosing(v: usize) -> bool {
        v < 3
    }

    fn edge_tolerance(&self, a: usize, b: usize, p: Point) -> f64 {
        let (pa, pb) = (self.pts[a], self.pts[b]);
        PREDICATE_EPS * dist(pa, pb) * (dist(pa, p) + dist(pb, p))
    }

    fn classify(&self, t: usize, p: Point) -> Option<Location> {
        let tri = self.tris[t];
        for &v in &tri {
            let q = self.pts[v];
            let scale = dist(self.pts[tri[0]], self.pts[tri[1]]);
            if dist(q, p) <= PREDICATE_EPS * scale {
                return Some(Location::Vertex(v));
            }
        }
        let mut on = None;
        for i in 0..3 {
            let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
            let o = orient(self.pts[a], self.pts[b], p);
            let tol = self.edge_tolerance(a, b, p);
            if o < -tol {
                return None;
            }
            if o <= tol {
                on = Some(i);
            }
        }
        Some(match on {
            Some(i) => Location::OnEdge(t, i),
            None => Location::Inside(t),
        })
    }

    fn locate(&self, p: Point) -> Location {
        let mut t = self.last.min(self.tris.len() - 1);
        let cap = 4 * self.tris.len() + 16;
        'walk: for step in 0..cap {
            let tri = self.tris[t];
            for k in 0..3 {
                let i = (k + step) % 3;
                let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                if orient(self.pts[a], self.pts[b], p) < -self.edge_tolerance(a, b, p) {
                    let next = self.nbr[t][i];
                    if next == NONE {
                        break 'walk;
                    }
                    t = next;
                    continue 'walk;
                }
            }
            if let Some(loc) = self.classify(t, p) {
                return loc;
            }
            break;
        }
        (0..self.tris.len())
            .find_map(|t| self.classify(t, p))
            .expect("point lies inside the enclosing triangle")
    }

    fn replace_neighbor(&mut self, t: usize, old: usize, new: usize) {
        if t == NONE {
            return;
        }
        for k in 0..3 {
            if self.nbr[t][k] == old {
                self.nbr[t][k] = new;
                return;
            }
        }
    }

    /// Inserts `p` and returns its vertex index, or `Err(v)` when `p`
    /// coincides with the existing vertex `v`.
    pub fn insert(&mut self, p: Point) -> Result<usize, usize> {
        let v = self.pts.len();
        match self.locate(p) {
            Location::Vertex(w) => return Err(w),
            Location::Inside(t) => {
                self.pts.push(p);
                self.split_triangle(t, v);
            }
            Location::OnEdge(t, i) => {
                self.pts.push(p);
                self.split_edge(t, i, v);
            }
        }
        self.legalize(v);
        Ok(v)
    }

    fn split_triangle(&mut self, t: usize, p: usize) {
        let [v0, v1, v2] = self.tris[t];
        let [n0, n1, n2] = self.nbr[t];
        let t1 = self.tris.len();
        let t2 = t1 + 1;
        self.tris[t] = [p, v1, v2];
        self.nbr[t] = [n0, t1, t2];
        self.tris.push([p, v2, v0]);
        self.nbr.push([n1, t2, t]);
        self.tris.push([p, v0, v1]);
        self.nbr.push([n2, t, t1]);
        self.replace_neighbor(n1, t, t1);
        self.replace_neighbor(n2, t, t2);
        self.stack.extend([t, t1, t2]);
        self.last = t;
    }

    fn split_edge(&mut self, t: usize, i: usize, p: usize) {
        let tri = self.tris[t];
        let (a, b, c) = (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]);
        let (u, tb, tc) = (self.nbr[t][i], self.nbr[t][(i + 1) % 3], self.nbr[t][(i + 2) % 3]);
        let tn = self.tris.len();
        // A = [a, b, p] in slot t, B = [a, p, c] new.
        if u == NONE {
            self.tris[t] = [a, b, p];
            self.nbr[t] = [NONE, tn, tc];
            self.tris.push([a, p, c]);
            self.nbr.push([NONE, tb, t]);
            self.replace_neighbor(tb, t, tn);
            self.stack.extend([t, tn]);
            self.last = t;
            return;
        }
        let j = (0..3).find(|&k| self.nbr[u][k] == t).expect("adjacency is symmetric");
        let w = self.tris[u][j];
        let (uc, ub) = (self.nbr[u][(j + 1) % 3], self.nbr[u][(j + 2) % 3]);
        // u = [w, c, b]: uc is across (b, w), ub across (w, c).
        let (sb, sd) = (tn, tn + 1);
        self.tris[t] = [a, b, p];
        self.nbr[t] = [sd, sb, tc];
        self.tris.push([a, p, c]);
        self.nbr.push([u, tb, t]);
        self.tris[u] = [w, c, p];
        self.nbr[u] = [sb, sd, ub];
        self.tris.push([w, p, b]);
        self.nbr.push([t, uc, u]);
        self.replace_neighbor(tb, t, sb);
        self.replace_neighbor(uc, u, sd);
        self.stack.extend([t, sb, u, sd]);
        self.last = t;
    }

    fn legalize(&mut self, p: usize) {
        while let Some(t) = self.stack.pop() {
            let Some(i) = self.tris[t].iter().position(|&v| v == p) else {
                continue;
            };
            let n = self.nbr[t][i];
            if n == NONE {
                continue;
            }
            let (a, b) = (self.tris[t][(i + 1) % 3], self.tris[t][(i + 2) % 3]);
            let j = (0..3).find(|&k| self.nbr[n][k] == t).expect("adjacency is symmetric");
            let q = self.tris[n][j];
            let (det, err) = incircle(self.pts[p], self.pts[a], self.pts[b], self.pts[q]);
            if det <= err {
                continue;
            }
            // t = [p, a, b], n = [q, b, a]; flip to [p, a, q] and [p, q, b].
            let (ta, tb) = (self.nbr[t][(i + 1) % 3], self.nbr[t][(i + 2) % 3]);
            let (nb, na) = (self.nbr[n][(j + 1) % 3], self.nbr[n][(j + 2) % 3]);
            self.tris[t] = [p, a, q];
            self.nbr[t] = [nb, n, tb];
            self.tris[n] = [p, q, b];
            self.nbr[n] = [na, ta, t];
            self.replace_neighbor(ta, t, n);
            self.replace_neighbor(nb, n, t);
            self.stack.push(t);
            self.stack.push(n);
        }
    }

    /// Undirected edges `(min, max)` of all triangles, sorted and unique.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .tris
            .iter()
            .flat_map(|t| {
                (0..3).map(move |k| {
                    let (a, b) = (t[k], t[(k + 1) % 3]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}
