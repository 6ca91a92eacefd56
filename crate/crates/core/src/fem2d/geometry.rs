use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{Ambient, Point};
use crate::error::{domain, Error, Result};
use crate::math;
use crate::spaceform::CurvatureSpec;

/// Shape of a domain, described in the tangent plane at its center.
///
/// In the Euclidean plane this is the shape itself. In the Poincare disk the
/// shape is mapped by `exp_0` (so a `Disk` is a geodesic disk of geodesic
/// radius `radius`) and then moved to the center by an isometry.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Disk {
        radius: f64,
    },
    /// Semi-axes `a` along the direction `angle` and `b` across it.
    Ellipse {
        a: f64,
        b: f64,
        angle: f64,
    },
    Annulus {
        inner: f64,
        outer: f64,
    },
    /// A simple polygon; either orientation is accepted.
    Polygon {
        vertices: Vec<Point>,
    },
    /// Star-shaped domain `r(theta) = a0 + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta)`.
    Polar {
        a0: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
}

/// A domain together with its comparison curvatures and mesh size.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub geometry: Geometry,
    /// Center of the shape in model coordinates.
    pub center: Point,
    pub ambient: Ambient,
    /// Upper bound for the sectional curvature used in the comparison.
    pub kappa: f64,
    /// Lower bound for the Ricci curvature used in the comparison.
    pub big_k: f64,
    /// Target edge length, measured in the tangent plane of the shape.
    pub h: f64,
}

/// Largest `sqrt(-kappa0) * extent` accepted in the Poincare model.
const MAX_HYPERBOLIC_EXTENT: f64 = 12.0;

impl DomainSpec {
    pub fn new(geometry: Geometry, ambient: Ambient, kappa: f64, big_k: f64, h: f64) -> Result<Self> {
        let spec = Self { geometry, center: [0.0, 0.0], ambient, kappa, big_k, h };
        spec.validate()?;
        Ok(spec)
    }

    /// Comparison curvatures equal to the ambient curvature.
    pub fn sharp(geometry: Geometry, ambient: Ambient, h: f64) -> Result<Self> {
        let k = ambient.curvature();
        Self::new(geometry, ambient, k, k, h)
    }

    pub fn with_center(mut self, center: Point) -> Result<Self> {
        self.center = center;
        self.validate()?;
        Ok(self)
    }

    /// The same domain with another mesh size.
    pub fn with_h(&self, h: f64) -> Self {
        Self { h, ..self.clone() }
    }

    pub fn curvature_spec(&self) -> Result<CurvatureSpec> {
        CurvatureSpec::new(2, self.ambient.curvature(), self.kappa, self.big_k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(domain("mesh size h must be positive"));
        }
        self.curvature_spec()?;
        if !self.ambient.contains(self.center) {
            return Err(domain("the center must lie in the model"));
        }
        validate_geometry(&self.geometry)?;
        if let Ambient::Poincare { kappa0 } = self.ambient {
            let extent = math::sqrt(-kappa0) * tangent_extent(&self.geometry);
            if extent > MAX_HYPERBOLIC_EXTENT {
                return Err(Error::Range { requested: extent, safe_max: MAX_HYPERBOLIC_EXTENT });
            }
        }
        if let Geometry::Annulus { inner, outer } = self.geometry {
            if outer - inner < self.h {
                return Err(Error::Resolution(alloc::format!(
                    "annulus gap {} is smaller than h = {}",
                    outer - inner,
                    self.h
                )));
            }
        }
        Ok(())
    }
}

fn positive(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(alloc::format!("{what} must be positive")))
    }
}

fn validate_geometry(g: &Geometry) -> Result<()> {
    match g {
        Geometry::Disk { radius } => positive(*radius, "disk radius"),
        Geometry::Ellipse { a, b, angle } => {
            positive(*a, "ellipse semi-axis a")?;
            positive(*b, "ellipse semi-axis b")?;
            if angle.is_finite() {
                Ok(())
            } else {
                Err(domain("ellipse angle must be finite"))
            }
        }
        Geometry::Annulus { inner, outer } => {
            positive(*inner, "annulus inner radius")?;
            positive(*outer, "annulus outer radius")?;
            if inner < outer {
                Ok(())
            } else {
                Err(domain("annulus needs inner < outer"))
            }
        }
        Geometry::Polygon { vertices } => validate_polygon(vertices),
        Geometry::Polar { a0, cos, sin } => {
            positive(*a0, "polar mean radius a0")?;
            if cos.iter().chain(sin).any(|c| !c.is_finite()) {
                return Err(domain("polar coefficients must be finite"));
            }
            let curve = Curve::Polar { a0: *a0, cos: cos.clone(), sin: sin.clone() };
            let min = (0..4096)
                .map(|i| polar_radius(*a0, cos, sin, 2.0 * PI * i as f64 / 4096.0))
                .fold(f64::INFINITY, f64::min);
            if min > 0.0 && curve.length() > 0.0 {
                Ok(())
            } else {
                Err(domain("polar radius function must stay positive"))
            }
        }
    }
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_touch(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, c: Point, d: f64| {
        d == 0.0
            && c[0] >= a[0].min(b[0])
            && c[0] <= a[0].max(b[0])
            && c[1] >= a[1].min(b[1])
            && c[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn validate_polygon(v: &[Point]) -> Result<()> {
    let n = v.len();
    if n < 3 {
        return Err(Error::Geometry("a polygon needs at least 3 vertices".into()));
    }
    if v.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(Error::Geometry("polygon vertices must be finite".into()));
    }
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if a == b {
            return Err(Error::Geometry(alloc::format!("polygon vertex {i} is repeated")));
        }
        // Adjacent edges may only share their common vertex.
        let c = v[(i + 2) % n];
        if cross(a, b, c) == 0.0 && (c[0] - b[0]) * (a[0] - b[0]) + (c[1] - b[1]) * (a[1] - b[1]) > 0.0 {
            return Err(Error::Geometry(alloc::format!("polygon folds back at vertex {}", (i + 1) % n)));
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_touch(a, b, v[j], v[(j + 1) % n]) {
                return Err(Error::Geometry(alloc::format!(
                    "polygon is self-intersecting: edges {i} and {j} meet"
                )));
            }
        }
    }
    let area: f64 = (0..n).map(|i| cross([0.0, 0.0], v[i], v[(i + 1) % n])).sum();
    if area.abs() == 0.0 {
        return Err(Error::Geometry("polygon has zero area".into()));
    }
    Ok(())
}

fn polar_radius(a0: f64, cos: &[f64], sin: &[f64], theta: f64) -> f64 {
    let mut r = a0;
    for (k, c) in cos.iter().enumerate() {
        r += c * math::cos((k + 1) as f64 * theta);
    }
    for (k, s) in sin.iter().enumerate() {
        r += s * math::sin((k + 1) as f64 * theta);
    }
    r
}

/// Largest distance of the shape from its center.
fn tangent_extent(g: &Geometry) -> f64 {
    match g {
        Geometry::Disk { radius } => *radius,
        Geometry::Ellipse { a, b, .. } => a.max(*b),
        Geometry::Annulus { outer, .. } => *outer,
        Geometry::Polygon { vertices } => {
            vertices.iter().map(|p| math::hypot(p[0], p[1])).fold(0.0, f64::max)
        }
        Geometry::Polar { a0, cos, sin } => a0 + cos.iter().chain(sin).map(|c| c.abs()).sum::<f64>(),
    }
}

/// A closed boundary curve parametrized over `t` in `[0, 1)`.
#[derive(Debug, Clone)]
pub(crate) enum Curve {
    Ellipse {
        a: f64,
        b: f64,
        angle: f64,
    },
    Polar {
        a0: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
    /// Closed polyline parametrized proportionally to arc length.
    Polyline {
        vertices: Vec<Point>,
        cumulative: Vec<f64>,
    },
}

impl Curve {
    fn polyline(vertices: Vec<Point>) -> Self {
        let n = vertices.len();
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            cumulative.push(cumulative[i] + math::hypot(b[0] - a[0], b[1] - a[1]));
        }
        let total = cumulative[n];
        for c in &mut cumulative {
            *c /= total;
        }
        Curve::Polyline { vertices, cumulative }
    }

    pub(crate) fn eval(&self, t: f64) -> Point {
        let t = t - math::floor(t);
        match self {
            Curve::Ellipse { a, b, angle } => {
                let th = 2.0 * PI * t;
                let (x, y) = (a * math::cos(th), b * math::sin(th));
                let (c, s) = (math::cos(*angle), math::sin(*angle));
                [c * x - s * y, s * x + c * y]
            }
            Curve::Polar { a0, cos, sin } => {
                let th = 2.0 * PI * t;
                let r = polar_radius(*a0, cos, sin, th);
                [r * math::cos(th), r * math::sin(th)]
            }
            Curve::Polyline { vertices, cumulative } => {
                let n = vertices.len();
                let i = cumulative.partition_point(|&c| c <= t).clamp(1, n) - 1;
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                if t == cumulative[i] {
                    return a;
                }
                let s = (t - cumulative[i]) / (cumulative[i + 1] - cumulative[i]);
                [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
            }
        }
    }

    /// Euclidean length in the tangent plane.
    pub(crate) fn length(&self) -> f64 {
        match self {
            Curve::Polyline { vertices, .. } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                        math::hypot(b[0] - a[0], b[1] - a[1])
                    })
                    .sum()
            }
            _ => {
                let m = 8192;
                let mut prev = self.eval(0.0);
                let mut total = 0.0;
                for i in 1..=m {
                    let p = self.eval(i as f64 / m as f64);
                    total += math::hypot(p[0] - prev[0], p[1] - prev[1]);
                    prev = p;
                }
                total
            }
        }
    }

    /// Parameters of boundary samples with spacing at most `spacing`.
    ///
    /// Polylines keep every corner and split each edge evenly. Smooth curves
    /// get a multiple of 4 points, evenly spaced in arc length.
    pub(crate) fn sample_parameters(&self, spacing: f64) -> Vec<f64> {
        match self {
            Curve::Polyline { vertices, cumulative } => {
                let n = vertices.len();
                let mut out = Vec::new();
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    let len = math::hypot(b[0] - a[0], b[1] - a[1]);
                    let k = (math::ceil(len / spacing) as usize).max(1);
                    for j in 0..k {
                        out.push(cumulative[i] + (cumulative[i + 1] - cumulative[i]) * j as f64 / k as f64);
                    }
                }
                out
            }
            _ => {
                let m = 16384;
                let mut arc = Vec::with_capacity(m + 1);
                arc.push(0.0);
                let mut prev = self.eval(0.0);
                for i in 1..=m {
                    let p = self.eval(i as f64 / m as f64);
                    arc.push(arc[i - 1] + math::hypot(p[0] - prev[0], p[1] - prev[1]));
                    prev = p;
                }
                let total = arc[m];
                let count = (math::ceil(total / spacing / 4.0) as usize).max(2) * 4;
                (0..count)
                    .map(|k| {
                        let target = total * k as f64 / count as f64;
                        let i = arc.partition_point(|&s| s <= target).clamp(1, m) - 1;
                        let frac = (target - arc[i]) / (arc[i + 1] - arc[i]);
                        (i as f64 + frac) / m as f64
                    })
                    .collect()
            }
        }
    }
}

/// Boundary curves of the shape, in the tangent plane at its center.
pub(crate) fn boundary_curves(g: &Geometry) -> Vec<Curve> {
    match g {
        Geometry::Disk { radius } => {
            alloc::vec![Curve::Ellipse { a: *radius, b: *radius, angle: 0.0 }]
        }
        Geometry::Ellipse { a, b, angle } => alloc::vec![Curve::Ellipse { a: *a, b: *b, angle: *angle }],
        Geometry::Annulus { inner, outer } => alloc::vec![
            Curve::Ellipse { a: *outer, b: *outer, angle: 0.0 },
            Curve::Ellipse { a: *inner, b: *inner, angle: 0.0 },
        ],
        Geometry::Polygon { vertices } => alloc::vec![Curve::polyline(vertices.clone())],
        Geometry::Polar { a0, cos, sin } => {
            alloc::vec![Curve::Polar { a0: *a0, cos: cos.clone(), sin: sin.clone() }]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point> {
        alloc::vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    }

    #[test]
    fn polygon_validation() {
        assert!(validate_polygon(&square()).is_ok());
        let bowtie = alloc::vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(validate_polygon(&bowtie), Err(Error::Geometry(_))));
        assert!(validate_polygon(&square()[..2]).is_err());
    }

    #[test]
    fn spec_validation() {
        let e = Ambient::Euclidean;
        assert!(DomainSpec::sharp(Geometry::Disk { radius: 1.0 }, e, 0.1).is_ok());
        assert!(DomainSpec::sharp(Geometry::Disk { radius: -1.0 }, e, 0.1).is_err());
        assert!(DomainSpec::sharp(Geometry::Disk { radius: 1.0 }, e, 0.0).is_err());
        let thin = Geometry::Annulus { inner: 0.95, outer: 1.0 };
        assert!(matches!(DomainSpec::sharp(thin, e, 0.1), Err(Error::Resolution(_))));
        let bad_polar = Geometry::Polar { a0: 1.0, cos: alloc::vec![0.0, 1.5], sin: alloc::vec![] };
        assert!(DomainSpec::sharp(bad_polar, e, 0.1).is_err());
        // K <= kappa0 <= kappa <= 0
        let h = Ambient::poincare(-1.0).unwrap();
        assert!(DomainSpec::new(Geometry::Disk { radius: 1.0 }, h, 0.0, -1.0, 0.1).is_ok());
        assert!(DomainSpec::new(Geometry::Disk { radius: 1.0 }, h, -2.0, -2.0, 0.1).is_err());
        assert!(DomainSpec::new(Geometry::Disk { radius: 1.0 }, e, 0.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn polyline_samples_keep_corners() {
        let c = Curve::polyline(square());
        let ts = c.sample_parameters(0.3);
        assert_eq!(ts.len(), 16);
        for corner in square() {
            assert!(ts.iter().any(|&t| c.eval(t) == corner));
        }
        assert_eq!(c.eval(0.125), [0.5, 0.0]);
    }

    #[test]
    fn smooth_samples_are_even() {
        let c = Curve::Ellipse { a: 1.0, b: 1.0, angle: 0.0 };
        let ts = c.sample_parameters(0.1);
        assert_eq!(ts.len() % 4, 0);
        assert!(ts.len() >= 63);
        let p = c.eval(ts[ts.len() / 4]);
        assert!(p[0].abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
    }
}
