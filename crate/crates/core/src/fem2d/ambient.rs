use super::Point;
use crate::error::{domain, Result};
use crate::math;

/// The model plane carrying a domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ambient {
    Euclidean,
    /// Poincare disk of constant curvature `kappa0 < 0`.
    Poincare {
        kappa0: f64,
    },
}

fn mul(a: Point, b: Point) -> Point {
    [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]]
}

fn div(a: Point, b: Point) -> Point {
    let d = b[0] * b[0] + b[1] * b[1];
    [(a[0] * b[0] + a[1] * b[1]) / d, (a[1] * b[0] - a[0] * b[1]) / d]
}

fn norm(a: Point) -> f64 {
    math::hypot(a[0], a[1])
}

/// Mobius isometry `T_p(x) = (x - p) / (1 - conj(p) x)` of the unit disk, sending `p` to 0.
pub fn mobius_to_origin(p: Point, x: Point) -> Point {
    let conj = [p[0], -p[1]];
    let den = mul(conj, x);
    div([x[0] - p[0], x[1] - p[1]], [1.0 - den[0], -den[1]])
}

/// Inverse of [`mobius_to_origin`]: `(w + p) / (1 + conj(p) w)`.
pub fn mobius_from_origin(p: Point, w: Point) -> Point {
    let conj = [p[0], -p[1]];
    let den = mul(conj, w);
    div([w[0] + p[0], w[1] + p[1]], [1.0 + den[0], den[1]])
}

impl Ambient {
    pub fn poincare(kappa0: f64) -> Result<Self> {
        if kappa0 < 0.0 && kappa0.is_finite() {
            Ok(Ambient::Poincare { kappa0 })
        } else {
            Err(domain("the Poincare model needs curvature kappa0 < 0"))
        }
    }

    /// Sectional curvature of the ambient plane.
    pub fn curvature(&self) -> f64 {
        match *self {
            Ambient::Euclidean => 0.0,
            Ambient::Poincare { kappa0 } => kappa0,
        }
    }

    /// Conformal factor `rho`, so that lengths are `rho |dx|` and areas `rho^2 dx`.
    pub fn conformal_factor(&self, x: Point) -> f64 {
        match *self {
            Ambient::Euclidean => 1.0,
            Ambient::Poincare { kappa0 } => 2.0 / ((1.0 - (x[0] * x[0] + x[1] * x[1])) * math::sqrt(-kappa0)),
        }
    }

    /// Whether `x` is a point of the model.
    pub fn contains(&self, x: Point) -> bool {
        match self {
            Ambient::Euclidean => x[0].is_finite() && x[1].is_finite(),
            Ambient::Poincare { .. } => x[0] * x[0] + x[1] * x[1] < 1.0,
        }
    }

    /// Geodesic distance.
    pub fn distance(&self, x: Point, y: Point) -> f64 {
        self.polar_about(x, y).1
    }

    /// Unit direction of `exp_p^{-1}(x)` in the orthonormal frame at `p`
    /// (the coordinate frame scaled by `1/rho(p)`), and `r_p(x)`.
    ///
    /// The direction is `[0, 0]` when `x == p`.
    pub fn polar_about(&self, p: Point, x: Point) -> (Point, f64) {
        let v = match self {
            Ambient::Euclidean => [x[0] - p[0], x[1] - p[1]],
            Ambient::Poincare { .. } => mobius_to_origin(p, x),
        };
        let len = norm(v);
        if len == 0.0 {
            return ([0.0, 0.0], 0.0);
        }
        let r = match *self {
            Ambient::Euclidean => len,
            Ambient::Poincare { kappa0 } => 2.0 * math::atanh(len.min(1.0)) / math::sqrt(-kappa0),
        };
        ([v[0] / len, v[1] / len], r)
    }

    /// `exp_p(v)` for a tangent vector given in the orthonormal frame at `p`.
    pub fn exp_at(&self, p: Point, v: Point) -> Point {
        match *self {
            Ambient::Euclidean => [p[0] + v[0], p[1] + v[1]],
            Ambient::Poincare { kappa0 } => {
                let len = norm(v);
                if len == 0.0 {
                    return p;
                }
                let s = math::tanh(0.5 * math::sqrt(-kappa0) * len) / len;
                mobius_from_origin(p, [s * v[0], s * v[1]])
            }
        }
    }

    /// `exp_0(y)` for `y` in the tangent plane at the origin.
    pub fn exp_origin(&self, y: Point) -> Point {
        self.exp_at([0.0, 0.0], y)
    }

    /// Places a point given in the tangent plane at the origin, then moves
    /// the origin to `center` (a translation, or the Mobius isometry).
    pub fn place(&self, center: Point, y: Point) -> Point {
        match self {
            Ambient::Euclidean => [center[0] + y[0], center[1] + y[1]],
            Ambient::Poincare { .. } => mobius_from_origin(center, self.exp_origin(y)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_distance_matches_arccosh_formula() {
        let a = Ambient::poincare(-2.0).unwrap();
        let x: Point = [0.3, -0.2];
        let y: Point = [-0.5, 0.4];
        let nx = 1.0 - (x[0] * x[0] + x[1] * x[1]);
        let ny = 1.0 - (y[0] * y[0] + y[1] * y[1]);
        let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
        let want = (1.0 + 2.0 * d2 / (nx * ny)).acosh() / 2.0_f64.sqrt();
        assert!((a.distance(x, y) - want).abs() < 1e-13);
    }

    #[test]
    fn exp_and_log_are_inverse() {
        let a = Ambient::poincare(-1.0).unwrap();
        let p = [0.2, 0.35];
        let v = [0.7, -1.1];
        let x = a.exp_at(p, v);
        let (u, r) = a.polar_about(p, x);
        assert!((r - (0.7f64.hypot(1.1))).abs() < 1e-12);
        assert!((u[0] * r - v[0]).abs() < 1e-12 && (u[1] * r - v[1]).abs() < 1e-12);
    }

    #[test]
    fn geodesic_circle_radius() {
        let a = Ambient::poincare(-1.0).unwrap();
        let x = a.exp_origin([1.0, 0.0]);
        assert!((x[0] - 0.5f64.tanh()).abs() < 1e-15);
        assert!(Ambient::poincare(0.0).is_err());
    }
}
