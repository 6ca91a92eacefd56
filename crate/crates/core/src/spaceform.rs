//! Geometry of the simply connected space form `M_kappa^n`.
//!
//! Everything here is closed form or a one-dimensional integral of the
//! generalized sine `sn_kappa`: geodesic spheres in `M_kappa^n` have area
//! `|S^{n-1}| * sn_kappa(r)^{n-1}`.

use core::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::math;
use crate::quad::{adaptive_simpson, DEFAULT_TOL};

/// Below this value of `|kappa| t^2` the series branch of `sn` is used.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Largest argument of `sinh` raised to the power `n - 1` that stays finite.
const MAX_EXPONENT: f64 = 700.0;

/// Dimension and curvature data of a comparison problem.
///
/// `kappa0` is the curvature of the ambient model space that carries the
/// domain; `kappa` bounds the sectional curvature from above and `big_k`
/// bounds the Ricci curvature from below, so `big_k <= kappa0 <= kappa <= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSpec {
    pub n: usize,
    pub kappa0: f64,
    pub kappa: f64,
    pub big_k: f64,
}

impl CurvatureSpec {
    pub fn new(n: usize, kappa0: f64, kappa: f64, big_k: f64) -> Result<Self> {
        if n < 2 {
            return Err(domain("dimension must be at least 2"));
        }
        let ordered = big_k <= kappa0 && kappa0 <= kappa && kappa <= 0.0;
        if !ordered || !big_k.is_finite() {
            return Err(domain(alloc::format!(
                "curvatures must satisfy K <= kappa0 <= kappa <= 0, got K={big_k}, kappa0={kappa0}, kappa={kappa}"
            )));
        }
        Ok(Self { n, kappa0, kappa, big_k })
    }

    /// The comparison constant for a domain of diameter `d`.
    pub fn bound_constant(&self, d: f64) -> Result<f64> {
        bound_constant(self.n, self.kappa, self.big_k, d)
    }
}

/// A geodesic ball of `M_kappa^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceFormBall {
    pub n: usize,
    pub kappa: f64,
    pub radius: f64,
}

impl SpaceFormBall {
    pub fn new(n: usize, kappa: f64, radius: f64) -> Result<Self> {
        check_dimension(n)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(domain("ball radius must be positive"));
        }
        if kappa > 0.0 && radius >= PI / math::sqrt(kappa) {
            return Err(domain("ball radius must stay below pi/sqrt(kappa)"));
        }
        Ok(Self { n, kappa, radius })
    }

    /// The ball of `M_kappa^n` whose volume is `volume`.
    pub fn with_volume(n: usize, kappa: f64, volume: f64) -> Result<Self> {
        let radius = radius_from_volume(n, kappa, volume)?;
        Self::new(n, kappa, radius)
    }

    pub fn volume(&self) -> Result<f64> {
        ball_volume(self.n, self.kappa, self.radius)
    }

    pub fn boundary_area(&self) -> f64 {
        sphere_area(self.n, self.kappa, self.radius)
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        Err(domain("dimension must be at least 2"))
    } else {
        Ok(())
    }
}

/// Area of the unit sphere `S^{n-1}`, i.e. `n * omega_n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (n - 2) as f64 * unit_sphere_area(n - 2),
    }
}

/// Volume `omega_n` of the Euclidean unit ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    unit_sphere_area(n) / n as f64
}

/// Generalized sine: the solution of `f'' + kappa f = 0`, `f(0) = 0`, `f'(0) = 1`.
pub fn sn(kappa: f64, t: f64) -> f64 {
    let x = kappa * t * t;
    if x.abs() < SERIES_THRESHOLD {
        // t (1 - x/6 + x^2/120 - x^3/5040)
        t * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0)))
    } else if kappa > 0.0 {
        let s = math::sqrt(kappa);
        math::sin(s * t) / s
    } else {
        let s = math::sqrt(-kappa);
        math::sinh(s * t) / s
    }
}

/// `d/dt sn_kappa(t)`.
pub fn sn_prime(kappa: f64, t: f64) -> f64 {
    let x = kappa * t * t;
    if x.abs() < SERIES_THRESHOLD {
        // 1 - x/2 + x^2/24 - x^3/720
        1.0 - x / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0))
    } else if kappa > 0.0 {
        math::cos(math::sqrt(kappa) * t)
    } else {
        math::cosh(math::sqrt(-kappa) * t)
    }
}

/// `d^2/dt^2 sn_kappa(t) = -kappa sn_kappa(t)`.
pub fn sn_second(kappa: f64, t: f64) -> f64 {
    -kappa * sn(kappa, t)
}

/// Largest radius for which `sn_kappa(r)^(n-1)` is safely finite.
pub fn safe_radius(n: usize, kappa: f64) -> f64 {
    if kappa < 0.0 {
        MAX_EXPONENT / ((n.max(2) - 1) as f64 * math::sqrt(-kappa))
    } else if kappa > 0.0 {
        PI / math::sqrt(kappa)
    } else {
        f64::INFINITY
    }
}

fn check_radius(n: usize, kappa: f64, r: f64) -> Result<()> {
    let max = safe_radius(n, kappa);
    if kappa > 0.0 && r > max {
        return Err(domain("radius exceeds pi/sqrt(kappa)"));
    }
    if r > max {
        return Err(Error::Range { requested: r, safe_max: max });
    }
    Ok(())
}

/// Radial volume density `|S^{n-1}| sn_kappa(t)^(n-1)`.
fn density(n: usize, kappa: f64, t: f64) -> f64 {
    unit_sphere_area(n) * math::powi(sn(kappa, t), n as i32 - 1)
}

/// `|B_r|_kappa = |S^{n-1}| * int_0^r sn_kappa(t)^(n-1) dt`.
pub fn ball_volume(n: usize, kappa: f64, r: f64) -> Result<f64> {
    check_dimension(n)?;
    if !(r >= 0.0) {
        return Err(domain("radius must be non-negative"));
    }
    shell_volume(n, kappa, 0.0, r)
}

/// Volume of the shell `r0 < |x| < r1` in `M_kappa^n`.
pub fn shell_volume(n: usize, kappa: f64, r0: f64, r1: f64) -> Result<f64> {
    check_dimension(n)?;
    check_radius(n, kappa, r1)?;
    let area = unit_sphere_area(n);
    let p = n as i32 - 1;
    let integral = adaptive_simpson(|t| math::powi(sn(kappa, t), p), r0, r1, 0.0, DEFAULT_TOL)?;
    Ok(area * integral)
}

/// Area of the geodesic sphere of radius `r`: `|S^{n-1}| sn_kappa(r)^(n-1)`.
pub fn sphere_area(n: usize, kappa: f64, r: f64) -> f64 {
    density(n, kappa, r)
}

/// Inverse of [`ball_volume`] in the radius, for `kappa <= 0`.
///
/// Brackets the root, bisects to a relative width of `1e-3` and then runs
/// safeguarded Newton steps, at most 100 iterations in total.
pub fn radius_from_volume(n: usize, kappa: f64, volume: f64) -> Result<f64> {
    check_dimension(n)?;
    if !(volume > 0.0 && volume.is_finite()) {
        return Err(domain("volume must be positive and finite"));
    }
    if kappa > 0.0 {
        return Err(domain("radius_from_volume requires kappa <= 0"));
    }
    let max_r = safe_radius(n, kappa);
    // The Euclidean radius bounds the answer from above when kappa <= 0.
    let mut hi = math::powf(volume / unit_ball_volume(n), 1.0 / n as f64).min(max_r);
    let mut lo = 0.0;
    let mut iterations = 0usize;
    while ball_volume(n, kappa, hi)? < volume {
        if hi >= max_r {
            return Err(Error::Range { requested: hi, safe_max: max_r });
        }
        lo = hi;
        hi = (2.0 * hi).min(max_r);
        iterations += 1;
    }
    while hi - lo > 1e-3 * hi && iterations < 100 {
        let mid = 0.5 * (lo + hi);
        if ball_volume(n, kappa, mid)? < volume {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mut r = 0.5 * (lo + hi);
    while iterations < 100 {
        iterations += 1;
        let residual = ball_volume(n, kappa, r)? - volume;
        if residual.abs() <= 1e-15 * volume {
            break;
        }
        if residual < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let mut next = r - residual / sphere_area(n, kappa, r);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - r).abs() <= 4.0 * f64::EPSILON * r;
        r = next;
        if done {
            break;
        }
    }
    let achieved = (ball_volume(n, kappa, r)? - volume).abs() / volume;
    if achieved > 1e-10 {
        return Err(Error::Numerical { what: "radius_from_volume", achieved });
    }
    Ok(r)
}

/// Inverts cumulative volumes `V_1 <= V_2 <= ...` one after another,
/// integrating only the new shell at every step.
///
/// Produces the same radii as repeated [`radius_from_volume`] calls at a
/// fraction of the cost.
#[derive(Debug, Clone)]
pub struct CumulativeInverter {
    n: usize,
    kappa: f64,
    radius: f64,
    volume: f64,
}

impl CumulativeInverter {
    pub fn new(n: usize, kappa: f64) -> Result<Self> {
        check_dimension(n)?;
        if kappa > 0.0 {
            return Err(domain("volume inversion requires kappa <= 0"));
        }
        Ok(Self { n, kappa, radius: 0.0, volume: 0.0 })
    }

    /// Radius enclosing `volume`, which must not be smaller than the
    /// previous call's argument.
    pub fn advance(&mut self, volume: f64) -> Result<f64> {
        if volume < self.volume {
            return Err(domain("cumulative volumes must be non-decreasing"));
        }
        if volume == self.volume {
            return Ok(self.radius);
        }
        if self.radius == 0.0 {
            self.radius = radius_from_volume(self.n, self.kappa, volume)?;
            self.volume = volume;
            return Ok(self.radius);
        }
        let (n, kappa, r0) = (self.n, self.kappa, self.radius);
        let delta = volume - self.volume;
        // sphere_area is non-decreasing for kappa <= 0, so Newton from the
        // right-hand starting point converges monotonically.
        let mut x = r0 + delta / sphere_area(n, kappa, r0);
        let mut converged = false;
        for _ in 0..60 {
            let g = shell_volume(n, kappa, r0, x)? - delta;
            let next = (x - g / sphere_area(n, kappa, x)).max(r0);
            let step = (next - x).abs();
            x = next;
            if step <= 4.0 * f64::EPSILON * x || g.abs() <= 1e-16 * volume {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numerical { what: "cumulative volume inversion", achieved: delta });
        }
        self.radius = x;
        self.volume = volume;
        Ok(x)
    }
}

/// `(sn_K(d) / sn_kappa(d))^(2n - 2)`, the comparison constant for a domain of diameter `d`.
pub fn bound_constant(n: usize, kappa: f64, big_k: f64, d: f64) -> Result<f64> {
    check_dimension(n)?;
    if big_k > kappa {
        return Err(domain(alloc::format!("need K <= kappa, got K={big_k} > kappa={kappa}")));
    }
    if kappa > 0.0 {
        return Err(domain("need kappa <= 0"));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(domain("diameter must be positive"));
    }
    if big_k == kappa {
        return Ok(1.0);
    }
    let ratio = sn(big_k, d) / sn(kappa, d);
    Ok(math::powi(ratio, 2 * n as i32 - 2))
}

/// Isoperimetric profile of `M_kappa^n`: boundary area of the ball of volume `t`.
pub fn isoperimetric_profile(n: usize, kappa: f64, t: f64) -> Result<f64> {
    let r = radius_from_volume(n, kappa, t)?;
    Ok(sphere_area(n, kappa, r))
}
