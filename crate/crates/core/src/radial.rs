//! Radial Steklov profile of geodesic balls in `M_kappa^n`.
//!
//! The first nonzero Steklov eigenfunctions of a ball of radius `R` are
//! `F(r) psi_i(theta)` with `psi_i` the coordinate functions on the sphere
//! and `F` the solution of
//!
//! ```text
//! F'' + (n-1) sn'/sn F' - (n-1)/sn^2 F = 0,   F(0) = 0, F'(0) = 1,
//! ```
//!
//! so that `sigma_1 = F'(R)/F(R)`. The ODE has a regular singular point at
//! `r = 0`; integration starts at `eps = 1e-4 R` from the series
//! `F = r + a3 r^3`.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::math;
use crate::quad::composite_simpson;
use crate::spaceform::{safe_radius, sn, sn_prime, unit_sphere_area};

/// Number of RK4 steps used when no explicit resolution is requested.
pub const DEFAULT_STEPS: usize = 4096;

/// Start of the integration interval relative to the radius.
pub const START_FRACTION: f64 = 1e-4;

/// `(r, F, F', G, H)` sampled on a uniform grid `eps = r_0 < ... < r_m = R`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    n: usize,
    kappa: f64,
    step: f64,
    grid: Vec<f64>,
    f: Vec<f64>,
    fp: Vec<f64>,
    g: Vec<f64>,
    h: Vec<f64>,
}

/// Point evaluation of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    pub r: f64,
    pub f: f64,
    pub fp: f64,
    pub g: f64,
    pub h: f64,
}

/// Cubic coefficient of the series `F = r + a3 r^3 + O(r^5)`.
pub fn series_coefficient(n: usize, kappa: f64) -> f64 {
    (n as f64 - 1.0) * kappa / (3.0 * (n as f64 + 2.0))
}

/// `G = (F^2)' + (n-1) sn'/sn F^2` and `H = F'^2 + (n-1)/sn^2 F^2`.
pub fn g_and_h(n: usize, kappa: f64, r: f64, f: f64, fp: f64) -> (f64, f64) {
    let m = n as f64 - 1.0;
    if r == 0.0 {
        return (0.0, fp * fp + m);
    }
    let s = sn(kappa, r);
    let c = sn_prime(kappa, r);
    let g = 2.0 * f * fp + m * c / s * f * f;
    let h = fp * fp + m * f * f / (s * s);
    (g, h)
}

fn second_derivative(n: usize, kappa: f64, r: f64, f: f64, fp: f64) -> f64 {
    let m = n as f64 - 1.0;
    let s = sn(kappa, r);
    let c = sn_prime(kappa, r);
    -m * c / s * fp + m / (s * s) * f
}

/// Integrates the profile ODE on `[eps, radius]` with `steps` classical RK4 steps.
pub fn solve_profile(n: usize, kappa: f64, radius: f64, steps: usize) -> Result<RadialProfile> {
    if n < 2 {
        return Err(domain("dimension must be at least 2"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(domain("radius must be positive"));
    }
    if steps < 64 {
        return Err(domain("at least 64 integration steps are required"));
    }
    let max_r = safe_radius(n, kappa);
    if kappa > 0.0 && radius >= max_r {
        return Err(domain("radius must stay below pi/sqrt(kappa)"));
    }
    if radius > max_r {
        return Err(Error::Range { requested: radius, safe_max: max_r });
    }

    let eps = START_FRACTION * radius;
    let a3 = series_coefficient(n, kappa);
    let step = (radius - eps) / steps as f64;
    let rhs = |r: f64, y: [f64; 2]| [y[1], second_derivative(n, kappa, r, y[0], y[1])];

    let mut grid = Vec::with_capacity(steps + 1);
    let mut f = Vec::with_capacity(steps + 1);
    let mut fp = Vec::with_capacity(steps + 1);
    let mut y = [eps + a3 * eps * eps * eps, 1.0 + 3.0 * a3 * eps * eps];
    grid.push(eps);
    f.push(y[0]);
    fp.push(y[1]);
    for i in 0..steps {
        let r = eps + step * i as f64;
        let k1 = rhs(r, y);
        let k2 = rhs(r + 0.5 * step, [y[0] + 0.5 * step * k1[0], y[1] + 0.5 * step * k1[1]]);
        let k3 = rhs(r + 0.5 * step, [y[0] + 0.5 * step * k2[0], y[1] + 0.5 * step * k2[1]]);
        let k4 = rhs(r + step, [y[0] + step * k3[0], y[1] + step * k3[1]]);
        for j in 0..2 {
            y[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::Range { requested: radius, safe_max: r });
        }
        // Last node lands exactly on the radius.
        let r_next = if i + 1 == steps { radius } else { eps + step * (i + 1) as f64 };
        grid.push(r_next);
        f.push(y[0]);
        fp.push(y[1]);
    }

    let mut g = Vec::with_capacity(grid.len());
    let mut h = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let (gi, hi) = g_and_h(n, kappa, grid[i], f[i], fp[i]);
        g.push(gi);
        h.push(hi);
    }
    Ok(RadialProfile { n, kappa, step, grid, f, fp, g, h })
}

impl RadialProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Outer radius `R` of the profile.
    pub fn radius(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn f_prime(&self) -> &[f64] {
        &self.fp
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// `F'(R)/F(R)`.
    pub fn sigma1(&self) -> f64 {
        let last = self.grid.len() - 1;
        self.fp[last] / self.f[last]
    }

    /// Evaluates `F, F', G, H` at `0 <= r <= R`.
    ///
    /// Inside `[eps, R]` both `F` and `F'` are cubic Hermite interpolants
    /// (using `F'` and `F''` as slopes); below `eps` the series start is used.
    pub fn at(&self, r: f64) -> Result<RadialSample> {
        let radius = self.radius();
        if !(r >= 0.0) || r > radius * (1.0 + 1e-12) {
            return Err(domain(alloc::format!("r = {r} lies outside the profile range [0, {radius}]")));
        }
        let (f, fp) = if r <= self.grid[0] {
            let a3 = series_coefficient(self.n, self.kappa);
            (r + a3 * r * r * r, 1.0 + 3.0 * a3 * r * r)
        } else {
            let last = self.grid.len() - 1;
            let i = (math::floor((r - self.grid[0]) / self.step) as usize).min(last - 1);
            let (r0, r1) = (self.grid[i], self.grid[i + 1]);
            let w = r1 - r0;
            let t = ((r - r0) / w).clamp(0.0, 1.0);
            let fpp0 = second_derivative(self.n, self.kappa, r0, self.f[i], self.fp[i]);
            let fpp1 = second_derivative(self.n, self.kappa, r1, self.f[i + 1], self.fp[i + 1]);
            (
                hermite(t, w, self.f[i], self.f[i + 1], self.fp[i], self.fp[i + 1]),
                hermite(t, w, self.fp[i], self.fp[i + 1], fpp0, fpp1),
            )
        };
        let (g, h) = g_and_h(self.n, self.kappa, r, f, fp);
        Ok(RadialSample { r, f, fp, g, h })
    }

    /// `int_0^R w(r) sn^(n-1) dr` for node values `w`, plus the analytic
    /// contribution `c * eps^p` of `[0, eps]`.
    fn weighted_integral(&self, values: &[f64], head: f64) -> f64 {
        let p = self.n as i32 - 1;
        let y: Vec<f64> =
            values.iter().zip(&self.grid).map(|(v, &r)| v * math::powi(sn(self.kappa, r), p)).collect();
        composite_simpson(&y, self.step) + head
    }

    /// `(int G dmu, int H dmu)` over the ball of radius `R` in `M_kappa^n`.
    pub fn gh_integrals(&self) -> (f64, f64) {
        let eps = self.grid[0];
        let n = self.n as i32;
        // Near 0: H ~ n and G ~ (n+1) r, with density r^(n-1).
        let head_h = math::powi(eps, n);
        let head_g = math::powi(eps, n + 1);
        let area = unit_sphere_area(self.n);
        (area * self.weighted_integral(&self.g, head_g), area * self.weighted_integral(&self.h, head_h))
    }

    /// `int H dmu / int G dmu` over the ball of radius `R`.
    pub fn gh_quotient(&self) -> f64 {
        let (g, h) = self.gh_integrals();
        h / g
    }
}

fn hermite(t: f64, w: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * w * d0 + h01 * y1 + h11 * w * d1
}

fn check_nonpositive(kappa: f64) -> Result<()> {
    if kappa > 0.0 {
        Err(domain("Steklov eigenvalues of balls are computed for kappa <= 0 only"))
    } else {
        Ok(())
    }
}

/// `sigma_1` of the geodesic ball of radius `radius` in `M_kappa^n`, as `F'(R)/F(R)`.
pub fn sigma1_ball(n: usize, kappa: f64, radius: f64) -> Result<f64> {
    check_nonpositive(kappa)?;
    Ok(solve_profile(n, kappa, radius, DEFAULT_STEPS)?.sigma1())
}

/// `sigma_1` of the same ball through the integral identity `int H / int G`.
pub fn sigma1_via_gh(n: usize, kappa: f64, radius: f64) -> Result<f64> {
    check_nonpositive(kappa)?;
    Ok(solve_profile(n, kappa, radius, DEFAULT_STEPS)?.gh_quotient())
}

/// Radial Rayleigh quotient
/// `Q(phi) = int (phi'^2 + (n-1)/sn^2 phi^2) sn^(n-1) dr / (phi(R)^2 sn(R)^(n-1))`
/// for `phi` sampled on the profile grid. `phi'` uses centered differences.
pub fn rayleigh_quotient(profile: &RadialProfile, phi: &[f64]) -> Result<f64> {
    let grid = profile.grid();
    if phi.len() != grid.len() {
        return Err(domain("phi must be sampled on the profile grid"));
    }
    let last = grid.len() - 1;
    if phi[last] == 0.0 {
        return Err(domain("phi(R) must be nonzero"));
    }
    let (n, kappa) = (profile.n, profile.kappa);
    let h = profile.step;
    let m = n as f64 - 1.0;
    let p = n as i32 - 1;
    let mut y = Vec::with_capacity(grid.len());
    for i in 0..=last {
        let d = if i == 0 {
            (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) / (2.0 * h)
        } else if i == last {
            (3.0 * phi[last] - 4.0 * phi[last - 1] + phi[last - 2]) / (2.0 * h)
        } else {
            (phi[i + 1] - phi[i - 1]) / (2.0 * h)
        };
        let s = sn(kappa, grid[i]);
        y.push((d * d + m * phi[i] * phi[i] / (s * s)) * math::powi(s, p));
    }
    let numerator = composite_simpson(&y, h);
    let denominator = phi[last] * phi[last] * math::powi(sn(kappa, grid[last]), p);
    Ok(numerator / denominator)
}

/// `(G(r), H(r))` from a profile solved out to `r`.
pub fn gh_values(n: usize, kappa: f64, r: f64) -> Result<(f64, f64)> {
    let profile = solve_profile(n, kappa, r, DEFAULT_STEPS)?;
    let s = profile.at(r)?;
    Ok((s.g, s.h))
}
