use alloc::vec::Vec;

use super::assembly::{boundary_quadrature, domain_diameter, domain_quadrature};
use super::{Ambient, Point, TriMesh};
use crate::error::{domain, Error, Result};
use crate::math::{self, neumaier_sum};
use crate::radial::RadialProfile;
use crate::spaceform::sn;
use crate::symmetrize::EtaTransfer;

/// Iteration cap of the center-of-mass search.
pub const MAX_CENTER_ITERATIONS: usize = 500;

/// The test-function profile `F` of the comparison space together with the
/// volume transfer `eta` from the ambient plane into it.
#[derive(Debug, Clone, Copy)]
pub struct RadialData<'a> {
    pub eta: &'a EtaTransfer,
    pub profile: &'a RadialProfile,
}

impl<'a> RadialData<'a> {
    pub fn new(eta: &'a EtaTransfer, profile: &'a RadialProfile) -> Result<Self> {
        if eta.n() != 2 || profile.n() != 2 {
            return Err(domain("planar domains need two-dimensional profiles"));
        }
        if profile.kappa() != eta.target() {
            return Err(domain("the profile must live in the target space of eta"));
        }
        Ok(Self { eta, profile })
    }

    /// `F(eta(r))`.
    pub fn f_eta(&self, r: f64) -> Result<f64> {
        Ok(self.profile.at(self.eta.eta(r)?)?.f)
    }
}

/// A zero of the vector field `X(p) = int_{dOmega} F(eta(r_p)) exp_p^{-1}(x)/r_p dA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterOfMass {
    /// Model coordinates of `p`.
    pub point: Point,
    /// `|X(p)|` in the orthonormal frame at `p`.
    pub residual: f64,
    /// Tolerance the residual was required to meet.
    pub tolerance: f64,
    pub iterations: usize,
}

fn norm(v: Point) -> f64 {
    math::hypot(v[0], v[1])
}

struct Field<'a> {
    ambient: Ambient,
    quad: Vec<(Point, f64)>,
    data: RadialData<'a>,
}

impl Field<'_> {
    /// `X(p)` and `int F(eta(r_p)) dA`.
    fn eval(&self, p: Point) -> Result<(Point, f64)> {
        if !self.ambient.contains(p) {
            return Err(domain("center iterate left the model"));
        }
        let mut xs = Vec::with_capacity(self.quad.len());
        let mut ys = Vec::with_capacity(self.quad.len());
        let mut ws = Vec::with_capacity(self.quad.len());
        for &(x, w) in &self.quad {
            let (u, r) = self.ambient.polar_about(p, x);
            let f = w * self.data.f_eta(r)?;
            xs.push(f * u[0]);
            ys.push(f * u[1]);
            ws.push(f);
        }
        Ok(([neumaier_sum(xs), neumaier_sum(ys)], neumaier_sum(ws)))
    }
}

/// Finds the center `p` of the test functions.
///
/// Damped fixed-point steps `p <- exp_p(tau X(p) / int F dA)` with
/// backtracking on `|X|`; when these stall, finite-difference Newton steps
/// on the coordinates of `p` take over. Converged when
/// `|X(p)| <= 1e-8 F(eta(d)) |dOmega|`.
pub fn center_of_mass(mesh: &TriMesh, eta: &EtaTransfer, profile: &RadialProfile) -> Result<CenterOfMass> {
    let data = RadialData::new(eta, profile)?;
    let ambient = mesh.ambient();
    let field = Field { ambient, quad: boundary_quadrature(mesh), data };
    let d = domain_diameter(mesh);
    let perimeter: f64 = neumaier_sum(field.quad.iter().map(|q| q.1));
    let tolerance = 1e-8 * data.f_eta(d)? * perimeter;

    let total: f64 = perimeter;
    let mut p = [0.0, 0.0];
    for &(x, w) in &field.quad {
        p[0] += w * x[0] / total;
        p[1] += w * x[1] / total;
    }
    let extent =
        mesh.vertices().iter().map(|v| norm([v[0] - p[0], v[1] - p[1]])).fold(0.0, f64::max).max(1e-12);
    let (mut x, mut w) = field.eval(p)?;
    let mut res = norm(x);
    let mut tau = 0.5 * d;
    let mut newton = false;
    let mut slow = 0;
    for iterations in 0..MAX_CENTER_ITERATIONS {
        if res <= tolerance {
            return Ok(CenterOfMass { point: p, residual: res, tolerance, iterations });
        }
        let mut accepted = None;
        if !newton {
            let mut t = tau;
            for _ in 0..40 {
                let q = ambient.exp_at(p, [t * x[0] / w, t * x[1] / w]);
                if ambient.contains(q) {
                    if let Ok((xq, wq)) = field.eval(q) {
                        if norm(xq) < res {
                            accepted = Some((q, xq, wq));
                            tau = (2.0 * t).min(d);
                            break;
                        }
                    }
                }
                t *= 0.5;
            }
        } else {
            let delta = 1e-7 * extent;
            let mut jac = [[0.0; 2]; 2];
            for k in 0..2 {
                let mut plus = p;
                let mut minus = p;
                plus[k] += delta;
                minus[k] -= delta;
                let (xp, _) = field.eval(plus)?;
                let (xm, _) = field.eval(minus)?;
                jac[0][k] = (xp[0] - xm[0]) / (2.0 * delta);
                jac[1][k] = (xp[1] - xm[1]) / (2.0 * delta);
            }
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if det != 0.0 && det.is_finite() {
                let s = [
                    -(jac[1][1] * x[0] - jac[0][1] * x[1]) / det,
                    -(-jac[1][0] * x[0] + jac[0][0] * x[1]) / det,
                ];
                let mut alpha = 1.0;
                for _ in 0..40 {
                    let q = [p[0] + alpha * s[0], p[1] + alpha * s[1]];
                    if ambient.contains(q) {
                        if let Ok((xq, wq)) = field.eval(q) {
                            if norm(xq) < res {
                                accepted = Some((q, xq, wq));
                                break;
                            }
                        }
                    }
                    alpha *= 0.5;
                }
            }
        }
        match accepted {
            Some((q, xq, wq)) => {
                let ratio = norm(xq) / res;
                p = q;
                x = xq;
                w = wq;
                res = norm(xq);
                if !newton {
                    slow = if ratio > 0.5 { slow + 1 } else { 0 };
                    newton = slow >= 3;
                }
            }
            None if !newton => newton = true,
            None => return Err(Error::NonConvergence { what: "center of mass", iterations, residual: res }),
        }
    }
    Err(Error::NonConvergence { what: "center of mass", iterations: MAX_CENTER_ITERATIONS, residual: res })
}

/// Radii `r_p` of the domain quadrature points with their weights.
pub(crate) fn domain_radii(mesh: &TriMesh, p: Point) -> Vec<(f64, f64)> {
    let ambient = mesh.ambient();
    domain_quadrature(mesh).into_iter().map(|(x, w)| (ambient.polar_about(p, x).1, w)).collect()
}

/// Right-hand side of the test-function bound
/// `int (|F'(eta) eta'|^2 + F(eta)^2 / sn_kappa(r)^2) dmu / int_{dOmega} F(eta)^2 dA`
/// with `eta = eta(r_p)`.
pub fn test_function_quotient(
    mesh: &TriMesh,
    center: &CenterOfMass,
    eta: &EtaTransfer,
    profile: &RadialProfile,
) -> Result<f64> {
    let data = RadialData::new(eta, profile)?;
    if !(center.residual <= center.tolerance) {
        return Err(domain("center of mass has not converged"));
    }
    let kappa = eta.target();
    let mut num = Vec::new();
    for (r, w) in domain_radii(mesh, center.point) {
        let value = if r == 0.0 {
            // F(eta(r)) / sn(r) -> F'(0) eta'(0) = 1.
            2.0
        } else {
            let e = eta.eta(r)?;
            let s = profile.at(e)?;
            let de = eta.eta_derivative(r)?;
            let q = s.f / sn(kappa, r);
            s.fp * s.fp * de * de + q * q
        };
        num.push(w * value);
    }
    let ambient = mesh.ambient();
    let mut den = Vec::new();
    for (x, w) in boundary_quadrature(mesh) {
        let f = data.f_eta(ambient.polar_about(center.point, x).1)?;
        den.push(w * f * f);
    }
    Ok(neumaier_sum(num) / neumaier_sum(den))
}
