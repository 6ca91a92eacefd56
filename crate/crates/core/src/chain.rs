//! The chain of upper bounds leading from `sigma_1(Omega)` to the comparison ball.
//!
//! For a planar mesh and comparison curvatures `K <= kappa0 <= kappa <= 0`:
//!
//! * `q41`: the averaged Rayleigh quotient of the test functions
//!   `F(eta(r_p)) psi_i` centered at the center of mass `p`;
//! * `q42 = C int_Omega H(eta(r_p)) / int_Omega G(eta(r_p))`;
//! * `q43 = C int_{Omega*} H / int_{Omega*} G = C sigma_1(Omega*)`,
//!
//! where `C` is the comparison constant for the diameter of the mesh. In
//! the continuum `sigma_1 <= q41 <= q42 <= q43`.

use alloc::vec::Vec;

use crate::error::Result;
use crate::fem2d::{
    center_of_mass, domain_diameter, domain_volume, perimeter, test_function_quotient, CenterOfMass, TriMesh,
};
use crate::math::neumaier_sum;
use crate::radial::{solve_profile, RadialProfile, DEFAULT_STEPS};
use crate::spaceform::{bound_constant, radius_from_volume, CurvatureSpec};
use crate::symmetrize::{
    decreasing_dominance_gap, increasing_dominance_gap, rearrange_decreasing, rearrange_increasing,
    EtaTransfer, WeightedSampleSet,
};

/// Nodes of the cached `eta` table.
const ETA_NODES: usize = 4096;

/// Everything computed along the chain for one mesh.
#[derive(Debug, Clone)]
pub struct ChainDiagnostics {
    pub volume: f64,
    pub diameter: f64,
    pub perimeter: f64,
    /// Radius of the ball `Omega*` of `M_kappa^2` with the volume of the mesh.
    pub ball_radius: f64,
    pub sigma1_star: f64,
    pub constant: f64,
    pub center: CenterOfMass,
    pub q41: f64,
    pub q42: f64,
    pub q43: f64,
    /// `int_Omega H(eta(r_p)) dmu_g` and `int_Omega G(eta(r_p)) dmu_g`.
    pub h_domain: f64,
    pub g_domain: f64,
    /// `int_{Omega*} H dmu` and `int_{Omega*} G dmu`.
    pub h_star: f64,
    pub g_star: f64,
    /// Largest excess of `(H o eta o r_p)^*` over `H` on `Omega*`.
    pub h_rearrangement_gap: f64,
    /// Largest excess of `G` over `(G o eta o r_p)_*` on `Omega*`.
    pub g_rearrangement_gap: f64,
}

/// Evaluates the chain on `mesh` for comparison curvatures `kappa` and `big_k`.
pub fn chain_diagnostics(mesh: &TriMesh, kappa: f64, big_k: f64) -> Result<ChainDiagnostics> {
    let kappa0 = mesh.ambient().curvature();
    CurvatureSpec::new(2, kappa0, kappa, big_k)?;
    let volume = domain_volume(mesh);
    let diameter = domain_diameter(mesh);
    let ball_radius = radius_from_volume(2, kappa, volume)?;
    let constant = bound_constant(2, kappa, big_k, diameter)?;

    let reach = 2.0 * diameter;
    let eta = EtaTransfer::new(2, kappa0, kappa)?.with_cache(reach, ETA_NODES)?;
    let f_range = eta.eta(reach)?.max(ball_radius);
    let profile = solve_profile(2, kappa, f_range, DEFAULT_STEPS)?;
    let star = solve_profile(2, kappa, ball_radius, DEFAULT_STEPS)?;
    let sigma1_star = star.sigma1();
    let (g_star, h_star) = star.gh_integrals();
    let q43 = constant * h_star / g_star;

    let center = center_of_mass(mesh, &eta, &profile)?;
    let q41 = test_function_quotient(mesh, &center, &eta, &profile)?;

    let mut h_samples = Vec::new();
    let mut g_samples = Vec::new();
    for (r, w) in crate::fem2d::domain_radii(mesh, center.point) {
        let s = profile.at(eta.eta(r)?)?;
        h_samples.push((s.h, w));
        g_samples.push((s.g, w));
    }
    let h_domain = neumaier_sum(h_samples.iter().map(|(v, w)| v * w));
    let g_domain = neumaier_sum(g_samples.iter().map(|(v, w)| v * w));
    let q42 = constant * h_domain / g_domain;

    let at_star = |p: &RadialProfile, r: f64| p.at(r.min(p.radius()));
    let h_star_fn = rearrange_decreasing(&WeightedSampleSet::new(h_samples)?, 2, kappa)?;
    let g_star_fn = rearrange_increasing(&WeightedSampleSet::new(g_samples)?, 2, kappa)?;
    let h_rearrangement_gap =
        decreasing_dominance_gap(&h_star_fn, |r| at_star(&star, r).map_or(f64::NAN, |s| s.h));
    let g_rearrangement_gap =
        increasing_dominance_gap(&g_star_fn, |r| at_star(&star, r).map_or(f64::NAN, |s| s.g));

    Ok(ChainDiagnostics {
        volume,
        diameter,
        perimeter: perimeter(mesh),
        ball_radius,
        sigma1_star,
        constant,
        center,
        q41,
        q42,
        q43,
        h_domain,
        g_domain,
        h_star,
        g_star,
        h_rearrangement_gap,
        g_rearrangement_gap,
    })
}
