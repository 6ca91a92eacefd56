//! Verification of the eigenvalue bound on one domain.

use rayon::prelude::*;
use steklov_core::chain::chain_diagnostics;
use steklov_core::fem2d::{
    assemble_stiffness, build_mesh, element_stiffness, steklov_spectrum_with_stiffness, stiffness_matrix,
    DomainSpec, TriMesh,
};
use steklov_core::linalg::CsrMatrix;

use crate::error::HarnessError;
use crate::report::{
    sig12, ChainReport, LevelReport, MeshStats, VerificationReport, DIAMETER_CONVENTION, SCHEMA_VERSION,
};
use crate::spec::SpecFile;

/// Floor of the relative slack applied to every inequality.
pub const MIN_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Number of halvings of `h`; levels are `h, h/2, ..., h/2^refinements`.
    pub refinements: usize,
    /// Element-parallel stiffness assembly. Gives bit-identical matrices.
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { refinements: 2, parallel: false }
    }
}

/// P1 stiffness matrix with elements computed on the rayon pool.
///
/// Elements are gathered in triangle order and summed by the same routine
/// as the serial path, so the result does not depend on the thread count.
pub fn parallel_stiffness(mesh: &TriMesh) -> Result<CsrMatrix, steklov_core::Error> {
    let elements = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| element_stiffness(mesh, t))
        .collect::<Result<Vec<_>, _>>()?;
    assemble_stiffness(mesh, &elements)
}

/// `(sigma_extrapolated, error_estimate)` from two levels with ratio 2 in `h`
/// and second-order convergence.
pub fn richardson(coarse: f64, fine: f64) -> (f64, f64) {
    ((4.0 * fine - coarse) / 3.0, (fine - coarse).abs() / 3.0)
}

/// Relative slack `max(1e-3, 3 err / sigma)`.
pub fn slack(sigma: f64, error: f64) -> f64 {
    MIN_SLACK.max(3.0 * error / sigma.abs())
}

fn sigma1(mesh: &TriMesh, parallel: bool) -> Result<f64, steklov_core::Error> {
    let k = if parallel { parallel_stiffness(mesh)? } else { stiffness_matrix(mesh)? };
    Ok(steklov_spectrum_with_stiffness(mesh, &k, 1)?.sigma1())
}

pub fn verify(
    spec: &SpecFile,
    name: &str,
    options: VerifyOptions,
) -> Result<VerificationReport, HarnessError> {
    if options.refinements == 0 {
        return Err(HarnessError::Spec("at least one refinement is needed for extrapolation".into()));
    }
    let domain = spec.domain()?;
    let (kappa, big_k) = spec.comparison();

    let mut levels = Vec::with_capacity(options.refinements + 1);
    let mut finest: Option<(DomainSpec, TriMesh)> = None;
    for level in 0..=options.refinements {
        let level_spec = domain.with_h(domain.h / f64::powi(2.0, level as i32));
        let mesh = build_mesh(&level_spec)?;
        let s = sigma1(&mesh, options.parallel)?;
        levels.push(LevelReport {
            level,
            h: level_spec.h,
            vertices: mesh.num_vertices(),
            boundary_vertices: mesh.boundary_vertices().len(),
            sigma1: sig12(s),
        });
        finest = Some((level_spec, mesh));
    }
    let (finest_spec, mesh) = finest.expect("at least two levels");
    let n = levels.len();
    let (sigma, error) = richardson(levels[n - 2].sigma1, levels[n - 1].sigma1);
    let slack = slack(sigma, error);

    let c = chain_diagnostics(&mesh, kappa, big_k)?;
    let bound = c.constant * c.sigma1_star;
    let pass = sigma <= bound * (1.0 + slack);
    let ordering_ok = sigma <= c.q41 * (1.0 + slack)
        && c.q41 <= c.q42 * (1.0 + slack)
        && c.q42 <= c.q43 * (1.0 + slack)
        && (c.q43 - bound).abs() <= slack * c.q43;

    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION.to_string(),
        name: name.to_string(),
        spec: spec.clone(),
        sigma1_fem: sig12(sigma),
        sigma1_error: sig12(error),
        volume: sig12(c.volume),
        diameter: sig12(c.diameter),
        diameter_convention: DIAMETER_CONVENTION.to_string(),
        ball_radius_star: sig12(c.ball_radius),
        sigma1_star: sig12(c.sigma1_star),
        constant_c: sig12(c.constant),
        bound: sig12(bound),
        ratio: sig12(sigma / bound),
        slack: sig12(slack),
        pass,
        chain: ChainReport {
            q41: sig12(c.q41),
            q42: sig12(c.q42),
            q43: sig12(c.q43),
            ordering_ok,
            center: [sig12(c.center.point[0]), sig12(c.center.point[1])],
            center_residual: sig12(c.center.residual),
            center_tolerance: sig12(c.center.tolerance),
            center_iterations: c.center.iterations,
            h_domain: sig12(c.h_domain),
            g_domain: sig12(c.g_domain),
            h_star: sig12(c.h_star),
            g_star: sig12(c.g_star),
            h_rearrangement_gap: sig12(c.h_rearrangement_gap),
            g_rearrangement_gap: sig12(c.g_rearrangement_gap),
        },
        mesh: MeshStats {
            h: finest_spec.h,
            vertices: mesh.num_vertices(),
            triangles: mesh.num_triangles(),
            boundary_vertices: mesh.boundary_vertices().len(),
        },
        refinements: levels,
    })
}
