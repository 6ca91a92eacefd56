//! P1 finite elements for the Steklov problem on planar and hyperbolic domains.
//!
//! Hyperbolic domains live in the Poincare disk of curvature `kappa0`, with
//! metric `rho(x)^2 |dx|^2` and `rho(x) = 2 / ((1 - |x|^2) sqrt(-kappa0))`.
//! The Dirichlet energy is conformally invariant in two dimensions, so the
//! stiffness matrix is the Euclidean one in both ambients and only boundary
//! lengths, volumes and distances see the metric.

mod ambient;
mod assembly;
mod center;
mod delaunay;
mod geometry;
mod mesh;
mod steklov;

pub use ambient::{mobius_from_origin, mobius_to_origin, Ambient};
pub use assembly::{
    assemble_stiffness, boundary_mass_matrix, boundary_quadrature, domain_diameter, domain_quadrature,
    domain_volume, element_stiffness, perimeter, stiffness_matrix,
};
pub(crate) use center::domain_radii;
pub use center::{center_of_mass, test_function_quotient, CenterOfMass, RadialData, MAX_CENTER_ITERATIONS};
pub use geometry::{DomainSpec, Geometry};
pub use mesh::{build_mesh, TriMesh};
pub use steklov::{
    dtn_schur, steklov_spectrum, steklov_spectrum_on_mesh, steklov_spectrum_with_stiffness,
    DirichletToNeumann, SteklovSpectrum,
};

pub type Point = [f64; 2];
