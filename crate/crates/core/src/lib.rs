//! Numerical toolkit for first nonzero Steklov eigenvalues.
//!
//! The crate is `no_std` with `alloc`. It covers four areas:
//!
//! * [`spaceform`]: closed-form geometry of the constant-curvature model
//!   spaces (generalized sine, ball volumes, isoperimetric profile and the
//!   comparison constant `(sn_K(d)/sn_kappa(d))^(2n-2)`).
//! * [`radial`]: the radial Steklov profile `F` of a geodesic ball, the
//!   monotone quantities `G` and `H`, and `sigma_1` of balls.
//! * [`symmetrize`]: spherical rearrangement of weighted samples and the
//!   volume-transfer radius `eta`.
//! * [`fem2d`]: P1 finite elements on planar and Poincare-disk domains,
//!   reduced to the discrete Dirichlet-to-Neumann operator.
//!
//! [`chain`] strings these together into the chain of upper bounds
//! `sigma_1(Omega) <= q41 <= q42 <= q43 = C * sigma_1(Omega*)`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod chain;
mod error;
pub mod fem2d;
pub mod linalg;
pub(crate) mod math;
pub mod quad;
pub mod radial;
pub mod spaceform;
pub mod symmetrize;

pub use error::{Error, Result};
