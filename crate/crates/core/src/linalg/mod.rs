//! Small self-contained linear algebra for the finite element solver.

mod dense;
mod envelope;
mod sparse;

pub use dense::{symmetric_eigen, DenseMatrix, SymmetricEigen};
pub use envelope::{reverse_cuthill_mckee, EnvelopeCholesky};
pub use sparse::CsrMatrix;
