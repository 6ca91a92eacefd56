use alloc::vec::Vec;

use super::assembly::{boundary_mass_matrix, stiffness_matrix};
use super::{build_mesh, DomainSpec, TriMesh};
use crate::error::{domain, Error, Result};
use crate::linalg::{symmetric_eigen, CsrMatrix, DenseMatrix, EnvelopeCholesky};

/// Discrete Dirichlet-to-Neumann map `S = K_bb - K_bi K_ii^{-1} K_ib`,
/// with the interior factorization kept for harmonic extension.
#[derive(Debug, Clone)]
pub struct DirichletToNeumann {
    boundary: Vec<usize>,
    interior: Vec<usize>,
    k_ib: CsrMatrix,
    factor: Option<EnvelopeCholesky>,
    schur: DenseMatrix,
}

impl DirichletToNeumann {
    /// `boundary` lists the boundary vertex indices; rows and columns of
    /// the result follow that order.
    pub fn new(stiffness: &CsrMatrix, boundary: &[usize]) -> Result<Self> {
        let n = stiffness.rows();
        let mut is_boundary = alloc::vec![false; n];
        for &b in boundary {
            if b >= n {
                return Err(domain("boundary index out of range"));
            }
            is_boundary[b] = true;
        }
        let interior: Vec<usize> = (0..n).filter(|&v| !is_boundary[v]).collect();
        let nb = boundary.len();
        let k_bb = stiffness.submatrix(boundary, boundary);
        let mut schur = DenseMatrix::zeros(nb);
        for i in 0..nb {
            for (j, v) in k_bb.row(i) {
                schur.set(i, j, v);
            }
        }
        let k_ib = stiffness.submatrix(&interior, boundary);
        let k_bi = stiffness.submatrix(boundary, &interior);
        let factor = if interior.is_empty() {
            None
        } else {
            let k_ii = stiffness.submatrix(&interior, &interior);
            let f = EnvelopeCholesky::factor(&k_ii).map_err(|e| match e {
                Error::Factorization { pivot, value } => {
                    Error::Factorization { pivot: interior[pivot], value }
                }
                other => other,
            })?;
            // Columns of K_ib are the rows of K_bi.
            let mut rhs = alloc::vec![0.0; interior.len()];
            for j in 0..nb {
                rhs.iter_mut().for_each(|x| *x = 0.0);
                for (i, v) in k_bi.row(j) {
                    rhs[i] = v;
                }
                f.solve_in_place(&mut rhs);
                for i in 0..nb {
                    let s: f64 = k_bi.row(i).map(|(k, v)| v * rhs[k]).sum();
                    schur.add(i, j, -s);
                }
            }
            schur.symmetrize();
            Some(f)
        };
        Ok(Self { boundary: boundary.to_vec(), interior, k_ib, factor, schur })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.schur
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Discrete harmonic extension of boundary values to all vertices.
    pub fn extend(&self, boundary_values: &[f64]) -> Vec<f64> {
        let n = self.boundary.len() + self.interior.len();
        let mut u = alloc::vec![0.0; n];
        for (&b, &x) in self.boundary.iter().zip(boundary_values) {
            u[b] = x;
        }
        if let Some(f) = &self.factor {
            let mut rhs = self.k_ib.mul_vec(boundary_values);
            rhs.iter_mut().for_each(|x| *x = -*x);
            f.solve_in_place(&mut rhs);
            for (&i, &x) in self.interior.iter().zip(&rhs) {
                u[i] = x;
            }
        }
        u
    }
}

/// The Schur complement on its own.
pub fn dtn_schur(stiffness: &CsrMatrix, boundary: &[usize]) -> Result<DenseMatrix> {
    Ok(DirichletToNeumann::new(stiffness, boundary)?.schur)
}

/// The smallest Steklov eigenpairs of a mesh.
#[derive(Debug, Clone)]
pub struct SteklovSpectrum {
    /// `sigma_0 ~ 0, sigma_1, ..., sigma_k`, ascending.
    pub eigenvalues: Vec<f64>,
    /// Boundary-mass orthonormal eigenvectors over [`SteklovSpectrum::boundary`].
    pub boundary_vectors: Vec<Vec<f64>>,
    /// Harmonic extensions of the eigenvectors to all mesh vertices.
    pub extensions: Vec<Vec<f64>>,
    pub boundary: Vec<usize>,
}

impl SteklovSpectrum {
    pub fn sigma1(&self) -> f64 {
        self.eigenvalues[1]
    }
}

/// Solves `S phi = sigma M_b phi` through `M_b = L L^T` and the standard
/// problem for `L^{-1} S L^{-T}`, keeping `k + 1` eigenpairs.
pub fn steklov_spectrum_on_mesh(mesh: &TriMesh, k: usize) -> Result<SteklovSpectrum> {
    steklov_spectrum_with_stiffness(mesh, &stiffness_matrix(mesh)?, k)
}

/// As [`steklov_spectrum_on_mesh`], with the stiffness matrix of `mesh` supplied by the caller.
pub fn steklov_spectrum_with_stiffness(
    mesh: &TriMesh,
    stiffness: &CsrMatrix,
    k: usize,
) -> Result<SteklovSpectrum> {
    if stiffness.rows() != mesh.num_vertices() || stiffness.cols() != mesh.num_vertices() {
        return Err(domain("stiffness matrix does not match the mesh"));
    }
    if k == 0 {
        return Err(domain("at least one nonzero eigenvalue must be requested"));
    }
    let boundary = mesh.boundary_vertices().to_vec();
    let nb = boundary.len();
    if nb < k + 1 {
        return Err(domain("mesh has too few boundary vertices for the requested eigenvalues"));
    }
    let dtn = DirichletToNeumann::new(stiffness, &boundary)?;
    let mass = boundary_mass_matrix(mesh);
    let m = DenseMatrix::from_fn(nb, |i, j| mass.get(i, j));
    let l = m.cholesky()?;
    // C = L^{-1} S L^{-T}, built column by column.
    let mut x = DenseMatrix::zeros(nb);
    let mut col = alloc::vec![0.0; nb];
    for j in 0..nb {
        for i in 0..nb {
            col[i] = dtn.schur.get(i, j);
        }
        l.forward_substitute(&mut col);
        for i in 0..nb {
            x.set(i, j, col[i]);
        }
    }
    let mut c = DenseMatrix::zeros(nb);
    let mut row = alloc::vec![0.0; nb];
    for i in 0..nb {
        row.copy_from_slice(x.row(i));
        l.forward_substitute(&mut row);
        for j in 0..nb {
            c.set(i, j, row[j]);
        }
    }
    c.symmetrize();
    let eig = symmetric_eigen(&c)?;
    let mut vectors: Vec<Vec<f64>> = eig
        .vectors
        .iter()
        .map(|y| {
            let mut v = y.clone();
            l.backward_substitute_transpose(&mut v);
            v
        })
        .collect();
    // The constant mode is the eigenvector with the largest boundary mean.
    let ones = alloc::vec![1.0; nb];
    let m_ones = mass.mul_vec(&ones);
    let mean = |v: &[f64]| v.iter().zip(&m_ones).map(|(a, b)| a * b).sum::<f64>();
    let constant = (0..nb)
        .max_by(|&a, &b| mean(&vectors[a]).abs().total_cmp(&mean(&vectors[b]).abs()))
        .expect("nonempty spectrum");
    let mut order: Vec<usize> = Vec::with_capacity(k + 1);
    order.push(constant);
    order.extend((0..nb).filter(|&i| i != constant).take(k));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.values[i]).collect();
    let mut boundary_vectors = Vec::with_capacity(k + 1);
    for &i in &order {
        boundary_vectors.push(core::mem::take(&mut vectors[i]));
    }
    if !eigenvalues.iter().all(|v| v.is_finite()) {
        return Err(Error::Numerical { what: "Steklov eigenvalues", achieved: f64::NAN });
    }
    let extensions = boundary_vectors.iter().map(|v| dtn.extend(v)).collect();
    Ok(SteklovSpectrum { eigenvalues, boundary_vectors, extensions, boundary })
}

/// Meshes `spec` and returns `sigma_0, ..., sigma_k`.
pub fn steklov_spectrum(spec: &DomainSpec, k: usize) -> Result<SteklovSpectrum> {
    steklov_spectrum_on_mesh(&build_mesh(spec)?, k)
}
