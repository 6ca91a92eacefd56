use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::CsrMatrix;
use crate::error::{domain, Error, Result};
use crate::math;

/// Reverse Cuthill-McKee ordering of a structurally symmetric matrix.
///
/// Returns `perm` with `perm[new] = old`. Every connected component starts
/// from a vertex of minimal degree.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.rows();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).filter(|&(j, _)| j != i).count()).collect();
    let mut visited = alloc::vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    let mut queue = VecDeque::new();
    let mut neighbours = Vec::new();
    for &start in &by_degree {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            neighbours.clear();
            neighbours.extend(a.row(v).map(|(j, _)| j).filter(|&j| j != v && !visited[j]));
            neighbours.sort_by_key(|&j| (degree[j], j));
            for &j in &neighbours {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

/// Cholesky factorization `P A P^T = L L^T` stored in envelope (skyline) form.
///
/// Row `i` of `L` is stored from its first structurally nonzero column up to
/// the diagonal; fill-in stays inside that envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    /// Factors a symmetric positive definite matrix after RCM reordering.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        if a.rows() != a.cols() {
            return Err(domain("matrix must be square"));
        }
        let perm = reverse_cuthill_mckee(a);
        Self::factor_with(a, perm)
    }

    /// Factors with a caller-supplied ordering (`perm[new] = old`).
    pub fn factor_with(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.rows();
        let mut inverse = alloc::vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (new, &old) in perm.iter().enumerate() {
            for (j, _) in a.row(old) {
                let c = inverse[j];
                if c < first[new] {
                    first[new] = c;
                }
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut data = alloc::vec![0.0; start[n]];
        for (new, &old) in perm.iter().enumerate() {
            for (j, v) in a.row(old) {
                let c = inverse[j];
                if c <= new {
                    data[start[new] + c - first[new]] += v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut sum = data[start[i] + j - fi];
                let row_i = &data[start[i] + lo - fi..start[i] + j - fi];
                let row_j = &data[start[j] + lo - fj..start[j] + j - fj];
                for (x, y) in row_i.iter().zip(row_j) {
                    sum -= x * y;
                }
                if j == i {
                    if !(sum > 0.0) {
                        return Err(Error::Factorization { pivot: perm[i], value: sum });
                    }
                    data[start[i] + i - fi] = math::sqrt(sum);
                } else {
                    data[start[i] + j - fi] = sum / data[start[j + 1] - 1];
                }
            }
        }
        Ok(Self { perm, first, start, data })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            let mut sum = y[i];
            for (l, yj) in row[..i - fi].iter().zip(&y[fi..i]) {
                sum -= l * yj;
            }
            y[i] = sum / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.data[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let yi = y[i];
            for (l, yj) in row[..i - fi].iter().zip(&mut y[fi..i]) {
                *yj -= l * yi;
            }
        }
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = y[new];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
