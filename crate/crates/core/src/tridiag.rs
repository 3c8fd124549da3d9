//! Symmetric tridiagonal matrices and their exponentials.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigendecomposition of a symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagEigen {
    pub values: DVector<f64>,
    /// Orthonormal eigenvectors as columns.
    pub vectors: DMatrix<f64>,
}

impl TridiagEigen {
    pub fn new(diag: &[f64], offdiag: &[f64]) -> Self {
        let n = diag.len();
        assert_eq!(offdiag.len() + 1, n.max(1), "offdiag must have len(diag) - 1 entries");
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
        }
        for (i, &b) in offdiag.iter().enumerate() {
            m[(i, i + 1)] = b;
            m[(i + 1, i)] = b;
        }
        let e = SymmetricEigen::new(m);
        Self { values: e.eigenvalues, vectors: e.eigenvectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `exp(t A) v`.
    pub fn expm_apply(&self, t: f64, v: &DVector<f64>) -> DVector<f64> {
        let coeff = self.vectors.tr_mul(v);
        let scaled = DVector::from_iterator(self.dim(), coeff.iter().zip(self.values.iter()).map(|(c, l)| c * (t * l).exp()));
        &self.vectors * scaled
    }

    /// `exp(t A)` as a dense matrix.
    pub fn expm(&self, t: f64) -> DMatrix<f64> {
        let mut u = self.vectors.clone();
        for (j, l) in self.values.iter().enumerate() {
            let s = (t * l).exp();
            u.column_mut(j).iter_mut().for_each(|x| *x *= s);
        }
        u * self.vectors.transpose()
    }
}
