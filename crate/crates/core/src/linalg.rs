//! Dense complex linear algebra shared by the quantum modules, plus the
//! matrix/vector JSON interchange format.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance on state-vector norms.
pub const EPS_NORM: f64 = 1e-10;
/// Entrywise tolerance for matrix equality and scalar residues.
pub const EPS_ABS: f64 = 1e-10;
/// Guard band around the projector eigenvalues 0 and 1.
pub const EPS_RANK: f64 = 1e-8;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Entrywise max-modulus norm.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Tr(A B) without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Hilbert–Schmidt inner product Tr(X† Y).
pub fn hs_inner(x: &CMatrix, y: &CMatrix) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

fn check_projector_spectrum(values: &[f64]) -> Result<()> {
    for &v in values {
        if v.abs() > EPS_RANK && (v - 1.0).abs() > EPS_RANK {
            return Err(Error::NumericalIntegrity(format!(
                "projector eigenvalue {v} outside the guard bands around 0 and 1"
            )));
        }
    }
    Ok(())
}

/// Rank of an orthogonal projector: eigenvalues above one half.
pub fn projector_rank(p: &CMatrix) -> Result<usize> {
    if p.nrows() == 0 {
        return Ok(0);
    }
    let (values, _) = hermitian_eigen(p);
    check_projector_spectrum(&values)?;
    Ok(values.iter().filter(|&&v| v > 0.5).count())
}

/// Orthonormal basis (as columns) of the range of an orthogonal projector.
pub fn projector_range(p: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(p);
    check_projector_spectrum(&values)?;
    let cols: Vec<usize> = (0..values.len()).filter(|&k| values[k] > 0.5).collect();
    Ok(CMatrix::from_fn(p.nrows(), cols.len(), |r, k| vectors[(r, cols[k])]))
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass. Vectors whose
/// residual norm falls below `tol` are dropped as linearly dependent.
pub fn orthonormalize(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let mut basis: Vec<CVector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w.axpy(-proj, b, ONE);
            }
        }
        let norm = w.norm();
        if norm > tol {
            basis.push(w.unscale(norm));
        }
    }
    basis
}

pub fn columns_to_matrix(dim: usize, cols: &[CVector]) -> CMatrix {
    CMatrix::from_fn(dim, cols.len(), |r, k| cols[k][r])
}

/// Projector V V† onto the span of the orthonormal columns of `v`.
pub fn span_projector(v: &CMatrix) -> CMatrix {
    v * v.adjoint()
}

/// Dimension of the space of matrices X with X M = M X for every M in
/// `mats`, computed as the null-space dimension of the stacked linear system.
pub fn commutant_dimension(mats: &[CMatrix], tol: f64) -> usize {
    let Some(first) = mats.first() else {
        return 0;
    };
    let m = first.nrows();
    let unknowns = m * m;
    if unknowns == 0 {
        return 0;
    }
    // vec(XM - MX) with column-major vec: (M^T ⊗ I - I ⊗ M) vec(X)
    let mut system = CMatrix::zeros(mats.len() * unknowns, unknowns);
    for (block, mat) in mats.iter().enumerate() {
        let off = block * unknowns;
        for j in 0..m {
            for i in 0..m {
                let row = off + i + j * m;
                for k in 0..m {
                    // (XM)_{ij} = Σ_k X_{ik} M_{kj}
                    system[(row, i + k * m)] += mat[(k, j)];
                    // (MX)_{ij} = Σ_k M_{ik} X_{kj}
                    system[(row, k + j * m)] -= mat[(i, k)];
                }
            }
        }
    }
    let sv = system.svd(false, false).singular_values;
    let scale = sv.iter().cloned().fold(1.0f64, f64::max);
    unknowns - sv.iter().filter(|&&s| s > tol * scale).count()
}

/// Matrix interchange form: `{"rows": R, "cols": C, "data": [[re, im], ...]}`
/// with data in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::SizeMismatch { expected: self.rows * self.cols, found: self.data.len() });
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |r, c| {
            let [re, im] = self.data[r * self.cols + c];
            Complex64::new(re, im)
        }))
    }
}

/// Vector interchange form: `{"dim": D, "data": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl VectorJson {
    pub fn from_vector(v: &CVector) -> Self {
        VectorJson { dim: v.len(), data: v.iter().map(|z| [z.re, z.im]).collect() }
    }

    pub fn to_vector(&self) -> Result<CVector> {
        if self.data.len() != self.dim {
            return Err(Error::SizeMismatch { expected: self.dim, found: self.data.len() });
        }
        Ok(CVector::from_iterator(self.dim, self.data.iter().map(|&[re, im]| Complex64::new(re, im))))
    }
}
