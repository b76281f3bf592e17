//! Reproducible random operators for sampled verification.
//!
//! Hermitian quantities are `(M + M†)/2` and density operators
//! `M M† / Tr(M M†)` for complex Gaussian `M`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{AssemblyConfig, DensityOperator, Observable, StateVector};
use crate::linalg::{self, CMatrix, CVector};

/// Seeded sampler; identical seeds give identical streams.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn gaussian_vector(&mut self, len: usize) -> CVector {
        CVector::from_fn(len, |_, _| self.complex_normal())
    }

    pub fn hermitian(&mut self, dim: usize) -> CMatrix {
        let m = self.gaussian_matrix(dim, dim);
        (&m + m.adjoint()).unscale(2.0)
    }

    pub fn observable(&mut self, config: AssemblyConfig) -> Observable {
        let m = self.hermitian(config.dim());
        // exact hermiticity up to rounding of the halving
        let m = (&m + m.adjoint()).unscale(2.0);
        Observable::new(config, m).expect("hermitian by construction")
    }

    pub fn density(&mut self, config: AssemblyConfig) -> DensityOperator {
        let m = self.gaussian_matrix(config.dim(), config.dim());
        let w = &m * m.adjoint();
        let tr = linalg::trace(&w).re;
        let w = w.unscale(tr);
        let w = (&w + w.adjoint()).unscale(2.0);
        DensityOperator::new(config, w).expect("positive by construction")
    }

    pub fn state(&mut self, config: AssemblyConfig) -> StateVector {
        StateVector::normalized(config, self.gaussian_vector(config.dim())).expect("nonzero with probability one")
    }

    /// Random unit vector in the span of the orthonormal columns of `basis`.
    pub fn unit_in_span(&mut self, basis: &CMatrix) -> CVector {
        let coeffs = self.gaussian_vector(basis.ncols());
        let v = basis * coeffs;
        let norm = v.norm();
        v.unscale(norm)
    }
}
