//! The n-particle assembly space H = h^{⊗n} with dim h = d.
//!
//! Basis states are indexed row-major over particle slots: slot 1 is the most
//! significant base-d digit, so `|i_1 … i_n⟩` sits at `Σ_k i_k d^{n-k}`.
//! The permutation operator P(π) moves the factor in slot k to slot π(k).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, EPS_ABS, EPS_NORM, ONE};
use crate::symgroup::{Permutation, SymmetricGroup, N_MAX};

/// Largest supported assembly dimension d^n.
pub const MAX_DIM: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AssemblyConfig {
    n: usize,
    d: usize,
    dim: usize,
}

impl AssemblyConfig {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::DegenerateInput(format!("n = {n}, d = {d}; both must be positive")));
        }
        let mut dim: usize = 1;
        for _ in 0..n {
            dim = dim
                .checked_mul(d)
                .filter(|&x| x <= MAX_DIM)
                .ok_or_else(|| Error::Capability(format!("{d}^{n} exceeds {MAX_DIM}")))?;
        }
        Ok(AssemblyConfig { n, d, dim })
    }

    /// Particle count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Single-particle dimension.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Assembly dimension d^n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Slot digits of a basis index, slot 1 first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for slot in (0..self.n).rev() {
            out[slot] = index % self.d;
            index /= self.d;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &x| acc * self.d + x)
    }

    fn check(&self, other: &AssemblyConfig) -> Result<()> {
        if self != other {
            return Err(Error::SizeMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }
}

/// A unit vector in the assembly space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    config: AssemblyConfig,
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps amplitudes that are already normalised within `EPS_NORM`.
    pub fn new(config: AssemblyConfig, amplitudes: CVector) -> Result<Self> {
        check_len(config, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(Error::InvariantViolation(format!("state norm {norm} differs from 1")));
        }
        Ok(StateVector { config, amplitudes })
    }

    /// Normalises arbitrary nonzero amplitudes.
    pub fn normalized(config: AssemblyConfig, amplitudes: CVector) -> Result<Self> {
        check_len(config, amplitudes.len())?;
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateInput("zero or non-finite vector".into()));
        }
        Ok(StateVector { config, amplitudes: amplitudes.unscale(norm) })
    }

    pub fn basis(config: AssemblyConfig, digits: &[usize]) -> Result<Self> {
        if digits.len() != config.n || digits.iter().any(|&x| x >= config.d) {
            return Err(Error::InvariantViolation(format!(
                "basis label {digits:?} invalid for n = {}, d = {}",
                config.n, config.d
            )));
        }
        let mut amplitudes = CVector::zeros(config.dim);
        amplitudes[config.index(digits)] = ONE;
        Ok(StateVector { config, amplitudes })
    }

    pub fn config(&self) -> AssemblyConfig {
        self.config
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// The ray projector |ψ⟩⟨ψ|.
    pub fn projector(&self) -> DensityOperator {
        DensityOperator { config: self.config, matrix: &self.amplitudes * self.amplitudes.adjoint() }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

fn check_len(config: AssemblyConfig, len: usize) -> Result<()> {
    if len != config.dim {
        return Err(Error::SizeMismatch { expected: config.dim, found: len });
    }
    Ok(())
}

fn check_square(config: AssemblyConfig, m: &CMatrix) -> Result<()> {
    if m.nrows() != config.dim || m.ncols() != config.dim {
        return Err(Error::SizeMismatch {
            expected: config.dim,
            found: if m.nrows() != config.dim { m.nrows() } else { m.ncols() },
        });
    }
    Ok(())
}

/// Normalised Kronecker product of single-particle vectors, slot 1 first.
pub fn product_state(factors: &[CVector]) -> Result<StateVector> {
    let Some(first) = factors.first() else {
        return Err(Error::DegenerateInput("no factors".into()));
    };
    let d = first.len();
    let config = AssemblyConfig::new(factors.len(), d)?;
    let mut amplitudes = CVector::from_element(1, ONE);
    for f in factors {
        if f.len() != d {
            return Err(Error::SizeMismatch { expected: d, found: f.len() });
        }
        let norm = f.norm();
        if norm == 0.0 {
            return Err(Error::DegenerateInput("zero factor in product state".into()));
        }
        amplitudes = amplitudes.kronecker(&f.unscale(norm));
    }
    StateVector::normalized(config, amplitudes)
}

/// Common view of anything that is a square operator on an assembly space.
pub trait AsOperator {
    fn config(&self) -> AssemblyConfig;
    fn matrix(&self) -> &CMatrix;
}

/// An unconstrained operator on the assembly space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    config: AssemblyConfig,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(config: AssemblyConfig, matrix: CMatrix) -> Result<Self> {
        check_square(config, &matrix)?;
        Ok(Operator { config, matrix })
    }

    pub fn identity(config: AssemblyConfig) -> Self {
        Operator { config, matrix: CMatrix::identity(config.dim, config.dim) }
    }

    /// |a⟩⟨b|.
    pub fn outer(a: &StateVector, b: &StateVector) -> Result<Self> {
        a.config.check(&b.config)?;
        Ok(Operator { config: a.config, matrix: &a.amplitudes * b.amplitudes.adjoint() })
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Entrywise distance to another operator on the same space.
    pub fn distance(&self, other: &impl AsOperator) -> Result<f64> {
        self.config.check(&other.config())?;
        Ok(linalg::max_abs_diff(&self.matrix, other.matrix()))
    }
}

impl AsOperator for Operator {
    fn config(&self) -> AssemblyConfig {
        self.config
    }
    fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Self-adjoint, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    config: AssemblyConfig,
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(config: AssemblyConfig, matrix: CMatrix) -> Result<Self> {
        check_square(config, &matrix)?;
        let herm = linalg::hermiticity_residual(&matrix);
        if herm > EPS_ABS {
            return Err(Error::NotAState(format!("not self-adjoint (residual {herm:e})")));
        }
        let tr = linalg::trace(&matrix);
        if (tr - ONE).norm() > EPS_ABS {
            return Err(Error::NotAState(format!("trace {tr} differs from 1")));
        }
        let (values, _) = linalg::hermitian_eigen(&matrix);
        if let Some(&min) = values.first() {
            if min < -EPS_ABS {
                return Err(Error::NotAState(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(DensityOperator { config, matrix })
    }

    pub fn from_operator(op: Operator) -> Result<Self> {
        DensityOperator::new(op.config, op.matrix)
    }

    /// Convex combination Σ w_i |ψ_i⟩⟨ψ_i|; weights must be non-negative and
    /// sum to one.
    pub fn from_mixture(components: &[(f64, StateVector)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::DegenerateInput("empty mixture".into()));
        };
        let config = first.config;
        let mut matrix = CMatrix::zeros(config.dim, config.dim);
        let mut total = 0.0;
        for (w, v) in components {
            config.check(&v.config)?;
            if *w < 0.0 {
                return Err(Error::NotAState(format!("negative weight {w}")));
            }
            total += w;
            matrix += (&v.amplitudes * v.amplitudes.adjoint()) * Complex64::from(*w);
        }
        if (total - 1.0).abs() > EPS_ABS {
            return Err(Error::NotAState(format!("weights sum to {total}")));
        }
        DensityOperator::new(config, matrix)
    }

    /// I / D.
    pub fn maximally_mixed(config: AssemblyConfig) -> Self {
        let scale = Complex64::from(1.0 / config.dim as f64);
        DensityOperator { config, matrix: CMatrix::identity(config.dim, config.dim) * scale }
    }

    pub fn as_operator(&self) -> Operator {
        Operator { config: self.config, matrix: self.matrix.clone() }
    }
}

impl AsOperator for DensityOperator {
    fn config(&self) -> AssemblyConfig {
        self.config
    }
    fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Self-adjoint operator representing a physical quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    config: AssemblyConfig,
    matrix: CMatrix,
}

impl Observable {
    pub fn new(config: AssemblyConfig, matrix: CMatrix) -> Result<Self> {
        check_square(config, &matrix)?;
        let herm = linalg::hermiticity_residual(&matrix);
        if herm > EPS_ABS {
            return Err(Error::InvariantViolation(format!("observable not self-adjoint (residual {herm:e})")));
        }
        Ok(Observable { config, matrix })
    }

    pub fn from_operator(op: Operator) -> Result<Self> {
        Observable::new(op.config, op.matrix)
    }

    pub fn identity(config: AssemblyConfig) -> Self {
        Observable { config, matrix: CMatrix::identity(config.dim, config.dim) }
    }

    pub fn as_operator(&self) -> Operator {
        Operator { config: self.config, matrix: self.matrix.clone() }
    }
}

impl AsOperator for Observable {
    fn config(&self) -> AssemblyConfig {
        self.config
    }
    fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// P(π), held as a basis index map: P(π)|b⟩ = |map[b]⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermOperator {
    config: AssemblyConfig,
    source: Permutation,
    index_map: Vec<usize>,
}

impl PermOperator {
    pub fn source(&self) -> &Permutation {
        &self.source
    }

    pub fn config(&self) -> AssemblyConfig {
        self.config
    }

    pub fn index_map(&self) -> &[usize] {
        &self.index_map
    }

    /// Dense 0/1 matrix.
    pub fn matrix(&self) -> CMatrix {
        let dim = self.config.dim;
        let mut m = CMatrix::zeros(dim, dim);
        for (b, &out) in self.index_map.iter().enumerate() {
            m[(out, b)] = ONE;
        }
        m
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = CVector::zeros(v.len());
        for (b, &target) in self.index_map.iter().enumerate() {
            out[target] = v[b];
        }
        out
    }

    pub fn apply_state(&self, v: &StateVector) -> Result<StateVector> {
        self.config.check(&v.config)?;
        Ok(StateVector { config: v.config, amplitudes: self.apply(&v.amplitudes) })
    }

    /// P A P†.
    pub fn conjugate(&self, a: &CMatrix) -> CMatrix {
        let dim = self.config.dim;
        let map = &self.index_map;
        let mut out = CMatrix::zeros(dim, dim);
        for c in 0..dim {
            for r in 0..dim {
                out[(map[r], map[c])] = a[(r, c)];
            }
        }
        out
    }

    /// Accumulates `weight · P A P†` into `acc`.
    pub fn conjugate_add(&self, a: &CMatrix, weight: Complex64, acc: &mut CMatrix) {
        let dim = self.config.dim;
        let map = &self.index_map;
        for c in 0..dim {
            for r in 0..dim {
                acc[(map[r], map[c])] += weight * a[(r, c)];
            }
        }
    }

    /// Accumulates `weight · P` into `acc`.
    pub fn add_to(&self, weight: Complex64, acc: &mut CMatrix) {
        for (b, &out) in self.index_map.iter().enumerate() {
            acc[(out, b)] += weight;
        }
    }

    /// ‖[A, P]‖_max, which equals ‖P A P† − A‖_max.
    pub fn commutator_norm(&self, a: &CMatrix) -> f64 {
        let dim = self.config.dim;
        let map = &self.index_map;
        let mut worst = 0.0f64;
        for c in 0..dim {
            for r in 0..dim {
                worst = worst.max((a[(map[r], map[c])] - a[(r, c)]).norm());
            }
        }
        worst
    }
}

/// Builds P(π) for the given assembly.
pub fn perm_operator(pi: &Permutation, config: AssemblyConfig) -> Result<PermOperator> {
    if pi.degree() != config.n {
        return Err(Error::SizeMismatch { expected: config.n, found: pi.degree() });
    }
    let mut index_map = Vec::with_capacity(config.dim);
    let mut out = vec![0; config.n];
    for b in 0..config.dim {
        let digits = config.digits(b);
        for (k, &digit) in digits.iter().enumerate() {
            out[pi.apply0(k)] = digit;
        }
        index_map.push(config.index(&out));
    }
    Ok(PermOperator { config, source: pi.clone(), index_map })
}

/// The full representation π ↦ P(π) of S_n on an assembly space, with one
/// operator per group element in [`SymmetricGroup::elements`] order.
#[derive(Debug, Clone)]
pub struct PermutationRep {
    config: AssemblyConfig,
    group: SymmetricGroup,
    operators: Vec<PermOperator>,
}

impl PermutationRep {
    pub fn new(config: AssemblyConfig) -> Result<Self> {
        if config.n > N_MAX {
            return Err(Error::Capability(format!("n = {} exceeds {N_MAX}", config.n)));
        }
        let group = SymmetricGroup::new(config.n)?;
        let operators = group.elements().iter().map(|p| perm_operator(p, config)).collect::<Result<Vec<_>>>()?;
        Ok(PermutationRep { config, group, operators })
    }

    pub fn config(&self) -> AssemblyConfig {
        self.config
    }

    pub fn group(&self) -> &SymmetricGroup {
        &self.group
    }

    pub fn operators(&self) -> &[PermOperator] {
        &self.operators
    }

    pub fn operator(&self, pi: &Permutation) -> Result<&PermOperator> {
        self.group
            .elements()
            .iter()
            .position(|p| p == pi)
            .map(|i| &self.operators[i])
            .ok_or_else(|| Error::SizeMismatch { expected: self.config.n, found: pi.degree() })
    }

    /// True iff A commutes with every P(π) within `EPS_ABS`.
    pub fn is_symmetric_operator(&self, a: &impl AsOperator) -> bool {
        a.config() == self.config && self.max_commutator(a.matrix()) <= EPS_ABS
    }

    /// max_π ‖[A, P(π)]‖_max.
    pub fn max_commutator(&self, a: &CMatrix) -> f64 {
        self.operators.iter().map(|p| p.commutator_norm(a)).fold(0.0, f64::max)
    }
}

/// Born-rule expectation Tr(W Q).
pub fn expectation(w: &DensityOperator, q: &Observable) -> Result<f64> {
    w.config.check(&q.config)?;
    real_trace_of_product(&w.matrix, &q.matrix)
}

/// Tr(A B) for a pair whose product trace must be real.
pub fn real_trace_of_product(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let t = linalg::trace_of_product(a, b);
    if t.im.abs() > EPS_ABS {
        return Err(Error::NumericalIntegrity(format!("imaginary residue {:e} in trace", t.im)));
    }
    Ok(t.re)
}

/// P(π) A P(π)†.
pub fn conjugate_by(pi: &Permutation, a: &impl AsOperator) -> Result<Operator> {
    let p = perm_operator(pi, a.config())?;
    Ok(Operator { config: a.config(), matrix: p.conjugate(a.matrix()) })
}
