//! Symmetry sectors of the assembly space.
//!
//! The bosonic, fermionic and paraparticle projectors E_S, E_A, E_P are group
//! sums over P(π). Each λ-isotypic component (character projector) is split
//! into generalised rays, i.e. irreducible invariant subspaces.
//!
//! Ray extraction: a random Hermitian operator compressed to the component is
//! group-averaged, which makes it act as `I_m ⊗ h` on `V_λ ⊗ C^k`. Its
//! eigenspaces are single irreducible copies. An eigenvector then seeds an
//! S_n orbit whose orthonormalised span is the ray.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{AsOperator, AssemblyConfig, Observable, PermutationRep, StateVector};
use crate::linalg::{self, CMatrix, CVector, EPS_ABS, EPS_RANK};
use crate::par::{chunked_fold, Strategy};
use crate::sampling::Sampler;
use crate::symgroup::{is_partition_of, CharacterTable, Partition, Permutation};
use crate::symmetriser;

/// Seed used by [`generalised_rays`] when none is given.
pub const DEFAULT_RAY_SEED: u64 = 0x5EED;
const RAY_ATTEMPTS: u64 = 8;

/// Σ_i coeffs[i] P(π_i) over the group elements of `rep`.
pub fn group_sum_with(rep: &PermutationRep, coeffs: &[f64], strategy: Strategy) -> CMatrix {
    let dim = rep.config().dim();
    let ops = rep.operators();
    chunked_fold(
        strategy,
        ops.len(),
        || CMatrix::zeros(dim, dim),
        |acc, i| {
            if coeffs[i] != 0.0 {
                ops[i].add_to(Complex64::from(coeffs[i]), acc);
            }
        },
        |a, b| a + b,
    )
}

fn group_sum(rep: &PermutationRep, coeffs: &[f64]) -> CMatrix {
    group_sum_with(rep, coeffs, Strategy::default())
}

fn group_order(rep: &PermutationRep) -> f64 {
    rep.group().order() as f64
}

/// E_S = (1/n!) Σ_π P(π).
pub fn sym_projector(rep: &PermutationRep) -> CMatrix {
    let w = 1.0 / group_order(rep);
    group_sum(rep, &vec![w; rep.group().order()])
}

/// E_A = (1/n!) Σ_π sgn(π) P(π).
pub fn antisym_projector(rep: &PermutationRep) -> CMatrix {
    let w = 1.0 / group_order(rep);
    let coeffs: Vec<f64> = rep.group().elements().iter().map(|p| w * p.parity() as f64).collect();
    group_sum(rep, &coeffs)
}

/// E_P = I − E_S − E_A.
pub fn para_projector(rep: &PermutationRep) -> CMatrix {
    SectorProjectors::new(rep).para
}

/// The family {E_S, E_A, E_P}.
#[derive(Debug, Clone)]
pub struct SectorProjectors {
    config: AssemblyConfig,
    pub sym: CMatrix,
    pub antisym: CMatrix,
    pub para: CMatrix,
}

impl SectorProjectors {
    /// A lone particle (n = 1) has E_S = E_A = I; it is counted as bosonic
    /// here so that the family stays orthogonal.
    pub fn new(rep: &PermutationRep) -> Self {
        let sym = sym_projector(rep);
        let dim = rep.config().dim();
        let antisym = if rep.config().n() < 2 { CMatrix::zeros(dim, dim) } else { antisym_projector(rep) };
        let para = CMatrix::identity(dim, dim) - &sym - &antisym;
        SectorProjectors { config: rep.config(), sym, antisym, para }
    }

    pub fn config(&self) -> AssemblyConfig {
        self.config
    }

    pub fn family(&self) -> [&CMatrix; 3] {
        [&self.sym, &self.antisym, &self.para]
    }

    /// Ranks of (E_S, E_A, E_P).
    pub fn ranks(&self) -> Result<[usize; 3]> {
        Ok([
            linalg::projector_rank(&self.sym)?,
            linalg::projector_rank(&self.antisym)?,
            linalg::projector_rank(&self.para)?,
        ])
    }

    /// Largest deviation from idempotence, self-adjointness, mutual
    /// orthogonality and completeness.
    pub fn invariant_residual(&self) -> f64 {
        let fam = self.family();
        let dim = self.config.dim();
        let mut worst = 0.0f64;
        for (i, e) in fam.iter().enumerate() {
            worst = worst.max(linalg::max_abs_diff(&(*e * *e), e));
            worst = worst.max(linalg::hermiticity_residual(e));
            for f in fam.iter().skip(i + 1) {
                worst = worst.max(linalg::max_abs(&(*e * *f)));
            }
        }
        let total = fam[0] + fam[1] + fam[2];
        worst.max(linalg::max_abs_diff(&total, &CMatrix::identity(dim, dim)))
    }
}

/// Projector onto the λ-isotypic component and an orthonormal basis of it.
#[derive(Debug, Clone)]
pub struct IsotypicComponent {
    config: AssemblyConfig,
    label: Partition,
    irrep_dim: usize,
    projector: CMatrix,
    basis: CMatrix,
}

impl IsotypicComponent {
    fn from_projector(config: AssemblyConfig, label: Partition, irrep_dim: usize, projector: CMatrix) -> Result<Self> {
        let basis = linalg::projector_range(&projector)?;
        if basis.ncols() % irrep_dim != 0 {
            return Err(Error::DecompositionFailure(format!(
                "rank {} of component {label:?} is not a multiple of {irrep_dim}",
                basis.ncols()
            )));
        }
        Ok(IsotypicComponent { config, label, irrep_dim, projector, basis })
    }

    pub fn config(&self) -> AssemblyConfig {
        self.config
    }

    pub fn label(&self) -> &[usize] {
        &self.label
    }

    /// Dimension of the irrep λ.
    pub fn irrep_dim(&self) -> usize {
        self.irrep_dim
    }

    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// Number of irreducible copies, rank / dim λ.
    pub fn multiplicity(&self) -> usize {
        self.rank() / self.irrep_dim
    }

    /// The part of this component inside an invariant subspace spanned by the
    /// orthonormal columns of `subspace`.
    pub fn restricted_to(&self, rep: &PermutationRep, subspace: &CMatrix) -> Result<Self> {
        if subspace.nrows() != self.config.dim() {
            return Err(Error::SizeMismatch { expected: self.config.dim(), found: subspace.nrows() });
        }
        let pi_s = linalg::span_projector(subspace);
        let worst = rep.max_commutator(&pi_s);
        if worst > EPS_RANK {
            return Err(Error::Precondition(format!("subspace is not permutation invariant (commutator {worst:e})")));
        }
        let projector = &self.projector * pi_s;
        IsotypicComponent::from_projector(self.config, self.label.clone(), self.irrep_dim, projector)
    }
}

/// P_λ = (dim λ / n!) Σ_π χ_λ(π) P(π).
pub fn isotypic_projector(lambda: &[usize], rep: &PermutationRep, table: &CharacterTable) -> Result<IsotypicComponent> {
    let n = rep.config().n();
    if !is_partition_of(lambda, n) || table.degree() != n {
        return Err(Error::InvalidPartition(lambda.to_vec()));
    }
    let irrep_dim = table.dimension(lambda)?;
    let scale = irrep_dim as f64 / group_order(rep);
    let coeffs = rep
        .group()
        .elements()
        .iter()
        .map(|p| Ok(scale * table.character(lambda, p)? as f64))
        .collect::<Result<Vec<_>>>()?;
    let projector = group_sum(rep, &coeffs);
    IsotypicComponent::from_projector(rep.config(), lambda.to_vec(), irrep_dim, projector)
}

/// An irreducible invariant subspace, held as orthonormal columns.
#[derive(Debug, Clone)]
pub struct GeneralisedRay {
    config: AssemblyConfig,
    label: Partition,
    basis: CMatrix,
}

impl GeneralisedRay {
    pub fn config(&self) -> AssemblyConfig {
        self.config
    }

    pub fn label(&self) -> &[usize] {
        &self.label
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn projector(&self) -> CMatrix {
        linalg::span_projector(&self.basis)
    }

    pub fn vector(&self, k: usize) -> Result<StateVector> {
        StateVector::normalized(self.config, self.basis.column(k).into_owned())
    }

    /// max_π ‖(I − Π_V) P(π) Π_V‖_max.
    pub fn invariance_residual(&self, rep: &PermutationRep) -> f64 {
        let proj = self.projector();
        rep.operators()
            .iter()
            .map(|p| {
                let moved = CMatrix::from_columns(
                    &(0..self.dim()).map(|k| p.apply(&self.basis.column(k).into_owned())).collect::<Vec<_>>(),
                );
                linalg::max_abs(&(&moved - &proj * &moved))
            })
            .fold(0.0, f64::max)
    }

    /// V† P(π) V.
    pub fn compressed(&self, op: &crate::hilbert::PermOperator) -> CMatrix {
        let moved = CMatrix::from_columns(
            &(0..self.dim()).map(|k| op.apply(&self.basis.column(k).into_owned())).collect::<Vec<_>>(),
        );
        self.basis.adjoint() * moved
    }

    /// Dimension of the commutant of the compressed representation; 1 for an
    /// irreducible subspace.
    pub fn commutant_dimension(&self, rep: &PermutationRep) -> Result<usize> {
        let mats = rep
            .group()
            .generators()
            .iter()
            .map(|g| Ok(self.compressed(rep.operator(g)?)))
            .collect::<Result<Vec<_>>>()?;
        if mats.is_empty() {
            // S_1: every subspace carries the trivial action
            return Ok(self.dim() * self.dim());
        }
        Ok(linalg::commutant_dimension(&mats, 1e-9))
    }
}

/// Splits an isotypic component into pairwise orthogonal generalised rays,
/// one per irreducible copy. Rank 0 gives an empty list.
pub fn generalised_rays(component: &IsotypicComponent, rep: &PermutationRep) -> Result<Vec<GeneralisedRay>> {
    generalised_rays_seeded(component, rep, DEFAULT_RAY_SEED)
}

pub fn generalised_rays_seeded(
    component: &IsotypicComponent,
    rep: &PermutationRep,
    seed: u64,
) -> Result<Vec<GeneralisedRay>> {
    let rank = component.rank();
    if rank == 0 {
        return Ok(Vec::new());
    }
    let m = component.irrep_dim;
    let basis = &component.basis;
    let mut last_err = None;
    for attempt in 0..RAY_ATTEMPTS {
        let mut sampler = Sampler::new(seed.wrapping_add(attempt));
        let h = sampler.hermitian(rank);
        let lifted = basis * h * basis.adjoint();
        let averaged = symmetriser::symmetrise_matrix(rep, &lifted, Strategy::default());
        let compressed = basis.adjoint() * averaged * basis;
        let compressed = (&compressed + compressed.adjoint()).unscale(2.0);
        let (values, vectors) = linalg::hermitian_eigen(&compressed);
        match cluster_copies(&values, m) {
            Ok(groups) => {
                let mut rays = Vec::with_capacity(groups.len());
                for start in groups {
                    let seed_vec: CVector = basis * vectors.column(start);
                    rays.push(orbit_ray(component, rep, &seed_vec)?);
                }
                return Ok(rays);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Groups ascending eigenvalues into runs of `m` equal values; returns the
/// start index of each run.
fn cluster_copies(values: &[f64], m: usize) -> Result<Vec<usize>> {
    let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let mut starts = Vec::new();
    for start in (0..values.len()).step_by(m) {
        let run = &values[start..start + m];
        if run[m - 1] - run[0] > 1e-8 * scale {
            return Err(Error::DecompositionFailure("copy eigenvalues do not cluster".into()));
        }
        if start > 0 && values[start] - values[start - 1] < 1e-6 * scale {
            return Err(Error::DecompositionFailure("copy eigenvalues nearly degenerate".into()));
        }
        starts.push(start);
    }
    Ok(starts)
}

fn orbit_ray(component: &IsotypicComponent, rep: &PermutationRep, seed: &CVector) -> Result<GeneralisedRay> {
    let orbit: Vec<CVector> = rep.operators().iter().map(|p| p.apply(seed)).collect();
    let span = linalg::orthonormalize(&orbit, EPS_RANK);
    if span.len() != component.irrep_dim {
        return Err(Error::DecompositionFailure(format!(
            "orbit spans {} dimensions, expected {}",
            span.len(),
            component.irrep_dim
        )));
    }
    let ray = GeneralisedRay {
        config: component.config,
        label: component.label.clone(),
        basis: linalg::columns_to_matrix(component.config.dim(), &span),
    };
    let residual = ray.invariance_residual(rep);
    if residual > EPS_RANK {
        return Err(Error::DecompositionFailure(format!("orbit does not close (residual {residual:e})")));
    }
    Ok(ray)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryType {
    Bosonic,
    Fermionic,
    Paraparticle,
    Skew,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub label: SymmetryType,
    /// ‖E_S v‖², ‖E_A v‖², ‖E_P v‖².
    pub norms: [f64; 3],
}

/// Sector weights of a state and its symmetry type.
pub fn classify_vector(v: &StateVector, sectors: &SectorProjectors) -> Result<Classification> {
    if v.config() != sectors.config {
        return Err(Error::SizeMismatch { expected: sectors.config.dim(), found: v.config().dim() });
    }
    let amp = v.amplitudes();
    let norms = sectors.family().map(|e| (e * amp).norm_squared());
    let labels = [SymmetryType::Bosonic, SymmetryType::Fermionic, SymmetryType::Paraparticle];
    let label = norms.iter().position(|&x| (x - 1.0).abs() <= EPS_ABS).map(|i| labels[i]).unwrap_or(SymmetryType::Skew);
    Ok(Classification { label, norms })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurReport {
    /// The scalar c with V† Q V = c I for each ray.
    pub scalars: Vec<f64>,
    pub max_residual: f64,
}

/// Checks that a symmetric quantity compresses to a multiple of the identity
/// on each generalised ray.
pub fn schur_check(q: &Observable, rays: &[GeneralisedRay], rep: &PermutationRep) -> Result<SchurReport> {
    if q.config() != rep.config() {
        return Err(Error::SizeMismatch { expected: rep.config().dim(), found: q.config().dim() });
    }
    let certified = rep.is_symmetric_operator(q);
    let mut scalars = Vec::with_capacity(rays.len());
    let mut max_residual = 0.0f64;
    for ray in rays {
        let block = ray.basis.adjoint() * q.matrix() * &ray.basis;
        let m = ray.dim();
        let c = linalg::trace(&block) / m as f64;
        let residual = linalg::max_abs_diff(&block, &(CMatrix::identity(m, m) * c));
        max_residual = max_residual.max(residual.max(c.im.abs()));
        scalars.push(c.re);
    }
    if certified && max_residual > EPS_ABS {
        return Err(Error::InternalConsistency(format!(
            "symmetric quantity is not scalar on a generalised ray (residual {max_residual:e})"
        )));
    }
    Ok(SchurReport { scalars, max_residual })
}

/// Every isotypic component with its generalised rays.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub sectors: SectorProjectors,
    pub components: Vec<(IsotypicComponent, Vec<GeneralisedRay>)>,
}

impl Decomposition {
    pub fn new(rep: &PermutationRep) -> Result<Self> {
        let table = CharacterTable::new(rep.config().n())?;
        let sectors = SectorProjectors::new(rep);
        let components = table
            .irreps()
            .iter()
            .map(|lambda| {
                let comp = isotypic_projector(lambda, rep, &table)?;
                let rays = generalised_rays(&comp, rep)?;
                Ok((comp, rays))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Decomposition { sectors, components })
    }

    pub fn rays(&self) -> impl Iterator<Item = &GeneralisedRay> {
        self.components.iter().flat_map(|(_, rays)| rays.iter())
    }

    /// Rays lying in the paraparticle sector.
    pub fn para_rays(&self) -> impl Iterator<Item = &GeneralisedRay> {
        let n = self.sectors.config().n();
        self.rays().filter(move |r| r.label() != [n] && r.label().iter().any(|&p| p != 1))
    }
}

/// Permutations that move a vector off its own ray.
pub fn non_fixing_permutations<'a>(
    rep: &'a PermutationRep,
    v: &'a StateVector,
) -> impl Iterator<Item = &'a Permutation> + 'a {
    rep.operators().iter().filter_map(move |p| {
        let moved = p.apply(v.amplitudes());
        let overlap = v.amplitudes().dotc(&moved).norm();
        ((overlap - 1.0).abs() > EPS_RANK).then(|| p.source())
    })
}
