//! Worked examples: two quantum coins, the Bloch picture of the
//! {|HT⟩, |TH⟩} span, the three-particle generalised ray, and two toy
//! theories of who-does-what.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_rational::Rational64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hilbert::{AsOperator, AssemblyConfig, DensityOperator, Observable, PermutationRep, StateVector};
use crate::linalg::{self, c, CMatrix, CVector, EPS_ABS, ZERO};
use crate::models::{permute_class, FiniteModel, Theory};
use crate::sampling::Sampler;
use crate::sectors::{self, SectorProjectors};
use crate::symgroup::{CharacterTable, Permutation};
use crate::symmetriser;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinMeasure {
    Bose,
    MaxwellBoltzmann,
    FermiDirac,
}

/// Outcome probabilities as exact fractions, in a fixed outcome order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatisticsReport {
    pub outcomes: Vec<(String, Rational64)>,
}

impl StatisticsReport {
    pub fn probability(&self, label: &str) -> Option<Rational64> {
        self.outcomes.iter().find(|(l, _)| l == label).map(|(_, p)| *p)
    }

    pub fn total(&self) -> Rational64 {
        self.outcomes.iter().map(|(_, p)| *p).sum()
    }
}

/// Serialises as `{"HH": "1/3", ...}` in outcome order.
impl Serialize for StatisticsReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.outcomes.len()))?;
        for (label, p) in &self.outcomes {
            map.serialize_entry(label, &p.to_string())?;
        }
        map.end()
    }
}

const COIN_FACES: [char; 2] = ['H', 'T'];

/// Uniform counting measure over the basis outcomes of two coins: the
/// occupation-number basis of the symmetric sector (Bose), the product basis
/// (Maxwell–Boltzmann) or the antisymmetric sector (Fermi–Dirac).
pub fn coin_statistics(measure: CoinMeasure) -> StatisticsReport {
    let label = |faces: &[usize]| -> String {
        if faces.windows(2).all(|w| w[0] == w[1]) {
            faces.iter().map(|&f| COIN_FACES[f]).collect()
        } else {
            "mixed".to_string()
        }
    };
    let outcomes: Vec<String> = match measure {
        CoinMeasure::MaxwellBoltzmann => {
            crate::models::all_tuples(2, 2).into_iter().map(|t| t.iter().map(|&f| COIN_FACES[f]).collect()).collect()
        }
        // non-decreasing face lists are the multisets
        CoinMeasure::Bose => crate::models::all_tuples(2, 2)
            .into_iter()
            .filter(|t| t.windows(2).all(|w| w[0] <= w[1]))
            .map(|t| label(&t))
            .collect(),
        CoinMeasure::FermiDirac => crate::models::all_tuples(2, 2)
            .into_iter()
            .filter(|t| t.windows(2).all(|w| w[0] < w[1]))
            .map(|t| label(&t))
            .collect(),
    };
    let p = Rational64::new(1, outcomes.len() as i64);
    StatisticsReport { outcomes: outcomes.into_iter().map(|o| (o, p)).collect() }
}

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Riemann {
    Finite(Complex64),
    Infinity,
}

/// Coordinates of a two-coin state ξ|HT⟩ + η|TH⟩ in the symmetry basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    pub z: Riemann,
    /// Probability of the state being bosonic.
    pub p: f64,
    /// ⟨ψ_a|W|ψ_s⟩.
    pub q: Complex64,
    /// Height above the South pole, 2p.
    pub height: f64,
    /// Vertical projection onto the equatorial plane, 2q.
    pub planar: Complex64,
}

impl BlochPoint {
    /// Cartesian coordinates on the unit sphere (x, y, up).
    pub fn sphere(&self) -> [f64; 3] {
        [self.planar.re, self.planar.im, self.height - 1.0]
    }
}

pub fn bloch_point(xi: Complex64, eta: Complex64) -> Result<BlochPoint> {
    if xi == ZERO && eta == ZERO {
        return Err(Error::DegenerateInput("both amplitudes are zero".into()));
    }
    let sum = xi + eta;
    if sum == ZERO {
        return Ok(BlochPoint { z: Riemann::Infinity, p: 0.0, q: ZERO, height: 0.0, planar: ZERO });
    }
    let z = (xi - eta) / sum;
    Ok(point_from_z(z))
}

/// The ray with ψ_s-amplitude 1 and ψ_a-amplitude z.
pub fn point_from_z(z: Complex64) -> BlochPoint {
    let denom = 1.0 + z.norm_sqr();
    let p = 1.0 / denom;
    let q = z / denom;
    BlochPoint { z: Riemann::Finite(z), p, q, height: 2.0 * p, planar: q * 2.0 }
}

/// |ψ_s⟩ and |ψ_a⟩ in the two-coin assembly (H = 0, T = 1).
pub fn symmetry_basis() -> (StateVector, StateVector) {
    let config = AssemblyConfig::new(2, 2).expect("valid");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi_s = CVector::from_vec(vec![ZERO, c(s, 0.0), c(s, 0.0), ZERO]);
    let psi_a = CVector::from_vec(vec![ZERO, c(s, 0.0), c(-s, 0.0), ZERO]);
    (StateVector::new(config, psi_s).expect("unit"), StateVector::new(config, psi_a).expect("unit"))
}

/// W = [[p, q*], [q, 1 − p]] in the basis (ψ_s, ψ_a).
#[derive(Debug, Clone, PartialEq)]
pub struct BlochDensity {
    pub matrix: CMatrix,
    /// q = 0: a mixture of the bosonic and fermionic rays.
    pub symmetric: bool,
}

pub fn bloch_density(p: f64, q: Complex64) -> Result<BlochDensity> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::NotAState(format!("p = {p} outside [0, 1]")));
    }
    let bound = (p * (1.0 - p)).sqrt();
    if q.norm() > bound + EPS_ABS {
        return Err(Error::NotAState(format!("|q| = {} exceeds sqrt(p(1-p)) = {bound}", q.norm())));
    }
    let matrix = CMatrix::from_row_slice(2, 2, &[c(p, 0.0), q.conj(), q, c(1.0 - p, 0.0)]);
    Ok(BlochDensity { matrix, symmetric: q.norm() <= EPS_ABS })
}

/// Embeds a symmetry-basis 2×2 operator into the 4-dimensional assembly.
pub fn lift_to_assembly(m: &CMatrix) -> CMatrix {
    let (s, a) = symmetry_basis();
    let u = CMatrix::from_columns(&[s.amplitudes().clone(), a.amplitudes().clone()]);
    &u * m * u.adjoint()
}

/// Whether two states with equal p agree on every symmetric quantity. The
/// symmetric quantities on the span are the diagonal ones in the symmetry
/// basis.
pub fn bloch_slice_equivalence(p: f64, q1: Complex64, q2: Complex64) -> Result<bool> {
    bloch_pair_equivalence((p, q1), (p, q2))
}

/// As [`bloch_slice_equivalence`] for arbitrary (p, q) pairs.
pub fn bloch_pair_equivalence(a: (f64, Complex64), b: (f64, Complex64)) -> Result<bool> {
    let w1 = bloch_density(a.0, a.1)?.matrix;
    let w2 = bloch_density(b.0, b.1)?.matrix;
    let diag = |x: f64, y: f64| CMatrix::from_diagonal(&CVector::from_vec(vec![c(x, 0.0), c(y, 0.0)]));
    for q in [diag(1.0, 0.0), diag(0.0, 1.0)] {
        let e1 = linalg::trace_of_product(&w1, &q);
        let e2 = linalg::trace_of_product(&w2, &q);
        if (e1 - e2).norm() > EPS_ABS {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig3Report {
    /// Each swap acts on span{|ααβ⟩,|αβα⟩,|βαα⟩} as the stated reflection.
    pub reflection_residual: f64,
    /// Every permutation fixes |ααβ⟩+|αβα⟩+|βαα⟩.
    pub symmetric_ray_residual: f64,
    /// Number and dimension of generalised rays orthogonal to the symmetric
    /// ray inside the subspace.
    pub plane_count: usize,
    pub plane_dim: usize,
    pub plane_invariance_residual: f64,
    pub plane_orthogonality_residual: f64,
    pub plane_commutant_dim: usize,
    /// ‖E_A Π‖ on the subspace.
    pub fermionic_weight: f64,
    /// Distance between the plane projector and the span of six permutes of
    /// sampled rays in it; `permute_span_dim` is the largest such span.
    pub permute_span_residual: f64,
    pub permute_span_dim: usize,
    /// Spread of ⟨v|Q|v⟩ over sampled rays v in the plane, for sampled
    /// symmetric Q.
    pub expectation_spread: f64,
    pub schur_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn ket3(digits: &[usize]) -> CVector {
    StateVector::basis(AssemblyConfig::new(3, 2).expect("valid"), digits).expect("valid label").into_amplitudes()
}

fn unit(v: CVector) -> CVector {
    let n = v.norm();
    v.unscale(n)
}

/// Three particles, two levels α = 0, β = 1: the subspace spanned by
/// |ααβ⟩, |αβα⟩, |βαα⟩ and its decomposition into a symmetric ray and a
/// generalised ray.
pub fn fig3_analysis(seed: u64) -> Result<Fig3Report> {
    let config = AssemblyConfig::new(3, 2)?;
    let rep = PermutationRep::new(config)?;
    let (aab, aba, baa) = (ket3(&[0, 0, 1]), ket3(&[0, 1, 0]), ket3(&[1, 0, 0]));
    let subspace = CMatrix::from_columns(&[aab.clone(), aba.clone(), baa.clone()]);

    // (swap, normal to its mirror plane)
    let swaps = [((1, 2), unit(&aba - &baa)), ((2, 3), unit(&aab - &aba)), ((1, 3), unit(&aab - &baa))];
    let mut reflection_residual = 0.0f64;
    for ((i, j), normal) in &swaps {
        let op = rep.operator(&Permutation::transposition(3, *i, *j)?)?;
        let mirror = CMatrix::identity(8, 8) - (normal * normal.adjoint()) * c(2.0, 0.0);
        let acted =
            CMatrix::from_columns(&(0..3).map(|k| op.apply(&subspace.column(k).into_owned())).collect::<Vec<_>>());
        reflection_residual = reflection_residual.max(linalg::max_abs_diff(&acted, &(&mirror * &subspace)));
    }

    let sym_ray = unit(&aab + &aba + &baa);
    let symmetric_ray_residual =
        rep.operators().iter().map(|p| (p.apply(&sym_ray) - &sym_ray).camax()).fold(0.0, f64::max);

    let table = CharacterTable::new(3)?;
    let standard = sectors::isotypic_projector(&[2, 1], &rep, &table)?.restricted_to(&rep, &subspace)?;
    let rays = sectors::generalised_rays(&standard, &rep)?;
    let plane_count = rays.len();
    let Some(plane) = rays.first() else {
        return Err(Error::DecompositionFailure("no generalised ray in the subspace".into()));
    };
    let plane_dim = plane.dim();
    let plane_invariance_residual = plane.invariance_residual(&rep);
    let plane_orthogonality_residual = (plane.basis().adjoint() * &sym_ray).camax();
    let plane_commutant_dim = plane.commutant_dimension(&rep)?;

    let sectors = SectorProjectors::new(&rep);
    let fermionic_weight = linalg::max_abs(&(&sectors.antisym * &subspace));

    let mut sampler = Sampler::new(seed);
    let plane_proj = plane.projector();
    let mut permute_span_residual = 0.0f64;
    let mut permute_span_dim = 0;
    for _ in 0..10 {
        let v = sampler.unit_in_span(plane.basis());
        let permutes: Vec<CVector> = rep.operators().iter().map(|p| p.apply(&v)).collect();
        let span = linalg::orthonormalize(&permutes, 1e-8);
        permute_span_dim = permute_span_dim.max(span.len());
        let proj = linalg::span_projector(&linalg::columns_to_matrix(8, &span));
        permute_span_residual = permute_span_residual.max(linalg::max_abs_diff(&proj, &plane_proj));
    }

    let mut expectation_spread = 0.0f64;
    let mut schur_residual = 0.0f64;
    for _ in 0..10 {
        let q = symmetriser::symmetrise_observable(&rep, &sampler.observable(config))?;
        let report = sectors::schur_check(&q, std::slice::from_ref(plane), &rep)?;
        schur_residual = schur_residual.max(report.max_residual);
        let values: Vec<f64> = (0..10)
            .map(|_| {
                let v = sampler.unit_in_span(plane.basis());
                v.dotc(&(q.matrix() * &v)).re
            })
            .collect();
        let (lo, hi) = values.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        expectation_spread = expectation_spread.max(hi - lo);
    }

    let tol = EPS_ABS;
    let passed = reflection_residual <= tol
        && symmetric_ray_residual <= tol
        && plane_count == 1
        && plane_dim == 2
        && plane_invariance_residual <= tol
        && plane_orthogonality_residual <= tol
        && plane_commutant_dim == 1
        && fermionic_weight <= tol
        && permute_span_dim == 2
        && permute_span_residual <= tol
        && expectation_spread <= tol
        && schur_residual <= tol;
    Ok(Fig3Report {
        reflection_residual,
        symmetric_ray_residual,
        plane_count,
        plane_dim,
        plane_invariance_residual,
        plane_orthogonality_residual,
        plane_commutant_dim,
        fermionic_weight,
        permute_span_residual,
        permute_span_dim,
        expectation_spread,
        schur_residual,
        tolerance: tol,
        passed,
    })
}

const WORKERS: [&str; 3] = ["a1", "a2", "a3"];

fn unary_model(relations: &[(&str, &[usize])]) -> FiniteModel {
    let domain: Vec<String> = WORKERS.iter().map(|s| s.to_string()).collect();
    let rels = relations
        .iter()
        .map(|(name, members)| {
            let tuples = members.iter().map(|&m| vec![m]);
            (name.to_string(), crate::models::Relation::new(1, tuples))
        })
        .collect();
    FiniteModel::new(domain, rels).expect("valid model")
}

/// Renovators: three workers, one wiring, one plumbing, one painting; the
/// condition "house restored" selects every assignment of roles.
/// Scribes: every scribe copies the text, or none does.
pub fn toy_theories() -> (Theory, Theory) {
    let base = unary_model(&[("Paints", &[2]), ("Plumbs", &[1]), ("Wires", &[0])]);
    let idle = unary_model(&[("Paints", &[]), ("Plumbs", &[]), ("Wires", &[])]);
    let mut space: Vec<FiniteModel> = permute_class(&base).expect("small domain").into_iter().collect();
    let restored: BTreeSet<usize> = (0..space.len()).collect();
    space.push(idle);
    let idle_idx = space.len() - 1;
    let renovators = Theory::new(
        space,
        BTreeMap::from([("house_restored".to_string(), restored), ("strike".to_string(), BTreeSet::from([idle_idx]))]),
    )
    .expect("well formed");

    let all_copy = unary_model(&[("Copies", &[0, 1, 2])]);
    let none_copy = unary_model(&[("Copies", &[])]);
    let one_copy = unary_model(&[("Copies", &[0])]);
    let mut space = vec![all_copy, none_copy];
    space.extend(permute_class(&one_copy).expect("small domain"));
    let scribes = Theory::new(
        space,
        BTreeMap::from([("manuscript".to_string(), BTreeSet::from([0])), ("vespers".to_string(), BTreeSet::from([1]))]),
    )
    .expect("well formed");
    (renovators, scribes)
}

/// Every permute P W P† of a state lies in its ~-class.
pub fn orbit_is_sim_class(rep: &PermutationRep, w: &DensityOperator) -> Result<bool> {
    for p in rep.operators() {
        let moved = DensityOperator::new(w.config(), p.conjugate(w.matrix()))?;
        if !symmetriser::sim_equivalent(rep, w, &moved)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Expectation of a symmetry-basis quantity Q in state W, both 2×2.
pub fn bloch_expectation(w: &CMatrix, q: &CMatrix) -> f64 {
    linalg::trace_of_product(w, q).re
}

/// The Hermitian Q on the two-coin assembly built from a symmetry-basis
/// matrix.
pub fn lifted_observable(q: &CMatrix) -> Result<Observable> {
    Observable::new(AssemblyConfig::new(2, 2)?, lift_to_assembly(q))
}
