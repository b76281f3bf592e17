//! The symmetriser Σ(A) = (1/n!) Σ_π P(π) A P(π)† and what follows from it:
//! ~-equivalence, the two trace identities, superselection and the SP/IP
//! predicates.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::hilbert::{
    real_trace_of_product, AsOperator, AssemblyConfig, DensityOperator, Observable, Operator, PermutationRep,
    StateVector,
};
use crate::linalg::{self, CMatrix, EPS_ABS};
use crate::par::{chunked_fold, map_ordered, Strategy};
use crate::sampling::Sampler;
use crate::sectors::SectorProjectors;
use crate::symgroup::Permutation;

/// Σ applied to a raw matrix.
pub fn symmetrise_matrix(rep: &PermutationRep, a: &CMatrix, strategy: Strategy) -> CMatrix {
    let dim = rep.config().dim();
    let ops = rep.operators();
    let weight = Complex64::from(1.0 / ops.len() as f64);
    chunked_fold(
        strategy,
        ops.len(),
        || CMatrix::zeros(dim, dim),
        |acc, i| ops[i].conjugate_add(a, weight, acc),
        |x, y| x + y,
    )
}

fn check_config(rep: &PermutationRep, config: AssemblyConfig) -> Result<()> {
    if rep.config() != config {
        return Err(Error::SizeMismatch { expected: rep.config().dim(), found: config.dim() });
    }
    Ok(())
}

pub fn symmetrise(rep: &PermutationRep, a: &impl AsOperator) -> Result<Operator> {
    check_config(rep, a.config())?;
    Operator::new(a.config(), symmetrise_matrix(rep, a.matrix(), Strategy::default()))
}

/// Σ(W), which is again a density operator.
pub fn symmetrise_density(rep: &PermutationRep, w: &DensityOperator) -> Result<DensityOperator> {
    DensityOperator::from_operator(symmetrise(rep, w)?)
}

pub fn symmetrise_observable(rep: &PermutationRep, q: &Observable) -> Result<Observable> {
    let s = symmetrise(rep, q)?.into_matrix();
    // restore exact hermiticity lost to summation order
    let s = (&s + s.adjoint()).unscale(2.0);
    Observable::new(q.config(), s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectorReport {
    pub samples: usize,
    /// max ‖Σ(Σ(A)) − Σ(A)‖_max
    pub idempotence_residual: f64,
    /// max |⟨A, Σ(B)⟩_HS − ⟨Σ(A), B⟩_HS|
    pub hs_residual: f64,
}

impl ProjectorReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.idempotence_residual <= tol && self.hs_residual <= tol
    }
}

/// Checks that Σ is an orthogonal projector on End(H) with respect to the
/// Hilbert–Schmidt form, on random complex pairs (A, B).
pub fn is_projector_on_operator_space(rep: &PermutationRep, samples: usize, seed: u64) -> ProjectorReport {
    let dim = rep.config().dim();
    let mut sampler = Sampler::new(seed);
    let pairs: Vec<(CMatrix, CMatrix)> =
        (0..samples).map(|_| (sampler.gaussian_matrix(dim, dim), sampler.gaussian_matrix(dim, dim))).collect();
    let strategy = Strategy::default();
    let residuals = map_ordered(strategy, samples, |i| {
        let (a, b) = &pairs[i];
        let sa = symmetrise_matrix(rep, a, Strategy::Sequential);
        let ssa = symmetrise_matrix(rep, &sa, Strategy::Sequential);
        let sb = symmetrise_matrix(rep, b, Strategy::Sequential);
        let idem = linalg::max_abs_diff(&ssa, &sa);
        let hs = (linalg::hs_inner(a, &sb) - linalg::hs_inner(&sa, b)).norm();
        (idem, hs)
    });
    residuals.into_iter().fold(
        ProjectorReport { samples, idempotence_residual: 0.0, hs_residual: 0.0 },
        |r, (idem, hs)| ProjectorReport {
            samples,
            idempotence_residual: r.idempotence_residual.max(idem),
            hs_residual: r.hs_residual.max(hs),
        },
    )
}

/// E_S A E_S + E_A A E_A + E_P A E_P.
pub fn block_truncate(a: &impl AsOperator, sectors: &SectorProjectors) -> Result<Operator> {
    if a.config() != sectors.config() {
        return Err(Error::SizeMismatch { expected: sectors.config().dim(), found: a.config().dim() });
    }
    let m = a.matrix();
    let out = sectors.family().iter().fold(CMatrix::zeros(m.nrows(), m.ncols()), |acc, e| acc + *e * m * *e);
    Operator::new(a.config(), out)
}

/// A ~-class, represented by its Σ-image.
#[derive(Debug, Clone)]
pub struct SymClass {
    pub canonical: Operator,
    pub member_hint: Option<Operator>,
}

impl SymClass {
    pub fn of(rep: &PermutationRep, a: &impl AsOperator) -> Result<Self> {
        let canonical = symmetrise(rep, a)?;
        Ok(SymClass { canonical, member_hint: Some(Operator::new(a.config(), a.matrix().clone())?) })
    }

    pub fn contains(&self, rep: &PermutationRep, a: &impl AsOperator) -> Result<bool> {
        let image = symmetrise(rep, a)?;
        Ok(self.canonical.distance(&image)? <= EPS_ABS)
    }
}

/// A1 ~ A2 iff Σ(A1) = Σ(A2).
pub fn sim_equivalent(rep: &PermutationRep, a1: &impl AsOperator, a2: &impl AsOperator) -> Result<bool> {
    check_config(rep, a2.config())?;
    SymClass::of(rep, a1)?.contains(rep, a2)
}

/// |Tr(Σ(W) Q) − Tr(Σ(W) Σ(Q))|.
pub fn verify_identity_a(rep: &PermutationRep, w: &DensityOperator, q: &Observable) -> Result<f64> {
    check_config(rep, w.config())?;
    check_config(rep, q.config())?;
    let sw = symmetrise_matrix(rep, w.matrix(), Strategy::Sequential);
    let sq = symmetrise_matrix(rep, q.matrix(), Strategy::Sequential);
    let lhs = real_trace_of_product(&sw, q.matrix())?;
    let rhs = real_trace_of_product(&sw, &sq)?;
    Ok((lhs - rhs).abs())
}

/// |Tr(W Σ(Q)) − Tr(Σ(W) Σ(Q))|.
pub fn verify_identity_b(rep: &PermutationRep, w: &DensityOperator, q: &Observable) -> Result<f64> {
    check_config(rep, w.config())?;
    check_config(rep, q.config())?;
    let sw = symmetrise_matrix(rep, w.matrix(), Strategy::Sequential);
    let sq = symmetrise_matrix(rep, q.matrix(), Strategy::Sequential);
    let lhs = real_trace_of_product(w.matrix(), &sq)?;
    let rhs = real_trace_of_product(&sw, &sq)?;
    Ok((lhs - rhs).abs())
}

/// Σ_α E_α W E_α for a complete orthogonal family of projectors.
pub fn superselect(w: &DensityOperator, family: &[CMatrix]) -> Result<DensityOperator> {
    let dim = w.config().dim();
    let mut total = CMatrix::zeros(dim, dim);
    for (i, e) in family.iter().enumerate() {
        if e.nrows() != dim || e.ncols() != dim {
            return Err(Error::SizeMismatch { expected: dim, found: e.nrows() });
        }
        let idem = linalg::max_abs_diff(&(e * e), e).max(linalg::hermiticity_residual(e));
        if idem > EPS_ABS {
            return Err(Error::Precondition(format!("family member {i} is not an orthogonal projector")));
        }
        for (j, f) in family.iter().enumerate().skip(i + 1) {
            if linalg::max_abs(&(e * f)) > EPS_ABS {
                return Err(Error::Precondition(format!("family members {i} and {j} are not orthogonal")));
            }
        }
        total += e;
    }
    if linalg::max_abs_diff(&total, &CMatrix::identity(dim, dim)) > EPS_ABS {
        return Err(Error::Precondition("projector family does not sum to the identity".into()));
    }
    let m = w.matrix();
    let out = family.iter().fold(CMatrix::zeros(dim, dim), |acc, e| acc + e * m * e);
    DensityOperator::new(w.config(), out)
}

/// W is a mixture of bosonic and fermionic rays: support inside
/// ran(E_S) ⊕ ran(E_A) and commuting with every P(π).
pub fn satisfies_sp(rep: &PermutationRep, sectors: &SectorProjectors, w: &DensityOperator) -> Result<bool> {
    check_config(rep, w.config())?;
    let para_weight = linalg::max_abs(&(&sectors.para * w.matrix()));
    Ok(para_weight <= EPS_ABS && rep.is_symmetric_operator(w))
}

/// Expectations of every listed quantity are invariant under W ↦ P W P†.
pub fn satisfies_ip(rep: &PermutationRep, w: &DensityOperator, qs: &[Observable]) -> Result<bool> {
    check_config(rep, w.config())?;
    for q in qs {
        check_config(rep, q.config())?;
        let base = real_trace_of_product(w.matrix(), q.matrix())?;
        for p in rep.operators() {
            let moved = p.conjugate(w.matrix());
            if (real_trace_of_product(&moved, q.matrix())? - base).abs() > EPS_ABS {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Maximum residuals of the sampled identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub identity_a: f64,
    pub identity_b: f64,
    /// |Tr(superselect(W) Σ(Q)) − Tr(W Σ(Q))| with the family {E_S, E_A, E_P}.
    pub superselection: f64,
    pub trace_cyclicity: f64,
    pub passed: bool,
}

/// Samples `samples` pairs (W, Q) from `seed` and evaluates both trace
/// identities, superselection invariance and trace cyclicity under
/// conjugation.
pub fn verify_identities(config: AssemblyConfig, samples: usize, seed: u64, tolerance: f64) -> Result<IdentityReport> {
    verify_identities_with(config, samples, seed, tolerance, Strategy::default())
}

pub fn verify_identities_with(
    config: AssemblyConfig,
    samples: usize,
    seed: u64,
    tolerance: f64,
    strategy: Strategy,
) -> Result<IdentityReport> {
    let rep = PermutationRep::new(config)?;
    let sectors = SectorProjectors::new(&rep);
    let family = [sectors.sym.clone(), sectors.antisym.clone(), sectors.para.clone()];
    let mut sampler = Sampler::new(seed);
    let pairs: Vec<(DensityOperator, Observable)> =
        (0..samples).map(|_| (sampler.density(config), sampler.observable(config))).collect();
    let rows = map_ordered(strategy, samples, |i| -> Result<[f64; 4]> {
        let (w, q) = &pairs[i];
        let a = verify_identity_a(&rep, w, q)?;
        let b = verify_identity_b(&rep, w, q)?;
        let sq = symmetrise_observable(&rep, q)?;
        let cut = superselect(w, &family)?;
        let s =
            (real_trace_of_product(cut.matrix(), sq.matrix())? - real_trace_of_product(w.matrix(), sq.matrix())?).abs();
        let mut cyc = 0.0f64;
        for p in rep.operators() {
            let lhs = linalg::trace_of_product(&p.conjugate(w.matrix()), q.matrix());
            let back = p.matrix().adjoint() * q.matrix() * p.matrix();
            let rhs = linalg::trace_of_product(w.matrix(), &back);
            cyc = cyc.max((lhs - rhs).norm());
        }
        Ok([a, b, s, cyc])
    });
    let mut worst = [0.0f64; 4];
    for row in rows {
        let row = row?;
        for k in 0..4 {
            worst[k] = worst[k].max(row[k]);
        }
    }
    Ok(IdentityReport {
        n: config.n(),
        d: config.d(),
        samples,
        seed,
        tolerance,
        identity_a: worst[0],
        identity_b: worst[1],
        superselection: worst[2],
        trace_cyclicity: worst[3],
        passed: worst.iter().all(|&r| r <= tolerance),
    })
}

/// A state moved by a permutation yet indistinguishable from its permute by
/// any symmetric quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnderdetMixReport {
    pub permutation: String,
    /// max |P W P† − W|.
    pub displacement: f64,
    /// max |Σ(P W P†) − Σ(W)|.
    pub sigma_gap: f64,
    pub passed: bool,
}

/// n = 2, d = 2: W = 0.7 |HT⟩⟨HT| + 0.3 |HH⟩⟨HH| against its swap.
pub fn underdet_mix() -> Result<UnderdetMixReport> {
    let config = AssemblyConfig::new(2, 2)?;
    let rep = PermutationRep::new(config)?;
    let w = DensityOperator::from_mixture(&[
        (0.7, StateVector::basis(config, &[0, 1])?),
        (0.3, StateVector::basis(config, &[0, 0])?),
    ])?;
    let swap = Permutation::transposition(2, 1, 2)?;
    let moved = DensityOperator::new(config, rep.operator(&swap)?.conjugate(w.matrix()))?;
    let displacement = linalg::max_abs_diff(moved.matrix(), w.matrix());
    let sigma_gap = symmetrise(&rep, &moved)?.distance(&symmetrise(&rep, &w)?)?;
    Ok(UnderdetMixReport {
        permutation: swap.cycle_string(),
        displacement,
        sigma_gap,
        passed: displacement > EPS_ABS && sigma_gap <= EPS_ABS,
    })
}

/// A paraparticle ray not fixed by a permutation, and the ~-equivalence of
/// every unit vector in its generalised ray.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnderdetPureReport {
    pub permutation: String,
    /// |⟨v|P v⟩|; below 1 when P v is a different ray.
    pub overlap: f64,
    /// max |Σ(|u⟩⟨u|) − Π_V / dim V| over the probe vectors u in V.
    pub scalar_residual: f64,
    /// max |Σ(|u⟩⟨u|) − Σ(|v⟩⟨v|)| over the probes.
    pub sigma_gap: f64,
    pub probes: usize,
    pub passed: bool,
}

/// n = 3, d = 2: V = span{|αβα⟩ − |βαα⟩, |ααβ⟩ − |αβα⟩}, v = |αβα⟩ − |βαα⟩
/// and P = P((2 3)).
pub fn underdet_pure() -> Result<UnderdetPureReport> {
    let config = AssemblyConfig::new(3, 2)?;
    let rep = PermutationRep::new(config)?;
    let ket = |digits: &[usize]| StateVector::basis(config, digits).map(StateVector::into_amplitudes);
    let (aab, aba, baa) = (ket(&[0, 0, 1])?, ket(&[0, 1, 0])?, ket(&[1, 0, 0])?);
    let v = StateVector::normalized(config, &aba - &baa)?;
    let other = &aab - &aba;
    let plane =
        linalg::columns_to_matrix(config.dim(), &linalg::orthonormalize(&[v.amplitudes().clone(), other], 1e-8));
    let plane_proj = linalg::span_projector(&plane) / Complex64::new(plane.ncols() as f64, 0.0);

    let pi = Permutation::transposition(3, 2, 3)?;
    let moved = rep.operator(&pi)?.apply_state(&v)?;
    let overlap = v.inner(&moved).norm();

    let sigma_v = symmetrise(&rep, &v.projector())?;
    let mut probes: Vec<StateVector> = vec![v.clone(), moved];
    for (a, b) in [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8), (FRAC_1_SQRT_2, -FRAC_1_SQRT_2)] {
        let u = plane.column(0) * Complex64::new(a, 0.0) + plane.column(1) * Complex64::new(0.0, b);
        probes.push(StateVector::normalized(config, u)?);
    }
    let mut scalar_residual = 0.0f64;
    let mut sigma_gap = 0.0f64;
    for u in &probes {
        let sigma_u = symmetrise(&rep, &u.projector())?;
        scalar_residual = scalar_residual.max(linalg::max_abs_diff(sigma_u.matrix(), &plane_proj));
        sigma_gap = sigma_gap.max(sigma_u.distance(&sigma_v)?);
    }
    Ok(UnderdetPureReport {
        permutation: pi.cycle_string(),
        overlap,
        scalar_residual,
        sigma_gap,
        probes: probes.len(),
        passed: overlap < 1.0 - EPS_ABS && scalar_residual <= EPS_ABS && sigma_gap <= EPS_ABS,
    })
}

/// For a candidate Hamiltonian H, a rank-one state W whose H-expectation
/// changes under some W ↦ P W P†. None iff H commutes with every P(π).
/// Probes |e_i⟩, |e_i⟩ + |e_j⟩ and |e_i⟩ + i|e_j⟩, whose projectors span the
/// Hermitian operators.
pub fn ip_violation_for(rep: &PermutationRep, h: &Observable) -> Result<Option<DensityOperator>> {
    check_config(rep, h.config())?;
    let config = rep.config();
    let dim = config.dim();
    let qs = std::slice::from_ref(h);
    for i in 0..dim {
        for j in i..dim {
            let phases: &[Complex64] = if i == j {
                &[Complex64::new(0.0, 0.0)]
            } else {
                &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]
            };
            for &phase in phases {
                let mut amps = crate::linalg::CVector::zeros(dim);
                amps[i] = Complex64::new(1.0, 0.0);
                amps[j] += phase;
                let w = StateVector::normalized(config, amps)?.projector();
                if !satisfies_ip(rep, &w, qs)? {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVector, ZERO};

    fn rep(n: usize, d: usize) -> PermutationRep {
        PermutationRep::new(AssemblyConfig::new(n, d).unwrap()).unwrap()
    }

    fn sym_basis(config: AssemblyConfig) -> (StateVector, StateVector) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi_s = StateVector::new(config, CVector::from_vec(vec![ZERO, c(s, 0.0), c(s, 0.0), ZERO])).unwrap();
        let psi_a = StateVector::new(config, CVector::from_vec(vec![ZERO, c(s, 0.0), c(-s, 0.0), ZERO])).unwrap();
        (psi_s, psi_a)
    }

    fn half_half(config: AssemblyConfig) -> CMatrix {
        let (s, a) = sym_basis(config);
        (s.projector().matrix() + a.projector().matrix()).unscale(2.0)
    }

    #[test]
    fn symmetrise_examples() {
        let r = rep(2, 2);
        let config = r.config();
        let id = Operator::identity(config);
        assert!(symmetrise(&r, &id).unwrap().distance(&id).unwrap() < 1e-15);
        let ht = StateVector::basis(config, &[0, 1]).unwrap().projector();
        let s = symmetrise(&r, &ht).unwrap();
        assert!(linalg::max_abs_diff(s.matrix(), &half_half(config)) < 1e-15);
        let sym = Operator::new(config, half_half(config)).unwrap();
        assert!(symmetrise(&r, &sym).unwrap().distance(&sym).unwrap() < 1e-15);
    }

    #[test]
    fn symmetriser_is_hs_projector() {
        let report = is_projector_on_operator_space(&rep(3, 2), 20, 11);
        assert!(report.passed(1e-10), "{report:?}");
    }

    #[test]
    fn block_truncation_examples() {
        let r = rep(2, 2);
        let config = r.config();
        let sectors = SectorProjectors::new(&r);
        let sym = Operator::new(config, half_half(config)).unwrap();
        assert!(block_truncate(&sym, &sectors).unwrap().distance(&sym).unwrap() < 1e-15);
        let (s, a) = sym_basis(config);
        let cross = Operator::outer(&s, &a).unwrap();
        assert!(linalg::max_abs(block_truncate(&cross, &sectors).unwrap().matrix()) < 1e-15);
        let ht = StateVector::basis(config, &[0, 1]).unwrap().projector();
        let cut = block_truncate(&ht, &sectors).unwrap();
        assert!(linalg::max_abs_diff(cut.matrix(), &half_half(config)) < 1e-15);
    }

    #[test]
    fn sim_equivalence_examples() {
        let r = rep(2, 2);
        let config = r.config();
        let ht = StateVector::basis(config, &[0, 1]).unwrap().projector();
        let th = StateVector::basis(config, &[1, 0]).unwrap().projector();
        assert!(sim_equivalent(&r, &ht, &th).unwrap());
        let (s, a) = sym_basis(config);
        assert!(!sim_equivalent(&r, &s.projector(), &a.projector()).unwrap());

        let phased = |theta: f64| {
            let v = s.amplitudes() + a.amplitudes() * Complex64::from_polar(1.0, theta);
            StateVector::normalized(config, v).unwrap().projector()
        };
        let thetas = [0.0, std::f64::consts::FRAC_PI_3, std::f64::consts::PI];
        for &x in &thetas {
            for &y in &thetas {
                assert!(sim_equivalent(&r, &phased(x), &phased(y)).unwrap());
            }
        }
    }

    #[test]
    fn identity_examples() {
        let r = rep(2, 2);
        let config = r.config();
        let w = DensityOperator::maximally_mixed(config);
        let q = Observable::new(config, w.matrix().clone()).unwrap();
        assert_eq!(verify_identity_a(&r, &w, &q).unwrap(), 0.0);

        let r3 = rep(3, 2);
        let sectors = SectorProjectors::new(&r3);
        let dec = crate::sectors::Decomposition::new(&r3).unwrap();
        let ray = dec.para_rays().next().unwrap();
        let w = ray.vector(0).unwrap().projector();
        let ep = Observable::new(r3.config(), sectors.para.clone()).unwrap();
        assert!(verify_identity_b(&r3, &w, &ep).unwrap() < 1e-14);
        assert!((crate::hilbert::expectation(&w, &ep).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn superselect_examples() {
        let r = rep(2, 2);
        let config = r.config();
        let sectors = SectorProjectors::new(&r);
        let family = [sectors.sym.clone(), sectors.antisym.clone(), sectors.para.clone()];
        let block = DensityOperator::new(config, half_half(config)).unwrap();
        let cut = superselect(&block, &family).unwrap();
        assert!(linalg::max_abs_diff(cut.matrix(), block.matrix()) < 1e-15);

        let (s, a) = sym_basis(config);
        let (c1, c2) = (c(0.6, 0.0), c(0.0, 0.8));
        let phi = StateVector::new(config, s.amplitudes() * c1 + a.amplitudes() * c2).unwrap();
        let cut = superselect(&phi.projector(), &family).unwrap();
        let expected = s.projector().matrix() * c(0.36, 0.0) + a.projector().matrix() * c(0.64, 0.0);
        assert!(linalg::max_abs_diff(cut.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn superselect_rejects_bad_family() {
        let config = AssemblyConfig::new(2, 2).unwrap();
        let w = DensityOperator::maximally_mixed(config);
        let id = CMatrix::identity(4, 4);
        assert!(matches!(superselect(&w, &[id.clone(), id.clone()]), Err(Error::Precondition(_))));
        let half = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), ZERO, ZERO, ZERO]));
        assert!(matches!(superselect(&w, &[half]), Err(Error::Precondition(_))));
    }

    #[test]
    fn sp_examples() {
        let r = rep(2, 2);
        let sectors = SectorProjectors::new(&r);
        let mix = DensityOperator::new(r.config(), half_half(r.config())).unwrap();
        assert!(satisfies_sp(&r, &sectors, &mix).unwrap());
        let ht = StateVector::basis(r.config(), &[0, 1]).unwrap().projector();
        assert!(!satisfies_sp(&r, &sectors, &ht).unwrap());

        let r3 = rep(3, 2);
        let s3 = SectorProjectors::new(&r3);
        let mixed = DensityOperator::maximally_mixed(r3.config());
        assert!(!satisfies_sp(&r3, &s3, &mixed).unwrap());
    }

    #[test]
    fn ip_examples() {
        let r = rep(2, 2);
        let config = r.config();
        let ht = StateVector::basis(config, &[0, 1]).unwrap().projector();
        let q = Observable::new(config, ht.matrix().clone()).unwrap();
        assert!(!satisfies_ip(&r, &ht, std::slice::from_ref(&q)).unwrap());
        let sq = symmetrise_observable(&r, &q).unwrap();
        assert!(satisfies_ip(&r, &ht, &[sq]).unwrap());
        let mix = DensityOperator::new(config, half_half(config)).unwrap();
        assert!(satisfies_ip(&r, &mix, &[q]).unwrap());
    }

    #[test]
    fn sampled_identities_hold() {
        let report = verify_identities(AssemblyConfig::new(3, 2).unwrap(), 10, 7, 1e-10).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn underdetermination_witnesses() {
        let mix = underdet_mix().unwrap();
        assert!(mix.passed, "{mix:?}");
        assert!((mix.displacement - 0.7).abs() < 1e-15);
        let pure = underdet_pure().unwrap();
        assert!(pure.passed, "{pure:?}");
        assert!((pure.overlap - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_must_be_symmetric() {
        let r = rep(2, 2);
        let config = r.config();
        let ht = StateVector::basis(config, &[0, 1]).unwrap();
        let h = Observable::new(config, ht.projector().matrix().clone()).unwrap();
        let w = ip_violation_for(&r, &h).unwrap().expect("non-symmetric H is caught");
        assert!(!satisfies_ip(&r, &w, std::slice::from_ref(&h)).unwrap());
        let symmetric = symmetrise_observable(&r, &h).unwrap();
        assert!(ip_violation_for(&r, &symmetric).unwrap().is_none());
    }
}
