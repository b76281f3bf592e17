//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::Rational64;

use permsym::casebook::{self, CoinMeasure};
use permsym::hilbert::{AsOperator, DensityOperator, Observable, StateVector};
use permsym::linalg::{self, c, CMatrix, CVector};
use permsym::models::{self, FiniteModel, Theory};
use permsym::sampling::Sampler;
use permsym::sectors::{self, Decomposition, SectorProjectors};
use permsym::symgroup::factorial;
use permsym::symmetriser;
use permsym::{AssemblyConfig, PermutationRep, Result};

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass_if(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { passed, detail: detail.into() })
}

fn rep(n: usize, d: usize) -> Result<PermutationRep> {
    PermutationRep::new(AssemblyConfig::new(n, d)?)
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn sector_dimensions() -> Result<Outcome> {
    let start = Instant::now();
    let mut found = Vec::new();
    let mut ok = true;
    for (d, expected) in [(2, [3, 1]), (3, [6, 3]), (4, [10, 6])] {
        let r = rep(2, d)?;
        let s = SectorProjectors::new(&r);
        let ranks = [linalg::projector_rank(&s.sym)?, linalg::projector_rank(&s.antisym)?];
        ok &= ranks == expected && ranks[0] == d * (d + 1) / 2 && ranks[1] == d * (d - 1) / 2;
        found.push(format!("d={d}: {}/{}", ranks[0], ranks[1]));
    }
    let elapsed = start.elapsed();
    pass_if(ok && within(elapsed, Duration::from_secs(1)), format!("{} in {elapsed:.2?}", found.join(", ")))
}

/// Eigenvalues above 1/2, counted without the guard band of the library.
fn brute_rank(p: &CMatrix) -> usize {
    linalg::hermitian_eigen(p).0.iter().filter(|&&x| x > 0.5).count()
}

fn completeness() -> Result<Outcome> {
    let mut ok = true;
    let mut detail = Vec::new();
    for d in 2..=4 {
        let r = rep(2, d)?;
        let s = SectorProjectors::new(&r);
        ok &= linalg::max_abs(&s.para) <= linalg::EPS_ABS;
        detail.push(format!("n=2,d={d}: |E_P|={:.1e}", linalg::max_abs(&s.para)));
    }
    let r = rep(3, 2)?;
    let s = SectorProjectors::new(&r);
    let ranks = s.ranks()?;
    let brute = [brute_rank(&s.sym), brute_rank(&s.antisym), brute_rank(&s.para)];
    ok &= ranks == [4, 0, 4] && brute == ranks;
    detail.push(format!("n=3,d=2 ranks {ranks:?}, eigen count {brute:?}"));
    pass_if(ok, detail.join("; "))
}

fn trace_identities() -> Result<Outcome> {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, d) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
        let report = symmetriser::verify_identities(AssemblyConfig::new(n, d)?, 100, 0xACCE, 1e-10)?;
        ok &= report.identity_a <= 1e-10 && report.identity_b <= 1e-10;
        detail.push(format!("({n},{d}) a={:.1e} b={:.1e}", report.identity_a, report.identity_b));
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, Duration::from_secs(30));
    pass_if(ok, format!("{} in {elapsed:.2?}", detail.join(", ")))
}

fn superselection() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (n, d) in [(2, 2), (3, 2), (3, 3)] {
        let config = AssemblyConfig::new(n, d)?;
        let r = PermutationRep::new(config)?;
        let s = SectorProjectors::new(&r);
        let family = [s.sym.clone(), s.antisym.clone(), s.para.clone()];
        let mut sampler = Sampler::new(0x5E1E + n as u64 * 10 + d as u64);
        for _ in 0..100 {
            let w = sampler.density(config);
            let q = symmetriser::symmetrise_observable(&r, &sampler.observable(config))?;
            let cut = symmetriser::superselect(&w, &family)?;
            let gap =
                linalg::trace_of_product(cut.matrix(), q.matrix()) - linalg::trace_of_product(w.matrix(), q.matrix());
            worst = worst.max(gap.norm());
        }
    }
    pass_if(worst <= 1e-10, format!("max residual {worst:.1e} over 300 samples"))
}

fn coin_statistics() -> Result<Outcome> {
    let third = Rational64::new(1, 3);
    let quarter = Rational64::new(1, 4);
    let bose = casebook::coin_statistics(CoinMeasure::Bose);
    let mb = casebook::coin_statistics(CoinMeasure::MaxwellBoltzmann);
    let fd = casebook::coin_statistics(CoinMeasure::FermiDirac);
    let ok = bose.outcomes.len() == 3
        && bose.outcomes.iter().all(|(_, p)| *p == third)
        && mb.outcomes.len() == 4
        && mb.outcomes.iter().all(|(_, p)| *p == quarter)
        && fd.outcomes.len() == 1
        && fd.total() == Rational64::from_integer(1);
    pass_if(ok, format!("bose {}, MB {}", serde_json::to_string(&bose).unwrap(), serde_json::to_string(&mb).unwrap()))
}

fn bloch_geometry() -> Result<Outcome> {
    let mut sampler = Sampler::new(0xB10C);
    let (psi_s, psi_a) = casebook::symmetry_basis();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (xi, eta) = (sampler.complex_normal(), sampler.complex_normal());
        let point = casebook::bloch_point(xi, eta)?;
        // the state itself, projected onto the symmetry basis
        let psi = CVector::from_vec(vec![c(0.0, 0.0), xi, eta, c(0.0, 0.0)]);
        let norm2 = psi.norm_squared();
        let amp_s = psi_s.amplitudes().dotc(&psi);
        let amp_a = psi_a.amplitudes().dotc(&psi);
        let p = amp_s.norm_sqr() / norm2;
        let q = amp_a * amp_s.conj() / norm2;
        worst = worst
            .max((point.p - p).abs())
            .max((point.q - q).norm())
            .max((point.q.norm_sqr() - point.p * (1.0 - point.p)).abs());
    }
    let geometry_ok = worst <= 1e-12;

    let config = AssemblyConfig::new(2, 2)?;
    let r = PermutationRep::new(config)?;
    let p = 0.3;
    let radius = (p * (1.0f64 - p)).sqrt();
    let mut slice_ok = true;
    let mut lifted_gap = 0.0f64;
    for _ in 0..100 {
        let mut q_in_disc = || {
            let z = sampler.complex_normal();
            z / z.norm() * (radius * sampler.uniform())
        };
        let (q1, q2) = (q_in_disc(), q_in_disc());
        slice_ok &= casebook::bloch_slice_equivalence(p, q1, q2)?;
        // the same statement in the full two-coin space
        let w1 = casebook::lift_to_assembly(&casebook::bloch_density(p, q1)?.matrix);
        let w2 = casebook::lift_to_assembly(&casebook::bloch_density(p, q2)?.matrix);
        let q = symmetriser::symmetrise_observable(&r, &sampler.observable(config))?;
        let gap = linalg::trace_of_product(&w1, q.matrix()) - linalg::trace_of_product(&w2, q.matrix());
        lifted_gap = lifted_gap.max(gap.norm());
    }
    slice_ok &= lifted_gap <= 1e-10;
    pass_if(
        geometry_ok && slice_ok,
        format!(
            "max residual {worst:.1e} over 1000 states; slice equivalence {slice_ok} (lifted gap {lifted_gap:.1e})"
        ),
    )
}

fn fig3() -> Result<Outcome> {
    let report = casebook::fig3_analysis(sectors::DEFAULT_RAY_SEED)?;
    let worst = [
        report.reflection_residual,
        report.symmetric_ray_residual,
        report.plane_invariance_residual,
        report.permute_span_residual,
        report.schur_residual,
        report.expectation_spread,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    pass_if(
        report.passed && worst <= 1e-10,
        format!(
            "plane dim {}, commutant dim {}, max residual {worst:.1e}",
            report.plane_dim, report.plane_commutant_dim
        ),
    )
}

fn schur() -> Result<Outcome> {
    let config = AssemblyConfig::new(3, 2)?;
    let r = PermutationRep::new(config)?;
    let decomposition = Decomposition::new(&r)?;
    let rays: Vec<_> = decomposition.rays().cloned().collect();
    let mut sampler = Sampler::new(0x5C1);
    let mut scalar_residual = 0.0f64;
    let mut spread = 0.0f64;
    for _ in 0..20 {
        let q = symmetriser::symmetrise_observable(&r, &sampler.observable(config))?;
        scalar_residual = scalar_residual.max(sectors::schur_check(&q, &rays, &r)?.max_residual);
        for ray in &rays {
            let values: Vec<f64> = (0..10)
                .map(|_| {
                    let v = sampler.unit_in_span(ray.basis());
                    v.dotc(&(q.matrix() * &v)).re
                })
                .collect();
            let hi = values.iter().cloned().fold(f64::MIN, f64::max);
            let lo = values.iter().cloned().fold(f64::MAX, f64::min);
            spread = spread.max(hi - lo);
        }
    }
    pass_if(
        scalar_residual <= 1e-10 && spread <= 1e-10,
        format!("{} rays, scalar residual {scalar_residual:.1e}, expectation spread {spread:.1e}", rays.len()),
    )
}

fn underdetermination() -> Result<Outcome> {
    let mix = symmetriser::underdet_mix()?;
    let pure = symmetriser::underdet_pure()?;
    pass_if(
        mix.passed && pure.passed,
        format!(
            "mix: displacement {:.2}, Σ gap {:.1e}; pure: overlap {:.2} under {}, Σ gap {:.1e}",
            mix.displacement, mix.sigma_gap, pure.overlap, pure.permutation, pure.sigma_gap
        ),
    )
}

fn model_permutes() -> Result<Outcome> {
    let start = Instant::now();
    let mut exceptions = 0usize;
    let mut models_seen = 0usize;
    for size in 1..=3 {
        let domain: Vec<String> = (1..=size).map(|i| format!("a{i}")).collect();
        let space = models::enumerate_models(&domain, &[("R".to_string(), 2)])?;
        models_seen += space.len();
        let classes: Vec<BTreeSet<FiniteModel>> = space.iter().map(models::permute_class).collect::<Result<_>>()?;
        for (m, class) in space.iter().zip(&classes) {
            if !factorial(size).is_multiple_of(class.len() as u64) {
                exceptions += 1;
            }
            let state = models::state_description(m);
            let structure = models::structure_description(m);
            for other in &space {
                if models::satisfies(other, &state)? != (other == m) {
                    exceptions += 1;
                }
                if models::satisfies(other, &structure)? != class.contains(other) {
                    exceptions += 1;
                }
            }
        }
        // singleton selections and whole permute classes
        for (i, class) in classes.iter().enumerate() {
            let members: BTreeSet<usize> =
                space.iter().enumerate().filter(|(_, m)| class.contains(m)).map(|(j, _)| j).collect();
            for selected in [BTreeSet::from([i]), members] {
                let theory = Theory::new(space.clone(), [("theta".to_string(), selected)].into())?;
                let gpc = theory.gpc_check()?;
                if gpc.violation || (gpc.fixed && !gpc.permutable) {
                    exceptions += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    pass_if(
        exceptions == 0 && within(elapsed, Duration::from_secs(10)),
        format!("{models_seen} models, {exceptions} exceptions in {elapsed:.2?}"),
    )
}

fn sp_ip() -> Result<Outcome> {
    let r3 = rep(3, 2)?;
    let s3 = SectorProjectors::new(&r3);
    let rejects_mixed = !symmetriser::satisfies_sp(&r3, &s3, &DensityOperator::maximally_mixed(r3.config()))?;

    let r = rep(3, 3)?;
    let s = SectorProjectors::new(&r);
    let config = r.config();
    let boson = StateVector::basis(config, &[0, 0, 0])?;
    let mut fermion = CVector::zeros(config.dim());
    for p in r.group().elements() {
        let digits: Vec<usize> = (0..3).map(|k| p.apply0(k)).collect();
        fermion[config.index(&digits)] = c(p.parity() as f64, 0.0);
    }
    let fermion = StateVector::normalized(config, fermion)?;
    let mixture = DensityOperator::from_mixture(&[(0.4, boson), (0.6, fermion)])?;
    let accepts_mixture = symmetriser::satisfies_sp(&r, &s, &mixture)?;

    let coins = AssemblyConfig::new(2, 2)?;
    let r2 = PermutationRep::new(coins)?;
    let mut sampler = Sampler::new(0x1B);
    let symmetric: Vec<Observable> =
        (0..5).map(|_| symmetriser::symmetrise_observable(&r2, &sampler.observable(coins))).collect::<Result<_>>()?;
    let mut accepts_any = true;
    for _ in 0..20 {
        accepts_any &= symmetriser::satisfies_ip(&r2, &sampler.density(coins), &symmetric)?;
    }
    let ht = StateVector::basis(coins, &[0, 1])?.projector();
    let q = Observable::new(coins, ht.matrix().clone())?;
    let rejects_ht = !symmetriser::satisfies_ip(&r2, &ht, &[q])?;

    pass_if(
        rejects_mixed && accepts_mixture && accepts_any && rejects_ht,
        format!("SP rejects I/D {rejects_mixed}, accepts mixture {accepts_mixture}; IP symmetric {accepts_any}, rejects |HT> {rejects_ht}"),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("sector dimensions", sector_dimensions),
        ("two-particle completeness", completeness),
        ("trace identities", trace_identities),
        ("superselection", superselection),
        ("quantum-coin statistics", coin_statistics),
        ("Bloch geometry", bloch_geometry),
        ("generalised ray reproduction", fig3),
        ("Schur scalar compression", schur),
        ("under-determination witnesses", underdetermination),
        ("finite-model permutes", model_permutes),
        ("SP/IP predicates", sp_ip),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (status, detail) = match check() {
            Ok(o) => (if o.passed { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("acceptance {:>2} {status} {name}: {detail}", i + 1);
    }
    let elapsed = start.elapsed();
    let in_budget = elapsed < Duration::from_secs(120);
    println!("acceptance    {} total runtime {elapsed:.2?}", if in_budget { "PASS" } else { "FAIL" });
    if failures > 0 || !in_budget {
        std::process::exit(1);
    }
}
