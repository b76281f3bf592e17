use permsym::linalg::{self, max_abs, max_abs_diff, CMatrix, EPS_ABS};
use permsym::sectors::{isotypic_projector, Decomposition, SectorProjectors};
use permsym::symgroup::CharacterTable;
use permsym::{AssemblyConfig, PermutationRep};

fn configs() -> impl Iterator<Item = (usize, usize)> {
    (1usize..=5).flat_map(|n| (1usize..=3).map(move |d| (n, d))).filter(|&(n, d)| d.pow(n as u32) <= 243)
}

#[test]
fn sector_family_is_complete_and_orthogonal() {
    for (n, d) in configs() {
        let rep = PermutationRep::new(AssemblyConfig::new(n, d).unwrap()).unwrap();
        let s = SectorProjectors::new(&rep);
        let dim = d.pow(n as u32);
        let sum = &s.sym + &s.antisym + &s.para;
        assert!(max_abs_diff(&sum, &CMatrix::identity(dim, dim)) <= EPS_ABS, "n={n} d={d}");
        for (i, e) in s.family().iter().enumerate() {
            assert!(max_abs_diff(&(*e * *e), e) <= EPS_ABS);
            assert!(linalg::hermiticity_residual(e) <= EPS_ABS);
            for f in s.family().iter().skip(i + 1) {
                assert!(max_abs(&(*e * *f)) <= EPS_ABS);
            }
        }
        assert!(s.invariant_residual() <= EPS_ABS);
        // bosonic states are multisets, fermionic ones sets; a lone particle
        // counts as bosonic
        let [sym, anti, _] = s.ranks().unwrap();
        assert_eq!(sym as u64, binom(n + d - 1, n));
        assert_eq!(anti as u64, if n == 1 { 0 } else { binom(d, n) });
    }
}

fn binom(a: usize, b: usize) -> u64 {
    if b > a {
        return 0;
    }
    (0..b).fold(1u64, |acc, i| acc * (a - i) as u64 / (i + 1) as u64)
}

#[test]
fn isotypic_components_sum_to_identity() {
    for (n, d) in configs() {
        let rep = PermutationRep::new(AssemblyConfig::new(n, d).unwrap()).unwrap();
        let table = CharacterTable::new(n).unwrap();
        let dim = d.pow(n as u32);
        let mut total = CMatrix::zeros(dim, dim);
        for lambda in table.irreps() {
            let comp = isotypic_projector(lambda, &rep, &table).unwrap();
            assert_eq!(comp.rank() % comp.irrep_dim(), 0);
            total += comp.projector();
        }
        assert!(max_abs_diff(&total, &CMatrix::identity(dim, dim)) <= 1e-9, "n={n} d={d}");
    }
}

#[test]
fn generalised_rays_are_irreducible_and_fill_components() {
    for (n, d) in [(3, 2), (3, 3), (4, 2)] {
        let rep = PermutationRep::new(AssemblyConfig::new(n, d).unwrap()).unwrap();
        let decomposition = Decomposition::new(&rep).unwrap();
        for (comp, rays) in &decomposition.components {
            assert_eq!(rays.len(), comp.multiplicity(), "n={n} d={d} {:?}", comp.label());
            let mut span = CMatrix::zeros(rep.config().dim(), rep.config().dim());
            for ray in rays {
                assert_eq!(ray.dim(), comp.irrep_dim());
                assert!(ray.invariance_residual(&rep) <= 1e-8);
                assert_eq!(ray.commutant_dimension(&rep).unwrap(), 1);
                span += ray.projector();
            }
            assert!(max_abs_diff(&span, comp.projector()) <= 1e-8);
        }
    }
}
