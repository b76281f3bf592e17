use num_complex::Complex64;
use permsym::casebook::{self, bloch_density, lift_to_assembly, symmetry_basis};
use permsym::hilbert::{AsOperator, DensityOperator};
use permsym::linalg::{max_abs_diff, trace_of_product};
use permsym::sampling::Sampler;
use permsym::sectors::{classify_vector, SectorProjectors, SymmetryType};
use permsym::symmetriser::{sim_equivalent, symmetrise_observable};
use permsym::{AssemblyConfig, PermutationRep};

#[test]
fn two_by_two_and_four_by_four_agree_on_symmetric_quantities() {
    let config = AssemblyConfig::new(2, 2).unwrap();
    let rep = PermutationRep::new(config).unwrap();
    let (psi_s, psi_a) = symmetry_basis();
    let mut sampler = Sampler::new(41);
    for _ in 0..50 {
        let p = sampler.uniform();
        let z = sampler.complex_normal();
        let q = z / z.norm() * ((p * (1.0 - p)).sqrt() * sampler.uniform());
        let w = bloch_density(p, q).unwrap();
        let q4 = symmetrise_observable(&rep, &sampler.observable(config)).unwrap();
        // the compression of a symmetric Q to the symmetry basis is diagonal
        let qss = psi_s.amplitudes().dotc(&(q4.matrix() * psi_s.amplitudes()));
        let qaa = psi_a.amplitudes().dotc(&(q4.matrix() * psi_a.amplitudes()));
        let qsa = psi_s.amplitudes().dotc(&(q4.matrix() * psi_a.amplitudes()));
        assert!(qsa.norm() < 1e-12);
        let small = trace_of_product(
            &w.matrix,
            &nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![qss, qaa])),
        );
        let full = trace_of_product(&lift_to_assembly(&w.matrix), q4.matrix());
        assert!((small - full).norm() < 1e-12);
    }
}

#[test]
fn lifted_states_are_states_on_the_span() {
    let config = AssemblyConfig::new(2, 2).unwrap();
    let rep = PermutationRep::new(config).unwrap();
    let w1 =
        DensityOperator::new(config, lift_to_assembly(&bloch_density(0.5, Complex64::new(0.5, 0.0)).unwrap().matrix))
            .unwrap();
    let w2 =
        DensityOperator::new(config, lift_to_assembly(&bloch_density(0.5, Complex64::new(-0.5, 0.0)).unwrap().matrix))
            .unwrap();
    // |HT⟩ and |TH⟩ are ~-equivalent but distinct
    assert!(max_abs_diff(w1.matrix(), w2.matrix()) > 0.5);
    assert!(sim_equivalent(&rep, &w1, &w2).unwrap());
    assert!(casebook::orbit_is_sim_class(&rep, &w1).unwrap());
}

#[test]
fn poles_are_boson_and_fermion() {
    let (psi_s, psi_a) = symmetry_basis();
    let rep = PermutationRep::new(AssemblyConfig::new(2, 2).unwrap()).unwrap();
    let sectors = SectorProjectors::new(&rep);
    assert_eq!(classify_vector(&psi_s, &sectors).unwrap().label, SymmetryType::Bosonic);
    assert_eq!(classify_vector(&psi_a, &sectors).unwrap().label, SymmetryType::Fermionic);
    let north = casebook::bloch_point(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
    assert_eq!(north.sphere(), [0.0, 0.0, 1.0]);
    let south = casebook::bloch_point(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)).unwrap();
    assert_eq!(south.sphere(), [0.0, 0.0, -1.0]);
}
