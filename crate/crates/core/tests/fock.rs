mod common;

use orbent::channels::{gpi_two_orbital, LocalNumberProjectors, LocalFactor};
use orbent::fock::{
    apply_linear_combination, sector_project_matrix, two_orbital_rdm, FermionOp, ManyBodyState, OrbitalBasisSpec,
};
use orbent::linalg::{hermiticity_deviation, kron, max_abs_diff, CMat};
use orbent::C64;
use proptest::prelude::*;

use common::{random_density, random_sector_state, random_state, rng};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn anticommutators(seed in any::<u64>(), i in 0usize..6, j in 0usize..6) {
        let spec = OrbitalBasisSpec::new(3).unwrap();
        let psi = random_state(spec, &mut rng(seed));
        let (fi, fj) = (FermionOp::Annihilate(i), FermionOp::Annihilate(j));
        let ci = FermionOp::Create(i);
        if i != j {
            let out = apply_linear_combination(&[(one(), vec![fi, fj]), (one(), vec![fj, fi])], &psi).unwrap();
            prop_assert!(out.norm_squared() < 1e-28);
            let cj = FermionOp::Create(j);
            let out = apply_linear_combination(&[(one(), vec![fi, cj]), (one(), vec![cj, fi])], &psi).unwrap();
            prop_assert!(out.norm_squared() < 1e-28);
        }
        let out = apply_linear_combination(&[(one(), vec![fi, ci]), (one(), vec![ci, fi])], &psi).unwrap();
        prop_assert!(out.max_abs_diff(&psi) < 1e-14);
    }

    #[test]
    fn sector_projection_is_idempotent_and_self_adjoint(seed in any::<u64>(), n in 0usize..=4, sz2 in -2i32..=2) {
        let spec = OrbitalBasisSpec::new(2).unwrap();
        let mut r = rng(seed);
        let a = random_density(16, 3, &mut r).into_matrix();
        let b = random_density(16, 2, &mut r).into_matrix();
        let pa = sector_project_matrix(&a, spec, n, Some(sz2)).unwrap();
        prop_assert_eq!(&sector_project_matrix(&pa, spec, n, Some(sz2)).unwrap(), &pa);
        // ⟨B, P(A)⟩ = ⟨P(B), A⟩ in the Hilbert–Schmidt inner product
        let pb = sector_project_matrix(&b, spec, n, Some(sz2)).unwrap();
        let lhs = (b.adjoint() * &pa).trace();
        let rhs = (pb.adjoint() * &a).trace();
        prop_assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn two_orbital_rdm_is_a_state(seed in any::<u64>(), sites in 2usize..=4, l in 0usize..4, l2 in 0usize..4) {
        prop_assume!(l < sites && l2 < sites && l != l2);
        let spec = OrbitalBasisSpec::new(sites).unwrap();
        let psi = random_state(spec, &mut rng(seed));
        let rho = two_orbital_rdm(&psi, l, l2).unwrap();
        prop_assert!(hermiticity_deviation(rho.matrix()) < 1e-12);
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues().iter().all(|&e| e >= -1e-10));
    }

    #[test]
    fn fixed_number_rdm_commutes_with_pair_number(seed in any::<u64>(), n in 1usize..=7) {
        let spec = OrbitalBasisSpec::new(4).unwrap();
        let sz2 = (n % 2) as i32;
        let psi = random_sector_state(spec, n, sz2, &mut rng(seed));
        let rho = gpi_two_orbital(&two_orbital_rdm(&psi, 0, 2).unwrap()).unwrap();
        let local = LocalNumberProjectors::new(LocalFactor::Orbital).projectors;
        for total in 0..=4usize {
            let mut p = CMat::zeros(16, 16);
            for (na, pa) in local.iter().enumerate() {
                if let Some(pb) = total.checked_sub(na).and_then(|nb| local.get(nb)) {
                    p += kron(pa, pb);
                }
            }
            let comm = &p * rho.matrix() - rho.matrix() * &p;
            prop_assert!(comm.norm() < 1e-12, "commutator {}", comm.norm());
        }
    }
}

#[test]
fn rdm_of_product_orbitals() {
    // |↑⟩ on orbital 0, |↑↓⟩ on orbital 1, |↓⟩ on orbital 2
    let spec = OrbitalBasisSpec::new(3).unwrap();
    let cfg = orbent::fock::OccupationConfig::from_sites(&[(true, false), (true, true), (false, true)]);
    let psi = ManyBodyState::basis(spec, cfg);
    let rho = two_orbital_rdm(&psi, 2, 0).unwrap();
    let idx = orbent::fock::pair_index(orbent::fock::local::DOWN, orbent::fock::local::UP);
    let mut expect = CMat::zeros(16, 16);
    expect[(idx, idx)] = one();
    assert!(max_abs_diff(rho.matrix(), &expect) < 1e-15);
}
