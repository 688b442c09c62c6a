mod common;

use orbent::entanglement::SsrKind;
use orbent::freefermion::{diagonalize_one_body, OneBodyHamiltonian};
use orbent::interacting::{
    build_hamiltonian, ground_state, ground_state_with, orbital_pair_entanglement, parse_fcidump, ring_separation,
    ElectronicHamiltonian, FcidumpData, HubbardParams, LanczosOptions, Solver,
};
use orbent::tightbinding::{tb_entanglement, FiniteRing, TbQuery};
use rand::Rng;

use common::{random_one_body, rng};

fn hubbard_ground(sites: usize, u: f64, n: usize) -> orbent::interacting::GroundState {
    let h = HubbardParams::ring(sites, u).to_hamiltonian().unwrap();
    ground_state(&build_hamiltonian(&h, n, (n % 2) as i32).unwrap()).unwrap()
}

#[test]
fn free_limit_matches_finite_ring_closed_form() {
    for (sites, fillings) in [(4usize, vec![2usize, 6]), (6, vec![2, 6, 10])] {
        for n in fillings {
            let gs = hubbard_ground(sites, 0.0, n);
            assert!(!gs.degenerate);
            let ring = FiniteRing::new(sites, n).unwrap();
            for l in 0..sites {
                for l2 in l + 1..sites {
                    let d = ring_separation(l, l2, sites) as u32;
                    let ed = orbital_pair_entanglement(&gs.state, l, l2, SsrKind::Number).unwrap().value;
                    let tb = tb_entanglement(&TbQuery::finite(ring, d).unwrap()).unwrap().e_nssr;
                    assert!((ed - tb).abs() < 1e-8, "L={sites} N={n} ({l},{l2}): {ed} vs {tb}");
                }
            }
        }
    }
}

#[test]
fn ring_pairs_depend_only_on_separation() {
    let sites = 6;
    let gs = hubbard_ground(sites, 8.0, 6);
    let mut by_d: Vec<Vec<f64>> = vec![Vec::new(); sites / 2 + 1];
    for l in 0..sites {
        for l2 in l + 1..sites {
            let v = orbital_pair_entanglement(&gs.state, l, l2, SsrKind::Number).unwrap().value;
            by_d[ring_separation(l, l2, sites)].push(v);
        }
    }
    for vals in by_d.iter().filter(|v| !v.is_empty()) {
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-8, "{vals:?}");
    }
}

fn ranks(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0; v.len()];
    for (rank, &i) in idx.iter().enumerate() {
        r[i] = rank;
    }
    r
}

#[test]
fn dilute_electrons_and_holes_share_the_distance_ordering() {
    let profile = |n: usize| -> Vec<f64> {
        let gs = hubbard_ground(6, 8.0, n);
        (1..=3).map(|j| orbital_pair_entanglement(&gs.state, 0, j, SsrKind::Number).unwrap().value).collect()
    };
    assert_eq!(ranks(&profile(2)), ranks(&profile(10)));
}

#[test]
fn one_body_file_fills_lowest_levels() {
    let mut r = rng(11);
    let norb = 5;
    let h = random_one_body(norb, &mut r);
    let mut data = FcidumpData::zeros(norb, 4, 0);
    for i in 0..norb {
        for j in 0..=i {
            data.set_h(i, j, h[(i, j)]);
        }
    }
    data.core = 0.25;
    let data = parse_fcidump(&data.to_fcidump_string()).unwrap();
    let gs = ground_state(&build_hamiltonian(&ElectronicHamiltonian::from(&data), 4, 0).unwrap()).unwrap();
    let levels = diagonalize_one_body(&OneBodyHamiltonian::from_real(&h).unwrap()).energies;
    let expect = 2.0 * (levels[0] + levels[1]) + 0.25;
    assert!((gs.energy - expect).abs() < 1e-10, "{} vs {expect}", gs.energy);
}

#[test]
fn dense_and_krylov_agree_on_random_integrals() {
    let mut r = rng(5);
    let norb = 5;
    let mut data = FcidumpData::zeros(norb, 5, 1);
    let h = random_one_body(norb, &mut r);
    for i in 0..norb {
        for j in 0..=i {
            data.set_h(i, j, h[(i, j)]);
        }
    }
    // a positive-definite Coulomb-like part plus small random couplings
    for i in 0..norb {
        for j in 0..norb {
            data.set_v(i, i, j, j, if i == j { 1.0 } else { 0.3 });
        }
    }
    for _ in 0..20 {
        let idx: Vec<usize> = (0..4).map(|_| r.gen_range(0..norb)).collect();
        data.set_v(idx[0], idx[1], idx[2], idx[3], r.gen_range(-0.05..0.05));
    }
    let ham = ElectronicHamiltonian::from(&data);
    let m = build_hamiltonian(&ham, 5, 1).unwrap();
    let dense = ground_state_with(&m, Solver::Dense, &LanczosOptions::default()).unwrap();
    let krylov = ground_state_with(&m, Solver::Lanczos, &LanczosOptions::default()).unwrap();
    assert!((dense.energy - krylov.energy).abs() < 1e-8);
}

#[test]
fn strong_repulsion_at_half_filling_keeps_only_neighbours() {
    let gs = hubbard_ground(6, 8.0, 6);
    for j in 1..6 {
        let v = orbital_pair_entanglement(&gs.state, 0, j, SsrKind::Parity).unwrap().value;
        if ring_separation(0, j, 6) == 1 {
            assert!(v > 1e-6);
        } else {
            assert!(v < 1e-6, "pair (0,{j}): {v}");
        }
    }
}
