use orbent::tightbinding::{
    dmin_exact, separable, tb_entanglement, w_kernel, FiniteRing, TbQuery,
};
use proptest::prelude::*;

fn e(eta: f64, d: u32) -> f64 {
    tb_entanglement(&TbQuery::thermodynamic(eta, d).unwrap()).unwrap().e_nssr
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn particle_hole_symmetry(eta in 0.0f64..=1.0, d in 1u32..60) {
        prop_assert!((e(eta, d) - e(1.0 - eta, d)).abs() < 1e-14);
    }

    #[test]
    fn kernel_is_bounded_by_envelope(eta in 0.0f64..=1.0, d in 1u32..200) {
        let w = w_kernel(d, eta).abs();
        prop_assert!(w <= 1.0 / (std::f64::consts::PI * d as f64) + 1e-15);
        prop_assert!(w <= eta.min(1.0 - eta) + 1e-15);
    }

    #[test]
    fn measure_is_nonnegative_and_bounded(eta in 0.0f64..=1.0, d in 1u32..20) {
        let v = e(eta, d);
        prop_assert!((0.0..=std::f64::consts::LN_2).contains(&v));
    }
}

#[test]
fn large_ring_approaches_thermodynamic_limit() {
    let ring = FiniteRing::new(10_000, 6002).unwrap();
    for d in 1..=10 {
        let finite = tb_entanglement(&TbQuery::finite(ring, d).unwrap()).unwrap();
        let infinite = tb_entanglement(&TbQuery::thermodynamic(ring.filling(), d).unwrap()).unwrap();
        assert!((finite.e_nssr - infinite.e_nssr).abs() < 1e-6, "d={d}");
        assert!((finite.w - infinite.w).abs() < 1e-6);
    }
}

#[test]
fn dmin_boundary_witness() {
    for eta in [0.003, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.45, 0.5, 0.7] {
        let res = dmin_exact(eta).unwrap();
        let last = res.last_entangled.expect("some separation is entangled");
        assert_eq!(res.d_min, last + 1);
        assert!(!separable(eta, last));
        for d in res.d_min..res.d_min + 500 {
            assert!(separable(eta, d), "η={eta}: d={d} entangled beyond d_min={}", res.d_min);
        }
    }
}

#[test]
fn dmin_is_non_increasing_up_to_half_filling() {
    let mut prev = u32::MAX;
    for k in 1..=500 {
        let eta = k as f64 / 1000.0;
        let d = dmin_exact(eta).unwrap().d_min;
        assert!(d <= prev, "η={eta}: {d} > {prev}");
        prev = d;
    }
}

#[test]
fn trivial_fillings() {
    for eta in [0.0, 1.0] {
        assert!(dmin_exact(eta).unwrap().all_separable);
        for d in 1..10 {
            assert_eq!(e(eta, d), 0.0);
        }
    }
}
