//! Random inputs shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use orbent::fock::{local, pair_reflection, ManyBodyState, OccupationConfig, OrbitalBasisSpec};
use orbent::linalg::CMat;
use orbent::{DensityMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_ish(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Normalized state with random amplitudes on every configuration that
/// `keep` accepts.
pub fn random_state_where(spec: OrbitalBasisSpec, rng: &mut ChaCha8Rng, keep: impl Fn(OccupationConfig) -> bool) -> ManyBodyState {
    let entries: Vec<_> = (0..spec.fock_dim() as u32)
        .map(OccupationConfig)
        .filter(|&c| keep(c))
        .map(|c| (c, gaussian_ish(rng)))
        .collect();
    ManyBodyState::from_entries(spec, entries).unwrap().normalized().unwrap()
}

pub fn random_state(spec: OrbitalBasisSpec, rng: &mut ChaCha8Rng) -> ManyBodyState {
    random_state_where(spec, rng, |_| true)
}

pub fn random_sector_state(spec: OrbitalBasisSpec, n: usize, sz2: i32, rng: &mut ChaCha8Rng) -> ManyBodyState {
    random_state_where(spec, rng, |c| c.particle_number() == n && c.sz2() == sz2)
}

/// `G G† / Tr` with a `dim × rank` complex `G`.
pub fn random_density(dim: usize, rank: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = CMat::from_fn(dim, rank, |_, _| gaussian_ish(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m / C64::new(tr, 0.0)).unwrap()
}

/// Two-orbital state conserving particle number and magnetization and
/// invariant under exchanging the orbitals.
pub fn random_symmetric_pair_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut m = CMat::zeros(16, 16);
    for n in 0..=4usize {
        for sz2 in -2..=2i32 {
            let idx: Vec<usize> = (0..16)
                .filter(|&i| {
                    let (a, b) = (i / 4, i % 4);
                    local::number(a) + local::number(b) == n && local::sz2(a) + local::sz2(b) == sz2
                })
                .collect();
            if idx.is_empty() {
                continue;
            }
            let w: f64 = rng.gen_range(0.0..1.0);
            let g = CMat::from_fn(idx.len(), idx.len(), |_, _| gaussian_ish(rng));
            let block = &g * g.adjoint();
            let tr = block.trace().re;
            for (p, &i) in idx.iter().enumerate() {
                for (q, &j) in idx.iter().enumerate() {
                    m[(i, j)] += block[(p, q)] * (w / tr);
                }
            }
        }
    }
    let r = pair_reflection();
    let sym = (&m + &r * &m * r.adjoint()) * C64::new(0.5, 0.0);
    let tr = sym.trace().re;
    DensityMatrix::new(sym / C64::new(tr, 0.0)).unwrap()
}

/// Random real symmetric one-body matrix.
pub fn random_one_body(sites: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(sites, sites, |_, _| rng.gen_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}
