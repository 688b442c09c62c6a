//! Non-interacting fermions: one-body spectra, Slater determinants, their
//! one-particle density matrices, block entropies and Wick construction of
//! two-orbital reduced states.

use nalgebra::DVector;

use crate::density::DensityMatrix;
use crate::entanglement::SymmetricTwoOrbitalState;
use crate::fock::{self, FermionOp, ManyBodyState, OrbitalBasisSpec, Spin};
use crate::linalg::{self, entropy_term, CMat};
use crate::{Error, Result, C64};

/// Tolerance for Hermiticity of one-body matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Orbital energies closer than this count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Allowed spin asymmetry of a 1RDM fed to the Wick construction.
pub const SPIN_SYMMETRY_TOL: f64 = 1e-12;

/// Hermitian hopping matrix `h` of `H = Σ_{ijσ} h_ij f†_iσ f_jσ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneBodyHamiltonian {
    h: CMat,
}

impl OneBodyHamiltonian {
    pub fn new(h: CMat) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::NotSquare(h.nrows(), h.ncols()));
        }
        let dev = linalg::hermiticity_deviation(&h);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { h })
    }

    pub fn from_real(h: &nalgebra::DMatrix<f64>) -> Result<Self> {
        Self::new(h.map(|x| C64::new(x, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.h
    }
}

/// Nearest-neighbour ring `h_{l,l±1} = −t` on `l` sites.
pub fn ring_hamiltonian(sites: usize, t: f64) -> Result<OneBodyHamiltonian> {
    if sites < 3 {
        return Err(Error::InvalidArgument(format!("a ring needs at least 3 sites, got {sites}")));
    }
    let mut h = CMat::zeros(sites, sites);
    for l in 0..sites {
        let m = (l + 1) % sites;
        h[(l, m)] = C64::new(-t, 0.0);
        h[(m, l)] = C64::new(-t, 0.0);
    }
    OneBodyHamiltonian::new(h)
}

/// Eigen-decomposition `d = U h U†`.
#[derive(Debug, Clone)]
pub struct OneBodySpectrum {
    /// Ascending.
    pub energies: Vec<f64>,
    /// Rows are the conjugated eigenvectors, so that `U h U†` is diagonal.
    pub unitary: CMat,
}

impl OneBodySpectrum {
    /// Site amplitudes of orbital `k`, `c†_k = Σ_l u_l f†_l`.
    pub fn orbital(&self, k: usize) -> DVector<C64> {
        self.unitary.row(k).adjoint()
    }
}

pub fn diagonalize_one_body(h: &OneBodyHamiltonian) -> OneBodySpectrum {
    let (energies, v) = linalg::eigh(h.matrix());
    OneBodySpectrum { energies, unitary: v.adjoint() }
}

/// Spin-resolved one-particle density matrix, `γ_ji = ⟨f†_i f_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleRDM {
    pub up: CMat,
    pub down: CMat,
}

impl OneParticleRDM {
    /// Same matrix in both spin channels.
    pub fn spin_symmetric(gamma: CMat) -> Self {
        Self { up: gamma.clone(), down: gamma }
    }

    pub fn dim(&self) -> usize {
        self.up.nrows()
    }

    pub fn spin(&self, spin: Spin) -> &CMat {
        match spin {
            Spin::Up => &self.up,
            Spin::Down => &self.down,
        }
    }

    pub fn spin_asymmetry(&self) -> f64 {
        linalg::max_abs_diff(&self.up, &self.down)
    }
}

fn occupied_projector(spec: &OneBodySpectrum, n: usize) -> Result<CMat> {
    let d = spec.energies.len();
    if n > d {
        return Err(Error::InvalidArgument(format!("{n} particles per spin exceed {d} orbitals")));
    }
    if n > 0 && n < d {
        let (below, above) = (spec.energies[n - 1], spec.energies[n]);
        if above - below < DEGENERACY_TOL {
            return Err(Error::DegenerateFermiLevel { below, above, tol: DEGENERACY_TOL });
        }
    }
    let mut gamma = CMat::zeros(d, d);
    for k in 0..n {
        let u = spec.orbital(k);
        gamma += &u * u.adjoint();
    }
    Ok(gamma)
}

/// 1RDM of the Slater ground state with `n_per_spin` electrons of each spin.
pub fn slater_1rdm(h: &OneBodyHamiltonian, n_per_spin: usize) -> Result<OneParticleRDM> {
    slater_1rdm_polarized(h, n_per_spin, n_per_spin)
}

pub fn slater_1rdm_polarized(h: &OneBodyHamiltonian, n_up: usize, n_down: usize) -> Result<OneParticleRDM> {
    let spec = diagonalize_one_body(h);
    Ok(OneParticleRDM {
        up: occupied_projector(&spec, n_up)?,
        down: occupied_projector(&spec, n_down)?,
    })
}

/// Slater ground state as an explicit Fock-space vector, built by applying
/// `c†_k = Σ_l u_kl f†_l` orbital by orbital.
pub fn slater_state(h: &OneBodyHamiltonian, n_up: usize, n_down: usize) -> Result<ManyBodyState> {
    let spectrum = diagonalize_one_body(h);
    // only for the degeneracy check
    occupied_projector(&spectrum, n_up)?;
    occupied_projector(&spectrum, n_down)?;
    let basis = OrbitalBasisSpec::new(h.dim())?;
    let mut state = ManyBodyState::vacuum(basis);
    for (spin, n) in [(Spin::Down, n_down), (Spin::Up, n_up)] {
        for k in 0..n {
            let u = spectrum.orbital(k);
            let terms: Vec<(C64, Vec<FermionOp>)> = (0..h.dim())
                .filter(|&l| u[l].norm() > 0.0)
                .map(|l| (u[l], vec![FermionOp::Create(basis.mode(l, spin))]))
                .collect();
            state = fock::apply_linear_combination(&terms, &state)?;
        }
    }
    state.normalized()
}

/// `−Σ_ν [ν ln ν + (1−ν) ln(1−ν)]` over the eigenvalues of one spin block.
pub fn block_entropy_single_spin(gamma: &CMat, subset: &[usize]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty orbital subset".into()));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= gamma.nrows()) {
        return Err(Error::IndexOutOfRange { index: bad, limit: gamma.nrows() });
    }
    let block = CMat::from_fn(subset.len(), subset.len(), |a, b| gamma[(subset[a], subset[b])]);
    Ok(linalg::eigvalsh(&block)
        .into_iter()
        .map(|nu| {
            let nu = nu.clamp(0.0, 1.0);
            entropy_term(nu) + entropy_term(1.0 - nu)
        })
        .sum())
}

/// Entanglement entropy of an orbital block with its complement, summed
/// over both spin channels.
pub fn peschel_block_entropy(gamma: &OneParticleRDM, subset: &[usize]) -> Result<f64> {
    Ok(block_entropy_single_spin(&gamma.up, subset)? + block_entropy_single_spin(&gamma.down, subset)?)
}

/// Reduced state of one spin channel on modes `(A, B)`, basis index
/// `2 n_A + n_B`.
fn spin_channel_state(gamma: &CMat, l: usize, l2: usize) -> [[C64; 4]; 4] {
    let gaa = gamma[(l, l)].re;
    let gbb = gamma[(l2, l2)].re;
    // ⟨f†_B f_A⟩
    let gab = gamma[(l, l2)];
    let both = gaa * gbb - gab.norm_sqr();
    let z = C64::new(0.0, 0.0);
    let mut m = [[z; 4]; 4];
    m[0][0] = C64::new(1.0 - gaa - gbb + both, 0.0);
    m[2][2] = C64::new(gaa - both, 0.0);
    m[1][1] = C64::new(gbb - both, 0.0);
    m[3][3] = C64::new(both, 0.0);
    m[2][1] = gab;
    m[1][2] = gab.conj();
    m
}

/// Two-orbital reduced state of a Slater determinant from its 1RDM.
///
/// Each spin channel is an independent two-mode Gaussian state; the
/// 16×16 state is their product, reordered to the local orbital basis.
pub fn wick_two_orbital_rdm(gamma: &OneParticleRDM, l: usize, l2: usize) -> Result<(DensityMatrix, SymmetricTwoOrbitalState)> {
    let d = gamma.dim();
    for &o in &[l, l2] {
        if o >= d {
            return Err(Error::IndexOutOfRange { index: o, limit: d });
        }
    }
    if l == l2 {
        return Err(Error::SameOrbital(l));
    }
    let asym = gamma.spin_asymmetry();
    if asym > SPIN_SYMMETRY_TOL {
        return Err(Error::SpinAsymmetric(asym));
    }
    let up = spin_channel_state(&gamma.up, l, l2);
    let down = spin_channel_state(&gamma.down, l, l2);
    // local index a = n↑ + 2 n↓; (A↑,B↑,A↓,B↓) → (A↑,A↓,B↑,B↓) moves B↑ past A↓
    let split = |i: usize| {
        let (a, b) = (i / 4, i % 4);
        let up_idx = 2 * (a & 1) + (b & 1);
        let down_idx = 2 * (a >> 1) + (b >> 1);
        let sign = if (b & 1) == 1 && (a >> 1) == 1 { -1.0 } else { 1.0 };
        (up_idx, down_idx, sign)
    };
    let rho = CMat::from_fn(16, 16, |i, j| {
        let (ui, di, si) = split(i);
        let (uj, dj, sj) = split(j);
        up[ui][uj] * down[di][dj] * (si * sj)
    });
    let rho = DensityMatrix::new(rho)?;
    let state = SymmetricTwoOrbitalState::extract(&rho)?;
    Ok((rho, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::two_orbital_rdm;
    use crate::linalg::{c, max_abs_diff};
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn diagonal_hamiltonian_has_identity_unitary() {
        let h = OneBodyHamiltonian::from_real(&nalgebra::DMatrix::from_diagonal(&nalgebra::dvector![1.0, 2.0])).unwrap();
        let s = diagonalize_one_body(&h);
        assert_eq!(s.energies, vec![1.0, 2.0]);
        assert!(max_abs_diff(&s.unitary.map(|x| c(x.norm())), &CMat::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn two_site_hopping_spectrum() {
        let h = OneBodyHamiltonian::from_real(&nalgebra::dmatrix![0.0, -0.5; -0.5, 0.0]).unwrap();
        let s = diagonalize_one_body(&h);
        assert!((s.energies[0] + 0.5).abs() < 1e-15 && (s.energies[1] - 0.5).abs() < 1e-15);
        let d = &s.unitary * h.matrix() * s.unitary.adjoint();
        assert!(d[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn ring_of_four_spectrum() {
        let s = diagonalize_one_body(&ring_hamiltonian(4, 0.5).unwrap());
        for (e, x) in s.energies.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert!((e - x).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = CMat::zeros(2, 2);
        h[(0, 1)] = c(1.0);
        assert!(matches!(OneBodyHamiltonian::new(h), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn slater_limits_and_degeneracy() {
        let h = ring_hamiltonian(6, 0.5).unwrap();
        let empty = slater_1rdm(&h, 0).unwrap();
        assert_eq!(empty.up, CMat::zeros(6, 6));
        let full = slater_1rdm(&h, 6).unwrap();
        assert!(max_abs_diff(&full.up, &CMat::identity(6, 6)) < 1e-13);
        assert!(matches!(slater_1rdm(&h, 2), Err(Error::DegenerateFermiLevel { .. })));
        let g = slater_1rdm(&h, 3).unwrap();
        assert!(max_abs_diff(&(&g.up * &g.up), &g.up) < 1e-12);
    }

    #[test]
    fn single_orbital_entropy() {
        let g = OneParticleRDM::spin_symmetric(CMat::identity(1, 1) * c(0.5));
        assert!((peschel_block_entropy(&g, &[0]).unwrap() - 2.0 * LN_2).abs() < 1e-15);
        let h = ring_hamiltonian(8, 0.5).unwrap();
        let g = slater_1rdm(&h, 1).unwrap();
        let all: Vec<usize> = (0..8).collect();
        assert!(peschel_block_entropy(&g, &all).unwrap().abs() < 1e-10);
    }

    #[test]
    fn wick_vacuum() {
        let g = OneParticleRDM::spin_symmetric(CMat::zeros(4, 4));
        let (rho, s) = wick_two_orbital_rdm(&g, 0, 1).unwrap();
        assert!((rho.get(0, 0).re - 1.0).abs() < 1e-15);
        assert_eq!(s.t(), 0.0);
    }

    #[test]
    fn wick_half_filling_nearest_neighbours() {
        let w = 1.0 / PI;
        let g = OneParticleRDM::spin_symmetric(nalgebra::dmatrix![c(0.5), c(w); c(w), c(0.5)]);
        let (_, s) = wick_two_orbital_rdm(&g, 0, 1).unwrap();
        let a = (0.25 - 0.5 - w * w).powi(2);
        let b = w * w;
        assert!((a - 0.123427).abs() < 1e-6 && (b - 0.101321).abs() < 1e-6);
        assert!((s.t() - (a + b)).abs() < 1e-14);
        assert!((s.r() - (3.0 * a - 3.0 * b)).abs() < 1e-14);
    }

    #[test]
    fn wick_matches_brute_force_ring() {
        let h = ring_hamiltonian(8, 0.5).unwrap();
        let g = slater_1rdm(&h, 1).unwrap();
        let psi = slater_state(&h, 1, 1).unwrap();
        for l2 in 1..8 {
            let (wick, _) = wick_two_orbital_rdm(&g, 0, l2).unwrap();
            let brute = two_orbital_rdm(&psi, 0, l2).unwrap();
            assert!(max_abs_diff(wick.matrix(), brute.matrix()) < 1e-10, "pair (0,{l2})");
        }
    }

    #[test]
    fn wick_rejects_bad_input() {
        let g = OneParticleRDM { up: CMat::identity(3, 3), down: CMat::zeros(3, 3) };
        assert!(matches!(wick_two_orbital_rdm(&g, 0, 1), Err(Error::SpinAsymmetric(_))));
        let g = OneParticleRDM::spin_symmetric(CMat::zeros(3, 3));
        assert!(wick_two_orbital_rdm(&g, 1, 1).is_err());
        assert!(wick_two_orbital_rdm(&g, 0, 3).is_err());
    }
}
