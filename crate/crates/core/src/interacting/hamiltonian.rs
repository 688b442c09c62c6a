//! Second-quantized electronic Hamiltonians restricted to a fixed
//! `(N, S_z)` sector, stored as sparse real matrices.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::fcidump::FcidumpData;
use crate::fock::{FermionOp, OccupationConfig, OrbitalBasisSpec, Spin};
use crate::{Error, Result};

/// Largest number of spatial orbitals handled by exact diagonalization.
pub const MAX_ED_ORBITALS: usize = 8;
/// Default cap on stored nonzeros.
pub const DEFAULT_NNZ_CAP: usize = 4_000_000;

/// `H = Σ_{ijσ} h_ij f†_iσ f_jσ + ½ Σ_{ijklσσ'} (ij|kl) f†_iσ f†_kσ' f_lσ' f_jσ + E_core`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronicHamiltonian {
    pub h: DMatrix<f64>,
    /// `(ij|kl)` in the layout of [`FcidumpData::eri`].
    pub eri: Vec<f64>,
    pub core: f64,
}

impl ElectronicHamiltonian {
    pub fn norb(&self) -> usize {
        self.h.nrows()
    }

    fn v(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.norb();
        self.eri[((i * n + j) * n + k) * n + l]
    }
}

impl From<&FcidumpData> for ElectronicHamiltonian {
    fn from(d: &FcidumpData) -> Self {
        Self { h: d.h.clone(), eri: d.eri.clone(), core: d.core }
    }
}

/// Hubbard chain or ring, `−t Σ (f†_l f_{l+1} + h.c.) + U Σ n_l↑ n_l↓`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    pub sites: usize,
    pub t: f64,
    pub u: f64,
    pub periodic: bool,
}

impl HubbardParams {
    /// Periodic ring with `t = ½`.
    pub fn ring(sites: usize, u: f64) -> Self {
        Self { sites, t: 0.5, u, periodic: true }
    }

    /// Two sites share a single bond even when periodic.
    pub fn to_hamiltonian(&self) -> Result<ElectronicHamiltonian> {
        let n = self.sites;
        if n < 2 {
            return Err(Error::InvalidArgument(format!("Hubbard model needs at least 2 sites, got {n}")));
        }
        let mut h = DMatrix::zeros(n, n);
        let bonds = if self.periodic && n > 2 { n } else { n - 1 };
        for l in 0..bonds {
            let m = (l + 1) % n;
            h[(l, m)] = -self.t;
            h[(m, l)] = -self.t;
        }
        let mut eri = vec![0.0; n.pow(4)];
        for l in 0..n {
            eri[((l * n + l) * n + l) * n + l] = self.u;
        }
        Ok(ElectronicHamiltonian { h, eri, core: 0.0 })
    }
}

/// Fixed-`(N_↑, N_↓)` configurations in ascending bit order.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    pub spec: OrbitalBasisSpec,
    pub n_up: usize,
    pub n_down: usize,
    pub configs: Vec<OccupationConfig>,
    index: HashMap<u32, usize>,
}

impl SectorBasis {
    /// Sector with `n` electrons and `2S_z = sz2`.
    pub fn new(spec: OrbitalBasisSpec, n: usize, sz2: i32) -> Result<Self> {
        let twice_up = n as i64 + sz2 as i64;
        if twice_up < 0 || twice_up % 2 != 0 || twice_up / 2 > n as i64 {
            return Err(Error::InvalidArgument(format!("no sector with N={n}, 2Sz={sz2}")));
        }
        let n_up = (twice_up / 2) as usize;
        let n_down = n - n_up;
        let d = spec.n_spatial();
        if n_up > d || n_down > d {
            return Err(Error::EmptySector { n_up, n_down });
        }
        let spin_strings = |k: usize| -> Vec<u32> { (0u32..1 << d).filter(|m| m.count_ones() as usize == k).collect() };
        let spread = |mask: u32, spin: Spin| -> u32 {
            (0..d).filter(|&s| mask >> s & 1 == 1).fold(0, |acc, s| acc | 1 << spec.mode(s, spin))
        };
        let mut configs: Vec<OccupationConfig> = Vec::new();
        for up in spin_strings(n_up) {
            for down in spin_strings(n_down) {
                configs.push(OccupationConfig(spread(up, Spin::Up) | spread(down, Spin::Down)));
            }
        }
        configs.sort();
        let index = configs.iter().enumerate().map(|(k, c)| (c.0, k)).collect();
        Ok(Self { spec, n_up, n_down, configs, index })
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn index_of(&self, cfg: OccupationConfig) -> Option<usize> {
        self.index.get(&cfg.0).copied()
    }

    pub fn sz2(&self) -> i32 {
        self.n_up as i32 - self.n_down as i32
    }
}

/// Real symmetric matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian {
    pub basis: SectorBasis,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (row, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for p in self.indptr[row]..self.indptr[row + 1] {
                acc += self.values[p] * x[self.indices[p]];
            }
            *out = acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for row in 0..n {
            for p in self.indptr[row]..self.indptr[row + 1] {
                m[(row, self.indices[p])] += self.values[p];
            }
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        (self.indptr[row]..self.indptr[row + 1])
            .filter(|&p| self.indices[p] == col)
            .map(|p| self.values[p])
            .sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }
}

pub fn build_hamiltonian(ham: &ElectronicHamiltonian, n: usize, sz2: i32) -> Result<SparseHamiltonian> {
    build_hamiltonian_capped(ham, n, sz2, DEFAULT_NNZ_CAP)
}

/// Builds the sector matrix, refusing more than `cap` nonzeros.
pub fn build_hamiltonian_capped(ham: &ElectronicHamiltonian, n: usize, sz2: i32, cap: usize) -> Result<SparseHamiltonian> {
    let norb = ham.norb();
    if norb == 0 || norb > MAX_ED_ORBITALS {
        return Err(Error::InvalidArgument(format!(
            "exact diagonalization supports 1..={MAX_ED_ORBITALS} spatial orbitals, got {norb}"
        )));
    }
    if ham.eri.len() != norb.pow(4) {
        return Err(Error::DimensionMismatch { expected: norb.pow(4), got: ham.eri.len() });
    }
    let spec = OrbitalBasisSpec::new(norb)?;
    let basis = SectorBasis::new(spec, n, sz2)?;
    let spins = [Spin::Up, Spin::Down];

    let mut indptr = Vec::with_capacity(basis.dim() + 1);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    indptr.push(0);
    let mut row_acc: HashMap<usize, f64> = HashMap::new();

    for &cfg in &basis.configs {
        row_acc.clear();
        let mut add = |target: OccupationConfig, amp: f64| {
            let col = basis.index_of(target).expect("number and Sz conserving term stays in sector");
            *row_acc.entry(col).or_insert(0.0) += amp;
        };
        add(cfg, ham.core);
        // one-body
        for &s in &spins {
            for j in 0..norb {
                let mj = spec.mode(j, s);
                if !cfg.is_occupied(mj) {
                    continue;
                }
                for i in 0..norb {
                    let hij = ham.h[(i, j)];
                    if hij == 0.0 {
                        continue;
                    }
                    let ops = [FermionOp::Create(spec.mode(i, s)), FermionOp::Annihilate(mj)];
                    if let Some((out, sign)) = crate::fock::act_string(&ops, cfg) {
                        add(out, hij * sign);
                    }
                }
            }
        }
        // two-body, ½ (ij|kl) f†_iσ f†_kτ f_lτ f_jσ
        for &s in &spins {
            for j in 0..norb {
                let mj = spec.mode(j, s);
                if !cfg.is_occupied(mj) {
                    continue;
                }
                for &tau in &spins {
                    for l in 0..norb {
                        let ml = spec.mode(l, tau);
                        if ml == mj || !cfg.is_occupied(ml) {
                            continue;
                        }
                        for i in 0..norb {
                            for k in 0..norb {
                                let v = ham.v(i, j, k, l);
                                if v == 0.0 {
                                    continue;
                                }
                                let ops = [
                                    FermionOp::Create(spec.mode(i, s)),
                                    FermionOp::Create(spec.mode(k, tau)),
                                    FermionOp::Annihilate(ml),
                                    FermionOp::Annihilate(mj),
                                ];
                                if let Some((out, sign)) = crate::fock::act_string(&ops, cfg) {
                                    add(out, 0.5 * v * sign);
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut row: Vec<(usize, f64)> = row_acc.iter().map(|(&c, &v)| (c, v)).filter(|&(_, v)| v != 0.0).collect();
        row.sort_by_key(|&(c, _)| c);
        if indices.len() + row.len() > cap {
            return Err(Error::SectorTooLarge(indices.len() + row.len(), cap));
        }
        for (c, v) in row {
            indices.push(c);
            values.push(v);
        }
        indptr.push(indices.len());
    }
    Ok(SparseHamiltonian { basis, indptr, indices, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigh_real;

    #[test]
    fn sector_dimensions() {
        let spec = OrbitalBasisSpec::new(4).unwrap();
        assert_eq!(SectorBasis::new(spec, 4, 0).unwrap().dim(), 36);
        assert_eq!(SectorBasis::new(spec, 3, 1).unwrap().dim(), 24);
        assert!(SectorBasis::new(spec, 3, 0).is_err());
        assert!(matches!(SectorBasis::new(spec, 10, 0), Err(Error::EmptySector { .. })));
    }

    #[test]
    fn two_site_hubbard_free_spectrum() {
        let h = HubbardParams::ring(2, 0.0).to_hamiltonian().unwrap();
        let m = build_hamiltonian(&h, 2, 0).unwrap();
        let (vals, _) = eigh_real(&m.to_dense());
        for (v, x) in vals.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert!((v - x).abs() < 1e-14, "{vals:?}");
        }
    }

    #[test]
    fn hermitian_and_capped() {
        let h = HubbardParams::ring(4, 3.0).to_hamiltonian().unwrap();
        let m = build_hamiltonian(&h, 4, 0).unwrap();
        let dense = m.to_dense();
        assert!((&dense - dense.transpose()).abs().max() < 1e-15);
        assert!(matches!(build_hamiltonian_capped(&h, 4, 0, 10), Err(Error::SectorTooLarge(_, 10))));
    }

    #[test]
    fn rejects_too_many_orbitals() {
        let h = ElectronicHamiltonian { h: DMatrix::zeros(9, 9), eri: vec![0.0; 9usize.pow(4)], core: 0.0 };
        assert!(build_hamiltonian(&h, 2, 0).is_err());
    }

    #[test]
    fn on_site_repulsion_counts_double_occupancy() {
        let h = HubbardParams { sites: 3, t: 0.0, u: 2.5, periodic: true }.to_hamiltonian().unwrap();
        let m = build_hamiltonian(&h, 3, 1).unwrap();
        for (k, cfg) in m.basis.configs.iter().enumerate() {
            let doubles = (0..3).filter(|&s| cfg.local_index(s) == 3).count();
            assert_eq!(m.get(k, k), 2.5 * doubles as f64);
        }
    }
}
