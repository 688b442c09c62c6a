//! Occupation-number Fock space for spinful orbitals.
//!
//! Spin-orbitals are interleaved site-major with ↑ before ↓: mode `2*site`
//! is `site↑`, mode `2*site + 1` is `site↓`. An occupation configuration
//! with bits `n_m` denotes `(f†_0)^{n_0} (f†_1)^{n_1} ⋯ |0⟩` with creators in
//! ascending mode order; every sign computed here refers to this ordering.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::density::DensityMatrix;
use crate::linalg::CMat;
use crate::{Error, Result, C64};

/// Largest supported number of spatial orbitals.
pub const MAX_SPATIAL: usize = 16;

/// Normalization tolerance for states fed into reduced-state construction.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

/// Number of spatial orbitals of a spinful system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitalBasisSpec {
    n_spatial: usize,
}

impl OrbitalBasisSpec {
    pub fn new(n_spatial: usize) -> Result<Self> {
        if n_spatial == 0 || n_spatial > MAX_SPATIAL {
            return Err(Error::OrbitalCount(n_spatial, MAX_SPATIAL));
        }
        Ok(Self { n_spatial })
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_spatial
    }

    /// Dimension of the full Fock space, `4^d`.
    pub fn fock_dim(&self) -> u64 {
        1u64 << (2 * self.n_spatial)
    }

    pub fn mode(&self, site: usize, spin: Spin) -> usize {
        2 * site + spin.offset()
    }

    fn check_orbital(&self, site: usize) -> Result<()> {
        if site >= self.n_spatial {
            return Err(Error::IndexOutOfRange { index: site, limit: self.n_spatial });
        }
        Ok(())
    }
}

/// Occupation bits of all spin-orbitals (bit `m` is mode `m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationConfig(pub u32);

const UP_MASK: u32 = 0x5555_5555;

impl OccupationConfig {
    pub const VACUUM: OccupationConfig = OccupationConfig(0);

    /// Configuration from explicit per-site occupations `(n↑, n↓)`.
    pub fn from_sites(sites: &[(bool, bool)]) -> Self {
        let mut bits = 0u32;
        for (s, &(up, down)) in sites.iter().enumerate() {
            if up {
                bits |= 1 << (2 * s);
            }
            if down {
                bits |= 1 << (2 * s + 1);
            }
        }
        Self(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_occupied(self, mode: usize) -> bool {
        self.0 >> mode & 1 == 1
    }

    pub fn particle_number(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn n_up(self) -> usize {
        (self.0 & UP_MASK).count_ones() as usize
    }

    pub fn n_down(self) -> usize {
        (self.0 & !UP_MASK).count_ones() as usize
    }

    /// Twice the magnetization, `n↑ − n↓`.
    pub fn sz2(self) -> i32 {
        self.n_up() as i32 - self.n_down() as i32
    }

    /// Local state of one orbital as an index into `{|0⟩, |↑⟩, |↓⟩, |↑↓⟩}`.
    pub fn local_index(self, site: usize) -> usize {
        (self.0 >> (2 * site) & 0b11) as usize
    }

    /// Number of occupied modes strictly below `mode`.
    fn occupied_below(self, mode: usize) -> u32 {
        (self.0 & ((1u32 << mode) - 1)).count_ones()
    }
}

/// Elementary fermionic operator on one spin-orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FermionOp {
    Create(usize),
    Annihilate(usize),
}

impl FermionOp {
    fn mode(self) -> usize {
        match self {
            FermionOp::Create(m) | FermionOp::Annihilate(m) => m,
        }
    }

    /// Action on a basis configuration: image and sign, or `None` for zero.
    pub fn act(self, config: OccupationConfig) -> Option<(OccupationConfig, f64)> {
        let m = self.mode();
        let occupied = config.is_occupied(m);
        let sign = if config.occupied_below(m).is_multiple_of(2) { 1.0 } else { -1.0 };
        match (self, occupied) {
            (FermionOp::Create(_), false) => Some((OccupationConfig(config.0 | 1 << m), sign)),
            (FermionOp::Annihilate(_), true) => Some((OccupationConfig(config.0 & !(1 << m)), sign)),
            _ => None,
        }
    }
}

/// Applies an operator product, written left to right, to one configuration.
/// The rightmost operator acts first.
pub fn act_string(ops: &[FermionOp], config: OccupationConfig) -> Option<(OccupationConfig, f64)> {
    let mut cur = config;
    let mut sign = 1.0;
    for op in ops.iter().rev() {
        let (next, s) = op.act(cur)?;
        cur = next;
        sign *= s;
    }
    Some((cur, sign))
}

/// Amplitudes over occupation configurations. Entries are kept sorted by
/// configuration with no duplicates; exact zeros are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyState {
    spec: OrbitalBasisSpec,
    entries: Vec<(OccupationConfig, C64)>,
}

impl ManyBodyState {
    pub fn zero(spec: OrbitalBasisSpec) -> Self {
        Self { spec, entries: Vec::new() }
    }

    pub fn vacuum(spec: OrbitalBasisSpec) -> Self {
        Self::basis(spec, OccupationConfig::VACUUM)
    }

    pub fn basis(spec: OrbitalBasisSpec, config: OccupationConfig) -> Self {
        Self { spec, entries: vec![(config, C64::new(1.0, 0.0))] }
    }

    /// Builds a state by summing the given amplitudes (duplicates accumulate).
    pub fn from_entries(
        spec: OrbitalBasisSpec,
        entries: impl IntoIterator<Item = (OccupationConfig, C64)>,
    ) -> Result<Self> {
        let limit = spec.n_modes();
        let mut acc: HashMap<OccupationConfig, C64> = HashMap::new();
        for (cfg, amp) in entries {
            if limit < 32 && cfg.0 >> limit != 0 {
                return Err(Error::IndexOutOfRange { index: 31 - cfg.0.leading_zeros() as usize, limit });
            }
            *acc.entry(cfg).or_insert(C64::new(0.0, 0.0)) += amp;
        }
        Ok(Self::from_map(spec, acc))
    }

    fn from_map(spec: OrbitalBasisSpec, map: HashMap<OccupationConfig, C64>) -> Self {
        let mut entries: Vec<_> = map.into_iter().filter(|(_, a)| *a != C64::new(0.0, 0.0)).collect();
        entries.sort_by_key(|(c, _)| *c);
        Self { spec, entries }
    }

    pub fn spec(&self) -> OrbitalBasisSpec {
        self.spec
    }

    pub fn entries(&self) -> &[(OccupationConfig, C64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn amplitude(&self, config: OccupationConfig) -> C64 {
        match self.entries.binary_search_by_key(&config, |(c, _)| *c) {
            Ok(k) => self.entries[k].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_squared() - 1.0).abs() <= NORM_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_squared();
        if n2 == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(self.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(c, a)| (c, a * factor))
            .filter(|(_, a)| *a != C64::new(0.0, 0.0))
            .collect();
        Self { spec: self.spec, entries }
    }

    /// `self + other`.
    pub fn add(&self, other: &ManyBodyState) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::DimensionMismatch {
                expected: self.spec.n_spatial,
                got: other.spec.n_spatial,
            });
        }
        Self::from_entries(self.spec, self.entries.iter().chain(other.entries.iter()).copied())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &ManyBodyState) -> C64 {
        self.entries
            .iter()
            .map(|&(c, a)| a.conj() * other.amplitude(c))
            .sum()
    }

    /// Largest amplitude deviation between two states.
    pub fn max_abs_diff(&self, other: &ManyBodyState) -> f64 {
        let mut worst: f64 = 0.0;
        for &(c, a) in &self.entries {
            worst = worst.max((a - other.amplitude(c)).norm());
        }
        for &(c, a) in &other.entries {
            worst = worst.max((a - self.amplitude(c)).norm());
        }
        worst
    }
}

/// Applies an operator product (written left to right, rightmost acts first).
///
/// The image is not renormalized; annihilating an empty mode or creating an
/// occupied one gives the zero state.
pub fn apply_operator_string(ops: &[FermionOp], state: &ManyBodyState) -> Result<ManyBodyState> {
    let limit = state.spec.n_modes();
    if let Some(bad) = ops.iter().find(|op| op.mode() >= limit) {
        return Err(Error::IndexOutOfRange { index: bad.mode(), limit });
    }
    let mut out: HashMap<OccupationConfig, C64> = HashMap::with_capacity(state.len());
    for &(cfg, amp) in &state.entries {
        if let Some((img, sign)) = act_string(ops, cfg) {
            *out.entry(img).or_insert(C64::new(0.0, 0.0)) += amp * sign;
        }
    }
    Ok(ManyBodyState::from_map(state.spec, out))
}

/// Applies `Σ_k coeff_k · (operator string)_k`.
pub fn apply_linear_combination(
    terms: &[(C64, Vec<FermionOp>)],
    state: &ManyBodyState,
) -> Result<ManyBodyState> {
    let mut out: HashMap<OccupationConfig, C64> = HashMap::new();
    for (coeff, ops) in terms {
        let img = apply_operator_string(ops, state)?;
        for (cfg, amp) in img.entries {
            *out.entry(cfg).or_insert(C64::new(0.0, 0.0)) += amp * coeff;
        }
    }
    Ok(ManyBodyState::from_map(state.spec, out))
}

/// Result of projecting a state onto a particle-number (and magnetization)
/// sector.
#[derive(Debug, Clone)]
pub struct SectorProjection {
    /// Renormalized component, or the zero state when the sector is empty.
    pub state: ManyBodyState,
    /// Squared norm of the component before renormalization.
    pub weight: f64,
    /// True when the component vanishes.
    pub empty: bool,
}

fn in_sector(cfg: OccupationConfig, n: usize, sz2: Option<i32>) -> bool {
    cfg.particle_number() == n && sz2.is_none_or(|s| cfg.sz2() == s)
}

/// Projects onto total particle number `n` and, optionally, `2·S_z = sz2`.
pub fn sector_project(state: &ManyBodyState, n: usize, sz2: Option<i32>) -> SectorProjection {
    let entries: Vec<_> = state
        .entries
        .iter()
        .copied()
        .filter(|&(c, _)| in_sector(c, n, sz2))
        .collect();
    let projected = ManyBodyState { spec: state.spec, entries };
    let weight = projected.norm_squared();
    if weight == 0.0 {
        return SectorProjection { state: ManyBodyState::zero(state.spec), weight, empty: true };
    }
    let state = projected.scaled(C64::new(1.0 / weight.sqrt(), 0.0));
    SectorProjection { state, weight, empty: false }
}

/// `P ρ P` for a matrix on the full Fock space (index = configuration bits).
/// Linear and unnormalized, so it is an idempotent self-adjoint map.
pub fn sector_project_matrix(
    mat: &CMat,
    spec: OrbitalBasisSpec,
    n: usize,
    sz2: Option<i32>,
) -> Result<CMat> {
    let dim = spec.fock_dim() as usize;
    if mat.nrows() != dim || mat.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: mat.nrows() });
    }
    let keep: Vec<bool> = (0..dim as u32).map(|b| in_sector(OccupationConfig(b), n, sz2)).collect();
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        if keep[i] && keep[j] {
            mat[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Sign and local index of a configuration after moving the creators of the
/// listed orbitals (in list order, ↑ before ↓) in front of all others.
fn split_config(cfg: OccupationConfig, orbitals: &[usize], local_mask: u32) -> (usize, u32, f64) {
    let mut local_modes: Vec<usize> = Vec::with_capacity(2 * orbitals.len());
    let mut index = 0usize;
    for &o in orbitals {
        let li = cfg.local_index(o);
        index = index * 4 + li;
        for s in 0..2 {
            if li >> s & 1 == 1 {
                local_modes.push(2 * o + s);
            }
        }
    }
    let rest = cfg.0 & !local_mask;
    let mut inversions = 0u32;
    for (a, &x) in local_modes.iter().enumerate() {
        for &y in &local_modes[a + 1..] {
            if x > y {
                inversions += 1;
            }
        }
        inversions += (rest & ((1u32 << x) - 1)).count_ones();
    }
    let sign = if inversions.is_multiple_of(2) { 1.0 } else { -1.0 };
    (index, rest, sign)
}

/// Reduced state of a set of distinct spatial orbitals.
///
/// The basis is `{|0⟩,|↑⟩,|↓⟩,|↑↓⟩}^{⊗k}` with the first listed orbital as
/// the slowest index. Entries connecting states of different total parity on
/// the subset are set to zero; only parity-even observables fix them.
pub fn orbital_subset_rdm(state: &ManyBodyState, orbitals: &[usize]) -> Result<DensityMatrix> {
    if orbitals.is_empty() {
        return Err(Error::InvalidArgument("empty orbital subset".into()));
    }
    for (k, &o) in orbitals.iter().enumerate() {
        state.spec.check_orbital(o)?;
        if orbitals[..k].contains(&o) {
            return Err(Error::SameOrbital(o));
        }
    }
    let n2 = state.norm_squared();
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n2));
    }
    let local_mask = orbitals.iter().fold(0u32, |m, &o| m | 0b11 << (2 * o));
    let dim = 1usize << (2 * orbitals.len());

    let mut groups: HashMap<u32, Vec<(usize, C64)>> = HashMap::new();
    for &(cfg, amp) in &state.entries {
        let (idx, rest, sign) = split_config(cfg, orbitals, local_mask);
        groups.entry(rest).or_default().push((idx, amp * sign));
    }
    let mut rho = CMat::zeros(dim, dim);
    for phi in groups.values() {
        for &(i, a) in phi {
            for &(j, b) in phi {
                rho[(i, j)] += a * b.conj();
            }
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            if (i.count_ones() + j.count_ones()) % 2 == 1 {
                rho[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    DensityMatrix::new(rho)
}

/// 16×16 reduced state of orbitals `l` (factor A) and `l2` (factor B).
pub fn two_orbital_rdm(state: &ManyBodyState, l: usize, l2: usize) -> Result<DensityMatrix> {
    if l == l2 {
        return Err(Error::SameOrbital(l));
    }
    orbital_subset_rdm(state, &[l, l2])
}

/// Index of `|a⟩_A ⊗ |b⟩_B` in the two-orbital basis.
pub fn pair_index(a: usize, b: usize) -> usize {
    4 * a + b
}

/// Local orbital states, indices into the 4-dim orbital Fock space.
pub mod local {
    pub const EMPTY: usize = 0;
    pub const UP: usize = 1;
    pub const DOWN: usize = 2;
    pub const DOUBLE: usize = 3;

    pub fn number(idx: usize) -> usize {
        idx.count_ones() as usize
    }

    /// Twice the local magnetization.
    pub fn sz2(idx: usize) -> i32 {
        (idx & 1) as i32 - (idx >> 1 & 1) as i32
    }
}

/// Fermionic exchange of the two orbitals of a pair, as a 16×16 unitary:
/// `|a⟩_A|b⟩_B ↦ (−1)^{p(a)p(b)} |b⟩_A|a⟩_B`.
pub fn pair_reflection() -> CMat {
    let mut r = CMat::zeros(16, 16);
    for a in 0..4 {
        for b in 0..4 {
            let sign = if local::number(a) % 2 == 1 && local::number(b) % 2 == 1 { -1.0 } else { 1.0 };
            r[(pair_index(b, a), pair_index(a, b))] = C64::new(sign, 0.0);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn spec(d: usize) -> OrbitalBasisSpec {
        OrbitalBasisSpec::new(d).unwrap()
    }

    const UP0: usize = 0;
    const DN0: usize = 1;
    const UP1: usize = 2;
    const DN1: usize = 3;

    #[test]
    fn basis_guards_dimension() {
        assert!(OrbitalBasisSpec::new(0).is_err());
        assert!(OrbitalBasisSpec::new(17).is_err());
        assert_eq!(spec(2).fock_dim(), 16);
    }

    #[test]
    fn single_creation_on_vacuum() {
        let s = apply_operator_string(&[FermionOp::Create(UP0)], &ManyBodyState::vacuum(spec(2))).unwrap();
        let expect = OccupationConfig::from_sites(&[(true, false), (false, false)]);
        assert_eq!(s.entries(), &[(expect, C64::new(1.0, 0.0))]);
    }

    #[test]
    fn creation_order_sign() {
        let vac = ManyBodyState::vacuum(spec(2));
        let a = apply_operator_string(&[FermionOp::Create(UP1), FermionOp::Create(UP0)], &vac).unwrap();
        let b = apply_operator_string(&[FermionOp::Create(UP0), FermionOp::Create(UP1)], &vac).unwrap();
        assert!(a.add(&b).unwrap().is_empty());
        assert_eq!(b.entries()[0].1, C64::new(1.0, 0.0));
    }

    #[test]
    fn annihilating_empty_mode_gives_zero() {
        let s = ManyBodyState::basis(spec(2), OccupationConfig::from_sites(&[(false, false), (true, false)]));
        let out = apply_operator_string(&[FermionOp::Annihilate(UP0)], &s).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn out_of_range_mode_is_rejected() {
        let vac = ManyBodyState::vacuum(spec(2));
        assert!(matches!(
            apply_operator_string(&[FermionOp::Create(4)], &vac),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn sector_projection_examples() {
        let sp = spec(2);
        let vac = ManyBodyState::vacuum(sp);
        let p = sector_project(&vac, 0, None);
        assert!(!p.empty && p.weight == 1.0 && p.state == vac);
        let p = sector_project(&vac, 2, None);
        assert!(p.empty && p.state.is_empty());

        let a = OccupationConfig::from_sites(&[(true, false), (false, false)]);
        let b = OccupationConfig::from_sites(&[(true, true), (true, false)]);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = ManyBodyState::from_entries(sp, [(a, h), (b, h)]).unwrap();
        let p = sector_project(&psi, 1, None);
        assert!((p.weight - 0.5).abs() < 1e-15);
        assert!(p.state.max_abs_diff(&ManyBodyState::basis(sp, a)) < 1e-15);
        let p = sector_project(&psi, 1, Some(-1));
        assert!(p.empty);
    }

    #[test]
    fn product_state_rdm() {
        let sp = spec(2);
        let cfg = OccupationConfig::from_sites(&[(true, false), (false, true)]);
        let rho = two_orbital_rdm(&ManyBodyState::basis(sp, cfg), 0, 1).unwrap();
        let k = pair_index(local::UP, local::DOWN);
        let mut expect = CMat::zeros(16, 16);
        expect[(k, k)] = C64::new(1.0, 0.0);
        assert!(max_abs_diff(rho.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn psi_plus_rdm_is_pure() {
        let sp = spec(2);
        let vac = ManyBodyState::vacuum(sp);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = apply_linear_combination(
            &[
                (h, vec![FermionOp::Create(UP0), FermionOp::Create(DN1)]),
                (h, vec![FermionOp::Create(DN0), FermionOp::Create(UP1)]),
            ],
            &vac,
        )
        .unwrap();
        let rho = two_orbital_rdm(&psi, 0, 1).unwrap();
        let mut v = vec![0.0; 16];
        v[pair_index(local::UP, local::DOWN)] = h.re;
        v[pair_index(local::DOWN, local::UP)] = h.re;
        let expect = DensityMatrix::pure_real(&v).unwrap();
        assert!(max_abs_diff(rho.matrix(), expect.matrix()) < 1e-15);
        let ev = rho.eigenvalues();
        assert!((ev[15] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn swapped_orbital_order_transposes_factors() {
        // |↑⟩_0 |↑⟩_1 seen as (1, 0) picks up the exchange sign only in
        // coherences, never in populations.
        let sp = spec(3);
        let vac = ManyBodyState::vacuum(sp);
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = apply_linear_combination(
            &[
                (h, vec![FermionOp::Create(UP0), FermionOp::Create(4)]),
                (h, vec![FermionOp::Create(UP1), FermionOp::Create(4)]),
            ],
            &vac,
        )
        .unwrap();
        let ab = two_orbital_rdm(&psi, 0, 1).unwrap();
        let ba = two_orbital_rdm(&psi, 1, 0).unwrap();
        let i = pair_index(local::UP, local::EMPTY);
        let j = pair_index(local::EMPTY, local::UP);
        assert!((ab.get(i, i).re - 0.5).abs() < 1e-15);
        assert!((ba.get(j, j).re - 0.5).abs() < 1e-15);
        assert!((ab.get(i, j).re.abs() - 0.5).abs() < 1e-15);
        assert!((ba.get(j, i).re.abs() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rdm_rejects_bad_input() {
        let vac = ManyBodyState::vacuum(spec(2));
        assert!(matches!(two_orbital_rdm(&vac, 1, 1), Err(Error::SameOrbital(1))));
        assert!(two_orbital_rdm(&vac, 0, 2).is_err());
        let unnorm = vac.scaled(C64::new(2.0, 0.0));
        assert!(matches!(two_orbital_rdm(&unnorm, 0, 1), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn matrix_projection_is_idempotent() {
        let sp = spec(1);
        let m = CMat::from_fn(4, 4, |i, j| C64::new((i + j) as f64, (i as f64) - (j as f64)));
        let p = sector_project_matrix(&m, sp, 1, None).unwrap();
        let pp = sector_project_matrix(&p, sp, 1, None).unwrap();
        assert_eq!(p, pp);
        assert_eq!(p[(1, 2)], m[(1, 2)]);
        assert_eq!(p[(0, 1)], C64::new(0.0, 0.0));
    }
}
