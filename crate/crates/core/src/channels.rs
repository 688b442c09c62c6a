//! Superselection pinching maps, SWAP, and the superselected swap protocol.
//!
//! Channels act directly on density matrices; nothing here stores a
//! superoperator.

use crate::density::{strides, DensityMatrix};
use crate::linalg::{self, CMat};
use crate::{Error, Result, C64};

/// One tensor factor of a multipartite state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalFactor {
    /// Spinful orbital, basis `{|0⟩, |↑⟩, |↓⟩, |↑↓⟩}`.
    Orbital,
    /// Spinless fermionic mode, occupation basis `{|0⟩, |1⟩}`.
    Mode,
    /// Qubit register, computational basis.
    Qubit,
    /// Two-qubit register used as the swap partner of a spinful orbital; its
    /// basis is identified with the orbital occupation basis.
    QubitPair,
}

impl LocalFactor {
    pub fn dim(self) -> usize {
        match self {
            LocalFactor::Orbital | LocalFactor::QubitPair => 4,
            LocalFactor::Mode | LocalFactor::Qubit => 2,
        }
    }

    /// Whether superselection applies to the factor.
    pub fn is_fermionic(self) -> bool {
        matches!(self, LocalFactor::Orbital | LocalFactor::Mode)
    }

    /// Occupation number of a basis state. Registers use the occupation
    /// basis they are identified with.
    pub fn number(self, idx: usize) -> usize {
        idx.count_ones() as usize
    }

    pub fn parity(self, idx: usize) -> usize {
        self.number(idx) % 2
    }

    /// Twice the local magnetization; zero for spinless factors.
    pub fn sz2(self, idx: usize) -> i32 {
        match self {
            LocalFactor::Orbital | LocalFactor::QubitPair => crate::fock::local::sz2(idx),
            LocalFactor::Mode | LocalFactor::Qubit => 0,
        }
    }

    pub fn max_number(self) -> usize {
        match self {
            LocalFactor::Orbital | LocalFactor::QubitPair => 2,
            LocalFactor::Mode | LocalFactor::Qubit => 1,
        }
    }
}

/// Ordered tensor factorization; the first factor is the slowest index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    factors: Vec<LocalFactor>,
}

impl Partition {
    pub fn new(factors: Vec<LocalFactor>) -> Self {
        Self { factors }
    }

    pub fn two_orbital() -> Self {
        Self::new(vec![LocalFactor::Orbital, LocalFactor::Orbital])
    }

    pub fn factors(&self) -> &[LocalFactor] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    /// Local basis indices of a global basis index.
    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let dims = self.dims();
        let mut out = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            out[k] = idx % dims[k];
            idx /= dims[k];
        }
        out
    }

    fn check(&self, rho: &DensityMatrix, targets: &[usize]) -> Result<()> {
        if self.dim() != rho.dim() {
            return Err(Error::InvalidPartition(format!(
                "factor dimensions multiply to {}, state has dimension {}",
                self.dim(),
                rho.dim()
            )));
        }
        if let Some(&t) = targets.iter().find(|&&t| t >= self.factors.len()) {
            return Err(Error::InvalidPartition(format!(
                "factor {t} does not exist ({} factors)",
                self.factors.len()
            )));
        }
        Ok(())
    }
}

/// Even/odd projectors of a single local factor.
#[derive(Debug, Clone)]
pub struct LocalParityProjectors {
    pub even: CMat,
    pub odd: CMat,
}

impl LocalParityProjectors {
    pub fn new(factor: LocalFactor) -> Self {
        let n = factor.dim();
        let diag = |p: usize| {
            CMat::from_fn(n, n, |i, j| {
                if i == j && factor.parity(i) == p {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        };
        Self { even: diag(0), odd: diag(1) }
    }
}

/// Local particle-number projectors `P_0, P_1, …` of a single factor.
#[derive(Debug, Clone)]
pub struct LocalNumberProjectors {
    pub projectors: Vec<CMat>,
}

impl LocalNumberProjectors {
    pub fn new(factor: LocalFactor) -> Self {
        let n = factor.dim();
        let projectors = (0..=factor.max_number())
            .map(|k| {
                CMat::from_fn(n, n, |i, j| {
                    if i == j && factor.number(i) == k {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Self { projectors }
    }
}

/// Keeps `ρ_ij` only where `label(factor, digit)` agrees between `i` and `j`
/// on every target factor. This is `Σ_s P_s ρ P_s` for diagonal projector
/// families.
fn pinch(
    rho: &DensityMatrix,
    partition: &Partition,
    targets: &[usize],
    label: impl Fn(LocalFactor, usize) -> usize,
) -> Result<DensityMatrix> {
    partition.check(rho, targets)?;
    let n = rho.dim();
    let labels: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let d = partition.digits(i);
            targets.iter().map(|&t| label(partition.factors[t], d[t])).collect()
        })
        .collect();
    let m = rho.matrix();
    let out = CMat::from_fn(n, n, |i, j| {
        if labels[i] == labels[j] {
            m[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(DensityMatrix::from_raw(out))
}

/// Local parity superselection `𝒢_Π` on each target factor.
pub fn gpi_local(rho: &DensityMatrix, partition: &Partition, targets: &[usize]) -> Result<DensityMatrix> {
    pinch(rho, partition, targets, |f, i| f.parity(i))
}

/// Local particle-number superselection `𝒢_N` on each target factor.
pub fn gn_local(rho: &DensityMatrix, partition: &Partition, targets: &[usize]) -> Result<DensityMatrix> {
    pinch(rho, partition, targets, |f, i| f.number(i))
}

/// `𝒢_{Π_A} ⊗ 𝒢_{Π_B}` on a two-orbital state.
pub fn gpi_two_orbital(rho: &DensityMatrix) -> Result<DensityMatrix> {
    gpi_local(rho, &Partition::two_orbital(), &[0, 1])
}

/// `𝒢_{N_A} ⊗ 𝒢_{N_B}` on a two-orbital state.
pub fn gn_two_orbital(rho: &DensityMatrix) -> Result<DensityMatrix> {
    gn_local(rho, &Partition::two_orbital(), &[0, 1])
}

fn permute_indices(partition: &Partition, perm: &[usize]) -> Vec<usize> {
    // new factor k holds old factor perm[k]
    let dims = partition.dims();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides = strides(&new_dims);
    (0..partition.dim())
        .map(|i| {
            let d = partition.digits(i);
            perm.iter().enumerate().map(|(k, &p)| d[p] * new_strides[k]).sum()
        })
        .collect()
}

/// Reorders tensor factors: factor `k` of the result is factor `perm[k]` of
/// the input.
pub fn permute_factors(rho: &DensityMatrix, partition: &Partition, perm: &[usize]) -> Result<DensityMatrix> {
    partition.check(rho, perm)?;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..partition.factors.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidPartition(format!("{perm:?} is not a permutation")));
    }
    let map = permute_indices(partition, perm);
    let n = rho.dim();
    let m = rho.matrix();
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok(DensityMatrix::from_raw(out))
}

/// SWAP of two equal-dimension factors, `|i⟩⟨j| ⊗ |k⟩⟨l| ↦ |k⟩⟨l| ⊗ |i⟩⟨j|`.
pub fn swap_channel(rho: &DensityMatrix, partition: &Partition, x: usize, y: usize) -> Result<DensityMatrix> {
    partition.check(rho, &[x, y])?;
    let (fx, fy) = (partition.factors[x], partition.factors[y]);
    if fx.dim() != fy.dim() {
        return Err(Error::DimensionMismatch { expected: fx.dim(), got: fy.dim() });
    }
    let mut perm: Vec<usize> = (0..partition.factors.len()).collect();
    perm.swap(x, y);
    permute_factors(rho, partition, &perm)
}

/// `𝒢_Π ∘ 𝒮 ∘ 𝒢_Π` where the pinching acts on the fermionic factor `orbital`
/// and the SWAP exchanges it with `register`.
pub fn superselected_swap(
    rho: &DensityMatrix,
    partition: &Partition,
    orbital: usize,
    register: usize,
) -> Result<DensityMatrix> {
    partition.check(rho, &[orbital, register])?;
    if !partition.factors[orbital].is_fermionic() {
        return Err(Error::InvalidPartition(format!("factor {orbital} is not fermionic")));
    }
    let step = gpi_local(rho, partition, &[orbital])?;
    let step = swap_channel(&step, partition, orbital, register)?;
    gpi_local(&step, partition, &[orbital])
}

/// Output of the two-lab swap protocol.
#[derive(Debug, Clone)]
pub struct SwapOutcome {
    /// Final state of the two registers, `𝒢_{Π_A} ⊗ 𝒢_{Π_B}[ρ_AB]`.
    pub register_out: DensityMatrix,
    /// Final state of the two orbitals, the pinched register input.
    pub orbital_out: DensityMatrix,
    /// Full four-factor output, ordered `(φ_A, q_A, φ_B, q_B)`.
    pub joint: DensityMatrix,
    pub partition: Partition,
}

/// Local factor kinds for a two-orbital input of the given dimension.
fn protocol_factors(dim: usize) -> Result<(LocalFactor, LocalFactor)> {
    match dim {
        4 => Ok((LocalFactor::Mode, LocalFactor::Qubit)),
        16 => Ok((LocalFactor::Orbital, LocalFactor::QubitPair)),
        other => Err(Error::InvalidPartition(format!(
            "two-orbital state must have dimension 4 (spinless) or 16 (spinful), got {other}"
        ))),
    }
}

/// Simulates Alice and Bob each applying the superselected swap between
/// their orbital and their register.
///
/// `rho_ab` lives on two orbitals (spinless modes for dimension 4, spinful
/// orbitals for dimension 16); `sigma_ab` on the matching registers.
pub fn run_swap_protocol(rho_ab: &DensityMatrix, sigma_ab: &DensityMatrix) -> Result<SwapOutcome> {
    let (orb, reg) = protocol_factors(rho_ab.dim())?;
    if sigma_ab.dim() != rho_ab.dim() {
        return Err(Error::DimensionMismatch { expected: rho_ab.dim(), got: sigma_ab.dim() });
    }
    // ρ_AB ⊗ σ_AB is ordered (φ_A, φ_B, q_A, q_B)
    let staged = Partition::new(vec![orb, orb, reg, reg]);
    let product = rho_ab.kron(sigma_ab);
    let joint = permute_factors(&product, &staged, &[0, 2, 1, 3])?;
    let partition = Partition::new(vec![orb, reg, orb, reg]);
    let joint = superselected_swap(&joint, &partition, 0, 1)?;
    let joint = superselected_swap(&joint, &partition, 2, 3)?;
    let dims = partition.dims();
    let register_out = joint.partial_trace(&dims, &[1, 3])?;
    let orbital_out = joint.partial_trace(&dims, &[0, 2])?;
    Ok(SwapOutcome { register_out, orbital_out, joint, partition })
}

/// Closed-form filter result `Σ_{s,s'} P_s⊗P_{s'} ρ P_s⊗P_{s'}` on a
/// two-orbital state of dimension 4 or 16.
pub fn parity_filter(rho_ab: &DensityMatrix) -> Result<DensityMatrix> {
    let (orb, _) = protocol_factors(rho_ab.dim())?;
    let projectors = LocalParityProjectors::new(orb);
    let family = [&projectors.even, &projectors.odd];
    let mut out = CMat::zeros(rho_ab.dim(), rho_ab.dim());
    for pa in family {
        for pb in family {
            let p = linalg::kron(pa, pb);
            out += &p * rho_ab.matrix() * &p;
        }
    }
    Ok(DensityMatrix::from_raw(out))
}

/// Exchange of the two factors of a pair of identical fermionic factors,
/// `|a⟩|b⟩ ↦ (−1)^{p(a)p(b)} |b⟩|a⟩`.
pub fn fermionic_reflection(factor: LocalFactor) -> CMat {
    let d = factor.dim();
    let mut r = CMat::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            let odd = factor.is_fermionic() && factor.parity(a) == 1 && factor.parity(b) == 1;
            r[(b * d + a, a * d + b)] = C64::new(if odd { -1.0 } else { 1.0 }, 0.0);
        }
    }
    r
}

/// Frobenius norm of the coherences a pinching removed.
pub fn erased_coherence(before: &DensityMatrix, after: &DensityMatrix) -> f64 {
    (before.matrix() - after.matrix()).norm()
}
