//! Interacting electrons: integral files, Hubbard rings, exact ground states
//! and orbital-pair entanglement of those ground states.

mod fcidump;
mod hamiltonian;
mod lanczos;
mod reference;

pub use fcidump::{parse_fcidump, read_fcidump, FcidumpData, CONSISTENCY_TOL};
pub use hamiltonian::{
    build_hamiltonian, build_hamiltonian_capped, ElectronicHamiltonian, HubbardParams, SectorBasis, SparseHamiltonian,
    DEFAULT_NNZ_CAP, MAX_ED_ORBITALS,
};
pub use lanczos::{lowest_eigenpair, LanczosOptions, LanczosResult};
pub use reference::{compare_with_reference, lookup, reference_table, Comparison, ComputedPair, Deviation, ReferenceTableEntry};

use serde::Serialize;

use crate::entanglement::{self, EntanglementResult, ReeOptions, SsrKind};
use crate::fock::{two_orbital_rdm, ManyBodyState};
use crate::linalg::eigh_real;
use crate::{channels, Error, Result, C64};

/// Sectors smaller than this are diagonalized densely.
pub const DENSE_LIMIT: usize = 2000;
/// Ground levels closer than this are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: ManyBodyState,
    /// Distance to the next level, when the solver resolves it.
    pub gap: Option<f64>,
    pub degenerate: bool,
    pub solver: Solver,
    pub residual: f64,
}

pub fn ground_state(h: &SparseHamiltonian) -> Result<GroundState> {
    ground_state_with(h, Solver::Auto, &LanczosOptions::default())
}

/// Lowest eigenpair. A degenerate ground level is flagged, not resolved:
/// the returned vector is then one arbitrary ground vector.
pub fn ground_state_with(h: &SparseHamiltonian, solver: Solver, opts: &LanczosOptions) -> Result<GroundState> {
    let n = h.dim();
    let solver = match solver {
        Solver::Auto if n < DENSE_LIMIT => Solver::Dense,
        Solver::Auto => Solver::Lanczos,
        s => s,
    };
    let (energy, vector, next, residual) = match solver {
        Solver::Dense => {
            let (vals, vecs) = eigh_real(&h.to_dense());
            let v: Vec<f64> = vecs.column(0).iter().copied().collect();
            let mut hv = vec![0.0; n];
            h.matvec(&v, &mut hv);
            let res = hv.iter().zip(&v).map(|(a, b)| (a - vals[0] * b).powi(2)).sum::<f64>().sqrt();
            (vals[0], v, vals.get(1).copied(), res)
        }
        _ => {
            let r = lowest_eigenpair(h, opts)?;
            (r.energy, r.vector, r.next_energy, r.residual)
        }
    };
    let gap = next.map(|e| e - energy);
    let degenerate = gap.is_some_and(|g| g < DEGENERACY_GAP);
    if degenerate {
        log::warn!("ground level is degenerate (gap {:e}); returning an arbitrary ground vector", gap.unwrap_or(0.0));
    }
    let entries: Vec<_> = h
        .basis
        .configs
        .iter()
        .zip(&vector)
        .filter(|(_, &a)| a != 0.0)
        .map(|(&c, &a)| (c, C64::new(a, 0.0)))
        .collect();
    let state = ManyBodyState::from_entries(h.basis.spec, entries)?.normalized()?;
    Ok(GroundState { energy, state, gap, degenerate, solver, residual })
}

/// Entanglement of orbitals `l` and `l2` of a many-body state.
///
/// Number SSR uses the closed form when the pair state is symmetric under
/// exchanging the orbitals; everything else uses the numerical relative
/// entropy.
pub fn orbital_pair_entanglement(state: &ManyBodyState, l: usize, l2: usize, ssr: SsrKind) -> Result<EntanglementResult> {
    orbital_pair_entanglement_with(state, l, l2, ssr, &ReeOptions::default())
}

pub fn orbital_pair_entanglement_with(
    state: &ManyBodyState,
    l: usize,
    l2: usize,
    ssr: SsrKind,
    opts: &ReeOptions,
) -> Result<EntanglementResult> {
    let rho = two_orbital_rdm(state, l, l2)?;
    match ssr {
        SsrKind::Number => match entanglement::nssr_closed_form(&channels::gn_two_orbital(&rho)?) {
            Err(Error::SymmetryViolation(why)) => {
                log::info!("pair state is not symmetric ({why}); using the numerical measure");
                entanglement::ree_numeric(&rho, SsrKind::Number, opts)
            }
            other => other,
        },
        other => entanglement::ree_numeric(&rho, other, opts),
    }
}

/// Separation of two sites on a ring of `sites` sites.
pub fn ring_separation(l: usize, l2: usize, sites: usize) -> usize {
    let d = l.abs_diff(l2) % sites;
    d.min(sites - d)
}

/// Checks a sector request against the orbital limit before building.
pub fn check_orbital_limit(norb: usize) -> Result<()> {
    if norb > MAX_ED_ORBITALS {
        return Err(Error::InvalidArgument(format!(
            "{norb} spatial orbitals exceed the exact-diagonalization limit of {MAX_ED_ORBITALS}"
        )));
    }
    Ok(())
}
