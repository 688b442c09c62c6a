//! Entropies, the symmetric two-orbital decomposition, the closed-form N-SSR
//! measure and the numerical relative entropy of entanglement.

mod ree;

pub use ree::{pssr_entanglement, ree_numeric, ReeOptions};

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

use serde::Serialize;

use crate::channels::{self, fermionic_reflection, LocalFactor};
use crate::density::DensityMatrix;
use crate::fock::{local, pair_index};
use crate::linalg::{self, entropy_term, CMat};
use crate::{Error, Result, C64};

/// Tolerance for the symmetry checks in [`decompose_symmetric`].
pub const SYMMETRY_TOL: f64 = 1e-8;
/// Negative weights above this are clipped to zero.
pub const WEIGHT_FLOOR: f64 = 1e-10;

/// `S(ρ) = −Tr ρ ln ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues().into_iter().map(entropy_term).sum()
}

/// Eigenvalues of `σ` below this count as outside its support.
const SUPPORT_TOL: f64 = 1e-12;

/// `S(ρ‖σ) = Tr ρ (ln ρ − ln σ)`; `f64::INFINITY` when the support of `ρ` is
/// not contained in that of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    let (vals, vecs) = linalg::eigh(sigma.matrix());
    let rotated = vecs.adjoint() * rho.matrix() * &vecs;
    let mut cross = 0.0;
    for (i, &l) in vals.iter().enumerate() {
        let w = rotated[(i, i)].re;
        if l <= SUPPORT_TOL {
            if w > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += w * l.ln();
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

/// Entanglement of a bipartite pure state: the entropy of either reduction.
pub fn pure_state_entanglement(rho: &DensityMatrix, dims: [usize; 2]) -> Result<f64> {
    let purity = (rho.matrix() * rho.matrix()).trace().re;
    if (purity - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("state is not pure (purity {purity})")));
    }
    Ok(von_neumann_entropy(&rho.partial_trace(&dims, &[0])?))
}

/// Which superselection rule constrains the local operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SsrKind {
    None,
    Parity,
    Number,
}

impl SsrKind {
    /// Applies the matching local pinching on both factors.
    pub fn project(self, rho: &DensityMatrix, factor: LocalFactor) -> Result<DensityMatrix> {
        let partition = channels::Partition::new(vec![factor, factor]);
        match self {
            SsrKind::None => Ok(rho.clone()),
            SsrKind::Parity => channels::gpi_local(rho, &partition, &[0, 1]),
            SsrKind::Number => channels::gn_local(rho, &partition, &[0, 1]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    NumericRee,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub iterations: usize,
    /// Frank–Wolfe duality gap; an upper bound on `value − E`.
    pub gap: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementResult {
    /// Natural-log units.
    pub value: f64,
    pub ssr: SsrKind,
    pub method: Method,
    pub diagnostics: Option<Diagnostics>,
}

impl EntanglementResult {
    pub fn closed_form(value: f64, ssr: SsrKind) -> Self {
        Self { value, ssr, method: Method::ClosedForm, diagnostics: None }
    }

    /// Value in bits.
    pub fn bits(&self) -> f64 {
        self.value / LN_2
    }

    pub fn in_base(&self, base: LogBase) -> f64 {
        match base {
            LogBase::E => self.value,
            LogBase::Two => self.bits(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    E,
    Two,
}

/// Sector decomposition of a two-orbital state that conserves particle
/// number and magnetization and is symmetric under exchanging the orbitals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricTwoOrbitalState {
    pub p_plus: f64,
    pub p_minus: f64,
    pub q_plus: f64,
    pub q_minus: f64,
    /// `weights[n_A][n_B]`: probability of local occupations `(n_A, n_B)`.
    pub weights: [[f64; 3]; 3],
}

impl SymmetricTwoOrbitalState {
    /// Reads the weights without checking any symmetry.
    pub fn extract(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 16 {
            return Err(Error::DimensionMismatch { expected: 16, got: rho.dim() });
        }
        let overlap = |a: (usize, usize), b: (usize, usize), sign: f64| {
            let v = [pair_index(a.0, a.1), pair_index(b.0, b.1)];
            let s = [FRAC_1_SQRT_2, sign * FRAC_1_SQRT_2];
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    acc += rho.get(v[i], v[j]) * (s[i] * s[j]);
                }
            }
            clip(acc.re)
        };
        let phi = ((local::EMPTY, local::DOUBLE), (local::DOUBLE, local::EMPTY));
        let psi = ((local::UP, local::DOWN), (local::DOWN, local::UP));
        let mut weights = [[0.0; 3]; 3];
        for a in 0..4 {
            for b in 0..4 {
                weights[local::number(a)][local::number(b)] += rho.get(pair_index(a, b), pair_index(a, b)).re;
            }
        }
        for row in &mut weights {
            for w in row.iter_mut() {
                *w = clip(*w);
            }
        }
        Ok(Self {
            p_plus: overlap(phi.0, phi.1, 1.0),
            p_minus: overlap(phi.0, phi.1, -1.0),
            q_plus: overlap(psi.0, psi.1, 1.0),
            q_minus: overlap(psi.0, psi.1, -1.0),
            weights,
        })
    }

    /// `Tr[P̂_{1,1} ρ]`.
    pub fn w11(&self) -> f64 {
        self.weights[1][1]
    }

    pub fn t(&self) -> f64 {
        self.q_plus.max(self.q_minus)
    }

    pub fn r(&self) -> f64 {
        (self.w11() - self.t()).max(0.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().flatten().sum()
    }
}

fn clip(w: f64) -> f64 {
    if (-WEIGHT_FLOOR..0.0).contains(&w) {
        0.0
    } else {
        w
    }
}

/// Largest `|ρ_ij|` between basis states with different `label`.
fn charge_violation(rho: &CMat, label: impl Fn(usize) -> i32) -> f64 {
    let n = rho.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if label(i) != label(j) {
                worst = worst.max(rho[(i, j)].norm());
            }
        }
    }
    worst
}

/// Decomposes a symmetric two-orbital state, failing when it does not
/// commute with total number, total magnetization and orbital exchange.
pub fn decompose_symmetric(rho: &DensityMatrix) -> Result<SymmetricTwoOrbitalState> {
    if rho.dim() != 16 {
        return Err(Error::DimensionMismatch { expected: 16, got: rho.dim() });
    }
    let m = rho.matrix();
    let number = charge_violation(m, |i| (local::number(i / 4) + local::number(i % 4)) as i32);
    if number > SYMMETRY_TOL {
        return Err(Error::SymmetryViolation(format!("particle number broken by {number:e}")));
    }
    let sz = charge_violation(m, |i| local::sz2(i / 4) + local::sz2(i % 4));
    if sz > SYMMETRY_TOL {
        return Err(Error::SymmetryViolation(format!("magnetization broken by {sz:e}")));
    }
    let r = fermionic_reflection(LocalFactor::Orbital);
    let refl = linalg::max_abs_diff(&(&r * m * r.adjoint()), m);
    if refl > SYMMETRY_TOL {
        return Err(Error::SymmetryViolation(format!("orbital exchange broken by {refl:e}")));
    }
    let state = SymmetricTwoOrbitalState::extract(rho)?;
    if state.q_plus + state.q_minus > state.w11() + WEIGHT_FLOOR {
        return Err(Error::SymmetryViolation("q₊ + q₋ exceeds the (1,1) weight".into()));
    }
    Ok(state)
}

/// Closed-form N-SSR entanglement in terms of `r` and `t`.
pub fn nssr_entanglement(r: f64, t: f64) -> Result<f64> {
    if r < 0.0 || t < 0.0 || !r.is_finite() || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("r and t must be non-negative, got r={r}, t={t}")));
    }
    if r >= t {
        return Ok(0.0);
    }
    let s = r + t;
    let term = |x: f64| if x == 0.0 { 0.0 } else { x * (2.0 * x / s).ln() };
    Ok((term(r) + term(t)).max(0.0))
}

/// Margin below which `2 max{q±} − Tr[P̂_{1,1} ρ]` counts as a tie.
pub const CRITERION_TOL: f64 = 1e-12;

/// True iff the state is N-SSR entangled: `Tr[P̂_{1,1} ρ] < 2 max{q±}`.
pub fn entanglement_criterion(state: &SymmetricTwoOrbitalState) -> bool {
    2.0 * state.t() - state.w11() > CRITERION_TOL
}

/// N-SSR entanglement of a symmetric two-orbital state via the closed form.
pub fn nssr_closed_form(rho: &DensityMatrix) -> Result<EntanglementResult> {
    let state = decompose_symmetric(rho)?;
    Ok(EntanglementResult::closed_form(nssr_entanglement(state.r(), state.t())?, SsrKind::Number))
}
