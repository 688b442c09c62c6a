//! Closed-form orbital-pair entanglement in the ground state of the periodic
//! tight-binding chain `H = −½ Σ_{lσ} (f†_{lσ} f_{l+1σ} + h.c.)`.

use std::f64::consts::{LN_2, PI, SQRT_2};

use serde::Serialize;

use crate::entanglement::{self, EntanglementResult};
use crate::freefermion::{wick_two_orbital_rdm, OneParticleRDM};
use crate::linalg::{c, CMat};
use crate::{Error, Result};

/// `η·d` above which the small-η asymptote is flagged as unreliable.
pub const ASYMPTOTE_LIMIT: f64 = 0.05;

/// Single-particle energy `−cos(2πk/L)` for `|k| ≤ L/2`.
pub fn dispersion(k: i64, sites: usize) -> Result<f64> {
    if sites == 0 || 2 * k.unsigned_abs() as usize > sites {
        return Err(Error::InvalidArgument(format!("momentum {k} outside the zone of a {sites}-site ring")));
    }
    Ok(-(2.0 * PI * k as f64 / sites as f64).cos())
}

/// Thermodynamic-limit hopping correlator `W(d, η) = sin(πdη)/(πd)`.
pub fn w_kernel(d: u32, eta: f64) -> f64 {
    sin_pi(d as f64 * eta) / (PI * d as f64)
}

/// `sin(πx)`, exactly zero at integers.
fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

/// Hopping correlator `⟨f†_l f_{l+d}⟩` of the `N`-electron ground state on an
/// `L`-site ring, `sin(ωN/4)/(L sin(ω/2))` with `ω = 2πd/L`.
pub fn w_kernel_finite(d: u32, sites: usize, electrons: usize) -> f64 {
    if (d as usize).is_multiple_of(sites) {
        return electrons as f64 / (2.0 * sites as f64);
    }
    let omega = 2.0 * PI * d as f64 / sites as f64;
    (omega * electrons as f64 / 4.0).sin() / (sites as f64 * (omega / 2.0).sin())
}

/// A finite ring with `N = 4k_max + 2` electrons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiniteRing {
    pub sites: usize,
    pub electrons: usize,
}

impl FiniteRing {
    pub fn new(sites: usize, electrons: usize) -> Result<Self> {
        if sites < 3 {
            return Err(Error::InvalidArgument(format!("ring needs at least 3 sites, got {sites}")));
        }
        if electrons % 4 != 2 || electrons > 2 * sites {
            return Err(Error::InvalidArgument(format!(
                "need N = 4k+2 ≤ 2L for a unique ground state, got N={electrons}, L={sites}"
            )));
        }
        Ok(Self { sites, electrons })
    }

    pub fn filling(&self) -> f64 {
        self.electrons as f64 / (2.0 * self.sites as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TbQuery {
    pub eta: f64,
    pub d: u32,
    pub ring: Option<FiniteRing>,
}

impl TbQuery {
    pub fn thermodynamic(eta: f64, d: u32) -> Result<Self> {
        let q = Self { eta, d, ring: None };
        q.validate()?;
        Ok(q)
    }

    pub fn finite(ring: FiniteRing, d: u32) -> Result<Self> {
        let q = Self { eta: ring.filling(), d, ring: Some(ring) };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidArgument(format!("filling {} outside [0, 1]", self.eta)));
        }
        if self.d == 0 {
            return Err(Error::InvalidArgument("separation must be at least 1".into()));
        }
        if let Some(ring) = self.ring {
            if 2 * self.d as usize > ring.sites {
                return Err(Error::InvalidArgument(format!(
                    "separation {} exceeds half the ring ({} sites)",
                    self.d, ring.sites
                )));
            }
        }
        Ok(())
    }

    pub fn kernel(&self) -> f64 {
        match self.ring {
            None => w_kernel(self.d, self.eta),
            Some(r) => w_kernel_finite(self.d, r.sites, r.electrons),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Thermodynamic,
    FiniteRing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TbResult {
    pub w: f64,
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub t: f64,
    pub e_nssr: f64,
    pub entangled: bool,
    pub kernel: Kernel,
}

/// `A = (η² − η − W²)²`, `B = W²`.
pub fn a_b(eta: f64, w: f64) -> (f64, f64) {
    let b = w * w;
    ((eta * eta - eta - b).powi(2), b)
}

/// N-SSR entanglement written in terms of `A` and `B`; zero unless
/// `A < 2B`.
pub fn entanglement_from_ab(a: f64, b: f64) -> f64 {
    if a >= 2.0 * b {
        return 0.0;
    }
    let den = 2.0 * a - b;
    let term = |x: f64| if x <= 0.0 { 0.0 } else { x * (x / den).ln() };
    (term(a + b) + term(3.0 * a - 3.0 * b)).max(0.0)
}

pub fn tb_entanglement(q: &TbQuery) -> Result<TbResult> {
    q.validate()?;
    let w = q.kernel();
    let (a, b) = a_b(q.eta, w);
    let e = entanglement_from_ab(a, b);
    Ok(TbResult {
        w,
        a,
        b,
        r: 3.0 * a - 3.0 * b,
        t: a + b,
        e_nssr: e,
        entangled: a < 2.0 * b,
        kernel: if q.ring.is_some() { Kernel::FiniteRing } else { Kernel::Thermodynamic },
    })
}

/// Leading small-filling behaviour `2 ln2 · η²`.
pub fn asymptotic_small_eta(eta: f64, d: u32) -> f64 {
    if eta * d as f64 >= ASYMPTOTE_LIMIT {
        log::warn!("η·d = {} is not small; the quadratic asymptote is unreliable", eta * d as f64);
    }
    2.0 * LN_2 * eta * eta
}

/// `η² − η ≤ W² − √2|W|`.
pub fn separable(eta: f64, d: u32) -> bool {
    let w = w_kernel(d, eta).abs();
    eta * eta - eta <= w * w - SQRT_2 * w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dmin {
    pub d_min: u32,
    /// No separation is entangled at this filling.
    pub all_separable: bool,
    /// Largest entangled separation, the witness that `d_min − 1` fails.
    pub last_entangled: Option<u32>,
}

/// Smallest `d` such that every separation `d' ≥ d` is separable.
///
/// `W` oscillates in `d`, so every separation is checked up to the point
/// where the envelope `|W| ≤ 1/(πd)` alone guarantees separability.
pub fn dmin_exact(eta: f64) -> Result<Dmin> {
    if !(0.0..=1.0).contains(&eta) || eta.is_nan() {
        return Err(Error::InvalidArgument(format!("filling {eta} outside [0, 1]")));
    }
    if eta == 0.0 || eta == 1.0 {
        return Ok(Dmin { d_min: 1, all_separable: true, last_entangled: None });
    }
    let target = eta * eta - eta;
    let mut last = None;
    let mut d: u32 = 1;
    loop {
        if !separable(eta, d) {
            last = Some(d);
        }
        let x = 1.0 / (PI * d as f64);
        if x < SQRT_2 / 2.0 && x * x - SQRT_2 * x >= target {
            break;
        }
        d = d.checked_add(1).ok_or_else(|| Error::InvalidArgument(format!("no cutoff found for η={eta}")))?;
    }
    Ok(match last {
        Some(l) => Dmin { d_min: l + 1, all_separable: false, last_entangled: Some(l) },
        None => Dmin { d_min: 1, all_separable: true, last_entangled: None },
    })
}

/// `√2 / (π η (1 − η))`.
pub fn dmin_asymptotic(eta: f64) -> f64 {
    SQRT_2 / (PI * eta * (1.0 - eta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// `n` points from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, n: usize, scale: Scale) -> Result<Vec<f64>> {
    if n == 0 || !(lo <= hi) || (scale == Scale::Log && lo <= 0.0) {
        return Err(Error::InvalidArgument(format!("bad grid [{lo}, {hi}] with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = |k: usize| k as f64 / (n - 1) as f64;
    Ok(match scale {
        Scale::Linear => (0..n).map(|k| lo + (hi - lo) * step(k)).collect(),
        Scale::Log => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|k| (a + (b - a) * step(k)).exp()).collect()
        }
    })
}

/// Default filling range and resolution of the entanglement-vs-filling scan.
pub const SCAN_ETA_RANGE: (f64, f64) = (1e-4, 1.0 - 1e-4);
pub const SCAN_POINTS_LINEAR: usize = 2001;
pub const SCAN_POINTS_LOG: usize = 200;
/// Default filling range of the disentangling-distance scan.
pub const DMIN_ETA_RANGE: (f64, f64) = (1e-3, 0.5);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub eta: f64,
    pub d: u32,
    pub e_nssr: f64,
    pub e_pssr: Option<f64>,
}

/// Two-orbital state of the thermodynamic-limit chain at separation `d`.
pub fn tb_two_orbital_state(eta: f64, d: u32) -> Result<crate::DensityMatrix> {
    tb_query_state(&TbQuery::thermodynamic(eta, d)?)
}

/// Two-orbital state for either kernel.
pub fn tb_query_state(q: &TbQuery) -> Result<crate::DensityMatrix> {
    q.validate()?;
    let (eta, w) = (q.eta, q.kernel());
    let gamma = CMat::from_row_slice(2, 2, &[c(eta), c(w), c(w), c(eta)]);
    Ok(wick_two_orbital_rdm(&OneParticleRDM::spin_symmetric(gamma), 0, 1)?.0)
}

/// P-SSR entanglement of the chain by numerical relative entropy.
pub fn tb_pssr(eta: f64, d: u32, opts: &entanglement::ReeOptions) -> Result<EntanglementResult> {
    let rho = tb_two_orbital_state(eta, d)?;
    entanglement::ree_numeric(&rho, entanglement::SsrKind::Parity, opts)
}

/// Rows ordered by filling (outer) and separation (inner).
pub fn scan_fig2(d_list: &[u32], etas: &[f64], pssr: Option<&entanglement::ReeOptions>) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::with_capacity(d_list.len() * etas.len());
    for &eta in etas {
        for &d in d_list {
            rows.push(scan_row(eta, d, pssr)?);
        }
    }
    Ok(rows)
}

pub fn scan_row(eta: f64, d: u32, pssr: Option<&entanglement::ReeOptions>) -> Result<ScanRow> {
    let e_nssr = tb_entanglement(&TbQuery::thermodynamic(eta, d)?)?.e_nssr;
    let e_pssr = match pssr {
        Some(opts) => Some(tb_pssr(eta, d, opts)?.value),
        None => None,
    };
    Ok(ScanRow { eta, d, e_nssr, e_pssr })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DminRow {
    pub eta: f64,
    pub dmin_exact: u32,
    pub dmin_asymptotic: f64,
}

pub fn scan_dmin(etas: &[f64]) -> Result<Vec<DminRow>> {
    etas.iter()
        .map(|&eta| {
            Ok(DminRow { eta, dmin_exact: dmin_exact(eta)?.d_min, dmin_asymptotic: dmin_asymptotic(eta) })
        })
        .collect()
}
