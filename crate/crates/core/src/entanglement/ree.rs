//! Relative entropy of entanglement by pairwise Frank–Wolfe over the
//! separable set.
//!
//! The iterate `σ` is kept as an explicit convex combination of atoms, each
//! atom being a product state twirled over the symmetries of `ρ`. Twirling
//! keeps atoms separable and lets `σ` stay block diagonal, so the spectral
//! work is done per block.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{von_neumann_entropy, Diagnostics, EntanglementResult, Method, SsrKind};
use crate::channels::{fermionic_reflection, LocalFactor};
use crate::density::DensityMatrix;
use crate::linalg::{self, CMat};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReeOptions {
    /// Stop once the duality gap is at most this.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for ReeOptions {
    fn default() -> Self {
        Self { tol: 1e-7, max_iter: 5000, seed: 0x5eed }
    }
}

/// Relative entropy of entanglement of a two-orbital (dimension 16) or
/// two-mode (dimension 4) state, after applying the chosen superselection
/// pinching on both sides.
///
/// The value is an upper bound on the true minimum; `diagnostics.gap` bounds
/// the excess. If the iteration cap is hit the result carries
/// `converged = false`.
pub fn ree_numeric(rho: &DensityMatrix, ssr: SsrKind, opts: &ReeOptions) -> Result<EntanglementResult> {
    let factor = match rho.dim() {
        16 => LocalFactor::Orbital,
        4 => LocalFactor::Mode,
        other => return Err(Error::DimensionMismatch { expected: 16, got: other }),
    };
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let projected = ssr.project(rho, factor)?;
    let mut solver = Solver::new(&projected, factor, opts);
    let diagnostics = solver.run();
    if !diagnostics.converged {
        log::warn!(
            "relative entropy solver stopped after {} iterations with gap {:e}",
            diagnostics.iterations,
            diagnostics.gap
        );
    }
    Ok(EntanglementResult {
        value: solver.value.max(0.0),
        ssr,
        method: Method::NumericRee,
        diagnostics: Some(diagnostics),
    })
}

/// P-SSR entanglement, the relative entropy of entanglement of
/// `𝒢_Π ⊗ 𝒢_Π [ρ]` with default solver settings.
pub fn pssr_entanglement(rho: &DensityMatrix) -> Result<EntanglementResult> {
    ree_numeric(rho, SsrKind::Parity, &ReeOptions::default())
}

const CHARGE_TOL: f64 = 1e-10;
const SUPPORT_TOL: f64 = 1e-13;
const MERGE_TOL: f64 = 1e-12;
const INNER_STEPS: usize = 40;
const ALTERNATIONS: usize = 200;

struct Atom {
    mat: CMat,
    weight: f64,
}

/// Spectral data of `σ` together with the gradient matrix
/// `G = D log(σ)[ρ]` (the objective gradient is `−G`).
struct Eval {
    value: f64,
    g: CMat,
}

struct Symmetry {
    /// Charge tuple per basis index.
    labels: Vec<Vec<i32>>,
    blocks: Vec<Vec<usize>>,
    reflection: Option<CMat>,
    sectors_b: Vec<Vec<usize>>,
}

struct Solver {
    d: usize,
    rho: CMat,
    entropy: f64,
    sym: Symmetry,
    atoms: Vec<Atom>,
    sigma: CMat,
    value: f64,
    g: CMat,
    warm: Vec<(DVector<C64>, DVector<C64>)>,
    rng: ChaCha8Rng,
    opts: ReeOptions,
}

fn charge_candidates(factor: LocalFactor) -> Vec<(&'static str, Box<dyn Fn(usize, usize) -> i32>)> {
    let f = factor;
    vec![
        ("n_a", Box::new(move |a, _| f.number(a) as i32)),
        ("n_b", Box::new(move |_, b| f.number(b) as i32)),
        ("p_a", Box::new(move |a, _| f.parity(a) as i32)),
        ("p_b", Box::new(move |_, b| f.parity(b) as i32)),
        ("sz_a", Box::new(move |a, _| f.sz2(a))),
        ("sz_b", Box::new(move |_, b| f.sz2(b))),
        ("n", Box::new(move |a, b| (f.number(a) + f.number(b)) as i32)),
        ("sz", Box::new(move |a, b| f.sz2(a) + f.sz2(b))),
    ]
}

fn detect_symmetry(rho: &CMat, factor: LocalFactor) -> Symmetry {
    let d = factor.dim();
    let n = d * d;
    let mut found = Vec::new();
    let mut labels = vec![Vec::new(); n];
    for (name, label) in charge_candidates(factor) {
        let conserved = (0..n).all(|i| {
            (0..n).all(|j| label(i / d, i % d) == label(j / d, j % d) || rho[(i, j)].norm() <= CHARGE_TOL)
        });
        if conserved {
            found.push(name);
            for (i, l) in labels.iter_mut().enumerate() {
                l.push(label(i / d, i % d));
            }
        }
    }
    let has = |s: &str| found.contains(&s);
    let mirrored = ["n", "p", "sz"].iter().all(|c| has(&format!("{c}_a")) == has(&format!("{c}_b")));
    let reflection = if has("p_a") && has("p_b") && mirrored {
        let r = fermionic_reflection(factor);
        let dev = linalg::max_abs_diff(&(&r * rho * r.adjoint()), rho);
        (dev <= CHARGE_TOL).then_some(r)
    } else {
        None
    };

    let mut keys: Vec<Vec<i32>> = labels.clone();
    keys.sort();
    keys.dedup();
    let blocks = keys
        .iter()
        .map(|k| (0..n).filter(|&i| &labels[i] == k).collect())
        .collect();

    let local_sectors = |side: &str| -> Vec<Vec<usize>> {
        let key = |x: usize| -> (i32, i32) {
            let charge = if has(&format!("n_{side}")) {
                factor.number(x) as i32
            } else if has(&format!("p_{side}")) {
                factor.parity(x) as i32
            } else {
                0
            };
            let spin = if has(&format!("sz_{side}")) { factor.sz2(x) } else { 0 };
            (charge, spin)
        };
        let mut ks: Vec<(i32, i32)> = (0..d).map(key).collect();
        ks.sort();
        ks.dedup();
        ks.iter().map(|k| (0..d).filter(|&x| key(x) == *k).collect()).collect()
    };
    log::debug!("relative entropy solver symmetries: {found:?}, reflection: {}", reflection.is_some());
    Symmetry {
        labels,
        blocks,
        reflection,
        sectors_b: local_sectors("b"),
    }
}

/// `(ln x − ln y)/(x − y)`, continuous at `x = y`.
fn log_divided_difference(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    let u = (hi - lo) / lo;
    if u < 1e-8 {
        (1.0 - 0.5 * u) / lo
    } else {
        u.ln_1p() / (hi - lo)
    }
}

fn top_eigenvector(m: &CMat) -> (f64, DVector<C64>) {
    let (vals, vecs) = linalg::eigh(m);
    let k = vals.len() - 1;
    (vals[k], vecs.column(k).into_owned())
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize, support: &[usize]) -> DVector<C64> {
    let mut v = DVector::zeros(d);
    for &i in support {
        v[i] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let norm = v.norm();
    if norm == 0.0 {
        v[support[0]] = C64::new(1.0, 0.0);
        v
    } else {
        v / C64::new(norm, 0.0)
    }
}

fn basis_vector(d: usize, i: usize) -> DVector<C64> {
    let mut v = DVector::zeros(d);
    v[i] = C64::new(1.0, 0.0);
    v
}

/// `Re Tr(A B)` for Hermitian `A`, `B`.
fn pair(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.transpose().iter()).map(|(x, y)| (x * y).re).sum()
}

impl Solver {
    fn new(rho: &DensityMatrix, factor: LocalFactor, opts: &ReeOptions) -> Self {
        let d = factor.dim();
        let n = d * d;
        let mat = rho.matrix().clone();
        let sym = detect_symmetry(&mat, factor);
        let mut solver = Self {
            d,
            entropy: von_neumann_entropy(rho),
            rho: mat,
            sym,
            atoms: Vec::new(),
            sigma: CMat::zeros(n, n),
            value: f64::INFINITY,
            g: CMat::zeros(n, n),
            warm: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            opts: *opts,
        };
        // diag(ρ) is separable and supports ρ
        for i in 0..n {
            let w = solver.rho[(i, i)].re;
            if w > 0.0 {
                let atom = solver.twirl(&basis_vector(d, i / d), &basis_vector(d, i % d));
                solver.insert(atom, w);
            }
        }
        let total: f64 = solver.atoms.iter().map(|a| a.weight).sum();
        for a in &mut solver.atoms {
            a.weight /= total;
        }
        solver.rebuild_sigma();
        let e = solver.eval(&solver.sigma.clone()).expect("diag(ρ) supports ρ");
        solver.value = e.value;
        solver.g = e.g;
        solver
    }

    fn twirl(&self, a: &DVector<C64>, b: &DVector<C64>) -> CMat {
        let v = a.kronecker(b);
        let mut x = &v * v.adjoint();
        let labels = &self.sym.labels;
        for i in 0..x.nrows() {
            for j in 0..x.ncols() {
                if labels[i] != labels[j] {
                    x[(i, j)] = C64::new(0.0, 0.0);
                }
            }
        }
        if let Some(r) = &self.sym.reflection {
            let rx = r * &x * r.adjoint();
            x = (x + rx) * C64::new(0.5, 0.0);
        }
        x
    }

    /// Adds weight to an atom, merging with an identical one if present.
    /// Returns the atom's index.
    fn insert(&mut self, mat: CMat, weight: f64) -> usize {
        if let Some(k) = self.atoms.iter().position(|a| linalg::max_abs_diff(&a.mat, &mat) < MERGE_TOL) {
            self.atoms[k].weight += weight;
            return k;
        }
        self.atoms.push(Atom { mat, weight });
        self.atoms.len() - 1
    }

    fn rebuild_sigma(&mut self) {
        let n = self.sigma.nrows();
        let mut s = CMat::zeros(n, n);
        for a in &self.atoms {
            s += &a.mat * C64::new(a.weight, 0.0);
        }
        self.sigma = s;
    }

    /// Objective and gradient at `sigma`; `None` when `sigma` does not
    /// support `ρ`.
    fn eval(&self, sigma: &CMat) -> Option<Eval> {
        let (lam, u) = linalg::eigh_blocked(sigma, &self.sym.blocks);
        let rt = u.adjoint() * &self.rho * &u;
        let n = lam.len();
        let mut inside = vec![true; n];
        let mut cross = 0.0;
        for i in 0..n {
            let w = rt[(i, i)].re;
            if lam[i] <= SUPPORT_TOL {
                if w > SUPPORT_TOL {
                    return None;
                }
                inside[i] = false;
                continue;
            }
            cross += w * lam[i].ln();
        }
        let mut gt = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if inside[i] && inside[j] && rt[(i, j)] != C64::new(0.0, 0.0) {
                    gt[(i, j)] = rt[(i, j)] * log_divided_difference(lam[i], lam[j]);
                }
            }
        }
        Some(Eval { value: -self.entropy - cross, g: &u * gt * u.adjoint() })
    }

    /// Maximizes `⟨ab|G|ab⟩` over product vectors by alternating top
    /// eigenvectors from several starts.
    fn oracle(&mut self, thorough: bool) -> (f64, DVector<C64>, DVector<C64>) {
        let d = self.d;
        let mut starts: Vec<DVector<C64>> = Vec::new();
        for (_, b) in &self.warm {
            starts.push(b.clone());
        }
        let sectors_b = self.sym.sectors_b.clone();
        let reps = if thorough { 4 } else { 1 };
        for sector in &sectors_b {
            for _ in 0..reps {
                starts.push(random_vector(&mut self.rng, d, sector));
            }
        }
        let all: Vec<usize> = (0..d).collect();
        for _ in 0..if thorough { 8 } else { 2 } {
            starts.push(random_vector(&mut self.rng, d, &all));
        }
        if thorough {
            for i in 0..d {
                starts.push(basis_vector(d, i));
            }
        }
        let mut best: Option<(f64, DVector<C64>, DVector<C64>)> = None;
        let mut found = Vec::new();
        for b0 in starts {
            let (v, a, b) = self.alternate(b0);
            found.push((v, a.clone(), b.clone()));
            if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
                best = Some((v, a, b));
            }
        }
        found.sort_by(|x, y| y.0.total_cmp(&x.0));
        self.warm = found.into_iter().take(3).map(|(_, a, b)| (a, b)).collect();
        best.expect("at least one start")
    }

    fn alternate(&self, mut b: DVector<C64>) -> (f64, DVector<C64>, DVector<C64>) {
        let d = self.d;
        let g = &self.g;
        let mut a = DVector::zeros(d);
        let mut prev = f64::NEG_INFINITY;
        let mut val = prev;
        for _ in 0..ALTERNATIONS {
            let ma = CMat::from_fn(d, d, |i, j| {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    for l in 0..d {
                        acc += b[k].conj() * g[(i * d + k, j * d + l)] * b[l];
                    }
                }
                acc
            });
            a = top_eigenvector(&ma).1;
            let mb = CMat::from_fn(d, d, |k, l| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..d {
                    for j in 0..d {
                        acc += a[i].conj() * g[(i * d + k, j * d + l)] * a[j];
                    }
                }
                acc
            });
            let (v, bb) = top_eigenvector(&mb);
            b = bb;
            val = v;
            if val - prev <= 1e-14 * val.abs().max(1.0) {
                break;
            }
            prev = val;
        }
        (val, a, b)
    }

    /// Moves weight `γ ∈ [0, γ_max]` from atom `from` to atom `to` by exact
    /// line search on the objective. Returns the step taken.
    fn pairwise_step(&mut self, to: usize, from: usize) -> f64 {
        let dir = &self.atoms[to].mat - &self.atoms[from].mat;
        let gmax = self.atoms[from].weight;
        let slope0 = -pair(&self.g, &dir);
        if slope0 >= 0.0 || gmax <= 0.0 {
            return 0.0;
        }
        let slope = |gamma: f64, s: &Self| -> (f64, Option<Eval>) {
            let trial = &s.sigma + &dir * C64::new(gamma, 0.0);
            match s.eval(&trial) {
                Some(e) => (-pair(&e.g, &dir), Some(e)),
                None => (f64::INFINITY, None),
            }
        };
        let (mut hi_slope, mut hi_eval) = slope(gmax, self);
        let (gamma, eval) = if hi_slope <= 0.0 {
            (gmax, hi_eval.expect("finite slope"))
        } else {
            let (mut lo, mut lo_slope) = (0.0, slope0);
            let mut hi = gmax;
            let mut side = 0i32;
            let mut mid = 0.5 * gmax;
            let mut mid_eval = None;
            for _ in 0..100 {
                mid = if hi_slope.is_finite() {
                    let x = (lo * hi_slope - hi * lo_slope) / (hi_slope - lo_slope);
                    if x > lo && x < hi {
                        x
                    } else {
                        0.5 * (lo + hi)
                    }
                } else {
                    0.5 * (lo + hi)
                };
                let (s, e) = slope(mid, self);
                mid_eval = e;
                if s.abs() <= 1e-15 || hi - lo <= 1e-16 * gmax.max(1e-300) {
                    break;
                }
                if s < 0.0 {
                    lo = mid;
                    lo_slope = s;
                    if side == -1 {
                        hi_slope *= 0.5;
                    }
                    side = -1;
                } else {
                    hi = mid;
                    hi_slope = s;
                    if side == 1 {
                        lo_slope *= 0.5;
                    }
                    side = 1;
                }
                hi_eval = None;
            }
            let _ = hi_eval;
            match mid_eval {
                Some(e) => (mid, e),
                None => return 0.0,
            }
        };
        if eval.value > self.value + 1e-15 {
            return 0.0;
        }
        self.atoms[to].weight += gamma;
        self.atoms[from].weight -= gamma;
        if gamma >= gmax || self.atoms[from].weight <= 1e-16 {
            self.atoms[from].weight = 0.0;
        }
        self.sigma += dir * C64::new(gamma, 0.0);
        self.value = eval.value;
        self.g = eval.g;
        gamma
    }

    fn drop_empty(&mut self) {
        self.atoms.retain(|a| a.weight > 0.0);
    }

    fn extreme_atoms(&self) -> (usize, usize, f64) {
        let scores: Vec<f64> = self.atoms.iter().map(|a| pair(&self.g, &a.mat)).collect();
        let mut hi = 0;
        let mut lo = 0;
        for k in 0..scores.len() {
            if scores[k] > scores[hi] {
                hi = k;
            }
            if scores[k] < scores[lo] {
                lo = k;
            }
        }
        (hi, lo, scores[hi] - scores[lo])
    }

    fn run(&mut self) -> Diagnostics {
        let mut gap = f64::INFINITY;
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.opts.max_iter {
            iterations += 1;
            let (best, a, b) = self.oracle(false);
            let baseline = pair(&self.g, &self.sigma);
            gap = best - baseline;
            if gap <= self.opts.tol {
                let (best, a, b) = self.oracle(true);
                gap = best - baseline;
                if gap <= self.opts.tol {
                    converged = true;
                    break;
                }
                self.step_towards(a, b);
            } else {
                self.step_towards(a, b);
            }
            // corrective steps over the active set
            for _ in 0..INNER_STEPS {
                let (hi, lo, spread) = self.extreme_atoms();
                if hi == lo || spread <= 0.25 * gap.min(1.0) || spread <= 0.1 * self.opts.tol {
                    break;
                }
                if self.pairwise_step(hi, lo) == 0.0 {
                    break;
                }
                self.drop_empty();
            }
            if iterations % 50 == 0 {
                // keep the explicit sum and the running iterate in step
                self.rebuild_sigma();
                if let Some(e) = self.eval(&self.sigma.clone()) {
                    self.value = e.value;
                    self.g = e.g;
                }
            }
        }
        gap = gap.max(0.0);
        Diagnostics { iterations, gap, converged }
    }

    fn step_towards(&mut self, a: DVector<C64>, b: DVector<C64>) {
        let atom = self.twirl(&a, &b);
        let to = self.insert(atom, 0.0);
        let scores: Vec<f64> = self.atoms.iter().map(|x| pair(&self.g, &x.mat)).collect();
        let from = (0..self.atoms.len())
            .filter(|&k| k != to && self.atoms[k].weight > 0.0)
            .min_by(|&x, &y| scores[x].total_cmp(&scores[y]));
        if let Some(from) = from {
            self.pairwise_step(to, from);
        }
        self.drop_empty();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{local, pair_index};
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn bell(a: (usize, usize), b: (usize, usize)) -> DensityMatrix {
        let mut v = vec![0.0; 16];
        v[pair_index(a.0, a.1)] = FRAC_1_SQRT_2;
        v[pair_index(b.0, b.1)] = FRAC_1_SQRT_2;
        DensityMatrix::pure_real(&v).unwrap()
    }

    #[test]
    fn divided_difference_is_smooth() {
        assert!((log_divided_difference(0.5, 0.5) - 2.0).abs() < 1e-15);
        let exact = (0.3f64.ln() - 0.2f64.ln()) / 0.1;
        assert!((log_divided_difference(0.3, 0.2) - exact).abs() < 1e-14);
        assert!((log_divided_difference(0.2, 0.3) - exact).abs() < 1e-14);
    }

    #[test]
    fn separable_diagonal_state_has_zero_ree() {
        let w: Vec<f64> = (1..=16).map(|k| k as f64 / 136.0).collect();
        let rho = DensityMatrix::diagonal(&w).unwrap();
        let res = ree_numeric(&rho, SsrKind::None, &ReeOptions::default()).unwrap();
        assert!(res.value < 1e-7, "{res:?}");
        assert!(res.diagnostics.unwrap().converged);
    }

    #[test]
    fn psi_plus_without_ssr() {
        let rho = bell((local::UP, local::DOWN), (local::DOWN, local::UP));
        let res = ree_numeric(&rho, SsrKind::None, &ReeOptions::default()).unwrap();
        assert!((res.value - LN_2).abs() < 1e-7, "{res:?}");
    }

    #[test]
    fn phi_plus_under_both_rules() {
        let rho = bell((local::EMPTY, local::DOUBLE), (local::DOUBLE, local::EMPTY));
        let p = pssr_entanglement(&rho).unwrap();
        assert!((p.value - LN_2).abs() < 1e-7, "{p:?}");
        let n = ree_numeric(&rho, SsrKind::Number, &ReeOptions::default()).unwrap();
        assert!(n.value < 1e-7, "{n:?}");
    }

    #[test]
    fn two_mode_states() {
        // (|01⟩ + |10⟩)/√2 on two spinless modes
        let rho = DensityMatrix::pure_real(&[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]).unwrap();
        let res = ree_numeric(&rho, SsrKind::None, &ReeOptions::default()).unwrap();
        assert!((res.value - LN_2).abs() < 1e-7, "{res:?}");
        // the two branches differ in local parity
        let res = ree_numeric(&rho, SsrKind::Parity, &ReeOptions::default()).unwrap();
        assert!(res.value < 1e-7, "{res:?}");
        // |+⟩|+⟩ loses nothing it had
        let plus = DensityMatrix::pure_real(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        let res = ree_numeric(&plus, SsrKind::None, &ReeOptions::default()).unwrap();
        assert!(res.value < 1e-7, "{res:?}");
    }

    #[test]
    fn rejects_bad_dimension() {
        let rho = DensityMatrix::maximally_mixed(8);
        assert!(ree_numeric(&rho, SsrKind::None, &ReeOptions::default()).is_err());
    }
}
