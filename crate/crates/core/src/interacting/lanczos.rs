//! Lowest eigenpair of a sparse symmetric matrix by restarted Lanczos with
//! full reorthogonalization.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::SparseHamiltonian;
use crate::linalg::eigh_real;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Required `‖Hx − Ex‖`.
    pub residual_tol: f64,
    /// Krylov dimension before a restart.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { residual_tol: 1e-9, krylov_dim: 120, max_restarts: 200, seed: 7 }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosResult {
    pub energy: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    /// Second Ritz value of the final Krylov space.
    pub next_energy: Option<f64>,
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn lowest_eigenpair(h: &SparseHamiltonian, opts: &LanczosOptions) -> Result<LanczosResult> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut matvecs = 0;
    let mut best = f64::INFINITY;
    let m_max = opts.krylov_dim.min(n).max(1);

    for _ in 0..=opts.max_restarts {
        let s = norm(&start);
        start.iter_mut().for_each(|x| *x /= s);
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];
        for j in 0..m_max {
            h.matvec(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // full reorthogonalization, twice
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
                }
            }
            let b = norm(&w);
            if j + 1 == m_max || b < 1e-14 {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let m = alpha.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let (vals, vecs) = eigh_real(&t);
        let y: DVector<f64> = vecs.column(0).into_owned();
        let mut x = vec![0.0; n];
        for (k, v) in basis.iter().take(m).enumerate() {
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += y[k] * vi);
        }
        let s = norm(&x);
        x.iter_mut().for_each(|v| *v /= s);
        let mut hx = vec![0.0; n];
        h.matvec(&x, &mut hx);
        matvecs += 1;
        let energy = dot(&x, &hx);
        let residual = norm(&hx.iter().zip(&x).map(|(a, b)| a - energy * b).collect::<Vec<_>>());
        best = best.min(residual);
        if residual < opts.residual_tol {
            return Ok(LanczosResult {
                energy,
                vector: x,
                residual,
                next_energy: vals.get(1).copied(),
                matvecs,
            });
        }
        start = x;
    }
    Err(Error::NoConvergence(best))
}
