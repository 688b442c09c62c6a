//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;

use crate::C64;

pub type CMat = DMatrix<C64>;

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
///
/// Only the Hermitian part `(m + m†)/2` is used.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Real symmetric counterpart of [`eigh`].
pub fn eigh_real(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    eigh(m).0
}

/// Eigen-decomposition of a matrix known to be block diagonal on the given
/// index blocks. Blocks must partition `0..n`. Eigenvalues are returned in
/// block order, not globally sorted.
pub fn eigh_blocked(m: &CMat, blocks: &[Vec<usize>]) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let mut values = vec![0.0; n];
    let mut vectors = CMat::zeros(n, n);
    let mut col = 0;
    for block in blocks {
        let k = block.len();
        if k == 1 {
            let i = block[0];
            values[col] = m[(i, i)].re;
            vectors[(i, col)] = C64::new(1.0, 0.0);
            col += 1;
            continue;
        }
        let sub = CMat::from_fn(k, k, |a, b| m[(block[a], block[b])]);
        let (vals, vecs) = eigh(&sub);
        for c in 0..k {
            values[col + c] = vals[c];
            for (a, &i) in block.iter().enumerate() {
                vectors[(i, col + c)] = vecs[(a, c)];
            }
        }
        col += k;
    }
    (values, vectors)
}

/// Largest entrywise deviation of `m` from its adjoint.
pub fn hermiticity_deviation(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entrywise absolute difference.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// Kronecker product `a ⊗ b` (row index of `a` is the slow index).
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMat::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(m);
    let n = m.nrows();
    let mut out = CMat::zeros(n, n);
    for (k, &v) in vals.iter().enumerate() {
        let fv = C64::new(f(v), 0.0);
        let col = vecs.column(k);
        out += col * col.adjoint() * fv;
    }
    out
}

/// `-x ln x` with the convention `0 ln 0 = 0`; negative round-off is clipped.
#[inline]
pub fn entropy_term(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
