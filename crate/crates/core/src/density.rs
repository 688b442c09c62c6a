//! Validated density matrices.

use nalgebra::DVector;

use crate::linalg::{self, CMat};
use crate::{Error, Result, C64};

/// Hermiticity tolerance on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance on construction.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues below `-PSD_FLOOR` are rejected; those in `[-PSD_FLOOR, 0)`
/// are clipped to zero and the matrix renormalized.
pub const PSD_FLOOR: f64 = 1e-10;

/// A Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Validates `mat` and wraps it.
    pub fn new(mat: CMat) -> Result<Self> {
        let (r, c) = mat.shape();
        if r != c {
            return Err(Error::NotSquare(r, c));
        }
        let dev = linalg::hermiticity_deviation(&mat);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = linalg::trace(&mat);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        let (vals, vecs) = linalg::eigh(&mat);
        let min = vals.first().copied().unwrap_or(0.0);
        if min < -PSD_FLOOR {
            return Err(Error::NotPositive(min));
        }
        if min < 0.0 {
            log::debug!("clipping eigenvalue {min:e} to zero and renormalizing");
            let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            let d = DVector::from_iterator(r, clipped.iter().map(|&v| C64::new(v / total, 0.0)));
            let mat = &vecs * CMat::from_diagonal(&d) * vecs.adjoint();
            return Ok(Self { mat });
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix already known to be a valid state (e.g. the output of a
    /// trace-preserving positive map applied to a valid state).
    pub(crate) fn from_raw(mat: CMat) -> Self {
        Self { mat }
    }

    /// Projector onto a (not necessarily normalized) pure state.
    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        let norm2 = psi.norm_squared();
        if norm2 == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        let v = psi / C64::new(norm2.sqrt(), 0.0);
        Ok(Self { mat: &v * v.adjoint() })
    }

    /// Pure state from real amplitudes.
    pub fn pure_real(amps: &[f64]) -> Result<Self> {
        Self::pure(&DVector::from_iterator(amps.len(), amps.iter().map(|&a| C64::new(a, 0.0))))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: CMat::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    /// Diagonal state with the given (normalized) weights.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(weights.len(), weights.iter().map(|&w| C64::new(w, 0.0)));
        Self::new(CMat::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Spectrum, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.mat)
    }

    /// Partial trace over all tensor factors not listed in `keep`.
    ///
    /// `dims` lists local dimensions with the first factor as the slowest
    /// index. Kept factors retain their original relative order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.dim() {
            return Err(Error::DimensionMismatch { expected: total, got: self.dim() });
        }
        if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
            return Err(Error::IndexOutOfRange { index: bad, limit: dims.len() });
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|f| !keep.contains(f)).collect();
        let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
        let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();
        let strides = strides(dims);
        let compose = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut idx = 0;
            let mut rem = kept_idx;
            for &k in keep.iter().rev() {
                idx += (rem % dims[k]) * strides[k];
                rem /= dims[k];
            }
            let mut rem = traced_idx;
            for &k in traced.iter().rev() {
                idx += (rem % dims[k]) * strides[k];
                rem /= dims[k];
            }
            idx
        };
        let mut out = CMat::zeros(kept_dim, kept_dim);
        for i in 0..kept_dim {
            for j in 0..kept_dim {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..traced_dim {
                    acc += self.mat[(compose(i, t), compose(j, t))];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(Self { mat: out })
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &DensityMatrix) -> Self {
        Self { mat: linalg::kron(&self.mat, &other.mat) }
    }
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn rejects_bad_trace_and_non_hermitian() {
        let m = CMat::identity(2, 2);
        assert!(matches!(DensityMatrix::new(m), Err(Error::BadTrace(_))));
        let mut m = CMat::identity(2, 2) * c(0.5);
        m[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn rejects_negative_and_clips_roundoff() {
        let m = CMat::from_diagonal(&DVector::from_vec(vec![c(1.2), c(-0.2)]));
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositive(_))));
        let m = CMat::from_diagonal(&DVector::from_vec(vec![c(1.0 + 1e-13), c(-1e-13)]));
        let rho = DensityMatrix::new(m).unwrap();
        assert!(rho.eigenvalues()[0] >= 0.0);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let b = DensityMatrix::maximally_mixed(3);
        let ab = a.kron(&b);
        let back_a = ab.partial_trace(&[2, 3], &[0]).unwrap();
        let back_b = ab.partial_trace(&[2, 3], &[1]).unwrap();
        assert!(linalg::max_abs_diff(back_a.matrix(), a.matrix()) < 1e-15);
        assert!(linalg::max_abs_diff(back_b.matrix(), b.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_reorders_kept_factors() {
        let a = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let b = DensityMatrix::diagonal(&[0.1, 0.9]).unwrap();
        let cc = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let abc = a.kron(&b).kron(&cc);
        let ac = abc.partial_trace(&[2, 2, 2], &[0, 2]).unwrap();
        assert!(linalg::max_abs_diff(ac.matrix(), a.kron(&cc).matrix()) < 1e-15);
    }
}
