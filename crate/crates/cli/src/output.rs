use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use orbent::entanglement::EntanglementResult;
use orbent::linalg::CMat;
use orbent::DensityMatrix;
use serde::{Deserialize, Serialize};

use crate::{CliError, Outcome};

/// Writes `text` to `out`, or standard output when absent.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

pub fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&text, out)
}

/// A complex matrix as separate real and imaginary row lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixRecord {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let rows = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
        let im: Vec<Vec<f64>> = rows(|z| z.im);
        let has_im = im.iter().flatten().any(|&x| x != 0.0);
        Self { re: rows(|z| z.re), im: has_im.then_some(im) }
    }

    pub fn to_density(&self) -> Result<DensityMatrix, CliError> {
        let n = self.re.len();
        let bad = |what: &str| CliError::Usage(format!("state matrix: {what}"));
        if self.re.iter().any(|r| r.len() != n) {
            return Err(bad("`re` must be square"));
        }
        if let Some(im) = &self.im {
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(bad("`im` must match the shape of `re`"));
            }
        }
        let m = CMat::from_fn(n, n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |im| im[i][j]);
            Complex64::new(self.re[i][j], im)
        });
        DensityMatrix::new(m).map_err(|e| bad(&e.to_string()))
    }
}

pub fn outcome(results: &[&EntanglementResult]) -> Outcome {
    let unconverged = results.iter().any(|r| r.diagnostics.is_some_and(|d| !d.converged));
    if unconverged {
        Outcome::Unconverged
    } else {
        Outcome::Done
    }
}
