use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use orbent::channels::{self, LocalFactor, Partition};
use orbent::entanglement::SsrKind;
use orbent::fock::{local, pair_index};
use orbent::linalg::max_abs_diff;
use orbent::DensityMatrix;
use serde::Serialize;

use crate::output::{emit_json, MatrixRecord};
use crate::{CliError, Outcome, SsrArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// One spinless orbital and one qubit, both in |+⟩.
    PlusPlus,
    /// (|↑,↓⟩ + |↓,↑⟩)/√2 on two spinful orbitals.
    PsiPlus,
    /// (|0,↑↓⟩ + |↑↓,0⟩)/√2 on two spinful orbitals.
    PhiPlus,
}

#[derive(Args)]
pub struct SwapArgs {
    #[arg(long, value_enum, default_value = "plus-plus")]
    preset: Preset,
    /// JSON file `{"re": [[..]], "im": [[..]]}` holding a two-orbital state
    /// of dimension 4 or 16; overrides the preset.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "p")]
    ssr: SsrArg,
}

#[derive(Serialize)]
struct SwapReport {
    input_label: String,
    ssr: SsrKind,
    /// Orbital-side input.
    input: MatrixRecord,
    /// Register-side input.
    register_in: MatrixRecord,
    /// Simulated final register state.
    register_out: MatrixRecord,
    /// Simulated final orbital state.
    orbital_out: MatrixRecord,
    /// Closed-form superselected image of the input.
    filtered: MatrixRecord,
    /// Largest entry difference between simulation and closed form.
    simulation_deviation: f64,
    /// Frobenius norm of the coherences removed by the filter.
    erased_norm: f64,
}

fn pure(amps: &[f64]) -> DensityMatrix {
    DensityMatrix::pure_real(amps).expect("preset amplitudes are normalized")
}

fn pair_state(terms: &[((usize, usize), f64)]) -> DensityMatrix {
    let mut v = vec![0.0; 16];
    for &((a, b), amp) in terms {
        v[pair_index(a, b)] = amp;
    }
    pure(&v)
}

fn vacuum(dim: usize) -> DensityMatrix {
    let mut v = vec![0.0; dim];
    v[0] = 1.0;
    pure(&v)
}

fn plus_plus_report(ssr: SsrKind) -> Result<SwapReport, CliError> {
    let plus = pure(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
    let partition = Partition::new(vec![LocalFactor::Mode, LocalFactor::Qubit]);
    let joint = channels::superselected_swap(&plus.kron(&plus), &partition, 0, 1)?;
    let dims = partition.dims();
    let orbital_out = joint.partial_trace(&dims, &[0])?;
    let register_out = joint.partial_trace(&dims, &[1])?;
    // on a single spinless mode both rules pinch to the diagonal
    let filtered = channels::gpi_local(&plus, &Partition::new(vec![LocalFactor::Mode]), &[0])?;
    Ok(SwapReport {
        input_label: "plus_plus".into(),
        ssr,
        input: MatrixRecord::from_density(&plus),
        register_in: MatrixRecord::from_density(&plus),
        simulation_deviation: max_abs_diff(register_out.matrix(), filtered.matrix()),
        erased_norm: channels::erased_coherence(&plus, &filtered),
        register_out: MatrixRecord::from_density(&register_out),
        orbital_out: MatrixRecord::from_density(&orbital_out),
        filtered: MatrixRecord::from_density(&filtered),
    })
}

fn protocol_report(label: String, rho: &DensityMatrix, ssr: SsrKind) -> Result<SwapReport, CliError> {
    let sigma = vacuum(rho.dim());
    let run = channels::run_swap_protocol(rho, &sigma)?;
    let parity = channels::parity_filter(rho)?;
    let filtered = match ssr {
        SsrKind::Number => {
            let factor = if rho.dim() == 16 { LocalFactor::Orbital } else { LocalFactor::Mode };
            SsrKind::Number.project(rho, factor)?
        }
        _ => parity.clone(),
    };
    Ok(SwapReport {
        input_label: label,
        ssr,
        input: MatrixRecord::from_density(rho),
        register_in: MatrixRecord::from_density(&sigma),
        simulation_deviation: max_abs_diff(run.register_out.matrix(), parity.matrix()),
        erased_norm: channels::erased_coherence(rho, &filtered),
        register_out: MatrixRecord::from_density(&run.register_out),
        orbital_out: MatrixRecord::from_density(&run.orbital_out),
        filtered: MatrixRecord::from_density(&filtered),
    })
}

pub fn cmd_swap_demo(args: &SwapArgs) -> Result<Outcome, CliError> {
    let ssr = SsrKind::from(args.ssr);
    let report = match (&args.state, args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let m: MatrixRecord = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            protocol_report(path.display().to_string(), &m.to_density()?, ssr)?
        }
        (None, Preset::PlusPlus) => plus_plus_report(ssr)?,
        (None, Preset::PsiPlus) => {
            let rho = pair_state(&[((local::UP, local::DOWN), FRAC_1_SQRT_2), ((local::DOWN, local::UP), FRAC_1_SQRT_2)]);
            protocol_report("psi_plus".into(), &rho, ssr)?
        }
        (None, Preset::PhiPlus) => {
            let rho = pair_state(&[((local::EMPTY, local::DOUBLE), FRAC_1_SQRT_2), ((local::DOUBLE, local::EMPTY), FRAC_1_SQRT_2)]);
            protocol_report("phi_plus".into(), &rho, ssr)?
        }
    };
    emit_json(&report, None)?;
    Ok(Outcome::Done)
}
