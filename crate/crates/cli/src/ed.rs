use std::path::PathBuf;

use clap::Args;
use orbent::entanglement::{Diagnostics, LogBase, Method, ReeOptions, SsrKind};
use orbent::interacting::{
    self, build_hamiltonian, check_orbital_limit, ground_state, read_fcidump, ElectronicHamiltonian, HubbardParams, Solver,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{emit_json, outcome};
use crate::{BaseArg, CliError, Outcome, SsrArg};

#[derive(Args)]
#[command(group = clap::ArgGroup::new("model").required(true).args(["fcidump", "hubbard"]))]
#[command(group = clap::ArgGroup::new("pairs").required(true).args(["orbitals", "all_pairs"]))]
pub struct EdArgs {
    /// Integral file in FCIDUMP format.
    #[arg(long)]
    fcidump: Option<PathBuf>,
    /// Periodic Hubbard ring `L,U` with hopping ½.
    #[arg(long, value_delimiter = ',', value_name = "L,U")]
    hubbard: Option<Vec<f64>>,
    /// Electron count; defaults to NELEC of the integral file.
    #[arg(long)]
    nelec: Option<usize>,
    /// Twice the magnetization; defaults to MS2 of the file, or N mod 2.
    #[arg(long)]
    sz2: Option<i32>,
    /// One orbital pair `i,j`, 1-based.
    #[arg(long, value_delimiter = ',', value_name = "I,J")]
    orbitals: Option<Vec<usize>>,
    /// Orbital 1 against every other orbital.
    #[arg(long = "all-pairs")]
    all_pairs: bool,
    #[arg(long, value_enum, default_value = "p")]
    ssr: SsrArg,
    #[arg(long = "log-base", value_enum, default_value = "e")]
    log_base: BaseArg,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct EdRecord {
    model: &'static str,
    source: Option<String>,
    norb: usize,
    u: Option<f64>,
    nelec: usize,
    sz2: i32,
    energy: f64,
    degenerate: bool,
    gap: Option<f64>,
    solver: Solver,
    /// 1-based orbital indices.
    orbitals: [usize; 2],
    /// Separation along the ring, for Hubbard input.
    d: Option<usize>,
    ssr: SsrKind,
    log_base: LogBase,
    value: f64,
    value_nats: f64,
    method: Method,
    diagnostics: Option<Diagnostics>,
}

struct Model {
    name: &'static str,
    source: Option<String>,
    ham: ElectronicHamiltonian,
    u: Option<f64>,
    nelec: Option<usize>,
    ms2: Option<i32>,
    ring: Option<usize>,
}

fn load_model(args: &EdArgs) -> Result<Model, CliError> {
    if let Some(path) = &args.fcidump {
        if !path.exists() {
            return Err(CliError::Usage(format!("integral file {} does not exist", path.display())));
        }
        let data = read_fcidump(path)?;
        check_orbital_limit(data.norb)?;
        return Ok(Model {
            name: "fcidump",
            source: Some(path.display().to_string()),
            ham: ElectronicHamiltonian::from(&data),
            u: None,
            nelec: Some(data.nelec),
            ms2: Some(data.ms2),
            ring: None,
        });
    }
    let spec = args.hubbard.as_deref().unwrap_or_default();
    let [l, u] = spec else {
        return Err(CliError::Usage("--hubbard expects L,U".into()));
    };
    if l.fract() != 0.0 || *l < 2.0 {
        return Err(CliError::Usage(format!("Hubbard size must be an integer ≥ 2, got {l}")));
    }
    let sites = *l as usize;
    check_orbital_limit(sites)?;
    Ok(Model {
        name: "hubbard",
        source: None,
        ham: HubbardParams::ring(sites, *u).to_hamiltonian()?,
        u: Some(*u),
        nelec: None,
        ms2: None,
        ring: Some(sites),
    })
}

pub fn cmd_ed(args: &EdArgs) -> Result<Outcome, CliError> {
    let model = load_model(args)?;
    let norb = model.ham.norb();
    let nelec = args
        .nelec
        .or(model.nelec)
        .ok_or_else(|| CliError::Usage("--nelec is required for Hubbard input".into()))?;
    let sz2 = args.sz2.or(model.ms2).unwrap_or((nelec % 2) as i32);

    let pairs: Vec<(usize, usize)> = match &args.orbitals {
        Some(p) => {
            let &[i, j] = p.as_slice() else {
                return Err(CliError::Usage("--orbitals expects I,J".into()));
            };
            if i == 0 || j == 0 || i > norb || j > norb || i == j {
                return Err(CliError::Usage(format!("orbitals must be distinct and in 1..={norb}, got {i},{j}")));
            }
            vec![(i - 1, j - 1)]
        }
        None => (1..norb).map(|j| (0, j)).collect(),
    };

    let h = build_hamiltonian(&model.ham, nelec, sz2)?;
    let gs = ground_state(&h)?;
    let ssr = SsrKind::from(args.ssr);
    let base = LogBase::from(args.log_base);
    let opts = ReeOptions::default();
    let results = pairs
        .par_iter()
        .map(|&(i, j)| interacting::orbital_pair_entanglement_with(&gs.state, i, j, ssr, &opts))
        .collect::<Result<Vec<_>, _>>()?;

    let records: Vec<EdRecord> = pairs
        .iter()
        .zip(&results)
        .map(|(&(i, j), r)| EdRecord {
            model: model.name,
            source: model.source.clone(),
            norb,
            u: model.u,
            nelec,
            sz2,
            energy: gs.energy,
            degenerate: gs.degenerate,
            gap: gs.gap,
            solver: gs.solver,
            orbitals: [i + 1, j + 1],
            d: model.ring.map(|l| interacting::ring_separation(i, j, l)),
            ssr: r.ssr,
            log_base: base,
            value: r.in_base(base),
            value_nats: r.value,
            method: r.method,
            diagnostics: r.diagnostics,
        })
        .collect();
    emit_json(&records, args.out.as_deref())?;
    Ok(outcome(&results.iter().collect::<Vec<_>>()))
}
