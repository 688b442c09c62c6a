use std::path::PathBuf;

use clap::{Args, ValueEnum};
use orbent::entanglement::{Diagnostics, LogBase, Method, ReeOptions, SsrKind};
use orbent::table;
use orbent::tightbinding::{
    self, dmin_asymptotic, dmin_exact, grid, DminRow, FiniteRing, Scale, TbQuery, DMIN_ETA_RANGE, SCAN_ETA_RANGE,
    SCAN_POINTS_LINEAR, SCAN_POINTS_LOG,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{emit, emit_json, outcome};
use crate::{BaseArg, CliError, Outcome, SsrArg};

#[derive(Args)]
pub struct TbArgs {
    /// Filling per spin orbital, in [0, 1].
    #[arg(long)]
    eta: f64,
    /// Site separation.
    #[arg(long)]
    d: u32,
    /// Use a finite ring of this many sites; the electron count 2·L·eta must
    /// be an integer of the form 4k+2.
    #[arg(long = "finite-L", value_name = "L")]
    finite_l: Option<usize>,
    #[arg(long, value_enum, default_value = "n")]
    ssr: SsrArg,
    #[arg(long = "log-base", value_enum, default_value = "e")]
    log_base: BaseArg,
}

#[derive(Serialize)]
struct TbRecord {
    model: &'static str,
    eta: f64,
    d: u32,
    sites: Option<usize>,
    electrons: Option<usize>,
    ssr: SsrKind,
    log_base: LogBase,
    value: f64,
    value_nats: f64,
    w: f64,
    a: f64,
    b: f64,
    r: f64,
    t: f64,
    /// Whether the number-conserving criterion detects entanglement.
    nssr_entangled: bool,
    method: Method,
    diagnostics: Option<Diagnostics>,
}

fn finite_ring(sites: usize, eta: f64) -> Result<FiniteRing, CliError> {
    let n = 2.0 * sites as f64 * eta;
    if (n - n.round()).abs() > 1e-9 || n < 0.0 {
        return Err(CliError::Usage(format!("2·L·eta = {n} is not an electron count")));
    }
    Ok(FiniteRing::new(sites, n.round() as usize)?)
}

pub fn cmd_tb(args: &TbArgs) -> Result<Outcome, CliError> {
    let query = match args.finite_l {
        Some(sites) => TbQuery::finite(finite_ring(sites, args.eta)?, args.d)?,
        None => TbQuery::thermodynamic(args.eta, args.d)?,
    };
    let closed = tightbinding::tb_entanglement(&query)?;
    let result = match SsrKind::from(args.ssr) {
        SsrKind::Parity => {
            let rho = tightbinding::tb_query_state(&query)?;
            orbent::entanglement::ree_numeric(&rho, SsrKind::Parity, &ReeOptions::default())?
        }
        _ => orbent::entanglement::EntanglementResult::closed_form(closed.e_nssr, SsrKind::Number),
    };
    let base = LogBase::from(args.log_base);
    let record = TbRecord {
        model: "tight_binding",
        eta: query.eta,
        d: args.d,
        sites: query.ring.map(|r| r.sites),
        electrons: query.ring.map(|r| r.electrons),
        ssr: result.ssr,
        log_base: base,
        value: result.in_base(base),
        value_nats: result.value,
        w: closed.w,
        a: closed.a,
        b: closed.b,
        r: closed.r,
        t: closed.t,
        nssr_entangled: closed.entangled,
        method: result.method,
        diagnostics: result.diagnostics,
    };
    emit_json(&record, None)?;
    Ok(outcome(&[&result]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Log,
}

impl From<ScaleArg> for Scale {
    fn from(s: ScaleArg) -> Self {
        match s {
            ScaleArg::Linear => Scale::Linear,
            ScaleArg::Log => Scale::Log,
        }
    }
}

#[derive(Args)]
pub struct ScanArgs {
    /// Comma-separated site separations.
    #[arg(long = "d-list", value_delimiter = ',', default_value = "1,2,3,5,10")]
    d_list: Vec<u32>,
    #[arg(long = "eta-min", default_value_t = SCAN_ETA_RANGE.0)]
    eta_min: f64,
    #[arg(long = "eta-max", default_value_t = SCAN_ETA_RANGE.1)]
    eta_max: f64,
    /// Grid size; defaults to 2001 (linear) or 200 (log).
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum, default_value = "linear")]
    scale: ScaleArg,
    /// Also compute the parity-rule value numerically (slow).
    #[arg(long)]
    pssr: bool,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn cmd_tb_scan(args: &ScanArgs) -> Result<Outcome, CliError> {
    if args.d_list.is_empty() {
        return Err(CliError::Usage("--d-list is empty".into()));
    }
    let points = args.points.unwrap_or(match args.scale {
        ScaleArg::Linear => SCAN_POINTS_LINEAR,
        ScaleArg::Log => SCAN_POINTS_LOG,
    });
    let etas = grid(args.eta_min, args.eta_max, points, args.scale.into())?;
    let opts = ReeOptions::default();
    let pssr = args.pssr.then_some(&opts);
    // validate once so a bad flag is a usage error rather than a row failure
    for &d in &args.d_list {
        TbQuery::thermodynamic(etas[0], d)?;
    }
    let cells: Vec<(f64, u32)> = etas.iter().flat_map(|&e| args.d_list.iter().map(move |&d| (e, d))).collect();
    let rows = cells
        .par_iter()
        .map(|&(eta, d)| tightbinding::scan_row(eta, d, pssr))
        .collect::<Result<Vec<_>, _>>()?;
    emit(&table::scan_to_string(&rows)?, args.out.as_deref())?;
    Ok(Outcome::Done)
}

#[derive(Args)]
pub struct DminArgs {
    #[arg(long = "eta-min", default_value_t = DMIN_ETA_RANGE.0)]
    eta_min: f64,
    #[arg(long = "eta-max", default_value_t = DMIN_ETA_RANGE.1)]
    eta_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, value_enum, default_value = "linear")]
    scale: ScaleArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn cmd_dmin_scan(args: &DminArgs) -> Result<Outcome, CliError> {
    if !(args.eta_min > 0.0 && args.eta_max < 1.0) {
        return Err(CliError::Usage("the filling range must lie inside (0, 1)".into()));
    }
    let etas = grid(args.eta_min, args.eta_max, args.points, args.scale.into())?;
    let rows = etas
        .par_iter()
        .map(|&eta| Ok(DminRow { eta, dmin_exact: dmin_exact(eta)?.d_min, dmin_asymptotic: dmin_asymptotic(eta) }))
        .collect::<Result<Vec<_>, orbent::Error>>()?;
    emit(&table::dmin_to_string(&rows)?, args.out.as_deref())?;
    Ok(Outcome::Done)
}
