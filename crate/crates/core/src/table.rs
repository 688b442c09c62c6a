//! CSV schemas for scan tables. Floats are written in shortest round-trip
//! form, so `parse(emit(rows)) == rows`.

use std::io::{Read, Write};

use crate::tightbinding::{DminRow, ScanRow};
use crate::{Error, Result};

pub const SCAN_HEADER: [&str; 4] = ["eta", "d", "E_nssr", "E_pssr"];
pub const DMIN_HEADER: [&str; 3] = ["eta", "dmin_exact", "dmin_asymptotic"];

/// Writes scan rows. The `E_pssr` column is present only if some row has it;
/// rows without a value leave the cell empty.
pub fn write_scan<W: Write>(out: W, rows: &[ScanRow]) -> Result<()> {
    let with_p = rows.iter().any(|r| r.e_pssr.is_some());
    let mut w = csv::Writer::from_writer(out);
    let cols = if with_p { &SCAN_HEADER[..] } else { &SCAN_HEADER[..3] };
    w.write_record(cols)?;
    for r in rows {
        let mut rec = vec![r.eta.to_string(), r.d.to_string(), r.e_nssr.to_string()];
        if with_p {
            rec.push(r.e_pssr.map(|v| v.to_string()).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_dmin<W: Write>(out: W, rows: &[DminRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DMIN_HEADER)?;
    for r in rows {
        w.write_record([r.eta.to_string(), r.dmin_exact.to_string(), r.dmin_asymptotic.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn scan_to_string(rows: &[ScanRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_scan(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn dmin_to_string(rows: &[DminRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_dmin(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, name: &str, row: usize) -> Result<T> {
    let raw = rec.get(i).ok_or_else(|| Error::InvalidArgument(format!("row {row}: missing {name}")))?;
    raw.parse().map_err(|_| Error::InvalidArgument(format!("row {row}: cannot parse {name} from {raw:?}")))
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if found.iter().ne(expected.iter().copied()) {
        return Err(Error::InvalidArgument(format!(
            "unexpected header {:?}, expected {:?}",
            found.iter().collect::<Vec<_>>(),
            expected
        )));
    }
    Ok(())
}

pub fn read_scan<R: Read>(input: R) -> Result<Vec<ScanRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    let with_p = header.len() == 4;
    check_header(&header, if with_p { &SCAN_HEADER[..] } else { &SCAN_HEADER[..3] })?;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let e_pssr = match rec.get(3) {
            Some(s) if with_p && !s.is_empty() => Some(field(&rec, 3, "E_pssr", i + 1)?),
            _ => None,
        };
        rows.push(ScanRow {
            eta: field(&rec, 0, "eta", i + 1)?,
            d: field(&rec, 1, "d", i + 1)?,
            e_nssr: field(&rec, 2, "E_nssr", i + 1)?,
            e_pssr,
        });
    }
    Ok(rows)
}

pub fn read_dmin<R: Read>(input: R) -> Result<Vec<DminRow>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(r.headers()?, &DMIN_HEADER)?;
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        rows.push(DminRow {
            eta: field(&rec, 0, "eta", i + 1)?,
            dmin_exact: field(&rec, 1, "dmin_exact", i + 1)?,
            dmin_asymptotic: field(&rec, 2, "dmin_asymptotic", i + 1)?,
        });
    }
    Ok(rows)
}
