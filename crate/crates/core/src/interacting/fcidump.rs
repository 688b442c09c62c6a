//! FCIDUMP integral files: free-form `&FCI … &END` header followed by
//! `value i j k l` records in chemist notation.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Duplicated symmetry-equivalent entries must agree to this.
pub const CONSISTENCY_TOL: f64 = 1e-10;

/// Spatial-orbital integrals `h_ij`, `(ij|kl)` and the core energy.
#[derive(Debug, Clone, PartialEq)]
pub struct FcidumpData {
    pub norb: usize,
    pub nelec: usize,
    pub ms2: i32,
    pub h: DMatrix<f64>,
    /// `(ij|kl)` at `((i·n + j)·n + k)·n + l`, all eight permutations filled.
    pub eri: Vec<f64>,
    pub core: f64,
}

impl FcidumpData {
    pub fn zeros(norb: usize, nelec: usize, ms2: i32) -> Self {
        Self {
            norb,
            nelec,
            ms2,
            h: DMatrix::zeros(norb, norb),
            eri: vec![0.0; norb.pow(4)],
            core: 0.0,
        }
    }

    #[inline]
    pub fn eri_index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.norb + j) * self.norb + k) * self.norb + l
    }

    pub fn v(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.eri[self.eri_index(i, j, k, l)]
    }

    /// Sets `(ij|kl)` and its seven symmetry partners.
    pub fn set_v(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        for (a, b, c, d) in eightfold(i, j, k, l) {
            let idx = self.eri_index(a, b, c, d);
            self.eri[idx] = value;
        }
    }

    pub fn set_h(&mut self, i: usize, j: usize, value: f64) {
        self.h[(i, j)] = value;
        self.h[(j, i)] = value;
    }

    /// Writes the unique entries (`i ≥ j`, `k ≥ l`, `ij ≥ kl`), zeros omitted.
    pub fn to_fcidump_string(&self) -> String {
        let n = self.norb;
        let mut out = format!("&FCI NORB={},NELEC={},MS2={},\n", n, self.nelec, self.ms2);
        out.push_str(" ORBSYM=");
        out.push_str(&vec!["1"; n].join(","));
        out.push_str(",\n ISYM=1,\n&END\n");
        for i in 0..n {
            for j in 0..=i {
                for k in 0..n {
                    for l in 0..=k {
                        if pair_rank(i, j) < pair_rank(k, l) {
                            continue;
                        }
                        let v = self.v(i, j, k, l);
                        if v != 0.0 {
                            let _ = writeln!(out, "{v:e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let v = self.h[(i, j)];
                if v != 0.0 {
                    let _ = writeln!(out, "{v:e} {} {} 0 0", i + 1, j + 1);
                }
            }
        }
        let _ = writeln!(out, "{:e} 0 0 0 0", self.core);
        out
    }
}

fn pair_rank(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

fn eightfold(i: usize, j: usize, k: usize, l: usize) -> [(usize, usize, usize, usize); 8] {
    [
        (i, j, k, l),
        (j, i, k, l),
        (i, j, l, k),
        (j, i, l, k),
        (k, l, i, j),
        (l, k, i, j),
        (k, l, j, i),
        (l, k, j, i),
    ]
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Fcidump { line, msg: msg.into() }
}

struct Header {
    norb: usize,
    nelec: usize,
    ms2: i32,
}

fn parse_header(text: &str) -> Result<(Header, usize)> {
    let mut header = String::new();
    let mut body_start = None;
    for (n, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        let upper = trimmed.to_ascii_uppercase();
        let (content, done) = if let Some(p) = upper.find("&END") {
            (&trimmed[..p], true)
        } else if trimmed == "/" || trimmed.ends_with('/') {
            (trimmed.trim_end_matches('/'), true)
        } else {
            (trimmed, false)
        };
        header.push_str(content);
        header.push(',');
        if done {
            body_start = Some(n + 1);
            break;
        }
    }
    let body_start = body_start.ok_or_else(|| err(1, "header not terminated by &END or /"))?;
    let mut upper = header.to_ascii_uppercase();
    while upper.contains(" =") || upper.contains("= ") || upper.contains("\t=") || upper.contains("=\t") {
        upper = upper.replace(" =", "=").replace("= ", "=").replace("\t=", "=").replace("=\t", "=");
    }
    let rest = upper
        .trim_start()
        .strip_prefix("&FCI")
        .ok_or_else(|| err(1, "header must start with &FCI"))?;

    let mut fields: Vec<(String, String)> = Vec::new();
    for token in rest.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
        if let Some((key, value)) = token.split_once('=') {
            fields.push((key.trim().to_string(), value.trim().to_string()));
        } else if let Some(last) = fields.last_mut() {
            // continuation of a list such as ORBSYM=1,1,1
            last.1.push(',');
            last.1.push_str(token);
        } else {
            return Err(err(1, format!("unexpected header token {token:?}")));
        }
    }
    let get = |key: &str| -> Result<&str> {
        fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.split(',').next().unwrap_or("").trim())
            .ok_or_else(|| err(1, format!("header is missing {key}")))
    };
    let norb: usize = get("NORB")?.parse().map_err(|_| err(1, "NORB is not a non-negative integer"))?;
    let nelec: usize = get("NELEC")?.parse().map_err(|_| err(1, "NELEC is not a non-negative integer"))?;
    let ms2: i32 = match get("MS2") {
        Ok(v) => v.parse().map_err(|_| err(1, "MS2 is not an integer"))?,
        Err(_) => 0,
    };
    if norb == 0 {
        return Err(err(1, "NORB must be positive"));
    }
    Ok((Header { norb, nelec, ms2 }, body_start))
}

fn parse_value(s: &str, line: usize) -> Result<f64> {
    s.replace(['D', 'd'], "E")
        .parse()
        .map_err(|_| err(line, format!("cannot parse value {s:?}")))
}

/// Parses FCIDUMP text. Symmetry-equivalent duplicates must agree within
/// [`CONSISTENCY_TOL`]; orbital-energy records `e i 0 0 0` are ignored.
pub fn parse_fcidump(text: &str) -> Result<FcidumpData> {
    let (header, body_start) = parse_header(text)?;
    let n = header.norb;
    let mut data = FcidumpData::zeros(n, header.nelec, header.ms2);
    let mut seen_v: Vec<bool> = vec![false; n.pow(4)];
    let mut seen_h = vec![false; n * n];
    let mut seen_core = false;

    for (offset, raw) in text.lines().skip(body_start).enumerate() {
        let line = body_start + offset + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(err(line, format!("expected `value i j k l`, got {} fields", parts.len())));
        }
        let value = parse_value(parts[0], line)?;
        let mut idx = [0usize; 4];
        for (slot, p) in idx.iter_mut().zip(&parts[1..]) {
            *slot = p.parse().map_err(|_| err(line, format!("bad index {p:?}")))?;
            if *slot > n {
                return Err(err(line, format!("index {slot} exceeds NORB={n}")));
            }
        }
        let check = |old: f64, seen: bool| -> Result<()> {
            if seen && (old - value).abs() > CONSISTENCY_TOL {
                return Err(err(line, format!("entry {value} conflicts with earlier value {old}")));
            }
            Ok(())
        };
        match idx {
            [0, 0, 0, 0] => {
                check(data.core, seen_core)?;
                data.core = value;
                seen_core = true;
            }
            [i, j, 0, 0] if i > 0 && j > 0 => {
                let (i, j) = (i - 1, j - 1);
                check(data.h[(i, j)], seen_h[i * n + j])?;
                data.set_h(i, j, value);
                seen_h[i * n + j] = true;
                seen_h[j * n + i] = true;
            }
            [i, 0, 0, 0] if i > 0 => {
                log::debug!("ignoring orbital energy record on line {line}");
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (i, j, k, l) = (i - 1, j - 1, k - 1, l - 1);
                let at = data.eri_index(i, j, k, l);
                check(data.eri[at], seen_v[at])?;
                data.set_v(i, j, k, l, value);
                for (a, b, c, d) in eightfold(i, j, k, l) {
                    let at = data.eri_index(a, b, c, d);
                    seen_v[at] = true;
                }
            }
            _ => return Err(err(line, format!("unsupported index pattern {idx:?}"))),
        }
    }
    Ok(data)
}

pub fn read_fcidump(path: &Path) -> Result<FcidumpData> {
    parse_fcidump(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_orbital_file() {
        let text = "&FCI NORB=1,NELEC=1,MS2=1,\n&END\n -1.0 1 1 0 0\n";
        let d = parse_fcidump(text).unwrap();
        assert_eq!((d.norb, d.nelec, d.ms2), (1, 1, 1));
        assert_eq!(d.h[(0, 0)], -1.0);
        assert_eq!(d.core, 0.0);
    }

    #[test]
    fn core_only_file() {
        let text = "&FCI NORB=2,NELEC=2,MS2=0\n/\n 3.5 0 0 0 0\n";
        let d = parse_fcidump(text).unwrap();
        assert_eq!(d.core, 3.5);
        assert!(d.h.iter().all(|&x| x == 0.0));
        assert!(d.eri.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn multiline_header_and_fortran_exponents() {
        let text = " &FCI NORB=  2,NELEC=2,MS2=0,\n  ORBSYM=1,1,\n  ISYM=1,\n &END\n 0.5D+00 1 1 1 1\n 0.25 2 1 1 1\n -1.25d0 2 1 0 0\n";
        let d = parse_fcidump(text).unwrap();
        assert_eq!(d.v(0, 0, 0, 0), 0.5);
        for (a, b, c, e) in eightfold(1, 0, 0, 0) {
            assert_eq!(d.v(a, b, c, e), 0.25);
        }
        assert_eq!(d.h[(0, 1)], -1.25);
        assert_eq!(d.h[(1, 0)], -1.25);
    }

    #[test]
    fn errors() {
        assert!(parse_fcidump("NORB=1\n").is_err());
        assert!(parse_fcidump("&FCI NELEC=1,\n&END\n").is_err());
        let overflow = "&FCI NORB=1,NELEC=1,\n&END\n 1.0 2 1 0 0\n";
        assert!(matches!(parse_fcidump(overflow), Err(Error::Fcidump { line: 3, .. })));
        let conflict = "&FCI NORB=2,NELEC=2,\n&END\n 1.0 1 2 1 1\n 2.0 2 1 1 1\n";
        assert!(parse_fcidump(conflict).is_err());
        let agree = "&FCI NORB=2,NELEC=2,\n&END\n 1.0 1 2 1 1\n 1.0 1 1 2 1\n";
        assert!(parse_fcidump(agree).is_ok());
        assert!(parse_fcidump("&FCI NORB=1,NELEC=1,\n&END\n 1.0 1 1\n").is_err());
    }

    #[test]
    fn round_trip() {
        let mut d = FcidumpData::zeros(3, 4, 0);
        d.set_h(0, 1, -0.5);
        d.set_h(2, 2, 0.1);
        d.set_v(0, 0, 1, 1, 0.3);
        d.set_v(2, 1, 0, 1, -1.0 / 3.0);
        d.core = 1.0 / 7.0;
        let again = parse_fcidump(&d.to_fcidump_string()).unwrap();
        assert_eq!(again, d);
    }
}
