//! On-disk formats: the binary matrix container and the CSV tables.
//!
//! Container layout, all little-endian:
//!
//! | bytes | field |
//! |---|---|
//! | 4 | magic `DSMX` |
//! | 4 | format version, `u32` |
//! | 4 | band limit `B`, `u32` |
//! | 8 | `s`, `f64` (0 for a limit, NaN when unknown) |
//! | 4 | strategy, `u32`: 0 direct, 1 constrained, 2 regularized |
//! | 4 | FFT grid resolution, `u32` (0 when none was used) |
//! | 8 | rows, `u64` |
//! | 8 | cols, `u64` |
//! | 16·rows·cols | entries row-major, each `re: f64, im: f64` |

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::heatzeta::{HeatValue, ZetaSample};
use crate::linalg::{c, CMat};
use crate::spectra::{Spectrum, Strategy};

const MAGIC: &[u8; 4] = b"DSMX";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixHeader {
    pub band_limit: usize,
    pub s: Option<f64>,
    pub strategy: Strategy,
    pub grid: usize,
    pub rows: usize,
    pub cols: usize,
}

fn strategy_code(s: Strategy) -> u32 {
    match s {
        Strategy::Direct => 0,
        Strategy::Constrained => 1,
        Strategy::Regularized => 2,
    }
}

pub fn write_matrix(mut w: impl Write, band_limit: usize, s: Option<f64>, strategy: Strategy, grid: usize, m: &CMat) -> Result<()> {
    let mut buf = Vec::with_capacity(44 + 16 * m.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(band_limit as u32).to_le_bytes());
    buf.extend_from_slice(&s.unwrap_or(f64::NAN).to_le_bytes());
    buf.extend_from_slice(&strategy_code(strategy).to_le_bytes());
    buf.extend_from_slice(&(grid as u32).to_le_bytes());
    buf.extend_from_slice(&(m.nrows() as u64).to_le_bytes());
    buf.extend_from_slice(&(m.ncols() as u64).to_le_bytes());
    for r in 0..m.nrows() {
        for k in 0..m.ncols() {
            buf.extend_from_slice(&m[(r, k)].re.to_le_bytes());
            buf.extend_from_slice(&m[(r, k)].im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

fn take<const N: usize>(bytes: &[u8], at: &mut usize) -> Result<[u8; N]> {
    let out =
        bytes.get(*at..*at + N).ok_or_else(|| Error::Format(format!("truncated at byte {}", *at)))?.try_into().expect("slice has length N");
    *at += N;
    Ok(out)
}

pub fn read_matrix(mut r: impl Read) -> Result<(MatrixHeader, CMat)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let at = &mut 0;
    if &take::<4>(&bytes, at)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(&bytes, at)?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let band_limit = u32::from_le_bytes(take(&bytes, at)?) as usize;
    let s = f64::from_le_bytes(take(&bytes, at)?);
    let strategy = match u32::from_le_bytes(take(&bytes, at)?) {
        0 => Strategy::Direct,
        1 => Strategy::Constrained,
        2 => Strategy::Regularized,
        other => return Err(Error::Format(format!("unknown strategy code {other}"))),
    };
    let grid = u32::from_le_bytes(take(&bytes, at)?) as usize;
    let rows = u64::from_le_bytes(take(&bytes, at)?) as usize;
    let cols = u64::from_le_bytes(take(&bytes, at)?) as usize;
    let expected = rows.checked_mul(cols).and_then(|n| n.checked_mul(16)).map(|n| n + *at);
    if expected != Some(bytes.len()) {
        return Err(Error::Format(format!("payload of {} bytes does not match {rows}x{cols}", bytes.len() - *at)));
    }
    let mut m = CMat::zeros(rows, cols);
    for r in 0..rows {
        for k in 0..cols {
            let re = f64::from_le_bytes(take(&bytes, at)?);
            let im = f64::from_le_bytes(take(&bytes, at)?);
            m[(r, k)] = c(re, im);
        }
    }
    let header = MatrixHeader { band_limit, s: (!s.is_nan()).then_some(s), strategy, grid, rows, cols };
    Ok((header, m))
}

pub fn save_matrix(path: &Path, band_limit: usize, s: Option<f64>, strategy: Strategy, grid: usize, m: &CMat) -> Result<()> {
    write_matrix(std::io::BufWriter::new(std::fs::File::create(path)?), band_limit, s, strategy, grid, m)
}

pub fn load_matrix(path: &Path) -> Result<(MatrixHeader, CMat)> {
    read_matrix(std::fs::File::open(path)?)
}

/// Shortest round-trip representation, so tables are byte-stable.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// A CSV table held in memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Rows `k, lambda, residual` with `k` counted from 1.
pub fn spectrum_table(spec: &Spectrum) -> Table {
    let mut t = Table::new(&["k", "lambda", "residual"]);
    for (k, (l, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
        t.push(vec![(k + 1).to_string(), num(*l), num(*r)]);
    }
    t
}

/// Rows `t, value, certificate`.
pub fn heat_table(values: &[HeatValue]) -> Table {
    let mut t = Table::new(&["t", "value", "certificate"]);
    for v in values {
        t.push(vec![num(v.t), num(v.value), num(v.tail)]);
    }
    t
}

/// Rows `re, im, value_re, value_im, certificate`.
pub fn zeta_table(samples: &[ZetaSample]) -> Table {
    let mut t = Table::new(&["re", "im", "value_re", "value_im", "certificate"]);
    for z in samples {
        t.push(vec![num(z.x.0), num(z.x.1), num(z.value.0), num(z.value.1), num(z.error)]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn container_round_trip() {
        let m = CMat::from_fn(3, 2, |r, k| c(r as f64 + 0.25, -(k as f64) * 1e-300));
        let mut buf = Vec::new();
        write_matrix(&mut buf, 8, Some(0.05), Strategy::Regularized, 544, &m).unwrap();
        assert_eq!(buf.len(), 44 + 16 * 6);
        let (h, back) = read_matrix(buf.as_slice()).unwrap();
        assert_eq!(back, m);
        assert_eq!((h.band_limit, h.s, h.strategy, h.grid, h.rows, h.cols), (8, Some(0.05), Strategy::Regularized, 544, 3, 2));
        // row-major: second entry is (0, 1)
        assert_eq!(f64::from_le_bytes(buf[44 + 16..44 + 24].try_into().unwrap()), 0.25);
    }

    #[test]
    fn limit_header_has_no_s() {
        let mut buf = Vec::new();
        write_matrix(&mut buf, 2, None, Strategy::Constrained, 0, &CMat::identity(2, 2)).unwrap();
        assert_eq!(read_matrix(buf.as_slice()).unwrap().0.s, None);
        buf.pop();
        assert!(matches!(read_matrix(buf.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn spectrum_csv_layout() {
        let m = CMat::identity(2, 2);
        let k = CMat::from_diagonal(&crate::linalg::CVec::from_vec(vec![c(0.0, 0.0), c(0.5, 0.0)]));
        let spec = crate::spectra::solve(&k, &m, 2).unwrap();
        let text = spectrum_table(&spec).to_csv_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,lambda,residual");
        assert!(lines[2].starts_with("2,5e-1,"));
    }
}
