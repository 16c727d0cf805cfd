//! Plain-text matrix format.
//!
//! ```text
//! q=3^1 n=2 m=2
//! 1 2
//! 0 1
//! ```
//!
//! Entries of extension fields are comma-joined base-p digits, constant first.

use super::field::Field;
use super::matrix::FqMatrix;
use super::poly::FqPoly;
use crate::error::{Error, Result};

pub fn write_matrix(f: &Field, m: &FqMatrix) -> String {
    let mut out = format!("q={}^{} n={} m={}\n", f.p(), f.k(), m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&a| f.format_elem(a)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the header line, returning (p, k, rows, cols).
pub fn parse_header(line: &str) -> Result<(u32, u32, usize, usize)> {
    let mut q = None;
    let mut n = None;
    let mut m = None;
    for tok in line.split_whitespace() {
        let (key, val) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("bad header token {tok:?}")))?;
        match key {
            "q" => {
                let (p, k) = val.split_once('^').unwrap_or((val, "1"));
                let p: u32 = p.parse().map_err(|_| Error::Parse(format!("bad q {val:?}")))?;
                let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad q {val:?}")))?;
                q = Some((p, k));
            }
            "n" => n = Some(val.parse().map_err(|_| Error::Parse(format!("bad n {val:?}")))?),
            "m" => m = Some(val.parse().map_err(|_| Error::Parse(format!("bad m {val:?}")))?),
            _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
        }
    }
    match (q, n, m) {
        (Some((p, k)), Some(n), Some(m)) => Ok((p, k, n, m)),
        _ => Err(Error::Parse("header must give q, n and m".into())),
    }
}

/// Reads a matrix; the field is built from the header.
pub fn read_matrix(text: &str) -> Result<(Field, FqMatrix)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let (p, k, _, _) = parse_header(header)?;
    let f = Field::with_degree(p, k)?;
    let m = read_body(&f, header, lines)?;
    Ok((f, m))
}

/// Reads a matrix over a given field; the header must agree with it.
pub fn read_matrix_in(f: &Field, text: &str) -> Result<FqMatrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    read_body(f, header, lines)
}

pub(crate) fn read_body<'a>(f: &Field, header: &str, lines: impl Iterator<Item = &'a str>) -> Result<FqMatrix> {
    let (p, k, n, m) = parse_header(header)?;
    if p != f.p() || k != f.k() {
        return Err(Error::FieldMismatch);
    }
    let mut data = Vec::with_capacity(n * m);
    let mut count = 0;
    for line in lines {
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != m {
            return Err(Error::Parse(format!("row {count} has {} entries, expected {m}", row.len())));
        }
        for tok in row {
            data.push(f.parse_elem(tok)?);
        }
        count += 1;
    }
    if count != n {
        return Err(Error::Parse(format!("expected {n} rows, found {count}")));
    }
    Ok(FqMatrix::from_data(n, m, data))
}

/// A polynomial is written as a 1-row matrix of coefficients, constant term first.
pub fn write_poly(f: &Field, p: &FqPoly) -> String {
    let row = FqMatrix::from_data(1, p.coeffs().len(), p.coeffs().to_vec());
    write_matrix(f, &row)
}

pub fn read_poly(f: &Field, text: &str) -> Result<FqPoly> {
    let m = read_matrix_in(f, text)?;
    if m.rows() != 1 {
        return Err(Error::Parse("polynomial must be a single row".into()));
    }
    Ok(FqPoly::from_coeffs(m.row(0).to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Fq;

    #[test]
    fn roundtrip_prime_and_extension() {
        for q in [5u64, 9] {
            let f = Field::new(q).unwrap();
            let m = FqMatrix::from_data(2, 3, (0..6).map(|i| Fq(i % q as u32)).collect());
            let text = write_matrix(&f, &m);
            let (f2, m2) = read_matrix(&text).unwrap();
            assert_eq!(f2, f);
            assert_eq!(m2, m);
        }
        let f = Field::new(9).unwrap();
        assert!(write_matrix(&f, &FqMatrix::identity(1)).contains("1,0"));
    }

    #[test]
    fn rejects_ragged() {
        assert!(read_matrix("q=3^1 n=2 m=2\n1 2\n0\n").is_err());
        assert!(read_matrix("q=3^1 n=2 m=2\n1 2\n").is_err());
    }
}
