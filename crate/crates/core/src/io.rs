//! Matrix files and number formatting.
//!
//! JSON is `{"rows": r, "cols": c, "data": [[[re, im], ...], ...]}`; entries may
//! also be plain reals, and a bare array of rows is accepted. CSV is real-only,
//! one row per line.

use std::io;
use std::path::Path;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

#[derive(Deserialize)]
#[serde(untagged)]
enum WireEntry {
    Pair([f64; 2]),
    Real(f64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WireMatrix {
    Full {
        rows: usize,
        cols: usize,
        data: Vec<Vec<WireEntry>>,
    },
    Plain(Vec<Vec<WireEntry>>),
}

fn from_wire(wire: WireMatrix) -> Result<ComplexMatrix> {
    let (declared, rows) = match wire {
        WireMatrix::Full { rows, cols, data } => (Some((rows, cols)), data),
        WireMatrix::Plain(data) => (None, data),
    };
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|row| row.len() != c) {
        return Err(Error::Parse(format!("row {i} has {} entries, expected {c}", rows[i].len())));
    }
    if let Some((dr, dc)) = declared {
        // an empty data array carries no column count of its own
        if dr != r || (r > 0 && dc != c) {
            return Err(Error::Parse(format!("declared shape {dr}x{dc} but data is {r}x{c}")));
        }
    }
    let cols = if r == 0 { declared.map_or(0, |(_, dc)| dc) } else { c };
    let data = rows
        .into_iter()
        .flatten()
        .map(|e| match e {
            WireEntry::Pair([re, im]) => Complex64::new(re, im),
            WireEntry::Real(re) => Complex64::new(re, 0.0),
        })
        .collect();
    ComplexMatrix::new(r, cols, data)
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let data: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|r| self.row(r).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        let mut s = serializer.serialize_struct("ComplexMatrix", 3)?;
        s.serialize_field("rows", &self.rows())?;
        s.serialize_field("cols", &self.cols())?;
        s.serialize_field("data", &data)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = WireMatrix::deserialize(deserializer)?;
        from_wire(wire).map_err(serde::de::Error::custom)
    }
}

pub fn parse_json(text: &str) -> Result<ComplexMatrix> {
    let wire: WireMatrix = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    from_wire(wire)
}

pub fn parse_csv(text: &str) -> Result<ComplexMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("CSV line {}: {e}", i + 1)))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map(|x| Complex64::new(x, 0.0))
                    .map_err(|_| Error::Parse(format!("CSV line {}: '{field}' is not a real number", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    ComplexMatrix::from_rows(&rows)
}

/// Reads a matrix, choosing CSV for a `.csv` extension and JSON otherwise.
pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        parse_csv(&text)
    } else {
        parse_json(&text)
    }
}

/// Writes floats with 17 significant digits, enough to round-trip every `f64`.
struct ExactFloats;

impl serde_json::ser::Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_json_exact<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloats);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(format!("JSON encoding: {e}")))?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub fn write_matrix_json(path: &Path, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, to_json_exact(m)? + "\n")?;
    Ok(())
}

/// Six significant digits, fixed notation for moderate magnitudes.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let s = format!("{:.*}", (5 - exp) as usize, x);
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt6(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt6(z.im))
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", fmt6(z.re), fmt6(z.im.abs()))
    }
}

/// Right-aligned table of entries, one matrix row per line.
pub fn render_matrix(m: &ComplexMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|r| m.row(r).iter().map(|&z| fmt_complex(z)).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| format!("{c:>width$}"))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
