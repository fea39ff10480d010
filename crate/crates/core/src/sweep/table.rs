use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::net::connectivity_threshold;
use crate::numfmt::g9;

use super::p_grid;

pub const CSV_HEADER: [&str; 8] = ["N", "p", "K", "rep", "R_mean", "R_std", "edges", "wall_s"];

/// One simulation: time-averaged order parameter for a `(N, p, K, replicate)` cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub p: f64,
    pub k: f64,
    pub rep: usize,
    pub r_mean: f64,
    pub r_std: f64,
    pub edges: usize,
    pub wall_s: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

/// Picks one edge probability per network size out of a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PSelector {
    /// `p = ln N / N`.
    Threshold,
    /// `p_c + i Δp` from [`p_grid`].
    Ladder(usize),
    /// A fixed probability, e.g. `1` for complete graphs.
    Value(f64),
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

impl PSelector {
    /// Whether `p` is the selected probability for size `n`, allowing for
    /// the 9 significant digits kept in CSV files.
    pub fn matches(&self, n: usize, p: f64) -> bool {
        let target = match *self {
            PSelector::Threshold => match connectivity_threshold(n) {
                Ok(pc) => pc,
                Err(_) => return false,
            },
            PSelector::Ladder(i) => match p_grid(n) {
                Ok(grid) if i < grid.len() => grid[i],
                _ => return false,
            },
            PSelector::Value(v) => v,
        };
        close(p, target, 1e-8)
    }
}

impl FromStr for PSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "threshold" || s == "pc" {
            return Ok(PSelector::Threshold);
        }
        if let Some(i) = s.strip_prefix("ladder:") {
            return i.parse().map(PSelector::Ladder).map_err(|_| Error::param(format!("bad ladder index in {s:?}")));
        }
        match s.parse::<f64>() {
            Ok(v) if (0.0..=1.0).contains(&v) => Ok(PSelector::Value(v)),
            _ => Err(Error::param(format!("p selector must be `threshold`, `ladder:<i>` or a probability, got {s:?}"))),
        }
    }
}

impl fmt::Display for PSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PSelector::Threshold => write!(f, "threshold"),
            PSelector::Ladder(i) => write!(f, "ladder:{i}"),
            PSelector::Value(v) => write!(f, "{v}"),
        }
    }
}

impl ResultTable {
    pub fn new(rows: Vec<ResultRow>) -> Self {
        Self { rows }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Sorts rows by `(N, p, K, rep)`.
    pub fn sort_canonical(&mut self) {
        self.rows
            .sort_by(|a, b| a.n.cmp(&b.n).then(a.p.total_cmp(&b.p)).then(a.k.total_cmp(&b.k)).then(a.rep.cmp(&b.rep)));
    }

    pub fn select(&self, sel: &PSelector) -> ResultTable {
        Self::new(self.rows.iter().filter(|r| sel.matches(r.n, r.p)).copied().collect())
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Distinct edge probabilities present for size `n`, ascending.
    pub fn p_values(&self, n: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self.rows.iter().filter(|r| r.n == n).map(|r| r.p).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Replicate-averaged `R(K)` for one `(n, p)`, ascending in `K`.
    pub fn mean_curve(&self, n: usize, p: f64) -> Vec<(f64, f64)> {
        let mut acc: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
        for r in self.rows.iter().filter(|r| r.n == n && r.p == p) {
            // non-negative floats order like their bit patterns
            let k = r.k + 0.0;
            let e = acc.entry(k.to_bits()).or_insert((k, 0.0, 0));
            e.1 += r.r_mean;
            e.2 += 1;
        }
        acc.into_values().map(|(k, s, c)| (k, s / c as f64)).collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("ascii csv")
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        wtr.write_record(CSV_HEADER)?;
        for r in &self.rows {
            wtr.write_record([
                r.n.to_string(),
                g9(r.p),
                g9(r.k),
                r.rep.to_string(),
                g9(r.r_mean),
                g9(r.r_std),
                r.edges.to_string(),
                g9(r.wall_s),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    /// Reads a result CSV. Columns are located by header name; extra columns are ignored.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let headers = rdr.headers().map_err(|e| Error::Malformed(e.to_string()))?.clone();
        let mut idx = [0usize; 8];
        for (slot, name) in idx.iter_mut().zip(CSV_HEADER) {
            *slot = headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Malformed(format!("missing column `{name}`")))?;
        }
        let mut rows = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Malformed(e.to_string()))?;
            let field = |c: usize| -> Result<&str> {
                rec.get(idx[c])
                    .ok_or_else(|| Error::Malformed(format!("row {}: missing `{}`", line + 2, CSV_HEADER[c])))
            };
            let int = |c: usize| -> Result<usize> {
                field(c)?
                    .parse()
                    .map_err(|_| Error::Malformed(format!("row {}: `{}` is not an integer", line + 2, CSV_HEADER[c])))
            };
            let real = |c: usize| -> Result<f64> {
                field(c)?
                    .parse()
                    .map_err(|_| Error::Malformed(format!("row {}: `{}` is not a number", line + 2, CSV_HEADER[c])))
            };
            rows.push(ResultRow {
                n: int(0)?,
                p: real(1)?,
                k: real(2)?,
                rep: int(3)?,
                r_mean: real(4)?,
                r_std: real(5)?,
                edges: int(6)?,
                wall_s: real(7)?,
            });
        }
        Ok(Self { rows })
    }

    pub fn read_csv_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(f))
    }
}
