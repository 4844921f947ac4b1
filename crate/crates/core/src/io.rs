//! CSV and PGM artifacts. Every float is written with 17 significant
//! digits so outputs are byte-reproducible and round-trip exactly.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::basis::{BasisIndex, DiskPoint};
use crate::diskquad::{QuadratureRule, Samples};
use crate::error::{Error, Result};
use crate::gram::GramReport;
use crate::quatnum::Quaternion;

pub const FIELD_HEADER: [&str; 6] = ["x", "y", "s", "i", "j", "k"];
pub const COEFF_HEADER: [&str; 6] = ["n", "m", "s", "i", "j", "k"];
pub const ZERO_HEADER: [&str; 3] = ["n", "m", "j"];
pub const GRAM_HEADER: [&str; 13] = [
    "n1",
    "m1",
    "n2",
    "m2",
    "s",
    "i",
    "j",
    "k",
    "analytic_s",
    "analytic_i",
    "analytic_j",
    "analytic_k",
    "abs_dev",
];

/// Largest distance at which a CSV row binds to a quadrature node.
pub const NODE_MATCH_TOL: f64 = 1e-9;

/// Fixed 17-significant-digit scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn quat_fields(q: Quaternion) -> [String; 4] {
    q.to_array().map(fmt_f64)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_zeros_csv<W: Write>(w: W, zeros: &[(usize, usize, f64)]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(ZERO_HEADER).map_err(csv_err)?;
    for &(n, m, j) in zeros {
        out.write_record([n.to_string(), m.to_string(), fmt_f64(j)])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_field_csv<W: Write>(w: W, rows: &[(DiskPoint, Quaternion)]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(FIELD_HEADER).map_err(csv_err)?;
    for (p, q) in rows {
        let [s, i, j, k] = quat_fields(*q);
        out.write_record([fmt_f64(p.x), fmt_f64(p.y), s, i, j, k])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Coefficients in map order, which is `n` outer and `m` inner.
pub fn write_coeffs_csv<W: Write>(w: W, coeffs: &BTreeMap<BasisIndex, Quaternion>) -> Result<()> {
    let mut out = writer(w);
    out.write_record(COEFF_HEADER).map_err(csv_err)?;
    for (idx, c) in coeffs {
        let [s, i, j, k] = quat_fields(*c);
        out.write_record([idx.n.to_string(), idx.m.to_string(), s, i, j, k])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_gram_csv<W: Write>(w: W, report: &GramReport) -> Result<()> {
    let mut out = writer(w);
    out.write_record(GRAM_HEADER).map_err(csv_err)?;
    for e in report.entries() {
        let mut rec = vec![
            e.row.n.to_string(),
            e.row.m.to_string(),
            e.col.n.to_string(),
            e.col.m.to_string(),
        ];
        rec.extend(quat_fields(e.quadrature));
        rec.extend(quat_fields(e.analytic));
        rec.push(fmt_f64(e.abs_dev));
        out.write_record(rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a headed CSV, insisting on the exact header, and returns the
/// data rows with their 1-based line numbers.
fn read_table(path: &Path, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    if text.trim().is_empty() {
        return Err(Error::Format(format!("{}: empty file", path.display())));
    }
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let got = rd.headers().map_err(csv_err)?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::Format(format!(
            "{}: header must be `{}`, found `{}`",
            path.display(),
            header.join(","),
            got.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rd.records()
        .map(|r| {
            let r = r.map_err(csv_err)?;
            let line = r.position().map_or(0, |p| p.line());
            Ok((line, r))
        })
        .collect()
}

fn parse_num<T: std::str::FromStr>(path: &Path, line: u64, field: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::Format(format!("{}:{line}: cannot parse `{field}`", path.display())))
}

fn parse_quat(path: &Path, line: u64, rec: &csv::StringRecord, from: usize) -> Result<Quaternion> {
    let mut a = [0.0; 4];
    for (c, slot) in a.iter_mut().enumerate() {
        *slot = parse_num(path, line, &rec[from + c])?;
    }
    Ok(Quaternion::from_array(a))
}

pub fn read_coeffs_csv(path: &Path) -> Result<BTreeMap<BasisIndex, Quaternion>> {
    let mut out = BTreeMap::new();
    for (line, rec) in read_table(path, &COEFF_HEADER)? {
        let n: usize = parse_num(path, line, &rec[0])?;
        let m: usize = parse_num(path, line, &rec[1])?;
        if m == 0 {
            return Err(Error::Format(format!(
                "{}:{line}: radial index m must be >= 1",
                path.display()
            )));
        }
        let idx = BasisIndex::new(n, m);
        if out.insert(idx, parse_quat(path, line, &rec, 2)?).is_some() {
            return Err(Error::Format(format!(
                "{}:{line}: duplicate coefficient {idx}",
                path.display()
            )));
        }
    }
    Ok(out)
}

type Row = (f64, f64, Quaternion);

/// Reads `x,y,s,i,j,k` rows and binds them to the nodes of `rule`.
///
/// Every node must have a row within [`NODE_MATCH_TOL`]; rows away from
/// the nodes are ignored. No interpolation takes place.
pub fn parse_field_csv(path: &Path, rule: &QuadratureRule) -> Result<Samples> {
    let rows = read_table(path, &FIELD_HEADER)?;
    if rows.is_empty() {
        return Err(Error::Format(format!("{}: no data rows", path.display())));
    }
    let cell = |v: f64| (v / (4.0 * NODE_MATCH_TOL)).floor() as i64;
    let mut buckets: HashMap<(i64, i64), Vec<Row>> = HashMap::new();
    for (line, rec) in &rows {
        let x: f64 = parse_num(path, *line, &rec[0])?;
        let y: f64 = parse_num(path, *line, &rec[1])?;
        let q = parse_quat(path, *line, rec, 2)?;
        buckets
            .entry((cell(x), cell(y)))
            .or_default()
            .push((x, y, q));
    }
    let mut values = Vec::with_capacity(rule.len());
    for node in rule.nodes() {
        let p = node.point;
        let (cx, cy) = (cell(p.x), cell(p.y));
        let hit = (cx - 1..=cx + 1)
            .flat_map(|a| (cy - 1..=cy + 1).map(move |b| (a, b)))
            .filter_map(|key| buckets.get(&key))
            .flatten()
            .filter(|(x, y, _)| (x - p.x).hypot(y - p.y) <= NODE_MATCH_TOL)
            .map(|(_, _, q)| *q)
            .next();
        match hit {
            Some(q) => values.push(q),
            None => {
                return Err(Error::Format(format!(
                    "{}: no sample at quadrature node ({}, {}) of the {}x{} rule",
                    path.display(),
                    fmt_f64(p.x),
                    fmt_f64(p.y),
                    rule.nr(),
                    rule.ntheta()
                )))
            }
        }
    }
    Ok(Samples { values })
}

/// Binary greyscale PGM of a row-major `width × height` image.
///
/// In-disk pixels are min-max scaled to 0..=255; pixels marked `None`
/// (outside the disk) are mid grey.
pub fn write_pgm<W: Write>(
    mut w: W,
    width: usize,
    height: usize,
    pixels: &[Option<f64>],
) -> Result<()> {
    if pixels.len() != width * height {
        return Err(Error::Config(format!(
            "image has {} pixels, expected {width}x{height}",
            pixels.len()
        )));
    }
    let (lo, hi) = pixels
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let bytes: Vec<u8> = pixels
        .iter()
        .map(|p| match p {
            None => 128,
            Some(_) if !(span > 0.0) => 128,
            Some(v) => ((v - lo) / span * 255.0).round() as u8,
        })
        .collect();
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(&bytes)?;
    w.flush()?;
    Ok(())
}
