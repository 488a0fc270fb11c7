//! CSV output of simulation records.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimators::Estimator;
use crate::mc::{MseRecord, Target, GENERATOR};

pub const HEADER: [&str; 10] = ["estimator", "n", "alpha", "target", "mse", "mc_se", "reps", "seed", "grid", "failures"];

/// Comment line appended after the records.
pub fn trailer() -> String {
    format!("# generator={GENERATOR}; {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

/// 17 significant digits; parses back to the same `f64`.
fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::domain(format!("csv: {e}"))
}

pub fn write_csv<W: Write>(records: &[MseRecord], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.estimator.name().to_string(),
            r.n.to_string(),
            float(r.alpha),
            r.target.name().to_string(),
            float(r.mse),
            float(r.mc_se),
            r.reps.to_string(),
            r.seed.to_string(),
            r.grid.clone(),
            r.failures.to_string(),
        ])?;
    }
    let mut out = w.into_inner().map_err(|e| e.into_error())?;
    writeln!(out, "{}", trailer())?;
    out.flush()
}

/// Write to a temporary file in the target directory, then rename it into
/// place, so a failed run leaves no partial file behind.
pub fn write_csv_file(path: &Path, records: &[MseRecord]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_csv(records, io::BufWriter::new(tmp.as_file_mut()))?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<MseRecord>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = reader.headers().map_err(csv_error)?;
    if header.iter().ne(HEADER) {
        return Err(Error::domain(format!("unexpected header: {header:?}")));
    }
    let mut out = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(csv_error)?;
        let bad = |field: &str| Error::domain(format!("record {}: bad {field}", line + 1));
        let get = |i: usize| row.get(i).ok_or_else(|| bad(HEADER[i]));
        let num = |i: usize| get(i)?.parse::<f64>().map_err(|_| bad(HEADER[i]));
        let int = |i: usize| get(i)?.parse::<usize>().map_err(|_| bad(HEADER[i]));
        out.push(MseRecord {
            estimator: get(0)?.parse::<Estimator>()?,
            n: int(1)?,
            alpha: num(2)?,
            target: get(3)?.parse::<Target>()?,
            mse: num(4)?,
            mc_se: num(5)?,
            reps: int(6)?,
            seed: get(7)?.parse::<u64>().map_err(|_| bad("seed"))?,
            grid: get(8)?.to_string(),
            failures: int(9)?,
        });
    }
    Ok(out)
}

pub fn read_csv_file(path: &Path) -> Result<Vec<MseRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::domain(format!("{}: {e}", path.display())))?;
    read_csv(file)
}
