//! CSV writers. Numbers use Rust's shortest round-trip formatting.

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::Path as FsPath;

use egma::action::{lambda_profile, node_max, path_potential_values};
use egma::solver::TraceRecord;
use egma::{Model, Path};

/// Writes `alpha,x0..x{d-1},U,lambda`, with `lambda` taken at the path's
/// own energy `max U`. The file is replaced atomically.
pub fn write_path_csv<M: Model + ?Sized>(file: &FsPath, model: &M, path: &Path) -> io::Result<()> {
    let u = path_potential_values(model, path).map_err(io::Error::other)?;
    let energy = node_max(&u).1;
    let lambda = lambda_profile(model, path, energy).map_err(io::Error::other)?.values;
    let tmp = file.with_extension("csv.tmp");
    {
        let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&tmp)?));
        let mut header = vec!["alpha".to_string()];
        header.extend((0..path.dim()).map(|k| format!("x{k}")));
        header.extend(["U".to_string(), "lambda".to_string()]);
        w.write_record(&header)?;
        let n = path.n_segments();
        for (j, x) in path.nodes().enumerate() {
            let alpha = j as f64 / n as f64;
            let mut row = vec![alpha.to_string()];
            row.extend(x.iter().map(f64::to_string));
            row.push(u[j].to_string());
            row.push(lambda[j].to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    fs::rename(tmp, file)
}

/// Appends `iter,E_n,residual` rows; the residual is empty for the initial
/// path.
pub struct EnergyWriter {
    inner: csv::Writer<BufWriter<File>>,
}

impl EnergyWriter {
    pub fn create(file: &FsPath) -> io::Result<EnergyWriter> {
        let mut inner = csv::Writer::from_writer(BufWriter::new(File::create(file)?));
        inner.write_record(["iter", "E_n", "residual"])?;
        Ok(EnergyWriter { inner })
    }

    pub fn push(&mut self, r: &TraceRecord) -> io::Result<()> {
        let res = r.residual.map(|v| v.to_string()).unwrap_or_default();
        self.inner.write_record([r.iter.to_string(), r.energy.to_string(), res])?;
        Ok(())
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Reads a path CSV back into `(alpha, nodes, U, lambda)` columns.
pub fn read_path_csv(file: &FsPath) -> io::Result<PathTable> {
    let mut r = csv::Reader::from_path(file)?;
    let d = r.headers()?.len() - 3;
    let mut t = PathTable { dim: d, ..Default::default() };
    for rec in r.records() {
        let rec = rec?;
        let v: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(io::Error::other))
            .collect::<io::Result<_>>()?;
        t.alpha.push(v[0]);
        t.nodes.extend_from_slice(&v[1..=d]);
        t.u.push(v[d + 1]);
        t.lambda.push(v[d + 2]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PathTable {
    pub dim: usize,
    pub alpha: Vec<f64>,
    pub nodes: Vec<f64>,
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl PathTable {
    pub fn path(&self) -> egma::Result<Path> {
        Path::from_flat(self.dim, self.nodes.clone())
    }
}

/// Writes any serializable rows with a header derived from field names.
pub fn write_rows<T: serde::Serialize>(file: &FsPath, rows: &[T]) -> io::Result<()> {
    let mut w = csv::Writer::from_path(file)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
}
