//! `--emit-csv`: one row per grid point with `x_0..x_{n-1}, f, dist,
//! condition`. The condition column is empty where the certificate defines
//! no value (argmin points, and every point of an error-bound run).

use std::path::Path;

use wsharp_core::certify::{grid_table, CertificateReport, ExhausterSource, ProblemInstance};

use crate::error::Result;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_table(
    path: &Path,
    p: &ProblemInstance,
    report: &CertificateReport,
    source: Option<&ExhausterSource>,
) -> Result<()> {
    let rows = grid_table(p, report, source)?;
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (0..p.dim()).map(|i| format!("x{i}")).collect();
    header.extend(["f", "dist", "condition"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut rec: Vec<String> = r.point.iter().map(|&v| num(v)).collect();
        rec.push(num(r.value));
        rec.push(num(r.dist));
        rec.push(r.condition.map_or_else(String::new, num));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| crate::error::InputError::Io { path: path.to_path_buf(), source: e })?;
    Ok(())
}
