//! Files written for a report: the report itself, coefficient and weight
//! files, and CSV plot data.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{MEPReport, Outcome};
use crate::error::Result;
use crate::interval::hex_f64;
use crate::series::TaylorCoeffs;

/// Plot files, relative to the `plot` directory.
pub const PLOT_FILES: [&str; 4] = ["critical_points.csv", "manifolds.csv", "squares.csv", "orbits.csv"];
/// Samples per manifold arc and per orbit piece.
const MANIFOLD_SAMPLES: usize = 101;
const ORBIT_SAMPLES_PER_PIECE: usize = 20;

#[derive(Serialize)]
struct ParaFile<'a> {
    saddle: &'a str,
    #[serde(with = "hex_f64")]
    gamma: f64,
    order: usize,
    #[serde(with = "hex_f64::vec")]
    eta: &'a [f64],
    #[serde(with = "hex_f64")]
    radius: f64,
    coeffs: &'a TaylorCoeffs,
}

#[derive(Serialize)]
struct OrbitFile<'a> {
    leg: String,
    #[serde(with = "hex_f64::vec")]
    grid: &'a [f64],
    order: usize,
    #[serde(with = "hex_f64")]
    nu: f64,
    /// Index `(6 m + i) K + k`.
    #[serde(with = "hex_f64::vec")]
    coeffs: &'a [f64],
}

#[derive(Serialize)]
struct WeightsFile<'a> {
    leg: String,
    /// Index `6 m + i`.
    #[serde(with = "hex_f64::vec")]
    eta: &'a [f64],
    #[serde(with = "hex_f64")]
    rho: f64,
}

fn write_json<T: Serialize + ?Sized>(dir: &Path, name: &str, value: &T, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value)?)?;
    written.push(path);
    Ok(())
}

/// Write `report.json`, `coeff_para.json`, `coeff_orbit.json`,
/// `weights_orbit.json` and the plot data into `dir`.
pub fn write_outputs(report: &MEPReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    write_json(dir, "report.json", report, &mut written)?;
    let para: Vec<ParaFile> = report
        .manifolds
        .iter()
        .filter_map(|e| {
            e.outcome.proven().map(|m| ParaFile {
                saddle: &e.saddle,
                gamma: m.gamma,
                order: m.order,
                eta: &m.eta,
                radius: m.radius().unwrap_or(f64::NAN),
                coeffs: &m.coeffs,
            })
        })
        .collect();
    write_json(dir, "coeff_para.json", &para, &mut written)?;
    let proven_orbits = || report.orbits.iter().filter_map(|e| e.outcome.proven().map(|o| (e.label(), o)));
    let coeffs: Vec<OrbitFile> = proven_orbits()
        .map(|(leg, o)| OrbitFile {
            leg,
            grid: &o.grid,
            order: o.order,
            nu: o.nu,
            coeffs: &o.coeffs,
        })
        .collect();
    write_json(dir, "coeff_orbit.json", &coeffs, &mut written)?;
    let weights: Vec<WeightsFile> = proven_orbits()
        .map(|(leg, o)| WeightsFile {
            leg,
            eta: &o.bounds.eta,
            rho: o.rho,
        })
        .collect();
    write_json(dir, "weights_orbit.json", &weights, &mut written)?;
    written.extend(emit_plot_data(report, &dir.join("plot"))?);
    Ok(written)
}

fn csv_file(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

/// CSV samples of everything proven in `report`: critical points, manifold
/// arcs, trapping squares and orbits in the `(x, y)` plane. Values are
/// printed with shortest round-trip formatting.
pub fn emit_plot_data(report: &MEPReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let f = |v: f64| format!("{v:?}");
    let mut out = Vec::new();

    let rows = report
        .critical_points
        .iter()
        .filter_map(|e| {
            e.outcome.proven().map(|c| {
                vec![e.name.clone(), format!("{:?}", c.kind).to_lowercase(), f(c.center[0]), f(c.center[1]), f(c.radius)]
            })
        })
        .collect();
    out.push(csv_file(&dir.join(PLOT_FILES[0]), &["name", "kind", "x", "y", "radius"], rows)?);

    let mut rows = Vec::new();
    for e in &report.manifolds {
        if let Outcome::Proven(m) = &e.outcome {
            for s in 0..MANIFOLD_SAMPLES {
                let theta = -1.0 + 2.0 * s as f64 / (MANIFOLD_SAMPLES - 1) as f64;
                let p = m.eval_point(theta);
                rows.push(vec![e.saddle.clone(), f(theta), f(p[0]), f(p[1])]);
            }
        }
    }
    out.push(csv_file(&dir.join(PLOT_FILES[1]), &["saddle", "theta", "x", "y"], rows)?);

    let rows = report
        .trapping
        .iter()
        .filter_map(|e| {
            e.outcome.proven().map(|t| {
                vec![e.minimum.clone(), f(t.x.lo()), f(t.x.hi()), f(t.y.lo()), f(t.y.hi())]
            })
        })
        .collect();
    out.push(csv_file(&dir.join(PLOT_FILES[2]), &["minimum", "x_lo", "x_hi", "y_lo", "y_hi"], rows)?);

    let mut rows = Vec::new();
    for e in &report.orbits {
        if let Outcome::Proven(o) = &e.outcome {
            let n = o.pieces() * ORBIT_SAMPLES_PER_PIECE;
            for s in 0..=n {
                let t = o.tau() * s as f64 / n as f64;
                let x = o.eval(t);
                rows.push(vec![e.label(), f(t), f(x[0]), f(x[1])]);
            }
        }
    }
    out.push(csv_file(&dir.join(PLOT_FILES[3]), &["leg", "t", "x", "y"], rows)?);
    Ok(out)
}
