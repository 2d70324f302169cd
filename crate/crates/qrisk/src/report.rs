//! Report files: per-measure profile CSVs, `fits.json`, `report.json` and
//! optional SVG plots.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::run::RunReport;
use crate::svg;

#[derive(Serialize)]
struct FitEntry {
    p0: f64,
    p1: f64,
    chi2: f64,
    n_points: usize,
    n_cycles: usize,
}

fn to_json<T: Serialize>(what: &'static str, value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Serialize {
            what,
            message: e.to_string(),
        })
}

/// File name to contents, in a fixed order.
pub fn render(report: &RunReport) -> Result<BTreeMap<String, String>> {
    let mut files = BTreeMap::new();
    let mut fits = BTreeMap::new();
    for (measure, profile) in &report.profiles {
        let mut csv = String::from("bin_index,mean_risk,e_rel,n_cycles_contributing\n");
        for p in &profile.points {
            csv.push_str(&format!("{},{},{},{}\n", p.bin_index, p.mean_risk, p.e_rel, p.n_cycles));
        }
        files.insert(format!("profile_{measure}.csv"), csv);
        let f = &profile.fit;
        fits.insert(
            measure.to_string(),
            FitEntry {
                p0: f.p0,
                p1: f.p1,
                chi2: f.chi2,
                n_points: f.n_points,
                n_cycles: profile.n_cycles,
            },
        );
        if report.config.plot {
            files.insert(format!("profile_{measure}.svg"), svg::render(profile));
        }
    }
    files.insert("fits.json".into(), to_json("fits", &fits)?);
    let summary = json!({
        "config": report.config,
        "start_date": report.resolved.start_date,
        "end_date": report.resolved.end_date,
        "cycles": report.cycles,
        "ks": report.ks,
    });
    files.insert("report.json".into(), to_json("report", &summary)?);
    Ok(files)
}

/// Writes every report file into `out_dir`, creating it if needed. On
/// failure nothing written by this call is left behind.
pub fn emit_report(report: &RunReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let files = render(report)?;
    write_all(out_dir, &files)
}

pub(crate) fn write_all(out_dir: &Path, files: &BTreeMap<String, String>) -> Result<Vec<PathBuf>> {
    let created_dir = !out_dir.exists();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    for (name, body) in files {
        let path = out_dir.join(name);
        if let Err(e) = fs::write(&path, body) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            if created_dir {
                let _ = fs::remove_dir(out_dir);
            }
            return Err(Error::io(path, e));
        }
        written.push(path);
    }
    Ok(written)
}
