use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ExperimentReport;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    trial: usize,
    seed: u64,
    dim: usize,
    game_hash: &'a str,
    success: bool,
    outcome: &'a str,
    iterations: usize,
    achieved_eps: Option<f64>,
    wall_ms: Option<f64>,
}

/// Writes `report.json`, `report.csv` and `report.svg` into `dir` as requested.
pub fn emit_report(report: &ExperimentReport, formats: &[ReportFormat], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for f in formats {
        let path = match f {
            ReportFormat::Json => {
                let p = dir.join("report.json");
                std::fs::write(&p, serde_json::to_string_pretty(report)?)?;
                p
            }
            ReportFormat::Csv => {
                let p = dir.join("report.csv");
                let mut w = csv::Writer::from_path(&p)?;
                if report.records.is_empty() {
                    w.write_record([
                        "trial",
                        "seed",
                        "dim",
                        "game_hash",
                        "success",
                        "outcome",
                        "iterations",
                        "achieved_eps",
                        "wall_ms",
                    ])?;
                }
                for r in &report.records {
                    w.serialize(CsvRow {
                        trial: r.trial,
                        seed: r.seed,
                        dim: r.dim,
                        game_hash: &r.game_hash,
                        success: r.success,
                        outcome: &r.outcome,
                        iterations: r.iterations,
                        achieved_eps: r.achieved_eps,
                        wall_ms: r.wall_ms,
                    })?;
                }
                w.flush()?;
                p
            }
            ReportFormat::Svg => {
                let p = dir.join("report.svg");
                std::fs::write(&p, render_svg(report))?;
                p
            }
        };
        written.push(path);
    }
    Ok(written)
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

/// Relative entropy traces when the records carry them, otherwise the
/// success rate per game size.
pub fn render_svg(report: &ExperimentReport) -> String {
    let traced: Vec<&Vec<(usize, f64)>> = report.records.iter().map(|r| &r.trace).filter(|t| !t.is_empty()).take(5).collect();
    if traced.is_empty() {
        let mut by_dim: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for r in &report.records {
            let e = by_dim.entry(r.dim).or_default();
            e.0 += r.success as usize;
            e.1 += 1;
        }
        let pts: Vec<(f64, f64)> = by_dim.iter().map(|(d, (s, n))| (*d as f64, *s as f64 / *n as f64)).collect();
        plot(report.config.experiment.name(), "game size", "success rate", &[pts], Some((0.0, 1.0)))
    } else {
        let series: Vec<Vec<(f64, f64)>> = traced
            .iter()
            .map(|t| t.iter().map(|(k, v)| (*k as f64, *v)).collect())
            .collect();
        plot(report.config.experiment.name(), "iteration", "relative entropy", &series, None)
    }
}

fn plot(title: &str, xlabel: &str, ylabel: &str, series: &[Vec<(f64, f64)>], ybounds: Option<(f64, f64)>) -> String {
    let all = series.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if let Some((a, b)) = ybounds {
        y0 = a;
        y1 = b;
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{title}</text>"#, W / 2.0);
    let _ = writeln!(
        s,
        r#"<line x1="{PAD}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{b}" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{xlabel}</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {})">{ylabel}</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (v, x, anchor) in [(x0, sx(x0), "start"), (x1, sx(x1), "end")] {
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{}" text-anchor="{anchor}" font-size="10">{v:.3}</text>"#, H - PAD + 14.0);
    }
    for (v, y) in [(y0, sy(y0)), (y1, sy(y1))] {
        let _ = writeln!(s, r#"<text x="{}" y="{y:.1}" text-anchor="end" font-size="10">{v:.3}</text>"#, PAD - 4.0);
    }
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
    for (i, pts) in series.iter().enumerate() {
        let c = colors[i % colors.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        if pts.len() > 1 {
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{c}" points="{}"/>"#, path.join(" "));
        }
        for &(x, y) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{c}"/>"#, sx(x), sy(y));
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::super::{run_experiment, ExperimentConfig, ExperimentKind};
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("deploylab-report-{name}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn empty_report_files_are_valid() {
        let rep = ExperimentReport::from_records(ExperimentConfig::new(ExperimentKind::StagHuntSuite), Vec::new());
        let dir = tmp("empty");
        emit_report(&rep, &[ReportFormat::Json, ReportFormat::Csv, ReportFormat::Svg], &dir).unwrap();
        let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
        assert_eq!(csv.lines().count(), 1);
        let back: ExperimentReport = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
        assert_eq!(back, rep);
        assert!(std::fs::read_to_string(dir.join("report.svg")).unwrap().ends_with("</svg>\n"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn csv_rows_and_json_roundtrip() {
        let mut c = ExperimentConfig::new(ExperimentKind::StagHuntSuite);
        c.trials = 100;
        c.timing = true;
        let rep = run_experiment(&c).unwrap();
        let dir = tmp("full");
        emit_report(&rep, &[ReportFormat::Json, ReportFormat::Csv, ReportFormat::Svg], &dir).unwrap();
        let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
        assert_eq!(csv.lines().count(), 101);
        let back: ExperimentReport = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
        assert_eq!(back, rep);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
