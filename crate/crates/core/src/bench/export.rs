use super::{AggregateStats, BenchError, Instance, RunRecord};
use crate::search::TraceRecord;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const STATS_CSV_HEADER: [&str; 6] = ["instance", "E_l", "best", "avg", "success_rate", "R.I."];
pub const RUNS_CSV_HEADER: [&str; 6] = ["instance", "seed", "best_energy", "iterations", "wall_ms", "error"];
pub const TRACE_CSV_HEADER: [&str; 4] = ["iteration", "elapsed_ms", "current_energy", "best_energy"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(format!("unknown format {s:?}, expected csv or json")),
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn fixed2(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.2}")).unwrap_or_default()
}

/// Stats table; missing values are empty cells, rationals have two decimals.
pub fn write_stats_csv<W: Write>(out: W, stats: &[AggregateStats]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STATS_CSV_HEADER)?;
    for s in stats {
        w.write_record([
            s.instance.clone(),
            opt(s.lower_bound),
            opt(s.best),
            fixed2(s.avg),
            fixed2(s.success_rate),
            fixed2(s.relative_improvement),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_stats_json<W: Write>(out: W, stats: &[AggregateStats]) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(out, stats)?;
    Ok(())
}

pub fn write_runs_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUNS_CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.seed.to_string(),
            opt(r.best_energy),
            r.iterations.to_string(),
            r.wall_ms.to_string(),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_csv<W: Write>(out: W, trace: &[TraceRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_CSV_HEADER)?;
    for t in trace {
        w.write_record([
            t.iteration.to_string(),
            t.elapsed_ms.to_string(),
            t.current_energy.to_string(),
            t.best_energy.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

/// Writes `stats.<ext>`, `runs.<ext>` and one `traces/<instance>_seed<seed>.csv`
/// per successful run into `dir`, returning the paths written.
pub fn export_results(
    dir: &Path,
    records: &[RunRecord],
    stats: &[AggregateStats],
    format: OutputFormat,
) -> Result<Vec<PathBuf>, BenchError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let create = |name: &str| -> Result<(PathBuf, BufWriter<File>), BenchError> {
        let p = dir.join(name);
        Ok((p.clone(), BufWriter::new(File::create(p)?)))
    };
    match format {
        OutputFormat::Csv => {
            let (p, f) = create("stats.csv")?;
            write_stats_csv(f, stats)?;
            written.push(p);
            let (p, f) = create("runs.csv")?;
            write_runs_csv(f, records)?;
            written.push(p);
        }
        OutputFormat::Json => {
            let (p, f) = create("stats.json")?;
            write_stats_json(f, stats)?;
            written.push(p);
            let (p, mut f) = create("runs.json")?;
            serde_json::to_writer_pretty(&mut f, records)?;
            f.flush()?;
            written.push(p);
        }
    }
    let traces = dir.join("traces");
    for r in records.iter().filter(|r| r.error.is_none()) {
        fs::create_dir_all(&traces)?;
        let p = traces.join(format!("{}_seed{}.csv", file_stem(&r.instance), r.seed));
        write_trace_csv(BufWriter::new(File::create(&p)?), &r.trace)?;
        written.push(p);
    }
    Ok(written)
}

/// Plain-text summary table, one row per instance.
pub fn format_summary(instances: &[Instance], stats: &[AggregateStats], reference: Option<&str>) -> String {
    let ri_head = reference.map(|r| format!("R.I.% vs {r}")).unwrap_or_else(|| "R.I.%".into());
    let mut rows = vec![[
        "instance".to_string(),
        "n".into(),
        "E_l".into(),
        "best".into(),
        "avg".into(),
        "success%".into(),
        ri_head,
    ]];
    for s in stats {
        let n = instances.iter().find(|i| i.name == s.instance).map(|i| i.sequence.len());
        let dash = |v: String| if v.is_empty() { "-".to_string() } else { v };
        rows.push([
            s.instance.clone(),
            dash(opt(n)),
            dash(opt(s.lower_bound)),
            dash(opt(s.best)),
            dash(fixed2(s.avg)),
            dash(fixed2(s.success_rate)),
            dash(fixed2(s.relative_improvement)),
        ]);
    }
    let widths: Vec<usize> = (0..7).map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (v, &w))| if c == 0 { format!("{v:<w$}") } else { format!("{v:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats() -> Vec<AggregateStats> {
        vec![
            AggregateStats {
                instance: "H1".into(),
                lower_bound: Some(-69),
                best: Some(-66),
                avg: Some(-64.4),
                success_rate: Some(0.0),
                relative_improvement: None,
            },
            AggregateStats {
                instance: "x".into(),
                lower_bound: None,
                best: None,
                avg: None,
                success_rate: None,
                relative_improvement: Some(1.0 / 3.0),
            },
        ]
    }

    #[test]
    fn stats_csv_layout() {
        let mut buf = Vec::new();
        write_stats_csv(&mut buf, &stats()).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "instance,E_l,best,avg,success_rate,R.I.\nH1,-69,-66,-64.40,0.00,\nx,,,,,0.33\n"
        );
    }

    #[test]
    fn empty_inputs_give_header_only_files() {
        let dir = tempfile::tempdir().unwrap();
        let paths = export_results(dir.path(), &[], &[], OutputFormat::Csv).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(fs::read_to_string(dir.path().join("stats.csv")).unwrap(), "instance,E_l,best,avg,success_rate,R.I.\n");
        assert_eq!(
            fs::read_to_string(dir.path().join("runs.csv")).unwrap(),
            "instance,seed,best_energy,iterations,wall_ms,error\n"
        );
        let paths = export_results(dir.path(), &[], &[], OutputFormat::Json).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(fs::read_to_string(dir.path().join("stats.json")).unwrap(), "[]");
    }

    #[test]
    fn json_round_trip() {
        let s = stats();
        let mut buf = Vec::new();
        write_stats_json(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"E_l\"") && text.contains("\"R.I.\""));
        let back: Vec<AggregateStats> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn trace_csv() {
        let t = [
            TraceRecord { iteration: 0, elapsed_ms: 0, current_energy: 0, best_energy: 0 },
            TraceRecord { iteration: 5, elapsed_ms: 1, current_energy: -1, best_energy: -1 },
        ];
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &t).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "iteration,elapsed_ms,current_energy,best_energy\n0,0,0,0\n5,1,-1,-1\n"
        );
    }

    #[test]
    fn summary_alignment() {
        let text = format_summary(&[], &stats(), Some("LS-Mem"));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("instance") && lines[0].ends_with("R.I.% vs LS-Mem"));
        assert!(lines[2].ends_with("0.33"));
    }
}
