//! Benchmark harness: instance files, seeded batches of independent runs,
//! and the summary statistics (best, average, success rate, relative
//! improvement over a reference method).

mod export;
mod instance;

pub use export::{
    export_results, format_summary, write_runs_csv, write_stats_csv, write_stats_json, write_trace_csv, OutputFormat,
    RUNS_CSV_HEADER, STATS_CSV_HEADER, TRACE_CSV_HEADER,
};
pub use instance::{load_instances, parse_instances, read_fasta, BoundAnnotation, FastaRecord, Instance};

use crate::lattice::LatticePoint;
use crate::search::{lws_run, SearchParams, TraceRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate instance name {name:?}")]
    DuplicateName { name: String, line: usize },
    #[error("no lower bound is known for this instance")]
    UndefinedBound,
    #[error("lower bound equals the reference energy")]
    DegenerateDenominator,
    #[error("runs per instance must be at least 1")]
    NoRuns,
    #[error("could not build thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Outcome of one seeded run. A run that failed to start carries `error`
/// and no energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub seed: u64,
    pub best_energy: Option<i64>,
    pub wall_ms: u64,
    pub iterations: u64,
    pub trace: Vec<TraceRecord>,
    pub best_positions: Vec<LatticePoint>,
    pub error: Option<String>,
}

/// Runs `runs` independent searches per instance with seeds
/// `seed_base + run`, at most `parallelism` at a time. Records come back in
/// instance order, then run order.
pub fn run_batch(
    instances: &[Instance],
    params: &SearchParams,
    runs: usize,
    parallelism: usize,
    seed_base: u64,
) -> Result<Vec<RunRecord>, BenchError> {
    if runs == 0 {
        return Err(BenchError::NoRuns);
    }
    let jobs: Vec<(&Instance, u64)> = instances
        .iter()
        .flat_map(|inst| (0..runs as u64).map(move |r| (inst, seed_base.wrapping_add(r))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| BenchError::ThreadPool(e.to_string()))?;
    Ok(pool.install(|| jobs.par_iter().map(|&(inst, seed)| run_one(inst, params, seed)).collect()))
}

fn run_one(inst: &Instance, params: &SearchParams, seed: u64) -> RunRecord {
    let p = SearchParams { rng_seed: seed, ..params.clone() };
    let started = std::time::Instant::now();
    match lws_run(&inst.sequence, &p) {
        Ok(r) => RunRecord {
            instance: inst.name.clone(),
            seed,
            best_energy: Some(r.best_energy),
            wall_ms: r.elapsed.as_millis() as u64,
            iterations: r.iterations,
            trace: r.trace,
            best_positions: r.best_conformation.positions().to_vec(),
            error: None,
        },
        Err(e) => RunRecord {
            instance: inst.name.clone(),
            seed,
            best_energy: None,
            wall_ms: started.elapsed().as_millis() as u64,
            iterations: 0,
            trace: Vec::new(),
            best_positions: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// `(e_o - e_r) / (e_l - e_r) * 100`: how much of the gap between the
/// reference energy `e_r` and the bound `e_l` the energy `e_o` closes.
pub fn relative_improvement(e_o: f64, e_r: f64, e_l: Option<f64>) -> Result<f64, BenchError> {
    let e_l = e_l.ok_or(BenchError::UndefinedBound)?;
    if e_l == e_r {
        return Err(BenchError::DegenerateDenominator);
    }
    Ok((e_o - e_r) / (e_l - e_r) * 100.0)
}

/// Percentage of energies at or below `target`; `None` for an empty slice.
pub fn success_rate(best_energies: &[i64], target: i64) -> Option<f64> {
    if best_energies.is_empty() {
        return None;
    }
    let hits = best_energies.iter().filter(|&&e| e <= target).count();
    Some(100.0 * hits as f64 / best_energies.len() as f64)
}

/// One row of the summary table. Fields without data (no successful runs,
/// no bound, no reference) are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub instance: String,
    #[serde(rename = "E_l")]
    pub lower_bound: Option<i64>,
    pub best: Option<i64>,
    pub avg: Option<f64>,
    pub success_rate: Option<f64>,
    #[serde(rename = "R.I.")]
    pub relative_improvement: Option<f64>,
}

/// Per-instance statistics in instance order. The success target is the
/// instance's lower bound; R.I. compares the average against the instance's
/// `reference` energy when both it and the bound are known.
pub fn aggregate(instances: &[Instance], records: &[RunRecord], reference: Option<&str>) -> Vec<AggregateStats> {
    instances
        .iter()
        .map(|inst| {
            let bests: Vec<i64> =
                records.iter().filter(|r| r.instance == inst.name).filter_map(|r| r.best_energy).collect();
            let best = bests.iter().copied().min();
            let avg = (!bests.is_empty()).then(|| bests.iter().sum::<i64>() as f64 / bests.len() as f64);
            let success = inst.lower_bound.and_then(|t| success_rate(&bests, t));
            let ri = match (avg, reference.and_then(|r| inst.references.get(r))) {
                (Some(a), Some(&e_r)) => relative_improvement(a, e_r, inst.lower_bound.map(|l| l as f64)).ok(),
                _ => None,
            };
            AggregateStats {
                instance: inst.name.clone(),
                lower_bound: inst.lower_bound,
                best,
                avg,
                success_rate: success,
                relative_improvement: ri,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::parse_sequence;

    fn params(iters: u64) -> SearchParams {
        SearchParams { max_iterations: Some(iters), ..Default::default() }
    }

    #[test]
    fn table_values() {
        let a = relative_improvement(-346.0, -326.0, Some(-384.0)).unwrap();
        assert!((a - 34.48).abs() < 0.01, "{a}");
        let b = relative_improvement(-354.0, -334.0, Some(-381.0)).unwrap();
        assert!((b - 42.55).abs() < 0.01, "{b}");
        assert_eq!(relative_improvement(-10.0, -10.0, Some(-20.0)).unwrap(), 0.0);
        assert!(matches!(relative_improvement(-1.0, -2.0, None), Err(BenchError::UndefinedBound)));
        assert!(matches!(relative_improvement(-1.0, -2.0, Some(-2.0)), Err(BenchError::DegenerateDenominator)));
    }

    #[test]
    fn success_rates() {
        let mut e = vec![-69; 16];
        e.extend(vec![-68; 34]);
        assert_eq!(success_rate(&e, -69), Some(32.0));
        assert_eq!(success_rate(&e, -70), Some(0.0));
        assert_eq!(success_rate(&e, 0), Some(100.0));
        assert_eq!(success_rate(&[], 0), None);
    }

    #[test]
    fn batch_shape_and_determinism() {
        let insts = parse_instances(">a [El=-2]\nHPHPH\n>b\nHHPPHH\n", None).unwrap();
        let r1 = run_batch(&insts, &params(300), 3, 1, 10).unwrap();
        assert_eq!(r1.len(), 6);
        let keys: Vec<(&str, u64)> = r1.iter().map(|r| (r.instance.as_str(), r.seed)).collect();
        assert_eq!(keys, [("a", 10), ("a", 11), ("a", 12), ("b", 10), ("b", 11), ("b", 12)]);
        let r8 = run_batch(&insts, &params(300), 3, 8, 10).unwrap();
        for (x, y) in r1.iter().zip(&r8) {
            assert_eq!((x.best_energy, x.iterations, &x.best_positions), (y.best_energy, y.iterations, &y.best_positions));
        }
        assert!(matches!(run_batch(&insts, &params(1), 0, 1, 0), Err(BenchError::NoRuns)));
    }

    #[test]
    fn failed_runs_become_records() {
        let insts = vec![Instance::new("x", parse_sequence("HPH").unwrap())];
        let bad = SearchParams { tenure_min: 0, ..params(10) };
        let r = run_batch(&insts, &bad, 2, 2, 0).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|r| r.best_energy.is_none() && r.error.is_some()));
        let s = aggregate(&insts, &r, None);
        assert_eq!((s[0].best, s[0].avg), (None, None));
    }

    #[test]
    fn aggregate_statistics() {
        let mut inst = Instance::new("R1", parse_sequence("HH").unwrap());
        inst.lower_bound = Some(-384);
        inst.references.insert("LS-Mem".into(), -326.0);
        let rec = |e: i64| RunRecord {
            instance: "R1".into(),
            seed: 0,
            best_energy: Some(e),
            wall_ms: 0,
            iterations: 0,
            trace: vec![],
            best_positions: vec![],
            error: None,
        };
        let records = vec![rec(-338), rec(-352), rec(-384)];
        let s = &aggregate(std::slice::from_ref(&inst), &records, Some("LS-Mem"))[0];
        assert_eq!(s.best, Some(-384));
        assert_eq!(s.avg, Some(-358.0));
        assert!((s.success_rate.unwrap() - 100.0 / 3.0).abs() < 1e-12);
        assert!((s.relative_improvement.unwrap() - 32.0 / 58.0 * 100.0).abs() < 1e-9);
        let none = &aggregate(std::slice::from_ref(&inst), &records, Some("other"))[0];
        assert_eq!(none.relative_improvement, None);
    }
}
