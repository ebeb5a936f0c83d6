mod args;

use args::{BenchArgs, Cli, Command, ConvertArgs, Conversion, EnumerateArgs, SolveArgs};
use clap::Parser;
use hpfcc::bench::{self, Instance};
use hpfcc::hp::{convert_aa_to_hp, HydrophobicityTable};
use hpfcc::oracle::enumerate_optimal;
use hpfcc::{lws_run, parse_sequence};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

/// Exit status 2 for bad input or configuration, 1 for failures while running.
enum Failure {
    Usage(String),
    Runtime(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_table(path: Option<&Path>) -> Result<HydrophobicityTable, Failure> {
    match path {
        Some(p) => HydrophobicityTable::parse(&read(p)?).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => Ok(HydrophobicityTable::default()),
    }
}

fn conversion_table(c: &Conversion) -> Result<Option<HydrophobicityTable>, Failure> {
    if c.table.is_some() && !c.convert {
        return Err(usage("--table requires --convert"));
    }
    c.convert.then(|| load_table(c.table.as_deref())).transpose()
}

fn load(path: &Path, table: Option<&HydrophobicityTable>) -> Result<Vec<Instance>, Failure> {
    bench::parse_instances(&read(path)?, table).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn solve(a: SolveArgs, verbose: u8) -> Outcome {
    let table = conversion_table(&a.conversion)?;
    let instance = match (&a.input.seq, &a.input.instances) {
        (Some(s), _) => {
            let seq = match &table {
                Some(t) => convert_aa_to_hp(s, t),
                None => parse_sequence(s),
            }
            .map_err(usage)?;
            Instance::new("seq", seq)
        }
        (None, Some(path)) => {
            let all = load(path, table.as_ref())?;
            match &a.name {
                Some(n) => all.into_iter().find(|i| &i.name == n).ok_or_else(|| usage(format!("no record named {n:?}")))?,
                None => all.into_iter().next().ok_or_else(|| usage("instance file has no records"))?,
            }
        }
        (None, None) => return Err(usage("one of --seq or --instances is required")),
    };
    let params = a.params.to_params(a.seed);
    params.validate().map_err(usage)?;
    if verbose > 0 {
        eprintln!("solving {} ({} monomers) with {params:?}", instance.name, instance.sequence.len());
    }
    let result = lws_run(&instance.sequence, &params).map_err(runtime)?;
    println!("best energy: {}", result.best_energy);
    if verbose > 0 {
        eprintln!("{} iterations in {:.3}s", result.iterations, result.elapsed.as_secs_f64());
    }
    let text = result.best_conformation.to_text(&instance.sequence);
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(runtime)?;
            fs::write(dir.join("conformation.txt"), text).map_err(runtime)?;
            let f = fs::File::create(dir.join("trace.csv")).map_err(runtime)?;
            bench::write_trace_csv(std::io::BufWriter::new(f), &result.trace).map_err(runtime)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run_bench(a: BenchArgs, verbose: u8) -> Outcome {
    let table = conversion_table(&a.conversion)?;
    let instances = load(&a.instances, table.as_ref())?;
    let params = a.params.to_params(a.seed_base);
    params.validate().map_err(usage)?;
    if let Some(r) = &a.reference {
        if !instances.iter().any(|i| i.references.contains_key(r)) {
            eprintln!("warning: no instance carries reference {r:?}; R.I. left empty");
        }
    }
    let parallelism = a
        .parallelism
        .map(|p| p as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if verbose > 0 {
        eprintln!("{} instances x {} runs on {parallelism} threads", instances.len(), a.runs);
    }
    let records = bench::run_batch(&instances, &params, a.runs as usize, parallelism, a.seed_base).map_err(runtime)?;
    let stats = bench::aggregate(&instances, &records, a.reference.as_deref());
    let written = bench::export_results(&a.out, &records, &stats, a.format.into()).map_err(runtime)?;
    print!("{}", bench::format_summary(&instances, &stats, a.reference.as_deref()));
    if verbose > 0 {
        for p in &written {
            eprintln!("wrote {}", p.display());
        }
    }
    let failed: Vec<_> = records.iter().filter(|r| r.error.is_some()).collect();
    for r in &failed {
        eprintln!("run {} seed {} failed: {}", r.instance, r.seed, r.error.as_deref().unwrap_or(""));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(runtime(format!("{} of {} runs failed", failed.len(), records.len())))
    }
}

fn enumerate(a: EnumerateArgs) -> Outcome {
    let seq = parse_sequence(&a.seq).map_err(usage)?;
    let r = enumerate_optimal(&seq, !a.no_symmetry).map_err(usage)?;
    println!("optimal energy: {}", r.optimal_energy);
    println!("optimal walks: {}", r.optimizer_count);
    println!("walks examined: {}", r.enumerated);
    Ok(())
}

fn convert(a: ConvertArgs) -> Outcome {
    let table = load_table(a.table.as_deref())?;
    let records = bench::read_fasta(&read(&a.input)?).map_err(usage)?;
    let mut out = String::new();
    for rec in records {
        let hp = convert_aa_to_hp(&rec.body, &table)
            .map_err(|e| usage(format!("line {}: record {:?}: {e}", rec.body_line, rec.header)))?;
        out.push_str(&format!(">{}\n{hp}\n", rec.header));
    }
    match &a.output {
        Some(p) => fs::write(p, out).map_err(runtime),
        None => std::io::stdout().write_all(out.as_bytes()).map_err(runtime),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve(a, cli.verbose),
        Command::Bench(a) => run_bench(a, cli.verbose),
        Command::Enumerate(a) => enumerate(a),
        Command::Convert(a) => convert(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
