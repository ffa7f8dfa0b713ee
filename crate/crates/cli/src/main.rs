//! Command-line interface: generate instances, split them into CVRP
//! instances, solve end to end, benchmark strategies, and plot routes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sdvrp_core::bench::{
    emit_report_csv, emit_route_svg, generate, run_suite, strip_times, BenchRecord,
    BestKnownTable, Family, GeneratorSpec,
};
use sdvrp_core::cvrp::CvrpSolverConfig;
use sdvrp_core::model::{Instance, ValidationMode};
use sdvrp_core::sdvrp::{solve_sdvrp, Strategy};
use sdvrp_core::split::pasa_plan;
use sdvrp_core::tsplib;
use sdvrp_core::Error;

/// Exit codes: 0 ok, 2 usage or parse error, 3 infeasible input,
/// 4 internal invariant breach.
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "sdvrp",
    version,
    about = "Split-delivery vehicle routing: a priori demand splitting + CVRP local search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance file.
    Gen(GenArgs),
    /// Expand an instance with a splitting rule and write the CVRP file.
    Split(SplitArgs),
    /// Solve an instance end to end and write the solution file.
    Solve(SolveArgs),
    /// Run a strategy comparison suite and write a CSV report.
    Bench(BenchArgs),
    /// Render an instance and its solution as an SVG.
    Plot(PlotArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Family: concentric | random | nopattern.
    #[arg(long)]
    family: String,
    /// Customer count.
    #[arg(long)]
    n: usize,
    /// Ring count (concentric family).
    #[arg(long, default_value_t = 2)]
    rings: u32,
    /// Lower demand fraction (random family).
    #[arg(long, default_value_t = 0.1)]
    a: f64,
    /// Upper demand fraction (random family).
    #[arg(long, default_value_t = 0.9)]
    b: f64,
    /// Vehicle capacity.
    #[arg(long, default_value_t = 100)]
    capacity: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output instance file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SplitArgs {
    /// Input instance file.
    instance: PathBuf,
    /// Splitting rule: none | coin20 | coin25 | pasa[:L=<int>,p=<int>].
    #[arg(long, default_value = "pasa")]
    rule: String,
    /// Output CVRP instance file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// Input instance file.
    instance: PathBuf,
    /// Splitting rule: none | coin20 | coin25 | pasa[:L=<int>,p=<int>].
    #[arg(long, default_value = "pasa")]
    rule: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget for the search, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Output solution file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance files; falls back to $SDVRP_DATA_DIR, ./data,
    /// then a built-in generated suite.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Comma-separated strategy list.
    #[arg(long, default_value = "none,coin20,coin25,pasa")]
    rules: String,
    /// Comma-separated solver seeds; one run per (instance, rule, seed).
    #[arg(long, default_value = "0")]
    seeds: String,
    /// Best-known cost file; defaults to the built-in table.
    #[arg(long)]
    best_known: Option<PathBuf>,
    /// Wall-clock budget per solve, in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Leave the time column empty for byte-reproducible reports.
    #[arg(long)]
    omit_times: bool,
    /// Output CSV report.
    #[arg(long)]
    report: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Input instance file.
    instance: PathBuf,
    /// Input solution file.
    solution: PathBuf,
    /// Output SVG file.
    #[arg(long)]
    out: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidArgument(_) | Error::Parse { .. } => EXIT_USAGE,
            Error::Infeasible(_) => EXIT_INFEASIBLE,
            Error::Internal(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Split(args) => cmd_split(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Plot(args) => cmd_plot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read_file(path)?;
    tsplib::parse_instance(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let family = match args.family.as_str() {
        "concentric" => Family::Concentric { rings: args.rings },
        "random" => Family::RandomDemand {
            a: args.a,
            b: args.b,
        },
        "nopattern" => Family::NoPattern,
        other => {
            return Err(Failure::usage(format!(
                "unknown family `{other}` (expected concentric | random | nopattern)"
            )))
        }
    };
    let spec = GeneratorSpec {
        family,
        n: args.n,
        capacity: args.capacity,
        seed: args.seed,
    };
    let instance = generate(&spec)?;
    write_file(&args.out, &tsplib::write_instance(&instance))?;
    println!(
        "wrote {} (n={}, Q={}) to {}",
        instance.name(),
        instance.n(),
        instance.capacity(),
        args.out.display()
    );
    Ok(())
}

fn cmd_split(args: SplitArgs) -> Result<(), Failure> {
    let strategy = Strategy::parse(&args.rule)?;
    let instance = read_instance(&args.instance)?;
    let expanded = sdvrp_core::sdvrp::expand(&instance, &strategy)?;
    write_file(&args.out, &tsplib::write_instance(&expanded.cvrp))?;
    println!(
        "{}: {} customers expanded to {} ({})",
        instance.name(),
        instance.n(),
        expanded.cvrp.n(),
        strategy
    );
    if let Strategy::Pasa(config) = &strategy {
        let plan = pasa_plan(&instance, config)?;
        let labels = sdvrp_core::split::cluster_customers(&instance, config.levels)?;
        for (k, rule) in plan.rules.iter().enumerate() {
            let rule_index = (k + 1) as u32;
            let count = instance
                .customers()
                .iter()
                .filter(|c| labels.rule_index(c.id).unwrap() == rule_index)
                .count();
            println!(
                "  rule {rule_index} (ring {} of {}): {rule} -> {count} customers",
                config.levels + 1 - rule_index,
                config.levels
            );
        }
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<(), Failure> {
    let strategy = Strategy::parse(&args.rule)?;
    let instance = read_instance(&args.instance)?;
    let config = CvrpSolverConfig {
        seed: args.seed,
        time_limit_seconds: args.time_limit,
        ..Default::default()
    };
    let result = solve_sdvrp(&instance, &strategy, &config)?;
    write_file(&args.out, &tsplib::write_solution(&result.solution))?;
    println!(
        "cost={:.2} m={} time={:.2}s",
        result.cost, result.expanded_nodes, result.wall_time_seconds
    );
    Ok(())
}

fn parse_strategies(text: &str) -> Result<Vec<Strategy>, Failure> {
    let mut strategies = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        strategies.push(Strategy::parse(part)?);
    }
    if strategies.is_empty() {
        return Err(Failure::usage("no strategies given"));
    }
    Ok(strategies)
}

fn parse_seeds(text: &str) -> Result<Vec<u64>, Failure> {
    let mut seeds = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        seeds.push(
            part.parse()
                .map_err(|_| Failure::usage(format!("bad seed `{part}`")))?,
        );
    }
    if seeds.is_empty() {
        return Err(Failure::usage("no seeds given"));
    }
    Ok(seeds)
}

/// Instance files come from the first of: --data, $SDVRP_DATA_DIR, ./data.
/// Without any of those a small generated suite is used.
fn bench_instances(data: Option<PathBuf>) -> Result<Vec<Instance>, Failure> {
    let dir = data
        .or_else(|| std::env::var("SDVRP_DATA_DIR").ok().map(PathBuf::from))
        .or_else(|| {
            let p = PathBuf::from("data");
            p.is_dir().then_some(p)
        });

    if let Some(dir) = dir {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", dir.display())))?
            .flatten()
            .map(|e| e.path())
            .filter(|p| {
                p.extension()
                    .and_then(|x| x.to_str())
                    .map(|x| {
                        matches!(x.to_ascii_lowercase().as_str(), "vrp" | "txt" | "sd" | "dat")
                    })
                    .unwrap_or(false)
            })
            .collect();
        paths.sort();
        let mut instances = Vec::new();
        for path in paths {
            match tsplib::parse_instance(&read_file(&path)?) {
                Ok(instance) => instances.push(instance),
                Err(e) => log::warn!("skipping {}: {e}", path.display()),
            }
        }
        if instances.is_empty() {
            return Err(Failure::usage(format!(
                "no parsable instances in {}",
                dir.display()
            )));
        }
        return Ok(instances);
    }

    let specs = [
        GeneratorSpec {
            family: Family::Concentric { rings: 2 },
            n: 12,
            capacity: 100,
            seed: 1,
        },
        GeneratorSpec {
            family: Family::Concentric { rings: 3 },
            n: 18,
            capacity: 100,
            seed: 2,
        },
        GeneratorSpec {
            family: Family::RandomDemand { a: 0.1, b: 0.3 },
            n: 14,
            capacity: 160,
            seed: 3,
        },
        GeneratorSpec {
            family: Family::RandomDemand { a: 0.3, b: 0.7 },
            n: 12,
            capacity: 160,
            seed: 4,
        },
        GeneratorSpec {
            family: Family::RandomDemand { a: 0.7, b: 0.9 },
            n: 10,
            capacity: 160,
            seed: 5,
        },
        GeneratorSpec {
            family: Family::NoPattern,
            n: 12,
            capacity: 140,
            seed: 6,
        },
    ];
    Ok(specs.iter().map(|s| generate(s).unwrap()).collect())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let strategies = parse_strategies(&args.rules)?;
    let seeds = parse_seeds(&args.seeds)?;
    let instances = bench_instances(args.data)?;
    let best_known = match &args.best_known {
        Some(path) => BestKnownTable::parse(&read_file(path)?)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => BestKnownTable::builtin(),
    };
    let config = CvrpSolverConfig {
        time_limit_seconds: args.time_limit,
        ..Default::default()
    };

    let mut records = run_suite(
        &instances,
        &strategies,
        &config,
        &seeds,
        &best_known,
        args.jobs,
    );
    for r in records.iter().filter(|r| r.error.is_some()) {
        log::warn!(
            "{} / {} (seed {:?}): {}",
            r.instance,
            r.strategy,
            r.seed,
            r.error.as_deref().unwrap_or("")
        );
    }
    if args.omit_times {
        strip_times(&mut records);
    }
    write_file(&args.report, &emit_report_csv(&records))?;

    println!(
        "{:<18} {:>5} {:>5} {:>9} {:>10}",
        "strategy", "runs", "ok", "avg_gap%", "avg_time_s"
    );
    for strategy in &strategies {
        let name = strategy.to_string();
        let rows: Vec<&BenchRecord> = records
            .iter()
            .filter(|r| r.strategy == name && r.instance != "average")
            .collect();
        let ok = rows.iter().filter(|r| r.error.is_none()).count();
        let average = records
            .iter()
            .find(|r| r.instance == "average" && r.strategy == name);
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
        println!(
            "{name:<18} {:>5} {ok:>5} {:>9} {:>10}",
            rows.len(),
            fmt(average.and_then(|r| r.gap_pct)),
            fmt(average.and_then(|r| r.time_seconds)),
        );
    }
    println!("report written to {}", args.report.display());

    let succeeded = records
        .iter()
        .any(|r| r.instance != "average" && r.error.is_none());
    if !succeeded {
        return Err(Failure {
            code: 1,
            message: "every benchmark cell failed".into(),
        });
    }
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<(), Failure> {
    let instance = read_instance(&args.instance)?;
    let text = read_file(&args.solution)?;
    let solution = tsplib::parse_solution(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.solution.display())))?;

    // A solution that references customers the instance does not have is a
    // mismatched pair, not a syntax problem.
    let unknown =
        sdvrp_core::model::validate_solution(&instance, &solution, ValidationMode::Sdvrp)
            .into_iter()
            .find(|v| matches!(v, sdvrp_core::model::Violation::UnknownCustomer { .. }));
    if let Some(v) = unknown {
        return Err(Failure {
            code: EXIT_INFEASIBLE,
            message: format!("solution does not match instance: {v}"),
        });
    }

    let svg = emit_route_svg(&instance, &solution)?;
    write_file(&args.out, &svg)?;
    println!(
        "wrote {} ({} routes)",
        args.out.display(),
        solution.routes.len()
    );
    Ok(())
}
