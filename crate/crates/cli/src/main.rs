//! Command-line driver: generate zoo scenarios, simulate schedules, run
//! searches, and produce comparison reports.
//!
//! Every command prints one machine-parsable `key=value` summary line on
//! stdout and writes its artifacts under the output directory. Exit codes:
//! 0 success, 2 validation failure, 3 enumeration refusal, 1 internal error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use streamsched::baselines::{
    baseline_latencies, baseline_schedule, baseline_timeline, BaselineKind,
};
use streamsched::ir::{validate_schedule, Schedule};
use streamsched::report::{
    render_gantt, render_search_curve, render_speedup_table, render_utilization_overlay,
    GanttFormat, SearchCurve, TableRow,
};
use streamsched::search::{
    coordinate_descent_search, exhaustive_search, random_search, search_baseline_gap,
    SearchConfig, SearchResult, SimCost,
};
use streamsched::sim::{simulate, Timeline};
use streamsched::workload::{
    load_scenario, save_scenario, zoo_scenario, IssueOrder, Scenario, ZOO_COMBINATIONS,
};

const OUT_DIR_ENV: &str = "STREAMSCHED_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "streamsched",
    about = "Stage-based schedule search for multi-tenant inference on a simulated device",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the synthetic model-zoo scenario files.
    Zoo(ZooArgs),
    /// Simulate one schedule (or a baseline) and export its timeline.
    Simulate(SimulateArgs),
    /// Search for a schedule and report speedups against the baselines.
    Search(SearchArgs),
    /// Run baselines and both search algorithms across seeds.
    Compare(CompareArgs),
}

#[derive(Args)]
struct ZooArgs {
    /// Zoo generation seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IssueOrderArg {
    Dfs,
    Bfs,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineArg {
    Sequential,
    StreamParallel,
}

impl From<BaselineArg> for BaselineKind {
    fn from(value: BaselineArg) -> Self {
        match value {
            BaselineArg::Sequential => BaselineKind::Sequential,
            BaselineArg::StreamParallel => BaselineKind::StreamParallel,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    scenario: PathBuf,
    /// Schedule document to simulate (omit with --baseline).
    #[arg(long, value_name = "FILE", conflicts_with = "baseline")]
    schedule: Option<PathBuf>,
    /// Simulate a reference strategy instead of a schedule file.
    #[arg(long, value_enum)]
    baseline: Option<BaselineArg>,
    /// Override the scenario's host-side issue order.
    #[arg(long, value_enum)]
    issue_order: Option<IssueOrderArg>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Random,
    Coordinate,
    Exhaustive,
}

#[derive(Args)]
struct SearchArgs {
    scenario: PathBuf,
    #[arg(long, value_enum, default_value = "coordinate")]
    algo: AlgoArg,
    /// Search rounds (samples for random, sweeps for coordinate).
    #[arg(long, default_value_t = 100)]
    rounds: usize,
    /// Maximum barrier splits per stream.
    #[arg(long, default_value_t = 6)]
    pointers: usize,
    /// Candidate rows per stream per sweep (coordinate descent).
    #[arg(long, default_value_t = 10)]
    candidates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on total cost evaluations.
    #[arg(long)]
    budget: Option<u64>,
    /// Enumeration cap for --algo exhaustive.
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    scenario: PathBuf,
    /// Comma-separated search seeds.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 100)]
    rounds: usize,
    #[arg(long, default_value_t = 6)]
    pointers: usize,
    #[arg(long, default_value_t = 10)]
    candidates: usize,
    /// Round counts for the search-overhead sweep.
    #[arg(long, value_delimiter = ',', default_value = "100,300,500,1000")]
    overhead_rounds: Vec<usize>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Zoo(args) => cmd_zoo(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Search(args) => cmd_search(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<streamsched::Error>() {
        Some(streamsched::Error::SpaceTooLarge { .. }) => 3,
        Some(
            streamsched::Error::Validation(_)
            | streamsched::Error::InvalidSchedule(_)
            | streamsched::Error::Parse { .. }
            | streamsched::Error::DigestMismatch { .. },
        ) => 2,
        _ => 1,
    }
}

fn out_dir(flag: Option<PathBuf>) -> anyhow::Result<PathBuf> {
    let dir = flag
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("creating output dir {}", dir.display()))?;
    Ok(dir)
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_timeline_artifacts(dir: &Path, timeline: &Timeline) -> anyhow::Result<()> {
    write(&dir.join("timeline.json"), &timeline.to_json())?;
    write(&dir.join("trace.json"), &timeline.to_chrome_trace())?;
    write(&dir.join("util.csv"), &timeline.utilization_csv())?;
    write(&dir.join("gantt.txt"), &render_gantt(timeline, GanttFormat::Text))?;
    write(&dir.join("gantt.svg"), &render_gantt(timeline, GanttFormat::Svg))?;
    Ok(())
}

fn cmd_zoo(args: ZooArgs) -> anyhow::Result<()> {
    let dir = out_dir(args.out)?;
    let mut files = Vec::new();
    for (_, names) in ZOO_COMBINATIONS {
        let scenario = zoo_scenario(names, args.seed)?;
        let file = format!("zoo_{}.json", names.join("_").to_lowercase());
        save_scenario(&scenario, dir.join(&file))?;
        files.push(file);
    }
    println!(
        "command=zoo seed={} out={} scenarios={}",
        args.seed,
        dir.display(),
        files.join(",")
    );
    Ok(())
}

fn load_with_issue_order(
    path: &Path,
    issue_order: Option<IssueOrderArg>,
) -> anyhow::Result<Scenario> {
    let mut scenario = load_scenario(path)?;
    if let Some(order) = issue_order {
        scenario.gpu.issue_order = match order {
            IssueOrderArg::Dfs => IssueOrder::DepthFirst,
            IssueOrderArg::Bfs => IssueOrder::BreadthFirst,
        };
    }
    Ok(scenario)
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let dir = out_dir(args.out)?;
    let scenario = load_with_issue_order(&args.scenario, args.issue_order)?;
    let (label, timeline) = match (&args.schedule, args.baseline) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let schedule: Schedule =
                serde_json::from_str(&text).map_err(|source| streamsched::Error::Parse {
                    path: path.display().to_string(),
                    source,
                })?;
            let report = validate_schedule(&scenario, &schedule);
            if !report.is_empty() {
                return Err(streamsched::Error::InvalidSchedule(report).into());
            }
            ("schedule".to_string(), simulate(&scenario, &schedule)?)
        }
        (None, Some(kind)) => {
            let kind: BaselineKind = kind.into();
            let timeline = if args.issue_order.is_some() {
                // Explicit override wins over the baseline's stock DFS order.
                simulate(&scenario, &baseline_schedule(&scenario, kind))?
            } else {
                baseline_timeline(&scenario, kind)?
            };
            (kind.to_string(), timeline)
        }
        _ => anyhow::bail!("exactly one of --schedule or --baseline is required"),
    };
    write_timeline_artifacts(&dir, &timeline)?;
    println!(
        "command=simulate scenario={} schedule={label} total_latency_us={:.6} stages={} out={}",
        scenario.name,
        timeline.total_latency_us,
        timeline.stage_boundaries.len(),
        dir.display()
    );
    Ok(())
}

fn cmd_search(args: SearchArgs) -> anyhow::Result<()> {
    let dir = out_dir(args.out)?;
    let scenario = load_scenario(&args.scenario)?;
    let cfg = SearchConfig {
        pointers_per_row: args.pointers,
        rounds: args.rounds,
        candidates_per_row: args.candidates,
        seed: args.seed,
        evals_budget: args.budget,
        repeats: 1,
    };
    let result = match args.algo {
        AlgoArg::Random => random_search(&scenario, &cfg, &SimCost)?,
        AlgoArg::Coordinate => coordinate_descent_search(&scenario, &cfg, &SimCost)?,
        AlgoArg::Exhaustive => {
            exhaustive_search(&scenario, args.pointers, args.cap, &SimCost)?
        }
    };
    let gap = search_baseline_gap(&result, &result.baselines)?;

    write(&dir.join("search.json"), &result.to_json())?;
    let mut best_schedule_text =
        serde_json::to_string_pretty(&result.best_schedule).expect("schedule serializes");
    best_schedule_text.push('\n');
    write(&dir.join("best_schedule.json"), &best_schedule_text)?;
    let curve = SearchCurve {
        label: result.algorithm.clone(),
        latencies_us: result.records.iter().map(|r| r.latency_us).collect(),
    };
    let baseline_lines = vec![
        ("sequential".to_string(), result.baselines.sequential_us),
        (
            "stream-parallel".to_string(),
            result.baselines.stream_parallel_us,
        ),
    ];
    write(
        &dir.join("search_curve.svg"),
        &render_search_curve(&[curve], &baseline_lines),
    )?;
    let timeline = simulate(&scenario, &result.best_schedule)?;
    write_timeline_artifacts(&dir, &timeline)?;

    println!(
        "command=search algo={} scenario={} best_latency_us={:.6} evals={} truncated={} speedup_vs_sequential={:.4} speedup_vs_stream_parallel={:.4} out={}",
        result.algorithm,
        scenario.name,
        result.best_latency_us,
        result.evals_used,
        result.truncated,
        gap.rows[0].speedup,
        gap.rows[1].speedup,
        dir.display()
    );
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> anyhow::Result<()> {
    anyhow::ensure!(!args.seeds.is_empty(), "--seeds must not be empty");
    let dir = out_dir(args.out)?;
    let scenario = load_scenario(&args.scenario)?;
    let baselines = baseline_latencies(&scenario)?;

    let mut random_results = Vec::new();
    let mut coordinate_results = Vec::new();
    for &seed in &args.seeds {
        let cfg = SearchConfig {
            pointers_per_row: args.pointers,
            rounds: args.rounds,
            candidates_per_row: args.candidates,
            seed,
            evals_budget: None,
            repeats: 1,
        };
        // Give random search the same evaluation count as one coordinate run.
        let random_cfg = SearchConfig {
            rounds: args.rounds * scenario.stream_count() * args.candidates,
            ..cfg.clone()
        };
        random_results.push(random_search(&scenario, &random_cfg, &SimCost)?);
        coordinate_results.push(coordinate_descent_search(&scenario, &cfg, &SimCost)?);
    }

    let mean = |results: &[SearchResult]| -> f64 {
        results.iter().map(|r| r.best_latency_us).sum::<f64>() / results.len() as f64
    };
    let min = |results: &[SearchResult]| -> f64 {
        results
            .iter()
            .map(|r| r.best_latency_us)
            .fold(f64::INFINITY, f64::min)
    };

    let table = render_speedup_table(&[TableRow {
        group: format!("{}x", scenario.stream_count()),
        scenario: scenario.name.clone(),
        sequential_us: baselines.sequential_us,
        stream_parallel_us: baselines.stream_parallel_us,
        random_us: Some(mean(&random_results)),
        coordinate_us: Some(mean(&coordinate_results)),
    }]);
    write(&dir.join("table.md"), &table)?;

    let curves: Vec<SearchCurve> = [
        ("random", &random_results[0]),
        ("coordinate", &coordinate_results[0]),
    ]
    .into_iter()
    .map(|(label, result)| SearchCurve {
        label: label.to_string(),
        latencies_us: result.records.iter().map(|r| r.latency_us).collect(),
    })
    .collect();
    let baseline_lines = vec![
        ("sequential".to_string(), baselines.sequential_us),
        ("stream-parallel".to_string(), baselines.stream_parallel_us),
    ];
    write(
        &dir.join("search_curve.svg"),
        &render_search_curve(&curves, &baseline_lines),
    )?;

    // Utilization overlay: both baselines plus the best searched schedule.
    let best_coordinate = coordinate_results
        .iter()
        .min_by(|a, b| a.best_latency_us.total_cmp(&b.best_latency_us))
        .expect("at least one seed");
    let seq_tl = baseline_timeline(&scenario, BaselineKind::Sequential)?;
    let par_tl = baseline_timeline(&scenario, BaselineKind::StreamParallel)?;
    let best_tl = simulate(&scenario, &best_coordinate.best_schedule)?;
    write(
        &dir.join("util_overlay.svg"),
        &render_utilization_overlay(&[
            ("sequential".to_string(), &seq_tl),
            ("stream-parallel".to_string(), &par_tl),
            ("searched".to_string(), &best_tl),
        ]),
    )?;

    // Search-overhead sweep (wall time vs. rounds) for coordinate descent.
    let mut overhead = String::from("| Rounds | Evaluations | Wall time (s) |\n|---|---|---|\n");
    let mut overhead_seconds = Vec::new();
    for &rounds in &args.overhead_rounds {
        let cfg = SearchConfig {
            pointers_per_row: args.pointers,
            rounds,
            candidates_per_row: args.candidates,
            seed: args.seeds[0],
            evals_budget: None,
            repeats: 1,
        };
        let result = coordinate_descent_search(&scenario, &cfg, &SimCost)?;
        overhead.push_str(&format!(
            "| {rounds} | {} | {:.3} |\n",
            result.evals_used, result.wall_time_s
        ));
        overhead_seconds.push(result.wall_time_s);
    }
    write(&dir.join("overhead.md"), &overhead)?;

    println!(
        "command=compare scenario={} seeds={} sequential_us={:.6} stream_parallel_us={:.6} random_mean_us={:.6} random_min_us={:.6} coordinate_mean_us={:.6} coordinate_min_us={:.6} coordinate_speedup={:.4} overhead_max_s={:.3} out={}",
        scenario.name,
        args.seeds.len(),
        baselines.sequential_us,
        baselines.stream_parallel_us,
        mean(&random_results),
        min(&random_results),
        mean(&coordinate_results),
        min(&coordinate_results),
        baselines.sequential_us / min(&coordinate_results),
        overhead_seconds.iter().cloned().fold(0.0, f64::max),
        dir.display()
    );
    Ok(())
}
