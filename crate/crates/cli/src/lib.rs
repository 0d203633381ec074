//! The `macw` command-line tool.
//!
//! Exit status: 0 on success, 1 on a domain or I/O error, 2 on a usage error.
//! Flags take precedence over `MACW_*` environment variables, which take
//! precedence over defaults.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use macw_core::explore::summarize;
use macw_core::io::{instance_file_json, report_json, solution_json, write_reports_csv, InstanceFile};
use macw_core::macw::{karp, macw_bruteforce_capped, DEFAULT_BRUTEFORCE_CAP, DEFAULT_TABLE_CAP};
use macw_core::solve::{local_search, solve_exact_capped, DEFAULT_EXACT_CAP};
use macw_core::table::reproduce_table_capped;
use macw_core::{
    generate_instance, generate_offset, parse_graph, parse_instance_file, render, search_gap, solve_zero_offset,
    GapSearchConfig, LocalSearchParams, Solution, WeightGraph,
};

#[derive(Debug, Parser)]
#[command(name = "macw", version, about = "Min-max average cycle weight allocation solvers")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "MACW_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Find an allocation minimizing the MACW of the (offset) envy graph.
    Solve(SolveArgs),
    /// Maximum average cycle weight of a graph file.
    Macw(MacwArgs),
    /// Average weight of every cycle under every allocation.
    Table(TableArgs),
    /// Search random instances for offsets whose optimum is not a max-value matching.
    Search(SearchArgs),
    /// Write a random instance file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    Matching,
    Exact,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
}

#[derive(Debug, clap::Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, env = "MACW_METHOD", default_value = "matching")]
    method: SolveMethod,
    #[arg(long, env = "MACW_MAX_ITERS", default_value_t = LocalSearchParams::default().max_iters)]
    max_iters: usize,
    #[arg(long, env = "MACW_RESTARTS", default_value_t = LocalSearchParams::default().restarts)]
    restarts: usize,
    #[arg(long, env = "MACW_SEED", default_value_t = 0)]
    seed: u64,
    /// Largest n the exact solver accepts.
    #[arg(long, env = "MACW_EXACT_CAP", default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    #[arg(long, value_enum, env = "MACW_FORMAT", default_value = "text")]
    format: OutputFormat,
}

#[derive(Debug, clap::Args)]
struct MacwArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Also run the brute-force enumeration and check it agrees.
    #[arg(long)]
    bruteforce: bool,
    #[arg(long, env = "MACW_BRUTEFORCE_CAP", default_value_t = DEFAULT_BRUTEFORCE_CAP)]
    cap: usize,
}

#[derive(Debug, clap::Args)]
struct TableArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, env = "MACW_TABLE_FORMAT", default_value = "md")]
    format: TableFormat,
    #[arg(long, env = "MACW_TABLE_CAP", default_value_t = DEFAULT_TABLE_CAP)]
    cap: usize,
}

#[derive(Debug, clap::Args)]
struct SearchArgs {
    #[arg(long, env = "MACW_N", default_value_t = GapSearchConfig::default().n)]
    n: usize,
    #[arg(long, env = "MACW_COUNT", default_value_t = GapSearchConfig::default().count)]
    count: usize,
    #[arg(long, env = "MACW_SEED", default_value_t = 0)]
    seed: u64,
    /// Inclusive integer range `lo,hi` for valuations.
    #[arg(long, env = "MACW_VALUE_RANGE", default_value = "1,9", value_parser = parse_range, allow_hyphen_values = true)]
    value_range: (i64, i64),
    /// Inclusive integer range `lo,hi` for offset arcs.
    #[arg(long, env = "MACW_WEIGHT_RANGE", default_value = "-3,3", value_parser = parse_range, allow_hyphen_values = true)]
    weight_range: (i64, i64),
    /// Report file; `.json` writes JSON, anything else CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct GenArgs {
    #[arg(long, env = "MACW_N", default_value_t = 4)]
    n: usize,
    #[arg(long, env = "MACW_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "MACW_VALUE_RANGE", default_value = "1,9", value_parser = parse_range, allow_hyphen_values = true)]
    value_range: (i64, i64),
    /// Adds a random offset graph when given.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    weight_range: Option<(i64, i64)>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected lo,hi but got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_cli<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too and succeed.
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn execute(cli: Cli, out: &mut (dyn Write + Send)) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            bail!("--threads must be at least 1");
        }
        pool = pool.num_threads(threads);
    }
    let pool = pool.build().context("building thread pool")?;
    pool.install(|| match cli.command {
        Command::Solve(args) => solve(args, out),
        Command::Macw(args) => macw(args, out),
        Command::Table(args) => table(args, out),
        Command::Search(args) => search(args, out),
        Command::Gen(args) => gen(args, out),
    })
}

fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance_file(&text).with_context(|| format!("parsing {}", path.display()))
}

fn solve(args: SolveArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let file = read_instance(&args.input)?;
    let (solution, runs) = match args.method {
        SolveMethod::Matching => {
            if file.has_offset() {
                bail!("method matching requires an all-zero offset; use --method exact or local");
            }
            (solve_zero_offset(&file.instance)?, None)
        }
        SolveMethod::Exact => (solve_exact_capped(&file.instance, &file.offset, args.exact_cap)?, None),
        SolveMethod::Local => {
            let params = LocalSearchParams {
                max_iters: args.max_iters,
                restarts: args.restarts,
                seed: args.seed,
            };
            let outcome = local_search(&file.instance, &file.offset, params)?;
            (outcome.solution, Some(outcome.runs.len()))
        }
    };
    match args.format {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&solution_json(&solution))?)?,
        OutputFormat::Text => write_solution(&solution, runs, out)?,
    }
    Ok(())
}

fn write_solution(s: &Solution, runs: Option<usize>, out: &mut (dyn Write + Send)) -> Result<()> {
    writeln!(out, "allocation: {}", s.allocation)?;
    writeln!(out, "macw: {}", render(&s.macw))?;
    writeln!(out, "witness: {} (total {}, average {})", s.witness, render(s.witness.total_weight()), render(s.witness.average_weight()))?;
    writeln!(out, "total_value: {}", render(&s.total_value))?;
    writeln!(out, "method: {}", s.method)?;
    writeln!(out, "optimal: {}", s.optimal)?;
    if let Some(runs) = runs {
        writeln!(out, "runs: {runs}")?;
    }
    Ok(())
}

fn macw(args: MacwArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let text = fs::read_to_string(&args.graph).with_context(|| format!("reading {}", args.graph.display()))?;
    let g: WeightGraph = parse_graph(&text).with_context(|| format!("parsing {}", args.graph.display()))?;
    let outcome = karp(&g)?;
    writeln!(out, "macw: {}", render(&outcome.value))?;
    writeln!(out, "witness: {}", outcome.witness)?;
    if args.bruteforce {
        let (value, witness) = macw_bruteforce_capped(&g, args.cap)?;
        if value != outcome.value || witness != outcome.witness {
            bail!("brute force disagrees: {} on {}", render(&value), witness);
        }
        writeln!(out, "bruteforce: agrees")?;
    }
    Ok(())
}

fn table(args: TableArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let file = read_instance(&args.input)?;
    let offset = file.has_offset().then_some(&file.offset);
    let t = reproduce_table_capped(&file.instance, offset, args.cap)?;
    match args.format {
        TableFormat::Md => write!(out, "{}", t.to_markdown())?,
        TableFormat::Csv => t.write_csv(out)?,
    }
    Ok(())
}

fn search(args: SearchArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let config = GapSearchConfig {
        n: args.n,
        count: args.count,
        seed: args.seed,
        value_range: args.value_range,
        weight_range: args.weight_range,
    };
    let reports = search_gap(&config)?;
    let summary = summarize(&reports);
    writeln!(out, "pairs: {}", summary.count)?;
    writeln!(out, "positive_gaps: {}", summary.positive)?;
    writeln!(out, "max_gap: {}", render(&summary.max_gap))?;
    writeln!(out, "mean_gap: {}", render(&summary.mean_gap))?;
    if let Some(top) = reports.first().filter(|r| r.gap > macw_core::rational::int(0)) {
        writeln!(
            out,
            "top: pair {} seed {} gap {} (exact {} at {}, best matching {} at {})",
            top.pair.unwrap_or_default(),
            top.seed.unwrap_or_default(),
            render(&top.gap),
            render(&top.exact_macw),
            top.exact_allocation,
            render(&top.best_matching_macw),
            top.best_matching,
        )?;
    }
    if let Some(path) = args.out {
        let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        if path.extension().is_some_and(|e| e == "json") {
            let doc: Vec<_> = reports.iter().map(report_json).collect();
            serde_json::to_writer_pretty(file, &doc)?;
        } else {
            write_reports_csv(&reports, file)?;
        }
        writeln!(out, "wrote: {}", path.display())?;
    }
    Ok(())
}

fn gen(args: GenArgs, out: &mut (dyn Write + Send)) -> Result<()> {
    let instance = generate_instance(args.n, args.seed, args.value_range)?;
    let offset = match args.weight_range {
        Some(range) => generate_offset(args.n, args.seed, range)?,
        None => WeightGraph::zero(args.n),
    };
    let text = serde_json::to_string_pretty(&instance_file_json(&InstanceFile { instance, offset }))?;
    match args.out {
        Some(path) => fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}
