use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isorefine::{
    are_isomorphic, find_automorphisms, generate_sequence, load_component, random_digraph,
    read_graph, records_to_jsonl, run_bench_with, save_graph, summarize, two_level_family,
    write_graph, BenchConfig, BenchPlan, Component, Divisor, Family, FamilySpec, Graph,
    MatchOptions, MatchStats,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "isorefine",
    version,
    about = "Graph isomorphism by partition refinement with backjumping"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two graph files are isomorphic. Exits 0 if they are, 1 if not.
    Test(TestArgs),
    /// Print the vertex classes found by the automorphism search.
    Orbits {
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate graph files.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Time a family over increasing sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct TestArgs {
    g: PathBuf,
    h: PathBuf,
    /// Print the isomorphism as "u -> v" lines.
    #[arg(long)]
    mapping: bool,
    /// Print search statistics as JSON.
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    no_backjump: bool,
    #[arg(long)]
    no_orbit_pruning: bool,
    /// Print both sequences of partitions to stderr.
    #[arg(long)]
    trace: bool,
    /// Print one JSON document with the decision, mapping and statistics.
    #[arg(long)]
    json: bool,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct PairOutput {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Make the second graph differ in one component.
    #[arg(long)]
    negative: bool,
    /// Write PREFIX-g.graph and PREFIX-h.graph; without it the first graph goes to stdout.
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Complete join of Shrikhande and rook 4x4 graphs.
    SrgJoin {
        #[arg(long)]
        copies: usize,
        #[command(flatten)]
        output: PairOutput,
    },
    /// Union of alpha and beta tripartite components.
    Tripartite {
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        beta: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        undirected: bool,
        #[command(flatten)]
        output: PairOutput,
    },
    /// Components linked in m blocks of n through marked vertex sets.
    TwoLevel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Two component files with `s orbit1` and `s orbit3` lines.
        #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
        components: Option<Vec<PathBuf>>,
        #[command(flatten)]
        output: PairOutput,
    },
    /// Random directed graph, each arc present with probability p.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFamily {
    SrgJoin,
    Tripartite,
    TripartiteUndirected,
    TwoLevel,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: BenchFamily,
    /// Components per instance (blocks of n for two-level), smallest first.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Tripartite part size.
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Number of two-level blocks.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds per decision.
    #[arg(long, default_value_t = 10.0)]
    timeout: f64,
    #[arg(long, conflicts_with = "negative_only")]
    positive_only: bool,
    #[arg(long)]
    negative_only: bool,
    /// Skip the paired runs without backjumping.
    #[arg(long)]
    no_compare: bool,
    #[arg(long)]
    no_orbit_pruning: bool,
    /// Divide by N - 1 instead of N in the standard deviation.
    #[arg(long)]
    sample_sd: bool,
    /// Decide instances concurrently. Times are then not comparable.
    #[arg(long)]
    parallel: bool,
    /// Write records.jsonl and summary.json here instead of records to stdout and the summary to stderr.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        source: isorefine::Error,
    },
    #[error(transparent)]
    Core(#[from] isorefine::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

fn load(path: &Path) -> CliResult<Graph> {
    read_graph(path).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

fn one_based(mapping: &[usize]) -> Vec<(usize, usize)> {
    mapping
        .iter()
        .enumerate()
        .map(|(u, &v)| (u + 1, v + 1))
        .collect()
}

#[derive(Serialize)]
struct TestReport {
    isomorphic: bool,
    mapping: Option<Vec<(usize, usize)>>,
    stats: MatchStats,
}

fn test(args: TestArgs) -> CliResult<ExitCode> {
    let g = load(&args.g)?;
    let h = load(&args.h)?;
    let mut options = MatchOptions::default()
        .with_backjump(!args.no_backjump)
        .with_orbit_pruning(!args.no_orbit_pruning);
    if let Some(secs) = args.timeout {
        let limit = Duration::try_from_secs_f64(secs)
            .map_err(|e| CliError::Usage(format!("--timeout: {e}")))?;
        options = options.with_timeout(limit);
    }
    if args.trace {
        let mut err = io::stderr().lock();
        for (name, graph) in [("g", &g), ("h", &h)] {
            let e = find_automorphisms(graph, generate_sequence(graph))?;
            writeln!(err, "sequence of {name}")?;
            write!(err, "{}", e.seq)?;
        }
    }
    let outcome = are_isomorphic(&g, &h, options)?;
    let mut out = io::stdout().lock();
    if args.json {
        let report = TestReport {
            isomorphic: outcome.is_isomorphic(),
            mapping: outcome.mapping.as_ref().map(|m| one_based(m)),
            stats: outcome.stats,
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        )?;
    } else {
        writeln!(
            out,
            "{}",
            if outcome.is_isomorphic() {
                "isomorphic"
            } else {
                "not isomorphic"
            }
        )?;
        if args.mapping {
            for (u, v) in outcome
                .mapping
                .as_ref()
                .map(|m| one_based(m))
                .unwrap_or_default()
            {
                writeln!(out, "{u} -> {v}")?;
            }
        }
        if args.stats {
            writeln!(
                out,
                "{}",
                serde_json::to_string(&outcome.stats).expect("stats serialize")
            )?;
        }
    }
    Ok(if outcome.is_isomorphic() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn orbits(path: &Path, json: bool) -> CliResult<()> {
    let g = load(path)?;
    let e = find_automorphisms(&g, generate_sequence(&g))?;
    let classes: Vec<Vec<usize>> = e
        .orbits
        .classes()
        .into_iter()
        .map(|c| c.into_iter().map(|v| v + 1).collect())
        .collect();
    let mut out = io::stdout().lock();
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string(&classes).expect("classes serialize")
        )?;
    } else {
        for class in classes {
            let line: Vec<String> = class.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
    }
    Ok(())
}

fn emit_pair(g: &Graph, h: &Graph, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(prefix) => {
            for (suffix, graph) in [("g", g), ("h", h)] {
                let mut name = prefix.as_os_str().to_owned();
                name.push(format!("-{suffix}.graph"));
                write_graph(PathBuf::from(name), graph)?;
            }
        }
        None => io::stdout().lock().write_all(&save_graph(g))?,
    }
    Ok(())
}

fn load_components(paths: &[PathBuf]) -> CliResult<[Component; 2]> {
    let mut loaded = Vec::new();
    for path in paths {
        let bytes = fs::read(path)?;
        loaded.push(load_component(&bytes).map_err(|source| CliError::File {
            path: path.clone(),
            source,
        })?);
    }
    loaded
        .try_into()
        .map_err(|_| CliError::Usage("--components takes exactly two files".into()))
}

fn generate(command: GenCommand) -> CliResult<()> {
    let (family, output) = match command {
        GenCommand::Random { n, p, seed, out } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage(format!("--p must lie in [0, 1], got {p}")));
            }
            let g = random_digraph(n, p, seed);
            match out {
                Some(path) => write_graph(path, &g)?,
                None => io::stdout().lock().write_all(&save_graph(&g))?,
            }
            return Ok(());
        }
        GenCommand::TwoLevel {
            n,
            m,
            components: Some(paths),
            output,
        } => {
            let base = load_components(&paths)?;
            let g = two_level_family([&base[0], &base[1]], n, m, false, output.seed)?;
            let h = two_level_family([&base[0], &base[1]], n, m, output.negative, output.seed)?;
            return emit_pair(&g, &h, output.out.as_deref());
        }
        GenCommand::SrgJoin { copies, output } => (Family::SrgJoin { copies }, output),
        GenCommand::Tripartite {
            alpha,
            beta,
            k,
            undirected,
            output,
        } => (
            Family::Tripartite {
                alpha,
                beta,
                k,
                directed: !undirected,
            },
            output,
        ),
        GenCommand::TwoLevel { n, m, output, .. } => (Family::TwoLevel { n, m }, output),
    };
    let pair = FamilySpec::new(family, output.negative, output.seed).pair()?;
    emit_pair(&pair.g, &pair.h, output.out.as_deref())
}

fn bench_family(args: &BenchArgs, size: usize) -> Family {
    match args.family {
        BenchFamily::SrgJoin => Family::SrgJoin { copies: size },
        BenchFamily::Tripartite | BenchFamily::TripartiteUndirected => Family::Tripartite {
            alpha: size.div_ceil(2),
            beta: size / 2,
            k: args.k,
            directed: matches!(args.family, BenchFamily::Tripartite),
        },
        BenchFamily::TwoLevel => Family::TwoLevel { n: size, m: args.m },
    }
}

fn bench(args: BenchArgs) -> CliResult<()> {
    let mut sizes = args.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let timeout = Duration::try_from_secs_f64(args.timeout)
        .map_err(|e| CliError::Usage(format!("--timeout: {e}")))?;
    let plan = BenchPlan {
        configs: vec![BenchConfig {
            sizes: sizes.iter().map(|&s| bench_family(&args, s)).collect(),
        }],
        instances: args.instances,
        seed: args.seed,
        timeout,
        positive: !args.negative_only,
        negative: !args.positive_only,
        compare_backjump: !args.no_compare,
        orbit_pruning: !args.no_orbit_pruning,
        parallel: args.parallel,
    };
    let divisor = if args.sample_sd {
        Divisor::Sample
    } else {
        Divisor::Population
    };
    let records = match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let mut file = io::BufWriter::new(fs::File::create(dir.join("records.jsonl"))?);
            let records = run_bench_with(&plan, &mut |r| {
                file.write_all(records_to_jsonl(std::slice::from_ref(r)).as_bytes())?;
                Ok(())
            })?;
            file.flush()?;
            records
        }
        None => {
            let mut out = io::stdout().lock();
            run_bench_with(&plan, &mut |r| {
                out.write_all(records_to_jsonl(std::slice::from_ref(r)).as_bytes())?;
                Ok(())
            })?
        }
    };
    let summary =
        serde_json::to_string_pretty(&summarize(&records, divisor)).expect("summary serializes");
    match &args.out {
        Some(dir) => fs::write(dir.join("summary.json"), summary + "\n")?,
        None => writeln!(io::stderr().lock(), "{summary}")?,
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Test(args) => return test(args),
        Command::Orbits { graph, json } => orbits(&graph, json)?,
        Command::Gen(command) => generate(command)?,
        Command::Bench(args) => bench(args)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("isorefine: {e}");
            ExitCode::from(2)
        }
    }
}
