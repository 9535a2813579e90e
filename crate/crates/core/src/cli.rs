//! The `colorcensus` command line.
//!
//! Exit codes: 0 on success, 1 for usage and validation errors, 2 for file
//! and stream errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{run_bench_with, write_bench_csv, BenchConfig};
use crate::census::{census, Backend};
use crate::error::{Error, Result};
use crate::graph::{load_graph_files, ColoredGraph};
use crate::isoclass::{class_table_cached, ClassTable};
use crate::nullmodel::{cug_test_with, CugOptions};
use crate::oracle::brute_force_census;

/// Environment variable naming a directory for cached class tables.
pub const CACHE_DIR_VAR: &str = "COLORCENSUS_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(name = "colorcensus", version, about = "Colored triad census and null-model tests")]
struct Cli {
    /// Suppress progress reporting on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List canonical colored triad classes.
    Classes(ClassesArgs),
    /// Colored triad census of a graph.
    Census(CensusArgs),
    /// Conditional uniform graph test against the mixing-matrix null model.
    Cugtest(CugArgs),
    /// Time the census on random graphs.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Auto,
    Dense,
    Sparse,
}

impl BackendArg {
    fn backend(self) -> Backend {
        match self {
            BackendArg::Auto => Backend::auto(),
            BackendArg::Dense => Backend::dense(),
            BackendArg::Sparse => Backend::sparse(),
        }
    }
}

#[derive(Args, Debug)]
struct ClassesArgs {
    /// Number of colors.
    #[arg(long)]
    colors: usize,
    #[arg(long)]
    undirected: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: TextFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Edge list, one `src dst` per line.
    #[arg(long)]
    edges: PathBuf,
    /// Color list, one `node label` per line.
    #[arg(long)]
    colors: PathBuf,
    #[arg(long)]
    undirected: bool,
    #[arg(long, value_enum, default_value = "auto")]
    backend: BackendArg,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: DataFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Count by exhaustive triple enumeration instead.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct CugArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    replications: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "3,10")]
    colors: Vec<usize>,
    #[arg(long, default_value_t = 6.0)]
    mean_degree: f64,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    backend: BackendArg,
    #[arg(long)]
    undirected: bool,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the subcommand. Data goes to
/// `out` unless `--output` names a file; diagnostics go to `err`.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match run(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_io() {
                2
            } else {
                1
            }
        }
    }
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_VAR).map(PathBuf::from)
}

fn table_for(k: usize, directed: bool) -> Result<std::sync::Arc<ClassTable>> {
    class_table_cached(k, directed, cache_dir().as_deref())
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::Invalid("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    pool.install(f)
}

fn emit(
    output: Option<&Path>,
    out: &mut dyn Write,
    write: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            write(&mut w)
                .and_then(|_| w.flush().map_err(Error::from))
                .map_err(|e| match e {
                    Error::Stream(source) => Error::io(path, source),
                    other => other,
                })
        }
        None => write(out),
    }
}

fn load(args: &GraphArgs) -> Result<ColoredGraph> {
    load_graph_files(&args.edges, &args.colors, !args.undirected)
}

fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let quiet = cli.quiet;
    let mut progress = |msg: String| {
        if !quiet {
            let _ = writeln!(err, "{msg}");
        }
    };
    match cli.command {
        Command::Classes(args) => {
            if args.colors == 0 {
                return Err(Error::Invalid("--colors must be at least 1".into()));
            }
            let directed = !args.undirected;
            let table = table_for(args.colors, directed)?;
            let labels: Vec<String> = (1..=args.colors).map(|i| i.to_string()).collect();
            emit(args.output.as_deref(), out, |w| {
                match args.format {
                    TextFormat::Text => {
                        for ct in table.classes() {
                            writeln!(w, "{}", ct.canonical_name(&labels))?;
                        }
                        writeln!(w, "total {}", table.len())?;
                    }
                    TextFormat::Json => {
                        let classes: Vec<_> = table
                            .classes()
                            .iter()
                            .map(|ct| {
                                json!({
                                    "name": ct.canonical_name(&labels),
                                    "class": ct.class.name(),
                                    "triplet": ct.triplet.map(|c| c + 1),
                                    "dyad_states": ct.class.dyad_states().map(|s| s.name()),
                                })
                            })
                            .collect();
                        let doc = json!({
                            "k": args.colors,
                            "directed": directed,
                            "total": table.len(),
                            "classes": classes,
                        });
                        writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
                    }
                }
                Ok(())
            })
        }
        Command::Census(args) => {
            let g = load(&args.graph)?;
            table_for(g.color_count(), g.directed())?;
            let start = Instant::now();
            let backend = args.graph.backend.backend();
            let result = with_pool(args.graph.threads, || {
                if args.oracle {
                    brute_force_census(&g)
                } else {
                    census(&g, backend)
                }
            })?;
            let engine = if args.oracle {
                "oracle".to_string()
            } else {
                backend.resolve(g.node_count()).to_string()
            };
            progress(format!(
                "census: {} nodes, {} colors, {} classes ({engine}) in {:.3}s",
                g.node_count(),
                g.color_count(),
                result.len(),
                start.elapsed().as_secs_f64()
            ));
            emit(args.graph.output.as_deref(), out, |w| match args.graph.format {
                DataFormat::Csv => result.write_csv(w),
                DataFormat::Json => {
                    writeln!(w, "{}", serde_json::to_string_pretty(&result.to_json()).expect("json"))?;
                    Ok(())
                }
            })
        }
        Command::Cugtest(args) => {
            let g = load(&args.graph)?;
            table_for(g.color_count(), g.directed())?;
            let opts = CugOptions {
                replications: args.replications,
                seed: args.seed,
                backend: args.graph.backend.backend(),
            };
            let start = Instant::now();
            let result = with_pool(args.graph.threads, || cug_test_with(&g, &opts))?;
            progress(format!(
                "cugtest: {} replications, {} classes in {:.3}s\nmixing matrix:\n{}",
                args.replications,
                result.rows.len(),
                start.elapsed().as_secs_f64(),
                result.mixing
            ));
            emit(args.graph.output.as_deref(), out, |w| match args.graph.format {
                DataFormat::Csv => result.write_csv(w),
                DataFormat::Json => {
                    writeln!(w, "{}", serde_json::to_string_pretty(&result.to_json()).expect("json"))?;
                    Ok(())
                }
            })
        }
        Command::Bench(args) => {
            let cfg = BenchConfig {
                node_sizes: args.sizes,
                color_counts: args.colors,
                mean_degree: args.mean_degree,
                repeats: args.repeats,
                seed: args.seed,
                backend: args.backend.backend(),
                directed: !args.undirected,
            };
            cfg.validate()?;
            let rows = with_pool(args.threads, || {
                run_bench_with(&cfg, |row| {
                    if !quiet {
                        eprintln!("bench: n={} k={} {:.4}s", row.n, row.k, row.median_seconds);
                    }
                })
            })?;
            emit(args.output.as_deref(), out, |w| write_bench_csv(&cfg, &rows, w))
        }
    }
}
