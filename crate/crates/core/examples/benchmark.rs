//! Census runtime on Erdős–Rényi graphs of mean degree 6.
//!
//! ```text
//! cargo run --release --example benchmark
//! ```

use colorcensus::bench::{run_bench_with, write_bench_csv, BenchConfig};

fn main() -> colorcensus::Result<()> {
    let cfg = BenchConfig {
        node_sizes: vec![100, 1000, 3000, 10000],
        color_counts: vec![1, 3, 10],
        ..BenchConfig::default()
    };
    let rows = run_bench_with(&cfg, |r| eprintln!("n={:<6} k={:<3} {:.4}s", r.n, r.k, r.median_seconds))?;
    write_bench_csv(&cfg, &rows, std::io::stdout().lock())
}
