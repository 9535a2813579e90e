//! Census runtime on Erdős–Rényi graphs of constant mean degree.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::census::{census, csv_err, Backend, BackendKind};
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::isoclass::class_table;
use crate::nullmodel::erdos_renyi;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub node_sizes: Vec<usize>,
    pub color_counts: Vec<usize>,
    pub mean_degree: f64,
    pub repeats: usize,
    pub seed: u64,
    pub backend: Backend,
    pub directed: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            node_sizes: vec![10, 100, 1000],
            color_counts: vec![3, 10],
            mean_degree: 6.0,
            repeats: 3,
            seed: 0,
            backend: Backend::default(),
            directed: true,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::Invalid(m));
        if self.node_sizes.is_empty() || self.color_counts.is_empty() {
            return invalid("need at least one node size and one color count".into());
        }
        if let Some(n) = self.node_sizes.iter().find(|&&n| n < 3) {
            return invalid(format!("node size {n} is below 3"));
        }
        if self.color_counts.contains(&0) {
            return invalid("color counts must be at least 1".into());
        }
        let smallest = *self.node_sizes.iter().min().unwrap();
        if !(self.mean_degree >= 0.0 && self.mean_degree < (smallest - 1) as f64) {
            return invalid(format!(
                "mean degree {} must be below {} for n = {smallest}",
                self.mean_degree,
                smallest - 1
            ));
        }
        if self.repeats == 0 {
            return invalid("repeats must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub backend: BackendKind,
    pub median_seconds: f64,
    pub repeats: usize,
}

/// Graph with uniformly random colors `c00`, `c01`, ... and tie probability
/// `mean_degree / (n - 1)`.
pub fn random_colored_graph<R: Rng>(
    n: usize,
    k: usize,
    mean_degree: f64,
    directed: bool,
    rng: &mut R,
) -> Result<ColoredGraph> {
    let p = if n > 1 { mean_degree / (n - 1) as f64 } else { 0.0 };
    let edges = erdos_renyi(n, p, directed, rng);
    let labels: Vec<String> = (0..k).map(|c| format!("c{c:02}")).collect();
    let colors = (0..n).map(|_| rng.random_range(0..k)).collect();
    let ids = (0..n).map(|i| i.to_string()).collect();
    ColoredGraph::from_indexed(directed, ids, labels, colors, edges)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    run_bench_with(cfg, |_| {})
}

/// Runs every `(n, k)` pair, calling `on_row` as each finishes. Only the
/// census call is timed.
pub fn run_bench_with(cfg: &BenchConfig, mut on_row: impl FnMut(&BenchRow)) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut stream = 0u64;
    for &k in &cfg.color_counts {
        for &n in &cfg.node_sizes {
            let mut times = Vec::with_capacity(cfg.repeats);
            for _ in 0..cfg.repeats {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(stream);
                stream += 1;
                let g = random_colored_graph(n, k, cfg.mean_degree, cfg.directed, &mut rng)?;
                class_table(g.color_count(), g.directed());
                let start = Instant::now();
                let result = census(&g, cfg.backend)?;
                times.push(start.elapsed().as_secs_f64());
                debug_assert_eq!(result.node_count(), n);
            }
            let row = BenchRow {
                n,
                k,
                backend: cfg.backend.resolve(n),
                median_seconds: median(times),
                repeats: cfg.repeats,
            };
            on_row(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

/// CSV `n,k,backend,median_seconds,repeats` preceded by a `#` line
/// recording how graphs were generated.
pub fn write_bench_csv<W: Write>(cfg: &BenchConfig, rows: &[BenchRow], mut w: W) -> Result<()> {
    writeln!(
        w,
        "# erdos-renyi {}, mean degree {}, colors uniform at random, seed {}",
        if cfg.directed { "directed" } else { "undirected" },
        cfg.mean_degree,
        cfg.seed
    )?;
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["n", "k", "backend", "median_seconds", "repeats"])
        .map_err(csv_err)?;
    for r in rows {
        wr.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.backend.to_string(),
            format!("{:.6}", r.median_seconds),
            r.repeats.to_string(),
        ])
        .map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}
