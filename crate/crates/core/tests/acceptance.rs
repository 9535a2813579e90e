//! Release gate. Runs each acceptance criterion at its stated tolerance and
//! prints one PASS/FAIL line per criterion; exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use colorcensus::bench::random_colored_graph;
use colorcensus::nullmodel::simulate_null;
use colorcensus::{
    brute_force_census, census, census_with_threads, class_count_formula, class_table,
    cug_test_with, enumerate_classes, expected_count, total_count, Backend, ColoredGraph,
    CugOptions, MixingMatrix, TriadClass,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        match $cond {
            true => {}
            false => return Err(format!($($msg)+)),
        }
    };
}

const DIRECTED_TOTALS: [u64; 10] = [16, 104, 328, 752, 1440, 2456, 3864, 5728, 8112, 11080];
const UNDIRECTED_TOTALS: [u64; 10] = [4, 20, 56, 120, 220, 364, 560, 816, 1140, 1540];

fn class_totals() -> Outcome {
    for k in 1..=10 {
        for (directed, want) in [(true, DIRECTED_TOTALS[k - 1]), (false, UNDIRECTED_TOTALS[k - 1])] {
            let got = total_count(k, directed);
            ensure!(got == want, "k={k} directed={directed}: {got} != {want}");
            let listed = enumerate_classes(k, directed).len() as u64;
            ensure!(listed == want, "k={k} directed={directed}: enumerated {listed}");
        }
    }
    Ok("k = 1..10, both directednesses, exact".into())
}

fn per_class_formula() -> Outcome {
    for k in 1..=5 {
        let table = enumerate_classes(k, true);
        for &class in TriadClass::all(true) {
            let formula = class_count_formula(class, k);
            let exhaustive = reference_class_count(class, k) as u64;
            let listed = table.iter().filter(|ct| ct.class == class).count() as u64;
            ensure!(
                formula == exhaustive && formula == listed,
                "{class} k={k}: formula {formula}, exhaustive {exhaustive}, listed {listed}"
            );
        }
    }
    Ok("16 classes x k = 1..5 agree with exhaustive canonicalization".into())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut graphs = 0;
    let mut seed = 0u64;
    for &p in &[0.05, 0.2, 0.5] {
        for directed in [true, false] {
            for k in 1..=4 {
                for _ in 0..9 {
                    seed += 1;
                    let n = 3 + (seed.wrapping_mul(2654435761) % 28) as usize;
                    let g = random_graph(n, k, p, directed, seed);
                    let oracle = brute_force_census(&g).map_err(|e| e.to_string())?;
                    for backend in [Backend::dense(), Backend::sparse()] {
                        let fast = census(&g, backend).map_err(|e| e.to_string())?;
                        ensure!(fast == oracle, "graph seed {seed} (n={n}, k={k}, p={p}, directed={directed}) differs");
                    }
                    graphs += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 300.0, "took {secs:.1}s");
    Ok(format!("{graphs} graphs, both backends, {secs:.2}s"))
}

fn census_totality() -> Outcome {
    let mut runs = 0;
    for seed in 0..100u64 {
        let n = 3 + (seed as usize * 7) % 60;
        let g = random_graph(n, 1 + seed as usize % 5, 0.15, seed % 2 == 0, 1000 + seed);
        let r = census(&g, Backend::default()).map_err(|e| e.to_string())?;
        ensure!(r.total() == choose3(n), "seed {seed}: {} != C({n},3)", r.total());
        runs += 1;
    }
    Ok(format!("{runs} runs sum to C(n,3); also enforced on every result"))
}

fn aggregation() -> Outcome {
    for seed in 0..50u64 {
        let n = 5 + seed as usize % 36;
        let g = random_graph(n, 4, [0.05, 0.2, 0.5][seed as usize % 3], true, 5000 + seed);
        let colored = census(&g, Backend::default()).map_err(|e| e.to_string())?.by_class();
        let mono = ColoredGraph::from_labels(true, &vec!["x"; n], &g.arcs().collect::<Vec<_>>())
            .map_err(|e| e.to_string())?;
        let plain = census(&mono, Backend::default()).map_err(|e| e.to_string())?.by_class();
        let reference = classic_census(&g);
        for class in TriadClass::all(true) {
            let want = reference.get(class).copied().unwrap_or(0);
            ensure!(
                colored[class] == want && plain[class] == want,
                "seed {seed} {class}: colored {} k=1 {} reference {want}",
                colored[class],
                plain[class]
            );
        }
    }
    Ok("50 digraphs, exact".into())
}

fn expectation_totality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for trial in 0..80u64 {
        let n = rng.random_range(3..=50);
        let k = rng.random_range(1..=4);
        let directed = trial % 2 == 0;
        let g = random_graph(n, k, 0.2, directed, trial);
        let mm = random_mixing(g.color_count(), directed, &mut rng);
        let total: f64 = class_table(g.color_count(), directed)
            .classes()
            .iter()
            .map(|ct| expected_count(&g, &mm, ct).expected)
            .sum();
        let want = choose3(n) as f64;
        let rel = (total - want).abs() / want;
        worst = worst.max(rel);
        ensure!(rel <= 1e-9, "trial {trial}: {total} vs {want}");
    }
    Ok(format!("80 random mixing matrices, worst relative error {worst:.1e}"))
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let reps = 10_000;
    let colors: Vec<&str> = (0..30).map(|i| if i % 5 < 2 { "a" } else { "b" }).collect();
    let g = ColoredGraph::from_labels(true, &colors, &[]).map_err(|e| e.to_string())?;
    let mm = MixingMatrix::uniform(2, true, 0.5).map_err(|e| e.to_string())?;
    let sims = simulate_null(&g, &mm, &CugOptions::new(reps, 2024)).map_err(|e| e.to_string())?;
    let table = class_table(2, true);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for (idx, ct) in table.classes().iter().enumerate() {
        let e = expected_count(&g, &mm, ct).expected;
        if e < 0.5 {
            continue;
        }
        let xs: Vec<f64> = sims.iter().map(|s| s[idx] as f64).collect();
        let mean = xs.iter().sum::<f64>() / reps as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let se = (var / reps as f64).sqrt();
        let z = (mean - e).abs() / se;
        worst = worst.max(z);
        ensure!(z <= 4.0, "{}: mean {mean} vs E {e} ({z:.2} SE)", ct.canonical_name(&["a", "b"]));
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 600.0, "took {secs:.1}s");
    Ok(format!("{checked} classes with E >= 0.5, worst {worst:.2} SE, {secs:.2}s"))
}

fn karate_scale() -> Outcome {
    let g = karate();
    ensure!(g.node_count() == 34 && g.color_count() == 5, "unexpected karate graph");
    let r = census(&g, Backend::default()).map_err(|e| e.to_string())?;
    ensure!(r.len() == 220, "{} rows", r.len());
    ensure!(r.total() == 5984, "sum {}", r.total());
    let start = Instant::now();
    let opts = CugOptions::new(1000, 1977);
    let first = cug_test_with(&g, &opts).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 300.0, "cugtest took {secs:.1}s");
    let second = cug_test_with(&g, &opts).map_err(|e| e.to_string())?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    first.write_csv(&mut a).map_err(|e| e.to_string())?;
    second.write_csv(&mut b).map_err(|e| e.to_string())?;
    ensure!(a == b, "cugtest output differs between identical runs");
    Ok(format!("220 rows summing to 5984; cugtest R=1000 in {secs:.2}s, byte-identical rerun"))
}

fn performance() -> Outcome {
    let time = |n: usize, k: usize, seed: u64| -> Result<f64, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_colored_graph(n, k, 6.0, true, &mut rng).map_err(|e| e.to_string())?;
        class_table(g.color_count(), true);
        let mut runs = Vec::new();
        for _ in 0..3 {
            let t = Instant::now();
            census(&g, Backend::default()).map_err(|e| e.to_string())?;
            runs.push(t.elapsed().as_secs_f64());
        }
        runs.sort_by(f64::total_cmp);
        Ok(runs[1])
    };
    let big = time(1000, 10, 1)?;
    ensure!(big < 120.0, "n=1000 k=10 took {big:.1}s");
    let sizes = [1000usize, 2000, 4000, 7000, 10000];
    let mut pts = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        pts.push(((n as f64).ln(), time(n, 3, 10 + i as u64)?.ln()));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / pts.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    ensure!(slope < 3.0, "log-log slope {slope:.2}");
    Ok(format!("n=1000 k=10 in {big:.3}s; k=3 log-log slope {slope:.2} over n=1000..10000"))
}

fn determinism() -> Outcome {
    let threads = thread_counts();
    let g = random_graph(60, 4, 0.1, true, 77);
    let base = census_with_threads(&g, Backend::default(), 1).map_err(|e| e.to_string())?;
    let karate = karate();
    let opts = CugOptions::new(200, 5);
    let mut base_cug = None;
    for &t in &threads {
        let r = census_with_threads(&g, Backend::default(), t).map_err(|e| e.to_string())?;
        ensure!(r == base, "census differs at {t} threads");
        let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
        let cug = pool.install(|| cug_test_with(&karate, &opts)).map_err(|e| e.to_string())?;
        match &base_cug {
            None => base_cug = Some(cug),
            Some(b) => ensure!(*b == cug, "cugtest differs at {t} threads"),
        }
    }
    Ok(format!("identical census and cugtest for threads {threads:?}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("class totals", class_totals),
        ("per-class formula", per_class_formula),
        ("oracle equivalence", oracle_equivalence),
        ("census totality", census_totality),
        ("aggregation to classic census", aggregation),
        ("expectation totality", expectation_totality),
        ("monte carlo consistency", monte_carlo),
        ("karate-scale run", karate_scale),
        ("performance sanity", performance),
        ("determinism under parallelism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS  {name:<32} {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name:<32} {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
