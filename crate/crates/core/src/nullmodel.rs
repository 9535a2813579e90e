//! Mixing-matrix conditioned null model for the colored triad census.
//!
//! Ties are independent Bernoulli draws whose probability depends only on
//! the colors at their ends. Under that model each colored class has a
//! closed-form probability per node triple; counts are compared against it
//! with an exact binomial test and against simulated graphs drawn from the
//! same model.

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::census::{census_with_table, csv_err, Backend, CensusResult};
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::isoclass::{automorphisms, canonicalize, class_table, ColoredTriadClass, DyadState};

/// Tie probabilities between color groups; `p(r, s)` is the probability of
/// a tie from a color-`r` node to a color-`s` node.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingMatrix {
    k: usize,
    directed: bool,
    p: Vec<f64>,
    /// Observed ties and possible dyads per cell, when estimated.
    basis: Option<(Vec<u64>, Vec<u64>)>,
}

impl MixingMatrix {
    pub fn from_probabilities(k: usize, directed: bool, p: Vec<f64>) -> Result<Self> {
        if p.len() != k * k {
            return Err(Error::Invalid(format!(
                "mixing matrix needs {} entries, got {}",
                k * k,
                p.len()
            )));
        }
        if let Some(bad) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::Invalid(format!("tie probability {bad} outside [0, 1]")));
        }
        if !directed {
            for r in 0..k {
                for s in 0..r {
                    if p[r * k + s] != p[s * k + r] {
                        return Err(Error::Invalid(
                            "undirected mixing matrix must be symmetric".into(),
                        ));
                    }
                }
            }
        }
        Ok(MixingMatrix {
            k,
            directed,
            p,
            basis: None,
        })
    }

    pub fn uniform(k: usize, directed: bool, p: f64) -> Result<Self> {
        Self::from_probabilities(k, directed, vec![p; k * k])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn prob(&self, r: usize, s: usize) -> f64 {
        self.p[r * self.k + s]
    }

    pub fn ties(&self, r: usize, s: usize) -> Option<u64> {
        self.basis.as_ref().map(|(t, _)| t[r * self.k + s])
    }

    pub fn dyads(&self, r: usize, s: usize) -> Option<u64> {
        self.basis.as_ref().map(|(_, d)| d[r * self.k + s])
    }

    /// Estimated cell with no possible dyads; its probability is set to 0.
    pub fn is_degenerate(&self, r: usize, s: usize) -> bool {
        self.dyads(r, s) == Some(0)
    }

    /// Probability of a dyad in `state` between a color-`a` node and a
    /// color-`b` node, the state read from the `a` end.
    pub fn dyad_probability(&self, state: DyadState, a: usize, b: usize) -> f64 {
        let (ab, ba) = (self.prob(a, b), self.prob(b, a));
        if self.directed {
            match state {
                DyadState::Mutual => ab * ba,
                DyadState::AsymCw => ab * (1.0 - ba),
                DyadState::AsymCcw => ba * (1.0 - ab),
                DyadState::Null => (1.0 - ab) * (1.0 - ba),
            }
        } else {
            match state {
                DyadState::Mutual => ab,
                DyadState::Null => 1.0 - ab,
                DyadState::AsymCw | DyadState::AsymCcw => 0.0,
            }
        }
    }
}

impl fmt::Display for MixingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.k {
            let row: Vec<String> = (0..self.k).map(|s| format!("{:.4}", self.prob(r, s))).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Observed tie densities between and within color groups.
pub fn estimate_mixing_matrix(g: &ColoredGraph) -> MixingMatrix {
    let k = g.color_count();
    let sizes: Vec<u64> = g.color_sizes().into_iter().map(|x| x as u64).collect();
    let mut ties = vec![0u64; k * k];
    for (a, b) in g.edges() {
        let (r, s) = (g.color(a), g.color(b));
        ties[r * k + s] += 1;
        if !g.directed() && r != s {
            ties[s * k + r] += 1;
        }
    }
    let mut dyads = vec![0u64; k * k];
    for r in 0..k {
        for s in 0..k {
            dyads[r * k + s] = if r != s {
                sizes[r] * sizes[s]
            } else if g.directed() {
                sizes[r] * sizes[r].saturating_sub(1)
            } else {
                sizes[r] * sizes[r].saturating_sub(1) / 2
            };
        }
    }
    let p = ties
        .iter()
        .zip(&dyads)
        .map(|(&t, &d)| if d == 0 { 0.0 } else { t as f64 / d as f64 })
        .collect();
    MixingMatrix {
        k,
        directed: g.directed(),
        p,
        basis: Some((ties, dyads)),
    }
}

/// Draws a graph on the nodes and colors of `template`, each dyad an
/// independent Bernoulli trial.
pub fn sample_graph_with<R: Rng>(
    mm: &MixingMatrix,
    template: &ColoredGraph,
    rng: &mut R,
) -> Result<ColoredGraph> {
    check_compatible(mm, template)?;
    let n = template.node_count();
    let colors = template.colors();
    let mut edges = Vec::new();
    for i in 0..n {
        let start = if mm.directed { 0 } else { i + 1 };
        for j in start..n {
            if i != j && rng.random::<f64>() < mm.prob(colors[i], colors[j]) {
                edges.push((i, j));
            }
        }
    }
    template.with_edges(edges)
}

/// [`sample_graph_with`] on a ChaCha stream seeded by `seed`.
pub fn sample_graph(mm: &MixingMatrix, template: &ColoredGraph, seed: u64) -> Result<ColoredGraph> {
    sample_graph_with(mm, template, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn check_compatible(mm: &MixingMatrix, g: &ColoredGraph) -> Result<()> {
    if mm.directed != g.directed() {
        return Err(Error::Invalid(
            "mixing matrix and graph disagree on directedness".into(),
        ));
    }
    if mm.k < g.color_count() {
        return Err(Error::Invalid(format!(
            "mixing matrix has {} colors, graph has {}",
            mm.k,
            g.color_count()
        )));
    }
    Ok(())
}

/// Bernoulli graph with a single tie probability, drawn by geometric
/// skipping so the cost is proportional to the number of ties.
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, directed: bool, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if n < 2 || p <= 0.0 {
        return edges;
    }
    let total = if directed { n * (n - 1) } else { n * (n - 1) / 2 };
    if p >= 1.0 {
        edges.reserve(total);
        for i in 0..n {
            for j in 0..n {
                if i != j && (directed || i < j) {
                    edges.push((i, j));
                }
            }
        }
        return edges;
    }
    let log_q = (1.0 - p).ln();
    let mut idx: i64 = -1;
    loop {
        let u: f64 = rng.random();
        let skip = ((1.0 - u).ln() / log_q).floor();
        if !skip.is_finite() || skip >= total as f64 {
            break;
        }
        idx += 1 + skip as i64;
        if idx as usize >= total {
            break;
        }
        let idx = idx as usize;
        if directed {
            let (i, jj) = (idx / (n - 1), idx % (n - 1));
            edges.push((i, if jj >= i { jj + 1 } else { jj }));
        } else {
            // row v holds pairs (v, 0..v); rows start at v(v-1)/2
            let mut v = (((8.0 * idx as f64 + 1.0).sqrt() + 1.0) / 2.0) as usize;
            while v * (v - 1) / 2 > idx {
                v -= 1;
            }
            while (v + 1) * v / 2 <= idx {
                v += 1;
            }
            edges.push((idx - v * (v - 1) / 2, v));
        }
    }
    edges
}

/// Probability of one colored class under a mixing matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriadProbability {
    /// The class in one fixed placement on labeled nodes with the triplet's
    /// colors at the triplet's positions.
    pub per_assignment: f64,
    /// A fixed triple of nodes carrying the triplet's colors forms this
    /// colored class, in any placement.
    pub total: f64,
}

fn placement_probability(mm: &MixingMatrix, ct: &ColoredTriadClass, c: [usize; 3]) -> f64 {
    let states = ct.class.dyad_states();
    (0..3)
        .map(|t| mm.dyad_probability(states[t], c[t], c[(t + 1) % 3]))
        .product()
}

pub fn triad_probability(mm: &MixingMatrix, ct: &ColoredTriadClass) -> TriadProbability {
    let per_assignment = placement_probability(mm, ct, ct.triplet);
    // Place the class template on a fixed node triple colored by the
    // triplet in every way; placements differing by an automorphism give
    // the same tie configuration.
    let c = ct.triplet;
    let mut sum = 0.0;
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let placed = [c[perm[0]], c[perm[1]], c[perm[2]]];
        if canonicalize(ct.class, placed).triplet == ct.triplet {
            sum += placement_probability(mm, ct, placed);
        }
    }
    TriadProbability {
        per_assignment,
        total: sum / automorphisms(ct.class).len() as f64,
    }
}

/// Analytic moments of one class count.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub prob: f64,
    /// Node triples whose colors match the triplet.
    pub n_triplets: u64,
    pub expected: f64,
    pub variance: f64,
}

fn binomial_coefficient(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Node triples of `g` whose color multiset matches the triplet.
pub fn triplet_count(color_sizes: &[usize], ct: &ColoredTriadClass) -> u64 {
    ct.color_multiplicity()
        .into_iter()
        .map(|(c, times)| {
            let size = color_sizes.get(c).copied().unwrap_or(0) as u64;
            binomial_coefficient(size, times as u64)
        })
        .product()
}

pub fn expected_count(g: &ColoredGraph, mm: &MixingMatrix, ct: &ColoredTriadClass) -> Expectation {
    let n_triplets = triplet_count(&g.color_sizes(), ct);
    let in_range = ct.triplet.iter().all(|&c| c < mm.k);
    let prob = if in_range {
        triad_probability(mm, ct).total
    } else {
        0.0
    };
    let expected = prob * n_triplets as f64;
    Expectation {
        prob,
        n_triplets,
        expected,
        variance: expected * (1.0 - prob),
    }
}

/// Two-sided exact binomial test, `min(1, 2 min(P[X <= k], P[X >= k]))`.
/// `None` when there are no trials.
pub fn exact_binomial_test(observed: u64, n_trials: u64, p: f64) -> Option<f64> {
    if n_trials == 0 || observed > n_trials {
        return None;
    }
    let (lower, upper) = if p <= 0.0 {
        (1.0, if observed == 0 { 1.0 } else { 0.0 })
    } else if p >= 1.0 {
        (if observed == n_trials { 1.0 } else { 0.0 }, 1.0)
    } else {
        let dist = Binomial::new(p, n_trials).ok()?;
        let upper = if observed == 0 {
            1.0
        } else {
            dist.sf(observed - 1)
        };
        (dist.cdf(observed), upper)
    };
    Some((2.0 * lower.min(upper)).min(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CugStatus {
    #[serde(rename = "defined")]
    Defined,
    /// Nothing observed and nothing simulated.
    #[serde(rename = "undefined")]
    Undefined,
    /// Both tails at least one half.
    #[serde(rename = "indeterminate-0.5")]
    Indeterminate,
}

impl fmt::Display for CugStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CugStatus::Defined => "defined",
            CugStatus::Undefined => "undefined",
            CugStatus::Indeterminate => "indeterminate-0.5",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CugRow {
    #[serde(skip)]
    pub class: ColoredTriadClass,
    pub observed: u64,
    pub prob: f64,
    pub n_triplets: u64,
    pub expected: f64,
    pub variance: f64,
    pub binom_p: Option<f64>,
    pub pseudo_p_low: f64,
    pub pseudo_p_high: f64,
    pub status: CugStatus,
    pub sim_mean: f64,
    pub sim_sd: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CugTestResult {
    pub labels: Vec<String>,
    pub directed: bool,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    pub mixing: MixingMatrix,
    pub rows: Vec<CugRow>,
}

#[derive(Clone, Copy, Debug)]
pub struct CugOptions {
    pub replications: usize,
    pub seed: u64,
    pub backend: Backend,
}

impl CugOptions {
    pub fn new(replications: usize, seed: u64) -> Self {
        CugOptions {
            replications,
            seed,
            backend: Backend::default(),
        }
    }
}

/// Census counts of `replications` graphs drawn from `mm`, one row per
/// replicate in class-table order. Replicate `i` uses ChaCha stream `i` of
/// the master seed, so results do not depend on scheduling.
pub fn simulate_null(
    template: &ColoredGraph,
    mm: &MixingMatrix,
    opts: &CugOptions,
) -> Result<Vec<Vec<u64>>> {
    check_compatible(mm, template)?;
    let table = class_table(template.color_count(), template.directed());
    (0..opts.replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(rep as u64);
            let g = sample_graph_with(mm, template, &mut rng)?;
            let r = census_with_table(&g, opts.backend, table.clone())?;
            Ok(r.counts().to_vec())
        })
        .collect()
}

/// Conditional uniform graph test against the graph's own mixing matrix.
pub fn cug_test(g: &ColoredGraph, replications: usize, seed: u64) -> Result<CugTestResult> {
    cug_test_with(g, &CugOptions::new(replications, seed))
}

pub fn cug_test_with(g: &ColoredGraph, opts: &CugOptions) -> Result<CugTestResult> {
    let mm = estimate_mixing_matrix(g);
    cug_test_with_mixing(g, mm, opts)
}

pub fn cug_test_with_mixing(
    g: &ColoredGraph,
    mm: MixingMatrix,
    opts: &CugOptions,
) -> Result<CugTestResult> {
    if opts.replications == 0 {
        return Err(Error::Invalid("at least one replication is required".into()));
    }
    let table = class_table(g.color_count(), g.directed());
    let observed: CensusResult = census_with_table(g, opts.backend, table.clone())?;
    let sims = simulate_null(g, &mm, opts)?;
    let reps = opts.replications as f64;

    let rows = table
        .classes()
        .iter()
        .enumerate()
        .map(|(idx, ct)| {
            let obs = observed.counts()[idx];
            let column = sims.iter().map(|s| s[idx]);
            let (mut le, mut ge, mut nonzero) = (0usize, 0usize, false);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for x in column {
                le += (x <= obs) as usize;
                ge += (x >= obs) as usize;
                nonzero |= x > 0;
                sum += x as f64;
                sum_sq += (x as f64) * (x as f64);
            }
            let low = (le + 1) as f64 / (reps + 1.0);
            let high = (ge + 1) as f64 / (reps + 1.0);
            let status = if obs == 0 && !nonzero {
                CugStatus::Undefined
            } else if low >= 0.5 && high >= 0.5 {
                CugStatus::Indeterminate
            } else {
                CugStatus::Defined
            };
            let mean = sum / reps;
            let var = if opts.replications > 1 {
                ((sum_sq - reps * mean * mean) / (reps - 1.0)).max(0.0)
            } else {
                0.0
            };
            let e = expected_count(g, &mm, ct);
            CugRow {
                class: *ct,
                observed: obs,
                prob: e.prob,
                n_triplets: e.n_triplets,
                expected: e.expected,
                variance: e.variance,
                binom_p: exact_binomial_test(obs, e.n_triplets, e.prob),
                pseudo_p_low: low,
                pseudo_p_high: high,
                status,
                sim_mean: mean,
                sim_sd: var.sqrt(),
            }
        })
        .collect();

    Ok(CugTestResult {
        labels: g.labels().to_vec(),
        directed: g.directed(),
        n: g.node_count(),
        replications: opts.replications,
        seed: opts.seed,
        mixing: mm,
        rows,
    })
}

pub const CUG_COLUMNS: [&str; 11] = [
    "class",
    "triplet",
    "observed",
    "prob",
    "n_triplets",
    "expected",
    "variance",
    "binom_p",
    "pseudo_p_low",
    "pseudo_p_high",
    "status",
];

impl CugTestResult {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(CUG_COLUMNS).map_err(csv_err)?;
        for row in &self.rows {
            wr.write_record([
                row.class.class.name().to_string(),
                row.class.triplet_name(&self.labels),
                row.observed.to_string(),
                row.prob.to_string(),
                row.n_triplets.to_string(),
                row.expected.to_string(),
                row.variance.to_string(),
                row.binom_p.map_or_else(|| "NA".to_string(), |p| p.to_string()),
                row.pseudo_p_low.to_string(),
                row.pseudo_p_high.to_string(),
                row.status.to_string(),
            ])
            .map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|row| {
                let mut v = serde_json::to_value(row).expect("row serializes");
                v["class"] = json!(row.class.class.name());
                v["triplet"] = json!(row.class.triplet_name(&self.labels));
                v
            })
            .collect();
        json!({
            "n": self.n,
            "k": self.labels.len(),
            "directed": self.directed,
            "labels": self.labels,
            "replications": self.replications,
            "seed": self.seed,
            "mixing_matrix": (0..self.mixing.k())
                .map(|r| (0..self.mixing.k()).map(|s| self.mixing.prob(r, s)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "rows": rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isoclass::{enumerate_classes, TriadClass};

    #[test]
    fn monochrome_density() {
        let g = ColoredGraph::from_labels(false, &["X"; 5], &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let mm = estimate_mixing_matrix(&g);
        assert_eq!(mm.prob(0, 0), 3.0 / 10.0);
        assert_eq!(mm.ties(0, 0), Some(3));
        assert_eq!(mm.dyads(0, 0), Some(10));
    }

    #[test]
    fn complete_bipartite_cross_ties() {
        let g = ColoredGraph::from_labels(
            true,
            &["A", "A", "B", "B"],
            &[(0, 2), (0, 3), (1, 2), (1, 3)],
        )
        .unwrap();
        let mm = estimate_mixing_matrix(&g);
        assert_eq!(mm.prob(0, 1), 1.0);
        assert_eq!(mm.prob(1, 0), 0.0);
        assert_eq!(mm.prob(0, 0), 0.0);
    }

    #[test]
    fn singleton_color_is_degenerate_on_diagonal() {
        let g = ColoredGraph::from_labels(false, &["A", "B", "B"], &[(0, 1)]).unwrap();
        let mm = estimate_mixing_matrix(&g);
        assert!(mm.is_degenerate(0, 0));
        assert_eq!(mm.prob(0, 0), 0.0);
        assert!(!mm.is_degenerate(0, 1));
        assert_eq!(mm.prob(0, 1), 0.5);
        assert_eq!(mm.prob(1, 0), 0.5);
    }

    #[test]
    fn invalid_matrices() {
        assert!(MixingMatrix::from_probabilities(2, false, vec![0.1, 0.2, 0.3, 0.1]).is_err());
        assert!(MixingMatrix::from_probabilities(1, true, vec![1.5]).is_err());
        assert!(MixingMatrix::from_probabilities(2, true, vec![0.1]).is_err());
    }

    #[test]
    fn extreme_samples() {
        let g = ColoredGraph::from_labels(true, &["A", "B", "A", "B"], &[]).unwrap();
        let zero = MixingMatrix::uniform(2, true, 0.0).unwrap();
        assert_eq!(sample_graph(&zero, &g, 1).unwrap().edge_count(), 0);
        let one = MixingMatrix::uniform(2, true, 1.0).unwrap();
        assert_eq!(sample_graph(&one, &g, 1).unwrap().edge_count(), 12);
        let one_u = MixingMatrix::uniform(2, false, 1.0).unwrap();
        let gu = ColoredGraph::from_labels(false, &["A", "B", "A", "B"], &[]).unwrap();
        assert_eq!(sample_graph(&one_u, &gu, 1).unwrap().edge_count(), 6);
    }

    #[test]
    fn half_density_edge_count() {
        let colors = vec!["X"; 100];
        let g = ColoredGraph::from_labels(true, &colors, &[]).unwrap();
        let mm = MixingMatrix::uniform(1, true, 0.5).unwrap();
        let m = sample_graph(&mm, &g, 42).unwrap().edge_count() as f64;
        let (mean, sd) = (0.5 * 9900.0, (9900.0f64 * 0.25).sqrt());
        assert!((m - mean).abs() < 4.0 * sd, "{m}");
    }

    #[test]
    fn sampling_is_seeded() {
        let g = ColoredGraph::from_labels(false, &["A", "B", "A", "B", "C"], &[]).unwrap();
        let mm = MixingMatrix::uniform(3, false, 0.4).unwrap();
        assert_eq!(sample_graph(&mm, &g, 9).unwrap(), sample_graph(&mm, &g, 9).unwrap());
    }

    #[test]
    fn erdos_renyi_pairs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for directed in [true, false] {
            let edges = erdos_renyi(200, 0.05, directed, &mut rng);
            let mut seen = std::collections::HashSet::new();
            for &(a, b) in &edges {
                assert!(a != b && a < 200 && b < 200);
                assert!(directed || a < b);
                assert!(seen.insert((a, b)));
            }
            let pairs = if directed { 200.0 * 199.0 } else { 100.0 * 199.0 };
            let sd = (pairs * 0.05 * 0.95f64).sqrt();
            assert!((edges.len() as f64 - 0.05 * pairs).abs() < 4.0 * sd);
        }
        assert_eq!(erdos_renyi(5, 1.0, false, &mut rng).len(), 10);
        assert!(erdos_renyi(5, 0.0, true, &mut rng).is_empty());
    }

    #[test]
    fn probability_examples() {
        let mm = MixingMatrix::uniform(1, true, 0.5).unwrap();
        let cyc = canonicalize(TriadClass::T030C, [0, 0, 0]);
        let p = triad_probability(&mm, &cyc);
        assert_eq!(p.per_assignment, 0.015625);
        assert_eq!(p.total, 2.0 * 0.015625);

        let mm = MixingMatrix::uniform(1, false, 0.5).unwrap();
        let tri = canonicalize(TriadClass::T300, [0, 0, 0]);
        assert_eq!(triad_probability(&mm, &tri).total, 0.125);
    }

    #[test]
    fn distinct_colors_reduce_to_edge_product() {
        let p = vec![0.1, 0.2, 0.3, 0.2, 0.4, 0.5, 0.3, 0.5, 0.6];
        let mm = MixingMatrix::from_probabilities(3, false, p).unwrap();
        let tri = canonicalize(TriadClass::T300, [0, 1, 2]);
        let prob = triad_probability(&mm, &tri);
        let direct = 0.2 * 0.5 * 0.3;
        assert!((prob.total - direct).abs() < 1e-15);
        assert!((prob.per_assignment - direct).abs() < 1e-15);
    }

    #[test]
    fn probabilities_complete_per_multiset() {
        let p = vec![0.1, 0.7, 0.35, 0.2, 0.45, 0.9, 0.05, 0.6, 0.3];
        let mm = MixingMatrix::from_probabilities(3, true, p).unwrap();
        let mut by_multiset = std::collections::HashMap::<[usize; 3], f64>::new();
        for ct in enumerate_classes(3, true) {
            let mut key = ct.triplet;
            key.sort_unstable();
            *by_multiset.entry(key).or_default() += triad_probability(&mm, &ct).total;
        }
        assert_eq!(by_multiset.len(), 10);
        for (key, total) in by_multiset {
            assert!((total - 1.0).abs() < 1e-12, "{key:?}: {total}");
        }
    }

    #[test]
    fn expectation_examples() {
        let g = ColoredGraph::from_labels(false, &["X"; 4], &[]).unwrap();
        let mm = MixingMatrix::uniform(1, false, 0.5).unwrap();
        let tri = canonicalize(TriadClass::T300, [0, 0, 0]);
        let e = expected_count(&g, &mm, &tri);
        assert_eq!(e.n_triplets, 4);
        assert_eq!(e.expected, 0.5);
        assert_eq!(e.variance, 0.4375);

        let full = MixingMatrix::uniform(2, false, 1.0).unwrap();
        let g2 = ColoredGraph::from_labels(false, &["X", "X", "Y", "Y", "Y"], &[]).unwrap();
        let t = canonicalize(TriadClass::T300, [0, 1, 1]);
        let e = expected_count(&g2, &full, &t);
        assert_eq!(e.expected, 2.0 * 3.0);
        assert_eq!(e.variance, 0.0);

        // color 1 absent from a one-color graph
        let t = canonicalize(TriadClass::T300, [0, 0, 1]);
        let e = expected_count(&g, &full, &t);
        assert_eq!((e.n_triplets, e.expected, e.variance), (0, 0.0, 0.0));
    }

    /// Direct summation of binomial probabilities.
    fn tail_oracle(obs: u64, n: u64, p: f64) -> f64 {
        let pmf = |x: u64| {
            let mut c = 1.0f64;
            for i in 0..x {
                c *= (n - i) as f64 / (i + 1) as f64;
            }
            c * p.powi(x as i32) * (1.0 - p).powi((n - x) as i32)
        };
        let lower: f64 = (0..=obs).map(pmf).sum();
        let upper: f64 = (obs..=n).map(pmf).sum();
        (2.0 * lower.min(upper)).min(1.0)
    }

    #[test]
    fn binomial_test_examples() {
        assert_eq!(exact_binomial_test(5, 10, 0.5), Some(1.0));
        let p0 = exact_binomial_test(0, 10, 0.5).unwrap();
        assert!((p0 - 2.0 * 0.5f64.powi(10)).abs() < 1e-15);
        assert!((exact_binomial_test(10, 10, 0.5).unwrap() - p0).abs() < 1e-15);
        assert_eq!(exact_binomial_test(0, 0, 0.5), None);
        assert_eq!(exact_binomial_test(0, 7, 0.0), Some(1.0));
        assert_eq!(exact_binomial_test(1, 7, 0.0), Some(0.0));
        assert_eq!(exact_binomial_test(7, 7, 1.0), Some(1.0));
    }

    #[test]
    fn binomial_test_matches_direct_sums() {
        for &(obs, n, p) in &[(3, 20, 0.3), (17, 40, 0.25), (1, 50, 0.1), (60, 80, 0.6)] {
            let got = exact_binomial_test(obs, n, p).unwrap();
            let want = tail_oracle(obs, n, p);
            assert!((got - want).abs() < 1e-10, "{obs},{n},{p}: {got} vs {want}");
        }
    }

    #[test]
    fn cug_statuses_and_bounds() {
        let g = ColoredGraph::from_labels(
            false,
            &["A", "A", "B", "B", "A", "B"],
            &[(0, 1), (1, 4), (2, 3), (0, 2)],
        )
        .unwrap();
        let r = cug_test(&g, 50, 11).unwrap();
        assert_eq!(r.rows.len(), 20);
        for row in &r.rows {
            assert!(row.pseudo_p_low > 0.0 && row.pseudo_p_low <= 1.0);
            assert!(row.pseudo_p_high > 0.0 && row.pseudo_p_high <= 1.0);
            assert!(row.pseudo_p_low + row.pseudo_p_high >= 1.0 + 1.0 / 51.0 - 1e-12);
            if row.status == CugStatus::Undefined {
                assert_eq!(row.observed, 0);
                assert_eq!(row.sim_mean, 0.0);
            }
        }
        assert_eq!(r, cug_test(&g, 50, 11).unwrap());
        assert!(cug_test(&g, 0, 1).is_err());
    }

    #[test]
    fn cug_csv_columns() {
        let g = ColoredGraph::from_labels(false, &["A", "B", "A", "B"], &[(0, 1)]).unwrap();
        let r = cug_test(&g, 5, 1).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CUG_COLUMNS.join(","));
        assert_eq!(text.lines().count(), 21);
        assert_eq!(r.to_json()["rows"].as_array().unwrap().len(), 20);
    }
}
