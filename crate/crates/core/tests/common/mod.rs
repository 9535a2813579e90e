//! Fixtures and independent reference computations shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use colorcensus::{
    classify_triple, load_graph_files, ColoredGraph, ColoredTriadClass, DyadState, MixingMatrix,
    TriadClass,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LABELS: [&str; 6] = ["amber", "blue", "coral", "dune", "ember", "fern"];

/// Bernoulli graph, one independent draw per ordered or unordered pair,
/// colors uniform over the first `k` labels.
pub fn random_graph(n: usize, k: usize, p: f64, directed: bool, seed: u64) -> ColoredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors: Vec<&str> = (0..n).map(|_| LABELS[rng.random_range(0..k)]).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || (!directed && b < a) {
                continue;
            }
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    ColoredGraph::from_labels(directed, &colors, &edges).unwrap()
}

pub fn karate() -> ColoredGraph {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    load_graph_files(
        data.join("karate_edges.txt"),
        data.join("karate_factions.txt"),
        false,
    )
    .unwrap()
}

pub fn choose3(n: usize) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Classic 16-class census by mutual/asymmetric/null counts and in/out
/// degree patterns inside each triple. Ignores colors.
pub fn classic_census(g: &ColoredGraph) -> BTreeMap<TriadClass, u64> {
    let n = g.node_count();
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                *out.entry(man_class(g, [i, j, l])).or_insert(0) += 1;
            }
        }
    }
    out
}

fn man_class(g: &ColoredGraph, v: [usize; 3]) -> TriadClass {
    let arc = |a: usize, b: usize| g.has_arc(v[a], v[b]);
    let (mut m, mut a) = (0, 0);
    let mut outdeg = [0; 3];
    let mut indeg = [0; 3];
    for x in 0..3 {
        for y in x + 1..3 {
            match (arc(x, y), arc(y, x)) {
                (true, true) => m += 1,
                (false, false) => {}
                (true, false) => {
                    a += 1;
                    outdeg[x] += 1;
                    indeg[y] += 1;
                }
                (false, true) => {
                    a += 1;
                    outdeg[y] += 1;
                    indeg[x] += 1;
                }
            }
        }
    }
    use TriadClass::*;
    match (m, a) {
        (0, 0) => T003,
        (0, 1) => T012,
        (1, 0) => T102,
        (0, 2) if outdeg.contains(&2) => T021D,
        (0, 2) if indeg.contains(&2) => T021U,
        (0, 2) => T021C,
        (1, 1) => {
            // the asymmetric arc touches exactly one mutual-pair node
            let mutual_pair: Vec<usize> =
                (0..3).filter(|&x| (0..3).any(|y| y != x && arc(x, y) && arc(y, x))).collect();
            if mutual_pair.iter().any(|&x| indeg[x] == 1) {
                T111D
            } else {
                T111U
            }
        }
        (0, 3) if outdeg == [1, 1, 1] => T030C,
        (0, 3) => T030T,
        (2, 0) => T201,
        (1, 2) if outdeg.contains(&2) => T120D,
        (1, 2) if indeg.contains(&2) => T120U,
        (1, 2) => T120C,
        (2, 1) => T210,
        (3, 0) => T300,
        _ => unreachable!("{m} mutual and {a} asymmetric dyads"),
    }
}

fn template_state(class: TriadClass, a: usize, b: usize) -> DyadState {
    let states = class.dyad_states();
    match (a, b) {
        (0, 1) => states[0],
        (1, 2) => states[1],
        (2, 0) => states[2],
        (1, 0) => states[0].reversed(),
        (2, 1) => states[1].reversed(),
        (0, 2) => states[2].reversed(),
        _ => unreachable!(),
    }
}

pub const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Position permutations preserving every dyad of the class template.
pub fn template_symmetries(class: TriadClass) -> Vec<[usize; 3]> {
    PERMS
        .into_iter()
        .filter(|p| {
            (0..3).all(|a| {
                (0..3).all(|b| a == b || template_state(class, p[a], p[b]) == template_state(class, a, b))
            })
        })
        .collect()
}

/// Lexicographically smallest coloring in the symmetry orbit.
pub fn reference_canonical(class: TriadClass, t: [usize; 3]) -> [usize; 3] {
    template_symmetries(class)
        .into_iter()
        .map(|p| {
            let mut u = [0; 3];
            for a in 0..3 {
                u[p[a]] = t[a];
            }
            u
        })
        .min()
        .unwrap()
}

pub fn reference_class_count(class: TriadClass, k: usize) -> usize {
    let mut seen = BTreeSet::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                seen.insert(reference_canonical(class, [a, b, c]));
            }
        }
    }
    seen.len()
}

/// Exact class distribution of one triple whose nodes carry `colors`, by
/// enumerating every tie configuration and weighting it by the mixing
/// matrix.
pub fn enumerated_triad_distribution(
    mm: &MixingMatrix,
    colors: [usize; 3],
    labels: &[String],
) -> BTreeMap<ColoredTriadClass, f64> {
    let directed = mm.directed();
    let pairs: Vec<(usize, usize)> = if directed {
        vec![(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]
    } else {
        vec![(0, 1), (1, 2), (0, 2)]
    };
    let node_labels: Vec<&str> = colors.iter().map(|&c| labels[c].as_str()).collect();
    let mut out = BTreeMap::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut prob = 1.0;
        let mut edges = Vec::new();
        for (bit, &(a, b)) in pairs.iter().enumerate() {
            let p = mm.prob(colors[a], colors[b]);
            if mask & (1 << bit) != 0 {
                prob *= p;
                edges.push((a, b));
            } else {
                prob *= 1.0 - p;
            }
        }
        let g = ColoredGraph::from_labels(directed, &node_labels, &edges).unwrap();
        let local = classify_triple(&g, 0, 1, 2);
        // map the triple's local color indices back to the global ones
        let to_global = |c: usize| labels.iter().position(|l| l == g.labels()[c].as_str()).unwrap();
        let ct = colorcensus::canonicalize(local.class, local.triplet.map(to_global));
        *out.entry(ct).or_insert(0.0) += prob;
    }
    out
}

pub fn random_mixing(k: usize, directed: bool, rng: &mut ChaCha8Rng) -> MixingMatrix {
    let mut p = vec![0.0; k * k];
    for r in 0..k {
        for s in 0..k {
            if directed || s >= r {
                let x: f64 = rng.random();
                p[r * k + s] = x;
                if !directed {
                    p[s * k + r] = x;
                }
            }
        }
    }
    MixingMatrix::from_probabilities(k, directed, p).unwrap()
}

pub fn thread_counts() -> Vec<usize> {
    let max = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut t = vec![1, 2, max];
    t.sort_unstable();
    t.dedup();
    t
}
