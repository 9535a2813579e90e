//! Colored triad census by masked dyad-relation products.

mod store;
mod trace;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

pub use store::DENSE_MAX_BYTES;
use store::{DenseStore, RelationStore, SparseStore};

use crate::error::{Error, Result};
use crate::graph::{derive_matrices, ColoredGraph, DerivedMatrices, Relation};
use crate::isoclass::{canonicalize, class_table, ClassTable, ColoredTriadClass, DyadState, TriadClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BackendKind {
    DenseBitset,
    Sparse,
    Auto,
}

/// Storage used for the relation products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Backend {
    pub kind: BackendKind,
    /// Node count at which `Auto` switches from dense to sparse.
    pub threshold: usize,
}

impl Default for Backend {
    fn default() -> Self {
        Backend {
            kind: BackendKind::Auto,
            threshold: 256,
        }
    }
}

impl Backend {
    pub fn dense() -> Self {
        Backend {
            kind: BackendKind::DenseBitset,
            ..Default::default()
        }
    }

    pub fn sparse() -> Self {
        Backend {
            kind: BackendKind::Sparse,
            ..Default::default()
        }
    }

    pub fn auto() -> Self {
        Self::default()
    }

    /// The concrete backend used for a graph with `n` nodes.
    pub fn resolve(&self, n: usize) -> BackendKind {
        match self.kind {
            BackendKind::Auto if n < self.threshold => BackendKind::DenseBitset,
            BackendKind::Auto => BackendKind::Sparse,
            other => other,
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BackendKind::DenseBitset => "dense-bitset",
            BackendKind::Sparse => "sparse",
            BackendKind::Auto => "auto",
        })
    }
}

impl FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" | "dense-bitset" => Ok(BackendKind::DenseBitset),
            "sparse" => Ok(BackendKind::Sparse),
            "auto" => Ok(BackendKind::Auto),
            other => Err(Error::Invalid(format!("unknown backend `{other}`"))),
        }
    }
}

/// A view of one dyad-state relation. The null relation is answered from
/// `E` and never stored.
#[derive(Clone, Copy, Debug)]
pub enum DyadRelation<'a> {
    Stored(&'a DerivedMatrices, Relation),
    Null(&'a DerivedMatrices),
}

impl DyadRelation<'_> {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        match *self {
            DyadRelation::Stored(dm, rel) => dm.contains(rel, i, j),
            DyadRelation::Null(dm) => dm.is_null(i, j),
        }
    }

    /// All entries, sorted. Enumerating the null relation is quadratic.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        match *self {
            DyadRelation::Stored(dm, rel) => dm.pairs(rel),
            DyadRelation::Null(dm) => {
                let n = dm.node_count();
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| dm.is_null(i, j))
                    .collect()
            }
        }
    }
}

/// `M`, `C`, `C'` or the complement of `E`, by dyad state.
pub fn dyad_matrix(dm: &DerivedMatrices, state: DyadState) -> DyadRelation<'_> {
    match state {
        DyadState::Mutual => DyadRelation::Stored(dm, Relation::Mutual),
        DyadState::AsymCw => DyadRelation::Stored(dm, Relation::Asym),
        DyadState::AsymCcw => DyadRelation::Stored(dm, Relation::AsymT),
        DyadState::Null => DyadRelation::Null(dm),
    }
}

fn count_class<S: RelationStore>(
    store: &S,
    dm: &DerivedMatrices,
    ct: &ColoredTriadClass,
) -> Result<u64> {
    let raw = trace::raw_trace(store, dm, ct);
    let order = ct.automorphism_order() as i64;
    if raw < 0 || raw % order != 0 {
        return Err(Error::Internal(format!(
            "trace {raw} for {:?} is not a non-negative multiple of its automorphism order {order}",
            ct
        )));
    }
    Ok((raw / order) as u64)
}

fn check_class(g: &ColoredGraph, ct: &ColoredTriadClass) -> Result<()> {
    let k = g.color_count();
    if let Some(&c) = ct.triplet.iter().find(|&&c| c >= k) {
        return Err(Error::ColorIndex { index: c, k });
    }
    if !g.directed() && !ct.class.is_undirected() {
        return Err(Error::Invalid(format!(
            "class {} does not occur in undirected graphs",
            ct.class
        )));
    }
    if canonicalize(ct.class, ct.triplet) != *ct {
        return Err(Error::Invalid(format!("{ct:?} is not canonical")));
    }
    Ok(())
}

/// Number of triads of one canonical colored class.
pub fn triad_count(g: &ColoredGraph, dm: &DerivedMatrices, ct: &ColoredTriadClass) -> Result<u64> {
    check_class(g, ct)?;
    count_class(&SparseStore::new(dm), dm, ct)
}

fn count_all<S: RelationStore>(
    store: &S,
    dm: &DerivedMatrices,
    table: &ClassTable,
) -> Result<Vec<u64>> {
    table
        .classes()
        .par_iter()
        .map(|ct| count_class(store, dm, ct))
        .collect()
}

/// Full colored triad census. Work is spread over the current rayon pool;
/// the result does not depend on its size.
pub fn census(g: &ColoredGraph, backend: Backend) -> Result<CensusResult> {
    let table = class_table(g.color_count(), g.directed());
    census_with_table(g, backend, table)
}

/// [`census`] on a dedicated pool of `threads` workers.
pub fn census_with_threads(
    g: &ColoredGraph,
    backend: Backend,
    threads: usize,
) -> Result<CensusResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    pool.install(|| census(g, backend))
}

pub(crate) fn census_with_table(
    g: &ColoredGraph,
    backend: Backend,
    table: Arc<ClassTable>,
) -> Result<CensusResult> {
    let dm = derive_matrices(g);
    let counts = match backend.resolve(g.node_count()) {
        BackendKind::DenseBitset => count_all(&DenseStore::new(&dm)?, &dm, &table)?,
        _ => count_all(&SparseStore::new(&dm), &dm, &table)?,
    };
    CensusResult::new(g, table, counts)
}

/// Classifies the triad on three distinct nodes; argument order is
/// irrelevant.
pub fn classify_triple(g: &ColoredGraph, i: usize, j: usize, l: usize) -> ColoredTriadClass {
    debug_assert!(i != j && j != l && l != i);
    for [a, b, c] in [
        [i, j, l],
        [i, l, j],
        [j, i, l],
        [j, l, i],
        [l, i, j],
        [l, j, i],
    ] {
        let states = [g.dyad_state(a, b), g.dyad_state(b, c), g.dyad_state(c, a)];
        if let Some(class) = crate::isoclass::template_class(states) {
            return canonicalize(class, [g.color(a), g.color(b), g.color(c)]);
        }
    }
    unreachable!("every labeled triad matches some class template")
}

/// Counts per canonical colored class, in class-table order.
#[derive(Clone, Debug)]
pub struct CensusResult {
    n: usize,
    directed: bool,
    labels: Vec<String>,
    table: Arc<ClassTable>,
    counts: Vec<u64>,
}

pub(crate) fn choose3(n: usize) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

impl CensusResult {
    /// Wraps counts aligned with `table`; fails unless they sum to `C(n,3)`.
    pub fn new(g: &ColoredGraph, table: Arc<ClassTable>, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != table.len() {
            return Err(Error::Internal(format!(
                "{} counts for {} classes",
                counts.len(),
                table.len()
            )));
        }
        let total: u64 = counts.iter().sum();
        let expected = choose3(g.node_count());
        if total != expected {
            return Err(Error::Internal(format!(
                "census total {total} differs from C(n,3) = {expected}"
            )));
        }
        Ok(CensusResult {
            n: g.node_count(),
            directed: g.directed(),
            labels: g.labels().to_vec(),
            table,
            counts,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> usize {
        self.labels.len()
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classes(&self) -> &[ColoredTriadClass] {
        self.table.classes()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Count of a colored class; non-canonical triplets are canonicalized.
    pub fn get(&self, ct: &ColoredTriadClass) -> Option<u64> {
        let ct = canonicalize(ct.class, ct.triplet);
        self.table.position(&ct).map(|i| self.counts[i])
    }

    pub fn get_by_name(&self, name: &str) -> Option<u64> {
        let ct = ColoredTriadClass::parse(name, &self.labels).ok()?;
        self.get(&ct)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ColoredTriadClass, u64)> {
        self.table.classes().iter().zip(self.counts.iter().copied())
    }

    /// Counts summed over colorings: the uncolored triad census.
    pub fn by_class(&self) -> BTreeMap<TriadClass, u64> {
        let mut out: BTreeMap<TriadClass, u64> = TriadClass::all(self.directed)
            .iter()
            .map(|&c| (c, 0))
            .collect();
        for (ct, n) in self.iter() {
            *out.entry(ct.class).or_default() += n;
        }
        out
    }

    /// CSV with columns `class,triplet,count`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["class", "triplet", "count"]).map_err(csv_err)?;
        for (ct, n) in self.iter() {
            wr.write_record([
                ct.class.name().to_string(),
                ct.triplet_name(&self.labels),
                n.to_string(),
            ])
            .map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts: Vec<_> = self
            .iter()
            .map(|(ct, n)| {
                json!({
                    "class": ct.class.name(),
                    "triplet": ct.triplet_name(&self.labels),
                    "count": n,
                })
            })
            .collect();
        json!({
            "n": self.n,
            "k": self.labels.len(),
            "directed": self.directed,
            "labels": self.labels,
            "total": self.total(),
            "counts": counts,
        })
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Stream(io),
        other => Error::Internal(format!("csv: {other:?}")),
    }
}

impl PartialEq for CensusResult {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.directed == other.directed
            && self.labels == other.labels
            && self.table.classes() == other.table.classes()
            && self.counts == other.counts
    }
}

impl Eq for CensusResult {}
