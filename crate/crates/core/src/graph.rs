//! Colored graphs, edge/color list loading and the derived dyad relations.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::ops::Range;
use std::path::Path;

use crate::error::{Error, Result};
use crate::isoclass::DyadState;

/// A loop-free graph whose nodes each carry one color.
///
/// Color indices follow the sorted order of the color labels. For an
/// undirected graph every edge is stored in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    directed: bool,
    ids: Vec<String>,
    labels: Vec<String>,
    colors: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl ColoredGraph {
    /// Builds a graph on nodes `0..colors.len()` named by their index.
    pub fn from_labels<S: AsRef<str>>(
        directed: bool,
        colors: &[S],
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        let ids = (0..colors.len()).map(|i| i.to_string()).collect();
        let colors = colors.iter().map(|c| c.as_ref().to_string()).collect();
        Self::with_ids(directed, ids, colors, edges.iter().copied())
    }

    /// Builds a graph from node ids, per-node color labels and index edges.
    pub fn with_ids(
        directed: bool,
        ids: Vec<String>,
        colors: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if ids.len() != colors.len() {
            return Err(Error::Invalid(format!(
                "{} node ids but {} colors",
                ids.len(),
                colors.len()
            )));
        }
        let labels: Vec<String> = colors
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let colors = colors
            .iter()
            .map(|c| labels.binary_search(c).expect("label collected above"))
            .collect();
        Self::from_indexed(directed, ids, labels, colors, edges)
    }

    /// Builds a graph from color indices into `labels` (sorted, unique).
    /// Labels no node uses are dropped so that `k` counts colors present.
    pub fn from_indexed(
        directed: bool,
        ids: Vec<String>,
        labels: Vec<String>,
        colors: Vec<usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = ids.len();
        if colors.len() != n {
            return Err(Error::Invalid(format!(
                "{n} node ids but {} colors",
                colors.len()
            )));
        }
        if !labels.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid("color labels must be sorted and unique".into()));
        }
        let mut used = vec![false; labels.len()];
        for &c in &colors {
            if c >= labels.len() {
                return Err(Error::ColorIndex {
                    index: c,
                    k: labels.len(),
                });
            }
            used[c] = true;
        }
        let mut remap = vec![usize::MAX; labels.len()];
        let mut kept = Vec::new();
        for (i, label) in labels.into_iter().enumerate() {
            if used[i] {
                remap[i] = kept.len();
                kept.push(label);
            }
        }
        let colors = colors.into_iter().map(|c| remap[c]).collect();

        let mut out = vec![Vec::new(); n];
        for (a, b) in edges {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::NodeIndex { index: idx, n });
                }
            }
            if a == b {
                return Err(Error::Invalid(format!("self-loop on node {}", ids[a])));
            }
            out[a].push(b);
            if !directed {
                out[b].push(a);
            }
        }
        for row in &mut out {
            row.sort_unstable();
            row.dedup();
        }
        Ok(ColoredGraph {
            directed,
            ids,
            labels: kept,
            colors,
            out,
        })
    }

    /// Same nodes and colors, different ties.
    pub fn with_edges(&self, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_indexed(
            self.directed,
            self.ids.clone(),
            self.labels.clone(),
            self.colors.clone(),
            edges,
        )
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    /// Number of distinct colors present.
    pub fn color_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn color(&self, node: usize) -> usize {
        self.colors[node]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color_label(&self, node: usize) -> &str {
        &self.labels[self.colors[node]]
    }

    pub fn color_index(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Nodes per color.
    pub fn color_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.labels.len()];
        for &c in &self.colors {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.out[from].binary_search(&to).is_ok()
    }

    /// All stored arcs `(from, to)`; both directions for undirected graphs.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&j| (i, j)))
    }

    /// Ties as listed in an edge file: arcs for directed graphs, `i < j`
    /// pairs for undirected ones.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let directed = self.directed;
        self.arcs().filter(move |&(i, j)| directed || i < j)
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn dyad_state(&self, a: usize, b: usize) -> DyadState {
        DyadState::from_arcs(self.has_arc(a, b), self.has_arc(b, a))
    }

    /// Nodes of color `r`.
    pub fn color_mask(&self, r: usize) -> Result<ColorMask> {
        if r >= self.labels.len() {
            return Err(Error::ColorIndex {
                index: r,
                k: self.labels.len(),
            });
        }
        let members = (0..self.node_count())
            .filter(|&i| self.colors[i] == r)
            .collect();
        Ok(ColorMask { color: r, members })
    }

    /// Applies a node relabeling: node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::Invalid("permutation length mismatch".into()));
        }
        let mut ids = vec![String::new(); n];
        let mut colors = vec![0; n];
        for i in 0..n {
            ids[perm[i]] = self.ids[i].clone();
            colors[perm[i]] = self.colors[i];
        }
        let edges: Vec<_> = self.edges().map(|(a, b)| (perm[a], perm[b])).collect();
        Self::from_indexed(self.directed, ids, self.labels.clone(), colors, edges)
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        for (a, b) in self.edges() {
            writeln!(w, "{} {}", self.ids[a], self.ids[b])?;
        }
        Ok(())
    }

    pub fn write_colors<W: Write>(&self, mut w: W) -> Result<()> {
        for (i, id) in self.ids.iter().enumerate() {
            writeln!(w, "{id} {}", self.color_label(i))?;
        }
        Ok(())
    }
}

/// Splits a data line into fields: whitespace or commas separate; `#` starts
/// a comment. Returns `None` for blank or comment-only lines.
fn fields(line: &str) -> Option<Vec<&str>> {
    let content = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let parts: Vec<&str> = content
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .collect();
    (!parts.is_empty()).then_some(parts)
}

/// Reads an edge list (`src dst` per line) and a color list (`node label`
/// per line). Nodes are ordered as they appear in the color list.
pub fn load_graph<E: BufRead, C: BufRead>(
    edge_text: E,
    color_text: C,
    directed: bool,
) -> Result<ColoredGraph> {
    let mut ids: Vec<String> = Vec::new();
    let mut colors: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();

    for (lineno, line) in color_text.lines().enumerate() {
        let line = line?;
        let line_no = lineno + 1;
        let Some(parts) = fields(&line) else { continue };
        if parts.len() != 2 {
            return Err(Error::Parse {
                input: "colors",
                line: line_no,
                message: format!("expected `node label`, found {} fields", parts.len()),
            });
        }
        let (node, label) = (parts[0], parts[1]);
        match index.get(node) {
            Some(&i) if colors[i] != label => {
                return Err(Error::ConflictingColor {
                    node: node.to_string(),
                    first: colors[i].clone(),
                    second: label.to_string(),
                })
            }
            Some(_) => {}
            None => {
                index.insert(node.to_string(), ids.len());
                ids.push(node.to_string());
                colors.push(label.to_string());
            }
        }
    }

    let mut edges = Vec::new();
    for (lineno, line) in edge_text.lines().enumerate() {
        let line = line?;
        let line_no = lineno + 1;
        let Some(parts) = fields(&line) else { continue };
        if parts.len() != 2 {
            return Err(Error::Parse {
                input: "edges",
                line: line_no,
                message: format!("expected `src dst`, found {} fields", parts.len()),
            });
        }
        if parts[0] == parts[1] {
            return Err(Error::SelfLoop {
                line: line_no,
                node: parts[0].to_string(),
            });
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::MissingColor(id.to_string()))
        };
        edges.push((lookup(parts[0])?, lookup(parts[1])?));
    }

    ColoredGraph::with_ids(directed, ids, colors, edges)
}

/// [`load_graph`] from file paths.
pub fn load_graph_files(
    edges: impl AsRef<Path>,
    colors: impl AsRef<Path>,
    directed: bool,
) -> Result<ColoredGraph> {
    let open = |p: &Path| {
        File::open(p)
            .map(BufReader::new)
            .map_err(|e| Error::io(p, e))
    };
    let (ep, cp) = (edges.as_ref(), colors.as_ref());
    load_graph(open(ep)?, open(cp)?, directed).map_err(|e| match e {
        Error::Stream(source) => Error::io(ep, source),
        other => other,
    })
}

/// The node set of one color. Applied to rows it selects ties leaving nodes
/// of that color; applied to columns, ties arriving at them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMask {
    color: usize,
    members: Vec<usize>,
}

impl ColorMask {
    pub fn color(&self) -> usize {
        self.color
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    /// Keeps the pairs whose row lies in `self` and column in `cols`.
    pub fn sandwich(&self, pairs: &[(usize, usize)], cols: &ColorMask) -> Vec<(usize, usize)> {
        pairs
            .iter()
            .copied()
            .filter(|&(i, j)| self.contains(i) && cols.contains(j))
            .collect()
    }
}

/// Stored dyad relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `M`: mutual ties only.
    Mutual,
    /// `C`: asymmetric ties, in their direction.
    Asym,
    /// `C'`: asymmetric ties, reversed.
    AsymT,
    /// `E`: symmetrized ties.
    Sym,
}

impl Relation {
    pub fn transpose(self) -> Self {
        match self {
            Relation::Asym => Relation::AsymT,
            Relation::AsymT => Relation::Asym,
            other => other,
        }
    }
}

/// Compressed rows over the color-grouped node order.
#[derive(Clone, Debug, Default)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    fn from_rows(rows: &[Vec<u32>]) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut targets = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        offsets.push(0);
        for row in rows {
            targets.extend_from_slice(row);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    pub(crate) fn row(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Part of row `i` whose targets fall in `cols`.
    pub(crate) fn row_in(&self, i: usize, cols: &Range<usize>) -> &[u32] {
        let row = self.row(i);
        let lo = row.partition_point(|&t| (t as usize) < cols.start);
        let hi = row.partition_point(|&t| (t as usize) < cols.end);
        &row[lo..hi]
    }

    pub(crate) fn nnz(&self) -> usize {
        self.targets.len()
    }
}

/// Dyad relations `E`, `M`, `C` and `C'` of a graph. The null relation is the
/// off-diagonal complement of `E` and is only ever queried, never stored.
///
/// Internally nodes are renumbered so that every color occupies a contiguous
/// range; public queries use the graph's node indices.
#[derive(Clone, Debug)]
pub struct DerivedMatrices {
    n: usize,
    order: Vec<usize>,
    position: Vec<usize>,
    color_start: Vec<usize>,
    mutual: Csr,
    asym: Csr,
    asym_t: Csr,
    sym: Csr,
}

pub fn derive_matrices(g: &ColoredGraph) -> DerivedMatrices {
    let n = g.node_count();
    let k = g.color_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (g.color(i), i));
    let mut position = vec![0; n];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p;
    }
    let mut color_start = vec![0; k + 1];
    for &c in g.colors() {
        color_start[c + 1] += 1;
    }
    for c in 0..k {
        color_start[c + 1] += color_start[c];
    }

    let mut mutual = vec![Vec::new(); n];
    let mut asym = vec![Vec::new(); n];
    let mut asym_t = vec![Vec::new(); n];
    let mut sym = vec![Vec::new(); n];
    for (a, b) in g.arcs() {
        let (pa, pb) = (position[a] as u32, position[b] as u32);
        if g.has_arc(b, a) {
            mutual[pa as usize].push(pb);
        } else {
            asym[pa as usize].push(pb);
            asym_t[pb as usize].push(pa);
            sym[pb as usize].push(pa);
        }
        sym[pa as usize].push(pb);
    }
    for rows in [&mut mutual, &mut asym, &mut asym_t, &mut sym] {
        for row in rows.iter_mut() {
            row.sort_unstable();
        }
    }

    DerivedMatrices {
        n,
        order,
        position,
        color_start,
        mutual: Csr::from_rows(&mutual),
        asym: Csr::from_rows(&asym),
        asym_t: Csr::from_rows(&asym_t),
        sym: Csr::from_rows(&sym),
    }
}

impl DerivedMatrices {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> usize {
        self.color_start.len() - 1
    }

    pub(crate) fn csr(&self, rel: Relation) -> &Csr {
        match rel {
            Relation::Mutual => &self.mutual,
            Relation::Asym => &self.asym,
            Relation::AsymT => &self.asym_t,
            Relation::Sym => &self.sym,
        }
    }

    /// Internal position range occupied by color `r`.
    pub(crate) fn color_range(&self, r: usize) -> Range<usize> {
        self.color_start[r]..self.color_start[r + 1]
    }

    pub fn contains(&self, rel: Relation, i: usize, j: usize) -> bool {
        let (pi, pj) = (self.position[i], self.position[j]);
        self.csr(rel).row(pi).binary_search(&(pj as u32)).is_ok()
    }

    /// `Ē[i][j]`: no tie either way between distinct nodes.
    pub fn is_null(&self, i: usize, j: usize) -> bool {
        i != j && !self.contains(Relation::Sym, i, j)
    }

    /// Entries of a stored relation in graph node indices, sorted.
    pub fn pairs(&self, rel: Relation) -> Vec<(usize, usize)> {
        let csr = self.csr(rel);
        let mut out: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|p| {
                csr.row(p)
                    .iter()
                    .map(move |&q| (self.order[p], self.order[q as usize]))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn nnz(&self, rel: Relation) -> usize {
        self.csr(rel).nnz()
    }

    pub fn dyad_state(&self, i: usize, j: usize) -> DyadState {
        if self.contains(Relation::Mutual, i, j) {
            DyadState::Mutual
        } else if self.contains(Relation::Asym, i, j) {
            DyadState::AsymCw
        } else if self.contains(Relation::AsymT, i, j) {
            DyadState::AsymCcw
        } else {
            DyadState::Null
        }
    }
}
