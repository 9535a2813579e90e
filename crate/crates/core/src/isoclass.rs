//! Triad isomorphism classes and their colored refinements.
//!
//! Every triad is drawn in a fixed orientation: position 0 is the top node,
//! positions 1 and 2 follow clockwise. A class is described by the dyad
//! states of the three clockwise pairs `(0,1)`, `(1,2)`, `(2,0)`. A colored
//! class pairs a [`TriadClass`] with the colors found at the three positions;
//! colorings that differ by a structural automorphism of the class name the
//! same colored triad, and the lexicographically smallest one is canonical.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};

/// A permutation of the three triad positions; position `p` maps to `perm[p]`.
pub type Permutation = [usize; 3];

const PERMUTATIONS: [Permutation; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// State of the dyad between an ordered pair of positions `(a, b)` taken in
/// clockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DyadState {
    Mutual,
    /// `a -> b` only.
    AsymCw,
    /// `b -> a` only.
    AsymCcw,
    Null,
}

impl DyadState {
    /// The same dyad seen from the other end.
    pub fn reversed(self) -> Self {
        match self {
            DyadState::AsymCw => DyadState::AsymCcw,
            DyadState::AsymCcw => DyadState::AsymCw,
            other => other,
        }
    }

    pub fn from_arcs(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (true, true) => DyadState::Mutual,
            (true, false) => DyadState::AsymCw,
            (false, true) => DyadState::AsymCcw,
            (false, false) => DyadState::Null,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DyadState::Mutual => "mutual",
            DyadState::AsymCw => "asym-cw",
            DyadState::AsymCcw => "asym-ccw",
            DyadState::Null => "null",
        }
    }

    fn code(self) -> usize {
        self as usize
    }
}

/// The 16 MAN triad classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriadClass {
    T003,
    T012,
    T102,
    T021D,
    T021U,
    T021C,
    T111D,
    T111U,
    T030T,
    T030C,
    T201,
    T120D,
    T120U,
    T120C,
    T210,
    T300,
}

use DyadState::{AsymCcw as Ccw, AsymCw as Cw, Mutual as Mu, Null as Nu};

impl TriadClass {
    pub const DIRECTED: [TriadClass; 16] = [
        TriadClass::T003,
        TriadClass::T012,
        TriadClass::T102,
        TriadClass::T021D,
        TriadClass::T021U,
        TriadClass::T021C,
        TriadClass::T111D,
        TriadClass::T111U,
        TriadClass::T030T,
        TriadClass::T030C,
        TriadClass::T201,
        TriadClass::T120D,
        TriadClass::T120U,
        TriadClass::T120C,
        TriadClass::T210,
        TriadClass::T300,
    ];

    /// Classes reachable when every tie is mutual.
    pub const UNDIRECTED: [TriadClass; 4] = [
        TriadClass::T003,
        TriadClass::T102,
        TriadClass::T201,
        TriadClass::T300,
    ];

    pub fn all(directed: bool) -> &'static [TriadClass] {
        if directed {
            &Self::DIRECTED
        } else {
            &Self::UNDIRECTED
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TriadClass::T003 => "003",
            TriadClass::T012 => "012",
            TriadClass::T102 => "102",
            TriadClass::T021D => "021D",
            TriadClass::T021U => "021U",
            TriadClass::T021C => "021C",
            TriadClass::T111D => "111D",
            TriadClass::T111U => "111U",
            TriadClass::T030T => "030T",
            TriadClass::T030C => "030C",
            TriadClass::T201 => "201",
            TriadClass::T120D => "120D",
            TriadClass::T120U => "120U",
            TriadClass::T120C => "120C",
            TriadClass::T210 => "210",
            TriadClass::T300 => "300",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::DIRECTED.iter().copied().find(|c| c.name() == name)
    }

    /// Dyad states of the clockwise pairs `(0,1)`, `(1,2)`, `(2,0)`.
    pub fn dyad_states(self) -> [DyadState; 3] {
        match self {
            TriadClass::T003 => [Nu, Nu, Nu],
            TriadClass::T012 => [Cw, Nu, Nu],
            TriadClass::T102 => [Mu, Nu, Nu],
            // position 1 sends to both others
            TriadClass::T021D => [Ccw, Cw, Nu],
            TriadClass::T021U => [Cw, Ccw, Nu],
            TriadClass::T021C => [Cw, Cw, Nu],
            TriadClass::T111D => [Mu, Ccw, Nu],
            TriadClass::T111U => [Mu, Cw, Nu],
            TriadClass::T030T => [Cw, Cw, Ccw],
            TriadClass::T030C => [Cw, Cw, Cw],
            TriadClass::T201 => [Mu, Mu, Nu],
            TriadClass::T120D => [Ccw, Cw, Mu],
            TriadClass::T120U => [Cw, Ccw, Mu],
            TriadClass::T120C => [Cw, Cw, Mu],
            TriadClass::T210 => [Cw, Mu, Mu],
            TriadClass::T300 => [Mu, Mu, Mu],
        }
    }

    /// Counts of mutual, asymmetric and null dyads.
    pub fn man(self) -> (usize, usize, usize) {
        let states = self.dyad_states();
        let count = |f: fn(&DyadState) -> bool| states.iter().filter(|s| f(s)).count();
        (
            count(|s| *s == Mu),
            count(|s| matches!(s, Cw | Ccw)),
            count(|s| *s == Nu),
        )
    }

    /// State of the dyad from position `a` to position `b`.
    pub fn state_between(self, a: usize, b: usize) -> DyadState {
        debug_assert!(a != b && a < 3 && b < 3);
        let states = self.dyad_states();
        if b == (a + 1) % 3 {
            states[a]
        } else {
            states[b].reversed()
        }
    }

    pub fn is_undirected(self) -> bool {
        Self::UNDIRECTED.contains(&self)
    }
}

impl fmt::Display for TriadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// Permutations of positions that map the class onto itself, identity first.
pub fn structural_automorphisms(class: TriadClass) -> Vec<Permutation> {
    PERMUTATIONS
        .iter()
        .copied()
        .filter(|perm| {
            (0..3).all(|a| {
                (0..3)
                    .filter(|&b| b != a)
                    .all(|b| class.state_between(perm[a], perm[b]) == class.state_between(a, b))
            })
        })
        .collect()
}

fn automorphism_table() -> &'static HashMap<TriadClass, Vec<Permutation>> {
    static TABLE: OnceLock<HashMap<TriadClass, Vec<Permutation>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        TriadClass::DIRECTED
            .iter()
            .map(|&c| (c, structural_automorphisms(c)))
            .collect()
    })
}

pub(crate) fn automorphisms(class: TriadClass) -> &'static [Permutation] {
    &automorphism_table()[&class]
}

fn permute(triplet: [usize; 3], perm: &Permutation) -> [usize; 3] {
    [triplet[perm[0]], triplet[perm[1]], triplet[perm[2]]]
}

/// A triad class together with the colors at its three positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredTriadClass {
    pub class: TriadClass,
    pub triplet: [usize; 3],
}

impl ColoredTriadClass {
    /// `CLASS-l1.l2.l3` with the given color labels.
    pub fn canonical_name<S: AsRef<str>>(&self, labels: &[S]) -> String {
        format!("{}-{}", self.class, self.triplet_name(labels))
    }

    pub fn triplet_name<S: AsRef<str>>(&self, labels: &[S]) -> String {
        let [a, b, c] = self.triplet;
        format!(
            "{}.{}.{}",
            labels[a].as_ref(),
            labels[b].as_ref(),
            labels[c].as_ref()
        )
    }

    /// Inverse of [`canonical_name`](Self::canonical_name). The result is
    /// canonicalized.
    pub fn parse<S: AsRef<str>>(name: &str, labels: &[S]) -> Result<Self> {
        let bad = || Error::Invalid(format!("malformed colored triad name `{name}`"));
        let (class, rest) = name.split_once('-').ok_or_else(bad)?;
        let class = TriadClass::from_name(class).ok_or_else(bad)?;
        let mut triplet = [0; 3];
        let mut parts = rest.split('.');
        for slot in &mut triplet {
            let part = parts.next().ok_or_else(bad)?;
            *slot = labels
                .iter()
                .position(|l| l.as_ref() == part)
                .ok_or_else(bad)?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(canonicalize(class, triplet))
    }

    /// Colored automorphism order: automorphisms of the class that leave the
    /// triplet unchanged. A labeled occurrence of this colored triad is seen
    /// this many times among ordered node assignments.
    pub fn automorphism_order(&self) -> usize {
        automorphisms(self.class)
            .iter()
            .filter(|perm| permute(self.triplet, perm) == self.triplet)
            .count()
    }

    /// Distinct position colorings equivalent to this one.
    pub fn orbit(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = automorphisms(self.class)
            .iter()
            .map(|perm| permute(self.triplet, perm))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of times each color index appears in the triplet.
    pub fn color_multiplicity(&self) -> Vec<(usize, usize)> {
        let mut sorted = self.triplet;
        sorted.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(3);
        for c in sorted {
            match out.last_mut() {
                Some((last, n)) if *last == c => *n += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }
}

/// The orbit representative with the lexicographically smallest triplet.
pub fn canonicalize(class: TriadClass, triplet: [usize; 3]) -> ColoredTriadClass {
    let triplet = automorphisms(class)
        .iter()
        .map(|perm| permute(triplet, perm))
        .min()
        .expect("identity is always an automorphism");
    ColoredTriadClass { class, triplet }
}

fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of colored classes of one triad class with `k` colors available.
pub fn class_count_formula(class: TriadClass, k: usize) -> u64 {
    let k = k as u64;
    let (c3, c2, c1) = (binomial(k, 3), binomial(k, 2), binomial(k, 1));
    use TriadClass::*;
    match class {
        T300 | T003 => c3 + 2 * c2 + c1,
        T030C => 2 * c3 + 2 * c2 + c1,
        T102 | T021D | T021U | T201 | T120D | T120U => 3 * c3 + 4 * c2 + c1,
        T012 | T021C | T111D | T111U | T030T | T120C | T210 => 6 * c3 + 6 * c2 + c1,
    }
}

pub fn total_count(k: usize, directed: bool) -> u64 {
    TriadClass::all(directed)
        .iter()
        .map(|&c| class_count_formula(c, k))
        .sum()
}

/// Every canonical colored class, ordered by triad class then triplet.
pub fn enumerate_classes(k: usize, directed: bool) -> Vec<ColoredTriadClass> {
    let mut out = Vec::with_capacity(total_count(k, directed) as usize);
    for &class in TriadClass::all(directed) {
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let ct = canonicalize(class, [a, b, c]);
                    if ct.triplet == [a, b, c] {
                        out.push(ct);
                    }
                }
            }
        }
    }
    out
}

/// The canonical class list for one `(k, directedness)` with an index.
#[derive(Debug)]
pub struct ClassTable {
    k: usize,
    directed: bool,
    classes: Vec<ColoredTriadClass>,
    index: HashMap<ColoredTriadClass, usize>,
}

impl ClassTable {
    fn from_classes(k: usize, directed: bool, classes: Vec<ColoredTriadClass>) -> Self {
        let index = classes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        ClassTable {
            k,
            directed,
            classes,
            index,
        }
    }

    pub fn build(k: usize, directed: bool) -> Self {
        if k > 10 {
            log::warn!(
                "generating {} colored triad classes for k = {k}",
                total_count(k, directed)
            );
        }
        Self::from_classes(k, directed, enumerate_classes(k, directed))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn classes(&self) -> &[ColoredTriadClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Position of a canonical class in the table.
    pub fn position(&self, ct: &ColoredTriadClass) -> Option<usize> {
        self.index.get(ct).copied()
    }

    fn cache_file(dir: &Path, k: usize, directed: bool) -> PathBuf {
        let kind = if directed { "directed" } else { "undirected" };
        dir.join(format!("classes-k{k}-{kind}.txt"))
    }

    /// Writes the canonical names (color indices as labels) to `dir`.
    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = Self::cache_file(dir, self.k, self.directed);
        let labels = index_labels(self.k);
        let mut text = String::new();
        for ct in &self.classes {
            text.push_str(&ct.canonical_name(&labels));
            text.push('\n');
        }
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Reads a table written by [`save`](Self::save). Returns `Ok(None)` when
    /// no cache file exists; a file that does not match the expected table is
    /// an error.
    pub fn load(dir: &Path, k: usize, directed: bool) -> Result<Option<Self>> {
        let path = Self::cache_file(dir, k, directed);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(&path, e)),
        };
        let labels = index_labels(k);
        let mut classes = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let ct = ColoredTriadClass::parse(line.trim(), &labels)?;
            if ct.canonical_name(&labels) != line.trim() {
                return Err(Error::Invalid(format!(
                    "{}: `{line}` is not canonical",
                    path.display()
                )));
            }
            classes.push(ct);
        }
        if classes.len() as u64 != total_count(k, directed) {
            return Err(Error::Invalid(format!(
                "{}: expected {} classes, found {}",
                path.display(),
                total_count(k, directed),
                classes.len()
            )));
        }
        Ok(Some(Self::from_classes(k, directed, classes)))
    }
}

/// Labels `0`, `1`, ... used when no color names are available.
pub fn index_labels(k: usize) -> Vec<String> {
    (0..k).map(|i| i.to_string()).collect()
}

type TableCache = Mutex<HashMap<(usize, bool), Arc<ClassTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared class table, generated at most once per `(k, directed)`.
pub fn class_table(k: usize, directed: bool) -> Arc<ClassTable> {
    class_table_cached(k, directed, None).expect("in-memory table generation cannot fail")
}

/// Like [`class_table`], also consulting and filling an on-disk cache.
pub fn class_table_cached(
    k: usize,
    directed: bool,
    dir: Option<&Path>,
) -> Result<Arc<ClassTable>> {
    let mut cache = table_cache().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(table) = cache.get(&(k, directed)) {
        return Ok(table.clone());
    }
    let table = match dir {
        Some(dir) => match ClassTable::load(dir, k, directed)? {
            Some(t) => t,
            None => {
                let t = ClassTable::build(k, directed);
                t.save(dir)?;
                t
            }
        },
        None => ClassTable::build(k, directed),
    };
    let table = Arc::new(table);
    cache.insert((k, directed), table.clone());
    Ok(table)
}

/// Template lookup used by the triple classifier: maps the clockwise dyad
/// states of a labeled triple to the class whose template they match exactly.
pub(crate) fn template_class(states: [DyadState; 3]) -> Option<TriadClass> {
    static LOOKUP: OnceLock<[Option<TriadClass>; 64]> = OnceLock::new();
    let table = LOOKUP.get_or_init(|| {
        let mut t = [None; 64];
        for c in TriadClass::DIRECTED {
            t[state_code(c.dyad_states())] = Some(c);
        }
        t
    });
    table[state_code(states)]
}

fn state_code(states: [DyadState; 3]) -> usize {
    states[0].code() * 16 + states[1].code() * 4 + states[2].code()
}
