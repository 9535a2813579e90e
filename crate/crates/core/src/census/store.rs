//! Row access to the dyad relations, sparse and dense-bitset.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{DerivedMatrices, Relation};

/// Read-only row queries over the color-grouped node order. `cols` is always
/// a color range.
pub(crate) trait RelationStore: Sync {
    fn for_each_in_row<F: FnMut(usize)>(&self, rel: Relation, row: usize, cols: &Range<usize>, f: F);

    /// `Σ x[j - cols.start]` over the row's entries `j` in `cols`.
    fn row_sum(&self, rel: Relation, row: usize, cols: &Range<usize>, x: &[i64]) -> i64 {
        let mut sum = 0;
        self.for_each_in_row(rel, row, cols, |j| sum += x[j - cols.start]);
        sum
    }

    /// `|row_i(a) ∩ row_j(b) ∩ cols|`.
    fn common(&self, a: Relation, i: usize, b: Relation, j: usize, cols: &Range<usize>) -> u64;
}

pub(crate) struct SparseStore<'a> {
    dm: &'a DerivedMatrices,
}

impl<'a> SparseStore<'a> {
    pub(crate) fn new(dm: &'a DerivedMatrices) -> Self {
        SparseStore { dm }
    }
}

impl RelationStore for SparseStore<'_> {
    fn for_each_in_row<F: FnMut(usize)>(
        &self,
        rel: Relation,
        row: usize,
        cols: &Range<usize>,
        mut f: F,
    ) {
        for &t in self.dm.csr(rel).row_in(row, cols) {
            f(t as usize);
        }
    }

    fn row_sum(&self, rel: Relation, row: usize, cols: &Range<usize>, x: &[i64]) -> i64 {
        self.dm
            .csr(rel)
            .row_in(row, cols)
            .iter()
            .map(|&t| x[t as usize - cols.start])
            .sum()
    }

    fn common(&self, a: Relation, i: usize, b: Relation, j: usize, cols: &Range<usize>) -> u64 {
        let xs = self.dm.csr(a).row_in(i, cols);
        let ys = self.dm.csr(b).row_in(j, cols);
        let (mut p, mut q, mut n) = (0, 0, 0);
        while p < xs.len() && q < ys.len() {
            match xs[p].cmp(&ys[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    p += 1;
                    q += 1;
                }
            }
        }
        n
    }
}

/// Upper bound on the bitset storage the dense backend will allocate.
pub const DENSE_MAX_BYTES: usize = 1 << 30;

pub(crate) struct DenseStore {
    words: usize,
    bits: [Vec<u64>; 4],
}

fn slot(rel: Relation) -> usize {
    match rel {
        Relation::Mutual => 0,
        Relation::Asym => 1,
        Relation::AsymT => 2,
        Relation::Sym => 3,
    }
}

/// Bits of word `w` that fall inside `cols`.
fn word_mask(w: usize, cols: &Range<usize>) -> u64 {
    let mut mask = u64::MAX;
    if w == cols.start / 64 {
        mask &= u64::MAX << (cols.start % 64);
    }
    if w == (cols.end - 1) / 64 && !cols.end.is_multiple_of(64) {
        mask &= (1u64 << (cols.end % 64)) - 1;
    }
    mask
}

impl DenseStore {
    pub(crate) fn new(dm: &DerivedMatrices) -> Result<Self> {
        let n = dm.node_count();
        let words = n.div_ceil(64);
        let bytes = 4 * n * words * 8;
        if bytes > DENSE_MAX_BYTES {
            return Err(Error::Backend(format!(
                "dense backend would need {} MiB for {n} nodes; use the sparse backend",
                bytes >> 20
            )));
        }
        let build = |rel: Relation| {
            let mut v = vec![0u64; n * words];
            let csr = dm.csr(rel);
            for i in 0..n {
                for &t in csr.row(i) {
                    let t = t as usize;
                    v[i * words + t / 64] |= 1 << (t % 64);
                }
            }
            v
        };
        Ok(DenseStore {
            words,
            bits: [
                build(Relation::Mutual),
                build(Relation::Asym),
                build(Relation::AsymT),
                build(Relation::Sym),
            ],
        })
    }

    fn row(&self, rel: Relation, i: usize) -> &[u64] {
        &self.bits[slot(rel)][i * self.words..(i + 1) * self.words]
    }
}

impl RelationStore for DenseStore {
    fn for_each_in_row<F: FnMut(usize)>(
        &self,
        rel: Relation,
        row: usize,
        cols: &Range<usize>,
        mut f: F,
    ) {
        if cols.is_empty() {
            return;
        }
        let first = cols.start / 64;
        let words = &self.row(rel, row)[first..=(cols.end - 1) / 64];
        for (w, &bits) in (first..).zip(words) {
            let mut word = bits & word_mask(w, cols);
            while word != 0 {
                f(w * 64 + word.trailing_zeros() as usize);
                word &= word - 1;
            }
        }
    }

    fn common(&self, a: Relation, i: usize, b: Relation, j: usize, cols: &Range<usize>) -> u64 {
        if cols.is_empty() {
            return 0;
        }
        let (x, y) = (self.row(a, i), self.row(b, j));
        (cols.start / 64..=(cols.end - 1) / 64)
            .map(|w| (x[w] & y[w] & word_mask(w, cols)).count_ones() as u64)
            .sum()
    }
}
