//! Brute-force census over every unordered node triple.
//!
//! Shares only the triple classifier with the matrix engine. Intended for
//! graphs of a few hundred nodes at most.

use rayon::prelude::*;

use crate::census::{classify_triple, CensusResult};
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::isoclass::class_table;

pub fn brute_force_census(g: &ColoredGraph) -> Result<CensusResult> {
    let table = class_table(g.color_count(), g.directed());
    let n = g.node_count();
    let counts = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = vec![0u64; table.len()];
            for j in i + 1..n {
                for l in j + 1..n {
                    let ct = classify_triple(g, i, j, l);
                    let slot = table.position(&ct).ok_or_else(|| {
                        Error::Internal(format!("classified {ct:?} is not in the class table"))
                    })?;
                    local[slot] += 1;
                }
            }
            Ok::<_, Error>(local)
        })
        .try_reduce(
            || vec![0u64; table.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    CensusResult::new(g, table, counts)
}
