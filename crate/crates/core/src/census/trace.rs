//! `Tr(B01 · B12 · B20)` over color-masked dyad relations.
//!
//! Each factor is the dyad relation for one clockwise pair of the triad,
//! restricted to rows of the first position's color and columns of the
//! second's. A null dyad expands to `J − I − E` on its color block, so the
//! trace becomes a signed sum of products of three atoms: a stored sparse
//! relation, the all-ones block `J`, or the identity block `I`. Products
//! containing `J` are rank one and reduce to matrix-vector chains; the rest
//! are evaluated entry by entry with row intersections.

use std::ops::Range;

use super::store::RelationStore;
use crate::graph::{DerivedMatrices, Relation};
use crate::isoclass::{ColoredTriadClass, DyadState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Atom {
    Rel(Relation),
    Ones,
    Ident,
}

/// Signed atoms summing to the relation of a dyad state.
pub(crate) fn expand(state: DyadState) -> &'static [(i64, Atom)] {
    match state {
        DyadState::Mutual => &[(1, Atom::Rel(Relation::Mutual))],
        DyadState::AsymCw => &[(1, Atom::Rel(Relation::Asym))],
        DyadState::AsymCcw => &[(1, Atom::Rel(Relation::AsymT))],
        DyadState::Null => &[
            (1, Atom::Ones),
            (-1, Atom::Ident),
            (-1, Atom::Rel(Relation::Sym)),
        ],
    }
}

/// Raw trace for one colored class: the number of ordered node assignments
/// realizing it.
pub(crate) fn raw_trace<S: RelationStore>(
    store: &S,
    dm: &DerivedMatrices,
    ct: &ColoredTriadClass,
) -> i64 {
    let states = ct.class.dyad_states();
    let ranges = ct.triplet.map(|c| dm.color_range(c));
    let mut total = 0;
    for &(c0, a0) in expand(states[0]) {
        for &(c1, a1) in expand(states[1]) {
            for &(c2, a2) in expand(states[2]) {
                let term = trace3(store, [a0, a1, a2], ranges.clone());
                total += c0 * c1 * c2 * term;
            }
        }
    }
    total
}

fn rotate<T>(mut v: [T; 3], by: usize) -> [T; 3] {
    v.rotate_left(by);
    v
}

fn rel(atom: Atom) -> Relation {
    match atom {
        Atom::Rel(r) => r,
        other => unreachable!("expected a stored relation, got {other:?}"),
    }
}

/// Trace of three atoms; factor `t` spans rows `ranges[t]` and columns
/// `ranges[(t + 1) % 3]`.
fn trace3<S: RelationStore>(store: &S, atoms: [Atom; 3], ranges: [Range<usize>; 3]) -> i64 {
    for t in 0..3 {
        if atoms[t] == Atom::Ident && ranges[t] != ranges[(t + 1) % 3] {
            return 0;
        }
    }
    if let Some(t) = atoms.iter().position(|&a| a == Atom::Ones) {
        return ones_chain(store, rotate(atoms, t), rotate(ranges, t));
    }
    match atoms.iter().filter(|&&a| a == Atom::Ident).count() {
        3 => ranges[0].len() as i64,
        // Tr(I I S) is the diagonal of S, which is empty
        2 => 0,
        1 => {
            let t = atoms.iter().position(|&a| a == Atom::Ident).unwrap();
            let [_, y, z] = rotate(atoms, t);
            let [r0, _, r2] = rotate(ranges, t);
            let (y, zt) = (rel(y), rel(z).transpose());
            r0.map(|i| store.common(y, i, zt, i, &r2) as i64).sum()
        }
        _ => {
            let [x, y, z] = atoms.map(rel);
            let zt = z.transpose();
            let [r0, r1, r2] = ranges;
            let mut sum = 0i64;
            for i in r0 {
                store.for_each_in_row(x, i, &r1, |j| {
                    sum += store.common(y, j, zt, i, &r2) as i64;
                });
            }
            sum
        }
    }
}

/// `Tr(J Y Z) = 1ᵀ Y Z 1`, evaluated right to left.
fn ones_chain<S: RelationStore>(store: &S, atoms: [Atom; 3], ranges: [Range<usize>; 3]) -> i64 {
    let [_, y, z] = atoms;
    let [r0, r1, r2] = ranges;
    let w = vec![1i64; r0.len()];
    let v = matvec(store, z, &r2, &r0, &w);
    let u = matvec(store, y, &r1, &r2, &v);
    u.iter().sum()
}

fn matvec<S: RelationStore>(
    store: &S,
    atom: Atom,
    rows: &Range<usize>,
    cols: &Range<usize>,
    x: &[i64],
) -> Vec<i64> {
    match atom {
        Atom::Ones => vec![x.iter().sum(); rows.len()],
        Atom::Ident if rows == cols => x.to_vec(),
        Atom::Ident => vec![0; rows.len()],
        Atom::Rel(r) => rows.clone().map(|p| store.row_sum(r, p, cols, x)).collect(),
    }
}
