//! Collars, the search for a new isolating neighborhood, and the variable-neighborhood diagram.

use std::sync::Arc;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::indexpair::{
    find_r, intersect_pairs, pf_pair, union_pf_pair, validate_index_pair, IndexPair, Mode,
};
use crate::mvf::MultivectorField;
use crate::set::SimplexSet;
use crate::zigzag::PairDiagram;

/// `C_δ(S)`: `C_0 = cl S`, and `C_δ` is the closure of every simplex with a face in `C_{δ-1}`.
pub fn delta_collar(k: &SimplicialComplex, s: &SimplexSet, delta: usize) -> SimplexSet {
    let mut c = k.closure(s);
    for _ in 0..delta {
        let mut up = c.clone();
        let mut stack: Vec<usize> = c.to_vec();
        while let Some(x) = stack.pop() {
            for &y in k.cofaces(x) {
                if up.insert(y) {
                    stack.push(y);
                }
            }
        }
        let next = k.closure(&up);
        if next == c {
            break;
        }
        c = next;
    }
    c
}

/// Finds a closed `N'` around `S` such that `N ∪ N'` still isolates `S`, by cutting from the
/// collar `C_δ(S)` every simplex whose image leads back into the push backward of `S`.
pub fn find_neighborhood(
    field: &MultivectorField,
    s: &SimplexSet,
    n: &SimplexSet,
    delta: usize,
) -> Result<SimplexSet> {
    if !field.is_isolating(n, s)? {
        return Err(Error::NotIsolated);
    }
    let k = field.complex();
    let pb = field.backward_reach(s, n);
    let collar = delta_collar(k, s, delta);
    let domain = collar.union(n);

    let mut stack: Vec<usize> = Vec::new();
    for x in s.iter() {
        for y in field.fv(x).iter() {
            if !s.contains(y) && domain.contains(y) {
                stack.push(y);
            }
        }
    }
    let mut visited = k.empty_set();
    let mut r = k.empty_set();
    while let Some(v) = stack.pop() {
        if !visited.insert(v) {
            continue;
        }
        let image = field.fv(v);
        if !image.is_disjoint(&pb) {
            r.insert(v);
            r.extend(k.star_of(v));
        } else {
            stack.extend(image.intersection(&domain).iter());
        }
    }

    let out = collar.difference(&r);
    if !k.is_closed(&out) {
        return Err(Error::NotClosed("N'"));
    }
    if !s.is_subset(&out) {
        return Err(Error::NotSubset("S", "N'"));
    }
    if !field.is_isolating(&n.union(&out), s)? {
        return Err(Error::NotIsolated);
    }
    Ok(out)
}

/// Everything computed for one field of the variable-neighborhood scheme.
#[derive(Clone, Debug)]
pub struct TrackStep {
    pub field: String,
    pub s: SimplexSet,
    pub n_prev: SimplexSet,
    pub n_next: SimplexSet,
    pub pair_in_prev: IndexPair,
    pub pair_in_next: IndexPair,
    pub combined_pair: IndexPair,
}

/// How `N_i` is obtained from `N_{i-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborhoodSearch {
    /// Run the collar search.
    Collar,
    /// Keep `N_i = N_{i-1}`.
    Fixed,
}

fn enlarged_pair(
    field: &MultivectorField,
    s: &SimplexSet,
    n: &SimplexSet,
    delta: usize,
) -> Result<IndexPair> {
    let pair = pf_pair(field, s, n)?;
    let r = find_r(field, s, &pair, delta)?;
    Ok(pair.shrink_exit(&r))
}

/// The zigzag of index pairs for a sequence of fields, moving the neighborhood along with the
/// invariant set. Errors carry the 1-based index of the failing step.
pub fn build_track_diagram(
    fields: &[MultivectorField],
    n0: &SimplexSet,
    delta: usize,
    search: NeighborhoodSearch,
) -> Result<(PairDiagram, Vec<TrackStep>)> {
    let first = fields
        .first()
        .ok_or_else(|| Error::BadDiagram("no fields".into()))?;
    let complex: Arc<SimplicialComplex> = first.complex_arc().clone();
    for f in fields {
        first.check_same_complex(f)?;
    }
    if !complex.is_closed(n0) {
        return Err(Error::NotClosed("N0"));
    }
    let count = fields.len();
    let mut steps: Vec<TrackStep> = Vec::with_capacity(count);
    let mut n_prev = n0.clone();
    for (idx, field) in fields.iter().enumerate() {
        let i = idx + 1;
        let step =
            track_one(field, &n_prev, delta, search, i, count).map_err(|e| Error::at_step(i, e))?;
        n_prev = step.n_next.clone();
        steps.push(step);
    }

    let mut positions: Vec<IndexPair> = Vec::with_capacity(2 * count - 1);
    for i in 0..count {
        if i > 0 {
            let (pair, _) = intersect_pairs(
                &fields[i - 1],
                &steps[i - 1].pair_in_next,
                &fields[i],
                &steps[i].pair_in_prev,
            )
            .map_err(|e| Error::at_step(i + 1, e))?;
            positions.push(pair);
        }
        positions.push(steps[i].combined_pair.clone());
    }
    let diagram = PairDiagram::new(complex, positions)?;
    Ok((diagram, steps))
}

fn track_one(
    field: &MultivectorField,
    n_prev: &SimplexSet,
    delta: usize,
    search: NeighborhoodSearch,
    i: usize,
    count: usize,
) -> Result<TrackStep> {
    let k = field.complex();
    let s = field.invariant_part(n_prev);
    if s.is_empty() {
        let empty = IndexPair::empty(k.len(), field.name(), Some(n_prev.clone()));
        return Ok(TrackStep {
            field: field.name().to_string(),
            s,
            n_prev: n_prev.clone(),
            n_next: n_prev.clone(),
            pair_in_prev: empty.clone(),
            pair_in_next: empty.clone(),
            combined_pair: empty,
        });
    }
    let pair_in_prev = enlarged_pair(field, &s, n_prev, delta)?;
    let n_next = match search {
        NeighborhoodSearch::Collar => find_neighborhood(field, &s, n_prev, delta)?,
        NeighborhoodSearch::Fixed => n_prev.clone(),
    };
    let pair_in_next = enlarged_pair(field, &s, &n_next, delta)?;
    let combined_pair = if i == 1 {
        pair_in_next.clone()
    } else if i == count {
        pair_in_prev.clone()
    } else {
        union_pf_pair(field, &s, &pair_in_prev, &pair_in_next)?
    };
    validate_index_pair(field, &combined_pair, &s, Mode::Strong).map_err(Error::InvalidPair)?;
    let index = k.relative_betti(&combined_pair.p, &combined_pair.e)?;
    for pair in [&pair_in_prev, &pair_in_next] {
        let other = k.relative_betti(&pair.p, &pair.e)?;
        if !other.same_ranks(&index) {
            return Err(Error::IndexMismatch(index.0, other.0));
        }
    }
    Ok(TrackStep {
        field: field.name().to_string(),
        s,
        n_prev: n_prev.clone(),
        n_next,
        pair_in_prev,
        pair_in_next,
        combined_pair,
    })
}
