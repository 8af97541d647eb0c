//! Index pairs: construction from closure and mouth or by push forward, validation in the plain,
//! in-N and strong senses, intersection and union, and enlargement of `P \ E` by removing
//! regular vectors from `E`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mvf::{intersect_fields, MultivectorField};
use crate::set::SimplexSet;
use crate::tracking::delta_collar;

/// A pair `E ⊆ P` of closed sets, tagged with the name of the field it was built for and, for
/// pairs in a neighborhood, that neighborhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPair {
    pub p: SimplexSet,
    pub e: SimplexSet,
    pub field: String,
    pub n: Option<SimplexSet>,
}

impl IndexPair {
    pub fn new(
        p: SimplexSet,
        e: SimplexSet,
        field: impl Into<String>,
        n: Option<SimplexSet>,
    ) -> Self {
        IndexPair {
            p,
            e,
            field: field.into(),
            n,
        }
    }

    /// The empty pair over a complex with `universe` simplices.
    pub fn empty(universe: usize, field: impl Into<String>, n: Option<SimplexSet>) -> Self {
        IndexPair::new(
            SimplexSet::empty(universe),
            SimplexSet::empty(universe),
            field,
            n,
        )
    }

    /// `P \ E`.
    pub fn difference(&self) -> SimplexSet {
        self.p.difference(&self.e)
    }

    /// The pair `(P, E \ R)`.
    pub fn shrink_exit(&self, r: &SimplexSet) -> IndexPair {
        IndexPair {
            e: self.e.difference(r),
            ..self.clone()
        }
    }

    /// Componentwise inclusion of both sets.
    pub fn is_subpair_of(&self, other: &IndexPair) -> bool {
        self.p.is_subset(&other.p) && self.e.is_subset(&other.e)
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Which definition a pair is validated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Plain,
    InN,
    Strong,
}

/// The first condition a pair fails, with a witness simplex where one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairViolation {
    ENotInP,
    PNotClosed,
    ENotClosed,
    MissingN,
    NNotClosed,
    PNotInN,
    /// `F(E) ∩ P ⊆ E` fails.
    ExitLeaks(String),
    /// `F(P \ E) ⊆ P` fails.
    EscapesP(String),
    /// `F(P) ∩ N ⊆ P` fails.
    PNotForwardClosed(String),
    /// `F(E) ∩ N ⊆ E` fails.
    ENotForwardClosed(String),
    /// `F(P \ E) ⊆ N` fails.
    EscapesN(String),
    /// `inv(P \ E)` differs from `S`.
    WrongInvariantSet,
    /// A simplex of `E` is not reachable from `S` inside `P`.
    Unreachable(String),
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairViolation::ENotInP => write!(f, "E is not contained in P"),
            PairViolation::PNotClosed => write!(f, "P is not closed"),
            PairViolation::ENotClosed => write!(f, "E is not closed"),
            PairViolation::MissingN => write!(f, "no neighborhood N attached"),
            PairViolation::NNotClosed => write!(f, "N is not closed"),
            PairViolation::PNotInN => write!(f, "P is not contained in N"),
            PairViolation::ExitLeaks(s) => write!(f, "F(E) ∩ P ⊄ E at [{s}]"),
            PairViolation::EscapesP(s) => write!(f, "F(P \\ E) ⊄ P at [{s}]"),
            PairViolation::PNotForwardClosed(s) => write!(f, "F(P) ∩ N ⊄ P at [{s}]"),
            PairViolation::ENotForwardClosed(s) => write!(f, "F(E) ∩ N ⊄ E at [{s}]"),
            PairViolation::EscapesN(s) => write!(f, "F(P \\ E) ⊄ N at [{s}]"),
            PairViolation::WrongInvariantSet => write!(f, "inv(P \\ E) differs from S"),
            PairViolation::Unreachable(s) => write!(f, "[{s}] in E is unreachable from S inside P"),
        }
    }
}

/// `pf_N(A)`: `A` together with everything reachable from it by a path in `N`.
pub fn push_forward(
    field: &MultivectorField,
    a: &SimplexSet,
    n: &SimplexSet,
) -> Result<SimplexSet> {
    check_inside(field, a, n)?;
    Ok(field.forward_reach(a, n))
}

/// `pb_N(A)`: everything in `N` with a path in `N` into `A`.
pub fn push_backward(
    field: &MultivectorField,
    a: &SimplexSet,
    n: &SimplexSet,
) -> Result<SimplexSet> {
    check_inside(field, a, n)?;
    Ok(field.backward_reach(a, n))
}

fn check_inside(field: &MultivectorField, a: &SimplexSet, n: &SimplexSet) -> Result<()> {
    if !a.is_subset(n) {
        return Err(Error::NotSubset("A", "N"));
    }
    if !field.complex().is_closed(n) {
        return Err(Error::NotClosed("N"));
    }
    Ok(())
}

/// The saturated pair `(cl S, mo S)`.
pub fn cl_mo_pair(field: &MultivectorField, s: &SimplexSet) -> Result<IndexPair> {
    if field.invariant_part(s) != *s {
        return Err(Error::NotInvariant);
    }
    let k = field.complex();
    Ok(IndexPair::new(k.closure(s), k.mouth(s), field.name(), None))
}

/// `(pf_N(cl S), pf_N(mo S))`, a strong index pair for `S` in `N`.
pub fn pf_pair(field: &MultivectorField, s: &SimplexSet, n: &SimplexSet) -> Result<IndexPair> {
    if !field.is_isolating(n, s)? {
        return Err(Error::NotIsolated);
    }
    let k = field.complex();
    let p = field.forward_reach(&k.closure(s), n);
    let e = field.forward_reach(&k.mouth(s), n);
    Ok(IndexPair::new(p, e, field.name(), Some(n.clone())))
}

fn first_outside(
    field: &MultivectorField,
    from: &SimplexSet,
    allowed: &SimplexSet,
    within: Option<&SimplexSet>,
) -> Option<String> {
    let k = field.complex();
    for s in from.iter() {
        for t in field.successors(s) {
            if within.is_some_and(|n| !n.contains(t)) {
                continue;
            }
            if !allowed.contains(t) {
                return Some(k.simplex(s).to_string());
            }
        }
    }
    None
}

/// Checks `pair` against the requested definition and reports the first failed condition.
pub fn validate_index_pair(
    field: &MultivectorField,
    pair: &IndexPair,
    s: &SimplexSet,
    mode: Mode,
) -> std::result::Result<(), PairViolation> {
    let k = field.complex();
    if !pair.e.is_subset(&pair.p) {
        return Err(PairViolation::ENotInP);
    }
    if !k.is_closed(&pair.p) {
        return Err(PairViolation::PNotClosed);
    }
    if !k.is_closed(&pair.e) {
        return Err(PairViolation::ENotClosed);
    }
    let diff = pair.difference();
    match mode {
        Mode::Plain => {
            if let Some(w) = first_outside(field, &pair.e, &pair.e, Some(&pair.p)) {
                return Err(PairViolation::ExitLeaks(w));
            }
            if let Some(w) = first_outside(field, &diff, &pair.p, None) {
                return Err(PairViolation::EscapesP(w));
            }
        }
        Mode::InN | Mode::Strong => {
            let n = pair.n.as_ref().ok_or(PairViolation::MissingN)?;
            if !k.is_closed(n) {
                return Err(PairViolation::NNotClosed);
            }
            if !pair.p.is_subset(n) {
                return Err(PairViolation::PNotInN);
            }
            if let Some(w) = first_outside(field, &pair.p, &pair.p, Some(n)) {
                return Err(PairViolation::PNotForwardClosed(w));
            }
            if let Some(w) = first_outside(field, &pair.e, &pair.e, Some(n)) {
                return Err(PairViolation::ENotForwardClosed(w));
            }
            if let Some(w) = first_outside(field, &diff, n, None) {
                return Err(PairViolation::EscapesN(w));
            }
        }
    }
    if field.invariant_part(&diff) != *s {
        return Err(PairViolation::WrongInvariantSet);
    }
    if mode == Mode::Strong {
        let reach = field.forward_reach(&s.intersection(&pair.p), &pair.p);
        if let Some(t) = pair.e.iter().find(|&t| !reach.contains(t)) {
            return Err(PairViolation::Unreachable(k.simplex(t).to_string()));
        }
    }
    Ok(())
}

pub fn check_index_pair(
    field: &MultivectorField,
    pair: &IndexPair,
    s: &SimplexSet,
    mode: Mode,
) -> bool {
    validate_index_pair(field, pair, s, mode).is_ok()
}

/// `(P1 ∩ P2, E1 ∩ E2)` together with the intersection field it is an index pair under.
pub fn intersect_pairs(
    f1: &MultivectorField,
    pair1: &IndexPair,
    f2: &MultivectorField,
    pair2: &IndexPair,
) -> Result<(IndexPair, MultivectorField)> {
    if pair1.n != pair2.n {
        return Err(Error::NeighborhoodMismatch);
    }
    let field = intersect_fields(f1, f2)?;
    let pair = IndexPair::new(
        pair1.p.intersection(&pair2.p),
        pair1.e.intersection(&pair2.e),
        field.name(),
        pair1.n.clone(),
    );
    Ok((pair, field))
}

/// Whether vector `v` can be dropped from `E` while keeping an index pair: it lies in `E`, is
/// regular, and `E \ V` stays closed.
pub fn removable_regular_vector(field: &MultivectorField, pair: &IndexPair, v: usize) -> bool {
    let members = field.members(v);
    !field.is_critical(v)
        && members.iter().all(|&s| pair.e.contains(s))
        && stays_closed_without(field, &pair.e, members)
}

/// With `a` closed, `a \ V` is closed iff no codimension-one coface of a member of `V` lies in
/// `a \ V`.
fn stays_closed_without(field: &MultivectorField, a: &SimplexSet, members: &[usize]) -> bool {
    let k = field.complex();
    members.iter().all(|&s| {
        k.cofaces(s)
            .iter()
            .all(|&c| !a.contains(c) || members.binary_search(&c).is_ok())
    })
}

/// Simplices of `a` having some coface outside `a`.
fn frontier(field: &MultivectorField, a: &SimplexSet) -> SimplexSet {
    let k = field.complex();
    let mut out = k.empty_set();
    for s in a.iter() {
        if k.star_of(s).iter().any(|&c| !a.contains(c)) {
            out.insert(s);
        }
    }
    out
}

/// Grows `P \ E` by carving regular vectors out of `E` near `S`. Returns `R` such that
/// `(P, E \ R)` is still an index pair for `S` in `N`.
pub fn find_r(
    field: &MultivectorField,
    s: &SimplexSet,
    pair: &IndexPair,
    delta: usize,
) -> Result<SimplexSet> {
    validate_index_pair(field, pair, s, Mode::InN).map_err(Error::InvalidPair)?;
    let k = field.complex();
    let collar = delta_collar(k, s, delta);
    let inner = pair.e.intersection(&collar);
    let de = frontier(field, &pair.e);
    let dp = frontier(field, &pair.p);

    let mut queue: VecDeque<usize> = VecDeque::new();
    for v in 0..field.num_vectors() {
        let m = field.members(v);
        if m.iter().all(|&x| inner.contains(x))
            && m.iter().any(|&x| de.contains(x))
            && m.iter().all(|&x| !dp.contains(x))
        {
            queue.push_back(v);
        }
    }

    let mut r = k.empty_set();
    let mut rest = pair.e.clone();
    while let Some(v) = queue.pop_front() {
        let m = field.members(v);
        if field.is_critical(v)
            || !m.iter().all(|&x| rest.contains(x))
            || !stays_closed_without(field, &rest, m)
        {
            continue;
        }
        for &x in m {
            r.insert(x);
            rest.remove(x);
        }
        let mut mouth: Vec<usize> = Vec::new();
        for &x in m {
            for &f in k.closure_of(x) {
                if m.binary_search(&f).is_err() {
                    mouth.push(field.vector_of(f));
                }
            }
        }
        mouth.sort_unstable();
        mouth.dedup();
        for w in mouth {
            if field.members(w).iter().all(|&x| collar.contains(x)) {
                queue.push_back(w);
            }
        }
    }
    Ok(r)
}

/// `(pf(P ∪ P'), pf(E ∪ E'))` in `N ∪ N'` for two strong pairs of the same `S`.
pub fn union_pf_pair(
    field: &MultivectorField,
    s: &SimplexSet,
    pair1: &IndexPair,
    pair2: &IndexPair,
) -> Result<IndexPair> {
    let n1 = pair1.n.as_ref().ok_or(Error::MissingNeighborhood)?;
    let n2 = pair2.n.as_ref().ok_or(Error::MissingNeighborhood)?;
    let n = n1.union(n2);
    for m in [n1, n2, &n] {
        if !field.is_isolating(m, s)? {
            return Err(Error::NotIsolated);
        }
    }
    let p = field.forward_reach(&pair1.p.union(&pair2.p), &n);
    let e = field.forward_reach(&pair1.e.union(&pair2.e), &n);
    Ok(IndexPair::new(p, e, field.name(), Some(n)))
}
