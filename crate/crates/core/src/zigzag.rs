//! Zigzag diagrams of index pairs and their barcodes.
//!
//! Relative homology of every pair is turned into reduced homology by coning off the exit set
//! with one shared apex. The coned diagram is then written as a sequence of single-simplex
//! insertions and deletions and handed to [`engine`].

pub mod engine;

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{build_complex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::indexpair::{find_r, intersect_pairs, pf_pair, IndexPair};
use crate::mvf::MultivectorField;
use crate::set::SimplexSet;

/// An alternating sequence of index pairs `X1 ⊇ X2 ⊆ X3 ⊇ ...` of odd length. Odd positions
/// (1-based) come from fields, even positions are intersections included into both neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDiagram {
    complex: Arc<SimplicialComplex>,
    positions: Vec<IndexPair>,
}

impl PairDiagram {
    pub fn new(complex: Arc<SimplicialComplex>, positions: Vec<IndexPair>) -> Result<PairDiagram> {
        if positions.len().is_multiple_of(2) {
            return Err(Error::BadDiagram(format!(
                "even length {}",
                positions.len()
            )));
        }
        for (i, pair) in positions.iter().enumerate() {
            if pair.p.universe() != complex.len() || pair.e.universe() != complex.len() {
                return Err(Error::ComplexMismatch);
            }
            if !pair.e.is_subset(&pair.p)
                || !complex.is_closed(&pair.p)
                || !complex.is_closed(&pair.e)
            {
                return Err(Error::BadDiagram(format!(
                    "position {} is not a closed pair",
                    i + 1
                )));
            }
        }
        for k in (1..positions.len()).step_by(2) {
            if !positions[k].is_subpair_of(&positions[k - 1])
                || !positions[k].is_subpair_of(&positions[k + 1])
            {
                return Err(Error::BadDiagram(format!(
                    "position {} is not included in its neighbors",
                    k + 1
                )));
            }
        }
        Ok(PairDiagram { complex, positions })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn positions(&self) -> &[IndexPair] {
        &self.positions
    }

    /// Number of positions, `2n - 1` for `n` fields.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// The zigzag for a fixed neighborhood: push-forward pairs for `inv(N)` under each field,
/// optionally enlarged with `find_r`, interleaved with their intersections.
pub fn build_fixed_diagram(
    fields: &[MultivectorField],
    n: &SimplexSet,
    delta: Option<usize>,
) -> Result<PairDiagram> {
    let first = fields
        .first()
        .ok_or_else(|| Error::BadDiagram("no fields".into()))?;
    let complex = first.complex_arc().clone();
    if !complex.is_closed(n) {
        return Err(Error::NotClosed("N"));
    }
    let mut pairs = Vec::with_capacity(fields.len());
    for (i, f) in fields.iter().enumerate() {
        first.check_same_complex(f)?;
        let pair = fixed_pair(f, n, delta).map_err(|e| Error::at_step(i + 1, e))?;
        pairs.push(pair);
    }
    let mut positions = Vec::with_capacity(2 * fields.len() - 1);
    for i in 0..fields.len() {
        if i > 0 {
            let (mid, _) = intersect_pairs(&fields[i - 1], &pairs[i - 1], &fields[i], &pairs[i])?;
            positions.push(mid);
        }
        positions.push(pairs[i].clone());
    }
    PairDiagram::new(complex, positions)
}

fn fixed_pair(f: &MultivectorField, n: &SimplexSet, delta: Option<usize>) -> Result<IndexPair> {
    let s = f.invariant_part(n);
    if s.is_empty() {
        return Ok(IndexPair::empty(n.universe(), f.name(), Some(n.clone())));
    }
    let pair = pf_pair(f, &s, n)?;
    match delta {
        Some(d) => {
            let r = find_r(f, &s, &pair, d)?;
            Ok(pair.shrink_exit(&r))
        }
        None => Ok(pair),
    }
}

/// A diagram after coning: one complex holding every position, and the subcomplex for each.
#[derive(Clone, Debug)]
pub struct ConedDiagram {
    pub complex: SimplicialComplex,
    pub apex: String,
    pub positions: Vec<SimplexSet>,
}

/// Picks an apex label that is not a vertex of `k`.
fn fresh_apex(k: &SimplicialComplex) -> String {
    let mut apex = String::from("*");
    while k.has_vertex(&apex) {
        apex.push('*');
    }
    apex
}

/// Cones every pair `(P, E)` to `P ∪ ω ∪ ω·E` with one apex `ω`, so that inclusions of pairs
/// become inclusions of subcomplexes of a single complex.
pub fn cone_diagram(diagram: &PairDiagram) -> ConedDiagram {
    let k = diagram.complex();
    let apex = fresh_apex(k);
    let mut used_p = k.empty_set();
    let mut used_e = k.empty_set();
    for pair in diagram.positions() {
        used_p.union_with(&pair.p);
        used_e.union_with(&pair.e);
    }
    let mut generators: Vec<Simplex> = used_p.iter().map(|s| k.simplex(s).clone()).collect();
    generators.push(Simplex::new([apex.clone()]).expect("apex label is nonempty"));
    generators.extend(used_e.iter().map(|s| k.simplex(s).coned(&apex)));
    let coned = build_complex(&generators);

    let apex_id = coned.find(&[apex.as_str()]).expect("apex was added");
    let lift: Vec<Option<usize>> = (0..k.len()).map(|s| coned.index_of(k.simplex(s))).collect();
    let lift_cone: Vec<Option<usize>> = (0..k.len())
        .map(|s| {
            if used_e.contains(s) {
                coned.index_of(&k.simplex(s).coned(&apex))
            } else {
                None
            }
        })
        .collect();
    let positions = diagram
        .positions()
        .iter()
        .map(|pair| {
            let mut set = coned.empty_set();
            set.insert(apex_id);
            set.extend(
                pair.p
                    .iter()
                    .map(|s| lift[s].expect("P simplices are lifted")),
            );
            set.extend(
                pair.e
                    .iter()
                    .map(|s| lift_cone[s].expect("E simplices are coned")),
            );
            set
        })
        .collect();
    ConedDiagram {
        complex: coned,
        apex,
        positions,
    }
}

/// One interval: a class of dimension `dim` alive over positions `birth..=death` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: usize,
    pub death: usize,
}

impl Bar {
    /// Field index of the birth: a bar born at an intersection is credited to the next field.
    pub fn birth_step(&self) -> usize {
        self.birth / 2 + 1
    }

    /// Field index of the death: a bar dying at an intersection is credited to the previous
    /// field.
    pub fn death_step(&self) -> usize {
        self.death.div_ceil(2)
    }

    pub fn covers(&self, i: usize, j: usize) -> bool {
        self.birth <= i && j <= self.death
    }
}

/// The interval decomposition of a zigzag module over positions `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Barcode {
    pub len: usize,
    pub bars: Vec<Bar>,
}

impl Barcode {
    /// Bars of dimension `p`.
    pub fn in_dim(&self, p: usize) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.dim == p)
    }

    /// Number of dimension-`p` bars covering all of `i..=j`, the rank of the module restricted
    /// to that range.
    pub fn rank_at(&self, i: usize, j: usize, p: usize) -> Result<usize> {
        if i < 1 || i > j || j > self.len {
            return Err(Error::OutOfRange {
                i,
                j,
                len: self.len,
            });
        }
        Ok(self.in_dim(p).filter(|b| b.covers(i, j)).count())
    }
}

/// Free-function form of [`Barcode::rank_at`].
pub fn rank_at(barcode: &Barcode, i: usize, j: usize, p: usize) -> Result<usize> {
    barcode.rank_at(i, j, p)
}

/// Order of simplex operations within each arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperationOrder {
    /// By dimension, then by simplex index.
    Canonical,
    /// By dimension, shuffled within a dimension.
    Shuffled(u64),
}

pub fn zigzag_barcode(diagram: &PairDiagram) -> Result<Barcode> {
    zigzag_barcode_with_order(diagram, OperationOrder::Canonical)
}

/// Barcode of the reduced homology of the coned diagram, equal to the barcode of the relative
/// homology of the pairs.
pub fn zigzag_barcode_with_order(diagram: &PairDiagram, order: OperationOrder) -> Result<Barcode> {
    let coned = cone_diagram(diagram);
    let k = &coned.complex;
    let mut rng = match order {
        OperationOrder::Canonical => None,
        OperationOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };

    let mut ops: Vec<engine::Op> = Vec::new();
    let mut block_ends: Vec<usize> = Vec::with_capacity(coned.positions.len());
    let mut current = k.empty_set();
    for target in &coned.positions {
        let mut removed: Vec<usize> = current.difference(target).to_vec();
        let mut added: Vec<usize> = target.difference(&current).to_vec();
        arrange(k, &mut removed, true, rng.as_mut());
        arrange(k, &mut added, false, rng.as_mut());
        ops.extend(removed.into_iter().map(engine::Op::Delete));
        ops.extend(added.into_iter().map(engine::Op::Insert));
        block_ends.push(ops.len());
        current = target.clone();
    }

    let raw = engine::simplexwise_bars(k, &ops)?;
    let len = coned.positions.len();
    let mut bars: Vec<Bar> = Vec::new();
    for (dim, b, d) in raw {
        let covered: Vec<usize> = (0..len)
            .filter(|&i| b <= block_ends[i] && block_ends[i] <= d)
            .collect();
        if let (Some(&lo), Some(&hi)) = (covered.first(), covered.last()) {
            bars.push(Bar {
                dim,
                birth: lo + 1,
                death: hi + 1,
            });
        }
    }
    let apex_bar = bars
        .iter()
        .position(|b| b.dim == 0 && b.birth == 1 && b.death == len)
        .ok_or_else(|| Error::BadDiagram("no dimension-0 bar spans the diagram".into()))?;
    bars.remove(apex_bar);
    bars.sort();
    Ok(Barcode { len, bars })
}

/// Sorts by dimension (descending for deletions) and by index or a random permutation within a
/// dimension.
fn arrange(
    k: &SimplicialComplex,
    simplices: &mut [usize],
    descending: bool,
    rng: Option<&mut ChaCha8Rng>,
) {
    if let Some(rng) = rng {
        simplices.shuffle(rng);
        simplices.sort_by_key(|&s| k.simplex(s).dim());
    } else {
        simplices.sort_by_key(|&s| (k.simplex(s).dim(), s));
    }
    if descending {
        simplices.reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::mvf::tests::{w1, w2};

    fn pair(p: SimplexSet, e: SimplexSet) -> IndexPair {
        IndexPair::new(p, e, "f", None)
    }

    #[test]
    fn constant_critical_triangle() {
        let f = w2();
        let k = f.complex_arc().clone();
        let abc = set(&k, &["a b c"]);
        let x = pair(k.full_set(), k.mouth(&abc));
        for n in 1..4 {
            let d = PairDiagram::new(k.clone(), vec![x.clone(); 2 * n - 1]).unwrap();
            let bc = zigzag_barcode(&d).unwrap();
            assert_eq!(
                bc.bars,
                vec![Bar {
                    dim: 2,
                    birth: 1,
                    death: 2 * n - 1
                }]
            );
        }
    }

    #[test]
    fn empty_middle_splits_bars() {
        let k = Arc::new(triangle());
        let full = pair(k.full_set(), k.empty_set());
        let empty = pair(k.empty_set(), k.empty_set());
        let d = PairDiagram::new(k, vec![full.clone(), empty, full]).unwrap();
        let bc = zigzag_barcode(&d).unwrap();
        assert_eq!(
            bc.bars,
            vec![
                Bar {
                    dim: 0,
                    birth: 1,
                    death: 1
                },
                Bar {
                    dim: 0,
                    birth: 3,
                    death: 3
                }
            ]
        );
    }

    #[test]
    fn circle_class_through_an_intersection() {
        let k = Arc::new(circle());
        let full = pair(k.full_set(), k.empty_set());
        let arc = pair(k.closure(&set(&k, &["a b", "b c"])), k.empty_set());
        let d = PairDiagram::new(k, vec![full.clone(), arc, full]).unwrap();
        let bc = zigzag_barcode(&d).unwrap();
        assert_eq!(
            bc.bars,
            vec![
                Bar {
                    dim: 0,
                    birth: 1,
                    death: 3
                },
                Bar {
                    dim: 1,
                    birth: 1,
                    death: 1
                },
                Bar {
                    dim: 1,
                    birth: 3,
                    death: 3
                }
            ]
        );
    }

    #[test]
    fn rank_queries() {
        let bc = Barcode {
            len: 5,
            bars: vec![
                Bar {
                    dim: 0,
                    birth: 1,
                    death: 3,
                },
                Bar {
                    dim: 2,
                    birth: 3,
                    death: 5,
                },
            ],
        };
        assert_eq!(bc.rank_at(1, 3, 0).unwrap(), 1);
        assert_eq!(bc.rank_at(1, 4, 0).unwrap(), 0);
        assert_eq!(bc.rank_at(3, 3, 2).unwrap(), 1);
        assert!(matches!(bc.rank_at(0, 2, 0), Err(Error::OutOfRange { .. })));
        assert!(matches!(bc.rank_at(3, 2, 0), Err(Error::OutOfRange { .. })));
        assert!(matches!(bc.rank_at(1, 6, 0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn step_labels() {
        let b = Bar {
            dim: 0,
            birth: 2,
            death: 4,
        };
        assert_eq!((b.birth_step(), b.death_step()), (2, 2));
        let b = Bar {
            dim: 0,
            birth: 1,
            death: 5,
        };
        assert_eq!((b.birth_step(), b.death_step()), (1, 3));
    }

    #[test]
    fn cone_matches_relative_homology() {
        let f = w1();
        let k = f.complex_arc().clone();
        let p = k.full_set();
        let e = set(&k, &["a"]);
        let d = PairDiagram::new(k.clone(), vec![pair(p.clone(), e.clone())]).unwrap();
        let coned = cone_diagram(&d);
        let sub: Vec<Simplex> = coned.positions[0]
            .iter()
            .map(|s| coned.complex.simplex(s).clone())
            .collect();
        let c = build_complex(&sub);
        assert!(c
            .reduced_betti()
            .same_ranks(&k.relative_betti(&p, &e).unwrap()));
    }

    #[test]
    fn fixed_diagram_shapes() {
        let f = w2();
        let k = f.complex_arc().clone();
        let d = build_fixed_diagram(std::slice::from_ref(&f), &k.full_set(), None).unwrap();
        assert_eq!(d.len(), 1);
        let d = build_fixed_diagram(&[f.clone(), f.clone()], &k.full_set(), Some(2)).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d
            .positions()
            .iter()
            .all(|x| x.p == d.positions()[0].p && x.e == d.positions()[0].e));
    }

    #[test]
    fn bad_diagrams() {
        let k = Arc::new(triangle());
        let full = pair(k.full_set(), k.empty_set());
        let small = pair(set(&k, &["a"]), k.empty_set());
        assert!(matches!(
            PairDiagram::new(k.clone(), vec![full.clone(), full.clone()]),
            Err(Error::BadDiagram(_))
        ));
        assert!(matches!(
            PairDiagram::new(k.clone(), vec![small.clone(), full.clone(), small]),
            Err(Error::BadDiagram(_))
        ));
        let open = pair(set(&k, &["a b"]), k.empty_set());
        assert!(matches!(
            PairDiagram::new(k, vec![open]),
            Err(Error::BadDiagram(_))
        ));
    }
}
