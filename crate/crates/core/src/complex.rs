//! Finite simplicial complexes, the face order, closure and mouth, and relative homology over
//! GF(2).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2;
use crate::set::SimplexSet;

/// A simplex given by its sorted, duplicate-free list of vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<String>,
}

impl Simplex {
    pub fn new<I, S>(labels: I) -> Result<Simplex>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vertices: Vec<String> = labels.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vertices.sort();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(vertices.join(" ")));
        }
        Ok(Simplex { vertices })
    }

    /// Parses whitespace separated vertex labels.
    pub fn parse(s: &str) -> Result<Simplex> {
        Simplex::new(s.split_whitespace())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    fn from_sorted(vertices: Vec<String>) -> Simplex {
        Simplex { vertices }
    }

    /// Deterministic order used for simplex indexing: dimension first, then lexicographic.
    fn index_order(&self, other: &Simplex) -> std::cmp::Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.vertices.join(" "))
    }
}

/// Ranks of homology groups indexed by dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    /// Rank in dimension `p`; zero beyond the stored length.
    pub fn rank(&self, p: usize) -> usize {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Equality that ignores trailing zeros, for vectors of complexes of different dimension.
    pub fn same_ranks(&self, other: &BettiVector) -> bool {
        let n = self.len().max(other.len());
        (0..n).all(|p| self.rank(p) == other.rank(p))
    }
}

/// A finite simplicial complex with deterministic simplex indexing.
#[derive(Clone)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
    closures: Vec<Vec<usize>>,
    dim: usize,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("len", &self.simplices.len())
            .field("dim", &self.dim)
            .finish()
    }
}

/// Builds the closure of the generators. Duplicates are ignored.
pub fn build_complex(generators: &[Simplex]) -> SimplicialComplex {
    let mut all: BTreeSet<Vec<String>> = BTreeSet::new();
    for g in generators {
        let n = g.vertices.len();
        for mask in 1u64..(1u64 << n) {
            let face: Vec<String> = (0..n)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| g.vertices[b].clone())
                .collect();
            all.insert(face);
        }
    }
    let mut simplices: Vec<Simplex> = all.into_iter().map(Simplex::from_sorted).collect();
    simplices.sort_by(|a, b| a.index_order(b));
    SimplicialComplex::from_sorted(simplices)
}

impl SimplicialComplex {
    fn from_sorted(simplices: Vec<Simplex>) -> SimplicialComplex {
        let index: HashMap<Simplex, usize> = simplices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let mut faces = vec![Vec::new(); simplices.len()];
        let mut cofaces = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            if s.dim() == 0 {
                continue;
            }
            for skip in 0..s.vertices.len() {
                let mut v = s.vertices.clone();
                v.remove(skip);
                let j = index[&Simplex::from_sorted(v)];
                faces[i].push(j);
                cofaces[j].push(i);
            }
            faces[i].sort_unstable();
        }
        for c in cofaces.iter_mut() {
            c.sort_unstable();
        }
        let mut closures: Vec<Vec<usize>> = Vec::with_capacity(simplices.len());
        for (i, fs) in faces.iter().enumerate() {
            let mut cl: Vec<usize> = vec![i];
            for &f in fs {
                cl.extend_from_slice(&closures[f]);
            }
            cl.sort_unstable();
            cl.dedup();
            closures.push(cl);
        }
        let dim = simplices.iter().map(Simplex::dim).max().unwrap_or(0);
        SimplicialComplex {
            simplices,
            index,
            faces,
            cofaces,
            closures,
            dim,
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Maximal simplex dimension; zero for the empty complex.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Looks up a simplex given as a list of labels, in any order.
    pub fn find<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        let s = Simplex::new(labels.iter().map(|l| l.as_ref().to_string()))?;
        self.index_of(&s)
            .ok_or_else(|| Error::UnknownSimplex(s.to_string()))
    }

    /// Builds a set from simplices given as label lists. Handy in tests and examples.
    pub fn set_of<S: AsRef<str>>(&self, simplices: &[&[S]]) -> Result<SimplexSet> {
        let mut set = self.empty_set();
        for s in simplices {
            set.insert(self.find(s)?);
        }
        Ok(set)
    }

    pub fn has_vertex(&self, label: &str) -> bool {
        self.index
            .contains_key(&Simplex::from_sorted(vec![label.to_string()]))
    }

    pub fn vertex_labels(&self) -> impl Iterator<Item = &str> {
        self.simplices
            .iter()
            .take_while(|s| s.dim() == 0)
            .map(|s| s.vertices[0].as_str())
    }

    /// Codimension-one faces.
    pub fn faces(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    /// Codimension-one cofaces.
    pub fn cofaces(&self, i: usize) -> &[usize] {
        &self.cofaces[i]
    }

    /// All faces of `i`, including `i` itself, in increasing index order.
    pub fn closure_of(&self, i: usize) -> &[usize] {
        &self.closures[i]
    }

    /// All cofaces of `i` of every codimension, excluding `i`.
    pub fn star_of(&self, i: usize) -> Vec<usize> {
        let mut seen = SimplexSet::empty(self.len());
        let mut stack: Vec<usize> = self.cofaces[i].clone();
        let mut out = Vec::new();
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                out.push(c);
                stack.extend_from_slice(&self.cofaces[c]);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn empty_set(&self) -> SimplexSet {
        SimplexSet::empty(self.len())
    }

    pub fn full_set(&self) -> SimplexSet {
        SimplexSet::full(self.len())
    }

    pub(crate) fn check_member(&self, a: &SimplexSet) {
        assert_eq!(
            a.universe(),
            self.len(),
            "simplex set belongs to a different complex"
        );
    }

    pub fn closure(&self, a: &SimplexSet) -> SimplexSet {
        self.check_member(a);
        let mut out = a.clone();
        for s in a.iter() {
            out.extend(self.closures[s].iter().copied());
        }
        out
    }

    pub fn mouth(&self, a: &SimplexSet) -> SimplexSet {
        self.closure(a).difference(a)
    }

    pub fn is_closed(&self, a: &SimplexSet) -> bool {
        self.check_member(a);
        a.iter()
            .all(|s| self.faces[s].iter().all(|&f| a.contains(f)))
    }

    /// Ranks of `H_p(P, E)` over GF(2) for `p = 0..=dim`.
    pub fn relative_betti(&self, p: &SimplexSet, e: &SimplexSet) -> Result<BettiVector> {
        if !e.is_subset(p) {
            return Err(Error::NotSubset("E", "P"));
        }
        if !self.is_closed(p) {
            return Err(Error::NotClosed("P"));
        }
        if !self.is_closed(e) {
            return Err(Error::NotClosed("E"));
        }
        let cells: Vec<usize> = p.difference(e).iter().collect();
        Ok(self.betti_of_cells(&cells))
    }

    /// Homology of the relative chain complex spanned by `cells` (sorted simplex indices, e.g.
    /// `P \ E`). Boundary entries outside `cells` are dropped.
    pub(crate) fn betti_of_cells(&self, cells: &[usize]) -> BettiVector {
        let mut local = HashMap::with_capacity(cells.len());
        for (k, &c) in cells.iter().enumerate() {
            local.insert(c, k);
        }
        let mut columns: Vec<Vec<usize>> = cells
            .iter()
            .map(|&c| {
                let mut col: Vec<usize> = self.faces[c]
                    .iter()
                    .filter_map(|f| local.get(f).copied())
                    .collect();
                col.sort_unstable();
                col
            })
            .collect();
        let nonzero = gf2::reduce_columns(&mut columns, cells.len());
        let top = self.dim;
        let mut count = vec![0usize; top + 2];
        let mut rank = vec![0usize; top + 2];
        for (k, &c) in cells.iter().enumerate() {
            let d = self.simplices[c].dim();
            count[d] += 1;
            if nonzero[k] {
                rank[d] += 1;
            }
        }
        BettiVector(
            (0..=top)
                .map(|d| count[d] - rank[d] - rank[d + 1])
                .collect(),
        )
    }

    pub fn betti(&self) -> BettiVector {
        let cells: Vec<usize> = (0..self.len()).collect();
        self.betti_of_cells(&cells)
    }

    /// Reduced Betti numbers; the empty complex is treated as having none.
    pub fn reduced_betti(&self) -> BettiVector {
        let mut b = self.betti();
        if !self.is_empty() {
            b.0[0] -= 1;
        }
        b
    }

    /// Glues the cone over `E` with apex `apex` onto `P`. The reduced homology of the result is
    /// the relative homology of `(P, E)`.
    pub fn cone_pair(
        &self,
        p: &SimplexSet,
        e: &SimplexSet,
        apex: &str,
    ) -> Result<SimplicialComplex> {
        if !e.is_subset(p) {
            return Err(Error::NotSubset("E", "P"));
        }
        if !self.is_closed(p) {
            return Err(Error::NotClosed("P"));
        }
        if !self.is_closed(e) {
            return Err(Error::NotClosed("E"));
        }
        if self.has_vertex(apex) {
            return Err(Error::ApexCollision(apex.to_string()));
        }
        let mut generators: Vec<Simplex> = p.iter().map(|s| self.simplices[s].clone()).collect();
        generators.push(Simplex::from_sorted(vec![apex.to_string()]));
        for s in e.iter() {
            generators.push(self.simplices[s].coned(apex));
        }
        Ok(build_complex(&generators))
    }
}

impl Simplex {
    pub(crate) fn coned(&self, apex: &str) -> Simplex {
        let mut v = self.vertices.clone();
        v.push(apex.to_string());
        v.sort();
        Simplex::from_sorted(v)
    }
}

/// Small named complexes used throughout the tests and examples.
pub mod fixtures {
    use super::*;

    /// Builds a complex from generators written as space separated labels.
    ///
    /// # Panics
    /// On a malformed generator.
    pub fn complex(gens: &[&str]) -> SimplicialComplex {
        let gens: Vec<Simplex> = gens.iter().map(|g| Simplex::parse(g).unwrap()).collect();
        build_complex(&gens)
    }

    pub fn triangle() -> SimplicialComplex {
        complex(&["a b c"])
    }

    pub fn edge() -> SimplicialComplex {
        complex(&["a b"])
    }

    pub fn circle() -> SimplicialComplex {
        complex(&["a b", "b c", "a c"])
    }

    pub fn two_triangles() -> SimplicialComplex {
        complex(&["a b c", "b c d"])
    }

    /// # Panics
    /// If a listed simplex is not in `k`.
    pub fn set(k: &SimplicialComplex, items: &[&str]) -> SimplexSet {
        let mut s = k.empty_set();
        for it in items {
            s.insert(k.index_of(&Simplex::parse(it).unwrap()).unwrap());
        }
        s
    }
}
