//! Multivector fields, the induced map `F(σ) = cl(σ) ∪ [σ]`, invariant parts, isolation and
//! refinement.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::scc;
use crate::set::SimplexSet;

/// A partition of a complex into convex multivectors.
///
/// Vector ids are canonical: vectors are numbered by their smallest simplex index, so two
/// fields with the same partition compare equal.
#[derive(Clone, Debug)]
pub struct MultivectorField {
    complex: Arc<SimplicialComplex>,
    name: String,
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
    critical: Vec<bool>,
}

impl PartialEq for MultivectorField {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment && same_complex(&self.complex, &other.complex)
    }
}

impl Eq for MultivectorField {}

pub(crate) fn same_complex(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Returns a simplex witnessing non-convexity, if any. `members` must be sorted.
fn convexity_witness(k: &SimplicialComplex, members: &[usize]) -> Option<usize> {
    let mut cl: Vec<usize> = members
        .iter()
        .flat_map(|&s| k.closure_of(s).iter().copied())
        .collect();
    cl.sort_unstable();
    cl.dedup();
    let mut seen: Vec<usize> = members.to_vec();
    let mut queue: VecDeque<usize> = members.iter().copied().collect();
    while let Some(s) = queue.pop_front() {
        for &c in k.cofaces(s) {
            if cl.binary_search(&c).is_err() {
                continue;
            }
            if members.binary_search(&c).is_err() {
                return Some(c);
            }
            if !seen.contains(&c) {
                seen.push(c);
                queue.push_back(c);
            }
        }
    }
    None
}

/// True iff `members` (sorted) is convex in the face order.
pub fn is_convex(k: &SimplicialComplex, members: &[usize]) -> bool {
    convexity_witness(k, members).is_none()
}

/// Validates the given vectors and completes them with singletons to a field.
pub fn build_mvf(k: Arc<SimplicialComplex>, vectors: &[SimplexSet]) -> Result<MultivectorField> {
    let n = k.len();
    let mut owner = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.universe() != n {
            return Err(Error::ComplexMismatch);
        }
        if v.is_empty() {
            return Err(Error::EmptyMultivector);
        }
        let members = v.to_vec();
        for &s in &members {
            if owner[s] != usize::MAX {
                return Err(Error::NotAPartition(k.simplex(s).to_string()));
            }
            owner[s] = groups.len();
        }
        if let Some(w) = convexity_witness(&k, &members) {
            return Err(Error::NotAMultivector(k.simplex(w).to_string()));
        }
        groups.push(members);
    }
    for (s, o) in owner.iter().enumerate() {
        if *o == usize::MAX {
            groups.push(vec![s]);
        }
    }
    Ok(MultivectorField::from_groups(k, groups))
}

impl MultivectorField {
    /// Groups must be a partition into convex, sorted, nonempty lists.
    fn from_groups(k: Arc<SimplicialComplex>, mut groups: Vec<Vec<usize>>) -> MultivectorField {
        groups.sort_unstable_by_key(|g| g[0]);
        let mut assignment = vec![0; k.len()];
        for (id, g) in groups.iter().enumerate() {
            for &s in g {
                assignment[s] = id;
            }
        }
        let critical = groups
            .iter()
            .map(|g| !k.betti_of_cells(g).is_zero())
            .collect();
        MultivectorField {
            complex: k,
            name: "field".to_string(),
            assignment,
            members: groups,
            critical,
        }
    }

    /// The field in which every simplex is its own multivector.
    pub fn singletons(k: Arc<SimplicialComplex>) -> MultivectorField {
        let groups = (0..k.len()).map(|s| vec![s]).collect();
        MultivectorField::from_groups(k, groups)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn complex_arc(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn num_vectors(&self) -> usize {
        self.members.len()
    }

    /// Id of the multivector `[σ]`.
    pub fn vector_of(&self, s: usize) -> usize {
        self.assignment[s]
    }

    /// Sorted simplex indices of vector `id`.
    pub fn members(&self, id: usize) -> &[usize] {
        &self.members[id]
    }

    pub fn vector_set(&self, id: usize) -> SimplexSet {
        SimplexSet::from_indices(self.complex.len(), self.members[id].iter().copied())
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[usize]> {
        self.members.iter().map(Vec::as_slice)
    }

    pub fn is_critical(&self, id: usize) -> bool {
        self.critical[id]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub(crate) fn check_same_complex(&self, other: &MultivectorField) -> Result<()> {
        if same_complex(&self.complex, &other.complex) {
            Ok(())
        } else {
            Err(Error::ComplexMismatch)
        }
    }

    /// Every simplex of `F(σ)`, possibly with repeats.
    pub(crate) fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.complex
            .closure_of(s)
            .iter()
            .chain(self.members[self.assignment[s]].iter())
            .copied()
    }

    /// `F(σ) = cl(σ) ∪ [σ]`.
    pub fn fv(&self, s: usize) -> SimplexSet {
        let mut out = self.complex.empty_set();
        out.extend(self.successors(s));
        out
    }

    /// `F(A)`, the union of `F(σ)` over `σ ∈ A`.
    pub fn image(&self, a: &SimplexSet) -> SimplexSet {
        let mut out = self.complex.empty_set();
        for s in a.iter() {
            out.extend(self.successors(s));
        }
        out
    }

    /// True iff consecutive steps follow the map.
    pub fn is_path(&self, steps: &[usize]) -> bool {
        !steps.is_empty()
            && steps.windows(2).all(|w| {
                self.complex.closure_of(w[0]).binary_search(&w[1]).is_ok()
                    || self.assignment[w[0]] == self.assignment[w[1]]
            })
    }

    /// Everything reachable from `seeds` by paths inside the closed set `n`, seeds included.
    ///
    /// Inside a closed set, stepping to codimension-one faces and to vector mates reaches the
    /// same simplices as the full map.
    pub(crate) fn forward_reach(&self, seeds: &SimplexSet, n: &SimplexSet) -> SimplexSet {
        let k = &*self.complex;
        let mut seen = seeds.clone();
        let mut stack: Vec<usize> = seeds.to_vec();
        while let Some(s) = stack.pop() {
            for &t in k
                .faces(s)
                .iter()
                .chain(self.members[self.assignment[s]].iter())
            {
                if n.contains(t) && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Everything in the closed set `n` from which `targets` can be reached inside `n`.
    pub(crate) fn backward_reach(&self, targets: &SimplexSet, n: &SimplexSet) -> SimplexSet {
        let k = &*self.complex;
        let mut seen = targets.clone();
        let mut stack: Vec<usize> = targets.to_vec();
        while let Some(s) = stack.pop() {
            for &t in k
                .cofaces(s)
                .iter()
                .chain(self.members[self.assignment[s]].iter())
            {
                if n.contains(t) && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// `inv(A)`: the simplices of `A` that lie on an essential solution inside `A`.
    pub fn invariant_part(&self, a: &SimplexSet) -> SimplexSet {
        self.complex.check_member(a);
        let nodes: Vec<usize> = a.iter().collect();
        let mut local: HashMap<usize, usize> = HashMap::with_capacity(nodes.len());
        for (i, &s) in nodes.iter().enumerate() {
            local.insert(s, i);
        }
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(nodes.len());
        for &s in &nodes {
            let mut out: Vec<usize> = self
                .successors(s)
                .filter_map(|t| local.get(&t).copied())
                .collect();
            out.sort_unstable();
            out.dedup();
            adj.push(out);
        }
        let (comp, count) = scc::tarjan(&adj);

        let mut first_vector = vec![usize::MAX; count];
        let mut essential = vec![false; count];
        for (i, &s) in nodes.iter().enumerate() {
            let c = comp[i];
            let v = self.assignment[s];
            if self.critical[v] {
                essential[c] = true;
            }
            if first_vector[c] == usize::MAX {
                first_vector[c] = v;
            } else if first_vector[c] != v {
                essential[c] = true;
            }
        }

        let mut radj: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for (i, out) in adj.iter().enumerate() {
            for &j in out {
                radj[j].push(i);
            }
        }
        let seeds: Vec<usize> = (0..nodes.len()).filter(|&i| essential[comp[i]]).collect();
        let fwd = reach(&adj, &seeds);
        let bwd = reach(&radj, &seeds);
        let mut out = self.complex.empty_set();
        for i in 0..nodes.len() {
            if fwd[i] && bwd[i] {
                out.insert(nodes[i]);
            }
        }
        out
    }

    /// Whether the closed set `n` isolates `s`: `s` is invariant, `F(s) ⊆ n`, and no path in `n`
    /// leaves `s` and comes back.
    pub fn is_isolating(&self, n: &SimplexSet, s: &SimplexSet) -> Result<bool> {
        if !self.complex.is_closed(n) {
            return Err(Error::NotClosed("N"));
        }
        if !s.is_subset(n) {
            return Err(Error::NotSubset("S", "N"));
        }
        if self.invariant_part(s) != *s {
            return Ok(false);
        }
        let image = self.image(s);
        if !image.is_subset(n) {
            return Ok(false);
        }
        let mut exit = image;
        exit.difference_with(s);
        let reached = self.forward_reach(&exit, n);
        Ok(reached.is_disjoint(s))
    }

    /// Whether every vector of `self` lies inside a vector of `coarse`.
    pub fn is_refinement(&self, coarse: &MultivectorField) -> Result<bool> {
        self.check_same_complex(coarse)?;
        Ok(self.members.iter().all(|g| {
            g.iter()
                .all(|&s| coarse.assignment[s] == coarse.assignment[g[0]])
        }))
    }

    /// Refinement in which no regular vector of `coarse` carries an essential solution of `self`.
    pub fn is_strong_refinement(&self, coarse: &MultivectorField) -> Result<bool> {
        if !self.is_refinement(coarse)? {
            return Ok(false);
        }
        Ok((0..coarse.num_vectors())
            .filter(|&v| !coarse.critical[v])
            .all(|v| self.invariant_part(&coarse.vector_set(v)).is_empty()))
    }
}

fn reach(adj: &[Vec<usize>], seeds: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = seeds.to_vec();
    for &s in seeds {
        seen[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// The common refinement `{V1 ∩ V2}` with empty intersections dropped.
pub fn intersect_fields(f1: &MultivectorField, f2: &MultivectorField) -> Result<MultivectorField> {
    f1.check_same_complex(f2)?;
    let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for s in 0..f1.complex.len() {
        groups
            .entry((f1.assignment[s], f2.assignment[s]))
            .or_default()
            .push(s);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    debug_assert!(groups.iter().all(|g| is_convex(&f1.complex, g)));
    let name = format!("{}&{}", f1.name, f2.name);
    Ok(MultivectorField::from_groups(f1.complex.clone(), groups).with_name(name))
}

/// Random field: starting from singletons, `merge_steps` times pick a random (simplex, coface)
/// pair and merge their vectors when the union stays convex.
pub fn random_mvf(k: Arc<SimplicialComplex>, seed: u64, merge_steps: usize) -> MultivectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..k.len())
        .flat_map(|s| k.cofaces(s).iter().map(move |&c| (s, c)))
        .collect();
    let mut owner: Vec<usize> = (0..k.len()).collect();
    let mut groups: Vec<Vec<usize>> = (0..k.len()).map(|s| vec![s]).collect();
    if !pairs.is_empty() {
        for _ in 0..merge_steps {
            let (s, c) = pairs[rng.random_range(0..pairs.len())];
            let (a, b) = (owner[s], owner[c]);
            if a == b {
                continue;
            }
            let mut merged = groups[a].clone();
            merged.extend_from_slice(&groups[b]);
            merged.sort_unstable();
            if !is_convex(&k, &merged) {
                continue;
            }
            for &x in &groups[b] {
                owner[x] = a;
            }
            groups[b].clear();
            groups[a] = merged;
        }
    }
    groups.retain(|g| !g.is_empty());
    MultivectorField::from_groups(k, groups)
}
