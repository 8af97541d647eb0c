//! Independent oracles and random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use mvfconley::{
    build_complex, build_mvf, IndexPair, MultivectorField, PairDiagram, Simplex, SimplexSet,
    SimplicialComplex,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mvfconley::pipeline::{disk_at, hopf_grid, hopf_sample, mvf_from_vectors, HopfGrid};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------------------------
// dense GF(2) linear algebra on bit rows

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn zero(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }
    pub fn xor(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn lead(&self) -> Option<usize> {
        for (w, &word) in self.0.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }
}

/// Row echelon basis with a lookup from leading bit to row.
#[derive(Clone, Default)]
pub struct Basis {
    rows: Vec<Bits>,
    lead: HashMap<usize, usize>,
}

impl Basis {
    /// Reduces `v` fully; returns the remainder.
    pub fn reduce(&self, mut v: Bits) -> Bits {
        loop {
            let Some(l) = v.lead() else { return v };
            match self.lead.get(&l) {
                Some(&r) => v.xor(&self.rows[r]),
                None => {
                    // reduce the remaining bits past the lead
                    let mut rest = v.clone();
                    rest.flip(l);
                    let rest = self.reduce(rest);
                    let mut out = rest;
                    out.flip(l);
                    return out;
                }
            }
        }
    }
    /// Adds `v`; returns false if it was dependent.
    pub fn add(&mut self, v: Bits) -> bool {
        let v = self.reduce(v);
        match v.lead() {
            Some(l) => {
                self.lead.insert(l, self.rows.len());
                self.rows.push(v);
                true
            }
            None => false,
        }
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn contains(&self, v: &Bits) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}

pub fn rank_of(vectors: impl IntoIterator<Item = Bits>) -> usize {
    let mut b = Basis::default();
    for v in vectors {
        b.add(v);
    }
    b.rank()
}

/// Basis of the null space of the linear map given by column images (`cols[i]` is the image
/// of the `i`-th unit vector). Vectors have length `cols.len()`.
pub fn null_space(cols: &[Bits], rows: usize) -> Vec<Bits> {
    let n = cols.len();
    // augmented: image bits then the combination bits
    let width = rows + n;
    let mut basis = Basis::default();
    let mut kernel = Vec::new();
    for (i, c) in cols.iter().enumerate() {
        let mut v = Bits::zero(width);
        for r in 0..rows {
            if c.get(r) {
                v.flip(r);
            }
        }
        v.flip(rows + i);
        let v = basis.reduce(v);
        let image_zero = (0..rows).all(|r| !v.get(r));
        if image_zero {
            let mut k = Bits::zero(n);
            for j in 0..n {
                if v.get(rows + j) {
                    k.flip(j);
                }
            }
            kernel.push(k);
        } else {
            basis.add(v);
        }
    }
    kernel
}

// ---------------------------------------------------------------------------------------------
// naive homology

fn label_faces(s: &[String]) -> Vec<Vec<String>> {
    (0..s.len())
        .map(|i| {
            s.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Relative homology ranks `H_p(P, E)` from the vertex labels alone, by Gaussian elimination on
/// the dense boundary matrices of the quotient chain complex. Sets are lists of sorted labels.
pub fn naive_relative_betti(p: &[Vec<String>], e: &[Vec<String>]) -> Vec<usize> {
    let e: BTreeSet<&Vec<String>> = e.iter().collect();
    let cells: Vec<&Vec<String>> = p.iter().filter(|s| !e.contains(s)).collect();
    let top = p.iter().map(|s| s.len()).max().unwrap_or(1) - 1;
    let mut by_dim: Vec<Vec<&Vec<String>>> = vec![Vec::new(); top + 1];
    for c in &cells {
        by_dim[c.len() - 1].push(c);
    }
    let index: Vec<HashMap<&Vec<String>, usize>> = by_dim
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .collect();
    // rank of ∂_q : C_q -> C_{q-1}
    let mut ranks = vec![0usize; top + 2];
    for q in 1..=top {
        let rows = by_dim[q - 1].len();
        let cols = by_dim[q].iter().map(|c| {
            let mut v = Bits::zero(rows);
            for f in label_faces(c) {
                if let Some(&r) = index[q - 1].get(&f) {
                    v.flip(r);
                }
            }
            v
        });
        ranks[q] = rank_of(cols);
    }
    (0..=top)
        .map(|q| by_dim[q].len() - ranks[q] - ranks[q + 1])
        .collect()
}

pub fn labels(k: &SimplicialComplex, set: &SimplexSet) -> Vec<Vec<String>> {
    set.iter()
        .map(|s| k.simplex(s).vertices().to_vec())
        .collect()
}

/// Ranks padded or trimmed to `len`, so vectors of different reach compare.
pub fn padded(v: &[usize], len: usize) -> Vec<usize> {
    let mut v = v.to_vec();
    v.resize(len, 0);
    v
}

// ---------------------------------------------------------------------------------------------
// invariant part by walking solutions

/// Simplices of `a` on an essential solution inside `a`, found by searching for closed walks:
/// from each simplex, a breadth-first search over (simplex, left-own-vector) states decides
/// whether it lies on a closed walk inside `a` that visits a second multivector. Simplices of
/// critical multivectors sit on constant solutions. The invariant part is then everything
/// reachable from and reaching such a simplex inside `a`.
pub fn brute_invariant_part(f: &MultivectorField, a: &SimplexSet) -> Vec<usize> {
    let k = f.complex();
    let inside: Vec<usize> = a.iter().collect();
    let succ = |s: usize| -> Vec<usize> {
        let mut out: Vec<usize> = k.closure_of(s).to_vec();
        out.extend_from_slice(f.members(f.vector_of(s)));
        out.retain(|&t| a.contains(t));
        out.sort_unstable();
        out.dedup();
        out
    };
    let mut recurrent = BTreeSet::new();
    for &x in &inside {
        let vx = f.vector_of(x);
        if f.is_critical(vx) {
            recurrent.insert(x);
            continue;
        }
        let mut seen: BTreeSet<(usize, bool)> = BTreeSet::new();
        let mut queue = VecDeque::from([(x, false)]);
        let mut found = false;
        while let Some((s, left)) = queue.pop_front() {
            for t in succ(s) {
                let l = left || f.vector_of(t) != vx;
                if t == x && l {
                    found = true;
                    break;
                }
                if seen.insert((t, l)) {
                    queue.push_back((t, l));
                }
            }
            if found {
                break;
            }
        }
        if found {
            recurrent.insert(x);
        }
    }
    let reach = |start: &BTreeSet<usize>, forward: bool| -> BTreeSet<usize> {
        let mut seen = start.clone();
        let mut stack: Vec<usize> = start.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &t in &inside {
                let edge = if forward {
                    succ(s).contains(&t)
                } else {
                    succ(t).contains(&s)
                };
                if edge && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    };
    let fw = reach(&recurrent, true);
    let bw = reach(&recurrent, false);
    fw.intersection(&bw).copied().collect()
}

// ---------------------------------------------------------------------------------------------
// zigzag rank by limits and colimits

/// Homology of one pair with a chosen basis: relative cycles are chains on `P \ E`.
struct PairHomology {
    cells: Vec<usize>,
    pos: HashMap<usize, usize>,
    boundaries: Basis,
    classes: Vec<Bits>,
    /// rows `[vector | unit tag]` for boundaries then classes, to express cycles in coordinates
    coords: Basis,
}

impl PairHomology {
    fn new(k: &SimplicialComplex, pair: &IndexPair, p: usize) -> PairHomology {
        let rel = |s: usize| pair.p.contains(s) && !pair.e.contains(s);
        let cells_of = |d: usize| -> Vec<usize> {
            (0..k.len())
                .filter(|&s| rel(s) && k.simplex(s).dim() == d)
                .collect()
        };
        let cells = cells_of(p);
        let pos: HashMap<usize, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let n = cells.len();
        let bd = |s: usize, target: &HashMap<usize, usize>, len: usize| {
            let mut v = Bits::zero(len);
            for &f in k.faces(s) {
                if let Some(&r) = target.get(&f) {
                    v.flip(r);
                }
            }
            v
        };
        // cycles: kernel of the boundary into dimension p - 1
        let cycles: Vec<Bits> = if p == 0 {
            (0..n)
                .map(|i| {
                    let mut v = Bits::zero(n);
                    v.flip(i);
                    v
                })
                .collect()
        } else {
            let lower = cells_of(p - 1);
            let lpos: HashMap<usize, usize> =
                lower.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let cols: Vec<Bits> = cells.iter().map(|&c| bd(c, &lpos, lower.len())).collect();
            null_space(&cols, lower.len())
        };
        let mut boundaries = Basis::default();
        for c in cells_of(p + 1) {
            boundaries.add(bd(c, &pos, n));
        }
        let mut coords = Basis::default();
        let mut classes = Vec::new();
        let mut quotient = boundaries.clone();
        for z in cycles {
            if quotient.add(z.clone()) {
                classes.push(z);
            }
        }
        // coordinate solver: augmented rows [vector | unit tag]
        let m = classes.len();
        let b_rows = boundaries.rows.clone();
        let total = b_rows.len() + m;
        for (i, v) in b_rows.iter().chain(classes.iter()).enumerate() {
            let mut row = Bits::zero(n + total);
            for j in 0..n {
                if v.get(j) {
                    row.flip(j);
                }
            }
            row.flip(n + i);
            coords.add(row);
        }
        PairHomology {
            cells,
            pos,
            boundaries,
            classes,
            coords,
        }
    }

    fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Class coordinates of a relative cycle.
    fn coordinates(&self, z: &Bits) -> Bits {
        let n = self.cells.len();
        let nb = self.boundaries.rank();
        let total = nb + self.classes.len();
        let mut row = Bits::zero(n + total);
        for j in 0..n {
            if z.get(j) {
                row.flip(j);
            }
        }
        // eliminate the vector part; the tag part then records the combination used
        let rem = reduce_prefix(&self.coords, row, n);
        let mut out = Bits::zero(self.classes.len());
        for i in 0..self.classes.len() {
            if rem.get(n + nb + i) {
                out.flip(i);
            }
        }
        out
    }
}

/// Reduces only on leading bits below `prefix`, returning the row with a zero prefix.
fn reduce_prefix(b: &Basis, mut v: Bits, prefix: usize) -> Bits {
    loop {
        let Some(l) = (0..prefix).find(|&i| v.get(i)) else {
            return v;
        };
        let r = *b.lead.get(&l).expect("cycle lies in the span");
        v.xor(&b.rows[r]);
    }
}

/// Matrix of the map induced by inclusion of pair `a` into pair `b`, as images of `a`'s classes.
fn induced(src: &PairHomology, dst: &PairHomology) -> Vec<Bits> {
    src.classes
        .iter()
        .map(|z| {
            let mut img = Bits::zero(dst.cells.len());
            for (i, &c) in src.cells.iter().enumerate() {
                if z.get(i) {
                    if let Some(&j) = dst.pos.get(&c) {
                        img.flip(j);
                    }
                }
            }
            dst.coordinates(&img)
        })
        .collect()
}

/// Number of dimension-`p` intervals covering `i..=j`, as the rank of the map from the limit to
/// the colimit of the diagram restricted to `i..=j`.
pub fn oracle_rank(diagram: &PairDiagram, i: usize, j: usize, p: usize) -> usize {
    let k = diagram.complex();
    let hs: Vec<PairHomology> = (i..=j)
        .map(|x| PairHomology::new(k, &diagram.positions()[x - 1], p))
        .collect();
    let offsets: Vec<usize> = hs
        .iter()
        .scan(0, |acc, h| {
            let o = *acc;
            *acc += h.dim();
            Some(o)
        })
        .collect();
    let total: usize = hs.iter().map(PairHomology::dim).sum();
    if total == 0 {
        return 0;
    }
    // arrows (source slot, target slot, matrix)
    let mut arrows = Vec::new();
    for x in i..j {
        let (a, b) = (x - i, x + 1 - i);
        if x % 2 == 0 {
            arrows.push((a, b, induced(&hs[a], &hs[b])));
        } else {
            arrows.push((b, a, induced(&hs[b], &hs[a])));
        }
    }
    // limit: tuples with f(v_s) = v_t on every arrow
    let rows = arrows.iter().map(|(_, t, _)| hs[*t].dim()).sum::<usize>();
    let mut cols: Vec<Bits> = vec![Bits::zero(rows); total];
    let mut row0 = 0;
    for (s, t, m) in &arrows {
        for (ci, img) in m.iter().enumerate() {
            for r in 0..hs[*t].dim() {
                if img.get(r) {
                    cols[offsets[*s] + ci].flip(row0 + r);
                }
            }
        }
        for r in 0..hs[*t].dim() {
            cols[offsets[*t] + r].flip(row0 + r);
        }
        row0 += hs[*t].dim();
    }
    let limit = null_space(&cols, rows);
    // colimit relations: ι_s(x) + ι_t(f x)
    let mut relations = Basis::default();
    for (s, t, m) in &arrows {
        for (ci, img) in m.iter().enumerate() {
            let mut v = Bits::zero(total);
            v.flip(offsets[*s] + ci);
            for r in 0..hs[*t].dim() {
                if img.get(r) {
                    v.flip(offsets[*t] + r);
                }
            }
            relations.add(v);
        }
    }
    let base = relations.rank();
    let mut span = relations;
    for l in limit {
        let mut v = Bits::zero(total);
        for c in 0..hs[0].dim() {
            if l.get(c) {
                v.flip(c);
            }
        }
        span.add(v);
    }
    span.rank() - base
}

// ---------------------------------------------------------------------------------------------
// generators

/// A random complex on `vertices` labels with at most `max_simplices` simplices.
pub fn random_complex(
    r: &mut ChaCha8Rng,
    vertices: usize,
    max_simplices: usize,
) -> SimplicialComplex {
    let labels: Vec<String> = (0..vertices).map(|i| format!("x{i}")).collect();
    let mut gens: Vec<Simplex> = Vec::new();
    let mut current = build_complex(&gens);
    for _ in 0..40 {
        let size = r.random_range(1..=3.min(vertices));
        let pick: Vec<String> = labels.choose_multiple(r, size).cloned().collect();
        let g = Simplex::new(pick).unwrap();
        let mut trial = gens.clone();
        trial.push(g);
        let next = build_complex(&trial);
        if next.len() > max_simplices {
            continue;
        }
        gens = trial;
        current = next;
    }
    if current.is_empty() {
        current = build_complex(&[Simplex::new(["x0"]).unwrap()]);
    }
    current
}

pub fn random_closed(
    r: &mut ChaCha8Rng,
    k: &SimplicialComplex,
    within: &SimplexSet,
    density: f64,
) -> SimplexSet {
    let mut picks = k.empty_set();
    for s in within.iter() {
        if r.random_bool(density) {
            picks.insert(s);
        }
    }
    k.closure(&picks).intersection(within)
}

/// A random closed pair `E ⊆ P ⊆ within`, `within` closed.
pub fn random_pair(
    r: &mut ChaCha8Rng,
    k: &SimplicialComplex,
    within_p: &SimplexSet,
    within_e: &SimplexSet,
) -> IndexPair {
    let p = random_closed(r, k, within_p, 0.5);
    let e_room = within_e.intersection(&p);
    let e = random_closed(r, k, &e_room, 0.3);
    IndexPair::new(p, e, "random", None)
}

pub fn random_diagram(r: &mut ChaCha8Rng, k: Arc<SimplicialComplex>, len: usize) -> PairDiagram {
    let full = k.full_set();
    let odd: Vec<IndexPair> = (0..len.div_ceil(2))
        .map(|_| random_pair(r, &k, &full, &full))
        .collect();
    let mut positions = Vec::with_capacity(len);
    for (i, x) in odd.iter().enumerate() {
        if i > 0 {
            let prev = &odd[i - 1];
            let p_room = prev.p.intersection(&x.p);
            let e_room = prev.e.intersection(&x.e);
            let mid = if r.random_bool(0.5) {
                IndexPair::new(p_room.clone(), e_room.intersection(&p_room), "random", None)
            } else {
                random_pair(r, &k, &p_room, &e_room)
            };
            positions.push(mid);
        }
        positions.push(x.clone());
    }
    PairDiagram::new(k, positions).unwrap()
}

pub fn random_field(r: &mut ChaCha8Rng, k: Arc<SimplicialComplex>) -> MultivectorField {
    let steps = r.random_range(0..=2 * k.len());
    mvfconley::random_mvf(k, r.random(), steps)
}

/// A field on a random complex together with a closed `N` isolating `S = inv(N)`.
pub struct Instance {
    pub k: Arc<SimplicialComplex>,
    pub f: MultivectorField,
    pub n: SimplexSet,
    pub s: SimplexSet,
}

/// Draws until the invariant part of a random closed set is isolated by it and nonempty.
pub fn isolated_instance(r: &mut ChaCha8Rng, vertices: usize, max_simplices: usize) -> Instance {
    loop {
        let k = Arc::new(random_complex(r, vertices, max_simplices));
        let f = random_field(r, k.clone());
        let n = random_closed(r, &k, &k.full_set(), 0.6);
        let s = f.invariant_part(&n);
        if !s.is_empty() && f.is_isolating(&n, &s).unwrap() {
            return Instance { k, f, n, s };
        }
    }
}

/// A noisy Hopf field on a small grid with a disk-shaped `N` that isolates its invariant part.
/// These carry many regular vectors near the exit set, unlike [`isolated_instance`].
pub fn flow_instance(r: &mut ChaCha8Rng) -> Instance {
    let grid = small_grid(r);
    flow_instance_on(r, &grid)
}

pub fn small_grid(r: &mut ChaCha8Rng) -> HopfGrid {
    hopf_grid(r.random_range(5..=8), 1.0).unwrap()
}

pub fn flow_instance_on(r: &mut ChaCha8Rng, grid: &HopfGrid) -> Instance {
    loop {
        let f = flow_field(r, grid);
        let n = disk_at(
            grid,
            [r.random_range(-0.3..0.3), r.random_range(-0.3..0.3)],
            r.random_range(0.5..1.2),
        );
        let s = f.invariant_part(&n);
        if !s.is_empty() && f.is_isolating(&n, &s).unwrap() {
            return Instance {
                k: grid.complex.clone(),
                f,
                n,
                s,
            };
        }
    }
}

pub fn flow_field(r: &mut ChaCha8Rng, grid: &HopfGrid) -> MultivectorField {
    let lambda = r.random_range(-1.0..1.0);
    let center = [r.random_range(-0.5..0.5), r.random_range(-0.5..0.5)];
    mvf_from_vectors(
        grid.complex.clone(),
        &hopf_sample(grid, lambda, center, 0.3, r.random()),
    )
    .unwrap()
}

/// Splits `members` into pieces: a random matching of codimension-one face pairs, the rest
/// singletons.
fn random_split(r: &mut ChaCha8Rng, k: &SimplicialComplex, members: &[usize]) -> Vec<Vec<usize>> {
    let mut order = members.to_vec();
    order.shuffle(r);
    let mut used = BTreeSet::new();
    let mut pieces = Vec::new();
    for &s in &order {
        if used.contains(&s) {
            continue;
        }
        used.insert(s);
        let partner = k
            .cofaces(s)
            .iter()
            .chain(k.faces(s))
            .copied()
            .filter(|c| members.contains(c) && !used.contains(c))
            .collect::<Vec<_>>()
            .choose(r)
            .copied();
        match partner {
            Some(c) if r.random_bool(0.7) => {
                used.insert(c);
                pieces.push(vec![s.min(c), s.max(c)]);
            }
            _ => pieces.push(vec![s]),
        }
    }
    pieces
}

fn field_from_groups(k: &Arc<SimplicialComplex>, groups: &[Vec<usize>]) -> MultivectorField {
    let sets: Vec<SimplexSet> = groups
        .iter()
        .filter(|g| g.len() > 1)
        .map(|g| SimplexSet::from_indices(k.len(), g.iter().copied()))
        .collect();
    build_mvf(k.clone(), &sets).unwrap()
}

/// A refinement of `coarse` in which no regular coarse vector carries an essential solution.
/// Critical vectors are split freely; a regular vector keeps a random split only if that split
/// is gradient-like inside it.
pub fn strong_refinement(r: &mut ChaCha8Rng, coarse: &MultivectorField) -> MultivectorField {
    let k = coarse.complex_arc().clone();
    let vectors: Vec<Vec<usize>> = coarse.vectors().map(<[usize]>::to_vec).collect();
    let splits: Vec<Vec<Vec<usize>>> = vectors.iter().map(|v| random_split(r, &k, v)).collect();
    let fine = field_from_groups(&k, &splits.concat());
    let groups: Vec<Vec<usize>> = vectors
        .iter()
        .zip(&splits)
        .flat_map(|(v, split)| {
            let id = coarse.vector_of(v[0]);
            let set = SimplexSet::from_indices(k.len(), v.iter().copied());
            if coarse.is_critical(id) || fine.invariant_part(&set).is_empty() {
                split.clone()
            } else {
                vec![v.clone()]
            }
        })
        .collect();
    field_from_groups(&k, &groups).with_name("fine")
}

// ---------------------------------------------------------------------------------------------
// fixtures

/// Two triangles `abc`, `bcd` with an outer collar: every vertex of the pair has a pendant edge
/// and every boundary edge a pendant triangle. The first field flows `bc → bcd` and keeps `abc`
/// critical; the second flows `bc → abc` and keeps `bcd` critical. Everything on the boundary
/// flows out. Returns the fields and `N = cl{abc, bcd}`.
pub fn perturbed_triangles() -> (MultivectorField, MultivectorField, SimplexSet) {
    let k = Arc::new(build_complex(
        &[
            "a b c", "b c d", "a a1", "b b1", "c c1", "d d1", "a b ab1", "a c ac1", "b d bd1",
            "c d cd1",
        ]
        .map(|g| Simplex::parse(g).unwrap()),
    ));
    let set = |items: &[&str]| {
        let mut out = k.empty_set();
        for s in items {
            out.insert(k.index_of(&Simplex::parse(s).unwrap()).unwrap());
        }
        out
    };
    let outward = [
        ["a", "a a1"],
        ["b", "b b1"],
        ["c", "c c1"],
        ["d", "d d1"],
        ["a b", "a b ab1"],
        ["a c", "a c ac1"],
        ["b d", "b d bd1"],
        ["c d", "c d cd1"],
    ];
    let field = |inner: [&str; 2], name: &str| {
        let mut vs: Vec<SimplexSet> = outward.iter().map(|v| set(v)).collect();
        vs.push(set(&inner));
        build_mvf(k.clone(), &vs).unwrap().with_name(name)
    };
    let n = k.closure(&set(&["a b c", "b c d"]));
    (
        field(["b c", "b c d"], "v1"),
        field(["b c", "a b c"], "v2"),
        n,
    )
}
