//! Zigzag persistence over GF(2) for a sequence of single-simplex insertions and deletions.
//!
//! For every dimension `p` the engine keeps a reduced basis of the cycle space of the current
//! complex. Each basis column remembers how it decomposes as a boundary plus a sum of class
//! representatives, `vec = ∂chain + Σ rep[c] for c in classes`, which is what lets a class be
//! retired when it becomes a boundary or loses its support.

use std::cmp::Reverse;
use std::collections::HashMap;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::gf2::{add_into, pivot};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Insert(usize),
    Delete(usize),
}

#[derive(Clone, Debug, Default)]
struct Column {
    vec: Vec<usize>,
    classes: Vec<usize>,
    chain: Vec<usize>,
}

impl Column {
    fn add(&mut self, other: &Column) {
        add_into(&mut self.vec, &other.vec);
        add_into(&mut self.classes, &other.classes);
        add_into(&mut self.chain, &other.chain);
    }
}

#[derive(Default)]
struct Echelon {
    cols: Vec<Column>,
    by_pivot: HashMap<usize, usize>,
}

impl Echelon {
    /// Reduces `col` against the basis until its pivot is new or it vanishes.
    fn reduce(&self, col: &mut Column) {
        while let Some(p) = pivot(&col.vec) {
            match self.by_pivot.get(&p) {
                Some(&j) => col.add(&self.cols[j]),
                None => break,
            }
        }
    }

    fn push(&mut self, col: Column) {
        let p = pivot(&col.vec).expect("basis columns are nonzero");
        let prev = self.by_pivot.insert(p, self.cols.len());
        debug_assert!(prev.is_none());
        self.cols.push(col);
    }

    fn remove(&mut self, j: usize) -> Column {
        let col = self.cols.swap_remove(j);
        self.by_pivot
            .remove(&pivot(&col.vec).expect("basis columns are nonzero"));
        if j < self.cols.len() {
            let moved = pivot(&self.cols[j].vec).expect("basis columns are nonzero");
            self.by_pivot.insert(moved, j);
        }
        col
    }
}

#[derive(Clone, Debug)]
struct Rep {
    vec: Vec<usize>,
    birth: usize,
    backward: bool,
    dim: usize,
}

struct State<'a> {
    k: &'a SimplicialComplex,
    present: Vec<bool>,
    echelons: Vec<Echelon>,
    reps: Vec<Rep>,
    alive: Vec<Vec<usize>>,
    bars: Vec<(usize, usize, usize)>,
}

fn internal(msg: String) -> Error {
    Error::BadDiagram(msg)
}

fn contains(v: &[usize], x: usize) -> bool {
    v.binary_search(&x).is_ok()
}

impl<'a> State<'a> {
    /// Backward births by decreasing birth, then forward births by increasing birth. When a
    /// class has to die, the choice among candidates follows this order.
    fn rank_key(&self, r: usize) -> (bool, Reverse<usize>, usize) {
        let rep = &self.reps[r];
        if rep.backward {
            (false, Reverse(rep.birth), 0)
        } else {
            (true, Reverse(0), rep.birth)
        }
    }

    fn born(&mut self, vec: Vec<usize>, dim: usize, t: usize, backward: bool) -> usize {
        let id = self.reps.len();
        self.reps.push(Rep {
            vec,
            birth: t,
            backward,
            dim,
        });
        self.alive[dim].push(id);
        id
    }

    fn die(&mut self, r: usize, t: usize) {
        let rep = &self.reps[r];
        self.bars.push((rep.dim, rep.birth, t - 1));
        let list = &mut self.alive[rep.dim];
        let at = list
            .iter()
            .position(|&x| x == r)
            .expect("dying class is alive");
        list.swap_remove(at);
    }

    fn insert(&mut self, s: usize, t: usize) -> Result<()> {
        if self.present[s] {
            return Err(internal(format!(
                "simplex {} inserted twice",
                self.k.simplex(s)
            )));
        }
        if let Some(&f) = self.k.faces(s).iter().find(|&&f| !self.present[f]) {
            return Err(internal(format!(
                "{} inserted before its face {}",
                self.k.simplex(s),
                self.k.simplex(f)
            )));
        }
        self.present[s] = true;
        let p = self.k.simplex(s).dim();
        let mut col = Column {
            vec: self.k.faces(s).to_vec(),
            ..Column::default()
        };
        if p > 0 {
            self.echelons[p - 1].reduce(&mut col);
            if !col.vec.is_empty() {
                return Err(internal(format!(
                    "boundary of {} is not a cycle",
                    self.k.simplex(s)
                )));
            }
        }
        let mut cycle = col.chain;
        add_into(&mut cycle, &[s]);
        if col.classes.is_empty() {
            let id = self.born(cycle.clone(), p, t, false);
            let mut new = Column {
                vec: cycle,
                classes: vec![id],
                chain: Vec::new(),
            };
            self.echelons[p].reduce(&mut new);
            if new.vec.is_empty() {
                return Err(internal(format!(
                    "new cycle through {} is dependent",
                    self.k.simplex(s)
                )));
            }
            self.echelons[p].push(new);
        } else {
            let a = col.classes;
            let m = *a
                .iter()
                .max_by_key(|&&r| self.rank_key(r))
                .expect("nonempty");
            for c in self.echelons[p - 1].cols.iter_mut() {
                if contains(&c.classes, m) {
                    add_into(&mut c.classes, &a);
                    add_into(&mut c.chain, &cycle);
                }
            }
            self.die(m, t);
        }
        Ok(())
    }

    fn delete(&mut self, s: usize, t: usize) -> Result<()> {
        if !self.present[s] {
            return Err(internal(format!(
                "simplex {} deleted while absent",
                self.k.simplex(s)
            )));
        }
        if let Some(&c) = self.k.cofaces(s).iter().find(|&&c| self.present[c]) {
            return Err(internal(format!(
                "{} deleted before its coface {}",
                self.k.simplex(s),
                self.k.simplex(c)
            )));
        }
        let p = self.k.simplex(s).dim();
        let holding: Vec<usize> = (0..self.echelons[p].cols.len())
            .filter(|&j| contains(&self.echelons[p].cols[j].vec, s))
            .collect();

        if holding.is_empty() {
            let boundary = self.k.faces(s).to_vec();
            if p == 0 {
                return Err(internal(format!(
                    "vertex {} lies on no cycle",
                    self.k.simplex(s)
                )));
            }
            let id = self.born(boundary, p - 1, t, true);
            for c in self.echelons[p - 1].cols.iter_mut() {
                if contains(&c.chain, s) {
                    add_into(&mut c.classes, &[id]);
                    add_into(&mut c.chain, &[s]);
                }
            }
        } else {
            let j: Vec<usize> = self.alive[p]
                .iter()
                .copied()
                .filter(|&r| contains(&self.reps[r].vec, s))
                .collect();
            let m = *j
                .iter()
                .min_by_key(|&&r| self.rank_key(r))
                .ok_or_else(|| internal(format!("no class carries {}", self.k.simplex(s))))?;
            let mut others: Vec<usize> = j.iter().copied().filter(|&r| r != m).collect();
            others.sort_unstable();
            let rep_m = self.reps[m].vec.clone();
            for &r in &others {
                add_into(&mut self.reps[r].vec, &rep_m);
            }
            for c in self.echelons[p].cols.iter_mut() {
                let hits = c
                    .classes
                    .iter()
                    .filter(|x| others.binary_search(x).is_ok())
                    .count();
                if hits % 2 == 1 {
                    add_into(&mut c.classes, &[m]);
                }
            }
            let star = *holding
                .iter()
                .min_by_key(|&&j| pivot(&self.echelons[p].cols[j].vec))
                .expect("nonempty");
            let e = self.echelons[p].cols[star].clone();
            if p > 0 {
                for c in self.echelons[p - 1].cols.iter_mut() {
                    if contains(&c.chain, s) {
                        add_into(&mut c.chain, &e.vec);
                    }
                }
            }
            for &h in &holding {
                if h != star {
                    self.echelons[p].cols[h].add(&e);
                }
            }
            self.echelons[p].remove(star);
            debug_assert!(self.echelons[p]
                .cols
                .iter()
                .all(|c| !contains(&c.classes, m)));
            self.die(m, t);
        }
        self.present[s] = false;
        Ok(())
    }
}

/// Runs the operations in order, step `t` being `ops[t - 1]`, and returns `(dim, birth, death)`
/// for every class: alive in the complexes after steps `birth..=death`.
pub fn simplexwise_bars(k: &SimplicialComplex, ops: &[Op]) -> Result<Vec<(usize, usize, usize)>> {
    let dims = k.dim() + 1;
    let mut st = State {
        k,
        present: vec![false; k.len()],
        echelons: (0..dims).map(|_| Echelon::default()).collect(),
        reps: Vec::new(),
        alive: vec![Vec::new(); dims],
        bars: Vec::new(),
    };
    for (i, op) in ops.iter().enumerate() {
        let t = i + 1;
        match *op {
            Op::Insert(s) => st.insert(s, t)?,
            Op::Delete(s) => st.delete(s, t)?,
        }
    }
    let end = ops.len();
    let mut bars = st.bars;
    for list in &st.alive {
        bars.extend(
            list.iter()
                .map(|&r| (st.reps[r].dim, st.reps[r].birth, end)),
        );
    }
    bars.sort();
    Ok(bars)
}
