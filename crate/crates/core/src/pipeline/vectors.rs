//! Turning a vector field sampled at the vertices of a planar triangulation into a multivector
//! field.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::mvf::{build_mvf, is_convex, MultivectorField};
use crate::set::SimplexSet;

/// Planar positions and sampled directions, both keyed by vertex label.
#[derive(Clone, Debug, Default)]
pub struct SampledVectorField {
    pub positions: HashMap<String, [f64; 2]>,
    pub vectors: HashMap<String, [f64; 2]>,
}

impl SampledVectorField {
    pub fn insert(&mut self, label: impl Into<String>, position: [f64; 2], vector: [f64; 2]) {
        let label = label.into();
        self.positions.insert(label.clone(), position);
        self.vectors.insert(label, vector);
    }
}

const EPS: f64 = 1e-12;

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn unit(a: [f64; 2]) -> Option<[f64; 2]> {
    let n = dot(a, a).sqrt();
    (n > EPS).then(|| [a[0] / n, a[1] / n])
}

struct Geometry<'a> {
    k: &'a SimplicialComplex,
    pos: Vec<[f64; 2]>,
    vec: Vec<[f64; 2]>,
}

impl<'a> Geometry<'a> {
    fn new(k: &'a SimplicialComplex, svf: &SampledVectorField) -> Result<Self> {
        if k.dim() > 2 {
            return Err(Error::Geometry(format!(
                "complex has dimension {}",
                k.dim()
            )));
        }
        let mut pos = Vec::new();
        let mut vec = Vec::new();
        for label in k.vertex_labels() {
            let p = svf
                .positions
                .get(label)
                .ok_or_else(|| Error::Geometry(format!("vertex {label} has no position")))?;
            let v = svf
                .vectors
                .get(label)
                .ok_or_else(|| Error::Geometry(format!("vertex {label} has no vector")))?;
            if !p.iter().chain(v).all(|x| x.is_finite()) {
                return Err(Error::Geometry(format!(
                    "vertex {label} has a non-finite sample"
                )));
            }
            pos.push(*p);
            vec.push(*v);
        }
        for i in 0..k.len() {
            if k.simplex(i).dim() == 1 && k.cofaces(i).len() > 2 {
                return Err(Error::Geometry(format!(
                    "edge {} bounds more than two triangles",
                    k.simplex(i)
                )));
            }
        }
        Ok(Geometry { k, pos, vec })
    }

    /// Vertices are the first simplices in index order, so a vertex index is its label's index.
    fn vertices(&self, s: usize) -> Vec<usize> {
        self.k
            .closure_of(s)
            .iter()
            .copied()
            .filter(|&f| self.k.simplex(f).dim() == 0)
            .collect()
    }

    /// The simplex a vertex flows into: the incident edge or triangle whose cone bisector makes
    /// the largest positive inner product with the sampled direction.
    fn vertex_target(&self, v: usize) -> Option<usize> {
        let w = unit(self.vec[v])?;
        let mut best: Option<(f64, usize)> = None;
        for c in self.k.star_of(v) {
            let dirs: Vec<[f64; 2]> = self
                .vertices(c)
                .into_iter()
                .filter(|&u| u != v)
                .filter_map(|u| unit(sub(self.pos[u], self.pos[v])))
                .collect();
            let sum = dirs
                .iter()
                .fold([0.0, 0.0], |acc, d| [acc[0] + d[0], acc[1] + d[1]]);
            let Some(bisector) = unit(sum) else { continue };
            let score = dot(bisector, w);
            if score > 0.0 && best.is_none_or(|(b, _)| score > b + EPS) {
                best = Some((score, c));
            }
        }
        best.map(|(_, c)| c)
    }

    /// The triangle an edge's midpoint flow enters, if any.
    fn edge_target(&self, e: usize) -> Option<usize> {
        let ends = self.vertices(e);
        let (a, b) = (ends[0], ends[1]);
        let w = unit([
            (self.vec[a][0] + self.vec[b][0]) / 2.0,
            (self.vec[a][1] + self.vec[b][1]) / 2.0,
        ])?;
        let along = sub(self.pos[b], self.pos[a]);
        let normal = unit([-along[1], along[0]])?;
        let mut best: Option<(f64, usize)> = None;
        for &t in self.k.cofaces(e) {
            let c = *self
                .vertices(t)
                .iter()
                .find(|&&u| u != a && u != b)
                .expect("triangle has a third vertex");
            let side = dot(sub(self.pos[c], self.pos[a]), normal);
            let inward = if side >= 0.0 {
                normal
            } else {
                [-normal[0], -normal[1]]
            };
            let score = dot(inward, w);
            if score > 0.0 && best.is_none_or(|(s, _)| score > s + EPS) {
                best = Some((score, t));
            }
        }
        best.map(|(_, t)| t)
    }

    /// All simplices between `lo` and `hi` in the face order.
    fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        let below: Vec<usize> = self.k.closure_of(hi).to_vec();
        below
            .into_iter()
            .filter(|&s| self.k.closure_of(s).binary_search(&lo).is_ok())
            .collect()
    }
}

/// Whether one member of the sorted group has all the others as faces.
fn has_top(k: &SimplicialComplex, group: &[usize]) -> bool {
    let top = *group.last().expect("non-empty group");
    let faces = k.closure_of(top);
    group.iter().all(|s| faces.binary_search(s).is_ok())
}

/// Builds a field from sampled directions. Every vertex is grouped with the face-order interval
/// up to the edge or triangle it points into, every edge with the triangle its midpoint flow
/// enters, and proposals are merged in order (vertices first, then edges, by index) unless the
/// merged group would stop being convex or would no longer be the faces of a single simplex. A vertex with a zero vector stays a singleton.
pub fn mvf_from_vectors(
    k: Arc<SimplicialComplex>,
    svf: &SampledVectorField,
) -> Result<MultivectorField> {
    let geo = Geometry::new(&k, svf)?;
    let mut proposals: Vec<Vec<usize>> = Vec::new();
    for v in 0..k.len() {
        if k.simplex(v).dim() == 0 {
            if let Some(c) = geo.vertex_target(v) {
                proposals.push(geo.interval(v, c));
            }
        }
    }
    for e in 0..k.len() {
        if k.simplex(e).dim() == 1 {
            if let Some(t) = geo.edge_target(e) {
                proposals.push(vec![e, t]);
            }
        }
    }

    let mut owner: Vec<usize> = (0..k.len()).collect();
    let mut groups: Vec<Vec<usize>> = (0..k.len()).map(|s| vec![s]).collect();
    for proposal in proposals {
        let mut ids: Vec<usize> = proposal.iter().map(|&s| owner[s]).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() < 2 {
            continue;
        }
        let mut merged: Vec<usize> = ids
            .iter()
            .flat_map(|&g| groups[g].iter().copied())
            .collect();
        merged.sort_unstable();
        if !is_convex(&k, &merged) || !has_top(&k, &merged) {
            continue;
        }
        let target = ids[0];
        for &g in &ids[1..] {
            for &s in &groups[g] {
                owner[s] = target;
            }
            groups[g].clear();
        }
        groups[target] = merged;
    }
    let vectors: Vec<SimplexSet> = groups
        .into_iter()
        .filter(|g| g.len() > 1)
        .map(|g| SimplexSet::from_indices(k.len(), g))
        .collect();
    build_mvf(k, &vectors)
}
