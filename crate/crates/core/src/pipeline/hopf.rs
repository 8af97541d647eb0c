//! Triangulated grids and the planar Hopf normal form
//! `x' = λx - y - x(x² + y²)`, `y' = x + λy - y(x² + y²)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{build_complex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::mvf::MultivectorField;
use crate::set::SimplexSet;

use super::vectors::{mvf_from_vectors, SampledVectorField};

/// Half-width of the square sampled by [`gen_hopf_fields`].
pub const DEFAULT_EXTENT: f64 = 2.0;

/// An `n × n` vertex grid on `[-extent, extent]²`, each square cut along its rising diagonal.
#[derive(Clone, Debug)]
pub struct HopfGrid {
    pub complex: Arc<SimplicialComplex>,
    pub n: usize,
    pub extent: f64,
}

fn label(i: usize, j: usize) -> String {
    format!("v{i}_{j}")
}

impl HopfGrid {
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.extent + 2.0 * self.extent * i as f64 / (self.n - 1) as f64
    }

    /// Positions of all vertices, keyed by label.
    pub fn points(&self) -> impl Iterator<Item = (String, [f64; 2])> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).map(move |j| (label(i, j), [self.coordinate(i), self.coordinate(j)]))
        })
    }
}

pub fn hopf_grid(n: usize, extent: f64) -> Result<HopfGrid> {
    if n < 4 {
        return Err(Error::Geometry(format!(
            "grid needs at least 4 vertices per side, got {n}"
        )));
    }
    if extent.is_nan() || extent <= 0.0 {
        return Err(Error::Geometry(format!(
            "extent must be positive, got {extent}"
        )));
    }
    let mut gens = Vec::with_capacity(2 * (n - 1) * (n - 1));
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let (a, b, c, d) = (
                label(i, j),
                label(i + 1, j),
                label(i, j + 1),
                label(i + 1, j + 1),
            );
            gens.push(Simplex::new([a.clone(), b, d.clone()])?);
            gens.push(Simplex::new([a, c, d])?);
        }
    }
    Ok(HopfGrid {
        complex: Arc::new(build_complex(&gens)),
        n,
        extent,
    })
}

/// The normal-form vector at `(x, y)`.
pub fn hopf_vector(lambda: f64, [x, y]: [f64; 2]) -> [f64; 2] {
    let r2 = x * x + y * y;
    [lambda * x - y - x * r2, x + lambda * y - y * r2]
}

/// Samples the normal form centered at `center` at every grid vertex. With `noise > 0` each
/// vector is perturbed by a uniform offset of relative size `noise` drawn from `seed`.
pub fn hopf_sample(
    grid: &HopfGrid,
    lambda: f64,
    center: [f64; 2],
    noise: f64,
    seed: u64,
) -> SampledVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut svf = SampledVectorField::default();
    for (name, p) in grid.points() {
        let mut v = hopf_vector(lambda, [p[0] - center[0], p[1] - center[1]]);
        if noise > 0.0 {
            let len = (v[0] * v[0] + v[1] * v[1]).sqrt();
            v[0] += noise * len * rng.random_range(-1.0..=1.0);
            v[1] += noise * len * rng.random_range(-1.0..=1.0);
        }
        svf.insert(name, p, v);
    }
    svf
}

/// Closure of the triangles lying in `[-half, half]²`.
pub fn window(grid: &HopfGrid, half: f64) -> SimplexSet {
    window_at(grid, [0.0, 0.0], half)
}

/// Closure of the triangles lying in the square of half-width `half` around `center`.
pub fn window_at(grid: &HopfGrid, center: [f64; 2], half: f64) -> SimplexSet {
    region(grid, |[x, y]| {
        (x - center[0]).abs() <= half + 1e-9 && (y - center[1]).abs() <= half + 1e-9
    })
}

/// Closure of the triangles lying in the disk of the given radius around the origin.
pub fn disk(grid: &HopfGrid, radius: f64) -> SimplexSet {
    disk_at(grid, [0.0, 0.0], radius)
}

/// Closure of the triangles lying in the disk of the given radius around `center`.
pub fn disk_at(grid: &HopfGrid, center: [f64; 2], radius: f64) -> SimplexSet {
    region(grid, |[x, y]| {
        (x - center[0]).hypot(y - center[1]) <= radius + 1e-9
    })
}

fn region(grid: &HopfGrid, inside: impl Fn([f64; 2]) -> bool) -> SimplexSet {
    let k = &grid.complex;
    let inside: Vec<bool> = grid.points().map(|(_, p)| inside(p)).collect();
    let mut top = k.empty_set();
    for s in 0..k.len() {
        if k.simplex(s).dim() == 2
            && k.closure_of(s)
                .iter()
                .all(|&f| k.simplex(f).dim() > 0 || inside[vertex_slot(grid, f)])
        {
            top.insert(s);
        }
    }
    k.closure(&top)
}

/// Position of a vertex in [`HopfGrid::points`] order.
fn vertex_slot(grid: &HopfGrid, v: usize) -> usize {
    let name = &grid.complex.simplex(v).vertices()[0];
    let (i, j) = name[1..].split_once('_').expect("grid label");
    i.parse::<usize>().expect("grid label") * grid.n + j.parse::<usize>().expect("grid label")
}

/// Fields for each `λ` on an `n × n` grid over `[-2, 2]²`, named `hopf_{index}`.
pub fn gen_hopf_fields(n: usize, lambdas: &[f64]) -> Result<Vec<MultivectorField>> {
    let grid = hopf_grid(n, DEFAULT_EXTENT)?;
    gen_hopf_fields_on(&grid, lambdas, 0.0, 0)
}

/// Like [`gen_hopf_fields`] on a given grid, with optional noise.
pub fn gen_hopf_fields_on(
    grid: &HopfGrid,
    lambdas: &[f64],
    noise: f64,
    seed: u64,
) -> Result<Vec<MultivectorField>> {
    lambdas
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let svf = hopf_sample(grid, l, [0.0, 0.0], noise, seed.wrapping_add(i as u64));
            Ok(mvf_from_vectors(grid.complex.clone(), &svf)?.with_name(format!("hopf_{}", i + 1)))
        })
        .collect()
}

/// Parses `a:b:steps` into `steps` evenly spaced values from `a` to `b`, or a comma list.
pub fn parse_lambdas(text: &str) -> Result<Vec<f64>> {
    let bad = |m: &str| Error::Parse {
        path: "--lambdas".into(),
        line: 0,
        msg: format!("{m}: {text:?}"),
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [a, b, steps] => {
            let (a, b) = (num(a)?, num(b)?);
            let steps: usize = steps.trim().parse().map_err(|_| bad("bad step count"))?;
            match steps {
                0 => Err(bad("step count is zero")),
                1 => Ok(vec![a]),
                _ => Ok((0..steps)
                    .map(|i| a + (b - a) * i as f64 / (steps - 1) as f64)
                    .collect()),
            }
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(bad("expected a:b:steps or a comma list")),
    }
}
