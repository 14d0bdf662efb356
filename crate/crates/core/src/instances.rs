//! Seeded random problem instances for tests and benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::TAU;

use crate::geom::{Point, PolygonChain};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub vertices: Vec<Point>,
    pub focus: Point,
}

impl Instance {
    pub fn chain(&self) -> PolygonChain {
        PolygonChain::new(&self.vertices, self.focus).expect("generated instance is valid")
    }
}

fn vertex_mean(v: &[Point]) -> Point {
    let k = v.len() as f64;
    let (sx, sy) = v.iter().fold((0.0, 0.0), |a, p| (a.0 + p.x, a.1 + p.y));
    Point::new(sx / k, sy / k)
}

fn jitter(rng: &mut StdRng, p: Point, amount: f64) -> Point {
    Point::new(
        p.x + rng.gen_range(-amount..amount),
        p.y + rng.gen_range(-amount..amount),
    )
}

fn accept(v: Vec<Point>, focus: Point) -> Option<Instance> {
    PolygonChain::new(&v, focus).ok()?;
    Some(Instance { vertices: v, focus })
}

/// Simple polygon with `n` vertices in the unit disk, star-shaped around the
/// origin, with the focus at the jittered vertex mean.
pub fn random_simple(seed: u64, n: usize) -> Instance {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let v: Vec<Point> = angles
            .iter()
            .map(|&a| {
                let r = rng.gen_range(0.3..1.0);
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let focus = jitter(&mut rng, vertex_mean(&v), 0.05);
        if let Some(inst) = accept(v, focus) {
            return inst;
        }
    }
}

/// Convex polygon with `n` vertices on the unit circle and the focus at the
/// jittered vertex mean.
pub fn random_convex(seed: u64, n: usize) -> Instance {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let v: Vec<Point> = angles.iter().map(|a| Point::new(a.cos(), a.sin())).collect();
        let focus = jitter(&mut rng, vertex_mean(&v), 0.05);
        if let Some(inst) = accept(v, focus) {
            return inst;
        }
    }
}

/// Polygon with `n` vertices drawn uniformly from the unit disk in random
/// order; for `n > 3` it is self-intersecting with high probability.
pub fn random_self_intersecting(seed: u64, n: usize) -> Instance {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let v: Vec<Point> = (0..n)
            .map(|_| {
                let a = rng.gen_range(0.0..TAU);
                let r = rng.gen_range(0.0f64..1.0).sqrt();
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        let focus = jitter(&mut rng, vertex_mean(&v), 0.05);
        if let Some(inst) = accept(v, focus) {
            return inst;
        }
    }
}

/// Regular `n`-gon of circumradius 1 centred at the origin, rotated by
/// `phase`, with the given focus.
pub fn regular(n: usize, phase: f64, focus: Point) -> Instance {
    let v = (0..n)
        .map(|k| {
            let a = phase + TAU * k as f64 / n as f64;
            Point::new(a.cos(), a.sin())
        })
        .collect();
    Instance { vertices: v, focus }
}

/// Unit square with the focus at its centre.
pub fn unit_square() -> Instance {
    Instance {
        vertices: vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ],
        focus: Point::new(0.5, 0.5),
    }
}
