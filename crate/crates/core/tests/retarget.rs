use feedlink_core::instances::{random_self_intersecting, random_simple, unit_square, Instance};
use feedlink_core::oracle::{brute_jump, jump_change_points};
use feedlink_core::plot::global_min;
use feedlink_core::retarget::{retargeting_points, retargeting_points_from};
use rand::{Rng, SeedableRng};

fn corpus(count: u64, nmax: usize) -> impl Iterator<Item = Instance> {
    (0..count).map(move |seed| {
        let n = 3 + (seed as usize * 7) % (nmax - 2);
        if seed % 4 == 3 {
            random_self_intersecting(seed, n)
        } else {
            random_simple(seed, n)
        }
    })
}

#[test]
fn matches_brute_force_change_points() {
    for (seed, inst) in corpus(60, 20).enumerate() {
        let segs = inst.chain().segments();
        let (_, j0) = global_min(&segs);
        let r = retargeting_points_from(&segs, j0);
        let n = segs.n() as i64;
        let scan = jump_change_points(&segs, segs.e(j0 + 1), segs.e(j0 + n + 1), 400);
        let mu = segs.period();
        assert_eq!(scan.len(), r.len(), "seed {seed}");
        for (a, b) in scan.iter().zip(r.points()) {
            assert!((a.0 - b.x).abs() <= 1e-7 * mu, "seed {seed}: {} vs {}", a.0, b.x);
            assert_eq!(a.1, b.dest, "seed {seed} at {}", b.x);
        }
    }
}

#[test]
fn jump_of_agrees_with_brute_jump() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for inst in corpus(24, 16) {
        let segs = inst.chain().segments();
        let r = retargeting_points(&segs);
        let mu = segs.period();
        let mut mismatches = 0;
        for _ in 0..500 {
            let x = rng.gen_range(-mu..2.0 * mu);
            // Points within rounding of a retargeting position are ambiguous.
            let q = r.first_at_or_after(x);
            if (r.at(q).x - x).abs() < 1e-9 * mu || (r.at(q - 1).x - x).abs() < 1e-9 * mu {
                continue;
            }
            if r.jump_of(x, segs.index_of(x)) != brute_jump(&segs, x) {
                mismatches += 1;
            }
        }
        assert_eq!(mismatches, 0);
    }
}

#[test]
fn square_has_no_hidden_segments() {
    let segs = unit_square().chain().segments();
    let r = retargeting_points(&segs);
    assert!(r.len() <= 2 * segs.n());
    let scan = jump_change_points(&segs, segs.e(1), segs.e(5), 400);
    assert_eq!(scan.len(), r.len());
    for (a, b) in scan.iter().zip(r.points()) {
        assert!((a.0 - b.x).abs() <= 1e-9 * segs.period());
        assert_eq!(a.1, b.dest);
    }
}

#[test]
fn deep_valley_destinations_alternate() {
    use feedlink_core::geom::{Point, PolygonChain};
    let v = [Point::new(0.0, 0.0), Point::new(10.0, 0.0), Point::new(0.0, 1.0)];
    let segs = PolygonChain::new(&v, Point::new(5.0, 0.4)).unwrap().segments();
    let r = retargeting_points(&segs);
    let pts = r.points();
    assert!(!pts.is_empty());
    for w in pts.windows(2) {
        assert!(w[0].x <= w[1].x);
        assert_ne!(w[0].dest, w[1].dest);
    }
}

fn near_vertex(seed: u64, eps: f64) -> feedlink_core::Segments {
    let n = 3 + (seed as usize % 30);
    let inst = if seed % 2 == 0 {
        random_simple(seed, n)
    } else {
        random_self_intersecting(seed, n)
    };
    let v0 = inst.vertices[0];
    let f = feedlink_core::Point::new(v0.x * (1.0 - eps), v0.y * (1.0 - eps));
    feedlink_core::PolygonChain::new(&inst.vertices, f)
        .unwrap()
        .segments()
}

// Both pieces around the vertex hold their apex, a hair apart.
#[test]
fn twin_apexes_at_a_vertex() {
    let segs = near_vertex(53, 1e-6);
    let (_, j0) = global_min(&segs);
    let r = retargeting_points_from(&segs, j0);
    let n = segs.n() as i64;
    let scan = jump_change_points(&segs, segs.e(j0 + 1), segs.e(j0 + n + 1), 400);
    let mu = segs.period();
    assert_eq!(scan.len(), r.len());
    for (a, b) in scan.iter().zip(r.points()) {
        assert!((a.0 - b.x).abs() <= 1e-7 * mu, "{} vs {}", a.0, b.x);
        assert_eq!(a.1, b.dest, "at {}", b.x);
    }
}

#[test]
fn focus_near_vertex_matches_brute_jump() {
    for seed in 0..40 {
        let segs = near_vertex(seed, 1e-6);
        let r = retargeting_points(&segs);
        let mu = segs.period();
        for k in 0..500 {
            let x = mu * (k as f64 + 0.123) / 500.0;
            let near = r.points().iter().any(|p| {
                let dx = (p.x - x).rem_euclid(mu);
                dx.min(mu - dx) < 1e-9 * mu
            });
            if !near {
                assert_eq!(r.jump_of(x, segs.index_of(x)), brute_jump(&segs, x), "seed {seed} x {x}");
            }
        }
    }
}
