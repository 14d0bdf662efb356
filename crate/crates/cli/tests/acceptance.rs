//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test --release -p feedlink-cli --test acceptance`.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use feedlink_core::instances::{random_convex, random_self_intersecting, random_simple, unit_square, Instance};
use feedlink_core::merge::Sides;
use feedlink_core::oracle::{dilation_of, dilation_via, grid_best, jump_change_points, via_on, OracleConfig};
use feedlink_core::plot::{global_min, o_eval};
use feedlink_core::retarget::{retargeting_points, retargeting_points_from};
use feedlink_core::sweep::{contact_of, slide_lever, slope_at, state_slope};
use feedlink_core::{solve, LeverKind, LeverState, RealizedSequence, Segments};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

/// 200 simple polygons (half star-shaped, half convex) and 50
/// self-intersecting ones, n in 3..=64.
fn corpus() -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut out: Vec<Instance> = (0..100).map(|s| random_simple(s, rng.gen_range(3..=64))).collect();
    out.extend((0..100).map(|s| random_convex(5_000 + s, rng.gen_range(3..=64))));
    out.extend((0..50).map(|s| random_self_intersecting(10_000 + s, rng.gen_range(3..=64))));
    out
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn optimality(corpus: &[Instance]) -> Outcome {
    let start = Instant::now();
    let (mut excess, mut recheck, mut failures) = (0.0f64, 0.0f64, 0);
    for inst in corpus {
        let chain = inst.chain();
        let Ok(sol) = solve(&chain) else {
            failures += 1;
            continue;
        };
        let extra: Vec<f64> = sol.merged.entries.iter().map(|e| e.p).collect();
        let (_, grid) = grid_best(&chain, &OracleConfig::default(), &extra);
        let d = sol.result.dilation;
        let e = (d - grid) / grid;
        let r = rel(dilation_via(&chain, sol.result.t_star).value, d);
        excess = excess.max(e);
        recheck = recheck.max(r);
        if e > 1e-6 || r > 1e-7 {
            failures += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: failures == 0,
        detail: format!(
            "{} instances, {failures} failures, max excess over grid {excess:.2e} (tol 1e-6), max recheck error {recheck:.2e} (tol 1e-7), {secs:.1}s",
            corpus.len()
        ),
    }
}

fn slope_identity(corpus: &[Instance]) -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let (mut worst_left, mut worst_env, mut bad) = (0.0f64, 0.0f64, 0);
    let picked: Vec<&Instance> = corpus.iter().step_by(corpus.len() / 50).take(50).collect();
    for inst in &picked {
        let chain = inst.chain();
        let sol = solve(&chain).expect("solvable");
        let segs = &sol.sides.left_segs;
        for _ in 0..200 {
            let t = rng.gen_range(0.0..chain.perimeter());
            let via = via_on(segs, t);
            let s = slope_at(segs, &sol.sides.left, t);
            let (sl, sr) = sol.sides.slopes(t);
            let a = (s * via.left - 1.0).abs();
            let b = (sl.min(sr) * via.value - 1.0).abs();
            worst_left = worst_left.max(a);
            worst_env = worst_env.max(b);
            if a > 1e-7 || b > 1e-7 {
                bad += 1;
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} instances x 200 t, {bad} violations, max |s+ * left - 1| {worst_left:.2e}, max |min(s+,s-) * dilation - 1| {worst_env:.2e} (tol 1e-7)",
            picked.len()
        ),
    }
}

fn intervals(seq: &RealizedSequence) -> Vec<(f64, f64, LeverState)> {
    let e = seq.entries();
    (0..e.len())
        .map(|k| (e[k].0, e.get(k + 1).map_or(seq.end(), |x| x.0), e[k].1))
        .collect()
}

/// Along one sequence: origins and contacts never move right while
/// the lever moves left.
fn monotone_contacts(segs: &Segments, seq: &RealizedSequence) -> usize {
    let tol = 1e-9 * segs.period();
    let mut bad = 0;
    let (mut last_c, mut last_o) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (a, b, s) in intervals(seq) {
        let (ca, cb) = (contact_of(segs, s, a), contact_of(segs, s, b));
        let (oa, ob) = (o_eval(segs, a), o_eval(segs, b));
        if ca < last_c - tol || cb < ca - tol || oa < last_o - tol || ob < oa - tol {
            bad += 1;
        }
        last_c = cb;
        last_o = ob;
    }
    bad
}

/// Slopes of K and V states do not decrease in the sweep's
/// own parameter. Applied to the mirrored sweep this is the nonincreasing
/// right side.
fn monotone_kv_slopes(segs: &Segments, seq: &RealizedSequence) -> usize {
    let mut bad = 0;
    for (a, b, s) in intervals(seq) {
        if s.kind == LeverKind::Y || b <= a {
            continue;
        }
        let v: Vec<f64> = (1..=10)
            .map(|q| state_slope(segs, s, a + (b - a) * q as f64 / 11.0))
            .collect();
        bad += v.windows(2).filter(|w| w[1] < w[0] - 1e-10).count();
    }
    bad
}

fn endpoint_contact(sides: &Sides, rng: &mut StdRng) -> usize {
    let mut bad = 0;
    for _ in 0..100 {
        let t = rng.gen_range(0.0..sides.period());
        let (sl, sr) = sides.slopes(t);
        if sides.right_state(t).kind == LeverKind::Y && sl > sr + 1e-9 {
            bad += 1;
        }
        if sides.left_state(t).kind == LeverKind::Y && sr > sl + 1e-9 {
            bad += 1;
        }
    }
    bad
}

fn invariant_suite(corpus: &[Instance]) -> Outcome {
    let mut rng = StdRng::seed_from_u64(99);
    let (mut l1, mut l2, mut l34, mut l5) = (0, 0, 0, 0);
    for inst in corpus {
        let chain = inst.chain();
        let sol = solve(&chain).expect("solvable");
        let sd = &sol.sides;
        let segs = &sd.left_segs;
        let mu = chain.perimeter();
        for _ in 0..100 {
            let (a, b) = (rng.gen_range(0.0..mu), rng.gen_range(0.0..mu));
            if (segs.h(b) - segs.h(a)).abs() > (b - a).abs() + 1e-9 {
                l1 += 1;
            }
        }
        l2 += monotone_contacts(segs, &sd.left) + monotone_contacts(&sd.right_segs, &sd.right);
        l34 += monotone_kv_slopes(segs, &sd.left) + monotone_kv_slopes(&sd.right_segs, &sd.right);
        l5 += endpoint_contact(sd, &mut rng);
    }
    Outcome {
        pass: l1 + l2 + l34 + l5 == 0,
        detail: format!(
            "{} instances, violations: slope bound {l1}, origin/contact monotonicity {l2}, K/V slope monotonicity {l34}, endpoint-contact inequality {l5}",
            corpus.len()
        ),
    }
}

fn retargeting() -> Outcome {
    let mut rng = StdRng::seed_from_u64(31);
    let (mut bad, mut worst) = (0, 0.0f64);
    for seed in 0..100u64 {
        let n = rng.gen_range(3..=20);
        let inst = if seed % 4 == 3 {
            random_self_intersecting(500 + seed, n)
        } else {
            random_simple(500 + seed, n)
        };
        let segs = inst.chain().segments();
        let (_, j0) = global_min(&segs);
        let r = retargeting_points_from(&segs, j0);
        let k = segs.n() as i64;
        let scan = jump_change_points(&segs, segs.e(j0 + 1), segs.e(j0 + k + 1), 400);
        let mu = segs.period();
        let same = scan.len() == r.len()
            && scan.iter().zip(r.points()).all(|(a, b)| {
                worst = worst.max((a.0 - b.x).abs() / mu);
                (a.0 - b.x).abs() <= 1e-7 * mu && a.1 == b.dest
            });
        if !same {
            bad += 1;
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("100 instances (n <= 20), {bad} mismatches, max position error {worst:.2e} * mu (tol 1e-7)"),
    }
}

fn power_law(ns: &[f64], ys: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ls.iter().sum::<f64>() / k);
    let num: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

fn linearity() -> Outcome {
    const SIZES: [usize; 6] = [8, 16, 32, 64, 128, 256];
    const PER_SIZE: u64 = 16;
    let (mut events, mut retargets, mut capped) = (Vec::new(), Vec::new(), 0);
    for &n in &SIZES {
        let (mut ev, mut rt) = (0.0, 0.0);
        for s in 0..PER_SIZE {
            let seed = 7000 + n as u64 * 100 + s;
            let inst = if s % 2 == 0 {
                random_convex(seed, n)
            } else {
                random_self_intersecting(seed, n)
            };
            let segs = inst.chain().segments();
            let r = retargeting_points(&segs);
            match slide_lever(&segs, &r) {
                Ok(seq) => ev += seq.event_count() as f64,
                Err(_) => capped += 1,
            }
            rt += r.len() as f64;
        }
        events.push(ev / PER_SIZE as f64);
        retargets.push(rt / PER_SIZE as f64);
    }
    let ns: Vec<f64> = SIZES.iter().map(|&n| n as f64).collect();
    let (pe, pr) = (power_law(&ns, &events), power_law(&ns, &retargets));
    let ok = |p: f64| (0.8..=1.2).contains(&p);
    Outcome {
        pass: capped == 0 && ok(pe) && ok(pr),
        detail: format!(
            "exponents: events {pe:.3}, retargeting points {pr:.3} (range [0.8, 1.2]); mean events {events:.0?}; budget 50n+100 exceeded {capped} times"
        ),
    }
}

fn square() -> Outcome {
    let chain = unit_square().chain();
    let segs = chain.segments();
    let seq = slide_lever(&segs, &retargeting_points(&segs)).expect("square sweeps");
    let direct = dilation_of(&chain, 0.5, 2.5).expect("distinct points");
    let lever = 1.0 / slope_at(&segs, &seq, 0.5);
    let via = dilation_via(&chain, 0.5);
    let pass = (direct - 5.0).abs() <= 1e-12
        && (lever - 5.0).abs() <= 1e-12
        && (via.value - 5.0).abs() <= 1e-12
        && (via.witness_t - chain.antipode(0.5)).abs() <= 1e-12;
    Outcome {
        pass,
        detail: format!(
            "dilation via side midpoint: definition {direct}, lever {lever}, oracle {} with witness at t = {} (antipode 2.5)",
            via.value, via.witness_t
        ),
    }
}

fn determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("fixtures exist")
        .map(|e| e.expect("readable entry").path())
        .collect();
    files.sort();
    let run = |f: &PathBuf| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_feedlink"));
        cmd.arg("solve").arg("--input").arg(f);
        if f.extension().is_some_and(|e| e == "txt") {
            cmd.args(["--format", "plain"]);
        }
        let out = cmd.output().expect("binary runs");
        let body: String = String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| !l.trim_start().starts_with("\"elapsed_ms\""))
            .map(|l| format!("{l}\n"))
            .collect();
        (out.status.code(), body)
    };
    let mut differing = Vec::new();
    for f in &files {
        if run(f) != run(f) {
            differing.push(f.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    Outcome {
        pass: differing.is_empty(),
        detail: format!(
            "{} fixtures solved twice, byte-identical reports except elapsed_ms; differing: {differing:?}",
            files.len()
        ),
    }
}

fn main() -> ExitCode {
    let corpus = corpus();
    let results = [
        ("1 oracle optimality", optimality(&corpus)),
        ("2 slope identity", slope_identity(&corpus)),
        ("3 invariant suite", invariant_suite(&corpus)),
        ("4 retargeting", retargeting()),
        ("5 linearity", linearity()),
        ("6 square fixture", square()),
        ("7 determinism", determinism()),
    ];
    let mut all = true;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
