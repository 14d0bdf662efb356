//! Right dilation by mirroring, merging of the two realized sequences and
//! the per-interval maximization of the lower slope envelope.

use crate::error::SolveError;
use crate::geom::{Point, PolygonChain, Segments};
use crate::poly::golden_max;
use crate::retarget::{retargeting_points, Retargets};
use crate::sweep::{contact_of, slide_lever, state_slope, LeverKind, LeverState, RealizedSequence};

/// Left and right sweeps of one polygon. The right side lives on the
/// reversed chain, whose parameter `tau` is the point `mu - t`.
#[derive(Debug, Clone)]
pub struct Sides {
    pub left_segs: Segments,
    pub right_segs: Segments,
    pub left_retargets: Retargets,
    pub right_retargets: Retargets,
    pub left: RealizedSequence,
    pub right: RealizedSequence,
    period: f64,
}

impl Sides {
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Left state covering `t`.
    pub fn left_state(&self, t: f64) -> LeverState {
        self.left.state_at(t)
    }

    /// Right state covering `t`, in indices of the reversed chain.
    pub fn right_state(&self, t: f64) -> LeverState {
        self.right.state_at(self.period - t)
    }

    /// `s+(t)`: reciprocal of the left dilation via `P(t)`.
    pub fn left_slope(&self, state: LeverState, t: f64) -> f64 {
        state_slope(&self.left_segs, state, t)
    }

    /// `s-(t)`: reciprocal of the right dilation via `P(t)`.
    pub fn right_slope(&self, state: LeverState, t: f64) -> f64 {
        state_slope(&self.right_segs, state, self.period - t)
    }

    /// Both slopes at `t`, looked up in the sequences.
    pub fn slopes(&self, t: f64) -> (f64, f64) {
        (
            self.left_slope(self.left_state(t), t),
            self.right_slope(self.right_state(t), t),
        )
    }
}

/// Runs the sweep on the chain and on its mirror image.
pub fn sides(chain: &PolygonChain) -> Result<Sides, SolveError> {
    let left_segs = chain.segments();
    let left_retargets = retargeting_points(&left_segs);
    let left = slide_lever(&left_segs, &left_retargets)?;
    let (right_segs, right_retargets, right) = right_sequence(chain)?;
    Ok(Sides {
        left_segs,
        right_segs,
        left_retargets,
        right_retargets,
        left,
        right,
        period: chain.perimeter(),
    })
}

/// Left-dilation pipeline on the reversed chain. Its slope at `tau` is the
/// right-dilation slope of the original chain at `mu - tau`.
pub fn right_sequence(
    chain: &PolygonChain,
) -> Result<(Segments, Retargets, RealizedSequence), SolveError> {
    let rev = chain.reversed();
    let segs = rev.segments();
    let retargets = retargeting_points(&segs);
    let seq = slide_lever(&segs, &retargets)?;
    Ok((segs, retargets, seq))
}

/// Breakpoint `p` with the states covering `[p, next breakpoint]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergedEntry {
    pub p: f64,
    pub left: LeverState,
    /// In indices of the reversed chain.
    pub right: LeverState,
}

/// Sorted union of both sides' breakpoints over `[0, mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedSequence {
    pub entries: Vec<MergedEntry>,
    pub period: f64,
}

impl MergedSequence {
    /// `[start, end]` of entry `k`.
    pub fn interval(&self, k: usize) -> (f64, f64) {
        let end = self.entries.get(k + 1).map_or(self.period, |e| e.p);
        (self.entries[k].p, end)
    }
}

/// Breakpoints of a sequence mapped by `f` and reduced into `[0, mu)`.
fn canonical(seq: &RealizedSequence, mu: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut out: Vec<f64> = seq
        .entries()
        .iter()
        .map(|e| f(e.0).rem_euclid(mu))
        .filter(|&p| p < mu)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Sorted union of two ascending breakpoint lists in `[0, mu)`, always
/// starting at 0.
pub fn merge_breakpoints(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut points = Vec::with_capacity(a.len() + b.len() + 1);
    points.push(0.0);
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        let next = if y >= b.len() || (x < a.len() && a[x] <= b[y]) {
            x += 1;
            a[x - 1]
        } else {
            y += 1;
            b[y - 1]
        };
        if next > *points.last().expect("nonempty") {
            points.push(next);
        }
    }
    points
}

/// Two-pointer merge of the canonicalized breakpoints; states are looked up
/// at interval midpoints.
pub fn merge_sequences(sides: &Sides) -> MergedSequence {
    let mu = sides.period();
    let a = canonical(&sides.left, mu, |t| t);
    let b = canonical(&sides.right, mu, |tau| mu - tau);
    let points = merge_breakpoints(&a, &b);
    let entries = (0..points.len())
        .map(|k| {
            let end = points.get(k + 1).copied().unwrap_or(mu);
            let mid = 0.5 * (points[k] + end);
            MergedEntry {
                p: points[k],
                left: sides.left_state(mid),
                right: sides.right_state(mid),
            }
        })
        .collect();
    MergedSequence {
        entries,
        period: mu,
    }
}

/// Maximizes `min(s+, s-)` over `[a, b]` for the states of `entry`.
/// Returns `(t, slope)`, the smallest such `t` on ties.
pub fn interval_opt(sides: &Sides, entry: &MergedEntry, a: f64, b: f64) -> (f64, f64) {
    envelope_opt(
        (entry.left.kind, entry.right.kind),
        |t| sides.left_slope(entry.left, t),
        |t| sides.right_slope(entry.right, t),
        a,
        b,
    )
}

/// Maximizes `min(s_plus, s_minus)` over `[a, b]`, where the kinds of the
/// two covering states decide the shape of both functions.
pub fn envelope_opt(
    kinds: (LeverKind, LeverKind),
    s_plus: impl Fn(f64) -> f64,
    s_minus: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
) -> (f64, f64) {
    let env = |t: f64| s_plus(t).min(s_minus(t));
    let diff = |t: f64| s_plus(t) - s_minus(t);
    let mut cands = vec![a, b];
    if b > a {
        match kinds {
            (LeverKind::Y, LeverKind::Y) => {
                const SAMPLES: usize = 32;
                let step = (b - a) / SAMPLES as f64;
                let k = (0..=SAMPLES)
                    .max_by(|&p, &q| env(a + step * p as f64).total_cmp(&env(a + step * q as f64)))
                    .unwrap_or(0);
                let lo = (a + step * k.saturating_sub(1) as f64).max(a);
                let hi = (a + step * (k + 1) as f64).min(b);
                cands.push(a + step * k as f64);
                cands.push(golden_max(env, lo, hi, 200).0);
            }
            (LeverKind::K | LeverKind::V, LeverKind::K | LeverKind::V) => {
                // s+ does not decrease and s- does not increase: the envelope
                // peaks where they cross.
                if diff(a) < 0.0 && diff(b) > 0.0 {
                    let (mut lo, mut hi) = (a, b);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if mid <= lo || mid >= hi {
                            break;
                        }
                        if diff(mid) < 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    cands.push(lo);
                    cands.push(hi);
                }
            }
            _ => {}
        }
    }
    let mut best = (a, env(a));
    for t in cands {
        let v = env(t);
        if v > best.1 || (v == best.1 && t < best.0) {
            best = (t, v);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedLinkResult {
    pub t_star: f64,
    pub q: Point,
    pub dilation: f64,
    /// Parameter of a boundary point attaining the dilation via `q`.
    pub witness_t: f64,
    pub witness: Point,
}

/// Optimal feed-link with everything computed on the way.
#[derive(Debug, Clone)]
pub struct Solution {
    pub result: FeedLinkResult,
    pub sides: Sides,
    pub merged: MergedSequence,
}

/// Computes the optimal feed-link and keeps the intermediate sequences.
pub fn solve(chain: &PolygonChain) -> Result<Solution, SolveError> {
    let sides = sides(chain)?;
    let merged = merge_sequences(&sides);
    let mu = chain.perimeter();
    let mut best: Option<(f64, f64, usize)> = None;
    for k in 0..merged.entries.len() {
        let (a, b) = merged.interval(k);
        let (t, s) = interval_opt(&sides, &merged.entries[k], a, b);
        if best.map_or(true, |(bt, bs, _)| s > bs || (s == bs && t < bt)) {
            best = Some((t, s, k));
        }
    }
    let (t, s, k) = best.expect("at least one interval");
    let entry = merged.entries[k];
    let sl = sides.left_slope(entry.left, t);
    let sr = sides.right_slope(entry.right, t);
    let witness_t = if sl <= sr {
        contact_of(&sides.left_segs, entry.left, t)
    } else {
        mu - contact_of(&sides.right_segs, entry.right, mu - t)
    };
    let t_star = chain.reduce(t);
    let witness_t = chain.reduce(witness_t);
    let result = FeedLinkResult {
        t_star,
        q: chain.point_at(t_star),
        dilation: 1.0 / s,
        witness_t,
        witness: chain.point_at(witness_t),
    };
    Ok(Solution {
        result,
        sides,
        merged,
    })
}

/// Optimal feed-link of `chain`: the boundary point minimizing the largest
/// dilation.
pub fn optimal_feedlink(chain: &PolygonChain) -> Result<FeedLinkResult, SolveError> {
    solve(chain).map(|s| s.result)
}
