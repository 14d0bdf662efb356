//! Direct evaluations used to cross-check the sweep pipeline.
//!
//! Nothing here depends on the sweep or on the retargeting stack. The
//! per-point dilation is exact: on every hyperbola piece the extreme slope
//! from the lever origin is attained at an end of the piece or at the
//! tangent contact, so a constant number of candidates per piece suffices.

use std::thread;

use crate::error::OracleError;
use crate::geom::{PolygonChain, Segments};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Number of uniform grid points for `q`; `None` means `100 n`.
    pub q_samples: Option<usize>,
    /// Use per-piece closed forms for the maximum over `r` (otherwise dense
    /// sampling of `r`).
    pub r_refine: bool,
    /// Worker threads for the grid search.
    pub threads: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            q_samples: None,
            r_refine: true,
            threads: 1,
        }
    }
}

/// Dilation of `P(t_r)` via `P(t_q)`, straight from the definition.
pub fn dilation_of(chain: &PolygonChain, t_q: f64, t_r: f64) -> Result<f64, OracleError> {
    let fwd = chain.arc_between(t_q, t_r);
    let route = fwd.min(chain.perimeter() - fwd);
    if route <= 1e-15 * chain.perimeter() {
        return Err(OracleError::CoincidentPoints(t_q, t_r));
    }
    let p = chain.focus();
    let q = chain.point_at(t_q);
    let r = chain.point_at(t_r);
    Ok((p.dist(q) + route) / p.dist(r))
}

/// Dilation via a boundary point split into its left and right parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Via {
    /// `max(left, right)`.
    pub value: f64,
    /// Parameter of a point attaining `value` (left side on ties).
    pub witness_t: f64,
    pub left: f64,
    pub left_witness: f64,
    pub right: f64,
    pub right_witness: f64,
}

/// Exact dilation via `P(t_q)`.
pub fn dilation_via(chain: &PolygonChain, t_q: f64) -> Via {
    via_on(&chain.segments(), t_q)
}

/// As [`dilation_via`] on precomputed plot segments.
pub fn via_on(segs: &Segments, t_q: f64) -> Via {
    let half = segs.half();
    let h_q = segs.h(t_q);

    // Left part: smallest slope from (t_q - h_q, 0) to the plot on
    // [t_q, t_q + half].
    let o = t_q - h_q;
    let (mut best_l, mut wit_l) = (f64::INFINITY, t_q);
    let (lo, hi) = (t_q, t_q + half);
    for j in segs.index_of(lo)..=segs.index_of(hi) {
        let s = segs.seg(j);
        let (a, b) = (s.e_left.max(lo), s.e_right.min(hi));
        if a > b {
            continue;
        }
        let mut cands = [a, b, f64::NAN];
        if o < s.m {
            let c = s.m + s.d * s.d / (s.m - o);
            if c > a && c < b {
                cands[2] = c;
            }
        }
        for x in cands.into_iter().filter(|x| !x.is_nan()) {
            let v = s.h(x) / (x - o);
            if v < best_l {
                best_l = v;
                wit_l = x;
            }
        }
    }

    // Right part: smallest slope from (t_q + h_q, 0) to the plot on
    // [t_q - half, t_q].
    let o2 = t_q + h_q;
    let (mut best_r, mut wit_r) = (f64::INFINITY, t_q);
    let (lo, hi) = (t_q - half, t_q);
    for j in segs.index_of(lo)..=segs.index_of(hi) {
        let s = segs.seg(j);
        let (a, b) = (s.e_left.max(lo), s.e_right.min(hi));
        if a > b {
            continue;
        }
        let mut cands = [a, b, f64::NAN];
        if o2 > s.m {
            let c = s.m - s.d * s.d / (o2 - s.m);
            if c > a && c < b {
                cands[2] = c;
            }
        }
        for x in cands.into_iter().filter(|x| !x.is_nan()) {
            let v = s.h(x) / (o2 - x);
            if v < best_r {
                best_r = v;
                wit_r = x;
            }
        }
    }

    let (left, right) = (1.0 / best_l, 1.0 / best_r);
    let (value, witness_t) = if left >= right {
        (left, wit_l)
    } else {
        (right, wit_r)
    };
    Via {
        value,
        witness_t,
        left,
        left_witness: wit_l,
        right,
        right_witness: wit_r,
    }
}

/// Dilation via `P(t_q)` by sampling `samples` targets uniformly over the
/// boundary.
pub fn dilation_via_sampled(chain: &PolygonChain, t_q: f64, samples: usize) -> (f64, f64) {
    let mu = chain.perimeter();
    let mut best = (1.0, t_q);
    for k in 1..samples {
        let t_r = t_q + mu * k as f64 / samples as f64;
        if let Ok(v) = dilation_of(chain, t_q, t_r) {
            if v > best.0 {
                best = (v, t_r);
            }
        }
    }
    best
}

/// Best grid point for `q`: uniform samples plus vertex parameters plus
/// `extra` candidates. Returns `(t_best, dilation)`, smallest `t` on ties.
pub fn grid_best(chain: &PolygonChain, cfg: &OracleConfig, extra: &[f64]) -> (f64, f64) {
    let segs = chain.segments();
    let mu = chain.perimeter();
    let samples = cfg.q_samples.unwrap_or(100 * chain.len()).max(chain.len());
    let mut cands: Vec<f64> = (0..samples).map(|k| mu * k as f64 / samples as f64).collect();
    cands.extend_from_slice(&chain.cum_len()[..chain.len()]);
    cands.extend(extra.iter().map(|&t| chain.reduce(t)));

    let eval = |t: f64| {
        if cfg.r_refine {
            via_on(&segs, t).value
        } else {
            dilation_via_sampled(chain, t, 20 * samples).0
        }
    };
    let better = |a: (f64, f64), b: (f64, f64)| b.1 < a.1 || (b.1 == a.1 && b.0 < a.0);
    let reduce = |chunk: &[f64]| {
        chunk.iter().fold((f64::INFINITY, f64::INFINITY), |acc, &t| {
            let cand = (t, eval(t));
            if better(acc, cand) {
                cand
            } else {
                acc
            }
        })
    };

    let threads = cfg.threads.max(1).min(cands.len());
    let parts: Vec<(f64, f64)> = if threads <= 1 {
        vec![reduce(&cands)]
    } else {
        let size = cands.len().div_ceil(threads);
        thread::scope(|sc| {
            let handles: Vec<_> = cands
                .chunks(size)
                .map(|chunk| sc.spawn(move || reduce(chunk)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("grid worker")).collect()
        })
    };
    parts
        .into_iter()
        .fold((f64::INFINITY, f64::INFINITY), |acc, c| if better(acc, c) { c } else { acc })
}

/// Largest slope of a chord from `(x, y)` to the hyperbola `(m, d)` over
/// `w` in `[a, b]` (or `[a, b)` unless `include_b`), `b < x`. Returns
/// `(slope, w, tangent)` where `tangent` tells whether the maximum is a
/// tangency inside the range rather than an end of it.
fn max_chord(
    m: f64,
    d: f64,
    a: f64,
    b: f64,
    include_b: bool,
    x: f64,
    y: f64,
) -> (f64, f64, bool) {
    let h = |w: f64| (w - m).hypot(d);
    let chord = |w: f64| (y - h(w)) / (x - w);
    let mut best = (f64::NEG_INFINITY, a, false);
    let mut consider = |w: f64, tangent: bool| {
        if w >= a && (w < b || (include_b && w == b)) {
            let c = chord(w);
            if c > best.0 || (c == best.0 && w > best.1) {
                best = (c, w, tangent);
            }
        }
    };
    consider(a, false);
    if include_b {
        consider(b, false);
    }
    // Stationary points: the chord is tangent at w, i.e.
    // (u U + d^2)^2 = y^2 (u^2 + d^2) with u = w - m, U = x - m.
    let uu = x - m;
    let d2 = d * d;
    let qa = uu * uu - y * y;
    let qb = 2.0 * uu * d2;
    let qc = d2 * d2 - y * y * d2;
    let roots: Vec<f64> = if qa.abs() < 1e-300 {
        if qb != 0.0 {
            vec![-qc / qb]
        } else {
            vec![]
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            vec![]
        } else {
            let s = disc.sqrt();
            vec![(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)]
        }
    };
    for u in roots {
        if u * uu + d2 >= 0.0 {
            consider(u + m, true);
        }
    }
    best
}

/// Index of the lowest segment visible from `H(x)` looking left, found by
/// maximizing the chord slope over one period of the plot to the left of
/// `x`. When no chord reaches the limiting slope of the piece just left of
/// `x`, that piece's index is returned.
///
/// Chord slopes that agree to within rounding are ordered by a first-order
/// criterion: a tangency strictly inside a piece beats the left end of the
/// next piece, and otherwise the point further right wins.
pub fn brute_jump(segs: &Segments, x: f64) -> i64 {
    const TIE: f64 = 1e-13;
    let jx = segs.index_of(x);
    let y = segs.h(x);
    // The piece immediately to the left of x.
    let own = if x > segs.e(jx) { jx } else { jx - 1 };
    let own_sup = segs.seg(own).dh(x);
    let lo = x - segs.period();
    let mut best: Option<(f64, f64, bool, i64)> = None;
    for k in segs.index_of(lo)..own {
        let s = segs.seg(k);
        let (a, b) = (s.e_left.max(lo), s.e_right.min(x));
        if a > b {
            continue;
        }
        let (c, w, tangent) = max_chord(s.m, s.d, a, b, b < s.e_right, x, y);
        let take = match best {
            None => true,
            Some((bc, bw, bt, _)) => {
                if (c - bc).abs() > TIE {
                    c > bc
                } else if tangent != bt {
                    tangent
                } else {
                    w > bw
                }
            }
        };
        if take {
            best = Some((c, w, tangent, k));
        }
    }
    match best {
        Some((c, _, _, k)) if c >= own_sup => k,
        _ => own,
    }
}

/// Positions in `[lo, hi)` where [`brute_jump`] changes value, found by a
/// uniform scan with `samples` points per plot piece and bisection. Each
/// entry carries the destination on the left of the change.
pub fn jump_change_points(segs: &Segments, lo: f64, hi: f64, samples: usize) -> Vec<(f64, i64)> {
    let eps = 1e-13 * segs.period();
    let mut grid: Vec<f64> = Vec::new();
    for j in segs.index_of(lo)..=segs.index_of(hi) {
        let s = segs.seg(j);
        for k in 0..samples {
            let x = s.e_left + (s.e_right - s.e_left) * k as f64 / samples as f64;
            if x >= lo && x < hi {
                grid.push(x);
            }
        }
    }
    grid.push(hi);
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut out = Vec::new();
    let mut x = grid[0];
    let mut v = brute_jump(segs, x);
    for &b in &grid[1..] {
        loop {
            let w = brute_jump(segs, b);
            if w == v {
                break;
            }
            // Locate the last point still showing `v`.
            let (mut l, mut r) = (x, b);
            while r - l > eps {
                let mid = 0.5 * (l + r);
                if brute_jump(segs, mid) == v {
                    l = mid;
                } else {
                    r = mid;
                }
            }
            if l < hi {
                // Sub-resolution flicker: drop the short-lived value.
                match out.last() {
                    Some(&(px, _)) if l - px <= 1e-9 * segs.period() => {}
                    _ => out.push((l, v)),
                }
            }
            x = r;
            v = brute_jump(segs, r);
        }
        x = b;
    }
    out
}
