//! The sliding lever: an event-driven sweep that moves the lever of the
//! left dilation from the global minimum of the plot leftwards over one full
//! period and records every state it passes through.
//!
//! At parameter `t` the lever starts at `O(t) = (t - h(t), 0)` and ends at
//! abscissa `R = t + mu/2`; its slope is the smallest slope from `O(t)` to a
//! plot point over `[t, R]`. The contact is either a tangency (`K`), the
//! right end (`Y`) or the tip of a downward wedge (`V`).

use std::fmt;

use crate::error::SweepError;
use crate::geom::Segments;
use crate::plot::{global_min, t_from_o};
use crate::poly::{cubic, quadratic};
use crate::retarget::{support, Cursor, Retargets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeverKind {
    /// Tangent to the interior of segment `j`.
    K,
    /// Right end resting on segment `j`.
    Y,
    /// Touching the wedge tip at the left end of segment `j`.
    V,
}

/// Phase `(i, j)` with contact kind; `i` is the segment over `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LeverState {
    pub kind: LeverKind,
    pub i: i64,
    pub j: i64,
}

impl LeverState {
    pub fn new(kind: LeverKind, i: i64, j: i64) -> Self {
        Self { kind, i, j }
    }

    /// The same state `k` segment indices further along.
    pub fn shifted(self, k: i64) -> Self {
        Self {
            i: self.i + k,
            j: self.j + k,
            ..self
        }
    }

    fn with(self, kind: LeverKind, j: i64) -> Self {
        Self { kind, j, ..self }
    }
}

impl fmt::Display for LeverState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({},{})", self.kind, self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// `t` crosses the left end of segment `i`.
    PhaseShift,
    /// The right end slides onto the previous segment (from `Y` or `V`).
    SlideY,
    YToK,
    KToY,
    /// Tangency reaches the left end of its segment.
    KToV,
    /// The lever leaves a wedge and becomes tangent to the segment on its left.
    VToK,
    /// The lever touches the current jump destination.
    Jump,
    /// The contact passes a retargeting position.
    JumpChange,
}

impl EventKind {
    fn priority(self) -> u8 {
        match self {
            EventKind::JumpChange => 0,
            EventKind::PhaseShift => 1,
            EventKind::SlideY => 2,
            EventKind::YToK | EventKind::KToY => 3,
            EventKind::KToV => 4,
            EventKind::VToK => 5,
            EventKind::Jump => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub new_state: Option<LeverState>,
    /// Destination after a jump-destination change.
    pub new_jm: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    pub kind: EventKind,
    pub before: LeverState,
    pub after: LeverState,
    pub jm: i64,
}

/// Realized states of one period `[start, end]`, stored by ascending start
/// position. Entry `k` covers `[p_k, p_{k+1}]`, the last one up to `end`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedSequence {
    entries: Vec<(f64, LeverState)>,
    end: f64,
    period: f64,
    n: i64,
    events: usize,
    trace: Vec<TraceRecord>,
}

impl RealizedSequence {
    pub fn entries(&self) -> &[(f64, LeverState)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.end - self.period
    }

    /// The starting position `t0` of the sweep.
    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Number of processed events, including jump-destination changes.
    pub fn event_count(&self) -> usize {
        self.events
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    /// Entries in the order the sweep produced them (descending positions).
    pub fn sweep_order(&self) -> impl Iterator<Item = (f64, LeverState)> + '_ {
        // Entry k starts where the sweep entered it, i.e. at p_{k+1}.
        let len = self.entries.len();
        (0..len).rev().map(move |k| {
            let at = if k + 1 < len {
                self.entries[k + 1].0
            } else {
                self.end
            };
            (at, self.entries[k].1)
        })
    }

    /// State covering `t`, with indices shifted to the period containing `t`.
    pub fn state_at(&self, t: f64) -> LeverState {
        let start = self.start();
        let mut k = ((t - start) / self.period).floor();
        let mut local = t - k * self.period;
        if local >= self.end {
            k += 1.0;
            local -= self.period;
        }
        if local < start {
            k -= 1.0;
            local += self.period;
        }
        let q = self
            .entries
            .partition_point(|e| e.0 <= local)
            .saturating_sub(1);
        self.entries[q].1.shifted(k as i64 * self.n)
    }
}

/// Lever origin `o_i(t)` on the hyperbola of segment `i`.
fn origin(segs: &Segments, i: i64, t: f64) -> f64 {
    t - segs.h_on(i, t)
}

/// Abscissa of the lever's contact with the plot in `state` at `t`.
pub fn contact_of(segs: &Segments, state: LeverState, t: f64) -> f64 {
    let j = state.j;
    match state.kind {
        LeverKind::K => {
            let (m, d) = (segs.m(j), segs.d(j));
            m + d * d / (m - origin(segs, state.i, t))
        }
        LeverKind::Y => t + segs.half(),
        LeverKind::V => segs.e(j),
    }
}

/// Lever slope in `state` at `t`, the reciprocal of the left dilation.
pub fn state_slope(segs: &Segments, state: LeverState, t: f64) -> f64 {
    let j = state.j;
    let o = origin(segs, state.i, t);
    match state.kind {
        LeverKind::K => 1.0 / ((segs.m(j) - o) / segs.d(j)).hypot(1.0),
        LeverKind::Y => {
            let r = t + segs.half();
            segs.h_on(j, r) / (segs.h_on(state.i, t) + segs.half())
        }
        LeverKind::V => {
            let e = segs.e(j);
            segs.h_on(j, e) / (e - o)
        }
    }
}

/// Slope of the left lever at `t` according to the realized sequence.
pub fn slope_at(segs: &Segments, seq: &RealizedSequence, t: f64) -> f64 {
    state_slope(segs, seq.state_at(t), t)
}

/// Start of the sweep: `t0 = p_low - mu/2`, the state `Y(i0, j0)` and the
/// jump destination at `p_low`.
pub fn initial_state(segs: &Segments, retargets: &Retargets) -> (f64, LeverState, i64) {
    let (p_low, j0) = global_min(segs);
    let t0 = p_low - segs.half();
    let i0 = segs.index_of(t0);
    (
        t0,
        LeverState::new(LeverKind::Y, i0, j0),
        retargets.jump_of(p_low, j0),
    )
}

/// `g(t) = d_j^2 - (R - m_j)(m_j - o_i(t))`: nonnegative while the right end
/// is the contact (`Y`), nonpositive while the tangency lies left of it (`K`).
fn yk_gap(segs: &Segments, i: i64, j: i64, t: f64) -> f64 {
    let (m, d) = (segs.m(j), segs.d(j));
    let r = t + segs.half();
    d * d - (r - m) * (m - origin(segs, i, t))
}

/// Largest `t` in `[e_i, t_c]` where the `Y`/`K` boundary of phase `(i, j)`
/// is crossed towards the other kind. `from_y` selects the direction.
fn yk_crossing(segs: &Segments, i: i64, j: i64, t_c: f64, from_y: bool) -> Option<f64> {
    // With u = t + mu/2 - m_j and E = m_i - m_j, squaring
    // u h_i(t) = d_j^2 - u mu/2 + u^2 gives
    // -2E u^3 + (E (E + mu) + d_i^2 - 2 d_j^2) u^2 + mu d_j^2 u - d_j^4 = 0.
    let (mi, di, mj, dj) = (segs.m(i), segs.d(i), segs.m(j), segs.d(j));
    let (e, mu) = (mi - mj, segs.period());
    let dj2 = dj * dj;
    let c = [
        -2.0 * e,
        e * (e + mu) + di * di - 2.0 * dj2,
        mu * dj2,
        -dj2 * dj2,
    ];
    // Roots and stationary points split the range into pieces on which the
    // cubic, and hence g, changes sign at most once. Nearly coincident roots
    // are still separated by a stationary point even when the closed form
    // merges them.
    let base = mj - segs.half();
    let lo = segs.e(i);
    let eps = 1e-12 * mu;
    let mut pts: Vec<f64> = cubic(c[0], c[1], c[2], c[3])
        .into_iter()
        .chain(quadratic(3.0 * c[0], 2.0 * c[1], c[2]))
        .map(|u| base + u)
        .filter(|&t| t > lo + eps && t < t_c - eps)
        .collect();
    pts.push(t_c);
    pts.push(lo);
    pts.sort_by(|a, b| b.total_cmp(a));
    let bad = |t: f64| {
        let g = yk_gap(segs, i, j, t);
        if from_y {
            g < 0.0
        } else {
            g > 0.0
        }
    };
    // Boundary between a good `hi` and a bad `lo`.
    let refine = |mut hi: f64, mut lo: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if bad(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a <= b {
            continue;
        }
        let mid = 0.5 * (a + b);
        if bad(mid) {
            return Some(refine(a, mid));
        }
        if bad(b) {
            return Some(refine(mid, b));
        }
    }
    None
}

/// Smallest vertical gap between segment `k` and the lever of `state` at
/// `t`, with the abscissa where it is attained.
fn lever_gap(segs: &Segments, state: LeverState, t: f64, k: i64) -> (f64, f64) {
    let s = segs.seg(k);
    let o = origin(segs, state.i, t);
    let slope = state_slope(segs, state, t);
    let (x, g) = support(s.m, s.d, s.e_left, s.e_right, slope, o);
    (g, x)
}

struct Candidate {
    t: f64,
    kind: EventKind,
    new_state: Option<LeverState>,
}

/// The next event at or left of `t_c`: the candidate with the largest `t`,
/// ties broken by a fixed priority with jump-destination changes first.
pub fn next_event(
    segs: &Segments,
    retargets: &Retargets,
    state: LeverState,
    t_c: f64,
    cursor: &Cursor,
) -> Result<Event, SweepError> {
    let half = segs.half();
    let (i, j) = (state.i, state.j);
    let si = segs.seg(i);
    let o_c = origin(segs, i, t_c);
    // Time at which o_i(t) drops to `o`; a target already passed fires now.
    let at_origin = |o: f64| -> Option<f64> {
        if o >= o_c {
            return Some(t_c);
        }
        let t = t_from_o(&si, o).ok()?;
        (t >= si.e_left).then(|| t.min(t_c))
    };

    let mut cands: Vec<Candidate> = Vec::with_capacity(6);
    let mut push = |t: Option<f64>, kind, new_state| {
        if let Some(t) = t.filter(|t| t.is_finite()) {
            cands.push(Candidate {
                t: t.min(t_c),
                kind,
                new_state,
            });
        }
    };
    push(
        Some(si.e_left),
        EventKind::PhaseShift,
        Some(LeverState { i: i - 1, ..state }),
    );
    let z = cursor.z(retargets);
    match state.kind {
        LeverKind::Y => {
            push(
                Some(segs.e(j) - half),
                EventKind::SlideY,
                Some(state.with(LeverKind::Y, j - 1)),
            );
            push(
                yk_crossing(segs, i, j, t_c, true),
                EventKind::YToK,
                Some(state.with(LeverKind::K, j)),
            );
            push(z.map(|z| z - half), EventKind::JumpChange, None);
        }
        LeverKind::K => {
            let (m, d, e) = (segs.m(j), segs.d(j), segs.e(j));
            if e > m {
                push(
                    at_origin(m - d * d / (e - m)),
                    EventKind::KToV,
                    Some(state.with(LeverKind::V, j)),
                );
            }
            push(
                yk_crossing(segs, i, j, t_c, false),
                EventKind::KToY,
                Some(state.with(LeverKind::Y, j)),
            );
            if let Some(z) = z.filter(|&z| z > m) {
                push(at_origin(m - d * d / (z - m)), EventKind::JumpChange, None);
            }
        }
        LeverKind::V => {
            push(
                Some(segs.e(j) - half),
                EventKind::SlideY,
                Some(state.with(LeverKind::Y, j - 1)),
            );
            let (m1, d1, e) = (segs.m(j - 1), segs.d(j - 1), segs.e(j));
            if e > m1 {
                push(
                    at_origin(m1 - d1 * d1 / (e - m1)),
                    EventKind::VToK,
                    Some(state.with(LeverKind::K, j - 1)),
                );
            }
        }
    }

    let best = cands
        .into_iter()
        .max_by(|a, b| {
            a.t.total_cmp(&b.t)
                .then(b.kind.priority().cmp(&a.kind.priority()))
        })
        .ok_or_else(|| SweepError::NoEventFound {
            t: t_c,
            state: state.to_string(),
        })?;

    let jm = cursor.jm(retargets, j);
    let reachable = match state.kind {
        LeverKind::K | LeverKind::Y => jm < j,
        LeverKind::V => jm < j - 1,
    };
    if reachable {
        if let Some((t, ns)) = find_jump(segs, state, t_c, best.t, jm) {
            if t > best.t || (t == best.t && best.kind != EventKind::JumpChange) {
                return Ok(Event {
                    t,
                    kind: EventKind::Jump,
                    new_state: Some(ns),
                    new_jm: None,
                });
            }
        }
    }
    let new_jm = (best.kind == EventKind::JumpChange).then(|| {
        let mut c = *cursor;
        c.step_left();
        c.jm(retargets, j)
    });
    Ok(Event {
        t: best.t,
        kind: best.kind,
        new_state: best.new_state,
        new_jm,
    })
}

/// Largest `t` in `[t_other, t_c]` at which the lever of `state` reaches
/// segment `k`, with the state it enters.
fn find_jump(
    segs: &Segments,
    state: LeverState,
    t_c: f64,
    t_other: f64,
    k: i64,
) -> Option<(f64, LeverState)> {
    let tol = 1e-12 * segs.period();
    let clear = |t: f64| lever_gap(segs, state, t, k).0 >= -tol;
    let t = if !clear(t_c) {
        t_c
    } else {
        let (mut hi, mut lo) = match state.kind {
            // The gap only shrinks as the lever slides left in these states.
            LeverKind::K | LeverKind::V => {
                if clear(t_other) {
                    return None;
                }
                (t_c, t_other)
            }
            LeverKind::Y => {
                const SAMPLES: usize = 64;
                let step = (t_c - t_other) / SAMPLES as f64;
                let mut bracket = None;
                for q in 1..=SAMPLES {
                    let t = if q == SAMPLES {
                        t_other
                    } else {
                        t_c - step * q as f64
                    };
                    if !clear(t) {
                        bracket = Some((t + step, t));
                        break;
                    }
                }
                let (hi, lo) = bracket?;
                (hi.min(t_c), lo)
            }
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if lever_gap(segs, state, mid, k).0 >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let s = segs.seg(k);
    let (_, x) = lever_gap(segs, state, t, k);
    let kind = if x <= s.e_left {
        LeverKind::V
    } else {
        LeverKind::K
    };
    let ns = state.with(kind, k);
    let residual = |t: f64| lever_gap(segs, state, t, k).0.abs();
    let polished = polish_jump(segs, state, ns, t, t_c)
        .filter(|&tp| residual(tp) <= residual(t).max(1e-14 * segs.period()));
    Some((polished.unwrap_or(t), ns))
}

/// Closed-form jump time for jumps out of `K` or `V`, when it agrees with
/// the bracketed one.
fn polish_jump(
    segs: &Segments,
    from: LeverState,
    to: LeverState,
    t: f64,
    t_c: f64,
) -> Option<f64> {
    let (j, k) = (from.j, to.j);
    let o_near = origin(segs, from.i, t);
    let nearest = |roots: Vec<f64>| {
        roots
            .into_iter()
            .min_by(|a, b| (a - o_near).abs().total_cmp(&(b - o_near).abs()))
    };
    // Lever through (e, y) tangent to the hyperbola (m, d):
    // (y^2 - d^2) o^2 + 2 (d^2 e - y^2 m) o + y^2 m^2 + y^2 d^2 - d^2 e^2 = 0.
    let through_tip = |m: f64, d: f64, e: f64, y: f64| {
        let (y2, d2) = (y * y, d * d);
        nearest(quadratic(
            y2 - d2,
            2.0 * (d2 * e - y2 * m),
            y2 * m * m + y2 * d2 - d2 * e * e,
        ))
    };
    let tip = |q: i64| (segs.e(q), segs.h_on(q, segs.e(q)));
    let o = match (from.kind, to.kind) {
        (LeverKind::K, LeverKind::K) => {
            let (dj, dk) = (segs.d(j), segs.d(k));
            if dj == dk {
                return None;
            }
            Some((dj * segs.m(k) - dk * segs.m(j)) / (dj - dk))
        }
        (LeverKind::K, LeverKind::V) => {
            let (e, y) = tip(k);
            through_tip(segs.m(j), segs.d(j), e, y)
        }
        (LeverKind::V, LeverKind::K) => {
            let (e, y) = tip(j);
            through_tip(segs.m(k), segs.d(k), e, y)
        }
        (LeverKind::V, LeverKind::V) => {
            let ((ej, yj), (ek, yk)) = (tip(j), tip(k));
            if yk == yj {
                return None;
            }
            Some((yk * ej - yj * ek) / (yk - yj))
        }
        _ => None,
    }?;
    let si = segs.seg(from.i);
    let tc = if o >= origin(segs, from.i, t_c) {
        t_c
    } else {
        t_from_o(&si, o).ok()?
    };
    ((tc - t).abs() <= 1e-7 * segs.period() && tc >= si.e_left).then_some(tc.min(t_c))
}

/// Runs the sweep over one period and returns the realized states.
pub fn slide_lever(segs: &Segments, retargets: &Retargets) -> Result<RealizedSequence, SweepError> {
    let n = segs.n() as i64;
    let mu = segs.period();
    let half = segs.half();
    let nudge = 1e-12 * mu;
    let (t0, s0, _) = initial_state(segs, retargets);
    let t_end = t0 - mu;
    let stop = t_end + 1e-10 * mu;
    let budget = 50 * segs.n() + 100;

    let mut cursor = Cursor::new(retargets, t0 + half);
    let mut state = s0;
    let mut t_c = t0;
    let mut order = vec![(t0, s0)];
    let mut trace = Vec::new();
    let mut events = 0usize;
    loop {
        let ev = next_event(segs, retargets, state, t_c, &cursor)?;
        if ev.t <= stop {
            break;
        }
        events += 1;
        if events > budget {
            return Err(SweepError::EventBudgetExceeded { budget });
        }
        let before = state;
        if ev.kind == EventKind::JumpChange {
            cursor.step_left();
        }
        if let Some(ns) = ev.new_state {
            match (ev.kind, ns.kind) {
                (_, LeverKind::V) => cursor.seek(retargets, segs.e(ns.j) - nudge),
                (EventKind::Jump, _) => cursor.seek(retargets, contact_of(segs, ns, ev.t)),
                _ => {}
            }
            state = ns;
            order.push((ev.t, ns));
        }
        t_c = ev.t;
        trace.push(TraceRecord {
            t: ev.t,
            kind: ev.kind,
            before,
            after: state,
            jm: cursor.jm(retargets, state.j),
        });
    }

    // The period closes where it started: the contact is back at the
    // shifted global minimum.
    let expected = s0.shifted(-n);
    // A phase shift that falls on the window end itself is not processed.
    let same_i = state.i == expected.i
        || (state.i == expected.i + 1 && (segs.e(state.i) - t_end).abs() <= 1e-9 * mu);
    let closes = same_i && (contact_of(segs, state, t_end) - (t_end + half)).abs() <= 1e-9 * mu;
    if !closes {
        return Err(SweepError::TerminalStateMismatch {
            found: state.to_string(),
            expected: expected.to_string(),
        });
    }

    // Entry entered at order[k].0 covers [order[k+1].0, order[k].0].
    let mut entries: Vec<(f64, LeverState)> = Vec::with_capacity(order.len());
    for k in (0..order.len()).rev() {
        let lo = order.get(k + 1).map_or(t_end, |e| e.0);
        entries.push((lo, order[k].1));
    }
    Ok(RealizedSequence {
        entries,
        end: t0,
        period: mu,
        n,
        events,
        trace,
    })
}
