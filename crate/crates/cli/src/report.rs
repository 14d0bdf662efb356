//! Serialized outputs. Floats are written in shortest round-trip form.

use feedlink_core::retarget::RetargetKind;
use feedlink_core::sweep::TraceRecord;
use feedlink_core::{LeverState, Point, RealizedSequence, Retargets, Solution};
use serde::{Deserialize, Serialize};

fn xy(p: Point) -> [f64; 2] {
    [p.x, p.y]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub t_star: f64,
    pub q: [f64; 2],
    pub dilation: f64,
    pub witness: [f64; 2],
    pub perimeter: f64,
    pub n: usize,
    pub event_count_left: usize,
    pub event_count_right: usize,
    pub elapsed_ms: f64,
}

impl SolveReport {
    pub fn new(sol: &Solution, perimeter: f64, n: usize, elapsed_ms: f64) -> Self {
        let r = &sol.result;
        Self {
            t_star: r.t_star,
            q: xy(r.q),
            dilation: r.dilation,
            witness: xy(r.witness),
            perimeter,
            n,
            event_count_left: sol.sides.left.event_count(),
            event_count_right: sol.sides.right.event_count(),
            elapsed_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub t_best: f64,
    pub q: [f64; 2],
    pub dilation: f64,
    pub samples: usize,
}

impl OracleReport {
    pub fn new(t_best: f64, q: Point, dilation: f64, samples: usize) -> Self {
        Self {
            t_best,
            q: xy(q),
            dilation,
            samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub solve: SolveReport,
    pub oracle: OracleReport,
    pub relative_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateRecord {
    pub side: &'static str,
    pub t: f64,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetargetRecord {
    pub side: &'static str,
    pub x: f64,
    pub dest: i64,
    pub kind: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceLine {
    pub side: &'static str,
    pub t: f64,
    pub event: String,
    pub before: String,
    pub after: String,
    pub jm: i64,
}

fn state_record(side: &'static str, t: f64, s: LeverState) -> StateRecord {
    StateRecord {
        side,
        t,
        state: s.to_string(),
    }
}

/// Left states in sweep order (positions nonincreasing), then right states
/// remapped to original parameters (positions nondecreasing).
pub fn state_records(left: &RealizedSequence, right: &RealizedSequence, mu: f64) -> Vec<StateRecord> {
    let mut out: Vec<StateRecord> = left
        .sweep_order()
        .map(|(t, s)| state_record("left", t, s))
        .collect();
    out.extend(right.sweep_order().map(|(tau, s)| state_record("right", mu - tau, s)));
    out
}

pub fn retarget_records(side: &'static str, r: &Retargets) -> Vec<RetargetRecord> {
    r.points()
        .iter()
        .map(|p| RetargetRecord {
            side,
            x: p.x,
            dest: p.dest,
            kind: match p.kind {
                RetargetKind::First => "first",
                RetargetKind::Second => "second",
            },
        })
        .collect()
}

pub fn trace_lines(side: &'static str, trace: &[TraceRecord]) -> Vec<TraceLine> {
    trace
        .iter()
        .map(|r| TraceLine {
            side,
            t: r.t,
            event: format!("{:?}", r.kind),
            before: r.before.to_string(),
            after: r.after.to_string(),
            jm: r.jm,
        })
        .collect()
}

/// One JSON document per line.
pub fn lines<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for it in items {
        out.push_str(&serde_json::to_string(it).expect("records serialize"));
        out.push('\n');
    }
    out
}
