//! Jump destinations and retargeting positions.
//!
//! `jump(x)` is the index of the lowest hyperbola segment visible from
//! `H(x)` when looking to the left. It is piecewise constant in `x`; the
//! positions where it changes are computed in one pass over a period using a
//! stack holding the lower convex support of the segments seen so far.
//!
//! Each recorded position stores the destination that applies immediately to
//! its left and at the position itself. For any `x`, `jump(x)` is therefore
//! the destination of the first recorded position at or to the right of `x`.

use crate::geom::{HyperbolaSeg, Segments};
use crate::plot::global_min;
use crate::poly::quadratic;

/// A line `y = y0 + slope * (x - x0)` touching two segment closures from below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentLine {
    pub slope: f64,
    pub x0: f64,
    pub y0: f64,
    /// Contact abscissa on the closure of the left segment.
    pub touch_i: f64,
    /// Contact abscissa on the closure of the right segment.
    pub touch_j: f64,
}

impl TangentLine {
    pub fn eval(&self, x: f64) -> f64 {
        self.y0 + self.slope * (x - self.x0)
    }

    /// Abscissa where the line meets the horizontal axis.
    pub fn origin_x(&self) -> f64 {
        self.x0 - self.y0 / self.slope
    }
}

/// Minimizer and minimum of `h_j(x) - slope * (x - x_ref)` over `[a, b]`.
pub(crate) fn support(m: f64, d: f64, a: f64, b: f64, slope: f64, x_ref: f64) -> (f64, f64) {
    let x = if slope >= 1.0 {
        b
    } else if slope <= -1.0 {
        a
    } else {
        (m + slope * d / (1.0 - slope * slope).sqrt()).clamp(a, b)
    };
    (x, (x - m).hypot(d) - slope * (x - x_ref))
}

/// Lowest line touching the closures of segments `i < j` from below. When
/// several lines qualify the one with the smallest slope is returned.
pub fn common_tangent(segs: &Segments, i: i64, j: i64) -> TangentLine {
    debug_assert!(i < j);
    let (a, b) = (segs.seg(i), segs.seg(j));
    // Adjacent pieces meeting in a convex kink: the union is convex there.
    if j == i + 1 && a.dh(a.e_right) <= b.dh(b.e_left) {
        let x = a.e_right;
        return TangentLine {
            slope: a.dh(x),
            x0: x,
            y0: a.h(x),
            touch_i: x,
            touch_j: x,
        };
    }
    let x_ref = 0.5 * (a.e_left + b.e_right);
    let gap = |s: f64| {
        let fa = support(a.m, a.d, a.e_left, a.e_right, s, x_ref).1;
        let fb = support(b.m, b.d, b.e_left, b.e_right, s, x_ref).1;
        fa - fb
    };
    // The gap is nondecreasing in the slope; find the smallest root. Within
    // a range of slopes touching a shared endpoint the gap is zero up to
    // rounding, hence the tolerance.
    let tol = 1e-14 * (b.e_right - a.e_left);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    if gap(lo) >= -tol {
        hi = lo;
    }
    while hi - lo > 1e-17 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) >= -tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let slope = hi;
    let ta = support(a.m, a.d, a.e_left, a.e_right, slope, x_ref).0;
    let tb = support(b.m, b.d, b.e_left, b.e_right, slope, x_ref).0;
    let (slope, ta, tb) = refine_tangent(&a, &b, slope, ta, tb);
    TangentLine {
        slope,
        x0: ta,
        y0: a.h(ta),
        touch_i: ta,
        touch_j: tb,
    }
}

/// Contact abscissas of the tangents from `(x, y)` to the hyperbola `(m, d)`.
pub(crate) fn tangents_from_point(m: f64, d: f64, x: f64, y: f64) -> Vec<f64> {
    // With u = contact - m and w = x - m: (u w + d^2)^2 = y^2 (u^2 + d^2).
    let w = x - m;
    let d2 = d * d;
    quadratic(w * w - y * y, 2.0 * w * d2, d2 * d2 - y * y * d2)
        .into_iter()
        .filter(|u| u * w + d2 >= -1e-9 * (d2 + (u * w).abs()))
        .map(|u| u + m)
        .collect()
}

/// Replaces the bisection result by the closed form of whichever contact
/// configuration it approximates: curve-curve, point-curve or point-point.
fn refine_tangent(
    a: &HyperbolaSeg,
    b: &HyperbolaSeg,
    slope: f64,
    ta: f64,
    tb: f64,
) -> (f64, f64, f64) {
    let snap = |s: &HyperbolaSeg, x: f64| {
        let eps = 1e-6 * (s.e_right - s.e_left).min(s.d);
        if (x - s.e_left).abs() <= eps {
            Some(s.e_left)
        } else if (x - s.e_right).abs() <= eps {
            Some(s.e_right)
        } else {
            None
        }
    };
    let nearest = |cands: Vec<f64>, to: f64| {
        cands
            .into_iter()
            .min_by(|p, q| (p - to).abs().total_cmp(&(q - to).abs()))
    };
    let cand = match (snap(a, ta), snap(b, tb)) {
        (None, None) if a.m != b.m => {
            let r = (b.d - a.d) / (b.m - a.m);
            Some((r / r.hypot(1.0), a.m + r * a.d, b.m + r * b.d))
        }
        (Some(pa), None) => nearest(tangents_from_point(b.m, b.d, pa, a.h(pa)), tb)
            .filter(|&x| x != pa)
            .map(|x| ((b.h(x) - a.h(pa)) / (x - pa), pa, x)),
        (None, Some(pb)) => nearest(tangents_from_point(a.m, a.d, pb, b.h(pb)), ta)
            .filter(|&x| x != pb)
            .map(|x| ((b.h(pb) - a.h(x)) / (pb - x), x, pb)),
        (Some(pa), Some(pb)) if pa < pb => Some(((b.h(pb) - a.h(pa)) / (pb - pa), pa, pb)),
        (Some(pa), Some(pb)) if pa == pb => Some((a.dh(pa), pa, pb)),
        _ => None,
    };
    match cand {
        Some((s, x, y))
            if (s - slope).abs() < 1e-6
                && x >= a.e_left
                && x <= a.e_right
                && y >= b.e_left
                && y <= b.e_right =>
        {
            (s, x, y)
        }
        _ => (slope, ta, tb),
    }
}

/// Smallest value of `h_k - line` over the closure of segment `k`, with its
/// abscissa.
pub fn line_gap(line: &TangentLine, segs: &Segments, k: i64) -> (f64, f64) {
    let s = segs.seg(k);
    let (x, _) = support(s.m, s.d, s.e_left, s.e_right, line.slope, line.x0);
    (x, s.h(x) - line.eval(x))
}

/// Leftmost abscissa in `[e_k, e_{k+1})` where `line` meets `h_k`. Grazing
/// contact counts as a meeting point.
pub fn tangent_hits_segment(line: &TangentLine, segs: &Segments, k: i64) -> Option<f64> {
    let s = segs.seg(k);
    let scale = segs.period();
    // Local coordinate X = x - m: X^2 + d^2 = (slope X + beta)^2.
    let beta = line.eval(s.m);
    let sl = line.slope;
    let qa = 1.0 - sl * sl;
    let qb = -2.0 * sl * beta;
    let qc = s.d * s.d - beta * beta;
    let mut roots: Vec<f64> = Vec::new();
    if qa.abs() <= 1e-15 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let mut disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 && disc >= -1e-12 * (qb * qb + (4.0 * qa * qc).abs()) {
            disc = 0.0;
        }
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots.push((-qb - sq) / (2.0 * qa));
            roots.push((-qb + sq) / (2.0 * qa));
        }
    }
    let tol = 1e-12 * scale;
    let mut best: Option<f64> = None;
    for x in roots.into_iter().map(|r| r + s.m) {
        if sl * (x - s.m) + beta < -tol {
            continue;
        }
        if x >= s.e_left - tol && x < s.e_right {
            let x = x.max(s.e_left);
            best = Some(best.map_or(x, |b: f64| b.min(x)));
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RetargetKind {
    /// Destination changes between two earlier segments.
    First,
    /// Destination changes from the segment itself to an earlier one.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetargetingPoint {
    pub x: f64,
    /// Jump destination at `x` and immediately to its left.
    pub dest: i64,
    pub kind: RetargetKind,
}

/// Retargeting positions of one period, extended periodically on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Retargets {
    points: Vec<RetargetingPoint>,
    period: f64,
    n: i64,
}

impl Retargets {
    pub fn points(&self) -> &[RetargetingPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Extended entry `q`: entry `q mod len` shifted by `floor(q / len)` periods.
    pub fn at(&self, q: i64) -> RetargetingPoint {
        let len = self.points.len() as i64;
        let k = q.div_euclid(len);
        let p = self.points[q.rem_euclid(len) as usize];
        RetargetingPoint {
            x: p.x + k as f64 * self.period,
            dest: p.dest + k * self.n,
            kind: p.kind,
        }
    }

    /// Extended index of the first position at or to the right of `x`.
    pub fn first_at_or_after(&self, x: f64) -> i64 {
        let len = self.points.len() as i64;
        let base = self.points[0].x;
        let k = ((x - base) / self.period).floor() as i64;
        let local = x - k as f64 * self.period;
        let mut q = k * len + self.points.partition_point(|p| p.x < local) as i64;
        while q > i64::MIN && self.at(q - 1).x >= x {
            q -= 1;
        }
        while self.at(q).x < x {
            q += 1;
        }
        q
    }

    /// Jump destination for `x`; `own` is returned when there are no
    /// retargeting positions at all.
    pub fn jump_of(&self, x: f64, own: i64) -> i64 {
        if self.points.is_empty() {
            return own;
        }
        self.at(self.first_at_or_after(x)).dest
    }
}

/// Runs the convex-support sweep over one period starting at the global
/// minimum of the plot.
pub fn retargeting_points(segs: &Segments) -> Retargets {
    let (_, j0) = global_min(segs);
    retargeting_points_from(segs, j0)
}

/// As [`retargeting_points`] with an explicit index of the segment holding
/// the global minimum.
pub fn retargeting_points_from(segs: &Segments, j0: i64) -> Retargets {
    let n = segs.n() as i64;
    let tol = 1e-12 * segs.period();
    let mut stack: Vec<i64> = vec![j0 - 1, j0];
    let mut out: Vec<RetargetingPoint> = Vec::with_capacity(2 * n as usize);
    let push_point = |out: &mut Vec<RetargetingPoint>, x: f64, dest: i64, kind| {
        let x = out.last().map_or(x, |p: &RetargetingPoint| x.max(p.x));
        out.push(RetargetingPoint { x, dest, kind });
    };
    for k in j0 + 1..=j0 + n {
        loop {
            if stack.len() >= 2 {
                let i = stack[stack.len() - 2];
                let j = stack[stack.len() - 1];
                let l1 = common_tangent(segs, i, j);
                if line_gap(&l1, segs, k).1 < -tol {
                    let s = segs.seg(k);
                    let g = tangent_hits_segment(&l1, segs, k).unwrap_or(s.e_left);
                    push_point(&mut out, g, j, RetargetKind::First);
                    stack.pop();
                    continue;
                }
            }
            let j = *stack.last().expect("stack never empties");
            let l2 = common_tangent(segs, j, k);
            let s = segs.seg(k);
            if l2.touch_j < s.e_right - tol {
                push_point(&mut out, l2.touch_j.max(s.e_left), j, RetargetKind::Second);
                stack.push(k);
            }
            break;
        }
    }
    Retargets {
        points: out,
        period: segs.period(),
        n,
    }
}

/// Position in the periodic retargeting list, used by the sweep to follow
/// `jump(c)` while the contact abscissa `c` decreases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cursor {
    q: i64,
}

impl Cursor {
    pub fn new(r: &Retargets, c: f64) -> Self {
        let q = if r.is_empty() { 0 } else { r.first_at_or_after(c) };
        Self { q }
    }

    pub fn seek(&mut self, r: &Retargets, c: f64) {
        *self = Self::new(r, c);
    }

    /// Current destination, or `own` when the list is empty.
    pub fn jm(&self, r: &Retargets, own: i64) -> i64 {
        if r.is_empty() {
            own
        } else {
            r.at(self.q).dest
        }
    }

    /// Next retargeting position to the left of the contact.
    pub fn z(&self, r: &Retargets) -> Option<f64> {
        if r.is_empty() {
            None
        } else {
            Some(r.at(self.q - 1).x)
        }
    }

    pub fn step_left(&mut self) {
        self.q -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, PolygonChain};

    fn two_segs(mi: f64, di: f64, ei: (f64, f64), mj: f64, dj: f64, ej: (f64, f64)) -> Segments {
        // Period long enough that the indices 0 and 1 never wrap in tests.
        let e = vec![ei.0, ei.1, ej.0, ej.1, 100.0 + ei.0];
        Segments::from_parts(vec![mi, 0.5 * (ei.1 + ej.0), mj, 50.0], vec![di, 50.0, dj, 50.0], e)
    }

    fn below_check(line: &TangentLine, segs: &Segments, k: i64) {
        let s = segs.seg(k);
        for q in 0..=200 {
            let x = s.e_left + (s.e_right - s.e_left) * q as f64 / 200.0;
            assert!(s.h(x) - line.eval(x) >= -1e-9, "segment {k} below line at {x}");
        }
    }

    #[test]
    fn interior_common_tangent() {
        let segs = two_segs(0.0, 1.0, (-1.0, 1.0), 4.0, 2.0, (3.0, 5.0));
        let l = common_tangent(&segs, 0, 2);
        assert!((l.touch_i - 0.25).abs() < 1e-12 && (l.touch_j - 4.5).abs() < 1e-12);
        assert!((l.origin_x() + 4.0).abs() < 1e-9);
        for k in [0, 2] {
            below_check(&l, &segs, k);
            let s = segs.seg(k);
            let c = if k == 0 { l.touch_i } else { l.touch_j };
            assert!((s.h(c) - l.eval(c)).abs() < 1e-12);
            assert!((s.dh(c) - l.slope).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_distance_tangent_is_endpoint_supported() {
        // Same d on both sides: the full hyperbolas share the horizontal
        // tangent, but the closures restrict the contacts.
        let segs = two_segs(0.0, 1.0, (-1.0, -0.5), 4.0, 1.0, (3.0, 5.0));
        let l = common_tangent(&segs, 0, 2);
        assert!((l.touch_i + 0.5).abs() < 1e-12);
        below_check(&l, &segs, 0);
        below_check(&l, &segs, 2);
    }

    #[test]
    fn adjacent_kink_uses_smallest_slope() {
        // Wedge pointing down at x = 1: left piece decreasing, right increasing.
        let segs = Segments::from_parts(
            vec![2.0, 0.0, 2.5],
            vec![0.5, 0.5, 1.0],
            vec![0.0, 1.0, 2.0, 3.0],
        );
        let l = common_tangent(&segs, 0, 1);
        let left = segs.seg(0);
        assert!((l.touch_i - 1.0).abs() < 1e-12 && (l.touch_j - 1.0).abs() < 1e-12, "{l:?}");
        assert!((l.slope - left.dh(1.0)).abs() < 1e-12, "{}", l.slope);
    }

    #[test]
    fn hits_segment() {
        let line = TangentLine {
            slope: 0.5f64.sqrt(),
            x0: -1.0,
            y0: 0.0,
            touch_i: 1.0,
            touch_j: 1.0,
        };
        let far = two_segs(0.0, 1.0, (-1.0, 1.0), 4.0, 0.5, (3.0, 5.0));
        assert_eq!(tangent_hits_segment(&line, &far, 2), None);
        let near = two_segs(0.0, 1.0, (-1.0, 1.0), 4.0, 0.1, (3.0, 5.0));
        // The line stays above h on all of [3, 5): no meeting point.
        assert_eq!(tangent_hits_segment(&line, &near, 2), None);
        let cross = TangentLine {
            slope: 0.2,
            x0: 4.0,
            y0: 0.5,
            touch_i: 0.0,
            touch_j: 0.0,
        };
        let x = tangent_hits_segment(&cross, &near, 2).unwrap();
        let s = near.seg(2);
        assert!((s.h(x) - cross.eval(x)).abs() < 1e-12);
        assert!(x > 3.0 && x < 4.0, "{x}");
        let low = TangentLine { y0: -10.0, ..cross };
        assert_eq!(tangent_hits_segment(&low, &near, 2), None);
    }

    #[test]
    fn points_sorted_and_bounded() {
        let v = [Point::new(0.0, 0.0), Point::new(10.0, 0.0), Point::new(0.0, 1.0)];
        let c = PolygonChain::new(&v, Point::new(5.0, 0.4)).unwrap();
        let segs = c.segments();
        let r = retargeting_points(&segs);
        assert!(!r.is_empty() && r.len() <= 2 * segs.n());
        for w in r.points().windows(2) {
            assert!(w[0].x <= w[1].x);
        }
    }

    #[test]
    fn jump_lookup_is_periodic() {
        let v = [
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(0.5, 1.5),
        ];
        let c = PolygonChain::new(&v, Point::new(1.2, 0.7)).unwrap();
        let segs = c.segments();
        let r = retargeting_points(&segs);
        let n = segs.n() as i64;
        for q in 0..40 {
            let x = -7.0 + 0.37 * q as f64;
            assert_eq!(r.jump_of(x + c.perimeter(), 0), r.jump_of(x, 0) + n);
        }
        let p = r.at(0);
        assert_eq!(r.jump_of(p.x, 0), p.dest);
    }
}
