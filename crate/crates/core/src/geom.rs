//! Polygon boundary, arc-length parametrization and the per-edge hyperbola
//! parameters of the distance plot.
//!
//! The boundary is traversed in the order the vertices are given; that order
//! defines the positive direction. Arc-length parameters are unbounded reals
//! and are reduced modulo the perimeter where a boundary point is needed.
//!
//! Hyperbola segments use an unbounded signed index `j`. Segment `j` covers
//! edge `j mod n` shifted by `floor(j / n)` periods:
//!
//! ```text
//! m(j) = m[j mod n] + floor(j / n) * perimeter
//! d(j) = d[j mod n]
//! e(j) = e[j mod n] + floor(j / n) * perimeter
//! ```

use crate::error::GeomError;
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

/// Distance from `p` to the closed segment `a`-`b`.
fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let len2 = ab.x * ab.x + ab.y * ab.y;
    let s = ((ap.x * ab.x + ap.y * ab.y) / len2).clamp(0.0, 1.0);
    p.dist(Point::new(a.x + s * ab.x, a.y + s * ab.y))
}

/// Closed polygon boundary together with the focus point `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonChain {
    vertices: Vec<Point>,
    cum_len: Vec<f64>,
    perimeter: f64,
    focus: Point,
}

impl PolygonChain {
    /// Builds the chain, stripping consecutive duplicate vertices (including a
    /// closing vertex equal to the first one).
    pub fn new(vertices: &[Point], focus: Point) -> Result<Self, GeomError> {
        Self::with_tolerances(vertices, focus, &Tolerances::default())
    }

    pub fn with_tolerances(
        vertices: &[Point],
        focus: Point,
        tol: &Tolerances,
    ) -> Result<Self, GeomError> {
        if !focus.is_finite() || vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let mut clean: Vec<Point> = Vec::with_capacity(vertices.len());
        for &v in vertices {
            if clean.last() != Some(&v) {
                clean.push(v);
            }
        }
        while clean.len() > 1 && clean.first() == clean.last() {
            clean.pop();
        }
        let n = clean.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }

        let mut cum_len = Vec::with_capacity(n + 1);
        cum_len.push(0.0);
        let mut acc = 0.0;
        for r in 0..n {
            acc += clean[r].dist(clean[(r + 1) % n]);
            cum_len.push(acc);
        }
        if !(acc > 0.0) {
            return Err(GeomError::DegeneratePolygon);
        }

        let (mut lo, mut hi) = (clean[0], clean[0]);
        for v in &clean {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        let limit = tol.boundary_rel * lo.dist(hi);
        for r in 0..n {
            let distance = segment_distance(focus, clean[r], clean[(r + 1) % n]);
            if distance <= limit {
                return Err(GeomError::FocusOnBoundary { edge: r, distance });
            }
        }

        Ok(Self {
            vertices: clean,
            cum_len,
            perimeter: acc,
            focus,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Cumulative arc lengths; `cum_len()[r]` is the parameter of vertex `r`
    /// and the last entry equals the perimeter.
    pub fn cum_len(&self) -> &[f64] {
        &self.cum_len
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn focus(&self) -> Point {
        self.focus
    }

    /// Reduces `t` into `[0, perimeter)`.
    pub fn reduce(&self, t: f64) -> f64 {
        let r = t.rem_euclid(self.perimeter);
        if r >= self.perimeter {
            0.0
        } else {
            r
        }
    }

    /// Edge containing the reduced parameter `t` (half-open on the right).
    fn edge_of(&self, t: f64) -> usize {
        let r = self.cum_len.partition_point(|&c| c <= t);
        r.saturating_sub(1).min(self.len() - 1)
    }

    /// Boundary point at arc length `t` (mod perimeter) from vertex 0.
    pub fn point_at(&self, t: f64) -> Point {
        let t = self.reduce(t);
        let r = self.edge_of(t);
        let a = self.vertices[r];
        let b = self.vertices[(r + 1) % self.len()];
        let len = self.cum_len[r + 1] - self.cum_len[r];
        let s = ((t - self.cum_len[r]) / len).clamp(0.0, 1.0);
        Point::new(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y))
    }

    /// Length of the boundary walked in the positive direction from `P(a)`
    /// to `P(b)`, in `[0, perimeter)`.
    pub fn arc_between(&self, a: f64, b: f64) -> f64 {
        self.reduce(b - a)
    }

    /// Parameter of the antipodal point, `t + perimeter / 2` (not reduced).
    pub fn antipode(&self, t: f64) -> f64 {
        t + self.perimeter / 2.0
    }

    /// Same boundary traversed in the opposite direction, starting at the
    /// same vertex: `v0, v(n-1), ..., v1`. Parameter `tau` on the result is
    /// the point at `perimeter - tau` on `self`.
    pub fn reversed(&self) -> PolygonChain {
        let n = self.len();
        let vertices: Vec<Point> = (0..n).map(|k| self.vertices[(n - k) % n]).collect();
        let mut cum_len = Vec::with_capacity(n + 1);
        cum_len.push(0.0);
        let mut acc = 0.0;
        for r in 0..n {
            acc += vertices[r].dist(vertices[(r + 1) % n]);
            cum_len.push(acc);
        }
        PolygonChain {
            vertices,
            cum_len,
            perimeter: acc,
            focus: self.focus,
        }
    }

    /// Hyperbola parameters of every edge.
    pub fn segments(&self) -> Segments {
        self.segments_with(&Tolerances::default())
    }

    pub fn segments_with(&self, tol: &Tolerances) -> Segments {
        let n = self.len();
        let clamp = tol.dist_clamp_rel * self.perimeter;
        let mut m = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        for r in 0..n {
            let a = self.vertices[r];
            let b = self.vertices[(r + 1) % n];
            let len = self.cum_len[r + 1] - self.cum_len[r];
            let (ux, uy) = ((b.x - a.x) / len, (b.y - a.y) / len);
            let (px, py) = (self.focus.x - a.x, self.focus.y - a.y);
            m.push(self.cum_len[r] + px * ux + py * uy);
            d.push((px * uy - py * ux).abs().max(clamp));
        }
        Segments {
            m,
            d,
            e: self.cum_len.clone(),
            period: self.perimeter,
        }
    }
}

/// One piece `h(t) = sqrt((t - m)^2 + d^2)` of the distance plot, valid on
/// `[e_left, e_right)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolaSeg {
    pub index: i64,
    pub m: f64,
    pub d: f64,
    pub e_left: f64,
    pub e_right: f64,
}

impl HyperbolaSeg {
    pub fn h(&self, t: f64) -> f64 {
        (t - self.m).hypot(self.d)
    }

    pub fn dh(&self, t: f64) -> f64 {
        (t - self.m) / self.h(t)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.e_left <= t && t < self.e_right
    }
}

/// The periodic sequence of hyperbola segments forming the distance plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Segments {
    m: Vec<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
    period: f64,
}

impl Segments {
    /// Builds a plot directly from per-edge parameters. `e` holds the `n + 1`
    /// ascending breakpoints of one period.
    pub fn from_parts(m: Vec<f64>, d: Vec<f64>, e: Vec<f64>) -> Self {
        assert!(m.len() == d.len() && e.len() == m.len() + 1 && !m.is_empty());
        let period = e[m.len()] - e[0];
        Self { m, d, e, period }
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn half(&self) -> f64 {
        self.period / 2.0
    }

    fn split(&self, j: i64) -> (usize, f64) {
        let n = self.n() as i64;
        let k = j.div_euclid(n);
        (j.rem_euclid(n) as usize, k as f64 * self.period)
    }

    pub fn m(&self, j: i64) -> f64 {
        let (r, shift) = self.split(j);
        self.m[r] + shift
    }

    pub fn d(&self, j: i64) -> f64 {
        self.d[j.rem_euclid(self.n() as i64) as usize]
    }

    pub fn e(&self, j: i64) -> f64 {
        let (r, shift) = self.split(j);
        self.e[r] + shift
    }

    pub fn seg(&self, j: i64) -> HyperbolaSeg {
        HyperbolaSeg {
            index: j,
            m: self.m(j),
            d: self.d(j),
            e_left: self.e(j),
            e_right: self.e(j + 1),
        }
    }

    /// `h_j(t)` evaluated on the full hyperbola of segment `j`.
    pub fn h_on(&self, j: i64, t: f64) -> f64 {
        (t - self.m(j)).hypot(self.d(j))
    }

    /// Extended index of the segment containing `t`.
    pub fn index_of(&self, t: f64) -> i64 {
        let n = self.n();
        let k = ((t - self.e[0]) / self.period).floor();
        let local = t - k * self.period;
        let k = k as i64;
        let r = self.e.partition_point(|&c| c <= local).saturating_sub(1).min(n - 1);
        let mut j = k * n as i64 + r as i64;
        // Guard the reduction against rounding at segment boundaries.
        while t < self.e(j) {
            j -= 1;
        }
        while t >= self.e(j + 1) {
            j += 1;
        }
        j
    }

    /// Value of the distance plot at `t`.
    pub fn h(&self, t: f64) -> f64 {
        self.h_on(self.index_of(t), t)
    }
}
