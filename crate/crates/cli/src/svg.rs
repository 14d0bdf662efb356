//! Static SVG 1.1 pictures of a solution: the polygon with the feed-link,
//! and the distance plot with the lever at the optimum.

use std::fmt::Write;

use feedlink_core::{FeedLinkResult, Point, PolygonChain, Segments};

/// Maps data coordinates into a viewport with a 5% margin, y pointing up.
struct Frame {
    min: Point,
    max: Point,
    pad: f64,
}

impl Frame {
    fn fit(points: impl IntoIterator<Item = Point>) -> Self {
        let (mut min, mut max) = (
            Point::new(f64::INFINITY, f64::INFINITY),
            Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in points {
            min = Point::new(min.x.min(p.x), min.y.min(p.y));
            max = Point::new(max.x.max(p.x), max.y.max(p.y));
        }
        let pad = 0.05 * (max.x - min.x).max(max.y - min.y).max(f64::MIN_POSITIVE);
        Self { min, max, pad }
    }

    fn width(&self) -> f64 {
        self.max.x - self.min.x + 2.0 * self.pad
    }

    fn height(&self) -> f64 {
        self.max.y - self.min.y + 2.0 * self.pad
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (p.x - self.min.x + self.pad, self.max.y - p.y + self.pad)
    }

    fn stroke(&self) -> f64 {
        0.004 * self.width().max(self.height())
    }

    fn open(&self, out: &mut String) {
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {} {}" width="800" height="{}">"#,
            self.width(),
            self.height(),
            (800.0 * self.height() / self.width()).round()
        );
    }

    fn path(&self, out: &mut String, pts: &[Point], closed: bool, color: &str, extra: &str) {
        let mut d = String::new();
        for (k, &p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, x, y);
        }
        if closed {
            d.push('Z');
        }
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="{}"{extra}/>"#,
            d.trim_end(),
            self.stroke()
        );
    }

    fn dot(&self, out: &mut String, p: Point, color: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="{}" fill="{color}"/>"#, 2.5 * self.stroke());
    }
}

/// Polygon, focus `p`, feed-link `pq` and the witness `r`.
pub fn polygon_svg(chain: &PolygonChain, res: &FeedLinkResult) -> String {
    let p = chain.focus();
    let frame = Frame::fit(chain.vertices().iter().copied().chain([p]));
    let mut out = String::new();
    frame.open(&mut out);
    frame.path(&mut out, chain.vertices(), true, "black", "");
    frame.path(&mut out, &[p, res.q], false, "crimson", "");
    frame.path(&mut out, &[p, res.witness], false, "gray", r#" stroke-dasharray="4 3""#);
    frame.dot(&mut out, p, "crimson");
    frame.dot(&mut out, res.q, "crimson");
    frame.dot(&mut out, res.witness, "royalblue");
    out.push_str("</svg>\n");
    out
}

/// Distance plot `h(t)` over one period and the left lever at `t*`.
pub fn plot_svg(segs: &Segments, res: &FeedLinkResult, slope: f64) -> String {
    let mu = segs.period();
    let t = res.t_star;
    let o = t - segs.h(t);
    let right = t + segs.half();
    let (lo, hi) = (o.min(0.0), right.max(mu));
    const SAMPLES: usize = 2000;
    let curve: Vec<Point> = (0..=SAMPLES)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / SAMPLES as f64;
            Point::new(x, segs.h(x))
        })
        .collect();
    let lever = [Point::new(o, 0.0), Point::new(right, slope * (right - o))];
    let frame = Frame::fit(curve.iter().copied().chain(lever).chain([Point::new(lo, 0.0)]));
    let mut out = String::new();
    frame.open(&mut out);
    frame.path(&mut out, &[Point::new(lo, 0.0), Point::new(hi, 0.0)], false, "gray", "");
    frame.path(&mut out, &curve, false, "black", "");
    frame.path(&mut out, &lever, false, "crimson", "");
    frame.dot(&mut out, Point::new(t, segs.h(t)), "crimson");
    out.push_str("</svg>\n");
    out
}
