//! The distance plot `h(t) = |p P(t)|`, the lever origin `o(t) = t - h(t)`
//! and the tangent helpers of single hyperbolas.

use crate::error::PlotError;
use crate::geom::{HyperbolaSeg, Segments};

/// A point `(t, h(t))` of the plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotPoint {
    pub t: f64,
    pub y: f64,
}

pub fn h_eval(segs: &Segments, t: f64) -> f64 {
    segs.h(t)
}

pub fn o_eval(segs: &Segments, t: f64) -> f64 {
    t - segs.h(t)
}

pub fn plot_point(segs: &Segments, t: f64) -> PlotPoint {
    PlotPoint { t, y: segs.h(t) }
}

/// Parameter `t` on the hyperbola of `seg` whose lever origin is `o`.
pub fn t_from_o(seg: &HyperbolaSeg, o: f64) -> Result<f64, PlotError> {
    let (m, d) = (seg.m, seg.d);
    if o == m {
        return Err(PlotError::DivisionDegeneracy(m));
    }
    // (o^2 - d^2 - m^2) / (2 (o - m)), rewritten around m to avoid cancellation.
    let w = o - m;
    Ok(m + (w * w - d * d) / (2.0 * w))
}

/// Abscissa where the tangent from `(o, 0)` touches the hyperbola of `seg`.
pub fn tangent_contact(seg: &HyperbolaSeg, o: f64) -> Result<f64, PlotError> {
    let (m, d) = (seg.m, seg.d);
    if !(o < m) {
        return Err(PlotError::PreconditionViolated { o, m });
    }
    Ok(m + d * d / (m - o))
}

/// Slope of the tangent from `(o, 0)` to the hyperbola of `seg`.
pub fn tangent_slope(seg: &HyperbolaSeg, o: f64) -> Result<f64, PlotError> {
    let (m, d) = (seg.m, seg.d);
    if !(o < m) {
        return Err(PlotError::PreconditionViolated { o, m });
    }
    Ok(1.0 / ((m - o) / d).hypot(1.0))
}

/// Smallest `t` in `[0, perimeter)` where `h` attains its minimum, together
/// with the index of its segment.
pub fn global_min(segs: &Segments) -> (f64, i64) {
    let tie = 1e-12 * segs.period();
    let mut best = (f64::INFINITY, 0.0, 0i64);
    for j in 0..segs.n() as i64 {
        let s = segs.seg(j);
        let mut cands = vec![(s.h(s.e_left), s.e_left)];
        if s.contains(s.m) {
            cands.push((s.d, s.m));
        }
        for (v, t) in cands {
            if v < best.0 - tie || (v <= best.0 + tie && t < best.1) {
                best = (v, t, j);
            }
        }
    }
    (best.1, best.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, PolygonChain};

    fn seg(m: f64, d: f64) -> HyperbolaSeg {
        HyperbolaSeg {
            index: 0,
            m,
            d,
            e_left: f64::NEG_INFINITY,
            e_right: f64::INFINITY,
        }
    }

    fn square() -> Segments {
        let v = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        PolygonChain::new(&v, Point::new(0.5, 0.5)).unwrap().segments()
    }

    #[test]
    fn square_values() {
        let s = square();
        assert!((h_eval(&s, 0.0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(h_eval(&s, 0.5), 0.5);
        assert_eq!(h_eval(&s, 4.5), 0.5);
        assert_eq!(o_eval(&s, 0.5), 0.0);
        assert!((o_eval(&s, 0.0) + 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn inverse_origin() {
        assert_eq!(t_from_o(&seg(0.0, 1.0), -1.0).unwrap(), 0.0);
        assert_eq!(t_from_o(&seg(0.5, 0.5), 0.0).unwrap(), 0.5);
        assert!(matches!(
            t_from_o(&seg(0.5, 0.5), 0.5),
            Err(PlotError::DivisionDegeneracy(_))
        ));
    }

    #[test]
    fn tangent_helpers() {
        assert_eq!(tangent_contact(&seg(0.0, 1.0), -1.0).unwrap(), 1.0);
        let o = -0.5f64.sqrt();
        let c = tangent_contact(&seg(0.5, 0.5), o).unwrap();
        assert!((c - 0.5f64.sqrt()).abs() < 1e-12, "{c}");
        let s = tangent_slope(&seg(0.0, 1.0), -1.0).unwrap();
        assert!((s - 0.5f64.sqrt()).abs() < 1e-15);
        let s = tangent_slope(&seg(0.5, 0.5), o).unwrap();
        assert!((s - 0.38268343236508984).abs() < 1e-12, "{s}");
        assert!(tangent_slope(&seg(0.0, 1.0), 0.0).is_err());
        assert!(tangent_contact(&seg(0.0, 1.0), 1.0).is_err());
        let near = tangent_slope(&seg(0.0, 1.0), -1e-9).unwrap();
        let far = tangent_slope(&seg(0.0, 1.0), -1e9).unwrap();
        assert!(near > 1.0 - 1e-12 && far < 1e-8);
    }

    #[test]
    fn minimum_ties_pick_smallest_t() {
        assert_eq!(global_min(&square()), (0.5, 0));
        let tri = [Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(0.0, 3.0)];
        let s = PolygonChain::new(&tri, Point::new(1.0, 1.0)).unwrap().segments();
        let (t, j) = global_min(&s);
        assert!((t - 1.0).abs() < 1e-12 && j == 0, "{t} {j}");
    }
}
