//! Small polynomial and scalar root-finding helpers.

/// Real roots of `a x^2 + b x + c`, ascending. Degenerates to the linear case
/// when `a` is negligible relative to the other coefficients.
pub fn quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc >= -1e-12 * b * b {
            return vec![-b / (2.0 * a)];
        }
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let mut r = if q == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![q / a, c / q]
    };
    r.sort_by(f64::total_cmp);
    r
}

fn eval(coef: &[f64], x: f64) -> f64 {
    coef.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn deriv(coef: &[f64], x: f64) -> f64 {
    let n = coef.len() - 1;
    coef[..n]
        .iter()
        .enumerate()
        .fold(0.0, |acc, (k, &c)| acc * x + c * (n - k) as f64)
}

fn polish(coef: &[f64], mut x: f64) -> f64 {
    for _ in 0..4 {
        let d = deriv(coef, x);
        if d == 0.0 {
            break;
        }
        let nx = x - eval(coef, x) / d;
        if !nx.is_finite() || eval(coef, nx).abs() >= eval(coef, x).abs() {
            break;
        }
        x = nx;
    }
    x
}

/// Real roots of `a x^3 + b x^2 + c x + d`, ascending, each polished by a few
/// Newton steps.
pub fn cubic(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        return quadratic(b, c, d);
    }
    let (p2, p1, p0) = (b / a, c / a, d / a);
    let q = (3.0 * p1 - p2 * p2) / 9.0;
    let r = (9.0 * p2 * p1 - 27.0 * p0 - 2.0 * p2 * p2 * p2) / 54.0;
    let disc = q * q * q + r * r;
    let shift = p2 / 3.0;
    let mut roots = if disc > 0.0 {
        let s = disc.sqrt();
        vec![(r + s).cbrt() + (r - s).cbrt() - shift]
    } else if q == 0.0 {
        vec![-shift]
    } else {
        let theta = (r / (-q * q * q).sqrt()).clamp(-1.0, 1.0).acos();
        let k = 2.0 * (-q).sqrt();
        let tau = std::f64::consts::TAU;
        vec![
            k * (theta / 3.0).cos() - shift,
            k * ((theta + tau) / 3.0).cos() - shift,
            k * ((theta + 2.0 * tau) / 3.0).cos() - shift,
        ]
    };
    let coef = [a, b, c, d];
    for x in &mut roots {
        *x = polish(&coef, *x);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Bisection for a sign change of `f` on `[lo, hi]`. Returns the end of the
/// final bracket on the side where `f` has the same sign as `f(hi)`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let hi_pos = f(hi) >= 0.0;
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) >= 0.0) == hi_pos {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Largest `x` in `[lo, hi]` at which `f` changes sign, located by sampling
/// `samples` subintervals from the right and bisecting the first bracket.
/// Returns the bisection end on the `hi` side of the sign change.
pub fn last_sign_change<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Option<f64> {
    if !(hi > lo) {
        return None;
    }
    let step = (hi - lo) / samples as f64;
    let mut b = hi;
    let mut fb = f(b);
    for k in (0..samples).rev() {
        let a = if k == 0 { lo } else { lo + step * k as f64 };
        let fa = f(a);
        if (fa >= 0.0) != (fb >= 0.0) {
            return Some(bisect(&mut f, a, b, 200));
        }
        b = a;
        fb = fa;
    }
    None
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
        if hi - lo <= f64::EPSILON * (lo.abs() + hi.abs()) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
