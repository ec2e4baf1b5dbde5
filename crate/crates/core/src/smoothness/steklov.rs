use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::funcspace::{Func1D, RealFn, SmoothnessClass};

const GAUSS_POINTS: usize = 8;
const PANELS: usize = 4;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre polynomial.
fn gauss_legendre() -> &'static [(f64, f64); GAUSS_POINTS] {
    static RULE: OnceLock<[(f64, f64); GAUSS_POINTS]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_POINTS;
        let mut rule = [(0.0, 0.0); GAUSS_POINTS];
        for (i, slot) in rule.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut derivative = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                derivative = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / derivative;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * derivative * derivative));
        }
        rule
    })
}

/// `int g` over `[breaks[0], breaks[last]]`, Gauss-Legendre on each piece.
fn integrate(g: &dyn Fn(f64) -> f64, breaks: &[f64]) -> f64 {
    let rule = gauss_legendre();
    let mut total = 0.0;
    for piece in breaks.windows(2) {
        let (a, b) = (piece[0], piece[1]);
        if b <= a {
            continue;
        }
        let width = (b - a) / PANELS as f64;
        for panel in 0..PANELS {
            let lo = a + panel as f64 * width;
            let mid = lo + 0.5 * width;
            let half = 0.5 * width;
            total += half
                * rule
                    .iter()
                    .map(|&(x, w)| w * g(mid + half * x))
                    .sum::<f64>();
        }
    }
    total
}

/// Breakpoints of `u -> f(clamp(u))` on `[lo, hi]`: the ends, the kinks of
/// `f`, the clamping points 0 and 1, and `extra`.
fn breakpoints(f: &Func1D, lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut breaks = vec![lo, hi];
    breaks.extend(
        f.kinks()
            .iter()
            .chain(&[0.0, 1.0])
            .chain(extra)
            .copied()
            .filter(|&k| k > lo && k < hi),
    );
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// Moving average of `f` with window `w`, iterated `order` times, with `f`
/// extended by its boundary values outside `[0, 1]`.
///
/// Order 1 carries its first derivative `(f(x + w/2) - f(x - w/2)) / w`;
/// order 2 carries the first two, the second being `Delta_w^2 f(x - w) / w^2`.
pub fn steklov_mean(f: &Func1D, w: f64, order: usize) -> Result<Func1D> {
    if !(w > 0.0 && w <= 0.25) {
        return Err(Error::InvalidArgument(format!(
            "Steklov window must lie in (0, 1/4], got {w}"
        )));
    }
    let extended = {
        let f = f.clone();
        Arc::new(move |u: f64| f.eval(u.clamp(0.0, 1.0)))
    };
    let id = format!("S{order}[{};{w}]", f.id());
    match order {
        1 => {
            let (base, ext) = (f.clone(), extended.clone());
            let eval = move |x: f64| {
                let (lo, hi) = (x - 0.5 * w, x + 0.5 * w);
                integrate(&*ext, &breakpoints(&base, lo, hi, &[])) / w
            };
            let ext = extended.clone();
            let d1: RealFn = Arc::new(move |x| (ext(x + 0.5 * w) - ext(x - 0.5 * w)) / w);
            Func1D::new(id, SmoothnessClass::C0, eval).with_derivatives(vec![d1])
        }
        2 => {
            let (base, ext) = (f.clone(), extended.clone());
            let eval = move |x: f64| {
                let weighted = |u: f64| (w - (u - x).abs()) * ext(u);
                integrate(&weighted, &breakpoints(&base, x - w, x + w, &[x])) / (w * w)
            };
            let (base, ext) = (f.clone(), extended.clone());
            let d1: RealFn = Arc::new(move |x| {
                let right = integrate(&*ext, &breakpoints(&base, x, x + w, &[]));
                let left = integrate(&*ext, &breakpoints(&base, x - w, x, &[]));
                (right - left) / (w * w)
            });
            let ext = extended;
            let d2: RealFn = Arc::new(move |x| (ext(x + w) - 2.0 * ext(x) + ext(x - w)) / (w * w));
            Func1D::new(id, SmoothnessClass::Winf2, eval).with_derivatives(vec![d1, d2])
        }
        _ => Err(Error::InvalidArgument(format!(
            "Steklov order must be 1 or 2, got {order}"
        ))),
    }
}
