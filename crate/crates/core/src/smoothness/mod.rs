//! Forward differences, `L_p` moduli of smoothness and an upper estimate of
//! the K-functional.

mod steklov;

use crate::error::{Error, Result};
use crate::funcspace::{Exponent, Func1D, Grid, SampledFn, derivative, lp_norm};

pub use steklov::steklov_mean;

/// Binomial coefficients `C(r, j)` for `r <= 3`.
const BINOMIAL: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// Admissible slack when checking `x + r h <= 1`.
const DOMAIN_SLACK: f64 = 1e-12;

/// `Delta_h^r f(x) = sum_{j=0}^{r} (-1)^j C(r, j) f(x + (r - j) h)`.
pub fn forward_difference(f: &Func1D, r: usize, h: f64, x: f64) -> Result<f64> {
    check_order(r)?;
    let end = x + r as f64 * h;
    let inside = |t: f64| (-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&t);
    if !inside(x) || !inside(end) {
        return Err(Error::Domain {
            what: "difference stencil",
            value: if inside(x) { end } else { x },
            domain: "[0, 1]".into(),
        });
    }
    Ok(difference_unchecked(f, r, h, x))
}

#[inline]
fn difference_unchecked(f: &Func1D, r: usize, h: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    for (j, c) in BINOMIAL[r][..=r].iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * c * f.eval(x + (r - j) as f64 * h);
    }
    sum
}

fn check_order(r: usize) -> Result<()> {
    if (1..=3).contains(&r) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "difference order must be 1, 2 or 3, got {r}"
        )))
    }
}

/// Parameters of `omega_{r,p}(f; delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusQuery {
    r: usize,
    p: Exponent,
    delta: f64,
    scan_steps: usize,
}

impl ModulusQuery {
    pub const DEFAULT_SCAN_STEPS: usize = 64;

    pub fn new(r: usize, p: Exponent, delta: f64) -> Result<Self> {
        check_order(r)?;
        if !(delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "modulus step bound must be positive, got {delta}"
            )));
        }
        if delta > 1.0 / r as f64 {
            return Err(Error::InvalidArgument(format!(
                "modulus step bound {delta} exceeds 1/r = {}",
                1.0 / r as f64
            )));
        }
        Ok(ModulusQuery {
            r,
            p,
            delta,
            scan_steps: Self::DEFAULT_SCAN_STEPS,
        })
    }

    /// Like [`ModulusQuery::new`] but clamps `delta` to `1/r`. Beyond `1/r`
    /// no step is admissible, so the modulus is constant there.
    pub fn clamped(r: usize, p: Exponent, delta: f64) -> Result<Self> {
        check_order(r)?;
        Self::new(r, p, delta.min(1.0 / r as f64))
    }

    pub fn with_scan_steps(mut self, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument(
                "scan needs at least one step".into(),
            ));
        }
        self.scan_steps = steps;
        Ok(self)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// `h -> ||Delta_h^r f||_{L_p[0, 1 - r h]}`.
fn difference_norm(f: &Func1D, r: usize, p: Exponent, h: f64, m: usize) -> Result<f64> {
    let end = 1.0 - r as f64 * h;
    if end <= DOMAIN_SLACK {
        return Ok(0.0);
    }
    let kinks: Vec<f64> = f
        .kinks()
        .iter()
        .flat_map(|&k| (0..=r).map(move |shift| k - shift as f64 * h))
        .collect();
    let nodes = SampledFn::on_interval(0.0, end, m, &kinks);
    let mut values = Vec::with_capacity(nodes.len());
    for &x in nodes.points() {
        let v = difference_unchecked(f, r, h, x);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                id: format!("Delta_{h}^{r} {}", f.id()),
                x,
                value: v,
            });
        }
        values.push(v);
    }
    Ok(nodes.norm(&values, p))
}

/// `omega_{r,p}(f; delta) = sup_{0 < h <= delta} ||Delta_h^r f||_p`.
///
/// The sup is taken over a uniform scan of `(0, delta]` that ends at `delta`,
/// followed by a golden-section refinement on the two scan intervals around
/// the best scan point; the returned value is the largest norm seen.
pub fn modulus_of_smoothness(f: &Func1D, q: &ModulusQuery, grid: Grid) -> Result<f64> {
    if grid.m() < 256 {
        return Err(Error::InvalidArgument(format!(
            "modulus needs a grid with m >= 256, got {}",
            grid.m()
        )));
    }
    let m = grid.m();
    let steps = q.scan_steps;
    let phi = |h: f64| difference_norm(f, q.r, q.p, h, m);

    let mut best = 0.0_f64;
    let mut best_j = steps;
    for j in 1..=steps {
        let h = if j == steps {
            q.delta
        } else {
            q.delta * j as f64 / steps as f64
        };
        let v = phi(h)?;
        if v > best {
            best = v;
            best_j = j;
        }
    }
    if best == 0.0 {
        return Ok(0.0);
    }

    let step = q.delta / steps as f64;
    let mut lo = (best_j as f64 - 1.0) * step;
    let mut hi = ((best_j as f64 + 1.0) * step).min(q.delta);
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = phi(a)?;
    let mut fb = phi(b)?;
    for _ in 0..100 {
        // slope across the probes bounds what the rest of the bracket can add
        let slope = (fa - fb).abs() / (b - a).max(f64::MIN_POSITIVE);
        if hi - lo <= 4.0 * f64::EPSILON * hi || slope * (hi - lo) <= 1e-14 * best {
            break;
        }
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = phi(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = phi(b)?;
        }
        best = best.max(fa).max(fb);
    }
    Ok(best.max(fa).max(fb))
}

/// Upper estimate of `K_{r,p}(f; t) = inf_g ||f - g||_p + t ||g^(r)||_p`.
///
/// The infimum is taken over `g = 0`, `g = f` when `f` has a bounded `r`-th
/// derivative, and twice-iterated Steklov means of `f` with windows
/// `t^{1/r} 2^j`, `j = -2..=2`, restricted to `(0, 1/(2r)]`.
pub fn k_functional_upper(f: &Func1D, r: usize, p: Exponent, t: f64, grid: Grid) -> Result<f64> {
    if !(2..=3).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "K-functional order must be 2 or 3, got {r}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "K-functional needs t > 0, got {t}"
        )));
    }
    let mut best = lp_norm(f, p, grid)?;

    if f.class() == crate::funcspace::SmoothnessClass::Winf2 && f.derivative_order() >= r {
        let dr = derivative(f, r)?;
        best = best.min(t * lp_norm(&dr, p, grid)?);
    }

    let base = t.powf(1.0 / r as f64);
    let max_window = 1.0 / (2 * r) as f64;
    for j in -2..=2 {
        let w = base * 2f64.powi(j);
        if !(w > 0.0 && w <= max_window) {
            continue;
        }
        let g = steklov_mean(f, w, 2)?;
        let distance = lp_norm(&f.sub(&g), p, grid)?;
        if distance >= best {
            continue;
        }
        let smoothness = lp_norm(&derivative(&g, r)?, p, grid)?;
        best = best.min(distance + t * smoothness);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::suite_function;

    fn grid() -> Grid {
        Grid::new(1024).unwrap()
    }

    #[test]
    fn forward_difference_examples() {
        let d = forward_difference(&Func1D::e2(), 2, 0.1, 0.3).unwrap();
        assert!((d - 0.02).abs() < 1e-15, "{d}");
        assert_eq!(
            forward_difference(&Func1D::e1(), 1, 0.25, 0.5).unwrap(),
            0.25
        );
        assert_eq!(forward_difference(&Func1D::e0(), 2, 0.2, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn forward_difference_domain_errors() {
        assert!(matches!(
            forward_difference(&Func1D::e1(), 2, 0.3, 0.5),
            Err(Error::Domain { .. })
        ));
        assert!(forward_difference(&Func1D::e1(), 4, 0.1, 0.0).is_err());
        assert!(forward_difference(&Func1D::e1(), 0, 0.1, 0.0).is_err());
    }

    #[test]
    fn modulus_examples() {
        let q = ModulusQuery::new(1, Exponent::INF, 0.25).unwrap();
        let v = modulus_of_smoothness(&Func1D::e1(), &q, grid()).unwrap();
        assert!((v - 0.25).abs() < 1e-12, "{v}");
        let q = ModulusQuery::new(2, Exponent::INF, 0.1).unwrap();
        let v = modulus_of_smoothness(&Func1D::e2(), &q, grid()).unwrap();
        assert!((v - 0.02).abs() < 1e-12, "{v}");
        let q = ModulusQuery::new(2, Exponent::ONE, 0.3).unwrap();
        assert_eq!(
            modulus_of_smoothness(&Func1D::e0(), &q, grid()).unwrap(),
            0.0
        );
    }

    #[test]
    fn modulus_query_validation() {
        assert!(ModulusQuery::new(2, Exponent::ONE, 0.6).is_err());
        assert!(ModulusQuery::new(2, Exponent::ONE, 0.0).is_err());
        assert!(ModulusQuery::new(4, Exponent::ONE, 0.1).is_err());
        assert_eq!(
            ModulusQuery::clamped(3, Exponent::ONE, 0.9)
                .unwrap()
                .delta(),
            1.0 / 3.0
        );
        let q = ModulusQuery::new(1, Exponent::ONE, 0.1).unwrap();
        assert!(modulus_of_smoothness(&Func1D::e1(), &q, Grid::new(64).unwrap()).is_err());
    }

    #[test]
    fn modulus_finds_interior_maximum() {
        // ||Delta_h^2 e_2||_{L_1[0, 1-2h]} = 2 h^2 (1 - 2h), maximal at h = 1/3
        let q = ModulusQuery::new(2, Exponent::ONE, 0.5).unwrap();
        let v = modulus_of_smoothness(&Func1D::e2(), &q, grid()).unwrap();
        assert!((v - 2.0 / 27.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn modulus_of_step_in_l1() {
        // Delta_h^1 of the indicator of [1/2, 1] is the indicator of [1/2 - h, 1/2)
        let step = suite_function("step").unwrap();
        let q = ModulusQuery::new(1, Exponent::ONE, 0.1).unwrap();
        let v = modulus_of_smoothness(&step, &q, grid()).unwrap();
        assert!((v - 0.1).abs() < 1e-9, "{v}");
    }

    #[test]
    fn k_functional_examples() {
        let g = grid();
        let e2 = Func1D::e2();
        let k = k_functional_upper(&e2, 2, Exponent::INF, 0.01, g).unwrap();
        assert!(k <= 0.02 + 1e-12, "{k}");
        for f in crate::funcspace::make_test_suite() {
            let k = k_functional_upper(&f, 2, Exponent::TWO, 0.05, g).unwrap();
            assert!(k <= lp_norm(&f, Exponent::TWO, g).unwrap() + 1e-12);
        }
        assert!(k_functional_upper(&e2, 1, Exponent::INF, 0.01, g).is_err());
        assert!(k_functional_upper(&e2, 2, Exponent::INF, 0.0, g).is_err());
    }

    #[test]
    fn k_functional_of_kink_is_controlled_by_modulus() {
        let g = Grid::new(4096).unwrap();
        let f = suite_function("abs_kink").unwrap();
        let t = 1e-4;
        let k = k_functional_upper(&f, 2, Exponent::INF, t, g).unwrap();
        let q = ModulusQuery::new(2, Exponent::INF, t.sqrt()).unwrap();
        let w = modulus_of_smoothness(&f, &q, g).unwrap();
        assert!((w - 0.02).abs() < 1e-9, "{w}");
        let constant = k / (t + w);
        assert!(constant <= 10.0, "{constant}");
        // best Steklov window gives w/3 + 2t/w at w = 0.02
        assert!((k - (0.02 / 3.0 + 2.0 * t / 0.02)).abs() < 1e-4, "{k}");
    }
}
