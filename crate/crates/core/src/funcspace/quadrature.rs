use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{Func1D, Grid, RealFn};
use crate::error::{Error, Result};

/// Distance from a declared kink at which its one-sided values are sampled.
const KINK_OFFSET: f64 = 1e-12;

/// A kink this close to a grid node replaces the node.
const NODE_TOL: f64 = 1e-14;

/// Finite-difference step for derivatives that are not available analytically.
pub const FD_STEP: f64 = 1e-4;

/// Deepest finite-difference fallback stacked on the last analytic derivative.
const MAX_FD_DEPTH: usize = 2;

/// An `L_p` exponent, `1 <= p <= inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INF: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p >= 1.0 {
            Ok(Exponent(p))
        } else {
            Err(Error::InvalidArgument(format!(
                "exponent must satisfy p >= 1, got {p}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1 < p < inf`.
    pub fn is_intermediate(self) -> bool {
        self.0 > 1.0 && self.0.is_finite()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Inf" => Ok(Exponent::INF),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("not an exponent: `{other}`")))?;
                if p.is_infinite() {
                    return Ok(Exponent::INF);
                }
                Exponent::new(p)
            }
        }
    }
}

/// Trapezoid nodes on `[a, b]`: `m` uniform subintervals, plus every kink
/// strictly inside the interval as a doubled node. The two copies of a kink
/// share its coordinate but are evaluated just left and just right of it, so a
/// jump costs nothing in the integral.
#[derive(Debug, Clone)]
pub struct SampledFn {
    coords: Vec<f64>,
    points: Vec<f64>,
}

impl SampledFn {
    pub fn on_grid(grid: Grid, kinks: &[f64]) -> Self {
        Self::on_interval(0.0, 1.0, grid.m(), kinks)
    }

    pub fn on_interval(a: f64, b: f64, m: usize, kinks: &[f64]) -> Self {
        debug_assert!(a < b && m >= 1);
        let step = (b - a) / m as f64;
        let mut interior: Vec<f64> = kinks
            .iter()
            .copied()
            .filter(|&k| k > a + KINK_OFFSET && k < b - KINK_OFFSET)
            .collect();
        interior.sort_by(f64::total_cmp);
        interior.dedup();

        let mut coords = Vec::with_capacity(m + 1 + 2 * interior.len());
        let mut points = Vec::with_capacity(coords.capacity());
        let mut kinks = interior.into_iter().peekable();
        for i in 0..=m {
            let x = if i == m { b } else { a + i as f64 * step };
            let mut replaced = false;
            while let Some(&k) = kinks.peek() {
                if k > x + NODE_TOL {
                    break;
                }
                coords.extend([k, k]);
                points.extend([k - KINK_OFFSET, k + KINK_OFFSET]);
                replaced |= (k - x).abs() <= NODE_TOL;
                kinks.next();
            }
            if !replaced {
                coords.push(x);
                points.push(x);
            }
        }
        SampledFn { coords, points }
    }

    /// Node coordinates, nondecreasing.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Where each node is evaluated.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Samples `f` at every node, rejecting non-finite values.
    pub fn sample(&self, f: &Func1D) -> Result<Vec<f64>> {
        self.points.iter().map(|&x| f.eval_checked(x)).collect()
    }

    pub fn norm(&self, values: &[f64], p: Exponent) -> f64 {
        lp_norm_samples(&self.coords, values, p)
    }
}

/// `L_p` norm of nodal values by the composite trapezoid rule; for `p = inf`
/// the largest nodal magnitude.
pub fn lp_norm_samples(coords: &[f64], values: &[f64], p: Exponent) -> f64 {
    assert_eq!(coords.len(), values.len(), "one value per node");
    let peak = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if p.is_infinite() || peak == 0.0 {
        return peak;
    }
    let p = p.value();
    // scaled by the peak so large p cannot overflow
    let powered = |v: f64| (v.abs() / peak).powf(p);
    let integral: f64 = coords
        .windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| 0.5 * (x[1] - x[0]) * (powered(v[0]) + powered(v[1])))
        .sum();
    peak * integral.powf(1.0 / p)
}

/// `||f||_p` over `[0, 1]`.
pub fn lp_norm(f: &Func1D, p: Exponent, grid: Grid) -> Result<f64> {
    let nodes = SampledFn::on_grid(grid, f.kinks());
    let values = nodes.sample(f)?;
    Ok(nodes.norm(&values, p))
}

/// `||f||_p` over `[a, b]` with `m` uniform subintervals.
pub fn lp_norm_on(f: &Func1D, a: f64, b: f64, m: usize, p: Exponent) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
    }
    let nodes = SampledFn::on_interval(a, b, m, f.kinks());
    let values = nodes.sample(f)?;
    Ok(nodes.norm(&values, p))
}

/// `||f||_{r,p} = max_{j <= r} ||f^(j)||_p`.
///
/// Missing derivatives are obtained by central differences (one-sided at the
/// boundary) of the highest analytic one, at most two levels deep.
pub fn sobolev_norm(f: &Func1D, r: usize, p: Exponent, grid: Grid) -> Result<f64> {
    let mut best = 0.0_f64;
    for j in 0..=r {
        let derivative = derivative(f, j)?;
        best = best.max(lp_norm(&derivative, p, grid)?);
    }
    Ok(best)
}

/// The `order`-th derivative of `f`, analytic when available.
pub fn derivative(f: &Func1D, order: usize) -> Result<Func1D> {
    if let Some(d) = f.analytic_derivative(order) {
        return Ok(d);
    }
    let base = f.derivative_order();
    if order > super::MAX_DERIVATIVE_ORDER || order - base > MAX_FD_DEPTH {
        return Err(Error::UnsupportedOrder {
            id: f.id().to_string(),
            order,
        });
    }
    let start = f
        .analytic_derivative(base)
        .expect("order within analytic range");
    let mut eval: RealFn = Arc::new(move |x| start.eval(x));
    for _ in base..order {
        eval = finite_difference(eval);
    }
    Ok(Func1D {
        id: format!("{}^({order})", f.id()),
        eval,
        derivatives: Vec::new(),
        kinks: f.kinks().to_vec(),
        class: super::SmoothnessClass::Lp,
    })
}

fn finite_difference(g: RealFn) -> RealFn {
    const H: f64 = FD_STEP;
    Arc::new(move |x| {
        if x - H < 0.0 {
            (-3.0 * g(x) + 4.0 * g(x + H) - g(x + 2.0 * H)) / (2.0 * H)
        } else if x + H > 1.0 {
            (3.0 * g(x) - 4.0 * g(x - H) + g(x - 2.0 * H)) / (2.0 * H)
        } else {
            (g(x + H) - g(x - H)) / (2.0 * H)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::SmoothnessClass;

    fn grid() -> Grid {
        Grid::new(4096).unwrap()
    }

    #[test]
    fn constant_has_unit_norm() {
        assert_eq!(lp_norm(&Func1D::e0(), Exponent::TWO, grid()).unwrap(), 1.0);
    }

    #[test]
    fn identity_norms() {
        let l1 = lp_norm(&Func1D::e1(), Exponent::ONE, grid()).unwrap();
        assert!((l1 - 0.5).abs() < 1e-6);
        let l2 = lp_norm(&Func1D::e1(), Exponent::TWO, grid()).unwrap();
        assert!((l2 - (1.0_f64 / 3.0).sqrt()).abs() < 1e-6, "{l2}");
        let linf = lp_norm(&Func1D::e1(), Exponent::INF, grid()).unwrap();
        assert_eq!(linf, 1.0);
    }

    #[test]
    fn jump_at_kink_integrates_exactly() {
        let step = Func1D::new("step", SmoothnessClass::Lp, |x| {
            if x >= 0.3 { 1.0 } else { 0.0 }
        })
        .with_kinks(vec![0.3])
        .unwrap();
        let l1 = lp_norm(&step, Exponent::ONE, Grid::new(10).unwrap()).unwrap();
        assert!((l1 - 0.7).abs() < 1e-11, "{l1}");
        // kink not on a grid node
        let l1 = lp_norm(&step, Exponent::ONE, Grid::new(7).unwrap()).unwrap();
        assert!((l1 - 0.7).abs() < 1e-11, "{l1}");
    }

    #[test]
    fn kink_nodes_are_doubled_and_sorted() {
        let nodes = SampledFn::on_interval(0.0, 1.0, 4, &[0.5, 0.6]);
        assert_eq!(nodes.coords(), &[0.0, 0.25, 0.5, 0.5, 0.6, 0.6, 0.75, 1.0]);
        assert!(nodes.points()[2] < 0.5 && nodes.points()[3] > 0.5);
    }

    #[test]
    fn non_finite_node_is_named() {
        let f = Func1D::new("spike", SmoothnessClass::L1, |x| {
            if x == 0.5 { f64::NAN } else { x }
        });
        match lp_norm(&f, Exponent::ONE, Grid::new(4).unwrap()) {
            Err(Error::NonFinite { x, .. }) => assert_eq!(x, 0.5),
            other => panic!("expected evaluation error, got {other:?}"),
        }
    }

    #[test]
    fn sobolev_norm_examples() {
        let g = grid();
        assert_eq!(
            sobolev_norm(&Func1D::e2(), 2, Exponent::INF, g).unwrap(),
            2.0
        );
        assert_eq!(
            sobolev_norm(&Func1D::e1(), 1, Exponent::INF, g).unwrap(),
            1.0
        );
        assert_eq!(
            sobolev_norm(&Func1D::e0(), 2, Exponent::ONE, g).unwrap(),
            1.0
        );
    }

    #[test]
    fn sobolev_falls_back_to_finite_differences() {
        let cubic = Func1D::new("cubic", SmoothnessClass::Winf2, |x| x * x * x);
        // f'' = 6x, so ||f||_{2,inf} = 6
        let norm = sobolev_norm(&cubic, 2, Exponent::INF, Grid::new(256).unwrap()).unwrap();
        assert!((norm - 6.0).abs() < 1e-3, "{norm}");
        assert!(matches!(
            sobolev_norm(&cubic, 3, Exponent::INF, Grid::new(256).unwrap()),
            Err(Error::UnsupportedOrder { order: 3, .. })
        ));
        assert!(matches!(
            derivative(&Func1D::e2(), 4),
            Err(Error::UnsupportedOrder { order: 4, .. })
        ));
    }

    #[test]
    fn exponent_parsing_and_display() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::INF);
        assert_eq!("1.5".parse::<Exponent>().unwrap().value(), 1.5);
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("abc".parse::<Exponent>().is_err());
        assert_eq!(Exponent::INF.to_string(), "inf");
        assert_eq!(Exponent::new(2.0).unwrap().to_string(), "2");
        assert_eq!(Exponent::new(1.5).unwrap().to_string(), "1.5");
    }
}
