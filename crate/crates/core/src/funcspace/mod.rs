//! Functions on `[0, 1]`, uniform grids and the `L_p` / Sobolev norms.

mod quadrature;
mod suite;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use quadrature::{
    Exponent, FD_STEP, SampledFn, derivative, lp_norm, lp_norm_on, lp_norm_samples, sobolev_norm,
};
pub use suite::{make_test_suite, suite_function};

/// Shared real-valued map on `[0, 1]`.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Highest derivative order a [`Func1D`] may carry analytically.
pub const MAX_DERIVATIVE_ORDER: usize = 3;

/// Coarse regularity tag used to decide which bounds apply to a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SmoothnessClass {
    /// Bounded and piecewise continuous, integrable to every finite power.
    Lp,
    /// Integrable only.
    L1,
    /// Continuous on `[0, 1]`.
    C0,
    /// Second derivative in `L_p` for some finite `p`, but not bounded.
    Wp2,
    /// Second derivative bounded.
    Winf2,
}

impl SmoothnessClass {
    fn rank(self) -> u8 {
        match self {
            SmoothnessClass::L1 => 0,
            SmoothnessClass::Lp => 1,
            SmoothnessClass::C0 => 2,
            SmoothnessClass::Wp2 => 3,
            SmoothnessClass::Winf2 => 4,
        }
    }

    /// The weaker of two classes, i.e. the class of a sum.
    pub fn meet(self, other: Self) -> Self {
        if self.rank() <= other.rank() {
            self
        } else {
            other
        }
    }

    pub fn is_continuous(self) -> bool {
        self.rank() >= SmoothnessClass::C0.rank()
    }
}

impl fmt::Display for SmoothnessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SmoothnessClass::Winf2 => "Winf2",
            SmoothnessClass::Wp2 => "Wp2",
            SmoothnessClass::C0 => "C0",
            SmoothnessClass::L1 => "L1",
            SmoothnessClass::Lp => "Lp",
        };
        f.write_str(s)
    }
}

/// An evaluable function on `[0, 1]` with optional analytic derivatives.
///
/// `derivatives[j]` is the `(j + 1)`-th derivative. `kinks` lists the points
/// in `(0, 1)` where the function or one of its derivatives is not smooth;
/// quadrature and sup-sampling put nodes there.
#[derive(Clone)]
pub struct Func1D {
    id: String,
    eval: RealFn,
    derivatives: Vec<RealFn>,
    kinks: Vec<f64>,
    class: SmoothnessClass,
}

impl fmt::Debug for Func1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Func1D")
            .field("id", &self.id)
            .field("derivatives", &self.derivatives.len())
            .field("kinks", &self.kinks)
            .field("class", &self.class)
            .finish()
    }
}

impl Func1D {
    pub fn new(
        id: impl Into<String>,
        class: SmoothnessClass,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Func1D {
            id: id.into(),
            eval: Arc::new(eval),
            derivatives: Vec::new(),
            kinks: Vec::new(),
            class,
        }
    }

    /// Attaches analytic derivatives, first derivative first.
    pub fn with_derivatives(mut self, derivatives: Vec<RealFn>) -> Result<Self> {
        if derivatives.len() > MAX_DERIVATIVE_ORDER {
            return Err(Error::InvalidArgument(format!(
                "at most {MAX_DERIVATIVE_ORDER} analytic derivatives are supported, got {}",
                derivatives.len()
            )));
        }
        self.derivatives = derivatives;
        Ok(self)
    }

    /// Declares the non-smooth points; they must be strictly increasing and in `(0, 1)`.
    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Result<Self> {
        if kinks.iter().any(|&k| !(k > 0.0 && k < 1.0)) {
            return Err(Error::InvalidArgument(format!(
                "kinks of `{}` must lie in (0, 1): {kinks:?}",
                self.id
            )));
        }
        if kinks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "kinks of `{}` must be strictly increasing: {kinks:?}",
                self.id
            )));
        }
        self.kinks = kinks;
        Ok(self)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn constant(c: f64) -> Self {
        Func1D::new(format!("const({c})"), SmoothnessClass::Winf2, move |_| c)
            .with_derivatives(vec![zero_fn(), zero_fn(), zero_fn()])
            .expect("three derivatives")
    }

    /// `e_0(x) = 1`.
    pub fn e0() -> Self {
        Func1D::constant(1.0).with_id("e0")
    }

    /// `e_1(x) = x`.
    pub fn e1() -> Self {
        Func1D::new("e1", SmoothnessClass::Winf2, |x| x)
            .with_derivatives(vec![Arc::new(|_| 1.0), zero_fn(), zero_fn()])
            .expect("three derivatives")
    }

    /// `e_2(x) = x^2`.
    pub fn e2() -> Self {
        Func1D::new("e2", SmoothnessClass::Winf2, |x| x * x)
            .with_derivatives(vec![Arc::new(|x| 2.0 * x), Arc::new(|_| 2.0), zero_fn()])
            .expect("three derivatives")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Evaluates and rejects non-finite values.
    pub fn eval_checked(&self, x: f64) -> Result<f64> {
        let value = self.eval(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite {
                id: self.id.clone(),
                x,
                value,
            })
        }
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn class(&self) -> SmoothnessClass {
        self.class
    }

    /// Number of analytic derivatives carried.
    pub fn derivative_order(&self) -> usize {
        self.derivatives.len()
    }

    /// The analytic derivative of order `order >= 1`, if present.
    pub fn analytic_derivative(&self, order: usize) -> Option<Func1D> {
        if order == 0 {
            return Some(self.clone());
        }
        let eval = self.derivatives.get(order - 1)?.clone();
        Some(Func1D {
            id: format!("{}^({order})", self.id),
            eval,
            derivatives: self.derivatives[order..].to_vec(),
            kinks: self.kinks.clone(),
            class: SmoothnessClass::Lp,
        })
    }

    /// `self + other`, with derivatives kept where both sides have them.
    pub fn add(&self, other: &Func1D) -> Func1D {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let derivatives = self
            .derivatives
            .iter()
            .zip(&other.derivatives)
            .map(|(da, db)| {
                let (da, db) = (da.clone(), db.clone());
                Arc::new(move |x| da(x) + db(x)) as RealFn
            })
            .collect();
        Func1D {
            id: format!("({}+{})", self.id, other.id),
            eval: Arc::new(move |x| a(x) + b(x)),
            derivatives,
            kinks: merge_kinks(&self.kinks, &other.kinks),
            class: self.class.meet(other.class),
        }
    }

    /// `self - other`.
    pub fn sub(&self, other: &Func1D) -> Func1D {
        self.add(&other.scale(-1.0))
            .with_id(format!("({}-{})", self.id, other.id))
    }

    /// `c * self`.
    pub fn scale(&self, c: f64) -> Func1D {
        let a = self.eval.clone();
        let derivatives = self
            .derivatives
            .iter()
            .map(|d| {
                let d = d.clone();
                Arc::new(move |x| c * d(x)) as RealFn
            })
            .collect();
        Func1D {
            id: format!("{c}*{}", self.id),
            eval: Arc::new(move |x| c * a(x)),
            derivatives,
            kinks: self.kinks.clone(),
            class: self.class,
        }
    }

    /// `-self`.
    pub fn neg(&self) -> Func1D {
        self.scale(-1.0).with_id(format!("-{}", self.id))
    }

    /// `self + alpha` (translation by a constant function).
    pub fn add_constant(&self, alpha: f64) -> Func1D {
        let a = self.eval.clone();
        Func1D {
            id: format!("({}+{alpha})", self.id),
            eval: Arc::new(move |x| a(x) + alpha),
            derivatives: self.derivatives.clone(),
            kinks: self.kinks.clone(),
            class: self.class,
        }
    }

    /// `|self|`. Sign changes are not detected, so no kinks are added for them.
    pub fn abs(&self) -> Func1D {
        let a = self.eval.clone();
        Func1D {
            id: format!("|{}|", self.id),
            eval: Arc::new(move |x| a(x).abs()),
            derivatives: Vec::new(),
            kinks: self.kinks.clone(),
            class: self.class.meet(SmoothnessClass::C0),
        }
    }

    /// `|self - other|`.
    pub fn abs_diff(&self, other: &Func1D) -> Func1D {
        self.sub(other).abs()
    }

    /// Checks every analytic derivative against a central difference of the
    /// previous order at 32 random interior points (step `1e-5`, tolerance `1e-3`).
    /// Points closer than `1e-4` to a declared kink are skipped.
    pub fn check_derivatives(&self, seed: u64) -> Result<()> {
        const STEP: f64 = 1e-5;
        const TOL: f64 = 1e-3;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<f64> = std::iter::repeat_with(|| rng.random_range(0.01..0.99))
            .filter(|x: &f64| self.kinks.iter().all(|k| (x - k).abs() > 1e-4))
            .take(32)
            .collect();
        for (j, derivative) in self.derivatives.iter().enumerate() {
            let previous: &RealFn = if j == 0 {
                &self.eval
            } else {
                &self.derivatives[j - 1]
            };
            for &x in &points {
                let fd = (previous(x + STEP) - previous(x - STEP)) / (2.0 * STEP);
                let exact = derivative(x);
                if !((fd - exact).abs() <= TOL) {
                    return Err(Error::InvalidArgument(format!(
                        "derivative {} of `{}` disagrees with finite difference at x = {x}: {exact} vs {fd}",
                        j + 1,
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }
}

fn zero_fn() -> RealFn {
    Arc::new(|_| 0.0)
}

/// Sorted union of two strictly increasing kink lists.
pub(crate) fn merge_kinks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().chain(b).copied().collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Uniform partition of `[0, 1]` into `m` subintervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    m: usize,
}

impl Grid {
    pub const DEFAULT_M: usize = 4096;

    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs m >= 2, got {m}"
            )));
        }
        Ok(Grid { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The `m + 1` nodes `k / m`.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.m).map(|k| k as f64 / self.m as f64).collect()
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid { m: Self::DEFAULT_M }
    }
}
