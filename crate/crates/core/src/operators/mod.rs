//! The operator families: Bernstein, its pointwise maximum with the next
//! degree, the sup-sampled Bernstein operator and the Bernstein-Kantorovich
//! operator with Choquet cell averages. All of them are sublinear, monotone
//! and strongly translatable.

pub mod axioms;
mod bernstein;
mod choquet;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::funcspace::Func1D;

pub use bernstein::{bernstein_basis, bernstein_row};
pub use choquet::{DistortedMeasure, choquet_integral};

use choquet::LayerWeights;

/// Basis weights below this are skipped when summing `sum_k p_{n,k}(x) v_k`.
/// The skipped mass is at most `(n + 1) * 1e-20`.
pub const WEIGHT_CUTOFF: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    /// `B_n f(x) = sum_k p_{n,k}(x) f(k/n)`.
    Bernstein,
    /// `max{B_n f, B_{n+1} f}`.
    MaxBernstein,
    /// `sum_k p_{n,k}(x) sup_{[k/(n+1), (k+1)/(n+1)]} f`.
    SupBernstein,
    /// `sum_k p_{n,k}(x) (C) int_{cell_k} f dmu / mu(cell_k)` with `mu = sqrt(m)`.
    KantorovichChoquet,
    /// `f` itself; a fixture with zero defects.
    Identity,
}

impl OperatorKind {
    /// The four operator families swept by default.
    pub const FAMILIES: [OperatorKind; 4] = [
        OperatorKind::Bernstein,
        OperatorKind::MaxBernstein,
        OperatorKind::SupBernstein,
        OperatorKind::KantorovichChoquet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Bernstein => "bernstein",
            OperatorKind::MaxBernstein => "max-bernstein",
            OperatorKind::SupBernstein => "sup-bernstein",
            OperatorKind::KantorovichChoquet => "kantorovich-choquet",
            OperatorKind::Identity => "identity",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            OperatorKind::Bernstein,
            OperatorKind::MaxBernstein,
            OperatorKind::SupBernstein,
            OperatorKind::KantorovichChoquet,
            OperatorKind::Identity,
        ]
        .into_iter()
        .find(|k| k.name() == s.trim())
        .ok_or_else(|| Error::InvalidArgument(format!("unknown operator `{}`", s.trim())))
    }
}

/// Sampling knobs of the cell-based operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    /// Uniform subdivisions of a cell when taking its sup (endpoints included).
    pub sup_samples: usize,
    /// Midpoint samples per cell in the Choquet integral.
    pub choquet_samples: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            sup_samples: 64,
            choquet_samples: 1024,
        }
    }
}

/// Anything that maps a function to its value at a point.
pub trait Operator: Send + Sync {
    fn label(&self) -> String;

    fn apply(&self, f: &Func1D, x: f64) -> Result<f64>;

    /// `apply` at many points; implementations may share work across points
    /// but must return the same values as `apply`.
    fn apply_many(&self, f: &Func1D, xs: &[f64]) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.apply(f, x)).collect()
    }
}

/// A concrete operator: family plus degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorSpec {
    kind: OperatorKind,
    n: usize,
    resolution: Resolution,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "operator degree must be >= 1".into(),
            ));
        }
        Ok(OperatorSpec {
            kind,
            n,
            resolution: Resolution::default(),
        })
    }

    pub fn with_resolution(mut self, resolution: Resolution) -> Result<Self> {
        if resolution.sup_samples == 0 || resolution.choquet_samples < 16 {
            return Err(Error::InvalidArgument(format!(
                "resolution needs sup_samples >= 1 and choquet_samples >= 16, got {resolution:?}"
            )));
        }
        self.resolution = resolution;
        Ok(self)
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    fn with_degree(&self, n: usize) -> OperatorSpec {
        OperatorSpec { n, ..*self }
    }

    /// Value attached to basis index `k`, computed lazily.
    fn node_values<'a>(&self, f: &'a Func1D) -> NodeValues<'a> {
        let n = self.n;
        let source = match self.kind {
            OperatorKind::Bernstein | OperatorKind::MaxBernstein => NodeSource::Points,
            OperatorKind::SupBernstein => NodeSource::CellSup(self.resolution.sup_samples),
            OperatorKind::KantorovichChoquet => NodeSource::CellChoquet(LayerWeights::new(
                DistortedMeasure::sqrt_lebesgue(),
                self.resolution.choquet_samples,
            )),
            OperatorKind::Identity => unreachable!("identity has no basis"),
        };
        NodeValues {
            f,
            n,
            source,
            cache: vec![None; n + 1],
            scratch: Vec::new(),
        }
    }

    fn combine(&self, values: &mut NodeValues<'_>, x: f64) -> Result<f64> {
        let row = bernstein_row(self.n, x);
        let mut acc = 0.0;
        for (k, &w) in row.iter().enumerate() {
            if w < WEIGHT_CUTOFF {
                continue;
            }
            acc += w * values.get(k)?;
        }
        Ok(acc)
    }

    fn apply_prepared(&self, f: &Func1D, xs: &[f64]) -> Result<Vec<f64>> {
        for &x in xs {
            check_point(x)?;
        }
        match self.kind {
            OperatorKind::Identity => xs.iter().map(|&x| f.eval_checked(x)).collect(),
            OperatorKind::MaxBernstein => {
                let low = OperatorSpec::new(OperatorKind::Bernstein, self.n)?;
                let high = OperatorSpec::new(OperatorKind::Bernstein, self.n + 1)?;
                let a = low.apply_prepared(f, xs)?;
                let b = high.apply_prepared(f, xs)?;
                Ok(a.into_iter().zip(b).map(|(a, b)| a.max(b)).collect())
            }
            _ => {
                let mut values = self.node_values(f);
                xs.iter().map(|&x| self.combine(&mut values, x)).collect()
            }
        }
    }
}

fn check_point(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "x",
            value: x,
            domain: "[0, 1]".into(),
        })
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.kind, self.n)
    }
}

impl Operator for OperatorSpec {
    fn label(&self) -> String {
        self.to_string()
    }

    fn apply(&self, f: &Func1D, x: f64) -> Result<f64> {
        Ok(self.apply_prepared(f, &[x])?[0])
    }

    fn apply_many(&self, f: &Func1D, xs: &[f64]) -> Result<Vec<f64>> {
        self.apply_prepared(f, xs)
    }
}

enum NodeSource {
    Points,
    CellSup(usize),
    CellChoquet(LayerWeights),
}

struct NodeValues<'a> {
    f: &'a Func1D,
    n: usize,
    source: NodeSource,
    cache: Vec<Option<f64>>,
    scratch: Vec<f64>,
}

impl NodeValues<'_> {
    fn get(&mut self, k: usize) -> Result<f64> {
        if let Some(v) = self.cache[k] {
            return Ok(v);
        }
        let v = self.compute(k)?;
        self.cache[k] = Some(v);
        Ok(v)
    }

    fn compute(&mut self, k: usize) -> Result<f64> {
        let f = self.f;
        match &self.source {
            NodeSource::Points => f.eval_checked(k as f64 / self.n as f64),
            NodeSource::CellSup(samples) => {
                let (a, b) = cell(k, self.n);
                cell_sup(f, a, b, *samples)
            }
            NodeSource::CellChoquet(weights) => {
                let (a, b) = cell(k, self.n);
                weights.normalized_integral(f, a, b, &mut self.scratch)
            }
        }
    }
}

/// `[k/(n+1), (k+1)/(n+1)]`.
fn cell(k: usize, n: usize) -> (f64, f64) {
    let width = (n + 1) as f64;
    (k as f64 / width, (k + 1) as f64 / width)
}

/// Max of `f` over `samples + 1` uniform points of `[a, b]` (both endpoints
/// included) and the declared kinks inside the cell.
fn cell_sup(f: &Func1D, a: f64, b: f64, samples: usize) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for j in 0..=samples {
        let t = if j == samples {
            b
        } else {
            a + (b - a) * j as f64 / samples as f64
        };
        best = best.max(f.eval_checked(t)?);
    }
    for &k in f.kinks().iter().filter(|&&k| k > a && k < b) {
        best = best.max(f.eval_checked(k)?);
    }
    Ok(best)
}

/// Which moment function `t -> m(t, x)` to feed the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// `|t - x|`.
    AbsFirst,
    /// `(t - x)^2`.
    Second,
}

/// The moment function centred at `x`.
pub fn moment_function(kind: MomentKind, x: f64) -> Func1D {
    match kind {
        MomentKind::Second => {
            let f = Func1D::new(
                "moment2",
                crate::funcspace::SmoothnessClass::Winf2,
                move |t| (t - x) * (t - x),
            );
            f.with_derivatives(vec![
                std::sync::Arc::new(move |t| 2.0 * (t - x)),
                std::sync::Arc::new(|_| 2.0),
                std::sync::Arc::new(|_| 0.0),
            ])
            .expect("three derivatives")
        }
        MomentKind::AbsFirst => {
            let f = Func1D::new("moment1", crate::funcspace::SmoothnessClass::C0, move |t| {
                (t - x).abs()
            });
            if x > 0.0 && x < 1.0 {
                f.with_kinks(vec![x]).expect("interior kink")
            } else {
                f
            }
        }
    }
}

/// `T(|e_1 - x|)(x)` or `T((e_1 - x)^2)(x)`.
pub fn operator_moment(op: &dyn Operator, kind: MomentKind, x: f64) -> Result<f64> {
    op.apply(&moment_function(kind, x), x)
}

/// Convenience wrapper matching the free-function form.
pub fn apply(op: &OperatorSpec, f: &Func1D, x: f64) -> Result<f64> {
    op.apply(f, x)
}

impl OperatorSpec {
    /// The plain Bernstein operators `B_n` and `B_{n+1}` a max-Bernstein
    /// operator is built from.
    pub fn bernstein_pair(&self) -> (OperatorSpec, OperatorSpec) {
        let base = OperatorSpec {
            kind: OperatorKind::Bernstein,
            ..*self
        };
        (base, base.with_degree(self.n + 1))
    }
}
