//! Defect quantities of an operator on the Korovkin test functions, the
//! measured approximation errors, and the right-hand sides of the error bounds
//! they are compared against.

mod bounds;
mod rate;

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::Result;
use crate::funcspace::{Exponent, Func1D, Grid, SampledFn, lp_norm_samples};
use crate::operators::{MomentKind, Operator, OperatorSpec, operator_moment};

pub use bounds::{
    BernsteinComparison, BoundEntry, BoundReport, ChainCheck, LHS_FLOOR, STABILITY_FACTOR,
    TheoremId, bernstein_comparisons, stability_check, theorem_bound,
};
pub use rate::rate_estimate;

/// Defects of one operator at one exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KorovkinIndices {
    pub n: usize,
    pub p: Exponent,
    /// `max{||T e0 - e0||, ||T e1 - e1||, ||T(-e1) + e1||, ||T e2 - e2||}`.
    pub lambda_p: f64,
    /// `sup_x T((e1 - x)^2)(x)`.
    pub mu_n: f64,
    /// `(max{||T e0 - e0||_p, ||T(|e1 - x|)(x)||_p, mu_n})^{1/2}`.
    pub t_np: f64,
    /// `(max{||T e0 - e0||_p, ||T((e1 - x)^2)(x)^{1/2}||_p, mu_n})^{1/2}`.
    pub s_np: f64,
}

/// `x -> f(x) - T f(x)` sampled on a grid refined at the kinks of `f`.
#[derive(Debug, Clone)]
pub struct ErrorProfile {
    nodes: SampledFn,
    residual: Vec<f64>,
}

impl ErrorProfile {
    pub fn compute(op: &dyn Operator, f: &Func1D, grid: Grid) -> Result<Self> {
        let nodes = SampledFn::on_grid(grid, f.kinks());
        let exact = nodes.sample(f)?;
        let approx = op.apply_many(f, nodes.points())?;
        let residual = exact.iter().zip(&approx).map(|(a, b)| a - b).collect();
        Ok(ErrorProfile { nodes, residual })
    }

    /// `x -> A f(x) - B f(x)` for two operators.
    pub fn between(a: &dyn Operator, b: &dyn Operator, f: &Func1D, grid: Grid) -> Result<Self> {
        let nodes = SampledFn::on_grid(grid, f.kinks());
        let va = a.apply_many(f, nodes.points())?;
        let vb = b.apply_many(f, nodes.points())?;
        let residual = va.iter().zip(&vb).map(|(a, b)| a - b).collect();
        Ok(ErrorProfile { nodes, residual })
    }

    pub fn norm(&self, p: Exponent) -> f64 {
        self.nodes.norm(&self.residual, p)
    }
}

/// `||f - T f||_p`.
pub fn measure_error(op: &dyn Operator, f: &Func1D, p: Exponent, grid: Grid) -> Result<f64> {
    Ok(ErrorProfile::compute(op, f, grid)?.norm(p))
}

/// `x -> T(|e1 - x|)(x)` and `x -> T((e1 - x)^2)(x)` on the grid nodes.
#[derive(Debug, Clone)]
pub struct MomentProfile {
    nodes: Vec<f64>,
    abs_first: Vec<f64>,
    second: Vec<f64>,
}

impl MomentProfile {
    pub fn compute(op: &dyn Operator, grid: Grid) -> Result<Self> {
        let nodes = grid.nodes();
        let pairs: Vec<(f64, f64)> = nodes
            .par_iter()
            .map(|&x| {
                Ok((
                    operator_moment(op, MomentKind::AbsFirst, x)?,
                    operator_moment(op, MomentKind::Second, x)?,
                ))
            })
            .collect::<Result<_>>()?;
        let (abs_first, second) = pairs.into_iter().unzip();
        Ok(MomentProfile {
            nodes,
            abs_first,
            second,
        })
    }

    pub fn abs_first(&self) -> &[f64] {
        &self.abs_first
    }

    pub fn second(&self) -> &[f64] {
        &self.second
    }

    /// `mu_n`.
    pub fn sup_second(&self) -> f64 {
        lp_norm_samples(&self.nodes, &self.second, Exponent::INF)
    }

    pub fn abs_first_norm(&self, p: Exponent) -> f64 {
        lp_norm_samples(&self.nodes, &self.abs_first, p)
    }

    /// `||T((e1 - x)^2)(x)^{1/2}||_p`; tiny negative rounding is clipped.
    pub fn root_second_norm(&self, p: Exponent) -> f64 {
        let roots: Vec<f64> = self.second.iter().map(|v| v.max(0.0).sqrt()).collect();
        lp_norm_samples(&self.nodes, &roots, p)
    }
}

/// Everything about one operator that does not depend on the function under
/// test. Moments are computed on first use.
pub struct OperatorLab {
    op: OperatorSpec,
    grid: Grid,
    /// Residuals on `e0, e1, -e1, e2`.
    test_defects: [ErrorProfile; 4],
    moments: OnceLock<MomentProfile>,
}

impl OperatorLab {
    pub fn new(op: OperatorSpec, grid: Grid) -> Result<Self> {
        let tests = [Func1D::e0(), Func1D::e1(), Func1D::e1().neg(), Func1D::e2()];
        let defects: Vec<ErrorProfile> = tests
            .iter()
            .map(|f| ErrorProfile::compute(&op, f, grid))
            .collect::<Result<_>>()?;
        Ok(OperatorLab {
            op,
            grid,
            test_defects: defects.try_into().expect("four test functions"),
            moments: OnceLock::new(),
        })
    }

    pub fn op(&self) -> &OperatorSpec {
        &self.op
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn moments(&self) -> Result<&MomentProfile> {
        if let Some(m) = self.moments.get() {
            return Ok(m);
        }
        let computed = MomentProfile::compute(&self.op, self.grid)?;
        Ok(self.moments.get_or_init(|| computed))
    }

    /// `||T e0 - e0||_p`.
    pub fn unit_defect(&self, p: Exponent) -> f64 {
        self.test_defects[0].norm(p)
    }

    pub fn lambda(&self, p: Exponent) -> f64 {
        self.test_defects
            .iter()
            .map(|d| d.norm(p))
            .fold(0.0, f64::max)
    }

    pub fn indices(&self, p: Exponent) -> Result<KorovkinIndices> {
        let moments = self.moments()?;
        let unit = self.unit_defect(p);
        let mu_n = moments.sup_second();
        let t_sq = unit.max(moments.abs_first_norm(p)).max(mu_n);
        let s_sq = unit.max(moments.root_second_norm(p)).max(mu_n);
        Ok(KorovkinIndices {
            n: self.op.n(),
            p,
            lambda_p: self.lambda(p),
            mu_n,
            t_np: t_sq.sqrt(),
            s_np: s_sq.sqrt(),
        })
    }
}

/// All defect indices of `op` at exponent `p`.
pub fn compute_indices(op: &OperatorSpec, p: Exponent, grid: Grid) -> Result<KorovkinIndices> {
    OperatorLab::new(*op, grid)?.indices(p)
}
