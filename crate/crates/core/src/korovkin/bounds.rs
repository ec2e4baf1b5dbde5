use std::fmt;
use std::str::FromStr;

use super::{ErrorProfile, OperatorLab, rate_estimate};
use crate::error::{Error, Result};
use crate::funcspace::{Exponent, Func1D, Grid, SmoothnessClass, lp_norm, sobolev_norm};
use crate::operators::{OperatorKind, OperatorSpec};
use crate::smoothness::{ModulusQuery, modulus_of_smoothness};

/// Errors at or below this are exact reproductions (rounding only) and take
/// no part in constant fitting or rate estimation.
pub const LHS_FLOOR: f64 = 1e-12;

/// Largest allowed growth of the fitted constant from the first to the last
/// quartile of a degree sweep.
pub const STABILITY_FACTOR: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// `||f - T f||_p <= C ||f||_{2,inf} lambda_p`.
    Thm1,
    /// `||f - T f||_inf <= C (||f||_inf lambda_inf + omega_{2,inf}(f; lambda_inf^{1/2}))`.
    Thm2i,
    /// `||f - T f||_1 <= C (||f||_1 lambda_1 + omega_{3,1}(f; lambda_1^{1/3}))`.
    Thm2ii,
    /// `||T_n f - f||_p <= M_p (t_{n,p}^2 ||f||_p + omega_{2,p}(f; t_{n,p}))`, `1 < p < inf`.
    ThmFinal,
    /// As `ThmFinal` with `s_{n,p}` in place of `t_{n,p}`.
    Corollary,
    /// `||max{B_n f, B_{n+1} f} - f||_p <= ||B_n f - f||_p + ||B_{n+1} f - f||_p`.
    Sec6Max,
    /// `||T_n f - B_n f||_p <= omega_{1,inf}(f; 1/(n+1))` for the sup operator.
    Sec6Sup,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::Thm1,
        TheoremId::Thm2i,
        TheoremId::Thm2ii,
        TheoremId::ThmFinal,
        TheoremId::Corollary,
        TheoremId::Sec6Max,
        TheoremId::Sec6Sup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Thm1 => "thm1",
            TheoremId::Thm2i => "thm2i",
            TheoremId::Thm2ii => "thm2ii",
            TheoremId::ThmFinal => "thmfinal",
            TheoremId::Corollary => "corollary",
            TheoremId::Sec6Max => "sec6_max",
            TheoremId::Sec6Sup => "sec6_sup",
        }
    }

    /// Whether the bound applies to `(op, f, p)`; the error names the mismatch.
    pub fn check_compatible(self, op: OperatorKind, f: &Func1D, p: Exponent) -> Result<()> {
        let fail = |why: String| Err(Error::Precondition(format!("{}: {why}", self.name())));
        match self {
            TheoremId::Thm1 => {
                if f.class() != SmoothnessClass::Winf2 || f.derivative_order() < 2 {
                    return fail(format!(
                        "needs f in W^2_inf with two analytic derivatives, `{}` is {}",
                        f.id(),
                        f.class()
                    ));
                }
            }
            TheoremId::Thm2i => {
                if !p.is_infinite() {
                    return fail(format!("only holds for p = inf, got p = {p}"));
                }
                if !f.class().is_continuous() {
                    return fail(format!("needs continuous f, `{}` is {}", f.id(), f.class()));
                }
            }
            TheoremId::Thm2ii => {
                if p != Exponent::ONE {
                    return fail(format!("only holds for p = 1, got p = {p}"));
                }
            }
            TheoremId::ThmFinal | TheoremId::Corollary => {
                if !p.is_intermediate() {
                    return fail(format!("needs 1 < p < inf, got p = {p}"));
                }
            }
            TheoremId::Sec6Max => {
                if op != OperatorKind::MaxBernstein {
                    return fail(format!("compares max-bernstein only, got {op}"));
                }
            }
            TheoremId::Sec6Sup => {
                if op != OperatorKind::SupBernstein {
                    return fail(format!("compares sup-bernstein only, got {op}"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem `{}`", s.trim())))
    }
}

/// One `(theorem, operator, n, f, p)` evaluation with the constant set to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEntry {
    pub theorem: TheoremId,
    pub n: usize,
    pub lhs: f64,
    pub rhs_core: f64,
}

impl BoundEntry {
    pub fn ratio(&self) -> Option<f64> {
        (self.rhs_core > 0.0).then(|| self.lhs / self.rhs_core)
    }

    /// A positive error against a vanishing bound contradicts every constant.
    pub fn is_hard_failure(&self) -> bool {
        self.lhs > LHS_FLOOR && self.rhs_core <= 0.0
    }

    /// Enters the constant fit.
    pub fn is_fitted(&self) -> bool {
        self.lhs > LHS_FLOOR && self.rhs_core > 0.0
    }
}

/// `last-quartile max <= STABILITY_FACTOR * first-quartile max` over ratios
/// ordered by degree. A quartile holds `ceil(len / 4)` entries.
pub fn stability_check(ratios: &[f64]) -> bool {
    if ratios.is_empty() {
        return true;
    }
    let q = ratios.len().div_ceil(4);
    let first = ratios[..q]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let last = ratios[ratios.len() - q..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    last <= STABILITY_FACTOR * first
}

/// A degree sweep for one `(theorem, operator, f, p)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub operator: OperatorKind,
    pub function: String,
    pub p: Exponent,
    /// Ordered by degree.
    pub entries: Vec<BoundEntry>,
    /// `max lhs / rhs_core` over fitted entries; `None` if none qualify.
    pub fitted_constant: Option<f64>,
    /// Log-log slope of `lhs` against `n`, or why it is unavailable.
    pub rate_slope: std::result::Result<f64, Error>,
    pub stable: bool,
    pub hard_failures: usize,
}

impl BoundReport {
    pub fn from_entries(
        theorem: TheoremId,
        operator: OperatorKind,
        function: impl Into<String>,
        p: Exponent,
        mut entries: Vec<BoundEntry>,
    ) -> Self {
        entries.sort_by_key(|e| e.n);
        let ratios: Vec<f64> = entries
            .iter()
            .filter(|e| e.is_fitted())
            .filter_map(BoundEntry::ratio)
            .collect();
        let fitted_constant = ratios.iter().copied().reduce(f64::max);
        let points: Vec<(usize, f64)> = entries
            .iter()
            .filter(|e| e.lhs > LHS_FLOOR)
            .map(|e| (e.n, e.lhs))
            .collect();
        BoundReport {
            theorem,
            operator,
            function: function.into(),
            p,
            fitted_constant,
            rate_slope: rate_estimate(&points),
            stable: stability_check(&ratios),
            hard_failures: entries.iter().filter(|e| e.is_hard_failure()).count(),
            entries,
        }
    }

    pub fn passed(&self) -> bool {
        self.stable && self.hard_failures == 0
    }
}

/// `omega_{r,p}(f; delta)` with `delta` clamped to `1/r`; zero for `delta = 0`.
fn modulus(f: &Func1D, r: usize, p: Exponent, delta: f64, grid: Grid) -> Result<f64> {
    if delta <= 0.0 {
        return Ok(0.0);
    }
    modulus_of_smoothness(f, &ModulusQuery::clamped(r, p, delta)?, grid)
}

impl OperatorLab {
    /// Left and right side of `theorem` for `f`; `residual` must be the error
    /// profile of this lab's operator on `f`.
    pub fn bound(
        &self,
        theorem: TheoremId,
        f: &Func1D,
        residual: &ErrorProfile,
        p: Exponent,
    ) -> Result<BoundEntry> {
        let op = *self.op();
        theorem.check_compatible(op.kind(), f, p)?;
        let grid = self.grid();
        let entry = |lhs: f64, rhs_core: f64| {
            Ok(BoundEntry {
                theorem,
                n: op.n(),
                lhs,
                rhs_core,
            })
        };
        match theorem {
            TheoremId::Thm1 => {
                let sobolev = sobolev_norm(f, 2, Exponent::INF, grid)?;
                entry(residual.norm(p), sobolev * self.lambda(p))
            }
            TheoremId::Thm2i => {
                let lambda = self.lambda(Exponent::INF);
                let rhs = lp_norm(f, Exponent::INF, grid)? * lambda
                    + modulus(f, 2, Exponent::INF, lambda.sqrt(), grid)?;
                entry(residual.norm(Exponent::INF), rhs)
            }
            TheoremId::Thm2ii => {
                let lambda = self.lambda(Exponent::ONE);
                let rhs = lp_norm(f, Exponent::ONE, grid)? * lambda
                    + modulus(f, 3, Exponent::ONE, lambda.cbrt(), grid)?;
                entry(residual.norm(Exponent::ONE), rhs)
            }
            TheoremId::ThmFinal | TheoremId::Corollary => {
                let idx = self.indices(p)?;
                let index = if theorem == TheoremId::ThmFinal {
                    idx.t_np
                } else {
                    idx.s_np
                };
                let rhs = index * index * lp_norm(f, p, grid)? + modulus(f, 2, p, index, grid)?;
                entry(residual.norm(p), rhs)
            }
            TheoremId::Sec6Max => {
                let (low, high) = op.bernstein_pair();
                let rhs = ErrorProfile::compute(&low, f, grid)?.norm(p)
                    + ErrorProfile::compute(&high, f, grid)?.norm(p);
                entry(residual.norm(p), rhs)
            }
            TheoremId::Sec6Sup => {
                let (plain, _) = op.bernstein_pair();
                let deviation = ErrorProfile::between(&op, &plain, f, grid)?.norm(p);
                let rhs = modulus(f, 1, Exponent::INF, 1.0 / (op.n() + 1) as f64, grid)?;
                entry(deviation, rhs)
            }
        }
    }
}

/// Left side and `rhs_core` of one bound for one operator and function.
pub fn theorem_bound(
    theorem: TheoremId,
    op: &OperatorSpec,
    f: &Func1D,
    p: Exponent,
    grid: Grid,
) -> Result<BoundEntry> {
    theorem.check_compatible(op.kind(), f, p)?;
    let lab = OperatorLab::new(*op, grid)?;
    let residual = ErrorProfile::compute(op, f, grid)?;
    lab.bound(theorem, f, &residual, p)
}

/// One chain of inequalities: it holds when every link has slack `>= -tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    pub holds: bool,
    /// Smallest slack along the chain.
    pub slack: f64,
}

impl ChainCheck {
    const TOLERANCE: f64 = 1e-10;

    fn from_slacks(slacks: &[f64]) -> Self {
        let slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        ChainCheck {
            holds: slack >= -Self::TOLERANCE,
            slack,
        }
    }
}

/// The two comparison estimates of the max- and sup-Bernstein operators
/// against plain Bernstein operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinComparison {
    /// `||max{B_n f, B_{n+1} f} - f||_p <= max{e_n, e_{n+1}} <= e_n + e_{n+1}`.
    pub max_chain: ChainCheck,
    /// `||T_n f - B_n f||_inf <= omega_{1,inf}(f; 1/(n+1))` and
    /// `||T_n f - f||_p <= ||T_n f - B_n f||_p + ||B_n f - f||_p`.
    pub sup_chain: ChainCheck,
    pub max_error: f64,
    pub bernstein_errors: (f64, f64),
    pub sup_deviation_inf: f64,
    pub sup_modulus: f64,
}

pub fn bernstein_comparisons(
    n: usize,
    f: &Func1D,
    p: Exponent,
    grid: Grid,
) -> Result<BernsteinComparison> {
    let max_op = OperatorSpec::new(OperatorKind::MaxBernstein, n)?;
    let sup_op = OperatorSpec::new(OperatorKind::SupBernstein, n)?;
    let (low, high) = max_op.bernstein_pair();

    let max_error = ErrorProfile::compute(&max_op, f, grid)?.norm(p);
    let e_low = ErrorProfile::compute(&low, f, grid)?.norm(p);
    let e_high = ErrorProfile::compute(&high, f, grid)?.norm(p);
    let worst = e_low.max(e_high);
    let max_chain = ChainCheck::from_slacks(&[worst - max_error, e_low + e_high - worst]);

    let deviation = ErrorProfile::between(&sup_op, &low, f, grid)?;
    let deviation_inf = deviation.norm(Exponent::INF);
    let omega = modulus(f, 1, Exponent::INF, 1.0 / (n + 1) as f64, grid)?;
    let sup_error = ErrorProfile::compute(&sup_op, f, grid)?.norm(p);
    let sup_chain =
        ChainCheck::from_slacks(&[omega - deviation_inf, deviation.norm(p) + e_low - sup_error]);

    Ok(BernsteinComparison {
        max_chain,
        sup_chain,
        max_error,
        bernstein_errors: (e_low, e_high),
        sup_deviation_inf: deviation_inf,
        sup_modulus: omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::suite_function;

    #[test]
    fn theorem_names_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
        }
        assert!("thm3".parse::<TheoremId>().is_err());
    }

    #[test]
    fn thm2i_closed_form() {
        // lhs = 1/400, rhs = 1/400 + omega_2(e2; 1/20) = 1/400 + 2/400
        let grid = Grid::new(1024).unwrap();
        let op = OperatorSpec::new(OperatorKind::MaxBernstein, 100).unwrap();
        let e = theorem_bound(TheoremId::Thm2i, &op, &Func1D::e2(), Exponent::INF, grid).unwrap();
        assert!((e.lhs - 0.0025).abs() < 1e-12, "{}", e.lhs);
        assert!((e.rhs_core - 0.0075).abs() < 1e-10, "{}", e.rhs_core);
        assert!((e.ratio().unwrap() - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn thm1_constant_function() {
        let grid = Grid::new(512).unwrap();
        for kind in OperatorKind::FAMILIES {
            let op = OperatorSpec::new(kind, 6).unwrap();
            let e =
                theorem_bound(TheoremId::Thm1, &op, &Func1D::e0(), Exponent::TWO, grid).unwrap();
            assert!(e.lhs < LHS_FLOOR && e.rhs_core >= 0.0);
            assert!(!e.is_fitted() && !e.is_hard_failure());
        }
    }

    #[test]
    fn incompatible_combinations_are_rejected() {
        let grid = Grid::new(512).unwrap();
        let op = OperatorSpec::new(OperatorKind::Bernstein, 4).unwrap();
        let kink = suite_function("abs_kink").unwrap();
        let step = suite_function("step").unwrap();
        let cases = [
            (TheoremId::Thm1, &kink, Exponent::INF),
            (TheoremId::Thm2i, &step, Exponent::INF),
            (TheoremId::Thm2i, &kink, Exponent::TWO),
            (TheoremId::Thm2ii, &kink, Exponent::TWO),
            (TheoremId::ThmFinal, &kink, Exponent::ONE),
            (TheoremId::Corollary, &kink, Exponent::INF),
            (TheoremId::Sec6Max, &kink, Exponent::TWO),
            (TheoremId::Sec6Sup, &kink, Exponent::TWO),
        ];
        for (t, f, p) in cases {
            match theorem_bound(t, &op, f, p, grid) {
                Err(Error::Precondition(msg)) => assert!(msg.starts_with(t.name()), "{msg}"),
                other => panic!("{t}: expected precondition error, got {other:?}"),
            }
        }
    }

    #[test]
    fn stability_quartiles() {
        assert!(stability_check(&[]));
        assert!(stability_check(&[0.5]));
        assert!(stability_check(&[1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4]));
        assert!(stability_check(&[1.0, 1.0, 1.1, 1.2, 1.2, 1.24, 1.25]));
        assert!(!stability_check(&[1.0, 1.0, 1.1, 1.2, 1.2, 1.24, 1.26]));
        // quartile of 7 entries is 2 wide
        assert!(stability_check(&[0.1, 1.0, 5.0, 5.0, 5.0, 1.0, 1.2]));
    }

    #[test]
    fn report_fits_and_flags() {
        let entries = vec![
            BoundEntry {
                theorem: TheoremId::Thm1,
                n: 16,
                lhs: 1.0 / 16.0,
                rhs_core: 0.5,
            },
            BoundEntry {
                theorem: TheoremId::Thm1,
                n: 8,
                lhs: 1.0 / 8.0,
                rhs_core: 0.5,
            },
            BoundEntry {
                theorem: TheoremId::Thm1,
                n: 32,
                lhs: 1.0 / 32.0,
                rhs_core: 0.5,
            },
            BoundEntry {
                theorem: TheoremId::Thm1,
                n: 64,
                lhs: 1.0 / 64.0,
                rhs_core: 0.0,
            },
        ];
        let r = BoundReport::from_entries(
            TheoremId::Thm1,
            OperatorKind::Bernstein,
            "e2",
            Exponent::INF,
            entries,
        );
        assert_eq!(r.entries[0].n, 8);
        assert_eq!(r.fitted_constant, Some(0.25));
        assert_eq!(r.hard_failures, 1);
        assert!(r.stable);
        assert!(!r.passed());
        assert!((r.rate_slope.clone().unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn comparison_examples() {
        let grid = Grid::new(1024).unwrap();
        let c = bernstein_comparisons(16, &Func1D::e2(), Exponent::INF, grid).unwrap();
        assert!(c.max_chain.holds && c.max_chain.slack >= 0.0);
        assert!(c.sup_chain.holds && c.sup_chain.slack >= 0.0);

        let c = bernstein_comparisons(9, &Func1D::e0(), Exponent::TWO, grid).unwrap();
        assert!(c.max_error < 1e-14 && c.sup_deviation_inf < 1e-14 && c.sup_modulus == 0.0);
        assert!(c.max_chain.holds && c.sup_chain.holds);
        assert!(c.max_chain.slack.abs() < 1e-14 && c.sup_chain.slack.abs() < 1e-14);

        let kink = suite_function("abs_kink").unwrap();
        let c = bernstein_comparisons(32, &kink, Exponent::ONE, grid).unwrap();
        assert!(c.sup_deviation_inf <= c.sup_modulus + 1e-8);
        assert!((c.sup_modulus - 1.0 / 33.0).abs() < 1e-12);
    }
}
