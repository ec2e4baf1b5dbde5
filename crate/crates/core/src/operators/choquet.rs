//! Choquet integration against the distorted Lebesgue measure `sqrt(m)`.

use crate::error::{Error, Result};
use crate::funcspace::Func1D;

/// The set function `mu = gamma(m)` with `gamma(u) = sqrt(u)` and `m` the
/// Lebesgue measure on `[0, 1]`. Concave distortion makes it submodular, so
/// the Choquet integral against it is sublinear.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DistortedMeasure;

impl DistortedMeasure {
    pub fn sqrt_lebesgue() -> Self {
        DistortedMeasure
    }

    /// `gamma(u)`.
    #[inline]
    pub fn distort(&self, u: f64) -> f64 {
        u.max(0.0).sqrt()
    }

    /// `mu([a, b])`; empty when `b <= a`.
    pub fn interval(&self, a: f64, b: f64) -> f64 {
        self.distort((b - a).max(0.0))
    }

    /// `mu` of a finite union of pairwise disjoint intervals.
    pub fn union(&self, intervals: &[(f64, f64)]) -> f64 {
        self.distort(intervals.iter().map(|&(a, b)| (b - a).max(0.0)).sum())
    }
}

/// Layer weights `gamma(i/K) - gamma((i-1)/K)` for `i = 1..=K`, i.e. the
/// Choquet weights of `K` equal pieces normalized by `mu` of their union.
#[derive(Debug, Clone)]
pub(crate) struct LayerWeights {
    weights: Vec<f64>,
}

impl LayerWeights {
    pub(crate) fn new(mu: DistortedMeasure, samples: usize) -> Self {
        let k = samples as f64;
        let weights = (1..=samples)
            .map(|i| mu.distort(i as f64 / k) - mu.distort((i - 1) as f64 / k))
            .collect();
        LayerWeights { weights }
    }

    /// Choquet integral of `f` over `[a, b]` divided by `mu([a, b])`.
    ///
    /// `f` is sampled at the midpoints of `K` equal pieces. The values are
    /// shifted by their minimum `c`, sorted in decreasing order and paired
    /// with the layer weights; `c` is added back afterwards, which is exact by
    /// translation covariance.
    pub(crate) fn normalized_integral(
        &self,
        f: &Func1D,
        a: f64,
        b: f64,
        scratch: &mut Vec<f64>,
    ) -> Result<f64> {
        let k = self.weights.len();
        let piece = (b - a) / k as f64;
        scratch.clear();
        for i in 0..k {
            scratch.push(f.eval_checked(a + (i as f64 + 0.5) * piece)?);
        }
        let floor = scratch.iter().copied().fold(f64::INFINITY, f64::min);
        // stable sort: piecewise-monotone samples are a handful of runs
        scratch.sort_by(|u, v| v.total_cmp(u));
        let layered: f64 = scratch
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| (v - floor) * w)
            .sum();
        Ok(floor + layered)
    }
}

/// `(C) int_a^b f dmu` with `f` sampled at `samples` uniform midpoints.
pub fn choquet_integral(
    f: &Func1D,
    a: f64,
    b: f64,
    mu: DistortedMeasure,
    samples: usize,
) -> Result<f64> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Choquet integral needs 0 <= a < b <= 1, got [{a}, {b}]"
        )));
    }
    if samples < 16 {
        return Err(Error::InvalidArgument(format!(
            "Choquet integral needs at least 16 samples, got {samples}"
        )));
    }
    let weights = LayerWeights::new(mu, samples);
    let mut scratch = Vec::with_capacity(samples);
    Ok(weights.normalized_integral(f, a, b, &mut scratch)? * mu.interval(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MU: DistortedMeasure = DistortedMeasure;

    /// Layer-cake form for nonnegative increasing `f` on `[a, b]`:
    /// `int_0^inf mu({f > s}) ds`, computed by midpoint quadrature in `s`.
    fn layer_cake_increasing(
        f: impl Fn(f64) -> f64,
        inverse: impl Fn(f64) -> f64,
        a: f64,
        b: f64,
    ) -> f64 {
        let top = f(b);
        let steps = 200_000;
        let ds = top / steps as f64;
        (0..steps)
            .map(|i| {
                let s = (i as f64 + 0.5) * ds;
                let level = if s < f(a) { a } else { inverse(s) };
                MU.interval(level, b) * ds
            })
            .sum()
    }

    #[test]
    fn measure_axioms() {
        assert_eq!(MU.interval(0.0, 1.0), 1.0);
        assert_eq!(MU.union(&[]), 0.0);
        assert_eq!(MU.interval(0.3, 0.3), 0.0);
        assert!((MU.interval(0.2, 0.45) - 0.5).abs() < 1e-15);
        assert!(MU.union(&[(0.0, 0.1)]) <= MU.union(&[(0.0, 0.1), (0.5, 0.6)]));
        // subadditive on disjoint sets, not additive
        assert!(
            MU.union(&[(0.0, 0.25), (0.5, 0.75)]) < MU.interval(0.0, 0.25) + MU.interval(0.5, 0.75)
        );
    }

    #[test]
    fn constant_integrates_to_measure() {
        let one = Func1D::e0();
        assert!((choquet_integral(&one, 0.0, 1.0, MU, 1024).unwrap() - 1.0).abs() < 1e-12);
        for (c, a, b) in [(-1.7, 0.1, 0.35), (0.4, 0.5, 0.9), (2.0, 0.0, 0.01)] {
            let f = Func1D::constant(c);
            let v = choquet_integral(&f, a, b, MU, 64).unwrap();
            assert!((v - c * (b - a).sqrt()).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn identity_matches_layer_cake() {
        // int_0^1 sqrt(1 - s) ds = 2/3
        let oracle = layer_cake_increasing(|t| t, |s| s, 0.0, 1.0);
        assert!((oracle - 2.0 / 3.0).abs() < 1e-6);
        let v = choquet_integral(&Func1D::e1(), 0.0, 1.0, MU, 4096).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-3, "{v}");
    }

    #[test]
    fn square_on_subinterval_matches_layer_cake() {
        let (a, b) = (0.2, 0.6);
        let oracle = layer_cake_increasing(|t| t * t, f64::sqrt, a, b);
        let v = choquet_integral(&Func1D::e2(), a, b, MU, 4096).unwrap();
        assert!((v - oracle).abs() < 1e-4, "{v} vs {oracle}");
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = Func1D::e1();
        assert!(choquet_integral(&f, 0.5, 0.5, MU, 64).is_err());
        assert!(choquet_integral(&f, 0.6, 0.5, MU, 64).is_err());
        assert!(choquet_integral(&f, 0.0, 1.0, MU, 8).is_err());
    }
}
