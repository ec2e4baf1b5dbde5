use std::sync::Arc;

use super::{Func1D, RealFn, SmoothnessClass};

/// The function corpus used by the sweeps and property checks.
///
/// Every member is monotone between consecutive declared kinks, so a sup
/// over sampled points that include the kinks is attained exactly.
pub fn make_test_suite() -> Vec<Func1D> {
    vec![
        Func1D::e0(),
        Func1D::e1(),
        Func1D::e2(),
        Func1D::e1().neg().with_id("neg_e1"),
        exp(),
        c1_power(),
        abs_kink(),
        step(),
    ]
}

/// Looks a suite member up by id.
pub fn suite_function(id: &str) -> Option<Func1D> {
    make_test_suite().into_iter().find(|f| f.id() == id)
}

fn exp() -> Func1D {
    let d: RealFn = Arc::new(f64::exp);
    Func1D::new("exp", SmoothnessClass::Winf2, f64::exp)
        .with_derivatives(vec![d.clone(), d.clone(), d])
        .expect("three derivatives")
}

/// `|x - 1/2|^{3/2}`: continuously differentiable, second derivative
/// unbounded at 1/2 but in `L_p` for `p < 2`.
fn c1_power() -> Func1D {
    let d1: RealFn = Arc::new(|x: f64| 1.5 * (x - 0.5).signum() * (x - 0.5).abs().sqrt());
    Func1D::new("c1_pow", SmoothnessClass::Wp2, |x: f64| {
        (x - 0.5).abs().powf(1.5)
    })
    .with_derivatives(vec![d1])
    .and_then(|f| f.with_kinks(vec![0.5]))
    .expect("valid c1_pow")
}

/// `|x - 1/2|`.
fn abs_kink() -> Func1D {
    let d1: RealFn = Arc::new(|x: f64| if x >= 0.5 { 1.0 } else { -1.0 });
    Func1D::new("abs_kink", SmoothnessClass::C0, |x: f64| (x - 0.5).abs())
        .with_derivatives(vec![d1])
        .and_then(|f| f.with_kinks(vec![0.5]))
        .expect("valid abs_kink")
}

/// Indicator of `[1/2, 1]`.
fn step() -> Func1D {
    Func1D::new("step", SmoothnessClass::Lp, |x: f64| {
        if x >= 0.5 { 1.0 } else { 0.0 }
    })
    .with_kinks(vec![0.5])
    .expect("valid step")
}
