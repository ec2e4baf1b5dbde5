use korovkin_lab::Error;
use korovkin_lab::funcspace::{Exponent, Func1D, Grid, suite_function};
use korovkin_lab::korovkin::{
    BoundReport, ErrorProfile, OperatorLab, TheoremId, bernstein_comparisons, compute_indices,
    measure_error, rate_estimate,
};
use korovkin_lab::operators::{MomentKind, OperatorKind, OperatorSpec, operator_moment};
use proptest::prelude::*;

const DEGREES: [usize; 7] = [8, 16, 32, 64, 128, 256, 512];
const PS: [Exponent; 3] = [Exponent::ONE, Exponent::TWO, Exponent::INF];

fn spec(kind: OperatorKind, n: usize) -> OperatorSpec {
    OperatorSpec::new(kind, n).unwrap()
}

#[test]
fn max_bernstein_closed_forms() {
    let grid = Grid::new(2048).unwrap();
    for n in DEGREES {
        for p in PS {
            let idx = compute_indices(&spec(OperatorKind::MaxBernstein, n), p, grid).unwrap();
            let quarter = 1.0 / (4 * n) as f64;
            assert!(
                idx.lambda_p <= quarter + 1e-10,
                "n={n} p={p}: {}",
                idx.lambda_p
            );
            assert!((idx.mu_n - quarter).abs() < 1e-10, "n={n}: {}", idx.mu_n);
        }
    }
}

#[test]
fn sup_bernstein_defects() {
    let grid = Grid::new(1024).unwrap();
    for n in [8, 16, 64, 256] {
        let op = spec(OperatorKind::SupBernstein, n);
        let cell = 1.0 / (n + 1) as f64;
        for p in PS {
            let e1 = measure_error(&op, &Func1D::e1(), p, grid).unwrap();
            let ne1 = measure_error(&op, &Func1D::e1().neg(), p, grid).unwrap();
            let e2 = measure_error(&op, &Func1D::e2(), p, grid).unwrap();
            assert!(e1 <= cell + 1e-8 && ne1 <= cell + 1e-8, "n={n} p={p}");
            assert!(e2 <= 6.0 * cell + 1e-8);
        }
        for x in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let m = operator_moment(&op, MomentKind::Second, x).unwrap();
            assert!(m <= 9.0 / (4 * n) as f64 + 1e-8);
        }
    }
}

#[test]
fn indices_shrink_with_degree() {
    let grid = Grid::new(512).unwrap();
    for kind in OperatorKind::FAMILIES {
        let labs: Vec<OperatorLab> = DEGREES
            .iter()
            .map(|&n| OperatorLab::new(spec(kind, n), grid).unwrap())
            .collect();
        for p in PS {
            let idx: Vec<_> = labs.iter().map(|l| l.indices(p).unwrap()).collect();
            for w in idx.windows(2) {
                for (a, b) in [
                    (w[0].lambda_p, w[1].lambda_p),
                    (w[0].mu_n, w[1].mu_n),
                    (w[0].t_np, w[1].t_np),
                    (w[0].s_np, w[1].s_np),
                ] {
                    assert!(b <= 1.1 * a + 1e-14, "{kind} p={p}: {a} -> {b}");
                }
            }
            // t and s decay at least like n^{-1/4}
            let (first, last) = (idx[0], idx[idx.len() - 1]);
            assert!(
                last.t_np <= 0.5 * first.t_np && last.s_np <= 0.5 * first.s_np,
                "{kind} p={p}"
            );
        }
    }
}

#[test]
fn thmfinal_sweep_has_bounded_constant() {
    let grid = Grid::new(1024).unwrap();
    let f = suite_function("abs_kink").unwrap();
    let p = Exponent::TWO;
    let entries = [16, 32, 64, 128, 256]
        .into_iter()
        .map(|n| {
            let op = spec(OperatorKind::MaxBernstein, n);
            let lab = OperatorLab::new(op, grid).unwrap();
            let residual = ErrorProfile::compute(&op, &f, grid).unwrap();
            lab.bound(TheoremId::ThmFinal, &f, &residual, p).unwrap()
        })
        .collect();
    let report = BoundReport::from_entries(
        TheoremId::ThmFinal,
        OperatorKind::MaxBernstein,
        "abs_kink",
        p,
        entries,
    );
    let k = report.fitted_constant.unwrap();
    assert!(k.is_finite() && k > 0.0);
    assert!(report.passed(), "{report:?}");
}

#[test]
fn rate_needs_four_positive_points() {
    let pts = [(8, 0.1), (16, 0.0), (32, 0.02), (64, -1.0), (128, 0.01)];
    assert_eq!(
        rate_estimate(&pts),
        Err(Error::InsufficientData { have: 3, need: 4 })
    );
    assert!(rate_estimate(&[(8, 1.0), (8, 1.0), (9, 1.0), (10, 1.0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_laws_are_recovered(c in 1e-3f64..10.0, s in -2.0f64..0.5, start in 2usize..20, len in 4usize..9) {
        let pts: Vec<(usize, f64)> = (0..len).map(|i| {
            let n = start << i;
            (n, c * (n as f64).powf(s))
        }).collect();
        prop_assert!((rate_estimate(&pts).unwrap() - s).abs() < 1e-10);
    }

    #[test]
    fn comparison_chains_hold(i in 0..8usize, n in 2usize..40, p in prop::sample::select(PS.to_vec())) {
        let f = korovkin_lab::funcspace::make_test_suite().swap_remove(i);
        let c = bernstein_comparisons(n, &f, p, Grid::new(512).unwrap()).unwrap();
        prop_assert!(c.max_chain.holds, "{:?}", c);
        prop_assert!(c.sup_chain.holds, "{:?}", c);
        prop_assert!(c.sup_deviation_inf <= c.sup_modulus + 1e-8);
    }
}
