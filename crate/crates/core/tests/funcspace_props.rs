use korovkin_lab::funcspace::{Exponent, Func1D, Grid, lp_norm, make_test_suite, sobolev_norm};
use proptest::prelude::*;

const MENU: [f64; 5] = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];

fn suite_index() -> impl Strategy<Value = usize> {
    0..make_test_suite().len()
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop::sample::select(MENU.to_vec()).prop_map(|p| Exponent::new(p).unwrap())
}

fn member(i: usize) -> Func1D {
    make_test_suite().swap_remove(i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_absolutely_homogeneous(i in suite_index(), p in exponent(), c in -4.0f64..4.0) {
        let grid = Grid::new(512).unwrap();
        let f = member(i);
        let lhs = lp_norm(&f.scale(c), p, grid).unwrap();
        let rhs = c.abs() * lp_norm(&f, p, grid).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs), "{lhs} vs {rhs}");
    }

    #[test]
    fn triangle_inequality(i in suite_index(), j in suite_index(), p in exponent(), a in -2.0f64..2.0) {
        let grid = Grid::new(512).unwrap();
        let f = member(i).scale(a);
        let g = member(j);
        let sum = lp_norm(&f.add(&g), p, grid).unwrap();
        let parts = lp_norm(&f, p, grid).unwrap() + lp_norm(&g, p, grid).unwrap();
        prop_assert!(sum <= parts + 1e-10, "{sum} > {parts}");
    }

    #[test]
    fn norm_increases_with_exponent(i in suite_index(), a in -2.0f64..2.0, b in -1.0f64..1.0) {
        let grid = Grid::new(1024).unwrap();
        let f = member(i).scale(a).add_constant(b);
        let norms: Vec<f64> = MENU.iter().map(|&p| lp_norm(&f, Exponent::new(p).unwrap(), grid).unwrap()).collect();
        for w in norms.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-8, "{norms:?}");
        }
    }

    #[test]
    fn grid_doubling_changes_little(i in suite_index(), p in exponent()) {
        let f = member(i);
        let coarse = lp_norm(&f, p, Grid::new(4096).unwrap()).unwrap();
        let fine = lp_norm(&f, p, Grid::new(8192).unwrap()).unwrap();
        prop_assert!((coarse - fine).abs() < 1e-6, "{coarse} vs {fine}");
    }

    #[test]
    fn sobolev_dominates_function_norm(i in suite_index(), p in exponent()) {
        let grid = Grid::new(512).unwrap();
        let f = member(i);
        if f.class().is_continuous() && f.derivative_order() >= 1 {
            let s = sobolev_norm(&f, 1, p, grid).unwrap();
            prop_assert!(s + 1e-12 >= lp_norm(&f, p, grid).unwrap());
        }
    }
}

#[test]
fn closed_form_norms() {
    let grid = Grid::new(4096).unwrap();
    let e2 = Func1D::e2();
    // int x^4 = 1/5
    let two = lp_norm(&e2, Exponent::TWO, grid).unwrap();
    assert!((two - (0.2f64).sqrt()).abs() < 1e-7, "{two}");
    // int |x - 1/2|^{3/2} dx = 2 * (1/2)^{5/2} / (5/2)
    let c1 = make_test_suite()
        .into_iter()
        .find(|f| f.id() == "c1_pow")
        .unwrap();
    let one = lp_norm(&c1, Exponent::ONE, grid).unwrap();
    let exact = 2.0 * 0.5f64.powf(2.5) / 2.5;
    assert!((one - exact).abs() < 1e-7, "{one} vs {exact}");
    // ||e^x||_{2, inf} = e on [0, 1]
    let exp = make_test_suite()
        .into_iter()
        .find(|f| f.id() == "exp")
        .unwrap();
    let s = sobolev_norm(&exp, 2, Exponent::INF, grid).unwrap();
    assert!((s - std::f64::consts::E).abs() < 1e-12, "{s}");
}

#[test]
fn declared_derivatives_are_consistent() {
    for f in make_test_suite() {
        f.check_derivatives(11)
            .unwrap_or_else(|e| panic!("{}: {e}", f.id()));
    }
}
