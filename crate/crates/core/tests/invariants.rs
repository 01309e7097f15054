use hausdorff_core::hausdorff::ContourMethod;
use hausdorff_core::verify::{check_bound, composition_inequality_check};
use hausdorff_core::{
    bloch_seminorm, compose, Complex64, ComposeParams, HausdorffOperator, KernelSpec, MeasureSpec, MobiusParam,
    NormSettings, SpaceSpec, TaylorFunction,
};
use proptest::prelude::*;

fn point(rmax: f64) -> impl Strategy<Value = Complex64> {
    (0.0..rmax, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = TaylorFunction> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_degree + 1)
        .prop_map(|c| TaylorFunction::new(c.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

fn atoms() -> impl Strategy<Value = MeasureSpec> {
    prop::collection::vec((point(0.85), 0.05..1.0f64), 1..4).prop_map(|a| {
        let (w, m): (Vec<_>, Vec<_>) = a.into_iter().unzip();
        MeasureSpec::discrete(&w, &m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mobius_map_is_an_involution(w in point(0.99), z in point(1.0)) {
        let w = MobiusParam::new(w).unwrap();
        let back = w.apply(w.apply(z).unwrap()).unwrap();
        prop_assert!((back - z).norm() < 1e-12);
    }

    #[test]
    fn composition_matches_pointwise(f in polynomial(12), w in point(0.9), z in point(0.95)) {
        let w = MobiusParam::new(w).unwrap();
        let g = compose(&f, &w, &ComposeParams::default()).unwrap();
        prop_assert!((g.horner(z) - f.horner(w.apply(z).unwrap())).norm() < 1e-8);
    }

    #[test]
    fn bloch_seminorm_is_mobius_invariant(f in polynomial(8), w in point(0.6)) {
        let g = compose(&f, &MobiusParam::new(w).unwrap(), &ComposeParams::default()).unwrap();
        let (a, b) = (bloch_seminorm(&g), bloch_seminorm(&f));
        prop_assert!((a - b).abs() <= 1e-3 * b.max(1e-12));
    }

    #[test]
    fn composition_inequalities_hold(f in polynomial(8), w in point(0.8)) {
        let w = MobiusParam::new(w).unwrap();
        let s = NormSettings::default();
        for space in [SpaceSpec::Bergman { p: 2.0, alpha: 0.5 }, SpaceSpec::Hardy { p: 3.0 }] {
            let c = composition_inequality_check(&f, &w, &space, &s).unwrap();
            prop_assert!(c.lhs <= c.rhs * (1.0 + 1e-3), "{space:?}: {} > {}", c.lhs, c.rhs);
        }
    }

    #[test]
    fn discrete_operators_respect_hardy_bound(m in atoms(), seed in 0u64..1000) {
        let h = HausdorffOperator::new(KernelSpec::constant(1.0), m, 0).unwrap();
        let r = check_bound(&h, &SpaceSpec::Hardy { p: 2.0 }, 20, seed, &NormSettings::default()).unwrap();
        prop_assert!(r.pass && r.empirical <= r.theoretical * 1.01);
    }

    #[test]
    fn contour_methods_agree_with_closed_form(m in atoms()) {
        let h = HausdorffOperator::new(KernelSpec::RadialPower(1.0), m, 0).unwrap();
        let z = TaylorFunction::monomial(1);
        let closed = h.corollary_coeffs(24);
        let series = h.coefficient_sequence(&z, 24).unwrap();
        let trap = h.coefficient_sequence_with(&z, 24, ContourMethod::Trapezoid { samples: 2048 }).unwrap();
        prop_assert!(series.max_abs_diff(&closed) < 1e-8);
        prop_assert!(trap.max_abs_diff(&closed) < 1e-8);
    }
}
