use darboux_core::polyring::{rat, radial_expand};
use darboux_core::{MIndex, Poly, RadialFn, Var};
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Random polynomial in x_0, y_0, t (three variables), phase degree ≤ 4.
fn poly_strategy(trunc: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..=4, 0u32..=4, 0u32..=2, -9i64..=9, 1i64..=4), 0..6).prop_map(
        move |terms| {
            Poly::from_terms(
                1,
                trunc,
                terms
                    .into_iter()
                    .filter(|(ex, ey, ..)| ex + ey <= 4)
                    .map(|(ex, ey, et, n, d)| (MIndex::new(vec![ex, ey], et, [0; 3]), rat(n, d))),
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_laws(a in poly_strategy(6), b in poly_strategy(6), c in poly_strategy(6)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn truncation_coherence(a in poly_strategy(8), b in poly_strategy(8), d in 0u32..8) {
        let full = (&a * &b).with_trunc(d);
        let early = &a.with_trunc(d) * &b.with_trunc(d);
        prop_assert_eq!(full, early);
    }

    #[test]
    fn leibniz(a in poly_strategy(8), b in poly_strategy(8)) {
        for v in [Var::X(0), Var::Y(0), Var::T] {
            let lhs = (&a * &b).diff(v).unwrap();
            let rhs = &(&a * &b.diff(v).unwrap()) + &(&a.diff(v).unwrap() * &b);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn majorant_submultiplicative(a in poly_strategy(8), b in poly_strategy(8), rho in 0.01f64..2.0) {
        let a = a.substitute_t(&rat(0, 1));
        let b = b.substitute_t(&rat(0, 1));
        let ab = (&a * &b).majorant_norm(rho).unwrap();
        let bound = a.majorant_norm(rho).unwrap() * b.majorant_norm(rho).unwrap();
        prop_assert!(ab <= bound * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn eval_after_substitution(a in poly_strategy(6), x in -1.0f64..1.0, y in -1.0f64..1.0, t in -1.0f64..1.0) {
        let tau = rat((t * 64.0).round() as i64, 64);
        let t = (t * 64.0).round() / 64.0;
        let params = darboux_core::ParamValues::new(0.5, 1.0, 0.1);
        let direct = a.eval(&[x], &[y], &params, t).unwrap();
        let substituted = a.substitute_t(&tau).eval(&[x], &[y], &params, 0.0).unwrap();
        // every term is bounded by its coefficient on the unit box
        let scale: f64 = a.terms().map(|(_, c)| c.to_f64().unwrap().abs()).sum();
        prop_assert!((direct - substituted).abs() <= 1e-13 * scale.max(1e-300));
    }
}

#[test]
fn chi_is_half_g_times_log_factor() {
    for s in 0..12 {
        let g = radial_expand(RadialFn::GFactor, s);
        let lf = radial_expand(RadialFn::LogFactor, s);
        assert_eq!(radial_expand(RadialFn::Chi, s), g.mul(&lf).scale(&rat(1, 2)));
    }
}

#[test]
fn small_worked_examples() {
    let x = Poly::var(1, 2, Var::X(0)).unwrap();
    let y = Poly::var(1, 2, Var::Y(0)).unwrap();
    let one = Poly::one(1, 2);
    assert_eq!(&(&one + &x) * &(&one - &x), &one - &(&x * &x));
    let x1 = x.with_trunc(1);
    let y1 = y.with_trunc(1);
    assert!((&(&x1 + &y1) * &(&x1 + &y1)).is_zero());
    let p = &(&x * &x) + &y.scale(&rat(2, 1));
    assert_eq!(&p + &-&(&x * &x), y.scale(&rat(2, 1)));
    assert!((p.majorant_norm(0.5).unwrap() - 1.25).abs() < 1e-15);
}
