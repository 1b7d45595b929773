use darboux_core::lieseries::{lie_derivative, radial_lie_derivative, ExtendedField, LieOperator};
use darboux_core::moser::build_moser_field;
use darboux_core::polyring::{rat, radial_expand};
use darboux_core::{MIndex, Param, Poly, RadialFn, Var};
use proptest::prelude::*;

fn lattice_poly(n: usize, d: u32) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0u32..=2, 2 * n), 0u32..=1, -5i64..=5, 1i64..=3);
    prop::collection::vec(term, 0..5).prop_map(move |terms| {
        Poly::from_terms(
            n,
            d,
            terms
                .into_iter()
                .map(|(phase, t, a, b)| (MIndex::new(phase, t, [0, 0, 0]), rat(a, b))),
        )
    })
}

fn apply_n(op: &LieOperator, f: &Poly, n: usize) -> Poly {
    (0..n).fold(f.clone(), |g, _| op.apply(&g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lie_derivative_is_linear(f in lattice_poly(2, 8), g in lattice_poly(2, 8), a in -4i64..4, b in 1i64..4) {
        let field = ExtendedField::moser(4, None);
        let c = rat(a, b);
        let lhs = lie_derivative(&(&f.scale(&c) + &g), &field).unwrap();
        let rhs = &lie_derivative(&f, &field).unwrap().scale(&c) + &lie_derivative(&g, &field).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_is_a_derivation(f in lattice_poly(2, 8), g in lattice_poly(2, 8)) {
        let field = ExtendedField::moser(4, None);
        let lhs = lie_derivative(&(&f * &g), &field).unwrap();
        let rhs = &(&f * &lie_derivative(&g, &field).unwrap()) + &(&g * &lie_derivative(&f, &field).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn difference_identity_for_powers(f in lattice_poly(2, 8), k in 2usize..4) {
        // X1 full field, X2 capped at degree 3, Y = X1 − X2 purely spatial
        let x1 = ExtendedField::moser(4, None);
        let x2 = ExtendedField::moser(4, Some(1));
        let l1 = LieOperator::new(&x1, 2, 8).unwrap();
        let l2 = LieOperator::new(&x2, 2, 8).unwrap();
        let ly = LieOperator::spatial(&x1.effective_chi().sub(&x2.effective_chi()), 2, 8);
        let lhs = &apply_n(&l1, &f, k) - &apply_n(&l2, &f, k);
        let mut rhs = ly.apply(&apply_n(&l2, &f, k - 1)).unwrap();
        for l in 1..k {
            let inner = ly.apply(&apply_n(&l2, &f, l - 1)).unwrap();
            rhs = &rhs + &apply_n(&l1, &inner, k - l);
        }
        prop_assert_eq!(lhs, rhs);
    }
}

/// Σ_{k≤K} sign^k/k! L^k f without substituting t.
fn exp_keep_t(op: &LieOperator, f: &Poly, k_max: u32, sign: i64) -> Poly {
    let mut acc = f.clone();
    let mut term = f.clone();
    for k in 1..=k_max {
        term = op.apply(&term).unwrap().scale(&rat(sign, k as i64));
        acc = &acc + &term;
    }
    acc
}

#[test]
fn forward_then_inverse_is_identity_to_order() {
    let d = 16;
    let field = ExtendedField::moser(8, None);
    let op = LieOperator::new(&field, 1, d).unwrap();
    for f_fn in [RadialFn::PRadial, RadialFn::LogFactor, RadialFn::Sigma] {
        for deg in [2u32, 4] {
            let f = radial_expand(f_fn, 8).to_poly(1, d, 0).homogeneous_part(deg);
            if f.is_zero() {
                continue;
            }
            for k in 1..=4 {
                let back = exp_keep_t(&op, &exp_keep_t(&op, &f, k, 1), k, -1);
                let diff = &back - &f;
                assert!(diff.min_phase_degree().is_none_or(|m| m >= deg + 2), "{f_fn:?} deg {deg} K {k}");
            }
        }
    }
}

#[test]
fn radial_field_commutes_with_rotation() {
    // [V, R] with V = χ(t, s)(x, y) and R = (y, −x), component-wise
    let d = 9;
    let chi = build_moser_field(4).chi.to_poly(1, d, 0);
    let x = Poly::var(1, d, Var::X(0)).unwrap();
    let y = Poly::var(1, d, Var::Y(0)).unwrap();
    let v = [&chi * &x, &chi * &y];
    let r = [y.clone(), -&x];
    let vars = [Var::X(0), Var::Y(0)];
    for i in 0..2 {
        let mut bracket = Poly::zero(1, d);
        for (j, var) in vars.iter().enumerate() {
            bracket = &bracket + &(&v[i].diff(*var).unwrap() * &r[j]);
            bracket = &bracket - &(&r[i].diff(*var).unwrap() * &v[j]);
        }
        assert!(bracket.is_zero(), "component {i}");
    }
}

#[test]
fn lattice_engine_matches_radial_oracle() {
    let s = 6;
    let d = 2 * s as u32;
    let chi = radial_expand(RadialFn::Chi, s);
    let f = radial_expand(RadialFn::PRadial, s);
    let field = ExtendedField::new(chi.clone(), None);
    let mut lattice = f.to_poly(1, d, 0);
    let mut radial = f.clone();
    for _ in 0..3 {
        lattice = lie_derivative(&lattice, &field).unwrap();
        radial = radial_lie_derivative(&radial, &chi);
        assert_eq!(lattice, radial.to_poly(1, d, 0));
    }
}

#[test]
fn degree_three_part_of_forward_flow() {
    let field = ExtendedField::moser(3, None);
    for k in 1..=3 {
        let (x, y) = darboux_core::lieseries::coordinate_flow(&field, k, 2, 3, 1).unwrap();
        for (img, v) in [(x, Var::X(1)), (y, Var::Y(1))] {
            let cubic = img.homogeneous_part(3);
            let a = Poly::site_norm2(2, 3, 1).unwrap();
            let expect = (&(&a * &Poly::var(2, 3, v).unwrap()) * &Poly::param(2, 3, Param::Nu))
                .scale(&rat(-1, 4));
            assert_eq!(cubic, expect);
        }
    }
}
