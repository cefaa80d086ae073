use num_complex::Complex64;
use proptest::prelude::*;

use dirac_reduce::dirac::{current_divergence, dirac_residual_components, dirac_residual_matrix, SpinorJets};
use dirac_reduce::dsl::{builtin, builtin_names, parse_expression, BinOp, Expr, Func};
use dirac_reduce::fields::{field_strength, gauge_shift};
use dirac_reduce::jet::{relative_difference, scaled_difference, Jet};
use dirac_reduce::oracle::random::{
    random_admissible_potentials, random_jet, random_potentials, random_real_jet, random_spinor,
    sampled_min_coefficient, seeded,
};
use dirac_reduce::realify::{conservation_split, make_real};
use dirac_reduce::reduction::{assemble_spinor, fourth_order_residual, reconstruct_psi34};
use dirac_reduce::scalar::{kg_residual, ScalarParams};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn rotate(chi: &Jet, f: &Jet) -> Jet {
    let n = chi.order().min(f.order());
    &chi.truncated(n).scale(Complex64::i()).exp() * &f.truncated(n)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn leibniz_rule(seed in any::<u64>(), axis in 0usize..4) {
        let mut rng = seeded(seed);
        let (f, g) = (random_jet(&mut rng, 6), random_jet(&mut rng, 6));
        let lhs = (&f * &g).partial(axis).unwrap();
        let rhs = f.partial(axis).unwrap() * g.truncated(5) + f.truncated(5) * g.partial(axis).unwrap();
        prop_assert!(relative_difference(&lhs, &rhs) < 1e-14);
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>(), a in 0usize..4, b in 0usize..4) {
        let f = random_jet(&mut seeded(seed), 5);
        let ab = f.partials(&[a, b]).unwrap();
        let ba = f.partials(&[b, a]).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn reciprocal_inverts(seed in any::<u64>()) {
        let mut f = random_jet(&mut seeded(seed), 6);
        // keep the value well away from zero
        f = f + Jet::constant(2.0, 6);
        let one = &f * &f.recip().unwrap();
        prop_assert!(relative_difference(&one, &Jet::constant(1.0, 6)) < 1e-13);
    }

    #[test]
    fn log_of_exp_is_identity(seed in any::<u64>()) {
        let f = random_jet(&mut seeded(seed), 5).scale(0.3);
        let back = f.exp().ln().unwrap();
        // the value of ln lands on the principal branch, which |f(0)| ≤ 0.3 respects
        prop_assert!(scaled_difference(&back, &f, 1.0) < 1e-14);
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        a in arb_expr(3), b in arb_expr(3),
        t in -0.5f64..0.5, x in -0.5f64..0.5, y in -0.5f64..0.5, z in -0.5f64..0.5,
    ) {
        let p = [t, x, y, z];
        let (ja, jb) = (a.eval_jet(p, 4), b.eval_jet(p, 4));
        prop_assume!(ja.is_ok() && jb.is_ok());
        let (ja, jb) = (ja.unwrap(), jb.unwrap());
        prop_assume!(ja.max_abs() < 1e6 && jb.max_abs() < 1e6);
        let sum = Expr::binary(BinOp::Add, a.clone(), b.clone()).eval_jet(p, 4).unwrap();
        let prod = Expr::binary(BinOp::Mul, a.clone(), b.clone()).eval_jet(p, 4).unwrap();
        prop_assert!(relative_difference(&sum, &(&ja + &jb)) < 1e-14);
        prop_assert!(relative_difference(&prod, &(&ja * &jb)) < 1e-14);
        let direct = a.eval(p).unwrap();
        prop_assert!((direct - ja.value()).norm() <= 1e-12 * direct.norm().max(1.0));
    }

    #[test]
    fn pretty_print_round_trips(e in arb_expr(4)) {
        let text = e.to_string();
        let back = parse_expression(&text).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn field_tensor_is_antisymmetric(seed in any::<u64>()) {
        let f = field_strength(&random_potentials(&mut seeded(seed), 4)).unwrap();
        for mu in 0..4 {
            for nu in 0..4 {
                prop_assert_eq!(&f.tensor[mu][nu], &-&f.tensor[nu][mu]);
            }
        }
    }

    #[test]
    fn field_strength_is_gauge_invariant(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_potentials(&mut rng, 5);
        let chi = random_real_jet(&mut rng, 6);
        let before = field_strength(&p).unwrap();
        let after = field_strength(&gauge_shift(&p, &chi).unwrap()).unwrap();
        for k in 0..3 {
            prop_assert!(scaled_difference(&before.f[k], &after.f[k], 1.0) < 1e-13);
        }
    }

    #[test]
    fn dirac_operator_is_gauge_covariant(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_potentials(&mut rng, 5);
        let psi = random_spinor(&mut rng, 5);
        let chi = random_real_jet(&mut rng, 6);
        let shifted = gauge_shift(&p, &chi).unwrap();
        let rotated = SpinorJets(psi.0.each_ref().map(|c| rotate(&chi, c)));
        let before = dirac_residual_matrix(&psi, &p).unwrap();
        let after = dirac_residual_matrix(&rotated, &shifted).unwrap();
        for k in 0..4 {
            prop_assert!(scaled_difference(&after.0[k], &rotate(&chi, &before.0[k]), psi.max_abs()) < 1e-12);
        }
    }

    #[test]
    fn klein_gordon_is_gauge_covariant(seed in any::<u64>(), charge in 0.2f64..2.0) {
        let mut rng = seeded(seed);
        let params = ScalarParams { charge, mass: 1.0 };
        let p = random_potentials(&mut rng, 5);
        let psi = random_jet(&mut rng, 5);
        let chi = random_real_jet(&mut rng, 6);
        let shifted = gauge_shift(&p, &chi.scale(1.0 / charge)).unwrap();
        let before = kg_residual(&psi, &p, params).unwrap();
        let after = kg_residual(&rotate(&chi, &psi), &shifted, params).unwrap();
        prop_assert!(scaled_difference(&after, &rotate(&chi, &before), psi.max_abs()) < 1e-12);
    }

    #[test]
    fn transcriptions_agree(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_potentials(&mut rng, 5);
        let psi = random_spinor(&mut rng, 5);
        let a = dirac_residual_matrix(&psi, &p).unwrap();
        let b = dirac_residual_components(&psi, &p).unwrap();
        for k in 0..4 {
            prop_assert!(relative_difference(&a.0[k], &b.0[k]) < 1e-13);
        }
    }

    #[test]
    fn reconstruction_satisfies_lower_rows(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_potentials(&mut rng, 5);
        let (psi1, psi2) = (random_jet(&mut rng, 5), random_jet(&mut rng, 5));
        let (psi3, psi4) = reconstruct_psi34(&psi1, &psi2, &p).unwrap();
        let s = SpinorJets([psi1.truncated(4), psi2.truncated(4), psi3, psi4]);
        let r = dirac_residual_components(&s, &p).unwrap();
        prop_assert!(r.0[2].max_abs() <= 1e-13 * s.max_abs());
        prop_assert!(r.0[3].max_abs() <= 1e-13 * s.max_abs());
    }

    #[test]
    fn current_divergence_matches_split(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_admissible_potentials(&mut rng, 7, 0.1).unwrap();
        let psi1 = random_jet(&mut rng, 7);
        let s = assemble_spinor(&psi1, &p).unwrap();
        let split = conservation_split(&s, &p).unwrap();
        prop_assume!(!split.psi4_below_floor);
        let div = current_divergence(&s).unwrap();
        let m = split.conservation.order();
        prop_assert!(scaled_difference(&div.truncated(m), &split.conservation, s.max_abs().powi(2)) < 1e-10);
    }

    #[test]
    fn realification_removes_phase(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_potentials(&mut rng, 5);
        let psi1 = random_jet(&mut rng, 5) + Jet::constant(Complex64::new(1.5, -1.0), 5);
        let r = make_real(&psi1, &p).unwrap();
        prop_assert!(r.relative_imag() <= 1e-11);
        prop_assert!(r.psi1_real.value().re > 0.0);
    }

    #[test]
    fn fourth_order_operator_is_linear(seed in any::<u64>(), c in -2.0f64..2.0) {
        let mut rng = seeded(seed);
        let p = random_admissible_potentials(&mut rng, 6, 0.1).unwrap();
        let (f, g) = (random_jet(&mut rng, 6), random_jet(&mut rng, 6));
        let combined = fourth_order_residual(&(&f + &g.scale(c)), &p).unwrap();
        let parts = fourth_order_residual(&f, &p).unwrap() + fourth_order_residual(&g, &p).unwrap().scale(c);
        prop_assert!(scaled_difference(&combined, &parts, 1.0) < 1e-10);
    }
}

#[test]
fn builtin_scenarios_meet_their_coefficient_bound() {
    for name in builtin_names().filter(|n| *n != "zero_field") {
        let s = builtin(name).unwrap();
        let min = sampled_min_coefficient(&s, &mut seeded(2024), 1000).unwrap();
        assert!(min >= s.min_coefficient, "{name}: {min} < {}", s.min_coefficient);
    }
}

fn arb_real() -> impl Strategy<Value = f64> {
    (0u32..4000).prop_map(|k| k as f64 / 16.0)
}

fn arb_expr(depth: u32) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        arb_real().prop_map(Expr::Real),
        Just(Expr::ImagUnit),
        (0usize..4).prop_map(Expr::Var),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (prop_oneof![Just(Func::Exp), Just(Func::Sin), Just(Func::Cos), Just(Func::Log)], inner.clone())
                .prop_map(|(f, e)| Expr::Func(f, Box::new(e))),
            (
                prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Expr::binary(op, a, b)),
            (inner, -3i32..4).prop_map(|(e, n)| Expr::Pow(Box::new(e), n)),
        ]
    })
}

#[test]
fn random_expressions_reach_every_variant() {
    // guards the strategy above against silently shrinking to leaves
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let mut seen_pow = false;
    for _ in 0..200 {
        let e = arb_expr(4).new_tree(&mut runner).unwrap().current();
        seen_pow |= e.to_string().contains('^');
    }
    assert!(seen_pow);
}
