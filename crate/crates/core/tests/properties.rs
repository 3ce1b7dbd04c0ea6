use proptest::prelude::*;
use torsionlab::invariants::{classify, fels_curvature, matrix, TorsionClass};
use torsionlab::lambdacollect::{collect, ideal_member};
use torsionlab::laxlab::CaseTag;
use torsionlab::suite::corpus;
use torsionlab::symcore::{eval_num, Frac, Poly, Scalar, Var};
use torsionlab::verify::{cone_residual, lambda_window, ruling_point};
use torsionlab::Error;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(128)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>()) {
        let e = corpus::expr(&mut corpus::rng(seed, 0), 3);
        let f = Frac::from_expr(&e).unwrap();
        let again = Frac::from_expr(&f.to_expr()).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(again.to_expr(), f.to_expr());
    }

    #[test]
    fn normalization_preserves_values(seed in any::<u64>()) {
        let mut r = corpus::rng(seed, 1);
        let e = corpus::expr(&mut r, 3);
        let at = corpus::point(&mut r);
        let raw = e.eval(&at).unwrap();
        let norm = eval_num(&Frac::from_expr(&e).unwrap(), &at).unwrap();
        prop_assert!((raw - norm).abs() <= 1e-12 * raw.abs().max(1.0), "{raw} vs {norm}");
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>(), i in 0usize..5, j in 0usize..5) {
        let vars = [Var::X1, Var::X2, Var::P1, Var::P2, Var::Lam];
        let f = Frac::from_expr(&corpus::expr(&mut corpus::rng(seed, 2), 3)).unwrap();
        let (a, b) = (vars[i], vars[j]);
        let d = f.diff(a).unwrap().diff(b).unwrap().sub(&f.diff(b).unwrap().diff(a).unwrap());
        prop_assert!(d.is_zero());
    }

    #[test]
    fn derivative_matches_central_difference(seed in any::<u64>(), i in 0usize..5) {
        let vars = [Var::X1, Var::X2, Var::P1, Var::P2, Var::Lam];
        let mut r = corpus::rng(seed, 3);
        let f = Frac::from_expr(&corpus::expr_with(&mut r, 3, false)).unwrap();
        let at = corpus::point(&mut r);
        let v = vars[i];
        let x = match v {
            Var::X1 => 0.1,
            _ => -0.2,
        };
        let h = 1e-5;
        let base = at.clone().with_var(v, x);
        let fp = eval_num(&f, &at.clone().with_var(v, x + h)).unwrap();
        let fm = eval_num(&f, &at.clone().with_var(v, x - h)).unwrap();
        let approx = (fp - fm) / (2.0 * h);
        let exact = eval_num(&f.diff(v).unwrap(), &base).unwrap();
        prop_assert!((approx - exact).abs() <= 1e-4 * exact.abs().max(1.0), "{approx} vs {exact}");
    }

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(seed in any::<u64>()) {
        let mut r = corpus::rng(seed, 4);
        let (x, y, z) = (corpus::field(&mut r), corpus::field(&mut r), corpus::field(&mut r));
        prop_assert!(x.lie_bracket(&y).unwrap().add(&y.lie_bracket(&x).unwrap()).is_zero());
        let jacobi = x
            .lie_bracket(&y.lie_bracket(&z).unwrap())
            .unwrap()
            .add(&y.lie_bracket(&z.lie_bracket(&x).unwrap()).unwrap())
            .add(&z.lie_bracket(&x.lie_bracket(&y).unwrap()).unwrap());
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn witnesses_are_sound_and_monotone(seed in any::<u64>()) {
        let mut r = corpus::rng(seed, 5);
        let gens: Vec<Poly> = (0..3).map(|_| corpus::jet_poly(&mut r, 3, 2)).collect();
        let mut target = Poly::zero();
        for g in &gens {
            target = target.add(&g.mul(&corpus::jet_poly(&mut r, 2, 1)));
        }
        let w = ideal_member(&target, &gens, 1);
        prop_assert!(w.is_some());
        let w = w.unwrap();
        prop_assert!(w.is_sound());
        prop_assert_eq!(w.reconstruct(), target.clone());
        prop_assert!(w.max_multiplier_degree() <= 1);
        let higher = ideal_member(&target, &gens, 2);
        prop_assert!(higher.map(|h| h.is_sound() && h.reconstruct() == target).unwrap_or(false));
    }

    #[test]
    fn non_members_get_no_witness(seed in any::<u64>()) {
        let mut r = corpus::rng(seed, 6);
        let gens: Vec<Poly> = (0..2).map(|_| corpus::jet_poly(&mut r, 2, 2)).collect();
        if let Some(w) = ideal_member(&Poly::one(), &gens, 1) {
            prop_assert!(w.is_sound());
            prop_assert_eq!(w.reconstruct(), Poly::one());
        }
    }

    #[test]
    fn classification_ignores_scaling(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5, n in -7i64..=7, d in 1i64..=5) {
        prop_assume!(n != 0);
        let t = matrix([[a, b], [c, -a]]);
        let k = Frac::ratio(n, d);
        let scaled = t.clone().map(|row| row.map(|e| e.mul(&k)));
        let class = classify(&t, None).unwrap();
        prop_assert_eq!(classify(&scaled, None).unwrap(), class);
        let expected = match (a, b, c) {
            (0, 0, 0) => TorsionClass::Zero,
            _ if a * a + b * c == 0 => TorsionClass::Rank1,
            _ if a * a + b * c > 0 => TorsionClass::Rank2Real,
            _ => TorsionClass::Rank2Complex,
        };
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn curvature_is_symmetric_and_trace_free(seed in any::<u64>()) {
        let (u, v) = corpus::separated_pair(&mut corpus::rng(seed, 7));
        let f1 = u.add(&Frac::var(Var::P2).pow(3).unwrap().mul(&Frac::var(Var::P1)));
        let f2 = v.add(&Frac::var(Var::P1).pow(2).unwrap().mul(&Frac::var(Var::X1)));
        let r = fels_curvature(&f1, &f2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        prop_assert_eq!(&r[i][j][k][l], &r[i][k][j][l]);
                        prop_assert_eq!(&r[i][j][k][l], &r[i][j][l][k]);
                    }
                }
            }
        }
        for k in 0..2 {
            for l in 0..2 {
                prop_assert!(r[0][0][k][l].add(&r[1][1][k][l]).is_zero());
            }
        }
    }

    #[test]
    fn collection_reconstructs_the_input(seed in any::<u64>()) {
        let mut r = corpus::rng(seed, 8);
        let trig = ["cos(lam)", "sin(lam)", "cosh(lam)", "sinh(lam)", "sin(lam)*sinh(lam)", "cos(lam)^3"];
        let mut e = Frac::zero();
        for t in trig {
            let coef = Frac::from(corpus::jet_poly(&mut r, 2, 2));
            let den = Frac::from_expr(&corpus::expr_with(&mut r, 1, false)).unwrap();
            let coef = if den.is_zero() || den.depends_on(Var::Lam) { coef } else { coef.mul(&den) };
            e = e.add(&coef.mul(&torsionlab::symcore::frac(t).unwrap()));
        }
        match collect(&e) {
            Ok(parts) => {
                let mut back = Frac::zero();
                for (m, c) in &parts {
                    prop_assert!(c.lambda_free());
                    back = back.add(&m.to_frac().mul(c));
                }
                prop_assert!(back.sub(&e).is_zero());
            }
            Err(Error::NonCanonicalLambda(_)) => {}
            Err(other) => prop_assert!(false, "{other}"),
        }
    }

    #[test]
    fn ruling_lies_on_the_cone(real in any::<bool>(), a in 0.2f64..2.0, b in 0.2f64..2.0, t in -1.0f64..1.0) {
        let case = if real { CaseTag::RealRoots } else { CaseTag::ComplexRoots };
        let lam = t * lambda_window(case);
        match cone_residual(case, ruling_point(case, a, b, lam)) {
            Ok(res) => prop_assert!(res.abs() <= 1e-9, "{res}"),
            Err(Error::Domain(_)) => {}
            Err(other) => prop_assert!(false, "{other}"),
        }
    }

    #[test]
    fn ruling_residual_is_insensitive_to_scale(a in 0.2f64..2.0, b in 0.2f64..2.0, t in -1.0f64..1.0, k in 0.5f64..2.0) {
        let case = CaseTag::RealRoots;
        let lam = t * lambda_window(case);
        let one = cone_residual(case, ruling_point(case, a, b, lam));
        let two = cone_residual(case, ruling_point(case, k * a, k * b, lam));
        if let (Ok(x), Ok(y)) = (one, two) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn exact_scalars_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let s = Scalar::ratio(n, d);
        prop_assert!((s.to_f64() - n as f64 / d as f64).abs() < 1e-12);
        prop_assert!(Frac::constant(s.clone()).sub(&Frac::ratio(n, d)).is_zero());
    }
}
