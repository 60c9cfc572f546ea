use hypersym::constructions::{BaseSurface, Curve, CurveFn, SampledCurve};
use hypersym::grid::Grid1D;
use hypersym::poly::{Polynomial, Symbol};
use hypersym::tensor::{pick_closed_form, pick_invariant, scalar_curvature, CanonicalK, CurvatureContext};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Small random polynomial in `H`, `a4`, `a6` and one frame derivative.
fn poly() -> impl Strategy<Value = Polynomial> {
    let term = (-9i64..=9, 1i64..=5, 0u32..3, 0u32..3, 0u32..2, 0u32..2);
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (n, d, e4, e6, eh, ed) in terms {
            let t = Polynomial::constant(rat(n, d))
                * Polynomial::named("a4").pow(e4)
                * Polynomial::named("a6").pow(e6)
                * Polynomial::named("H").pow(eh)
                * Polynomial::parse("T(a22)").unwrap().pow(ed);
            p = p + t;
        }
        p
    })
}

proptest! {
    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert!((a.clone() - a.clone()).is_zero());
    }

    #[test]
    fn display_round_trips(a in poly()) {
        prop_assert_eq!(Polynomial::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn normal_form_ignores_scale(a in poly(), n in -7i64..=7, d in 1i64..=7) {
        prop_assume!(n != 0 && !a.is_zero());
        let scaled = a.clone() * Polynomial::constant(rat(n, d));
        prop_assert_eq!(scaled.normal_form(), a.normal_form());
        prop_assert!(scaled.ratio_to(&a).is_some());
    }

    #[test]
    fn substitution_matches_evaluation(a in poly(), x in -5i64..=5, y in -5i64..=5) {
        let map = BTreeMap::from([
            (Symbol::named("a4"), Polynomial::int(x)),
            (Symbol::named("a6"), Polynomial::int(y)),
        ]);
        let sub = a.substitute(&map);
        prop_assert!(!sub.symbols().contains(&Symbol::named("a4")));
        let vals = BTreeMap::from([
            (Symbol::named("a4"), rat(x, 1)),
            (Symbol::named("a6"), rat(y, 1)),
            (Symbol::named("H"), rat(3, 2)),
            (Polynomial::parse("T(a22)").unwrap().symbols().into_iter().next().unwrap(), rat(-2, 3)),
        ]);
        prop_assert_eq!(sub.eval_rational(&vals).unwrap(), a.eval_rational(&vals).unwrap());
    }

    #[test]
    fn scalar_curvature_is_mean_curvature_plus_pick(h in -3.0..3.0f64, a4 in -3.0..3.0f64, a6 in -3.0..3.0f64, b4 in -3.0..3.0f64) {
        let forms = [CanonicalK::Ortho { a4, a6 }, CanonicalK::Light { b4 }];
        for k in forms {
            let ctx = CurvatureContext::new(k.clone(), h);
            let j = pick_invariant(&k);
            prop_assert!((scalar_curvature(&ctx) - h - j).abs() < 1e-10);
            prop_assert!((pick_closed_form(&k) - j).abs() < 1e-10);
        }
        let light = pick_invariant(&CanonicalK::Light { b4 });
        prop_assert!((light - 5.0 * b4 * b4 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn grid_display_parses_back(start in -10.0..10.0f64, len in 0.01..10.0f64, count in 1usize..200) {
        let g = Grid1D::new(start, start + len, count).unwrap();
        let back: Grid1D = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
        let v = g.values();
        prop_assert_eq!(v.len(), count);
        if count > 1 {
            prop_assert!((v[count - 1] - (start + len)).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_samples_reproduce_quintics(c in prop::array::uniform6(-2.0..2.0f64), t in 0.0..1.0f64) {
        let f = |t: f64| [
            c.iter().enumerate().map(|(k, ck)| ck * t.powi(k as i32)).sum::<f64>(),
            c.iter().enumerate().skip(1).map(|(k, ck)| ck * k as f64 * t.powi(k as i32 - 1)).sum::<f64>(),
            c.iter().enumerate().skip(2).map(|(k, ck)| ck * (k * (k - 1)) as f64 * t.powi(k as i32 - 2)).sum::<f64>(),
        ];
        let step = 0.125;
        let nodes = (0..=8).map(|i| f(step * i as f64)).collect();
        let curve = Curve::Sampled(SampledCurve { g1: CurveFn::identity(), start: 0.0, step, nodes, ode: None });
        let got = curve.jet(t).unwrap().g2;
        let want = f(t);
        for d in 0..3 {
            prop_assert!((got[d] - want[d]).abs() < 1e-9, "d = {} got {} want {}", d, got[d], want[d]);
        }
    }

    #[test]
    fn paraboloids_have_unit_hessian_determinant(v in -3.0..3.0f64, w in -3.0..3.0f64) {
        for base in [BaseSurface::EllipticParaboloid, BaseSurface::HyperbolicParaboloid] {
            let j = base.jet(v, w).unwrap();
            // Graph (v, w, f): second derivatives of the height carry the Hessian.
            let (fvv, fvw, fww) = (j.d2[0][2], j.d2[1][2], j.d2[2][2]);
            prop_assert!(((fvv * fww - fvw * fvw).abs() - 1.0).abs() < 1e-12);
        }
    }
}
