use num_traits::{One, Zero};
use proptest::prelude::*;

use solvsoliton::coord::{sample_points, AmbientMetric};
use solvsoliton::family::{
    build_embedding, build_gram, build_lie_algebra, build_metric_lie_algebra, expected_closed_forms,
    FamilyParams,
};
use solvsoliton::hypersurface::warp_data;
use solvsoliton::{q, Jet2, Matrix, QFamilyParams, QStructure, Rational, Surd};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=30).prop_map(|(a, b)| q(a, b))
}

fn params(max_n: usize) -> impl Strategy<Value = QFamilyParams> {
    (1..=max_n, 1i64..=20, 1i64..=6, 0i64..=20, 1i64..=6)
        .prop_map(|(n, a, b, c, d)| FamilyParams::new(n, q(a, b), q(c, d)).unwrap())
}

fn jet() -> impl Strategy<Value = Jet2<Rational>> {
    (rational(), rational(), rational()).prop_map(|(v, d1, d2)| Jet2::new(v, d1, d2))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rationals_are_reduced(a in -1000i64..1000, b in 1i64..1000, k in 1i64..50) {
        let x = Rational::new(a * k, b * k).unwrap();
        prop_assert_eq!(&x, &q(a, b));
        prop_assert!(x.denom() > &0.into());
        let g = num_integer::Integer::gcd(x.numer(), x.denom());
        prop_assert!(g.is_one());
        let parsed: Rational = x.to_string().parse().unwrap();
        prop_assert_eq!(parsed, x);
    }

    #[test]
    fn square_radicands_collapse(a in rational(), b in rational(), r in 1i64..30, s in 1i64..30) {
        let x = Surd::new(a.clone(), b.clone(), q(r * r, s * s)).unwrap();
        prop_assert!(x.is_rational());
        prop_assert_eq!(x.as_rational().cloned(), Some(a + b * q(r, s)));
    }

    #[test]
    fn jets_obey_leibniz(x in jet(), y in jet()) {
        let p = x.clone() * y.clone();
        prop_assert_eq!(&p.d1, &(x.d1.clone() * y.v.clone() + x.v.clone() * y.d1.clone()));
        let two = q(2, 1);
        prop_assert_eq!(
            &p.d2,
            &(x.d2.clone() * y.v.clone() + two * x.d1.clone() * y.d1.clone() + x.v.clone() * y.d2.clone())
        );
        let c = Jet2::lift(x.v.clone());
        prop_assert!(c.d1.is_zero() && c.d2.is_zero());
        if !y.v.is_zero() {
            let back = p.try_div(&y).unwrap();
            prop_assert_eq!(back, x);
        }
    }

    #[test]
    fn structure_constants_round_trip(n in 1usize..=4) {
        let l: QStructure = build_lie_algebra(n).unwrap();
        prop_assert!(l.is_antisymmetric());
        let again = QStructure::from_json(&l.to_json().unwrap()).unwrap();
        prop_assert_eq!(again, l);
    }

    #[test]
    fn family_gram_and_embedding(p in params(4)) {
        let g = build_gram(&p).unwrap();
        prop_assert!(g.is_symmetric() && g.is_positive_definite());
        prop_assert!(build_embedding(&p).is_ok());
    }

    #[test]
    fn ricci_is_self_adjoint(p in params(4)) {
        let m = build_metric_lie_algebra(&p).unwrap();
        let g_ric = m.gram().try_mul(&m.ricci_endomorphism_koszul()).unwrap();
        prop_assert!(g_ric.is_symmetric());
    }

    #[test]
    fn multiplicities_fill_the_dimension(p in params(6)) {
        let forms = expected_closed_forms(&p).unwrap();
        let total: usize = forms.multiplicities.iter().sum();
        prop_assert_eq!(total, 4 * p.n - 1);
        prop_assert_eq!(forms.r[0].is_some(), p.n > 1);
        prop_assert_eq!(forms.sigma[3].is_some(), p.n > 1);
    }

    #[test]
    fn warp_invariants(p in params(3)) {
        let w = warp_data(&p).unwrap();
        prop_assert!(w.f.v > Rational::zero());
        let one = Rational::one();
        if p.c.is_zero() {
            prop_assert!(w.h1.v.is_zero());
            prop_assert_eq!(w.q, one);
        } else {
            prop_assert!(w.h1.v > Rational::zero() && w.h2.v > Rational::zero() && w.h3.v > Rational::zero());
            prop_assert!(w.q > Rational::zero() && w.q < one);
        }
    }

    #[test]
    fn ambient_metric_is_positive_definite(n in 1usize..=3, c in 0.0f64..3.0, rho in 0.2f64..5.0, seed in 0u64..500) {
        let metric = AmbientMetric::new(n, c).unwrap();
        for chart in sample_points(n, rho, 2, seed).unwrap() {
            let g = metric.gram(&chart).unwrap();
            prop_assert!((&g - g.transpose()).abs().max() == 0.0);
            prop_assert!(g.clone().cholesky().is_some());
        }
    }
}

#[test]
fn soliton_verdicts_decompose_ricci() {
    for n in 1..=3 {
        for c in [q(0, 1), q(2, 3)] {
            let p = FamilyParams::new(n, q(3, 2), c).unwrap();
            let m = build_metric_lie_algebra(&p).unwrap();
            let v = m.soliton_check_direct().unwrap();
            if let (Some(lambda), Some(d)) = (&v.lambda, &v.derivation) {
                let ric = m.ricci_endomorphism_koszul();
                let rest = ric
                    .try_sub(&Matrix::identity(p.dim()).scale(lambda))
                    .unwrap()
                    .try_sub(d)
                    .unwrap();
                assert!(rest.is_zero());
                assert!(m.lie().is_derivation(d));
            } else {
                assert!(!v.is_soliton());
            }
        }
    }
}
