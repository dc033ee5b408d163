use proptest::prelude::*;

use thetaq::exact::{int, rat, trig_value, CyclotomicField, Rational, Trig};
use thetaq::identities::{half_sum, tangent_square_value, theorem_rhs, HalfSumSpec};
use thetaq::modular::{log_deriv_lambert, theta2_jet, theta2_series, ThetaPoint};
use thetaq::qexp::QExpansion;

type S = QExpansion<Rational>;

fn coeff() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn base() -> impl Strategy<Value = Rational> {
    (0i64..=8, prop::sample::select(vec![1i64, 8, 24])).prop_map(|(n, d)| rat(n, d))
}

fn series_with(base: Rational) -> impl Strategy<Value = S> {
    prop::collection::vec(coeff(), 1..10).prop_map(move |cs| {
        let p = &base + int(cs.len() as i64);
        S::new((), base.clone(), cs, p).unwrap()
    })
}

fn series() -> impl Strategy<Value = S> {
    base().prop_flat_map(series_with)
}

fn same_base_pair() -> impl Strategy<Value = (S, S)> {
    base().prop_flat_map(|b| (series_with(b.clone()), series_with(b)))
}

// Coefficients agree below the smaller of the two certified precisions.
fn agree(a: &S, b: &S) -> bool {
    let p = a.precision().clone().min(b.precision().clone());
    a.equal_to(b, &p).unwrap().is_equal()
}

proptest! {
    #[test]
    fn product_commutes_and_associates(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn product_distributes((a, b) in same_base_pair(), c in series()) {
        let lhs = a.add(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(agree(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn q_derivative_is_a_derivation(a in series(), b in series()) {
        let lhs = a.mul(&b).unwrap().q_ddq();
        let rhs = a.q_ddq().mul(&b).unwrap().add(&a.mul(&b.q_ddq()).unwrap()).unwrap();
        prop_assert!(agree(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn scale_q_is_a_ring_morphism(a in series(), b in series(), s in 1u64..6) {
        prop_assert_eq!(
            a.mul(&b).unwrap().scale_q(s),
            a.scale_q(s).mul(&b.scale_q(s)).unwrap()
        );
    }

    #[test]
    fn division_inverts_multiplication(a in series(), b in series()) {
        prop_assume!(!b.is_zero());
        let q = a.div(&b).unwrap();
        prop_assert!(agree(&q.mul(&b).unwrap(), &a));
    }

    #[test]
    fn cyclotomic_field_laws(
        m in prop::sample::select(vec![3u64, 4, 5, 8, 9, 12, 15, 16, 20, 24]),
        xs in prop::collection::vec(coeff(), 24),
        ys in prop::collection::vec(coeff(), 24),
    ) {
        let f = CyclotomicField::new(m);
        let d = f.degree();
        let x = f.from_coords(&xs[..d]).unwrap();
        let y = f.from_coords(&ys[..d]).unwrap();
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
        if !y.is_zero() {
            prop_assert_eq!(&x.checked_div(&y).unwrap() * &y, x);
        }
    }

    #[test]
    fn trig_values_are_real(q in 1u64..40, p in -80i64..80) {
        let s = trig_value(Trig::Sin, p, q).unwrap();
        let c = trig_value(Trig::Cos, p, q).unwrap();
        prop_assert!(s.is_real() && c.is_real());
        prop_assert_eq!((&(&s * &s) + &(&c * &c)).to_rational(), Some(int(1)));
    }

    #[test]
    fn theta_parity_and_shift(k in 1u64..7, l in 0i64..14, s in 1u64..3) {
        let l = l % (2 * k as i64);
        let m = 4 * k;
        let at = |n: i64| ThetaPoint::new(n, 2 * k, s, m).unwrap();
        let plus = theta2_jet(&at(l), 3, 20);
        let minus = theta2_jet(&at(-l), 3, 20);
        for j in 0..=3 {
            let expect = if j % 2 == 0 { plus.coeff(j).clone() } else { plus.coeff(j).neg() };
            prop_assert_eq!(minus.coeff(j), &expect);
        }
        prop_assert_eq!(theta2_series(&at(l + 2 * k as i64), 20), plus.coeff(0).neg());
    }

    #[test]
    fn lambert_terms_are_real(k in 1u64..9, l in 0i64..16) {
        let l = l % (2 * k as i64);
        prop_assume!(l != k as i64);
        let d = log_deriv_lambert(l, k, 16).unwrap();
        prop_assert!(d.coeffs().iter().all(|c| c.is_real()));
        prop_assert!(d.square().coeffs().iter().all(|c| c.is_real()));
    }
}

#[test]
fn constant_term_law() {
    for k in 1..=14u64 {
        for delta in [0u8, 1] {
            let s = half_sum(HalfSumSpec::new(k, delta).unwrap(), 3).unwrap();
            let t = tangent_square_value(k, delta).unwrap();
            assert_eq!(s.coeff(&int(0)), t, "k={k} delta={delta}");
            assert_eq!(theorem_rhs(k, delta, 3).coeff(&int(0)), t);
        }
    }
}

#[test]
fn k_two_vanishes_on_both_sides() {
    assert!(theorem_rhs(2, 0, 50).is_zero());
    assert!(half_sum(HalfSumSpec::new(2, 0).unwrap(), 50)
        .unwrap()
        .is_zero());
}
