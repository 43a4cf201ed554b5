use num_complex::Complex;
use num_traits::{One, Zero};
use proptest::prelude::*;

use linkforge::factor::linsolve::det;
use linkforge::factor::{build_q, factor_motion_polynomial, gcd_of_q, max_matching, q_matrix, span_contains};
use linkforge::flip::{flip, fm};
use linkforge::linkage::{construct_strong_from_factors, mobility_sample_check, Linkage};
use linkforge::roots::c_gcd;
use linkforge::{CPoly, KElement, MotionPolynomial, Param, Scalar, C, Q};

fn q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::ratio(n, d))
}

fn cq() -> impl Strategy<Value = C<Q>> {
    (q(), q()).prop_map(|(a, b)| Complex::new(a, b))
}

/// Non-real primal part: a revolute factor.
fn nonreal() -> impl Strategy<Value = C<Q>> {
    (q(), prop_oneof![1i64..=4, -4i64..=-1], 1i64..=3).prop_map(|(a, n, d)| Complex::new(a, Q::ratio(n, d)))
}

fn kel() -> impl Strategy<Value = KElement<Q>> {
    (cq(), cq()).prop_map(|(z, w)| KElement::new(z, w))
}

fn revolute() -> impl Strategy<Value = KElement<Q>> {
    (nonreal(), cq()).prop_map(|(z, w)| KElement::new(z, w))
}

fn cf(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_is_associative(a in kel(), b in kel(), c in kel()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn action_is_a_right_action(a in revolute(), b in revolute(), u in cq()) {
        let ab = a.mul(&b);
        prop_assert_eq!(ab.act(&u).unwrap(), b.act(&a.act(&u).unwrap()).unwrap());
        // the inverse is projective: a · a⁻¹ = |z|²
        prop_assert_eq!(a.mul(&a.inv().unwrap()), KElement::real(a.z.norm_sqr()));
    }

    #[test]
    fn factorization_multiplies_back(ks in prop::collection::vec(revolute(), 1..=4)) {
        let p = MotionPolynomial::product_of_linear(&ks);
        let f = factor_motion_polynomial(&p).unwrap();
        prop_assert!(f.r.is_real());
        prop_assert_eq!(f.product(), p.scale_real(&f.r));
        prop_assert_eq!(f.factors.len() as isize, p.deg() + f.r.deg());
    }

    #[test]
    fn determinant_identity(n in 2usize..=5, seed in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 5)) {
        let z: Vec<Complex<f64>> = seed[..n].iter().map(|&(a, b)| cf(a, b)).collect();
        let d = det(&q_matrix(&z));
        let mut want = cf(1.0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                want *= z[i].conj() - z[j];
            }
        }
        let scale = 1.0 + want.norm().max(d.norm());
        prop_assert!((d - want).norm() / scale < 1e-9, "{d} vs {want}");
    }

    #[test]
    fn gcd_is_given_by_the_matching(
        alpha in nonreal(), beta in nonreal(),
        picks in prop::collection::vec(0usize..4, 1..=7),
    ) {
        let pool = [alpha.clone(), alpha.conj(), beta.clone(), beta.conj()];
        let z: Vec<C<Q>> = picks.iter().map(|&i| pool[i].clone()).collect();
        let qs: Vec<CPoly<Q>> = (0..z.len()).map(|i| build_q(&z, i)).collect();
        let g = gcd_of_q(&z);
        prop_assert_eq!(&g, &c_gcd(&qs));
        prop_assert_eq!(g.deg() as usize, max_matching(&z).len());
    }

    #[test]
    fn span_is_divisibility_by_the_gcd(
        alpha in nonreal(),
        picks in prop::collection::vec(0usize..2, 2..=6),
        coeffs in prop::collection::vec(cq(), 6),
        bump in cq(),
    ) {
        let z: Vec<C<Q>> = picks.iter().map(|&i| if i == 0 { alpha.clone() } else { alpha.conj() }).collect();
        let n = z.len();
        let g = gcd_of_q(&z);
        let free = n - g.deg() as usize;
        let h = CPoly::new(coeffs[..free].to_vec());
        let inside = &g * &h;
        prop_assert!(span_contains(&z, &inside));
        if g.deg() > 0 {
            let outside = &inside + &CPoly::constant(bump.clone() + Complex::new(Q::one(), Q::zero()));
            let divisible = outside.div_rem(&g).1.is_zero();
            prop_assert_eq!(span_contains(&z, &outside), divisible);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn flips_preserve_the_product(k1 in revolute(), k2 in revolute()) {
        prop_assume!(fm(&k1, &k2));
        let f = flip(&k1, &k2).unwrap();
        let lhs = MotionPolynomial::linear(&k1).mul(&MotionPolynomial::linear(&k2));
        let rhs = MotionPolynomial::linear(&f.k3).mul(&MotionPolynomial::linear(&f.k4));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(&f.k3.z, &k2.z);
        prop_assert_eq!(&f.k4.z, &k1.z);
        // closed-form dual parts
        let (z1, z2, w1, w2) = (&k1.z, &k2.z, &k1.w, &k2.w);
        let den = z1 - z2.conj();
        let w3 = ((z2 - z2.conj()) * w1 + (z1.conj() - z2.conj()) * w2) / den.clone();
        let w4 = ((z1 - z2) * w1 + (z1 - z1.conj()) * w2) / den;
        prop_assert_eq!(&f.k3.w, &w3);
        prop_assert_eq!(&f.k4.w, &w4);
        // flipping back returns the original pair
        let g = flip(&f.k3, &f.k4).unwrap();
        prop_assert_eq!((g.k3, g.k4), (k1, k2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn flip_four_bars_are_antiparallelograms(k1 in revolute(), k2 in revolute()) {
        prop_assume!(fm(&k1, &k2));
        let f = flip(&k1, &k2).unwrap();
        let m = |k: &KElement<Q>| k.midpt().unwrap();
        let (m1, m2, m3, m4) = (m(&k1), m(&k2), m(&f.k3), m(&f.k4));
        prop_assert_eq!((&m1 - &m2).norm_sqr(), (&m3 - &m4).norm_sqr());
        prop_assert_ne!((&m1 - &m2).norm_sqr(), (&m1 - &m3).norm_sqr());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ladders_close_and_move_with_one_degree_of_freedom(ks in prop::collection::vec(revolute(), 1..=3)) {
        let p = MotionPolynomial::product_of_linear(&ks);
        let syn = construct_strong_from_factors(&p, ks.clone(), None).unwrap();
        let l = &syn.linkage;
        let meta = l.meta.as_ref().unwrap().ladder.clone().unwrap();
        for (i, k) in ks.iter().enumerate() {
            let lhs = MotionPolynomial::linear(&meta.l[i]).mul(&MotionPolynomial::linear(k));
            let rhs = MotionPolynomial::linear(&meta.ktilde[i]).mul(&MotionPolynomial::linear(&meta.l[i + 1]));
            prop_assert_eq!(lhs, rhs);
        }
        let motions = l.link_motions().unwrap();
        for s in 0..20 * ks.len() {
            let t = Param::Finite(Q::ratio(s as i64 * 7 - 60, 11));
            let pose = l.pose_from_motions(&motions, &t).unwrap();
            prop_assert_eq!(l.cycle_residual(&pose).unwrap(), 0.0);
        }
        prop_assert_eq!(mobility_sample_check(l, 4, 11).unwrap().dimension, 1);
    }

    #[test]
    fn flip_four_bars_have_mobility_one(k1 in revolute(), k2 in revolute()) {
        prop_assume!(fm(&k1, &k2));
        let l = Linkage::four_bar(&k1, &k2).unwrap();
        prop_assert_eq!(mobility_sample_check(&l, 4, 5).unwrap().dimension, 1);
        let pose = l.pose_at(&Param::Finite(Q::ratio(3, 7))).unwrap();
        prop_assert_eq!(l.cycle_residual(&pose).unwrap(), 0.0);
    }
}

#[test]
fn exact_determinant_identity() {
    let z: Vec<C<Q>> =
        [(1, 2), (-1, 1), (0, -3), (2, 1)].iter().map(|&(a, b)| Complex::new(Q::from_i64(a), Q::from_i64(b))).collect();
    let mut want = Complex::new(Q::one(), Q::zero());
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            want *= z[i].conj() - z[j].clone();
        }
    }
    assert_eq!(det(&q_matrix(&z)), want);
}
