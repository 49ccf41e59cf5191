use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gsp4_core::admissible::adm_eta;
use gsp4_core::affine_weyl::{bruhat_leq, omega_element, simple_reflection, up_box, ExtAffineElement, DEFAULT_BOX};
use gsp4_core::bm_cycles::Cycle;
use gsp4_core::gsp4_base::{FiniteWeyl, Weight};
use gsp4_core::local_model::matrix::PolyMat;
use gsp4_core::local_model::{
    build_regcolone_matrix, dual_monomial, e_divisor_pattern, random_iwahori, shape_of, ExactField, Poly,
    RegColOneParams,
};
use gsp4_core::serre_weights::SerreWeight;

fn weyl() -> impl Strategy<Value = FiniteWeyl> {
    (0usize..8).prop_map(|i| FiniteWeyl::all().nth(i).unwrap())
}

fn element(r: i64) -> impl Strategy<Value = ExtAffineElement> {
    (-r..=r, -r..=r, -r..=r, weyl()).prop_map(|(a, b, c, w)| ExtAffineElement::new(Weight::new(a, b, c), w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_laws(x in element(6), y in element(6), z in element(6)) {
        prop_assert_eq!((x * y) * z, x * (y * z));
        prop_assert_eq!(x * x.inverse(), ExtAffineElement::E);
        prop_assert_eq!(x.inverse() * x, ExtAffineElement::E);
        prop_assert_eq!(x * ExtAffineElement::E, x);
        let l = Weight::new(3, -2, 5);
        prop_assert_eq!((x * y).apply(l), x.apply(y.apply(l)));
    }

    #[test]
    fn star_reverses_products(x in element(6), y in element(6)) {
        prop_assert_eq!((x * y).star(), y.star() * x.star());
        prop_assert_eq!(x.star().star(), x);
    }

    #[test]
    fn length_laws(x in element(6), i in 0usize..3, k in -3i64..=3) {
        let s = simple_reflection(i);
        prop_assert_eq!(x.length(), x.inverse().length());
        prop_assert_eq!((s * x).length().abs_diff(x.length()), 1);
        prop_assert_eq!((x * omega_element(k)).length(), x.length());
        prop_assert_eq!(x.in_omega(), x.length() == 0);
    }

    #[test]
    fn bruhat_steps(x in element(3), i in 0usize..3) {
        let sx = simple_reflection(i) * x;
        prop_assert!(bruhat_leq(x, x));
        let (lo, hi) = if sx.length() > x.length() { (x, sx) } else { (sx, x) };
        prop_assert!(bruhat_leq(lo, hi));
        prop_assert!(!bruhat_leq(hi, lo));
    }

    #[test]
    fn uparrow_is_transitive(i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let bx = up_box(DEFAULT_BOX);
        let al = bx.alcoves();
        let (a, b, c) = (al[i.index(al.len())], al[j.index(al.len())], al[k.index(al.len())]);
        if bx.leq(a, b).unwrap() && bx.leq(b, c).unwrap() {
            prop_assert!(bx.leq(a, c).unwrap());
        }
        if a != b && bx.leq(a, b).unwrap() {
            prop_assert!(!bx.leq(b, a).unwrap());
        }
    }

    #[test]
    fn serre_weight_normal_form(a in 0i64..30, b in 0i64..30, c in -20i64..20, k in -5i64..5) {
        let p = 37;
        let l = Weight::new(a + b, b, c);
        // (p − π)X⁰ for f = 1 is (p − 1)·(0,0;1).
        let shifted = Weight::new(a + b, b, c + k * (p - 1));
        prop_assert_eq!(SerreWeight::new(vec![l], p).unwrap(), SerreWeight::new(vec![shifted], p).unwrap());
    }

    #[test]
    fn cycle_group(n in -4i64..4, m in -4i64..4) {
        let s = SerreWeight::new(vec![Weight::new(10, 3, 0)], 37).unwrap();
        let t = SerreWeight::new(vec![Weight::new(20, 3, 0)], 37).unwrap();
        let x = n * Cycle::single(s.clone()) + Cycle::single(t.clone());
        let y = m * Cycle::single(s.clone());
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        prop_assert_eq!((x.clone() + y).coeff(&s), n + m);
        prop_assert!((x.clone() + (-1) * x).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shape_is_iwahori_invariant(idx in any::<prop::sample::Index>(), seed in any::<u64>(), q in prop::sample::select(vec![5u64, 7, 37])) {
        let f = ExactField::prime(q).unwrap();
        let elems: Vec<_> = adm_eta().elements.iter().copied().collect();
        let z = elems[idx.index(elems.len())].star();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_iwahori(f, &mut rng, 2).mul(&dual_monomial(z, f)).mul(&random_iwahori(f, &mut rng, 1));
        let b = random_iwahori(f, &mut rng, 1).mul(&a);
        prop_assert_eq!(shape_of(&a).unwrap(), z);
        prop_assert_eq!(shape_of(&b).unwrap(), z);
    }

    #[test]
    fn e_divisors_are_unimodular_invariants(seed in any::<u64>(), i in 0usize..4, j in 0usize..4, c in 1i64..36, k in 0i64..3) {
        prop_assume!(i != j);
        let p = 37u64;
        let f = ExactField::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = RegColOneParams::random(f, p, &mut rng).unwrap();
        let a = build_regcolone_matrix(&x, p).unwrap();
        // Elementary matrix with a polynomial off-diagonal entry: determinant 1.
        let u = PolyMat::from_fn(f, 4, |r, s| {
            if r == s {
                Poly::constant(f.one())
            } else if (r, s) == (i, j) {
                Poly::monomial(f.int(c), k)
            } else {
                Poly::zero(f)
            }
        });
        let before = e_divisor_pattern(&a, p).unwrap();
        prop_assert_eq!(e_divisor_pattern(&u.mul(&a), p).unwrap(), before);
        prop_assert_eq!(e_divisor_pattern(&a.mul(&u), p).unwrap(), before);
    }
}
