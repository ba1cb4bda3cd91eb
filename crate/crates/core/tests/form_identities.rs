use pfg_core::forms::random_form_with;
use pfg_core::rational::qi;
use pfg_core::{ExpPoly, Form, Fourier, Scalar, Signature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn form<S: Scalar>(seed: u64, p: usize) -> Form<S> {
    random_form_with(&mut ChaCha8Rng::seed_from_u64(seed), p, 1)
}

fn sig(lorentzian: bool) -> Signature {
    if lorentzian {
        Signature::LORENTZIAN
    } else {
        Signature::EUCLIDEAN
    }
}

fn leibniz<S: Scalar>(seed: u64, p: usize, r: usize) {
    let a: Form<S> = form(seed, p);
    let b: Form<S> = form(seed ^ 0x55, r);
    let lhs = a.wedge(&b).unwrap().d().unwrap();
    let sign = qi(if p % 2 == 0 { 1 } else { -1 });
    let rhs = a.d().unwrap().wedge(&b).unwrap().add(&a.wedge(&b.d().unwrap()).unwrap().scale(&sign));
    assert_eq!(lhs, rhs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), p in 0usize..3) {
        prop_assert!(form::<Fourier>(seed, p).d().unwrap().d().unwrap().is_zero());
        prop_assert!(form::<ExpPoly>(seed, p).d().unwrap().d().unwrap().is_zero());
    }

    #[test]
    fn star_squared_sign_law(seed in any::<u64>(), p in 0usize..5, lorentzian in any::<bool>()) {
        let s = sig(lorentzian);
        let w: Form<Fourier> = form(seed, p);
        prop_assert_eq!(w.hodge(s).hodge(s), w.scale(&qi(s.star_squared(p))));
    }

    #[test]
    fn exact_top_forms_integrate_to_zero(seed in any::<u64>()) {
        let w: Form<Fourier> = form(seed, 3);
        prop_assert!(w.d().unwrap().integrate().unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), p in 0usize..3, r in 0usize..2) {
        leibniz::<Fourier>(seed, p, r);
        leibniz::<ExpPoly>(seed, p, r);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..3, r in 0usize..2) {
        let a: Form<Fourier> = form(seed, p);
        let b: Form<Fourier> = form(seed.wrapping_add(1), r);
        let sign = qi(if (p * r) % 2 == 0 { 1 } else { -1 });
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&sign));
    }

    #[test]
    fn parity_is_an_involution_commuting_with_d(seed in any::<u64>(), p in 0usize..4, lorentzian in any::<bool>()) {
        let s = sig(lorentzian);
        let w: Form<Fourier> = form(seed, p);
        prop_assert_eq!(w.parity().parity(), w.clone());
        prop_assert_eq!(w.d().unwrap().parity(), w.parity().d().unwrap());
        prop_assert_eq!(w.hodge(s).parity(), w.parity().hodge(s).scale(&qi(-1)));
    }

    #[test]
    fn inner_product_is_symmetric(seed in any::<u64>(), p in 0usize..5, lorentzian in any::<bool>()) {
        let s = sig(lorentzian);
        let a: Form<Fourier> = form(seed, p);
        let b: Form<Fourier> = form(seed ^ 0xabc, p);
        prop_assert_eq!(a.wedge(&b.hodge(s)).unwrap(), b.wedge(&a.hodge(s)).unwrap());
    }
}
