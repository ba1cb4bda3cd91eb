use num_traits::Zero;
use pfg_core::actions::*;
use pfg_core::duality::random_fields_for;
use pfg_core::fields::{FieldConfig, GaugeParams};
use pfg_core::forms::random_internal_with;
use pfg_core::structure::{construct_preset, CouplingData, Preset, PresetParams};
use pfg_core::suite::preset_for;
use pfg_core::{Form, Fourier, InternalForm, Signature, Space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SIGS: [Signature; 2] = [Signature::LORENTZIAN, Signature::EUCLIDEAN];

fn preset(p: Preset) -> CouplingData {
    construct_preset(p, &PresetParams::default()).unwrap()
}

#[test]
fn jet_derivative_matches_interpolation() {
    for tag in [
        TheoryTag::Linear,
        TheoryTag::AbelianCm2ndOrder,
        TheoryTag::AbelianCmDual,
        TheoryTag::Ftcm1stOrder,
        TheoryTag::FtcmDual,
        TheoryTag::ExftDual,
        TheoryTag::Ymcm,
    ] {
        let cd = preset(preset_for(tag));
        for sig in SIGS {
            let th = Theory::new(tag, cd.clone(), sig).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            let fc = random_fields_for(tag, &cd, sig, &mut rng, 1, 2).unwrap();
            let mut dir = FieldConfig::random_with(&mut rng, &cd, sig, 1);
            dir.chiral = fc.chiral.as_ref().map(|c| random_internal_with(&mut rng, Space::APrime, 1, c.dim(), 1));
            let v = first_variation(&th, &fc, &dir).unwrap();
            assert!(v.consistent, "{}", tag.name());
            assert!(v.degree() <= tag.field_degree());
            assert_eq!(v.first_order(), &first_variation_jet(&th, &fc, &dir).unwrap(), "{}", tag.name());
        }
    }
}

#[test]
fn linear_action_is_quadratic() {
    let cd = preset(Preset::Su2Ymcm);
    let th = Theory::new(TheoryTag::Linear, cd.clone(), Signature::LORENTZIAN).unwrap();
    let fc = FieldConfig::<Fourier>::random(&cd, Signature::LORENTZIAN, 1, 1);
    let dir = FieldConfig::<Fourier>::random(&cd, Signature::LORENTZIAN, 2, 1);
    assert!(first_variation(&th, &fc, &dir).unwrap().degree() <= 2);
}

#[test]
fn linear_theory_is_invariant_under_any_parameters() {
    let cd = preset(Preset::ExftAdjoint);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for sig in SIGS {
        let th = Theory::new(TheoryTag::Linear, cd.clone(), sig).unwrap();
        let fc = FieldConfig::random_with(&mut rng, &cd, sig, 1);
        let gp = GaugeParams::random_with(&mut rng, &cd, 1);
        assert!(check_gauge_invariance(&th, &fc, &gp).unwrap().is_zero());
    }
}

#[test]
fn zero_couplings_collapse_to_the_free_theory() {
    for tag in THEORY_TAGS {
        if matches!(tag, TheoryTag::FtcmDual | TheoryTag::ExftcmDual) {
            continue;
        }
        let cd = preset(preset_for(tag));
        let zero = CouplingData::free(cd.g.clone(), cd.gp.clone()).unwrap();
        for sig in SIGS {
            let th = Theory { tag, couplings: zero.clone(), signature: sig };
            let mut fc = FieldConfig::<Fourier>::random(&zero, sig, 3, 1);
            fc.chiral = Some(InternalForm::zero(Space::APrime, zero.kp, 1).add(&fc.k));
            assert_eq!(lagrangian(&th, &fc).unwrap(), free_lagrangian(&th, &fc).unwrap(), "{}", tag.name());
        }
    }
}

#[test]
fn zero_fields_have_zero_residuals() {
    for tag in THEORY_TAGS.into_iter().filter(|t| !el_fields(*t).is_empty()) {
        let cd = preset(preset_for(tag));
        for sig in SIGS {
            let th = Theory::new(tag, cd.clone(), sig).unwrap();
            let mut fc = FieldConfig::<Fourier>::zero(&cd, sig);
            fc.phi = Some(Form::zero(0));
            fc.chiral = Some(InternalForm::zero(Space::APrime, cd.kp - 1, 1));
            for r in el_residual(&th, &fc).unwrap() {
                assert!(r.residual.is_zero(), "{} {:?}", tag.name(), r.field);
            }
        }
    }
}

#[test]
fn el_pairing_reproduces_the_first_variation() {
    for tag in [TheoryTag::AbelianCm2ndOrder, TheoryTag::AbelianCmDual, TheoryTag::FtcmDual] {
        let cd = preset(preset_for(tag));
        for sig in SIGS {
            let th = Theory::new(tag, cd.clone(), sig).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            let fc = random_fields_for(tag, &cd, sig, &mut rng, 1, 2).unwrap();
            for _ in 0..3 {
                let dir = ElDirection::random_with(&mut rng, &th, &fc, 1).unwrap();
                let c = el_pairing_check(&th, &fc, &dir).unwrap();
                assert!(c.passed(), "{} {c:?}", tag.name());
            }
        }
    }
}

#[test]
fn el_constants_match_the_oracle() {
    let cd = preset(Preset::U1Cm);
    let th = Theory::new(TheoryTag::AbelianCm2ndOrder, cd.clone(), Signature::LORENTZIAN).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fc = FieldConfig::random_with(&mut rng, &cd, Signature::LORENTZIAN, 1);
    let dirs: Vec<_> = (0..4).map(|_| ElDirection::random_with(&mut rng, &th, &fc, 1).unwrap()).collect();
    let derived = derive_el_constants(&th, &fc, &dirs).unwrap().expect("determined");
    assert_eq!(derived, el_constants(&th).unwrap());
}

#[test]
fn ymap_with_zero_couplings_is_k_minus_star_db() {
    let cd = preset(Preset::ExftAdjoint);
    let zero = CouplingData::free(cd.g.clone(), cd.gp.clone()).unwrap();
    for sig in SIGS {
        let fc = FieldConfig::<Fourier>::random(&zero, sig, 8, 1);
        let want = fc.k.sub(&fc.b.d().unwrap().hodge(sig));
        let r = ymap_residual_equivalence(&fc, &zero).unwrap();
        assert!(r.passed());
        assert_eq!(r.keq, want);
        assert!(r.literal_discrepancy.is_zero());
    }
}

#[test]
fn ymap_equivalence_on_every_preset() {
    for p in pfg_core::structure::PRESETS {
        let cd = preset(p);
        for sig in SIGS {
            let fc = FieldConfig::<Fourier>::random(&cd, sig, 13, 1);
            assert!(ymap_residual_equivalence(&fc, &cd).unwrap().passed(), "{}", p.name());
        }
    }
}

#[test]
fn parity_table() {
    let cd = parity_probe_couplings();
    for sig in SIGS {
        for p in parity_check(&cd, sig, 5, 1).unwrap() {
            assert_eq!(p.sign, Some(p.term.expected_sign()), "{:?}", p.term);
        }
    }
    // u1-cm has only the CM coupling; the other cubic terms vanish
    let signs = parity_check(&preset(Preset::U1Cm), Signature::LORENTZIAN, 5, 1).unwrap();
    for p in signs {
        let want = if p.term == CubicTerm::Cm { Some(-1) } else { None };
        assert_eq!(p.sign, want, "{:?}", p.term);
    }
}
