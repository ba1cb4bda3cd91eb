use pfg_core::rational::qi;
use pfg_core::structure::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn preset(p: Preset) -> CouplingData {
    construct_preset(p, &PresetParams::default()).unwrap()
}

#[test]
fn presets_satisfy_every_relation() {
    for p in PRESETS {
        let r = check_all(&preset(p));
        assert!(r.passed(), "{}:\n{r}", p.name());
    }
}

#[test]
fn single_entry_mutations_are_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for p in PRESETS {
        let cd = preset(p);
        for _ in 0..20 {
            let (m, t, idx, v) = mutate_entry(&cd, &mut rng);
            assert!(!check_all(&m).passed(), "{} {}{idx:?} -> {v}", p.name(), t.name());
        }
    }
}

#[test]
fn no_go_and_ymcm_family() {
    assert_eq!(solve_e_given_abc(&preset(Preset::ExftAdjoint)).unwrap().nontrivial_dim(), 0);
    let su2 = preset(Preset::Su2Ymcm);
    let sol = solve_e_given_abc(&su2).unwrap();
    assert_eq!(sol.nontrivial_dim(), 1);
    assert!(sol.contains(&su2.e));
    assert!(sol.contains(&su2.e.scale(&qi(-7))));
}

#[test]
fn presets_round_trip_through_names() {
    for p in PRESETS {
        assert_eq!(Preset::from_name(p.name()).unwrap(), p);
    }
    assert!(Preset::from_name("su3").is_err());
}
