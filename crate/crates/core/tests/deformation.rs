use deform_audit::deformation::{conjugate_group, find_conjugator, lift_classes, section_reconstruct, trichotomy_classify, SquareZeroSetting, Trichotomy};
use deform_audit::groups::{closure, special_linear, DEFAULT_CAP};
use deform_audit::matrices::{Mat, MatSpace};
use deform_audit::rings::{hom_enumerate, preset, Elem};
use deform_audit::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f3_dual() -> SquareZeroSetting {
    SquareZeroSetting::new(&preset("f3_dual").unwrap(), 3).unwrap()
}

#[test]
fn conjugator_matches_coboundary_of_random_twist() {
    // twisting by I + tY0 gives the coboundary of Y0; the solver's Y must have the same coboundary
    let s = f3_dual();
    let module = s.ext.module();
    let fp = module.fp();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let x0 = s.random_unipotent(&mut rng);
        let gens = s.conjugate_all(&x0, &s.constant_gens()).unwrap();
        let c = find_conjugator(&s, &gens).unwrap();
        let y0 = s.ext.kernel_coords(&x0).unwrap();
        for g in s.quotient.gens() {
            let g_inv = s.ext.small().inv(g).unwrap();
            let cob = |y: &[u8]| fp.sub_vec(&module.act(g, &g_inv, y), y);
            // X = I + Y normalizes X0 G X0^-1, so Y = -Y0 up to invariants
            assert_eq!(cob(&c.y), fp.sub_vec(&vec![0; y0.len()], &cob(&y0)));
        }
    }
}

#[test]
fn conjugator_accepts_constant_copy() {
    let s = f3_dual();
    let c = find_conjugator(&s, &s.constant_gens()).unwrap();
    assert_eq!(s.conjugate_all(&c.x, &s.constant_gens()).unwrap(), s.constant_gens());
}

#[test]
fn conjugator_rejects_non_split_inputs() {
    let s = f3_dual();
    assert!(matches!(find_conjugator(&s, &s.full_gens()), Err(Error::CocycleInconsistent { .. })));
    assert!(matches!(find_conjugator(&s, &s.scalar_extension_gens()), Err(Error::CocycleInconsistent { .. })));
}

#[test]
fn reconstruction_needs_normalized_group() {
    let s = f3_dual();
    let r = preset("f3_dual").unwrap();
    let k = preset("f3").unwrap();
    let pi = hom_enumerate(&r, &k).homs.remove(0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut x0 = s.random_unipotent(&mut rng);
    while x0 == s.space().identity() {
        x0 = s.random_unipotent(&mut rng);
    }
    let twisted = closure(s.space(), &s.conjugate_all(&x0, &s.constant_gens()).unwrap(), DEFAULT_CAP).unwrap();
    // a twist can still contain E_1n(x) exactly; otherwise reconstruction must refuse
    match section_reconstruct(&pi, &k, &twisted) {
        Ok(map) => assert!(map.checks.section_of_projection),
        Err(e) => assert!(matches!(e, Error::Reconstruction(_))),
    }
    let scalar = closure(s.space(), &s.scalar_extension_gens(), DEFAULT_CAP).unwrap();
    assert_eq!(scalar.order(), 3 * 5616);
    assert!(matches!(section_reconstruct(&pi, &k, &scalar), Err(Error::Reconstruction(_))));
}

#[test]
fn reconstruction_over_f2_dual() {
    let s = SquareZeroSetting::new(&preset("f2_dual").unwrap(), 3).unwrap();
    let r = preset("f2_dual").unwrap();
    let k = preset("f2").unwrap();
    let pi = hom_enumerate(&r, &k).homs.remove(0);
    let g = closure(s.space(), &s.constant_gens(), DEFAULT_CAP).unwrap();
    let map = section_reconstruct(&pi, &k, &g).unwrap();
    assert!(map.checks.all(), "{:?}", map.checks);
}

#[test]
fn trichotomy_is_conjugation_invariant() {
    let s = f3_dual();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = [(Trichotomy::Full, s.full_gens()), (Trichotomy::Iso, s.constant_gens()), (Trichotomy::ScalarExtension, s.scalar_extension_gens())];
    for (expected, gens) in &cases {
        for _ in 0..50 {
            let x0 = s.random_invertible(&mut rng);
            let c = trichotomy_classify(&s, &s.conjugate_all(&x0, gens).unwrap()).unwrap();
            assert_eq!(c.class, *expected);
        }
    }
}

#[test]
fn trichotomy_rejects_small_residual_image() {
    let s = f3_dual();
    let gens = vec![s.space().elementary(0, 1, Elem(1))];
    assert!(trichotomy_classify(&s, &gens).is_err());
}

#[test]
fn lift_classes_invariant_under_conjugation() {
    let k = preset("f3").unwrap();
    let ms = MatSpace::new(&k, 3).unwrap();
    let g = special_linear(&ms, DEFAULT_CAP).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = loop {
        let m = Mat { n: 3, entries: (0..9).map(|_| Elem(rng.gen_range(0..3))).collect() };
        if k.is_unit(ms.det(&m)) {
            break m;
        }
    };
    let h = conjugate_group(&g, &p).unwrap();
    for key in ["f3_dual", "z9"] {
        let b = preset(key).unwrap();
        assert_eq!(lift_classes(&g, &b).unwrap(), lift_classes(&h, &b).unwrap(), "{}", key);
    }
}

#[test]
fn lift_into_z4_from_sl3_f2_exists() {
    let k = preset("f2").unwrap();
    let g = special_linear(&MatSpace::new(&k, 3).unwrap(), DEFAULT_CAP).unwrap();
    let c = lift_classes(&g, &preset("z4").unwrap()).unwrap();
    assert!(!c.obstructed);
    assert!(c.classes >= 1);
}

#[test]
fn non_square_zero_target_is_rejected() {
    let k = preset("f2").unwrap();
    let g = special_linear(&MatSpace::new(&k, 3).unwrap(), DEFAULT_CAP).unwrap();
    assert!(matches!(lift_classes(&g, &preset("z8").unwrap()), Err(Error::NotSquareZero)));
}
