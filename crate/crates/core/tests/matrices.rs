use deform_audit::matrices::{Mat, MatSpace};
use deform_audit::rings::{preset, Elem};
use deform_audit::sln;
use proptest::prelude::*;

fn mat_from(ms: &MatSpace, raw: &[u32]) -> Mat {
    let size = ms.ring().size();
    Mat { n: ms.n(), entries: raw.iter().map(|x| Elem(x % size)).collect() }
}

proptest! {
    #[test]
    fn det_of_identity_plus_p_times_m_over_z9(raw in prop::collection::vec(0u32..9, 9)) {
        // det(I + 3M) = 1 + 3 tr(M) mod 9, since every other term has a factor 9
        let ms = MatSpace::new(&preset("z9").unwrap(), 3).unwrap();
        let r = ms.ring().clone();
        let m = mat_from(&ms, &raw);
        let a = ms.add(&ms.identity(), &ms.scale(r.from_int(3), &m));
        let tr: i64 = (0..3).map(|i| raw[i * 4] as i64).sum();
        prop_assert_eq!(ms.det(&a), r.from_int(1 + 3 * tr));
        prop_assert_eq!(ms.det(&a), ms.det_cofactor(&a));
    }

    #[test]
    fn det_is_multiplicative(key in prop::sample::select(vec!["z4", "gr4_2", "f3_dual", "f4"]), a in prop::collection::vec(any::<u32>(), 9), b in prop::collection::vec(any::<u32>(), 9)) {
        let ms = MatSpace::new(&preset(key).unwrap(), 3).unwrap();
        let (a, b) = (mat_from(&ms, &a), mat_from(&ms, &b));
        prop_assert_eq!(ms.det(&ms.mul(&a, &b)), ms.ring().mul(ms.det(&a), ms.det(&b)));
    }

    #[test]
    fn inverse_exists_iff_det_is_unit(key in prop::sample::select(vec!["z9", "f2_dual", "f3"]), a in prop::collection::vec(any::<u32>(), 9)) {
        let ms = MatSpace::new(&preset(key).unwrap(), 3).unwrap();
        let a = mat_from(&ms, &a);
        match ms.inv(&a) {
            Ok(i) => {
                prop_assert!(ms.ring().is_unit(ms.det(&a)));
                prop_assert!(ms.is_identity(&ms.mul(&a, &i)));
            }
            Err(_) => prop_assert!(!ms.ring().is_unit(ms.det(&a))),
        }
    }

    #[test]
    fn text_and_key_round_trip(a in prop::collection::vec(any::<u32>(), 16)) {
        let ms = MatSpace::new(&preset("gr4_2").unwrap(), 4).unwrap();
        let a = mat_from(&ms, &a);
        prop_assert_eq!(ms.parse(&ms.format(&a)).unwrap(), a.clone());
        prop_assert_eq!(ms.from_key(ms.key(&a).unwrap()), a);
    }

    #[test]
    fn decomposition_round_trips(key in prop::sample::select(vec!["z4", "z9", "gr4_2", "f3_dual", "bc_ring"]), n in 2usize..5, seed in any::<u64>()) {
        use rand::SeedableRng;
        let ms = MatSpace::new(&preset(key).unwrap(), n).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = sln::random_sl(&ms, &mut rng);
        let word = sln::elem_decompose(&ms, &a).unwrap();
        prop_assert!(word.len() <= sln::decomposition_bound(n));
        prop_assert_eq!(ms.word_product(&word), a);
    }
}

#[test]
fn tij_conjugates_corner_elementary_everywhere() {
    for key in ["z4", "f3_dual", "bc_ring"] {
        for n in 3..=4 {
            let report = sln::conjugation_check(&MatSpace::new(&preset(key).unwrap(), n).unwrap()).unwrap();
            assert!(report.passed(), "{} {}: {:?}", key, n, report.counterexample);
        }
    }
}

#[test]
fn sampled_steinberg_is_reproducible() {
    let ms = MatSpace::new(&preset("gr4_2").unwrap(), 4).unwrap();
    let run = || sln::steinberg_check(&ms, sln::Mode::Sampled { samples: 2000, seed: 9 }, 0).unwrap();
    let (a, b) = (run(), run());
    assert!(a.passed());
    assert_eq!(a.checks, b.checks);
    assert_eq!(a.certificate, b.certificate);
}

#[test]
fn non_determinant_one_is_rejected() {
    let ms = MatSpace::new(&preset("z9").unwrap(), 3).unwrap();
    let a = ms.diag(&[ms.ring().from_int(2), ms.ring().one(), ms.ring().one()]);
    assert!(sln::elem_decompose(&ms, &a).is_err());
}
