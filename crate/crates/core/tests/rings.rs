use deform_audit::rings::{hom_enumerate, preset, verify_hom_table, Elem, LiftKind};
use proptest::prelude::*;

const KEYS: [&str; 10] = ["f2", "f3", "f4", "z4", "z9", "gr4_2", "f2_dual", "f3_dual", "f4_dual", "bc_ring"];

fn key_and_elems() -> impl Strategy<Value = (&'static str, u32, u32, u32)> {
    (0..KEYS.len(), any::<u32>(), any::<u32>(), any::<u32>()).prop_map(|(i, a, b, c)| (KEYS[i], a, b, c))
}

proptest! {
    #[test]
    fn ring_axioms((key, a, b, c) in key_and_elems()) {
        let r = preset(key).unwrap();
        let [a, b, c] = [a, b, c].map(|x| Elem(x % r.size()));
        prop_assert_eq!(r.add(a, b), r.add(b, a));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.mul(a, r.one()), a);
        match r.inv(a) {
            Some(i) => prop_assert_eq!(r.mul(a, i), r.one()),
            None => prop_assert!(!r.is_unit(a)),
        }
    }

    #[test]
    fn units_are_exactly_the_elements_with_nonzero_residue((key, a, _b, _c) in key_and_elems()) {
        let r = preset(key).unwrap();
        let a = Elem(a % r.size());
        let k = r.residue_field().unwrap();
        prop_assert_eq!(r.is_unit(a), r.residue(a) != k.zero());
    }

    #[test]
    fn element_text_round_trips((key, a, _b, _c) in key_and_elems()) {
        let r = preset(key).unwrap();
        let a = Elem(a % r.size());
        prop_assert_eq!(r.parse_elem(&r.format_elem(a)).unwrap(), a);
    }
}

#[test]
fn teichmuller_lift_is_multiplicative_and_idempotent_on_w2() {
    for key in ["z9", "gr4_2", "z4"] {
        let r = preset(key).unwrap();
        let k = r.residue_field().unwrap();
        let q = k.size() as u64;
        for a in k.elements() {
            let t = r.lift_residue(a, LiftKind::Teichmuller).unwrap();
            // Teichmüller representatives satisfy x^q = x
            assert_eq!(r.pow(t, q), t, "{} {}", key, k.format_elem(a));
            assert_eq!(r.residue(t), a);
        }
    }
}

#[test]
fn homomorphism_counts_match_characteristic() {
    let f3 = preset("f3").unwrap();
    for (key, expected) in [("f3", 1), ("f3_dual", 1), ("z9", 0), ("f2", 0)] {
        let set = hom_enumerate(&f3, &preset(key).unwrap());
        assert_eq!(set.homs.len(), expected, "{}", key);
    }
    let z9 = preset("z9").unwrap();
    let f3_homs = hom_enumerate(&z9, &f3);
    assert_eq!(f3_homs.homs.len(), 1);
    assert!(verify_hom_table(&z9, &f3, &f3_homs.homs[0].table));
}

#[test]
fn composition_of_homomorphisms_is_a_homomorphism() {
    let (a, b, c) = (preset("z9").unwrap(), preset("f3_dual").unwrap(), preset("f3").unwrap());
    let ab = hom_enumerate(&a, &b);
    let bc = hom_enumerate(&b, &c);
    for f in &ab.homs {
        for g in &bc.homs {
            let table: Vec<Elem> = a.elements().map(|x| g.apply(f.apply(x))).collect();
            assert!(verify_hom_table(&a, &c, &table));
        }
    }
}
