use deform_audit::groups::{closure, closure_cached, elementary_generators, sl_order, special_linear, sylow_unitriangular, GroupTable};
use deform_audit::matrices::MatSpace;
use deform_audit::rings::preset;

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ms = MatSpace::new(&preset("f3").unwrap(), 3).unwrap();
    let gens = elementary_generators(&ms);
    let a = closure_cached(&ms, &gens, 100_000, dir.path()).unwrap();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
    let b = closure_cached(&ms, &gens, 100_000, dir.path()).unwrap();
    assert_eq!(a.order(), 5616);
    assert_eq!(a.elements(), b.elements());
    for g in (0..a.order()).step_by(97) {
        for s in 0..a.ngens() {
            assert_eq!(a.cayley(g, s), b.cayley(g, s));
        }
    }
    let path = dir.path().join("explicit.bin");
    a.save(&path).unwrap();
    let c = GroupTable::load(&ms, &gens, &path).unwrap();
    assert_eq!(c.elements(), a.elements());
}

#[test]
fn corrupt_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let ms = MatSpace::new(&preset("f2").unwrap(), 3).unwrap();
    let path = dir.path().join("bad.bin");
    std::fs::write(&path, b"not a table").unwrap();
    assert!(GroupTable::load(&ms, &elementary_generators(&ms), &path).is_err());
}

#[test]
fn closure_over_local_rings_matches_order_formula() {
    for key in ["z4", "f2_dual"] {
        let ms = MatSpace::new(&preset(key).unwrap(), 2).unwrap();
        let g = special_linear(&ms, 100_000).unwrap();
        assert_eq!(g.order() as u64, sl_order(ms.ring(), 2), "{}", key);
    }
}

#[test]
fn table_operations_are_consistent() {
    let ms = MatSpace::new(&preset("f2").unwrap(), 3).unwrap();
    let g = special_linear(&ms, 1000).unwrap();
    for a in 0..g.order() {
        assert_eq!(g.mul(a, g.inverse(a)), 0);
        let word = g.word(a);
        let prod = word.iter().fold(ms.identity(), |acc, s| ms.mul(&acc, &g.gens()[*s]));
        assert_eq!(&prod, g.element(a));
    }
    let s = sylow_unitriangular(ms.ring(), 3).unwrap();
    assert!(g.contains_all(s.elements()));
}

#[test]
fn closure_cap_is_enforced() {
    let ms = MatSpace::new(&preset("f3").unwrap(), 3).unwrap();
    assert!(closure(&ms, &elementary_generators(&ms), 100).is_err());
}
