use deform_audit::cohomology::{cocycle_table, h1_dim, Extension, GModule, ModuleKind, Variant, DEFAULT_H1_BUDGET};
use deform_audit::groups::{closure, special_linear};
use deform_audit::linalg::Fp;
use deform_audit::matrices::MatSpace;
use deform_audit::rings::{preset, LiftKind};
use deform_audit::sln::random_sl;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn cocycle_identity_on_random_triples() {
    // c(g,h) + c(gh,k) = g.c(h,k) + c(g,hk)
    for (key, variant) in [("z9", Variant::Special), ("f3_dual", Variant::General), ("gr4_2", Variant::Special), ("z9", Variant::ScalarQuotient)] {
        let ext = Extension::new(&preset(key).unwrap(), 3, variant, LiftKind::Teichmuller).unwrap();
        let small = ext.small();
        let module = ext.module();
        let fp: &Fp = module.fp();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let [g, h, k] = [0; 3].map(|_| random_sl(small, &mut rng));
            let lhs = fp.add_vec(&ext.cocycle_value(&g, &h).unwrap(), &ext.cocycle_value(&small.mul(&g, &h), &k).unwrap());
            let moved = module.act(&g, &small.inv(&g).unwrap(), &ext.cocycle_value(&h, &k).unwrap());
            let rhs = fp.add_vec(&moved, &ext.cocycle_value(&g, &small.mul(&h, &k)).unwrap());
            assert_eq!(lhs, rhs, "{} {:?}", key, variant);
        }
    }
}

#[test]
fn cocycle_table_vanishes_at_identity() {
    let ext = Extension::new(&preset("z4").unwrap(), 3, Variant::Special, LiftKind::Teichmuller).unwrap();
    let g = special_linear(ext.small(), 1000).unwrap();
    let c = cocycle_table(&ext, &g).unwrap();
    for a in 0..g.order() {
        assert!(c.value(0, a).iter().all(|x| *x == 0));
        assert!(c.value(a, 0).iter().all(|x| *x == 0));
    }
}

#[test]
fn h1_does_not_depend_on_the_generating_set() {
    let k = preset("f3").unwrap();
    let ms = MatSpace::new(&k, 3).unwrap();
    let standard = special_linear(&ms, 100_000).unwrap();
    // E_ij(2) for i != j, and a smaller set: E_01(1), E_10(1), E_12(1), E_21(1)
    let two = k.from_int(2);
    let gens_a: Vec<_> = (0..3).flat_map(|i| (0..3).filter(move |j| *j != i).map(move |j| (i, j))).map(|(i, j)| ms.elementary(i, j, two)).collect();
    let gens_b: Vec<_> = [(0, 1), (1, 0), (1, 2), (2, 1)].iter().map(|(i, j)| ms.elementary(*i, *j, k.one())).collect();
    let alt_a = closure(&ms, &gens_a, 100_000).unwrap();
    let alt_b = closure(&ms, &gens_b, 100_000).unwrap();
    assert_eq!(alt_a.order(), 5616);
    assert_eq!(alt_b.order(), 5616);
    for kind in [ModuleKind::M, ModuleKind::M0, ModuleKind::V, ModuleKind::Trivial] {
        let m = GModule::new(kind, &k, 3, 1).unwrap();
        let base = h1_dim(&standard, &m, DEFAULT_H1_BUDGET).unwrap().h1_fp;
        assert_eq!(h1_dim(&alt_a, &m, DEFAULT_H1_BUDGET).unwrap().h1_fp, base, "{:?}", kind);
        assert_eq!(h1_dim(&alt_b, &m, DEFAULT_H1_BUDGET).unwrap().h1_fp, base, "{:?}", kind);
    }
}

#[test]
fn h1_scales_with_copies() {
    let k = preset("f3").unwrap();
    let g = special_linear(&MatSpace::new(&k, 3).unwrap(), 100_000).unwrap();
    let one = h1_dim(&g, &GModule::new(ModuleKind::M0, &k, 3, 1).unwrap(), DEFAULT_H1_BUDGET).unwrap();
    let two = h1_dim(&g, &GModule::new(ModuleKind::M0, &k, 3, 2).unwrap(), DEFAULT_H1_BUDGET).unwrap();
    assert_eq!(two.h1_fp, 2 * one.h1_fp);
}

#[test]
fn module_constraints() {
    let f2 = preset("f2").unwrap();
    assert!(GModule::new(ModuleKind::S, &f2, 3, 1).is_err());
    assert!(GModule::new(ModuleKind::M, &preset("z4").unwrap(), 3, 1).is_err());
}

#[test]
fn splitting_verdict_does_not_depend_on_the_lift() {
    use deform_audit::cohomology::splitting_decide;
    use deform_audit::groups::sylow_unitriangular;
    for (key, variant) in [("z4", Variant::Special), ("z9", Variant::Special), ("gr4_2", Variant::Special), ("z9", Variant::ScalarQuotient)] {
        let verdicts: Vec<_> = [LiftKind::Teichmuller, LiftKind::Naive]
            .into_iter()
            .map(|lift| {
                let ext = Extension::new(&preset(key).unwrap(), 3, variant, lift).unwrap();
                let k = ext.small().ring().clone();
                let sub = if key == "z4" { special_linear(ext.small(), 1000).unwrap() } else { sylow_unitriangular(&k, 3).unwrap() };
                splitting_decide(&ext, &sub).unwrap().verdict
            })
            .collect();
        assert_eq!(verdicts[0], verdicts[1], "{} {:?}", key, variant);
    }
}
