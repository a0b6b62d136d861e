//! Square-zero lifting of the standard representation of `SL_n(k)`, the
//! comparison with ring homomorphisms out of `k`, reconstruction of a ring
//! section from a subgroup of `SL_n(R)`, and normalization and
//! classification of subgroups of `SL_n(k[t]/t^2)` over `SL_n(k)`.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::cohomology::{self, splitting_decide, Extension, GModule, ModuleKind, SplitVerdict, Variant};
use crate::error::{Error, Result};
use crate::groups::{self, closure, GroupTable};
use crate::linalg::{self, Echelon, FpMat, Solution};
use crate::matrices::{Mat, MatSpace};
use crate::rings::{hom_enumerate, Elem, LiftKind, Ring, RingHom};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LiftCount {
    pub target: String,
    /// `dim_k` of the maximal ideal of the target.
    pub ideal_rank: usize,
    pub obstructed: bool,
    pub h1_fp: usize,
    pub classes: u64,
}

/// Number of strict-equivalence classes of lifts of the inclusion
/// `group <= GL_n(k)` to `GL_n(target)`, for `target` with square-zero
/// maximal ideal `J`: zero if the pullback extension by `I + M_n(J)` does
/// not split, otherwise `|H^1(group, J (x) M)|`.
pub fn lift_classes(group: &GroupTable, target: &Ring) -> Result<LiftCount> {
    if target.spec().residue_field() != *group.ring().spec() {
        return Err(Error::Module(format!("{} does not have residue field {}", target.spec(), group.ring().spec())));
    }
    let ext = Extension::new(target, group.n(), Variant::General, LiftKind::Teichmuller)?;
    let r = ext.ideal_rank();
    let mut out = LiftCount { target: target.spec().to_string(), ideal_rank: r, obstructed: false, h1_fp: 0, classes: 1 };
    if r == 0 {
        return Ok(out);
    }
    if splitting_decide(&ext, group)?.verdict == SplitVerdict::NonSplit {
        out.obstructed = true;
        out.classes = 0;
        return Ok(out);
    }
    let module = GModule::new(ModuleKind::M, group.ring(), group.n(), r)?;
    let h = cohomology::h1_dim(group, &module, usize::MAX)?;
    out.h1_fp = h.h1_fp;
    out.classes = (group.ring().p() as u64).pow(h.h1_fp as u32);
    Ok(out)
}

/// The group generated by `p g p^-1` for the generators `g` of `group`.
pub fn conjugate_group(group: &GroupTable, p: &Mat) -> Result<GroupTable> {
    let space = group.space();
    let gens = group.gens().iter().map(|g| space.conjugate(p, g)).collect::<Result<Vec<_>>>()?;
    closure(space, &gens, groups::DEFAULT_CAP)
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditRow {
    pub target: String,
    pub lift_classes: u64,
    pub homomorphisms: u64,
    pub agree: bool,
}

/// For `A = k`, compares lift-class counts into each target with the number
/// of ring homomorphisms `k -> target`.
pub fn universal_property_audit(k: &Ring, n: usize, targets: &[Ring]) -> Result<Vec<AuditRow>> {
    let space = MatSpace::new(k, n)?;
    let group = groups::special_linear(&space, groups::DEFAULT_CAP)?;
    targets
        .iter()
        .map(|b| {
            let lifts = lift_classes(&group, b)?.classes;
            let homs = hom_enumerate(k, b).homs.len() as u64;
            Ok(AuditRow { target: b.spec().to_string(), lift_classes: lifts, homomorphisms: homs, agree: lifts == homs })
        })
        .collect()
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct SectionChecks {
    pub lambda_one: bool,
    pub tij_consistent: bool,
    pub additive: bool,
    pub multiplicative: bool,
    pub unital: bool,
    pub local: bool,
    pub section_of_projection: bool,
}

impl SectionChecks {
    pub fn all(&self) -> bool {
        self.lambda_one && self.tij_consistent && self.additive && self.multiplicative && self.unital && self.local && self.section_of_projection
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionMap {
    /// `s(x)` indexed by the elements of `A`.
    pub table: Vec<Elem>,
    /// `lambda_x` with `lambda_x E_{0,n-1}(s(x))` the preimage of `E_{0,n-1}(x)`.
    pub lambda: Vec<Elem>,
    pub checks: SectionChecks,
}

/// Given `G <= SL_n(R)` mapping isomorphically onto `SL_n(A)` under `pi`,
/// reads off `s: A -> R` from the preimages `lambda_x E_{0,n-1}(s(x))` of
/// `E_{0,n-1}(x)` and checks that it is a ring section of `pi`.
pub fn section_reconstruct(pi: &RingHom, a: &Ring, g: &GroupTable) -> Result<SectionMap> {
    let r = g.ring().clone();
    let n = g.n();
    let rs = g.space();
    let as_ = MatSpace::new(a, n)?;
    let project = |m: &Mat| rs.map(m, |e| pi.apply(e));
    let mut fiber: HashMap<Mat, usize> = HashMap::with_capacity(g.order());
    for (i, m) in g.elements().iter().enumerate() {
        if fiber.insert(project(m), i).is_some() {
            return Err(Error::Reconstruction("projection is not injective on the group".into()));
        }
    }
    if fiber.len() as u64 != groups::sl_order(a, n as u32) {
        return Err(Error::Reconstruction(format!("group has order {}, not |SL_{}(A)|", fiber.len(), n)));
    }
    let preimage = |m: &Mat| -> Result<&Mat> {
        fiber.get(m).map(|i| g.element(*i)).ok_or_else(|| Error::Reconstruction("matrix has no preimage".into()))
    };
    let last = n - 1;
    let mut table = Vec::with_capacity(a.size() as usize);
    let mut lambda = Vec::with_capacity(a.size() as usize);
    for x in a.elements() {
        let m = preimage(&as_.elementary(0, last, x))?;
        let l = m.get(0, 0);
        let shaped = r.is_unit(l)
            && (0..n).all(|i| (0..n).all(|j| if i == j { m.get(i, j) == l } else { (i, j) == (0, last) || m.get(i, j) == r.zero() }));
        if !shaped {
            return Err(Error::Reconstruction(format!("preimage of E(x) for x = {} is not of the form lambda E(y)", a.format_elem(x))));
        }
        table.push(r.mul(r.inv(l).expect("unit"), m.get(0, last)));
        lambda.push(l);
    }
    let s = |x: Elem| table[x.0 as usize];
    let mut checks = SectionChecks { lambda_one: true, tij_consistent: true, ..Default::default() };

    // [P_{0,1}(x), P_{1,n-1}(1)] maps to E_{0,n-1}(x), so it is the preimage
    // of E_{0,n-1}(x); being a commutator of the preimages it has lambda = 1
    for x in a.elements() {
        let c = rs.commutator(preimage(&as_.elementary(0, 1, x))?, preimage(&as_.elementary(1, last, a.one()))?)?;
        let p = preimage(&as_.elementary(0, last, x))?;
        if c != *p || lambda[x.0 as usize] != r.one() {
            checks.lambda_one = false;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = rs.build_tij(i, j)?;
            if g.index_of(&t).is_none() {
                checks.tij_consistent = false;
                continue;
            }
            for x in a.elements() {
                if rs.conjugate(&t, preimage(&as_.elementary(0, last, x))?)? != *preimage(&as_.elementary(i, j, x))? {
                    checks.tij_consistent = false;
                }
            }
        }
    }
    checks.additive = a.elements().all(|x| a.elements().all(|y| s(a.add(x, y)) == r.add(s(x), s(y))));
    checks.multiplicative = a.elements().all(|x| a.elements().all(|y| s(a.mul(x, y)) == r.mul(s(x), s(y))));
    checks.unital = s(a.one()) == r.one();
    checks.local = a.elements().all(|x| a.is_unit(x) == r.is_unit(s(x)));
    checks.section_of_projection = a.elements().all(|x| pi.apply(s(x)) == x);
    Ok(SectionMap { table, lambda, checks })
}

/// A ring `R` with square-zero maximal ideal over its residue field `k`,
/// with the constant embedding `SL_n(k) -> SL_n(R)`.
pub struct SquareZeroSetting {
    pub ext: Extension,
    pub quotient: GroupTable,
}

impl SquareZeroSetting {
    pub fn new(r: &Ring, n: usize) -> Result<SquareZeroSetting> {
        let ext = Extension::new(r, n, Variant::General, LiftKind::Teichmuller)?;
        if ext.ideal_rank() == 0 {
            return Err(Error::Module(format!("{} is a field", r.spec())));
        }
        let quotient = groups::special_linear(ext.small(), groups::DEFAULT_CAP)?;
        Ok(SquareZeroSetting { ext, quotient })
    }

    pub fn space(&self) -> &MatSpace {
        self.ext.big()
    }

    pub fn embed(&self, g: &Mat) -> Mat {
        self.ext.section0(g)
    }

    /// Constant copies of the default generators of `SL_n(k)`.
    pub fn constant_gens(&self) -> Vec<Mat> {
        self.quotient.gens().iter().map(|g| self.embed(g)).collect()
    }

    /// `E_ij(b)` for `b` in an additive generating set of `R`.
    pub fn full_gens(&self) -> Vec<Mat> {
        groups::elementary_generators(self.space())
    }

    /// Constant generators together with `I + jI` for a basis element `j` of
    /// the ideal.
    pub fn scalar_extension_gens(&self) -> Vec<Mat> {
        let mut gens = self.constant_gens();
        let block = self.ext.module().block_dim();
        let mut v = vec![0u8; self.ext.module().dim()];
        let id = self.ext.module().coords(&self.ext.small().identity());
        v[..block].copy_from_slice(&id);
        gens.push(self.ext.epsilon(&v));
        gens
    }

    /// `I + Y` with `Y` a uniformly random matrix over the ideal.
    pub fn random_unipotent(&self, rng: &mut impl Rng) -> Mat {
        let p = self.ext.module().fp().p();
        let v: Vec<u8> = (0..self.ext.module().dim()).map(|_| rng.gen_range(0..p) as u8).collect();
        self.ext.epsilon(&v)
    }

    /// A uniformly random invertible matrix over `R`.
    pub fn random_invertible(&self, rng: &mut impl Rng) -> Mat {
        let space = self.space();
        let size = space.ring().size();
        loop {
            let m = Mat { n: space.n(), entries: (0..space.n() * space.n()).map(|_| Elem(rng.gen_range(0..size))).collect() };
            if space.ring().is_unit(space.det(&m)) {
                return m;
            }
        }
    }

    pub fn conjugate_all(&self, x: &Mat, gens: &[Mat]) -> Result<Vec<Mat>> {
        gens.iter().map(|g| self.space().conjugate(x, g)).collect()
    }

    /// The quotient group generated by the reductions of `gens`, required to
    /// be all of `SL_n(k)`.
    fn reduced_group(&self, gens: &[Mat]) -> Result<GroupTable> {
        let reduced: Vec<Mat> = gens.iter().map(|g| self.ext.reduce(g)).collect();
        let q = closure(self.ext.small(), &reduced, groups::DEFAULT_CAP)?;
        let expected = groups::sl_order(self.ext.small().ring(), self.space().n() as u32);
        if q.order() as u64 != expected {
            return Err(Error::Module(format!("reductions generate a group of order {}, expected {}", q.order(), expected)));
        }
        Ok(q)
    }

    /// `c_s` with `g_s = (I + C_s) emb(reduction of g_s)`.
    fn generator_cochain(&self, gens: &[Mat]) -> Result<Vec<Vec<u8>>> {
        let space = self.space();
        gens.iter()
            .map(|g| {
                let e = self.embed(&self.ext.reduce(g));
                self.ext.kernel_coords(&space.mul(g, &space.inv(&e)?))
            })
            .collect()
    }

    /// Propagates `c(q s) = c(q) + q . c_s` along the quotient's Cayley graph
    /// and hands every non-tree edge's defect `c(q) + q . c_s - c(qs)` to
    /// `on_defect`.
    fn propagate(&self, q: &GroupTable, cs: &[Vec<u8>], mut on_defect: impl FnMut(usize, usize, Vec<u8>) -> Result<()>) -> Result<()> {
        let module = self.ext.module();
        let fp = module.fp();
        let bd = module.block_dim();
        let mut values: Vec<Option<Vec<u8>>> = vec![None; q.order()];
        values[0] = Some(vec![0u8; module.dim()]);
        for g in 0..q.order() {
            let a = module.action(q.element(g));
            let cur = values[g].clone().expect("BFS order");
            for (s, c) in cs.iter().enumerate() {
                let mut moved = Vec::with_capacity(c.len());
                for block in c.chunks(bd) {
                    moved.extend(a.mul_vec(fp, block));
                }
                let cand = fp.add_vec(&cur, &moved);
                let h = q.cayley(g, s);
                if q.is_tree_edge(g, s) {
                    values[h] = Some(cand);
                } else {
                    let defect = fp.sub_vec(&cand, values[h].as_ref().expect("tree edge first"));
                    if defect.iter().any(|x| *x != 0) {
                        on_defect(g, s, defect)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Conjugator {
    pub x: Mat,
    /// `Y` with `x = I + Y`, as module coordinates.
    pub y: Vec<u8>,
}

/// For generators of a subgroup of `SL_n(R)` mapping isomorphically onto
/// `SL_n(k)`, finds `X = I + Y` (`Y` over the ideal) with `X g X^-1` the
/// constant copy of the reduction of `g` for every generator `g`.
pub fn find_conjugator(setting: &SquareZeroSetting, gens: &[Mat]) -> Result<Conjugator> {
    let q = setting.reduced_group(gens)?;
    let cs = setting.generator_cochain(gens)?;
    setting.propagate(&q, &cs, |g, s, _| Err(Error::CocycleInconsistent { element: g, generator: s }))?;

    // c_s = (A_s - I) Y for every generator
    let module = setting.ext.module();
    let fp = module.fp();
    let dim = module.dim();
    let bd = module.block_dim();
    let mut a = FpMat::zeros(gens.len() * dim, dim);
    let mut b = Vec::with_capacity(gens.len() * dim);
    for (s, g) in gens.iter().enumerate() {
        let act = module.action(&setting.ext.reduce(g));
        for blk in 0..module.copies() {
            for i in 0..bd {
                for j in 0..bd {
                    let v = fp.sub(act.get(i, j), (i == j) as u8);
                    a.set(s * dim + blk * bd + i, blk * bd + j, v);
                }
            }
        }
        b.extend_from_slice(&cs[s]);
    }
    let y = match linalg::solve(fp, &a, &b) {
        Solution::Affine { particular, .. } => particular,
        Solution::Inconsistent { rank, augmented_rank } => {
            return Err(Error::Unsolvable(format!("conjugator system has rank {} < {}", rank, augmented_rank)));
        }
    };
    let x = setting.ext.epsilon(&y);
    let space = setting.space();
    for g in gens {
        if space.conjugate(&x, g)? != setting.embed(&setting.ext.reduce(g)) {
            return Err(Error::Unsolvable("conjugator does not normalize a generator".into()));
        }
    }
    Ok(Conjugator { x, y })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trichotomy {
    /// The subgroup contains the whole kernel `I + t M0`.
    Full,
    /// The projection to `SL_n(k)` is an isomorphism.
    Iso,
    /// The kernel part is the scalar subgroup.
    ScalarExtension,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub class: Trichotomy,
    pub defect_rank: usize,
}

/// Classifies a subgroup of `SL_n(k[t]/t^2)`, `k` prime, whose reductions
/// generate `SL_n(k)`, by the span of the Schreier defects in `M0`.
pub fn trichotomy_classify(setting: &SquareZeroSetting, gens: &[Mat]) -> Result<Classification> {
    let module = setting.ext.module();
    if module.degree() != 1 || module.copies() != 1 {
        return Err(Error::Module("classification needs a prime residue field and a one-dimensional ideal".into()));
    }
    let fp = module.fp().clone();
    let q = setting.reduced_group(gens)?;
    let cs = setting.generator_cochain(gens)?;
    let mut span = Echelon::new(module.dim());
    setting.propagate(&q, &cs, |_, _, d| {
        span.insert(&fp, &d);
        Ok(())
    })?;
    let n = module.n();
    let small = setting.ext.small();
    let k = small.ring();
    let trace_zero = span.rows().iter().all(|r| k.residue(small.trace(&module.matrix(r))) == k.zero());
    let mut scalars = Echelon::new(module.dim());
    scalars.insert(&fp, &module.coords(&small.identity()));
    let rank = span.rank();
    let class = if rank == 0 {
        Trichotomy::Iso
    } else if rank == n * n - 1 && trace_zero {
        Trichotomy::Full
    } else if span == scalars && trace_zero {
        Trichotomy::ScalarExtension
    } else {
        return Err(Error::UnexpectedDefect(rank));
    };
    Ok(Classification { class, defect_rank: rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::preset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lift_counts_over_f2() {
        let k = preset("f2").unwrap();
        let g = groups::special_linear(&MatSpace::new(&k, 3).unwrap(), 1000).unwrap();
        assert!(lift_classes(&g, &preset("z4").unwrap()).unwrap().classes >= 1);
        assert_eq!(lift_classes(&g, &k).unwrap().classes, 1);
        assert!(lift_classes(&g, &preset("f3").unwrap()).is_err());
    }

    #[test]
    fn twisted_copy_normalizes() {
        let setting = SquareZeroSetting::new(&preset("f3_dual").unwrap(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x0 = setting.random_unipotent(&mut rng);
        let gens = setting.conjugate_all(&x0, &setting.constant_gens()).unwrap();
        let c = find_conjugator(&setting, &gens).unwrap();
        assert_eq!(setting.conjugate_all(&c.x, &gens).unwrap(), setting.constant_gens());
    }

    #[test]
    fn classification_of_standard_instances() {
        let setting = SquareZeroSetting::new(&preset("f3_dual").unwrap(), 3).unwrap();
        assert_eq!(trichotomy_classify(&setting, &setting.constant_gens()).unwrap().class, Trichotomy::Iso);
        assert_eq!(trichotomy_classify(&setting, &setting.full_gens()).unwrap().class, Trichotomy::Full);
        assert_eq!(trichotomy_classify(&setting, &setting.scalar_extension_gens()).unwrap().class, Trichotomy::ScalarExtension);
        assert!(matches!(find_conjugator(&setting, &setting.full_gens()), Err(Error::CocycleInconsistent { .. })));
    }
}
