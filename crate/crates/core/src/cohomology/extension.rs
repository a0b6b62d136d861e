//! Extensions `1 -> I + M_n(J) -> G -> H -> 1` where `H <= SL_n(k)` and `J`
//! is the maximal ideal of a ring `B` with `J^2 = 0`, and the decision
//! whether they split over `H`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::module::{GModule, ModuleKind};
use super::propagate::{self, Infeasibility, Outcome, Problem};
use crate::error::{Error, Result};
use crate::groups::GroupTable;
use crate::matrices::{Mat, MatSpace};
use crate::rings::{Elem, LiftKind, Ring};

/// Sections are checked on every pair of elements up to this order, and on
/// Cayley edges only above it.
pub const ALL_PAIRS_LIMIT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `SL_n(B) -> SL_n(k)`, kernel `M0^r`.
    Special,
    /// Preimage of `SL_n(k)` in `GL_n(B)`, kernel `M^r`.
    General,
    /// `SL_n(B) / {(1 + j) I}` over `SL_n(k)`, kernel `V^r`; needs `p | n`.
    ScalarQuotient,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Variant> {
        Ok(match s {
            "full" | "special" => Variant::Special,
            "general" | "gl" => Variant::General,
            "scalar_quotient" | "scalar-quotient" => Variant::ScalarQuotient,
            other => return Err(Error::Parse(format!("unknown extension variant {:?}", other))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Extension {
    big: MatSpace,
    small: MatSpace,
    variant: Variant,
    lift: LiftKind,
    module: GModule,
    /// A `k`-basis of `J`.
    jbasis: Vec<Elem>,
    /// `k`-coordinates of each element of `B` lying in `J`.
    jcoords: Vec<Option<Vec<Elem>>>,
    lifts: Vec<Elem>,
    ideal: Vec<Elem>,
}

impl Extension {
    pub fn new(big_ring: &Ring, n: usize, variant: Variant, lift: LiftKind) -> Result<Extension> {
        let k = big_ring.residue_field()?;
        let ideal = big_ring.maximal_ideal();
        for a in &ideal {
            for b in &ideal {
                if big_ring.mul(*a, *b) != big_ring.zero() {
                    return Err(Error::NotSquareZero);
                }
            }
        }
        let lifts = k.elements().map(|a| big_ring.lift_residue(a, lift)).collect::<Result<Vec<_>>>()?;
        let scale = |alpha: Elem, j: Elem| big_ring.mul(lifts[alpha.0 as usize], j);

        let mut jbasis = Vec::new();
        let mut span: HashSet<Elem> = HashSet::from([big_ring.zero()]);
        for &j in &ideal {
            if span.contains(&j) {
                continue;
            }
            jbasis.push(j);
            let mut next = HashSet::new();
            for s in &span {
                for alpha in k.elements() {
                    next.insert(big_ring.add(*s, scale(alpha, j)));
                }
            }
            span = next;
        }
        let r = jbasis.len();
        let mut jcoords = vec![None; big_ring.size() as usize];
        let q = k.size() as usize;
        for idx in 0..q.pow(r as u32) {
            let mut rest = idx;
            let mut coeffs = Vec::with_capacity(r);
            let mut y = big_ring.zero();
            for j in &jbasis {
                let alpha = Elem((rest % q) as u32);
                rest /= q;
                coeffs.push(alpha);
                y = big_ring.add(y, scale(alpha, *j));
            }
            jcoords[y.0 as usize] = Some(coeffs);
        }

        let kind = match variant {
            Variant::Special => ModuleKind::M0,
            Variant::General => ModuleKind::M,
            Variant::ScalarQuotient => ModuleKind::V,
        };
        let module = GModule::new(kind, &k, n, r)?;
        Ok(Extension {
            big: MatSpace::new(big_ring, n)?,
            small: MatSpace::new(&k, n)?,
            variant,
            lift,
            module,
            jbasis,
            jcoords,
            lifts,
            ideal,
        })
    }

    pub fn big(&self) -> &MatSpace {
        &self.big
    }

    pub fn small(&self) -> &MatSpace {
        &self.small
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn lift_kind(&self) -> LiftKind {
        self.lift
    }

    /// `dim_k J`.
    pub fn ideal_rank(&self) -> usize {
        self.jbasis.len()
    }

    /// Entrywise reduction to `k`.
    pub fn reduce(&self, x: &Mat) -> Mat {
        self.big.map(x, |e| self.big.ring().residue(e))
    }

    pub fn lift_elem(&self, alpha: Elem) -> Elem {
        self.lifts[alpha.0 as usize]
    }

    /// The set-theoretic section: entrywise lift, then (for the special
    /// variants) row 0 scaled by the inverse determinant.
    pub fn section0(&self, g: &Mat) -> Mat {
        let mut x = self.big.map(g, |a| self.lift_elem(a));
        if self.variant != Variant::General {
            let r = self.big.ring();
            let dinv = r.inv(self.big.det(&x)).expect("lift of an invertible matrix");
            for j in 0..self.big.n() {
                x.set(0, j, r.mul(dinv, x.get(0, j)));
            }
        }
        x
    }

    /// Module coordinates of a kernel element `I + Y`.
    pub fn kernel_coords(&self, x: &Mat) -> Result<Vec<u8>> {
        let r = self.big.ring();
        let y = self.big.sub(x, &self.big.identity());
        let nn = self.big.n() * self.big.n();
        let rank = self.jbasis.len();
        let mut blocks = vec![self.small.zero(); rank];
        for idx in 0..nn {
            let c = self.jcoords[y.entries[idx].0 as usize]
                .as_ref()
                .ok_or_else(|| Error::Module(format!("entry {} is not in the ideal", r.format_elem(x.entries[idx]))))?;
            for (l, alpha) in c.iter().enumerate() {
                blocks[l].entries[idx] = *alpha;
            }
        }
        Ok(blocks.iter().flat_map(|b| self.module.coords(b)).collect())
    }

    /// `I + sum_l lift(X_l) j_l` for the block matrices `X_l` of `v`.
    pub fn epsilon(&self, v: &[u8]) -> Mat {
        let r = self.big.ring();
        let bd = self.module.block_dim();
        let mut out = self.big.identity();
        for (l, j) in self.jbasis.iter().enumerate() {
            let xl = self.module.matrix(&v[l * bd..(l + 1) * bd]);
            for idx in 0..out.entries.len() {
                let add = r.mul(self.lift_elem(xl.entries[idx]), *j);
                out.entries[idx] = r.add(out.entries[idx], add);
            }
        }
        out
    }

    /// Canonical representative of the image of `x` in the extension group:
    /// `x` itself, or for the scalar quotient the lexicographically least
    /// entry vector among `x (1 + j)`, `j` in `J` (the `(0,0)` entry is
    /// compared first).
    pub fn canonical(&self, x: &Mat) -> Mat {
        if self.variant != Variant::ScalarQuotient {
            return x.clone();
        }
        let r = self.big.ring();
        self.ideal
            .iter()
            .map(|j| self.big.scale(r.add(r.one(), *j), x))
            .min()
            .expect("ideal contains 0")
    }

    /// `c(g, h)` for group elements given as matrices over `k`.
    pub fn cocycle_value(&self, g: &Mat, h: &Mat) -> Result<Vec<u8>> {
        let gh = self.small.mul(g, h);
        let prod = self.big.product([&self.section0(g), &self.section0(h), &self.big.inv(&self.section0(&gh))?]);
        self.kernel_coords(&prod)
    }
}

/// `c(g, h)` on all ordered pairs of a group table.
#[derive(Clone, Debug)]
pub struct Cocycle2 {
    pub order: usize,
    pub dim: usize,
    pub values: Vec<u8>,
}

impl Cocycle2 {
    pub fn value(&self, g: usize, h: usize) -> &[u8] {
        let at = (g * self.order + h) * self.dim;
        &self.values[at..at + self.dim]
    }
}

pub fn cocycle_table(ext: &Extension, group: &GroupTable) -> Result<Cocycle2> {
    let order = group.order();
    let dim = ext.module().dim();
    let sections: Vec<Mat> = group.elements().par_iter().map(|g| ext.section0(g)).collect();
    let inverses: Vec<Mat> = sections.par_iter().map(|x| ext.big().inv(x)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<u8>> = (0..order)
        .into_par_iter()
        .map(|g| {
            let mut row = Vec::with_capacity(order * dim);
            for h in 0..order {
                let gh = group.mul(g, h);
                let prod = ext.big().product([&sections[g], &sections[h], &inverses[gh]]);
                row.extend(ext.kernel_coords(&prod)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cocycle2 { order, dim, values: rows.concat() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitVerdict {
    Split,
    NonSplit,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitDecision {
    pub verdict: SplitVerdict,
    pub subgroup_order: usize,
    /// `sigma(g)` for every element of the subgroup when split.
    #[serde(skip)]
    pub section: Option<Vec<Mat>>,
    pub section_checks: u64,
    pub witness: Option<Infeasibility>,
}

/// Decides whether the extension splits over `subgroup` (a group table over
/// `k`). On success the returned section is verified to be a homomorphism
/// reducing to the identity.
pub fn splitting_decide(ext: &Extension, subgroup: &GroupTable) -> Result<SplitDecision> {
    let big = ext.big();
    let order = subgroup.order();
    let sections: Vec<Mat> = subgroup.elements().par_iter().map(|g| ext.section0(g)).collect();
    let inverses: Vec<Mat> = sections.par_iter().map(|x| big.inv(x)).collect::<Result<Vec<_>>>()?;
    let module = ext.module();
    let act = |g: &Mat| module.action(g);
    let constant = |g: usize, s: usize| {
        let gs = subgroup.cayley(g, s);
        let s_mat = ext.section0(&subgroup.gens()[s]);
        let prod = big.product([&sections[g], &s_mat, &inverses[gs]]);
        ext.kernel_coords(&prod).expect("product reduces to the identity")
    };
    let problem = Problem {
        group: subgroup,
        fp: module.fp().clone(),
        block_dim: module.block_dim(),
        copies: module.copies(),
        action: &act,
        constant: Some(&constant),
    };
    let solved = match propagate::solve(&problem) {
        Outcome::Infeasible(w) => {
            return Ok(SplitDecision { verdict: SplitVerdict::NonSplit, subgroup_order: order, section: None, section_checks: 0, witness: Some(w) });
        }
        Outcome::Solved(s) => s,
    };
    let section: Vec<Mat> = (0..order).into_par_iter().map(|g| big.mul(&ext.epsilon(solved.value(g)), &sections[g])).collect();
    let canon: Vec<Mat> = section.par_iter().map(|x| ext.canonical(x)).collect();
    let bad = |what: String| Error::Unsolvable(format!("section failed verification: {}", what));
    for (g, x) in section.iter().enumerate() {
        if ext.reduce(x) != *subgroup.element(g) {
            return Err(bad(format!("element {} does not reduce correctly", g)));
        }
        if ext.variant() != Variant::General && big.det(x) != big.ring().one() {
            return Err(bad(format!("element {} has determinant != 1", g)));
        }
    }
    let checks: u64 = if order <= ALL_PAIRS_LIMIT {
        let failures: Vec<(usize, usize)> = (0..order)
            .into_par_iter()
            .flat_map_iter(|g| {
                let section = &section;
                let canon = &canon;
                (0..order).filter_map(move |h| {
                    let gh = subgroup.mul(g, h);
                    (ext.canonical(&big.mul(&section[g], &section[h])) != canon[gh]).then_some((g, h))
                })
            })
            .collect();
        if let Some((g, h)) = failures.first() {
            return Err(bad(format!("pair ({}, {}) is not multiplicative", g, h)));
        }
        (order * order) as u64
    } else {
        let s_sections: Vec<Mat> = (0..subgroup.ngens()).map(|s| section[subgroup.index_of(&subgroup.gens()[s]).expect("generator")].clone()).collect();
        for g in 0..order {
            for (s, xs) in s_sections.iter().enumerate() {
                if ext.canonical(&big.mul(&section[g], xs)) != canon[subgroup.cayley(g, s)] {
                    return Err(bad(format!("edge ({}, {}) is not multiplicative", g, s)));
                }
            }
        }
        (order * subgroup.ngens()) as u64
    };
    Ok(SplitDecision { verdict: SplitVerdict::Split, subgroup_order: order, section: Some(section), section_checks: checks, witness: None })
}

/// Lifts a verdict over a subgroup to the whole group of order
/// `group_order`: non-splitting restricts, and splitting over a subgroup of
/// index prime to `p` implies splitting (abelian `p`-group kernel).
pub fn global_verdict(decision: &SplitDecision, group_order: u64, p: u32) -> Result<SplitVerdict> {
    match decision.verdict {
        SplitVerdict::NonSplit => Ok(SplitVerdict::NonSplit),
        SplitVerdict::Split => {
            let index = group_order / decision.subgroup_order as u64;
            if index.is_multiple_of(p as u64) {
                Err(Error::NotSaturated { order: decision.subgroup_order as u64, group_order })
            } else {
                Ok(SplitVerdict::Split)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{special_linear, sylow_unitriangular};
    use crate::rings::preset;

    #[test]
    fn kernel_identification_round_trip() {
        let ext = Extension::new(&preset("gr4_2").unwrap(), 3, Variant::Special, LiftKind::Teichmuller).unwrap();
        assert_eq!(ext.ideal_rank(), 1);
        assert_eq!(ext.module().dim(), 16);
        let v: Vec<u8> = (0..16).map(|i| (i % 3 == 0) as u8).collect();
        let x = ext.epsilon(&v);
        assert_eq!(ext.big().det(&x), ext.big().ring().one());
        assert_eq!(ext.kernel_coords(&x).unwrap(), v);
        assert_eq!(ext.section0(&ext.small().identity()), ext.big().identity());
    }

    #[test]
    fn non_square_zero_rejected() {
        assert!(matches!(Extension::new(&preset("z27").unwrap(), 3, Variant::Special, LiftKind::Naive), Err(Error::NotSquareZero)));
    }

    #[test]
    fn dual_numbers_split_over_sylow() {
        let ext = Extension::new(&preset("f3_dual").unwrap(), 3, Variant::Special, LiftKind::Teichmuller).unwrap();
        let h = sylow_unitriangular(&preset("f3").unwrap(), 3).unwrap();
        let d = splitting_decide(&ext, &h).unwrap();
        assert_eq!(d.verdict, SplitVerdict::Split);
        assert_eq!(d.section_checks, 27 * 27);
    }

    #[test]
    fn z4_over_sl3_f2_splits() {
        let ext = Extension::new(&preset("z4").unwrap(), 3, Variant::Special, LiftKind::Teichmuller).unwrap();
        let g = special_linear(ext.small(), 1000).unwrap();
        let d = splitting_decide(&ext, &g).unwrap();
        assert_eq!(d.verdict, SplitVerdict::Split);
        assert_eq!(global_verdict(&d, 168, 2).unwrap(), SplitVerdict::Split);
    }

    #[test]
    fn gaschutz_bookkeeping() {
        let d = SplitDecision { verdict: SplitVerdict::Split, subgroup_order: 4, section: None, section_checks: 0, witness: None };
        assert!(matches!(global_verdict(&d, 168, 2), Err(Error::NotSaturated { .. })));
        let d = SplitDecision { verdict: SplitVerdict::NonSplit, ..d };
        assert_eq!(global_verdict(&d, 168, 2).unwrap(), SplitVerdict::NonSplit);
    }
}
