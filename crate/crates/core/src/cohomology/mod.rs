//! Conjugation modules of `SL_n(k)`, their submodules and equivariant maps,
//! first cohomology, and splitting of extensions with abelian kernel.

pub mod extension;
pub mod module;
pub mod propagate;
pub mod submodules;

use serde::Serialize;

pub use extension::{cocycle_table, global_verdict, splitting_decide, Cocycle2, Extension, SplitDecision, SplitVerdict, Variant};
pub use module::{GModule, ModuleKind};
pub use propagate::Infeasibility;
pub use submodules::{submodule_lattice, Lattice};

use crate::error::{Error, Result};
use crate::groups::GroupTable;
use crate::linalg::{Echelon, FpMat};
use crate::matrices::Mat;
use propagate::{Outcome, Problem};

/// Unknown count (`generators x F_p-dimension`) above which `h1_dim` refuses.
pub const DEFAULT_H1_BUDGET: usize = 4096;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct H1 {
    pub z1_fp: usize,
    pub b1_fp: usize,
    pub invariants_fp: usize,
    pub h1_fp: usize,
    /// `h1_fp` divided by the degree of `k` over `F_p`.
    pub h1_k: usize,
}

/// Dimension of the fixed points of `module` under the group generators.
pub fn invariants_dim(group: &GroupTable, module: &GModule) -> usize {
    let fp = module.fp();
    let bd = module.block_dim();
    let mut ech = Echelon::new(bd);
    for g in group.gens() {
        let a = module.action(g).sub(fp, &FpMat::identity(bd));
        for i in 0..bd {
            ech.insert(fp, a.row(i));
        }
    }
    (bd - ech.rank()) * module.copies()
}

/// `dim H^1(group, module)` via crossed-homomorphism propagation over the
/// group's Cayley graph: `H^1 = Z^1 - (dim M - dim M^G)`.
pub fn h1_dim(group: &GroupTable, module: &GModule, budget: usize) -> Result<H1> {
    let unknowns = group.ngens() * module.dim();
    if unknowns > budget {
        return Err(Error::Budget { needed: unknowns as u64, budget: budget as u64 });
    }
    let act = |g: &Mat| module.action(g);
    let problem = Problem {
        group,
        fp: module.fp().clone(),
        block_dim: module.block_dim(),
        copies: module.copies(),
        action: &act,
        constant: None,
    };
    let z1 = match propagate::solve(&problem) {
        Outcome::Solved(s) => s.free,
        Outcome::Infeasible(_) => return Err(Error::Unsolvable("homogeneous crossed-hom system".into())),
    };
    let inv = invariants_dim(group, module);
    let b1 = module.dim() - inv;
    let h1 = z1 - b1;
    Ok(H1 { z1_fp: z1, b1_fp: b1, invariants_fp: inv, h1_fp: h1, h1_k: h1 / module.degree() })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HomDims {
    /// `F_p`-linear equivariant maps.
    pub fp_linear: usize,
    /// `k`-linear equivariant maps, as an `F_p`-dimension.
    pub k_linear_fp: usize,
    pub k: usize,
}

/// Kernel dimension of `X -> (X A_i - B_i X)_i` on `dst x src` matrices.
fn intertwiner_dim(fp: &crate::linalg::Fp, pairs: &[(FpMat, FpMat)], sd: usize, dd: usize) -> usize {
    let unknowns = dd * sd;
    let mut ech = Echelon::new(unknowns);
    for (a, b) in pairs {
        for r in 0..dd {
            for c in 0..sd {
                let mut row = vec![0u8; unknowns];
                // (X A)_{rc} = sum_t X_{rt} A_{tc}
                for t in 0..sd {
                    let v = a.get(t, c);
                    if v != 0 {
                        row[r * sd + t] = fp.add(row[r * sd + t], v);
                    }
                }
                // (B X)_{rc} = sum_t B_{rt} X_{tc}
                for t in 0..dd {
                    let v = b.get(r, t);
                    if v != 0 {
                        row[t * sd + c] = fp.sub(row[t * sd + c], v);
                    }
                }
                ech.insert(fp, &row);
            }
        }
    }
    unknowns - ech.rank()
}

/// Dimension of `Hom_G(src, dst)`, with `G` given by its generators.
pub fn equivariant_hom_dim(group: &GroupTable, src: &GModule, dst: &GModule) -> Result<HomDims> {
    if src.field() != dst.field() || src.n() != dst.n() {
        return Err(Error::Module("modules over different fields or sizes".into()));
    }
    let fp = src.fp();
    let (sd, dd) = (src.block_dim(), dst.block_dim());
    let mut pairs: Vec<(FpMat, FpMat)> = group.gens().iter().map(|g| (src.action(g), dst.action(g))).collect();
    let fp_linear = intertwiner_dim(fp, &pairs, sd, dd);
    pairs.push((src.omega(), dst.omega()));
    let k_linear_fp = intertwiner_dim(fp, &pairs, sd, dd);
    Ok(HomDims { fp_linear, k_linear_fp, k: k_linear_fp / src.degree() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::special_linear;
    use crate::matrices::MatSpace;
    use crate::rings::preset;

    #[test]
    fn h1_of_sl3_f2() {
        let k = preset("f2").unwrap();
        let g = special_linear(&MatSpace::new(&k, 3).unwrap(), 1000).unwrap();
        let m = GModule::new(ModuleKind::M, &k, 3, 1).unwrap();
        let h = h1_dim(&g, &m, DEFAULT_H1_BUDGET).unwrap();
        assert_eq!(h.b1_fp + h.invariants_fp, 9);
        assert!(h1_dim(&g, &m, 10).is_err());
    }

    #[test]
    fn hom_dims_over_f2() {
        let k = preset("f2").unwrap();
        let g = special_linear(&MatSpace::new(&k, 3).unwrap(), 1000).unwrap();
        let m0 = GModule::new(ModuleKind::M0, &k, 3, 1).unwrap();
        let triv = GModule::new(ModuleKind::Trivial, &k, 3, 1).unwrap();
        assert_eq!(equivariant_hom_dim(&g, &m0, &m0).unwrap().k, 1);
        assert_eq!(equivariant_hom_dim(&g, &m0, &triv).unwrap().k, 0);
    }
}
