use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::module::GModule;
use crate::error::{Error, Result};
use crate::groups::GroupTable;
use crate::linalg::{Echelon, Fp, FpMat};

/// Refuse lattices of modules with more than this many vectors.
pub const DEFAULT_VECTOR_CAP: u64 = 1 << 22;

/// Proper nonzero submodules, each given by a reduced echelon basis.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Lattice {
    /// Subspaces stable under the group.
    pub fp: Vec<Vec<Vec<u8>>>,
    /// Subspaces stable under the group and multiplication by `k`.
    pub k: Vec<Vec<Vec<u8>>>,
}

fn encode(v: &[u8], p: u64) -> u64 {
    v.iter().rev().fold(0u64, |acc, x| acc * p + *x as u64)
}

fn decode(mut idx: u64, p: u64, dim: usize) -> Vec<u8> {
    (0..dim)
        .map(|_| {
            let d = (idx % p) as u8;
            idx /= p;
            d
        })
        .collect()
}

fn spin(fp: &Fp, ops: &[FpMat], v: &[u8]) -> Echelon {
    let mut ech = Echelon::new(v.len());
    let mut queue = VecDeque::new();
    if ech.insert(fp, v) {
        queue.push_back(v.to_vec());
    }
    while let Some(w) = queue.pop_front() {
        for a in ops {
            let img = a.mul_vec(fp, &w);
            if ech.insert(fp, &img) {
                queue.push_back(img);
            }
        }
    }
    ech
}

/// Distinct submodules (including 0 and the whole space): cyclic spans of
/// orbit representatives, then pairwise sums until nothing new appears.
fn all_submodules(fp: &Fp, ops: &[FpMat], dim: usize) -> Vec<Echelon> {
    let p = fp.p() as u64;
    let total = p.pow(dim as u32);
    let mut marked = vec![false; total as usize];
    let mut found: Vec<Echelon> = vec![Echelon::new(dim)];
    let mut seen: HashSet<Echelon> = found.iter().cloned().collect();
    for idx in 1..total {
        if marked[idx as usize] {
            continue;
        }
        let v = decode(idx, p, dim);
        // every vector in the orbit of v under the group and scalars spans the same submodule
        let mut queue = VecDeque::from([v.clone()]);
        marked[idx as usize] = true;
        while let Some(w) = queue.pop_front() {
            let mut images: Vec<Vec<u8>> = ops.iter().map(|a| a.mul_vec(fp, &w)).collect();
            for c in 2..p as u8 {
                images.push(w.iter().map(|x| fp.mul(*x, c)).collect());
            }
            for img in images {
                let j = encode(&img, p) as usize;
                if !marked[j] {
                    marked[j] = true;
                    queue.push_back(img);
                }
            }
        }
        let span = spin(fp, ops, &v);
        if seen.insert(span.clone()) {
            found.push(span);
        }
    }
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in found.clone().iter() {
                let s = a.sum(fp, b);
                if seen.insert(s.clone()) {
                    found.push(s.clone());
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    found
}

fn proper(mut subs: Vec<Echelon>, dim: usize) -> Vec<Vec<Vec<u8>>> {
    subs.retain(|e| e.rank() > 0 && e.rank() < dim);
    let mut out: Vec<Vec<Vec<u8>>> = subs.into_iter().map(|e| e.rows().to_vec()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// All proper nonzero submodules of a single-block module, over `F_p` and
/// over `k`.
pub fn submodule_lattice(group: &GroupTable, module: &GModule, cap: u64) -> Result<Lattice> {
    if module.copies() != 1 {
        return Err(Error::Module("lattice of a module with several blocks".into()));
    }
    let dim = module.block_dim();
    let fp = module.fp();
    let needed = (fp.p() as f64).powi(dim as i32);
    if needed > cap as f64 {
        return Err(Error::Budget { needed: needed as u64, budget: cap });
    }
    if dim == 0 {
        return Ok(Lattice { fp: vec![], k: vec![] });
    }
    let mut ops: Vec<FpMat> = group.gens().iter().map(|g| module.action(g)).collect();
    let fp_lattice = proper(all_submodules(fp, &ops, dim), dim);
    let k_lattice = if module.degree() == 1 {
        fp_lattice.clone()
    } else {
        ops.push(module.omega());
        proper(all_submodules(fp, &ops, dim), dim)
    };
    Ok(Lattice { fp: fp_lattice, k: k_lattice })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::module::ModuleKind;
    use crate::groups::special_linear;
    use crate::matrices::MatSpace;
    use crate::rings::preset;

    #[test]
    fn m_over_sl3_f3_contains_scalars() {
        // for p | n the scalars and the trace-zero matrices are submodules of M
        let k = preset("f3").unwrap();
        let space = MatSpace::new(&k, 3).unwrap();
        let g = special_linear(&space, 10_000).unwrap();
        let m = GModule::new(ModuleKind::M, &k, 3, 1).unwrap();
        let lat = submodule_lattice(&g, &m, DEFAULT_VECTOR_CAP).unwrap();
        let scalars = {
            let mut e = Echelon::new(9);
            e.insert(m.fp(), &m.coords(&space.identity()));
            e.rows().to_vec()
        };
        assert!(lat.fp.contains(&scalars));
        assert!(lat.fp.iter().any(|s| s.len() == 8));
        assert_eq!(lat.fp, lat.k);
    }

    #[test]
    fn trivial_module_has_no_proper_submodules() {
        let k = preset("f2").unwrap();
        let g = special_linear(&MatSpace::new(&k, 3).unwrap(), 1000).unwrap();
        let m = GModule::new(ModuleKind::Trivial, &k, 3, 1).unwrap();
        assert!(submodule_lattice(&g, &m, DEFAULT_VECTOR_CAP).unwrap().fp.is_empty());
    }
}
