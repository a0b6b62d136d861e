//! Solves for maps `phi` on a group table with `phi(1) = 0` and
//! `phi(g s) = phi(g) + g . phi(s) + c(g, s)` on every Cayley edge, where the
//! unknowns are the values `phi(s)` on the generators.
//!
//! Values are propagated along the BFS tree as affine functions `L_g z + b_g`
//! of a parameter vector `z`; every non-tree edge adds linear constraints on
//! `z`. Constraints are collected in echelon form and periodically
//! substituted back, shrinking `z` to the solution space found so far.

use rayon::prelude::*;
use serde::Serialize;

use crate::groups::GroupTable;
use crate::linalg::{Echelon, Fp, FpMat};
use crate::matrices::Mat;

/// Rank evidence that the system has no solution, with the Cayley edge
/// `element --generator-->` whose constraint exposed it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Infeasibility {
    pub rank: usize,
    pub augmented_rank: usize,
    pub element: usize,
    pub generator: usize,
}

#[derive(Clone, Debug)]
pub struct Solved {
    /// Dimension of the affine space of admissible generator values.
    pub free: usize,
    /// A particular solution, `dim` entries per group element.
    pub values: Vec<u8>,
    pub dim: usize,
}

impl Solved {
    pub fn value(&self, g: usize) -> &[u8] {
        &self.values[g * self.dim..(g + 1) * self.dim]
    }
}

pub enum Outcome {
    Solved(Solved),
    Infeasible(Infeasibility),
}

/// Problem data: the group, a per-block action, the number of blocks and an
/// optional inhomogeneous term `c(g, s)`.
pub struct Problem<'a> {
    pub group: &'a GroupTable,
    pub fp: Fp,
    pub block_dim: usize,
    pub copies: usize,
    pub action: &'a (dyn Fn(&Mat) -> FpMat + Sync),
    pub constant: Option<&'a (dyn Fn(usize, usize) -> Vec<u8> + Sync)>,
}

struct Affine {
    l: Vec<u8>,
    b: Vec<u8>,
}

struct State<'a> {
    fp: &'a Fp,
    dim: usize,
    f: usize,
}

impl State<'_> {
    /// Substitutes `z = K' z' + z0'` described by the reduced rows of `ech`
    /// (each row `[a | beta]` meaning `a . z = beta`) into `l` (rows of
    /// length `f`) and `b`.
    fn substitute(&self, ech: &Echelon, free: &[usize], l: &[u8], rows: usize, b: &mut [u8]) -> Vec<u8> {
        let fp = self.fp;
        let f = self.f;
        let pivots: Vec<usize> = ech.rows().iter().map(|r| r.iter().position(|x| *x != 0).expect("nonzero row")).collect();
        let nf = free.len();
        let mut out = vec![0u8; rows * nf];
        for i in 0..rows {
            let row = &l[i * f..(i + 1) * f];
            let dst = &mut out[i * nf..(i + 1) * nf];
            for (c2, &c) in free.iter().enumerate() {
                dst[c2] = row[c];
            }
            for (er, &pc) in ech.rows().iter().zip(&pivots) {
                let coef = row[pc];
                if coef == 0 {
                    continue;
                }
                for (c2, &c) in free.iter().enumerate() {
                    let a = er[c];
                    if a != 0 {
                        dst[c2] = fp.sub(dst[c2], fp.mul(coef, a));
                    }
                }
                b[i] = fp.add(b[i], fp.mul(coef, er[f]));
            }
        }
        out
    }
}

fn free_columns(ech: &Echelon, f: usize) -> Vec<usize> {
    let pivots: Vec<usize> = ech.rows().iter().map(|r| r.iter().position(|x| *x != 0).expect("nonzero row")).collect();
    (0..f).filter(|c| !pivots.contains(c)).collect()
}

/// `out = l + A k_s` where `A` is block diagonal with `copies` blocks.
fn apply_action(fp: &Fp, a: &FpMat, copies: usize, k_s: &[u8], f: usize, out: &mut [u8]) {
    let bd = a.rows;
    let p = fp.p();
    let mut acc = vec![0u32; f];
    for c in 0..copies {
        for i in 0..bd {
            acc.iter_mut().for_each(|x| *x = 0);
            let mut any = false;
            for t in 0..bd {
                let coef = a.get(i, t) as u32;
                if coef == 0 {
                    continue;
                }
                any = true;
                let src = &k_s[(c * bd + t) * f..(c * bd + t + 1) * f];
                for (x, s) in acc.iter_mut().zip(src) {
                    *x += coef * *s as u32;
                }
            }
            if any {
                let dst = &mut out[(c * bd + i) * f..(c * bd + i + 1) * f];
                for (d, x) in dst.iter_mut().zip(&acc) {
                    *d = ((*d as u32 + x) % p) as u8;
                }
            }
        }
    }
}

fn mat_vec_blocks(fp: &Fp, a: &FpMat, copies: usize, v: &[u8]) -> Vec<u8> {
    let bd = a.rows;
    let mut out = Vec::with_capacity(v.len());
    for c in 0..copies {
        out.extend(a.mul_vec(fp, &v[c * bd..(c + 1) * bd]));
    }
    out
}

pub fn solve(problem: &Problem) -> Outcome {
    let group = problem.group;
    let fp = &problem.fp;
    let dim = problem.block_dim * problem.copies;
    let ng = group.ngens();
    let order = group.order();

    let actions: Vec<FpMat> = group.elements().par_iter().map(|g| (problem.action)(g)).collect();

    let total = ng * dim;
    let mut st = State { fp, dim, f: total };
    // u = K z + u0, with K stored row-major (total x f)
    let mut k = FpMat::identity(total).data;
    let mut u0 = vec![0u8; total];
    let mut vals: Vec<Option<Affine>> = (0..order).map(|_| None).collect();
    vals[0] = Some(Affine { l: vec![0u8; dim * total], b: vec![0u8; dim] });
    let mut stored = 1usize;
    let mut stored_at_last = 1usize;
    let mut ech = Echelon::new(total + 1);
    let mut settled = 0usize;

    let reparam = |st: &mut State, ech: &mut Echelon, k: &mut Vec<u8>, u0: &mut Vec<u8>, vals: &mut Vec<Option<Affine>>| {
        let free = free_columns(ech, st.f);
        *k = st.substitute(ech, &free, k, total, u0);
        for a in vals.iter_mut().flatten() {
            a.l = st.substitute(ech, &free, &a.l, st.dim, &mut a.b);
        }
        st.f = free.len();
        *ech = Echelon::new(st.f + 1);
    };

    for g in 0..order {
        for s in 0..ng {
            let h = group.cayley(g, s);
            let f = st.f;
            let cur = vals[g].as_ref().expect("BFS order reaches parents first");
            let mut cand_l = cur.l.clone();
            apply_action(fp, &actions[g], problem.copies, &k[s * dim * f..(s + 1) * dim * f], f, &mut cand_l);
            let mut cand_b = fp.add_vec(&cur.b, &mat_vec_blocks(fp, &actions[g], problem.copies, &u0[s * dim..(s + 1) * dim]));
            if let Some(c) = problem.constant {
                let cv = c(g, s);
                // phi(1 s) = phi(1) + phi(s) + c(1, s) forces c(1, s) = 0
                if g == 0 && cv.iter().any(|x| *x != 0) {
                    return Outcome::Infeasible(Infeasibility { rank: 0, augmented_rank: 1, element: g, generator: s });
                }
                cand_b = fp.add_vec(&cand_b, &cv);
            }
            if group.is_tree_edge(g, s) {
                vals[h] = Some(Affine { l: cand_l, b: cand_b });
                stored += 1;
                continue;
            }
            let target = vals[h].as_ref().expect("tree edge precedes other edges into an element");
            for i in 0..dim {
                let mut row = Vec::with_capacity(f + 1);
                row.extend(target.l[i * f..(i + 1) * f].iter().zip(&cand_l[i * f..(i + 1) * f]).map(|(a, b)| fp.sub(*a, *b)));
                row.push(fp.sub(cand_b[i], target.b[i]));
                ech.reduce(fp, &mut row);
                if row[..f].iter().all(|x| *x == 0) {
                    if row[f] != 0 {
                        let rank = settled + ech.rank();
                        return Outcome::Infeasible(Infeasibility { rank, augmented_rank: rank + 1, element: g, generator: s });
                    }
                    continue;
                }
                ech.insert(fp, &row);
            }
        }
        if ech.rank() > 0 && (4 * ech.rank() >= st.f || stored >= 2 * stored_at_last) {
            settled += ech.rank();
            reparam(&mut st, &mut ech, &mut k, &mut u0, &mut vals);
            stored_at_last = stored;
        }
    }
    if ech.rank() > 0 {
        reparam(&mut st, &mut ech, &mut k, &mut u0, &mut vals);
    }
    let mut values = Vec::with_capacity(order * dim);
    for a in &vals {
        values.extend_from_slice(&a.as_ref().expect("all elements reached").b);
    }
    Outcome::Solved(Solved { free: st.f, values, dim })
}
