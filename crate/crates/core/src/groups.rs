//! Finite matrix groups materialized by breadth-first closure under a
//! generating set.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::matrices::{Mat, MatSpace};
use crate::rings::{Elem, Ring};

pub const DEFAULT_CAP: usize = 2_000_000;
const NO_PARENT: u32 = u32::MAX;
const CACHE_MAGIC: &[u8; 4] = b"GTBL";
const CACHE_VERSION: u32 = 1;

/// A group closed under right multiplication by its generators. Element 0 is
/// the identity; `cayley(g, s)` is the index of `g * gens[s]`; the BFS tree
/// gives every element a word in the generators.
#[derive(Clone, Debug)]
pub struct GroupTable {
    space: MatSpace,
    gens: Vec<Mat>,
    elements: Vec<Mat>,
    index: HashMap<u128, u32>,
    cayley: Vec<u32>,
    parent: Vec<u32>,
    parent_gen: Vec<u32>,
}

impl GroupTable {
    pub fn space(&self) -> &MatSpace {
        &self.space
    }

    pub fn ring(&self) -> &Ring {
        self.space.ring()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn gens(&self) -> &[Mat] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn element(&self, i: usize) -> &Mat {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        let key = self.space.key(m)?;
        self.index.get(&key).map(|i| *i as usize)
    }

    #[inline]
    pub fn cayley(&self, g: usize, s: usize) -> usize {
        self.cayley[g * self.gens.len() + s] as usize
    }

    /// `(parent, generator)` with `element(g) = element(parent) * gens[generator]`.
    pub fn parent(&self, g: usize) -> Option<(usize, usize)> {
        (self.parent[g] != NO_PARENT).then(|| (self.parent[g] as usize, self.parent_gen[g] as usize))
    }

    /// Whether the Cayley edge `g --s--> gs` belongs to the spanning tree.
    pub fn is_tree_edge(&self, g: usize, s: usize) -> bool {
        let c = self.cayley(g, s);
        self.parent[c] == g as u32 && self.parent_gen[c] == s as u32
    }

    /// Generator indices whose product, left to right, is `element(g)`.
    pub fn word(&self, mut g: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, s)) = self.parent(g) {
            w.push(s);
            g = p;
        }
        w.reverse();
        w
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.space.mul(&self.elements[a], &self.elements[b])).expect("group closed under multiplication")
    }

    pub fn inverse(&self, a: usize) -> usize {
        let inv = self.space.inv(&self.elements[a]).expect("group elements are invertible");
        self.index_of(&inv).expect("group closed under inverses")
    }

    pub fn contains_all(&self, other: &[Mat]) -> bool {
        other.iter().all(|m| self.index_of(m).is_some())
    }
}

/// BFS closure of `gens` in the given order. Fails with
/// [`Error::ClosureCap`] once more than `cap` elements are found.
pub fn closure(space: &MatSpace, gens: &[Mat], cap: usize) -> Result<GroupTable> {
    let id = space.identity();
    let id_key = space.key(&id).ok_or_else(|| Error::Dimension("matrix encoding does not fit 128 bits".into()))?;
    for g in gens {
        if g.n != space.n() {
            return Err(Error::Dimension(format!("generator is {0}x{0}, expected {1}x{1}", g.n, space.n())));
        }
        space.inv(g)?;
    }
    let ng = gens.len();
    let mut elements = vec![id];
    let mut index = HashMap::new();
    index.insert(id_key, 0u32);
    let mut cayley = Vec::new();
    let mut parent = vec![NO_PARENT];
    let mut parent_gen = vec![NO_PARENT];
    let mut head = 0;
    while head < elements.len() {
        for (s, g) in gens.iter().enumerate() {
            let prod = space.mul(&elements[head], g);
            let key = space.key(&prod).expect("fits");
            let next = elements.len() as u32;
            let idx = *index.entry(key).or_insert(next);
            if idx == next {
                if elements.len() >= cap {
                    return Err(Error::ClosureCap(cap));
                }
                elements.push(prod);
                parent.push(head as u32);
                parent_gen.push(s as u32);
            }
            cayley.push(idx);
        }
        head += 1;
    }
    debug_assert_eq!(cayley.len(), elements.len() * ng);
    Ok(GroupTable { space: space.clone(), gens: gens.to_vec(), elements, index, cayley, parent, parent_gen })
}

/// Elements with a single nonzero coordinate equal to 1: an additive
/// generating set (an `F_p`-basis when the ring is a field).
pub fn additive_basis(ring: &Ring) -> Vec<Elem> {
    (0..ring.coord_len())
        .map(|t| {
            let mut c = vec![0u32; ring.coord_len()];
            c[t] = 1;
            ring.encode(&c)
        })
        .collect()
}

/// `E_ij(b)` for all `i != j` (row-major) and `b` in [`additive_basis`].
pub fn elementary_generators(space: &MatSpace) -> Vec<Mat> {
    let basis = additive_basis(space.ring());
    let n = space.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.extend(basis.iter().map(|b| space.elementary(i, j, *b)));
            }
        }
    }
    out
}

pub fn unitriangular_generators(space: &MatSpace) -> Vec<Mat> {
    let basis = additive_basis(space.ring());
    let n = space.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.extend(basis.iter().map(|b| space.elementary(i, j, *b)));
        }
    }
    out
}

pub fn special_linear(space: &MatSpace, cap: usize) -> Result<GroupTable> {
    closure(space, &elementary_generators(space), cap)
}

/// Upper unitriangular matrices over `k`: a Sylow-`p` subgroup of `SL_n(k)`.
pub fn sylow_unitriangular(k: &Ring, n: usize) -> Result<GroupTable> {
    let space = MatSpace::new(k, n)?;
    closure(&space, &unitriangular_generators(&space), DEFAULT_CAP)
}

/// `|SL_n(F_q)| = q^{n(n-1)/2} prod_{i=2..n} (q^i - 1)`.
pub fn sl_order_field(q: u64, n: u32) -> u64 {
    let mut o = q.pow(n * (n - 1) / 2);
    for i in 2..=n {
        o *= q.pow(i) - 1;
    }
    o
}

/// `|SL_n(R)| = |m|^{n^2 - 1} |SL_n(k)|` for a finite local ring `R`.
pub fn sl_order(ring: &Ring, n: u32) -> u64 {
    let q = ring.residue_order() as u64;
    let m = ring.size() as u64 / q;
    m.pow(n * n - 1) * sl_order_field(q, n)
}

fn fnv64(words: impl Iterator<Item = u32>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Cache key from the ring, the size and a hash of the generator list.
pub fn cache_key(space: &MatSpace, gens: &[Mat]) -> String {
    let ring: String = space.ring().spec().to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    let h = fnv64(gens.iter().flat_map(|g| g.entries.iter().map(|e| e.0)).chain([gens.len() as u32]));
    format!("{}-n{}-{:016x}", ring, space.n(), h)
}

fn put_u32(w: &mut impl Write, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

impl GroupTable {
    /// Little-endian layout: magic, version, key, order, generator count,
    /// then generators, elements, Cayley table, parents and parent generators
    /// as `u32` words.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        put_u32(&mut w, CACHE_VERSION)?;
        let key = cache_key(&self.space, &self.gens);
        put_u32(&mut w, key.len() as u32)?;
        w.write_all(key.as_bytes())?;
        put_u32(&mut w, self.elements.len() as u32)?;
        put_u32(&mut w, self.gens.len() as u32)?;
        for m in self.gens.iter().chain(&self.elements) {
            for e in &m.entries {
                put_u32(&mut w, e.0)?;
            }
        }
        for v in self.cayley.iter().chain(&self.parent).chain(&self.parent_gen) {
            put_u32(&mut w, *v)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Loads a table written by [`GroupTable::save`] for the same space and
    /// generators.
    pub fn load(space: &MatSpace, gens: &[Mat], path: &Path) -> Result<GroupTable> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = get_u32(&mut r)?;
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!("version {} (expected {})", version, CACHE_VERSION)));
        }
        let klen = get_u32(&mut r)? as usize;
        let mut key = vec![0u8; klen];
        r.read_exact(&mut key)?;
        if key != cache_key(space, gens).as_bytes() {
            return Err(Error::Cache("key mismatch".into()));
        }
        let order = get_u32(&mut r)? as usize;
        let ng = get_u32(&mut r)? as usize;
        if ng != gens.len() {
            return Err(Error::Cache("generator count mismatch".into()));
        }
        let nn = space.n() * space.n();
        let read_mat = |r: &mut BufReader<File>| -> Result<Mat> {
            let entries = (0..nn).map(|_| get_u32(r).map(Elem)).collect::<Result<Vec<_>>>()?;
            Ok(Mat { n: space.n(), entries })
        };
        for g in gens {
            if read_mat(&mut r)? != *g {
                return Err(Error::Cache("generator mismatch".into()));
            }
        }
        let elements = (0..order).map(|_| read_mat(&mut r)).collect::<Result<Vec<_>>>()?;
        let mut words = |count: usize| (0..count).map(|_| get_u32(&mut r)).collect::<Result<Vec<u32>>>();
        let cayley = words(order * ng)?;
        let parent = words(order)?;
        let parent_gen = words(order)?;
        let mut index = HashMap::with_capacity(order);
        for (i, m) in elements.iter().enumerate() {
            let key = space.key(m).ok_or_else(|| Error::Cache("matrix encoding does not fit".into()))?;
            index.insert(key, i as u32);
        }
        if index.len() != order || cayley.iter().any(|c| *c as usize >= order) {
            return Err(Error::Cache("corrupt table".into()));
        }
        Ok(GroupTable { space: space.clone(), gens: gens.to_vec(), elements, index, cayley, parent, parent_gen })
    }
}

/// Closure backed by an on-disk cache in `dir`: loads a matching table when
/// present, otherwise computes and stores it.
pub fn closure_cached(space: &MatSpace, gens: &[Mat], cap: usize, dir: &Path) -> Result<GroupTable> {
    let path: PathBuf = dir.join(format!("{}.gtbl", cache_key(space, gens)));
    if path.exists() {
        if let Ok(t) = GroupTable::load(space, gens, &path) {
            return Ok(t);
        }
    }
    let t = closure(space, gens, cap)?;
    std::fs::create_dir_all(dir)?;
    t.save(&path)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::preset;

    #[test]
    fn sl3_f2() {
        let space = MatSpace::new(&preset("f2").unwrap(), 3).unwrap();
        let g = special_linear(&space, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 168);
        assert_eq!(g.order() as u64, sl_order_field(2, 3));
        assert!(space.is_identity(g.element(0)));
        for i in 0..g.order() {
            let w: Vec<Mat> = g.word(i).iter().map(|s| g.gens()[*s].clone()).collect();
            assert_eq!(space.product(&w), *g.element(i));
            for s in 0..g.ngens() {
                assert_eq!(*g.element(g.cayley(i, s)), space.mul(g.element(i), &g.gens()[s]));
            }
        }
    }

    #[test]
    fn trivial_group_and_cap() {
        let space = MatSpace::new(&preset("f3").unwrap(), 3).unwrap();
        assert_eq!(closure(&space, &[space.identity()], 10).unwrap().order(), 1);
        assert!(matches!(special_linear(&space, 100), Err(Error::ClosureCap(100))));
        assert!(closure(&space, &[space.zero()], 10).is_err());
    }

    #[test]
    fn sylow_orders() {
        assert_eq!(sylow_unitriangular(&preset("f2").unwrap(), 3).unwrap().order(), 8);
        assert_eq!(sylow_unitriangular(&preset("f3").unwrap(), 3).unwrap().order(), 27);
        assert_eq!(sylow_unitriangular(&preset("f4").unwrap(), 3).unwrap().order(), 64);
    }

    #[test]
    fn order_formulas() {
        assert_eq!(sl_order_field(3, 3), 5616);
        assert_eq!(sl_order_field(4, 3), 60480);
        assert_eq!(sl_order(&preset("z4").unwrap(), 2), 8 * 6);
    }

    #[test]
    fn small_local_ring_closure() {
        let space = MatSpace::new(&preset("z4").unwrap(), 2).unwrap();
        let g = special_linear(&space, DEFAULT_CAP).unwrap();
        assert_eq!(g.order() as u64, sl_order(space.ring(), 2));
    }
}
