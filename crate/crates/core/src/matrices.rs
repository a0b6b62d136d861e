//! Dense square matrices over a [`Ring`], elementary matrices and the signed
//! permutation matrices `(rs)`, `D_r` and `T_ij`.
//!
//! Indices are 0-based throughout: `E_ij(x)` with `i, j` in `0..n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rings::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat {
    pub n: usize,
    pub entries: Vec<Elem>,
}

impl Mat {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.entries[i * self.n + j] = x;
    }
}

/// One factor `E_ij(x)` of an elementary-matrix word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemMove {
    pub i: usize,
    pub j: usize,
    pub x: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignedPerm {
    /// `(rs)`: the identity with rows `r` and `s` swapped.
    Transposition(usize, usize),
    /// `D_r`: the identity with `-1` at `(r, r)`.
    Sign(usize),
    /// `T_ij`, conjugating `E_{0,n-1}(x)` to `E_ij(x)`.
    Tij(usize, usize),
}

/// `n x n` matrices over a fixed ring.
#[derive(Clone, Debug)]
pub struct MatSpace {
    ring: Ring,
    n: usize,
    key_fits: bool,
}

impl MatSpace {
    pub fn new(ring: &Ring, n: usize) -> Result<MatSpace> {
        if n < 2 {
            return Err(Error::Dimension(format!("matrices need n >= 2, got {}", n)));
        }
        let key_fits = (ring.size() as f64).log2() * (n * n) as f64 <= 127.0;
        Ok(MatSpace { ring: ring.clone(), n, key_fits })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> Mat {
        Mat { n: self.n, entries: vec![self.ring.zero(); self.n * self.n] }
    }

    pub fn identity(&self) -> Mat {
        self.scalar(self.ring.one())
    }

    pub fn scalar(&self, x: Elem) -> Mat {
        let mut m = self.zero();
        for i in 0..self.n {
            m.set(i, i, x);
        }
        m
    }

    pub fn diag(&self, d: &[Elem]) -> Mat {
        let mut m = self.zero();
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, *x);
        }
        m
    }

    pub fn from_ints(&self, rows: &[&[i64]]) -> Mat {
        let mut m = self.zero();
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, self.ring.from_int(*v));
            }
        }
        m
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n || i == j {
            return Err(Error::Index(format!("({}, {}) for n = {}", i, j, self.n)));
        }
        Ok(())
    }

    /// `E_ij(x)`; panics on `i == j` or out-of-range indices.
    pub fn elementary(&self, i: usize, j: usize, x: Elem) -> Mat {
        self.check_index(i, j).expect("elementary matrix index");
        let mut m = self.identity();
        m.set(i, j, x);
        m
    }

    pub fn elementary_move(&self, mv: &ElemMove) -> Mat {
        self.elementary(mv.i, mv.j, mv.x)
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let n = self.n;
        let r = &self.ring;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = r.zero();
                for k in 0..n {
                    let x = a.entries[i * n + k];
                    if x.0 != 0 {
                        acc = r.add(acc, r.mul(x, b.entries[k * n + j]));
                    }
                }
                out.push(acc);
            }
        }
        Mat { n, entries: out }
    }

    pub fn add(&self, a: &Mat, b: &Mat) -> Mat {
        Mat { n: self.n, entries: a.entries.iter().zip(&b.entries).map(|(x, y)| self.ring.add(*x, *y)).collect() }
    }

    pub fn sub(&self, a: &Mat, b: &Mat) -> Mat {
        Mat { n: self.n, entries: a.entries.iter().zip(&b.entries).map(|(x, y)| self.ring.sub(*x, *y)).collect() }
    }

    pub fn scale(&self, c: Elem, a: &Mat) -> Mat {
        Mat { n: self.n, entries: a.entries.iter().map(|x| self.ring.mul(c, *x)).collect() }
    }

    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a Mat>) -> Mat {
        factors.into_iter().fold(self.identity(), |acc, m| self.mul(&acc, m))
    }

    pub fn word_product(&self, word: &[ElemMove]) -> Mat {
        word.iter().fold(self.identity(), |acc, mv| self.mul(&acc, &self.elementary_move(mv)))
    }

    pub fn trace(&self, a: &Mat) -> Elem {
        (0..self.n).fold(self.ring.zero(), |acc, i| self.ring.add(acc, a.get(i, i)))
    }

    /// Determinant by unit-pivot elimination, falling back to cofactor
    /// expansion when a column has no unit pivot.
    pub fn det(&self, a: &Mat) -> Elem {
        let r = &self.ring;
        let n = self.n;
        let mut m = a.clone();
        let mut acc = r.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|i| r.is_unit(m.get(*i, c))) else {
                return self.det_cofactor(a);
            };
            if piv != c {
                for j in 0..n {
                    m.entries.swap(piv * n + j, c * n + j);
                }
                acc = r.neg(acc);
            }
            let pv = m.get(c, c);
            acc = r.mul(acc, pv);
            let inv = r.inv(pv).expect("unit pivot");
            for i in c + 1..n {
                let f = r.mul(m.get(i, c), inv);
                if f.0 == 0 {
                    continue;
                }
                for j in c..n {
                    let v = r.sub(m.get(i, j), r.mul(f, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        acc
    }

    /// Laplace expansion along the first row.
    pub fn det_cofactor(&self, a: &Mat) -> Elem {
        let idx: Vec<usize> = (0..self.n).collect();
        self.cofactor_rec(a, 0, &idx)
    }

    fn cofactor_rec(&self, a: &Mat, row: usize, cols: &[usize]) -> Elem {
        let r = &self.ring;
        if cols.len() == 1 {
            return a.get(row, cols[0]);
        }
        let mut acc = r.zero();
        for (k, &c) in cols.iter().enumerate() {
            let x = a.get(row, c);
            if x.0 == 0 {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|cc| *cc != c).collect();
            let term = r.mul(x, self.cofactor_rec(a, row + 1, &rest));
            acc = if k % 2 == 0 { r.add(acc, term) } else { r.sub(acc, term) };
        }
        acc
    }

    pub fn inv(&self, a: &Mat) -> Result<Mat> {
        let r = &self.ring;
        let n = self.n;
        let mut m = a.clone();
        let mut out = self.identity();
        for c in 0..n {
            let piv = (c..n).find(|i| r.is_unit(m.get(*i, c))).ok_or(Error::NotInvertible)?;
            if piv != c {
                for j in 0..n {
                    m.entries.swap(piv * n + j, c * n + j);
                    out.entries.swap(piv * n + j, c * n + j);
                }
            }
            let inv = r.inv(m.get(c, c)).expect("unit pivot");
            for j in 0..n {
                m.set(c, j, r.mul(inv, m.get(c, j)));
                out.set(c, j, r.mul(inv, out.get(c, j)));
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = m.get(i, c);
                if f.0 == 0 {
                    continue;
                }
                for j in 0..n {
                    m.set(i, j, r.sub(m.get(i, j), r.mul(f, m.get(c, j))));
                    out.set(i, j, r.sub(out.get(i, j), r.mul(f, out.get(c, j))));
                }
            }
        }
        Ok(out)
    }

    /// `a b a^-1 b^-1`
    pub fn commutator(&self, a: &Mat, b: &Mat) -> Result<Mat> {
        let ai = self.inv(a)?;
        let bi = self.inv(b)?;
        Ok(self.product([a, b, &ai, &bi]))
    }

    /// `x a x^-1`
    pub fn conjugate(&self, x: &Mat, a: &Mat) -> Result<Mat> {
        let xi = self.inv(x)?;
        Ok(self.product([x, a, &xi]))
    }

    pub fn is_identity(&self, a: &Mat) -> bool {
        *a == self.identity()
    }

    /// Packs the entries into a single integer (mixed radix `|ring|`).
    pub fn key(&self, a: &Mat) -> Option<u128> {
        if !self.key_fits {
            return None;
        }
        let base = self.ring.size() as u128;
        Some(a.entries.iter().rev().fold(0u128, |acc, e| acc * base + e.0 as u128))
    }

    pub fn from_key(&self, mut key: u128) -> Mat {
        let base = self.ring.size() as u128;
        let mut entries = Vec::with_capacity(self.n * self.n);
        for _ in 0..self.n * self.n {
            entries.push(Elem((key % base) as u32));
            key /= base;
        }
        Mat { n: self.n, entries }
    }

    /// Entrywise image under a map of rings.
    pub fn map(&self, a: &Mat, f: impl Fn(Elem) -> Elem) -> Mat {
        Mat { n: a.n, entries: a.entries.iter().map(|x| f(*x)).collect() }
    }

    pub fn transposition(&self, r: usize, s: usize) -> Mat {
        let mut m = self.identity();
        let (one, zero) = (self.ring.one(), self.ring.zero());
        m.set(r, r, zero);
        m.set(s, s, zero);
        m.set(r, s, one);
        m.set(s, r, one);
        m
    }

    pub fn sign(&self, r: usize) -> Mat {
        let mut m = self.identity();
        m.set(r, r, self.ring.neg(self.ring.one()));
        m
    }

    pub fn signed_perm(&self, kind: SignedPerm) -> Result<Mat> {
        match kind {
            SignedPerm::Transposition(r, s) => {
                self.check_index(r, s)?;
                Ok(self.transposition(r, s))
            }
            SignedPerm::Sign(r) => {
                if r >= self.n {
                    return Err(Error::Index(format!("{} for n = {}", r, self.n)));
                }
                Ok(self.sign(r))
            }
            SignedPerm::Tij(i, j) => self.build_tij(i, j),
        }
    }

    /// The signed permutation matrix `T_ij` of determinant 1 with
    /// `T_ij E_{0,n-1}(x) T_ij^-1 = E_ij(x)`:
    ///
    /// | case                              | `T_ij`               |
    /// |-----------------------------------|----------------------|
    /// | `(i, j) = (0, n-1)`               | `I`                  |
    /// | `(i, j) = (n-1, 0)`               | `D_1 (0 n-1)`        |
    /// | `i = 0`, `j != n-1`               | `D_{n-1} (j n-1)`    |
    /// | `i != 0`, `j = n-1`               | `D_0 (0 i)`          |
    /// | `j = 0`, `i != n-1`               | `(n-1 0)(0 i)`       |
    /// | otherwise                         | `(0 i)(n-1 j)`       |
    ///
    /// The `j = 0` row needs the factors in this order: `(0 i)(n-1 0)` sends
    /// `E_{0,n-1}(x)` to `E_{n-1,i}(x)`.
    pub fn build_tij(&self, i: usize, j: usize) -> Result<Mat> {
        self.check_index(i, j)?;
        let last = self.n - 1;
        let m = if (i, j) == (0, last) {
            self.identity()
        } else if (i, j) == (last, 0) {
            self.mul(&self.sign(1), &self.transposition(0, last))
        } else if i == 0 {
            self.mul(&self.sign(last), &self.transposition(j, last))
        } else if j == last {
            self.mul(&self.sign(0), &self.transposition(0, i))
        } else if j == 0 {
            self.mul(&self.transposition(last, 0), &self.transposition(0, i))
        } else {
            self.mul(&self.transposition(0, i), &self.transposition(last, j))
        };
        Ok(m)
    }

    pub fn format(&self, a: &Mat) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let cells: Vec<String> = (0..self.n).map(|j| self.ring.format_elem(a.get(i, j))).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    /// Parses the row-major bracketed form produced by [`MatSpace::format`].
    pub fn parse(&self, s: &str) -> Result<Mat> {
        let bad = |why: &str| Error::Parse(format!("matrix literal: {}", why));
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| bad(&e.to_string()))?;
        let rows = v.as_array().ok_or_else(|| bad("expected a list of rows"))?;
        if rows.len() != self.n {
            return Err(bad("wrong number of rows"));
        }
        let mut m = self.zero();
        for (i, row) in rows.iter().enumerate() {
            let cells = row.as_array().filter(|c| c.len() == self.n).ok_or_else(|| bad("wrong row length"))?;
            for (j, cell) in cells.iter().enumerate() {
                m.set(i, j, self.ring.parse_elem(&cell.to_string().replace(' ', ""))?);
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::preset;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat(ms: &MatSpace, rng: &mut ChaCha8Rng) -> Mat {
        let size = ms.ring().size();
        Mat { n: ms.n(), entries: (0..ms.n() * ms.n()).map(|_| Elem(rng.gen_range(0..size))).collect() }
    }

    #[test]
    fn determinant_examples() {
        let ms = MatSpace::new(&preset("z9").unwrap(), 3).unwrap();
        let r = ms.ring().clone();
        assert_eq!(ms.det(&ms.identity()), r.one());
        for x in r.elements() {
            assert_eq!(ms.det(&ms.elementary(0, 1, x)), r.one());
        }
        assert_eq!(ms.det(&ms.sign(0)), r.neg(r.one()));
        assert_eq!(ms.det(&ms.transposition(0, 2)), r.neg(r.one()));
    }

    #[test]
    fn det_paths_agree_and_multiply() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for key in ["z9", "gr4_2", "f3_dual", "bc_ring"] {
            let r = preset(key).unwrap();
            for n in 2..=4 {
                let ms = MatSpace::new(&r, n).unwrap();
                for _ in 0..250 {
                    let a = random_mat(&ms, &mut rng);
                    let b = random_mat(&ms, &mut rng);
                    assert_eq!(ms.det(&a), ms.det_cofactor(&a));
                    assert_eq!(ms.det(&ms.mul(&a, &b)), r.mul(ms.det(&a), ms.det(&b)));
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ms = MatSpace::new(&preset("gr4_2").unwrap(), 3).unwrap();
        let mut inverted = 0;
        for _ in 0..500 {
            let a = random_mat(&ms, &mut rng);
            match ms.inv(&a) {
                Ok(b) => {
                    inverted += 1;
                    assert!(ms.is_identity(&ms.mul(&a, &b)));
                    assert!(ms.is_identity(&ms.mul(&b, &a)));
                }
                Err(Error::NotInvertible) => assert!(!ms.ring().is_unit(ms.det(&a))),
                Err(e) => panic!("{}", e),
            }
        }
        assert!(inverted > 0);
    }

    #[test]
    fn tij_case_table() {
        let ms = MatSpace::new(&preset("z9").unwrap(), 4).unwrap();
        assert_eq!(ms.build_tij(0, 3).unwrap(), ms.identity());
        assert_eq!(ms.build_tij(3, 0).unwrap(), ms.mul(&ms.sign(1), &ms.transposition(0, 3)));
        // (i, j) = (2, 3) in 1-based terms, n = 4: (12)(43)
        assert_eq!(ms.build_tij(1, 2).unwrap(), ms.mul(&ms.transposition(0, 1), &ms.transposition(3, 2)));
        assert!(ms.build_tij(1, 1).is_err());
        assert!(ms.build_tij(0, 4).is_err());
    }

    #[test]
    fn tij_has_determinant_one() {
        for key in ["z9", "gr4_2", "f2"] {
            let r = preset(key).unwrap();
            for n in 3..=5 {
                let ms = MatSpace::new(&r, n).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            assert_eq!(ms.det(&ms.build_tij(i, j).unwrap()), r.one(), "T_{}{} n={}", i, j, n);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn key_and_literal_round_trip() {
        let ms = MatSpace::new(&preset("gr4_2").unwrap(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a = random_mat(&ms, &mut rng);
            assert_eq!(ms.from_key(ms.key(&a).unwrap()), a);
            assert_eq!(ms.parse(&ms.format(&a)).unwrap(), a);
        }
        let z = MatSpace::new(&preset("z9").unwrap(), 2).unwrap();
        assert_eq!(z.format(&z.identity()), "[[1,0],[0,1]]");
        assert!(z.parse("[[1,0]]").is_err());
    }
}
