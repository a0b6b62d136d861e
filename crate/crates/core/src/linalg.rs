//! Dense linear algebra over a prime field `F_p` with byte-sized entries.

use serde::Serialize;

/// Arithmetic context for `F_p`, `p < 256`.
#[derive(Clone, Debug)]
pub struct Fp {
    p: u8,
    inv: Vec<u8>,
}

impl Fp {
    pub fn new(p: u32) -> Fp {
        assert!((2..256).contains(&p), "prime {} out of range", p);
        let p8 = p as u8;
        let mut inv = vec![0u8; p as usize];
        for a in 1..p {
            for b in 1..p {
                if a * b % p == 1 {
                    inv[a as usize] = b as u8;
                }
            }
        }
        Fp { p: p8, inv }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p as u32
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    /// `dst += c * src`
    #[inline]
    pub fn axpy(&self, dst: &mut [u8], c: u8, src: &[u8]) {
        if c == 0 {
            return;
        }
        let p = self.p as u16;
        for (d, s) in dst.iter_mut().zip(src) {
            *d = ((*d as u16 + c as u16 * *s as u16) % p) as u8;
        }
    }

    pub fn scale_in_place(&self, v: &mut [u8], c: u8) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    pub fn add_vec(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(x, y)| self.add(*x, *y)).collect()
    }

    pub fn sub_vec(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(x, y)| self.sub(*x, *y)).collect()
    }
}

/// Row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FpMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl FpMat {
    pub fn zeros(rows: usize, cols: usize) -> FpMat {
        FpMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> FpMat {
        let mut m = FpMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> FpMat {
        let mut m = FpMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.row_mut(i).copy_from_slice(r);
        }
        m
    }

    pub fn from_columns(columns: &[Vec<u8>], rows: usize) -> FpMat {
        let mut m = FpMat::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for i in 0..rows {
                m.data[i * m.cols + j] = c[i];
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u8] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0)
    }

    pub fn mul(&self, fp: &Fp, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        let mut out = FpMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                fp.axpy(dst, self.get(i, k), other.row(k));
            }
        }
        out
    }

    pub fn mul_vec(&self, fp: &Fp, v: &[u8]) -> Vec<u8> {
        assert_eq!(self.cols, v.len());
        let p = fp.p();
        (0..self.rows)
            .map(|i| {
                let acc: u32 = self.row(i).iter().zip(v).map(|(a, b)| *a as u32 * *b as u32).sum();
                (acc % p) as u8
            })
            .collect()
    }

    pub fn sub(&self, fp: &Fp, other: &FpMat) -> FpMat {
        FpMat { rows: self.rows, cols: self.cols, data: fp.sub_vec(&self.data, &other.data) }
    }

    pub fn transpose(&self) -> FpMat {
        let mut t = FpMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Reduces in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, fp: &Fp) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|i| self.get(*i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = fp.inv(self.get(r, c));
            fp.scale_in_place(self.row_mut(r), inv);
            let pivot_row = self.row(r).to_vec();
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c);
                    if f != 0 {
                        fp.axpy(self.row_mut(i), fp.neg(f), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, fp: &Fp) -> usize {
        self.clone().rref(fp).len()
    }

    /// Basis of the right null space, as the columns of a `cols x nullity` matrix.
    pub fn kernel(&self, fp: &Fp) -> FpMat {
        let mut m = self.clone();
        let pivots = m.rref(fp);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMat::zeros(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k.set(f, idx, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                k.set(pc, idx, fp.neg(m.get(r, f)));
            }
        }
        k
    }
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug)]
pub enum Solution {
    /// A particular solution and a kernel basis (columns).
    Affine { particular: Vec<u8>, kernel: FpMat },
    /// `rank(A) < rank([A | b])`.
    Inconsistent { rank: usize, augmented_rank: usize },
}

pub fn solve(fp: &Fp, a: &FpMat, b: &[u8]) -> Solution {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let mut aug = FpMat::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        aug.row_mut(i)[..n].copy_from_slice(a.row(i));
        aug.set(i, n, b[i]);
    }
    let pivots = aug.rref(fp);
    if pivots.last() == Some(&n) {
        return Solution::Inconsistent { rank: pivots.len() - 1, augmented_rank: pivots.len() };
    }
    let mut particular = vec![0u8; n];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug.get(r, n);
    }
    Solution::Affine { particular, kernel: a.kernel(fp) }
}

/// An incrementally maintained reduced echelon basis of a subspace of `F_p^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Echelon {
    pub dim: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Reduces `v` against the basis in place.
    pub fn reduce(&self, fp: &Fp, v: &mut [u8]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                fp.axpy(v, fp.neg(c), row);
            }
        }
    }

    pub fn contains(&self, fp: &Fp, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(fp, &mut w);
        w.iter().all(|x| *x == 0)
    }

    /// Inserts `v`; returns `true` if the span grew. Keeps the basis fully reduced.
    pub fn insert(&mut self, fp: &Fp, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(fp, &mut w);
        let Some(pc) = w.iter().position(|x| *x != 0) else {
            return false;
        };
        let inv = fp.inv(w[pc]);
        fp.scale_in_place(&mut w, inv);
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                fp.axpy(row, fp.neg(c), &w);
            }
        }
        let pos = self.pivots.iter().position(|p| *p > pc).unwrap_or(self.pivots.len());
        self.rows.insert(pos, w);
        self.pivots.insert(pos, pc);
        true
    }

    pub fn is_subspace_of(&self, fp: &Fp, other: &Echelon) -> bool {
        self.rows.iter().all(|r| other.contains(fp, r))
    }

    pub fn sum(&self, fp: &Fp, other: &Echelon) -> Echelon {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(fp, r);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_and_solve() {
        let fp = Fp::new(3);
        // x + y + z = 0 over F_3
        let a = FpMat::from_rows(&[vec![1, 1, 1]], 3);
        let k = a.kernel(&fp);
        assert_eq!(k.cols, 2);
        assert!(a.mul(&fp, &k).is_zero());
        match solve(&fp, &a, &[2]) {
            Solution::Affine { particular, .. } => assert_eq!(a.mul_vec(&fp, &particular), vec![2]),
            _ => panic!(),
        }
        let inconsistent = FpMat::from_rows(&[vec![1, 1], vec![2, 2]], 2);
        assert!(matches!(
            solve(&fp, &inconsistent, &[1, 1]),
            Solution::Inconsistent { rank: 1, augmented_rank: 2 }
        ));
    }

    #[test]
    fn echelon_tracks_span() {
        let fp = Fp::new(2);
        let mut e = Echelon::new(3);
        assert!(e.insert(&fp, &[1, 1, 0]));
        assert!(e.insert(&fp, &[0, 1, 1]));
        assert!(!e.insert(&fp, &[1, 0, 1]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&fp, &[1, 0, 1]));
        assert!(!e.contains(&fp, &[1, 0, 0]));
    }

    proptest! {
        #[test]
        fn rank_nullity(p in prop::sample::select(vec![2u32, 3, 5]), rows in 1usize..6, cols in 1usize..7, seed in proptest::collection::vec(0u8..255, 42)) {
            let fp = Fp::new(p);
            let data: Vec<u8> = seed.iter().take(rows * cols).map(|x| x % p as u8).chain(std::iter::repeat(0)).take(rows * cols).collect();
            let a = FpMat { rows, cols, data };
            let k = a.kernel(&fp);
            prop_assert_eq!(a.rank(&fp) + k.cols, cols);
            prop_assert!(a.mul(&fp, &k).is_zero());
            prop_assert_eq!(k.rank(&fp), k.cols);
        }
    }
}
