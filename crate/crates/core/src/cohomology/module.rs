use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Fp, FpMat};
use crate::matrices::{Mat, MatSpace};
use crate::rings::{Elem, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleKind {
    /// All `n x n` matrices over `k`.
    M,
    /// Trace-zero matrices.
    M0,
    /// Scalar matrices `kI`.
    S,
    /// `M0 / S`.
    V,
    /// `k` with trivial action.
    Trivial,
}

impl ModuleKind {
    pub fn parse(s: &str) -> Result<ModuleKind> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "m" => ModuleKind::M,
            "m0" => ModuleKind::M0,
            "s" => ModuleKind::S,
            "v" => ModuleKind::V,
            "trivial" | "k" => ModuleKind::Trivial,
            other => return Err(Error::Parse(format!("unknown module {:?}", other))),
        })
    }
}

/// One of the conjugation modules over a finite field `k`, possibly as a
/// direct sum of `copies` identical blocks. Vectors are `F_p`-coordinates:
/// each `k`-entry contributes its `d` residue digits.
///
/// Coordinates of one block:
/// - `M`: all entries, row-major.
/// - `M0`: all entries except `(n-1, n-1)`, which is minus the sum of the
///   other diagonal entries.
/// - `S`, `Trivial`: the scalar.
/// - `V`: off-diagonal entries, then `m_ii - m_{n-1,n-1}` for `i < n-2`.
#[derive(Clone, Debug)]
pub struct GModule {
    kind: ModuleKind,
    space: MatSpace,
    copies: usize,
    fp: Fp,
    d: usize,
}

impl GModule {
    pub fn new(kind: ModuleKind, field: &Ring, n: usize, copies: usize) -> Result<GModule> {
        if !field.is_field() {
            return Err(Error::Module(format!("{} is not a field", field.spec())));
        }
        let p = field.p() as usize;
        if matches!(kind, ModuleKind::S | ModuleKind::V) && !n.is_multiple_of(p) {
            return Err(Error::Module(format!("S is not inside M0 when p = {} does not divide n = {}", p, n)));
        }
        if kind == ModuleKind::V && n < 3 {
            return Err(Error::Module("V needs n >= 3".into()));
        }
        Ok(GModule {
            kind,
            space: MatSpace::new(field, n)?,
            copies,
            fp: Fp::new(field.p()),
            d: field.residue_degree() as usize,
        })
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn field(&self) -> &Ring {
        self.space.ring()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn fp(&self) -> &Fp {
        &self.fp
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Degree of `k` over `F_p`.
    pub fn degree(&self) -> usize {
        self.d
    }

    /// `F_p`-dimension of one block.
    pub fn block_dim(&self) -> usize {
        let n = self.n();
        let entries = match self.kind {
            ModuleKind::M => n * n,
            ModuleKind::M0 => n * n - 1,
            ModuleKind::S | ModuleKind::Trivial => 1,
            ModuleKind::V => n * n - 2,
        };
        entries * self.d
    }

    /// Total `F_p`-dimension.
    pub fn dim(&self) -> usize {
        self.copies * self.block_dim()
    }

    fn digits(&self, x: Elem, out: &mut Vec<u8>) {
        out.extend(self.field().decode(x).iter().map(|c| *c as u8));
    }

    fn undigit(&self, v: &[u8]) -> Elem {
        let c: Vec<u32> = v.iter().map(|x| *x as u32).collect();
        self.field().encode(&c)
    }

    /// Coordinates of a matrix in one block. For `M0` the input should have
    /// trace zero; for `V` any trace-zero representative of the class works.
    pub fn coords(&self, m: &Mat) -> Vec<u8> {
        let n = self.n();
        let k = self.field();
        let mut out = Vec::with_capacity(self.block_dim());
        match self.kind {
            ModuleKind::M => m.entries.iter().for_each(|x| self.digits(*x, &mut out)),
            ModuleKind::M0 => m.entries[..n * n - 1].iter().for_each(|x| self.digits(*x, &mut out)),
            ModuleKind::S | ModuleKind::Trivial => self.digits(m.get(0, 0), &mut out),
            ModuleKind::V => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            self.digits(m.get(i, j), &mut out);
                        }
                    }
                }
                let last = m.get(n - 1, n - 1);
                for i in 0..n - 2 {
                    self.digits(k.sub(m.get(i, i), last), &mut out);
                }
            }
        }
        out
    }

    /// A matrix representing the block vector `v` (inverse of [`GModule::coords`]).
    pub fn matrix(&self, v: &[u8]) -> Mat {
        let n = self.n();
        let d = self.d;
        let k = self.field();
        let mut m = self.space.zero();
        match self.kind {
            ModuleKind::M => {
                for (idx, chunk) in v.chunks(d).enumerate() {
                    m.entries[idx] = self.undigit(chunk);
                }
            }
            ModuleKind::M0 => {
                for (idx, chunk) in v.chunks(d).enumerate() {
                    m.entries[idx] = self.undigit(chunk);
                }
                let tr = (0..n - 1).fold(k.zero(), |acc, i| k.add(acc, m.get(i, i)));
                m.set(n - 1, n - 1, k.neg(tr));
            }
            ModuleKind::S | ModuleKind::Trivial => m = self.space.scalar(self.undigit(v)),
            ModuleKind::V => {
                let mut chunks = v.chunks(d);
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            m.set(i, j, self.undigit(chunks.next().expect("length")));
                        }
                    }
                }
                let mut sum = k.zero();
                for i in 0..n - 2 {
                    let c = self.undigit(chunks.next().expect("length"));
                    m.set(i, i, c);
                    sum = k.add(sum, c);
                }
                m.set(n - 2, n - 2, k.neg(sum));
            }
        }
        m
    }

    /// `g . v = g v g^-1` on one block, given `g` and its inverse.
    pub fn act(&self, g: &Mat, g_inv: &Mat, v: &[u8]) -> Vec<u8> {
        if self.kind == ModuleKind::Trivial || self.kind == ModuleKind::S {
            return v.to_vec();
        }
        self.coords(&self.space.product([g, &self.matrix(v), g_inv]))
    }

    /// Matrix of the action of `g` on one block.
    pub fn action(&self, g: &Mat) -> FpMat {
        let dim = self.block_dim();
        if self.kind == ModuleKind::Trivial || self.kind == ModuleKind::S {
            return FpMat::identity(dim);
        }
        let g_inv = self.space.inv(g).expect("group element");
        let cols: Vec<Vec<u8>> = (0..dim)
            .map(|c| {
                let mut e = vec![0u8; dim];
                e[c] = 1;
                self.act(g, &g_inv, &e)
            })
            .collect();
        FpMat::from_columns(&cols, dim)
    }

    /// Multiplication by the generator `x` of `k` over `F_p`, on one block.
    pub fn omega(&self) -> FpMat {
        let dim = self.block_dim();
        let k = self.field();
        if self.d == 1 {
            return FpMat::identity(dim);
        }
        let mut digits = vec![0u32; self.d];
        digits[1] = 1;
        let w = k.encode(&digits);
        let cols: Vec<Vec<u8>> = (0..dim)
            .map(|c| {
                let mut e = vec![0u8; dim];
                e[c] = 1;
                let mut out = Vec::with_capacity(dim);
                for chunk in e.chunks(self.d) {
                    self.digits(k.mul(w, self.undigit(chunk)), &mut out);
                }
                out
            })
            .collect();
        FpMat::from_columns(&cols, dim)
    }
}
