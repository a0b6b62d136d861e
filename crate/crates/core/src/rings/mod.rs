//! Finite local rings presented by canonical coefficient vectors.
//!
//! Every ring handled here is built from a truncated Galois ring
//! `Z[x]/(p^m, f)` by repeatedly adjoining a square-zero generator `t` with
//! `p^a t = 0`. Elements are stored as a single `u32`: the lexicographic rank
//! of their coordinate vector, where each coordinate lives in `Z/p^e` for the
//! exponent `e` of that coordinate. Rank 0 is always the zero element.

mod hom;
mod presets;

pub use hom::{hom_enumerate, verify_hom_table, HomSet, RingHom};
pub use presets::{parse_element, preset, preset_keys};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest coordinate count supported by the fixed-size scratch buffers.
pub const MAX_COORDS: usize = 16;

/// Default cap on the number of ring elements.
pub const DEFAULT_SIZE_CAP: u64 = 1_000_000;

const TABLE_LIMIT: u32 = 1024;

type Coords = [u32; MAX_COORDS];

/// A ring element: the canonical rank of its coefficient vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    /// `Z/p^m`.
    Zpm { p: u32, m: u32 },
    /// `Z[x]/(p^m, f)` with `f` monic of degree `d`, irreducible mod `p`.
    /// `f` lists all `d + 1` coefficients, constant term first.
    GaloisRing { p: u32, m: u32, d: u32, f: Vec<u32> },
    /// `base[t]/(t^2, p^torsion t)`.
    SquareZeroExt { base: Box<RingSpec>, torsion: u32 },
}

impl RingSpec {
    pub fn characteristic_prime(&self) -> u32 {
        match self {
            RingSpec::Zpm { p, .. } | RingSpec::GaloisRing { p, .. } => *p,
            RingSpec::SquareZeroExt { base, .. } => base.characteristic_prime(),
        }
    }

    pub fn residue_degree(&self) -> u32 {
        match self {
            RingSpec::Zpm { .. } => 1,
            RingSpec::GaloisRing { d, .. } => *d,
            RingSpec::SquareZeroExt { base, .. } => base.residue_degree(),
        }
    }

    /// The residue field, normalized so that prime fields are always `Zpm { p, 1 }`.
    pub fn residue_field(&self) -> RingSpec {
        match self {
            RingSpec::Zpm { p, .. } => RingSpec::Zpm { p: *p, m: 1 },
            RingSpec::GaloisRing { p, d, f, .. } => {
                if *d == 1 {
                    RingSpec::Zpm { p: *p, m: 1 }
                } else {
                    RingSpec::GaloisRing { p: *p, m: 1, d: *d, f: f.iter().map(|c| c % p).collect() }
                }
            }
            RingSpec::SquareZeroExt { base, .. } => base.residue_field(),
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            RingSpec::Zpm { m, .. } | RingSpec::GaloisRing { m, .. } => *m == 1,
            RingSpec::SquareZeroExt { .. } => false,
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zpm { p, m } => write!(f, "Z/{}^{}", p, m),
            RingSpec::GaloisRing { p, m, d, f: poly } => write!(f, "GR({},{},{};{:?})", p, m, d, poly),
            RingSpec::SquareZeroExt { base, torsion } => {
                write!(f, "({})[t]/(t^2,{}^{} t)", base, base.characteristic_prime(), torsion)
            }
        }
    }
}

/// How a residue-field element is lifted into a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LiftKind {
    /// The multiplicative (Teichmüller) representative.
    Teichmuller,
    /// Residue digits copied into the lowest digit of each coordinate.
    Naive,
}

#[derive(Debug)]
enum Layout {
    Galois { p: u64, q: u64, d: usize, f_low: Vec<u64> },
    SquareZero { base: Box<Layout>, base_len: usize, t_moduli: Vec<u32> },
}

impl Layout {
    fn mul(&self, x: &[u32], y: &[u32], out: &mut [u32]) {
        match self {
            Layout::Galois { q, d, f_low, .. } => {
                let d = *d;
                if d == 1 {
                    out[0] = ((x[0] as u64 * y[0] as u64) % q) as u32;
                    return;
                }
                let mut prod = [0u64; 2 * MAX_COORDS];
                for i in 0..d {
                    if x[i] == 0 {
                        continue;
                    }
                    for j in 0..d {
                        prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % q;
                    }
                }
                // x^d = -(f_0 + ... + f_{d-1} x^{d-1})
                for k in (d..2 * d - 1).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, fi) in f_low.iter().enumerate() {
                        let sub = c * fi % q;
                        prod[k - d + i] = (prod[k - d + i] + q - sub) % q;
                    }
                }
                for i in 0..d {
                    out[i] = prod[i] as u32;
                }
            }
            Layout::SquareZero { base, base_len, t_moduli } => {
                let bl = *base_len;
                let (x0, x1) = x.split_at(bl);
                let (y0, y1) = y.split_at(bl);
                let mut a = [0u32; MAX_COORDS];
                let mut b = [0u32; MAX_COORDS];
                base.mul(x0, y0, &mut out[..bl]);
                base.mul(x0, &y1[..bl], &mut a[..bl]);
                base.mul(x1, &y0[..bl], &mut b[..bl]);
                for (i, tm) in t_moduli.iter().enumerate() {
                    let tm = *tm as u64;
                    out[bl + i] = ((a[i] as u64 + b[i] as u64) % tm) as u32;
                }
            }
        }
    }

    fn residue_digits(&self, x: &[u32], out: &mut Vec<u32>) {
        match self {
            Layout::Galois { p, d, .. } => out.extend(x[..*d].iter().map(|c| (*c as u64 % p) as u32)),
            Layout::SquareZero { base, base_len, .. } => base.residue_digits(&x[..*base_len], out),
        }
    }

    fn embed_digits(&self, digits: &[u32], out: &mut [u32]) {
        match self {
            Layout::Galois { d, .. } => out[..*d].copy_from_slice(&digits[..*d]),
            Layout::SquareZero { base, base_len, .. } => base.embed_digits(digits, &mut out[..*base_len]),
        }
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

/// Coordinate-level arithmetic, independent of any lookup tables.
struct Raw {
    p: u32,
    d: u32,
    layout: Layout,
    moduli: Vec<u32>,
}

impl Raw {
    fn len(&self) -> usize {
        self.moduli.len()
    }

    fn decode_into(&self, e: Elem, out: &mut Coords) {
        let mut v = e.0;
        for i in (0..self.len()).rev() {
            let m = self.moduli[i];
            out[i] = v % m;
            v /= m;
        }
    }

    fn encode(&self, coords: &[u32]) -> Elem {
        let mut v: u32 = 0;
        for (c, m) in coords.iter().zip(&self.moduli) {
            v = v * m + c % m;
        }
        Elem(v)
    }

    fn add(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = ([0u32; MAX_COORDS], [0u32; MAX_COORDS]);
        self.decode_into(a, &mut x);
        self.decode_into(b, &mut y);
        for i in 0..self.len() {
            x[i] = ((x[i] as u64 + y[i] as u64) % self.moduli[i] as u64) as u32;
        }
        self.encode(&x[..self.len()])
    }

    fn neg(&self, a: Elem) -> Elem {
        let mut x = [0u32; MAX_COORDS];
        self.decode_into(a, &mut x);
        for i in 0..self.len() {
            let m = self.moduli[i];
            x[i] = (m - x[i]) % m;
        }
        self.encode(&x[..self.len()])
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y, mut z) = ([0u32; MAX_COORDS], [0u32; MAX_COORDS], [0u32; MAX_COORDS]);
        self.decode_into(a, &mut x);
        self.decode_into(b, &mut y);
        let len = self.len();
        self.layout.mul(&x[..len], &y[..len], &mut z[..len]);
        self.encode(&z[..len])
    }

    fn residue(&self, a: Elem) -> u32 {
        let mut x = [0u32; MAX_COORDS];
        self.decode_into(a, &mut x);
        let mut digits = Vec::with_capacity(self.d as usize);
        self.layout.residue_digits(&x[..self.len()], &mut digits);
        digits.iter().fold(0u32, |acc, c| acc * self.p + c)
    }
}

struct RingInner {
    spec: RingSpec,
    raw: Raw,
    size: u32,
    tables: Option<Tables>,
    inverse: Vec<Option<Elem>>,
    residue: Vec<u32>,
    unit_exponent: u64,
}

/// An immutable handle to a finite local ring. Cheap to clone and `Send + Sync`.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.0.spec == other.0.spec
    }
}
impl Eq for Ring {}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= p as u64 {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Polynomial remainder over F_p; coefficients constant term first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db] as u64, (p - 2) as u64, p as u64) as u32;
    while r.len() > db {
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            let sub = (c as u64 * *bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r.pop();
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Brute-force irreducibility over F_p: no monic factor of degree `1..=d/2`.
pub(crate) fn is_irreducible_mod_p(f: &[u32], p: u32) -> bool {
    let f: Vec<u32> = f.iter().map(|c| c % p).collect();
    let d = f.len() - 1;
    if f[d] == 0 {
        return false;
    }
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            let r = poly_rem(&f, &g, p);
            if r.iter().all(|x| *x == 0) {
                return false;
            }
        }
    }
    true
}

fn build_layout(spec: &RingSpec) -> Result<(Layout, Vec<u32>)> {
    match spec {
        RingSpec::Zpm { p, m } => build_layout(&RingSpec::GaloisRing { p: *p, m: *m, d: 1, f: vec![0, 1] }),
        RingSpec::GaloisRing { p, m, d, f } => {
            let (p, m, d) = (*p, *m, *d as usize);
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if m == 0 {
                return Err(Error::InvalidSpec("truncation length m must be at least 1".into()));
            }
            if d == 0 || d > MAX_COORDS || f.len() != d + 1 || f[d] != 1 {
                return Err(Error::InvalidSpec(format!("f must be monic of degree {}", d)));
            }
            if d > 1 && !is_irreducible_mod_p(f, p) {
                return Err(Error::Reducible(f.clone(), p));
            }
            let q = (p as u64).checked_pow(m).filter(|q| *q < (1 << 31)).ok_or(Error::SizeCap(u64::MAX))?;
            let f_low = f[..d].iter().map(|c| *c as u64 % q).collect();
            Ok((Layout::Galois { p: p as u64, q, d, f_low }, vec![q as u32; d]))
        }
        RingSpec::SquareZeroExt { base, torsion } => {
            let (bl, bm) = build_layout(base)?;
            let p = base.characteristic_prime() as u64;
            let cap = p.checked_pow(*torsion).unwrap_or(u64::MAX);
            let t_moduli: Vec<u32> = bm.iter().map(|m| (*m as u64).min(cap) as u32).collect();
            let mut moduli = bm.clone();
            moduli.extend_from_slice(&t_moduli);
            if moduli.len() > MAX_COORDS {
                return Err(Error::InvalidSpec("too many coordinates".into()));
            }
            Ok((Layout::SquareZero { base: Box::new(bl), base_len: bm.len(), t_moduli }, moduli))
        }
    }
}

impl Ring {
    /// Builds a ring handle with the default size cap.
    pub fn new(spec: RingSpec) -> Result<Ring> {
        Ring::with_cap(spec, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(spec: RingSpec, cap: u64) -> Result<Ring> {
        let (layout, moduli) = build_layout(&spec)?;
        let size = moduli.iter().try_fold(1u64, |acc, m| acc.checked_mul(*m as u64)).unwrap_or(u64::MAX);
        if size > cap || size > u32::MAX as u64 {
            return Err(Error::SizeCap(size));
        }
        let size = size as u32;
        let p = spec.characteristic_prime();
        let d = spec.residue_degree();
        let q = (p as u64).pow(d);
        let raw = Raw { p, d, layout, moduli };
        let residue: Vec<u32> = (0..size).map(|e| raw.residue(Elem(e))).collect();
        let tables = (size <= TABLE_LIMIT).then(|| {
            let n = size as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            let mut neg = vec![0; n];
            for a in 0..size {
                neg[a as usize] = raw.neg(Elem(a)).0;
                for b in 0..size {
                    add[a as usize * n + b as usize] = raw.add(Elem(a), Elem(b)).0;
                    mul[a as usize * n + b as usize] = raw.mul(Elem(a), Elem(b)).0;
                }
            }
            Tables { add, mul, neg }
        });
        let mut inner = RingInner {
            spec,
            raw,
            size,
            tables,
            inverse: Vec::new(),
            residue,
            // |A^x| = |A| - |A|/q; a^(|A^x| - 1) inverts a unit.
            unit_exponent: size as u64 - size as u64 / q - 1,
        };
        if size <= TABLE_LIMIT {
            let ring = Ring(Arc::new(inner));
            let inverse = (0..size).map(|e| ring.inv_uncached(Elem(e))).collect();
            inner = Arc::try_unwrap(ring.0).unwrap_or_else(|_| unreachable!("ring handle not shared yet"));
            inner.inverse = inverse;
        }
        Ok(Ring(Arc::new(inner)))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.raw.p
    }

    /// Residue degree `d`, so that the residue field is `F_{p^d}`.
    pub fn residue_degree(&self) -> u32 {
        self.0.raw.d
    }

    pub fn residue_order(&self) -> u32 {
        self.0.raw.p.pow(self.0.raw.d)
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn coord_len(&self) -> usize {
        self.0.raw.moduli.len()
    }

    pub fn moduli(&self) -> &[u32] {
        &self.0.raw.moduli
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.size).map(Elem)
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        let mut c = [0u32; MAX_COORDS];
        c[0] = 1;
        self.encode(&c[..self.coord_len()])
    }

    pub fn residue_field(&self) -> Result<Ring> {
        Ring::new(self.0.spec.residue_field())
    }

    pub fn is_field(&self) -> bool {
        self.0.spec.is_field()
    }

    pub fn decode(&self, e: Elem) -> Vec<u32> {
        let mut c = [0u32; MAX_COORDS];
        self.decode_into(e, &mut c);
        c[..self.coord_len()].to_vec()
    }

    /// Encodes a coordinate vector; coordinates are reduced modulo their moduli.
    pub fn encode(&self, coords: &[u32]) -> Elem {
        self.0.raw.encode(coords)
    }

    fn decode_into(&self, e: Elem, out: &mut Coords) {
        self.0.raw.decode_into(e, out)
    }

    pub fn from_int(&self, z: i64) -> Elem {
        let q = self.0.raw.moduli[0] as i64;
        let mut c = [0u32; MAX_COORDS];
        c[0] = z.rem_euclid(q) as u32;
        self.encode(&c[..self.coord_len()])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.add[a.0 as usize * self.0.size as usize + b.0 as usize]),
            None => self.0.raw.add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.neg[a.0 as usize]),
            None => self.0.raw.neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.mul[a.0 as usize * self.0.size as usize + b.0 as usize]),
            None => self.0.raw.mul(a, b),
        }
    }

    /// Multiplication by an integer.
    pub fn scale(&self, z: i64, a: Elem) -> Elem {
        self.mul(self.from_int(z), a)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Image in the residue field, as an element of `self.residue_field()`.
    #[inline]
    pub fn residue(&self, a: Elem) -> Elem {
        Elem(self.0.residue[a.0 as usize])
    }

    #[inline]
    pub fn is_unit(&self, a: Elem) -> bool {
        self.0.residue[a.0 as usize] != 0
    }

    fn inv_uncached(&self, a: Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        let candidate = self.pow(a, self.0.unit_exponent);
        if self.mul(a, candidate) == self.one() {
            Some(candidate)
        } else {
            // Fermat failed (only possible on a malformed ring); fall back to search.
            self.elements().find(|b| self.mul(a, *b) == self.one())
        }
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if self.0.inverse.is_empty() {
            self.inv_uncached(a)
        } else {
            self.0.inverse[a.0 as usize]
        }
    }

    /// Lifts a residue-field element given by its rank in `self.residue_field()`.
    pub fn lift_residue(&self, alpha: Elem, kind: LiftKind) -> Result<Elem> {
        match kind {
            LiftKind::Naive => Ok(self.naive_lift(alpha)),
            LiftKind::Teichmuller => self.teichmuller(alpha),
        }
    }

    fn naive_lift(&self, alpha: Elem) -> Elem {
        let d = self.0.raw.d as usize;
        let mut digits = vec![0u32; d];
        let mut v = alpha.0;
        for i in (0..d).rev() {
            digits[i] = v % self.0.raw.p;
            v /= self.0.raw.p;
        }
        let mut c = [0u32; MAX_COORDS];
        self.0.raw.layout.embed_digits(&digits, &mut c);
        self.encode(&c[..self.coord_len()])
    }

    /// The Teichmüller representative of a residue-field element: iterate
    /// `x -> x^q` on a lift until it is fixed.
    pub fn teichmuller(&self, alpha: Elem) -> Result<Elem> {
        if alpha.0 >= self.residue_order() {
            return Err(Error::InvalidSpec(format!("residue element {} out of range", alpha.0)));
        }
        let q = self.residue_order() as u64;
        let bound: u32 = self
            .moduli()
            .iter()
            .map(|m| {
                let mut e = 0;
                let mut v = *m;
                while v > 1 {
                    v /= self.0.raw.p;
                    e += 1;
                }
                e
            })
            .sum::<u32>()
            + 1;
        let mut x = self.naive_lift(alpha);
        for _ in 0..=bound {
            let y = self.pow(x, q);
            if y == x {
                return Ok(x);
            }
            x = y;
        }
        Err(Error::NonConvergence)
    }

    /// Every non-unit sum and every multiple of a non-unit stays a non-unit.
    pub fn check_locality(&self) -> bool {
        let nonunits: Vec<Elem> = self.elements().filter(|e| !self.is_unit(*e)).collect();
        for &a in &nonunits {
            for &b in &nonunits {
                if self.is_unit(self.add(a, b)) {
                    return false;
                }
            }
            for r in self.elements() {
                if self.is_unit(self.mul(a, r)) {
                    return false;
                }
            }
        }
        true
    }

    /// The maximal ideal, in canonical order.
    pub fn maximal_ideal(&self) -> Vec<Elem> {
        self.elements().filter(|e| !self.is_unit(*e)).collect()
    }

    pub fn format_elem(&self, e: Elem) -> String {
        let c = self.decode(e);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad element literal {:?}", s));
        let coords: Vec<u32> = if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            inner.split(',').map(|t| t.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            vec![s.parse::<u32>().map_err(|_| bad())?]
        };
        if coords.len() != self.coord_len() || coords.iter().zip(self.moduli()).any(|(c, m)| c >= m) {
            return Err(bad());
        }
        Ok(self.encode(&coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32, m: u32) -> Ring {
        Ring::new(RingSpec::Zpm { p, m }).unwrap()
    }

    fn gr4() -> Ring {
        Ring::new(RingSpec::GaloisRing { p: 2, m: 2, d: 2, f: vec![1, 1, 1] }).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(z(3, 2).size(), 9);
        let g = gr4();
        assert_eq!(g.size(), 16);
        assert_eq!(g.residue_field().unwrap().size(), 4);
        let bc = Ring::new(RingSpec::SquareZeroExt { base: Box::new(RingSpec::Zpm { p: 2, m: 2 }), torsion: 1 }).unwrap();
        assert_eq!(bc.size(), 8);
    }

    #[test]
    fn bc_ring_canonical_forms() {
        // a + b t, a in Z/4, b in F_2: enumerate and check 2t = 0, t^2 = 0.
        let bc = Ring::new(RingSpec::SquareZeroExt { base: Box::new(RingSpec::Zpm { p: 2, m: 2 }), torsion: 1 }).unwrap();
        let forms: Vec<Vec<u32>> = bc.elements().map(|e| bc.decode(e)).collect();
        let mut expected = Vec::new();
        for a in 0..4 {
            for b in 0..2 {
                expected.push(vec![a, b]);
            }
        }
        assert_eq!(forms, expected);
        let t = bc.encode(&[0, 1]);
        assert_eq!(bc.mul(t, t), bc.zero());
        assert_eq!(bc.scale(2, t), bc.zero());
        assert_ne!(bc.scale(2, bc.one()), bc.zero());
    }

    #[test]
    fn unit_checks() {
        let r = z(3, 2);
        assert!(!r.is_unit(r.from_int(3)));
        assert!(r.is_unit(r.from_int(2)));
        let dual = Ring::new(RingSpec::SquareZeroExt { base: Box::new(RingSpec::Zpm { p: 3, m: 1 }), torsion: 1 }).unwrap();
        assert!(!dual.is_unit(dual.encode(&[0, 1])));
        assert!(dual.is_unit(dual.encode(&[2, 1])));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(Ring::new(RingSpec::Zpm { p: 4, m: 1 }), Err(Error::NotPrime(4))));
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(
            Ring::new(RingSpec::GaloisRing { p: 2, m: 1, d: 2, f: vec![1, 0, 1] }),
            Err(Error::Reducible(..))
        ));
        assert!(matches!(Ring::with_cap(RingSpec::Zpm { p: 3, m: 5 }, 100), Err(Error::SizeCap(243))));
    }

    #[test]
    fn teichmuller_values() {
        let r = z(3, 2);
        assert_eq!(r.teichmuller(Elem(0)).unwrap(), r.zero());
        assert_eq!(r.teichmuller(Elem(2)).unwrap(), r.from_int(8));
        let g = gr4();
        let k = g.residue_field().unwrap();
        for a in k.elements() {
            let t = g.teichmuller(a).unwrap();
            assert_eq!(g.residue(t), a);
            assert_eq!(g.pow(t, 4), t);
        }
        // omega lifts to a cube root of unity
        let omega = k.encode(&[0, 1]);
        let w = g.teichmuller(omega).unwrap();
        assert_eq!(g.pow(w, 3), g.one());
        assert_ne!(w, g.one());
    }

    #[test]
    fn inverses() {
        for r in [z(3, 2), gr4(), z(2, 3)] {
            for a in r.elements() {
                match r.inv(a) {
                    Some(b) => assert_eq!(r.mul(a, b), r.one()),
                    None => assert!(!r.is_unit(a)),
                }
            }
        }
    }

    #[test]
    fn untabled_ring_agrees_with_integers() {
        // 3^7 > TABLE_LIMIT, so arithmetic runs through the coordinate path.
        let r = z(3, 7);
        assert!(r.0.tables.is_none());
        let q = 2187i64;
        for (a, b) in [(5i64, 2000i64), (1234, 999), (2186, 2186)] {
            assert_eq!(r.mul(r.from_int(a), r.from_int(b)), r.from_int(a * b % q));
            assert_eq!(r.add(r.from_int(a), r.from_int(b)), r.from_int((a + b) % q));
        }
        assert_eq!(r.mul(r.from_int(2), r.inv(r.from_int(2)).unwrap()), r.one());
    }

    #[test]
    fn element_literals() {
        let g = gr4();
        let e = g.parse_elem("[3,1]").unwrap();
        assert_eq!(g.decode(e), vec![3, 1]);
        assert_eq!(g.format_elem(e), "[3,1]");
        assert!(g.parse_elem("[4,1]").is_err());
        assert!(g.parse_elem("7").is_err());
    }
}
