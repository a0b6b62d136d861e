//! Steinberg relations, decomposition into elementary matrices, the `T_ij`
//! conjugation law, the commutant of the upper unitriangular generators and
//! commutator witnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrices::{ElemMove, Mat, MatSpace};
use crate::report::Report;
use crate::rings::Elem;

/// Exhaustive sweeps are refused above this many relation instances.
pub const DEFAULT_BUDGET: u64 = 20_000_000;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const COMMUTANT_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
enum Shape {
    Additive(usize, usize),
    Commutator(usize, usize, usize),
    Commuting(usize, usize, usize, usize),
}

/// One instance of a Steinberg relation that failed.
#[derive(Clone, Debug, Serialize)]
pub struct RelationFailure {
    pub relation: &'static str,
    pub indices: Vec<usize>,
    pub x: String,
    pub y: String,
}

fn shapes(n: usize) -> Vec<Shape> {
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j))).collect();
    for &(i, j) in &pairs {
        out.push(Shape::Additive(i, j));
    }
    for &(i, j) in &pairs {
        for k in 0..n {
            if k != i && k != j {
                out.push(Shape::Commutator(i, j, k));
            }
        }
    }
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            if i != l && j != k {
                out.push(Shape::Commuting(i, j, k, l));
            }
        }
    }
    out
}

fn commutator_elem(ms: &MatSpace, a: (usize, usize, Elem), b: (usize, usize, Elem)) -> Mat {
    let r = ms.ring();
    ms.product([
        &ms.elementary(a.0, a.1, a.2),
        &ms.elementary(b.0, b.1, b.2),
        &ms.elementary(a.0, a.1, r.neg(a.2)),
        &ms.elementary(b.0, b.1, r.neg(b.2)),
    ])
}

fn holds(ms: &MatSpace, shape: Shape, x: Elem, y: Elem) -> bool {
    let r = ms.ring();
    match shape {
        Shape::Additive(i, j) => ms.mul(&ms.elementary(i, j, x), &ms.elementary(i, j, y)) == ms.elementary(i, j, r.add(x, y)),
        Shape::Commutator(i, j, k) => commutator_elem(ms, (i, j, x), (j, k, y)) == ms.elementary(i, k, r.mul(x, y)),
        Shape::Commuting(i, j, k, l) => ms.is_identity(&commutator_elem(ms, (i, j, x), (k, l, y))),
    }
}

fn failure(ms: &MatSpace, shape: Shape, x: Elem, y: Elem) -> RelationFailure {
    let (relation, indices) = match shape {
        Shape::Additive(i, j) => ("additive", vec![i, j]),
        Shape::Commutator(i, j, k) => ("commutator", vec![i, j, k]),
        Shape::Commuting(i, j, k, l) => ("commuting", vec![i, j, k, l]),
    };
    let r = ms.ring();
    RelationFailure { relation, indices, x: r.format_elem(x), y: r.format_elem(y) }
}

/// Checks `E_ij(x)E_ij(y) = E_ij(x+y)`, `[E_ij(x), E_jk(y)] = E_ik(xy)` and
/// `[E_ij(x), E_kl(y)] = I` (`i != l`, `j != k`).
pub fn steinberg_check(ms: &MatSpace, mode: Mode, budget: u64) -> Result<Report> {
    let n = ms.n();
    if n < 3 {
        return Err(Error::Dimension(format!("Steinberg relations need n >= 3, got {}", n)));
    }
    let ring = ms.ring();
    let shapes = shapes(n);
    let mut report = Report::new("steinberg", "Steinberg relations among elementary matrices");
    let mut first_failure = None;
    let mut checks = 0u64;
    match mode {
        Mode::Exhaustive => {
            let size = ring.size() as u64;
            let needed = size * size * (n as u64).pow(4);
            if needed > budget {
                return Err(Error::Budget { needed, budget });
            }
            let xs: Vec<Elem> = ring.elements().collect();
            let per_x: Vec<Option<RelationFailure>> = xs
                .par_iter()
                .map(|&x| {
                    for y in ring.elements() {
                        for &s in &shapes {
                            if !holds(ms, s, x, y) {
                                return Some(failure(ms, s, x, y));
                            }
                        }
                    }
                    None
                })
                .collect();
            first_failure = per_x.into_iter().flatten().next();
            checks = size * size * shapes.len() as u64;
        }
        Mode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let s = shapes[rng.gen_range(0..shapes.len())];
                let x = Elem(rng.gen_range(0..ring.size()));
                let y = Elem(rng.gen_range(0..ring.size()));
                checks += 1;
                if !holds(ms, s, x, y) {
                    first_failure = Some(failure(ms, s, x, y));
                    break;
                }
            }
            report.seed = Some(seed);
        }
    }
    report.checks = checks;
    report.certificate = json!({
        "ring": ring.spec().to_string(),
        "n": n,
        "mode": match mode { Mode::Exhaustive => "exhaustive", Mode::Sampled { .. } => "sampled" },
        "relation_shapes": shapes.len(),
    });
    if let Some(f) = first_failure {
        report.fail(serde_json::to_value(f).expect("serializable"));
    }
    Ok(report)
}

fn row_add(ms: &MatSpace, m: &mut Mat, i: usize, j: usize, f: Elem) {
    let r = ms.ring();
    for c in 0..ms.n() {
        let v = r.add(m.get(i, c), r.mul(f, m.get(j, c)));
        m.set(i, c, v);
    }
}

fn whitehead(ms: &MatSpace, i: usize, u: Elem) -> Result<[ElemMove; 6]> {
    let r = ms.ring();
    let ui = r.inv(u).ok_or(Error::NotInvertible)?;
    let one = r.one();
    let m1 = r.neg(one);
    let mv = |i, j, x| ElemMove { i, j, x };
    Ok([
        mv(i, i + 1, u),
        mv(i + 1, i, r.neg(ui)),
        mv(i, i + 1, u),
        mv(i, i + 1, m1),
        mv(i + 1, i, one),
        mv(i, i + 1, m1),
    ])
}

/// Writes `a` (determinant 1) as a product of elementary matrices, left to
/// right. Unit-pivot Gauss-Jordan elimination; a non-unit pivot is repaired
/// by adding the first later row with a unit in that column. The remaining
/// diagonal is split into `diag(v, v^-1)` blocks, each written as six moves.
pub fn elem_decompose(ms: &MatSpace, a: &Mat) -> Result<Vec<ElemMove>> {
    let r = ms.ring();
    let n = ms.n();
    if ms.det(a) != r.one() {
        return Err(Error::DeterminantNotOne);
    }
    let mut m = a.clone();
    let mut ops: Vec<ElemMove> = Vec::new();
    for c in 0..n {
        if !r.is_unit(m.get(c, c)) {
            let src = (c + 1..n).find(|i| r.is_unit(m.get(*i, c))).ok_or(Error::NoUnitPivot(c))?;
            row_add(ms, &mut m, c, src, r.one());
            ops.push(ElemMove { i: c, j: src, x: r.one() });
        }
        let inv = r.inv(m.get(c, c)).expect("unit pivot");
        for i in 0..n {
            if i == c || m.get(i, c) == r.zero() {
                continue;
            }
            let f = r.neg(r.mul(m.get(i, c), inv));
            row_add(ms, &mut m, i, c, f);
            ops.push(ElemMove { i, j: c, x: f });
        }
    }
    let mut word: Vec<ElemMove> = ops.iter().map(|mv| ElemMove { x: r.neg(mv.x), ..*mv }).collect();
    let mut v = r.one();
    for i in 0..n - 1 {
        v = r.mul(v, m.get(i, i));
        if v != r.one() {
            word.extend(whitehead(ms, i, v)?);
        }
    }
    Ok(word)
}

pub fn decomposition_bound(n: usize) -> usize {
    n * n + 7 * n
}

/// A product of `3n^2` random elementary matrices.
pub fn random_sl(ms: &MatSpace, rng: &mut impl Rng) -> Mat {
    let n = ms.n();
    let size = ms.ring().size();
    let mut m = ms.identity();
    for _ in 0..3 * n * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let e = ms.elementary(i, j, Elem(rng.gen_range(0..size)));
        m = ms.mul(&m, &e);
    }
    m
}

/// Checks `T_ij E_{0,n-1}(x) T_ij^-1 = E_ij(x)` for every pair and every `x`.
pub fn conjugation_check(ms: &MatSpace) -> Result<Report> {
    let n = ms.n();
    if n < 3 {
        return Err(Error::Dimension(format!("conjugation law needs n >= 3, got {}", n)));
    }
    let ring = ms.ring();
    let mut report = Report::new("conjugation", "signed permutations T_ij conjugate E_1n(x) to E_ij(x)");
    let mut checks = 0;
    'outer: for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = ms.build_tij(i, j)?;
            let ti = ms.inv(&t)?;
            for x in ring.elements() {
                checks += 1;
                let lhs = ms.product([&t, &ms.elementary(0, n - 1, x), &ti]);
                if lhs != ms.elementary(i, j, x) {
                    report.fail(json!({ "i": i, "j": j, "x": ring.format_elem(x), "got": ms.format(&lhs) }));
                    break 'outer;
                }
            }
        }
    }
    report.checks = checks;
    report.certificate = json!({ "ring": ring.spec().to_string(), "n": n });
    Ok(report)
}

/// Brute force over all `n x n` matrices: the invertible ones commuting with
/// every `E_ij(1)`, `i < j`, sorted.
pub fn commutant_classify(ms: &MatSpace, cap: u64) -> Result<Vec<Mat>> {
    let n = ms.n();
    let total = (ms.ring().size() as f64).powi((n * n) as i32);
    if total > cap as f64 || ms.key(&ms.identity()).is_none() {
        return Err(Error::Budget { needed: total.min(u64::MAX as f64) as u64, budget: cap });
    }
    let gens: Vec<Mat> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| ms.elementary(i, j, ms.ring().one())).collect();
    let total = total as u128;
    let mut out: Vec<Mat> = (0..total)
        .into_par_iter()
        .filter_map(|key| {
            let x = ms.from_key(key);
            let commutes = gens.iter().all(|e| ms.mul(&x, e) == ms.mul(e, &x));
            (commutes && ms.ring().is_unit(ms.det(&x))).then_some(x)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `{ lambda E_{0,n-1}(x) : lambda a unit, x arbitrary }`, sorted.
pub fn commutant_expected(ms: &MatSpace) -> Vec<Mat> {
    let r = ms.ring();
    let mut out = Vec::new();
    for lambda in r.elements().filter(|l| r.is_unit(*l)) {
        for x in r.elements() {
            out.push(ms.scale(lambda, &ms.elementary(0, ms.n() - 1, x)));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `(E_ik(x), E_kj(1))` with `k` the least index distinct from `i` and `j`;
/// their commutator is `E_ij(x)`.
pub fn commutator_witness(ms: &MatSpace, i: usize, j: usize, x: Elem) -> Result<(Mat, Mat)> {
    if ms.n() < 3 || i >= ms.n() || j >= ms.n() || i == j {
        return Err(Error::Index(format!("witness for ({}, {}) with n = {}", i, j, ms.n())));
    }
    let k = (0..ms.n()).find(|k| *k != i && *k != j).expect("n >= 3");
    Ok((ms.elementary(i, k, x), ms.elementary(k, j, ms.ring().one())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::preset;

    fn space(key: &str, n: usize) -> MatSpace {
        MatSpace::new(&preset(key).unwrap(), n).unwrap()
    }

    #[test]
    fn shape_counts() {
        // n(n-1) additive, n(n-1)(n-2) commutator, and ordered pairs of
        // off-diagonal positions with i != l, j != k
        let s = shapes(3);
        assert_eq!(s.iter().filter(|x| matches!(x, Shape::Additive(..))).count(), 6);
        assert_eq!(s.iter().filter(|x| matches!(x, Shape::Commutator(..))).count(), 6);
        assert!(s.contains(&Shape::Commuting(0, 1, 0, 2)));
        assert!(!s.contains(&Shape::Commuting(0, 1, 1, 2)));
    }

    #[test]
    fn steinberg_small() {
        let r = steinberg_check(&space("z4", 3), Mode::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert!(r.passed());
        let r = steinberg_check(&space("z9", 4), Mode::Sampled { samples: 2000, seed: 1 }, DEFAULT_BUDGET).unwrap();
        assert!(r.passed());
        assert!(matches!(steinberg_check(&space("z9", 3), Mode::Exhaustive, 10), Err(Error::Budget { .. })));
        assert!(steinberg_check(&space("z9", 2), Mode::Exhaustive, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn decompose_elementary_and_diagonal() {
        let ms = space("z9", 3);
        let r = ms.ring().clone();
        let x = r.from_int(4);
        assert_eq!(elem_decompose(&ms, &ms.elementary(0, 1, x)).unwrap(), vec![ElemMove { i: 0, j: 1, x }]);
        let d = ms.diag(&[r.from_int(2), r.from_int(5), r.one()]);
        let w = elem_decompose(&ms, &d).unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(ms.word_product(&w), d);
        assert!(elem_decompose(&ms, &ms.identity()).unwrap().is_empty());
        assert!(matches!(elem_decompose(&ms, &ms.scalar(r.from_int(2))), Err(Error::DeterminantNotOne)));
    }

    #[test]
    fn decompose_needs_row_repair() {
        let ms = space("z9", 3);
        let a = ms.from_ints(&[&[3, 1, 0], &[1, 0, 0], &[0, 0, 8]]);
        assert_eq!(ms.det(&a), ms.ring().one());
        let w = elem_decompose(&ms, &a).unwrap();
        assert_eq!(ms.word_product(&w), a);
        assert!(w.len() <= decomposition_bound(3));
    }

    #[test]
    fn conjugation_law_small() {
        assert!(conjugation_check(&space("z4", 3)).unwrap().passed());
        assert!(conjugation_check(&space("f3", 4)).unwrap().passed());
    }

    #[test]
    fn commutant_over_f2() {
        let ms = space("f2", 3);
        let c = commutant_classify(&ms, COMMUTANT_CAP).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c, commutant_expected(&ms));
        assert!(commutant_classify(&space("f3", 4), COMMUTANT_CAP).is_err());
    }

    #[test]
    fn witnesses_multiply_out() {
        let ms = space("z9", 3);
        let (a, b) = commutator_witness(&ms, 0, 1, ms.ring().from_int(7)).unwrap();
        assert_eq!(a, ms.elementary(0, 2, ms.ring().from_int(7)));
        assert_eq!(b, ms.elementary(2, 1, ms.ring().one()));
        for x in ms.ring().elements() {
            for (i, j) in [(0, 1), (2, 0), (1, 2)] {
                let (a, b) = commutator_witness(&ms, i, j, x).unwrap();
                assert_eq!(ms.commutator(&a, &b).unwrap(), ms.elementary(i, j, x));
            }
        }
    }
}
