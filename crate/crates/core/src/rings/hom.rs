use serde::Serialize;

use super::{Elem, Ring, RingSpec};

/// A cnl(k)-ring homomorphism, stored both by generator images and as a full
/// value table indexed by source element.
#[derive(Clone, Debug, Serialize)]
pub struct RingHom {
    pub source: RingSpec,
    pub target: RingSpec,
    pub generator_images: Vec<Elem>,
    pub table: Vec<Elem>,
}

impl RingHom {
    pub fn apply(&self, x: Elem) -> Elem {
        self.table[x.0 as usize]
    }

    pub fn is_surjective(&self, target_size: u32) -> bool {
        let mut seen = vec![false; target_size as usize];
        for y in &self.table {
            seen[y.0 as usize] = true;
        }
        seen.iter().all(|s| *s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomSet {
    pub homs: Vec<RingHom>,
    /// Set when the residue fields differ; `homs` is then empty by convention.
    pub residue_mismatch: bool,
}

#[derive(Clone, Copy, Debug)]
enum Generator {
    /// Root of the defining polynomial of a Galois layer with `d > 1`.
    Root,
    /// Square-zero generator with `p^torsion t = 0`.
    Nil { torsion: u32 },
}

fn generators(spec: &RingSpec, out: &mut Vec<Generator>) {
    match spec {
        RingSpec::Zpm { .. } => {}
        RingSpec::GaloisRing { d, .. } => {
            if *d > 1 {
                out.push(Generator::Root);
            }
        }
        RingSpec::SquareZeroExt { base, torsion } => {
            generators(base, out);
            out.push(Generator::Nil { torsion: *torsion });
        }
    }
}

fn galois_core(spec: &RingSpec) -> (u32, u32, u32, Vec<u32>) {
    match spec {
        RingSpec::Zpm { p, m } => (*p, *m, 1, vec![0, 1]),
        RingSpec::GaloisRing { p, m, d, f } => (*p, *m, *d, f.clone()),
        RingSpec::SquareZeroExt { base, .. } => galois_core(base),
    }
}

/// Evaluates the image of a source element with coordinates `coords` (laid out
/// as `spec`) given generator images, consuming generators in layout order.
fn eval(spec: &RingSpec, coords: &[u32], images: &[Elem], target: &Ring) -> Elem {
    match spec {
        RingSpec::Zpm { .. } => target.from_int(coords[0] as i64),
        RingSpec::GaloisRing { d, .. } => {
            let mut acc = target.zero();
            let mut power = target.one();
            for i in 0..*d as usize {
                acc = target.add(acc, target.mul(target.from_int(coords[i] as i64), power));
                if i + 1 < *d as usize {
                    power = target.mul(power, images[0]);
                }
            }
            acc
        }
        RingSpec::SquareZeroExt { base, .. } => {
            let half = coords.len() / 2;
            let nb = images.len() - 1;
            let z = images[nb];
            let a = eval(base, &coords[..half], &images[..nb], target);
            let b = eval(base, &coords[half..], &images[..nb], target);
            target.add(a, target.mul(b, z))
        }
    }
}

/// Enumerates every cnl(k)-ring homomorphism `source -> target` by brute force
/// over the images of the ring generators.
pub fn hom_enumerate(source: &Ring, target: &Ring) -> HomSet {
    if source.spec().residue_field() != target.spec().residue_field() {
        return HomSet { homs: Vec::new(), residue_mismatch: true };
    }
    let (p, m, d, f) = galois_core(source.spec());
    let mut gens = Vec::new();
    generators(source.spec(), &mut gens);

    // The structure map Z -> target must kill p^m.
    if !char_divides(target, p, m) {
        return HomSet { homs: Vec::new(), residue_mismatch: false };
    }

    let residue_root = {
        // residue element with digits (0, 1, 0, ...): the class of x
        let k = target.residue_field().expect("residue field of a valid ring");
        let mut digits = vec![0u32; d as usize];
        if d > 1 {
            digits[1] = 1;
        }
        k.encode(&digits)
    };

    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|g| {
            target
                .elements()
                .filter(|y| match g {
                    Generator::Root => {
                        let mut acc = target.zero();
                        for c in f.iter().rev() {
                            acc = target.add(target.mul(acc, *y), target.from_int(*c as i64));
                        }
                        acc == target.zero() && target.residue(*y) == residue_root
                    }
                    Generator::Nil { torsion } => {
                        target.mul(*y, *y) == target.zero()
                            && scale_big(target, p, *torsion, *y) == target.zero()
                            && !target.is_unit(*y)
                    }
                })
                .collect()
        })
        .collect();

    let mut homs = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return HomSet { homs, residue_mismatch: false };
    }
    loop {
        let images: Vec<Elem> = choice.iter().zip(&candidates).map(|(i, c)| c[*i]).collect();
        let table: Vec<Elem> = source.elements().map(|x| eval(source.spec(), &source.decode(x), &images, target)).collect();
        homs.push(RingHom {
            source: source.spec().clone(),
            target: target.spec().clone(),
            generator_images: images,
            table,
        });
        // odometer
        let mut i = 0;
        loop {
            if i == choice.len() {
                return HomSet { homs, residue_mismatch: false };
            }
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// `p^e * y` computed by repeated scaling, so it stays exact when `p^e`
/// exceeds the target's first modulus.
fn scale_big(target: &Ring, p: u32, e: u32, y: Elem) -> Elem {
    let mut acc = y;
    for _ in 0..e {
        acc = target.scale(p as i64, acc);
    }
    acc
}

fn char_divides(target: &Ring, p: u32, m: u32) -> bool {
    scale_big(target, p, m, target.one()) == target.zero()
}

/// Independent full-table check: additivity, multiplicativity, unit
/// preservation, locality and identity on the residue field.
pub fn verify_hom_table(source: &Ring, target: &Ring, table: &[Elem]) -> bool {
    if table.len() != source.size() as usize {
        return false;
    }
    let h = |x: Elem| table[x.0 as usize];
    if h(source.one()) != target.one() {
        return false;
    }
    for a in source.elements() {
        if target.residue(h(a)) != source.residue(a) {
            return false;
        }
        for b in source.elements() {
            if h(source.add(a, b)) != target.add(h(a), h(b)) || h(source.mul(a, b)) != target.mul(h(a), h(b)) {
                return false;
            }
        }
    }
    true
}
