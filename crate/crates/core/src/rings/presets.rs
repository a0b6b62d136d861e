use super::{is_prime, Elem, Ring, RingSpec};
use crate::error::{Error, Result};

const PRESETS: &[&str] = &["f2", "f3", "f4", "z4", "z9", "gr4_2", "f2_dual", "f3_dual", "f4_dual", "bc_ring"];

fn f4_poly() -> Vec<u32> {
    vec![1, 1, 1]
}

fn dual(base: RingSpec) -> RingSpec {
    RingSpec::SquareZeroExt { base: Box::new(base), torsion: 1 }
}

/// Spec for a named ring. Besides the catalog names, `z<N>` for a prime power
/// `N` and `f<p>` for a prime `p` are accepted.
pub fn preset_spec(key: &str) -> Result<RingSpec> {
    let spec = match key {
        "f2" => RingSpec::Zpm { p: 2, m: 1 },
        "f3" => RingSpec::Zpm { p: 3, m: 1 },
        "f4" => RingSpec::GaloisRing { p: 2, m: 1, d: 2, f: f4_poly() },
        "z4" => RingSpec::Zpm { p: 2, m: 2 },
        "z9" => RingSpec::Zpm { p: 3, m: 2 },
        "gr4_2" => RingSpec::GaloisRing { p: 2, m: 2, d: 2, f: f4_poly() },
        "f2_dual" => dual(RingSpec::Zpm { p: 2, m: 1 }),
        "f3_dual" | "f3_dual_t" => dual(RingSpec::Zpm { p: 3, m: 1 }),
        "f4_dual" => dual(RingSpec::GaloisRing { p: 2, m: 1, d: 2, f: f4_poly() }),
        "bc_ring" => dual(RingSpec::Zpm { p: 2, m: 2 }),
        other => return parse_generic(other),
    };
    Ok(spec)
}

fn parse_generic(key: &str) -> Result<RingSpec> {
    let unknown = || Error::UnknownRing(key.to_string());
    if let Some(rest) = key.strip_prefix('z') {
        let n: u32 = rest.parse().map_err(|_| unknown())?;
        let p = (2..=n).find(|d| n.is_multiple_of(*d)).ok_or_else(unknown)?;
        let mut m = 0;
        let mut v = n;
        while v.is_multiple_of(p) {
            v /= p;
            m += 1;
        }
        if v != 1 {
            return Err(unknown());
        }
        return Ok(RingSpec::Zpm { p, m });
    }
    if let Some(rest) = key.strip_prefix('f') {
        let p: u32 = rest.parse().map_err(|_| unknown())?;
        if is_prime(p) {
            return Ok(RingSpec::Zpm { p, m: 1 });
        }
    }
    Err(unknown())
}

pub fn preset(key: &str) -> Result<Ring> {
    Ring::new(preset_spec(key)?)
}

pub fn preset_keys() -> &'static [&'static str] {
    PRESETS
}

/// Parses `"<ring>:<digits>"`, e.g. `"z9:5"` or `"gr4_2:[3,1]"`.
pub fn parse_element(s: &str) -> Result<(Ring, Elem)> {
    let (key, lit) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected <ring>:<digits>, got {:?}", s)))?;
    let ring = preset(key)?;
    let e = ring.parse_elem(lit)?;
    Ok((ring, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds() {
        for key in preset_keys() {
            let r = preset(key).unwrap();
            assert!(r.check_locality(), "{} is not local", key);
        }
        assert_eq!(preset("z27").unwrap().size(), 27);
        assert!(preset("z12").is_err());
        assert!(preset("nope").is_err());
    }

    #[test]
    fn element_strings() {
        let (r, e) = parse_element("z9:5").unwrap();
        assert_eq!(e, r.from_int(5));
        let (g, e) = parse_element("gr4_2:[3,1]").unwrap();
        assert_eq!(g.decode(e), vec![3, 1]);
        assert!(parse_element("z9").is_err());
    }
}
