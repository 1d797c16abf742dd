//! Reproduction suite: golden comparisons and structural checks.

use std::time::Instant;

use reflsos_core::dualcone::{verify_family, FamilyCase};
use reflsos_core::groups::{Coords, Family, ReflectionGroup};
use reflsos_core::harmonics::{coinvariant_hilbert_series, harmonic_basis};
use reflsos_core::isotypic::{decompose, multiplicity, stabilization_report};
use reflsos_core::octics::{limit_report, verify_b3_blocks, verify_bn_octics};
use reflsos_core::specht::{coinvariant_catalog, IsotypeLabel};
use reflsos_core::tableaux::MultiPartition;

use crate::error::{CliError, Result};
use crate::report::{CaseReport, LimitJson, StabilizationJson};

fn timed<F: FnOnce() -> Result<CaseReport>>(f: F) -> Result<CaseReport> {
    let t = Instant::now();
    let mut r = f()?;
    r.elapsed_ms = t.elapsed().as_millis();
    Ok(r)
}

/// Computed `B_3` octic blocks against the reference matrices.
pub fn b3_blocks() -> Result<CaseReport> {
    timed(|| {
        let g = ReflectionGroup::new(Family::B, 3)?;
        let dec = decompose(&g, 4, Coords::ElementarySq)?;
        Ok(CaseReport::from_family(&verify_b3_blocks(&dec)?))
    })
}

pub fn b3_dual(grid: usize) -> Result<CaseReport> {
    timed(|| Ok(CaseReport::from_family(&verify_family(FamilyCase::B3Octics, grid, 0)?)))
}

pub fn d4_quartics(samples: usize, seed: u64) -> Result<CaseReport> {
    timed(|| {
        let mut r = CaseReport::from_family(&verify_family(FamilyCase::D4Quartics, samples, seed)?);
        let g = ReflectionGroup::new(Family::D, 4)?;
        let cat = coinvariant_catalog(&g, Some(2))?;
        r.check(
            "generators",
            cat.entries.len() == 4,
            cat.entries.iter().map(|e| e.poly.to_string()).collect::<Vec<_>>().join("; "),
        );
        Ok(r)
    })
}

pub fn bn_octics(n: usize) -> Result<CaseReport> {
    timed(|| Ok(CaseReport::from_family(&verify_bn_octics(n)?)))
}

pub fn limits(ns: &[u64]) -> Result<(CaseReport, LimitJson)> {
    let t = Instant::now();
    let lr = limit_report(ns)?;
    let mut r = CaseReport::new("limits");
    let rows: Vec<String> = lr.rows.iter().map(|x| format!("n={} diff={:.3e}", x.n, x.diff)).collect();
    r.check("O(1/n)", lr.passed(), format!("C = {:.4}; {}", lr.c, rows.join(", ")));
    r.check("monotone", lr.monotone, String::new());
    r.elapsed_ms = t.elapsed().as_millis();
    Ok((r, LimitJson::new(&lr)))
}

pub const CATALOG_GROUPS: [&str; 6] = ["S:3", "S:4", "B:2", "B:3", "D:3", "D:4"];
pub const HARMONIC_GROUPS: [&str; 4] = ["S:3", "S:4", "B:2", "B:3"];

pub fn regular_representation(cap: usize) -> Result<CaseReport> {
    timed(|| {
        let mut r = CaseReport::new("regular-rep");
        for gs in CATALOG_GROUPS {
            let g: ReflectionGroup = gs.parse()?;
            let c = coinvariant_catalog(&g, None)?;
            r.check(&format!("catalog {}", g), c.weighted_size() == g.order(), format!("{} vs |G| = {}", c.weighted_size(), g.order()));
        }
        for gs in HARMONIC_GROUPS {
            let g: ReflectionGroup = gs.parse()?;
            let h = harmonic_basis(&g, cap)?;
            let hs = coinvariant_hilbert_series(&g);
            let graded: Vec<u128> = h.graded.iter().map(|&x| x as u128).collect();
            r.check(
                &format!("harmonics {}", g),
                h.dim() as u128 == g.order() && graded == hs,
                format!("dim {} graded {:?}", h.dim(), h.graded),
            );
        }
        Ok(r)
    })
}

pub const DIMENSION_CASES: [(&str, u32, Coords); 6] = [
    ("B:3", 4, Coords::ElementarySq),
    ("D:4", 2, Coords::PowerSums),
    ("S:4", 2, Coords::PowerSums),
    ("S:3", 3, Coords::PowerSums),
    ("B:4", 4, Coords::PowerMeans),
    ("D:3", 3, Coords::PowerSums),
];

pub fn dimensions() -> Result<CaseReport> {
    timed(|| {
        let mut r = CaseReport::new("dimensions");
        for (gs, d, c) in DIMENSION_CASES {
            let g: ReflectionGroup = gs.parse()?;
            let dec = reflsos_core::isotypic::symmetry_adapted_basis(&g, d, c)?;
            r.check(
                &format!("{} d={}", g, d),
                dec.weighted_dim() == dec.ambient_dim(),
                format!("{} = C(n+d-1,d) = {}", dec.weighted_dim(), dec.ambient_dim()),
            );
        }
        Ok(r)
    })
}

pub fn stabilization(family: Family, d: u32, ns: &[usize]) -> Result<(CaseReport, StabilizationJson)> {
    let t = Instant::now();
    let rep = stabilization_report(family, d, ns)?;
    let mut r = CaseReport::new(&format!("stabilization {} d={}", family.letter(), d));
    r.check("constant", rep.constant, format!("n in {:?}", ns));
    r.check("rho audit", rep.audits_pass(), format!("{} label steps", rep.audits.len()));
    r.elapsed_ms = t.elapsed().as_millis();
    Ok((r, StabilizationJson::new(&rep)))
}

/// `(2,2)` in `H_{4,4}` against `(3,2)` in `H_{5,4}` for the symmetric group.
pub fn counterexample() -> Result<CaseReport> {
    timed(|| {
        let g4 = ReflectionGroup::new(Family::S, 4)?;
        let g5 = ReflectionGroup::new(Family::S, 5)?;
        let l4 = IsotypeLabel::plain(MultiPartition::from_parts(&[2, 2], &[])?);
        let l5 = IsotypeLabel::plain(MultiPartition::from_parts(&[3, 2], &[])?);
        let (a, b) = (multiplicity(&g4, &l4, 4), multiplicity(&g5, &l5, 4));
        let mut r = CaseReport::new("counterexample n=4 to 5");
        r.check("strict increase", a < b, format!("q(2,2) = {} in H_4,4; q(3,2) = {} in H_5,4", a, b));
        Ok(r)
    })
}

/// Inclusive `a..b` (or `a..=b`), or a comma list.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("bad range '{}'", s));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim();
        let end: usize = b.strip_prefix('=').unwrap_or(b).parse().map_err(|_| bad())?;
        if end < a {
            return Err(bad());
        }
        return Ok((a..=end).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

pub fn parse_family(s: &str) -> Result<Family> {
    match s {
        "S" | "s" | "A" => Ok(Family::S),
        "B" | "b" => Ok(Family::B),
        "D" | "d" => Ok(Family::D),
        _ => Err(CliError::Usage(format!("unknown family '{}'", s))),
    }
}

/// All cases of the suite with default parameters.
pub fn all_cases() -> Result<Vec<CaseReport>> {
    let mut out = vec![b3_blocks()?, b3_dual(64)?, d4_quartics(200, 1)?];
    for n in 4..=6 {
        out.push(bn_octics(n)?);
    }
    out.push(limits(&[10, 100, 1000])?.0);
    out.push(regular_representation(10_000)?);
    out.push(dimensions()?);
    out.push(stabilization(Family::S, 4, &[8, 9, 10, 11])?.0);
    out.push(stabilization(Family::B, 4, &[8, 9, 10, 11])?.0);
    out.push(stabilization(Family::D, 4, &[9, 10, 11])?.0);
    out.push(counterexample()?);
    Ok(out)
}
