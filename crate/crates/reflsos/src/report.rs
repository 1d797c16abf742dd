//! Serialisable views of core results.

use serde::Serialize;

use reflsos_core::dualcone::{FamilyReport, SampleRecord};
use reflsos_core::groups::{Family, InvariantSpace};
use reflsos_core::isotypic::{Decomposition, StabilizationReport};
use reflsos_core::octics::LimitReport;
use reflsos_core::specht::Catalog;
use reflsos_core::Poly;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub config: C,
    pub ok: bool,
    pub result: R,
}

impl<C: Serialize, R: Serialize> Envelope<C, R> {
    pub fn new(command: &str, config: C, ok: bool, result: R) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            tool: "reflsos",
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            ok,
            result,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SampleJson {
    pub family: String,
    pub param: f64,
    pub point: Vec<f64>,
    pub margin: f64,
    pub member: bool,
    pub generic: bool,
    pub w2_dim: usize,
    pub extremal: bool,
}

impl From<&SampleRecord> for SampleJson {
    fn from(s: &SampleRecord) -> Self {
        SampleJson {
            family: s.family.clone(),
            param: s.param,
            point: s.point.clone(),
            margin: s.margin,
            member: s.member,
            generic: s.generic,
            w2_dim: s.w2_dim,
            extremal: s.extremal,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CaseReport {
    pub case: String,
    pub passed: bool,
    pub elapsed_ms: u128,
    pub checks: Vec<CheckJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleJson>,
}

impl CaseReport {
    pub fn new(case: &str) -> Self {
        CaseReport { case: case.to_string(), passed: true, elapsed_ms: 0, checks: Vec::new(), samples: Vec::new() }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.passed &= passed;
        self.checks.push(CheckJson { name: name.to_string(), passed, detail });
    }

    pub fn from_family(r: &FamilyReport) -> Self {
        let mut c = CaseReport::new(&r.case);
        for k in &r.checks {
            c.check(&k.name, k.passed, k.detail.clone());
        }
        c.samples = r.samples.iter().map(SampleJson::from).collect();
        c
    }

    pub fn render(&self) -> String {
        let mut s = format!("{} {}\n", if self.passed { "PASS" } else { "FAIL" }, self.case);
        for c in &self.checks {
            s.push_str(&format!("  [{}] {}: {}\n", if c.passed { "ok" } else { "FAILED" }, c.name, c.detail));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntryJson {
    pub isotype: String,
    pub t: String,
    pub s: String,
    pub degree: u32,
    pub poly: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogJson {
    pub group: String,
    pub max_degree: Option<u32>,
    pub weighted_size: u128,
    pub entries: Vec<CatalogEntryJson>,
}

impl CatalogJson {
    pub fn new(c: &Catalog) -> Self {
        let fam = c.group.family();
        CatalogJson {
            group: c.group.label(),
            max_degree: c.max_degree,
            weighted_size: c.weighted_size(),
            entries: c
                .entries
                .iter()
                .map(|e| CatalogEntryJson {
                    isotype: e.label.iso.render(fam),
                    t: e.label.t.to_string(),
                    s: e.label.s.to_string(),
                    degree: e.degree,
                    poly: e.poly.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorJson {
    pub k: u32,
    pub orientation: u8,
    pub t: String,
    pub s: String,
    pub invariant: String,
    pub specht: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockJson {
    pub isotype: String,
    pub dim: u128,
    pub multiplicity: usize,
    pub generators: Vec<GeneratorJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionJson {
    pub group: String,
    pub degree: u32,
    pub coords: String,
    pub symbols: Vec<String>,
    pub weighted_dim: u128,
    pub ambient_dim: u128,
    pub blocks: Vec<BlockJson>,
}

impl DecompositionJson {
    pub fn new(dec: &Decomposition, with_matrices: bool) -> Self {
        let fam: Family = dec.group.family();
        let space: Option<&InvariantSpace> = dec.space2d.as_ref();
        DecompositionJson {
            group: dec.group.label(),
            degree: dec.degree,
            coords: dec.basis.coords.tag().to_string(),
            symbols: dec.basis.names.clone(),
            weighted_dim: dec.weighted_dim(),
            ambient_dim: dec.ambient_dim(),
            blocks: dec
                .blocks
                .iter()
                .map(|b| BlockJson {
                    isotype: b.label.render(fam),
                    dim: b.label.dim(),
                    multiplicity: b.size(),
                    generators: b
                        .generators
                        .iter()
                        .map(|g| GeneratorJson {
                            k: g.k,
                            orientation: g.orientation,
                            t: g.t.to_string(),
                            s: g.s.to_string(),
                            invariant: dec
                                .basis
                                .format(&Poly::monomial(dec.basis.len(), g.z.clone(), reflsos_core::poly::qi(1))),
                            specht: g.specht.to_string(),
                        })
                        .collect(),
                    matrix: match (with_matrices, space) {
                        (true, Some(sp)) => b
                            .b_as_z(sp)
                            .iter()
                            .map(|r| r.iter().map(|p| dec.basis.format(p)).collect())
                            .collect(),
                        _ => Vec::new(),
                    },
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationRowJson {
    pub n: usize,
    pub multiplicities: Vec<(String, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoAuditJson {
    pub n: usize,
    pub label: String,
    pub k: usize,
    pub relevant: usize,
    pub relevant_next: usize,
    pub in_pi: bool,
    pub charge_preserved: bool,
    pub bijective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationJson {
    pub family: String,
    pub degree: u32,
    pub constant: bool,
    pub audits_pass: bool,
    pub rows: Vec<StabilizationRowJson>,
    pub audits: Vec<RhoAuditJson>,
}

impl StabilizationJson {
    pub fn new(r: &StabilizationReport) -> Self {
        let fam = r.family;
        StabilizationJson {
            family: fam.letter().to_string(),
            degree: r.degree,
            constant: r.constant,
            audits_pass: r.audits_pass(),
            rows: r
                .rows
                .iter()
                .map(|(n, t)| StabilizationRowJson {
                    n: *n,
                    multiplicities: t.iter().map(|(l, q)| (l.render(fam), *q)).collect(),
                })
                .collect(),
            audits: r
                .audits
                .iter()
                .map(|a| RhoAuditJson {
                    n: a.n,
                    label: a.label.render(fam),
                    k: a.k,
                    relevant: a.relevant,
                    relevant_next: a.relevant_next,
                    in_pi: a.in_pi,
                    charge_preserved: a.charge_preserved,
                    bijective: a.bijective,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitJson {
    pub rows: Vec<(u64, f64, Vec<f64>)>,
    pub fitted_c: f64,
    pub monotone: bool,
}

impl LimitJson {
    pub fn new(r: &LimitReport) -> Self {
        LimitJson {
            rows: r.rows.iter().map(|x| (x.n, x.diff, x.per_block.clone())).collect(),
            fitted_c: r.c,
            monotone: r.monotone,
        }
    }
}
