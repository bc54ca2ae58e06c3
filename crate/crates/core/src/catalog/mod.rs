//! Catalog of example constructions with their expected invariants, and a runner that
//! recomputes every checkable invariant through [`crate::index`], [`crate::singular`]
//! and [`crate::abelian`].
//!
//! The catalog is a TOML file: a `[deformation_types]` table of configured `b₂` values,
//! then `[[section]]` blocks each holding `[[section.record]]` entries.

mod verify;

pub use verify::{run_catalog, verify_record, CheckStatus, FieldCheck, Outcome, Summary, Verdict};

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::TorsionVector;
use crate::singular::{DeformationKind, SingularityClass};

/// The catalog shipped with the crate.
pub const SHIPPED_CATALOG: &str = include_str!("../../data/catalog.toml");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown construction tag {tag:?}")]
    UnknownConstruction { tag: String, line: usize },
    #[error("line {line}: record {id:?}: {message}")]
    InvalidParams {
        id: String,
        line: usize,
        message: String,
    },
    #[error("section {0:?} appears more than once")]
    DuplicateSection(String),
    #[error("record id {0:?} appears more than once")]
    DuplicateRecord(String),
    #[error("no b₂ configured for deformation type {0}")]
    MissingDeformationType(DeformationKind),
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    CY,
    IHS,
    ISV,
    PSV,
    #[serde(rename = "abelian-excluded")]
    AbelianExcluded,
    #[serde(rename = "K-trivial")]
    KTrivial,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeTag::CY => "CY",
            TypeTag::IHS => "IHS",
            TypeTag::ISV => "ISV",
            TypeTag::PSV => "PSV",
            TypeTag::AbelianExcluded => "abelian-excluded",
            TypeTag::KTrivial => "K-trivial",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TrivialMarker {
    Trivial,
}

/// Expected index: an order `≥ 2`, or `"trivial"` for `K_X = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpectedIndex {
    Order(u64),
    #[serde(with = "trivial_marker")]
    Trivial,
}

mod trivial_marker {
    use super::TrivialMarker;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        TrivialMarker::Trivial.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        TrivialMarker::deserialize(d).map(|_| ())
    }
}

impl fmt::Display for ExpectedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedIndex::Order(r) => write!(f, "{r}"),
            ExpectedIndex::Trivial => f.write_str("trivial"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub dim: u64,
    pub index: ExpectedIndex,
    #[serde(rename = "type")]
    pub type_tag: TypeTag,
    pub cover_degree: u64,
    /// Generator classification, for prime-order quotients.
    #[serde(default)]
    pub singularity: Option<SingularityClass>,
    /// Outcome of the freeness predicate, for Kummer templates.
    #[serde(default)]
    pub free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum Construction {
    HilbertOfEnriques {
        n: u64,
    },
    KummerInvolution {
        n: u64,
        u: TorsionVector,
        v: TorsionVector,
        oracle_level: Option<u64>,
    },
    EnriquesInvolutionHilb {
        n: u64,
    },
    ModuliStable {
        v_squared: u64,
        chi_odd: bool,
    },
    QuadricIntersection {
        n: u64,
    },
    KummerOrder3 {
        n: u64,
        m: u64,
        u: TorsionVector,
        v: TorsionVector,
    },
    KummerOrder4 {
        n: u64,
        m: u64,
        u: TorsionVector,
        v: TorsionVector,
    },
    PrimeQuotient {
        deformation: DeformationKind,
        p: u64,
        n: u64,
        s: u64,
        a_list: Vec<u64>,
    },
    CubicFourfoldOrder3,
    KummerOrder6 {
        n: u64,
        u: TorsionVector,
        v: TorsionVector,
    },
    KummerOrder12 {
        n: u64,
        u: TorsionVector,
        v: TorsionVector,
    },
    ModuliSemistable {
        w_squared: u64,
        chi_odd: bool,
    },
    Prym {
        g: u64,
    },
}

pub const CONSTRUCTION_TAGS: &[&str] = &[
    "hilbert-of-enriques",
    "kummer-involution",
    "enriques-involution-hilb",
    "moduli-stable",
    "quadric-intersection",
    "kummer-order3",
    "kummer-order4",
    "prime-quotient",
    "cubic-fourfold-order3",
    "kummer-order6",
    "kummer-order12",
    "moduli-semistable",
    "prym",
];

impl Construction {
    pub fn tag(&self) -> &'static str {
        match self {
            Construction::HilbertOfEnriques { .. } => "hilbert-of-enriques",
            Construction::KummerInvolution { .. } => "kummer-involution",
            Construction::EnriquesInvolutionHilb { .. } => "enriques-involution-hilb",
            Construction::ModuliStable { .. } => "moduli-stable",
            Construction::QuadricIntersection { .. } => "quadric-intersection",
            Construction::KummerOrder3 { .. } => "kummer-order3",
            Construction::KummerOrder4 { .. } => "kummer-order4",
            Construction::PrimeQuotient { .. } => "prime-quotient",
            Construction::CubicFourfoldOrder3 => "cubic-fourfold-order3",
            Construction::KummerOrder6 { .. } => "kummer-order6",
            Construction::KummerOrder12 { .. } => "kummer-order12",
            Construction::ModuliSemistable { .. } => "moduli-semistable",
            Construction::Prym { .. } => "prym",
        }
    }

    fn from_params(tag: &str, params: toml::Table) -> Result<Option<Self>, String> {
        fn get<T: for<'de> Deserialize<'de>>(params: toml::Table) -> Result<T, String> {
            toml::Value::Table(params)
                .try_into()
                .map_err(|e: toml::de::Error| e.message().to_string())
        }
        let c = match tag {
            "hilbert-of-enriques" => {
                let p: NParams = get(params)?;
                Construction::HilbertOfEnriques { n: p.n }
            }
            "kummer-involution" => {
                let p: KummerParams = get(params)?;
                Construction::KummerInvolution {
                    n: p.n,
                    u: p.u.parse_point("u")?,
                    v: p.v.parse_point("v")?,
                    oracle_level: p.oracle_level,
                }
            }
            "enriques-involution-hilb" => {
                let p: NParams = get(params)?;
                Construction::EnriquesInvolutionHilb { n: p.n }
            }
            "moduli-stable" => {
                let p: ModuliParams = get(params)?;
                Construction::ModuliStable {
                    v_squared: p.mukai_square,
                    chi_odd: p.chi_parity.is_odd(),
                }
            }
            "quadric-intersection" => {
                let p: NParams = get(params)?;
                Construction::QuadricIntersection { n: p.n }
            }
            "kummer-order3" | "kummer-order4" => {
                let p: KummerMParams = get(params)?;
                let (n, m) = (p.n, p.m);
                let u = p.u.parse_point("u")?;
                let v = p.v.parse_point("v")?;
                if tag == "kummer-order3" {
                    Construction::KummerOrder3 { n, m, u, v }
                } else {
                    Construction::KummerOrder4 { n, m, u, v }
                }
            }
            "prime-quotient" => {
                let p: PrimeParams = get(params)?;
                Construction::PrimeQuotient {
                    deformation: p.deformation.parse().map_err(|e| format!("{e}"))?,
                    p: p.p,
                    n: p.n,
                    s: p.s,
                    a_list: p.a.unwrap_or_default(),
                }
            }
            "cubic-fourfold-order3" => {
                let _: Empty = get(params)?;
                Construction::CubicFourfoldOrder3
            }
            "kummer-order6" | "kummer-order12" => {
                let p: KummerParams = get(params)?;
                if p.oracle_level.is_some() {
                    return Err("oracle_level is only supported for kummer-involution".into());
                }
                let u = p.u.parse_point("u")?;
                let v = p.v.parse_point("v")?;
                if tag == "kummer-order6" {
                    Construction::KummerOrder6 { n: p.n, u, v }
                } else {
                    Construction::KummerOrder12 { n: p.n, u, v }
                }
            }
            "moduli-semistable" => {
                let p: ModuliParams = get(params)?;
                Construction::ModuliSemistable {
                    w_squared: p.mukai_square,
                    chi_odd: p.chi_parity.is_odd(),
                }
            }
            "prym" => {
                let p: PrymParams = get(params)?;
                Construction::Prym { g: p.g }
            }
            _ => return Ok(None),
        };
        Ok(Some(c))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NParams {
    n: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrymParams {
    g: u64,
}

#[derive(Deserialize, Default)]
#[serde(transparent)]
struct PointParam(Option<String>);

impl PointParam {
    fn parse_point(&self, name: &str) -> Result<TorsionVector, String> {
        match &self.0 {
            None => Ok(TorsionVector::zero(1, 2)),
            Some(s) => {
                let t: TorsionVector = s.parse().map_err(|e| format!("{name}: {e}"))?;
                if t.len() != 2 {
                    return Err(format!("{name} needs two coordinates"));
                }
                Ok(t)
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KummerParams {
    n: u64,
    #[serde(default)]
    u: PointParam,
    #[serde(default)]
    v: PointParam,
    #[serde(default)]
    oracle_level: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KummerMParams {
    n: u64,
    m: u64,
    #[serde(default)]
    u: PointParam,
    #[serde(default)]
    v: PointParam,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn is_odd(self) -> bool {
        matches!(self, Parity::Odd)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuliParams {
    mukai_square: u64,
    chi_parity: Parity,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrimeParams {
    deformation: String,
    p: u64,
    n: u64,
    s: u64,
    #[serde(default)]
    a: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleRecord {
    pub id: String,
    pub paper_section: String,
    pub construction: Construction,
    pub expected: Expected,
    /// Per-field provenance of the expected values.
    pub provenance: BTreeMap<String, String>,
    pub note: Option<String>,
    /// 1-based line of the record's construction tag in the catalog file.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationConfig {
    pub b2: u64,
    #[serde(default)]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub id: String,
    pub title: String,
    pub records: Vec<ExampleRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Catalog {
    pub deformation_types: BTreeMap<DeformationKind, DeformationConfig>,
    pub sections: Vec<Section>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    deformation_types: BTreeMap<String, DeformationConfig>,
    #[serde(default)]
    section: Vec<SectionFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionFile {
    id: String,
    title: String,
    #[serde(default)]
    record: Vec<RecordFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordFile {
    id: String,
    construction: toml::Spanned<String>,
    #[serde(default)]
    params: toml::Table,
    expected: Expected,
    #[serde(default)]
    provenance: BTreeMap<String, String>,
    #[serde(default)]
    note: Option<String>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| CatalogError::Parse {
            line: e.span().map_or(0, |s| line_of(text, s.start)),
            message: e.message().to_string(),
        })?;

        let mut deformation_types = BTreeMap::new();
        for (name, cfg) in file.deformation_types {
            let kind: DeformationKind = name.parse().map_err(|e| CatalogError::Parse {
                line: 0,
                message: format!("{e}"),
            })?;
            deformation_types.insert(kind, cfg);
        }

        let mut sections = Vec::new();
        let mut seen_sections = std::collections::HashSet::new();
        let mut seen_records = std::collections::HashSet::new();
        for s in file.section {
            if !seen_sections.insert(s.id.clone()) {
                return Err(CatalogError::DuplicateSection(s.id));
            }
            let mut records = Vec::new();
            for r in s.record {
                let line = line_of(text, r.construction.span().start);
                let tag = r.construction.get_ref();
                let construction = Construction::from_params(tag, r.params)
                    .map_err(|message| CatalogError::InvalidParams {
                        id: r.id.clone(),
                        line,
                        message,
                    })?
                    .ok_or_else(|| CatalogError::UnknownConstruction {
                        tag: tag.clone(),
                        line,
                    })?;
                if let Construction::PrimeQuotient { deformation, .. } = &construction {
                    if !deformation_types.contains_key(deformation) {
                        return Err(CatalogError::MissingDeformationType(*deformation));
                    }
                }
                if !seen_records.insert(r.id.clone()) {
                    return Err(CatalogError::DuplicateRecord(r.id));
                }
                records.push(ExampleRecord {
                    id: r.id,
                    paper_section: s.id.clone(),
                    construction,
                    expected: r.expected,
                    provenance: r.provenance,
                    note: r.note,
                    line,
                });
            }
            sections.push(Section {
                id: s.id,
                title: s.title,
                records,
            });
        }
        Ok(Catalog {
            deformation_types,
            sections,
        })
    }

    pub fn shipped() -> Catalog {
        Catalog::parse(SHIPPED_CATALOG).expect("shipped catalog parses")
    }

    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Catalog::parse(&text)
    }

    pub fn records(&self) -> impl Iterator<Item = &ExampleRecord> {
        self.sections.iter().flat_map(|s| s.records.iter())
    }

    pub fn b2(&self, kind: DeformationKind) -> Option<u64> {
        self.deformation_types.get(&kind).map(|c| c.b2)
    }

    /// Records whose section id, construction tag or record id equals `filter`.
    pub fn filtered<'a>(&'a self, filter: Option<&'a str>) -> Vec<&'a ExampleRecord> {
        self.records()
            .filter(|r| match filter {
                None => true,
                Some(f) => r.paper_section == f || r.construction.tag() == f || r.id == f,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[deformation_types]
K3n = { b2 = 23 }

[[section]]
id = "A"
title = "first"

[[section.record]]
id = "prym-2"
construction = "prym"
params = { g = 2 }
expected = { dim = 6, index = 2, type = "ISV", cover_degree = 2 }
"#;

    #[test]
    fn parses_minimal_catalog() {
        let c = Catalog::parse(MINIMAL).unwrap();
        assert_eq!(c.sections.len(), 1);
        let r = &c.sections[0].records[0];
        assert_eq!(r.construction, Construction::Prym { g: 2 });
        assert_eq!(r.paper_section, "A");
        assert_eq!(r.line, 11);
        assert_eq!(c.b2(DeformationKind::K3n), Some(23));
    }

    #[test]
    fn unknown_tag_reports_line() {
        let text = MINIMAL.replace("\"prym\"", "\"elliptic-fibration\"");
        match Catalog::parse(&text) {
            Err(CatalogError::UnknownConstruction { tag, line }) => {
                assert_eq!(tag, "elliptic-fibration");
                assert_eq!(line, 11);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = MINIMAL.replace("params = { g = 2 }", "params = { g = }");
        match Catalog::parse(&text) {
            Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_params_are_rejected() {
        let text = MINIMAL.replace("{ g = 2 }", "{ genus = 2 }");
        assert!(matches!(
            Catalog::parse(&text),
            Err(CatalogError::InvalidParams { line: 11, .. })
        ));
    }

    #[test]
    fn trivial_index_parses() {
        let text = MINIMAL.replace("index = 2", "index = \"trivial\"");
        let c = Catalog::parse(&text).unwrap();
        assert_eq!(c.sections[0].records[0].expected.index, ExpectedIndex::Trivial);
        let text = MINIMAL.replace("index = 2", "index = \"tiny\"");
        assert!(Catalog::parse(&text).is_err());
    }

    #[test]
    fn shipped_catalog_parses() {
        let c = Catalog::shipped();
        assert!(c.records().count() > 13);
    }
}
