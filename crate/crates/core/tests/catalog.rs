use std::collections::BTreeSet;

use logenriques::catalog::{run_catalog, Catalog, CONSTRUCTION_TAGS};

const SECTIONS: &[&str] = &[
    "6.1.1", "6.1.2", "6.1.3", "6.1.4", "6.1.5", "6.1.6", "6.1.7", "6.2.1", "6.2.2", "6.2.3",
    "6.2.4", "6.3.1", "6.3.2",
];

#[test]
fn every_section_appears_exactly_once() {
    let cat = Catalog::shipped();
    let ids: Vec<&str> = cat.sections.iter().map(|s| s.id.as_str()).collect();
    assert_eq!(ids, SECTIONS);
    for s in &cat.sections {
        assert!(!s.records.is_empty(), "section {} has no records", s.id);
    }
}

#[test]
fn every_construction_tag_is_exercised() {
    let cat = Catalog::shipped();
    let used: BTreeSet<&str> = cat.records().map(|r| r.construction.tag()).collect();
    let all: BTreeSet<&str> = CONSTRUCTION_TAGS.iter().copied().collect();
    assert_eq!(used, all);
}

#[test]
fn every_expected_field_has_provenance() {
    let cat = Catalog::shipped();
    for r in cat.records() {
        for field in ["dim", "index", "type", "cover_degree"] {
            assert!(r.provenance.contains_key(field), "{}: no provenance for {field}", r.id);
        }
        if r.expected.free.is_some() {
            assert!(r.provenance.contains_key("free"), "{}", r.id);
        }
        if r.expected.singularity.is_some() {
            assert!(r.provenance.contains_key("singularity"), "{}", r.id);
        }
    }
}

#[test]
fn full_catalog_has_no_failures() {
    let cat = Catalog::shipped();
    let s = run_catalog(&cat, None);
    let failing: Vec<_> = s.verdicts.iter().filter(|v| v.failures().next().is_some()).collect();
    assert!(failing.is_empty(), "{failing:#?}");
    assert_eq!(s.exit_code(), 0);
    assert_eq!(s.passed + s.not_checkable, s.verdicts.len());
}

#[test]
fn order6_rows_cover_all_residues() {
    let cat = Catalog::shipped();
    let s = run_catalog(&cat, Some("6.2.3"));
    let residues: BTreeSet<u64> = cat
        .filtered(Some("6.2.3"))
        .iter()
        .map(|r| r.expected.dim / 2 % 6)
        .collect();
    assert_eq!(residues, (0..6).collect());
    assert_eq!(s.verdicts.len(), 6);
}

#[test]
fn runs_are_deterministic() {
    let cat = Catalog::shipped();
    assert_eq!(run_catalog(&cat, None), run_catalog(&cat, None));
}
