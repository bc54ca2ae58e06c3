use std::fmt::Display;

use rayon::prelude::*;
use serde::Serialize;

use super::{Catalog, Construction, ExampleRecord, Expected, ExpectedIndex, TypeTag};
use crate::abelian::{
    self, brute_force_fixed_configurations, CmType, KummerScenario, SurfaceAffineAuto, Unit,
    DEFAULT_ORACLE_BUDGET,
};
use crate::arith::TorsionVector;
use crate::index::{self, CyTypeConstraint, IndexResult};
use crate::singular::{self, DeformationType, FixedComponentModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass { value: String },
    Fail { got: String, expected: String },
    NotCheckable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldCheck {
    pub field: String,
    #[serde(flatten)]
    pub status: CheckStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    NotCheckable,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::NotCheckable => "not-checkable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub id: String,
    pub paper_section: String,
    pub construction: &'static str,
    pub outcome: Outcome,
    pub checks: Vec<FieldCheck>,
}

impl Verdict {
    pub fn failures(&self) -> impl Iterator<Item = &FieldCheck> {
        self.checks
            .iter()
            .filter(|c| matches!(c.status, CheckStatus::Fail { .. }))
    }

    pub fn check(&self, field: &str) -> Option<&CheckStatus> {
        self.checks.iter().find(|c| c.field == field).map(|c| &c.status)
    }
}

/// Accumulates field checks for one record.
struct Checks(Vec<FieldCheck>);

impl Checks {
    fn push(&mut self, field: &str, status: CheckStatus) {
        self.0.push(FieldCheck {
            field: field.to_string(),
            status,
        });
    }

    fn eq<T: PartialEq + Display>(&mut self, field: &str, got: T, expected: T) {
        let status = if got == expected {
            CheckStatus::Pass {
                value: got.to_string(),
            }
        } else {
            CheckStatus::Fail {
                got: got.to_string(),
                expected: expected.to_string(),
            }
        };
        self.push(field, status);
    }

    /// A hypothesis or derived condition that must hold.
    fn holds(&mut self, field: &str, ok: bool, what: impl Into<String>) {
        let what = what.into();
        let status = if ok {
            CheckStatus::Pass { value: what }
        } else {
            CheckStatus::Fail {
                got: format!("not ({what})"),
                expected: what,
            }
        };
        self.push(field, status);
    }

    fn not_checkable(&mut self, field: &str, reason: impl Into<String>) {
        self.push(
            field,
            CheckStatus::NotCheckable {
                reason: reason.into(),
            },
        );
    }

    fn error(&mut self, field: &str, err: impl Display, expected: impl Display) {
        self.push(
            field,
            CheckStatus::Fail {
                got: format!("error: {err}"),
                expected: expected.to_string(),
            },
        );
    }

    fn index(&mut self, got: IndexResult, expected: &Expected) {
        let got = match got {
            IndexResult::KTrivial => ExpectedIndex::Trivial,
            IndexResult::LogEnriques { index } => ExpectedIndex::Order(index),
        };
        self.eq("index", got, expected.index);
    }

    fn dim(&mut self, got: u64, expected: &Expected) {
        self.eq("dim", got, expected.dim);
    }

    fn cover_degree(&mut self, got: u64, expected: &Expected) {
        self.eq("cover_degree", got, expected.cover_degree);
    }

    fn type_tag(&mut self, expected: &Expected, computed_trivial: Option<bool>) {
        match expected.type_tag {
            TypeTag::CY => match index::cy_type_constraints(expected.dim) {
                Ok(CyTypeConstraint::Forced { .. }) => self.push(
                    "type",
                    CheckStatus::Pass {
                        value: "CY cover of even dimension".into(),
                    },
                ),
                Ok(CyTypeConstraint::Impossible { reason }) => self.push(
                    "type",
                    CheckStatus::Fail {
                        got: reason,
                        expected: "CY cover of even dimension".into(),
                    },
                ),
                Err(e) => self.error("type", e, "CY"),
            },
            TypeTag::KTrivial => match computed_trivial {
                Some(t) => self.holds("type", t, "K_X = 0"),
                None => self.not_checkable("type", "no index computation for this construction"),
            },
            other => self.not_checkable(
                "type",
                format!("{other}-type of the cover is geometric input, not computed"),
            ),
        }
    }
}

fn outcome(checks: &[FieldCheck]) -> Outcome {
    if checks
        .iter()
        .any(|c| matches!(c.status, CheckStatus::Fail { .. }))
    {
        Outcome::Fail
    } else if checks
        .iter()
        .any(|c| matches!(c.status, CheckStatus::Pass { .. }))
    {
        Outcome::Pass
    } else {
        Outcome::NotCheckable
    }
}

fn unit(curve: CmType, name: &str) -> Unit {
    curve.parse_unit(name).expect("fixed template unit")
}

/// Checks shared by every Kummer-fiber construction: fiber preservation, order,
/// multiplier primitivity, canonical index and optionally freeness.
fn kummer_checks(
    c: &mut Checks,
    expected: &Expected,
    f: SurfaceAffineAuto,
    n: u64,
    etale: bool,
) -> Option<(SurfaceAffineAuto, IndexResult)> {
    c.dim(2 * n, expected);
    let holds = abelian::preserves_kummer_fiber(&f, n);
    c.holds("fiber", holds, format!("u, v are {}-torsion", n + 1));
    let sc = match KummerScenario::new(f.clone(), n) {
        Ok(sc) => sc,
        Err(_) => return None,
    };
    let report = match abelian::kummer_quotient_classification(&sc) {
        Ok(r) => r,
        Err(e) => {
            c.error("index", e, expected.index);
            return None;
        }
    };
    c.cover_degree(report.order, expected);
    c.holds(
        "multiplier",
        index::is_purely_nonsymplectic(report.order, report.k),
        format!("ξ_{}^{} is primitive", report.order, report.k),
    );
    c.index(report.index, expected);
    if etale {
        c.holds(
            "etale_chi",
            report.etale_chi_constraint,
            format!("{} divides n+1 = {}", report.order, n + 1),
        );
        c.eq("index_equals_order", report.index.torsion_order(), report.order);
        let fp = abelian::fixed_points_exist_on_surface(&f);
        c.holds(
            "unit_eigenvalue",
            fp.exists || abelian::has_unit_eigenvalue(&f),
            "f free on A forces eigenvalue 1",
        );
    }
    if let Some(want) = expected.free {
        match &report.freeness {
            Some(fr) => c.eq("free", fr.free, want),
            None => c.error(
                "free",
                report.freeness_note.clone().unwrap_or_default(),
                want,
            ),
        }
    }
    c.not_checkable("order_on_fiber", report.order_note);
    Some((f, report.index))
}

fn kummer_auto(
    m1: Unit,
    m2: Unit,
    u: &TorsionVector,
    v: &TorsionVector,
) -> Result<SurfaceAffineAuto, abelian::AbelianError> {
    SurfaceAffineAuto::from_parts(m1, m2, u, v)
}

fn check_record(record: &ExampleRecord, catalog: &Catalog) -> Vec<FieldCheck> {
    let e = &record.expected;
    let mut c = Checks(Vec::new());
    match &record.construction {
        Construction::HilbertOfEnriques { n } => {
            c.holds("n", *n >= 2, "n ≥ 2");
            c.dim(2 * n, e);
            match index::cy_type_constraints(2 * n) {
                Ok(CyTypeConstraint::Forced {
                    cover_degree,
                    index,
                }) => {
                    c.index(IndexResult::LogEnriques { index }, e);
                    c.cover_degree(cover_degree, e);
                }
                Ok(CyTypeConstraint::Impossible { reason }) => c.error("index", reason, e.index),
                Err(err) => c.error("index", err, e.index),
            }
            c.type_tag(e, Some(false));
            c.not_checkable("geometry", "Hilb^n of an Enriques surface is taken as given");
        }
        Construction::KummerInvolution {
            n,
            u,
            v,
            oracle_level,
        } => {
            c.holds("n", n % 2 == 1, "n odd");
            let f = kummer_auto(unit(CmType::Generic, "-1"), unit(CmType::Generic, "1"), u, v);
            match f {
                Ok(f) => {
                    kummer_checks(&mut c, e, f.clone(), *n, true);
                    if let Some(level) = oracle_level {
                        match brute_force_fixed_configurations(&f, *n, *level, DEFAULT_ORACLE_BUDGET)
                        {
                            Ok(r) => c.eq(
                                "oracle_fixed_reduced_configurations",
                                r.reduced().count(),
                                0,
                            ),
                            Err(err) => c.error("oracle_fixed_reduced_configurations", err, 0),
                        }
                    }
                }
                Err(err) => c.error("automorphism", err, "valid translation"),
            }
            c.type_tag(e, None);
        }
        Construction::EnriquesInvolutionHilb { n } => {
            c.holds("n", n % 2 == 1, "n odd");
            c.dim(2 * n, e);
            c.cover_degree(2, e);
            c.holds("etale_chi", index::etale_chi_constraint(*n, 2), "2 divides n+1");
            match index::canonical_index(*n, 2) {
                Ok(r) => c.index(r, e),
                Err(err) => c.error("index", err, e.index),
            }
            c.type_tag(e, None);
            c.not_checkable("geometry", "existence of the Enriques involution is taken as given");
        }
        Construction::ModuliStable { v_squared, chi_odd } => {
            c.holds("mukai_parity", v_squared % 2 == 0, "v² even");
            c.holds("chi", *chi_odd, "χ odd");
            let dim = v_squared + 2;
            c.dim(dim, e);
            c.cover_degree(2, e);
            let n = dim / 2;
            c.holds("etale_chi", index::etale_chi_constraint(n, 2), "2 divides n+1");
            match index::canonical_index(n, 2) {
                Ok(r) => c.index(r, e),
                Err(err) => c.error("index", err, e.index),
            }
            c.type_tag(e, None);
            c.not_checkable("geometry", "freeness of ι* on the moduli space is taken as given");
        }
        Construction::QuadricIntersection { n } => {
            // n + 1 quadrics in P^{2n+1}
            let dim = (2 * n + 1) - (n + 1);
            c.dim(dim, e);
            c.holds("n", n % 2 == 0, "n even");
            match index::cy_type_constraints(dim) {
                Ok(CyTypeConstraint::Forced {
                    cover_degree,
                    index,
                }) => {
                    c.index(IndexResult::LogEnriques { index }, e);
                    c.cover_degree(cover_degree, e);
                }
                Ok(CyTypeConstraint::Impossible { reason }) => c.error("index", reason, e.index),
                Err(err) => c.error("index", err, e.index),
            }
            c.type_tag(e, Some(false));
            c.not_checkable(
                "geometry",
                "smoothness and disjointness from the fixed locus need generic quadrics",
            );
        }
        Construction::KummerOrder3 { n, m, u, v } => {
            c.eq("m", n + 1, 3 * m);
            match kummer_auto(unit(CmType::Generic, "1"), unit(CmType::Eisenstein, "w"), u, v) {
                Ok(f) => {
                    kummer_checks(&mut c, e, f, *n, true);
                }
                Err(err) => c.error("automorphism", err, "valid translation"),
            }
            c.type_tag(e, None);
        }
        Construction::KummerOrder4 { n, m, u, v } => {
            c.eq("m", n + 1, 4 * m);
            match kummer_auto(unit(CmType::Generic, "1"), unit(CmType::Gauss, "i"), u, v) {
                Ok(f) => {
                    kummer_checks(&mut c, e, f, *n, true);
                }
                Err(err) => c.error("automorphism", err, "valid translation"),
            }
            c.type_tag(e, None);
        }
        Construction::PrimeQuotient {
            deformation,
            p,
            n,
            s,
            a_list,
        } => {
            let admissible = singular::admissible_prime_orders(*deformation);
            c.holds(
                "prime_order",
                admissible.contains(p),
                format!("p = {p} ∈ {admissible:?} for {deformation}"),
            );
            c.holds("coprime", n % p != 0, format!("p = {p} does not divide n = {n}"));
            c.dim(2 * n, e);
            c.cover_degree(*p, e);
            match index::canonical_index(*n, *p) {
                Ok(r) => {
                    c.index(r, e);
                    c.eq("index_equals_order", r.torsion_order(), *p);
                }
                Err(err) => c.error("index", err, e.index),
            }
            let b2 = catalog.b2(*deformation);
            match b2.map(|b2| DeformationType::new(*deformation, *n, b2)) {
                Some(Ok(y)) => {
                    let candidates = singular::admissible_b2(y.b2, *p);
                    c.holds(
                        "b2_candidates",
                        !candidates.is_empty(),
                        format!("b₂(X) ∈ {candidates:?}"),
                    );
                }
                Some(Err(err)) => c.error("deformation_type", err, deformation),
                None => c.error("deformation_type", "no configured b₂", deformation),
            }
            c.not_checkable("b2", "b₂(X) is the rank of the invariant lattice, not computed");
            match FixedComponentModel::new(*p, *n, *s, a_list.clone()) {
                Ok(model) => match singular::classify_generator(&model) {
                    Ok(class) => {
                        let terminal = singular::paper_terminality_conditions(*p, *n, *s);
                        c.eq(
                            "terminality_rule",
                            class == singular::SingularityClass::Terminal,
                            terminal,
                        );
                        if let Some(want) = e.singularity {
                            c.eq("singularity", class, want);
                        }
                        let scan = singular::classify_all_powers(&model);
                        let status = CheckStatus::NotCheckable {
                            reason: format!(
                                "all-powers class {} (min age {}), generator class {}{}",
                                scan.all_powers_class,
                                scan.min_age_over_powers,
                                scan.generator_class,
                                if scan.discrepancy { "; differs from the generator" } else { "" }
                            ),
                        };
                        c.push("all_powers", status);
                    }
                    Err(err) => c.error("singularity", err, "classification"),
                },
                Err(err) => c.error("model", err, "valid fixed-component model"),
            }
            c.type_tag(e, None);
        }
        Construction::CubicFourfoldOrder3 => {
            // F(C) is of K3^[2] type (n = 2); ι acts on σ by −1 and σ by ζ_3
            let n = 2;
            let (iota_k, iota_d) = (1u64, 2u64);
            let (sigma_k, sigma_d) = (1u64, 3u64);
            let d = iota_d * sigma_d;
            let k = (iota_k * (d / iota_d) + sigma_k * (d / sigma_d)) % d;
            c.dim(2 * n, e);
            c.cover_degree(d, e);
            c.holds(
                "multiplier",
                index::is_purely_nonsymplectic(d, k),
                format!("ξ_{d}^{k} is primitive"),
            );
            match index::canonical_index(n, d) {
                Ok(r) => c.index(r, e),
                Err(err) => c.error("index", err, e.index),
            }
            match index::canonical_index(n, iota_d) {
                Ok(r) => c.holds(
                    "cy_intermediate",
                    r.is_trivial(),
                    "F(C)/ι has trivial canonical class",
                ),
                Err(err) => c.error("cy_intermediate", err, "K-trivial"),
            }
            c.type_tag(e, None);
            c.not_checkable("geometry", "smoothness of the cubic and the Fano variety of lines");
        }
        Construction::KummerOrder6 { n, u, v } => {
            let f = kummer_auto(unit(CmType::Generic, "-1"), unit(CmType::Eisenstein, "w"), u, v);
            let trivial = match f {
                Ok(f) => kummer_checks(&mut c, e, f, *n, false).map(|(_, r)| r.is_trivial()),
                Err(err) => {
                    c.error("automorphism", err, "valid translation");
                    None
                }
            };
            c.type_tag(e, trivial);
        }
        Construction::KummerOrder12 { n, u, v } => {
            let f = kummer_auto(unit(CmType::Gauss, "i"), unit(CmType::Eisenstein, "w"), u, v);
            let trivial = match f {
                Ok(f) => kummer_checks(&mut c, e, f, *n, false).map(|(_, r)| r.is_trivial()),
                Err(err) => {
                    c.error("automorphism", err, "valid translation");
                    None
                }
            };
            c.type_tag(e, trivial);
        }
        Construction::ModuliSemistable { w_squared, chi_odd } => {
            c.holds("mukai_square", w_squared % 4 == 0, "w² ≡ 0 mod 4");
            let dim = w_squared + 2;
            c.dim(dim, e);
            c.cover_degree(2, e);
            match index::canonical_index(dim / 2, 2) {
                Ok(r) => c.index(r, e),
                Err(err) => c.error("index", err, e.index),
            }
            c.type_tag(e, None);
            c.not_checkable(
                "regular_locus_free",
                if *chi_odd {
                    "χ odd: freeness on the stable locus is a sheaf-theoretic argument"
                } else {
                    "χ even: no freeness claim on the stable locus"
                },
            );
        }
        Construction::Prym { g } => {
            c.holds("g", *g >= 2, "g ≥ 2");
            let dim = 2 * (2 * g - 1);
            c.dim(dim, e);
            c.cover_degree(2, e);
            match index::canonical_index(dim / 2, 2) {
                Ok(r) => c.index(r, e),
                Err(err) => c.error("index", err, e.index),
            }
            c.type_tag(e, None);
        }
    }
    c.0
}

/// Recomputes what can be computed for `record` and compares with its expected values.
pub fn verify_record(record: &ExampleRecord, catalog: &Catalog) -> Verdict {
    let checks = check_record(record, catalog);
    Verdict {
        id: record.id.clone(),
        paper_section: record.paper_section.clone(),
        construction: record.construction.tag(),
        outcome: outcome(&checks),
        checks,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub filter: Option<String>,
    pub verdicts: Vec<Verdict>,
    pub passed: usize,
    pub failed: usize,
    pub not_checkable: usize,
}

impl Summary {
    /// 0 unless some record failed.
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            1
        } else {
            0
        }
    }
}

pub fn run_catalog(catalog: &Catalog, filter: Option<&str>) -> Summary {
    let records = catalog.filtered(filter);
    let verdicts: Vec<Verdict> = records
        .par_iter()
        .map(|r| verify_record(r, catalog))
        .collect();
    let count = |o: Outcome| verdicts.iter().filter(|v| v.outcome == o).count();
    Summary {
        filter: filter.map(str::to_string),
        passed: count(Outcome::Pass),
        failed: count(Outcome::Fail),
        not_checkable: count(Outcome::NotCheckable),
        verdicts,
    }
}
