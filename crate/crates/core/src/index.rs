//! Canonical-index calculus for cyclic quotients `X = Y / <φ>` of a
//! `2n`-dimensional holomorphic symplectic variety `Y` by an automorphism of
//! order `d` acting on the symplectic form by `ξ_d^k`.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("group order d must be at least 2 (got {0})")]
    OrderTooSmall(u64),
    #[error("half-dimension n must be at least 1")]
    ZeroHalfDimension,
    #[error("multiplier exponent k = {k} is not a residue mod {d}")]
    ExponentOutOfRange { d: u64, k: u64 },
    #[error(
        "multiplier exponent k = {k} is not primitive mod {d} (gcd {gcd}): \
         φ^{symplectic_power} acts symplectically, so the quotient factors through \
         an intermediate quotient that need not be irreducible symplectic"
    )]
    NotPurelyNonsymplectic {
        d: u64,
        k: u64,
        gcd: u64,
        symplectic_power: u64,
    },
    #[error("empty range: n from {from} to {to}")]
    EmptyRange { from: u64, to: u64 },
    #[error("index table breaks periodicity at n = {n} (residue {residue} mod {d})")]
    PeriodicityViolated { d: u64, n: u64, residue: u64 },
    #[error("dimension must be at least 2 (got {0})")]
    DimensionTooSmall(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    Etale,
    QuasiEtale,
}

/// A cyclic quotient of a `2n`-dimensional symplectic variety by a group of order `d`
/// whose generator multiplies the symplectic form by `ξ_d^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientScenario {
    n: u64,
    d: u64,
    k: u64,
    cover_kind: CoverKind,
}

impl QuotientScenario {
    pub fn new(n: u64, d: u64, k: u64, cover_kind: CoverKind) -> Result<Self, IndexError> {
        check_nd(n, d)?;
        if k >= d {
            return Err(IndexError::ExponentOutOfRange { d, k });
        }
        Ok(Self {
            n,
            d,
            k,
            cover_kind,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn cover_kind(&self) -> CoverKind {
        self.cover_kind
    }

    pub fn is_symplectic(&self) -> bool {
        self.k == 0
    }

    pub fn is_purely_nonsymplectic(&self) -> bool {
        is_purely_nonsymplectic(self.d, self.k)
    }

    /// Index of `K_X`, after rejecting non-primitive multipliers.
    pub fn canonical_index(&self) -> Result<IndexResult, IndexError> {
        require_purely_nonsymplectic(self.d, self.k)?;
        canonical_index(self.n, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum IndexResult {
    /// `K_X = 0`.
    KTrivial,
    /// `K_X` is torsion of exact order `index ≥ 2`.
    LogEnriques { index: u64 },
}

impl IndexResult {
    /// Order of `K_X` in the class group; 1 when trivial.
    pub fn torsion_order(&self) -> u64 {
        match self {
            IndexResult::KTrivial => 1,
            IndexResult::LogEnriques { index } => *index,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, IndexResult::KTrivial)
    }
}

impl std::fmt::Display for IndexResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IndexResult::KTrivial => write!(f, "K-trivial"),
            IndexResult::LogEnriques { index } => write!(f, "log-Enriques, index {index}"),
        }
    }
}

fn check_nd(n: u64, d: u64) -> Result<(), IndexError> {
    if d < 2 {
        return Err(IndexError::OrderTooSmall(d));
    }
    if n < 1 {
        return Err(IndexError::ZeroHalfDimension);
    }
    Ok(())
}

/// Positive divisors of `d`, ascending.
pub fn divisors(d: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= d {
        if d % i == 0 {
            small.push(i);
            if i * i != d {
                large.push(d / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The smallest `r ≥ 1` with `r | d` and `d | r·n`, found by scanning the divisors of `d`.
///
/// Assumes the generator is purely nonsymplectic; see [`require_purely_nonsymplectic`].
pub fn canonical_index(n: u64, d: u64) -> Result<IndexResult, IndexError> {
    check_nd(n, d)?;
    let r = divisors(d)
        .into_iter()
        .find(|&r| (r as u128 * n as u128) % d as u128 == 0)
        .expect("r = d always qualifies");
    Ok(if r == 1 {
        IndexResult::KTrivial
    } else {
        IndexResult::LogEnriques { index: r }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexRow {
    pub n: u64,
    pub result: IndexResult,
}

/// One row per `n` in `[n_lo, n_hi]`; rows in the same residue class mod `d` are
/// checked to agree.
pub fn index_table(d: u64, n_lo: u64, n_hi: u64) -> Result<Vec<IndexRow>, IndexError> {
    if n_lo > n_hi {
        return Err(IndexError::EmptyRange {
            from: n_lo,
            to: n_hi,
        });
    }
    if n_lo == 0 {
        return Err(IndexError::ZeroHalfDimension);
    }
    let mut by_residue: std::collections::HashMap<u64, IndexResult> = Default::default();
    let mut rows = Vec::with_capacity((n_hi - n_lo + 1) as usize);
    for n in n_lo..=n_hi {
        let result = canonical_index(n, d)?;
        let residue = n % d;
        match by_residue.get(&residue) {
            Some(prev) if *prev != result => {
                return Err(IndexError::PeriodicityViolated { d, n, residue })
            }
            Some(_) => {}
            None => {
                by_residue.insert(residue, result);
            }
        }
        rows.push(IndexRow { n, result });
    }
    Ok(rows)
}

pub fn is_purely_nonsymplectic(d: u64, k: u64) -> bool {
    k.gcd(&d) == 1
}

/// Rejects a non-primitive multiplier with a diagnostic naming the symplectic power
/// `φ^{d/g}`, `g = gcd(k, d)`.
pub fn require_purely_nonsymplectic(d: u64, k: u64) -> Result<(), IndexError> {
    if d < 2 {
        return Err(IndexError::OrderTooSmall(d));
    }
    if k >= d {
        return Err(IndexError::ExponentOutOfRange { d, k });
    }
    let g = k.gcd(&d);
    if g == 1 {
        Ok(())
    } else {
        Err(IndexError::NotPurelyNonsymplectic {
            d,
            k,
            gcd: g,
            symplectic_power: d / g,
        })
    }
}

/// Necessary condition for a free action of order `d` on an IHS manifold of
/// dimension `2n`: `χ(O_Y) = n + 1` must equal `d · χ(O_X)`.
pub fn etale_chi_constraint(n: u64, d: u64) -> bool {
    (n + 1) % d == 0
}

/// Values `χ(O_Y)` would have to take at once if a symplectic automorphism of order `d`
/// acted freely: `n + 1` (the symplectic forms descend) and `d·(n + 1)` (étale cover).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChiObstruction {
    pub from_invariant_forms: u64,
    pub from_etale_degree: u64,
}

impl ChiObstruction {
    pub fn is_contradiction(&self) -> bool {
        self.from_invariant_forms != self.from_etale_degree
    }
}

pub fn symplectic_etale_obstruction(n: u64, d: u64) -> ChiObstruction {
    ChiObstruction {
        from_invariant_forms: n + 1,
        from_etale_degree: d * (n + 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CyTypeConstraint {
    Forced { cover_degree: u64, index: u64 },
    Impossible { reason: String },
}

/// Numerical constraints on an Enriques manifold covered by a Calabi–Yau manifold of
/// dimension `dim`.
pub fn cy_type_constraints(dim: u64) -> Result<CyTypeConstraint, IndexError> {
    if dim < 2 {
        return Err(IndexError::DimensionTooSmall(dim));
    }
    if dim % 2 == 1 {
        return Ok(CyTypeConstraint::Impossible {
            reason: "χ(Y)=0 contradicts χ(X)=1".to_string(),
        });
    }
    // χ(O_Y) = 2 = d · χ(O_X) with χ(O_X) a positive integer
    let chi_cover = 2;
    let cover_degree = chi_cover;
    Ok(CyTypeConstraint::Forced {
        cover_degree,
        index: cover_degree,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "order", rename_all = "kebab-case")]
pub enum TorsionBound {
    /// The torsion subgroup is exactly cyclic of this order.
    Exactly(u64),
    /// The torsion subgroup contains a cyclic group of this order.
    AtLeast(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassGroupTorsionReport {
    pub cover_group_order: u64,
    pub cl_y_torsion_free: bool,
    pub deduced_torsion: TorsionBound,
    pub canonical_cover_identified: bool,
}

/// Reads off the torsion of `Cl(X)` from `0 → Z/d → Cl(X) → Cl(Y)`.
pub fn class_group_torsion(d: u64, cl_y_torsion_free: bool) -> ClassGroupTorsionReport {
    let deduced_torsion = if cl_y_torsion_free {
        TorsionBound::Exactly(d)
    } else {
        TorsionBound::AtLeast(d)
    };
    ClassGroupTorsionReport {
        cover_group_order: d,
        cl_y_torsion_free,
        deduced_torsion,
        canonical_cover_identified: cl_y_torsion_free,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(r: u64) -> IndexResult {
        IndexResult::LogEnriques { index: r }
    }

    #[test]
    fn canonical_index_examples() {
        assert_eq!(canonical_index(2, 3).unwrap(), idx(3));
        assert_eq!(canonical_index(6, 6).unwrap(), IndexResult::KTrivial);
        assert_eq!(canonical_index(3, 12).unwrap(), idx(4));
        assert_eq!(canonical_index(5, 12).unwrap(), idx(12));
    }

    #[test]
    fn canonical_index_rejects_bad_input() {
        assert_eq!(canonical_index(3, 1), Err(IndexError::OrderTooSmall(1)));
        assert_eq!(canonical_index(0, 3), Err(IndexError::ZeroHalfDimension));
    }

    #[test]
    fn table_examples() {
        let orders: Vec<u64> = index_table(6, 1, 6)
            .unwrap()
            .iter()
            .map(|r| r.result.torsion_order())
            .collect();
        assert_eq!(orders, vec![6, 3, 2, 3, 6, 1]);
        assert_eq!(index_table(12, 6, 6).unwrap()[0].result, idx(2));
        let t = index_table(2, 1, 2).unwrap();
        assert_eq!(t[0].result, idx(2));
        assert_eq!(t[1].result, IndexResult::KTrivial);
        assert!(matches!(index_table(6, 5, 4), Err(IndexError::EmptyRange { .. })));
    }

    #[test]
    fn primitivity() {
        assert!(is_purely_nonsymplectic(2, 1));
        assert!(!is_purely_nonsymplectic(6, 2));
        assert!(is_purely_nonsymplectic(12, 7));
        assert!(!is_purely_nonsymplectic(5, 0));
        assert_eq!(
            require_purely_nonsymplectic(6, 2),
            Err(IndexError::NotPurelyNonsymplectic {
                d: 6,
                k: 2,
                gcd: 2,
                symplectic_power: 3
            })
        );
        let err = QuotientScenario::new(3, 4, 0, CoverKind::QuasiEtale)
            .unwrap()
            .canonical_index()
            .unwrap_err();
        assert!(matches!(err, IndexError::NotPurelyNonsymplectic { symplectic_power: 1, .. }));
        assert!(QuotientScenario::new(3, 4, 4, CoverKind::Etale).is_err());
    }

    #[test]
    fn chi_constraints() {
        assert!(etale_chi_constraint(3, 2));
        assert!(etale_chi_constraint(3, 4));
        assert!(!etale_chi_constraint(2, 2));
        let pairs: Vec<(u64, u64)> = [(1, 2), (2, 3), (5, 2)]
            .iter()
            .map(|&(n, d)| {
                let o = symplectic_etale_obstruction(n, d);
                assert!(o.is_contradiction());
                (o.from_invariant_forms, o.from_etale_degree)
            })
            .collect();
        assert_eq!(pairs, vec![(2, 4), (3, 9), (6, 12)]);
    }

    #[test]
    fn cy_type() {
        let forced = CyTypeConstraint::Forced {
            cover_degree: 2,
            index: 2,
        };
        assert_eq!(cy_type_constraints(4).unwrap(), forced);
        assert_eq!(cy_type_constraints(2).unwrap(), forced);
        assert!(matches!(
            cy_type_constraints(3).unwrap(),
            CyTypeConstraint::Impossible { .. }
        ));
        assert!(cy_type_constraints(1).is_err());
    }

    #[test]
    fn class_group() {
        let r = class_group_torsion(2, true);
        assert_eq!(r.deduced_torsion, TorsionBound::Exactly(2));
        assert!(r.canonical_cover_identified);
        assert_eq!(class_group_torsion(3, true).deduced_torsion, TorsionBound::Exactly(3));
        let r = class_group_torsion(5, false);
        assert_eq!(r.deduced_torsion, TorsionBound::AtLeast(5));
        assert!(!r.canonical_cover_identified);
    }

    #[test]
    fn divisor_listing() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        assert_eq!(divisors(2), vec![1, 2]);
    }
}
