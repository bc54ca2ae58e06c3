//! Quotient singularities of prime-order nonsymplectic quotients.
//!
//! Near a point of a fixed component `Z` of dimension `s`, the generator acts
//! diagonally with eigenvalues `ξ_p^e` for the exponent vector
//!
//! ```text
//! [0]×s ++ [1]×s ++ (a_1, p+1−a_1, …, a_t, p+1−a_t) ++ [(p+1)/2]×(2n−2s−2t)
//! ```
//!
//! and the image point is canonical (terminal) iff the age is `≥ 1` (`> 1`).

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingularError {
    #[error("invalid fixed-component model: {0}")]
    InvalidModel(String),
    #[error("p = {p} divides n = {n}: the quotient is K-trivial, not log-Enriques")]
    KTrivialQuotient { p: u64, n: u64 },
    #[error("unknown deformation type {0:?} (expected K3n, Kum, OG6 or OG10)")]
    UnknownDeformationType(String),
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| p % i != 0)
}

/// Linearization data of a prime-order automorphism along a fixed component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedComponentModel {
    p: u64,
    n: u64,
    s: u64,
    a_list: Vec<u64>,
}

impl FixedComponentModel {
    pub fn new(p: u64, n: u64, s: u64, a_list: Vec<u64>) -> Result<Self, SingularError> {
        let bad = |msg: String| Err(SingularError::InvalidModel(msg));
        if !is_prime(p) {
            return bad(format!("p = {p} is not prime"));
        }
        if n < 1 {
            return bad("n must be at least 1".into());
        }
        if s > n {
            return bad(format!("s = {s} exceeds n = {n} (fixed locus is isotropic)"));
        }
        let t = a_list.len() as u64;
        if let Some(a) = a_list.iter().find(|&&a| a <= 1 || a >= p) {
            return bad(format!("a_j = {a} violates 1 < a_j < p = {p}"));
        }
        if 2 * s + 2 * t > 2 * n {
            return bad(format!("2n − 2s − 2t < 0 (n = {n}, s = {s}, t = {t})"));
        }
        if p == 2 && (s != n || t != 0) {
            return bad(format!("p = 2 forces s = n and t = 0 (got s = {s}, t = {t})"));
        }
        Ok(Self { p, n, s, a_list })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn t(&self) -> u64 {
        self.a_list.len() as u64
    }

    pub fn a_list(&self) -> &[u64] {
        &self.a_list
    }
}

/// Eigenvalue exponents `e_j` of a diagonal action by `ξ_d^{e_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalWeights {
    pub order: u64,
    pub exps: Vec<u64>,
}

impl LocalWeights {
    pub fn new(order: u64, exps: impl IntoIterator<Item = u64>) -> Self {
        assert!(order >= 2, "order must be at least 2");
        Self {
            order,
            exps: exps.into_iter().map(|e| e % order).collect(),
        }
    }

    /// Weights of the `k`-th power of the action.
    pub fn power(&self, k: u64) -> Self {
        Self::new(self.order, self.exps.iter().map(|e| e * k))
    }
}

pub fn weights_from_model(m: &FixedComponentModel) -> LocalWeights {
    let (p, n, s) = (m.p, m.n, m.s);
    let t = m.t();
    let mut exps = Vec::with_capacity(2 * n as usize);
    exps.extend(std::iter::repeat(0).take(s as usize));
    exps.extend(std::iter::repeat(1).take(s as usize));
    for &a in &m.a_list {
        exps.push(a);
        exps.push(p + 1 - a);
    }
    let rest = 2 * n - 2 * s - 2 * t;
    if rest > 0 {
        // only reachable for odd p
        exps.extend(std::iter::repeat((p + 1) / 2).take(rest as usize));
    }
    LocalWeights::new(p, exps)
}

pub fn age(w: &LocalWeights) -> Rational64 {
    let sum: u64 = w.exps.iter().sum();
    Rational64::new(sum as i64, w.order as i64)
}

/// Closed form of the generator's age: `n/2` for `p = 2`, `n − s + n/p` otherwise.
pub fn symbolic_age(p: u64, n: u64, s: u64) -> Result<Rational64, SingularError> {
    if !is_prime(p) {
        return Err(SingularError::InvalidModel(format!("p = {p} is not prime")));
    }
    if s > n {
        return Err(SingularError::InvalidModel(format!("s = {s} exceeds n = {n}")));
    }
    if p == 2 {
        if s != n {
            return Err(SingularError::InvalidModel(format!(
                "p = 2 forces s = n (got s = {s}, n = {n})"
            )));
        }
        return Ok(Rational64::new(n as i64, 2));
    }
    Ok(Rational64::from_integer((n - s) as i64) + Rational64::new(n as i64, p as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularityClass {
    Terminal,
    CanonicalNotTerminal,
    NotCanonical,
}

impl SingularityClass {
    pub fn from_age(age: &Rational64) -> Self {
        let one = Rational64::one();
        if *age > one {
            SingularityClass::Terminal
        } else if *age == one {
            SingularityClass::CanonicalNotTerminal
        } else {
            SingularityClass::NotCanonical
        }
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularityClass::Terminal => "terminal",
            SingularityClass::CanonicalNotTerminal => "canonical, not terminal",
            SingularityClass::NotCanonical => "not canonical",
        })
    }
}

/// Classification by the age of the generator alone.
pub fn classify_generator(m: &FixedComponentModel) -> Result<SingularityClass, SingularError> {
    if m.n % m.p == 0 {
        return Err(SingularError::KTrivialQuotient { p: m.p, n: m.n });
    }
    Ok(SingularityClass::from_age(&symbolic_age(m.p, m.n, m.s)?))
}

/// Terminality along the image of `Z`: `p ∤ n` and either `s = n, n > p` or `s < n`.
pub fn paper_terminality_conditions(p: u64, n: u64, s: u64) -> bool {
    n % p != 0 && ((s == n && n > p) || s < n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerAge {
    pub k: u64,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub age: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerScan {
    pub generator_class: SingularityClass,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub generator_age: Rational64,
    pub ages: Vec<PowerAge>,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub min_age_over_powers: Rational64,
    pub all_powers_class: SingularityClass,
    /// Generator-only and all-powers classifications disagree.
    pub discrepancy: bool,
}

/// Ages of every nontrivial power `φ^k`, `1 ≤ k < p`, and the class given by the minimum.
pub fn classify_all_powers(m: &FixedComponentModel) -> PowerScan {
    let w = weights_from_model(m);
    let ages: Vec<PowerAge> = (1..m.p)
        .map(|k| PowerAge {
            k,
            age: age(&w.power(k)),
        })
        .collect();
    let generator_age = ages[0].age;
    let min_age = ages.iter().map(|a| a.age).min().expect("p ≥ 2");
    let generator_class = SingularityClass::from_age(&generator_age);
    let all_powers_class = SingularityClass::from_age(&min_age);
    PowerScan {
        generator_class,
        generator_age,
        ages,
        min_age_over_powers: min_age,
        all_powers_class,
        discrepancy: generator_class != all_powers_class,
    }
}

/// Candidates for `b₂(X)`: `1 ≤ b ≤ b₂(Y) − 2` with `b ≡ b₂(Y) (mod p − 1)`.
pub fn admissible_b2(b2_y: u64, p: u64) -> Vec<u64> {
    if b2_y < 3 || p < 2 {
        return Vec::new();
    }
    let m = p - 1;
    (1..=b2_y - 2).filter(|b| (b2_y - b) % m == 0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, serde::Deserialize)]
pub enum DeformationKind {
    K3n,
    Kum,
    OG6,
    OG10,
}

impl FromStr for DeformationKind {
    type Err = SingularError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k3n" | "k3[n]" | "k3" => Ok(DeformationKind::K3n),
            "kum" | "kumn" => Ok(DeformationKind::Kum),
            "og6" => Ok(DeformationKind::OG6),
            "og10" => Ok(DeformationKind::OG10),
            _ => Err(SingularError::UnknownDeformationType(s.to_string())),
        }
    }
}

impl fmt::Display for DeformationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeformationKind::K3n => "K3n",
            DeformationKind::Kum => "Kum",
            DeformationKind::OG6 => "OG6",
            DeformationKind::OG10 => "OG10",
        })
    }
}

/// A deformation family together with its half-dimension and a configured `b₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationType {
    pub kind: DeformationKind,
    pub n: u64,
    pub b2: u64,
}

impl DeformationType {
    /// OG6 and OG10 only exist in dimensions 6 and 10.
    pub fn new(kind: DeformationKind, n: u64, b2: u64) -> Result<Self, SingularError> {
        let fixed_n = match kind {
            DeformationKind::OG6 => Some(3),
            DeformationKind::OG10 => Some(5),
            _ => None,
        };
        if n < 1 || fixed_n.is_some_and(|f| f != n) {
            return Err(SingularError::InvalidModel(format!(
                "{kind} manifolds do not have dimension {}",
                2 * n
            )));
        }
        Ok(Self { kind, n, b2 })
    }

    pub fn dim(&self) -> u64 {
        2 * self.n
    }

    /// `χ(O_Y) = dim/2 + 1`.
    pub fn chi(&self) -> u64 {
        self.n + 1
    }
}

pub fn admissible_prime_orders(kind: DeformationKind) -> Vec<u64> {
    let bound = match kind {
        DeformationKind::Kum | DeformationKind::OG6 => 7,
        DeformationKind::K3n | DeformationKind::OG10 => 23,
    };
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// All valid models for a given `(p, n)`, with each pair `(a, p+1−a)` listed once
/// (`a ≤ (p+1)/2`) and pairs in nondecreasing order.
pub fn enumerate_models(p: u64, n: u64) -> Vec<FixedComponentModel> {
    let mut out = Vec::new();
    let max_a = if p > 2 { (p + 1) / 2 } else { 1 };
    for s in 0..=n {
        if p == 2 && s != n {
            continue;
        }
        for t in 0..=(n - s) {
            if p == 2 && t > 0 {
                break;
            }
            let mut current = Vec::with_capacity(t as usize);
            push_multisets(2, max_a, t as usize, &mut current, &mut |a_list| {
                out.push(
                    FixedComponentModel::new(p, n, s, a_list.to_vec())
                        .expect("enumeration stays within the invariants"),
                );
            });
        }
    }
    out
}

fn push_multisets(
    lo: u64,
    hi: u64,
    len: usize,
    current: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    if current.len() == len {
        emit(current);
        return;
    }
    for a in lo..=hi {
        current.push(a);
        push_multisets(a, hi, len, current, emit);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn model(p: u64, n: u64, s: u64, a: &[u64]) -> FixedComponentModel {
        FixedComponentModel::new(p, n, s, a.to_vec()).unwrap()
    }

    #[test]
    fn weights_examples() {
        assert_eq!(weights_from_model(&model(2, 2, 2, &[])).exps, vec![0, 0, 1, 1]);
        assert_eq!(
            weights_from_model(&model(5, 3, 1, &[2])).exps,
            vec![0, 1, 2, 4, 3, 3]
        );
        assert_eq!(weights_from_model(&model(3, 2, 2, &[])).exps, vec![0, 0, 1, 1]);
    }

    #[test]
    fn model_invariants_are_enforced() {
        assert!(FixedComponentModel::new(4, 2, 2, vec![]).is_err());
        assert!(FixedComponentModel::new(3, 2, 3, vec![]).is_err());
        assert!(FixedComponentModel::new(5, 3, 1, vec![1]).is_err());
        assert!(FixedComponentModel::new(5, 3, 1, vec![5]).is_err());
        assert!(FixedComponentModel::new(5, 3, 1, vec![2, 3, 4]).is_err());
        assert!(FixedComponentModel::new(2, 3, 2, vec![]).is_err());
        let err = FixedComponentModel::new(2, 3, 2, vec![]).unwrap_err();
        assert!(err.to_string().contains("p = 2 forces s = n"));
    }

    #[test]
    fn age_examples() {
        assert_eq!(age(&LocalWeights::new(2, [0, 0, 1, 1])), r(1, 1));
        assert_eq!(age(&LocalWeights::new(5, [0, 1, 2, 4, 3, 3])), r(13, 5));
        assert_eq!(age(&LocalWeights::new(3, [0, 0, 0, 0])), r(0, 1));
    }

    #[test]
    fn symbolic_age_examples() {
        assert_eq!(symbolic_age(2, 2, 2).unwrap(), r(1, 1));
        assert_eq!(symbolic_age(3, 2, 2).unwrap(), r(2, 3));
        assert_eq!(symbolic_age(5, 3, 1).unwrap(), r(13, 5));
        assert_eq!(
            symbolic_age(5, 3, 1).unwrap(),
            age(&weights_from_model(&model(5, 3, 1, &[2])))
        );
        assert!(symbolic_age(2, 3, 1).is_err());
        assert!(symbolic_age(3, 2, 3).is_err());
    }

    #[test]
    fn generator_classification() {
        assert_eq!(
            classify_generator(&model(3, 2, 2, &[])).unwrap(),
            SingularityClass::NotCanonical
        );
        assert_eq!(
            classify_generator(&model(3, 4, 4, &[])).unwrap(),
            SingularityClass::Terminal
        );
        assert_eq!(
            classify_generator(&model(5, 3, 1, &[2])).unwrap(),
            SingularityClass::Terminal
        );
        assert_eq!(
            classify_generator(&model(3, 3, 3, &[])),
            Err(SingularError::KTrivialQuotient { p: 3, n: 3 })
        );
    }

    #[test]
    fn terminality_conditions() {
        assert!(paper_terminality_conditions(3, 4, 4));
        assert!(!paper_terminality_conditions(3, 2, 2));
        // age 2 > 1, but p | n makes the quotient K-trivial
        assert!(!paper_terminality_conditions(2, 4, 4));
        assert!(paper_terminality_conditions(2, 3, 3));
    }

    #[test]
    fn all_powers_examples() {
        let scan = classify_all_powers(&model(2, 2, 2, &[]));
        assert_eq!(scan.min_age_over_powers, r(1, 1));
        assert_eq!(scan.generator_class, SingularityClass::CanonicalNotTerminal);
        assert_eq!(scan.all_powers_class, SingularityClass::CanonicalNotTerminal);
        assert!(!scan.discrepancy);

        let scan = classify_all_powers(&model(3, 2, 2, &[]));
        let ages: Vec<Rational64> = scan.ages.iter().map(|a| a.age).collect();
        assert_eq!(ages, vec![r(2, 3), r(4, 3)]);
        assert_eq!(scan.min_age_over_powers, r(2, 3));
        assert_eq!(scan.all_powers_class, SingularityClass::NotCanonical);
    }

    #[test]
    fn all_powers_matches_direct_enumeration() {
        // exponents [0,1,2,4,3,3] scaled by k mod 5, summed by hand:
        // k=1: 13, k=2: [0,2,4,3,1,1] = 11, k=3: [0,3,1,2,4,4] = 14, k=4: [0,4,3,1,2,2] = 12
        let scan = classify_all_powers(&model(5, 3, 1, &[2]));
        let ages: Vec<Rational64> = scan.ages.iter().map(|a| a.age).collect();
        assert_eq!(ages, vec![r(13, 5), r(11, 5), r(14, 5), r(12, 5)]);
        assert_eq!(scan.min_age_over_powers, r(11, 5));
        assert_eq!(scan.all_powers_class, SingularityClass::Terminal);
        assert!(!scan.discrepancy);
    }

    #[test]
    fn b2_candidates() {
        assert_eq!(admissible_b2(7, 2), vec![1, 2, 3, 4, 5]);
        assert_eq!(admissible_b2(7, 3), vec![1, 3, 5]);
        assert_eq!(admissible_b2(23, 23), vec![1]);
        assert!(admissible_b2(2, 2).is_empty());
    }

    #[test]
    fn prime_orders() {
        assert_eq!(admissible_prime_orders(DeformationKind::Kum), vec![2, 3, 5, 7]);
        assert_eq!(
            admissible_prime_orders(DeformationKind::OG10),
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23]
        );
        assert_eq!(admissible_prime_orders(DeformationKind::OG6), vec![2, 3, 5, 7]);
        assert_eq!(
            admissible_prime_orders(DeformationKind::K3n),
            admissible_prime_orders(DeformationKind::OG10)
        );
    }

    #[test]
    fn deformation_type_chi() {
        let y = DeformationType::new(DeformationKind::K3n, 2, 23).unwrap();
        assert_eq!(y.dim(), 4);
        assert_eq!(y.chi(), y.dim() / 2 + 1);
        assert!(DeformationType::new(DeformationKind::OG6, 2, 8).is_err());
        assert!("og10".parse::<DeformationKind>().is_ok());
        assert!("k5".parse::<DeformationKind>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        // p = 2: only s = n, t = 0
        assert_eq!(enumerate_models(2, 4).len(), 1);
        // p = 3: a ∈ {2}; for n = 2: (s,t) ∈ {(0,0),(0,1),(0,2),(1,0),(1,1),(2,0)}
        assert_eq!(enumerate_models(3, 2).len(), 6);
        // p = 5: a ∈ {2,3}; n = 1: (0,0), (0,1)×2, (1,0)
        assert_eq!(enumerate_models(5, 1).len(), 4);
    }
}
