//! Affine automorphisms `x ↦ αx + b` of a product `A = E_1 × E_2` of elliptic curves
//! with complex multiplication, their fixed points, the induced automorphisms of the
//! generalized Kummer fiber `Kum_n A`, and the resulting quotients.
//!
//! Points of `A` are real coordinates on the rank-4 lattice `Λ = Λ_1 ⊕ Λ_2`; torsion
//! points are [`TorsionVector`]s of length 4, the first two coordinates on `E_1`.

mod cm;
mod oracle;

pub use cm::{CmType, Unit};
pub use oracle::{
    brute_force_fixed_configurations, FixedConfiguration, OracleReport, DEFAULT_ORACLE_BUDGET,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{smith_normal_form, solve_linear_mod, ArithError, IntMatrix, TorsionVector};
use crate::index::{self, IndexError, IndexResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("unknown curve type {0:?} (expected generic, gauss or eisenstein)")]
    UnknownCurve(String),
    #[error("{unit:?} is not a unit of a {curve} curve")]
    UnknownUnit { unit: String, curve: CmType },
    #[error("translation must have 2 coordinates per curve (got {0})")]
    BadTranslation(usize),
    #[error("translation is not (n+1)-torsion for n = {n}: the Kummer fiber is not preserved")]
    FiberNotPreserved { n: u64 },
    #[error("unsupported construction: {0}")]
    UnsupportedConstruction(String),
    #[error("enumeration of {size} configurations exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("torsion level {level} is not a multiple of the translation modulus {modulus}")]
    BadLevel { level: u64, modulus: u64 },
    #[error("automorphism order exceeds the search cap {0}")]
    OrderNotFound(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// `f(x, y) = (mult1·x + u, mult2·y + v)` on `E_1 × E_2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceAffineAuto {
    curve1: CmType,
    curve2: CmType,
    mult1: Unit,
    mult2: Unit,
    translation: TorsionVector,
    linear: IntMatrix,
}

impl SurfaceAffineAuto {
    pub fn new(
        mult1: Unit,
        mult2: Unit,
        translation: TorsionVector,
    ) -> Result<Self, AbelianError> {
        if translation.len() != 4 {
            return Err(AbelianError::BadTranslation(translation.len()));
        }
        let linear = IntMatrix::block_diag(&mult1.matrix(), &mult2.matrix());
        Ok(Self {
            curve1: mult1.curve(),
            curve2: mult2.curve(),
            mult1,
            mult2,
            translation,
            linear,
        })
    }

    /// Builds `f` from the translation parts `u ∈ E_1`, `v ∈ E_2` over their common modulus.
    pub fn from_parts(
        mult1: Unit,
        mult2: Unit,
        u: &TorsionVector,
        v: &TorsionVector,
    ) -> Result<Self, AbelianError> {
        if u.len() != 2 {
            return Err(AbelianError::BadTranslation(u.len()));
        }
        if v.len() != 2 {
            return Err(AbelianError::BadTranslation(v.len()));
        }
        Self::new(mult1, mult2, u.concat(v))
    }

    pub fn identity(curve1: CmType, curve2: CmType) -> Self {
        Self::new(curve1.unit(0), curve2.unit(0), TorsionVector::zero(1, 4))
            .expect("valid identity")
    }

    pub fn curve1(&self) -> CmType {
        self.curve1
    }

    pub fn curve2(&self) -> CmType {
        self.curve2
    }

    pub fn mult1(&self) -> Unit {
        self.mult1
    }

    pub fn mult2(&self) -> Unit {
        self.mult2
    }

    pub fn linear(&self) -> &IntMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &TorsionVector {
        &self.translation
    }

    pub fn u(&self) -> TorsionVector {
        self.translation.slice(0..2)
    }

    pub fn v(&self) -> TorsionVector {
        self.translation.slice(2..4)
    }

    pub fn is_identity(&self) -> bool {
        self.mult1.is_one() && self.mult2.is_one() && self.translation.is_zero()
    }

    /// `g ∘ self`: `(M_g M_f, M_g t_f + t_g)`, translations over the lcm of the moduli.
    pub fn then(&self, g: &SurfaceAffineAuto) -> SurfaceAffineAuto {
        let modulus = self.translation.modulus().lcm(&g.translation.modulus());
        let tf = self.translation.lift(modulus).expect("lcm");
        let tg = g.translation.lift(modulus).expect("lcm");
        let moved = g.linear.mul_vec(&tf.to_bigints()).expect("dim 4");
        let sum: Vec<BigInt> = moved
            .iter()
            .zip(tg.to_bigints())
            .map(|(a, b)| a + b)
            .collect();
        let translation = TorsionVector::new(
            modulus,
            sum.iter().map(|x| {
                x.mod_floor(&BigInt::from(modulus))
                    .to_i64()
                    .expect("reduced residue")
            }),
        )
        .expect("positive modulus");
        SurfaceAffineAuto::new(
            g.mult1.mul(self.mult1),
            g.mult2.mul(self.mult2),
            translation,
        )
        .expect("length 4")
    }

    pub fn pow(&self, k: u64) -> SurfaceAffineAuto {
        let mut acc = SurfaceAffineAuto::identity(self.curve1, self.curve2);
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    /// Image of a point of `A[N]` given by numerators mod `level`.
    pub fn apply(&self, level: u64, point: &[u64; 4]) -> Result<[u64; 4], AbelianError> {
        let t = self.translation.lift(level).map_err(|_| AbelianError::BadLevel {
            level,
            modulus: self.translation.modulus(),
        })?;
        let rows = self.linear.to_i64_rows().expect("unit matrices are small");
        let mut out = [0u64; 4];
        for (i, row) in rows.iter().enumerate() {
            let s: i64 = row.iter().zip(point).map(|(a, &x)| a * x as i64).sum();
            out[i] = (s + t.coords()[i] as i64).rem_euclid(level as i64) as u64;
        }
        Ok(out)
    }
}

/// Smallest `k ≤ cap` with `f^k = id`, composing exactly.
pub fn auto_order(f: &SurfaceAffineAuto, cap: u64) -> Option<u64> {
    let mut g = f.clone();
    for k in 1..=cap {
        if g.is_identity() {
            return Some(k);
        }
        g = g.then(f);
    }
    None
}

/// Upper bound used when searching for the order of `f`: the linear part has order
/// dividing 12 and `f^{ord α}` is a translation of order dividing the modulus.
fn order_cap(f: &SurfaceAffineAuto) -> u64 {
    12 * f.translation.modulus()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub exists: bool,
    /// A fixed point, as numerators over `modulus = N·c`.
    pub witness: Option<TorsionVector>,
    /// Elementary divisors of `α − I`.
    pub elementary_divisors: Vec<String>,
    /// `N·c`, `c` the largest elementary divisor (1 when `α = I`).
    pub search_level: u64,
}

/// Decides whether `f` has a fixed point on `A`.
///
/// `(α − I)x ≡ −b (mod Λ)` with `b = t/N` is solvable over `R^4` iff it is solvable with
/// `x ∈ (1/(N·c))Λ`: diagonalizing `α − I` by its Smith form, the coordinates with a
/// nonzero divisor `d_i | c` can always be solved with denominator `N·d_i`. It is thus
/// the congruence `(α − I)·x' ≡ −c·t (mod N·c)`.
pub fn fixed_points_exist_on_surface(f: &SurfaceAffineAuto) -> FixedPointReport {
    let a = f.linear.minus_identity();
    let snf = smith_normal_form(&a);
    let c = snf.largest_divisor();
    let c = if c.is_zero() { 1 } else { c.to_u64().expect("small divisor") };
    let level = f.translation.modulus() * c;
    let rhs = f
        .translation
        .lift(level)
        .expect("multiple")
        .scale(-1);
    let witness = solve_linear_mod(&a, &rhs).expect("dimension 4");
    FixedPointReport {
        exists: witness.is_some(),
        witness,
        elementary_divisors: snf
            .elementary_divisors()
            .iter()
            .map(|d| d.to_string())
            .collect(),
        search_level: level,
    }
}

/// `det(α − I) = 0`, necessary for `f` to act freely.
pub fn has_unit_eigenvalue(f: &SurfaceAffineAuto) -> bool {
    f.linear.minus_identity().det().is_zero()
}

/// `(n+1)·b ≡ 0`, i.e. `u` and `v` are `(n+1)`-torsion.
pub fn preserves_kummer_fiber(f: &SurfaceAffineAuto, n: u64) -> bool {
    f.translation.scale((n + 1) as i64).is_zero()
}

/// Action on the symplectic form `dx ∧ dy`: multiplication by `ξ_d^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplierExponent {
    pub k: u64,
    pub d: u64,
}

impl MultiplierExponent {
    /// The same root of unity written as a power of `ξ_order` (`d` must divide `order`).
    pub fn relative_to(&self, order: u64) -> u64 {
        debug_assert!(order % self.d == 0);
        (self.k * (order / self.d)) % order
    }
}

pub fn symplectic_multiplier(f: &SurfaceAffineAuto) -> MultiplierExponent {
    let (e1, m1) = f.mult1.as_fraction();
    let (e2, m2) = f.mult2.as_fraction();
    let (m1, m2) = (m1 as u64, m2 as u64);
    let l = m1.lcm(&m2);
    let e = (e1 as u64 * (l / m1) + e2 as u64 * (l / m2)) % l;
    let g = e.gcd(&l);
    MultiplierExponent { k: e / g, d: l / g }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KummerTemplate {
    /// `(−x + u, y + v)`, `v ∈ F[2]`, `n` odd.
    Involution,
    /// `(x + u, ωy + v)`, `u ∈ E[3]`, `n + 1 = 3m`.
    OrderThree,
    /// `(x + u, iy + v)`, `u ∈ E[4]`, `n + 1 = 4m`.
    OrderFour,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub applicable_case: KummerTemplate,
    pub free: bool,
    /// The torsion point whose nonvanishing decides freeness.
    pub tested: Vec<TorsionVector>,
}

fn unsupported(msg: impl Into<String>) -> AbelianError {
    AbelianError::UnsupportedConstruction(msg.into())
}

/// Matches `f` against the three Kummer templates.
pub fn match_template(f: &SurfaceAffineAuto, n: u64) -> Result<KummerTemplate, AbelianError> {
    let order = auto_order(f, order_cap(f));
    let (m1, m2) = (f.mult1, f.mult2);
    let minus_one = m1.curve().unit_group_order() / 2;
    if m1.exp() == minus_one && m2.is_one() {
        if n % 2 == 0 {
            return Err(unsupported("involution template needs n odd"));
        }
        if order != Some(2) {
            return Err(unsupported("involution template needs v to be 2-torsion"));
        }
        return Ok(KummerTemplate::Involution);
    }
    if m1.is_one() && m2.curve() == CmType::Eisenstein && m2.exp() == 2 {
        if (n + 1) % 3 != 0 {
            return Err(unsupported("order-3 template needs 3 | n+1"));
        }
        if order != Some(3) {
            return Err(unsupported("order-3 template needs u to be 3-torsion"));
        }
        return Ok(KummerTemplate::OrderThree);
    }
    if m1.is_one() && m2.curve() == CmType::Gauss && m2.exp() == 1 {
        if (n + 1) % 4 != 0 {
            return Err(unsupported("order-4 template needs 4 | n+1"));
        }
        if order != Some(4) {
            return Err(unsupported("order-4 template needs u to be 4-torsion"));
        }
        return Ok(KummerTemplate::OrderFour);
    }
    Err(unsupported(format!(
        "({}·x + u, {}·y + v) matches no free Kummer template",
        m1, m2
    )))
}

fn apply_2x2(rows: [[i64; 2]; 2], p: &TorsionVector) -> TorsionVector {
    let c = p.coords();
    let (x, y) = (c[0] as i64, c[1] as i64);
    TorsionVector::new(
        p.modulus(),
        [rows[0][0] * x + rows[0][1] * y, rows[1][0] * x + rows[1][1] * y],
    )
    .expect("positive modulus")
}

/// Sufficient condition for `Kum_n(f)` to act freely, evaluated on torsion coordinates.
pub fn freeness_predicate(f: &SurfaceAffineAuto, n: u64) -> Result<FreenessReport, AbelianError> {
    if !preserves_kummer_fiber(f, n) {
        return Err(AbelianError::FiberNotPreserved { n });
    }
    let case = match_template(f, n)?;
    let (u, v) = (f.u(), f.v());
    let tested = match case {
        KummerTemplate::Involution => vec![u.scale(((n + 1) / 2) as i64)],
        KummerTemplate::OrderThree => {
            let m = ((n + 1) / 3) as i64;
            // 2 + ω on the basis (1, ω)
            vec![apply_2x2([[2, -1], [1, 1]], &v).scale(m)]
        }
        KummerTemplate::OrderFour => {
            let m = ((n + 1) / 4) as i64;
            // 1 + i on the basis (1, i)
            vec![u.scale(2 * m), apply_2x2([[1, -1], [1, 1]], &v).scale(2 * m)]
        }
    };
    let free = tested.iter().any(|p| !p.is_zero());
    Ok(FreenessReport {
        applicable_case: case,
        free,
        tested,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerScenario {
    f: SurfaceAffineAuto,
    n: u64,
}

impl KummerScenario {
    pub fn new(f: SurfaceAffineAuto, n: u64) -> Result<Self, AbelianError> {
        if n < 1 {
            return Err(AbelianError::Index(IndexError::ZeroHalfDimension));
        }
        if !preserves_kummer_fiber(&f, n) {
            return Err(AbelianError::FiberNotPreserved { n });
        }
        Ok(Self { f, n })
    }

    pub fn automorphism(&self) -> &SurfaceAffineAuto {
        &self.f
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerReport {
    pub n: u64,
    pub dim: u64,
    pub order: u64,
    pub multiplier: MultiplierExponent,
    /// Multiplier as a power of `ξ_order`.
    pub k: u64,
    pub index: IndexResult,
    pub etale_chi_constraint: bool,
    pub freeness: Option<FreenessReport>,
    pub freeness_note: Option<String>,
    pub order_note: &'static str,
}

const ORDER_NOTE: &str = "order of Kum_n(f) taken equal to the order of f on A; a drop on the fiber is not checked";

/// Order, multiplier and canonical index of `Kum_n A / Kum_n(f)`.
pub fn kummer_quotient_classification(sc: &KummerScenario) -> Result<KummerReport, AbelianError> {
    let f = &sc.f;
    let cap = order_cap(f);
    let order = auto_order(f, cap).ok_or(AbelianError::OrderNotFound(cap))?;
    let multiplier = symplectic_multiplier(f);
    if order < 2 {
        return Err(AbelianError::Index(IndexError::OrderTooSmall(order)));
    }
    let k = multiplier.relative_to(order);
    index::require_purely_nonsymplectic(order, k)?;
    let index = index::canonical_index(sc.n, order)?;
    let (freeness, freeness_note) = match freeness_predicate(f, sc.n) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(KummerReport {
        n: sc.n,
        dim: 2 * sc.n,
        order,
        multiplier,
        k,
        index,
        etale_chi_constraint: index::etale_chi_constraint(sc.n, order),
        freeness,
        freeness_note,
        order_note: ORDER_NOTE,
    })
}
