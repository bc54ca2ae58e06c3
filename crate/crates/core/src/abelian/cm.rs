use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::IntMatrix;

use super::AbelianError;

/// Complex multiplication type of an elliptic curve `C/Λ`, with `Λ = Z ⊕ τZ` and
/// `τ = i` (Gauss) or `τ = ω` (Eisenstein).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmType {
    Generic,
    Gauss,
    Eisenstein,
}

impl CmType {
    /// Order of the (cyclic) unit group.
    pub fn unit_group_order(self) -> u32 {
        match self {
            CmType::Generic => 2,
            CmType::Gauss => 4,
            CmType::Eisenstein => 6,
        }
    }

    /// Lattice action of the generator `ζ` of the unit group on the basis `(1, τ)`:
    /// `-1`, `i ↦ [[0,−1],[1,0]]`, or `ζ_6 = 1 + ω ↦ I + W_ω`.
    pub fn generator_matrix(self) -> IntMatrix {
        let rows: [[i64; 2]; 2] = match self {
            CmType::Generic => [[-1, 0], [0, -1]],
            CmType::Gauss => [[0, -1], [1, 0]],
            CmType::Eisenstein => [[1, -1], [1, 0]],
        };
        IntMatrix::from_rows(&rows).expect("2x2")
    }

    pub fn multiplier_matrix(self, unit: Unit) -> IntMatrix {
        debug_assert_eq!(unit.curve, self);
        self.generator_matrix().pow(unit.exp as u64)
    }

    pub fn unit(self, exp: u32) -> Unit {
        Unit {
            curve: self,
            exp: exp % self.unit_group_order(),
        }
    }

    pub fn parse_unit(self, s: &str) -> Result<Unit, AbelianError> {
        let exp = match (self, s.trim()) {
            (_, "1") => Some(0),
            (c, "-1") => Some(c.unit_group_order() / 2),
            (CmType::Gauss, "i") => Some(1),
            (CmType::Gauss, "-i") => Some(3),
            (CmType::Eisenstein, "w" | "omega") => Some(2),
            (CmType::Eisenstein, "w2" | "omega2") => Some(4),
            (CmType::Eisenstein, "-w" | "-omega") => Some(5),
            (CmType::Eisenstein, "-w2" | "-omega2") => Some(1),
            _ => None,
        };
        exp.map(|e| self.unit(e)).ok_or_else(|| AbelianError::UnknownUnit {
            unit: s.to_string(),
            curve: self,
        })
    }
}

impl FromStr for CmType {
    type Err = AbelianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "generic" => Ok(CmType::Generic),
            "gauss" | "gaussian" => Ok(CmType::Gauss),
            "eisenstein" => Ok(CmType::Eisenstein),
            _ => Err(AbelianError::UnknownCurve(s.to_string())),
        }
    }
}

impl fmt::Display for CmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmType::Generic => "generic",
            CmType::Gauss => "gauss",
            CmType::Eisenstein => "eisenstein",
        })
    }
}

/// A unit `ζ^exp` of the endomorphism ring of a curve, `ζ` the generator of its unit group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Unit {
    curve: CmType,
    exp: u32,
}

impl Unit {
    pub fn curve(self) -> CmType {
        self.curve
    }

    pub fn exp(self) -> u32 {
        self.exp
    }

    pub fn order(self) -> u32 {
        let m = self.curve.unit_group_order();
        m / gcd(m, self.exp)
    }

    pub fn is_one(self) -> bool {
        self.exp == 0
    }

    pub fn mul(self, other: Unit) -> Unit {
        debug_assert_eq!(self.curve, other.curve);
        self.curve.unit(self.exp + other.exp)
    }

    pub fn pow(self, k: u64) -> Unit {
        let m = self.curve.unit_group_order() as u64;
        self.curve.unit(((self.exp as u64 * k) % m) as u32)
    }

    /// As a root of unity `e^{2πi·num/den}`.
    pub fn as_fraction(self) -> (u32, u32) {
        (self.exp, self.curve.unit_group_order())
    }

    pub fn matrix(self) -> IntMatrix {
        self.curve.multiplier_matrix(self)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.curve, self.exp) {
            (_, 0) => "1",
            (CmType::Generic, 1) | (CmType::Gauss, 2) | (CmType::Eisenstein, 3) => "-1",
            (CmType::Gauss, 1) => "i",
            (CmType::Gauss, 3) => "-i",
            (CmType::Eisenstein, 1) => "-w2",
            (CmType::Eisenstein, 2) => "w",
            (CmType::Eisenstein, 4) => "w2",
            (CmType::Eisenstein, 5) => "-w",
            _ => unreachable!("exponent reduced mod the unit group order"),
        };
        f.write_str(s)
    }
}

impl Serialize for Unit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matrix_order;

    #[test]
    fn multiplier_matrices() {
        let gauss = CmType::Gauss;
        let i = gauss.parse_unit("i").unwrap();
        assert_eq!(i.matrix(), IntMatrix::from_rows(&[[0, -1], [1, 0]]).unwrap());
        let eis = CmType::Eisenstein;
        let w = eis.parse_unit("w").unwrap();
        assert_eq!(w.matrix(), IntMatrix::from_rows(&[[0, -1], [1, -1]]).unwrap());
        let minus = CmType::Generic.parse_unit("-1").unwrap();
        assert_eq!(minus.matrix(), IntMatrix::from_rows(&[[-1, 0], [0, -1]]).unwrap());
    }

    #[test]
    fn every_unit_has_det_one_and_matching_order() {
        for curve in [CmType::Generic, CmType::Gauss, CmType::Eisenstein] {
            for e in 0..curve.unit_group_order() {
                let u = curve.unit(e);
                let m = u.matrix();
                assert_eq!(m.det(), 1.into());
                assert_eq!(matrix_order(&m, 12), Some(u.order() as u64), "{curve} {u}");
                // the printed name parses back to the same unit
                assert_eq!(curve.parse_unit(&u.to_string()).unwrap(), u);
            }
        }
    }

    #[test]
    fn units_outside_the_group_are_rejected() {
        assert!(CmType::Generic.parse_unit("i").is_err());
        assert!(CmType::Gauss.parse_unit("w").is_err());
        assert!("weird".parse::<CmType>().is_err());
    }
}
