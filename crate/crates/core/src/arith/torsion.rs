use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::ArithError;

/// A point of `(1/N)Z^k / Z^k`, stored as integer numerators reduced mod `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TorsionVector {
    modulus: u64,
    coords: Vec<u64>,
}

impl TorsionVector {
    pub fn new<I: IntoIterator<Item = i64>>(modulus: u64, coords: I) -> Result<Self, ArithError> {
        if modulus == 0 {
            return Err(ArithError::ZeroModulus);
        }
        let m = modulus as i128;
        let coords = coords
            .into_iter()
            .map(|c| (c as i128).rem_euclid(m) as u64)
            .collect();
        Ok(Self { modulus, coords })
    }

    pub fn zero(modulus: u64, len: usize) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self {
            modulus,
            coords: vec![0; len],
        }
    }

    pub(crate) fn from_bigints(modulus: u64, coords: &[BigInt]) -> Self {
        let m = BigInt::from(modulus);
        let coords = coords
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("residue fits"))
            .collect();
        Self { modulus, coords }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// Exact additive order of the point.
    pub fn order(&self) -> u64 {
        let g = self
            .coords
            .iter()
            .fold(self.modulus, |g, &c| g.gcd(&c));
        self.modulus / g
    }

    pub fn scale(&self, k: i64) -> Self {
        let m = self.modulus as i128;
        let coords = self
            .coords
            .iter()
            .map(|&c| ((c as i128) * (k as i128)).rem_euclid(m) as u64)
            .collect();
        Self {
            modulus: self.modulus,
            coords,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// Same point written over the finer modulus `new_modulus` (a multiple of the current one).
    pub fn lift(&self, new_modulus: u64) -> Result<Self, ArithError> {
        if new_modulus == 0 || new_modulus % self.modulus != 0 {
            return Err(ArithError::IncompatibleModulus {
                from: self.modulus,
                to: new_modulus,
            });
        }
        let f = new_modulus / self.modulus;
        Ok(Self {
            modulus: new_modulus,
            coords: self.coords.iter().map(|&c| c * f).collect(),
        })
    }

    /// Drops the modulus to the exact order of the point when possible.
    pub fn normalized(&self) -> Self {
        let g = self
            .coords
            .iter()
            .fold(self.modulus, |g, &c| g.gcd(&c));
        Self {
            modulus: self.modulus / g,
            coords: self.coords.iter().map(|&c| c / g).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        if self.len() != other.len() {
            return Err(ArithError::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let m = self.modulus.lcm(&other.modulus);
        let a = self.lift(m)?;
        let b = other.lift(m)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| (x + y) % m)
            .collect();
        Ok(Self { modulus: m, coords })
    }

    /// Concatenation, lifted to the common modulus.
    pub fn concat(&self, other: &Self) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        let mut a = self.lift(m).expect("lcm is a multiple");
        let b = other.lift(m).expect("lcm is a multiple");
        a.coords.extend(b.coords);
        a
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            modulus: self.modulus,
            coords: self.coords[range].to_vec(),
        }
    }
}

impl fmt::Display for TorsionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        let parts: Vec<String> = n
            .coords
            .iter()
            .map(|&c| {
                if c == 0 {
                    "0".to_string()
                } else {
                    let g = c.gcd(&n.modulus);
                    format!("{}/{}", c / g, n.modulus / g)
                }
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses comma-separated fractions such as `1/4,0` or `1/3,2/3` into a torsion vector
/// over the least common denominator.
impl FromStr for TorsionVector {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        let mut fracs = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (num, den) = match part.split_once('/') {
                Some((a, b)) => (
                    a.trim().parse::<i64>().map_err(|_| bad())?,
                    b.trim().parse::<u64>().map_err(|_| bad())?,
                ),
                None => (part.parse::<i64>().map_err(|_| bad())?, 1),
            };
            if den == 0 {
                return Err(bad());
            }
            fracs.push((num, den));
        }
        let modulus = fracs.iter().fold(1u64, |m, &(_, d)| m.lcm(&d));
        TorsionVector::new(
            modulus,
            fracs
                .iter()
                .map(|&(num, den)| num * (modulus / den) as i64),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_order() {
        let t: TorsionVector = "1/4,0".parse().unwrap();
        assert_eq!(t.modulus(), 4);
        assert_eq!(t.coords(), &[1, 0]);
        assert_eq!(t.order(), 4);
        let t: TorsionVector = "1/2,1/3".parse().unwrap();
        assert_eq!(t.modulus(), 6);
        assert_eq!(t.coords(), &[3, 2]);
        assert_eq!(t.order(), 6);
        let t: TorsionVector = "-1/2,0".parse().unwrap();
        assert_eq!(t.coords(), &[1, 0]);
        assert!("1/0".parse::<TorsionVector>().is_err());
        assert!("x".parse::<TorsionVector>().is_err());
    }

    #[test]
    fn display_round_trips() {
        let t: TorsionVector = "2/4,1/3".parse().unwrap();
        assert_eq!(t.to_string(), "1/2,1/3");
        assert_eq!(t.to_string().parse::<TorsionVector>().unwrap(), t.normalized());
    }

    #[test]
    fn add_lifts_to_lcm() {
        let a: TorsionVector = "1/2,0".parse().unwrap();
        let b: TorsionVector = "1/3,0".parse().unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.modulus(), 6);
        assert_eq!(s.coords(), &[5, 0]);
        assert_eq!(a.add(&a).unwrap().order(), 1);
    }
}
