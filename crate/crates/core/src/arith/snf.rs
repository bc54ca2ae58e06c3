use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{ArithError, IntMatrix, TorsionVector};

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative,
/// and `d_1 | d_2 | … | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.d.diagonal_entries()
    }

    /// Largest elementary divisor, zero when `M = 0`.
    pub fn largest_divisor(&self) -> BigInt {
        self.elementary_divisors()
            .into_iter()
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors()
            .iter()
            .filter(|d| !d.is_zero())
            .count()
    }
}

/// Smallest nonzero |entry| in the trailing block starting at `k`; ties go to the
/// first one in row-major order.
fn find_pivot(d: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let n = d.dim();
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..n {
        for j in k..n {
            let a = d[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let n = m.dim();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);

    'outer: for k in 0..n {
        loop {
            let Some((pi, pj)) = find_pivot(&d, k) else {
                break 'outer;
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = d[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..n {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = -d[(i, k)].div_floor(&pivot);
                d.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                dirty |= !d[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = -d[(k, j)].div_floor(&pivot);
                d.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                dirty |= !d[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // pivot row and column are clear; enforce divisibility of the rest
            let bad_row = (k + 1..n).find(|&i| {
                (k + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot))
            });
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }

    SnfDecomposition { u, d, v }
}

/// Solves `M · x ≡ t (mod N)` through the Smith form of `M`.
pub fn solve_linear_mod(
    m: &IntMatrix,
    t: &TorsionVector,
) -> Result<Option<TorsionVector>, ArithError> {
    if m.dim() != t.len() {
        return Err(ArithError::DimensionMismatch {
            expected: m.dim(),
            got: t.len(),
        });
    }
    let modulus = BigInt::from(t.modulus());
    let snf = smith_normal_form(m);
    let rhs = snf.u.mul_vec(&t.to_bigints())?;
    let mut y = Vec::with_capacity(rhs.len());
    for (di, ri) in snf.elementary_divisors().iter().zip(rhs) {
        let ri = ri.mod_floor(&modulus);
        let g = di.gcd(&modulus);
        if !ri.is_multiple_of(&g) {
            return Ok(None);
        }
        let reduced_mod = &modulus / &g;
        if reduced_mod.is_one() {
            y.push(BigInt::zero());
            continue;
        }
        let a = (di / &g).mod_floor(&reduced_mod);
        let inv = mod_inverse(&a, &reduced_mod).expect("coprime after dividing by gcd");
        y.push(((ri / &g) * inv).mod_floor(&reduced_mod));
    }
    let x = snf.v.mul_vec(&y)?;
    Ok(Some(TorsionVector::from_bigints(t.modulus(), &x)))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Smallest `k ≤ cap` with `M^k = I`.
pub fn matrix_order(m: &IntMatrix, cap: u64) -> Option<u64> {
    let mut power = m.clone();
    for k in 1..=cap {
        if power.is_identity() {
            return Some(k);
        }
        power = power.mul(m).expect("same dimension");
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_is_its_own_form() {
        let id = IntMatrix::identity(2);
        let snf = smith_normal_form(&id);
        assert!(snf.d.is_identity());
        assert!(snf.u.is_identity());
        assert!(snf.v.is_identity());
    }

    #[test]
    fn eisenstein_and_gauss_multipliers_minus_identity() {
        let w_omega = IntMatrix::from_rows(&[[0, -1], [1, -1]]).unwrap();
        let snf = smith_normal_form(&w_omega.minus_identity());
        assert_eq!(snf.elementary_divisors(), big(&[1, 3]));

        let w_i = IntMatrix::from_rows(&[[0, -1], [1, 0]]).unwrap();
        let snf = smith_normal_form(&w_i.minus_identity());
        assert_eq!(snf.elementary_divisors(), big(&[1, 2]));
    }

    #[test]
    fn divisibility_is_enforced() {
        // diag(2, 3) is already diagonal but not in Smith form
        let m = IntMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap();
        let snf = smith_normal_form(&m);
        assert_eq!(snf.elementary_divisors(), big(&[1, 6]));
        let prod = snf.u.mul(&m).unwrap().mul(&snf.v).unwrap();
        assert_eq!(prod, snf.d);
    }

    #[test]
    fn zero_matrix() {
        let z = IntMatrix::zero(3);
        let snf = smith_normal_form(&z);
        assert!(snf.d.is_zero());
        assert_eq!(snf.largest_divisor(), BigInt::zero());
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn solve_trivial_cases() {
        let z = IntMatrix::zero(2);
        let t = TorsionVector::zero(5, 2);
        assert_eq!(solve_linear_mod(&z, &t).unwrap(), Some(TorsionVector::zero(5, 2)));
        let t = TorsionVector::new(5, [1, 0]).unwrap();
        assert_eq!(solve_linear_mod(&z, &t).unwrap(), None);
    }

    #[test]
    fn solve_two_times_identity_mod_four() {
        let m = IntMatrix::from_rows(&[[2, 0], [0, 2]]).unwrap();
        let t = TorsionVector::new(4, [1, 0]).unwrap();
        assert_eq!(solve_linear_mod(&m, &t).unwrap(), None);
        let t = TorsionVector::new(4, [2, 2]).unwrap();
        let x = solve_linear_mod(&m, &t).unwrap().unwrap();
        assert_eq!(x.scale(2), t);
    }

    #[test]
    fn solve_rejects_dimension_mismatch() {
        let m = IntMatrix::identity(3);
        let t = TorsionVector::zero(2, 2);
        assert!(matches!(
            solve_linear_mod(&m, &t),
            Err(ArithError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multiplier_orders() {
        assert_eq!(matrix_order(&IntMatrix::identity(2), 10), Some(1));
        let w_i = IntMatrix::from_rows(&[[0, -1], [1, 0]]).unwrap();
        assert_eq!(matrix_order(&w_i, 10), Some(4));
        let w_omega = IntMatrix::from_rows(&[[0, -1], [1, -1]]).unwrap();
        assert_eq!(matrix_order(&w_omega, 10), Some(3));
        assert_eq!(matrix_order(&w_omega, 2), None);
        let shear = IntMatrix::from_rows(&[[1, 1], [0, 1]]).unwrap();
        assert_eq!(matrix_order(&shear, 50), None);
    }
}
