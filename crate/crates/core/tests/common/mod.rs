//! Independent brute-force oracles shared by the property tests and the acceptance run.
#![allow(dead_code)]

use logenriques::abelian::SurfaceAffineAuto;
use logenriques::arith::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn random_matrix<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..dim)
        .map(|_| (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}

/// Checks every defining property of the Smith decomposition of `m`.
pub fn check_snf(m: &IntMatrix) -> Result<(), String> {
    let s = smith_normal_form(m);
    let umv = s.u.mul(m).unwrap().mul(&s.v).unwrap();
    if umv != s.d {
        return Err(format!("U·M·V ≠ D for {m:?}"));
    }
    if !s.d.is_diagonal() {
        return Err(format!("D not diagonal for {m:?}"));
    }
    for (name, w) in [("U", &s.u), ("V", &s.v)] {
        if w.det().abs() != BigInt::one() {
            return Err(format!("{name} not unimodular for {m:?}"));
        }
    }
    let d = s.elementary_divisors();
    if d.iter().any(|x| x.is_negative()) {
        return Err(format!("negative divisor for {m:?}"));
    }
    for w in d.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
        if !ok {
            return Err(format!("divisibility chain broken for {m:?}: {d:?}"));
        }
    }
    if m.det().abs() != s.d.det().abs() {
        return Err(format!("|det| not preserved for {m:?}"));
    }
    Ok(())
}

/// Whether `m·x ≡ t (mod modulus)` has a solution, by trying every `x`.
pub fn exhaustive_solvable(m: &[Vec<i64>], t: &[i64], modulus: i64) -> bool {
    let dim = t.len();
    let total = (modulus as u64).pow(dim as u32);
    (0..total).any(|mut code| {
        let x: Vec<i64> = (0..dim)
            .map(|_| {
                let c = (code % modulus as u64) as i64;
                code /= modulus as u64;
                c
            })
            .collect();
        (0..dim).all(|i| {
            let s: i64 = (0..dim).map(|j| m[i][j] * x[j]).sum();
            (s - t[i]).rem_euclid(modulus) == 0
        })
    })
}

/// Whether `f` fixes a point of `A[level]`, searching each curve factor in full.
///
/// `f` acts factorwise, so a fixed point of `A[level]` is a pair of fixed points of
/// the two `E_i[level]`.
pub fn surface_fixed_point_brute(f: &SurfaceAffineAuto, level: u64) -> bool {
    let a = f.linear().to_i64_rows().unwrap();
    let t = f.translation();
    let scale = (level / t.modulus()) as i64;
    let b: Vec<i64> = t.coords().iter().map(|&c| c as i64 * scale).collect();
    let l = level as i64;
    let block = |o: usize| {
        (0..l).any(|x0| {
            (0..l).any(|x1| {
                let x = [x0, x1];
                (0..2).all(|i| {
                    let img = a[o + i][o] * x[0] + a[o + i][o + 1] * x[1] + b[o + i];
                    (img - x[i]).rem_euclid(l) == 0
                })
            })
        })
    };
    block(0) && block(2)
}
