//! Exhaustive search for configurations of `n + 1` torsion points summing to zero
//! that are invariant (as multisets) under an affine automorphism.
//!
//! An empty result is necessary for `Kum_n(f)` to act freely; configurations with
//! repeated points stand for non-reduced subschemes and are only flagged.

use rayon::prelude::*;
use serde::Serialize;

use super::{preserves_kummer_fiber, AbelianError, SurfaceAffineAuto};

pub const DEFAULT_ORACLE_BUDGET: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FixedConfiguration {
    /// Points as numerators over the torsion level, sorted.
    pub points: Vec<[u64; 4]>,
    /// All points distinct.
    pub reduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub level: u64,
    pub n: u64,
    /// Number of `n`-point prefixes scanned (the last point is forced by the sum).
    pub enumerated: u128,
    pub configurations: Vec<FixedConfiguration>,
}

impl OracleReport {
    pub fn reduced(&self) -> impl Iterator<Item = &FixedConfiguration> {
        self.configurations.iter().filter(|c| c.reduced)
    }

    pub fn has_reduced(&self) -> bool {
        self.reduced().next().is_some()
    }
}

/// Multisets of size `k` from `m` items.
pub(crate) fn multichoose(m: u128, k: u128) -> u128 {
    // C(m + k − 1, k), computed incrementally; exact at every step
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(m + i) / (i + 1);
    }
    acc
}

struct PointTable {
    level: u64,
    image: Vec<u32>,
}

impl PointTable {
    fn size(&self) -> usize {
        self.image.len()
    }

    fn decode(&self, idx: u32) -> [u64; 4] {
        let l = self.level;
        let mut i = idx as u64;
        let mut out = [0; 4];
        for c in out.iter_mut() {
            *c = i % l;
            i /= l;
        }
        out
    }

    fn encode(&self, p: &[u64; 4]) -> u32 {
        let l = self.level;
        (p[0] + l * (p[1] + l * (p[2] + l * p[3]))) as u32
    }
}

pub fn brute_force_fixed_configurations(
    f: &SurfaceAffineAuto,
    n: u64,
    level: u64,
    budget: u128,
) -> Result<OracleReport, AbelianError> {
    if n == 0 {
        return Err(AbelianError::Index(crate::index::IndexError::ZeroHalfDimension));
    }
    if !preserves_kummer_fiber(f, n) {
        return Err(AbelianError::FiberNotPreserved { n });
    }
    let modulus = f.translation().modulus();
    if level == 0 || level % modulus != 0 {
        return Err(AbelianError::BadLevel { level, modulus });
    }
    let points = (level as u128).pow(4);
    let size = multichoose(points, n as u128);
    if size > budget || points > u32::MAX as u128 {
        return Err(AbelianError::BudgetExceeded { size, budget });
    }

    let mut table = PointTable {
        level,
        image: Vec::new(),
    };
    let image: Result<Vec<u32>, AbelianError> = (0..points as u32)
        .map(|i| Ok(table.encode(&f.apply(level, &table.decode(i))?)))
        .collect();
    table.image = image?;

    let table = &table;
    let n = n as usize;
    let mut configurations: Vec<FixedConfiguration> = (0..table.size() as u32)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut found = Vec::new();
            let mut prefix = vec![first];
            extend(table, n, &mut prefix, &mut found);
            found
        })
        .collect();
    configurations.sort();

    Ok(OracleReport {
        level,
        n: n as u64,
        enumerated: size,
        configurations,
    })
}

fn extend(table: &PointTable, n: usize, prefix: &mut Vec<u32>, found: &mut Vec<FixedConfiguration>) {
    if prefix.len() == n {
        close(table, prefix, found);
        return;
    }
    let last = *prefix.last().expect("nonempty");
    for next in last..table.size() as u32 {
        prefix.push(next);
        extend(table, n, prefix, found);
        prefix.pop();
    }
}

/// Completes a nondecreasing prefix with the point forced by the zero-sum condition.
fn close(table: &PointTable, prefix: &[u32], found: &mut Vec<FixedConfiguration>) {
    let l = table.level;
    let mut sum = [0u64; 4];
    for &i in prefix {
        let p = table.decode(i);
        for j in 0..4 {
            sum[j] = (sum[j] + p[j]) % l;
        }
    }
    let closing = sum.map(|c| (l - c) % l);
    let closing_idx = table.encode(&closing);
    if closing_idx < *prefix.last().expect("nonempty") {
        // counted from the prefix ending at closing_idx instead
        return;
    }
    let mut config: Vec<u32> = prefix.to_vec();
    config.push(closing_idx);
    let mut moved: Vec<u32> = config.iter().map(|&i| table.image[i as usize]).collect();
    moved.sort_unstable();
    if moved != config {
        return;
    }
    let reduced = config.windows(2).all(|w| w[0] != w[1]);
    found.push(FixedConfiguration {
        points: config.iter().map(|&i| table.decode(i)).collect(),
        reduced,
    });
}
