//! Minimal-total-distance assignment of approximations to reference roots.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest size solved by exact optimization; larger inputs use a greedy
/// assignment checked by pairwise exchanges.
pub const EXACT_MATCHING_MAX: usize = 12;

/// Relative cost gap below which two assignments count as tied.
pub const AMBIGUITY_TOLERANCE: f64 = 1e-15;

/// `perm[i]` is the index of the root matched with `z[i]`, minimizing
/// `sum_i |z[i] - roots[perm[i]]|`.
pub fn match_roots(z: &[Complex64], roots: &[Complex64]) -> Result<Vec<usize>> {
    if z.len() != roots.len() {
        return Err(Error::DimensionMismatch {
            expected: roots.len(),
            got: z.len(),
        });
    }
    let cost: Vec<Vec<f64>> = z
        .iter()
        .map(|zi| roots.iter().map(|r| (zi - r).norm()).collect())
        .collect();
    if z.len() <= EXACT_MATCHING_MAX {
        exact(&cost)
    } else {
        greedy(&cost)
    }
}

fn tied(best: f64, second: f64) -> bool {
    second - best <= AMBIGUITY_TOLERANCE * best.max(f64::MIN_POSITIVE)
}

/// Subset DP over roots keeping the two cheapest distinct assignments per state.
fn exact(cost: &[Vec<f64>]) -> Result<Vec<usize>> {
    let n = cost.len();
    let size = 1usize << n;
    // (best, second, last root of best)
    let mut dp = vec![(f64::INFINITY, f64::INFINITY, usize::MAX); size];
    dp[0] = (0.0, f64::INFINITY, usize::MAX);
    for mask in 1..size {
        let row = mask.count_ones() as usize - 1;
        let mut entry = (f64::INFINITY, f64::INFINITY, usize::MAX);
        for j in (0..n).filter(|j| mask & (1 << j) != 0) {
            let prev = dp[mask ^ (1 << j)];
            for candidate in [prev.0 + cost[row][j], prev.1 + cost[row][j]] {
                if candidate < entry.0 {
                    entry = (candidate, entry.0, j);
                } else if candidate < entry.1 {
                    entry.1 = candidate;
                }
            }
        }
        dp[mask] = entry;
    }
    let (best, second, _) = dp[size - 1];
    if n > 1 && tied(best, second) {
        return Err(Error::MatchingAmbiguous { best, second });
    }
    let mut perm = vec![0; n];
    let mut mask = size - 1;
    for row in (0..n).rev() {
        let j = dp[mask].2;
        perm[row] = j;
        mask ^= 1 << j;
    }
    Ok(perm)
}

fn greedy(cost: &[Vec<f64>]) -> Result<Vec<usize>> {
    let n = cost.len();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    pairs.sort_by(|a, b| cost[a.0][a.1].total_cmp(&cost[b.0][b.1]));
    let mut perm = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (i, j) in pairs {
        if perm[i] == usize::MAX && !taken[j] {
            perm[i] = j;
            taken[j] = true;
        }
    }
    // no exchange of two partners may help
    let total: f64 = (0..n).map(|i| cost[i][perm[i]]).sum();
    for a in 0..n {
        for b in a + 1..n {
            let before = cost[a][perm[a]] + cost[b][perm[b]];
            let after = cost[a][perm[b]] + cost[b][perm[a]];
            if after < before || tied(total, total - before + after) {
                return Err(Error::MatchingAmbiguous {
                    best: total,
                    second: total - before + after,
                });
            }
        }
    }
    Ok(perm)
}

/// `||z - xi||_p` under the optimal matching.
pub fn matched_distances(z: &[Complex64], roots: &[Complex64]) -> Result<Vec<f64>> {
    let perm = match_roots(z, roots)?;
    Ok(z.iter()
        .zip(&perm)
        .map(|(zi, &j)| (zi - roots[j]).norm())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn brute_force(cost: &[Vec<f64>]) -> f64 {
        fn rec(row: usize, used: &mut Vec<bool>, cost: &[Vec<f64>]) -> f64 {
            if row == cost.len() {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for j in 0..cost.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(cost[row][j] + rec(row + 1, used, cost));
                    used[j] = false;
                }
            }
            best
        }
        rec(0, &mut vec![false; cost.len()], cost)
    }

    #[test]
    fn reorders_roots() {
        let roots = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)];
        let z = [c(0.1, 0.9), c(1.1, 0.0), c(-0.9, 0.1)];
        assert_eq!(match_roots(&z, &roots).unwrap(), vec![2, 0, 1]);
        let d =
            matched_distances(&[c(1.1, 0.0), c(-0.9, 0.0)], &[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!((d[0] - 0.1).abs() < 1e-15 && (d[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn symmetric_input_is_ambiguous() {
        let roots = [c(1.0, 0.0), c(-1.0, 0.0)];
        let z = [c(0.0, 1.0), c(0.0, -1.0)];
        assert!(matches!(
            match_roots(&z, &roots),
            Err(Error::MatchingAmbiguous { .. })
        ));
    }

    #[test]
    fn greedy_path_on_large_input() {
        let roots: Vec<_> = (0..20).map(|k| c(k as f64, 0.0)).collect();
        let z: Vec<_> = roots.iter().rev().map(|r| r + c(0.01, 0.02)).collect();
        let perm = match_roots(&z, &roots).unwrap();
        assert_eq!(perm, (0..20).rev().collect::<Vec<_>>());
    }

    proptest! {
        #[test]
        fn exact_matches_brute_force(pts in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 2..7), shift in prop::collection::vec((-0.5..0.5f64, -0.5..0.5f64), 7)) {
            let roots: Vec<_> = pts.iter().map(|&(a, b)| c(a, b)).collect();
            let z: Vec<_> = roots.iter().zip(&shift).map(|(r, &(a, b))| r + c(a, b)).collect();
            let cost: Vec<Vec<f64>> = z.iter().map(|zi| roots.iter().map(|r| (zi - r).norm()).collect()).collect();
            if let Ok(perm) = exact(&cost) {
                let total: f64 = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
                prop_assert!((total - brute_force(&cost)).abs() <= 1e-12 * total.max(1.0));
            }
        }
    }
}
