//! Seeded generators for test and demo structures.
//!
//! All generators draw from [`SplitMix64`] seeded with the caller's `u64`, so
//! outputs are reproducible across platforms for a fixed crate version.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
pub use rand_xoshiro::SplitMix64;

use crate::cyclic::{rolled, FiniteCyclicOrder};
use crate::order::FiniteMetricOrder;
use crate::rational::{rat, zero, Rational};

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

fn names(n: usize, prefix: &str) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn matrix(n: usize, f: impl Fn(usize, usize) -> Rational) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { zero() } else { f(i.min(j), i.max(j)) }).collect()).collect()
}

/// A random ultrametric linear order: consecutive gaps are drawn from
/// `{1/den, ..., den/den}` and `d(a_i, a_j)` is the largest gap between them.
pub fn random_ulo<R: Rng>(rng: &mut R, n: usize, den: i64) -> FiniteMetricOrder {
    let gaps: Vec<Rational> = (1..n).map(|_| rat(rng.gen_range(1..=den), den)).collect();
    let m = matrix(n, |i, j| gaps[i..j].iter().max().expect("i < j").clone());
    FiniteMetricOrder::new_large(names(n, "p"), m).expect("max of gaps is an ultrametric")
}

/// Distinct points of `{0, 1/den, ..., 1}` with `|x - y|`, in increasing
/// order. Requires `n <= den + 1`.
pub fn random_line<R: Rng>(rng: &mut R, n: usize, den: i64) -> FiniteMetricOrder {
    assert!(n as i64 <= den + 1, "not enough grid points");
    let mut grid: Vec<i64> = (0..=den).collect();
    grid.shuffle(rng);
    let mut pos = grid[..n].to_vec();
    pos.sort_unstable();
    let m = matrix(n, |i, j| rat(pos[j] - pos[i], den));
    FiniteMetricOrder::new_large(names(n, "p"), m).expect("subsets of the line are metric")
}

/// Random distances in `[1/2, 1]`, which always satisfy the triangle
/// inequality, with an arbitrary order. Usually not a metric linear order.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize, den: i64) -> FiniteMetricOrder {
    let mut upper = vec![vec![zero(); n]; n];
    for (i, row) in upper.iter_mut().enumerate() {
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rat(den + rng.gen_range(0..=den), 2 * den);
        }
    }
    let m = matrix(n, |i, j| upper[i][j].clone());
    FiniteMetricOrder::new_large(names(n, "p"), m).expect("distances in [1/2,1] are metric")
}

/// The roll-up of a random position order together with an unrelated
/// metric from `random_metric`. A valid cyclic order, rarely a metric one.
pub fn random_cyclic_metric<R: Rng>(rng: &mut R, n: usize, den: i64) -> FiniteCyclicOrder {
    let metric = random_metric(rng, n, den);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if rolled(perm[x], perm[y], perm[z]) {
                    triples.push((x, y, z));
                }
            }
        }
    }
    let dist = (0..n).map(|i| (0..n).map(|j| metric.d(i, j).clone()).collect()).collect();
    FiniteCyclicOrder::new_large(names(n, "p"), dist, triples).expect("roll-up of a permutation is cyclic")
}
