//! Finite metric linear orders and their derived predicates.
//!
//! Points are identified with their position in the order, so `i <= j` as
//! indices is the order relation. Indexing methods panic on out-of-range
//! indices like slice indexing; use [`FiniteMetricOrder::checked`] or
//! [`FiniteMetricOrder::index_of`] to validate user input first.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::rational::{absdiff, in_unit, tsub, Rational};

/// Default cap on the number of points for exhaustive sweeps.
pub const MAX_POINTS: usize = 64;

/// Value of one axiom expression, maximized over all tuples, with the first
/// tuple attaining the maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomDefect {
    pub axiom: &'static str,
    pub value: Rational,
    pub witness: Vec<usize>,
}

impl AxiomDefect {
    pub(crate) fn new(axiom: &'static str) -> Self {
        AxiomDefect { axiom, value: Rational::zero(), witness: Vec::new() }
    }

    pub(crate) fn offer(&mut self, value: Rational, witness: &[usize]) {
        if value > self.value {
            self.value = value;
            self.witness = witness.to_vec();
        }
    }
}

impl MetricSpace for FiniteMetricOrder {
    fn len(&self) -> usize {
        FiniteMetricOrder::len(self)
    }

    fn d(&self, i: usize, j: usize) -> &Rational {
        FiniteMetricOrder::d(self, i, j)
    }
}

pub(crate) fn max_defect(defects: &[AxiomDefect]) -> Rational {
    defects.iter().map(|d| d.value.clone()).max().unwrap_or_else(Rational::zero)
}

pub(crate) fn validate_names(names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if name.is_empty()
            || !name.chars().all(|c| c.is_ascii_alphanumeric() || "_.+/-".contains(c))
        {
            return Err(Error::InvalidStructure(format!("invalid point name `{name}`")));
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::InvalidStructure(format!("duplicate point name `{name}`")));
        }
    }
    Ok(())
}

/// Checks that `dist` (row-major, `n*n`) is a metric with values in [0,1].
pub(crate) fn validate_metric(n: usize, dist: &[Rational]) -> Result<()> {
    if dist.len() != n * n {
        return Err(Error::InvalidStructure(format!(
            "distance matrix has {} entries, expected {}",
            dist.len(),
            n * n
        )));
    }
    let d = |i: usize, j: usize| &dist[i * n + j];
    for i in 0..n {
        if !d(i, i).is_zero() {
            return Err(Error::InvalidStructure(format!("nonzero diagonal at {i}")));
        }
        for j in 0..n {
            if !in_unit(d(i, j)) {
                return Err(Error::InvalidStructure(format!("d({i},{j}) outside [0,1]")));
            }
            if d(i, j) != d(j, i) {
                return Err(Error::InvalidStructure(format!("d({i},{j}) != d({j},{i})")));
            }
            if i != j && d(i, j).is_zero() {
                return Err(Error::InvalidStructure(format!("distinct points {i},{j} at distance 0")));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d(i, k) > &(d(i, j) + d(j, k)) {
                    return Err(Error::InvalidStructure(format!(
                        "triangle inequality fails on ({i},{j},{k})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A finite linearly ordered metric space with exact rational distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricOrder {
    names: Vec<String>,
    dist: Vec<Rational>,
}

impl FiniteMetricOrder {
    /// Builds a structure from point names in ascending order and a full
    /// distance matrix. Rejects more than [`MAX_POINTS`] points.
    pub fn new(names: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self> {
        if names.len() > MAX_POINTS {
            return Err(Error::TooLarge { n: names.len(), cap: MAX_POINTS });
        }
        Self::new_large(names, dist)
    }

    /// Like [`FiniteMetricOrder::new`] without the size cap.
    pub fn new_large(names: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidStructure("structure has no points".into()));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidStructure("distance matrix shape does not match points".into()));
        }
        validate_names(&names)?;
        let dist: Vec<Rational> = dist.into_iter().flatten().collect();
        validate_metric(n, &dist)?;
        Ok(FiniteMetricOrder { names, dist })
    }

    /// Builds a structure from a distance function, naming points `{prefix}{i}`.
    pub fn from_fn(n: usize, prefix: &str, f: impl Fn(usize, usize) -> Rational) -> Result<Self> {
        let names = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let dist = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(names, dist)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown point `{name}`")))
    }

    pub fn checked(&self, i: usize) -> Result<usize> {
        if i < self.len() {
            Ok(i)
        } else {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        }
    }

    pub fn d(&self, i: usize, j: usize) -> &Rational {
        let n = self.len();
        assert!(i < n && j < n, "index out of range");
        &self.dist[i * n + j]
    }

    /// Distance from `i` to the ray `(-inf, j]`: 0 if `i <= j`, else `d(i,j)`.
    pub fn ray(&self, i: usize, j: usize) -> Rational {
        if i <= j {
            Rational::zero()
        } else {
            self.d(i, j).clone()
        }
    }

    /// Distance from `(i,j)` to the order relation, in closed form.
    pub fn d_leq(&self, i: usize, j: usize) -> Rational {
        if i <= j {
            Rational::zero()
        } else {
            self.d_delta(i, j)
        }
    }

    /// `inf_z max(r(i,z), r(z,j))`, the defining expression for `d_leq`.
    pub fn d_leq_brute(&self, i: usize, j: usize) -> Rational {
        (0..self.len())
            .map(|z| self.ray(i, z).max(self.ray(z, j)))
            .min()
            .expect("structure is nonempty")
    }

    /// Per-axiom values of the four metric linear order axioms.
    pub fn mlo_axioms(&self) -> Vec<AxiomDefect> {
        let n = self.len();
        let mut a1 = AxiomDefect::new("mlo1");
        let mut a2 = AxiomDefect::new("mlo2");
        let mut a3 = AxiomDefect::new("mlo3");
        let mut a4 = AxiomDefect::new("mlo4");
        for x in 0..n {
            for y in 0..n {
                let rxy = self.ray(x, y);
                let ryx = self.ray(y, x);
                a1.offer(absdiff(&(&rxy + &ryx), self.d(x, y)), &[x, y]);
                a2.offer(rxy.clone().min(ryx), &[x, y]);
                a4.offer(absdiff(&self.d_leq(x, y), &self.d_leq_brute(x, y)), &[x, y]);
                for z in 0..n {
                    let v = tsub(&self.ray(x, z), &(&rxy + &self.ray(y, z)));
                    a3.offer(v, &[x, y, z]);
                }
            }
        }
        vec![a1, a2, a3, a4]
    }

    pub fn mlo_defect(&self) -> Rational {
        max_defect(&self.mlo_axioms())
    }

    /// Defect of the dense-ordered-distances axioms at grid `k/resolution`.
    pub fn mdlo_defect(&self, resolution: u32) -> Result<Rational> {
        if resolution == 0 {
            return Err(Error::Precondition("resolution must be positive".into()));
        }
        let mut worst = Rational::zero();
        for a in 0..self.len() {
            for k in 0..=resolution {
                let p = Rational::new(k.into(), resolution.into());
                worst = worst.max(self.mdlo_defect_at(a, &p));
            }
        }
        Ok(worst)
    }

    /// `max(min_y |r(a,y) - p|, min_y |r(y,a) - p|)`.
    pub fn mdlo_defect_at(&self, a: usize, p: &Rational) -> Rational {
        let below = (0..self.len()).map(|y| absdiff(&self.ray(a, y), p)).min();
        let above = (0..self.len()).map(|y| absdiff(&self.ray(y, a), p)).min();
        below.max(above).expect("structure is nonempty")
    }

    /// Max over `a < b < c` of `|d(a,c) - max(d(a,b), d(b,c))|`. Requires a
    /// valid ultrametric linear order.
    pub fn ordered_max_rule_defect(&self) -> Result<Rational> {
        let mlo = self.mlo_defect();
        let um = self.ultrametric_defect();
        if mlo.is_positive() || um.is_positive() {
            return Err(Error::Precondition(format!(
                "not an ultrametric linear order (mlo defect {}, um defect {})",
                crate::rational::fmt_rat(&mlo),
                crate::rational::fmt_rat(&um)
            )));
        }
        let n = self.len();
        let mut worst = Rational::zero();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let v = absdiff(self.d(a, c), self.d(a, b).max(self.d(b, c)));
                    worst = worst.max(v);
                }
            }
        }
        Ok(worst)
    }

    /// Restriction to the given indices, kept in ascending order.
    pub fn substructure(&self, indices: &[usize]) -> Result<Self> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        for &i in &idx {
            self.checked(i)?;
        }
        let names = idx.iter().map(|&i| self.names[i].clone()).collect();
        let dist = idx.iter().map(|&i| idx.iter().map(|&j| self.d(i, j).clone()).collect()).collect();
        Self::new_large(names, dist)
    }

    /// The same metric with the order reversed.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let names = self.names.iter().rev().cloned().collect();
        let dist = (0..n)
            .flat_map(|i| (0..n).map(move |j| (n - 1 - i, n - 1 - j)))
            .map(|(i, j)| self.d(i, j).clone())
            .collect();
        FiniteMetricOrder { names, dist }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{bad3, chain3, euc3};
    use crate::rational::{rat, zero};

    #[test]
    fn ray_examples() {
        let m = chain3();
        assert_eq!(m.ray(0, 2), zero());
        assert_eq!(m.ray(2, 0), rat(1, 2));
        for i in 0..3 {
            assert_eq!(m.ray(i, i), zero());
        }
    }

    #[test]
    fn d_delta_and_d_leq_examples() {
        let e = euc3();
        assert_eq!(e.d_delta(1, 0), rat(2, 5));
        assert_eq!(e.d_delta(2, 2), zero());
        assert_eq!(e.d_leq(1, 0), rat(2, 5));
        assert_eq!(e.d_leq_brute(1, 0), rat(2, 5));
        assert_eq!(e.d_leq(0, 1), zero());
        let c = chain3();
        assert_eq!(c.d_delta(0, 2), rat(1, 2));
        assert_eq!(c.d_leq(2, 0), rat(1, 2));
    }

    #[test]
    fn mlo_examples() {
        assert_eq!(chain3().mlo_defect(), zero());
        let axioms = bad3().mlo_axioms();
        assert_eq!(bad3().mlo_defect(), rat(3, 10));
        assert_eq!(axioms[2].value, rat(3, 10));
        assert_eq!(axioms[2].witness, vec![1, 2, 0]);
        let discrete = FiniteMetricOrder::from_fn(2, "q", |i, j| if i == j { zero() } else { rat(1, 1) }).unwrap();
        assert_eq!(discrete.mlo_defect(), zero());
        assert_eq!(discrete.reversed().mlo_defect(), zero());
    }

    #[test]
    fn mdlo_examples() {
        let single = FiniteMetricOrder::from_fn(1, "q", |_, _| zero()).unwrap();
        assert_eq!(single.mdlo_defect(1).unwrap(), rat(1, 1));
        assert!(single.mdlo_defect(0).is_err());
    }

    #[test]
    fn ultrametric_examples() {
        assert_eq!(chain3().ultrametric_defect(), zero());
        let um = euc3().ultrametric_axiom();
        assert_eq!(um.value, rat(2, 5));
        assert_eq!(um.witness, vec![0, 1, 2]);
        assert_eq!(chain3().ordered_max_rule_defect().unwrap(), zero());
        assert!(euc3().ordered_max_rule_defect().is_err());
    }

    #[test]
    fn rejects_bad_metrics() {
        let bad = |d01: Rational, d12: Rational, d02: Rational| {
            let m = vec![
                vec![zero(), d01.clone(), d02.clone()],
                vec![d01, zero(), d12.clone()],
                vec![d02, d12, zero()],
            ];
            FiniteMetricOrder::new(vec!["a".into(), "b".into(), "c".into()], m)
        };
        assert!(bad(rat(1, 10), rat(1, 10), rat(1, 2)).is_err());
        assert!(bad(rat(0, 1), rat(1, 10), rat(1, 10)).is_err());
        assert!(bad(rat(3, 2), rat(1, 1), rat(1, 1)).is_err());
        assert!(bad(rat(1, 2), rat(1, 2), rat(1, 2)).is_ok());
        assert!(FiniteMetricOrder::from_fn(65, "q", |i, j| if i == j { zero() } else { rat(1, 1) }).is_err());
    }
}
