//! The ultrametric space `U_S` of finitely supported integer-valued
//! functions on `(0,1]`, with the sup-metric and the lexicographic order
//! decided at the largest differing key.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gen::rng;
use crate::order::FiniteMetricOrder;
use crate::rational::{fmt_rat, parse_rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct USPoint {
    support: BTreeMap<Rational, i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

fn check_key(s: &Rational) -> Result<()> {
    if s.is_positive() && *s <= Rational::one() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("support key {} outside (0,1]", fmt_rat(s))))
    }
}

impl USPoint {
    pub fn new(entries: impl IntoIterator<Item = (Rational, i64)>) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (k, v) in entries {
            check_key(&k)?;
            if support.insert(k.clone(), v).is_some() {
                return Err(Error::Precondition(format!("duplicate support key {}", fmt_rat(&k))));
            }
        }
        support.retain(|_, v| *v != 0);
        Ok(USPoint { support })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn get(&self, s: &Rational) -> i64 {
        self.support.get(s).copied().unwrap_or(0)
    }

    /// Support entries with keys descending.
    pub fn entries(&self) -> impl Iterator<Item = (&Rational, i64)> {
        self.support.iter().rev().map(|(k, v)| (k, *v))
    }

    fn largest_difference(&self, other: &USPoint) -> Option<Rational> {
        let mut keys: Vec<&Rational> = self.support.keys().chain(other.support.keys()).collect();
        keys.sort();
        keys.into_iter().rev().find(|k| self.get(k) != other.get(k)).cloned()
    }
}

pub fn us_distance(f: &USPoint, g: &USPoint) -> Rational {
    f.largest_difference(g).unwrap_or_else(Rational::zero)
}

pub fn us_compare(f: &USPoint, g: &USPoint) -> Ordering {
    match f.largest_difference(g) {
        None => Ordering::Equal,
        Some(k) => f.get(&k).cmp(&g.get(&k)),
    }
}

impl PartialOrd for USPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for USPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        us_compare(self, other)
    }
}

/// The point agreeing with `f` except at `s`, moved one step up or down, so
/// that it lies at distance exactly `s` on the requested side.
pub fn us_make_at(f: &USPoint, s: &Rational, side: Side) -> Result<USPoint> {
    check_key(s)?;
    let mut g = f.clone();
    let v = f.get(s) + if side == Side::Above { 1 } else { -1 };
    if v == 0 {
        g.support.remove(s);
    } else {
        g.support.insert(s.clone(), v);
    }
    Ok(g)
}

/// `count` distinct points supported on `grid` with values in `[-3,3]`.
/// Each key is included with probability 1/2; duplicates are redrawn.
pub fn us_sample(seed: u64, grid: &[Rational], count: usize) -> Result<Vec<USPoint>> {
    if grid.is_empty() {
        return Err(Error::Precondition("empty support grid".into()));
    }
    for s in grid {
        check_key(s)?;
    }
    let mut r = rng(seed);
    let mut out: Vec<USPoint> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(Error::Precondition("grid too small for the requested number of distinct points".into()));
        }
        let mut support = BTreeMap::new();
        for s in grid {
            if r.gen_bool(0.5) {
                let v = r.gen_range(-3i64..=3);
                if v != 0 {
                    support.insert(s.clone(), v);
                }
            }
        }
        let p = USPoint { support };
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Redraws the values of every point at the grid keys below `below`, as in
/// [`us_sample`], keeping the points distinct. Distances and order change
/// only between points at distance `< below`.
pub fn us_perturb(seed: u64, points: &[USPoint], grid: &[Rational], below: &Rational) -> Result<Vec<USPoint>> {
    for s in grid {
        check_key(s)?;
    }
    let mut r = rng(seed);
    for _ in 0..1000 {
        let out: Vec<USPoint> = points
            .iter()
            .map(|p| {
                let mut support: BTreeMap<Rational, i64> =
                    p.support.iter().filter(|(k, _)| *k >= below).map(|(k, v)| (k.clone(), *v)).collect();
                for s in grid.iter().filter(|s| *s < below) {
                    if r.gen_bool(0.5) {
                        let v = r.gen_range(-3i64..=3);
                        if v != 0 {
                            support.insert(s.clone(), v);
                        }
                    }
                }
                USPoint { support }
            })
            .collect();
        let mut sorted = out.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() == out.len() {
            return Ok(out);
        }
    }
    Err(Error::Precondition("could not keep perturbed points distinct".into()))
}

/// The finite substructure on `points`, sorted lexicographically and named
/// `u0, u1, ...` in that order. Returns the structure and, for each input
/// point, its index in the structure.
pub fn us_export(points: &[USPoint]) -> Result<(FiniteMetricOrder, Vec<usize>)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| us_compare(&points[i], &points[j]));
    if order.windows(2).any(|w| points[w[0]] == points[w[1]]) {
        return Err(Error::Precondition("duplicate points in export".into()));
    }
    let mut position = vec![0; points.len()];
    for (k, &i) in order.iter().enumerate() {
        position[i] = k;
    }
    let m = FiniteMetricOrder::from_fn(points.len(), "u", |i, j| us_distance(&points[order[i]], &points[order[j]]))?;
    Ok((m, position))
}

impl fmt::Display for USPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{ ")?;
        for (i, (k, v)) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{v}", fmt_rat(k))?;
        }
        write!(f, " }}")
    }
}

impl std::str::FromStr for USPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected `{{ key:value, ... }}`, found `{s}`")))?;
        let mut entries = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once(':').ok_or_else(|| Error::Parse(format!("expected `key:value`, found `{part}`")))?;
            let v: i64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad integer value `{}`", v.trim())))?;
            entries.push((parse_rat(k.trim())?, v));
        }
        USPoint::new(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricSpace;
    use crate::rational::rat;

    fn pt(s: &str) -> USPoint {
        s.parse().unwrap()
    }

    #[test]
    fn distances() {
        assert_eq!(us_distance(&pt("{ 1/4:1 }"), &USPoint::zero()), rat(1, 4));
        assert_eq!(us_distance(&pt("{ 1/2:1, 1/8:2 }"), &pt("{1/2:1, 1/3:5}")), rat(1, 3));
        assert_eq!(us_distance(&pt("{1/2:1}"), &pt("{1/2:1}")), rat(0, 1));
    }

    #[test]
    fn comparisons() {
        assert_eq!(us_compare(&pt("{1/2:1}"), &pt("{1/2:2}")), Ordering::Less);
        assert_eq!(us_compare(&pt("{1/2:1, 1/8:9}"), &pt("{1/2:2, 1/8:-9}")), Ordering::Less);
        assert_eq!(us_compare(&pt("{}"), &pt("{ 1/3:-1 }")), Ordering::Greater);
    }

    #[test]
    fn make_at() {
        let g = us_make_at(&USPoint::zero(), &rat(1, 3), Side::Above).unwrap();
        assert_eq!(g, pt("{1/3:1}"));
        let h = us_make_at(&g, &rat(1, 3), Side::Below).unwrap();
        assert_eq!(h, USPoint::zero());
        assert!(us_make_at(&g, &rat(0, 1), Side::Above).is_err());
        assert!(us_make_at(&g, &rat(3, 2), Side::Above).is_err());
    }

    #[test]
    fn text_round_trip() {
        let p = pt("{1/8:2, 1/2:1, 1/4:0}");
        assert_eq!(p.to_string(), "{ 1/2:1, 1/8:2 }");
        assert_eq!(pt(&p.to_string()), p);
        assert_eq!(USPoint::zero().to_string(), "{}");
        assert!("{ 2/1:1 }".parse::<USPoint>().is_err());
        assert!("1/2:1".parse::<USPoint>().is_err());
    }

    #[test]
    fn sample_and_export() {
        let grid: Vec<_> = (1..=8).map(|k| rat(k, 8)).collect();
        assert!(us_sample(1, &grid, 0).unwrap().is_empty());
        assert!(us_sample(1, &[], 3).is_err());
        let a = us_sample(42, &grid, 20).unwrap();
        assert_eq!(a, us_sample(42, &grid, 20).unwrap());
        let (m, pos) = us_export(&a).unwrap();
        assert_eq!(m.mlo_defect(), rat(0, 1));
        assert_eq!(m.ultrametric_defect(), rat(0, 1));
        for i in 0..a.len() {
            for j in 0..a.len() {
                assert_eq!(*m.d(pos[i], pos[j]), us_distance(&a[i], &a[j]));
            }
        }
        let f = pt("{1/4:1}");
        let two = vec![f.clone(), us_make_at(&f, &rat(1, 2), Side::Above).unwrap()];
        let (m, _) = us_export(&two).unwrap();
        assert_eq!(*m.d(0, 1), rat(1, 2));
        assert!(us_export(&[f.clone(), f]).is_err());
        let b = us_perturb(3, &a, &grid, &rat(1, 4)).unwrap();
        for i in 0..a.len() {
            for j in 0..a.len() {
                let (x, y) = (us_distance(&a[i], &a[j]), us_distance(&b[i], &b[j]));
                assert!(x == y || (x < rat(1, 4) && y < rat(1, 4)));
            }
        }
    }
}
