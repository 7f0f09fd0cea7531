//! Intervals of a finite linear order and distances to definable sets built
//! from them.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::order::FiniteMetricOrder;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Unbounded,
    Open(usize),
    Closed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalSpec {
    pub lower: Endpoint,
    pub upper: Endpoint,
}

/// Position of an endpoint on the extended line; `None` is the unbounded side.
fn position(e: Endpoint) -> Option<usize> {
    match e {
        Endpoint::Unbounded => None,
        Endpoint::Open(i) | Endpoint::Closed(i) => Some(i),
    }
}

impl IntervalSpec {
    pub fn new(lower: Endpoint, upper: Endpoint) -> Result<Self> {
        if let (Some(a), Some(b)) = (position(lower), position(upper)) {
            if a > b {
                return Err(Error::Precondition(format!("interval lower end {a} exceeds upper end {b}")));
            }
        }
        Ok(IntervalSpec { lower, upper })
    }

    /// The open interval `(a, b)`.
    pub fn open(a: usize, b: usize) -> Result<Self> {
        Self::new(Endpoint::Open(a), Endpoint::Open(b))
    }

    pub fn contains(&self, i: usize) -> bool {
        let above = match self.lower {
            Endpoint::Unbounded => true,
            Endpoint::Open(a) => i > a,
            Endpoint::Closed(a) => i >= a,
        };
        let below = match self.upper {
            Endpoint::Unbounded => true,
            Endpoint::Open(b) => i < b,
            Endpoint::Closed(b) => i <= b,
        };
        above && below
    }

    pub fn is_open(&self) -> bool {
        !matches!(self.lower, Endpoint::Closed(_)) && !matches!(self.upper, Endpoint::Closed(_))
    }

    /// Whether two open intervals are disjoint as intervals of the line,
    /// not merely as sets of sample points.
    fn disjoint_from(&self, other: &IntervalSpec) -> bool {
        let ends_before = |hi: Endpoint, lo: Endpoint| match (position(hi), position(lo)) {
            (Some(h), Some(l)) => h <= l,
            _ => false,
        };
        ends_before(self.upper, other.lower) || ends_before(other.upper, self.lower)
    }
}

/// `d(i, D)` for `D` the complement of a union of disjoint open intervals,
/// computed as the sum over intervals of `d(i, M \ I)`.
pub fn dist_to_interval_complement(m: &FiniteMetricOrder, intervals: &[IntervalSpec], i: usize) -> Result<Rational> {
    m.checked(i)?;
    for (k, iv) in intervals.iter().enumerate() {
        for e in [iv.lower, iv.upper] {
            if let Some(p) = position(e) {
                m.checked(p)?;
            }
        }
        if !iv.is_open() {
            return Err(Error::Precondition(format!("interval {k} is not open")));
        }
        for (l, other) in intervals.iter().enumerate().skip(k + 1) {
            if !iv.disjoint_from(other) {
                return Err(Error::Precondition(format!("intervals {k} and {l} overlap")));
            }
        }
    }
    if complement(m, intervals).is_empty() {
        return Err(Error::Precondition("the intervals cover every point".into()));
    }
    let mut total = Rational::zero();
    for iv in intervals.iter().filter(|iv| iv.contains(i)) {
        total += (0..m.len())
            .filter(|&z| !iv.contains(z))
            .map(|z| m.d(i, z))
            .min()
            .expect("complement of an interval is nonempty")
            .clone();
    }
    Ok(total)
}

/// Points outside every interval.
pub fn complement(m: &FiniteMetricOrder, intervals: &[IntervalSpec]) -> Vec<usize> {
    (0..m.len()).filter(|&z| intervals.iter().all(|iv| !iv.contains(z))).collect()
}
