//! Named test structures.

use crate::order::FiniteMetricOrder;
use crate::rational::{rat, zero, Rational};

fn three(d01: Rational, d12: Rational, d02: Rational) -> FiniteMetricOrder {
    let m = vec![
        vec![zero(), d01.clone(), d02.clone()],
        vec![d01, zero(), d12.clone()],
        vec![d02, d12, zero()],
    ];
    FiniteMetricOrder::new(vec!["p0".into(), "p1".into(), "p2".into()], m)
        .expect("fixture is a valid metric")
}

/// `p0 < p1 < p2` with `d01 = 3/10`, `d12 = 1/2`, `d02 = 1/2`; an ultrametric
/// linear order.
pub fn chain3() -> FiniteMetricOrder {
    three(rat(3, 10), rat(1, 2), rat(1, 2))
}

/// `p0 < p1 < p2` with `d01 = 1/2`, `d12 = 3/10`, `d02 = 1/5`; balls are not
/// convex.
pub fn bad3() -> FiniteMetricOrder {
    three(rat(1, 2), rat(3, 10), rat(1, 5))
}

/// The points `0 < 2/5 < 1` of the unit interval with `|x - y|`.
pub fn euc3() -> FiniteMetricOrder {
    three(rat(2, 5), rat(3, 5), rat(1, 1))
}
