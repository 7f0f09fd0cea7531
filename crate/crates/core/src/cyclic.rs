//! Finite metric cyclic orders, roll-up and unrolling.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::order::{max_defect, validate_metric, validate_names, AxiomDefect, FiniteMetricOrder, MAX_POINTS};
use crate::rational::{absdiff, fmt_rat, tsub, Rational};

/// `ceq` of the standard cyclic order on positions: some rotation of
/// `(x,y,z)` is nondecreasing.
pub fn rolled(x: usize, y: usize, z: usize) -> bool {
    (x <= y && y <= z) || (y <= z && z <= x) || (z <= x && x <= y)
}

/// First violated nonstrict cyclic-order axiom of `ceq` on `0..n`, if any.
pub fn cyclic_axiom_violation(n: usize, ceq: impl Fn(usize, usize, usize) -> bool) -> Option<String> {
    for x in 0..n {
        for y in 0..n {
            if !ceq(x, x, y) {
                return Some(format!("reflexivity fails at ({x},{x},{y})"));
            }
            for z in 0..n {
                let xyz = ceq(x, y, z);
                if xyz && !ceq(y, z, x) {
                    return Some(format!("cyclicity fails at ({x},{y},{z})"));
                }
                let distinct = x != y && y != z && x != z;
                if xyz && ceq(x, z, y) && distinct {
                    return Some(format!("antisymmetry fails at ({x},{y},{z})"));
                }
                if !xyz && !ceq(x, z, y) {
                    return Some(format!("totality fails at ({x},{y},{z})"));
                }
            }
        }
    }
    for w in 0..n {
        for x in 0..n {
            for z in 0..n {
                if !ceq(w, x, z) {
                    continue;
                }
                for y in 0..n {
                    if !ceq(w, x, y) && !ceq(w, y, z) {
                        return Some(format!("transitivity fails at ({w},{x},{y},{z})"));
                    }
                }
            }
        }
    }
    None
}

/// Outcome of the two four-point inequalities on a tuple in cyclic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourPointCheck {
    /// `d(w,y) >= min(d(w,x), d(w,z))`
    pub convexity: bool,
    /// `max(d(w,y), d(x,z)) >= d_delta(y,z)`
    pub diagonal: bool,
}

impl FourPointCheck {
    pub fn holds(&self) -> bool {
        self.convexity && self.diagonal
    }
}

/// A finite metric space with a nonstrict cyclic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCyclicOrder {
    names: Vec<String>,
    dist: Vec<Rational>,
    ceq: Vec<bool>,
}

impl MetricSpace for FiniteCyclicOrder {
    fn len(&self) -> usize {
        FiniteCyclicOrder::len(self)
    }

    fn d(&self, i: usize, j: usize) -> &Rational {
        FiniteCyclicOrder::d(self, i, j)
    }
}

impl FiniteCyclicOrder {
    /// Builds a cyclic order from a list of `ceq` triples. The relation is
    /// closed under reflexivity and cyclicity before the remaining axioms are
    /// checked.
    pub fn new(
        names: Vec<String>,
        dist: Vec<Vec<Rational>>,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        if names.len() > MAX_POINTS {
            return Err(Error::TooLarge { n: names.len(), cap: MAX_POINTS });
        }
        Self::new_large(names, dist, triples)
    }

    pub fn new_large(
        names: Vec<String>,
        dist: Vec<Vec<Rational>>,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
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
        let mut ceq = vec![false; n * n * n];
        let at = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
        for (x, y, z) in triples {
            if x >= n || y >= n || z >= n {
                return Err(Error::IndexOutOfRange { index: x.max(y).max(z), len: n });
            }
            ceq[at(x, y, z)] = true;
            ceq[at(y, z, x)] = true;
            ceq[at(z, x, y)] = true;
        }
        for x in 0..n {
            for y in 0..n {
                ceq[at(x, x, y)] = true;
                ceq[at(x, y, x)] = true;
                ceq[at(y, x, x)] = true;
            }
        }
        if let Some(v) = cyclic_axiom_violation(n, |x, y, z| ceq[at(x, y, z)]) {
            return Err(Error::InvalidStructure(format!("not a cyclic order: {v}")));
        }
        Ok(FiniteCyclicOrder { names, dist, ceq })
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

    pub fn d(&self, i: usize, j: usize) -> &Rational {
        let n = self.len();
        assert!(i < n && j < n, "index out of range");
        &self.dist[i * n + j]
    }

    pub fn ceq(&self, x: usize, y: usize, z: usize) -> bool {
        let n = self.len();
        assert!(x < n && y < n && z < n, "index out of range");
        self.ceq[(x * n + y) * n + z]
    }

    /// Triples of distinct points in the relation, one per rotation class,
    /// with the smallest index first.
    pub fn strict_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                for z in x + 1..n {
                    if y != z && self.ceq(x, y, z) {
                        out.push((x, y, z));
                    }
                }
            }
        }
        out
    }

    /// Distance to the `ceq` relation in closed form: 0 on the relation,
    /// otherwise `d_delta3`.
    pub fn d_ceq(&self, x: usize, y: usize, z: usize) -> Rational {
        if self.ceq(x, y, z) {
            Rational::zero()
        } else {
            self.d_delta3(x, y, z)
        }
    }

    /// `min over (u,v,w) in ceq of max(d(x,u), d(y,v), d(z,w))`.
    pub fn d_ceq_brute(&self, x: usize, y: usize, z: usize) -> Rational {
        let n = self.len();
        let mut best: Option<Rational> = None;
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if !self.ceq(u, v, w) {
                        continue;
                    }
                    let m = self.d(x, u).max(self.d(y, v)).max(self.d(z, w));
                    if best.as_ref().is_none_or(|b| m < b) {
                        best = Some(m.clone());
                    }
                }
            }
        }
        best.expect("reflexive triples exist")
    }

    /// Per-axiom values of the cyclicity, antisymmetry, totality,
    /// transitivity and convexity axioms of metric cyclic orders.
    pub fn mco_axioms(&self) -> Vec<AxiomDefect> {
        let n = self.len();
        let mut cyc = AxiomDefect::new("mco3");
        let mut asym = AxiomDefect::new("mco4");
        let mut tot = AxiomDefect::new("mco5");
        let mut trans = AxiomDefect::new("mco6");
        let mut conv = AxiomDefect::new("mco7");
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xyz = self.d_ceq(x, y, z);
                    let yxz = self.d_ceq(y, x, z);
                    cyc.offer(absdiff(&xyz, &self.d_ceq(y, z, x)), &[x, y, z]);
                    asym.offer(absdiff(&(&xyz + &yxz), &self.d_delta3(x, y, z)), &[x, y, z]);
                    tot.offer(xyz.min(yxz), &[x, y, z]);
                }
            }
        }
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let wyx = self.d_ceq(w, y, x);
                    let wxy = self.d_ceq(w, x, y);
                    for z in 0..n {
                        if self.ceq(w, x, z) {
                            trans.offer(wxy.clone().min(self.d_ceq(w, y, z)), &[w, x, y, z]);
                        }
                        let gap = tsub(self.d(w, x).min(self.d(w, z)), self.d(w, y));
                        let v = wyx.clone().min(self.d_ceq(w, z, y)).min(gap);
                        conv.offer(v, &[w, x, y, z]);
                    }
                }
            }
        }
        vec![cyc, asym, tot, trans, conv]
    }

    pub fn mco_defect(&self) -> Rational {
        max_defect(&self.mco_axioms())
    }

    /// Whether every cyclically ordered triple of positions of `tuple` is in
    /// `ceq`.
    pub fn in_cyclic_order(&self, tuple: &[usize]) -> bool {
        let k = tuple.len();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    if rolled(i, j, l) && !self.ceq(tuple[i], tuple[j], tuple[l]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Four-point convexity and diagonal inequalities for `(w,x,y,z)` in
    /// cyclic order. Tuples with a repeated point pass trivially: with
    /// `w = y` the diagonal collapses and neither inequality is meaningful.
    pub fn convexity_check_four_points(&self, w: usize, x: usize, y: usize, z: usize) -> Result<FourPointCheck> {
        for i in [w, x, y, z] {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange { index: i, len: self.len() });
            }
        }
        if !self.in_cyclic_order(&[w, x, y, z]) {
            return Err(Error::Precondition(format!("({w},{x},{y},{z}) is not in cyclic order")));
        }
        if w == x || w == y || w == z || x == y || x == z || y == z {
            return Ok(FourPointCheck { convexity: true, diagonal: true });
        }
        Ok(FourPointCheck {
            convexity: self.d(w, y) >= self.d(w, x).min(self.d(w, z)),
            diagonal: *self.d(w, y).max(self.d(x, z)) >= self.d_delta(y, z),
        })
    }

    /// Recovers a metric linear order whose roll-up is this cyclic order.
    /// Requires an ultrametric metric cyclic order.
    pub fn unroll(&self) -> Result<FiniteMetricOrder> {
        let mco = self.mco_defect();
        if mco.is_positive() {
            return Err(Error::Precondition(format!("mco defect is {}", fmt_rat(&mco))));
        }
        let um = self.ultrametric_defect();
        if um.is_positive() {
            return Err(Error::Precondition(format!("not ultrametric (defect {})", fmt_rat(&um))));
        }
        let n = self.len();
        let (diam, a, b) = self.diameter();
        let by = |pivot: usize| {
            move |x: &usize, y: &usize| {
                if x == y {
                    Ordering::Equal
                } else if self.ceq(*x, *y, pivot) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        };
        let (mut ball, mut rest): (Vec<usize>, Vec<usize>) = (0..n).partition(|&x| *self.d(a, x) < diam);
        ball.sort_by(by(b));
        rest.sort_by(by(a));
        let perm: Vec<usize> = ball.into_iter().chain(rest).collect();
        let names = perm.iter().map(|&i| self.names[i].clone()).collect();
        let dist = perm.iter().map(|&i| perm.iter().map(|&j| self.d(i, j).clone()).collect()).collect();
        let m = FiniteMetricOrder::new_large(names, dist)?;
        let back = roll_up_unchecked(&m);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if back.ceq(x, y, z) != self.ceq(perm[x], perm[y], perm[z]) {
                        return Err(Error::InvalidStructure("unrolled order does not reproduce ceq".into()));
                    }
                }
            }
        }
        Ok(m)
    }

    /// Density defect of the ultrametric dense cyclic order axioms at grid
    /// `k/resolution`.
    pub fn udco_density_defect(&self, resolution: u32) -> Result<Rational> {
        if resolution == 0 {
            return Err(Error::Precondition("resolution must be positive".into()));
        }
        let mco = self.mco_defect();
        if mco.is_positive() {
            return Err(Error::Precondition(format!("mco defect is {}", fmt_rat(&mco))));
        }
        let n = self.len();
        let mut worst = Rational::zero();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let between: Vec<usize> = (0..n).filter(|&c| self.ceq(a, b, c)).collect();
                for k in 0..=resolution {
                    let target = Rational::new(k.into(), resolution.into()) * self.d(a, b);
                    let from_a = between.iter().map(|&c| absdiff(self.d(a, c), &target)).min();
                    let from_b = between.iter().map(|&c| absdiff(self.d(b, c), &target)).min();
                    worst = worst.max(from_a.max(from_b).expect("a and b qualify"));
                }
            }
        }
        Ok(worst)
    }
}

fn roll_up_unchecked(m: &FiniteMetricOrder) -> FiniteCyclicOrder {
    let n = m.len();
    let mut ceq = vec![false; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                ceq[(x * n + y) * n + z] = rolled(x, y, z);
            }
        }
    }
    let dist = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m.d(i, j).clone()).collect();
    FiniteCyclicOrder { names: m.names().to_vec(), dist, ceq }
}

/// The cyclic order induced by a metric linear order, with the same metric.
pub fn roll_up(m: &FiniteMetricOrder) -> Result<FiniteCyclicOrder> {
    let mlo = m.mlo_defect();
    if mlo.is_positive() {
        return Err(Error::Precondition(format!("mlo defect is {}", fmt_rat(&mlo))));
    }
    Ok(roll_up_unchecked(m))
}

/// The reduct expression for `d_ceq` of a roll-up in terms of `d_leq`.
pub fn roll_up_reduct(m: &FiniteMetricOrder, x: usize, y: usize, z: usize) -> Rational {
    let l = |a: usize, b: usize| m.d_leq(a, b);
    l(x, y).min(l(y, z)).min(l(x, z)) + l(y, z).min(l(z, x)).min(l(y, x)) + l(z, x).min(l(x, y)).min(l(z, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::chain3;
    use crate::rational::{rat, zero};

    #[test]
    fn roll_up_examples() {
        let c = roll_up(&chain3()).unwrap();
        assert!(c.ceq(0, 1, 2));
        assert!(!c.ceq(1, 0, 2));
        assert!(c.ceq(0, 0, 2));
        assert_eq!(c.d_ceq(0, 1, 2), zero());
        assert_eq!(c.d_ceq(1, 0, 2), rat(3, 10));
        assert_eq!(c.d_ceq_brute(1, 0, 2), rat(3, 10));
        assert_eq!(c.d_ceq(1, 1, 2), zero());
        assert_eq!(c.mco_defect(), zero());
        assert_eq!(roll_up_reduct(&chain3(), 1, 0, 2), rat(3, 10));
        assert!(roll_up(&crate::fixtures::bad3()).is_err());
    }

    #[test]
    fn unroll_round_trip() {
        let c = roll_up(&chain3()).unwrap();
        let m = c.unroll().unwrap();
        let back = roll_up(&m).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    let (i, j, k) = (
                        c.index_of(m.name(x)).unwrap(),
                        c.index_of(m.name(y)).unwrap(),
                        c.index_of(m.name(z)).unwrap(),
                    );
                    assert_eq!(back.ceq(x, y, z), c.ceq(i, j, k));
                }
            }
        }
        let one = FiniteCyclicOrder::new(vec!["a".into()], vec![vec![zero()]], []).unwrap();
        assert_eq!(one.unroll().unwrap().len(), 1);
        assert_eq!(one.mco_defect(), zero());
        assert_eq!(one.udco_density_defect(4).unwrap(), zero());
    }

    #[test]
    fn broken_convexity_matches_axiom7() {
        // Four points in cyclic order; `a` is close to `c` but far from `b` and `e`.
        let d = |a: i64| rat(a, 10);
        let m = vec![
            vec![zero(), d(9), d(2), d(9)],
            vec![d(9), zero(), d(8), d(3)],
            vec![d(2), d(8), zero(), d(8)],
            vec![d(9), d(3), d(8), zero()],
        ];
        let names = ["a", "b", "c", "e"].map(String::from).to_vec();
        let c = FiniteCyclicOrder::new(names, m, [(0, 1, 2), (0, 2, 3), (0, 1, 3), (1, 2, 3)]).unwrap();
        let axioms = c.mco_axioms();
        assert!(axioms[..4].iter().all(|a| a.value.is_zero()));
        assert!(c.mco_defect().is_positive());
        assert_eq!(c.mco_defect(), axioms[4].value);
        let check = c.convexity_check_four_points(0, 1, 2, 3).unwrap();
        assert!(!check.convexity);
        assert!(c.convexity_check_four_points(0, 2, 1, 3).is_err());
        assert!(c.convexity_check_four_points(0, 0, 1, 1).unwrap().holds());
        assert!(c.convexity_check_four_points(0, 1, 0, 1).unwrap().holds());
    }

    #[test]
    fn two_point_density() {
        let m = FiniteMetricOrder::from_fn(2, "q", |i, j| if i == j { zero() } else { rat(1, 2) }).unwrap();
        let c = roll_up(&m).unwrap();
        assert_eq!(c.udco_density_defect(4).unwrap(), rat(1, 4));
        assert_eq!(c.udco_density_defect(3).unwrap(), rat(1, 6));
    }

    #[test]
    fn rejects_invalid_relations() {
        let names = ["a", "b", "c"].map(String::from).to_vec();
        let m = vec![vec![zero(), rat(1, 2), rat(1, 2)], vec![rat(1, 2), zero(), rat(1, 2)], vec![rat(1, 2), rat(1, 2), zero()]];
        assert!(FiniteCyclicOrder::new(names.clone(), m.clone(), []).is_err());
        assert!(FiniteCyclicOrder::new(names.clone(), m.clone(), [(0, 1, 2), (0, 2, 1)]).is_err());
        assert!(FiniteCyclicOrder::new(names, m, [(0, 2, 1)]).is_ok());
    }
}
