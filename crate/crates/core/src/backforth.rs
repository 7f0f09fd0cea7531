//! ε-isometric and ε-order-isometric tuples, one-point extensions, and
//! back-and-forth construction of correlations between finite structures.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::order::FiniteMetricOrder;
use crate::rational::{absdiff, fmt_rat, from_int, Rational};
use crate::urysohn::{us_compare, us_distance, us_make_at, Side, USPoint};

/// A linearly ordered metric space whose points can be named by values.
pub trait Space {
    type Point: Clone + PartialEq + fmt::Debug;

    fn dist(&self, a: &Self::Point, b: &Self::Point) -> Rational;

    fn cmp_points(&self, a: &Self::Point, b: &Self::Point) -> Ordering;

    /// `r(a,b)`: `d(a,b)` when `a > b`, else 0.
    fn ray(&self, a: &Self::Point, b: &Self::Point) -> Rational {
        if self.cmp_points(a, b) == Ordering::Greater {
            self.dist(a, b)
        } else {
            Rational::zero()
        }
    }

    /// Checks the metric linear order axioms, and the ultrametric inequality
    /// when `ultrametric` is set.
    fn validate(&self, ultrametric: bool) -> Result<()>;
}

/// A space in which extension witnesses can be searched for.
pub trait Target: Space {
    /// A point on `side` of `anchor` (either side when `None`) whose
    /// distance to `anchor` lies in `window`, preferring distances near `aim`.
    fn realize(&self, anchor: &Self::Point, window: &Window, side: Option<Side>, aim: &Rational) -> Option<Self::Point>;

    /// Every point, for exhaustive search; `None` for infinite spaces.
    fn all_points(&self) -> Option<Vec<Self::Point>>;

    /// Some point, used to start from an empty tuple.
    fn base_point(&self) -> Self::Point;
}

impl Space for FiniteMetricOrder {
    type Point = usize;

    fn dist(&self, a: &usize, b: &usize) -> Rational {
        self.d(*a, *b).clone()
    }

    fn cmp_points(&self, a: &usize, b: &usize) -> Ordering {
        a.cmp(b)
    }

    fn validate(&self, ultrametric: bool) -> Result<()> {
        let v = self.mlo_defect();
        if !v.is_zero() {
            return Err(Error::Precondition(format!("structure violates the order axioms (defect {})", fmt_rat(&v))));
        }
        if ultrametric {
            let u = self.ultrametric_defect();
            if !u.is_zero() {
                return Err(Error::Precondition(format!("structure is not ultrametric (defect {})", fmt_rat(&u))));
            }
        }
        Ok(())
    }
}

impl Target for FiniteMetricOrder {
    fn realize(&self, anchor: &usize, window: &Window, side: Option<Side>, aim: &Rational) -> Option<usize> {
        (0..self.len())
            .filter(|&p| match side {
                Some(Side::Above) => p > *anchor,
                Some(Side::Below) => p < *anchor,
                None => true,
            })
            .filter(|&p| window.contains(self.d(*anchor, p)))
            .min_by_key(|&p| absdiff(self.d(*anchor, p), aim))
    }

    fn all_points(&self) -> Option<Vec<usize>> {
        Some((0..self.len()).collect())
    }

    fn base_point(&self) -> usize {
        0
    }
}

/// The whole space `U_S`, with `S` the rationals in `(0,1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UrysohnSpace;

impl Space for UrysohnSpace {
    type Point = USPoint;

    fn dist(&self, a: &USPoint, b: &USPoint) -> Rational {
        us_distance(a, b)
    }

    fn cmp_points(&self, a: &USPoint, b: &USPoint) -> Ordering {
        us_compare(a, b)
    }

    fn validate(&self, _ultrametric: bool) -> Result<()> {
        Ok(())
    }
}

impl Target for UrysohnSpace {
    fn realize(&self, anchor: &USPoint, window: &Window, side: Option<Side>, aim: &Rational) -> Option<USPoint> {
        let s = window.pick_in_unit(aim)?;
        us_make_at(anchor, &s, side.unwrap_or(Side::Above)).ok()
    }

    fn all_points(&self) -> Option<Vec<USPoint>> {
        None
    }

    fn base_point(&self) -> USPoint {
        USPoint::zero()
    }
}

/// An open interval `(lo, hi)` with finitely many points removed. A missing
/// upper bound means unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub lo: Rational,
    pub hi: Option<Rational>,
    pub punctures: Vec<Rational>,
}

impl Window {
    pub fn new(lo: Rational, hi: Option<Rational>) -> Self {
        Window { lo, hi, punctures: Vec::new() }
    }

    /// `(center - radius, center + radius)`.
    pub fn around(center: &Rational, radius: &Rational) -> Self {
        Window::new(center - radius, Some(center + radius))
    }

    pub fn intersect(mut self, lo: Rational, hi: Option<Rational>) -> Self {
        if lo > self.lo {
            self.lo = lo;
        }
        self.hi = match (self.hi, hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn puncture(mut self, points: impl IntoIterator<Item = Rational>) -> Self {
        for p in points {
            if !self.punctures.contains(&p) {
                self.punctures.push(p);
            }
        }
        self.punctures.sort();
        self
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x > self.lo && self.hi.as_ref().is_none_or(|h| x < h) && !self.punctures.contains(x)
    }

    /// Whether no member lies in `(0,1]`.
    pub fn is_empty_in_unit(&self) -> bool {
        self.pick_in_unit(&Rational::one()).is_none()
    }

    /// A member of the window within `(0,1]`: `aim` itself when admissible,
    /// otherwise the admissible midpoint (or 1) nearest to it.
    pub fn pick_in_unit(&self, aim: &Rational) -> Option<Rational> {
        let one = Rational::one();
        let lo = self.lo.clone().max(Rational::zero());
        let (hi, closed_at_one) = match &self.hi {
            Some(h) if *h <= one => (h.clone(), false),
            _ => (one.clone(), true),
        };
        let admissible = |x: &Rational| x.is_positive() && *x <= one && self.contains(x);
        if admissible(aim) {
            return Some(aim.clone());
        }
        if hi <= lo {
            return None;
        }
        let inner = self.punctures.iter().filter(|p| **p > lo && **p < hi).cloned();
        let mut cuts: Vec<Rational> = std::iter::once(lo.clone()).chain(inner).collect();
        cuts.push(hi);
        let two = from_int(2);
        let mut candidates: Vec<Rational> = cuts.windows(2).map(|w| (&w[0] + &w[1]) / &two).collect();
        if closed_at_one {
            candidates.push(Rational::one());
        }
        candidates.into_iter().filter(admissible).min_by(|a, b| absdiff(a, aim).cmp(&absdiff(b, aim)).then(a.cmp(b)))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hi = self.hi.as_ref().map_or_else(|| "inf".to_string(), fmt_rat);
        write!(f, "({}, {hi})", fmt_rat(&self.lo))?;
        if !self.punctures.is_empty() {
            let p: Vec<String> = self.punctures.iter().map(fmt_rat).collect();
            write!(f, " minus {{{}}}", p.join(", "))?;
        }
        Ok(())
    }
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::LengthMismatch(a, b))
    }
}

fn pair_defect<S: Space, T: Space>(
    m: &S,
    (x, y): (&S::Point, &S::Point),
    n: &T,
    (u, v): (&T::Point, &T::Point),
    ordered: bool,
) -> Rational {
    let mut e = absdiff(&m.dist(x, y), &n.dist(u, v));
    if ordered {
        e = e.max(absdiff(&m.ray(x, y), &n.ray(u, v))).max(absdiff(&m.ray(y, x), &n.ray(v, u)));
    }
    e
}

fn tuple_defect<S: Space, T: Space>(m: &S, a: &[S::Point], n: &T, b: &[T::Point], ordered: bool) -> Result<Rational> {
    check_lengths(a.len(), b.len())?;
    let mut e = Rational::zero();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            e = e.max(pair_defect(m, (&a[i], &a[j]), n, (&b[i], &b[j]), ordered));
        }
    }
    Ok(e)
}

/// Largest discrepancy between the tuples' pairwise distances. The tuples
/// are ε-isometric iff this is `< ε`.
pub fn iso_defect<S: Space, T: Space>(m: &S, a: &[S::Point], n: &T, b: &[T::Point]) -> Result<Rational> {
    tuple_defect(m, a, n, b, false)
}

/// Largest discrepancy between pairwise distances and ray values.
pub fn order_iso_defect<S: Space, T: Space>(m: &S, a: &[S::Point], n: &T, b: &[T::Point]) -> Result<Rational> {
    check_lengths(a.len(), b.len())?;
    m.validate(false)?;
    n.validate(false)?;
    tuple_defect(m, a, n, b, true)
}

/// Distance between the quantifier-free distance types of two tuples.
pub fn type_distance_gh<S: Space, T: Space>(m: &S, a: &[S::Point], n: &T, b: &[T::Point]) -> Result<Rational> {
    iso_defect(m, a, n, b)
}

/// Distance between the quantifier-free types in `{d, r}` of two tuples.
pub fn type_distance_ogh<S: Space, T: Space>(m: &S, a: &[S::Point], n: &T, b: &[T::Point]) -> Result<Rational> {
    order_iso_defect(m, a, n, b)
}

/// A witness for one extension step, with the recipe that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Extension<P> {
    pub point: P,
    pub case: &'static str,
    pub window: Option<Window>,
}

struct Plan<P> {
    anchor: P,
    window: Window,
    side: Option<Side>,
    aim: Rational,
    case: &'static str,
}

struct Step<'s, S: Space, T: Target> {
    m: &'s S,
    a: &'s [S::Point],
    n: &'s T,
    b: &'s [T::Point],
    new: &'s S::Point,
    eps: &'s Rational,
    guard: Option<&'s Rational>,
    ordered: bool,
}

impl<S: Space, T: Target> Step<'_, S, T> {
    /// Whether appending `(new, p)` keeps the tuples ε-(order-)isometric and
    /// within the multiplicative guard.
    fn admits(&self, p: &T::Point) -> Option<Rational> {
        let mut worst = Rational::zero();
        for (x, u) in self.a.iter().zip(self.b) {
            let e = pair_defect(self.m, (self.new, x), self.n, (p, u), self.ordered);
            if e >= *self.eps {
                return None;
            }
            if let Some(g) = self.guard {
                let (dm, dn) = (self.m.dist(self.new, x), self.n.dist(p, u));
                if dm.is_zero() != dn.is_zero() {
                    return None;
                }
                if !dm.is_zero() {
                    let q = &dm / &dn;
                    if q >= *g || q * g <= Rational::one() {
                        return None;
                    }
                }
            }
            worst = worst.max(e);
        }
        Some(worst)
    }

    fn guarded(&self, w: Window, delta: &Rational) -> Window {
        match self.guard {
            Some(g) => w.intersect(delta / g, Some(delta * g)),
            None => w,
        }
    }

    /// Carries out a plan. In an enumerable target the admissible point of
    /// least extension defect is taken, preferring points the plan's window
    /// admits and then distances near the aim; the plan's label is kept only
    /// when the chosen point lies in the window. Otherwise the plan's window
    /// is realized directly.
    fn execute(&self, plan: Plan<T::Point>) -> Result<Extension<T::Point>> {
        let fits = |p: &T::Point| {
            let side_ok = match plan.side {
                Some(Side::Above) => self.n.cmp_points(p, &plan.anchor) == Ordering::Greater,
                Some(Side::Below) => self.n.cmp_points(p, &plan.anchor) == Ordering::Less,
                None => true,
            };
            side_ok && plan.window.contains(&self.n.dist(&plan.anchor, p))
        };
        let chosen = match self.n.all_points() {
            Some(points) => points
                .into_iter()
                .filter_map(|p| {
                    let e = self.admits(&p)?;
                    let miss = absdiff(&self.n.dist(&plan.anchor, &p), &plan.aim);
                    Some(((e, !fits(&p), miss), p))
                })
                .min_by(|x, y| x.0.cmp(&y.0))
                .map(|(_, p)| p),
            None => self.n.realize(&plan.anchor, &plan.window, plan.side, &plan.aim).filter(|p| self.admits(p).is_some()),
        };
        match chosen {
            Some(point) => {
                let case = if fits(&point) { plan.case } else { "exhaustive" };
                Ok(Extension { point, case, window: Some(plan.window) })
            }
            None => Err(Error::NoWitness { case: plan.case.to_string(), window: plan.window.to_string() }),
        }
    }

    fn closest(&self) -> (usize, Rational) {
        let mut best = 0;
        let mut delta = self.m.dist(&self.a[0], self.new);
        for (i, x) in self.a.iter().enumerate().skip(1) {
            let e = self.m.dist(x, self.new);
            if e < delta {
                best = i;
                delta = e;
            }
        }
        (best, delta)
    }

    fn unordered_plan(&self) -> Plan<T::Point> {
        let (i0, delta) = self.closest();
        let anchor = self.b[i0].clone();
        let window = Window::around(&delta, self.eps).puncture(self.b.iter().map(|u| self.n.dist(u, &anchor)));
        let window = self.guarded(window, &delta);
        Plan { anchor, window, side: None, aim: delta, case: "window" }
    }

    fn ordered_plan(&self) -> Plan<T::Point> {
        let (_, delta) = self.closest();
        let m = self.m;
        // The closest tuple point is attained next to `new` in the order:
        // prefer the predecessor, otherwise work in the mirrored order.
        let adjacent = |want: Ordering| {
            (0..self.a.len())
                .filter(|&i| m.cmp_points(&self.a[i], self.new) == want && m.dist(&self.a[i], self.new) == delta)
                .min_by(|&i, &j| {
                    let o = m.cmp_points(&self.a[i], &self.a[j]);
                    (if want == Ordering::Less { o.reverse() } else { o }).then(i.cmp(&j))
                })
        };
        let (i0, flip) = match adjacent(Ordering::Less) {
            Some(i) => (i, false),
            None => (adjacent(Ordering::Greater).expect("a closest point exists"), true),
        };
        let orient = |o: Ordering| if flip { o.reverse() } else { o };
        let cmp_m = |x: &S::Point, y: &S::Point| orient(m.cmp_points(x, y));
        let cmp_n = |x: &T::Point, y: &T::Point| orient(self.n.cmp_points(x, y));
        let r_n = |x: &T::Point, y: &T::Point| {
            if cmp_n(x, y) == Ordering::Greater {
                self.n.dist(x, y)
            } else {
                Rational::zero()
            }
        };
        let side = Some(if flip { Side::Below } else { Side::Above });
        let (a, b, n) = (self.a, self.b, self.n);
        let anchor = &b[i0];
        let below: Vec<usize> = (0..a.len()).filter(|&i| cmp_m(&a[i], &a[i0]) == Ordering::Less).collect();
        let above: Vec<usize> = (0..a.len()).filter(|&i| cmp_m(&a[i], &a[i0]) == Ordering::Greater).collect();
        let lo = below.iter().map(|&i| r_n(&b[i], anchor)).max().unwrap_or_else(Rational::zero);
        let hi = above.iter().map(|&i| r_n(&b[i], anchor)).min();
        let distances: Vec<Rational> = b.iter().map(|u| n.dist(u, anchor)).collect();
        let primary = Window::around(&delta, self.eps).intersect(lo, hi).puncture(distances.iter().cloned());
        let primary = Plan { anchor: anchor.clone(), window: self.guarded(primary, &delta), side, aim: delta.clone(), case: "primary" };
        if !primary.window.is_empty_in_unit() {
            return primary;
        }

        let j = below.iter().copied().min_by(|&x, &y| {
            r_n(&b[y], anchor).cmp(&r_n(&b[x], anchor)).then(cmp_n(&b[y], &b[x])).then(x.cmp(&y))
        });
        let l = above.iter().copied().min_by(|&x, &y| {
            r_n(&b[x], anchor).cmp(&r_n(&b[y], anchor)).then(cmp_n(&b[x], &b[y])).then(x.cmp(&y))
        });
        // With nothing below the anchor the lower bound is 0, as in case 1.
        let Some(l) = l else {
            return primary;
        };
        let rj = j.map(|j| r_n(&b[j], anchor)).unwrap_or_else(Rational::zero);
        let rl = r_n(&b[l], anchor);
        let case = if rj.is_zero() {
            "case1"
        } else if rl.is_zero() {
            "case2"
        } else if rl < rj {
            "case3"
        } else if j.is_some_and(|j| cmp_n(&b[l], &b[j]) != Ordering::Greater) {
            "case4a"
        } else {
            "case4b"
        };
        if let (Some(j), "case4b", true) = (j, case, delta >= *self.eps) {
            // Re-anchor at n_j, which is also closest to the new point.
            let dj = m.dist(&a[j], self.new);
            let w = Window::around(&dj, self.eps).intersect(Rational::zero(), Some(n.dist(&b[j], &b[l])));
            return Plan { anchor: b[j].clone(), window: self.guarded(w, &dj), side, aim: dj, case };
        }
        let near = distances.iter().filter(|x| x.is_positive()).min().cloned();
        let small = Window::around(&delta, self.eps).intersect(Rational::zero(), near);
        Plan { anchor: anchor.clone(), window: self.guarded(small, &delta), side, aim: delta, case }
    }

    fn run(&self) -> Result<Extension<T::Point>> {
        check_lengths(self.a.len(), self.b.len())?;
        let pre = tuple_defect(self.m, self.a, self.n, self.b, self.ordered)?;
        if pre >= *self.eps {
            return Err(Error::Precondition(format!(
                "tuples are not {}-{}isometric (defect {})",
                fmt_rat(self.eps),
                if self.ordered { "order-" } else { "" },
                fmt_rat(&pre)
            )));
        }
        if self.a.is_empty() {
            return Ok(Extension { point: self.n.base_point(), case: "base", window: None });
        }
        if let Some(i) = self.a.iter().position(|x| self.m.dist(x, self.new).is_zero()) {
            return Ok(Extension { point: self.b[i].clone(), case: "copy", window: None });
        }
        let plan = if self.ordered { self.ordered_plan() } else { self.unordered_plan() };
        self.execute(plan)
    }
}

fn positive(eps: &Rational) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition("epsilon must be positive".into()))
    }
}

/// Finds `p` in `n` such that `a + [new]` and `b + [p]` are ε-isometric.
/// With a guard `g`, every new distance ratio also lies strictly in `(1/g, g)`.
pub fn extend_step<S: Space, T: Target>(
    m: &S,
    a: &[S::Point],
    n: &T,
    b: &[T::Point],
    new: &S::Point,
    eps: &Rational,
    guard: Option<&Rational>,
) -> Result<Extension<T::Point>> {
    positive(eps)?;
    Step { m, a, n, b, new, eps, guard, ordered: false }.run()
}

/// Finds `p` in `n` such that `a + [new]` and `b + [p]` are
/// ε-order-isometric. Both spaces must be ultrametric linear orders.
pub fn extend_step_ordered<S: Space, T: Target>(
    m: &S,
    a: &[S::Point],
    n: &T,
    b: &[T::Point],
    new: &S::Point,
    eps: &Rational,
    guard: Option<&Rational>,
) -> Result<Extension<T::Point>> {
    positive(eps)?;
    m.validate(true)?;
    n.validate(true)?;
    Step { m, a, n, b, new, eps, guard, ordered: true }.run()
}

/// A total, surjective relation between two finite structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correlation<'a> {
    m: &'a FiniteMetricOrder,
    n: &'a FiniteMetricOrder,
    pairs: Vec<(usize, usize)>,
}

impl<'a> Correlation<'a> {
    pub fn new(m: &'a FiniteMetricOrder, n: &'a FiniteMetricOrder, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut pairs = pairs;
        pairs.sort();
        pairs.dedup();
        for &(x, y) in &pairs {
            m.checked(x)?;
            n.checked(y)?;
        }
        let total = (0..m.len()).all(|x| pairs.iter().any(|p| p.0 == x));
        let onto = (0..n.len()).all(|y| pairs.iter().any(|p| p.1 == y));
        if !total || !onto {
            return Err(Error::Precondition("correlation must be total and surjective".into()));
        }
        Ok(Correlation { m, n, pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn distortion(&self, ordered: bool) -> Rational {
        let mut e = Rational::zero();
        for (k, &(x, u)) in self.pairs.iter().enumerate() {
            for &(y, v) in &self.pairs[k + 1..] {
                e = e.max(pair_defect(self.m, (&x, &y), self.n, (&u, &v), ordered));
            }
        }
        e
    }

    /// Distortion over `{d}`.
    pub fn dis_gh(&self) -> Rational {
        self.distortion(false)
    }

    /// Distortion over `{d, r}`.
    pub fn dis_ogh(&self) -> Rational {
        self.distortion(true)
    }
}

pub fn dis_gh(r: &Correlation<'_>) -> Rational {
    r.dis_gh()
}

pub fn dis_ogh(r: &Correlation<'_>) -> Rational {
    r.dis_ogh()
}

/// Which structure a construction step added a point of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forth,
    Back,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepLog {
    pub direction: Direction,
    /// Pair added, as `(index in M, index in N)`.
    pub pair: (usize, usize),
    pub case: &'static str,
}

#[derive(Debug, Clone)]
pub struct Construction<'a> {
    pub correlation: Correlation<'a>,
    pub guard: Rational,
    pub steps: Vec<StepLog>,
}

/// The least power of two `g >= 2` with every seed distance ratio strictly
/// inside `(1/g, g)`.
pub fn seed_guard(m: &FiniteMetricOrder, a: &[usize], n: &FiniteMetricOrder, b: &[usize]) -> Result<Rational> {
    check_lengths(a.len(), b.len())?;
    let mut worst = Rational::one();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let (dm, dn) = (m.d(a[i], a[j]), n.d(b[i], b[j]));
            match (dm.is_zero(), dn.is_zero()) {
                (true, true) => {}
                (false, false) => worst = worst.max(dm / dn).max(dn / dm),
                _ => {
                    return Err(Error::Precondition(format!(
                        "seed pair {i},{j} has distance zero on one side only; no multiplicative bound exists"
                    )))
                }
            }
        }
    }
    let mut g = from_int(2);
    while g <= worst {
        g *= from_int(2);
    }
    Ok(g)
}

/// Back-and-forth over the indices of `m` and `n` in order, alternating,
/// starting from the seed pairs. Each step is ε-isometric (ε-order-isometric
/// when `ordered`) and respects the seed's multiplicative guard.
pub fn build_correlation<'a>(
    m: &'a FiniteMetricOrder,
    n: &'a FiniteMetricOrder,
    seed_a: &[usize],
    seed_b: &[usize],
    eps: &Rational,
    ordered: bool,
) -> Result<Construction<'a>> {
    positive(eps)?;
    check_lengths(seed_a.len(), seed_b.len())?;
    for &x in seed_a {
        m.checked(x)?;
    }
    for &y in seed_b {
        n.checked(y)?;
    }
    m.validate(ordered)?;
    n.validate(ordered)?;
    let guard = seed_guard(m, seed_a, n, seed_b)?;
    let mut mu = seed_a.to_vec();
    let mut nu = seed_b.to_vec();
    let mut steps = Vec::new();
    for i in 0..m.len().max(n.len()) {
        if i < m.len() && !mu.contains(&i) {
            let e = Step { m, a: &mu, n, b: &nu, new: &i, eps, guard: Some(&guard), ordered }.run()?;
            steps.push(StepLog { direction: Direction::Forth, pair: (i, e.point), case: e.case });
            mu.push(i);
            nu.push(e.point);
        }
        if i < n.len() && !nu.contains(&i) {
            let inv = guard.clone();
            let e = Step { m: n, a: &nu, n: m, b: &mu, new: &i, eps, guard: Some(&inv), ordered }.run()?;
            steps.push(StepLog { direction: Direction::Back, pair: (e.point, i), case: e.case });
            nu.push(i);
            mu.push(e.point);
        }
    }
    let correlation = Correlation::new(m, n, mu.into_iter().zip(nu).collect())?;
    Ok(Construction { correlation, guard, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::chain3;
    use crate::rational::rat;

    fn two(d: Rational) -> FiniteMetricOrder {
        FiniteMetricOrder::from_fn(2, "p", |i, j| if i == j { Rational::zero() } else { d.clone() }).unwrap()
    }

    fn single() -> FiniteMetricOrder {
        FiniteMetricOrder::from_fn(1, "q", |_, _| Rational::zero()).unwrap()
    }

    #[test]
    fn defects() {
        let (a, b) = (two(rat(3, 10)), two(rat(1, 2)));
        assert_eq!(iso_defect(&a, &[0, 1], &b, &[0, 1]).unwrap(), rat(1, 5));
        assert_eq!(iso_defect(&a, &[], &b, &[]).unwrap(), rat(0, 1));
        assert!(iso_defect(&a, &[0], &b, &[0, 1]).is_err());
        let h = two(rat(1, 2));
        assert_eq!(order_iso_defect(&h, &[0, 1], &b, &[1, 0]).unwrap(), rat(1, 2));
        assert_eq!(order_iso_defect(&a, &[0, 1], &b, &[0, 1]).unwrap(), rat(1, 5));
        assert_eq!(type_distance_gh(&b, &[0, 1], &a, &[0, 1]).unwrap(), rat(1, 5));
    }

    #[test]
    fn window_arithmetic() {
        let w = Window::around(&rat(1, 2), &rat(1, 4)).puncture([rat(1, 2)]);
        assert!(!w.contains(&rat(1, 2)));
        assert!(w.contains(&rat(5, 8)));
        assert!(!w.contains(&rat(3, 4)));
        assert_eq!(w.pick_in_unit(&rat(1, 2)), Some(rat(3, 8)));
        assert_eq!(w.to_string(), "(1/4, 3/4) minus {1/2}");
        let w = Window::around(&rat(1, 1), &rat(1, 4));
        assert_eq!(w.pick_in_unit(&rat(1, 1)), Some(rat(1, 1)));
        assert!(Window::new(rat(1, 2), Some(rat(1, 2))).is_empty_in_unit());
        assert!(Window::new(rat(1, 1), None).is_empty_in_unit());
        assert!(!Window::new(rat(1, 2), Some(rat(3, 4))).puncture([rat(5, 8)]).is_empty_in_unit());
    }

    #[test]
    fn extension_into_urysohn_space() {
        let c = chain3();
        let b = vec![USPoint::zero()];
        let e = extend_step(&c, &[0], &UrysohnSpace, &b, &2, &rat(1, 8), None).unwrap();
        assert_eq!(us_distance(&b[0], &e.point), rat(1, 2));
        let e = extend_step_ordered(&c, &[0], &UrysohnSpace, &b, &2, &rat(1, 8), None).unwrap();
        assert_eq!(us_distance(&b[0], &e.point), rat(1, 2));
        assert_eq!(us_compare(&e.point, &b[0]), Ordering::Greater);
        let e = extend_step_ordered(&c, &[0, 2], &UrysohnSpace, &[b[0].clone(), e.point], &0, &rat(1, 8), None).unwrap();
        assert_eq!(e.case, "copy");
    }

    #[test]
    fn no_witness_in_small_targets() {
        let m = two(rat(1, 2));
        let n = single();
        let err = extend_step(&m, &[0], &n, &[0], &1, &rat(1, 4), None).unwrap_err();
        assert!(matches!(err, Error::NoWitness { .. }));
        assert!(build_correlation(&m, &n, &[], &[], &rat(1, 4), false).is_err());
    }

    #[test]
    fn identity_correlation() {
        let c = chain3();
        let r = build_correlation(&c, &c, &[0, 1, 2], &[0, 1, 2], &rat(1, 8), true).unwrap();
        assert_eq!(r.correlation.dis_ogh(), rat(0, 1));
        let one = single();
        let full = Correlation::new(&c, &one, vec![(0, 0), (1, 0), (2, 0)]).unwrap();
        assert_eq!(full.dis_gh(), rat(1, 2));
        assert!(full.dis_ogh() >= full.dis_gh());
        assert!(Correlation::new(&c, &one, vec![(0, 0)]).is_err());
    }
}
