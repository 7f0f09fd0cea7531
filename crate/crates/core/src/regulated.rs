//! Regulated functions on finite metric linear orders: ε-partitions, grid
//! step approximation, the monotone decomposition, and synthesis of
//! quantifier-free formulas in `{d, r}` approximating a sampled predicate.
//!
//! On a finite order every function is a step function and intervals
//! coincide with order-convex sets, so strong and weak regularity agree.
//! What varies is how many blocks a given ε needs.

use std::collections::BTreeSet;
use std::ops::Range;

use num_traits::{Signed, Zero};

use crate::clogic::{Evaluator, Formula, ModMap, ModTable, Pred, StepMap, Term};
use crate::error::{Error, Result};
use crate::order::FiniteMetricOrder;
use crate::rational::{absdiff, fmt_rat, in_unit, one, rat, Rational};

/// Values of a `[0,1]`-valued function at each point of a structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledPredicate<'a> {
    structure: &'a FiniteMetricOrder,
    values: Vec<Rational>,
}

impl<'a> SampledPredicate<'a> {
    pub fn new(structure: &'a FiniteMetricOrder, values: Vec<Rational>) -> Result<Self> {
        if values.len() != structure.len() {
            return Err(Error::Precondition(format!(
                "predicate has {} values for {} points",
                values.len(),
                structure.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !in_unit(v)) {
            return Err(Error::Precondition(format!("predicate value {} outside [0,1]", fmt_rat(v))));
        }
        Ok(SampledPredicate { structure, values })
    }

    /// The values of a formula in the free variable `var`.
    pub fn from_formula(structure: &'a FiniteMetricOrder, f: &Formula, var: &str, mods: &ModTable) -> Result<Self> {
        if f.free_vars().iter().any(|v| v != var) {
            return Err(Error::Precondition(format!("formula has free variables other than `{var}`")));
        }
        let values = Evaluator::new(structure, mods).eval_all(f, &[var])?;
        Self::new(structure, values)
    }

    pub fn structure(&self) -> &'a FiniteMetricOrder {
        self.structure
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `max |f - g|` over all points.
    pub fn sup_distance(&self, other: &[Rational]) -> Rational {
        self.values.iter().zip(other).map(|(a, b)| absdiff(a, b)).max().unwrap_or_else(Rational::zero)
    }

    fn derived(&self, values: Vec<Rational>) -> Self {
        SampledPredicate { structure: self.structure, values }
    }
}

/// Consecutive index blocks covering `0..n` in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Range<usize>>,
}

impl Partition {
    fn from_starts(starts: &BTreeSet<usize>, n: usize) -> Self {
        let s: Vec<usize> = starts.iter().copied().collect();
        let blocks = s.iter().enumerate().map(|(k, &a)| a..s.get(k + 1).copied().unwrap_or(n)).collect();
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn bounds(values: &[Rational]) -> Option<(&Rational, &Rational)> {
    Some((values.iter().min()?, values.iter().max()?))
}

fn oscillation(values: &[Rational]) -> Rational {
    bounds(values).map(|(lo, hi)| hi - lo).unwrap_or_else(Rational::zero)
}

fn midrange(values: &[Rational]) -> Option<Rational> {
    bounds(values).map(|(lo, hi)| (lo + hi) / rat(2, 1))
}

/// Greedy left-to-right cover by maximal blocks satisfying `ok`, which must
/// hold on singletons and be inherited by sub-blocks.
fn greedy(n: usize, ok: impl Fn(Range<usize>) -> bool) -> BTreeSet<usize> {
    let mut starts = BTreeSet::new();
    let mut start = 0;
    while start < n {
        starts.insert(start);
        let mut end = start + 1;
        while end < n && ok(start..end + 1) {
            end += 1;
        }
        start = end;
    }
    starts
}

/// The fewest consecutive blocks on each of which `f` varies by at most `eps`.
pub fn min_partition(f: &SampledPredicate<'_>, eps: &Rational) -> Result<Partition> {
    if eps.is_negative() {
        return Err(Error::Precondition("ε must be nonnegative".into()));
    }
    let v = f.values();
    Ok(Partition::from_starts(&greedy(v.len(), |r| oscillation(&v[r]) <= *eps), v.len()))
}

/// A step function with values in `{j/n}` within `1/n` of `f`, constant on
/// the common refinement of the threshold partitions: for each `i < n`,
/// blocks on which `f < (i+1)/n` or `f > i/n`.
pub fn grid_step_approx<'a>(f: &SampledPredicate<'a>, n: u32) -> Result<SampledPredicate<'a>> {
    if n == 0 {
        return Err(Error::Precondition("grid size must be positive".into()));
    }
    let v = f.values();
    let n = i64::from(n);
    let mut starts = BTreeSet::new();
    for i in 0..n {
        let (lo, hi) = (rat(i, n), rat(i + 1, n));
        starts.extend(greedy(v.len(), |r| !(v[r.clone()].iter().any(|x| *x <= lo) && v[r].iter().any(|x| *x >= hi))));
    }
    let part = Partition::from_starts(&starts, v.len());
    let mut out = vec![Rational::zero(); v.len()];
    for b in part.blocks() {
        let block = &v[b.clone()];
        let g = (0..=n)
            .map(|j| rat(j, n))
            .filter(|g| block.iter().all(|x| absdiff(x, g) < rat(1, n)))
            .min_by_key(|g| block.iter().map(|x| absdiff(x, g)).max())
            .expect("the refinement leaves a grid value within 1/n");
        out[b.clone()].fill(g);
    }
    Ok(f.derived(out))
}

/// `ψ_k(x) = max_{y <= x} φ_k(y)` and `φ_{k+1} = ψ_k - φ_k`, starting from
/// `φ_0 = f`, so that `f = Σ_{k<m} (-1)^k ψ_k + (-1)^m φ_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<'a> {
    pub psi: Vec<SampledPredicate<'a>>,
    pub residual: SampledPredicate<'a>,
}

impl Decomposition<'_> {
    /// The alternating sum of the parts, which equals the input exactly.
    pub fn recombine(&self) -> Vec<Rational> {
        let sign = |k: usize, x: &Rational| if k.is_multiple_of(2) { x.clone() } else { -x };
        let mut out: Vec<Rational> = self.residual.values().iter().map(|x| sign(self.psi.len(), x)).collect();
        for (k, p) in self.psi.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(p.values()) {
                *o += sign(k, x);
            }
        }
        out
    }
}

pub fn monotone_decomposition<'a>(f: &SampledPredicate<'a>, m: usize) -> Decomposition<'a> {
    let mut phi = f.clone();
    let mut psi = Vec::with_capacity(m);
    for _ in 0..m {
        let run: Vec<Rational> = phi
            .values()
            .iter()
            .scan(Rational::zero(), |acc, x| {
                *acc = acc.clone().max(x.clone());
                Some(acc.clone())
            })
            .collect();
        let next = run.iter().zip(phi.values()).map(|(s, x)| s - x).collect();
        psi.push(f.derived(run));
        phi = f.derived(next);
    }
    Decomposition { psi, residual: phi }
}

/// The least nondecreasing step map `α` with
/// `|φ(x) - φ(a)| + |ψ(x) - ψ(a)| <= α(d(x, a))` for every point `x`.
pub fn modulus_envelope(phi: &SampledPredicate<'_>, psi: &SampledPredicate<'_>, a: usize) -> Result<StepMap> {
    let m = phi.structure();
    m.checked(a)?;
    if psi.len() != phi.len() {
        return Err(Error::Precondition("predicates live on different structures".into()));
    }
    if phi.value(a) != psi.value(a) {
        return Err(Error::Precondition(format!(
            "predicates disagree at `{}`: {} vs {}",
            m.name(a),
            fmt_rat(phi.value(a)),
            fmt_rat(psi.value(a))
        )));
    }
    let mut pairs: Vec<(Rational, Rational)> = (0..m.len())
        .map(|x| (m.d(x, a).clone(), absdiff(phi.value(x), phi.value(a)) + absdiff(psi.value(x), psi.value(a))))
        .collect();
    pairs.sort();
    let mut steps: Vec<(Rational, Rational)> = Vec::new();
    let mut best = Rational::zero();
    for (t, v) in pairs {
        if v > best {
            best = v;
            match steps.last_mut() {
                Some(last) if last.0 == t => last.1 = best.clone(),
                _ => steps.push((t, best.clone())),
            }
        }
    }
    StepMap::new(steps)
}

fn atom(p: Pred, x: Term, y: Term) -> Formula {
    Formula::atom(p, vec![x, y])
}

fn var(v: &str) -> Term {
    Term::Var(v.to_string())
}

fn param(m: &FiniteMetricOrder, a: usize) -> Term {
    Term::Param(m.name(a).to_string())
}

/// `min(φ + α(r(x,a)), ψ + α(r(a,x)))` with truncated addition, which
/// equals `φ` up to `a` and `ψ` from `a` on. The envelope of `φ` and `ψ`
/// at `a` is registered in `mods` under `alpha`.
pub fn glue(
    m: &FiniteMetricOrder,
    mods: &mut ModTable,
    phi: &Formula,
    psi: &Formula,
    a: usize,
    alpha: &str,
) -> Result<Formula> {
    if mods.get(alpha).is_some() {
        return Err(Error::Precondition(format!("modulus `{alpha}` is already defined")));
    }
    let fp = SampledPredicate::from_formula(m, phi, "x", mods)?;
    let fq = SampledPredicate::from_formula(m, psi, "x", mods)?;
    mods.insert(alpha, ModMap::Step(modulus_envelope(&fp, &fq, a)?));
    let left = Formula::plus(phi.clone(), Formula::modulus(alpha, atom(Pred::R, var("x"), param(m, a))));
    let right = Formula::plus(psi.clone(), Formula::modulus(alpha, atom(Pred::R, param(m, a), var("x"))));
    Ok(Formula::min(left, right))
}

/// A synthesized formula in the free variable `x` together with the
/// modulus maps it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QfFormula {
    pub formula: Formula,
    pub mods: ModTable,
}

impl QfFormula {
    pub fn evaluate<'a>(&self, m: &'a FiniteMetricOrder) -> Result<SampledPredicate<'a>> {
        SampledPredicate::from_formula(m, &self.formula, "x", &self.mods)
    }
}

/// How [`qf_synthesis`] shapes each piece between breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SynthMode {
    /// Breakpoints at block starts of a `2ε`-partition; each piece is the
    /// plateau formula with one-point indicators at its endpoints.
    #[default]
    Gap,
    /// Breakpoints at both ends of every block of an `ε`-partition; each
    /// piece interpolates linearly in `d(x, a_i)` between its endpoints.
    Interpolate,
}

/// Adds `c · body` to `acc` with truncated connectives; exact whenever the
/// true sum stays in `[0,1]`.
fn add_term(acc: Formula, c: &Rational, body: Formula) -> Formula {
    if c.is_zero() {
        acc
    } else if c.is_positive() {
        Formula::plus(acc, Formula::scale(c.clone(), body))
    } else {
        Formula::tsub(acc, Formula::scale(-c, body))
    }
}

struct Builder<'m> {
    m: &'m FiniteMetricOrder,
    mods: ModTable,
    ramps: usize,
}

impl Builder<'_> {
    /// `min(d(x, a) / t, 1)` through a fresh ramp modulus.
    fn ramp(&mut self, a: usize, t: &Rational) -> Formula {
        let name = format!("ramp{}", self.ramps);
        self.ramps += 1;
        self.mods.insert(&name, ModMap::Ramp(t.clone()));
        Formula::modulus(&name, atom(Pred::D, var("x"), param(self.m, a)))
    }

    /// `1 - min(d(x, a) / t, 1)`: 1 at `a`, 0 at distance `>= t`.
    fn indicator(&mut self, a: usize, t: &Rational) -> Formula {
        Formula::tsub(Formula::Const(one()), self.ramp(a, t))
    }

    fn min_dist(&self, a: usize, others: impl IntoIterator<Item = usize>) -> Option<Rational> {
        others.into_iter().map(|x| self.m.d(x, a).clone()).min()
    }

    /// Plateau piece on `[lo, hi]` (either end may be open to infinity):
    /// `g(lo)` at `lo`, `g(hi)` at `hi`, `s` strictly between.
    fn plateau(&mut self, g: &[Rational], lo: Option<usize>, hi: Option<usize>, s: &Rational) -> Formula {
        let n = self.m.len();
        let (first, last) = (lo.map_or(0, |a| a + 1), hi.unwrap_or(n));
        let mut t: Option<Rational> = None;
        if let Some(a) = lo {
            t = self.min_dist(a, first..hi.map_or(n, |b| b + 1));
        }
        if let Some(b) = hi {
            let tb = self.min_dist(b, lo.unwrap_or(0)..last);
            t = match (t, tb) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
        }
        let Some(t) = t else {
            return Formula::Const(s.clone());
        };
        let (mut up, mut down) = (Formula::Const(s.clone()), Vec::new());
        for a in [lo, hi].into_iter().flatten() {
            let c = &g[a] - s;
            let ind = self.indicator(a, &t);
            if c.is_negative() {
                down.push((c, ind));
            } else {
                up = add_term(up, &c, ind);
            }
        }
        down.into_iter().fold(up, |acc, (c, ind)| add_term(acc, &c, ind))
    }

    /// `g(a) + (g(b) - g(a)) · min(d(x, a) / d(b, a), 1)`.
    fn interpolation(&mut self, g: &[Rational], a: usize, b: usize) -> Formula {
        let t = self.m.d(a, b).clone();
        let r = self.ramp(a, &t);
        add_term(Formula::Const(g[a].clone()), &(&g[b] - &g[a]), r)
    }
}

/// A quantifier-free formula in `{d, r}` whose values are within `2ε` of
/// `f`: a step approximation `g` with `g(a_i) = f(a_i)` at breakpoints,
/// one formula per piece, glued at the breakpoints.
pub fn qf_synthesis(f: &SampledPredicate<'_>, eps: &Rational, mode: SynthMode) -> Result<QfFormula> {
    if !eps.is_positive() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let m = f.structure();
    let v = f.values();
    let mut b = Builder { m, mods: ModTable::new(), ramps: 0 };
    let mut pieces: Vec<(Formula, Option<usize>)> = Vec::new();
    match mode {
        SynthMode::Gap => {
            let part = min_partition(f, &(eps * rat(2, 1)))?;
            let breaks: Vec<usize> = part.blocks().iter().skip(1).map(|r| r.start).collect();
            let g = v.to_vec();
            let ends: Vec<Option<usize>> =
                std::iter::once(None).chain(breaks.iter().copied().map(Some)).chain(std::iter::once(None)).collect();
            for w in ends.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let inner = &v[lo.map_or(0, |a| a + 1)..hi.unwrap_or(v.len())];
                let s = match midrange(inner) {
                    Some(s) => s,
                    None if lo.is_none() => continue,
                    None => g[lo.or(hi).expect("a finite end")].clone(),
                };
                pieces.push((b.plateau(&g, lo, hi, &s), lo));
            }
        }
        SynthMode::Interpolate => {
            let part = min_partition(f, eps)?;
            let breaks: BTreeSet<usize> = part.blocks().iter().flat_map(|r| [r.start, r.end - 1]).collect();
            let breaks: Vec<usize> = breaks.into_iter().collect();
            pieces.push((Formula::Const(v[breaks[0]].clone()), None));
            for w in breaks.windows(2) {
                pieces.push((b.interpolation(v, w[0], w[1]), Some(w[0])));
            }
        }
    }
    let mut pieces = pieces.into_iter();
    let (mut h, _) = pieces.next().expect("at least one piece");
    for (k, (phi, at)) in pieces.enumerate() {
        let a = at.expect("later pieces start at a breakpoint");
        h = glue(m, &mut b.mods, &h, &phi, a, &format!("alpha{k}"))?;
    }
    Ok(QfFormula { formula: h, mods: b.mods })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::chain3;
    use crate::rational::zero;

    fn vals(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    fn line(n: usize) -> FiniteMetricOrder {
        FiniteMetricOrder::from_fn(n, "p", |i, j| rat((i as i64 - j as i64).abs(), n as i64)).unwrap()
    }

    #[test]
    fn partitions() {
        let m = line(5);
        let f = SampledPredicate::new(&m, vals(&[(0, 1), (0, 1), (1, 1), (1, 1), (0, 1)])).unwrap();
        let p = min_partition(&f, &rat(1, 2)).unwrap();
        assert_eq!(p.blocks(), &[0..2, 2..4, 4..5]);
        assert_eq!(min_partition(&f, &rat(2, 1)).unwrap().len(), 1);
        let c = SampledPredicate::new(&m, vec![rat(1, 3); 5]).unwrap();
        assert_eq!(min_partition(&c, &zero()).unwrap().len(), 1);
        assert!(min_partition(&f, &rat(-1, 2)).is_err());
        assert!(SampledPredicate::new(&m, vec![rat(3, 2); 5]).is_err());
        assert!(SampledPredicate::new(&m, vec![zero(); 4]).is_err());
    }

    #[test]
    fn grid_values() {
        let m = line(3);
        let f = SampledPredicate::new(&m, vec![rat(49, 100); 3]).unwrap();
        assert_eq!(grid_step_approx(&f, 2).unwrap().values(), &[rat(1, 2), rat(1, 2), rat(1, 2)]);
        let g = SampledPredicate::new(&m, vals(&[(1, 4), (3, 4), (1, 1)])).unwrap();
        assert_eq!(grid_step_approx(&g, 4).unwrap(), g);
        assert!(grid_step_approx(&g, 0).is_err());
    }

    #[test]
    fn decomposition_by_hand() {
        let m = line(3);
        let f = SampledPredicate::new(&m, vals(&[(0, 1), (1, 1), (0, 1)])).unwrap();
        let d = monotone_decomposition(&f, 2);
        assert_eq!(d.psi[0].values(), &vals(&[(0, 1), (1, 1), (1, 1)]));
        assert_eq!(d.psi[1].values(), &vals(&[(0, 1), (0, 1), (1, 1)]));
        assert_eq!(d.residual.values(), &[zero(), zero(), zero()]);
        assert_eq!(d.recombine(), f.values());
        let up = SampledPredicate::new(&m, vals(&[(0, 1), (1, 2), (1, 1)])).unwrap();
        let d = monotone_decomposition(&up, 2);
        assert_eq!(d.psi[0], up);
        assert!(d.psi[1].values().iter().all(Zero::is_zero));
    }

    #[test]
    fn envelopes() {
        let m = FiniteMetricOrder::from_fn(2, "p", |i, j| if i == j { zero() } else { rat(1, 2) }).unwrap();
        let phi = SampledPredicate::new(&m, vals(&[(0, 1), (1, 4)])).unwrap();
        let psi = SampledPredicate::new(&m, vals(&[(0, 1), (1, 8)])).unwrap();
        let a = modulus_envelope(&phi, &psi, 0).unwrap();
        assert_eq!(a.steps(), &[(rat(1, 2), rat(3, 8))]);
        assert_eq!(a.value(&rat(1, 4)), zero());
        let flat = modulus_envelope(&psi, &psi, 1).unwrap();
        assert_eq!(flat.value(&rat(1, 4)), zero());
        assert!(modulus_envelope(&phi, &psi, 1).is_err());
    }

    #[test]
    fn glue_on_chain3() {
        let m = chain3();
        let mut mods = ModTable::new();
        let left = Formula::Const(rat(1, 2));
        let c = rat(1, 2) - m.d(0, 1);
        let right = Formula::plus(Formula::Const(c), atom(Pred::D, var("x"), param(&m, 0)));
        let v = SampledPredicate::from_formula(&m, &right, "x", &mods).unwrap();
        assert_eq!(v.value(1), &rat(1, 2));
        let h = glue(&m, &mut mods, &left, &right, 1, "alpha").unwrap();
        let got = SampledPredicate::from_formula(&m, &h, "x", &mods).unwrap();
        assert_eq!(got.values(), &[rat(1, 2), rat(1, 2), v.value(2).clone()]);
        assert!(glue(&m, &mut mods, &left, &right, 1, "alpha").is_err());
        assert!(glue(&m, &mut ModTable::new(), &left, &right, 0, "beta").is_err());
    }

    #[test]
    fn synthesis_modes() {
        let m = line(6);
        let f = SampledPredicate::new(&m, vals(&[(0, 1), (1, 8), (1, 1), (7, 8), (1, 2), (1, 2)])).unwrap();
        for mode in [SynthMode::Gap, SynthMode::Interpolate] {
            let eps = rat(1, 8);
            let q = qf_synthesis(&f, &eps, mode).unwrap();
            assert!(q.formula.is_quantifier_free());
            assert!(q.formula.predicates().iter().all(|p| *p == "d" || *p == "r"));
            assert!(f.sup_distance(q.evaluate(&m).unwrap().values()) <= eps);
        }
        let c = SampledPredicate::new(&m, vec![rat(2, 5); 6]).unwrap();
        let q = qf_synthesis(&c, &rat(1, 4), SynthMode::Gap).unwrap();
        assert_eq!(q.formula, Formula::Const(rat(2, 5)));
        assert!(qf_synthesis(&c, &zero(), SynthMode::Gap).is_err());
    }
}
