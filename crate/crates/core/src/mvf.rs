//! A valued-field sandbox over truncated generalized power series in `t`
//! with rational exponents and coefficients.
//!
//! Absolute values are kept as exponents: `|a| = 2^{-v(a)}` is never formed,
//! so products are exponent sums and cube roots exponent means, all exact.
//! The field order is decided by the sign of the leading coefficient, which
//! makes `t` a positive infinitesimal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::cyclic::FiniteCyclicOrder;
use crate::error::{Error, Result};
use crate::order::FiniteMetricOrder;
use crate::rational::{fmt_rat, parse_rat, rat, Rational};

/// Largest exponent denominator a series may carry.
pub const DEN_CAP: i64 = 64;

/// A finite sum `Σ c_i t^{e_i}` with distinct exponents and nonzero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TruncSeries {
    terms: BTreeMap<Rational, Rational>,
}

fn check_exponent(e: &Rational) -> Result<()> {
    if *e.denom() > DEN_CAP.into() {
        return Err(Error::Precondition(format!(
            "exponent {} has denominator above the cap of {DEN_CAP}",
            fmt_rat(e)
        )));
    }
    Ok(())
}

impl TruncSeries {
    /// Sums the given terms, merging equal exponents and dropping zeros.
    pub fn new(terms: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let mut out: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (e, c) in terms {
            check_exponent(&e)?;
            *out.entry(e).or_insert_with(Rational::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(TruncSeries { terms: out })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// `c t^e`; the exponent must respect [`DEN_CAP`].
    pub fn monomial(c: Rational, e: Rational) -> Self {
        Self::new([(e, c)]).expect("monomial exponent within the cap")
    }

    /// `t^e`.
    pub fn t_pow(e: Rational) -> Result<Self> {
        Self::new([(e, Rational::one())])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs, exponents increasing.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    fn leading(&self) -> Option<(&Rational, &Rational)> {
        self.terms.iter().next()
    }

    /// Whether every exponent is nonnegative.
    pub fn in_valuation_ring(&self) -> bool {
        self.terms.keys().all(|e| !e.is_negative())
    }

    fn scaled(&self, c: &Rational, shift: &Rational) -> Result<Self> {
        Self::new(self.terms.iter().map(|(e, x)| (e + shift, x * c)))
    }
}

pub fn series_add(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    TruncSeries::new(a.terms().chain(b.terms()).map(|(e, c)| (e.clone(), c.clone()))).expect("exponents already within the cap")
}

pub fn series_neg(a: &TruncSeries) -> TruncSeries {
    TruncSeries { terms: a.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
}

pub fn series_sub(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    series_add(a, &series_neg(b))
}

/// Fails only when a product exponent exceeds the denominator cap.
pub fn series_mul(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
    TruncSeries::new(a.terms().flat_map(|(e, x)| b.terms().map(move |(f, y)| (e + f, x * y))))
}

/// `|a|` as the exponent `v(a)`, or zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Magnitude {
    Zero,
    /// `|a| = 2^{-e}`.
    Exp(Rational),
}

impl Magnitude {
    pub fn exponent(&self) -> Option<&Rational> {
        match self {
            Magnitude::Zero => None,
            Magnitude::Exp(e) => Some(e),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Magnitude::Zero)
    }
}

/// Orders by size: `Zero` is least and a larger exponent is smaller.
impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Magnitude::Zero, Magnitude::Zero) => Ordering::Equal,
            (Magnitude::Zero, _) => Ordering::Less,
            (_, Magnitude::Zero) => Ordering::Greater,
            (Magnitude::Exp(a), Magnitude::Exp(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Zero => write!(f, "0"),
            Magnitude::Exp(e) => write!(f, "|t|^({})", fmt_rat(e)),
        }
    }
}

pub fn valuation(a: &TruncSeries) -> Magnitude {
    a.leading().map_or(Magnitude::Zero, |(e, _)| Magnitude::Exp(e.clone()))
}

/// Sign of the leading coefficient.
pub fn sign(a: &TruncSeries) -> i32 {
    a.leading().map_or(0, |(_, c)| if c.is_positive() { 1 } else { -1 })
}

pub fn leq(a: &TruncSeries, b: &TruncSeries) -> bool {
    sign(&series_sub(b, a)) >= 0
}

fn check_ring(a: &TruncSeries) -> Result<()> {
    if a.in_valuation_ring() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("`{a}` has a negative exponent")))
    }
}

/// `D(x, y) = inf_z |y - x z|` over the valuation ring: zero when `x`
/// divides `y`, otherwise `|y|`.
pub fn d_pred(x: &TruncSeries, y: &TruncSeries) -> Result<Magnitude> {
    check_ring(x)?;
    check_ring(y)?;
    Ok(if valuation(x) >= valuation(y) { Magnitude::Zero } else { valuation(y) })
}

/// The quotients met while long-dividing `y` by `x` in the valuation ring,
/// from `0` up to `steps` terms, stopping early once the remainder vanishes
/// or the next term would leave the ring.
pub fn division_witnesses(x: &TruncSeries, y: &TruncSeries, steps: usize) -> Result<Vec<TruncSeries>> {
    let mut out = vec![TruncSeries::zero()];
    let Some((ex, cx)) = x.leading() else {
        return Ok(out);
    };
    let (mut q, mut rem) = (TruncSeries::zero(), y.clone());
    for _ in 0..steps {
        let Some((er, cr)) = rem.leading() else {
            break;
        };
        let gamma = er - ex;
        if gamma.is_negative() {
            break;
        }
        let term = TruncSeries::new([(gamma.clone(), cr / cx)])?;
        rem = series_sub(&rem, &x.scaled(&(cr / cx), &gamma)?);
        q = series_add(&q, &term);
        out.push(q.clone());
    }
    Ok(out)
}

/// The least `|y - x z|` over [`division_witnesses`].
pub fn d_pred_brute(x: &TruncSeries, y: &TruncSeries, steps: usize) -> Result<Magnitude> {
    check_ring(x)?;
    check_ring(y)?;
    let mut best: Option<Magnitude> = None;
    for z in division_witnesses(x, y, steps)? {
        let m = valuation(&series_sub(y, &series_mul(x, &z)?));
        best = Some(best.map_or(m.clone(), |b| b.min(m)));
    }
    Ok(best.expect("zero is always a witness"))
}

/// Maps the distinct exponents `e_1 < ... < e_k` to `k/(k+1) > ... > 1/(k+1)`.
fn rescale(exps: impl IntoIterator<Item = Rational>) -> BTreeMap<Rational, Rational> {
    let mut sorted: Vec<Rational> = exps.into_iter().collect();
    sorted.sort();
    sorted.dedup();
    let k = sorted.len() as i64;
    sorted.into_iter().enumerate().map(|(i, e)| (e, rat(k - i as i64, k + 1))).collect()
}

fn scaled_magnitude(table: &BTreeMap<Rational, Rational>, m: &Magnitude) -> Rational {
    m.exponent().map_or_else(Rational::zero, |e| table[e].clone())
}

/// The value order of nonzero elements of the valuation ring: one point per
/// distinct valuation, in increasing order, with `r(v(x), v(y)) = D(x, y)`
/// after rescaling the occurring exponents into `(0,1]`. Also returns the
/// point of each input element.
pub fn value_order_export(elements: &[TruncSeries]) -> Result<(FiniteMetricOrder, Vec<usize>)> {
    let mut vals = Vec::with_capacity(elements.len());
    for a in elements {
        check_ring(a)?;
        match valuation(a) {
            Magnitude::Zero => return Err(Error::Precondition("zero has no valuation".into())),
            Magnitude::Exp(e) => vals.push(e),
        }
    }
    let table = rescale(vals.iter().cloned());
    let points: Vec<Rational> = table.keys().cloned().collect();
    let positions = vals.iter().map(|v| points.binary_search(v).expect("listed")).collect();
    let m = FiniteMetricOrder::new_large(
        (0..points.len()).map(|i| format!("v{i}")).collect(),
        (0..points.len())
            .map(|i| (0..points.len()).map(|j| if i == j { Rational::zero() } else { table[&points[i.min(j)]].clone() }).collect())
            .collect(),
    )?;
    Ok((m, positions))
}

/// A point `[x : x*]` of the projective line, scaled so that
/// `min(v(x), v(x*)) = 0` and the first coordinate of valuation 0 has a
/// positive leading coefficient. Equality is projective equality.
#[derive(Debug, Clone)]
pub struct ProjPoint {
    x: TruncSeries,
    xs: TruncSeries,
}

impl ProjPoint {
    pub fn new(x: TruncSeries, xs: TruncSeries) -> Result<Self> {
        let (vx, vs) = (valuation(&x), valuation(&xs));
        let lead = match (vx.exponent(), vs.exponent()) {
            (None, None) => return Err(Error::Precondition("[0 : 0] is not a point".into())),
            (Some(a), Some(b)) => a.min(b).clone(),
            (Some(a), None) | (None, Some(a)) => a.clone(),
        };
        let first = if vx.exponent() == Some(&lead) { &x } else { &xs };
        let c = Rational::from_integer(sign(first).into());
        let shift = -lead;
        Ok(ProjPoint { x: x.scaled(&c, &shift)?, xs: xs.scaled(&c, &shift)? })
    }

    /// `[a : 1]`.
    pub fn affine(a: TruncSeries) -> Result<Self> {
        Self::new(a, TruncSeries::constant(Rational::one()))
    }

    pub fn infinity() -> Self {
        Self::new(TruncSeries::constant(Rational::one()), TruncSeries::zero()).expect("valid point")
    }

    pub fn coords(&self) -> (&TruncSeries, &TruncSeries) {
        (&self.x, &self.xs)
    }

    /// Orientation-preserving isometry `[x : x*] -> [-x* : x]`.
    fn rotate(&self) -> Result<Self> {
        Self::new(series_neg(&self.xs), self.x.clone())
    }

    /// Inverse of [`ProjPoint::rotate`].
    fn unrotate(&self) -> Result<Self> {
        Self::new(self.xs.clone(), series_neg(&self.x))
    }
}

fn det(p: &ProjPoint, q: &ProjPoint) -> Result<TruncSeries> {
    Ok(series_sub(&series_mul(&p.x, &q.xs)?, &series_mul(&p.xs, &q.x)?))
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        det(self, other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

/// `|x y* - x* y|`.
pub fn proj_distance(p: &ProjPoint, q: &ProjPoint) -> Result<Magnitude> {
    Ok(valuation(&det(p, q)?))
}

/// Sign of `(x y* - x* y)(y z* - y* z)(z x* - z* x)`.
fn orientation(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<i32> {
    Ok(sign(&det(p, q)?) * sign(&det(q, r)?) * sign(&det(r, p)?))
}

/// Nonstrict cyclic order: the homogenized `(x - y)(y - z)(z - x)` is `>= 0`.
pub fn proj_ceq(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<bool> {
    Ok(orientation(p, q, r)? >= 0)
}

fn pairwise(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<[Rational; 3]> {
    let e = |a, b| -> Result<Rational> {
        Ok(proj_distance(a, b)?.exponent().cloned().expect("a strict triple has distinct points"))
    };
    Ok([e(p, q)?, e(q, r)?, e(r, p)?])
}

/// Zero on `ceq` triples, else the least pairwise distance.
pub fn proj_dceq(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<Magnitude> {
    if proj_ceq(p, q, r)? {
        return Ok(Magnitude::Zero);
    }
    let e = pairwise(p, q, r)?;
    Ok(Magnitude::Exp(e.into_iter().max().expect("three entries")))
}

/// Zero on `ceq` triples, else the cube root of the product of the pairwise
/// distances.
pub fn proj_phi(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<Magnitude> {
    if proj_ceq(p, q, r)? {
        return Ok(Magnitude::Zero);
    }
    let e = pairwise(p, q, r)?;
    Ok(Magnitude::Exp(e.iter().sum::<Rational>() / rat(3, 1)))
}

/// `⟨u⟩`: zero for `u >= 0`, `|u|` for `-1 <= u < 0`, `|u|^{-1}` for
/// `u < -1`. In exponents this is `|v(u)|` for negative `u`.
pub fn signed_norm(u: &TruncSeries) -> Magnitude {
    match (sign(u), valuation(u)) {
        (s, Magnitude::Exp(e)) if s < 0 => Magnitude::Exp(e.abs()),
        _ => Magnitude::Zero,
    }
}

/// `⟨x / x*⟩` for a projective point, zero at infinity. Values above 1 in
/// absolute value only arise here, outside the valuation ring.
pub fn signed_norm_proj(p: &ProjPoint) -> Magnitude {
    match (valuation(&p.x), valuation(&p.xs)) {
        (Magnitude::Exp(a), Magnitude::Exp(b)) if sign(&p.x) * sign(&p.xs) < 0 => Magnitude::Exp((a - b).abs()),
        _ => Magnitude::Zero,
    }
}

/// A point `C` with `d(P, C) = |t|^target` and `ceq(P, C, Q)`: `C = [a + t^target : 1]`
/// for `P = [a : 1]`, after rotating the line so that `P` is affine.
pub fn proj_density_witness(p: &ProjPoint, q: &ProjPoint, target: &Rational) -> Result<ProjPoint> {
    let bound = proj_distance(p, q)?;
    match bound.exponent() {
        Some(e) if target > e => {}
        _ => {
            return Err(Error::Precondition(format!(
                "target |t|^({}) must be below d(P,Q) = {bound}",
                fmt_rat(target)
            )))
        }
    }
    if !valuation(&p.xs).exponent().is_some_and(Zero::is_zero) {
        return proj_density_witness(&p.rotate()?, &q.rotate()?, target)?.unrotate();
    }
    let q_term = TruncSeries::t_pow(target.clone())?;
    ProjPoint::new(series_add(&p.x, &series_mul(&q_term, &p.xs)?), p.xs.clone())
}

/// The metric cyclic order on distinct projective points, named `q0, q1,
/// ...` in input order, with distances rescaled as in
/// [`value_order_export`].
pub fn proj_cyclic_export(points: &[ProjPoint]) -> Result<FiniteCyclicOrder> {
    let n = points.len();
    let mut dist = vec![vec![Magnitude::Zero; n]; n];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = proj_distance(&points[i], &points[j])?;
            if i != j && dist[i][j].is_zero() {
                return Err(Error::Precondition(format!("points {i} and {j} coincide")));
            }
        }
    }
    let table = rescale(dist.iter().flatten().filter_map(|m| m.exponent().cloned()));
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if proj_ceq(&points[x], &points[y], &points[z])? {
                    triples.push((x, y, z));
                }
            }
        }
    }
    FiniteCyclicOrder::new_large(
        (0..n).map(|i| format!("q{i}")).collect(),
        dist.iter().map(|row| row.iter().map(|m| scaled_magnitude(&table, m)).collect()).collect(),
        triples,
    )
}

/// A random valuation-ring element with up to `terms` terms, exponents in
/// `{0, 1/den, ..., 2}` and small integer coefficients.
pub fn random_series<R: Rng>(rng: &mut R, terms: usize, den: i64) -> TruncSeries {
    let k = rng.gen_range(0..=terms);
    let list: Vec<(Rational, Rational)> =
        (0..k).map(|_| (rat(rng.gen_range(0..=2 * den), den), rat(rng.gen_range(-3..=3), 1))).collect();
    TruncSeries::new(list).expect("exponents within the cap")
}

/// A random projective point: usually affine, occasionally near or at infinity.
pub fn random_proj_point<R: Rng>(rng: &mut R, terms: usize, den: i64) -> ProjPoint {
    loop {
        let a = random_series(rng, terms, den);
        let b = match rng.gen_range(0..6) {
            0 => random_series(rng, terms, den),
            1 => TruncSeries::zero(),
            _ => TruncSeries::constant(Rational::one()),
        };
        if let Ok(p) = ProjPoint::new(a, b) {
            return p;
        }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*t^({})", fmt_rat(c), fmt_rat(e))?;
        }
        Ok(())
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.x, self.xs)
    }
}

fn parse_exponent(s: &str) -> Result<Rational> {
    let s = s.trim();
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    parse_rat(inner)
}

/// One term: `c`, `c*t`, `c*t^e`, `t^e` or `t`, with `e` optionally in
/// parentheses and an optional leading `-`.
fn parse_term(s: &str) -> Result<(Rational, Rational)> {
    let bad = || Error::Parse(format!("invalid series term `{s}`"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let (coef, var) = match body.split_once('*') {
        Some((c, v)) => (parse_rat(c)?, Some(v.trim())),
        None if body.starts_with('t') => (Rational::one(), Some(body)),
        None => (parse_rat(body)?, None),
    };
    let exp = match var {
        None => Rational::zero(),
        Some("t") => Rational::one(),
        Some(v) => parse_exponent(v.strip_prefix("t^").ok_or_else(bad)?)?,
    };
    Ok((exp, if neg { -coef } else { coef }))
}

impl FromStr for TruncSeries {
    type Err = Error;

    /// Parses sums like `3/1*t^(1/2) + -1/1*t^(1/1)`; `-` also works as a
    /// binary operator.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut cur = String::new();
        let mut depth = 0i32;
        for ch in s.chars().filter(|c| !c.is_whitespace()) {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let split = depth == 0 && (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^');
            if split {
                terms.push(std::mem::take(&mut cur));
            }
            if !(depth == 0 && ch == '+') {
                cur.push(ch);
            }
        }
        terms.push(cur);
        if terms.iter().any(String::is_empty) {
            return Err(Error::Parse(format!("invalid series `{s}`")));
        }
        TruncSeries::new(terms.iter().map(|t| parse_term(t)).collect::<Result<Vec<_>>>()?)
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected `[series : series]`, found `{s}`")))?;
        let (a, b) = inner.split_once(':').ok_or_else(|| Error::Parse(format!("missing `:` in `{s}`")))?;
        ProjPoint::new(a.parse()?, b.parse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricSpace;

    fn s(x: &str) -> TruncSeries {
        x.parse().unwrap()
    }

    fn p(x: &str) -> ProjPoint {
        x.parse().unwrap()
    }

    fn exp(a: i64, b: i64) -> Magnitude {
        Magnitude::Exp(rat(a, b))
    }

    #[test]
    fn arithmetic_and_parsing() {
        let a = s("3/1*t^(1/2) + -1/1*t^(1/1)");
        assert_eq!(a.to_string(), "3/1*t^(1/2) + -1/1*t^(1/1)");
        assert_eq!(s(&a.to_string()), a);
        assert_eq!(s("3*t^(1/2) - t"), a);
        assert_eq!(series_add(&a, &TruncSeries::zero()), a);
        let prod = series_mul(&s("1 + t^(1/2)"), &s("1 - t^(1/2)")).unwrap();
        assert_eq!(prod, s("1 - t"));
        assert_eq!(s("t^(-1/2)").terms().next().unwrap().0, &rat(-1, 2));
        assert_eq!(s("0"), TruncSeries::zero());
        assert!("t^(1/65)".parse::<TruncSeries>().is_err());
        assert!(series_mul(&s("t^(1/64)"), &s("t^(1/63)")).is_err());
        assert!("1 +".parse::<TruncSeries>().is_err());
        assert!("x^2".parse::<TruncSeries>().is_err());
    }

    #[test]
    fn valuation_and_order() {
        assert_eq!(valuation(&TruncSeries::zero()), Magnitude::Zero);
        let a = s("3*t^(1/2) - t");
        assert_eq!(valuation(&a), exp(1, 2));
        assert_eq!(sign(&a), 1);
        assert!(leq(&s("t"), &s("1")));
        assert!(!leq(&s("1"), &s("t")));
        assert!(exp(1, 2) > exp(1, 1));
        assert!(Magnitude::Zero < exp(5, 1));
    }

    #[test]
    fn divisibility_predicate() {
        assert_eq!(d_pred(&s("1"), &s("t")).unwrap(), Magnitude::Zero);
        assert_eq!(d_pred(&s("t"), &s("1")).unwrap(), exp(0, 1));
        assert_eq!(d_pred(&s("t^(1/2)"), &s("t^(1/3)")).unwrap(), exp(1, 3));
        assert_eq!(d_pred_brute(&s("t^(1/2)"), &s("t^(1/3)"), 8).unwrap(), exp(1, 3));
        let x = s("2*t^(1/3) + t");
        let y = series_mul(&x, &s("1 - t^(1/2) + 5*t^2")).unwrap();
        assert_eq!(d_pred_brute(&x, &y, 8).unwrap(), Magnitude::Zero);
        assert!(d_pred(&s("t^(-1)"), &s("1")).is_err());
    }

    #[test]
    fn value_orders() {
        let (m, pos) = value_order_export(&[s("1"), s("t"), s("t^2"), s("3*t")]).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(pos, vec![0, 1, 2, 1]);
        assert_eq!(m.ray(2, 0), rat(3, 4));
        assert_eq!(m.mlo_defect(), rat(0, 1));
        assert_eq!(m.ultrametric_defect(), rat(0, 1));
        assert_eq!(value_order_export(&[s("t")]).unwrap().0.len(), 1);
        assert!(value_order_export(&[s("0")]).is_err());
    }

    #[test]
    fn projective_points() {
        assert_eq!(p("[2*t : 2*t^2]"), p("[1 : t]"));
        assert_eq!(p("[-1 : 0]"), ProjPoint::infinity());
        assert!("[0 : 0]".parse::<ProjPoint>().is_err());
        assert_eq!(proj_distance(&p("[t:1]"), &p("[t:1]")).unwrap(), Magnitude::Zero);
        assert_eq!(proj_distance(&p("[t:1]"), &p("[0:1]")).unwrap(), exp(1, 1));
        assert_eq!(proj_distance(&ProjPoint::infinity(), &p("[1 + t:1]")).unwrap(), exp(0, 1));
        let (a, b, c) = (p("[0:1]"), p("[1:1]"), p("[2:1]"));
        assert!(proj_ceq(&a, &b, &c).unwrap());
        assert!(!proj_ceq(&a, &c, &b).unwrap());
        assert!(proj_ceq(&a, &a, &b).unwrap());
        assert!(proj_ceq(&a, &b, &ProjPoint::infinity()).unwrap());
        assert!(!proj_ceq(&b, &a, &ProjPoint::infinity()).unwrap());
    }

    #[test]
    fn cyclic_distances() {
        // Pairwise exponents 1, 1, 2 on a non-ceq triple.
        let (a, b, c) = (p("[0:1]"), p("[t + t^2:1]"), p("[t:1]"));
        assert!(!proj_ceq(&a, &b, &c).unwrap());
        assert_eq!(proj_dceq(&a, &b, &c).unwrap(), exp(2, 1));
        assert_eq!(proj_phi(&a, &b, &c).unwrap(), exp(4, 3));
        assert_eq!(proj_phi(&a, &c, &b).unwrap(), Magnitude::Zero);
    }

    #[test]
    fn signed_norms() {
        assert_eq!(signed_norm(&s("t")), Magnitude::Zero);
        assert_eq!(signed_norm(&s("-t")), exp(1, 1));
        assert_eq!(signed_norm(&s("-2")), exp(0, 1));
        assert_eq!(signed_norm_proj(&p("[-1 : t]")), exp(1, 1));
        assert_eq!(signed_norm_proj(&p("[-t : 1]")), exp(1, 1));
        assert_eq!(signed_norm_proj(&p("[1 : t]")), Magnitude::Zero);
        assert_eq!(signed_norm_proj(&ProjPoint::infinity()), Magnitude::Zero);
    }

    #[test]
    fn density() {
        let (a, b) = (p("[0:1]"), p("[1:1]"));
        let c = proj_density_witness(&a, &b, &rat(2, 1)).unwrap();
        assert_eq!(c, p("[t^2:1]"));
        assert!(proj_ceq(&a, &c, &b).unwrap());
        assert!(proj_density_witness(&a, &b, &rat(0, 1)).is_err());
        assert!(proj_density_witness(&a, &a, &rat(1, 1)).is_err());
        let (inf, near) = (ProjPoint::infinity(), p("[1 : t]"));
        let c = proj_density_witness(&inf, &near, &rat(3, 2)).unwrap();
        assert_eq!(proj_distance(&inf, &c).unwrap(), exp(3, 2));
        assert!(proj_ceq(&inf, &c, &near).unwrap());
    }
}
