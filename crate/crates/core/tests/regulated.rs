use metord::clogic::{Formula, ModTable, Pred, Term};
use metord::gen::{random_line, random_ulo, rng};
use metord::rational::{absdiff, rat};
use metord::regulated::{
    glue, grid_step_approx, min_partition, modulus_envelope, monotone_decomposition, qf_synthesis, SampledPredicate,
    SynthMode,
};
use metord::{FiniteMetricOrder, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn random_values<R: Rng>(r: &mut R, n: usize, den: i64) -> Vec<Rational> {
    (0..n).map(|_| rat(r.gen_range(0..=den), den)).collect()
}

fn structure(seed: u64, n: usize) -> FiniteMetricOrder {
    let mut r = rng(seed);
    if seed.is_multiple_of(2) {
        random_ulo(&mut r, n, 8)
    } else {
        random_line(&mut r, n, 16)
    }
}

fn oscillation(v: &[Rational]) -> Rational {
    v.iter().max().unwrap() - v.iter().min().unwrap()
}

/// Fewest blocks over every way of cutting `0..n`.
fn brute_min_blocks(v: &[Rational], eps: &Rational) -> usize {
    let n = v.len();
    (0u32..1 << (n - 1))
        .filter_map(|cuts| {
            let mut start = 0;
            let mut blocks = 0;
            for i in 1..=n {
                if i == n || cuts & (1 << (i - 1)) != 0 {
                    if oscillation(&v[start..i]) > *eps {
                        return None;
                    }
                    blocks += 1;
                    start = i;
                }
            }
            Some(blocks)
        })
        .min()
        .unwrap()
}

fn param(m: &FiniteMetricOrder, a: usize) -> Term {
    Term::Param(m.name(a).to_string())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn greedy_partition_is_optimal(seed in any::<u64>(), n in 1usize..=10, e in 0i64..=4) {
        let m = structure(seed, n);
        let f = SampledPredicate::new(&m, random_values(&mut rng(seed ^ 1), n, 8)).unwrap();
        let eps = rat(e, 8);
        let p = min_partition(&f, &eps).unwrap();
        let mut next = 0;
        for b in p.blocks() {
            prop_assert_eq!(b.start, next);
            prop_assert!(b.start < b.end);
            prop_assert!(oscillation(&f.values()[b.clone()]) <= eps);
            next = b.end;
        }
        prop_assert_eq!(next, n);
        prop_assert_eq!(p.len(), brute_min_blocks(f.values(), &eps));
    }

    #[test]
    fn grid_approximation_error(seed in any::<u64>(), n in 1usize..=12, k in 2u32..=10) {
        let m = structure(seed, n);
        let f = SampledPredicate::new(&m, random_values(&mut rng(seed ^ 2), n, 60)).unwrap();
        let g = grid_step_approx(&f, k).unwrap();
        prop_assert!(f.sup_distance(g.values()) < rat(1, i64::from(k)));
        for x in g.values() {
            prop_assert!((x * Rational::from_integer(k.into())).is_integer());
        }
    }

    #[test]
    fn decomposition_identities(seed in any::<u64>(), n in 1usize..=12, m in 0usize..6) {
        let s = structure(seed, n);
        let f = SampledPredicate::new(&s, random_values(&mut rng(seed ^ 3), n, 12)).unwrap();
        let d = monotone_decomposition(&f, m);
        prop_assert_eq!(d.psi.len(), m);
        prop_assert_eq!(d.recombine(), f.values().to_vec());
        for p in &d.psi {
            prop_assert!(p.values().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn decomposition_bound(seed in any::<u64>(), n in 1usize..=12, e in 1i64..=4) {
        let s = structure(seed, n);
        let f = SampledPredicate::new(&s, random_values(&mut rng(seed ^ 4), n, 8)).unwrap();
        let eps = rat(e, 8);
        let m = min_partition(&f, &eps).unwrap().len();
        let d = monotone_decomposition(&f, m + 2);
        let phi_m = monotone_decomposition(&f, m).residual;
        prop_assert!(phi_m.values().iter().all(|x| *x <= eps));
        prop_assert!(d.psi[m + 1].values().iter().all(|x| *x <= eps));
    }

    #[test]
    fn envelope_is_least_dominating_step_map(seed in any::<u64>(), n in 1usize..=12) {
        let s = structure(seed, n);
        let mut r = rng(seed ^ 5);
        let a = r.gen_range(0..n);
        let phi = random_values(&mut r, n, 8);
        let mut psi = random_values(&mut r, n, 8);
        psi[a] = phi[a].clone();
        let phi = SampledPredicate::new(&s, phi).unwrap();
        let psi = SampledPredicate::new(&s, psi).unwrap();
        let alpha = modulus_envelope(&phi, &psi, a).unwrap();
        let need = |x: usize| absdiff(phi.value(x), phi.value(a)) + absdiff(psi.value(x), psi.value(a));
        prop_assert!(alpha.value(&Rational::zero()).is_zero());
        for x in 0..n {
            prop_assert!(alpha.value(s.d(x, a)) >= need(x));
        }
        let steps = alpha.steps();
        prop_assert!(steps.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        // Every step is forced by some point at exactly that distance.
        for (t, v) in steps {
            prop_assert!((0..n).any(|x| s.d(x, a) == t && need(x) == *v));
        }
    }

    #[test]
    fn glue_is_piecewise(seed in any::<u64>(), n in 1usize..=10) {
        let s = structure(seed, n);
        let mut r = rng(seed ^ 6);
        let (a, b, c) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
        let phi = Formula::plus(
            Formula::Const(rat(r.gen_range(0..=4), 8)),
            Formula::scale(rat(1, 2), Formula::atom(Pred::R, vec![Term::Var("x".into()), param(&s, b)])),
        );
        let psi = Formula::tsub(
            Formula::plus(phi.clone(), Formula::scale(rat(r.gen_range(1..=4), 4), Formula::atom(Pred::D, vec![Term::Var("x".into()), param(&s, a)]))),
            Formula::scale(rat(1, 3), Formula::atom(Pred::R, vec![param(&s, c), Term::Var("x".into())])),
        );
        let mut mods = ModTable::new();
        let fp = SampledPredicate::from_formula(&s, &phi, "x", &mods).unwrap();
        let fq = SampledPredicate::from_formula(&s, &psi, "x", &mods).unwrap();
        prop_assume!(fp.value(a) == fq.value(a));
        let h = glue(&s, &mut mods, &phi, &psi, a, "alpha").unwrap();
        prop_assert!(h.is_quantifier_free());
        let got = SampledPredicate::from_formula(&s, &h, "x", &mods).unwrap();
        for x in 0..n {
            let want = if x <= a { fp.value(x) } else { fq.value(x) };
            prop_assert_eq!(got.value(x), want);
        }
    }
}

#[test]
fn synthesis_on_random_predicates() {
    let mut worst = [Rational::zero(), Rational::zero()];
    for trial in 0..200u64 {
        let mut r = rng(1000 + trial);
        let n = r.gen_range(1..=12);
        let s = random_ulo(&mut r, n, 8);
        let f = SampledPredicate::new(&s, random_values(&mut r, n, 16)).unwrap();
        let eps = if trial % 2 == 0 { rat(1, 4) } else { rat(1, 8) };
        for (k, mode) in [SynthMode::Gap, SynthMode::Interpolate].into_iter().enumerate() {
            let q = qf_synthesis(&f, &eps, mode).unwrap();
            assert!(q.formula.is_quantifier_free());
            assert!(q.formula.predicates().iter().all(|p| *p == "d" || *p == "r"));
            let err = f.sup_distance(q.evaluate(&s).unwrap().values());
            assert!(err <= &eps * rat(2, 1), "trial {trial} {mode:?}: error {err}");
            worst[k] = worst[k].clone().max(err / &eps);
        }
    }
    // Both constructions stay within ε on finite structures.
    assert!(worst.iter().all(|w| *w <= rat(1, 1)));
}

#[test]
fn ray_predicate_is_recovered() {
    for seed in 0..20u64 {
        let mut r = rng(seed);
        let n = r.gen_range(2..=12);
        let s = random_ulo(&mut r, n, 8);
        let a = r.gen_range(0..n);
        let values = (0..n).map(|x| s.ray(x, a)).collect();
        let f = SampledPredicate::new(&s, values).unwrap();
        for eps in [rat(1, 4), rat(1, 8)] {
            let q = qf_synthesis(&f, &eps, SynthMode::Gap).unwrap();
            assert!(f.sup_distance(q.evaluate(&s).unwrap().values()) <= &eps * rat(2, 1));
        }
    }
}
