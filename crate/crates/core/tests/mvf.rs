use metord::gen::rng;
use metord::mvf::{
    d_pred, d_pred_brute, proj_ceq, proj_cyclic_export, proj_dceq, proj_density_witness, proj_distance, proj_phi,
    random_proj_point, random_series, series_add, series_mul, sign, valuation, value_order_export, Magnitude,
    ProjPoint, TruncSeries,
};
use metord::rational::rat;
use metord::{MetricSpace, Rational};
use proptest::prelude::*;
use rand::Rng;

fn distinct_points(seed: u64, n: usize) -> Vec<ProjPoint> {
    let mut r = rng(seed);
    let mut out: Vec<ProjPoint> = Vec::new();
    while out.len() < n {
        let p = random_proj_point(&mut r, 3, 4);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn nonzero<R: Rng>(r: &mut R) -> TruncSeries {
    loop {
        let a = random_series(r, 3, 4);
        if !a.is_zero() {
            return a;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valuation_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_series(&mut r, 4, 6), random_series(&mut r, 4, 6));
        let ab = series_mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &series_mul(&b, &a).unwrap());
        match (valuation(&a), valuation(&b)) {
            (Magnitude::Exp(x), Magnitude::Exp(y)) => prop_assert_eq!(valuation(&ab), Magnitude::Exp(x + y)),
            _ => prop_assert!(ab.is_zero()),
        }
        let sum = series_add(&a, &b);
        prop_assert!(valuation(&sum) <= valuation(&a).max(valuation(&b)));
        if sign(&a) * sign(&b) > 0 {
            prop_assert_eq!(valuation(&sum), valuation(&a).max(valuation(&b)));
        }
    }

    #[test]
    fn divisibility_closed_form(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_series(&mut r, 3, 4);
        // Multiples of x, or elements of smaller valuation: the two regimes
        // where truncated long division attains the infimum.
        let y = if r.gen_bool(0.5) {
            series_mul(&x, &random_series(&mut r, 3, 4)).unwrap()
        } else {
            let y = random_series(&mut r, 3, 4);
            prop_assume!(valuation(&y) > valuation(&x));
            y
        };
        prop_assert_eq!(d_pred(&x, &y).unwrap(), d_pred_brute(&x, &y, 16).unwrap());
    }

    #[test]
    fn value_order_matches_divisibility(seed in any::<u64>()) {
        let mut r = rng(seed);
        let elems: Vec<TruncSeries> = (0..30).map(|_| nonzero(&mut r)).collect();
        let (m, pos) = value_order_export(&elems).unwrap();
        prop_assert!(m.mlo_defect() == rat(0, 1));
        prop_assert!(m.ultrametric_defect() == rat(0, 1));
        let mut vals: Vec<Rational> = elems.iter().map(|a| valuation(a).exponent().unwrap().clone()).collect();
        vals.sort();
        vals.dedup();
        let k = vals.len() as i64;
        let scale = |mag: Magnitude| match mag {
            Magnitude::Zero => rat(0, 1),
            Magnitude::Exp(e) => rat(k - vals.binary_search(&e).unwrap() as i64, k + 1),
        };
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                prop_assert_eq!(m.ray(pos[i], pos[j]), scale(d_pred(x, y).unwrap()));
            }
        }
    }

    #[test]
    fn density_witnesses(seed in any::<u64>(), num in 1i64..=8) {
        let pts = distinct_points(seed, 2);
        let (p, q) = (&pts[0], &pts[1]);
        let d = proj_distance(p, q).unwrap().exponent().unwrap().clone();
        let target = &d + rat(num, 4);
        let c = proj_density_witness(p, q, &target).unwrap();
        prop_assert_eq!(proj_distance(p, &c).unwrap(), Magnitude::Exp(target));
        prop_assert!(proj_ceq(p, &c, q).unwrap());
        prop_assert!(proj_density_witness(p, q, &d).is_err());
    }
}

/// The nonstrict cyclic order axioms, checked directly on `ceq`.
fn cyclic_axioms(pts: &[ProjPoint]) -> Result<(), String> {
    let n = pts.len();
    let c = |x: usize, y: usize, z: usize| proj_ceq(&pts[x], &pts[y], &pts[z]).unwrap();
    for x in 0..n {
        for y in 0..n {
            if !c(x, x, y) {
                return Err(format!("reflexivity {x} {y}"));
            }
            for z in 0..n {
                if c(x, y, z) && !c(y, z, x) {
                    return Err(format!("cyclicity {x} {y} {z}"));
                }
                if c(x, y, z) && c(z, y, x) && x != y && y != z && z != x {
                    return Err(format!("antisymmetry {x} {y} {z}"));
                }
                if !c(x, y, z) && !c(z, y, x) {
                    return Err(format!("totality {x} {y} {z}"));
                }
                for w in 0..n {
                    if c(w, x, z) && !c(w, x, y) && !c(w, y, z) {
                        return Err(format!("transitivity {w} {x} {y} {z}"));
                    }
                }
            }
        }
    }
    Ok(())
}

#[test]
fn projective_line_is_a_metric_cyclic_order() {
    for seed in 0..40u64 {
        let pts = distinct_points(seed, 2 + (seed % 7) as usize);
        assert_eq!(cyclic_axioms(&pts), Ok(()), "seed {seed}");
        let c = proj_cyclic_export(&pts).unwrap();
        assert_eq!(c.mco_defect(), rat(0, 1), "seed {seed}");
        assert_eq!(c.ultrametric_defect(), rat(0, 1));
        let n = pts.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (p, q, r) = (&pts[x], &pts[y], &pts[z]);
                    assert!(proj_phi(p, q, r).unwrap() >= proj_dceq(p, q, r).unwrap());
                    assert_eq!(proj_dceq(p, q, r).unwrap().is_zero(), c.ceq(x, y, z));
                    for w in 0..n {
                        if c.in_cyclic_order(&[w, x, y, z]) && [w, x, y, z].iter().collect::<std::collections::BTreeSet<_>>().len() == 4 {
                            let d = |a: usize, b: usize| proj_distance(&pts[a], &pts[b]).unwrap();
                            assert!(d(w, y) >= d(w, x).min(d(w, z)));
                        }
                    }
                }
            }
        }
    }
}
