use metord::gen::{random_cyclic_metric, random_line, random_ulo, rng};
use metord::rational::zero;
use metord::{roll_up, FiniteCyclicOrder};
use proptest::prelude::*;

fn metric_cyclic_orders(seed: u64, max: usize) -> Vec<FiniteCyclicOrder> {
    let mut r = rng(seed);
    let n = 1 + (seed as usize % max);
    let mut out = vec![roll_up(&random_ulo(&mut r, n, 6)).unwrap(), roll_up(&random_line(&mut r, n, 10)).unwrap()];
    let c = random_cyclic_metric(&mut r, n, 4);
    if c.mco_defect() == zero() {
        out.push(c);
    }
    out
}

#[test]
fn roll_ups_are_metric_cyclic_orders() {
    for seed in 0..300u64 {
        for c in metric_cyclic_orders(seed, 6) {
            assert_eq!(c.mco_defect(), zero(), "seed {seed}");
            let n = c.len();
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        assert_eq!(c.d_ceq(x, y, z), c.d_ceq_brute(x, y, z), "seed {seed} ({x},{y},{z})");
                    }
                }
            }
        }
    }
}

#[test]
fn unroll_inverts_roll_up() {
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let m = random_ulo(&mut r, 1 + (seed % 8) as usize, 6);
        let c = roll_up(&m).unwrap();
        let u = c.unroll().unwrap();
        assert_eq!(u.mlo_defect(), zero());
        let back = roll_up(&u).unwrap();
        let idx = |c: &FiniteCyclicOrder, name: &str| c.index_of(name).unwrap();
        for x in m.names() {
            for y in m.names() {
                for z in m.names() {
                    assert_eq!(
                        back.ceq(idx(&back, x), idx(&back, y), idx(&back, z)),
                        c.ceq(idx(&c, x), idx(&c, y), idx(&c, z)),
                        "seed {seed}"
                    );
                }
            }
        }
    }
}

#[test]
fn four_point_inequalities() {
    let mut checked = 0;
    for seed in 0..200u64 {
        for c in metric_cyclic_orders(seed, 7) {
            let n = c.len();
            for w in 0..n {
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n {
                            if c.in_cyclic_order(&[w, x, y, z]) {
                                let r = c.convexity_check_four_points(w, x, y, z).unwrap();
                                assert!(r.holds(), "seed {seed} ({w},{x},{y},{z}) {r:?}");
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 10_000);
}

proptest! {
    #[test]
    fn unroll_rejects_non_ultrametric(seed in any::<u64>(), n in 3usize..=6) {
        let mut r = rng(seed);
        let m = random_line(&mut r, n, 10);
        let c = roll_up(&m).unwrap();
        prop_assert!(c.unroll().is_err());
    }
}
