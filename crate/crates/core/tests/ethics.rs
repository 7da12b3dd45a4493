use lockdown_core::ethics::{
    axiom_suite, check_axiom, compare, criterion_value, Allocation, Axiom, CheckConfig, Ordering,
    Verdict, WelfareCriterion, Witness,
};
use proptest::prelude::*;

fn criteria() -> Vec<WelfareCriterion> {
    vec![
        WelfareCriterion::cu(),
        WelfareCriterion::tu(),
        WelfareCriterion::clu(1.0).unwrap(),
        WelfareCriterion::au(),
        WelfareCriterion::rdclu(0.9, 1.0).unwrap(),
        WelfareCriterion::rdclu(0.5, 0.0).unwrap(),
        "clu:c=0.5,u=power:0.5".parse().unwrap(),
    ]
}

fn levels() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn permutations_are_indifferent(x in levels(), seed in any::<u64>()) {
        let mut y = x.clone();
        let n = y.len();
        for k in 0..n {
            let j = (seed.rotate_left(k as u32) as usize) % n;
            y.swap(k, j);
        }
        let (a, b) = (Allocation::new(x).unwrap(), Allocation::new(y).unwrap());
        for crit in criteria() {
            prop_assert_eq!(compare(&a, &b, &crit).unwrap(), Ordering::Indifferent);
        }
    }

    #[test]
    fn total_equals_zero_critical_level(x in levels(), y in levels()) {
        let (a, b) = (Allocation::new(x).unwrap(), Allocation::new(y).unwrap());
        let tu = WelfareCriterion::tu();
        let clu0 = WelfareCriterion::clu(0.0).unwrap();
        prop_assert_eq!(compare(&a, &b, &tu).unwrap(), compare(&a, &b, &clu0).unwrap());
        prop_assert_eq!(criterion_value(&a, &tu).unwrap(), criterion_value(&a, &clu0).unwrap());
    }

    #[test]
    fn strict_dominance_is_strictly_better(x in levels(), bumps in prop::collection::vec(0.0..1.0f64, 8), k in 0usize..8) {
        let n = x.len();
        let mut y = x.clone();
        for (j, v) in y.iter_mut().enumerate() {
            *v += bumps[j];
        }
        y[k % n] += 0.5;
        let (a, b) = (Allocation::new(y).unwrap(), Allocation::new(x).unwrap());
        for crit in criteria() {
            prop_assert_eq!(compare(&a, &b, &crit).unwrap(), Ordering::StrictlyBetter);
        }
    }
}

#[test]
fn rank_discounted_copies_stay_bounded() {
    for crit in [
        WelfareCriterion::rdclu(0.9, 1.0).unwrap(),
        WelfareCriterion::rdclu(0.5, 0.0).unwrap(),
        WelfareCriterion::rdclu(0.99, 2.0).unwrap(),
    ] {
        for level in [0.1, 0.5, 3.0, -2.0] {
            let bound = crit.rank_discount_bound(level).unwrap();
            let mut prev = 0.0_f64;
            for n in 1..=10_000 {
                let v = crit.egalitarian_value(level, n);
                assert!(
                    v.abs() <= bound * (1.0 + 1e-12),
                    "{crit} level {level} n {n}"
                );
                assert!(v.abs() >= prev.abs() - 1e-12);
                prev = v;
            }
            let full =
                criterion_value(&Allocation::egalitarian(level, 2000).unwrap(), &crit).unwrap();
            assert!((full - crit.egalitarian_value(level, 2000)).abs() < 1e-9);
        }
    }
    assert!(WelfareCriterion::cu().rank_discount_bound(1.0).is_none());
}

#[test]
fn every_failure_replays_and_is_reproducible() {
    let cfg = CheckConfig {
        samples: 400,
        seed: 99,
        ..CheckConfig::default()
    };
    let first = axiom_suite(&criteria(), &cfg).unwrap();
    let second = axiom_suite(&criteria(), &cfg).unwrap();
    assert_eq!(first, second);
    let fails: Vec<_> = first
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .collect();
    assert!(!fails.is_empty());
    for rep in fails {
        assert!(rep.replays(), "{} {}", rep.criterion, rep.axiom);
    }
}

#[test]
fn hand_witnesses_replay() {
    let au = WelfareCriterion::au();
    let a4 = Witness::BestOff {
        x: "1".parse().unwrap(),
        y: "0.6,1.5".parse().unwrap(),
        z: 3.0,
    };
    assert!(a4.replay(&au));
    assert!(!a4.replay(&WelfareCriterion::clu(1.0).unwrap()));
    let ne = Witness::NegativeExpansion {
        x: "-10,-10".parse().unwrap(),
        level: -1.0,
    };
    assert!(ne.replay(&au));
    assert!(!ne.replay(&WelfareCriterion::tu()));
}

#[test]
fn critical_level_axiom_needs_levels_at_or_below_c() {
    let cfg = CheckConfig {
        samples: 1000,
        seed: 5,
        ..CheckConfig::default()
    };
    for crit in [
        WelfareCriterion::clu(1.0).unwrap(),
        WelfareCriterion::rdclu(0.9, 1.0).unwrap(),
    ] {
        assert_eq!(
            check_axiom(&crit, Axiom::A6, &cfg).unwrap().verdict,
            Verdict::Pass
        );
    }
}
