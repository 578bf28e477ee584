use dendra::experiments::naive_order;
use dendra::family::{build_dw, BinSeqEP};
use dendra::permquot::{level_quotient, Perm, PermGroup};
use dendra::tree::Element;
use dendra::Error;
use num_bigint::BigUint;
use proptest::prelude::*;

fn w(s: &str) -> BinSeqEP {
    s.parse().unwrap()
}

fn order(g: &PermGroup) -> u64 {
    g.order().try_into().unwrap()
}

#[test]
fn level_quotient_examples() {
    for s in [":0", ":1", ":01", "1:001"] {
        let ctx = build_dw(&w(s));
        let q1 = level_quotient(&ctx.generators(), 1).unwrap();
        assert_eq!(order(&q1), 2);
        assert_eq!(naive_order(q1.generators(), 10), Some(2));
        let q2 = level_quotient(&ctx.generators(), 2).unwrap();
        assert_eq!(order(&q2), 8);
        assert_eq!(naive_order(q2.generators(), 100), Some(8));
    }
    let ctx = build_dw(&w(":0"));
    let q = level_quotient(&[Element::identity(ctx.machine())], 3).unwrap();
    assert!(q.is_trivial());
    // (00 01) and (00 10)(01 11) in S4.
    let g = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[0, 1]]).unwrap(), Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap()]).unwrap();
    assert_eq!(order(&g), 8);
    assert!(matches!(level_quotient(&ctx.generators(), 30), Err(Error::ResourceLimit(_))));
}

#[test]
fn group_order_examples() {
    let t = PermGroup::new(2, vec![Perm::from_cycles(2, &[&[0, 1]]).unwrap()]).unwrap();
    assert_eq!(order(&t), 2);
    let s4 = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[0, 1]]).unwrap(), Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()]).unwrap();
    assert_eq!(order(&s4), 24);
}

#[test]
fn membership_closure_index_examples() {
    let triv = PermGroup::trivial(5);
    assert!(triv.contains(&Perm::identity(5)));
    let ctx = build_dw(&w(":0"));
    let q = level_quotient(&ctx.generators(), 2).unwrap();
    let c = ctx.alpha().commutator(&ctx.beta()).unwrap();
    let c2 = Perm::from_images(c.level_permutation(2).unwrap()).unwrap();
    let n = q.normal_closure(&[c2], 100).unwrap();
    assert!((q.order() % n.order()) == BigUint::from(0u32));
    assert_eq!(q.subgroup_index(&q).unwrap(), BigUint::from(1u32));
    let outside = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap()]).unwrap();
    assert!(matches!(q.subgroup_index(&outside), Err(Error::NotASubgroup(0))));
}

#[test]
fn orders_match_naive_closure_and_are_powers_of_two() {
    let mut checked = 0;
    for s in [":0", ":1", ":01", "0:01", ":001", "1:0"] {
        let ctx = build_dw(&w(s));
        for n in 1..=6 {
            let q = level_quotient(&ctx.generators(), n).unwrap();
            let o = q.order();
            assert_eq!(o.count_ones(), 1, "{s} level {n}: {o}");
            if o <= BigUint::from(5000u32) {
                assert_eq!(naive_order(q.generators(), 5000).map(BigUint::from), Some(o));
                checked += 1;
            }
        }
    }
    assert!(checked >= 12);
}

#[test]
fn level_quotient_log_orders_for_zero_sequence() {
    // Fixed from a stabilizer-chain run and confirmed by naive closure through level 4.
    let ctx = build_dw(&w(":0"));
    let logs: Vec<u64> = (1..=7).map(|n| level_quotient(&ctx.generators(), n).unwrap().order().bits() - 1).collect();
    assert_eq!(logs, vec![1, 3, 7, 12, 22, 42, 82]);
}

#[test]
fn prefix_sharing_gives_identical_generators() {
    let (a, b) = (w(":001"), w("0:01"));
    let n = a.common_prefix_len(&b).unwrap();
    assert_eq!(n, 4);
    let qa = level_quotient(&build_dw(&a).generators(), n).unwrap();
    let qb = level_quotient(&build_dw(&b).generators(), n).unwrap();
    assert_eq!(qa.generators(), qb.generators());
}

fn perm_strategy(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chain_order_matches_naive(gens in prop::collection::vec(perm_strategy(6), 1..3)) {
        let g = PermGroup::new(6, gens.clone()).unwrap();
        prop_assert_eq!(naive_order(&gens, 5000).map(BigUint::from), Some(g.order()));
    }

    #[test]
    fn normal_closure_is_normal(gens in prop::collection::vec(perm_strategy(7), 1..3), seed in perm_strategy(7)) {
        let g = PermGroup::new(7, gens.clone()).unwrap();
        let seed = seed.conjugate_by(&gens[0]).compose(&gens[0]);
        let seed = if g.contains(&seed) { seed } else { gens[0].clone() };
        let n = g.normal_closure(std::slice::from_ref(&seed), 1000).unwrap();
        prop_assert!(n.contains(&seed));
        for x in n.generators() {
            for h in &gens {
                prop_assert!(n.contains(&x.conjugate_by(h)));
            }
        }
        prop_assert!((g.order() % n.order()) == BigUint::from(0u32));
    }
}
