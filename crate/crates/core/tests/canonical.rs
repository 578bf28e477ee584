use std::collections::HashSet;

use dendra::canonical::{compute_nucleus, Group, NucleusConfig, Portrait};
use dendra::experiments::{d_generators, subgroup_elements};
use dendra::family::{build_dw, build_tilde_d, BinSeqEP};
use dendra::tree::{Alphabet, Element, Letter, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Size of the nucleus of `𝒟`, fixed from the brute-force union below.
const NUCLEUS_SIZE: usize = 35;

fn d_group() -> Group {
    Group::new(&d_generators(), 200).unwrap()
}

#[test]
fn nucleus_is_the_dihedral_union() {
    let mut g = d_group();
    let d = d_generators();
    let mut union = HashSet::new();
    let mut sizes = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let els = subgroup_elements(&mut g, &[d[i].clone(), d[j].clone()], 1000).unwrap();
        sizes.push(els.len());
        union.extend(els);
    }
    assert_eq!(sizes, vec![16, 8, 16]);
    assert_eq!(union.len(), NUCLEUS_SIZE);
    assert_eq!(g.nucleus().len(), NUCLEUS_SIZE);
    let leaves: HashSet<u32> = union.iter().map(|&p| g.store().as_leaf(p).expect("a nucleus leaf")).collect();
    assert_eq!(leaves.len(), NUCLEUS_SIZE);
}

#[test]
fn identity_nucleus() {
    let m = build_tilde_d();
    let n = compute_nucleus(&[Element::identity(&m)], &NucleusConfig::with_cap(10)).unwrap();
    assert_eq!(n.len(), 1);
}

#[test]
fn nucleus_is_closed_and_inverse_closed() {
    let g = d_group();
    let n = g.nucleus();
    for i in 0..n.len() as u32 {
        assert_eq!(n.inverse(n.inverse(i)), i);
        for x in 0..4 {
            assert!((n.section(i, x) as usize) < n.len());
        }
        // The tables reproduce the element's action.
        let e = n.element(i);
        for u in Vertex::level(Alphabet::QUATERNARY, 4) {
            assert_eq!(n.act(i, &u.0), e.act(&u).unwrap().0);
        }
    }
}

#[test]
fn pair_products_contract_into_the_nucleus() {
    let mut g = d_group();
    let len = g.nucleus().len() as u32;
    for i in 0..len {
        for j in 0..len {
            let p = g.mul(g.store().leaf(i), g.store().leaf(j)).unwrap();
            let depth = g.store().depth(p);
            let tree = g.store().tree(p);
            let mut leaves = Vec::new();
            collect_leaves(&tree, &mut leaves);
            assert!(leaves.iter().all(|&l| (l as usize) < len as usize));
            assert!(depth <= 3);
        }
    }
}

fn collect_leaves(p: &Portrait, out: &mut Vec<u32>) {
    match p {
        Portrait::Leaf(i) => out.push(*i),
        Portrait::Node { children, .. } => children.iter().for_each(|c| collect_leaves(c, out)),
    }
}

#[test]
fn portrait_examples() {
    let mut g = d_group();
    let d = d_generators();
    let alpha = g.portrait(&d[0]).unwrap();
    assert!(g.store().as_leaf(alpha).is_some());
    assert_eq!(g.portrait(&d[0].pow(2)).unwrap(), g.identity_portrait());
    let bg = d[1].product(&d[2]).unwrap();
    assert_eq!(g.portrait(&bg.pow(8)).unwrap(), g.identity_portrait());
    assert_ne!(g.portrait(&bg.pow(4)).unwrap(), g.identity_portrait());
    // Idempotent: rebuilding from the same word yields the same handle.
    assert_eq!(g.portrait(&bg).unwrap(), g.portrait(&Element::from_word(bg.machine(), bg.word().to_vec())).unwrap());
}

#[test]
fn equality_examples() {
    let mut g = d_group();
    let d = d_generators();
    let m = d[0].machine().clone();
    assert!(g.is_trivial(&Element::identity(&m)).unwrap());
    let ab = d[0].product(&d[1]).unwrap();
    let ba = d[1].product(&d[0]).unwrap();
    assert!(!g.equal(&ab, &ba).unwrap());
    assert_ne!(ab.level_permutation(3).unwrap(), ba.level_permutation(3).unwrap());

    let tilde = build_tilde_d();
    let alpha = Element::named(&tilde, "alpha").unwrap();
    let a = Element::named(&tilde, "a").unwrap();
    let mut ga = Group::new(&[alpha.clone(), a.clone()], 200).unwrap();
    assert!(ga.is_trivial(&alpha.commutator(&a).unwrap()).unwrap());
}

#[test]
fn order_examples() {
    let one = build_dw(&BinSeqEP::constant(1));
    let mut g = Group::new(&one.generators(), 200).unwrap();
    assert_eq!(g.order_of(&one.beta().product(&one.gamma()).unwrap(), 16).unwrap(), Some(2));
    let zero = build_dw(&BinSeqEP::constant(0));
    let mut g = Group::new(&zero.generators(), 200).unwrap();
    assert_eq!(g.order_of(&zero.beta().product(&zero.gamma()).unwrap(), 16).unwrap(), Some(8));
    assert_eq!(g.order_of(&Element::identity(zero.machine()), 4).unwrap(), Some(1));
    assert_eq!(g.order_of(&zero.beta().product(&zero.gamma()).unwrap(), 4).unwrap(), None);
}

#[test]
fn nucleus_dump_golden() {
    let mut g = d_group();
    let dump = g.nucleus_dump().unwrap();
    let golden = include_str!("golden/nucleus_d.txt");
    assert_eq!(dump, golden);
}

fn random_word(rng: &mut ChaCha8Rng, states: u32, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| Letter::pos(rng.gen_range(0..states))).collect()
}

/// Acts through a portrait, expanding nucleus leaves by their recursions.
fn portrait_act(g: &Group, p: &Portrait, v: &[u8]) -> Vec<u8> {
    match (p, v.split_first()) {
        (_, None) => vec![],
        (Portrait::Leaf(i), _) => g.nucleus().act(*i, v),
        (Portrait::Node { perm, children }, Some((&x, rest))) => {
            let mut out = vec![perm.apply(x)];
            out.extend(portrait_act(g, &children[x as usize], rest));
            out
        }
    }
}

#[test]
fn oracle_equivalence_and_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for w in [":0", ":01", ":1"] {
        let ctx = build_dw(&w.parse().unwrap());
        let mut g = Group::new(&ctx.generators(), 200).unwrap();
        let mut trivial = 0;
        for _ in 0..500 {
            let word = random_word(&mut rng, 3, 10);
            let e = Element::from_word(ctx.machine(), word);
            let verdict = g.is_trivial(&e).unwrap();
            let oracle = (1..=8).all(|n| e.level_permutation(n).unwrap().iter().enumerate().all(|(i, &x)| i as u32 == x));
            assert_eq!(verdict, oracle, "{w}: {e}");
            trivial += verdict as usize;
            let tree = g.portrait_tree(&e).unwrap();
            for u in Vertex::level(Alphabet::BINARY, 6) {
                assert_eq!(portrait_act(&g, &tree, &u.0), e.act(&u).unwrap().0);
            }
            if let Some(o) = g.order_of(&e, 64).unwrap() {
                assert!(o.is_power_of_two(), "{e} has order {o}");
            }
        }
        assert!(trivial > 0);
    }
}
