use dendra::canonical::Group;
use dendra::experiments::d_generators;
use dendra::family::*;
use dendra::tree::{Alphabet, Element, Vertex};
use dendra::Error;
use proptest::prelude::*;

fn w(s: &str) -> BinSeqEP {
    s.parse().unwrap()
}

fn v4(s: &str) -> Vertex {
    Vertex::parse(Alphabet::QUATERNARY, s).unwrap()
}

fn v2(s: &str) -> Vertex {
    Vertex::parse(Alphabet::BINARY, s).unwrap()
}

#[test]
fn build_dw_examples() {
    let zero = build_dw(&w(":0"));
    assert_eq!(zero.machine().len(), 3);
    let g012 = dendra::tree::parse_machine(dendra::machines::G012).unwrap();
    let one = build_dw(&w(":1"));
    assert_eq!(one.machine().len(), 3);
    // g2 = (1, g1) is gamma for 1^ω; for 0^ω the sections of gamma are mirrored.
    for (k, t) in g012.states().iter().enumerate() {
        let (s0, s1) = (&zero.machine().states()[k], &one.machine().states()[k]);
        assert_eq!((&s0.perm, &s1.perm), (&t.perm, &t.perm));
        assert_eq!(s1.sections, t.sections);
        let mirrored: Vec<_> = if k == 2 { t.sections.iter().rev().cloned().collect() } else { t.sections.clone() };
        assert_eq!(s0.sections, mirrored);
    }
    assert!(one.gamma().section_at(0).is_empty_word());
    assert!(!one.gamma().section_at(1).is_empty_word());
    assert_eq!(build_dw(&w(":01")).machine().len(), 6);
}

#[test]
fn tilde_and_h_examples() {
    let tilde = build_tilde_d();
    let a = Element::named(&tilde, "a").unwrap();
    assert_eq!(a.root_perm().cycle_string(), "(1 3)(2 4)");
    let h = build_h();
    let ha = Element::named(&h, "a").unwrap();
    let hb = Element::named(&h, "b").unwrap();
    assert_eq!(ha.act(&v2("000000")).unwrap(), v2("100000"));
    assert_eq!(hb.act(&v2("000000")).unwrap(), v2("010000"));
    // b = (a, c): depth-6 cross-check of b(0u) = 0 a(u).
    for u in Vertex::level(Alphabet::BINARY, 5) {
        assert_eq!(hb.act(&v2("0").concat(&u)).unwrap(), v2("0").concat(&ha.act(&u).unwrap()));
    }
}

#[test]
fn projection_examples() {
    assert_eq!(project_p(&v4("14")).unwrap(), v2("01"));
    assert_eq!(project_p(&Vertex::root()).unwrap(), Vertex::root());
    assert_eq!(project_p(&v4("2331")).unwrap(), v2("0110"));
    assert!(matches!(project_p(&Vertex(vec![4])), Err(Error::InvalidVertex { .. })));
}

#[test]
fn restriction_examples() {
    let d = d_generators();
    for s in [":0", ":1", ":01"] {
        let ctx = build_dw(&w(s));
        assert_eq!(restrict_to_tw(&d[0], &ctx).unwrap(), ctx.alpha());
        let id = Element::identity(d[0].machine());
        assert!(restrict_to_tw(&id, &ctx).unwrap().is_empty_word());
    }
    let bg2 = d[1].product(&d[2]).unwrap().pow(2);
    let one = build_dw(&w(":1"));
    let mut g1 = Group::new(&one.generators(), 200).unwrap();
    assert!(g1.is_trivial(&restrict_to_tw(&bg2, &one).unwrap()).unwrap());
    let zero = build_dw(&w(":0"));
    let mut g0 = Group::new(&zero.generators(), 200).unwrap();
    assert!(!g0.is_trivial(&restrict_to_tw(&bg2, &zero).unwrap()).unwrap());
    let a = Element::named(d[0].machine(), "a").unwrap();
    assert!(matches!(restrict_to_tw(&a, &zero), Err(Error::NotInD(_))));
}

#[test]
fn shift_examples() {
    assert_eq!(w("0:01").shift(), w(":01"));
    assert_eq!(w(":1").shift(), w(":1"));
    assert_eq!(w(":011").shift(), w(":110"));
}

#[test]
fn sequence_action_examples() {
    let h = build_h();
    let a = Element::named(&h, "a").unwrap();
    let b = Element::named(&h, "b").unwrap();
    assert_eq!(act_on_sequence(&a, &w(":0")).unwrap(), w("1:0"));
    let image = act_on_sequence(&b, &w(":0")).unwrap();
    assert_eq!(image, w("01:0"));
    let prefix = Vertex(w(":0").take(12));
    assert_eq!(b.act(&prefix).unwrap().0, image.take(12));
    assert_eq!(act_on_sequence(&Element::identity(&h), &w("10:01")).unwrap(), w("10:01"));
}

#[test]
fn conjugation_lemma_examples() {
    let h = build_h();
    let cases = [(":0", Element::identity(&h)), (":0", Element::named(&h, "a").unwrap()), (":01", Element::named(&h, "b").unwrap())];
    for (s, g) in cases {
        let rep = verify_conjugation_lemma(&w(s), &g, 6).unwrap();
        assert!(rep.pass(), "{s} {g}: {rep:?}");
        assert_eq!(rep.target, act_on_sequence(&g, &w(s)).unwrap());
    }
    assert!(matches!(verify_conjugation_lemma(&w(":0"), &Element::identity(&h), 40), Err(Error::ResourceLimit(_))));
}

#[test]
fn imprimitivity() {
    let tilde = build_tilde_d();
    let h = build_h();
    for s in tilde.states() {
        let g = Element::named(&tilde, &s.name).unwrap();
        let bar = to_h(&g, &h).unwrap();
        for n in 0..=6 {
            for v in Vertex::level(Alphabet::QUATERNARY, n) {
                assert_eq!(project_p(&g.act(&v).unwrap()).unwrap(), bar.act(&project_p(&v).unwrap()).unwrap(), "{} at {v:?}", s.name);
            }
        }
    }
}

#[test]
fn tw_invariance_and_identification() {
    let d = d_generators();
    for s in [":0", ":01", "1:001", ":1"] {
        let seq = w(s);
        let ctx = build_dw(&seq);
        for (x, xw) in d.iter().zip(ctx.generators()) {
            for n in 0..=6 {
                for u in Vertex::level(Alphabet::BINARY, n) {
                    let vertex = iota_inv(&u, &seq).unwrap();
                    let image = x.act(&vertex).unwrap();
                    // The image stays in T_w, and the identified action is that of x_w.
                    assert_eq!(project_p(&image).unwrap().0, seq.take(n));
                    assert_eq!(iota(&image).unwrap(), xw.act(&u).unwrap());
                }
            }
        }
    }
}

#[test]
fn level_n_depends_on_prefix() {
    let pairs = [(":0", "00:1"), (":01", "0101:1"), ("1:001", "1001:0")];
    for (a, b) in pairs {
        let (a, b) = (w(a), w(b));
        let n = a.common_prefix_len(&b).unwrap();
        let (ca, cb) = (build_dw(&a), build_dw(&b));
        for (x, y) in ca.generators().iter().zip(cb.generators()) {
            assert_eq!(x.level_permutation(n).unwrap(), y.level_permutation(n).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pw_is_a_homomorphism(g in prop::collection::vec(0usize..3, 0..10), h in prop::collection::vec(0usize..3, 0..10)) {
        let d = d_generators();
        let word = |l: &[usize]| l.iter().fold(Element::identity(d[0].machine()), |acc, &i| acc.product(&d[i]).unwrap());
        let (g, h) = (word(&g), word(&h));
        let ctx = build_dw(&w(":01"));
        let mut group = Group::new(&ctx.generators(), 200).unwrap();
        let lhs = restrict_to_tw(&g.product(&h).unwrap(), &ctx).unwrap();
        let rhs = restrict_to_tw(&g, &ctx).unwrap().product(&restrict_to_tw(&h, &ctx).unwrap()).unwrap();
        prop_assert!(group.equal(&lhs, &rhs).unwrap());
    }
}
