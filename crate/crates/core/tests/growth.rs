use dendra::canonical::Group;
use dendra::experiments::naive_ball_sizes;
use dendra::family::{build_dw, BinSeqEP};
use dendra::growth::{ball_sizes, compare_growth, family_growth, DEFAULT_BUDGET};

fn w(s: &str) -> BinSeqEP {
    s.parse().unwrap()
}

/// r(2) for the zero sequence: identity, 3 generators and the 6 products of distinct generators.
const R2_ZERO: u64 = 10;

#[test]
fn ball_size_examples() {
    let ctx = build_dw(&w(":0"));
    let mut g = Group::new(&ctx.generators(), 200).unwrap();
    let t = ball_sizes(&mut g, &ctx.generators(), 2, DEFAULT_BUDGET).unwrap();
    assert_eq!(t.sizes[0], 1);
    assert_eq!(t.sizes[1], 4);
    assert_eq!(naive_ball_sizes(&ctx, 2, 6).unwrap()[2], R2_ZERO);
    assert_eq!(t.sizes[2], R2_ZERO);
    assert_eq!(t.boundary, vec![1, 3, 6]);
}

#[test]
fn matches_naive_enumeration() {
    for s in [":0", ":1", ":01"] {
        let t = family_growth(&w(s), 4, 200, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.sizes, naive_ball_sizes(&build_dw(&w(s)), 4, 8).unwrap(), "{s}");
    }
}

#[test]
fn monotone_and_submultiplicative() {
    for s in [":0", ":1", ":01", "1:001"] {
        let t = family_growth(&w(s), 7, 200, DEFAULT_BUDGET).unwrap();
        assert!(t.complete());
        let r = &t.sizes;
        assert!(r.windows(2).all(|p| p[0] <= p[1]));
        for m in 0..r.len() {
            for n in 0..r.len() - m {
                assert!(r[m + n] <= r[m] * r[n]);
            }
        }
        // Each new element is one generator away from the previous sphere.
        for n in 1..r.len() {
            assert!(r[n] <= r[n - 1] + t.boundary[n - 1] * 3);
        }
    }
}

#[test]
fn comparison_examples() {
    let single = compare_growth(&[w(":0")], 0, 200, DEFAULT_BUDGET);
    assert_eq!(single.tables[0].sizes, vec![1]);
    let pair = compare_growth(&[w(":0"), w(":1")], 4, 200, DEFAULT_BUDGET);
    let (zero, one) = (&pair.tables[0].sizes, &pair.tables[1].sizes);
    assert!(one.iter().zip(zero).all(|(a, b)| a <= b));
    assert!(pair.dominance[0].second_le_first);
    let csv = compare_growth(&[w(":0"), w(":01"), w(":1")], 7, 200, DEFAULT_BUDGET).to_csv().unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 8);
}
