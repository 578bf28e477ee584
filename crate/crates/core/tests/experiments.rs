use dendra::experiments::*;
use dendra::family::BinSeqEP;

fn w(s: &str) -> BinSeqEP {
    s.parse().unwrap()
}

fn params() -> SuiteParams {
    SuiteParams::default()
}

#[test]
fn relation_rows() {
    let r = verify_relations(4).unwrap();
    for id in ["alpha^a", "gamma^b", "beta^c", "identity^c", "opposite_convention"] {
        assert_eq!(r.get(id).unwrap().status, Status::Pass, "{id}");
    }
    assert_eq!(r.checks.len(), 11);
}

#[test]
fn dihedral_rows() {
    let r = verify_dihedral(&[w(":0"), w(":1")]).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    assert_eq!(r.get("D:<alpha,beta>").unwrap().data["order"], 16);
    assert_eq!(r.get("D:<alpha,gamma>").unwrap().data["order"], 8);
    assert_eq!(r.get("D:<1,alpha>").unwrap().data["order"], 2);
    assert_eq!(r.get(":1:<beta,gamma>").unwrap().data["order"], 4);
}

#[test]
fn injectivity_rows() {
    let r = verify_nucleus(&[w(":0"), w(":01"), w(":1")]).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    assert_eq!(r.get(":1:injective").unwrap().data["image"], 23);
    assert_eq!(r.get(":1:order(beta gamma)").unwrap().data["order"], 2);
}

#[test]
fn conjugator_examples() {
    assert!(conjugator_obstruction(&w(":0"), &w(":1"), 3).unwrap().is_unsat());
    assert!(conjugator_obstruction(&w("0:01"), &w("1:01"), 4).unwrap().is_unsat());
    for s in [":0", ":1", "10:01"] {
        match conjugator_obstruction(&w(s), &w(s), 6).unwrap() {
            Obstruction::Unknown { identity_witness, .. } => assert!(identity_witness),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn lsub_examples() {
    let r = l_subgroup_experiment(&w(":0"), 1..=3).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    assert_eq!(r.get(":0:level1:index").unwrap().data["index"], "2");
    // Fixed from the explicit computation in the order-8 quotient.
    assert_eq!(r.get(":0:level2:index").unwrap().data["index"], "4");
}

type Images = Vec<u32>;

fn compose(g: &Images, h: &Images) -> Images {
    (0..g.len()).map(|i| g[h[i] as usize]).collect()
}

fn invert(g: &Images) -> Images {
    let mut out = vec![0; g.len()];
    for (i, &x) in g.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn closure(gens: &[Images], degree: usize) -> std::collections::HashSet<Images> {
    let mut seen = std::collections::HashSet::from([(0..degree as u32).collect::<Images>()]);
    let mut frontier: Vec<Images> = seen.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

#[test]
fn lsub_indices_match_element_enumeration() {
    let r = l_subgroup_experiment(&w(":0"), 2..=3).unwrap();
    let ctx = dendra::family::build_dw(&w(":0"));
    let gens = ctx.generators();
    let seeds = [gens[0].commutator(&gens[1]).unwrap(), gens[2].commutator(&gens[1]).unwrap()];
    for n in 2..=3 {
        let perms: Vec<Images> = gens.iter().map(|g| g.level_permutation(n).unwrap()).collect();
        let group = closure(&perms, 1 << n);
        let conjugates: Vec<Images> = seeds
            .iter()
            .flat_map(|s| {
                let s = s.level_permutation(n).unwrap();
                group.iter().map(move |g| compose(&compose(g, &s), &invert(g))).collect::<Vec<_>>()
            })
            .collect();
        let normal = closure(&conjugates, 1 << n);
        let index = group.len() / normal.len();
        assert_eq!(r.get(&format!(":0:level{n}:index")).unwrap().data["index"], index.to_string());
    }
}

#[test]
fn prefix_rows_are_deterministic() {
    let a = prefix_suite(&[w(":0")], 10, 5, 3).unwrap();
    let b = prefix_suite(&[w(":0")], 10, 5, 3).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.exit_code(), 0, "{}", a.to_text());
}

#[test]
fn prefix_rejects_sequences_outside_omega_zero() {
    assert!(prefix_suite(&[w(":1")], 1, 1, 0).is_err());
}

#[test]
fn every_suite_runs_with_small_parameters() {
    let mut p = params();
    p.levels = Some(1..=4);
    p.radius = Some(3);
    p.trials = Some(3);
    for name in SUITES {
        let run = run_suite(name, &p).unwrap();
        assert_eq!(run.report.exit_code(), 0, "{name}:\n{}", run.report.to_text());
        assert_eq!(run.report.schema_version, SCHEMA_VERSION);
        assert_eq!(run.csv.is_some(), name == "growth");
        // Byte-stable for a fixed seed.
        assert_eq!(run_suite(name, &p).unwrap().report.to_json(), run.report.to_json());
    }
}

#[test]
fn ratmap_examples() {
    use num_complex::Complex64;
    let p = Complex64::new(0.0, 2.0);
    assert!(rel_err(forward_p(p).unwrap(), p) < 1e-12);
    let (z, _) = iterate_f(Complex64::new(0.0, 0.0), Complex64::new(5.0, 1.0)).unwrap();
    assert_eq!(z, Complex64::new(1.0, 0.0));
    let (a, b) = iterate_f(Complex64::new(1.0, 0.0), Complex64::new(-0.3, 2.2)).unwrap();
    assert!(rel_err(a, b) < 1e-12);
    let orbit: Vec<dendra::ParamPoint64> = backward_orbit(Complex64::new(3.0, 0.0), 5, &[true, false, true, true, false]).unwrap();
    assert_eq!(orbit.len(), 6);
    let orbit32 = backward_orbit(num_complex::Complex32::new(3.0, 0.0), 3, &[false; 3]).unwrap();
    let q = forward_p(orbit32[3].p).unwrap();
    assert!(rel_err(q, orbit32[2].p) < 1e-4);
}
