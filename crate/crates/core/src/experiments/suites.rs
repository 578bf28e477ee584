//! The verification suites. Each returns a [`Report`]; resource bounds turn
//! individual checks inconclusive instead of aborting the suite.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::RangeInclusive;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::conjugator::conjugator_obstruction;
use super::ratmap::{backward_orbit, forward_p, iterate_f, iterate_f_projective, rel_err};
use super::report::{Report, Status};
use crate::canonical::{Group, NucleusConfig, PortraitId, Prover, Reducer};
use crate::error::{Error, Result};
use crate::family::{build_dw, build_tilde_d, restrict_to_tw, BinSeqEP, FamilyContext, RELATIONS};
use crate::growth::{compare_growth, GrowthTable, DEFAULT_BUDGET};
use crate::permquot::{level_quotient, Perm};
use crate::tree::{Element, LevelActions, Letter};

pub const SUITES: [&str; 9] = ["relations", "dihedral", "nucleus", "prefix", "quotients", "lsub", "conjugator", "growth", "ratmap"];

pub const DEFAULT_SEED: u64 = 1;
/// Nucleus candidate cap for `𝒟` and `𝒟_w`.
pub const NUCLEUS_CAP: usize = 200;
/// Cap for subgroups of the six-generator group, whose full nucleus has 288 elements.
pub const TILDE_NUCLEUS_CAP: usize = 1000;
const ORDER_CAP: u64 = 1024;
const CLOSURE_CAP: usize = 100_000;
const PROOF_CAP: usize = 200_000;
const NAIVE_CLOSURE_CAP: usize = 5000;
/// Derived series are computed only up to this degree.
const DERIVED_DEGREE_CAP: usize = 64;

/// Options shared by the suites; `None` selects the suite's default.
#[derive(Debug, Clone, Default)]
pub struct SuiteParams {
    pub ws: Vec<BinSeqEP>,
    pub levels: Option<RangeInclusive<usize>>,
    pub radius: Option<usize>,
    pub depth: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

/// A suite report, plus the growth table CSV for the growth suite.
#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub report: Report,
    pub csv: Option<String>,
}

fn seqs(ws: &[&str]) -> Vec<BinSeqEP> {
    ws.iter().map(|s| s.parse().expect("built-in sequence parses")).collect()
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteRun> {
    let ws = |default: &[&str]| if params.ws.is_empty() { seqs(default) } else { params.ws.clone() };
    let seed = params.seed.unwrap_or(DEFAULT_SEED);
    let report = match name {
        "relations" => verify_relations(params.depth.unwrap_or(4))?,
        "dihedral" => verify_dihedral(&ws(&[":0", ":01", ":1"]))?,
        "nucleus" => verify_nucleus(&ws(&[":0", ":01", ":001", ":1"]))?,
        "prefix" => prefix_suite(&ws(&[":0"]), 100, params.trials.unwrap_or(20), seed)?,
        "quotients" => quotient_comparison(&ws(&[":0", ":01", "0:01", ":001"]), params.levels.clone().unwrap_or(1..=8))?,
        "lsub" => {
            let ws = ws(&[":0"]);
            let levels = params.levels.clone().unwrap_or(1..=6);
            let mut r = Report::new("lsub", json!({ "ws": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(), "levels": [levels.start(), levels.end()] }));
            for w in &ws {
                let sub = l_subgroup_experiment(w, levels.clone())?;
                r.checks.extend(sub.checks);
                r.observations.extend(sub.observations);
            }
            r
        }
        "conjugator" => {
            let pairs: Vec<(BinSeqEP, BinSeqEP)> = if params.ws.len() >= 2 {
                params.ws.chunks_exact(2).map(|c| (c[0].clone(), c[1].clone())).collect()
            } else {
                let p = seqs(&[":0", ":1", "0:01", "1:01", ":01", ":10", ":001", "1:001"]);
                p.chunks_exact(2).map(|c| (c[0].clone(), c[1].clone())).collect()
            };
            conjugator_suite(&pairs, params.depth.unwrap_or(4))?
        }
        "growth" => {
            let (report, csv) = growth_suite(&ws(&[":0", ":1", ":01"]), params.radius.unwrap_or(7))?;
            return Ok(SuiteRun { report, csv: Some(csv) });
        }
        "ratmap" => ratmap_suite(seed)?,
        other => return Err(Error::Parse { line: 0, msg: format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")) }),
    };
    Ok(SuiteRun { report, csv: None })
}

/// Bounds that make a check inconclusive rather than failed.
fn bound_hit(e: &Error) -> Option<String> {
    match e {
        Error::ContractionCap { .. }
        | Error::ProofCap(_)
        | Error::ResourceLimit(_)
        | Error::NotContracting { .. }
        | Error::FingerprintCollision { .. } => Some(e.to_string()),
        _ => None,
    }
}

/// Records `f`'s verdict, or an inconclusive check if a resource bound was hit.
fn record(r: &mut Report, id: &str, desc: &str, claim: &str, f: impl FnOnce() -> Result<(bool, Value)>) -> Result<()> {
    match f() {
        Ok((ok, data)) => r.check(id, desc, claim, Status::from_bool(ok), data),
        Err(e) => match bound_hit(&e) {
            Some(b) => r.inconclusive(id, desc, claim, b),
            None => return Err(e),
        },
    }
    Ok(())
}

/// `𝒟 = ⟨alpha, beta, gamma⟩` inside the six-generator machine.
pub fn d_generators() -> Vec<Element> {
    let tilde = build_tilde_d();
    ["alpha", "beta", "gamma"].iter().map(|n| Element::named(&tilde, n).unwrap()).collect()
}

/// All elements of the finite subgroup generated by `gens`, by closed breadth-first search.
pub fn subgroup_elements(group: &mut Group, gens: &[Element], cap: usize) -> Result<Vec<PortraitId>> {
    let alphabet = gens.iter().map(|g| group.portrait(g)).collect::<Result<Vec<_>>>()?;
    let id = group.identity_portrait();
    let mut seen = HashSet::from([id]);
    let mut out = vec![id];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &p in &frontier {
            for &s in &alphabet {
                let q = group.mul(p, s)?;
                if seen.insert(q) {
                    out.push(q);
                    next.push(q);
                }
            }
        }
        if seen.len() > cap {
            return Err(Error::ResourceLimit(format!("subgroup has more than {cap} elements")));
        }
        frontier = next;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// relations

/// Word of `s⁻¹ x s`.
fn conj(x: &Element, s: &Element) -> Element {
    s.inverse().product(x).unwrap().product(s).unwrap()
}

/// The relation table of the six-generator group, checked as exact identities.
///
/// `depth` only bounds the failure diagnostics: for a failing relation the
/// first level (at most `depth`) where the two sides differ is reported.
pub fn verify_relations(depth: usize) -> Result<Report> {
    let tilde = build_tilde_d();
    let mut r = Report::new("relations", json!({ "depth": depth, "nucleus_cap": TILDE_NUCLEUS_CAP }));
    let el = |n: &str| Element::named(&tilde, n).unwrap();
    let claim = "x^s = x^t for the nine pairs of the relation table";
    let mut opposite = true;
    for (x, s, t) in RELATIONS {
        let id = format!("{x}^{s}");
        let desc = format!("{x}^{s} = {x}^{}", t.unwrap_or("1"));
        // Triviality does not depend on the ambient group, so each relation is
        // decided in the subgroup generated by the letters it involves.
        let mut gens = vec![el(x), el(s)];
        gens.extend(t.map(el));
        let mut group = match Group::new(&gens, TILDE_NUCLEUS_CAP) {
            Ok(g) => g,
            Err(e) => {
                let b = bound_hit(&e).ok_or(e)?;
                r.inconclusive(id, desc, claim, b);
                opposite = false;
                continue;
            }
        };
        let lhs = conj(&el(x), &el(s));
        let rhs = match t {
            Some(t) => conj(&el(x), &el(t)),
            None => el(x),
        };
        record(&mut r, &id, &desc, claim, || {
            let ok = group.equal(&lhs, &rhs)?;
            let mut data = json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string(), "nucleus": group.nucleus().len() });
            if !ok {
                let diff = (1..=depth).find(|&n| lhs.level_permutation(n).ok() != rhs.level_permutation(n).ok());
                data["first_differing_level"] = json!(diff);
            }
            Ok((ok, data))
        })?;
        // s x s⁻¹ = t x t⁻¹, the same relation read with the opposite conjugation convention.
        let lhs_o = conj(&el(x), &el(s).inverse());
        let rhs_o = match t {
            Some(t) => conj(&el(x), &el(t).inverse()),
            None => el(x),
        };
        opposite &= group.equal(&lhs_o, &rhs_o).unwrap_or(false);
    }
    let c = [el("c")];
    record(&mut r, "identity^c", "1^c = 1", "conjugates of the identity are trivial", || {
        let mut group = Group::new(&c, TILDE_NUCLEUS_CAP)?;
        Ok((group.is_trivial(&conj(&Element::identity(&tilde), &c[0]))?, Value::Null))
    })?;
    r.check(
        "opposite_convention",
        "the nine relations also hold as s x s⁻¹ = t x t⁻¹",
        "every generator is an involution, so both conjugation conventions agree",
        Status::from_bool(opposite),
        Value::Null,
    );
    Ok(r)
}

// ---------------------------------------------------------------------------
// dihedral

fn dihedral_rows(r: &mut Report, prefix: &str, gens: &[Element], expected: [usize; 3]) -> Result<()> {
    let names = ["alpha", "beta", "gamma"];
    let mut group = Group::new(gens, NUCLEUS_CAP)?;
    let claim = "the pairs of generators generate dihedral groups of orders 16, 8, 16";
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let id = format!("{prefix}<{},{}>", names[i], names[j]);
        let desc = format!("|<{}, {}>| = {}", names[i], names[j], expected[k]);
        let pair = [gens[i].clone(), gens[j].clone()];
        record(r, &id, &desc, claim, || {
            let n = subgroup_elements(&mut group, &pair, CLOSURE_CAP)?.len();
            let involutions = pair.iter().map(|g| Ok(!group.is_trivial(g)? && group.is_trivial(&g.pow(2))?)).collect::<Result<Vec<bool>>>()?;
            let order = group.order_of(&pair[0].product(&pair[1])?, ORDER_CAP)?;
            // Two involutions whose product has order m generate a dihedral group of order 2m.
            let dihedral = involutions.iter().all(|&b| b) && order.map(|m| 2 * m as usize) == Some(n);
            Ok((n == expected[k] && dihedral, json!({ "order": n, "product_order": order, "involutions": involutions })))
        })?;
    }
    Ok(())
}

/// Orders of the two-generator subgroups of `𝒟`, and of `𝒟_w` for each `w`.
///
/// In `𝒟_w` the expected orders are 16, 8, 16, except that `beta_w gamma_w`
/// has order 2 when `w = 1^ω`, so `⟨beta, gamma⟩` has order 4 there.
pub fn verify_dihedral(ws: &[BinSeqEP]) -> Result<Report> {
    let mut r = Report::new("dihedral", json!({ "ws": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>() }));
    let d = d_generators();
    dihedral_rows(&mut r, "D:", &d, [16, 8, 16])?;
    let mut group = Group::new(&d, NUCLEUS_CAP)?;
    let pair = [Element::identity(d[0].machine()), d[0].clone()];
    let n = subgroup_elements(&mut group, &pair, CLOSURE_CAP)?.len();
    r.check("D:<1,alpha>", "|<1, alpha>| = 2", "alpha is a nontrivial involution", Status::from_bool(n == 2), json!({ "order": n }));
    for w in ws {
        let ctx = build_dw(w);
        let bg = if *w == BinSeqEP::constant(1) { 4 } else { 16 };
        dihedral_rows(&mut r, &format!("{w}:"), &ctx.generators(), [16, 8, bg])?;
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// nucleus

/// The nucleus of `𝒟` against the union of its dihedral subgroups, and the
/// injectivity of `P_w` on it for each `w`.
pub fn verify_nucleus(ws: &[BinSeqEP]) -> Result<Report> {
    let mut r = Report::new("nucleus", json!({ "cap": NUCLEUS_CAP, "ws": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>() }));
    let d = d_generators();
    let mut group = match Group::with_config(&d, &NucleusConfig::with_cap(NUCLEUS_CAP), crate::canonical::DEFAULT_DEPTH_CAP) {
        Ok(g) => g,
        Err(e) => {
            let b = bound_hit(&e).ok_or(e)?;
            r.inconclusive("terminates", "nucleus computation under the cap", "𝒟 is contracting", b);
            return Ok(r);
        }
    };
    let nucleus = group.nucleus().clone();
    r.check("terminates", "nucleus computation under the cap", "𝒟 is contracting", Status::Pass, json!({ "size": nucleus.len() }));

    let mut union = HashSet::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        union.extend(subgroup_elements(&mut group, &[d[i].clone(), d[j].clone()], CLOSURE_CAP)?);
    }
    let leaves: Option<HashSet<u32>> = union.iter().map(|&p| group.store().as_leaf(p)).collect();
    let all: HashSet<u32> = (0..nucleus.len() as u32).collect();
    let equal = leaves.as_ref() == Some(&all);
    r.check(
        "equals_dihedral_union",
        "the nucleus is the union of <alpha,beta>, <alpha,gamma>, <beta,gamma>",
        "𝒩 = ⟨α,β⟩ ∪ ⟨α,γ⟩ ∪ ⟨β,γ⟩",
        Status::from_bool(equal),
        json!({ "nucleus": nucleus.len(), "union": union.len() }),
    );

    let reducer = nucleus.reducer().clone();
    let machine = nucleus.machine().clone();
    let prover = Prover::new(&machine, &reducer, PROOF_CAP);
    record(&mut r, "section_closed", "every section of a nucleus element is the recorded nucleus element", "𝒩 is closed under sections", || {
        let mut bad = Vec::new();
        for i in 0..nucleus.len() as u32 {
            for x in 0..machine.arity() as u8 {
                let s = machine.word_section(nucleus.word(i), x);
                if !prover.equal(&s, nucleus.word(nucleus.section(i, x)))? {
                    bad.push((i, x));
                }
            }
        }
        Ok((bad.is_empty(), json!({ "mismatches": bad.len() })))
    })?;

    let mut worst = 0;
    for i in 0..nucleus.len() as u32 {
        for j in 0..nucleus.len() as u32 {
            let p = group.mul(group.store().leaf(i), group.store().leaf(j))?;
            worst = worst.max(group.store().depth(p));
        }
    }
    r.observe("pair_depth", "largest contraction depth of a product of two nucleus elements", json!(worst));
    r.observe("dump", "nucleus elements", json!(group.nucleus_dump()?.lines().collect::<Vec<_>>()));

    for w in ws {
        let rep = nucleus_injectivity(&group, w)?;
        r.checks.extend(rep.checks);
    }
    Ok(r)
}

/// `|P_w(𝒩)|` by pairwise portrait equality in `𝒟_w`, and the order of `beta_w gamma_w`.
pub fn nucleus_injectivity(d_group: &Group, w: &BinSeqEP) -> Result<Report> {
    let mut r = Report::new("nucleus_injectivity", json!({ "w": w.to_string() }));
    let nucleus = d_group.nucleus().clone();
    let ctx = build_dw(w);
    let mut g = Group::new(&ctx.generators(), NUCLEUS_CAP)?;
    let one = BinSeqEP::constant(1);
    let injective_expected = *w != one;
    record(&mut r, &format!("{w}:injective"), "restriction to T_w is injective on the nucleus exactly when w ≠ 1^ω", "P_w is injective on 𝒩 iff w ≠ 1^ω", || {
        let mut images = HashSet::new();
        for i in 0..nucleus.len() as u32 {
            let e = restrict_to_tw(&nucleus.element(i), &ctx)?;
            images.insert(g.portrait(&e)?);
        }
        let injective = images.len() == nucleus.len();
        Ok((injective == injective_expected, json!({ "nucleus": nucleus.len(), "image": images.len() })))
    })?;
    let expected = if injective_expected { 8 } else { 2 };
    record(&mut r, &format!("{w}:order(beta gamma)"), &format!("beta_w gamma_w has order {expected}"), "β_wγ_w has order 8, and order 2 in 𝒟_{1^ω}", || {
        let o = g.order_of(&ctx.beta().product(&ctx.gamma())?, ORDER_CAP)?;
        Ok((o == Some(expected), json!({ "order": o })))
    })?;
    Ok(r)
}

// ---------------------------------------------------------------------------
// prefix

/// A random `w′ ∈ X^ω₀` agreeing with `w` on its first `n` letters.
fn random_extension(w: &BinSeqEP, n: usize, rng: &mut ChaCha8Rng) -> BinSeqEP {
    let mut prefix = w.take(n);
    for _ in 0..rng.gen_range(0..6) {
        prefix.push(rng.gen_range(0..2));
    }
    let len = rng.gen_range(1..=4);
    let mut period: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
    let k = rng.gen_range(0..len);
    period[k] = 0;
    BinSeqEP::new(prefix, period).expect("nonempty period")
}

#[derive(Debug, Clone, Serialize)]
pub struct PrefixOutcome {
    pub g: String,
    pub depth: usize,
    pub trivial: bool,
    pub agree: usize,
    pub disagree: Vec<String>,
    pub inconclusive: usize,
}

/// Triviality of `P_w(g)` against `P_{w′}(g)` for `trials` random `w′ ∈ X^ω₀`
/// sharing the first `n` letters of `w`, `n` the contraction depth of `P_w(g)`.
///
/// `letters` is a word over `{0: alpha, 1: beta, 2: gamma}`.
pub fn prefix_continuity(group: &mut Group, ctx: &FamilyContext, letters: &[usize], trials: usize, rng: &mut ChaCha8Rng) -> Result<PrefixOutcome> {
    let g = ctx.word(letters);
    let depth = group.contraction_depth(&g)?;
    let trivial = group.is_trivial(&g)?;
    let mut out = PrefixOutcome { g: g.to_string(), depth, trivial, agree: 0, disagree: Vec::new(), inconclusive: 0 };
    for _ in 0..trials {
        let w2 = random_extension(ctx.w(), depth, rng);
        let c2 = build_dw(&w2);
        let reducer = Reducer::detect(c2.machine(), PROOF_CAP)?;
        let word: Vec<Letter> = c2.word(letters).word().to_vec();
        match Prover::new(c2.machine(), &reducer, PROOF_CAP).is_trivial(&word) {
            Ok(t) if t == trivial => out.agree += 1,
            Ok(_) => out.disagree.push(w2.to_string()),
            Err(Error::ProofCap(_)) => out.inconclusive += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn prefix_row(r: &mut Report, id: &str, desc: &str, w: &BinSeqEP, words: &[Vec<usize>], trials: usize, expect_trivial: Option<bool>, rng: &mut ChaCha8Rng) -> Result<()> {
    let claim = "triviality of g in 𝒟_w depends only on the first n letters of w, n the contraction depth of g";
    let ctx = build_dw(w);
    let mut group = Group::new(&ctx.generators(), NUCLEUS_CAP)?;
    let mut outcomes = Vec::new();
    for word in words {
        match prefix_continuity(&mut group, &ctx, word, trials, rng) {
            Ok(o) => outcomes.push(o),
            Err(e) => {
                let b = bound_hit(&e).ok_or(e)?;
                r.inconclusive(id, desc, claim, b);
                return Ok(());
            }
        }
    }
    let agree: usize = outcomes.iter().map(|o| o.agree).sum();
    let disagree: Vec<&str> = outcomes.iter().flat_map(|o| o.disagree.iter().map(|s| s.as_str())).collect();
    let inconclusive: usize = outcomes.iter().map(|o| o.inconclusive).sum();
    let expected_ok = expect_trivial.is_none_or(|t| outcomes.iter().all(|o| o.trivial == t));
    let max_depth = outcomes.iter().map(|o| o.depth).max().unwrap_or(0);
    let data = json!({ "w": w.to_string(), "elements": words.len(), "comparisons": agree + disagree.len() + inconclusive,
        "agree": agree, "disagree": disagree, "max_depth": max_depth, "trivial": outcomes.iter().filter(|o| o.trivial).count() });
    if disagree.is_empty() && inconclusive > 0 {
        r.inconclusive(id, desc, claim, format!("{inconclusive} comparisons hit the proof cap {PROOF_CAP}"));
    } else {
        r.check(id, desc, claim, Status::from_bool(disagree.is_empty() && expected_ok), data);
    }
    Ok(())
}

/// Prefix continuity for `samples` random elements of length at most 12 per `w`,
/// each compared against `trials` random extensions.
pub fn prefix_suite(ws: &[BinSeqEP], samples: usize, trials: usize, seed: u64) -> Result<Report> {
    let mut r = Report::new(
        "prefix",
        json!({ "ws": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(), "samples": samples, "trials": trials, "seed": seed }),
    );
    r.observe("sampling", "w′ ranges over eventually periodic sequences with a zero in the period", Value::Null);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for w in ws {
        if !w.in_omega_zero() {
            return Err(Error::InvalidSequence(format!("{w} has finitely many zeros")));
        }
        let words: Vec<Vec<usize>> = (0..samples)
            .map(|_| {
                let len = rng.gen_range(1..=12);
                (0..len).map(|_| rng.gen_range(0..3)).collect()
            })
            .collect();
        prefix_row(&mut r, &format!("{w}:random"), "random words of length ≤ 12 keep their triviality verdict", w, &words, trials, None, &mut rng)?;
    }
    let zero = BinSeqEP::constant(0);
    let bg2 = vec![vec![1, 2, 1, 2]];
    prefix_row(&mut r, "(beta gamma)^2", "(beta gamma)^2 is nontrivial for every sampled w′", &zero, &bg2, trials, Some(false), &mut rng)?;
    prefix_row(&mut r, "identity", "the identity is trivial for every sampled w′", &zero, &[vec![]], trials, Some(true), &mut rng)?;
    let ab: BinSeqEP = ":01".parse().unwrap();
    // [alpha, beta] = alpha⁻¹ beta⁻¹ alpha beta; all three generators are involutions.
    prefix_row(&mut r, "[alpha,beta]@(01)", "[alpha, beta] has a consistent verdict across 50 w′", &ab, &[vec![0, 1, 0, 1]], 50, Some(false), &mut rng)?;
    Ok(r)
}

// ---------------------------------------------------------------------------
// quotients

/// Order of the group generated by `gens` by closing under multiplication, if at most `cap`.
pub fn naive_order(gens: &[Perm], cap: usize) -> Option<usize> {
    let degree = gens.first()?.degree();
    let id = Perm::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for g in gens {
                let q = g.compose(p);
                if seen.insert(q.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    Some(seen.len())
}

/// Level-quotient orders and derived lengths of `𝒟_w` for each `w` and level.
///
/// Cross-prefix order comparisons are recorded as observations only: no
/// equality of individual quotient orders is asserted for sequences with
/// different prefixes.
pub fn quotient_comparison(ws: &[BinSeqEP], levels: RangeInclusive<usize>) -> Result<Report> {
    let mut r = Report::new(
        "quotients",
        json!({ "ws": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(), "levels": [levels.start(), levels.end()] }),
    );
    let mut orders: BTreeMap<usize, Vec<(String, String)>> = BTreeMap::new();
    let mut perms: HashMap<(usize, usize), Vec<Perm>> = HashMap::new();
    for (wi, w) in ws.iter().enumerate() {
        let ctx = build_dw(w);
        for n in levels.clone() {
            let id = format!("{w}:level{n}");
            let q = match level_quotient(&ctx.generators(), n) {
                Ok(q) => q,
                Err(e) => {
                    let b = bound_hit(&e).ok_or(e)?;
                    r.inconclusive(&id, "level quotient", "finite quotients of 𝒟_w are 2-groups", b);
                    continue;
                }
            };
            perms.insert((wi, n), q.generators().to_vec());
            let order = q.order();
            let pow2 = order.count_ones() == 1;
            let derived = if q.degree() <= DERIVED_DEGREE_CAP {
                json!(q.derived_length(64)?)
            } else {
                json!(format!("skipped: degree {} > {DERIVED_DEGREE_CAP}", q.degree()))
            };
            let mut data = json!({ "order": order.to_string(), "log2_order": order.bits() - 1, "derived_length": derived });
            let mut ok = pow2;
            if let Some(naive) = order.to_usize().filter(|&o| o <= NAIVE_CLOSURE_CAP).and_then(|_| naive_order(q.generators(), NAIVE_CLOSURE_CAP)) {
                data["naive_order"] = json!(naive);
                ok &= order.to_usize() == Some(naive);
            }
            let expected = match n {
                1 => Some(2u32),
                2 => Some(8),
                _ => None,
            };
            if let Some(e) = expected {
                ok &= order == e.into();
            }
            let desc = match expected {
                Some(e) => format!("order {e}, a power of 2, matching naive closure"),
                None => "order is a power of 2 and matches naive closure when at most 5000".into(),
            };
            r.check(id, desc, "level quotients of 𝒟_w are finite 2-groups", Status::from_bool(ok), data);
            orders.entry(n).or_default().push((w.to_string(), order.to_string()));
        }
    }
    for (i, a) in ws.iter().enumerate() {
        for (j, b) in ws.iter().enumerate().skip(i + 1) {
            let shared = a.common_prefix_len(b).unwrap_or(usize::MAX);
            for n in levels.clone().filter(|&n| n <= shared) {
                if let (Some(pa), Some(pb)) = (perms.get(&(i, n)), perms.get(&(j, n))) {
                    r.check(
                        format!("{a}~{b}:level{n}"),
                        format!("a common prefix of length {n} gives identical generator permutations on level {n}"),
                        "the level-n action of 𝒟_w depends only on the first n letters of w",
                        Status::from_bool(pa == pb),
                        Value::Null,
                    );
                }
            }
        }
    }
    for (n, row) in orders {
        let same = row.windows(2).all(|p| p[0].1 == p[1].1);
        r.observe(
            format!("level{n}:orders"),
            "exploratory cross-prefix comparison of quotient orders (not a theorem)",
            json!({ "orders": row.into_iter().collect::<BTreeMap<_, _>>(), "all_equal": same }),
        );
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// L-subgroup

/// The level-`n` permutation acting as `c` inside the subtree below `x` and trivially elsewhere.
pub fn subtree_copy(c: &[u32], x: u32) -> Perm {
    let half = c.len() as u32;
    let images = (0..2 * half)
        .map(|v| if v / half == x { x * half + c[(v % half) as usize] } else { v })
        .collect();
    Perm::from_images(images).expect("subtree copy is a permutation")
}

/// Per level: the normal closure `N_L` of the images of `[alpha_w, beta_w]` and
/// `[gamma_w, beta_w]`, its index, and membership of the subtree copies of the
/// shifted commutators.
pub fn l_subgroup_experiment(w: &BinSeqEP, levels: RangeInclusive<usize>) -> Result<Report> {
    let mut r = Report::new("lsub", json!({ "w": w.to_string(), "levels": [levels.start(), levels.end()] }));
    let ctx = build_dw(w);
    let [a, b, c]: [Element; 3] = ctx.generators().try_into().unwrap();
    let seeds_el = [a.commutator(&b)?, c.commutator(&b)?];
    let shifted = ctx.generators_at_shift(1);
    let shifted_el = [shifted[0].commutator(&shifted[1])?, shifted[2].commutator(&shifted[1])?];
    let mut indices = Vec::new();
    let claim = "L_w has finite index in 𝒟_w and contains L_{s(w)} × L_{s(w)}";
    for n in levels {
        let q = level_quotient(&ctx.generators(), n)?;
        let actions = LevelActions::new(ctx.machine(), n, usize::MAX)?;
        let seeds = seeds_el.iter().map(|e| Perm::from_images(actions.word_perm(e.word()))).collect::<Result<Vec<_>>>()?;
        let nl = q.normal_closure(&seeds, 10_000)?;
        let index = q.subgroup_index(&nl)?;
        let divides = (q.order() % nl.order()).is_zero();
        indices.push(json!([n, index.to_string()]));
        let mut data = json!({ "order": q.order().to_string(), "closure_order": nl.order().to_string(), "index": index.to_string() });
        let mut ok = divides;
        if n == 1 {
            ok &= index == 2u32.into() && nl.is_trivial();
        }
        r.check(format!("{w}:level{n}:index"), "index of N_L divides the quotient order", claim, Status::from_bool(ok), data.take());
        if n >= 2 {
            let lower = LevelActions::new(ctx.machine(), n - 1, usize::MAX)?;
            let mut members = Vec::new();
            for e in &shifted_el {
                let p = lower.word_perm(e.word());
                for x in 0..2 {
                    members.push(nl.contains(&subtree_copy(&p, x)));
                }
            }
            r.check(
                format!("{w}:level{n}:subtree_copies"),
                "both subtree copies of [alpha,beta] and [gamma,beta] of the shifted group lie in N_L",
                claim,
                Status::from_bool(members.iter().all(|&m| m)),
                json!({ "members": members }),
            );
        }
        let trivial_seed = q.normal_closure(&[Perm::identity(q.degree())], 10)?;
        let idx = q.subgroup_index(&trivial_seed)?;
        r.check(
            format!("{w}:level{n}:identity_seed"),
            "normal closure of the identity has index equal to the group order",
            "the normal closure of {1} is trivial",
            Status::from_bool(idx == q.order()),
            Value::Null,
        );
    }
    r.observe(format!("{w}:indices"), "index of N_L per level", json!(indices));
    Ok(r)
}

// ---------------------------------------------------------------------------
// conjugator

pub fn conjugator_suite(pairs: &[(BinSeqEP, BinSeqEP)], depth: usize) -> Result<Report> {
    let names: Vec<[String; 2]> = pairs.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect();
    let mut r = Report::new("conjugator", json!({ "pairs": names, "depth": depth }));
    let claim = "no tree automorphism conjugates 𝒟_{w1} onto 𝒟_{w2} generator-wise when the first letters differ";
    for (w1, w2) in pairs {
        let id = format!("{w1}|{w2}");
        let v = conjugator_obstruction(w1, w2, depth)?;
        let data = serde_json::to_value(&v).expect("verdict serializes");
        if w1 == w2 {
            r.check(id, "equal sequences are never refuted", "the identity conjugates 𝒟_w to itself", Status::from_bool(!v.is_unsat()), data);
        } else if w1.letter(0) != w2.letter(0) {
            r.check(id, format!("refuted within depth {depth}"), claim, Status::from_bool(v.is_unsat()), data);
        } else {
            r.observe(id, "first letters agree; verdict recorded only", data);
        }
    }
    for w in seqs(&[":0", ":01"]) {
        if pairs.iter().any(|(a, b)| a == &w && b == &w) {
            continue;
        }
        let v = conjugator_obstruction(&w, &w, depth)?;
        r.check(format!("{w}|{w}"), "equal sequences are never refuted", "the identity conjugates 𝒟_w to itself", Status::from_bool(!v.is_unsat()), serde_json::to_value(&v).unwrap());
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// growth

/// `|B(n)|` for `n ≤ radius` by enumerating all words and deduplicating by their level-`level` action.
pub fn naive_ball_sizes(ctx: &FamilyContext, radius: usize, level: usize) -> Result<Vec<u64>> {
    let actions = LevelActions::new(ctx.machine(), level, usize::MAX)?;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut sizes = Vec::new();
    let mut words: Vec<Vec<Letter>> = vec![vec![]];
    for n in 0..=radius {
        for wd in &words {
            seen.insert(actions.word_perm(wd));
        }
        sizes.push(seen.len() as u64);
        if n < radius {
            words = words
                .iter()
                .flat_map(|wd| {
                    ctx.generators().into_iter().map(move |g| {
                        let mut v = wd.clone();
                        v.extend_from_slice(g.word());
                        v
                    })
                })
                .collect();
        }
    }
    Ok(sizes)
}

fn table_checks(r: &mut Report, t: &GrowthTable, w: &BinSeqEP) -> Result<()> {
    let s = &t.sizes;
    let claim = "r(n) counts the elements of word length at most n";
    r.check(format!("{w}:r0"), "r(0) = 1", claim, Status::from_bool(s[0] == 1), Value::Null);
    if *w != BinSeqEP::constant(1) && s.len() > 1 {
        r.check(format!("{w}:r1"), "r(1) = 4: identity and three distinct involutions", claim, Status::from_bool(s[1] == 4), json!(s[1]));
    }
    r.check(format!("{w}:monotone"), "r(n) ≤ r(n+1)", claim, Status::from_bool(s.windows(2).all(|p| p[0] <= p[1])), Value::Null);
    let mut sub = true;
    for m in 0..s.len() {
        for n in 0..s.len() - m {
            sub &= s[m + n] <= s[m] * s[n];
        }
    }
    r.check(format!("{w}:submultiplicative"), "r(m+n) ≤ r(m) r(n)", "B(m+n) ⊆ B(m)·B(n)", Status::from_bool(sub), Value::Null);
    let ctx = build_dw(w);
    let upto = t.radius.min(4).min(s.len() - 1);
    let naive = naive_ball_sizes(&ctx, upto, 8)?;
    r.check(
        format!("{w}:oracle"),
        format!("ball sizes match all-words enumeration deduplicated by the level-8 action up to radius {upto}"),
        claim,
        Status::from_bool(naive[..] == s[..=upto]),
        json!({ "naive": naive }),
    );
    if let Some(why) = &t.truncated {
        r.inconclusive(format!("{w}:complete"), format!("all radii up to {}", t.radius), claim, why.clone());
    }
    Ok(())
}

/// Ball sizes per `w`, with oracle and sanity checks; the CSV is returned alongside.
pub fn growth_suite(ws: &[BinSeqEP], radius: usize) -> Result<(Report, String)> {
    let mut r = Report::new("growth", json!({ "ws": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(), "radius": radius, "budget": DEFAULT_BUDGET }));
    let cmp = compare_growth(ws, radius, NUCLEUS_CAP, DEFAULT_BUDGET);
    for (w, e) in &cmp.errors {
        r.inconclusive(format!("{w}:table"), "growth table", "r(n) is computable", e.clone());
    }
    for t in &cmp.tables {
        let w: BinSeqEP = t.label.parse()?;
        table_checks(&mut r, t, &w)?;
        r.observe(format!("{w}:sizes"), "ball sizes r(0..)", json!(t.sizes));
    }
    for d in &cmp.dominance {
        r.observe(format!("{}|{}", d.first, d.second), "pointwise dominance over the computed radii", serde_json::to_value(d).unwrap());
    }
    r.observe("scope", "finite tables only; growth types are not estimated", Value::Null);
    Ok((r, cmp.to_csv()?))
}

// ---------------------------------------------------------------------------
// ratmap

pub fn ratmap_suite(seed: u64) -> Result<Report> {
    let mut r = Report::new("ratmap", json!({ "seed": seed }));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let claim = "p_{n-1} = (1 − 2/p_n)² and F(z, p) = ((1 − 2z/p)², (1 − 2/p)²)";

    let p = Complex64::new(0.0, 2.0);
    let err = rel_err(forward_p(p)?, p);
    r.check("fixed_2i", "p = 2i is fixed to 1e-12", claim, Status::from_bool(err < 1e-12), json!({ "rel_err": err }));

    let (z1, _) = iterate_f(Complex64::zero(), Complex64::new(3.0, -1.0))?;
    r.check("z0", "F(0, p) has first coordinate exactly 1", claim, Status::from_bool(z1 == Complex64::one()), Value::Null);

    let branch: Vec<bool> = (0..20).map(|_| rng.gen()).collect();
    let orbit = backward_orbit(Complex64::new(3.0, 0.0), 20, &branch)?;
    let mut worst: f64 = 0.0;
    for k in 1..orbit.len() {
        let (fz, fp) = iterate_f(orbit[k].z, orbit[k].p)?;
        worst = worst.max(rel_err(fp, orbit[k - 1].p)).max(rel_err(fz, orbit[k - 1].z));
    }
    r.check("backward_orbit", "20 backward steps from p0 = 3 recompose under F to 1e-10", claim, Status::from_bool(worst < 1e-10), json!({ "max_rel_err": worst }));

    let mut line: f64 = 0.0;
    let mut proj: f64 = 0.0;
    for _ in 0..100 {
        let p = loop {
            let p = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            if p.norm() > 1e-3 && (p - 1.0).norm() > 1e-3 {
                break p;
            }
        };
        let (a, b) = iterate_f(Complex64::one(), p)?;
        line = line.max(rel_err(a, b));
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let [x, y, u] = iterate_f_projective(z, p, Complex64::one());
        let (fz, fp) = iterate_f(z, p)?;
        proj = proj.max(rel_err(x / u, fz)).max(rel_err(y / u, fp));
    }
    r.check("line_z_eq_u", "F maps the line z = u into z = p on 100 samples to 1e-10", "F(1, p) = ((1 − 2/p)², (1 − 2/p)²)", Status::from_bool(line < 1e-10), json!({ "max_rel_err": line }));
    r.check("projective", "the projective form agrees with the affine map on 100 samples", claim, Status::from_bool(proj < 1e-10), json!({ "max_rel_err": proj }));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subtree_copy_acts_below_one_letter() {
        let p = subtree_copy(&[1, 0], 1);
        assert_eq!(p.images(), &[0, 1, 3, 2]);
    }

    #[test]
    fn naive_order_of_s3() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(naive_order(&[a, b], 100), Some(6));
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", &SuiteParams::default()).is_err());
    }

    #[test]
    fn ratmap_passes() {
        assert_eq!(ratmap_suite(7).unwrap().exit_code(), 0);
    }

    #[test]
    fn machine_of_d_is_shared() {
        let d = d_generators();
        assert!(std::sync::Arc::ptr_eq(d[0].machine(), d[2].machine()));
    }
}
