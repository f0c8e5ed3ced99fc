//! Acceptance suite: the reference scenarios and the randomized property
//! suites. Each test prints one PASS line; language comparisons are exact
//! (no tolerances anywhere).

mod common;

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use descoord_core::compare::{language_equality, Mode};
use descoord_core::coordination::{
    build_coordinator, conditionally_independent, extend_for_cd, is_conditionally_controllable,
    is_conditionally_closed, is_conditionally_decomposable, refine_doublestar, shared_events,
    solve, synthesize_star, CoordinationProblem, ConditionOutcome,
};
use descoord_core::json;
use descoord_core::minext::{
    exact_min_extension, greedy_min_extension, setcover_to_cd, SetCoverInstance,
};
use descoord_core::nonblocking::{nonblocking_coordinator, verify_nonblocking_theorem};
use descoord_core::observer::{is_observer, verify_projection_suite};
use descoord_core::ops::{project_onto, sync_product, sync_product_all};
use descoord_core::supervisory::{is_controllable, is_lm_closed, sup_c};
use descoord_core::words::enumerate_words;
use descoord_core::{EventSet, Generator, ProjectionSpec, Word};

fn alphabets_from_file(g: &Generator, rel: &str) -> Vec<EventSet> {
    let def = json::load_alphabets_file(fixture_path(rel)).unwrap();
    def.alphabets
        .iter()
        .map(|names| alphabet_of(g, names.iter().map(|s| s.as_str())))
        .collect()
}

fn alphabet_of<'a, I: IntoIterator<Item = &'a str>>(g: &Generator, names: I) -> EventSet {
    let mut out = EventSet::new();
    for n in names {
        out.insert(g.alphabet().by_name(n).expect("event exists").clone())
            .unwrap();
    }
    out
}

#[test]
fn criterion_1_conditional_decomposability_of_the_reference_languages() {
    let k = load_gen("decomposability/spec_k.json");
    let alphabets = alphabets_from_file(&k, "decomposability/alphabets.json");
    let sigma_k = alphabet_of(&k, ["a", "b"]);

    let marked = is_conditionally_decomposable(&k, &alphabets, &sigma_k, Mode::Marked, &limits())
        .unwrap();
    assert!(marked.holds, "K itself decomposes");

    let closed = is_conditionally_decomposable(&k, &alphabets, &sigma_k, Mode::Closed, &limits())
        .unwrap();
    assert!(!closed.holds, "the closure does not decompose");
    let cex = closed.counterexample.unwrap();
    assert!(
        cex.starts_with(&word(&["a1", "b2"])),
        "shortest counterexample starts a1 b2, got {cex}"
    );

    let l = load_gen("decomposability/spec_l.json");
    let alphabets_l = alphabets_from_file(&l, "decomposability/alphabets_l.json");
    let sigma_c = alphabet_of(&l, ["c"]);
    let closed_l =
        is_conditionally_decomposable(&l, &alphabets_l, &sigma_c, Mode::Closed, &limits()).unwrap();
    assert!(closed_l.holds, "the closure of L decomposes");

    println!("ACCEPTANCE 1 PASS: decomposability of K, its closure, and closure(L) as stated");
}

#[test]
fn criterion_2_controllable_but_not_conditionally_controllable() {
    let g1 = load_gen("controllability/g1.json");
    let g2 = load_gen("controllability/g2.json");
    let k = load_gen("controllability/spec_k.json");
    let unctrl = events(&[("u", false)]);

    let plant = sync_product(&g1, &g2).unwrap();
    let monolithic = is_controllable(&k, &plant, &unctrl, &limits()).unwrap();
    assert!(monolithic.controllable, "K = {{a}} is controllable monolithically");

    let sigma_k = alphabet_of(&k, ["u"]);
    let gk = build_coordinator(&[&g1, &g2], &sigma_k, &limits()).unwrap();
    assert!(gk.generates(&word(&["u"])), "L(Gk) enables u");

    let cc = is_conditionally_controllable(&k, &[&g1, &g2], &gk, &unctrl, &limits()).unwrap();
    assert!(!cc.holds);
    match &cc.conditions[0].outcome {
        ConditionOutcome::Verdict(v) => {
            assert!(!v.controllable, "condition 1 fails");
            let w = v.witness.as_ref().unwrap();
            assert_eq!(w.word, Word::empty());
            assert_eq!(w.event, "u");
        }
        other => panic!("unexpected outcome {other:?}"),
    }
    println!("ACCEPTANCE 2 PASS: K controllable monolithically, condition 1 of conditional controllability fails on (ε, u)");
}

#[test]
fn criterion_3_conditional_closedness_fails_on_the_empty_word() {
    let g1 = load_gen("closedness/g1.json");
    let g2 = load_gen("closedness/g2.json");
    let gk = load_gen("closedness/gk.json");
    let k = load_gen("closedness/spec_k.json");

    // The monolithic plant marks exactly K, so K is Lm(G)-closed.
    let whole = sync_product_all(&[&g1, &g2, &gk]).unwrap();
    assert!(is_lm_closed(&k, &whole).closed);

    let ccl = is_conditionally_closed(&k, &[&g1, &g2], &gk, &limits()).unwrap();
    assert!(!ccl.holds);
    let first = &ccl.conditions[0];
    assert!(!first.outcome.closed, "P_k(K) is not Lm(Gk)-closed");
    assert_eq!(first.outcome.witness.as_ref().unwrap(), &Word::empty());
    println!("ACCEPTANCE 3 PASS: conditional closedness condition 1 fails with witness ε");
}

#[test]
fn criterion_4_synthesis_and_refinement_on_the_two_branch_example() {
    let problem = load_problem("worked/problem.json");
    let star = synthesize_star(&problem, &limits()).unwrap();

    let expected_k = words_gen(
        &ctrl_events(&["a1", "a2", "c", "u"]),
        &[&["a1", "a2"], &["a2", "a1"]],
        true,
    );
    assert!(
        language_equality(&star.sup_k, &expected_k, Mode::Marked).holds,
        "supC_k is the closure of {{a1 a2, a2 a1}}"
    );
    let expected_1 = words_gen(
        &ctrl_events(&["a1", "u1", "c", "u", "a2"]),
        &[&["a2", "a1", "u1"]],
        true,
    );
    assert!(language_equality(&star.sup_locals[0], &expected_1, Mode::Marked).holds);
    let expected_2 = words_gen(
        &ctrl_events(&["a1", "c", "u", "a2", "u2"]),
        &[&["a1", "a2", "u2"]],
        true,
    );
    assert!(language_equality(&star.sup_locals[1], &expected_2, Mode::Marked).holds);

    assert!(
        !star.inclusion_holds(),
        "supC_k is not inside the projections of the local supervisors"
    );

    let refined = refine_doublestar(&problem, &star, &limits()).unwrap();
    assert!(refined.converged);
    assert_eq!(refined.iterations, 1, "one refinement pass settles it");
    let eps_k = epsilon_gen(star.sup_k.alphabet());
    assert!(language_equality(&refined.sup_k, &eps_k, Mode::Marked).holds);
    for local in &refined.sup_locals {
        let eps = epsilon_gen(local.alphabet());
        assert!(language_equality(local, &eps, Mode::Marked).holds);
    }
    assert!(refined.inclusion_checks.iter().all(|v| v.holds));

    let plants: Vec<&Generator> = problem.plants.iter().collect();
    let suite = verify_projection_suite(&plants, &problem.sigma_k, None, &limits()).unwrap();
    assert!(
        suite.observer_and_lcc_all_hold(),
        "observer and LCC hypotheses hold even though the inclusion fails"
    );
    println!("ACCEPTANCE 4 PASS: star synthesis, failed inclusion, one-pass refinement to {{ε}}, observer/LCC hypotheses hold");
}

#[test]
fn criterion_5_railway_synthesis_reaches_the_supremal_language() {
    let problem = load_problem("railway/problem.json");
    let report = solve(&problem, &limits()).unwrap();

    assert!(report.cd.holds);
    assert!(report.cd_closure.as_ref().unwrap().holds);
    assert!(!report.sigma_k_extended);
    assert!(report.conditionally_independent.holds);
    assert!(report.star.inclusion_holds(), "the inclusion holds for i = 1, 2");

    assert!(
        language_equality(&report.star.sup_k, &load_gen("railway/supk.json"), Mode::Marked).holds,
        "coordinator-level supervisor matches the reference"
    );
    assert!(language_equality(
        &report.star.sup_locals[0],
        &load_gen("railway/sup1k.json"),
        Mode::Marked
    )
    .holds);
    assert!(language_equality(
        &report.star.sup_locals[1],
        &load_gen("railway/sup2k.json"),
        Mode::Marked
    )
    .holds);

    let expected = load_gen("railway/supcc.json");
    assert!(
        language_equality(&report.composed_locals, &expected, Mode::Marked).holds,
        "composition of the local supervisors equals the reference language"
    );
    println!("ACCEPTANCE 5 PASS: railway inclusion holds and the composed supervisors match the 17-state reference");
}

#[test]
fn criterion_6_nonblocking_coordinator_on_the_four_event_example() {
    let g1 = load_gen("nonblocking/g1.json");
    let g2 = load_gen("nonblocking/g2.json");
    let product = sync_product(&g1, &g2).unwrap();
    assert!(!product.is_nonblocking(), "the plain composition blocks");

    let sigma_k = shared_events(&[g1.alphabet().clone(), g2.alphabet().clone()]);
    assert_eq!(sigma_k.names(), vec!["a", "d"]);

    // All events controllable.
    let none = EventSet::new();
    let res = nonblocking_coordinator(&g1, &g2, &sigma_k, &none, &limits()).unwrap();
    assert_eq!(res.sigma_0, vec!["a", "b", "d"], "observer extension adds b");
    let p1 = project_onto(&g1, ["a", "b", "d"], &limits()).unwrap();
    let p2 = project_onto(&g2, ["a", "d"], &limits()).unwrap();
    let g0 = sync_product(&p1, &p2).unwrap().trim();
    assert!(language_equality(&res.coordinator, &g0, Mode::Marked).holds);

    let composed = sync_product_all(&[&g1, &g2, &res.coordinator]).unwrap();
    assert!(composed.is_nonblocking());
    let reference = load_gen("nonblocking/composed.json");
    assert!(language_equality(&composed, &reference, Mode::Marked).holds);
    assert!(language_equality(&composed, &reference, Mode::Closed).holds);
    assert!(res.composed_nonblocking);

    // With b uncontrollable the coordinator shuts the system down.
    let unctrl_b = events(&[("b", false)]);
    let res_b = nonblocking_coordinator(&g1, &g2, &sigma_k, &unctrl_b, &limits()).unwrap();
    let eps = epsilon_gen(res_b.coordinator.alphabet());
    assert!(
        language_equality(&res_b.coordinator, &eps, Mode::Marked).holds,
        "the coordinator language collapses to {{ε}}"
    );
    let composed_b = sync_product_all(&[&g1, &g2, &res_b.coordinator]).unwrap();
    let eps_full = epsilon_gen(composed_b.alphabet());
    assert!(language_equality(&composed_b, &eps_full, Mode::Marked).holds);
    assert!(language_equality(&composed_b, &eps_full, Mode::Closed).holds);
    assert!(res_b.composed_nonblocking && res_b.composed_controllable);

    let thm = verify_nonblocking_theorem(&g1, &g2, &res_b, &[&g1, &g2], &unctrl_b, &limits())
        .unwrap();
    assert!(thm.both_hold());
    println!("ACCEPTANCE 6 PASS: blocking composition repaired; with b uncontrollable the coordinator is {{ε}} and both theorem conclusions hold");
}

#[test]
fn criterion_7_set_cover_reduction_demonstration() {
    let def = json::load_setcover_file(fixture_path("setcover/instance.json")).unwrap();
    let budget = def.budget;
    let instance = SetCoverInstance::from_def(def).unwrap();
    let (k, alphabets) = setcover_to_cd(&instance).unwrap();

    let exact = exact_min_extension(&k, &alphabets, &limits()).unwrap();
    assert_eq!(exact.cardinality, 2);
    assert!(exact.certified_minimal, "exhaustion certifies minimality");
    assert_eq!(exact.extension, vec!["c1", "c4"]);
    assert!(exact.cardinality <= budget.unwrap());

    // {c1, c4} really passes the decomposability check.
    let mut sigma = shared_events(&alphabets);
    for name in ["c1", "c4"] {
        sigma.insert(k.alphabet().by_name(name).unwrap().clone()).unwrap();
    }
    assert!(
        is_conditionally_decomposable(&k, &alphabets, &sigma, Mode::Marked, &limits())
            .unwrap()
            .holds
    );

    let greedy = greedy_min_extension(&k, &alphabets, &limits()).unwrap();
    assert!(greedy.cardinality >= exact.cardinality);
    let mut greedy_sigma = shared_events(&alphabets);
    for name in &greedy.extension {
        greedy_sigma
            .insert(k.alphabet().by_name(name).unwrap().clone())
            .unwrap();
    }
    assert!(
        is_conditionally_decomposable(&k, &alphabets, &greedy_sigma, Mode::Marked, &limits())
            .unwrap()
            .holds
    );
    println!("ACCEPTANCE 7 PASS: minimal extension has cardinality 2 with {{c1, c4}} certified by exhaustion");
}

// ---------------------------------------------------------------------------
// Criterion 8: randomized property suites, fixed seeds, >= 200 cases each.
// ---------------------------------------------------------------------------

const CASES: usize = 200;
const DRAW_BUDGET: usize = 60_000;

fn pool_events(rng: &mut ChaCha8Rng, max: usize, uncontrollable_prob: f64) -> EventSet {
    let n = rng.random_range(2..=max);
    let names = ["a", "b", "c", "d"];
    let mut out = EventSet::new();
    for name in names.iter().take(n) {
        let controllable = !rng.random_bool(uncontrollable_prob);
        out.insert(descoord_core::Event::new(*name, controllable))
            .unwrap();
    }
    out
}

#[test]
fn criterion_8a_projection_distributes_over_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8a);
    for _ in 0..CASES {
        let pool = pool_events(&mut rng, 4, 0.0);
        let (s1, s2) = random_alphabet_pair(&mut rng, &pool);
        let union = s1.union(&s2).unwrap();
        let shared = s1.intersect(&s2);
        let sigma_k = random_superset(&mut rng, &union, &shared);
        let g1 = random_generator(&mut rng, &s1, 6);
        let g2 = random_generator(&mut rng, &s2, 6);

        let composed = sync_product(&g1, &g2).unwrap();
        let lhs = project_onto(
            &composed,
            sigma_k.names().iter().map(|s| s.as_str()),
            &limits(),
        )
        .unwrap();
        let p1 = project_onto(
            &g1,
            s1.intersect(&sigma_k).names().iter().map(|s| s.as_str()),
            &limits(),
        )
        .unwrap();
        let p2 = project_onto(
            &g2,
            s2.intersect(&sigma_k).names().iter().map(|s| s.as_str()),
            &limits(),
        )
        .unwrap();
        let rhs = sync_product(&p1, &p2).unwrap();
        assert!(
            language_equality(&lhs, &rhs, Mode::Marked).holds,
            "projection must distribute when the shared events are projected events"
        );
    }
    println!("ACCEPTANCE 8a PASS: projection distributes over composition ({CASES} cases)");
}

#[test]
fn criterion_8b_decomposable_closure_implies_nonconflict() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8b);
    let mut accepted = 0;
    let mut draws = 0;
    while accepted < CASES {
        draws += 1;
        assert!(draws < DRAW_BUDGET, "sampler starved");
        let pool = pool_events(&mut rng, 4, 0.0);
        let (s1, s2) = random_alphabet_pair(&mut rng, &pool);
        let union = s1.union(&s2).unwrap();
        let shared = s1.intersect(&s2);
        let sigma_k = random_superset(&mut rng, &union, &shared);
        let k = random_generator(&mut rng, &union, 6);
        let alphabets = [s1.clone(), s2.clone()];
        let closed_cd =
            is_conditionally_decomposable(&k, &alphabets, &sigma_k, Mode::Closed, &limits())
                .unwrap();
        if !closed_cd.holds {
            continue;
        }
        accepted += 1;

        let t1 = descoord_core::observer::union_target(&union, &s1, &sigma_k);
        let t2 = descoord_core::observer::union_target(&union, &s2, &sigma_k);
        let p1 = project_onto(&k, t1.names().iter().map(|s| s.as_str()), &limits()).unwrap();
        let p2 = project_onto(&k, t2.names().iter().map(|s| s.as_str()), &limits()).unwrap();
        let lhs = sync_product(&p1, &p2).unwrap().prefix_closure();
        let rhs = sync_product(&p1.prefix_closure(), &p2.prefix_closure()).unwrap();
        assert!(
            language_equality(&lhs, &rhs, Mode::Marked).holds,
            "projections of a closure-decomposable language are synchronously nonconflicting"
        );
    }
    println!("ACCEPTANCE 8b PASS: nonconflict of projections ({CASES} hypothesis-passing cases)");
}

#[test]
fn criterion_8c_conditional_controllability_implies_monolithic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8c);
    let mut accepted = 0;
    let mut draws = 0;
    while accepted < CASES {
        draws += 1;
        assert!(draws < DRAW_BUDGET, "sampler starved");
        let pool = pool_events(&mut rng, 4, 0.35);
        let (s1, s2) = random_alphabet_pair(&mut rng, &pool);
        let union = s1.union(&s2).unwrap();
        let shared = s1.intersect(&s2);
        let sigma_k = random_superset(&mut rng, &union, &shared);
        let g1 = random_generator(&mut rng, &s1, 4);
        let g2 = random_generator(&mut rng, &s2, 4);
        let Ok(gk) = build_coordinator(&[&g1, &g2], &sigma_k, &limits()) else {
            continue;
        };
        let whole = sync_product_all(&[&g1, &g2, &gk]).unwrap();
        let raw = random_generator(&mut rng, &union, 4);
        let k = sync_product(&raw, &whole).unwrap().trim();

        let alphabets = [s1.clone(), s2.clone()];
        let closed_cd =
            is_conditionally_decomposable(&k, &alphabets, &sigma_k, Mode::Closed, &limits())
                .unwrap();
        if !closed_cd.holds {
            continue;
        }
        let unctrl = union.uncontrollable_subset();
        let cc = is_conditionally_controllable(&k, &[&g1, &g2], &gk, &unctrl, &limits()).unwrap();
        if !cc.holds {
            continue;
        }
        accepted += 1;
        let monolithic = is_controllable(&k, &whole, &unctrl, &limits()).unwrap();
        assert!(
            monolithic.controllable,
            "conditionally controllable languages are controllable"
        );
    }
    println!("ACCEPTANCE 8c PASS: conditional controllability implies monolithic controllability ({CASES} hypothesis-passing cases)");
}

#[test]
fn criterion_8d_observer_and_lcc_lift_controllability() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8d);
    let mut accepted = 0;
    let mut draws = 0;
    while accepted < CASES {
        draws += 1;
        assert!(draws < DRAW_BUDGET, "sampler starved");
        let pool = pool_events(&mut rng, 4, 0.3);
        let (s1, s2) = random_alphabet_pair(&mut rng, &pool);
        let union = s1.union(&s2).unwrap();
        let shared = s1.intersect(&s2);
        let sigma_k = random_superset(&mut rng, &union, &shared);
        let g1 = random_generator(&mut rng, &s1, 4);
        let g2 = random_generator(&mut rng, &s2, 4);
        let Ok(gk) = build_coordinator(&[&g1, &g2], &sigma_k, &limits()) else {
            continue;
        };
        let whole = sync_product_all(&[&g1, &g2, &gk]).unwrap().closed_view();
        if whole.is_empty_generator() {
            continue;
        }
        let suite = verify_projection_suite(&[&g1, &g2], &sigma_k, None, &limits()).unwrap();
        if !suite.global.iter().all(|h| h.holds()) {
            continue;
        }
        // A prefix-closed controllable sublanguage of L.
        let raw = random_generator(&mut rng, &union, 4).closed_view();
        let base = sync_product(&raw, &whole).unwrap();
        let unctrl = union.uncontrollable_subset();
        let k = sup_c(&base, &whole, &unctrl, &limits()).unwrap();
        accepted += 1;
        let cc = is_conditionally_controllable(&k, &[&g1, &g2], &gk, &unctrl, &limits()).unwrap();
        assert!(
            cc.holds,
            "controllable + observer + LCC must give conditional controllability"
        );
    }
    println!("ACCEPTANCE 8d PASS: observer + LCC lift controllability to conditional controllability ({CASES} hypothesis-passing cases)");
}

#[test]
fn criterion_8e_coordinator_projection_inclusion_always_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8e);
    for _ in 0..CASES {
        let pool = pool_events(&mut rng, 4, 0.3);
        let (s1, s2) = random_alphabet_pair(&mut rng, &pool);
        let union = s1.union(&s2).unwrap();
        let shared = s1.intersect(&s2);
        let sigma_seed = random_superset(&mut rng, &union, &shared);
        let g1 = random_generator(&mut rng, &s1, 5);
        let g2 = random_generator(&mut rng, &s2, 5);
        let spec = random_generator(&mut rng, &union, 5);
        let alphabets = [s1.clone(), s2.clone()];
        let sigma_k = extend_for_cd(&spec, &alphabets, &sigma_seed, true, &limits()).unwrap();
        let problem =
            CoordinationProblem::new(vec![g1, g2], spec, sigma_k).expect("valid random problem");
        let star = synthesize_star(&problem, &limits()).unwrap();
        for v in &star.projection_inclusions {
            assert!(
                v.holds,
                "P_k(supC_{{i+k}}) must always stay inside supC_k"
            );
        }
    }
    println!("ACCEPTANCE 8e PASS: P_k of each local supervisor stays inside the coordinator supervisor ({CASES} cases)");
}

#[test]
fn criterion_8f_nonconflict_equivalence_under_observers() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8f);
    let mut accepted = 0;
    let mut draws = 0;
    while accepted < CASES {
        draws += 1;
        assert!(draws < DRAW_BUDGET, "sampler starved");
        let pool = pool_events(&mut rng, 4, 0.0);
        let (s1, s2) = random_alphabet_pair(&mut rng, &pool);
        let union = s1.union(&s2).unwrap();
        let shared = s1.intersect(&s2);
        let sigma_0 = random_superset(&mut rng, &union, &shared);
        let g1 = random_generator(&mut rng, &s1, 5);
        let g2 = random_generator(&mut rng, &s2, 5);

        let t1 = s1.intersect(&sigma_0);
        let t2 = s2.intersect(&sigma_0);
        let obs1 = is_observer(
            &g1,
            &ProjectionSpec::new(s1.clone(), &t1).unwrap(),
            &limits(),
        )
        .unwrap();
        let obs2 = is_observer(
            &g2,
            &ProjectionSpec::new(s2.clone(), &t2).unwrap(),
            &limits(),
        )
        .unwrap();
        if !(obs1.holds && obs2.holds) {
            continue;
        }
        accepted += 1;

        let lhs_l = sync_product(&g1, &g2).unwrap().prefix_closure();
        let lhs_r = sync_product(&g1.prefix_closure(), &g2.prefix_closure()).unwrap();
        let full_nonconflict = language_equality(&lhs_l, &lhs_r, Mode::Marked).holds;

        let p1 = project_onto(&g1, t1.names().iter().map(|s| s.as_str()), &limits()).unwrap();
        let p2 = project_onto(&g2, t2.names().iter().map(|s| s.as_str()), &limits()).unwrap();
        let rhs_l = sync_product(&p1, &p2).unwrap().prefix_closure();
        let rhs_r = sync_product(&p1.prefix_closure(), &p2.prefix_closure()).unwrap();
        let projected_nonconflict = language_equality(&rhs_l, &rhs_r, Mode::Marked).holds;

        assert_eq!(
            full_nonconflict, projected_nonconflict,
            "nonconflict must agree between the full and projected compositions"
        );
    }
    println!("ACCEPTANCE 8f PASS: nonconflict equivalence in both directions ({CASES} hypothesis-passing cases)");
}

fn brute_force_supc(
    spec_words: &BTreeSet<Word>,
    plant: &Generator,
    uncontrollable: &EventSet,
) -> BTreeSet<Word> {
    let mut kept = spec_words.clone();
    loop {
        let mut closure: BTreeSet<Word> = BTreeSet::new();
        for w in &kept {
            for i in 0..=w.len() {
                closure.insert(Word(w.0[..i].to_vec()));
            }
        }
        let mut bad: Vec<Word> = Vec::new();
        for s in &closure {
            for u in uncontrollable.iter() {
                let mut su = s.clone();
                su.push(u.name.clone());
                if plant.generates(&su) && !closure.contains(&su) {
                    bad.push(s.clone());
                    break;
                }
            }
        }
        if bad.is_empty() {
            return kept;
        }
        kept.retain(|w| !bad.iter().any(|b| w.starts_with(b)));
        if kept.is_empty() {
            return kept;
        }
    }
}

#[test]
fn criterion_8g_supremal_controllable_sublanguage_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x86);
    for _ in 0..CASES {
        let pool = pool_events(&mut rng, 3, 0.4);
        let plant = random_generator(&mut rng, &pool, 6).closed_view();
        if plant.is_empty_generator() {
            continue;
        }
        let dag = random_acyclic_generator(&mut rng, &pool, 6);
        let spec = sync_product(&dag, &plant).unwrap();
        let unctrl = pool.uncontrollable_subset();

        let expected = brute_force_supc(
            &enumerate_words(&spec, 6, &limits()).unwrap().marked,
            &plant,
            &unctrl,
        );
        let result = sup_c(&spec, &plant, &unctrl, &limits()).unwrap();
        let got = enumerate_words(&result, 6, &limits()).unwrap().marked;
        assert_eq!(got, expected, "fixpoint and brute force must agree");
    }
    println!("ACCEPTANCE 8g PASS: supC agrees with the word-level brute force ({CASES} cases)");
}

fn brute_force_min_cover(ground: &[String], sets: &[Vec<String>]) -> usize {
    use itertools::Itertools;
    for r in 0..=sets.len() {
        for combo in (0..sets.len()).combinations(r) {
            let covered: BTreeSet<&String> = combo
                .iter()
                .flat_map(|&i| sets[i].iter())
                .collect();
            if ground.iter().all(|g| covered.contains(g)) {
                return r;
            }
        }
    }
    unreachable!("the full collection always covers")
}

#[test]
fn criterion_8h_reduction_preserves_minimal_cardinality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x84);
    for _ in 0..CASES {
        let n = rng.random_range(1..=5usize);
        let m = rng.random_range(1..=4usize);
        let ground: Vec<String> = (1..=n).map(|i| format!("b{i}")).collect();
        let mut sets: Vec<Vec<String>> = (0..m)
            .map(|_| {
                ground
                    .iter()
                    .filter(|_| rng.random_bool(0.5))
                    .cloned()
                    .collect()
            })
            .collect();
        // Patch up coverage so the instance is well-formed.
        for g in &ground {
            if !sets.iter().any(|s| s.contains(g)) {
                let idx = rng.random_range(0..m);
                sets[idx].push(g.clone());
            }
        }
        let mut collection = indexmap::IndexMap::new();
        for (i, s) in sets.iter().enumerate() {
            collection.insert(format!("c{}", i + 1), s.clone());
        }
        let instance = SetCoverInstance::from_def(descoord_core::json::SetCoverDef {
            ground: ground.clone(),
            collection,
            budget: None,
        })
        .unwrap();

        let expected = brute_force_min_cover(&ground, &sets);
        let (k, alphabets) = setcover_to_cd(&instance).unwrap();
        let exact = exact_min_extension(&k, &alphabets, &limits()).unwrap();
        assert_eq!(
            exact.cardinality, expected,
            "minimal extension cardinality must match the minimal cover"
        );
    }
    println!("ACCEPTANCE 8h PASS: reduction preserves minimal cardinality ({CASES} cases)");
}

#[test]
fn trivial_disjoint_problem_solves_cleanly() {
    let problem = load_problem("trivial/problem.json");
    let report = solve(&problem, &limits()).unwrap();
    assert!(report.cd.holds);
    assert!(report.star.inclusion_holds());
    // The local supervisors are exactly the projections of K.
    for (i, local) in report.star.sup_locals.iter().enumerate() {
        let expected = project_onto(
            &problem.spec,
            problem.plants[i]
                .alphabet()
                .names()
                .iter()
                .map(|s| s.as_str()),
            &limits(),
        )
        .unwrap();
        assert!(language_equality(local, &expected, Mode::Marked).holds);
    }
    assert!(
        language_equality(&report.composed_locals, &problem.spec, Mode::Marked).holds,
        "the composed supervisors achieve K"
    );
    let gk = &report.star.coordinator;
    assert!(conditionally_independent(&[&problem.plants[0], &problem.plants[1]], gk).holds);
}
