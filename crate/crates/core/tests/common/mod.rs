//! Shared helpers for the integration and acceptance suites: fixture
//! loading and seeded random generator sampling.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::prelude::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use descoord_core::coordination::CoordinationProblem;
use descoord_core::json;
use descoord_core::{Event, EventSet, Generator, Limits, Word};

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

pub fn load_gen(rel: &str) -> Generator {
    json::load_generator_file(fixture_path(rel)).expect("fixture generator loads")
}

pub fn load_problem(rel: &str) -> CoordinationProblem {
    json::load_problem_file(fixture_path(rel))
        .expect("fixture problem loads")
        .problem
}

pub fn limits() -> Limits {
    Limits::default()
}

pub fn word(names: &[&str]) -> Word {
    Word::from_names(names.iter().copied())
}

/// Generator accepting exactly the given finite words (trie shape).
pub fn words_gen(events: &EventSet, words: &[&[&str]], mark_all: bool) -> Generator {
    let mut b = Generator::builder("w", events.clone());
    let root = b.add_state("r", mark_all || words.iter().any(|w| w.is_empty()));
    b.set_initial(root);
    for w in words {
        let mut prev = root;
        let mut path = String::from("r");
        for (i, ev) in w.iter().enumerate() {
            path.push('.');
            path.push_str(ev);
            let idx = b.add_state(path.clone(), mark_all || i + 1 == w.len());
            b.add_transition_idx(prev, ev, idx).unwrap();
            prev = idx;
        }
    }
    b.build()
}

pub fn events(names: &[(&str, bool)]) -> EventSet {
    EventSet::from_events(names.iter().map(|(n, c)| Event::new(*n, *c))).unwrap()
}

pub fn ctrl_events(names: &[&str]) -> EventSet {
    EventSet::controllable_from_names(names.iter().copied()).unwrap()
}

/// The one-state generator marking only the empty word.
pub fn epsilon_gen(alphabet: &EventSet) -> Generator {
    let mut b = Generator::builder("eps", alphabet.clone());
    let s = b.add_state("0", true);
    b.set_initial(s);
    b.build()
}

/// Random partial deterministic generator over the given alphabet.
pub fn random_generator(rng: &mut ChaCha8Rng, alphabet: &EventSet, max_states: usize) -> Generator {
    let n = rng.random_range(1..=max_states);
    let mut b = Generator::builder("rand", alphabet.clone());
    for i in 0..n {
        let marked = rng.random_bool(0.5);
        b.add_state(format!("q{i}"), marked);
    }
    b.set_initial(0);
    let names: Vec<String> = alphabet.names();
    for s in 0..n {
        for name in &names {
            if rng.random_bool(0.45) {
                let d = rng.random_range(0..n);
                b.add_transition_idx(s, name, d).unwrap();
            }
        }
    }
    b.build()
}

/// Random acyclic generator: transitions only go to later states, so the
/// marked language is finite with word length below `max_states`.
pub fn random_acyclic_generator(
    rng: &mut ChaCha8Rng,
    alphabet: &EventSet,
    max_states: usize,
) -> Generator {
    let n = rng.random_range(1..=max_states);
    let mut b = Generator::builder("dag", alphabet.clone());
    for i in 0..n {
        let marked = rng.random_bool(0.5);
        b.add_state(format!("q{i}"), marked);
    }
    b.set_initial(0);
    let names: Vec<String> = alphabet.names();
    for s in 0..n.saturating_sub(1) {
        for name in &names {
            if rng.random_bool(0.5) {
                let d = rng.random_range(s + 1..n);
                b.add_transition_idx(s, name, d).unwrap();
            }
        }
    }
    b.build()
}

/// Random subalphabet containing at least `required` and at least one event.
pub fn random_superset(rng: &mut ChaCha8Rng, pool: &EventSet, required: &EventSet) -> EventSet {
    let mut out = EventSet::new();
    for e in pool.iter() {
        if required.contains(&e.name) || rng.random_bool(0.4) {
            out.insert(e.clone()).unwrap();
        }
    }
    if out.is_empty() {
        let choice = pool
            .iter()
            .collect::<Vec<_>>()
            .choose(rng)
            .map(|e| (*e).clone())
            .expect("pool is nonempty");
        out.insert(choice).unwrap();
    }
    out
}

/// Splits a pool of event names into two overlapping alphabets with the
/// given flags, guaranteeing both are nonempty.
pub fn random_alphabet_pair(rng: &mut ChaCha8Rng, pool: &EventSet) -> (EventSet, EventSet) {
    loop {
        let mut a = EventSet::new();
        let mut b = EventSet::new();
        for e in pool.iter() {
            match rng.random_range(0..4) {
                0 => a.insert(e.clone()).map(|_| ()).unwrap(),
                1 => b.insert(e.clone()).map(|_| ()).unwrap(),
                2 => {
                    a.insert(e.clone()).unwrap();
                    b.insert(e.clone()).unwrap();
                }
                _ => {}
            }
        }
        if !a.is_empty() && !b.is_empty() {
            return (a, b);
        }
    }
}
