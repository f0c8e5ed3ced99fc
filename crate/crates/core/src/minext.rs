//! The minimal coordinator-alphabet extension problem: exact solver by
//! cardinality-ordered exhaustive search, a greedy heuristic, and the
//! set-cover instance generator used for tests and benchmarks. Finding the
//! minimal extension is NP-hard, so the exact search is gated behind a
//! candidate-pool limit.

use itertools::Itertools;
use serde::Serialize;

use crate::compare::Mode;
use crate::coordination::{extend_for_cd, is_conditionally_decomposable, shared_events};
use crate::error::{Error, Result};
use crate::event::{valid_event_name, Event, EventSet};
use crate::generator::Generator;
use crate::json::SetCoverDef;
use crate::limits::Limits;

/// A MINIMUM SET COVER instance: ground elements, a named collection of
/// subsets (insertion-ordered), and an optional cardinality budget.
#[derive(Debug, Clone)]
pub struct SetCoverInstance {
    pub ground: Vec<String>,
    pub collection: Vec<(String, Vec<String>)>,
    pub budget: Option<usize>,
}

impl SetCoverInstance {
    pub fn from_def(def: SetCoverDef) -> Result<Self> {
        let instance = SetCoverInstance {
            ground: def.ground,
            collection: def.collection.into_iter().collect(),
            budget: def.budget,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ground.is_empty() {
            return Err(Error::InvalidInstance("empty ground set".into()));
        }
        let mut names = std::collections::HashSet::new();
        for n in self.ground.iter().chain(self.collection.iter().map(|(n, _)| n)) {
            if !valid_event_name(n) {
                return Err(Error::InvalidInstance(format!("invalid name `{n}`")));
            }
            if !names.insert(n.clone()) {
                return Err(Error::InvalidInstance(format!("duplicate name `{n}`")));
            }
        }
        // The construction mints the selector events a, a1, a2, ...
        let mut minted = vec!["a".to_string()];
        for i in 1..=self.ground.len() {
            minted.push(format!("a{i}"));
        }
        for m in &minted {
            if names.contains(m) {
                return Err(Error::InvalidInstance(format!(
                    "name `{m}` collides with a generated selector event"
                )));
            }
        }
        for (cname, members) in &self.collection {
            for m in members {
                if !self.ground.contains(m) {
                    return Err(Error::InvalidInstance(format!(
                        "collection member `{cname}` contains `{m}`, which is not a ground element"
                    )));
                }
            }
        }
        for b in &self.ground {
            if !self.collection.iter().any(|(_, members)| members.contains(b)) {
                return Err(Error::InvalidInstance(format!(
                    "ground element `{b}` is covered by no collection member"
                )));
            }
        }
        Ok(())
    }
}

/// A coordinator-alphabet extension together with its search provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionResult {
    /// Events added on top of the shared events Σs.
    pub extension: Vec<String>,
    pub cardinality: usize,
    /// True when exhaustive search proved no smaller extension works.
    pub certified_minimal: bool,
    /// Search effort: candidate subsets checked by the exact solver,
    /// events adopted by the greedy one.
    pub nodes_explored: usize,
}

/// Exhaustive minimal extension: enumerate candidate subsets of
/// (∪Σi) \ Σs by ascending cardinality, lexicographic within one
/// cardinality, and check conditional decomposability for each. Every
/// candidate of the winning cardinality is checked; no monotonicity
/// assumption is used for pruning.
pub fn exact_min_extension(
    k: &Generator,
    alphabets: &[EventSet],
    limits: &Limits,
) -> Result<ExtensionResult> {
    exact_min_extension_threads(k, alphabets, limits, 1)
}

/// Same search with candidate checks fanned out over `threads` workers.
/// The winner is the lexicographic minimum among all passing candidates of
/// the minimal cardinality, independent of scheduling.
pub fn exact_min_extension_threads(
    k: &Generator,
    alphabets: &[EventSet],
    limits: &Limits,
    threads: usize,
) -> Result<ExtensionResult> {
    let sigma_s = shared_events(alphabets);
    let mut union = alphabets
        .first()
        .cloned()
        .ok_or_else(|| Error::InvalidProblem("no alphabets given".into()))?;
    for a in &alphabets[1..] {
        union = union.union(a)?;
    }
    let pool: Vec<Event> = union
        .iter()
        .filter(|e| !sigma_s.contains(&e.name))
        .cloned()
        .collect();
    if pool.len() > limits.max_pool {
        return Err(Error::PoolTooLarge {
            pool: pool.len(),
            limit: limits.max_pool,
        });
    }

    let mut nodes = 0usize;
    for r in 0..=pool.len() {
        limits.check_cancelled()?;
        let candidates: Vec<Vec<usize>> = (0..pool.len()).combinations(r).collect();
        let outcomes = check_candidates(k, alphabets, &sigma_s, &pool, &candidates, limits, threads)?;
        nodes += candidates.len();
        if let Some(pos) = outcomes.iter().position(|&ok| ok) {
            let extension: Vec<String> = candidates[pos]
                .iter()
                .map(|&i| pool[i].name.clone())
                .collect();
            return Ok(ExtensionResult {
                cardinality: extension.len(),
                extension,
                certified_minimal: true,
                nodes_explored: nodes,
            });
        }
    }
    unreachable!("the full candidate pool always yields a decomposable alphabet")
}

fn check_candidates(
    k: &Generator,
    alphabets: &[EventSet],
    sigma_s: &EventSet,
    pool: &[Event],
    candidates: &[Vec<usize>],
    limits: &Limits,
    threads: usize,
) -> Result<Vec<bool>> {
    let check_one = |candidate: &Vec<usize>| -> Result<bool> {
        let mut sigma = sigma_s.clone();
        for &i in candidate {
            sigma.insert(pool[i].clone())?;
        }
        Ok(is_conditionally_decomposable(k, alphabets, &sigma, Mode::Marked, limits)?.holds)
    };

    if threads <= 1 || candidates.len() < 2 {
        return candidates.iter().map(check_one).collect();
    }

    let workers = threads.min(candidates.len());
    let chunk = candidates.len().div_ceil(workers);
    let results: Vec<Result<Vec<bool>>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for part in candidates.chunks(chunk) {
            handles.push(scope.spawn(move || part.iter().map(check_one).collect::<Result<Vec<bool>>>()));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("candidate worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(candidates.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Greedy extension starting from the shared events; fast, deterministic,
/// and not certified minimal.
pub fn greedy_min_extension(
    k: &Generator,
    alphabets: &[EventSet],
    limits: &Limits,
) -> Result<ExtensionResult> {
    let sigma_s = shared_events(alphabets);
    let extended = extend_for_cd(k, alphabets, &sigma_s, false, limits)?;
    let extension = extended.minus(&sigma_s);
    Ok(ExtensionResult {
        cardinality: extension.len(),
        extension: extension.names(),
        certified_minimal: false,
        nodes_explored: extension.len(),
    })
}

/// Builds the decomposability instance of a set-cover instance: for each
/// ground element b_i (with covering sets c_{i1} < c_{i2} < … in
/// collection order) the language gets the words a_i a b_i and
/// a_i c_{i1} … c_{i_m} a. The component alphabets are
/// Σ1 = S ∪ {a} ∪ {a_i} and Σ2 = C ∪ {a} ∪ {a_i}, so the shared events are
/// exactly {a} ∪ {a_i}.
pub fn setcover_to_cd(instance: &SetCoverInstance) -> Result<(Generator, Vec<EventSet>)> {
    instance.validate()?;
    let n = instance.ground.len();
    let selectors: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();

    let mut sigma1 = EventSet::new();
    for b in &instance.ground {
        sigma1.insert(Event::controllable(b.clone()))?;
    }
    sigma1.insert(Event::controllable("a"))?;
    for s in &selectors {
        sigma1.insert(Event::controllable(s.clone()))?;
    }
    let mut sigma2 = EventSet::new();
    for (c, _) in &instance.collection {
        sigma2.insert(Event::controllable(c.clone()))?;
    }
    sigma2.insert(Event::controllable("a"))?;
    for s in &selectors {
        sigma2.insert(Event::controllable(s.clone()))?;
    }
    let alphabet = sigma1.union(&sigma2)?;

    let mut b = Generator::builder("K", alphabet);
    let q0 = b.add_state("q0", false);
    b.set_initial(q0);
    let mut chain_count = 0usize;
    for (i, ground) in instance.ground.iter().enumerate() {
        let qi = b.add_state(format!("q{}", i + 1), false);
        b.add_transition_idx(q0, &selectors[i], qi)?;
        let pi = b.add_state(format!("p{}", i + 1), false);
        b.add_transition_idx(qi, "a", pi)?;
        let fi = b.add_state(format!("f{}", i + 1), true);
        b.add_transition_idx(pi, ground, fi)?;
        // Covering sets in collection order.
        let covering: Vec<&String> = instance
            .collection
            .iter()
            .filter(|(_, members)| members.contains(ground))
            .map(|(name, _)| name)
            .collect();
        let mut prev = qi;
        for c in &covering {
            chain_count += 1;
            let s = b.add_state(format!("s{chain_count}"), false);
            b.add_transition_idx(prev, c, s)?;
            prev = s;
        }
        b.add_transition_idx(prev, "a", fi)?;
    }
    Ok((b.build(), vec![sigma1, sigma2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_words, Word};
    use indexmap::IndexMap;

    fn limits() -> Limits {
        Limits::default()
    }

    pub(crate) fn demo_instance() -> SetCoverInstance {
        let mut collection = IndexMap::new();
        collection.insert("c1".to_string(), vec!["b1".into(), "b2".into(), "b3".into()]);
        collection.insert("c2".to_string(), vec!["b2".into(), "b4".into()]);
        collection.insert("c3".to_string(), vec!["b3".into(), "b4".into()]);
        collection.insert("c4".to_string(), vec!["b4".into(), "b5".into()]);
        SetCoverInstance::from_def(SetCoverDef {
            ground: (1..=5).map(|i| format!("b{i}")).collect(),
            collection,
            budget: Some(2),
        })
        .unwrap()
    }

    #[test]
    fn smallest_instance_language() {
        let mut collection = IndexMap::new();
        collection.insert("c1".to_string(), vec!["b1".to_string()]);
        let inst = SetCoverInstance::from_def(SetCoverDef {
            ground: vec!["b1".into()],
            collection,
            budget: None,
        })
        .unwrap();
        let (k, alphabets) = setcover_to_cd(&inst).unwrap();
        let words = enumerate_words(&k, 5, &limits()).unwrap();
        let expected: std::collections::BTreeSet<Word> = [
            Word::from_names(["a1", "a", "b1"]),
            Word::from_names(["a1", "c1", "a"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(words.marked, expected);
        assert_eq!(alphabets[0].names(), vec!["b1", "a", "a1"]);
        assert_eq!(alphabets[1].names(), vec!["c1", "a", "a1"]);
    }

    #[test]
    fn demo_instance_language_has_ten_words() {
        let (k, _) = setcover_to_cd(&demo_instance()).unwrap();
        let words = enumerate_words(&k, 6, &limits()).unwrap();
        assert_eq!(words.marked.len(), 10);
        assert!(words.contains_marked(&["a4", "c2", "c3", "c4", "a"]));
        assert!(words.contains_marked(&["a5", "a", "b5"]));
    }

    #[test]
    fn uncovered_element_is_rejected() {
        let mut collection = IndexMap::new();
        collection.insert("c1".to_string(), vec!["b1".to_string()]);
        let err = SetCoverInstance::from_def(SetCoverDef {
            ground: vec!["b1".into(), "b2".into()],
            collection,
            budget: None,
        })
        .unwrap_err();
        assert!(matches!(err, Error::InvalidInstance(_)));
    }

    #[test]
    fn already_decomposable_needs_no_extension() {
        // Two words over disjoint-but-for-nothing alphabets; with Σs = {}
        // and independent components the language decomposes as is.
        let mut collection = IndexMap::new();
        collection.insert("c1".to_string(), vec!["b1".to_string()]);
        let inst = SetCoverInstance::from_def(SetCoverDef {
            ground: vec!["b1".into()],
            collection,
            budget: None,
        })
        .unwrap();
        let (k, alphabets) = setcover_to_cd(&inst).unwrap();
        // Σs ∪ {b1, c1} = the full union: trivially decomposable, so the
        // exact search certifies some minimal extension below that.
        let exact = exact_min_extension(&k, &alphabets, &limits()).unwrap();
        assert!(exact.certified_minimal);
        let greedy = greedy_min_extension(&k, &alphabets, &limits()).unwrap();
        assert!(greedy.cardinality >= exact.cardinality);
    }

    #[test]
    fn pool_limit_is_enforced() {
        let (k, alphabets) = setcover_to_cd(&demo_instance()).unwrap();
        let tight = Limits {
            max_pool: 3,
            ..Limits::default()
        };
        let err = exact_min_extension(&k, &alphabets, &tight).unwrap_err();
        assert!(matches!(err, Error::PoolTooLarge { pool: 9, limit: 3 }));
    }

    #[test]
    fn threaded_search_matches_sequential() {
        let (k, alphabets) = setcover_to_cd(&demo_instance()).unwrap();
        let seq = exact_min_extension(&k, &alphabets, &limits()).unwrap();
        let par = exact_min_extension_threads(&k, &alphabets, &limits(), 4).unwrap();
        assert_eq!(seq, par);
    }
}
