//! Structural conditions on natural projections: the observer property and
//! local control consistency (LCC), with witnesses, plus an event-set
//! extension procedure for the observer property.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::compare::{language_inclusion, InclusionVerdict, Mode};
use crate::error::Result;
use crate::event::{EventSet, ProjectionSpec};
use crate::generator::Generator;
use crate::limits::Limits;
use crate::ops::{inverse_project, project_subsets, sync_product_all};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObserverWitness {
    /// A word in the closure of the language...
    pub word: Word,
    /// ...and a projected continuation no concrete continuation realizes.
    pub projected: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObserverVerdict {
    pub holds: bool,
    pub witness: Option<ObserverWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LccWitness {
    pub word: Word,
    /// The observable uncontrollable event that needs a bypass.
    pub event: String,
    /// An existing bypass that uses controllable hidden events; no
    /// uncontrollable-only bypass exists.
    pub bypass: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LccVerdict {
    pub holds: bool,
    pub witness: Option<LccWitness>,
}

// Reachable pairs (generator state, projected state) with the shortest
// lexicographic word reaching each, in BFS discovery order.
fn sync_pairs(
    g: &Generator,
    h: &Generator,
    target: &EventSet,
    limits: &Limits,
) -> Result<Vec<(usize, usize, Word)>> {
    let mut out = Vec::new();
    let (Some(gi), Some(hi)) = (g.initial(), h.initial()) else {
        return Ok(out);
    };
    let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
    let mut queue: VecDeque<(usize, usize, Word)> = VecDeque::from([(gi, hi, Word::empty())]);
    seen.insert((gi, hi), ());
    while let Some((q, m, word)) = queue.pop_front() {
        limits.check_cancelled()?;
        out.push((q, m, word.clone()));
        for (e, qd) in g.enabled(q) {
            let name = g.alphabet().name(e);
            let md = match target.position(name) {
                None => m,
                Some(_) => {
                    let he = h
                        .alphabet()
                        .position(name)
                        .expect("projected alphabet is the target");
                    h.step(m, he)
                        .expect("projection simulates every visible move")
                }
            };
            if seen.contains_key(&(qd, md)) {
                continue;
            }
            seen.insert((qd, md), ());
            let mut next = word.clone();
            next.push(name);
            queue.push_back((qd, md, next));
        }
    }
    Ok(out)
}

/// Decides whether the projection is an Lm(g)-observer.
///
/// After trimming, every reachable (state, projected-state) pair must
/// satisfy: all marked continuations of the projected state are projected
/// images of marked continuations of the concrete state. Each pair check
/// is a language inclusion between the projected state's future and the
/// projection of the concrete state's future.
pub fn is_observer(g: &Generator, p: &ProjectionSpec, limits: &Limits) -> Result<ObserverVerdict> {
    let t = g.trim();
    if t.is_empty_generator() {
        return Ok(ObserverVerdict {
            holds: true,
            witness: None,
        });
    }
    let target = t
        .alphabet()
        .restrict_to(p.target().names().iter().map(|s| s.as_str()))?;
    let (h, _subsets) = project_subsets(&t, &target, limits)?;

    let mut projected_futures: HashMap<usize, Generator> = HashMap::new();
    for (q, m, word) in sync_pairs(&t, &h, &target, limits)? {
        limits.check_cancelled()?;
        let future = projected_futures.entry(q).or_insert_with(|| {
            project_subsets(&t.with_initial(q), &target, limits)
                .expect("projection of a re-rooted trim generator")
                .0
        });
        let v = language_inclusion(&h.with_initial(m), future, Mode::Marked);
        if let Some(cex) = v.counterexample {
            let mut projected = crate::words::erase(&word, &target);
            projected.0.extend(cex.0);
            return Ok(ObserverVerdict {
                holds: false,
                witness: Some(ObserverWitness {
                    word,
                    projected,
                }),
            });
        }
    }
    Ok(ObserverVerdict {
        holds: true,
        witness: None,
    })
}

/// Grows the target alphabet until the projection is an Lm(g)-observer.
///
/// Each failing check contributes the alphabet-minimal hidden event of its
/// witness word; the target grows monotonically, so the loop terminates
/// (with the full source alphabet in the worst case). Minimality of the
/// extension is not promised.
pub fn extend_to_observer(
    g: &Generator,
    p: &ProjectionSpec,
    limits: &Limits,
) -> Result<EventSet> {
    let mut target = g
        .alphabet()
        .restrict_to(p.target().names().iter().map(|s| s.as_str()))?;
    loop {
        let spec = ProjectionSpec::new(g.alphabet().clone(), &target)?;
        let verdict = is_observer(g, &spec, limits)?;
        let Some(witness) = verdict.witness else {
            // Canonical order: the source alphabet's.
            return Ok(g.alphabet().intersect(&target));
        };
        let added = pick_extension_event(g, &target, &witness);
        match added {
            Some(name) => {
                let ev = g
                    .alphabet()
                    .by_name(&name)
                    .expect("candidate comes from the alphabet")
                    .clone();
                target.insert(ev)?;
            }
            None => {
                // Nothing identifiable to add; fall back to the full source.
                return Ok(g.alphabet().clone());
            }
        }
    }
}

fn pick_extension_event(g: &Generator, target: &EventSet, witness: &ObserverWitness) -> Option<String> {
    // Alphabet-minimal hidden event of the witness word.
    let mut best: Option<usize> = None;
    for name in &witness.word.0 {
        if !target.contains(name) {
            let idx = g.alphabet().position(name)?;
            best = Some(best.map_or(idx, |b| b.min(idx)));
        }
    }
    if best.is_none() {
        // The witness word is fully visible; the confusion comes from a
        // sibling path with the same projection. Any reachable hidden
        // event is a sound, deterministic choice.
        let reachable = g.trim().reachable_events();
        for (idx, e) in g.alphabet().iter().enumerate() {
            if !target.contains(&e.name) && reachable.contains(&e.name) {
                best = Some(idx);
                break;
            }
        }
    }
    best.map(|i| g.alphabet().name(i).to_string())
}

/// Decides local control consistency of the projection for L(g).
///
/// For every word s of L (represented by its reachable state pair) and
/// every observable uncontrollable event enabled after P(s): if some
/// hidden bypass enables it, an all-uncontrollable hidden bypass must too.
pub fn is_lcc(
    g: &Generator,
    p: &ProjectionSpec,
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<LccVerdict> {
    let cl = g.closed_view();
    if cl.is_empty_generator() {
        return Ok(LccVerdict {
            holds: true,
            witness: None,
        });
    }
    let target = cl
        .alphabet()
        .restrict_to(p.target().names().iter().map(|s| s.as_str()))?;
    let (h, _) = project_subsets(&cl, &target, limits)?;

    let observable_unctrl: Vec<usize> = cl
        .alphabet()
        .iter()
        .enumerate()
        .filter(|(_, e)| target.contains(&e.name) && uncontrollable.contains(&e.name))
        .map(|(i, _)| i)
        .collect();
    let hidden: Vec<bool> = cl
        .alphabet()
        .iter()
        .map(|e| !target.contains(&e.name))
        .collect();
    let hidden_unctrl: Vec<bool> = cl
        .alphabet()
        .iter()
        .enumerate()
        .map(|(i, e)| hidden[i] && uncontrollable.contains(&e.name))
        .collect();

    for (q, m, word) in sync_pairs(&cl, &h, &target, limits)? {
        limits.check_cancelled()?;
        for &sigma in &observable_unctrl {
            let name = cl.alphabet().name(sigma);
            let he = h.alphabet().position(name).expect("observable event");
            if h.step(m, he).is_none() {
                continue;
            }
            // Shortest hidden bypass enabling sigma, if any.
            let bypass = hidden_bypass(&cl, q, sigma, &hidden);
            let Some(bypass) = bypass else {
                continue;
            };
            let unctrl_ok = hidden_bypass(&cl, q, sigma, &hidden_unctrl).is_some();
            if !unctrl_ok {
                return Ok(LccVerdict {
                    holds: false,
                    witness: Some(LccWitness {
                        word,
                        event: name.to_string(),
                        bypass,
                    }),
                });
            }
        }
    }
    Ok(LccVerdict {
        holds: true,
        witness: None,
    })
}

// Shortest (lexicographic tie-break) word over the allowed hidden events
// leading from `q` to a state enabling `sigma`; None when unreachable.
fn hidden_bypass(g: &Generator, q: usize, sigma: usize, allowed: &[bool]) -> Option<Word> {
    let mut seen = vec![false; g.state_count()];
    let mut queue: VecDeque<(usize, Word)> = VecDeque::from([(q, Word::empty())]);
    seen[q] = true;
    while let Some((s, word)) = queue.pop_front() {
        if g.step(s, sigma).is_some() {
            return Some(word);
        }
        for (e, d) in g.enabled(s) {
            if allowed[e] && !seen[d] {
                seen[d] = true;
                let mut next = word.clone();
                next.push(g.alphabet().name(e));
                queue.push_back((d, next));
            }
        }
    }
    None
}

/// Observer and LCC results for one projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionHypotheses {
    pub label: String,
    pub observer: ObserverVerdict,
    pub lcc: LccVerdict,
}

impl ProjectionHypotheses {
    pub fn holds(&self) -> bool {
        self.observer.holds && self.lcc.holds
    }
}

/// The per-hypothesis evaluation used by the optimality analysis: observer
/// and LCC of the coordinator-aware projections both on the composed plant
/// and on the lifted local plants, plus the coordinator-language inclusion.
///
/// The checks on the composed plant build it monolithically; whether they
/// can be decided without the whole plant is open, so the report records
/// its size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionSuiteReport {
    /// State count of the composed plant the global checks were run on.
    pub plant_state_count: usize,
    /// Hypotheses for P_k and each P_{i+k}, evaluated on the composed
    /// plant's generated language.
    pub global: Vec<ProjectionHypotheses>,
    /// Hypotheses for P^{i+k}_k on the lifted local plant of each
    /// component.
    pub lifted: Vec<ProjectionHypotheses>,
    /// L(G_k) ⊆ P_k(L) for the product-of-projections coordinator.
    pub coordinator_in_projected_plant: InclusionVerdict,
}

impl ProjectionSuiteReport {
    pub fn observer_and_lcc_all_hold(&self) -> bool {
        self.global.iter().all(|h| h.holds()) && self.lifted.iter().all(|h| h.holds())
    }
}

/// Evaluates every observer/LCC hypothesis for the given plants and
/// coordinator alphabet. The uncontrollable set defaults to the flags when
/// `None`.
pub fn verify_projection_suite(
    plants: &[&Generator],
    sigma_k: &EventSet,
    uncontrollable: Option<&EventSet>,
    limits: &Limits,
) -> Result<ProjectionSuiteReport> {
    let plant = sync_product_all(plants)?;
    let full = plant.alphabet().clone();
    let unctrl = match uncontrollable {
        Some(u) => u.clone(),
        None => full.uncontrollable_subset(),
    };
    let plant_closed = plant.closed_view();

    let mut global = Vec::new();
    let sigma_k_in_full = full.intersect(sigma_k);
    let mut targets: Vec<(String, EventSet)> = vec![("P_k".to_string(), sigma_k_in_full.clone())];
    for (i, g) in plants.iter().enumerate() {
        let t = union_target(&full, g.alphabet(), sigma_k);
        targets.push((format!("P_{{{}+k}}", i + 1), t));
    }
    for (label, target) in &targets {
        let spec = ProjectionSpec::new(full.clone(), target)?;
        let observer = is_observer(&plant_closed, &spec, limits)?;
        let lcc = is_lcc(&plant, &spec, &unctrl, limits)?;
        global.push(ProjectionHypotheses {
            label: label.clone(),
            observer,
            lcc,
        });
    }

    let mut lifted = Vec::new();
    for (i, g) in plants.iter().enumerate() {
        let sigma_ik = union_target(&full, g.alphabet(), sigma_k);
        let lifted_plant = inverse_project(&g.closed_view(), &sigma_ik)?;
        let spec = ProjectionSpec::new(sigma_ik.clone(), &sigma_ik.intersect(&sigma_k_in_full))?;
        let observer = is_observer(&lifted_plant, &spec, limits)?;
        let lcc = is_lcc(&lifted_plant, &spec, &unctrl, limits)?;
        lifted.push(ProjectionHypotheses {
            label: format!("P^{{{i}+k}}_k on lifted plant {i}", i = i + 1),
            observer,
            lcc,
        });
    }

    let coordinator = crate::coordination::build_coordinator(plants, sigma_k, limits)?;
    let projected_plant =
        crate::ops::project_onto(&plant_closed, sigma_k_in_full.names().iter().map(|s| s.as_str()), limits)?;
    let coordinator_in_projected_plant =
        language_inclusion(&coordinator.closed_view(), &projected_plant, Mode::Marked);

    Ok(ProjectionSuiteReport {
        plant_state_count: plant.state_count(),
        global,
        lifted,
        coordinator_in_projected_plant,
    })
}

/// Σa ∪ Σb restricted to `full`, in full's order.
pub fn union_target(full: &EventSet, a: &EventSet, b: &EventSet) -> EventSet {
    let mut out = EventSet::new();
    for e in full.iter() {
        if a.contains(&e.name) || b.contains(&e.name) {
            out.insert(e.clone()).expect("full alphabet has no duplicates");
        }
    }
    out
}
