//! Classical monolithic supervisory control: controllability, supremal
//! controllable sublanguages, Lm-closedness, and closed-loop composition.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::compare::{language_equality, language_inclusion, Mode, Side};
use crate::error::{Error, Result};
use crate::event::EventSet;
use crate::generator::Generator;
use crate::limits::Limits;
use crate::ops::sync_product;
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ControllabilityWitness {
    /// A word in the closure of the specification...
    pub word: Word,
    /// ...followed by an uncontrollable event the plant enables but the
    /// specification closure does not.
    pub event: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ControllabilityVerdict {
    pub controllable: bool,
    /// Present iff not controllable; shortest word, lexicographic
    /// tie-break, then first offending event in alphabet order.
    pub witness: Option<ControllabilityWitness>,
}

impl ControllabilityVerdict {
    fn ok() -> Self {
        ControllabilityVerdict {
            controllable: true,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LmClosedVerdict {
    pub closed: bool,
    /// Shortest word in the symmetric difference of Lm(k) and
    /// closure(Lm(k)) ∩ Lm(g); present iff not closed.
    pub witness: Option<Word>,
}

// Synchronized walk of the specification closure against the plant; the
// shared substrate of the controllability check and the supC fixpoint.
struct SpecPlantProduct {
    // (spec state, plant state) pairs, reachable only.
    pairs: Vec<(usize, usize)>,
    // (pair, union event) -> pair
    transitions: HashMap<(usize, usize), usize>,
    union: EventSet,
    // per union event: position in the plant alphabet
    plant_events: Vec<Option<usize>>,
    marked: Vec<bool>,
}

impl SpecPlantProduct {
    fn build(spec: &Generator, plant: &Generator, limits: &Limits) -> Result<Option<Self>> {
        let union = spec.alphabet().union(plant.alphabet())?;
        let (Some(si), Some(pi)) = (spec.initial(), plant.initial()) else {
            return Ok(None);
        };
        let spec_events: Vec<Option<usize>> = union
            .iter()
            .map(|e| spec.alphabet().position(&e.name))
            .collect();
        let plant_events: Vec<Option<usize>> = union
            .iter()
            .map(|e| plant.alphabet().position(&e.name))
            .collect();

        let mut pairs = vec![(si, pi)];
        let mut index = HashMap::from([((si, pi), 0usize)]);
        let mut transitions = HashMap::new();
        let mut marked = vec![spec.is_marked(si) && plant.is_marked(pi)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            limits.check_cancelled()?;
            let (ss, ps) = pairs[p];
            for e in 0..union.len() {
                let sd = match spec_events[e] {
                    Some(se) => match spec.step(ss, se) {
                        Some(d) => d,
                        None => continue,
                    },
                    None => ss,
                };
                let pd = match plant_events[e] {
                    Some(pe) => match plant.step(ps, pe) {
                        Some(d) => d,
                        None => continue,
                    },
                    None => ps,
                };
                let dst = *index.entry((sd, pd)).or_insert_with(|| {
                    pairs.push((sd, pd));
                    marked.push(spec.is_marked(sd) && plant.is_marked(pd));
                    queue.push_back(pairs.len() - 1);
                    pairs.len() - 1
                });
                transitions.insert((p, e), dst);
            }
        }
        let _ = index;
        Ok(Some(SpecPlantProduct {
            pairs,
            transitions,
            union,
            plant_events,
            marked,
        }))
    }

    /// Does the plant component allow `event` at this pair? Events outside
    /// the plant alphabet are unconstrained, hence allowed.
    fn plant_enables(&self, plant: &Generator, pair: usize, event: usize) -> bool {
        match self.plant_events[event] {
            Some(pe) => plant.step(self.pairs[pair].1, pe).is_some(),
            None => true,
        }
    }

    fn to_generator(
        &self,
        spec: &Generator,
        plant: &Generator,
        alive: &[bool],
        name: &str,
    ) -> Generator {
        let mut builder = Generator::builder(name.to_string(), self.union.clone());
        let mut remap = vec![usize::MAX; self.pairs.len()];
        for (i, &(ss, ps)) in self.pairs.iter().enumerate() {
            if alive[i] {
                let idx = builder.add_state(
                    format!("({},{})", spec.state_name(ss), plant.state_name(ps)),
                    self.marked[i],
                );
                remap[i] = idx;
            }
        }
        if remap[0] == usize::MAX {
            return Generator::empty(self.union.clone());
        }
        builder.set_initial(remap[0]);
        let mut edges: Vec<(&(usize, usize), &usize)> = self.transitions.iter().collect();
        edges.sort();
        for (&(src, e), &dst) in edges {
            if alive[src] && alive[dst] {
                let ev = self.union.name(e).to_string();
                builder
                    .add_transition_idx(remap[src], &ev, remap[dst])
                    .expect("product transitions are deterministic");
            }
        }
        builder.build().accessible()
    }
}

/// Is Lm(k) controllable with respect to L(l) and the uncontrollable set?
///
/// The closure of Lm(k) must be a sublanguage of L(l); a violation of that
/// precondition is an input error carrying a witness word, not an
/// "uncontrollable" verdict.
pub fn is_controllable(
    spec: &Generator,
    plant: &Generator,
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<ControllabilityVerdict> {
    let spec_t = spec.trim();
    check_spec_in_plant(&spec_t, plant)?;
    let Some(product) = SpecPlantProduct::build(&spec_t, plant, limits)? else {
        return Ok(ControllabilityVerdict::ok());
    };
    let unctrl: Vec<usize> = product
        .union
        .iter()
        .enumerate()
        .filter(|(_, e)| uncontrollable.contains(&e.name))
        .map(|(i, _)| i)
        .collect();

    // BFS in union-alphabet order yields the shortest, lexicographically
    // least witness.
    let mut seen = vec![false; product.pairs.len()];
    let mut queue: VecDeque<(usize, Word)> = VecDeque::from([(0, Word::empty())]);
    seen[0] = true;
    while let Some((p, word)) = queue.pop_front() {
        for &u in &unctrl {
            if product.plant_enables(plant, p, u) && !product.transitions.contains_key(&(p, u)) {
                return Ok(ControllabilityVerdict {
                    controllable: false,
                    witness: Some(ControllabilityWitness {
                        word,
                        event: product.union.name(u).to_string(),
                    }),
                });
            }
        }
        for e in 0..product.union.len() {
            if let Some(&dst) = product.transitions.get(&(p, e)) {
                if !seen[dst] {
                    seen[dst] = true;
                    let mut next = word.clone();
                    next.push(product.union.name(e));
                    queue.push_back((dst, next));
                }
            }
        }
    }
    Ok(ControllabilityVerdict::ok())
}

fn check_spec_in_plant(spec_trim: &Generator, plant: &Generator) -> Result<()> {
    // closure(Lm(spec)) = L(trim(spec)) must be inside L(plant).
    let v = language_inclusion(spec_trim, plant, Mode::Closed);
    match v.counterexample {
        None => Ok(()),
        Some(witness) => Err(Error::SpecNotSublanguage { witness }),
    }
}

/// Supremal controllable sublanguage of Lm(spec) with respect to L(plant)
/// and the uncontrollable set, as a trim generator (EMPTY when only the
/// empty sublanguage is controllable).
///
/// Standard iteration on the spec/plant product: delete states at which
/// the plant enables an uncontrollable event the product does not, trim,
/// repeat to stabilization. The result is re-verified controllable.
pub fn sup_c(
    spec: &Generator,
    plant: &Generator,
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<Generator> {
    let spec_t = spec.trim();
    check_spec_in_plant(&spec_t, plant)?;
    sup_c_product(&spec_t, plant, uncontrollable, limits)
}

/// The same fixpoint without the sublanguage precondition: the computation
/// runs on the product, so the effective specification is Lm(spec)∩Lm(plant).
/// The refinement equations need this form because their shrinking plants
/// no longer contain the previous supervisors.
pub(crate) fn sup_c_product(
    spec: &Generator,
    plant: &Generator,
    uncontrollable: &EventSet,
    limits: &Limits,
) -> Result<Generator> {
    let union = spec.alphabet().union(plant.alphabet())?;
    let Some(product) = SpecPlantProduct::build(&spec.trim(), plant, limits)? else {
        return Ok(Generator::empty(union));
    };
    let unctrl: Vec<usize> = product
        .union
        .iter()
        .enumerate()
        .filter(|(_, e)| uncontrollable.contains(&e.name))
        .map(|(i, _)| i)
        .collect();

    let n = product.pairs.len();
    let mut alive = vec![true; n];
    loop {
        limits.check_cancelled()?;
        let mut changed = false;

        // Kill states where an uncontrollable plant continuation escapes.
        for p in 0..n {
            if !alive[p] {
                continue;
            }
            let escapes = unctrl.iter().any(|&u| {
                product.plant_enables(plant, p, u)
                    && !product
                        .transitions
                        .get(&(p, u))
                        .is_some_and(|&d| alive[d])
            });
            if escapes {
                alive[p] = false;
                changed = true;
            }
        }

        // Trim within the alive set: reachable from the initial pair and
        // coreachable to a marked pair.
        let reach = {
            let mut reach = vec![false; n];
            if alive[0] {
                let mut queue = VecDeque::from([0usize]);
                reach[0] = true;
                while let Some(p) = queue.pop_front() {
                    for e in 0..product.union.len() {
                        if let Some(&d) = product.transitions.get(&(p, e)) {
                            if alive[d] && !reach[d] {
                                reach[d] = true;
                                queue.push_back(d);
                            }
                        }
                    }
                }
            }
            reach
        };
        let coreach = {
            let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (&(s, _), &d) in product.transitions.iter() {
                if alive[s] && alive[d] {
                    rev[d].push(s);
                }
            }
            let mut coreach = vec![false; n];
            let mut queue = VecDeque::new();
            for p in 0..n {
                if alive[p] && product.marked[p] {
                    coreach[p] = true;
                    queue.push_back(p);
                }
            }
            while let Some(p) = queue.pop_front() {
                for &s in &rev[p] {
                    if !coreach[s] {
                        coreach[s] = true;
                        queue.push_back(s);
                    }
                }
            }
            coreach
        };
        for p in 0..n {
            if alive[p] && !(reach[p] && coreach[p]) {
                alive[p] = false;
                changed = true;
            }
        }

        if !changed {
            break;
        }
        if !alive[0] {
            return Ok(Generator::empty(product.union.clone()));
        }
    }
    if !alive[0] {
        return Ok(Generator::empty(product.union.clone()));
    }

    let name = format!("supC({})", spec.name());
    let result = product.to_generator(&spec.trim(), plant, &alive, &name);
    debug_assert!(result.is_nonblocking());
    // The fixpoint owes the caller a controllable result; anything else is
    // an internal bug worth failing loudly on.
    let verdict = is_controllable(&result, plant, uncontrollable, limits)?;
    assert!(
        verdict.controllable,
        "supC fixpoint returned an uncontrollable language"
    );
    Ok(result)
}

/// Is Lm(k) equal to closure(Lm(k)) ∩ Lm(g)?
pub fn is_lm_closed(spec: &Generator, plant: &Generator) -> LmClosedVerdict {
    let closed_part = match sync_product(&spec.prefix_closure(), plant) {
        Ok(p) => p,
        Err(_) => {
            // Flag conflicts cannot change the answer of a language-level
            // check; compare against a flag-harmonized copy instead.
            let harmonized = harmonize_flags(plant, spec.alphabet());
            sync_product(&spec.prefix_closure(), &harmonized)
                .expect("flags harmonized, product cannot fail")
        }
    };
    let eq = language_equality(spec, &closed_part, Mode::Marked);
    LmClosedVerdict {
        closed: eq.holds,
        witness: eq.counterexample.map(|(w, _)| w),
    }
}

fn harmonize_flags(g: &Generator, reference: &EventSet) -> Generator {
    let mut alphabet = EventSet::new();
    for e in g.alphabet().iter() {
        let flag = reference
            .by_name(&e.name)
            .map(|r| r.controllable)
            .unwrap_or(e.controllable);
        alphabet
            .insert(crate::event::Event::new(e.name.clone(), flag))
            .expect("source alphabet has no duplicates");
    }
    let mut builder = Generator::builder(g.name().to_string(), alphabet);
    for i in 0..g.state_count() {
        builder.add_state(g.state_name(i).to_string(), g.is_marked(i));
    }
    if let Some(init) = g.initial() {
        builder.set_initial(init);
    }
    for (s, e, d) in g.transitions() {
        let name = g.alphabet().name(e).to_string();
        builder
            .add_transition_idx(s, &name, d)
            .expect("copying a deterministic generator");
    }
    builder.build()
}

/// Closed-loop composition of a supervisor with a plant:
/// L = L(s) ∥ L(g) and Lm = L ∩ Lm(g). The supervisor contributes only its
/// generated behavior; marking comes from the plant alone.
pub fn closed_loop(supervisor: &Generator, plant: &Generator) -> Result<Generator> {
    let product = sync_product(&supervisor.closed_view(), plant)?;
    Ok(product)
}

/// A shortest word distinguishing two languages, if any (used in reports).
pub fn difference_witness(a: &Generator, b: &Generator, mode: Mode) -> Option<(Word, Side)> {
    language_equality(a, b, mode).counterexample
}
