use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::event::EventSet;
use crate::words::Word;

/// A deterministic generator: finite automaton with a partial transition
/// function, at most one initial state, and a set of marked states.
///
/// The one generator with no initial state is the canonical EMPTY
/// generator, whose generated and marked languages are both empty. Every
/// operation accepts and propagates it.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    name: String,
    alphabet: EventSet,
    states: Vec<String>,
    initial: Option<usize>,
    marked: Vec<bool>,
    // (state, event) -> state; the map key enforces determinism.
    transitions: BTreeMap<(usize, usize), usize>,
}

impl Generator {
    /// The canonical EMPTY generator over the given alphabet.
    pub fn empty(alphabet: EventSet) -> Self {
        Generator {
            name: String::new(),
            alphabet,
            states: Vec::new(),
            initial: None,
            marked: Vec::new(),
            transitions: BTreeMap::new(),
        }
    }

    pub fn builder(name: impl Into<String>, alphabet: EventSet) -> GeneratorBuilder {
        GeneratorBuilder {
            gen: Generator {
                name: name.into(),
                alphabet,
                states: Vec::new(),
                initial: None,
                marked: Vec::new(),
                transitions: BTreeMap::new(),
            },
            state_index: HashMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn alphabet(&self) -> &EventSet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, idx: usize) -> &str {
        &self.states[idx]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    /// True iff this is the canonical EMPTY generator (no initial state).
    pub fn is_empty_generator(&self) -> bool {
        self.initial.is_none()
    }

    pub fn is_marked(&self, idx: usize) -> bool {
        self.marked[idx]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&i| self.marked[i])
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.transitions.iter().map(|(&(s, e), &d)| (s, e, d))
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn step(&self, state: usize, event: usize) -> Option<usize> {
        self.transitions.get(&(state, event)).copied()
    }

    /// Outgoing transitions of a state in event order.
    pub fn enabled(&self, state: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.transitions
            .range((state, 0)..=(state, usize::MAX))
            .map(|(&(_, e), &d)| (e, d))
    }

    /// Runs a word (by event names) from the initial state. `None` when the
    /// word leaves the generated language or uses a foreign event.
    pub fn run(&self, word: &Word) -> Option<usize> {
        let mut state = self.initial?;
        for name in &word.0 {
            let e = self.alphabet.position(name)?;
            state = self.step(state, e)?;
        }
        Some(state)
    }

    /// Word membership in Lm(g).
    pub fn accepts(&self, word: &Word) -> bool {
        self.run(word).is_some_and(|s| self.is_marked(s))
    }

    /// Word membership in L(g).
    pub fn generates(&self, word: &Word) -> bool {
        self.run(word).is_some()
    }

    /// Same structure re-rooted at another state. Used by the observer and
    /// consistency checks to reason about futures of individual states.
    pub(crate) fn with_initial(&self, state: usize) -> Generator {
        let mut g = self.clone();
        g.initial = Some(state);
        g
    }

    /// Events that occur on transitions reachable from the initial state.
    pub fn reachable_events(&self) -> EventSet {
        let reach = self.reachable_from_initial();
        let mut seen = vec![false; self.alphabet.len()];
        for (s, e, _) in self.transitions() {
            if reach[s] {
                seen[e] = true;
            }
        }
        let mut out = EventSet::new();
        for (i, e) in self.alphabet.iter().enumerate() {
            if seen[i] {
                out.insert(e.clone()).expect("alphabet has no duplicates");
            }
        }
        out
    }

    fn reachable_from_initial(&self) -> Vec<bool> {
        let mut reach = vec![false; self.states.len()];
        let Some(init) = self.initial else {
            return reach;
        };
        let mut queue = VecDeque::from([init]);
        reach[init] = true;
        while let Some(s) = queue.pop_front() {
            for (_, d) in self.enabled(s) {
                if !reach[d] {
                    reach[d] = true;
                    queue.push_back(d);
                }
            }
        }
        reach
    }

    fn coreachable_to_marked(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.states.len()];
        for (s, _, d) in self.transitions() {
            rev[d].push(s);
        }
        let mut coreach = vec![false; self.states.len()];
        let mut queue: VecDeque<usize> = self.marked_states().collect();
        for &m in queue.iter() {
            coreach[m] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &p in &rev[s] {
                if !coreach[p] {
                    coreach[p] = true;
                    queue.push_back(p);
                }
            }
        }
        coreach
    }

    /// Keeps states satisfying the predicate, dropping dangling transitions.
    /// Returns EMPTY when the initial state is dropped.
    pub(crate) fn restrict_states(&self, keep: &[bool]) -> Generator {
        let initial = match self.initial {
            Some(i) if keep[i] => i,
            _ => return Generator::empty(self.alphabet.clone()),
        };
        let mut remap = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        let mut marked = Vec::new();
        for (i, k) in keep.iter().enumerate() {
            if *k {
                remap[i] = states.len();
                states.push(self.states[i].clone());
                marked.push(self.marked[i]);
            }
        }
        let mut transitions = BTreeMap::new();
        for (s, e, d) in self.transitions() {
            if keep[s] && keep[d] {
                transitions.insert((remap[s], e), remap[d]);
            }
        }
        Generator {
            name: self.name.clone(),
            alphabet: self.alphabet.clone(),
            states,
            initial: Some(remap[initial]),
            marked,
            transitions,
        }
    }

    /// The part reachable from the initial state. Leaves L and Lm unchanged.
    pub fn accessible(&self) -> Generator {
        if self.is_empty_generator() {
            return Generator::empty(self.alphabet.clone());
        }
        self.restrict_states(&self.reachable_from_initial())
    }

    /// Keeps states from which a marked state is reachable. Leaves Lm
    /// unchanged; L shrinks to the closure of Lm restricted to kept states.
    pub fn coaccessible(&self) -> Generator {
        if self.is_empty_generator() {
            return Generator::empty(self.alphabet.clone());
        }
        self.restrict_states(&self.coreachable_to_marked())
    }

    /// accessible ∘ coaccessible: the nonblocking core. Lm is unchanged and
    /// L(trim) is the prefix closure of Lm. EMPTY when Lm is empty.
    pub fn trim(&self) -> Generator {
        self.coaccessible().accessible()
    }

    /// True iff every accessible state is coaccessible, so the closure of
    /// Lm equals L. Vacuously true for EMPTY.
    pub fn is_nonblocking(&self) -> bool {
        if self.is_empty_generator() {
            return true;
        }
        let reach = self.reachable_from_initial();
        let coreach = self.coreachable_to_marked();
        reach.iter().zip(&coreach).all(|(&r, &c)| !r || c)
    }

    /// Marks every state of the trim part, so Lm becomes the prefix
    /// closure of the original Lm.
    pub fn prefix_closure(&self) -> Generator {
        let mut g = self.trim();
        for m in g.marked.iter_mut() {
            *m = true;
        }
        g
    }

    /// Accessible part with every state marked: a generator whose marked
    /// language is L(self). Lets closed-language checks reuse marked-language
    /// machinery.
    pub fn closed_view(&self) -> Generator {
        let mut g = self.accessible();
        for m in g.marked.iter_mut() {
            *m = true;
        }
        g
    }

    /// Renames states canonically (q0, q1, ...) in breadth-first discovery
    /// order from the initial state, tie-broken by event order.
    pub fn renumbered(&self) -> Generator {
        if self.is_empty_generator() {
            return Generator::empty(self.alphabet.clone());
        }
        let g = self.accessible();
        let order = g.bfs_order();
        let mut remap = vec![usize::MAX; g.states.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut states = vec![String::new(); order.len()];
        let mut marked = vec![false; order.len()];
        for (new, &old) in order.iter().enumerate() {
            states[new] = format!("q{new}");
            marked[new] = g.marked[old];
        }
        let mut transitions = BTreeMap::new();
        for (s, e, d) in g.transitions() {
            transitions.insert((remap[s], e), remap[d]);
        }
        Generator {
            name: g.name.clone(),
            alphabet: g.alphabet.clone(),
            states,
            initial: Some(remap[g.initial.unwrap()]),
            marked,
            transitions,
        }
    }

    /// Breadth-first state order from the initial state, events in alphabet
    /// order. Unreachable states are omitted.
    pub fn bfs_order(&self) -> Vec<usize> {
        let Some(init) = self.initial else {
            return Vec::new();
        };
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([init]);
        seen[init] = true;
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for (_, d) in self.enabled(s) {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        order
    }

    /// Minimal trim generator with the same marked language, via Hopcroft
    /// partition refinement on the sink-completed automaton. States get
    /// canonical names. Intended for reporting and DOT output; no other
    /// operation needs minimal inputs.
    pub fn minimize(&self) -> Generator {
        let g = self.trim();
        let Some(init) = g.initial else {
            return Generator::empty(self.alphabet.clone());
        };
        let n = g.states.len();
        let sink = n;
        let total = n + 1;
        let nev = g.alphabet.len();
        // Completed transition table.
        let mut delta = vec![vec![sink; nev]; total];
        for (s, e, d) in g.transitions() {
            delta[s][e] = d;
        }
        // Inverse images per event.
        let mut inv: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); total]; nev];
        for q in 0..total {
            for e in 0..nev {
                inv[e][delta[q][e]].push(q);
            }
        }

        let mut class_of = vec![0usize; total];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let marked_class: Vec<usize> = (0..n).filter(|&q| g.marked[q]).collect();
        let unmarked_class: Vec<usize> = (0..total).filter(|&q| q == sink || !g.marked[q]).collect();
        for part in [marked_class, unmarked_class] {
            if part.is_empty() {
                continue;
            }
            let id = classes.len();
            for &q in &part {
                class_of[q] = id;
            }
            classes.push(part);
        }
        let mut worklist: Vec<usize> = (0..classes.len()).collect();

        while let Some(a) = worklist.pop() {
            let splitter = classes[a].clone();
            for inv_e in &inv {
                // X = states with a transition into the splitter on this event.
                let mut x: Vec<usize> = Vec::new();
                for &q in &splitter {
                    x.extend(inv_e[q].iter().copied());
                }
                if x.is_empty() {
                    continue;
                }
                let mut touched: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for q in x {
                    touched.entry(class_of[q]).or_default().push(q);
                }
                for (cid, inside) in touched {
                    if inside.len() == classes[cid].len() {
                        continue;
                    }
                    // Split classes[cid] into inside / outside.
                    let inside_set: std::collections::HashSet<usize> =
                        inside.iter().copied().collect();
                    let outside: Vec<usize> = classes[cid]
                        .iter()
                        .copied()
                        .filter(|q| !inside_set.contains(q))
                        .collect();
                    let new_id = classes.len();
                    let (small, large) = if inside.len() <= outside.len() {
                        (inside, outside)
                    } else {
                        (outside, inside)
                    };
                    for &q in &small {
                        class_of[q] = new_id;
                    }
                    classes[cid] = large;
                    classes.push(small);
                    if worklist.contains(&cid) {
                        worklist.push(new_id);
                    } else {
                        // Process the smaller half.
                        worklist.push(new_id);
                    }
                }
            }
        }

        // Rebuild the quotient, dropping the sink class and transitions to it.
        let sink_class = class_of[sink];
        let mut quotient = Generator::builder(g.name.clone(), g.alphabet.clone());
        let mut class_state: HashMap<usize, usize> = HashMap::new();
        // Discover classes BFS-style from the initial class for stable names.
        let mut order: Vec<usize> = Vec::new();
        let mut seen: std::collections::HashSet<usize> = std::collections::HashSet::new();
        let mut queue = VecDeque::from([class_of[init]]);
        seen.insert(class_of[init]);
        while let Some(c) = queue.pop_front() {
            order.push(c);
            let rep = classes[c][0];
            for e in 0..nev {
                let d = class_of[delta[rep][e]];
                if d != sink_class && seen.insert(d) {
                    queue.push_back(d);
                }
            }
        }
        for (i, &c) in order.iter().enumerate() {
            let rep = classes[c][0];
            let idx = quotient.add_state(format!("m{i}"), g.marked[rep]);
            class_state.insert(c, idx);
        }
        for &c in &order {
            let rep = classes[c][0];
            for e in 0..nev {
                let d = class_of[delta[rep][e]];
                if d != sink_class {
                    let name = g.alphabet.name(e).to_string();
                    quotient
                        .add_transition_idx(class_state[&c], &name, class_state[&d])
                        .expect("quotient transition is well-formed");
                }
            }
        }
        quotient.set_initial(class_state[&class_of[init]]);
        quotient.build()
    }
}

/// Incremental construction of a generator; enforces determinism and
/// name validity as transitions are added.
pub struct GeneratorBuilder {
    gen: Generator,
    state_index: HashMap<String, usize>,
}

impl GeneratorBuilder {
    pub fn add_state(&mut self, name: impl Into<String>, marked: bool) -> usize {
        let name = name.into();
        if let Some(&i) = self.state_index.get(&name) {
            self.gen.marked[i] = self.gen.marked[i] || marked;
            return i;
        }
        let idx = self.gen.states.len();
        self.state_index.insert(name.clone(), idx);
        self.gen.states.push(name);
        self.gen.marked.push(marked);
        idx
    }

    pub fn set_initial(&mut self, state: usize) {
        self.gen.initial = Some(state);
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.state_index.get(name).copied()
    }

    pub fn add_transition_idx(&mut self, src: usize, event: &str, dst: usize) -> Result<()> {
        let e = self
            .gen
            .alphabet
            .position(event)
            .ok_or_else(|| Error::AlphabetMismatch(format!("unknown event `{event}`")))?;
        if let Some(&existing) = self.gen.transitions.get(&(src, e)) {
            if existing != dst {
                return Err(Error::InvalidGenerator(format!(
                    "nondeterministic transitions from state `{}` on event `{event}`",
                    self.gen.states[src]
                )));
            }
            return Ok(());
        }
        self.gen.transitions.insert((src, e), dst);
        Ok(())
    }

    pub fn add_transition(&mut self, src: &str, event: &str, dst: &str) -> Result<()> {
        let s = self
            .state_id(src)
            .ok_or_else(|| Error::InvalidGenerator(format!("unknown state `{src}`")))?;
        let d = self
            .state_id(dst)
            .ok_or_else(|| Error::InvalidGenerator(format!("unknown state `{dst}`")))?;
        self.add_transition_idx(s, event, d)
    }

    pub fn build(self) -> Generator {
        self.gen
    }
}
