//! JSON wire formats: generators, problems, alphabet lists, set-cover
//! instances. Parsing is strict about well-formedness and reports every
//! violation it finds rather than stopping at the first.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::coordination::{CoordinationProblem, SolveOptions};
use crate::error::{Error, Result};
use crate::event::{valid_event_name, Event, EventSet};
use crate::generator::Generator;

/// Raw generator as it appears on disk. This is the one representation
/// that can violate the structural invariants, so `validate` operates here.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeneratorDef {
    #[serde(default)]
    pub name: String,
    pub events: Vec<Event>,
    pub states: Vec<String>,
    pub initial: Option<String>,
    pub marked: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

/// A single well-formedness violation found in a raw generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    DuplicateEventName { name: String },
    InvalidEventName { name: String },
    DuplicateStateName { name: String },
    EmptyStateName,
    InitialNotDeclared { name: String },
    MarkedNotDeclared { name: String },
    TransitionUnknownState { name: String },
    TransitionUnknownEvent { name: String },
    Nondeterministic { state: String, event: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateEventName { name } => write!(f, "duplicate event name `{name}`"),
            Violation::InvalidEventName { name } => write!(f, "invalid event name `{name}`"),
            Violation::DuplicateStateName { name } => write!(f, "duplicate state name `{name}`"),
            Violation::EmptyStateName => write!(f, "empty state name"),
            Violation::InitialNotDeclared { name } => {
                write!(f, "initial state `{name}` is not a declared state")
            }
            Violation::MarkedNotDeclared { name } => {
                write!(f, "marked state `{name}` is not a declared state")
            }
            Violation::TransitionUnknownState { name } => {
                write!(f, "transition endpoint `{name}` is not a declared state")
            }
            Violation::TransitionUnknownEvent { name } => {
                write!(f, "transition event `{name}` is not a declared event")
            }
            Violation::Nondeterministic { state, event } => write!(
                f,
                "nondeterministic transitions from state `{state}` on event `{event}`"
            ),
        }
    }
}

/// Checks every structural invariant of a raw generator and returns the
/// full list of violations; empty iff well-formed.
pub fn validate(def: &GeneratorDef) -> Vec<Violation> {
    let mut violations = Vec::new();

    let mut event_names = HashSet::new();
    for e in &def.events {
        if !valid_event_name(&e.name) {
            violations.push(Violation::InvalidEventName {
                name: e.name.clone(),
            });
        }
        if !event_names.insert(e.name.clone()) {
            violations.push(Violation::DuplicateEventName {
                name: e.name.clone(),
            });
        }
    }

    let mut state_names = HashSet::new();
    for s in &def.states {
        if s.is_empty() {
            violations.push(Violation::EmptyStateName);
        }
        if !state_names.insert(s.clone()) {
            violations.push(Violation::DuplicateStateName { name: s.clone() });
        }
    }

    if let Some(init) = &def.initial {
        if !state_names.contains(init) {
            violations.push(Violation::InitialNotDeclared { name: init.clone() });
        }
    }
    for m in &def.marked {
        if !state_names.contains(m) {
            violations.push(Violation::MarkedNotDeclared { name: m.clone() });
        }
    }

    let mut seen_pairs: HashMap<(String, String), String> = HashMap::new();
    for (src, event, dst) in &def.transitions {
        for endpoint in [src, dst] {
            if !state_names.contains(endpoint) {
                violations.push(Violation::TransitionUnknownState {
                    name: endpoint.clone(),
                });
            }
        }
        if !event_names.contains(event) {
            violations.push(Violation::TransitionUnknownEvent {
                name: event.clone(),
            });
        }
        if let Some(prev_dst) = seen_pairs.insert((src.clone(), event.clone()), dst.clone()) {
            if &prev_dst != dst {
                violations.push(Violation::Nondeterministic {
                    state: src.clone(),
                    event: event.clone(),
                });
            }
        }
    }
    violations
}

impl GeneratorDef {
    pub fn into_generator(self) -> Result<Generator> {
        let violations = validate(&self);
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidGenerator(msgs.join("; ")));
        }
        let alphabet = EventSet::from_events(self.events)?;
        let mut builder = Generator::builder(self.name, alphabet);
        let marked: HashSet<&String> = self.marked.iter().collect();
        for s in &self.states {
            builder.add_state(s.clone(), marked.contains(s));
        }
        if let Some(init) = &self.initial {
            let idx = builder.state_id(init).expect("validated above");
            builder.set_initial(idx);
        }
        for (src, event, dst) in &self.transitions {
            builder.add_transition(src, event, dst)?;
        }
        Ok(builder.build())
    }

    pub fn from_generator(g: &Generator) -> GeneratorDef {
        GeneratorDef {
            name: g.name().to_string(),
            events: g.alphabet().iter().cloned().collect(),
            states: g.state_names().to_vec(),
            initial: g.initial().map(|i| g.state_name(i).to_string()),
            marked: g.marked_states().map(|i| g.state_name(i).to_string()).collect(),
            transitions: g
                .transitions()
                .map(|(s, e, d)| {
                    (
                        g.state_name(s).to_string(),
                        g.alphabet().name(e).to_string(),
                        g.state_name(d).to_string(),
                    )
                })
                .collect(),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GeneratorDef::from_generator(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let def = GeneratorDef::deserialize(deserializer)?;
        def.into_generator().map_err(serde::de::Error::custom)
    }
}

/// Parses a generator from its JSON text form.
pub fn parse_generator(text: &str) -> Result<Generator> {
    let def: GeneratorDef = serde_json::from_str(text)
        .map_err(|e| Error::InvalidGenerator(format!("malformed JSON: {e}")))?;
    def.into_generator()
}

/// Serializes a generator to its canonical JSON text form.
pub fn generator_to_json(g: &Generator) -> String {
    let def = GeneratorDef::from_generator(g);
    let mut s = serde_json::to_string_pretty(&def).expect("generator serialization is infallible");
    s.push('\n');
    s
}

/// Coordination problem file: plant paths, a specification path, the
/// coordinator event names, and solver options.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemDef {
    pub plants: Vec<String>,
    pub spec: String,
    pub coordinator_events: Vec<String>,
    #[serde(default)]
    pub options: ProblemOptionsDef,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ProblemOptionsDef {
    pub determinization_cap: Option<usize>,
    pub refine_limit: Option<usize>,
    pub require_closure_cd: Option<bool>,
    /// Explicit uncontrollable event names; flags on the generators are the
    /// default when absent.
    pub uncontrollable: Option<Vec<String>>,
}

pub fn parse_problem(text: &str) -> Result<ProblemDef> {
    serde_json::from_str(text).map_err(|e| Error::InvalidProblem(format!("malformed JSON: {e}")))
}

/// Explicit alphabet list for multi-plant checks; the union can exceed any
/// single plant's alphabet, so it is never inferred.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphabetsDef {
    pub alphabets: Vec<Vec<String>>,
}

pub fn parse_alphabets(text: &str) -> Result<AlphabetsDef> {
    serde_json::from_str(text).map_err(|e| Error::InvalidProblem(format!("malformed JSON: {e}")))
}

/// Set-cover instance file. Collection order is insertion order, which
/// downstream constructions rely on for determinism.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetCoverDef {
    pub ground: Vec<String>,
    pub collection: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub budget: Option<usize>,
}

pub fn parse_setcover(text: &str) -> Result<SetCoverDef> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInstance(format!("malformed JSON: {e}")))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidProblem(format!("cannot read `{}`: {e}", path.display())))
}

pub fn load_generator_file(path: impl AsRef<Path>) -> Result<Generator> {
    let path = path.as_ref();
    parse_generator(&read_file(path)?)
        .map_err(|e| Error::InvalidGenerator(format!("{}: {e}", path.display())))
}

pub fn load_alphabets_file(path: impl AsRef<Path>) -> Result<AlphabetsDef> {
    parse_alphabets(&read_file(path.as_ref())?)
}

pub fn load_setcover_file(path: impl AsRef<Path>) -> Result<SetCoverDef> {
    parse_setcover(&read_file(path.as_ref())?)
}

/// A problem file together with the resource option it carries; the
/// determinization cap belongs to [`crate::limits::Limits`] rather than
/// the problem itself.
pub struct LoadedProblem {
    pub problem: CoordinationProblem,
    pub determinization_cap: Option<usize>,
}

/// Loads a problem file and the generators it references; relative paths
/// resolve against the problem file's directory. Coordinator events are
/// looked up in the specification's alphabet.
pub fn load_problem_file(path: impl AsRef<Path>) -> Result<LoadedProblem> {
    let path = path.as_ref();
    let def = parse_problem(&read_file(path)?)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let resolve = |p: &str| {
        let pb = Path::new(p);
        if pb.is_absolute() {
            pb.to_path_buf()
        } else {
            base.join(pb)
        }
    };
    let plants = def
        .plants
        .iter()
        .map(|p| load_generator_file(resolve(p)))
        .collect::<Result<Vec<_>>>()?;
    let spec = load_generator_file(resolve(&def.spec))?;
    let sigma_k = spec
        .alphabet()
        .restrict_to(def.coordinator_events.iter().map(|s| s.as_str()))
        .map_err(|e| Error::InvalidProblem(format!("coordinator events: {e}")))?;
    let mut options = SolveOptions::default();
    if let Some(limit) = def.options.refine_limit {
        options.refine_limit = limit;
    }
    if let Some(req) = def.options.require_closure_cd {
        options.require_closure_cd = req;
    }
    if let Some(unctrl) = &def.options.uncontrollable {
        options.uncontrollable = Some(
            spec.alphabet()
                .restrict_to(unctrl.iter().map(|s| s.as_str()))
                .map_err(|e| Error::InvalidProblem(format!("uncontrollable events: {e}")))?,
        );
    }
    let mut problem = CoordinationProblem::new(plants, spec, sigma_k)?;
    problem.options = options;
    Ok(LoadedProblem {
        problem,
        determinization_cap: def.options.determinization_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const WELL_FORMED: &str = r#"{
        "name": "two",
        "events": [{"name": "a", "controllable": true}],
        "states": ["s0", "s1"],
        "initial": "s0",
        "marked": ["s1"],
        "transitions": [["s0", "a", "s1"]]
    }"#;

    #[test]
    fn well_formed_generator_has_empty_report() {
        let def: GeneratorDef = serde_json::from_str(WELL_FORMED).unwrap();
        assert!(validate(&def).is_empty());
        let g = def.into_generator().unwrap();
        assert_eq!(g.state_count(), 2);
        assert!(g.accepts(&crate::words::Word::from_names(["a"])));
    }

    #[test]
    fn duplicate_transition_pair_reports_nondeterminism() {
        let mut def: GeneratorDef = serde_json::from_str(WELL_FORMED).unwrap();
        def.transitions
            .push(("s0".into(), "a".into(), "s0".into()));
        let report = validate(&def);
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::Nondeterministic { state, event } if state == "s0" && event == "a")));
        assert!(def.into_generator().is_err());
    }

    #[test]
    fn dangling_marked_state_is_reported() {
        let mut def: GeneratorDef = serde_json::from_str(WELL_FORMED).unwrap();
        def.marked.push("ghost".into());
        let report = validate(&def);
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::MarkedNotDeclared { name } if name == "ghost")));
    }

    #[test]
    fn null_initial_round_trips_as_empty() {
        let text = r#"{
            "name": "none",
            "events": [{"name": "a", "controllable": true}],
            "states": [],
            "initial": null,
            "marked": [],
            "transitions": []
        }"#;
        let g = parse_generator(text).unwrap();
        assert!(g.is_empty_generator());
        let back = parse_generator(&generator_to_json(&g)).unwrap();
        assert!(back.is_empty_generator());
    }

    #[test]
    fn round_trip_is_structurally_identical() {
        let g = parse_generator(WELL_FORMED).unwrap();
        let text = generator_to_json(&g);
        let def1 = GeneratorDef::from_generator(&g);
        let def2: GeneratorDef = serde_json::from_str(&text).unwrap();
        assert_eq!(def1, def2);
    }

    #[test]
    fn malformed_json_is_an_input_error() {
        let err = parse_generator("{ not json").unwrap_err();
        assert!(matches!(err, Error::InvalidGenerator(_)));
        assert!(!err.is_resource_limit());
    }
}
