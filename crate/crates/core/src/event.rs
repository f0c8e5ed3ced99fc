use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named event with its controllability flag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub name: String,
    pub controllable: bool,
}

impl Event {
    pub fn new(name: impl Into<String>, controllable: bool) -> Self {
        Event {
            name: name.into(),
            controllable,
        }
    }

    pub fn controllable(name: impl Into<String>) -> Self {
        Event::new(name, true)
    }

    pub fn uncontrollable(name: impl Into<String>) -> Self {
        Event::new(name, false)
    }
}

pub(crate) fn valid_event_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| !c.is_whitespace() && c != ',' && !c.is_control())
}

/// Ordered set of events. Iteration order is insertion order; all
/// downstream tie-breaking (counterexamples, greedy choices) keys off it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventSet {
    events: Vec<Event>,
    index: HashMap<String, usize>,
}

impl EventSet {
    pub fn new() -> Self {
        EventSet::default()
    }

    pub fn from_events<I: IntoIterator<Item = Event>>(events: I) -> Result<Self> {
        let mut set = EventSet::new();
        for e in events {
            set.insert(e)?;
        }
        Ok(set)
    }

    /// All events controllable; convenient in tests.
    pub fn controllable_from_names<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Result<Self> {
        EventSet::from_events(names.into_iter().map(Event::controllable))
    }

    /// Inserts an event. Returns an error on an invalid name or on a
    /// duplicate name with a conflicting flag; a duplicate with the same
    /// flag is a no-op.
    pub fn insert(&mut self, event: Event) -> Result<()> {
        if !valid_event_name(&event.name) {
            return Err(Error::InvalidEventName(event.name));
        }
        match self.index.get(&event.name) {
            Some(&i) => {
                if self.events[i].controllable != event.controllable {
                    Err(Error::FlagConflict { name: event.name })
                } else {
                    Err(Error::DuplicateEvent(event.name))
                }
            }
            None => {
                self.index.insert(event.name.clone(), self.events.len());
                self.events.push(event);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Event> {
        self.events.iter()
    }

    pub fn get(&self, idx: usize) -> &Event {
        &self.events[idx]
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.events[idx].name
    }

    pub fn names(&self) -> Vec<String> {
        self.events.iter().map(|e| e.name.clone()).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn by_name(&self, name: &str) -> Option<&Event> {
        self.position(name).map(|i| &self.events[i])
    }

    /// Union; order is self's order followed by other's events not in self.
    /// Errors when a shared name carries conflicting flags.
    pub fn union(&self, other: &EventSet) -> Result<EventSet> {
        let mut out = self.clone();
        for e in other.iter() {
            match out.by_name(&e.name) {
                Some(existing) if existing.controllable != e.controllable => {
                    return Err(Error::FlagConflict {
                        name: e.name.clone(),
                    });
                }
                Some(_) => {}
                None => out.insert(e.clone())?,
            }
        }
        Ok(out)
    }

    /// Intersection in self's order.
    pub fn intersect(&self, other: &EventSet) -> EventSet {
        let mut out = EventSet::new();
        for e in self.iter() {
            if other.contains(&e.name) {
                out.insert(e.clone()).expect("no duplicates in source set");
            }
        }
        out
    }

    /// Events of self absent from other, in self's order.
    pub fn minus(&self, other: &EventSet) -> EventSet {
        let mut out = EventSet::new();
        for e in self.iter() {
            if !other.contains(&e.name) {
                out.insert(e.clone()).expect("no duplicates in source set");
            }
        }
        out
    }

    /// Restricts to the given names, keeping self's order and flags.
    /// Errors on names missing from self.
    pub fn restrict_to<'a, I: IntoIterator<Item = &'a str>>(&self, names: I) -> Result<EventSet> {
        let mut keep: Vec<bool> = vec![false; self.events.len()];
        for n in names {
            match self.position(n) {
                Some(i) => keep[i] = true,
                None => return Err(Error::TargetNotInSource(n.to_string())),
            }
        }
        let mut out = EventSet::new();
        for (i, e) in self.events.iter().enumerate() {
            if keep[i] {
                out.insert(e.clone())?;
            }
        }
        Ok(out)
    }

    pub fn is_subset_of(&self, other: &EventSet) -> bool {
        self.iter().all(|e| other.contains(&e.name))
    }

    /// Set equality ignoring order and flags.
    pub fn same_names(&self, other: &EventSet) -> bool {
        self.len() == other.len() && self.is_subset_of(other)
    }

    /// The flag-derived uncontrollable subset.
    pub fn uncontrollable_subset(&self) -> EventSet {
        let mut out = EventSet::new();
        for e in self.iter() {
            if !e.controllable {
                out.insert(e.clone()).expect("no duplicates in source set");
            }
        }
        out
    }
}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e.name)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for EventSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.events.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EventSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let events = Vec::<Event>::deserialize(deserializer)?;
        EventSet::from_events(events).map_err(serde::de::Error::custom)
    }
}

/// A natural projection between a source alphabet and a target subalphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSpec {
    source: EventSet,
    target: EventSet,
}

impl ProjectionSpec {
    /// Errors unless target is a subset of source by name; target flags are
    /// taken from the source so the two can never disagree.
    pub fn new(source: EventSet, target: &EventSet) -> Result<Self> {
        let names: Vec<String> = target.names();
        let target = source.restrict_to(names.iter().map(|s| s.as_str()))?;
        Ok(ProjectionSpec { source, target })
    }

    /// Target selected by name from the source, keeping source order.
    pub fn onto<'a, I: IntoIterator<Item = &'a str>>(source: EventSet, names: I) -> Result<Self> {
        let target = source.restrict_to(names)?;
        Ok(ProjectionSpec { source, target })
    }

    pub fn source(&self) -> &EventSet {
        &self.source
    }

    pub fn target(&self) -> &EventSet {
        &self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insertion_order_is_preserved() {
        let set = EventSet::controllable_from_names(["b", "a", "c"]).unwrap();
        assert_eq!(set.names(), vec!["b", "a", "c"]);
        assert_eq!(set.position("a"), Some(1));
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut set = EventSet::controllable_from_names(["a"]).unwrap();
        assert!(matches!(
            set.insert(Event::controllable("a")),
            Err(Error::DuplicateEvent(_))
        ));
        assert!(matches!(
            set.insert(Event::uncontrollable("a")),
            Err(Error::FlagConflict { .. })
        ));
    }

    #[test]
    fn union_keeps_left_order_and_detects_conflicts() {
        let a = EventSet::controllable_from_names(["x", "y"]).unwrap();
        let b = EventSet::from_events([Event::controllable("y"), Event::uncontrollable("z")]).unwrap();
        let u = a.union(&b).unwrap();
        assert_eq!(u.names(), vec!["x", "y", "z"]);
        let c = EventSet::from_events([Event::uncontrollable("y")]).unwrap();
        assert!(matches!(a.union(&c), Err(Error::FlagConflict { .. })));
    }

    #[test]
    fn invalid_names_rejected() {
        assert!(EventSet::controllable_from_names(["a b"]).is_err());
        assert!(EventSet::controllable_from_names([""]).is_err());
        assert!(EventSet::controllable_from_names(["a,b"]).is_err());
    }

    #[test]
    fn projection_target_must_be_subset() {
        let source = EventSet::controllable_from_names(["a", "b"]).unwrap();
        assert!(ProjectionSpec::onto(source.clone(), ["a"]).is_ok());
        assert!(matches!(
            ProjectionSpec::onto(source, ["q"]),
            Err(Error::TargetNotInSource(_))
        ));
    }
}
