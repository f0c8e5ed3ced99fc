//! Language inclusion and equality with shortest counterexamples.
//!
//! Comparison runs over the union alphabet: a word of the left language
//! using an event foreign to the right alphabet can never be in the right
//! language, so the right generator is completed with an implicit sink.
//! Counterexamples are shortest, tie-broken lexicographically by event
//! insertion order of the union alphabet.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::event::EventSet;
use crate::generator::Generator;
use crate::words::Word;

/// Which language a check operates on: the marked language Lm or the
/// generated (prefix-closed) language L. The two are deliberately never
/// conflated; callers choose explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Marked,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionVerdict {
    pub holds: bool,
    /// Shortest word (lexicographic tie-break) in the left language but
    /// not the right one; present iff `holds` is false.
    pub counterexample: Option<Word>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    LeftOnly,
    RightOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityVerdict {
    pub holds: bool,
    /// A shortest word in the symmetric difference, with the side it
    /// belongs to; present iff `holds` is false.
    pub counterexample: Option<(Word, Side)>,
}

// Sink-completed right-hand state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum RhsState {
    At(usize),
    Sink,
}

/// Decides Lm(left) ⊆ Lm(right) (or L ⊆ L in closed mode) by synchronized
/// traversal of `left` against the sink-completed `right`.
pub fn language_inclusion(left: &Generator, right: &Generator, mode: Mode) -> InclusionVerdict {
    let union = comparison_alphabet(left.alphabet(), right.alphabet());
    let Some(l0) = left.initial() else {
        return InclusionVerdict {
            holds: true,
            counterexample: None,
        };
    };
    let r0 = match right.initial() {
        Some(r) => RhsState::At(r),
        None => RhsState::Sink,
    };

    let accepts_left = |s: usize| match mode {
        Mode::Marked => left.is_marked(s),
        Mode::Closed => true,
    };
    let accepts_right = |r: RhsState| match (mode, r) {
        (_, RhsState::Sink) => false,
        (Mode::Marked, RhsState::At(s)) => right.is_marked(s),
        (Mode::Closed, RhsState::At(_)) => true,
    };

    let violation = |l: usize, r: RhsState| accepts_left(l) && !accepts_right(r);

    let mut seen: HashMap<(usize, RhsState), ()> = HashMap::new();
    let mut queue: VecDeque<((usize, RhsState), Word)> = VecDeque::new();
    seen.insert((l0, r0), ());
    if violation(l0, r0) {
        return InclusionVerdict {
            holds: false,
            counterexample: Some(Word::empty()),
        };
    }
    queue.push_back(((l0, r0), Word::empty()));

    while let Some(((ls, rs), word)) = queue.pop_front() {
        for e in union.iter() {
            // Left must move; the traversal only explores L(left).
            let Some(le) = left.alphabet().position(&e.name) else {
                continue;
            };
            let Some(ld) = left.step(ls, le) else {
                continue;
            };
            let rd = match rs {
                RhsState::Sink => RhsState::Sink,
                RhsState::At(r) => match right.alphabet().position(&e.name) {
                    None => RhsState::Sink,
                    Some(re) => match right.step(r, re) {
                        Some(d) => RhsState::At(d),
                        None => RhsState::Sink,
                    },
                },
            };
            if seen.contains_key(&(ld, rd)) {
                continue;
            }
            seen.insert((ld, rd), ());
            let mut next = word.clone();
            next.push(e.name.clone());
            if violation(ld, rd) {
                return InclusionVerdict {
                    holds: false,
                    counterexample: Some(next),
                };
            }
            queue.push_back(((ld, rd), next));
        }
    }
    InclusionVerdict {
        holds: true,
        counterexample: None,
    }
}

/// Decides language equality as inclusion both ways. The reported
/// counterexample is the shorter of the two directional witnesses
/// (left-only wins ties).
pub fn language_equality(left: &Generator, right: &Generator, mode: Mode) -> EqualityVerdict {
    let fwd = language_inclusion(left, right, mode);
    let bwd = language_inclusion(right, left, mode);
    let counterexample = match (&fwd.counterexample, &bwd.counterexample) {
        (None, None) => None,
        (Some(w), None) => Some((w.clone(), Side::LeftOnly)),
        (None, Some(w)) => Some((w.clone(), Side::RightOnly)),
        (Some(a), Some(b)) => {
            if a.len() <= b.len() {
                Some((a.clone(), Side::LeftOnly))
            } else {
                Some((b.clone(), Side::RightOnly))
            }
        }
    };
    EqualityVerdict {
        holds: fwd.holds && bwd.holds,
        counterexample,
    }
}

/// Union alphabet for comparisons: left order first, then right-only
/// events. Flags are irrelevant to comparison, so conflicts are tolerated
/// by keeping the left flag.
fn comparison_alphabet(left: &EventSet, right: &EventSet) -> EventSet {
    let mut out = left.clone();
    for e in right.iter() {
        if !out.contains(&e.name) {
            out.insert(e.clone()).expect("guarded by contains");
        }
    }
    out
}
