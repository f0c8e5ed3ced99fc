use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::limits::Limits;

/// A finite word, stored as event names.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<String>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_names<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Self {
        Word(names.into_iter().map(|s| s.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, name: impl Into<String>) {
        self.0.push(name.into());
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            // Render the empty word visibly.
            return write!(f, "ε");
        }
        write!(f, "{}", self.0.join(" "))
    }
}

/// Bounded samples of a generator's generated and marked languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSample {
    pub bound: usize,
    /// Exact set of words of length <= bound in L(g).
    pub generated: BTreeSet<Word>,
    /// Exact set of words of length <= bound in Lm(g).
    pub marked: BTreeSet<Word>,
}

impl WordSample {
    pub fn contains_marked(&self, names: &[&str]) -> bool {
        self.marked.contains(&Word::from_names(names.iter().copied()))
    }

    pub fn contains_generated(&self, names: &[&str]) -> bool {
        self.generated
            .contains(&Word::from_names(names.iter().copied()))
    }
}

/// Exhaustively enumerates L(g) and Lm(g) up to the given length bound.
/// This is the brute-force oracle the rest of the test suite leans on.
pub fn enumerate_words(g: &Generator, bound: usize, limits: &Limits) -> Result<WordSample> {
    if bound > limits.max_word_bound {
        return Err(Error::BoundTooLarge {
            bound,
            max: limits.max_word_bound,
        });
    }
    let mut generated = BTreeSet::new();
    let mut marked = BTreeSet::new();
    let Some(initial) = g.initial() else {
        return Ok(WordSample {
            bound,
            generated,
            marked,
        });
    };

    // Plain depth-first expansion; the state space is a DFA so words, not
    // states, bound the work.
    let mut stack: Vec<(usize, Word)> = vec![(initial, Word::empty())];
    while let Some((state, word)) = stack.pop() {
        limits.check_cancelled()?;
        if generated.len() + marked.len() > 2 * limits.max_words {
            return Err(Error::SampleLimit {
                limit: limits.max_words,
            });
        }
        if g.is_marked(state) {
            marked.insert(word.clone());
        }
        generated.insert(word.clone());
        if word.len() == bound {
            continue;
        }
        for (eidx, dst) in g.enabled(state) {
            let mut next = word.clone();
            next.push(g.alphabet().name(eidx));
            stack.push((dst, next));
        }
    }
    Ok(WordSample {
        bound,
        generated,
        marked,
    })
}

/// Erases all symbols outside `keep` from a word.
pub fn erase(word: &Word, keep: &crate::event::EventSet) -> Word {
    Word(
        word.0
            .iter()
            .filter(|n| keep.contains(n))
            .cloned()
            .collect(),
    )
}
