use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Cooperative cancellation token checked inside long-running loops
/// (subset constructions, fixpoints, candidate searches).
#[derive(Debug, Clone, Default)]
pub struct CancelToken {
    flag: Arc<AtomicBool>,
}

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.flag.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.flag.load(Ordering::Relaxed)
    }
}

/// Resource limits threaded through operations that can blow up.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Maximum number of subset states a determinization may build.
    pub determinization_cap: usize,
    /// Maximum length accepted by the bounded word enumerator.
    pub max_word_bound: usize,
    /// Maximum number of words a single enumeration may collect.
    pub max_words: usize,
    /// Maximum candidate-pool size for the exact extension search.
    pub max_pool: usize,
    pub cancel: CancelToken,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            determinization_cap: 1_000_000,
            max_word_bound: 20,
            max_words: 1_000_000,
            max_pool: 20,
            cancel: CancelToken::new(),
        }
    }
}

impl Limits {
    pub fn with_cap(cap: usize) -> Self {
        Limits {
            determinization_cap: cap,
            ..Limits::default()
        }
    }

    pub(crate) fn check_cancelled(&self) -> Result<()> {
        if self.cancel.is_cancelled() {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    }
}
