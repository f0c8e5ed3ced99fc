//! Coordination supervisory control of distributed discrete-event systems.
//!
//! The crate provides the generator algebra (synchronous product, natural
//! projection, trimming, language comparison), classical supervisory
//! control (controllability, supremal controllable sublanguages), the
//! structural conditions layered on projections (observer property, local
//! control consistency), coordinator synthesis for safety and
//! nonblockingness, and exact/greedy solvers for the minimal
//! coordinator-alphabet extension problem.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so concurrent invocation is safe. Long-running searches
//! honor the cooperative [`CancelToken`] carried in [`Limits`].

pub mod compare;
pub mod coordination;
pub mod dot;
pub mod error;
pub mod event;
pub mod generator;
pub mod json;
pub mod limits;
pub mod minext;
pub mod nonblocking;
pub mod observer;
pub mod ops;
pub mod supervisory;
pub mod words;

pub use compare::{language_equality, language_inclusion, EqualityVerdict, InclusionVerdict, Mode, Side};
pub use error::{Error, Result};
pub use event::{Event, EventSet, ProjectionSpec};
pub use generator::{Generator, GeneratorBuilder};
pub use limits::{CancelToken, Limits};
pub use ops::{inverse_project, project, project_onto, sync_product, sync_product_all};
pub use words::{enumerate_words, Word, WordSample};
