//! Summarization-based analysis of multidimensional process traces.
//!
//! The pipeline: ingest event logs into a [`trace::TraceSet`], rewrite traces
//! through a many-to-one [`summary::MappingFunction`] (attribute-, topic-, or
//! random-based), then run edit-distance similarity search and clustering on
//! the much shorter summary sequences. Length bounds classify, pair by pair,
//! whether the summary-space distance is guaranteed not to exceed the
//! original-space distance.

pub mod cluster;
pub mod distance;
pub mod error;
pub mod scheme;
pub mod search;
pub mod summary;
pub mod synth;
pub mod timing;
pub mod topic;
pub mod trace;

pub use error::{Error, Result};
pub use scheme::{build_mapping, BuiltMapping, Scheme};
pub use summary::{
    apply_mapping, apply_reduced_mapping, build_attribute_mapping, build_random_mapping,
    check_sequence_preserving, MappingFunction, MappingKind, SummarySequence,
};
pub use trace::{SymbolCorpus, TraceSet};
