//! Align human-elicited semantic-relation triplets with WordNet.
//!
//! The crate parses WordNet noun files into a relation graph
//! ([`wn_store`]), renders and ingests cloze-style elicitation data
//! ([`elicitation`]), classifies aggregated triplets against the graph
//! ([`matcher`]), and computes the alignment statistics ([`metrics`],
//! [`gloss_sim`]). [`pipeline`] runs everything end to end and writes
//! the report files.

pub mod wn_store;
pub mod elicitation;
pub mod matcher;
pub mod metrics;
pub mod gloss_sim;
pub mod pipeline;
