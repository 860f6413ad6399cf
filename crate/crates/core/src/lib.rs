//! Ontology-guided document similarity.
//!
//! Documents are summarized into three knowledge blocks (objective aspect,
//! subjective aspect, judgment result) by matching their words against the
//! leaf concepts of a domain ontology. Summaries are compared with the Word
//! Mover's Distance, solved exactly as a transportation problem, and the
//! resulting distances drive a kNN classification harness.

pub mod embedding;
pub mod error;
pub mod knn_eval;
pub mod ontology;
pub mod pipeline;
pub mod rules;
pub mod summarizer;
pub mod synthetic;
pub mod text;
pub mod transport;
pub mod wmd;

pub use error::{Error, Result};
