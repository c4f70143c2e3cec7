//! Orchestration of Ramsey coloring searches: the degree-matrix pipeline,
//! subcoloring libraries, embedding instances, degree-triple refutation, and
//! manifest-driven batch execution with checkpoint/resume.

pub mod embedding;
pub mod manifest;
pub mod session;
pub mod stages;

pub use embedding::{
    degree_tuples, embedding_count, generate_embeddings, EmbeddingInstance, TripleVerdict,
};
pub use manifest::{JobManifest, JobRecord, JobStatus};
pub use session::Session;
pub use stages::{BoundsVerdict, FilterOutcome, PipelineOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] ramsey_core::Error),

    #[error("degree bounds refuted: a witness violates [{lo}, {hi}]")]
    BoundsRefuted { lo: u32, hi: u32 },

    #[error("invalid pipeline input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
