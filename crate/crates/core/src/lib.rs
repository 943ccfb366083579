//! Fuzzy-AHP ranking of criteria from a users x criteria rating matrix.
//!
//! The pipeline normalizes the ratings column-wise, derives a Saaty pairwise
//! comparison matrix, gates it on the consistency ratio, fuzzifies it with
//! triangular fuzzy numbers, extracts weights by extent analysis, and ranks
//! the weighted criterion scores. See [`pipeline::run`].

pub mod cli;
pub mod consistency;
pub mod extent;
pub mod ingest;
pub mod matrix;
pub mod pipeline;
pub mod ranking;
pub mod report;
pub mod tfn;

pub use consistency::{ComparisonMatrix, ConsistencyReport};
pub use extent::WeightVector;
pub use ingest::{DatasetSchema, RatingMatrix};
pub use matrix::NormalizedMatrix;
pub use pipeline::RunConfig;
pub use ranking::RankingReport;
pub use tfn::Tfn;
