//! Ego-network versus full-network k-nn recommendation, and metrics for how
//! strongly item preferences cluster inside ego networks.
//!
//! The crate is organized by pipeline stage:
//!
//! * [`dataset`]: loading, validating, summarizing and synthesizing
//!   ego-centric social graphs with unary likes.
//! * [`similarity`]: Jaccard similarity and top-k neighbor selection over
//!   friend, non-friend, full-network and random pools.
//! * [`recommender`]: Jaccard-weighted k-nn recommendation and NDCG
//!   evaluation over repeated train/test splits.
//! * [`locality`]: ego/network sparsity, Uncovered Ego and coverage ratios
//!   against item-randomized and friend-rewired null networks.
//! * [`cli`]: the `egorec` command-line surface and its reports.

pub mod cli;
pub mod dataset;
pub mod error;
pub mod locality;
pub mod recommender;
pub mod report;
pub mod seed;
pub mod similarity;

pub use dataset::{Dataset, ItemId, UserId};
pub use error::{Error, Result};
