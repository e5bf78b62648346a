// SPDX-License-Identifier: Apache-2.0

pub mod cli;
pub mod community;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod graph;
pub mod ingest;
pub mod ml;
pub mod pipeline;
pub mod rng;
pub mod scoring;
pub mod synthgen;

pub use error::{Error, Result};
