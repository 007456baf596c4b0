//! Evaluation toolkit for scene-text-editing outputs.
//!
//! The centrepiece is the text appearance similarity score ([`tas::tas`]),
//! which splits style agreement into colour, font and background terms.
//! Around it sit the usual reference metrics ([`simmetrics`]), FSIM
//! ([`fsim`]), CIEDE2000 ([`colordiff`]), a classical style extractor
//! ([`styleextract`]) and the batch/corpus tooling in [`corpus`].

pub mod error;
pub mod cli;
pub mod colordiff;
pub mod corpus;
pub mod fsim;
pub mod imgcore;
pub mod simmetrics;
pub mod styleextract;
pub mod tas;

pub use error::{Error, Result};
