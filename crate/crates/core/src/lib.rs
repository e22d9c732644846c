//! Spectral toolkit for compact metric graphs.

pub mod analysis;
pub mod closed_form;
pub mod discrete;
pub mod error;
pub mod fem;
pub mod graph;
pub mod random;
pub mod report;
pub mod surgery;
pub mod union_find;
pub mod verify;

pub use error::{Error, Result};
pub use graph::MetricGraph;
