//! Group fairness auditing for classifiers.
//!
//! `fairgauge` computes Group Parity, True Positive Rate and Predictive
//! Parity per (group, class), their inter-group gaps and support counts,
//! and measures how much those gaps move across stratified resamples of a
//! corpus. The pieces:
//!
//! - [`data`]: record schema, CSV / JSONL ingestion, validation.
//! - [`metrics`]: the estimators, gaps, accuracy and one-vs-rest F1.
//! - [`sampler`]: proportional stratified sampling, stratified train/test
//!   splits, and multi-size replicate plans behind a [`sampler::Predictor`].
//! - [`stats`]: summaries, two-sample t-tests, class filtering and the
//!   replicate report.
//! - [`debias`]: gender-indicator and first-name substitution for text.
//! - [`synth`]: synthetic populations with closed-form metric values.
//! - [`render`]: static SVG boxplots and heat tables from a report.
//! - [`cli`]: the command implementations behind the `fairgauge` binary.

pub mod canonical;
pub mod cli;
pub mod data;
pub mod debias;
pub mod error;
pub mod metrics;
pub mod render;
pub mod sampler;
pub mod stats;
pub mod synth;

pub use data::{attach_predictions, load_dataset, validate, AuditDataset, Format, LabeledRecord, Schema};
pub use error::{Error, Result};
pub use metrics::{GapTable, MetricKind};
