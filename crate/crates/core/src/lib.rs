//! Semantic summarization of multi-event reports.

// NaN-rejecting guards are written as `!(x > 0.0)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod loss;
pub mod model;
pub mod numerics;
pub mod scalar;
pub mod summarizers;

pub use error::{Error, Result};
pub use loss::{
    interpretation, report_loss, semantic_loss, set_loss, ConvexGenerator, Extended,
    ReportDistribution,
};
pub use model::{Alphabet, Report, ReportSequence, ReportSet, SemanticWeights, Summary};
pub use scalar::{Exact, Scalar};
