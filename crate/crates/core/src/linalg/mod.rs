//! Exact linear algebra over `Q` or a prime field.

mod blocks;
mod field;
mod matrix;

pub use blocks::{extract_blocks, stack_split, BlockLabels};
pub use field::{is_prime, Field, FieldScalar};
pub use matrix::ExactMatrix;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("unrecognized field `{0}` (expected Q or GF(p))")]
    BadField(String),
    #[error("cannot parse `{0}` as an integer or p/q rational")]
    BadScalar(String),
    #[error("denominator vanishes modulo {modulus}")]
    DenominatorVanishes { modulus: u64 },
    #[error("expected {rows}x{cols} entries, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        got: usize,
    },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("unknown block label `{0}`")]
    UnknownLabel(String),
    #[error("block labels span {labels} but matrix dimension is {actual}")]
    LabelWidth { labels: usize, actual: usize },
    #[error("shared block `{label}` has width {left} on the left and {right} on the right")]
    WidthMismatch {
        label: String,
        left: usize,
        right: usize,
    },
    #[error("stack split is malformed: {0}")]
    BadSplit(String),
}
