//! Scalar abstraction for the numeric parts of the pipeline.

use std::fmt::{Debug, Display};

use num_traits::Float;

/// Floating-point scalar the scoring and aggregation code is generic over.
///
/// `f32` and `f64` both qualify; the crate-root aliases pin `f64`.
pub trait Scalar: Float + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` constant into this scalar type.
    fn of(value: f64) -> Self {
        Self::from(value).expect("f64 constant must convert to the scalar type")
    }

    /// Converts an unsigned count into this scalar type.
    ///
    /// Counts beyond the mantissa width round; that is acceptable for the
    /// weight sums this is used on.
    fn of_count(value: u64) -> Self {
        Self::of(value as f64)
    }
}

impl<T> Scalar for T where T: Float + Debug + Display + Send + Sync + 'static {}
