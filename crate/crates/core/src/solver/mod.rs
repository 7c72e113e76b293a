//! Essential-matrix solvers.
//!
//! [`five_point`] is the minimal solver used for hypothesis generation.
//! [`eight_point_normalized`] is a linear least-squares refit over an inlier
//! set, available to the robust engine behind a flag.

mod eight_point;
mod five_point;
mod poly;

pub use eight_point::eight_point_normalized;
pub use five_point::five_point;

/// Indices of the correspondences drawn for one minimal sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MinimalSample {
    pub indices: [usize; crate::constants::MINIMAL_SAMPLE_SIZE],
}

impl MinimalSample {
    /// Sorts the indices and checks that they are distinct and below `n`.
    pub fn new(mut indices: [usize; crate::constants::MINIMAL_SAMPLE_SIZE], n: usize) -> crate::Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) || indices.iter().any(|&i| i >= n) {
            return Err(crate::Error::DegenerateInput("minimal sample indices must be distinct and in range"));
        }
        Ok(Self { indices })
    }
}
