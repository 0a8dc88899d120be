//! Placing (δ, β) estimates among published values: k-means with an elbow
//! curve, a Ward dendrogram, and a k-nearest-neighbour classifier.
//!
//! Distances are plain Euclidean on (δ, β); both exponents are of order one.

mod hierarchy;
mod kmeans;
mod knn;

use alloc::string::String;

pub use hierarchy::{agglomerate, MergeStep, MergeTree};
pub use kmeans::{elbow_curve, kmeans, ClusterModel, KMeansConfig};
pub use knn::{confusion, knn_classify, split_train_test, ConfusionMatrix, Split};

/// One published or estimated parameter pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamPoint {
    /// GDP exponent.
    pub delta: f64,
    /// Distance exponent.
    pub beta: f64,
    /// Where the pair comes from.
    pub source: String,
}

impl ParamPoint {
    /// Labelled point.
    pub fn new(source: impl Into<String>, delta: f64, beta: f64) -> Self {
        Self { delta, beta, source: source.into() }
    }

    /// `[δ, β]`.
    pub fn coords(&self) -> [f64; 2] {
        [self.delta, self.beta]
    }
}

#[inline]
pub(crate) fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}
