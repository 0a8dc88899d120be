use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dist2;
use crate::error::{GravityError, Result};

/// Indices of the training and test points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// Training indices, ascending.
    pub train: Vec<usize>,
    /// Test indices, ascending.
    pub test: Vec<usize>,
}

/// Stratified seeded split: each class sends `round((1 - ratio) · count)` members to the
/// test set, at least one and never all of them.
pub fn split_train_test(labels: &[usize], ratio: f64, seed: u64) -> Result<Split> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(GravityError::InvalidConfig(alloc::format!("train ratio must lie in (0, 1), got {ratio}")));
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    if let Some((&label, members)) = classes.iter().find(|(_, m)| m.len() < 2) {
        return Err(GravityError::Stratification { label, count: members.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for members in classes.values_mut() {
        let count = members.len();
        let n_test = libm::round((1.0 - ratio) * count as f64).clamp(1.0, (count - 1) as f64) as usize;
        members.shuffle(&mut rng);
        test.extend_from_slice(&members[..n_test]);
        train.extend_from_slice(&members[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

/// Majority vote among the `k` nearest training points.
///
/// Distance ties go to the lower training index; vote ties go to the tied label
/// that appears nearest to the query.
pub fn knn_classify(train: &[[f64; 2]], labels: &[usize], k: usize, query: [f64; 2]) -> Result<usize> {
    if train.is_empty() {
        return Err(GravityError::EmptyTrainingSet);
    }
    if labels.len() != train.len() {
        return Err(GravityError::DimensionMismatch(alloc::format!(
            "{} training points, {} labels",
            train.len(),
            labels.len()
        )));
    }
    if k == 0 || k > train.len() {
        return Err(GravityError::InvalidConfig(alloc::format!(
            "k must lie in 1..={}, got {k}",
            train.len()
        )));
    }
    let mut order: Vec<(f64, usize)> = train.iter().enumerate().map(|(i, &p)| (dist2(p, query), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let neighbours = &order[..k];

    let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
    for &(_, i) in neighbours {
        *votes.entry(labels[i]).or_default() += 1;
    }
    let top = votes.values().copied().max().unwrap_or(0);
    let winner = neighbours
        .iter()
        .map(|&(_, i)| labels[i])
        .find(|l| votes[l] == top)
        .expect("k >= 1");
    Ok(winner)
}

/// Rows are actual classes, columns predicted.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionMatrix {
    /// `counts[actual][predicted]`.
    pub counts: Vec<Vec<usize>>,
    /// Diagonal share.
    pub accuracy: f64,
}

/// Tally predictions. The matrix covers at least `n_classes` classes and every label seen.
pub fn confusion(actual: &[usize], predicted: &[usize], n_classes: usize) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(GravityError::DimensionMismatch(alloc::format!(
            "{} actual labels, {} predicted",
            actual.len(),
            predicted.len()
        )));
    }
    if actual.is_empty() {
        return Err(GravityError::TooFewObservations { needed: 1, got: 0 });
    }
    let size = actual.iter().chain(predicted).map(|&l| l + 1).max().unwrap_or(0).max(n_classes);
    let mut counts = vec![vec![0usize; size]; size];
    for (&a, &p) in actual.iter().zip(predicted) {
        counts[a][p] += 1;
    }
    let hits: usize = (0..size).map(|c| counts[c][c]).sum();
    Ok(ConfusionMatrix { counts, accuracy: hits as f64 / actual.len() as f64 })
}
